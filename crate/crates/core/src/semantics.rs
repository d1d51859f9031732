//! Tensor semantics of diagrams.
//!
//! Every wire of base `b` (any adjoint order) becomes an index of dimension
//! `dims[b]`. Cups, caps and identities are identity matrices, swaps permute
//! indices, and a spider with `k` legs is the rank-`k` Kronecker delta. Boxes
//! read their tensors from the model's payload table. Internal edges are
//! summed out by pairwise contraction, greedily picking the pair with the
//! smallest intermediate result.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::diagram::{Diagram, Dst, Edge, Generator, GeneratorKind, PayloadMode, Src, Violation};
use crate::random;
use crate::tensor::{Tensor, TensorError, C64};
use crate::types::{TypeList, WireType};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("diagram does not validate: {0:?}")]
    InvalidDiagram(Vec<Violation>),
    #[error("no payload for `{0}`")]
    MissingPayload(String),
    #[error("payload `{key}` has shape {found:?}, wires need {expected:?}")]
    DimensionMismatch {
        key: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("no dimension for base `{0}`")]
    MissingDimension(String),
    #[error("box `{0}` carries a mixed payload on thin wires; double the diagram first")]
    MixedOnThinWires(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Doubling {
    #[default]
    Thin,
    Thick,
}

/// Dimensions per base plus payload tensors per reference.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Model {
    dims: BTreeMap<String, usize>,
    payloads: BTreeMap<String, Tensor>,
    doubling: Doubling,
}

impl Model {
    pub fn new<I, S>(dims: I) -> Self
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        Self {
            dims: dims.into_iter().map(|(b, d)| (b.into(), d)).collect(),
            payloads: BTreeMap::new(),
            doubling: Doubling::Thin,
        }
    }

    /// Every base in `bases` gets dimension `d`.
    pub fn uniform<'a>(bases: impl IntoIterator<Item = &'a String>, d: usize) -> Self {
        Self::new(bases.into_iter().map(|b| (b.clone(), d)))
    }

    pub fn with_payload(mut self, key: impl Into<String>, t: Tensor) -> Self {
        self.payloads.insert(key.into(), t);
        self
    }

    pub fn insert_payload(&mut self, key: impl Into<String>, t: Tensor) {
        self.payloads.insert(key.into(), t);
    }

    pub fn with_doubling(mut self, doubling: Doubling) -> Self {
        self.doubling = doubling;
        self
    }

    pub fn doubling(&self) -> Doubling {
        self.doubling
    }

    pub fn dims(&self) -> &BTreeMap<String, usize> {
        &self.dims
    }

    pub fn payloads(&self) -> &BTreeMap<String, Tensor> {
        &self.payloads
    }

    pub fn payload(&self, key: &str) -> Option<&Tensor> {
        self.payloads.get(key)
    }

    pub fn dim(&self, base: &str) -> Result<usize, EvalError> {
        self.dims
            .get(base)
            .copied()
            .ok_or_else(|| EvalError::MissingDimension(base.to_string()))
    }

    pub fn shape_of(&self, wires: &TypeList) -> Result<Vec<usize>, EvalError> {
        wires.iter().map(|w| self.dim(&w.base)).collect()
    }

    /// Adds a seeded random payload for every pure box of `d` whose payload
    /// is not already present. The tensor for a key depends only on
    /// `(seed, key)`.
    pub fn fill_random_payloads(&mut self, d: &Diagram, seed: u64) -> Result<(), EvalError> {
        for g in d.nodes() {
            if !g.is(GeneratorKind::Box) || self.payloads.contains_key(g.payload_key()) {
                continue;
            }
            if matches!(g.mode(), PayloadMode::Pure | PayloadMode::Conjugate) {
                let shape = self.shape_of(&g.dom().concat(g.cod()))?;
                let mut rng = random::rng_for(seed, g.payload_key());
                self.payloads.insert(
                    g.payload_key().to_string(),
                    random::complex_tensor(shape, &mut rng),
                );
            }
        }
        Ok(())
    }
}

fn node_tensor(g: &Generator, model: &Model) -> Result<Tensor, EvalError> {
    let dim = |w: &WireType| model.dim(&w.base);
    Ok(match g.kind() {
        GeneratorKind::Cup => Tensor::identity(dim(&g.cod()[0])?),
        GeneratorKind::Cap | GeneratorKind::Identity => Tensor::identity(dim(&g.dom()[0])?),
        GeneratorKind::Swap => {
            let du = dim(&g.dom()[0])?;
            let dv = dim(&g.dom()[1])?;
            // axes: in u, in v, out v, out u
            let mut t = vec![C64::new(0.0, 0.0); du * dv * dv * du];
            for a in 0..du {
                for b in 0..dv {
                    t[((a * dv + b) * dv + b) * du + a] = C64::new(1.0, 0.0);
                }
            }
            Tensor::new(vec![du, dv, dv, du], t)?
        }
        GeneratorKind::Spider => {
            let w = g
                .dom()
                .iter()
                .chain(g.cod().iter())
                .next()
                .expect("spider has legs");
            Tensor::delta(dim(w)?, g.dom().len() + g.cod().len())
        }
        GeneratorKind::Box => {
            let key = g.payload_key();
            if g.mode() == PayloadMode::Mixed {
                return Err(EvalError::MixedOnThinWires(g.name().to_string()));
            }
            let p = model
                .payload(key)
                .ok_or_else(|| EvalError::MissingPayload(key.to_string()))?;
            let expected = model.shape_of(&g.dom().concat(g.cod()))?;
            let p = if p.shape() == expected.as_slice() {
                p.clone()
            } else if p.len() == expected.iter().product::<usize>() && p.rank() <= 1 {
                // flat data is accepted and read row-major
                p.reshape(expected.clone())?
            } else {
                return Err(EvalError::DimensionMismatch {
                    key: key.to_string(),
                    expected,
                    found: p.shape().to_vec(),
                });
            };
            if g.mode() == PayloadMode::Conjugate {
                p.conj()
            } else {
                p
            }
        }
    })
}

struct Net {
    tensors: Vec<(Tensor, Vec<usize>)>,
    dims: Vec<usize>,
}

/// Evaluates `d` to a tensor whose axes are the open inputs then the open
/// outputs. A thick model evaluates `double(d)` instead.
pub fn evaluate(d: &Diagram, model: &Model) -> Result<Tensor, EvalError> {
    let violations = d.validate();
    if !violations.is_empty() {
        return Err(EvalError::InvalidDiagram(violations));
    }
    if model.doubling == Doubling::Thick {
        let thin = Model {
            doubling: Doubling::Thin,
            ..model.clone()
        };
        return evaluate(&double(d), &thin);
    }
    let (mut net, open) = build_network(d, model)?;
    let (t, labels) = contract_all(&mut net);
    let perm: Vec<usize> = open
        .iter()
        .map(|l| {
            labels
                .iter()
                .position(|x| x == l)
                .expect("open label survives contraction")
        })
        .collect();
    Ok(t.permute(&perm))
}

fn build_network(d: &Diagram, model: &Model) -> Result<(Net, Vec<usize>), EvalError> {
    let mut dims = Vec::new();
    let fresh = |dim: usize, dims: &mut Vec<usize>| {
        dims.push(dim);
        dims.len() - 1
    };
    let mut in_labels: Vec<Vec<usize>> = d.nodes().iter().map(|g| vec![0; g.dom().len()]).collect();
    let mut out_labels: Vec<Vec<usize>> =
        d.nodes().iter().map(|g| vec![0; g.cod().len()]).collect();
    let mut open_in = vec![0usize; d.inputs().len()];
    let mut open_out = vec![0usize; d.outputs().len()];
    let mut tensors = Vec::new();

    for &Edge { src, dst } in d.edges() {
        let w = d.src_type(src).expect("validated");
        let dim = model.dim(&w.base)?;
        if let (Src::Input(i), Dst::Output(j)) = (src, dst) {
            let a = fresh(dim, &mut dims);
            let b = fresh(dim, &mut dims);
            open_in[i] = a;
            open_out[j] = b;
            tensors.push((Tensor::identity(dim), vec![a, b]));
            continue;
        }
        let l = fresh(dim, &mut dims);
        match src {
            Src::Input(i) => open_in[i] = l,
            Src::Node(n, p) => out_labels[n][p] = l,
        }
        match dst {
            Dst::Output(j) => open_out[j] = l,
            Dst::Node(n, p) => in_labels[n][p] = l,
        }
    }
    for (n, g) in d.nodes().iter().enumerate() {
        let labels = in_labels[n].iter().chain(&out_labels[n]).copied().collect();
        tensors.push((node_tensor(g, model)?, labels));
    }
    let open = open_in.into_iter().chain(open_out).collect();
    Ok((Net { tensors, dims }, open))
}

fn contract_all(net: &mut Net) -> (Tensor, Vec<usize>) {
    if net.tensors.is_empty() {
        return (Tensor::scalar(C64::new(1.0, 0.0)), Vec::new());
    }
    while net.tensors.len() > 1 {
        let (i, j) = pick_pair(net);
        let (b, lb) = net.tensors.remove(j);
        let (a, la) = net.tensors.remove(i);
        let merged = contract_pair(&a, &la, &b, &lb);
        net.tensors.insert(i, merged);
    }
    net.tensors.pop().expect("one tensor left")
}

/// Pair whose contraction result is smallest; pairs sharing an index are
/// preferred over outer products. Ties go to the lexicographically first pair.
fn pick_pair(net: &Net) -> (usize, usize) {
    let mut best: Option<((bool, usize), (usize, usize))> = None;
    for i in 0..net.tensors.len() {
        let li: BTreeSet<usize> = net.tensors[i].1.iter().copied().collect();
        for j in (i + 1)..net.tensors.len() {
            let lj: BTreeSet<usize> = net.tensors[j].1.iter().copied().collect();
            let shares = !li.is_disjoint(&lj);
            let size: usize = li.symmetric_difference(&lj).map(|&l| net.dims[l]).product();
            let key = (!shares, size);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, (i, j)));
            }
        }
    }
    best.expect("at least two tensors").1
}

fn contract_pair(a: &Tensor, la: &[usize], b: &Tensor, lb: &[usize]) -> (Tensor, Vec<usize>) {
    let mut axes_a = Vec::new();
    let mut axes_b = Vec::new();
    for (i, l) in la.iter().enumerate() {
        if let Some(j) = lb.iter().position(|x| x == l) {
            axes_a.push(i);
            axes_b.push(j);
        }
    }
    let t = Tensor::tensordot(a, &axes_a, b, &axes_b).expect("labels carry matching dimensions");
    let labels = la
        .iter()
        .enumerate()
        .filter(|(i, _)| !axes_a.contains(i))
        .map(|(_, &l)| l)
        .chain(
            lb.iter()
                .enumerate()
                .filter(|(j, _)| !axes_b.contains(j))
                .map(|(_, &l)| l),
        )
        .collect();
    (t, labels)
}

/// Doubles a diagram: every wire becomes a pair (wire, conjugate wire), laid
/// out interleaved. Each node is copied once as is and once conjugated; a box
/// marked `Mixed` instead becomes a single `Thick` node on the doubled wires.
pub fn double(d: &Diagram) -> Diagram {
    let n = d.nodes().len();
    let double_list =
        |t: &TypeList| -> TypeList { t.iter().flat_map(|w| [w.clone(), w.clone()]).collect() };
    let is_mixed = |g: &Generator| g.is(GeneratorKind::Box) && g.mode() == PayloadMode::Mixed;

    let mut nodes = Vec::with_capacity(2 * n);
    let mut first = vec![0usize; n];
    for (i, g) in d.nodes().iter().enumerate() {
        first[i] = nodes.len();
        if is_mixed(g) {
            nodes.push(Generator::from_raw(
                GeneratorKind::Box,
                g.name().to_string(),
                double_list(g.dom()),
                double_list(g.cod()),
                g.payload().map(str::to_string),
                PayloadMode::Thick,
            ));
        } else {
            nodes.push(g.clone());
        }
    }
    let mut second = vec![None; n];
    for (i, g) in d.nodes().iter().enumerate() {
        if is_mixed(g) {
            continue;
        }
        second[i] = Some(nodes.len());
        let conj = if g.is(GeneratorKind::Box) {
            let mode = match g.mode() {
                PayloadMode::Pure => PayloadMode::Conjugate,
                PayloadMode::Conjugate => PayloadMode::Pure,
                m => m,
            };
            g.clone().with_mode(mode)
        } else {
            g.clone()
        };
        nodes.push(conj);
    }

    let mut edges = Vec::with_capacity(2 * d.edges().len());
    for e in d.edges() {
        for copy in 0..2 {
            let src = match e.src {
                Src::Input(i) => Src::Input(2 * i + copy),
                Src::Node(m, p) => match second[m] {
                    None => Src::Node(first[m], 2 * p + copy),
                    Some(s) => Src::Node(if copy == 0 { first[m] } else { s }, p),
                },
            };
            let dst = match e.dst {
                Dst::Output(j) => Dst::Output(2 * j + copy),
                Dst::Node(m, p) => match second[m] {
                    None => Dst::Node(first[m], 2 * p + copy),
                    Some(s) => Dst::Node(if copy == 0 { first[m] } else { s }, p),
                },
            };
            edges.push(Edge::new(src, dst));
        }
    }
    edges.sort();
    Diagram::from_parts_unchecked(
        d.types().clone(),
        nodes,
        edges,
        double_list(d.inputs()),
        double_list(d.outputs()),
    )
}

/// Von Neumann entropy (bits) of a density-matrix tensor, after normalizing
/// to unit trace. Eigenvalues below `1e-12` count as zero.
pub fn entropy(t: &Tensor) -> Result<f64, TensorError> {
    let m = t.to_square_matrix()?;
    let scale = m
        .iter()
        .map(|x| x.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let dev = (&m - m.adjoint())
        .iter()
        .map(|x| x.norm())
        .fold(0.0f64, f64::max)
        / scale;
    if dev > 1e-9 {
        return Err(TensorError::NotHermitian(dev));
    }
    let tr = m.trace().re;
    if tr <= 0.0 || !tr.is_finite() {
        return Err(TensorError::NonPositiveTrace);
    }
    let h = (&m + m.adjoint()).map(|x| x / (2.0 * tr));
    let eig = h.symmetric_eigenvalues();
    Ok(eig
        .iter()
        .filter(|&&l| l > 1e-12)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimilarityKind {
    Cosine,
    NormalizedOverlap,
}

/// Cosine: `|⟨t1,t2⟩| / (‖t1‖‖t2‖)`. Normalized overlap of density
/// matrices: `Tr(ρ1 ρ2) / (Tr ρ1 · Tr ρ2)`.
pub fn similarity(t1: &Tensor, t2: &Tensor, kind: SimilarityKind) -> Result<f64, TensorError> {
    if t1.shape() != t2.shape() {
        return Err(TensorError::ShapeMismatch(
            t1.shape().to_vec(),
            t2.shape().to_vec(),
        ));
    }
    match kind {
        SimilarityKind::Cosine => {
            let (n1, n2) = (t1.norm(), t2.norm());
            if n1 <= 1e-300 || n2 <= 1e-300 {
                return Err(TensorError::ZeroNorm);
            }
            Ok((t1.inner(t2)?.norm() / (n1 * n2)).min(1.0))
        }
        SimilarityKind::NormalizedOverlap => {
            let a = t1.to_square_matrix()?;
            let b = t2.to_square_matrix()?;
            let (ta, tb) = (a.trace(), b.trace());
            if ta.norm() <= 1e-300 || tb.norm() <= 1e-300 {
                return Err(TensorError::ZeroNorm);
            }
            Ok(((a * b).trace() / (ta * tb)).re)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{
        bend, compose_par, compose_seq, make_generator, snake, snake_mirror, spider, Bend,
    };
    use crate::types::Signature;

    fn sig() -> Signature {
        Signature::new(["n", "s"])
    }

    fn tl(s: &str) -> TypeList {
        s.parse().unwrap()
    }

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn snake_is_identity() {
        let m = Model::new([("n", 3)]);
        for d in [
            snake(&sig(), "n", 0).unwrap(),
            snake_mirror(&sig(), "n", 2).unwrap(),
        ] {
            let t = evaluate(&d, &m).unwrap();
            assert!(t.approx_eq(&Tensor::identity(3), 1e-12));
            assert_eq!(t.scalar_factor(), r(1.0));
        }
    }

    #[test]
    fn circle_is_dimension() {
        let cup = bend(&sig(), "n", 0, Bend::Cup).unwrap();
        let swap =
            crate::diagram::swap(&sig(), "n.L".parse().unwrap(), "n".parse().unwrap()).unwrap();
        let cap = bend(&sig(), "n", 0, Bend::Cap).unwrap();
        let loop_ = compose_seq(&compose_seq(&cup, &swap).unwrap(), &cap).unwrap();
        let t = evaluate(&loop_, &Model::new([("n", 4)])).unwrap();
        assert!((t.get(&[]) - r(4.0)).norm() < 1e-12);
    }

    #[test]
    fn comparison_spider_brute_force() {
        // spider(n, 2, 0) applied to v ⊗ w gives Σ v_i w_i
        let v = [1.0, -2.0, 0.5];
        let w = [3.0, 1.0, 4.0];
        let vs = make_generator(&sig(), "v", TypeList::unit(), tl("n"), None).unwrap();
        let ws = make_generator(&sig(), "w", TypeList::unit(), tl("n"), None).unwrap();
        let d = compose_seq(&compose_par(&vs, &ws), &spider(&sig(), "n", 2, 0).unwrap()).unwrap();
        let m = Model::new([("n", 3)])
            .with_payload("v", Tensor::from_real(vec![3], &v).unwrap())
            .with_payload("w", Tensor::from_real(vec![3], &w).unwrap());
        let t = evaluate(&d, &m).unwrap();
        let mut want = 0.0;
        for i in 0..3 {
            want += v[i] * w[i];
        }
        assert!((t.get(&[]) - r(want)).norm() < 1e-12);
    }

    #[test]
    fn spider_one_one_is_identity() {
        let t = evaluate(&spider(&sig(), "n", 1, 1).unwrap(), &Model::new([("n", 3)])).unwrap();
        assert!(t.approx_eq(&Tensor::identity(3), 0.0));
    }

    #[test]
    fn swap_permutes() {
        let sw = crate::diagram::swap(&sig(), "n".parse().unwrap(), "s".parse().unwrap()).unwrap();
        let t = evaluate(&sw, &Model::new([("n", 2), ("s", 3)])).unwrap();
        assert_eq!(t.shape(), &[2, 3, 3, 2]);
        for a in 0..2 {
            for b in 0..3 {
                for c in 0..3 {
                    for e in 0..2 {
                        let want = if a == e && b == c { 1.0 } else { 0.0 };
                        assert_eq!(t.get(&[a, b, c, e]), r(want));
                    }
                }
            }
        }
    }

    #[test]
    fn errors_reported() {
        let f = make_generator(&sig(), "f", tl("n"), tl("n"), None).unwrap();
        assert_eq!(
            evaluate(&f, &Model::new([("n", 2)])),
            Err(EvalError::MissingPayload("f".into()))
        );
        let m = Model::new([("n", 2)]).with_payload("f", Tensor::identity(3));
        assert!(matches!(
            evaluate(&f, &m),
            Err(EvalError::DimensionMismatch { .. })
        ));
        assert_eq!(
            evaluate(&f, &Model::new([("s", 2)])),
            Err(EvalError::MissingDimension("n".into()))
        );
    }

    #[test]
    fn double_pure_state_is_outer_product() {
        let v = [C64::new(1.0, 1.0), C64::new(0.0, -2.0)];
        let st = make_generator(&sig(), "v", TypeList::unit(), tl("n"), None).unwrap();
        let m = Model::new([("n", 2)]).with_payload("v", Tensor::new(vec![2], v.to_vec()).unwrap());
        let dd = double(&st);
        assert!(dd.validate().is_empty());
        assert_eq!(dd.outputs(), &tl("n n"));
        let t = evaluate(&dd, &m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((t.get(&[i, j]) - v[i] * v[j].conj()).norm() < 1e-12);
            }
        }
        assert!(entropy(&t).unwrap().abs() < 1e-9);
    }

    #[test]
    fn double_snake_is_doubled_identity() {
        let dd = double(&snake(&sig(), "n", 0).unwrap());
        assert!(dd.validate().is_empty());
        let t = evaluate(&dd, &Model::new([("n", 2)])).unwrap();
        let want = Tensor::identity(2)
            .outer(&Tensor::identity(2))
            .permute(&[0, 2, 1, 3]);
        assert!(t.approx_eq(&want, 1e-12));
    }

    #[test]
    fn mixed_box_needs_doubling() {
        let q = Generator::boxed("queen", TypeList::unit(), tl("n"), None)
            .with_mode(PayloadMode::Mixed);
        let d = Diagram::from_generator(&sig(), q);
        let rho = Tensor::identity(2).scale(r(0.5));
        let m = Model::new([("n", 2)]).with_payload("queen", rho.clone());
        assert_eq!(
            evaluate(&d, &m),
            Err(EvalError::MixedOnThinWires("queen".into()))
        );
        let t = evaluate(&double(&d), &m).unwrap();
        assert!(t.approx_eq(&rho, 1e-15));
        let thick = evaluate(&d, &m.clone().with_doubling(Doubling::Thick)).unwrap();
        assert_eq!(thick, t);
        assert!((entropy(&t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_mixtures() {
        for k in 1..=4usize {
            let mut rho = Tensor::zeros(vec![5, 5]);
            let mut data = rho.data().to_vec();
            for i in 0..k {
                data[i * 5 + i] = r(1.0 / k as f64);
            }
            rho = Tensor::new(vec![5, 5], data).unwrap();
            assert!((entropy(&rho).unwrap() - (k as f64).log2()).abs() < 1e-9);
        }
        let not_herm = Tensor::from_real(vec![2, 2], &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            entropy(&not_herm),
            Err(TensorError::NotHermitian(_))
        ));
        assert!(matches!(
            entropy(&Tensor::zeros(vec![2, 3])),
            Err(TensorError::NotSquare(_))
        ));
    }

    #[test]
    fn similarity_cases() {
        let v = Tensor::from_real(vec![3], &[1.0, 2.0, 3.0]).unwrap();
        let w = Tensor::from_real(vec![3], &[3.0, 0.0, -1.0]).unwrap();
        assert!((similarity(&v, &v, SimilarityKind::Cosine).unwrap() - 1.0).abs() < 1e-12);
        assert!(similarity(&v, &w, SimilarityKind::Cosine).unwrap().abs() < 1e-12);
        assert_eq!(
            similarity(&v, &Tensor::zeros(vec![3]), SimilarityKind::Cosine),
            Err(TensorError::ZeroNorm)
        );
        assert!(similarity(&v, &Tensor::zeros(vec![2]), SimilarityKind::Cosine).is_err());
        let rho = Tensor::identity(2).scale(r(0.5));
        let pure = Tensor::from_real(vec![2, 2], &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(
            (similarity(&pure, &pure, SimilarityKind::NormalizedOverlap).unwrap() - 1.0).abs()
                < 1e-12
        );
        assert!(
            (similarity(&rho, &pure, SimilarityKind::NormalizedOverlap).unwrap() - 0.5).abs()
                < 1e-12
        );
    }

    #[test]
    fn random_payloads_are_seeded() {
        let f = make_generator(&sig(), "f", tl("n"), tl("s"), None).unwrap();
        let mut a = Model::new([("n", 2), ("s", 3)]);
        let mut b = a.clone();
        a.fill_random_payloads(&f, 7).unwrap();
        b.fill_random_payloads(&f, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.payload("f").unwrap().shape(), &[2, 3]);
    }
}
