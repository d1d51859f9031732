//! Post-selected teleportation and its multi-state variant.
//!
//! For dimension `d` and branch `b = p·d + q` the Bell effect is the cap
//! preceded by `P_b⁻¹` on the input wire, where `P_b = X^p Z^q` is a
//! clock-and-shift Pauli. Straightening the cup-cap zig-zag leaves
//! `P_b⁻¹` on the teleported wire with an overall factor `1/d`; the
//! correction `P_b` undoes it.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramBuilder, DiagramError, Generator, Src};
use crate::par::{self, Execution};
use crate::random;
use crate::rewrite::{equal, EqualityMode, RewriteError, SemanticCheck};
use crate::semantics::{evaluate, EvalError, Model};
use crate::tensor::{Tensor, C64};
use crate::types::{Signature, TypeList, WireType};

pub const QUDIT: &str = "q";
const NORM_KEY: &str = "bell_norm";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("dimension must be at least {min}, got {dim}")]
    BadDimension { dim: usize, min: usize },
    #[error("branch {branch} out of range for dimension {dim}")]
    BadBranch { branch: usize, dim: usize },
    #[error("need at least one trial")]
    NoTrials,
    #[error("branch {branch} fails verification (deviation {deviation:e})")]
    VerificationFailure { branch: usize, deviation: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TeleportationSpec {
    pub dim: usize,
    pub branch: usize,
    pub corrected: bool,
    /// Branch whose Pauli is applied as the correction; normally `branch`.
    pub correction: usize,
}

impl TeleportationSpec {
    pub fn new(dim: usize, branch: usize, corrected: bool) -> Result<Self, ProtocolError> {
        if dim < 2 {
            return Err(ProtocolError::BadDimension { dim, min: 2 });
        }
        if branch >= dim * dim {
            return Err(ProtocolError::BadBranch { branch, dim });
        }
        Ok(Self {
            dim,
            branch,
            corrected,
            correction: branch,
        })
    }

    pub fn with_correction(mut self, branch: usize) -> Result<Self, ProtocolError> {
        if branch >= self.dim * self.dim {
            return Err(ProtocolError::BadBranch {
                branch,
                dim: self.dim,
            });
        }
        self.correction = branch;
        Ok(self)
    }
}

/// `X^p Z^q` with `X|j⟩ = |j+1⟩`, `Z|j⟩ = ω^j |j⟩`.
pub fn pauli(d: usize, branch: usize) -> DMatrix<C64> {
    let (p, q) = (branch / d, branch % d);
    let omega = |k: usize| C64::from_polar(1.0, 2.0 * PI * (k % d) as f64 / d as f64);
    DMatrix::from_fn(d, d, |r, c| {
        if r == (c + p) % d {
            omega(c * q)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Box tensor `(in, out)` that acts as the matrix `m` on column vectors.
fn operator_payload(m: &DMatrix<C64>) -> Tensor {
    Tensor::from_matrix(&m.transpose())
}

fn pauli_key(b: usize) -> String {
    format!("pauli_{b}")
}

fn pauli_inv_key(b: usize) -> String {
    format!("pauli_inv_{b}")
}

/// Dimension of `q` plus every Pauli, inverse Pauli and the Bell normalization.
pub fn teleportation_model(d: usize) -> Model {
    let mut m = Model::new([(QUDIT, d)]);
    for b in 0..d * d {
        let p = pauli(d, b);
        m.insert_payload(pauli_key(b), operator_payload(&p));
        m.insert_payload(pauli_inv_key(b), operator_payload(&p.adjoint()));
    }
    let s = Tensor::scalar(C64::new(1.0 / (d as f64).sqrt(), 0.0));
    m.insert_payload(NORM_KEY, s);
    m
}

fn qudit() -> WireType {
    WireType::plain(QUDIT)
}

/// Input wire ⊗ normalized cup, Bell effect for the branch on the first two
/// wires, then the optional correction on the surviving wire.
pub fn teleportation_diagram(spec: &TeleportationSpec) -> Result<Diagram, ProtocolError> {
    let sig = Signature::new([QUDIT]);
    let q = TypeList(vec![qudit()]);
    let mut b = DiagramBuilder::new(&sig, q.clone());
    let input = b.input_srcs()[0];
    // each half of the 1/d factor sits on the Bell state and the Bell effect
    for _ in 0..2 {
        b.apply(
            Generator::boxed(
                "norm",
                TypeList::unit(),
                TypeList::unit(),
                Some(NORM_KEY.into()),
            ),
            &[],
        );
    }
    let legs = b.apply(Generator::cup(QUDIT, 0), &[]);
    let unrotated = b.apply(
        Generator::boxed(
            "P^-1",
            q.clone(),
            q.clone(),
            Some(pauli_inv_key(spec.branch)),
        ),
        &[input],
    )[0];
    b.apply(Generator::cap(QUDIT, 0), &[unrotated, legs[0]]);
    let mut out: Src = legs[1];
    if spec.corrected {
        out = b.apply(
            Generator::boxed("P", q.clone(), q, Some(pauli_key(spec.correction))),
            &[out],
        )[0];
    }
    Ok(b.finish(&[out])?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchReport {
    pub branch: usize,
    /// Worst fidelity of the corrected output with the input over all trials.
    pub fidelity: f64,
    /// Branch probability from the trial furthest from `1/d²`.
    pub probability: f64,
    /// Largest of `1 - fidelity` and `|probability - 1/d²|`.
    pub deviation: f64,
}

#[derive(Debug, Clone)]
pub struct TeleportCheck {
    pub dim: usize,
    pub trials: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub exec: Execution,
    /// Correction branch used for each branch; identity by default.
    pub corrections: Vec<usize>,
}

impl TeleportCheck {
    pub fn new(dim: usize, trials: usize, tolerance: f64, seed: u64) -> Self {
        Self {
            dim,
            trials,
            tolerance,
            seed,
            exec: Execution::Parallel,
            corrections: (0..dim * dim).collect(),
        }
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// Exchanges the corrections applied in branches `a` and `b`.
    pub fn swap_corrections(mut self, a: usize, b: usize) -> Self {
        self.corrections.swap(a, b);
        self
    }

    /// Per-branch reports without judging them.
    pub fn reports(&self) -> Result<Vec<BranchReport>, ProtocolError> {
        let d = self.dim;
        if d < 2 {
            return Err(ProtocolError::BadDimension { dim: d, min: 2 });
        }
        if self.trials == 0 {
            return Err(ProtocolError::NoTrials);
        }
        let base = teleportation_model(d);
        let expected = 1.0 / (d * d) as f64;
        let states: Vec<Tensor> = (0..self.trials)
            .map(|k| {
                let mut rng = random::rng_for(self.seed, &format!("teleport/{d}/{k}"));
                Tensor::new(vec![d], random::state_vector(d, &mut rng)).expect("length d")
            })
            .collect();
        let jobs = d * d * self.trials;
        let results = par::map_range(
            self.exec,
            jobs,
            |job| -> Result<(f64, f64), ProtocolError> {
                let (branch, k) = (job / self.trials, job % self.trials);
                let psi = &states[k];
                let mut model = base.clone();
                model.insert_payload("psi", psi.clone());
                let spec = TeleportationSpec::new(d, branch, true)?
                    .with_correction(self.corrections[branch])?;
                let fed = |s: &TeleportationSpec| -> Result<Tensor, ProtocolError> {
                    let sig = Signature::new([QUDIT]);
                    let state = Diagram::from_generator(
                        &sig,
                        Generator::boxed("psi", TypeList::unit(), TypeList(vec![qudit()]), None),
                    );
                    let d = state.then(&teleportation_diagram(s)?)?;
                    Ok(evaluate(&d, &model)?)
                };
                let corrected = fed(&spec)?;
                let raw = fed(&TeleportationSpec {
                    corrected: false,
                    ..spec
                })?;
                let overlap = psi.inner(&corrected).map_err(EvalError::from)?.norm_sqr();
                let fidelity = overlap / (psi.norm().powi(2) * corrected.norm().powi(2));
                let probability = raw.norm().powi(2) / psi.norm().powi(2);
                Ok((fidelity, probability))
            },
        );
        let mut reports: Vec<BranchReport> = (0..d * d)
            .map(|branch| BranchReport {
                branch,
                fidelity: 1.0,
                probability: expected,
                deviation: 0.0,
            })
            .collect();
        for (job, r) in results.into_iter().enumerate() {
            let (fidelity, probability) = r?;
            let rep = &mut reports[job / self.trials];
            rep.fidelity = rep.fidelity.min(fidelity);
            if (probability - expected).abs() >= (rep.probability - expected).abs() {
                rep.probability = probability;
            }
            rep.deviation = rep
                .deviation
                .max(1.0 - rep.fidelity)
                .max((rep.probability - expected).abs());
        }
        Ok(reports)
    }

    /// Reports for all `d²` branches, or the first branch that fails.
    pub fn run(&self) -> Result<Vec<BranchReport>, ProtocolError> {
        let reports = self.reports()?;
        if let Some(bad) = reports.iter().find(|r| r.deviation > self.tolerance) {
            return Err(ProtocolError::VerificationFailure {
                branch: bad.branch,
                deviation: bad.deviation,
            });
        }
        Ok(reports)
    }
}

pub fn verify_teleportation(
    dim: usize,
    trials: usize,
    tolerance: f64,
    seed: u64,
) -> Result<Vec<BranchReport>, ProtocolError> {
    TeleportCheck::new(dim, trials, tolerance, seed).run()
}

/// Three states `ρ`, `ρ′`, `ρ″` wired through nested cups (one carrying
/// the unitary `π`) and closed by caps, next to its yanked form.
#[derive(Debug, Clone)]
pub struct CompositionDemo {
    pub before: Diagram,
    pub after: Diagram,
    /// Dimension of `q` and the unitary `π`; the states are left to the
    /// semantic check to draw.
    pub model: Model,
}

// flat wires: ρ | cups | cups with π | ρ′ | ρ″
const DEMO_LINKS: [(usize, usize); 6] = [(0, 1), (3, 6), (4, 5), (7, 10), (8, 9), (11, 12)];
const DEMO_OPEN: usize = 2;

fn demo_states(b: &mut DiagramBuilder) -> (Src, Vec<Src>, Src) {
    let w = |z| WireType::new(QUDIT, z);
    let rho = b.apply(
        Generator::boxed("rho", TypeList::unit(), TypeList(vec![w(0)]), None),
        &[],
    )[0];
    let mid = b.apply(
        Generator::boxed(
            "rho'",
            TypeList::unit(),
            TypeList(vec![w(1), w(0), w(-1)]),
            None,
        ),
        &[],
    );
    let last = b.apply(
        Generator::boxed("rho''", TypeList::unit(), TypeList(vec![w(0)]), None),
        &[],
    )[0];
    (rho, mid, last)
}

fn pi_box() -> Generator {
    let q = TypeList(vec![qudit()]);
    Generator::boxed("pi", q.clone(), q, None)
}

/// Builds the demo. With `product_cup`, the outer cup of the first pair is
/// replaced by two independent states, which breaks the equality.
fn demo_before(product_cup: bool) -> Result<Diagram, ProtocolError> {
    let sig = Signature::new([QUDIT]);
    let mut b = DiagramBuilder::new(&sig, TypeList::unit());
    let (rho, mid, last) = demo_states(&mut b);
    let mut flat = vec![rho];
    for with_pi in [false, true] {
        let (l1, r1) = if product_cup && !with_pi {
            let u = b.apply(
                Generator::boxed(
                    "u",
                    TypeList::unit(),
                    TypeList(vec![WireType::new(QUDIT, 1)]),
                    None,
                ),
                &[],
            );
            let v = b.apply(
                Generator::boxed("v", TypeList::unit(), TypeList(vec![qudit()]), None),
                &[],
            );
            (u[0], v[0])
        } else {
            let outer = b.apply(Generator::cup(QUDIT, 0), &[]);
            (outer[0], outer[1])
        };
        let inner = b.apply(Generator::cup(QUDIT, -1), &[]);
        let mut left = inner[0];
        if with_pi {
            left = b.apply(pi_box(), &[left])[0];
        }
        flat.extend([l1, left, inner[1], r1]);
    }
    flat.extend(mid);
    flat.push(last);
    for (i, j) in DEMO_LINKS {
        let z = if matches!(i, 3 | 7 | 11) { -1 } else { 0 };
        b.apply(Generator::cap(QUDIT, z), &[flat[i], flat[j]]);
    }
    Ok(b.finish(&[flat[DEMO_OPEN]])?)
}

fn demo_after() -> Result<Diagram, ProtocolError> {
    let sig = Signature::new([QUDIT]);
    let mut b = DiagramBuilder::new(&sig, TypeList::unit());
    let (rho, mid, last) = demo_states(&mut b);
    b.apply(Generator::cap(QUDIT, 0), &[rho, mid[0]]);
    b.apply(Generator::cap(QUDIT, -1), &[mid[2], last]);
    let out = b.apply(pi_box(), &[mid[1]])[0];
    Ok(b.finish(&[out])?)
}

pub fn sophisticated_composition_demo(
    dim: usize,
    seed: u64,
) -> Result<CompositionDemo, ProtocolError> {
    if dim < 1 {
        return Err(ProtocolError::BadDimension { dim, min: 1 });
    }
    let u = random::unitary(dim, &mut random::rng_for(seed, "pi"));
    let model = Model::new([(QUDIT, dim)]).with_payload("pi", operator_payload(&u));
    Ok(CompositionDemo {
        before: demo_before(false)?,
        after: demo_after()?,
        model,
    })
}

/// The demo with one cup swapped for a product of two states.
pub fn product_state_control(dim: usize, seed: u64) -> Result<CompositionDemo, ProtocolError> {
    let mut demo = sophisticated_composition_demo(dim, seed)?;
    demo.before = demo_before(true)?;
    Ok(demo)
}

impl CompositionDemo {
    /// Semantic equality of the two forms under seeded random states.
    pub fn holds(&self, seed: u64, tolerance: f64, trials: usize) -> Result<bool, ProtocolError> {
        let check = SemanticCheck::new(self.model.clone(), seed)
            .with_tolerance(tolerance)
            .with_trials(trials);
        Ok(equal(
            &self.before,
            &self.after,
            &EqualityMode::Semantic(check),
        )?)
    }
}
