//! Seeded sampling of payloads, states, unitaries and whole diagrams.
//!
//! Everything here is driven by `ChaCha8Rng` so runs are reproducible from a
//! single `u64` seed.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::diagram::{compose_par, compose_seq, Diagram, Generator};
use crate::tensor::{Tensor, C64};
use crate::types::{Signature, TypeList, WireType};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator determined by `(seed, key)`; distinct keys give independent streams.
pub fn rng_for(seed: u64, key: &str) -> SeededRng {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h.rotate_left(17))
}

pub fn complex_normal(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Tensor with independent standard complex Gaussian entries.
pub fn complex_tensor(shape: Vec<usize>, rng: &mut impl Rng) -> Tensor {
    let len = shape.iter().product();
    let data = (0..len).map(|_| complex_normal(rng)).collect();
    Tensor::new(shape, data).expect("length matches shape")
}

/// Tensor with real entries uniform in `[-1, 1)`.
pub fn real_tensor(shape: Vec<usize>, rng: &mut impl Rng) -> Tensor {
    let len = shape.iter().product();
    let data: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
    Tensor::from_real(shape, &data).expect("length matches shape")
}

/// Unit vector in `C^d`, uniformly distributed.
pub fn state_vector(d: usize, rng: &mut impl Rng) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| complex_normal(rng)).collect();
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Random `d × d` unitary from the QR decomposition of a Gaussian matrix.
pub fn unitary(d: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| complex_normal(rng));
    g.qr().q()
}

/// Samples random well-typed diagrams by stacking layers of the form
/// `id ⊗ generator ⊗ id`. Every generator kind can appear, and snake and
/// swap-swap redexes are planted on purpose so normalization has work to do.
#[derive(Debug, Clone)]
pub struct DiagramSampler {
    pub bases: Vec<String>,
    /// Adjoint orders are drawn from `-max_order..=max_order`.
    pub max_order: i32,
    /// Soft cap on the number of open wires between layers.
    pub max_wires: usize,
    /// Box names are drawn from this many distinct labels.
    pub box_labels: usize,
}

impl Default for DiagramSampler {
    fn default() -> Self {
        Self {
            bases: vec!["a".into(), "b".into()],
            max_order: 1,
            max_wires: 5,
            box_labels: 4,
        }
    }
}

impl DiagramSampler {
    pub fn signature(&self) -> Signature {
        Signature::new(self.bases.iter().cloned())
    }

    pub fn wire(&self, rng: &mut impl Rng) -> WireType {
        let base = &self.bases[rng.random_range(0..self.bases.len())];
        WireType::new(
            base.clone(),
            rng.random_range(-self.max_order..=self.max_order),
        )
    }

    pub fn types(&self, rng: &mut impl Rng, len: usize) -> TypeList {
        (0..len).map(|_| self.wire(rng)).collect()
    }

    /// A single box with the given domain and a random codomain.
    pub fn boxed(&self, rng: &mut impl Rng, dom: &TypeList) -> Diagram {
        let cod_len = rng.random_range(0..=2usize);
        let cod = self.types(rng, cod_len);
        self.named_box(rng, dom.clone(), cod)
    }

    fn named_box(&self, rng: &mut impl Rng, dom: TypeList, cod: TypeList) -> Diagram {
        let label = rng.random_range(0..self.box_labels.max(1));
        // Payload keys include the type so equally named boxes of different
        // shapes never share a tensor.
        let name = format!("f{label}");
        let key = format!("{name}:{dom}->{cod}");
        Diagram::from_generator(
            &self.signature(),
            Generator::boxed(name, dom, cod, Some(key)),
        )
    }

    /// Random diagram with the given inputs and exactly `nodes` nodes.
    pub fn sample(&self, rng: &mut impl Rng, inputs: &TypeList, nodes: usize) -> Diagram {
        let sig = self.signature();
        let mut d = Diagram::identity(inputs);
        while d.node_count() < nodes {
            let room = nodes - d.node_count();
            let wires = d.outputs().clone();
            let layer = self.layer(rng, &sig, &wires, room);
            d = compose_seq(&d, &layer).expect("layer domain matches outputs");
        }
        d
    }

    fn layer(&self, rng: &mut impl Rng, sig: &Signature, wires: &TypeList, room: usize) -> Diagram {
        let n = wires.len();
        let crowded = n >= self.max_wires;
        loop {
            let choice = rng.random_range(0..9u32);
            let built: Option<(usize, usize, Diagram)> = match choice {
                // box on a contiguous slice
                0 | 1 => {
                    let k = rng.random_range(0..=n.min(2));
                    let at = rng.random_range(0..=n - k);
                    let dom: TypeList = wires.0[at..at + k].to_vec().into();
                    let mut cod_len = rng.random_range(0..=2usize);
                    if crowded {
                        cod_len = cod_len.min(k.saturating_sub(1));
                    }
                    let cod = self.types(rng, cod_len);
                    Some((at, k, self.named_box(rng, dom, cod)))
                }
                2 if !crowded || n < self.max_wires + 1 => {
                    let at = rng.random_range(0..=n);
                    let w = self.wire(rng);
                    Some((
                        at,
                        0,
                        Diagram::from_generator(sig, Generator::cup(&w.base, w.order)),
                    ))
                }
                3 => (0..n.saturating_sub(1))
                    .filter(|&i| wires[i].cancels_with(&wires[i + 1]))
                    .nth(0)
                    .map(|i| {
                        (
                            i,
                            2,
                            Diagram::from_generator(
                                sig,
                                Generator::cap(&wires[i].base, wires[i].order),
                            ),
                        )
                    }),
                4 if n >= 2 => {
                    let i = rng.random_range(0..n - 1);
                    let g = Generator::swap(wires[i].clone(), wires[i + 1].clone());
                    Some((i, 2, Diagram::from_generator(sig, g)))
                }
                5 => {
                    let base = &self.bases[rng.random_range(0..self.bases.len())];
                    let plain = WireType::plain(base.clone());
                    let runs: Vec<usize> = (0..n).filter(|&i| wires[i] == plain).collect();
                    let (at, k): (usize, usize) = match runs.first() {
                        Some(&i) if rng.random_bool(0.7) => {
                            let k = if i + 1 < n && wires[i + 1] == plain {
                                2
                            } else {
                                1
                            };
                            (i, k)
                        }
                        _ => (rng.random_range(0..=n), 0),
                    };
                    let mut m = rng.random_range(0..=2usize);
                    if crowded {
                        m = m.min(k.saturating_sub(1));
                    }
                    if k + m == 0 {
                        None
                    } else {
                        Some((
                            at,
                            k,
                            Diagram::from_generator(sig, Generator::spider(base, k, m)),
                        ))
                    }
                }
                6 if n >= 1 => {
                    let i = rng.random_range(0..n);
                    Some((
                        i,
                        1,
                        Diagram::from_generator(sig, Generator::identity(wires[i].clone())),
                    ))
                }
                // planted snake on wire i, either chirality
                7 if n >= 1 && room >= 2 => {
                    let i = rng.random_range(0..n);
                    let w = &wires[i];
                    let snake = if rng.random_bool(0.5) {
                        crate::diagram::snake(sig, &w.base, w.order)
                    } else {
                        crate::diagram::snake_mirror(sig, &w.base, w.order - 1)
                    };
                    Some((i, 1, snake.expect("sampler bases are declared")))
                }
                // planted swap pair
                8 if n >= 2 && room >= 2 => {
                    let i = rng.random_range(0..n - 1);
                    let s1 = Generator::swap(wires[i].clone(), wires[i + 1].clone());
                    let s2 = Generator::swap(wires[i + 1].clone(), wires[i].clone());
                    let pair = compose_seq(
                        &Diagram::from_generator(sig, s1),
                        &Diagram::from_generator(sig, s2),
                    )
                    .expect("swap types line up");
                    Some((i, 2, pair))
                }
                _ => None,
            };
            let Some((at, k, g)) = built else { continue };
            if g.node_count() > room {
                continue;
            }
            let left = Diagram::identity(&wires.0[..at].to_vec().into());
            let right = Diagram::identity(&wires.0[at + k..].to_vec().into());
            return compose_par(&compose_par(&left, &g), &right);
        }
    }
}
