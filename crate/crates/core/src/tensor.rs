//! Dense complex tensors with an explicit scalar factor.
//!
//! The represented value is `scalar * data`, with `data` stored row-major.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par;

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("data length {len} does not match shape {shape:?}")]
    LengthMismatch { shape: Vec<usize>, len: usize },
    #[error("shapes differ: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),
    #[error("scalar factor is NaN")]
    NanScalar,
    #[error("tensor of shape {0:?} does not reshape to a square matrix")]
    NotSquare(Vec<usize>),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("zero norm")]
    ZeroNorm,
    #[error("trace is not positive")]
    NonPositiveTrace,
    #[error("malformed tensor json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<C64>,
    scalar: C64,
}

/// Matrix products below this many multiply-adds stay on one thread.
const PAR_MATMUL_WORK: usize = 1 << 16;

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<C64>) -> Result<Self, TensorError> {
        let len: usize = shape.iter().product();
        if len != data.len() {
            return Err(TensorError::LengthMismatch {
                shape,
                len: data.len(),
            });
        }
        Ok(Self {
            shape,
            data,
            scalar: C64::new(1.0, 0.0),
        })
    }

    pub fn from_real(shape: Vec<usize>, data: &[f64]) -> Result<Self, TensorError> {
        Self::new(shape, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn scalar(value: C64) -> Self {
        Self {
            shape: Vec::new(),
            data: vec![C64::new(1.0, 0.0)],
            scalar: value,
        }
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Self {
            shape,
            data: vec![C64::new(0.0, 0.0); len],
            scalar: C64::new(1.0, 0.0),
        }
    }

    /// `d × d` identity.
    pub fn identity(d: usize) -> Self {
        let mut t = Self::zeros(vec![d, d]);
        for i in 0..d {
            t.data[i * d + i] = C64::new(1.0, 0.0);
        }
        t
    }

    /// Rank-`k` tensor that is 1 where all indices agree and 0 elsewhere.
    pub fn delta(d: usize, k: usize) -> Self {
        let mut t = Self::zeros(vec![d; k]);
        if k == 0 {
            t.data[0] = C64::new(1.0, 0.0);
            return t;
        }
        let step: usize = (0..k).map(|i| d.pow(i as u32)).sum();
        for i in 0..d {
            t.data[i * step] = C64::new(1.0, 0.0);
        }
        t
    }

    pub fn with_scalar(mut self, scalar: C64) -> Result<Self, TensorError> {
        if scalar.re.is_nan() || scalar.im.is_nan() {
            return Err(TensorError::NanScalar);
        }
        self.scalar = scalar;
        Ok(self)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Raw stored data, not multiplied by the scalar.
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn scalar_factor(&self) -> C64 {
        self.scalar
    }

    /// Entries of the represented value (`scalar * data`).
    pub fn values(&self) -> Vec<C64> {
        self.data.iter().map(|&x| x * self.scalar).collect()
    }

    /// Same value with the scalar multiplied into the data.
    pub fn folded(&self) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            data: self.values(),
            scalar: C64::new(1.0, 0.0),
        }
    }

    pub fn get(&self, index: &[usize]) -> C64 {
        debug_assert_eq!(index.len(), self.shape.len());
        let mut flat = 0;
        for (i, d) in index.iter().zip(&self.shape) {
            flat = flat * d + i;
        }
        self.data[flat] * self.scalar
    }

    pub fn reshape(&self, shape: Vec<usize>) -> Result<Tensor, TensorError> {
        let len: usize = shape.iter().product();
        if len != self.data.len() {
            return Err(TensorError::LengthMismatch {
                shape,
                len: self.data.len(),
            });
        }
        Ok(Tensor {
            shape,
            data: self.data.clone(),
            scalar: self.scalar,
        })
    }

    pub fn conj(&self) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|x| x.conj()).collect(),
            scalar: self.scalar.conj(),
        }
    }

    pub fn scale(&self, c: C64) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.clone(),
            scalar: self.scalar * c,
        }
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() * self.scalar.norm()
    }

    /// `⟨self, other⟩ = Σ conj(self_i) other_i`.
    pub fn inner(&self, other: &Tensor) -> Result<C64, TensorError> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch(
                self.shape.clone(),
                other.shape.clone(),
            ));
        }
        let raw: C64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(raw * self.scalar.conj() * other.scalar)
    }

    /// `‖self − other‖ / max(‖self‖, ‖other‖)`, or the absolute difference
    /// when both are (numerically) zero.
    pub fn rel_diff(&self, other: &Tensor) -> Result<f64, TensorError> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch(
                self.shape.clone(),
                other.shape.clone(),
            ));
        }
        let diff = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a * self.scalar - b * other.scalar).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let scale = self.norm().max(other.norm());
        Ok(if scale > 1e-300 { diff / scale } else { diff })
    }

    pub fn approx_eq(&self, other: &Tensor, tol: f64) -> bool {
        self.rel_diff(other).is_ok_and(|d| d <= tol)
    }

    /// Best complex `c` with `self ≈ c · other` and the residual relative error.
    pub fn proportionality(&self, other: &Tensor) -> Result<(C64, f64), TensorError> {
        let oo = other.inner(other)?;
        if oo.norm() <= 1e-300 {
            let e = if self.norm() <= 1e-300 { 0.0 } else { 1.0 };
            return Ok((C64::new(0.0, 0.0), e));
        }
        let c = other.inner(self)? / oo;
        let err = self.rel_diff(&other.scale(c))?;
        Ok((c, err))
    }

    /// Moves axis `perm[k]` of `self` to position `k`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        debug_assert_eq!(perm.len(), self.shape.len());
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return self.clone();
        }
        let shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let strides = strides(&self.shape);
        let src_strides: Vec<usize> = perm.iter().map(|&p| strides[p]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut idx = vec![0usize; shape.len()];
        let mut offset = 0usize;
        for _ in 0..self.data.len() {
            data.push(self.data[offset]);
            for ax in (0..shape.len()).rev() {
                idx[ax] += 1;
                offset += src_strides[ax];
                if idx[ax] < shape[ax] {
                    break;
                }
                offset -= src_strides[ax] * shape[ax];
                idx[ax] = 0;
            }
        }
        Tensor {
            shape,
            data,
            scalar: self.scalar,
        }
    }

    /// Contracts `axes_a` of `a` against `axes_b` of `b` pairwise. Result axes
    /// are the free axes of `a` in order followed by the free axes of `b`.
    pub fn tensordot(
        a: &Tensor,
        axes_a: &[usize],
        b: &Tensor,
        axes_b: &[usize],
    ) -> Result<Tensor, TensorError> {
        for (&i, &j) in axes_a.iter().zip(axes_b) {
            if a.shape[i] != b.shape[j] {
                return Err(TensorError::ShapeMismatch(a.shape.clone(), b.shape.clone()));
            }
        }
        let free_a: Vec<usize> = (0..a.rank()).filter(|i| !axes_a.contains(i)).collect();
        let free_b: Vec<usize> = (0..b.rank()).filter(|i| !axes_b.contains(i)).collect();
        let perm_a: Vec<usize> = free_a.iter().chain(axes_a).copied().collect();
        let perm_b: Vec<usize> = axes_b.iter().chain(&free_b).copied().collect();
        let ap = a.permute(&perm_a);
        let bp = b.permute(&perm_b);
        let rows: usize = free_a.iter().map(|&i| a.shape[i]).product();
        let inner: usize = axes_a.iter().map(|&i| a.shape[i]).product();
        let cols: usize = free_b.iter().map(|&i| b.shape[i]).product();

        let mut data = vec![C64::new(0.0, 0.0); rows * cols];
        let parallel = rows > 1 && rows * inner * cols >= PAR_MATMUL_WORK;
        par::for_each_row(&mut data, cols, parallel, |r, out| {
            let arow = &ap.data[r * inner..(r + 1) * inner];
            for (k, &x) in arow.iter().enumerate() {
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                let brow = &bp.data[k * cols..(k + 1) * cols];
                for (o, &y) in out.iter_mut().zip(brow) {
                    *o += x * y;
                }
            }
        });
        let shape = free_a
            .iter()
            .map(|&i| a.shape[i])
            .chain(free_b.iter().map(|&i| b.shape[i]))
            .collect();
        Ok(Tensor {
            shape,
            data,
            scalar: a.scalar * b.scalar,
        })
    }

    /// Kronecker/outer product: axes of `self` then axes of `other`.
    pub fn outer(&self, other: &Tensor) -> Tensor {
        Tensor::tensordot(self, &[], other, &[]).expect("no contracted axes")
    }

    /// Reads the value as a matrix whose rows are the first `row_axes` axes.
    pub fn to_matrix(&self, row_axes: usize) -> DMatrix<C64> {
        let rows: usize = self.shape[..row_axes].iter().product();
        let cols: usize = self.shape[row_axes..].iter().product();
        let vals = self.values();
        DMatrix::from_fn(rows, cols, |r, c| vals[r * cols + c])
    }

    /// Square matrix view: first half of the axes index rows, second half columns.
    pub fn to_square_matrix(&self) -> Result<DMatrix<C64>, TensorError> {
        let r = self.rank();
        let (rows, cols): (usize, usize) = if r.is_multiple_of(2) {
            (
                self.shape[..r / 2].iter().product(),
                self.shape[r / 2..].iter().product(),
            )
        } else {
            (0, 1)
        };
        if rows != cols {
            // Also accept a flat vector whose length is a perfect square.
            if r == 1 {
                let d = (self.shape[0] as f64).sqrt().round() as usize;
                if d * d == self.shape[0] {
                    return Ok(self.reshape(vec![d, d])?.to_matrix(1));
                }
            }
            return Err(TensorError::NotSquare(self.shape.clone()));
        }
        Ok(self.to_matrix(r / 2))
    }

    pub fn from_matrix(m: &DMatrix<C64>) -> Tensor {
        let (r, c) = m.shape();
        let data = (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)])
            .collect();
        Tensor {
            shape: vec![r, c],
            data,
            scalar: C64::new(1.0, 0.0),
        }
    }

    /// For a tensor on doubled wires `[w0, w̄0, w1, w̄1, …]`, reorders the axes
    /// to `[w0, w1, …, w̄0, w̄1, …]` so that it reads as a density matrix.
    pub fn deinterleave(&self) -> Tensor {
        let k = self.rank() / 2;
        let perm: Vec<usize> = (0..k)
            .map(|i| 2 * i)
            .chain((0..k).map(|i| 2 * i + 1))
            .collect();
        self.permute(&perm)
    }
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

/// `{"shape":[...], "data":[[re,im],...], "scalar":[re,im]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    pub shape: Vec<usize>,
    pub data: Vec<[f64; 2]>,
    #[serde(default = "unit_pair")]
    pub scalar: [f64; 2],
}

fn unit_pair() -> [f64; 2] {
    [1.0, 0.0]
}

impl From<&Tensor> for TensorJson {
    fn from(t: &Tensor) -> Self {
        TensorJson {
            shape: t.shape.clone(),
            data: t.data.iter().map(|c| [c.re, c.im]).collect(),
            scalar: [t.scalar.re, t.scalar.im],
        }
    }
}

impl TryFrom<TensorJson> for Tensor {
    type Error = TensorError;

    fn try_from(j: TensorJson) -> Result<Self, Self::Error> {
        Tensor::new(
            j.shape,
            j.data
                .into_iter()
                .map(|[re, im]| C64::new(re, im))
                .collect(),
        )?
        .with_scalar(C64::new(j.scalar[0], j.scalar[1]))
    }
}

impl Serialize for Tensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TensorJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Tensor::try_from(TensorJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
