//! Dense complex operators and the small amount of linear algebra the rest of
//! the crate needs.

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Relative Hermiticity tolerance for [`HermitianOperator`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A general square complex operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(Array2<C64>);

impl Operator {
    pub fn new(m: Array2<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        Ok(Self(m))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Array2::eye(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.0
    }

    pub fn dagger(&self) -> Operator {
        Operator(dagger(&self.0))
    }

    pub fn dot(&self, other: &Operator) -> Operator {
        Operator(self.0.dot(&other.0))
    }

    /// Applies the operator to a state vector.
    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        self.0.dot(v)
    }

    /// Induced ∞-norm (max absolute row sum); an upper bound on the spectral
    /// norm.
    pub fn norm(&self) -> f64 {
        norm_inf(&self.0)
    }

    /// Returns the operator as Hermitian if it passes the invariant check.
    pub fn into_hermitian(self) -> Result<HermitianOperator> {
        HermitianOperator::new(self.0)
    }
}

/// Dense Hermitian operator; `max |M − M†| ≤ 1e-12 · max |M|` holds on every
/// value of this type.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(Array2<C64>);

impl HermitianOperator {
    pub fn new(m: Array2<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        let dev = hermiticity_deviation(&m);
        if dev > HERMITIAN_TOL * max_abs(&m) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self(m))
    }

    /// Builds a Hermitian operator from a real diagonal.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut m = Array2::zeros((d, d));
        for (i, &x) in diag.iter().enumerate() {
            m[[i, i]] = C64::new(x, 0.0);
        }
        Self(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Array2::eye(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.0
    }

    pub fn as_operator(&self) -> Operator {
        Operator(self.0.clone())
    }

    pub fn norm(&self) -> f64 {
        norm_inf(&self.0)
    }

    pub fn trace(&self) -> f64 {
        trace(&self.0).re
    }

    /// Real linear combination `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &HermitianOperator, b: f64) -> Result<HermitianOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(Self(&self.0 * C64::new(a, 0.0) + &other.0 * C64::new(b, 0.0)))
    }

    /// `⟨ψ|H|ψ⟩` for a state vector.
    pub fn expectation(&self, psi: &Array1<C64>) -> f64 {
        psi.iter().zip(self.0.dot(psi).iter()).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

impl From<HermitianOperator> for Operator {
    fn from(h: HermitianOperator) -> Self {
        Operator(h.0)
    }
}

pub fn dagger(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

pub fn trace(m: &Array2<C64>) -> C64 {
    m.diag().sum()
}

pub fn max_abs(m: &Array2<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_deviation(m: &Array2<C64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    dev
}

/// Max absolute row sum.
pub fn norm_inf(m: &Array2<C64>) -> f64 {
    m.axis_iter(Axis(0))
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Kronecker product `a ⊗ b`; `a` is the more significant factor.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// `[a, b] = ab − ba`.
pub fn commutator(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    a.dot(b) - b.dot(a)
}

/// Sparse operator in compressed-row form, used where the dense product would
/// dominate the run time (system ⊗ bath Hamiltonians).
#[derive(Debug, Clone)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseOperator {
    /// Drops exact zeros.
    pub fn from_dense(m: &Array2<C64>) -> Self {
        let dim = m.nrows();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            for j in 0..dim {
                let z = m[[i, j]];
                if z.re != 0.0 || z.im != 0.0 {
                    cols.push(j);
                    vals.push(z);
                }
            }
            row_ptr.push(cols.len());
        }
        Self { dim, row_ptr, cols, vals }
    }

    /// Builds from `(row, col, value)` entries; duplicates are summed.
    pub fn from_triplets(dim: usize, entries: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(entries.len());
        let mut vals: Vec<C64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside dimension {dim}");
            if last == Some((r, c)) {
                *vals.last_mut().expect("previous entry") += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { dim, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `self · rhs` for a dense right-hand side.
    pub fn mul_dense(&self, rhs: &Array2<C64>) -> Array2<C64> {
        let ncols = rhs.ncols();
        let mut out = Array2::zeros((self.dim, ncols));
        for i in 0..self.dim {
            let mut out_row = out.row_mut(i);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let v = self.vals[k];
                let src = rhs.row(self.cols[k]);
                out_row.zip_mut_with(&src, |o, s| *o += v * s);
            }
        }
        out
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.vals[self.row_ptr[i]..self.row_ptr[i + 1]].iter().map(|z| z.norm()).sum())
            .fold(0.0, f64::max)
    }
}
