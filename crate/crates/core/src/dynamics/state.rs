use ndarray::{Array1, Array2};

use crate::linalg::{dagger, hermiticity_deviation, trace, HermitianOperator, C64};
use crate::spectra::eigh_matrix;
use crate::{Error, Result};

pub const TRACE_TOL: f64 = 1e-9;
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated.
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Density matrix: Hermitian, unit trace, positive semidefinite (all to the
/// tolerances above).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Array2<C64>);

impl DensityMatrix {
    pub fn new(m: Array2<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        check_state(&m, 0.0)?;
        Ok(Self(m))
    }

    /// `|ψ⟩⟨ψ|` for a normalised `ψ`.
    pub fn from_pure(psi: &Array1<C64>) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidArgument(format!("state vector has norm² {norm}")));
        }
        let n = psi.len();
        let m = Array2::from_shape_fn((n, n), |(i, j)| psi[i] * psi[j].conj());
        Self::new(m)
    }

    /// Projector onto one computational basis state.
    pub fn basis_state(index: usize, dim: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut m = Array2::zeros((dim, dim));
        m[[index, index]] = C64::new(1.0, 0.0);
        Ok(Self(m))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(Array2::eye(dim) / C64::new(dim as f64, 0.0))
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

    pub fn trace(&self) -> f64 {
        trace(&self.0).re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Tr(Hρ)`.
    pub fn expectation(&self, h: &HermitianOperator) -> Result<f64> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: h.dim() });
        }
        Ok(trace(&h.matrix().dot(&self.0)).re)
    }

    /// `Tr(ρσ)`; the fidelity when either state is pure.
    pub fn overlap(&self, other: &DensityMatrix) -> f64 {
        // Tr(ρσ) = Σ ρ_ij σ_ji = Σ ρ_ij conj(σ_ij)
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a * b.conj()).re).sum()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigh_matrix(&hermitian_part(&self.0))?.eigenvalues)
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        Self(crate::linalg::kron(&self.0, &other.0))
    }
}

pub(crate) fn hermitian_part(m: &Array2<C64>) -> Array2<C64> {
    (m + &dagger(m)) * C64::new(0.5, 0.0)
}

/// Worst invariant values seen over a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateChecks {
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl Default for StateChecks {
    fn default() -> Self {
        Self { max_trace_error: 0.0, max_hermiticity_error: 0.0, min_eigenvalue: f64::INFINITY }
    }
}

impl StateChecks {
    pub(crate) fn absorb(&mut self, other: StateChecks) {
        self.max_trace_error = self.max_trace_error.max(other.max_trace_error);
        self.max_hermiticity_error = self.max_hermiticity_error.max(other.max_hermiticity_error);
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
    }

    pub fn passed(&self) -> bool {
        self.max_trace_error <= TRACE_TOL
            && self.max_hermiticity_error <= HERMITICITY_TOL
            && self.min_eigenvalue >= -POSITIVITY_TOL
    }
}

/// Checks the density-matrix invariants of `m`; `time` only labels the error.
pub fn check_state(m: &Array2<C64>, time: f64) -> Result<StateChecks> {
    let trace_err = (trace(m) - C64::new(1.0, 0.0)).norm();
    if !(trace_err <= TRACE_TOL) {
        return Err(Error::InvariantViolation { what: "|Tr ρ − 1|", value: trace_err, time });
    }
    let herm = hermiticity_deviation(m);
    if !(herm <= HERMITICITY_TOL) {
        return Err(Error::InvariantViolation { what: "max |ρ − ρ†|", value: herm, time });
    }
    let min_eig = eigh_matrix(&hermitian_part(m))?.eigenvalues[0];
    if min_eig < -POSITIVITY_TOL {
        return Err(Error::InvariantViolation { what: "min eigenvalue", value: min_eig, time });
    }
    Ok(StateChecks { max_trace_error: trace_err, max_hermiticity_error: herm, min_eigenvalue: min_eig })
}

/// Uniformly sampled sequence of states produced by one run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    backend: String,
    params: Vec<(String, f64)>,
    warnings: Vec<String>,
    checks: StateChecks,
}

impl Trajectory {
    /// Validates every state; `times` must be strictly increasing.
    pub fn new(times: Vec<f64>, states: Vec<Array2<C64>>, backend: &str) -> Result<Self> {
        if times.len() != states.len() || times.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "trajectory needs matching non-empty grids ({} times, {} states)",
                times.len(),
                states.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
        }
        let mut checks = StateChecks::default();
        for (m, &t) in states.iter().zip(&times) {
            checks.absorb(check_state(m, t)?);
        }
        Ok(Self {
            times,
            states: states.into_iter().map(DensityMatrix).collect(),
            backend: backend.to_string(),
            params: Vec::new(),
            warnings: Vec::new(),
            checks,
        })
    }

    /// Assembles a trajectory whose states were already checked.
    pub(crate) fn from_checked(
        times: Vec<f64>,
        states: Vec<Array2<C64>>,
        checks: StateChecks,
        backend: &str,
    ) -> Self {
        Self {
            times,
            states: states.into_iter().map(DensityMatrix).collect(),
            backend: backend.to_string(),
            params: Vec::new(),
            warnings: Vec::new(),
            checks,
        }
    }

    pub(crate) fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.push((name.to_string(), value));
        self
    }

    pub(crate) fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory is non-empty")
    }

    pub fn backend(&self) -> &str {
        &self.backend
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn checks(&self) -> StateChecks {
        self.checks
    }

    /// `max_t |Tr(Hρ(t)) − Tr(Hρ(0))|`.
    pub fn energy_drift(&self, h: &HermitianOperator) -> Result<f64> {
        let e0 = self.states[0].expectation(h)?;
        let mut drift: f64 = 0.0;
        for s in &self.states {
            drift = drift.max((s.expectation(h)? - e0).abs());
        }
        Ok(drift)
    }

    /// `max_t |Tr ρ(t)² − Tr ρ(0)²|`.
    pub fn purity_drift(&self) -> f64 {
        let p0 = self.states[0].purity();
        self.states.iter().map(|s| (s.purity() - p0).abs()).fold(0.0, f64::max)
    }

    /// Whether `Tr ρ²` never increases by more than `tol` between samples.
    pub fn purity_non_increasing(&self, tol: f64) -> bool {
        self.states.windows(2).all(|w| w[1].purity() <= w[0].purity() + tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn rejects_invalid_states() {
        let m = Array2::from_diag(&ndarray::array![c(0.7), c(0.7)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvariantViolation { what: "|Tr ρ − 1|", .. })));
        let m = Array2::from_diag(&ndarray::array![c(1.1), c(-0.1)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvariantViolation { what: "min eigenvalue", .. })));
        let mut m = Array2::from_diag(&ndarray::array![c(0.5), c(0.5)]);
        m[[0, 1]] = c(0.1);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvariantViolation { what: "max |ρ − ρ†|", .. })));
    }

    #[test]
    fn purity_and_mixing() {
        let mixed = DensityMatrix::maximally_mixed(8);
        assert!((mixed.purity() - 0.125).abs() < 1e-15);
        let pure = DensityMatrix::basis_state(3, 8).unwrap();
        assert_eq!(pure.purity(), 1.0);
        assert!(DensityMatrix::basis_state(8, 8).is_err());
    }

    #[test]
    fn trajectory_grid_must_increase() {
        let s = DensityMatrix::maximally_mixed(2).into_matrix();
        assert!(Trajectory::new(vec![0.0, 0.0], vec![s.clone(), s.clone()], "test").is_err());
        let t = Trajectory::new(vec![0.0, 1.0], vec![s.clone(), s], "test").unwrap();
        assert!(t.checks().passed());
        assert_eq!(t.len(), 2);
    }
}
