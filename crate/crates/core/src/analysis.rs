//! Observables over trajectories. Entropies are in nats; the linear entropy,
//! if needed, is `1 − purity`.

use ndarray::{array, Array2};

use crate::dynamics::{DensityMatrix, Trajectory};
use crate::linalg::C64;
use crate::spectra::eigh_matrix;
use crate::symmetry::BasisTransform;
use crate::{Error, Result};

/// Default DFS tolerance for closed and structural runs.
pub const DFS_TOL_STRUCTURAL: f64 = 1e-8;
/// Default DFS tolerance for Lindblad runs.
pub const DFS_TOL_LINDBLAD: f64 = 1e-6;

/// `p_k(t) = ⟨f_k|ρ(t)|f_k⟩` for every row of a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSeries {
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    /// `values[t][k]`.
    pub values: Vec<Vec<f64>>,
}

impl PopulationSeries {
    /// Population series of one basis label.
    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let k = self.labels.iter().position(|l| l == label)?;
        Some(self.values.iter().map(|row| row[k]).collect())
    }

    /// `max_t |Σ_k p_k(t) − 1|`.
    pub fn completeness_error(&self) -> f64 {
        self.values.iter().map(|row| (row.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
    }
}

fn state_populations(rho: &DensityMatrix, b: &BasisTransform) -> Result<Vec<f64>> {
    if rho.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), got: rho.dim() });
    }
    let m = rho.matrix();
    Ok(b.matrix()
        .rows()
        .into_iter()
        .map(|f| {
            let mut p = 0.0;
            for (i, &fi) in f.iter().enumerate() {
                if fi == 0.0 {
                    continue;
                }
                for (j, &fj) in f.iter().enumerate() {
                    p += fi * fj * m[[i, j]].re;
                }
            }
            p
        })
        .collect())
}

pub fn populations(traj: &Trajectory, b: &BasisTransform) -> Result<PopulationSeries> {
    let values = traj.states().iter().map(|s| state_populations(s, b)).collect::<Result<Vec<_>>>()?;
    Ok(PopulationSeries { times: traj.times().to_vec(), labels: b.labels().to_vec(), values })
}

/// `1 − Σ_{k∈group} p_k(t)` at every sample.
pub fn subspace_leakage(traj: &Trajectory, b: &BasisTransform, group: &str) -> Result<Vec<f64>> {
    let rows = b.group(group)?.to_vec();
    traj.states()
        .iter()
        .map(|s| {
            let p = state_populations(s, b)?;
            Ok(1.0 - rows.iter().map(|&k| p[k]).sum::<f64>())
        })
        .collect()
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// `−Σ λ ln λ` over the eigenvalues of `ρ`, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(rho.eigenvalues()?.into_iter().filter(|&l| l > 0.0).map(|l| -l * l.ln()).sum())
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let c = |x: f64| C64::new(x, 0.0);
    let yy: Array2<C64> = array![
        [c(0.0), c(0.0), c(0.0), c(-1.0)],
        [c(0.0), c(0.0), c(1.0), c(0.0)],
        [c(0.0), c(1.0), c(0.0), c(0.0)],
        [c(-1.0), c(0.0), c(0.0), c(0.0)],
    ];
    let m = rho.matrix();
    let tilde = yy.dot(&m.mapv(|z| z.conj())).dot(&yy);

    // √ρ ρ̃ √ρ is Hermitian and shares its spectrum with ρρ̃
    let spec = eigh_matrix(&crate::dynamics::hermitian_part(m))?;
    let mut v = spec.eigenvectors.clone();
    for (k, &l) in spec.eigenvalues.iter().enumerate() {
        let s = c(l.max(0.0).sqrt());
        v.column_mut(k).mapv_inplace(|z| z * s);
    }
    let sqrt_rho = v.dot(&crate::linalg::dagger(&spec.eigenvectors));
    let r = sqrt_rho.dot(&tilde).dot(&sqrt_rho);
    let mut lam: Vec<f64> = eigh_matrix(&crate::dynamics::hermitian_part(&r))?
        .eigenvalues
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DfsVerdict {
    Held,
    /// First sample time at which leakage exceeded the tolerance.
    Violated { time: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DfsReport {
    pub group: String,
    pub max_leakage: f64,
    pub verdict: DfsVerdict,
    pub tol: f64,
}

impl DfsReport {
    pub fn held(&self) -> bool {
        self.verdict == DfsVerdict::Held
    }
}

/// Whether `group` stays closed under the run, judged by its leakage.
pub fn dfs_report(traj: &Trajectory, b: &BasisTransform, group: &str, tol: f64) -> Result<DfsReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let leak = subspace_leakage(traj, b, group)?;
    // leakage is non-negative up to rounding
    let max_leakage = leak.iter().fold(0.0f64, |a, &x| a.max(x));
    let verdict = match leak.iter().position(|&x| x > tol) {
        None => DfsVerdict::Held,
        Some(k) => DfsVerdict::Violated { time: traj.times()[k] },
    };
    Ok(DfsReport { group: group.to_string(), max_leakage, verdict, tol })
}
