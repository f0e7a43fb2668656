use std::f64::consts::PI;

use super::integrate::{check_guard, integrate, step_count, von_neumann_rhs};
use super::state::{DensityMatrix, Trajectory};
use crate::linalg::{HermitianOperator, C64};
use crate::spectra::eigh;
use crate::{Error, Result};

const ENDPOINT_TOL: f64 = 1e-12;

/// Interpolation between the fiducial and the problem Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleFamily {
    /// `Γ = 1 − s`, `Λ = s` with `s = t/T`.
    Linear,
    /// `Γ = (1 + cos πs)/2`, `Λ = 1 − Γ`.
    Cosine,
    /// Sampled `(t, Γ, Λ)` table, linearly interpolated.
    Table { times: Vec<f64>, gamma: Vec<f64>, lambda: Vec<f64> },
}

/// `H(t) = Γ(t) H_F + Λ(t) H_P` on `[0, T]` with `Γ(0) = 1`, `Γ(T) = 0`,
/// `Λ(0) = 0`, `Λ(T) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    total_time: f64,
    family: ScheduleFamily,
}

impl Schedule {
    pub fn new(total_time: f64, family: ScheduleFamily) -> Result<Self> {
        if !(total_time > 0.0) {
            return Err(Error::InvalidArgument(format!("schedule duration must be positive, got {total_time}")));
        }
        if let ScheduleFamily::Table { times, gamma, lambda } = &family {
            if times.len() < 2 || gamma.len() != times.len() || lambda.len() != times.len() {
                return Err(Error::InvalidArgument("schedule table needs ≥ 2 rows of equal length".into()));
            }
            if times.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::InvalidArgument("schedule times must increase".into()));
            }
            let last = times.len() - 1;
            let endpoints = [
                (times[0], 0.0, "t(0)"),
                (times[last], total_time, "t(end)"),
                (gamma[0], 1.0, "Γ(0)"),
                (gamma[last], 0.0, "Γ(T)"),
                (lambda[0], 0.0, "Λ(0)"),
                (lambda[last], 1.0, "Λ(T)"),
            ];
            for (got, want, name) in endpoints {
                if (got - want).abs() > ENDPOINT_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "schedule endpoint violation: {name} = {got}, expected {want}"
                    )));
                }
            }
        }
        Ok(Self { total_time, family })
    }

    pub fn linear(total_time: f64) -> Result<Self> {
        Self::new(total_time, ScheduleFamily::Linear)
    }

    pub fn cosine(total_time: f64) -> Result<Self> {
        Self::new(total_time, ScheduleFamily::Cosine)
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn family(&self) -> &ScheduleFamily {
        &self.family
    }

    /// `(Γ(t), Λ(t))`, clamped to the schedule's interval.
    pub fn weights(&self, t: f64) -> (f64, f64) {
        let t = t.clamp(0.0, self.total_time);
        let s = t / self.total_time;
        match &self.family {
            ScheduleFamily::Linear => (1.0 - s, s),
            ScheduleFamily::Cosine => {
                let g = 0.5 * (1.0 + (PI * s).cos());
                (g, 1.0 - g)
            }
            ScheduleFamily::Table { times, gamma, lambda } => {
                let k = times.partition_point(|&x| x <= t).clamp(1, times.len() - 1);
                let w = (t - times[k - 1]) / (times[k] - times[k - 1]);
                (
                    gamma[k - 1] + w * (gamma[k] - gamma[k - 1]),
                    lambda[k - 1] + w * (lambda[k] - lambda[k - 1]),
                )
            }
        }
    }
}

/// Integrates `dρ/dt = −i[Γ(t) H_F + Λ(t) H_P, ρ]` over the schedule,
/// holding `H` at its step-midpoint value within each RK4 step. Without an
/// explicit initial state the run starts in the ground state of `H_F`.
pub fn evolve_annealing(
    h_f: &HermitianOperator,
    h_p: &HermitianOperator,
    sch: &Schedule,
    rho0: Option<&DensityMatrix>,
    dt: f64,
) -> Result<Trajectory> {
    if h_f.dim() != h_p.dim() {
        return Err(Error::DimensionMismatch { expected: h_f.dim(), got: h_p.dim() });
    }
    let rho0 = match rho0 {
        Some(r) if r.dim() != h_f.dim() => {
            return Err(Error::DimensionMismatch { expected: h_f.dim(), got: r.dim() })
        }
        Some(r) => r.clone(),
        None => DensityMatrix::from_pure(&eigh(h_f)?.ground_state())?,
    };
    let n_steps = step_count(sch.total_time, dt)?;
    let max_gamma_lambda = match &sch.family {
        ScheduleFamily::Table { gamma, lambda, .. } => {
            gamma.iter().chain(lambda).fold(1.0f64, |a, &x| a.max(x.abs()))
        }
        _ => 1.0,
    };
    check_guard(dt * max_gamma_lambda * (h_f.norm() + h_p.norm()))?;
    let (hf, hp) = (h_f.matrix(), h_p.matrix());
    let (times, states, checks) = integrate(rho0.matrix(), n_steps, dt, |t_mid, rho| {
        let (g, l) = sch.weights(t_mid);
        let h = hf * C64::new(g, 0.0) + hp * C64::new(l, 0.0);
        von_neumann_rhs(&h, rho)
    })?;
    Ok(Trajectory::from_checked(times, states, checks, "anneal")
        .with_param("dt", dt)
        .with_param("total_time", sch.total_time))
}
