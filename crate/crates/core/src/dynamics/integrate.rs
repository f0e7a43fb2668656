use ndarray::Array2;

use super::state::{check_state, DensityMatrix, StateChecks, Trajectory};
use crate::linalg::{dagger, HermitianOperator, Operator, C64};
use crate::{Error, Result};

/// Default time step (ħ/meV).
pub const DEFAULT_DT: f64 = 0.01;

/// Upper bound on `dt · (generator norm)` accepted by every backend.
pub const STEP_GUARD: f64 = 0.1;

/// Number of RK4 steps covering `[0, t_end]`.
pub fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!("t_end must be positive, got {t_end}")));
    }
    Ok(((t_end / dt) - 1e-9).ceil().max(1.0) as usize)
}

pub(crate) fn check_guard(value: f64) -> Result<()> {
    if value > STEP_GUARD {
        return Err(Error::StepSizeGuard { value, limit: STEP_GUARD });
    }
    Ok(())
}

/// Classical RK4 over `n_steps`; `rhs(t_mid, ρ)` receives the midpoint time
/// of the current step. Invariants are checked after every step.
pub(crate) fn integrate<F>(
    rho0: &Array2<C64>,
    n_steps: usize,
    dt: f64,
    rhs: F,
) -> Result<(Vec<f64>, Vec<Array2<C64>>, StateChecks)>
where
    F: FnMut(f64, &Array2<C64>) -> Array2<C64>,
{
    integrate_reduced(rho0, n_steps, dt, rhs, |m| Ok(m.clone()))
}

/// Like [`integrate`], but records (and checks) `reduce(ρ)` instead of the
/// full state.
pub(crate) fn integrate_reduced<F, R>(
    rho0: &Array2<C64>,
    n_steps: usize,
    dt: f64,
    mut rhs: F,
    reduce: R,
) -> Result<(Vec<f64>, Vec<Array2<C64>>, StateChecks)>
where
    F: FnMut(f64, &Array2<C64>) -> Array2<C64>,
    R: Fn(&Array2<C64>) -> Result<Array2<C64>>,
{
    let half = C64::new(0.5 * dt, 0.0);
    let full = C64::new(dt, 0.0);
    let sixth = C64::new(dt / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut rho = rho0.clone();
    let first = reduce(&rho)?;
    let mut checks = check_state(&first, 0.0)?;
    times.push(0.0);
    states.push(first);
    for step in 0..n_steps {
        let t_mid = (step as f64 + 0.5) * dt;
        let k1 = rhs(t_mid, &rho);
        let k2 = rhs(t_mid, &(&rho + &(&k1 * half)));
        let k3 = rhs(t_mid, &(&rho + &(&k2 * half)));
        let k4 = rhs(t_mid, &(&rho + &(&k3 * full)));
        rho = rho + (k1 + (k2 + k3) * two + k4) * sixth;
        let t = (step + 1) as f64 * dt;
        let r = reduce(&rho)?;
        checks.absorb(check_state(&r, t)?);
        times.push(t);
        states.push(r);
    }
    Ok((times, states, checks))
}

pub(crate) fn von_neumann_rhs(h: &Array2<C64>, rho: &Array2<C64>) -> Array2<C64> {
    let minus_i = C64::new(0.0, -1.0);
    (h.dot(rho) - rho.dot(h)) * minus_i
}

/// Integrates `dρ/dt = −i[H, ρ]`.
pub fn evolve_closed(
    h: &HermitianOperator,
    rho0: &DensityMatrix,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if h.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch { expected: rho0.dim(), got: h.dim() });
    }
    let n_steps = step_count(t_end, dt)?;
    check_guard(dt * h.norm())?;
    let hm = h.matrix();
    let (times, states, checks) = integrate(rho0.matrix(), n_steps, dt, |_, rho| von_neumann_rhs(hm, rho))?;
    Ok(Trajectory::from_checked(times, states, checks, "closed").with_param("dt", dt).with_param("t_end", t_end))
}

struct Jump {
    b: Array2<C64>,
    b_dag: Array2<C64>,
    b_dag_b: Array2<C64>,
    rate: C64,
}

/// Integrates the GKSL equation
/// `dρ/dt = −i[H,ρ] + Σ_k γ_k (B_k ρ B_k† − ½{B_k†B_k, ρ})`.
pub fn evolve_lindblad(
    h: &HermitianOperator,
    ops: &[(Operator, f64)],
    rho0: &DensityMatrix,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    let dim = rho0.dim();
    if h.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: h.dim() });
    }
    let mut generator_norm = h.norm();
    let mut jumps = Vec::with_capacity(ops.len());
    for (b, rate) in ops {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: b.dim() });
        }
        if !(*rate >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative dissipation rate {rate}")));
        }
        generator_norm += rate * b.norm().powi(2);
        if *rate > 0.0 {
            let bm = b.matrix().clone();
            let b_dag = dagger(&bm);
            let b_dag_b = b_dag.dot(&bm);
            jumps.push(Jump { b: bm, b_dag, b_dag_b, rate: C64::new(*rate, 0.0) });
        }
    }
    let n_steps = step_count(t_end, dt)?;
    check_guard(dt * generator_norm)?;
    let hm = h.matrix();
    let half = C64::new(0.5, 0.0);
    let (times, states, checks) = integrate(rho0.matrix(), n_steps, dt, |_, rho| {
        let mut d = von_neumann_rhs(hm, rho);
        for j in &jumps {
            let sandwich = j.b.dot(rho).dot(&j.b_dag);
            let anti = j.b_dag_b.dot(rho) + rho.dot(&j.b_dag_b);
            d = d + (sandwich - anti * half) * j.rate;
        }
        d
    })?;
    let total_rate: f64 = ops.iter().map(|(_, r)| r).sum();
    Ok(Trajectory::from_checked(times, states, checks, "lindblad")
        .with_param("dt", dt)
        .with_param("t_end", t_end)
        .with_param("total_rate", total_rate))
}
