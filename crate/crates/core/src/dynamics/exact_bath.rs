use std::f64::consts::FRAC_1_SQRT_2;

use ndarray::Array2;

use super::integrate::{check_guard, integrate_reduced, step_count};
use super::partial_trace::partial_trace_matrix;
use super::state::{DensityMatrix, Trajectory};
use crate::bath::{thermal_occupation, BathMode, CouplingMode};
use crate::linalg::{dagger, kron, SparseOperator, C64};
use crate::model::{build_rwa_hamiltonian, QubitNetwork};
use crate::{Error, Result};

/// Largest total (system ⊗ bath) dimension the oracle accepts.
pub const MAX_EXACT_DIM: usize = 4096;

/// Gibbs mass beyond the truncation above which a warning is attached.
pub const GIBBS_TAIL_TOL: f64 = 1e-6;

/// `H_SYS ⊗ I + Σ_a ω_a (a†a + ½) + Σ_a g_a x_a ⊗ B_a` on the truncated space.
///
/// The system is the most significant tensor factor, followed by one factor
/// per bath mode. With independent coupling every qubit gets its own copy of
/// each mode, ordered qubit-major.
#[derive(Debug, Clone)]
pub struct BathHamiltonian {
    op: SparseOperator,
    dims: Vec<usize>,
    copies: Vec<BathMode>,
}

impl BathHamiltonian {
    pub fn op(&self) -> &SparseOperator {
        &self.op
    }

    /// Tensor factor dimensions, system first.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Mode of each bath factor, in factor order.
    pub fn modes(&self) -> &[BathMode] {
        &self.copies
    }
}

pub fn build_bath_hamiltonian(
    net: &QubitNetwork,
    modes: &[BathMode],
    coupling_mode: CouplingMode,
) -> Result<BathHamiltonian> {
    for m in modes {
        m.validate()?;
    }
    let n = net.n_qubits();
    let h_sys = build_rwa_hamiltonian(net)?;
    let d_sys = h_sys.dim();

    // (mode, qubit it couples to; None = all qubits)
    let copies: Vec<(BathMode, Option<usize>)> = match coupling_mode {
        CouplingMode::Common => modes.iter().map(|&m| (m, None)).collect(),
        CouplingMode::Independent => {
            (0..n).flat_map(|q| modes.iter().map(move |&m| (m, Some(q)))).collect()
        }
    };
    let mut dims = vec![d_sys];
    dims.extend(copies.iter().map(|(m, _)| m.levels));
    let dim = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&d| d <= MAX_EXACT_DIM)
        .ok_or_else(|| Error::HilbertSpaceOverflow {
            dim: dims.iter().fold(1usize, |a, &d| a.saturating_mul(d)),
            max: MAX_EXACT_DIM,
        })?;
    let m_bath = dim / d_sys;
    let mut strides = vec![1usize; copies.len()];
    for k in (0..copies.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * copies[k + 1].0.levels;
    }

    let mut entries = Vec::new();
    let hs = h_sys.matrix();
    for ((s, t), &v) in hs.indexed_iter() {
        if v != C64::new(0.0, 0.0) {
            entries.extend((0..m_bath).map(|b| (s * m_bath + b, t * m_bath + b, v)));
        }
    }
    for s in 0..d_sys {
        for b in 0..m_bath {
            let row = s * m_bath + b;
            let mut energy = 0.0;
            for (k, (mode, target)) in copies.iter().enumerate() {
                let occ = (b / strides[k]) % mode.levels;
                energy += mode.omega * (occ as f64 + 0.5);
                let weight = match target {
                    None => s.count_ones() as f64,
                    Some(q) => ((s >> q) & 1) as f64,
                };
                if occ + 1 < mode.levels && weight != 0.0 && mode.g != 0.0 {
                    // ⟨occ+1| x |occ⟩ = √(occ+1)/√2
                    let v = C64::new(mode.g * weight * ((occ + 1) as f64).sqrt() * FRAC_1_SQRT_2, 0.0);
                    entries.push((row, row + strides[k], v));
                    entries.push((row + strides[k], row, v));
                }
            }
            entries.push((row, row, C64::new(energy, 0.0)));
        }
    }
    Ok(BathHamiltonian {
        op: SparseOperator::from_triplets(dim, entries),
        dims,
        copies: copies.into_iter().map(|(m, _)| m).collect(),
    })
}

/// Gibbs weights of one mode truncated to its levels and renormalized,
/// together with the Gibbs mass the truncation discards.
pub fn thermal_mode_state(mode: &BathMode, temperature: f64) -> Result<(Vec<f64>, f64)> {
    mode.validate()?;
    if thermal_occupation(mode.omega, temperature)? == 0.0 {
        let mut w = vec![0.0; mode.levels];
        w[0] = 1.0;
        return Ok((w, 0.0));
    }
    let x = (-mode.omega / (crate::bath::K_B * temperature)).exp();
    let raw: Vec<f64> = (0..mode.levels).map(|k| x.powi(k as i32)).collect();
    let z: f64 = raw.iter().sum();
    Ok((raw.iter().map(|w| w / z).collect(), x.powi(mode.levels as i32)))
}

/// Evolves `ρ_SYS ⊗ ρ_thermal` under the full system-plus-modes Hamiltonian
/// and records the system's reduced state at every step.
pub fn evolve_exact_bath(
    net: &QubitNetwork,
    modes: &[BathMode],
    coupling_mode: CouplingMode,
    rho0_sys: &DensityMatrix,
    temperature: f64,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    let hb = build_bath_hamiltonian(net, modes, coupling_mode)?;
    let d_sys = hb.dims[0];
    if rho0_sys.dim() != d_sys {
        return Err(Error::DimensionMismatch { expected: d_sys, got: rho0_sys.dim() });
    }
    let n_steps = step_count(t_end, dt)?;
    check_guard(dt * hb.op.norm_inf())?;

    let mut warnings = Vec::new();
    let mut bath_diag = vec![1.0];
    for (k, mode) in hb.copies.iter().enumerate() {
        let (w, tail) = thermal_mode_state(mode, temperature)?;
        if tail > GIBBS_TAIL_TOL {
            let msg = format!(
                "bath factor {k} (ω = {}, d = {}): truncated Gibbs tail {tail:.3e} exceeds {GIBBS_TAIL_TOL:e}",
                mode.omega, mode.levels
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
        bath_diag = bath_diag.iter().flat_map(|&a| w.iter().map(move |&b| a * b)).collect();
    }
    let m_bath = bath_diag.len();
    let rho_bath = Array2::from_diag(&bath_diag.iter().map(|&p| C64::new(p, 0.0)).collect::<ndarray::Array1<_>>());
    let rho0 = kron(rho0_sys.matrix(), &rho_bath);

    let op = &hb.op;
    let minus_i = C64::new(0.0, -1.0);
    let reduced_dims = [d_sys, m_bath];
    let (times, states, checks) = integrate_reduced(
        &rho0,
        n_steps,
        dt,
        |_, rho| {
            let h_rho = op.mul_dense(rho);
            // ρH = (Hρ†)†
            let rho_h = dagger(&op.mul_dense(&dagger(rho)));
            (h_rho - rho_h) * minus_i
        },
        |rho| partial_trace_matrix(rho, &reduced_dims, &[0]),
    )?;
    Ok(Trajectory::from_checked(times, states, checks, "exact-bath")
        .with_param("dt", dt)
        .with_param("t_end", t_end)
        .with_param("total_dim", hb.dim() as f64)
        .with_warnings(warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve_closed;
    use crate::linalg::max_abs_diff;
    use ndarray::{array, Array1};
    use std::f64::consts::PI;

    fn one_qubit_idle() -> QubitNetwork {
        QubitNetwork::new(vec![0.0], vec![0.0], Array2::zeros((1, 1))).unwrap()
    }

    fn plus() -> DensityMatrix {
        DensityMatrix::from_pure(&Array1::from(vec![C64::new(FRAC_1_SQRT_2, 0.0); 2])).unwrap()
    }

    #[test]
    fn decoupled_bath_matches_closed() {
        let net = QubitNetwork::triangle(0.595, 0.24);
        let modes = [BathMode::new(1.0, 0.0, 3).unwrap(), BathMode::new(0.5, 0.0, 2).unwrap()];
        let rho0 = DensityMatrix::basis_state(3, 8).unwrap();
        let exact = evolve_exact_bath(&net, &modes, CouplingMode::Common, &rho0, 4.0, 3.0, 0.01).unwrap();
        let closed = evolve_closed(&build_rwa_hamiltonian(&net).unwrap(), &rho0, 3.0, 0.01).unwrap();
        assert_eq!(exact.len(), closed.len());
        for (a, b) in exact.states().iter().zip(closed.states()) {
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-8);
        }
    }

    #[test]
    fn initial_reduction_is_system_state() {
        let rho0 = plus();
        let modes = [BathMode::new(1.0, 0.3, 4).unwrap()];
        let traj = evolve_exact_bath(&one_qubit_idle(), &modes, CouplingMode::Common, &rho0, 20.0, 0.1, 0.01).unwrap();
        assert!(max_abs_diff(traj.states()[0].matrix(), rho0.matrix()) < 1e-15);
    }

    #[test]
    fn independent_boson_recurrence() {
        let (omega, g) = (1.0, 0.2);
        let modes = [BathMode::new(omega, g, 6).unwrap()];
        let t_end = 2.0 * PI / omega;
        let dt = t_end / 700.0;
        let traj = evolve_exact_bath(&one_qubit_idle(), &modes, CouplingMode::Common, &plus(), 0.0, t_end, dt).unwrap();
        for (s, &t) in traj.states().iter().zip(traj.times()) {
            let analytic = 0.5 * (-(g * g / (2.0 * omega * omega)) * (1.0 - (omega * t).cos())).exp();
            assert!((s.matrix()[[0, 1]].norm() - analytic).abs() < 1e-4, "t = {t}");
        }
        let mid = traj.len() / 2;
        assert!(traj.states()[mid].matrix()[[0, 1]].norm() < 0.49);
        assert!((traj.last().matrix()[[0, 1]].norm() - 0.5).abs() < 0.05);
    }

    #[test]
    fn thermal_weights_and_tail() {
        let mode = BathMode::new(1.0, 0.1, 3).unwrap();
        let (w, tail) = thermal_mode_state(&mode, 0.0).unwrap();
        assert_eq!((w, tail), (vec![1.0, 0.0, 0.0], 0.0));
        let t = 1.0 / crate::bath::K_B;
        let (w, tail) = thermal_mode_state(&mode, t).unwrap();
        let e = std::f64::consts::E;
        let z = 1.0 + 1.0 / e + 1.0 / (e * e);
        assert!((w[1] - 1.0 / (e * z)).abs() < 1e-15);
        assert!((tail - e.powi(-3)).abs() < 1e-15);
    }

    #[test]
    fn warns_on_heavy_truncation() {
        let modes = [BathMode::new(1.0, 0.05, 2).unwrap()];
        let traj = evolve_exact_bath(&one_qubit_idle(), &modes, CouplingMode::Common, &plus(), 77.0, 0.05, 0.01).unwrap();
        assert_eq!(traj.warnings().len(), 1);
    }

    #[test]
    fn dimension_limit() {
        let modes = vec![BathMode::new(1.0, 0.1, 4).unwrap(); 6];
        let rho0 = DensityMatrix::basis_state(0, 2).unwrap();
        assert!(matches!(
            evolve_exact_bath(&one_qubit_idle(), &modes, CouplingMode::Common, &rho0, 0.0, 1.0, 0.001),
            Err(Error::HilbertSpaceOverflow { dim: 8192, .. })
        ));
    }

    #[test]
    fn independent_copies_per_qubit() {
        let net = QubitNetwork::new(vec![0.0; 2], vec![0.0; 2], array![[0.0, 0.3], [0.3, 0.0]]).unwrap();
        let modes = [BathMode::new(1.0, 0.1, 3).unwrap()];
        let hb = build_bath_hamiltonian(&net, &modes, CouplingMode::Independent).unwrap();
        assert_eq!(hb.dims(), &[4, 3, 3]);
        let hc = build_bath_hamiltonian(&net, &modes, CouplingMode::Common).unwrap();
        assert_eq!(hc.dims(), &[4, 3]);
    }
}
