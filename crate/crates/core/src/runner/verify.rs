use std::f64::consts::FRAC_1_SQRT_2;

use ndarray::{Array1, Array2};

use super::manifest::CheckRecord;
use crate::analysis::{concurrence, populations};
use crate::bath::{build_coupling_operators, CouplingMode};
use crate::dynamics::{evolve_closed, evolve_lindblad, partial_trace, DensityMatrix};
use crate::linalg::{max_abs_diff, HermitianOperator, C64};
use crate::model::{build_rwa_hamiltonian, excitation_projector, QubitNetwork, Topology};
use crate::spectra::{eigh, triangle_spectrum_closed_form};
use crate::symmetry::{bell_basis, block_structure, group_basis_3, orthogonality_error, to_basis};
use crate::Result;

/// Quick self-test of the library's core invariants.
pub fn verify_suite() -> Result<Vec<CheckRecord>> {
    let c = |x: f64| C64::new(x, 0.0);
    let mut checks = Vec::new();

    let mut spectrum_err: f64 = 0.0;
    for k in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let numeric = eigh(&build_rwa_hamiltonian(&QubitNetwork::triangle(1.0, k))?)?.eigenvalues;
        let exact = triangle_spectrum_closed_form(1.0, k);
        for (a, b) in numeric.iter().zip(exact) {
            spectrum_err = spectrum_err.max((a - b).abs());
        }
    }
    checks.push(CheckRecord::at_most("triangle spectrum closed form", spectrum_err, 1e-10));

    checks.push(CheckRecord::at_most("group basis orthogonality", orthogonality_error(group_basis_3().matrix()), 1e-12));
    checks.push(CheckRecord::at_most("bell basis orthogonality", orthogonality_error(bell_basis().matrix()), 1e-12));

    let (j, k) = (0.595, 0.24);
    let b3 = group_basis_3();
    let delta = build_rwa_hamiltonian(&QubitNetwork::triangle(j, k))?;
    checks.push(CheckRecord::at_most("triangle block structure", block_structure(&delta, &b3, 1e-12)?.max_off_block, 1e-12));
    let lambda = to_basis(&build_rwa_hamiltonian(&QubitNetwork::lambda(j, k))?, &b3)?;
    let element = lambda.matrix()[[2, 4]].norm();
    checks.push(CheckRecord::at_most("lambda f2-f4 element", (element - 2.0 * j / (3.0 * 2f64.sqrt())).abs(), 1e-10));

    let rabi_h = HermitianOperator::new(Array2::from_shape_fn((2, 2), |(a, b)| c(if a == b { 0.0 } else { 0.5 })))?;
    let traj = evolve_closed(&rabi_h, &DensityMatrix::basis_state(0, 2)?, 10.0, 0.01)?;
    let rabi_err = traj
        .states()
        .iter()
        .zip(traj.times())
        .map(|(s, &t)| (s.matrix()[[1, 1]].re - (t / 2.0).sin().powi(2)).abs())
        .fold(0.0, f64::max);
    checks.push(CheckRecord::at_most("rabi oscillation", rabi_err, 1e-6));

    let plus = DensityMatrix::from_pure(&Array1::from(vec![c(FRAC_1_SQRT_2); 2]))?;
    let proj = excitation_projector(0, 1)?.as_operator();
    let deph = evolve_lindblad(&HermitianOperator::zeros(2), &[(proj, 1.0)], &plus, 2.0, 0.01)?;
    let coherence = deph.last().matrix()[[0, 1]].norm();
    checks.push(CheckRecord::at_most("pure dephasing coherence", (coherence - 0.5 * (-1.0f64).exp()).abs(), 1e-5));

    let bell = bell_basis();
    let net2 = QubitNetwork::uniform(&Topology::complete(2), k, j)?;
    let b = build_coupling_operators(CouplingMode::Common, 2)?.remove(0).as_operator();
    let e3 = DensityMatrix::from_pure(&bell.vector(2))?;
    let run = evolve_lindblad(&build_rwa_hamiltonian(&net2)?, &[(b, 0.1)], &e3, 5.0, 0.01)?;
    let singlet = populations(&run, &bell)?.column("e4").unwrap_or_default();
    checks.push(CheckRecord::at_most("common-bath singlet population", singlet.iter().fold(0.0, |a, x| a.max(x.abs())), 1e-8));
    let c = run.checks();
    checks.push(CheckRecord::at_most("lindblad trace", c.max_trace_error, crate::dynamics::TRACE_TOL));

    let e1 = DensityMatrix::from_pure(&bell.vector(0))?;
    let reduced = partial_trace(&e1, &[2, 2], &[0])?;
    let half = Array2::from_diag(&Array1::from(vec![C64::new(0.5, 0.0); 2]));
    checks.push(CheckRecord::at_most("bell partial trace", max_abs_diff(reduced.matrix(), &half), 1e-14));

    let werner = DensityMatrix::new(e1.matrix() * C64::new(0.5, 0.0) + Array2::<C64>::eye(4) * C64::new(0.125, 0.0))?;
    checks.push(CheckRecord::at_most("werner concurrence", (concurrence(&werner)? - 0.25).abs(), 1e-8));

    Ok(checks)
}
