//! Hermitian eigenproblems and field sweeps.

use std::cmp::Ordering;

use ndarray::{Array1, Array2};
use rayon::prelude::*;

use crate::linalg::{hermiticity_deviation, max_abs, HermitianOperator, C64};
use crate::model::{build_rwa_hamiltonian, QubitNetwork, Topology};
use crate::{Error, Result};

/// Degeneracy grouping tolerance (meV).
pub const DEGENERACY_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: Array2<C64>,
    /// Indices of numerically equal eigenvalues.
    pub degeneracy_groups: Vec<Vec<usize>>,
}

impl Spectrum {
    pub fn eigenvector(&self, k: usize) -> Array1<C64> {
        self.eigenvectors.column(k).to_owned()
    }

    /// Lowest eigenvector.
    pub fn ground_state(&self) -> Array1<C64> {
        self.eigenvector(0)
    }

    /// Re-groups degenerate levels with a custom tolerance.
    pub fn regroup(&mut self, tol: f64) {
        self.degeneracy_groups = group_degenerate(&self.eigenvalues, tol);
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> Array2<C64> {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for k in 0..n {
            let lam = C64::new(self.eigenvalues[k], 0.0);
            scaled.column_mut(k).mapv_inplace(|z| z * lam);
        }
        scaled.dot(&crate::linalg::dagger(&self.eigenvectors))
    }
}

fn group_degenerate(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (v - values[*g.last().unwrap()]).abs() <= tol => g.push(k),
            _ => groups.push(vec![k]),
        }
    }
    groups
}

fn off_diagonal_norm(a: &Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[[i, j]].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn lex_cmp(a: &Array1<C64>, b: &Array1<C64>) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Full eigen-decomposition by the cyclic complex Jacobi method.
///
/// Sweeps stop once the off-diagonal Frobenius norm falls below
/// `1e-14 · ‖H‖_F`. Eigenvectors are phase-fixed so that their largest
/// component is real and positive; ties in eigenvalue are ordered by
/// eigenvector components.
pub fn eigh(op: &HermitianOperator) -> Result<Spectrum> {
    eigh_matrix(op.matrix())
}

pub(crate) fn eigh_matrix(m: &Array2<C64>) -> Result<Spectrum> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.ncols() });
    }
    let dev = hermiticity_deviation(m);
    if dev > crate::linalg::HERMITIAN_TOL * max_abs(m).max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let mut a = m.clone();
    // symmetrise away the tolerated rounding
    for i in 0..n {
        a[[i, i]] = C64::new(a[[i, i]].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (a[[i, j]] + a[[j, i]].conj());
            a[[i, j]] = avg;
            a[[j, i]] = avg.conj();
        }
    }
    let mut v = Array2::<C64>::eye(n);
    let total = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = 1e-14 * total;

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm(&a) <= threshold;
    }

    let mut pairs: Vec<(f64, Array1<C64>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k).to_owned();
            fix_phase(&mut col);
            (a[[k, k]].re, col)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| lex_cmp(&x.1, &y.1)));

    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut eigenvectors = Array2::zeros((n, n));
    for (k, (_, col)) in pairs.iter().enumerate() {
        eigenvectors.column_mut(k).assign(col);
    }
    let degeneracy_groups = group_degenerate(&eigenvalues, DEGENERACY_TOL);
    Ok(Spectrum { eigenvalues, eigenvectors, degeneracy_groups })
}

/// Annihilates `a[p][q]` with the unitary `U = D·R`, where `D` removes the
/// phase of `a[p][q]` and `R` is a real plane rotation; `a ← U†aU`,
/// `v ← vU`.
fn rotate(a: &mut Array2<C64>, v: &mut Array2<C64>, p: usize, q: usize) {
    let apq = a[[p, q]];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let zeta = (a[[q, q]].re - a[[p, p]].re) / (2.0 * r);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U columns: u_p = c e_p − s e^{−iφ} e_q, u_q = s e_p + c e^{−iφ} e_q
    let upp = C64::new(c, 0.0);
    let upq = C64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    let n = a.nrows();
    // a ← a U (columns p, q)
    for k in 0..n {
        let akp = a[[k, p]];
        let akq = a[[k, q]];
        a[[k, p]] = akp * upp + akq * uqp;
        a[[k, q]] = akp * upq + akq * uqq;
    }
    // a ← U† a (rows p, q)
    for k in 0..n {
        let apk = a[[p, k]];
        let aqk = a[[q, k]];
        a[[p, k]] = upp.conj() * apk + uqp.conj() * aqk;
        a[[q, k]] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[[p, q]] = C64::new(0.0, 0.0);
    a[[q, p]] = C64::new(0.0, 0.0);
    a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
    a[[q, q]] = C64::new(a[[q, q]].re, 0.0);
    for k in 0..n {
        let vkp = v[[k, p]];
        let vkq = v[[k, q]];
        v[[k, p]] = vkp * upp + vkq * uqp;
        v[[k, q]] = vkp * upq + vkq * uqq;
    }
}

fn fix_phase(col: &mut Array1<C64>) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in col.iter().enumerate() {
        // strict comparison with a small margin keeps the choice stable
        // against rounding between equal-magnitude components
        if z.norm() > best_norm + 1e-12 {
            best = i;
            best_norm = z.norm();
        }
    }
    if best_norm > 0.0 {
        let ph = col[best].conj() / col[best].norm();
        col.mapv_inplace(|z| z * ph);
    }
}

/// Spectrum of the symmetric triangle network (`J01 = J02 = J12 = J`,
/// `K_i = K`, zero detuning) in closed form, ascending.
pub fn triangle_spectrum_closed_form(j: f64, k: f64) -> [f64; 8] {
    let r1 = (k * k + j * k + j * j).sqrt();
    let r2 = (k * k - j * k + j * j).sqrt();
    let mut e = [
        j + k / 2.0 + r1,
        j + k / 2.0 - r1,
        j - k / 2.0 + r2,
        j - k / 2.0 - r2,
        -j + k / 2.0,
        -j + k / 2.0,
        -j - k / 2.0,
        -j - k / 2.0,
    ];
    e.sort_by(f64::total_cmp);
    e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    K,
    J,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::K => "K",
            SweepParam::J => "J",
        }
    }
}

/// Eigenvalues over a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub param: String,
    pub grid: Vec<f64>,
    /// One ascending row per grid point.
    pub rows: Vec<Vec<f64>>,
}

/// Spectra of the uniform network on `topology` as either the common drive
/// `K` or the coupling `J` runs over `grid`; the other parameter is held at
/// `fixed`.
pub fn sweep_spectrum(
    topology: &Topology,
    param: SweepParam,
    fixed: f64,
    grid: &[f64],
) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("sweep grid is empty".into()));
    }
    let rows = grid
        .par_iter()
        .map(|&x| {
            let (k, j) = match param {
                SweepParam::K => (x, fixed),
                SweepParam::J => (fixed, x),
            };
            let h = build_rwa_hamiltonian(&QubitNetwork::uniform(topology, k, j)?)?;
            Ok(eigh(&h)?.eigenvalues)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { param: param.name().to_string(), grid: grid.to_vec(), rows })
}

/// `points` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..points).map(|i| from + (to - from) * i as f64 / (points - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use ndarray::array;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn diagonal_is_sorted() {
        let h = HermitianOperator::from_diagonal(&[3.0, 1.0, 2.0]);
        let s = eigh(&h).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn half_sigma_x() {
        let h = HermitianOperator::new(array![[c(0.0), c(0.5)], [c(0.5), c(0.0)]]).unwrap();
        assert_close(&eigh(&h).unwrap().eigenvalues, &[-0.5, 0.5], 1e-15);
    }

    #[test]
    fn complex_entries_reconstruct() {
        let h = HermitianOperator::new(array![
            [c(1.0), C64::new(0.3, -0.7), C64::new(0.0, 0.2)],
            [C64::new(0.3, 0.7), c(-0.5), C64::new(1.1, 0.4)],
            [C64::new(0.0, -0.2), C64::new(1.1, -0.4), c(2.0)]
        ])
        .unwrap();
        let s = eigh(&h).unwrap();
        assert!(max_abs_diff(&s.reconstruct(), h.matrix()) < 1e-13);
        let vdv = crate::linalg::dagger(&s.eigenvectors).dot(&s.eigenvectors);
        assert!(max_abs_diff(&vdv, &Array2::eye(3)) < 1e-13);
        let tr: f64 = s.eigenvalues.iter().sum();
        assert!((tr - 2.5).abs() < 1e-13);
    }

    #[test]
    fn two_qubit_flip_flop_spectrum() {
        let net = QubitNetwork::uniform(&Topology::complete(2), 0.0, 1.0).unwrap();
        let s = eigh(&build_rwa_hamiltonian(&net).unwrap()).unwrap();
        assert_close(&s.eigenvalues, &[-1.0, 0.0, 0.0, 1.0], 1e-14);
        assert_eq!(s.degeneracy_groups, vec![vec![0], vec![1, 2], vec![3]]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = array![[c(0.0), c(1.0)], [c(0.0), c(0.0)]];
        assert!(matches!(eigh_matrix(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn zero_matrix() {
        let s = eigh(&HermitianOperator::zeros(4)).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0; 4]);
        assert_eq!(s.degeneracy_groups.len(), 1);
    }

    #[test]
    fn closed_form_examples() {
        assert_close(&triangle_spectrum_closed_form(1.0, 0.0), &[-1.0, -1.0, -1.0, -1.0, 0.0, 0.0, 2.0, 2.0], 1e-15);
        let r3 = 3f64.sqrt();
        assert_close(
            &triangle_spectrum_closed_form(1.0, 1.0),
            &[-1.5, -1.5, -0.5, -0.5, -0.5, 1.5 - r3, 1.5, 1.5 + r3],
            1e-15,
        );
        assert_close(&triangle_spectrum_closed_form(0.0, 1.0), &[-1.5, -0.5, -0.5, -0.5, 0.5, 0.5, 0.5, 1.5], 1e-15);
    }

    #[test]
    fn sweep_examples() {
        let tri = Topology::complete(3);
        let t = sweep_spectrum(&tri, SweepParam::K, 1.0, &[0.0, 1.0]).unwrap();
        for (row, &k) in t.rows.iter().zip(&t.grid) {
            assert_close(row, &triangle_spectrum_closed_form(1.0, k), 1e-12);
        }

        let s2 = 2f64.sqrt();
        let t = sweep_spectrum(&Topology::lambda_canonical(), SweepParam::K, 1.0, &[0.0]).unwrap();
        assert_close(&t.rows[0], &[-s2, -s2, 0.0, 0.0, 0.0, 0.0, s2, s2], 1e-12);

        for topo in crate::model::enumerate_topologies(3, true).unwrap() {
            let t = sweep_spectrum(&topo, SweepParam::K, 0.0, &[2.0]).unwrap();
            assert_close(&t.rows[0], &[-3.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 3.0], 1e-12);
        }
        assert!(sweep_spectrum(&tri, SweepParam::K, 1.0, &[]).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.0, 4.0, 101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 4.0);
        assert!((g[25] - 1.0).abs() < 1e-15);
    }
}
