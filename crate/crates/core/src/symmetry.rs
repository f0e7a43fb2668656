//! Symmetry-adapted bases: the two-qubit Bell basis and the three-qubit
//! quartet + doublet group basis, with block-structure diagnostics.

use std::f64::consts::SQRT_2;

use ndarray::{array, Array1, Array2};

use crate::dynamics::DensityMatrix;
use crate::linalg::{HermitianOperator, C64};
use crate::{Error, Result};

/// Orthogonality tolerance for [`BasisTransform`].
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// Real orthogonal change of basis. Row `k` of `matrix` is the new basis
/// vector `f_k` in computational coordinates, so a vector's new coordinates
/// are `matrix · v`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTransform {
    matrix: Array2<f64>,
    labels: Vec<String>,
    partition: Vec<(String, Vec<usize>)>,
}

impl BasisTransform {
    pub fn new(
        matrix: Array2<f64>,
        labels: Vec<String>,
        partition: Vec<(String, Vec<usize>)>,
    ) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: matrix.ncols() });
        }
        if labels.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: labels.len() });
        }
        let dev = orthogonality_error(&matrix);
        if dev > ORTHOGONALITY_TOL {
            return Err(Error::InvalidArgument(format!("basis is not orthogonal (‖BBᵀ − I‖ = {dev:e})")));
        }
        let mut covered = vec![0usize; dim];
        for (_, rows) in &partition {
            for &r in rows {
                if r >= dim {
                    return Err(Error::InvalidArgument(format!("partition row {r} out of range")));
                }
                covered[r] += 1;
            }
        }
        if covered.iter().any(|&c| c != 1) {
            return Err(Error::InvalidArgument("partition must cover every row exactly once".into()));
        }
        Ok(Self { matrix, labels, partition })
    }

    /// Computational basis with one group per basis state.
    pub fn computational(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let labels: Vec<String> = (0..dim).map(|b| crate::model::basis_label(b, n_qubits)).collect();
        let partition = labels.iter().enumerate().map(|(i, l)| (l.clone(), vec![i])).collect();
        Self { matrix: Array2::eye(dim), labels, partition }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn partition(&self) -> &[(String, Vec<usize>)] {
        &self.partition
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn group(&self, name: &str) -> Result<&[usize]> {
        self.partition
            .iter()
            .find(|(g, _)| g == name)
            .map(|(_, rows)| rows.as_slice())
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    /// Basis vector `f_k` in computational coordinates.
    pub fn vector(&self, k: usize) -> Array1<C64> {
        self.matrix.row(k).mapv(|x| C64::new(x, 0.0))
    }

    /// Coordinates of a computational-basis vector in this basis.
    pub fn coordinates(&self, v: &Array1<C64>) -> Array1<C64> {
        self.matrix.mapv(|x| C64::new(x, 0.0)).dot(v)
    }

    /// `B · M · Bᵀ`.
    pub fn conjugate(&self, m: &Array2<C64>) -> Result<Array2<C64>> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: m.nrows() });
        }
        let b = self.matrix.mapv(|x| C64::new(x, 0.0));
        Ok(b.dot(m).dot(&b.t()))
    }

    /// Export with a header row of labels; one line per basis vector.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,");
        out.push_str(&(0..self.dim()).map(|i| format!("c{i}")).collect::<Vec<_>>().join(","));
        out.push('\n');
        for (k, label) in self.labels.iter().enumerate() {
            out.push_str(label);
            for x in self.matrix.row(k) {
                out.push(',');
                out.push_str(&crate::runner::format_number(*x));
            }
            out.push('\n');
        }
        out
    }
}

/// `max |B·Bᵀ − I|`.
pub fn orthogonality_error(m: &Array2<f64>) -> f64 {
    let prod = m.dot(&m.t());
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((prod[[i, j]] - target).abs());
        }
    }
    dev
}

/// Two-qubit Bell basis in coordinates `(00, 0X, X0, XX)`:
/// `e1 = (XX+00)/√2`, `e2 = (XX−00)/√2`, `e3 = (X0+0X)/√2`,
/// `e4 = (X0−0X)/√2`; partition triplet `{e1,e2,e3}`, singlet `{e4}`.
pub fn bell_basis() -> BasisTransform {
    let h = 1.0 / SQRT_2;
    let matrix = array![
        [h, 0.0, 0.0, h],
        [-h, 0.0, 0.0, h],
        [0.0, h, h, 0.0],
        [0.0, -h, h, 0.0],
    ];
    let labels = ["e1", "e2", "e3", "e4"].map(String::from).to_vec();
    let partition = vec![("triplet".to_string(), vec![0, 1, 2]), ("singlet".to_string(), vec![3])];
    BasisTransform::new(matrix, labels, partition).expect("Bell basis is orthonormal")
}

/// Three-qubit group basis `f_k = A_kl e_l`.
///
/// `f0, f1` are the symmetrised `(e0 ± e7)/√2`, `f2 = f_{3/2,+1/2}`,
/// `f3 = f_{3/2,−1/2}`; `(f5, f7)` and `(f4, f6)` are the two spin-½
/// doublets. Partition: `symmetric = {f0..f3}`, `doubletA = {f5, f7}`,
/// `doubletB = {f4, f6}`.
pub fn group_basis_3() -> BasisTransform {
    let s2 = 1.0 / SQRT_2;
    let s3 = 1.0 / 3f64.sqrt();
    let s6 = 1.0 / 6f64.sqrt();
    let matrix = array![
        [s2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, s2],
        [s2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -s2],
        [0.0, 0.0, 0.0, s3, 0.0, s3, s3, 0.0],
        [0.0, s3, s3, 0.0, s3, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -2.0 * s6, 0.0, s6, s6, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, s2, -s2, 0.0],
        [0.0, s6, s6, 0.0, -2.0 * s6, 0.0, 0.0, 0.0],
        [0.0, -s2, s2, 0.0, 0.0, 0.0, 0.0, 0.0],
    ];
    let labels = (0..8).map(|k| format!("f{k}")).collect();
    let partition = vec![
        ("symmetric".to_string(), vec![0, 1, 2, 3]),
        ("doubletA".to_string(), vec![5, 7]),
        ("doubletB".to_string(), vec![4, 6]),
    ];
    BasisTransform::new(matrix, labels, partition).expect("group basis is orthonormal")
}

/// Default symmetry basis for a register: Bell for 2 qubits, group basis for
/// 3, computational otherwise.
pub fn default_basis(n_qubits: usize) -> BasisTransform {
    match n_qubits {
        2 => bell_basis(),
        3 => group_basis_3(),
        n => BasisTransform::computational(n),
    }
}

/// Quantities that can be rewritten in a new basis.
pub trait ToBasis: Sized {
    fn to_basis(&self, b: &BasisTransform) -> Result<Self>;
}

impl ToBasis for HermitianOperator {
    fn to_basis(&self, b: &BasisTransform) -> Result<Self> {
        HermitianOperator::new(b.conjugate(self.matrix())?)
    }
}

impl ToBasis for DensityMatrix {
    fn to_basis(&self, b: &BasisTransform) -> Result<Self> {
        DensityMatrix::new(b.conjugate(self.matrix())?)
    }
}

/// `B · M · Bᵀ` for an operator or a density matrix.
pub fn to_basis<T: ToBasis>(x: &T, b: &BasisTransform) -> Result<T> {
    x.to_basis(b)
}

/// Matrix elements of an operator organised by the partition of a basis.
#[derive(Debug, Clone)]
pub struct BlockReport {
    pub partition: Vec<(String, Vec<usize>)>,
    /// `max |⟨f_i|M|f_j⟩|` over `i`, `j` in different groups.
    pub max_off_block: f64,
    pub tolerance: f64,
    pub blocks: Vec<(String, Array2<C64>)>,
}

impl BlockReport {
    pub fn is_block_diagonal(&self) -> bool {
        self.max_off_block <= self.tolerance
    }
}

pub fn block_structure(op: &HermitianOperator, b: &BasisTransform, tol: f64) -> Result<BlockReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let m = b.conjugate(op.matrix())?;
    let mut group_of = vec![0usize; b.dim()];
    for (g, (_, rows)) in b.partition.iter().enumerate() {
        for &r in rows {
            group_of[r] = g;
        }
    }
    let mut max_off_block: f64 = 0.0;
    for i in 0..b.dim() {
        for j in 0..b.dim() {
            if group_of[i] != group_of[j] {
                max_off_block = max_off_block.max(m[[i, j]].norm());
            }
        }
    }
    let blocks = b
        .partition
        .iter()
        .map(|(name, rows)| {
            let sub = Array2::from_shape_fn((rows.len(), rows.len()), |(i, j)| m[[rows[i], rows[j]]]);
            (name.clone(), sub)
        })
        .collect();
    Ok(BlockReport { partition: b.partition.clone(), max_off_block, tolerance: tol, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::model::{build_rwa_hamiltonian, QubitNetwork};

    #[test]
    fn bell_rows() {
        let b = bell_basis();
        let h = 1.0 / SQRT_2;
        assert_eq!(b.matrix().row(2).to_vec(), vec![0.0, h, h, 0.0]);
        assert!(orthogonality_error(b.matrix()) <= 1e-15);
        let mut v = Array1::<C64>::zeros(4);
        v[0] = C64::new(1.0, 0.0);
        let coords = b.coordinates(&v);
        let expect = [h, -h, 0.0, 0.0];
        for (z, e) in coords.iter().zip(expect) {
            assert!((z - C64::new(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn group_basis_rows() {
        let a = group_basis_3();
        let s3 = 1.0 / 3f64.sqrt();
        let s6 = 1.0 / 6f64.sqrt();
        assert_eq!(a.matrix().row(2).to_vec(), vec![0.0, 0.0, 0.0, s3, 0.0, s3, s3, 0.0]);
        assert_eq!(a.matrix().row(4).to_vec(), vec![0.0, 0.0, 0.0, -2.0 * s6, 0.0, s6, s6, 0.0]);
        assert!(orthogonality_error(a.matrix()) <= 1e-12);
        assert_eq!(a.group("doubletA").unwrap(), &[5, 7]);
        assert!(matches!(a.group("nope"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn rejects_bad_partition() {
        let m = Array2::eye(2);
        let labels = vec!["a".into(), "b".into()];
        assert!(BasisTransform::new(m.clone(), labels.clone(), vec![("x".into(), vec![0])]).is_err());
        assert!(BasisTransform::new(m, labels, vec![("x".into(), vec![0, 1, 1])]).is_err());
    }

    #[test]
    fn identity_is_invariant() {
        let a = group_basis_3();
        let id = HermitianOperator::identity(8);
        assert!(max_abs_diff(to_basis(&id, &a).unwrap().matrix(), id.matrix()) < 1e-15);
    }

    #[test]
    fn basis_projector_becomes_unit_diagonal() {
        let a = group_basis_3();
        let rho = DensityMatrix::from_pure(&a.vector(2)).unwrap();
        let t = to_basis(&rho, &a).unwrap();
        let mut expect = Array2::<C64>::zeros((8, 8));
        expect[[2, 2]] = C64::new(1.0, 0.0);
        assert!(max_abs_diff(t.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn triangle_decouples_quartet_from_doublets() {
        let a = group_basis_3();
        let h = build_rwa_hamiltonian(&QubitNetwork::triangle(1.0, 1.0)).unwrap();
        let ht = to_basis(&h, &a).unwrap();
        assert!(ht.matrix()[[2, 4]].norm() < 1e-15);
        let rep = block_structure(&h, &a, 1e-12).unwrap();
        assert!(rep.is_block_diagonal(), "{}", rep.max_off_block);
        assert_eq!(rep.blocks.len(), 3);
        assert_eq!(rep.blocks[0].1.dim(), (4, 4));
    }

    #[test]
    fn lambda_couples_quartet_to_doublet() {
        let a = group_basis_3();
        let h = build_rwa_hamiltonian(&QubitNetwork::lambda(1.0, 0.0)).unwrap();
        let ht = to_basis(&h, &a).unwrap();
        // (1,1,1)·M·(−2,1,1)ᵀ/√18 over the two-excitation block
        let expect = -2.0 / (3.0 * SQRT_2);
        assert!((ht.matrix()[[2, 4]].re - expect).abs() < 1e-14);
        let rep = block_structure(&h, &a, 1e-12).unwrap();
        assert!(!rep.is_block_diagonal());
    }

    #[test]
    fn zero_operator_report() {
        let rep = block_structure(&HermitianOperator::zeros(4), &bell_basis(), 1e-12).unwrap();
        assert_eq!(rep.max_off_block, 0.0);
        assert!(block_structure(&HermitianOperator::zeros(4), &bell_basis(), 0.0).is_err());
        assert!(block_structure(&HermitianOperator::zeros(8), &bell_basis(), 1e-3).is_err());
    }

    #[test]
    fn csv_export() {
        let csv = bell_basis().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "label,c0,c1,c2,c3");
        assert_eq!(lines.len(), 5);
        assert!(lines[3].starts_with("e3,0.000000000000,0.707106781187"));
    }
}
