//! Hamiltonians and operators of the qubit network.
//!
//! Basis ordering follows the printed 8×8 free Hamiltonian: the computational
//! index `b` runs over `|0…00⟩, |0…0X⟩, …, |X…XX⟩` and qubit `i` is bit `i` of
//! `b`, so in the label `"0X0"` the rightmost character is qubit 0.

use std::collections::BTreeSet;
use std::fmt;

use ndarray::Array2;

use crate::linalg::{HermitianOperator, Operator, C64};
use crate::{Error, Result};

/// Largest register the dense builders accept (`2^10 = 1024` states).
pub const MAX_QUBITS: usize = 10;

/// Largest spin count accepted by [`brute_force_ground_state`].
pub const MAX_BRUTE_FORCE_SPINS: usize = 20;

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::UnsupportedQubitCount(0));
    }
    if n > MAX_QUBITS {
        return Err(Error::DimensionOverflow { n_qubits: n, max: MAX_QUBITS });
    }
    Ok(())
}

fn check_coupling(j: &Array2<f64>, n: usize, what: &str) -> Result<()> {
    if j.dim() != (n, n) {
        return Err(Error::InvalidArgument(format!(
            "{what} must be {n}×{n}, got {}×{}",
            j.nrows(),
            j.ncols()
        )));
    }
    for a in 0..n {
        if j[[a, a]] != 0.0 {
            return Err(Error::InvalidArgument(format!("{what} diagonal must be zero (entry {a})")));
        }
        for b in (a + 1)..n {
            if j[[a, b]] != j[[b, a]] {
                return Err(Error::InvalidArgument(format!("{what} must be symmetric ({a},{b})")));
            }
        }
    }
    Ok(())
}

/// Closed-system description of a dipole-coupled qubit network (meV).
#[derive(Debug, Clone, PartialEq)]
pub struct QubitNetwork {
    delta: Vec<f64>,
    drive_k: Vec<f64>,
    coupling_j: Array2<f64>,
}

impl QubitNetwork {
    pub fn new(delta: Vec<f64>, drive_k: Vec<f64>, coupling_j: Array2<f64>) -> Result<Self> {
        let n = drive_k.len();
        check_qubits(n)?;
        if delta.len() != n {
            return Err(Error::InvalidArgument(format!(
                "detuning has {} entries for {n} qubits",
                delta.len()
            )));
        }
        check_coupling(&coupling_j, n, "coupling matrix")?;
        Ok(Self { delta, drive_k, coupling_j })
    }

    /// Zero detuning, common drive `k` and coupling `j` on every edge of the
    /// topology.
    pub fn uniform(topology: &Topology, k: f64, j: f64) -> Result<Self> {
        let n = topology.n_qubits();
        Self::new(vec![0.0; n], vec![k; n], topology.coupling_matrix(j))
    }

    /// Symmetric triangle: all three pairs coupled with `j`.
    pub fn triangle(j: f64, k: f64) -> Self {
        Self::uniform(&Topology::complete(3), k, j).expect("valid 3-qubit network")
    }

    /// Canonical Λ configuration, see [`Topology::lambda_canonical`].
    pub fn lambda(j: f64, k: f64) -> Self {
        Self::uniform(&Topology::lambda_canonical(), k, j).expect("valid 3-qubit network")
    }

    pub fn n_qubits(&self) -> usize {
        self.drive_k.len()
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn drive_k(&self) -> &[f64] {
        &self.drive_k
    }

    pub fn coupling_j(&self) -> &Array2<f64> {
        &self.coupling_j
    }
}

/// Transverse-field Ising problem `Σ K_i σx_i + Σ h_i σz_i + Σ_{i<j} J_ij σz_i σz_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingProblem {
    h: Vec<f64>,
    j: Array2<f64>,
    k: Vec<f64>,
}

impl IsingProblem {
    pub fn new(h: Vec<f64>, j: Array2<f64>, k: Vec<f64>) -> Result<Self> {
        let n = h.len();
        if n == 0 {
            return Err(Error::UnsupportedQubitCount(0));
        }
        if k.len() != n {
            return Err(Error::InvalidArgument(format!("K has {} entries for {n} spins", k.len())));
        }
        check_coupling(&j, n, "J")?;
        Ok(Self { h, j, k })
    }

    /// Problem without transverse drive.
    pub fn classical(h: Vec<f64>, j: Array2<f64>) -> Result<Self> {
        let n = h.len();
        Self::new(h, j, vec![0.0; n])
    }

    pub fn n_spins(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn j(&self) -> &Array2<f64> {
        &self.j
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PseudoSpin {
    Z,
    X,
    Plus,
    Minus,
}

/// Single-qubit pseudo-spin operator embedded in the `2^n` register.
///
/// `σz = |X⟩⟨X| − |0⟩⟨0|`, `σx = |0⟩⟨X| + |X⟩⟨0|`, `σ+ = |X⟩⟨0|`,
/// `σ− = |0⟩⟨X|`.
pub fn pseudo_spin(kind: PseudoSpin, qubit: usize, n_qubits: usize) -> Result<Operator> {
    check_qubits(n_qubits)?;
    if qubit >= n_qubits {
        return Err(Error::QubitIndex { index: qubit, n_qubits });
    }
    let dim = 1usize << n_qubits;
    let mask = 1usize << qubit;
    let one = C64::new(1.0, 0.0);
    let mut m = Array2::zeros((dim, dim));
    for b in 0..dim {
        let excited = b & mask != 0;
        match kind {
            PseudoSpin::Z => m[[b, b]] = if excited { one } else { -one },
            PseudoSpin::X => m[[b ^ mask, b]] = one,
            PseudoSpin::Plus if !excited => m[[b | mask, b]] = one,
            PseudoSpin::Minus if excited => m[[b & !mask, b]] = one,
            _ => {}
        }
    }
    Operator::new(m)
}

/// Projector `|X_i⟩⟨X_i|` onto the excited state of one qubit.
pub fn excitation_projector(qubit: usize, n_qubits: usize) -> Result<HermitianOperator> {
    check_qubits(n_qubits)?;
    if qubit >= n_qubits {
        return Err(Error::QubitIndex { index: qubit, n_qubits });
    }
    let diag: Vec<f64> = (0..1usize << n_qubits)
        .map(|b| if b & (1 << qubit) != 0 { 1.0 } else { 0.0 })
        .collect();
    Ok(HermitianOperator::from_diagonal(&diag))
}

/// Total excitation number `Σ_i |X_i⟩⟨X_i|`.
pub fn excitation_number(n_qubits: usize) -> Result<HermitianOperator> {
    check_qubits(n_qubits)?;
    let diag: Vec<f64> = (0..1usize << n_qubits).map(|b| b.count_ones() as f64).collect();
    Ok(HermitianOperator::from_diagonal(&diag))
}

/// Rotating-wave network Hamiltonian
/// `Σ δ_i/2 (σz_i + 1) + Σ K_i/2 σx_i + Σ_{i<j} J_ij (σ+_i σ−_j + σ−_i σ+_j)`.
pub fn build_rwa_hamiltonian(net: &QubitNetwork) -> Result<HermitianOperator> {
    let n = net.n_qubits();
    check_qubits(n)?;
    let dim = 1usize << n;
    let mut m = Array2::<C64>::zeros((dim, dim));
    for b in 0..dim {
        let mut diag = 0.0;
        for i in 0..n {
            let mask = 1 << i;
            if b & mask != 0 {
                // δ/2 (σz + 1) = δ on |X⟩, 0 on |0⟩
                diag += net.delta[i];
            }
            m[[b ^ mask, b]] += C64::new(0.5 * net.drive_k[i], 0.0);
            for j in (i + 1)..n {
                let jij = net.coupling_j[[i, j]];
                let (bi, bj) = (b & mask != 0, b & (1 << j) != 0);
                if jij != 0.0 && bi != bj {
                    // hop the excitation between i and j
                    m[[b ^ mask ^ (1 << j), b]] += C64::new(jij, 0.0);
                }
            }
        }
        m[[b, b]] += C64::new(diag, 0.0);
    }
    HermitianOperator::new(m)
}

/// `Σ_i K_i σx_i + Σ_i h_i σz_i + Σ_{i<j} J_ij σz_i σz_j`.
pub fn build_ising_hamiltonian(p: &IsingProblem) -> Result<HermitianOperator> {
    let n = p.n_spins();
    check_qubits(n)?;
    let dim = 1usize << n;
    let mut m = Array2::<C64>::zeros((dim, dim));
    for b in 0..dim {
        let z = |i: usize| if b & (1 << i) != 0 { 1.0 } else { -1.0 };
        let mut diag = 0.0;
        for i in 0..n {
            diag += p.h[i] * z(i);
            for j in (i + 1)..n {
                diag += p.j[[i, j]] * z(i) * z(j);
            }
            m[[b ^ (1 << i), b]] += C64::new(p.k[i], 0.0);
        }
        m[[b, b]] = C64::new(diag, 0.0);
    }
    HermitianOperator::new(m)
}

/// Fiducial driver `−Σ_i σx_i` whose ground state is the uniform superposition.
pub fn transverse_driver(n_qubits: usize) -> Result<HermitianOperator> {
    check_qubits(n_qubits)?;
    let p = IsingProblem::new(
        vec![0.0; n_qubits],
        Array2::zeros((n_qubits, n_qubits)),
        vec![-1.0; n_qubits],
    )?;
    build_ising_hamiltonian(&p)
}

/// Classical energy `Σ h_i s_i + Σ_{i<j} J_ij s_i s_j` for `s_i = ±1`.
pub fn hopfield_energy(s: &[i8], h: &[f64], j: &Array2<f64>) -> Result<f64> {
    let n = s.len();
    if h.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: h.len() });
    }
    check_coupling(j, n, "J")?;
    if let Some((index, &v)) = s.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
        return Err(Error::InvalidSpin { index, value: v as f64 });
    }
    Ok(classical_energy(s, h, j))
}

fn classical_energy(s: &[i8], h: &[f64], j: &Array2<f64>) -> f64 {
    let n = s.len();
    let mut e = 0.0;
    for a in 0..n {
        let sa = s[a] as f64;
        e += h[a] * sa;
        for b in (a + 1)..n {
            e += j[[a, b]] * sa * s[b] as f64;
        }
    }
    e
}

/// Spin vectors in lexicographic order (−1 before +1, first spin slowest).
fn lexicographic_spins(n: usize) -> impl Iterator<Item = Vec<i8>> {
    (0..1usize << n).map(move |m| {
        (0..n).map(|i| if m & (1 << (n - 1 - i)) != 0 { 1 } else { -1 }).collect()
    })
}

fn check_classical(p: &IsingProblem) -> Result<()> {
    let n = p.n_spins();
    if n > MAX_BRUTE_FORCE_SPINS {
        return Err(Error::DimensionOverflow { n_qubits: n, max: MAX_BRUTE_FORCE_SPINS });
    }
    if p.k.iter().any(|&k| k != 0.0) {
        return Err(Error::InvalidArgument(
            "brute-force search needs a classical problem (K = 0)".into(),
        ));
    }
    Ok(())
}

/// Exhaustive minimisation over all `2^n` spin vectors; ties go to the
/// lexicographically smallest vector.
pub fn brute_force_ground_state(p: &IsingProblem) -> Result<(Vec<i8>, f64)> {
    check_classical(p)?;
    let mut best: Option<(Vec<i8>, f64)> = None;
    for s in lexicographic_spins(p.n_spins()) {
        let e = classical_energy(&s, &p.h, &p.j);
        if best.as_ref().is_none_or(|(_, be)| e < *be) {
            best = Some((s, e));
        }
    }
    Ok(best.expect("at least one spin configuration"))
}

/// All minimisers within `tol` of the ground energy, in lexicographic order.
pub fn ground_manifold(p: &IsingProblem, tol: f64) -> Result<Vec<Vec<i8>>> {
    let (_, e0) = brute_force_ground_state(p)?;
    Ok(lexicographic_spins(p.n_spins())
        .filter(|s| classical_energy(s, &p.h, &p.j) <= e0 + tol)
        .collect())
}

/// Computational index of a spin vector (`+1` ↔ `|X⟩`, spin `i` ↔ qubit `i`).
pub fn spins_to_index(s: &[i8]) -> usize {
    s.iter().enumerate().filter(|(_, &v)| v > 0).fold(0, |acc, (i, _)| acc | (1 << i))
}

/// Parses a label such as `"0X0"`; the leftmost character is the most
/// significant qubit.
pub fn parse_basis_label(label: &str) -> Result<(usize, usize)> {
    let n = label.chars().count();
    check_qubits(n)?;
    let mut idx = 0;
    for ch in label.chars() {
        idx <<= 1;
        match ch {
            '0' => {}
            'X' | 'x' => idx |= 1,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "invalid basis label character '{other}' in \"{label}\""
                )))
            }
        }
    }
    Ok((idx, n))
}

pub fn basis_label(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .rev()
        .map(|i| if index & (1 << i) != 0 { 'X' } else { '0' })
        .collect()
}

/// Unitary that relabels qubits: qubit `i` is moved to `perm[i]`.
pub fn permutation_operator(perm: &[usize]) -> Result<Operator> {
    let n = perm.len();
    check_qubits(n)?;
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
        }
    }
    let dim = 1usize << n;
    let mut m = Array2::zeros((dim, dim));
    for b in 0..dim {
        let target = (0..n).filter(|&i| b & (1 << i) != 0).fold(0, |acc, i| acc | (1 << perm[i]));
        m[[target, b]] = C64::new(1.0, 0.0);
    }
    Operator::new(m)
}

/// Topology class of a 3-qubit network by edge count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TopologyClass {
    /// No coupling.
    A,
    /// A single coupled pair.
    B,
    /// Λ: one hub coupled to the two other qubits.
    C,
    /// Δ: all three pairs coupled.
    D,
}

impl TopologyClass {
    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "a" => Some(Self::A),
            "b" => Some(Self::B),
            "c" | "lambda" => Some(Self::C),
            "d" | "triangle" | "delta" => Some(Self::D),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::A => "a",
            Self::B => "b",
            Self::C => "c",
            Self::D => "d",
        }
    }

    fn from_edge_count(edges: usize) -> Option<Self> {
        [Self::A, Self::B, Self::C, Self::D].get(edges).copied()
    }
}

impl fmt::Display for TopologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Undirected coupling graph on `n_qubits` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    n_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
    class: Option<TopologyClass>,
}

impl Topology {
    pub fn new(n_qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_qubits(n_qubits)?;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop on qubit {a}")));
            }
            let hi = a.max(b);
            if hi >= n_qubits {
                return Err(Error::QubitIndex { index: hi, n_qubits });
            }
            set.insert((a.min(b), hi));
        }
        let class = if n_qubits == 3 { TopologyClass::from_edge_count(set.len()) } else { None };
        Ok(Self { n_qubits, edges: set, class })
    }

    pub fn complete(n_qubits: usize) -> Self {
        let edges = (0..n_qubits).flat_map(|a| ((a + 1)..n_qubits).map(move |b| (a, b)));
        Self::new(n_qubits, edges.collect::<Vec<_>>()).expect("valid complete graph")
    }

    pub fn empty(n_qubits: usize) -> Self {
        Self::new(n_qubits, []).expect("valid empty graph")
    }

    /// Λ graph on 3 qubits with the given hub.
    pub fn lambda(hub: usize) -> Result<Self> {
        if hub >= 3 {
            return Err(Error::QubitIndex { index: hub, n_qubits: 3 });
        }
        Self::new(3, (0..3).filter(|&q| q != hub).map(|q| (hub, q)))
    }

    /// Canonical Λ representative: the hub is qubit 2, the leftmost
    /// character of a basis label, which is also the qubit that the
    /// doublet vectors `f4`, `f6` single out.
    pub fn lambda_canonical() -> Self {
        Self::lambda(2).expect("hub in range")
    }

    /// Canonical representative of a 3-qubit class.
    pub fn representative(class: TopologyClass) -> Self {
        match class {
            TopologyClass::A => Self::empty(3),
            TopologyClass::B => Self::new(3, [(0, 1)]).expect("valid edge"),
            TopologyClass::C => Self::lambda_canonical(),
            TopologyClass::D => Self::complete(3),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn class(&self) -> Option<TopologyClass> {
        self.class
    }

    /// Symmetric, zero-diagonal matrix with `j` on every edge.
    pub fn coupling_matrix(&self, j: f64) -> Array2<f64> {
        let mut m = Array2::zeros((self.n_qubits, self.n_qubits));
        for &(a, b) in &self.edges {
            m[[a, b]] = j;
            m[[b, a]] = j;
        }
        m
    }
}

/// Coupling graphs of a 3-qubit network: all 8 labeled graphs, or the four
/// class representatives a, b, c (Λ), d (Δ).
pub fn enumerate_topologies(n_qubits: usize, labeled: bool) -> Result<Vec<Topology>> {
    if n_qubits != 3 {
        return Err(Error::UnsupportedQubitCount(n_qubits));
    }
    if !labeled {
        return Ok([TopologyClass::A, TopologyClass::B, TopologyClass::C, TopologyClass::D]
            .into_iter()
            .map(Topology::representative)
            .collect());
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut out: Vec<Topology> = (0..8u32)
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e);
            Topology::new(3, edges.collect::<Vec<_>>()).expect("valid 3-qubit graph")
        })
        .collect();
    out.sort_by_key(|t| (t.class, t.edges.iter().copied().collect::<Vec<_>>()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, max_abs_diff};
    use ndarray::{array, Array1};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    /// Independent construction by explicit tensor products; the leftmost
    /// factor is the most significant qubit.
    fn kron_embed(single: &Array2<C64>, qubit: usize, n: usize) -> Array2<C64> {
        let id = Array2::<C64>::eye(2);
        let mut out = Array2::<C64>::eye(1);
        for pos in (0..n).rev() {
            out = kron(&out, if pos == qubit { single } else { &id });
        }
        out
    }

    #[test]
    fn single_qubit_pseudo_spins() {
        let z = pseudo_spin(PseudoSpin::Z, 0, 1).unwrap();
        assert_eq!(z.matrix(), &array![[c(-1.0), c(0.0)], [c(0.0), c(1.0)]]);
        let p = pseudo_spin(PseudoSpin::Plus, 0, 1).unwrap();
        let m = pseudo_spin(PseudoSpin::Minus, 0, 1).unwrap();
        assert_eq!(p.dot(&m).matrix(), &array![[c(0.0), c(0.0)], [c(0.0), c(1.0)]]);
    }

    #[test]
    fn sigma_x_on_qubit_one_flips_leftmost_character() {
        // 2 qubits: qubit 1 is the leftmost label character.
        let x1 = pseudo_spin(PseudoSpin::X, 1, 2).unwrap();
        let mut v = Array1::<C64>::zeros(4);
        v[0] = c(1.0);
        let out = x1.apply(&v);
        let (target, _) = parse_basis_label("X0").unwrap();
        assert_eq!(target, 2);
        assert_eq!(out[target], c(1.0));
        assert_eq!(out.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn pseudo_spin_matches_tensor_products() {
        let sz = array![[c(-1.0), c(0.0)], [c(0.0), c(1.0)]];
        let sx = array![[c(0.0), c(1.0)], [c(1.0), c(0.0)]];
        let sp = array![[c(0.0), c(0.0)], [c(1.0), c(0.0)]];
        let sm = array![[c(0.0), c(1.0)], [c(0.0), c(0.0)]];
        for n in 1..=4 {
            for q in 0..n {
                for (kind, single) in [
                    (PseudoSpin::Z, &sz),
                    (PseudoSpin::X, &sx),
                    (PseudoSpin::Plus, &sp),
                    (PseudoSpin::Minus, &sm),
                ] {
                    let op = pseudo_spin(kind, q, n).unwrap();
                    assert_eq!(op.matrix(), &kron_embed(single, q, n), "{kind:?} q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn pseudo_spin_rejects_bad_index() {
        assert!(matches!(pseudo_spin(PseudoSpin::X, 3, 3), Err(Error::QubitIndex { .. })));
        assert!(matches!(pseudo_spin(PseudoSpin::X, 0, 11), Err(Error::DimensionOverflow { .. })));
    }

    #[test]
    fn rwa_single_qubit_limit() {
        let net = QubitNetwork::new(vec![0.0], vec![1.0], Array2::zeros((1, 1))).unwrap();
        let h = build_rwa_hamiltonian(&net).unwrap();
        assert_eq!(h.matrix(), &array![[c(0.0), c(0.5)], [c(0.5), c(0.0)]]);
    }

    #[test]
    fn rwa_detuning_acts_on_excited_states() {
        let net = QubitNetwork::new(vec![0.3, 0.7], vec![0.0, 0.0], Array2::zeros((2, 2))).unwrap();
        let h = build_rwa_hamiltonian(&net).unwrap();
        let diag: Vec<f64> = h.matrix().diag().iter().map(|z| z.re).collect();
        assert_eq!(diag, vec![0.0, 0.3, 0.7, 1.0]);
    }

    #[test]
    fn rwa_matches_operator_sum() {
        let k = [0.3, -0.2, 0.9];
        let d = [0.1, 0.0, -0.4];
        let j = array![[0.0, 0.5, -0.7], [0.5, 0.0, 1.1], [-0.7, 1.1, 0.0]];
        let net = QubitNetwork::new(d.to_vec(), k.to_vec(), j.clone()).unwrap();
        let h = build_rwa_hamiltonian(&net).unwrap();
        let op = |kind, q| pseudo_spin(kind, q, 3).unwrap().into_matrix();
        let mut expect = Array2::<C64>::zeros((8, 8));
        let id = Array2::<C64>::eye(8);
        for i in 0..3 {
            expect = expect + (op(PseudoSpin::Z, i) + &id) * c(d[i] / 2.0);
            expect = expect + op(PseudoSpin::X, i) * c(k[i] / 2.0);
            for jj in (i + 1)..3 {
                let hop = op(PseudoSpin::Plus, i).dot(&op(PseudoSpin::Minus, jj))
                    + op(PseudoSpin::Minus, i).dot(&op(PseudoSpin::Plus, jj));
                expect = expect + hop * c(j[[i, jj]]);
            }
        }
        assert!(max_abs_diff(h.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn network_validation() {
        let asym = array![[0.0, 1.0], [0.5, 0.0]];
        assert!(QubitNetwork::new(vec![0.0; 2], vec![0.0; 2], asym).is_err());
        let diag = array![[1.0, 0.0], [0.0, 0.0]];
        assert!(QubitNetwork::new(vec![0.0; 2], vec![0.0; 2], diag).is_err());
        assert!(QubitNetwork::new(vec![0.0; 3], vec![0.0; 2], Array2::zeros((2, 2))).is_err());
        assert!(matches!(
            QubitNetwork::new(vec![0.0; 11], vec![0.0; 11], Array2::zeros((11, 11))),
            Err(Error::DimensionOverflow { .. })
        ));
        assert!(matches!(Topology::new(11, []), Err(Error::DimensionOverflow { .. })));
    }

    #[test]
    fn ising_examples() {
        let p = IsingProblem::classical(vec![1.0], Array2::zeros((1, 1))).unwrap();
        let h = build_ising_hamiltonian(&p).unwrap();
        assert_eq!(h.matrix(), &array![[c(-1.0), c(0.0)], [c(0.0), c(1.0)]]);

        let p = IsingProblem::classical(vec![0.0, 0.0], array![[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let h = build_ising_hamiltonian(&p).unwrap();
        let diag: Vec<f64> = h.matrix().diag().iter().map(|z| z.re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
        assert!(max_abs_diff(h.matrix(), &Array2::from_diag(&h.matrix().diag().to_owned())) == 0.0);
    }

    #[test]
    fn hopfield_examples() {
        let j = array![[0.0, 1.0], [1.0, 0.0]];
        assert_eq!(hopfield_energy(&[1, 1], &[0.0, 0.0], &j).unwrap(), 1.0);
        assert_eq!(hopfield_energy(&[1, -1], &[0.0, 0.0], &j).unwrap(), -1.0);
        let j3 = Topology::complete(3).coupling_matrix(1.0);
        assert_eq!(hopfield_energy(&[1, 1, 1], &[1.0; 3], &j3).unwrap(), 6.0);
        assert!(matches!(
            hopfield_energy(&[1, 0], &[0.0, 0.0], &j),
            Err(Error::InvalidSpin { index: 1, .. })
        ));
    }

    #[test]
    fn brute_force_examples() {
        let p = IsingProblem::classical(vec![0.0, 0.0], array![[0.0, -1.0], [-1.0, 0.0]]).unwrap();
        assert_eq!(brute_force_ground_state(&p).unwrap(), (vec![-1, -1], -1.0));
        assert_eq!(ground_manifold(&p, 1e-12).unwrap(), vec![vec![-1, -1], vec![1, 1]]);

        let p = IsingProblem::classical(vec![1.0], Array2::zeros((1, 1))).unwrap();
        assert_eq!(brute_force_ground_state(&p).unwrap(), (vec![-1], -1.0));

        let p = IsingProblem::classical(vec![0.0; 3], Topology::complete(3).coupling_matrix(1.0)).unwrap();
        assert_eq!(brute_force_ground_state(&p).unwrap(), (vec![-1, -1, 1], -1.0));

        let p = IsingProblem::new(vec![0.0], Array2::zeros((1, 1)), vec![1.0]).unwrap();
        assert!(brute_force_ground_state(&p).is_err());
        let p = IsingProblem::classical(vec![0.0; 21], Array2::zeros((21, 21))).unwrap();
        assert!(matches!(brute_force_ground_state(&p), Err(Error::DimensionOverflow { .. })));
    }

    #[test]
    fn topology_enumeration() {
        let labeled = enumerate_topologies(3, true).unwrap();
        assert_eq!(labeled.len(), 8);
        let count = |cls| labeled.iter().filter(|t| t.class() == Some(cls)).count();
        assert_eq!(
            [count(TopologyClass::A), count(TopologyClass::B), count(TopologyClass::C), count(TopologyClass::D)],
            [1, 3, 3, 1]
        );
        assert_eq!(labeled.iter().filter(|t| t.edges().len() == 2).count(), 3);

        let reps = enumerate_topologies(3, false).unwrap();
        let classes: Vec<_> = reps.iter().map(|t| t.class().unwrap()).collect();
        assert_eq!(classes, vec![TopologyClass::A, TopologyClass::B, TopologyClass::C, TopologyClass::D]);
        assert!(enumerate_topologies(4, true).is_err());
    }

    #[test]
    fn topology_rejects_bad_edges() {
        assert!(Topology::new(3, [(1, 1)]).is_err());
        assert!(Topology::new(3, [(0, 3)]).is_err());
        let lam = Topology::lambda_canonical();
        assert_eq!(lam.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn labels_round_trip() {
        for idx in 0..8 {
            let label = basis_label(idx, 3);
            assert_eq!(parse_basis_label(&label).unwrap(), (idx, 3));
        }
        assert_eq!(basis_label(1, 3), "00X");
        assert!(parse_basis_label("0Y0").is_err());
    }

    #[test]
    fn permutation_operator_moves_excitations() {
        let p = permutation_operator(&[1, 0, 2]).unwrap();
        // |00X⟩ (qubit 0 excited) → |0X0⟩
        assert_eq!(p.matrix()[[2, 1]], c(1.0));
        assert!(permutation_operator(&[0, 0, 1]).is_err());
    }
}
