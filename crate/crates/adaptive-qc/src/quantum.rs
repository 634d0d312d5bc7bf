//! Dense complex linear algebra for qubit systems.
//!
//! Operators are [`ComplexMatrix`] values. Qubit `1` is the most significant
//! bit of a basis index. Superoperators act on column-stacked vectorizations,
//! so `vec(X)[i + d*j] = X[(i, j)]` and the map `X ↦ A X B` has superoperator
//! `Bᵀ ⊗ A`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{unknown, Error, Result};

/// Complex scalar type.
pub type C64 = Complex64;
/// Dense complex matrix.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Tolerance for structural validity checks and equality assertions.
pub const TOL: f64 = 1e-9;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// An exact angle `(num/den)·π`, stored in lowest terms with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Angle {
    num: i64,
    den: i64,
}

impl Angle {
    /// The zero angle.
    pub const ZERO: Angle = Angle { num: 0, den: 1 };
    /// The angle π/4.
    pub const PI_4: Angle = Angle { num: 1, den: 4 };
    /// The angle −π/4.
    pub const MINUS_PI_4: Angle = Angle { num: -1, den: 4 };
    /// The angle π/2.
    pub const PI_2: Angle = Angle { num: 1, den: 2 };

    /// Builds `(num/den)·π`, reducing the fraction.
    pub fn new(num: i64, den: i64) -> Result<Angle> {
        if den == 0 {
            return Err(Error::Invalid("angle denominator must be non-zero".into()));
        }
        let g = num.gcd(&den).max(1);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Ok(Angle { num: n, den: d })
    }

    /// Numerator of the multiple of π.
    pub fn numerator(self) -> i64 {
        self.num
    }

    /// Denominator of the multiple of π.
    pub fn denominator(self) -> i64 {
        self.den
    }

    /// The angle in radians.
    pub fn radians(self) -> f64 {
        PI * self.num as f64 / self.den as f64
    }

    /// `e^{iα}`.
    pub fn phase(self) -> C64 {
        C64::from_polar(1.0, self.radians())
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle {
            num: -self.num,
            den: self.den,
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "0"),
            (n, 1) => write!(f, "{n}π"),
            (n, d) => write!(f, "{n}π/{d}"),
        }
    }
}

/// Number of qubits `m` with `2^m = d`.
pub fn qubits_of_dim(d: usize) -> Result<usize> {
    if d == 0 || !d.is_power_of_two() {
        return Err(Error::Dimension(format!("{d} is not a power of two")));
    }
    Ok(d.trailing_zeros() as usize)
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// The standard one- and two-qubit gates `X, Y, Z, H, T, S, E`.
///
/// `E` is the controlled-Z gate `diag(1, 1, 1, -1)`.
pub fn gate(name: &str) -> Result<ComplexMatrix> {
    let i = C64::i();
    let h = FRAC_1_SQRT_2;
    Ok(match name {
        "I" => ComplexMatrix::identity(2, 2),
        "X" => ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        "Y" => ComplexMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]),
        "Z" => ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        "H" => ComplexMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)]),
        "T" => ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, Angle::PI_4.phase()]),
        "S" => ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, i]),
        "E" => ComplexMatrix::from_diagonal(&DVector::from_vec(vec![ONE, ONE, ONE, -ONE])),
        other => return Err(unknown("gate", other)),
    })
}

/// Phase gate `diag(1, e^{iα})`.
pub fn phase_gate(alpha: Angle) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, alpha.phase()])
}

/// Column vector of the computational basis state `index` on `qubits` qubits.
pub fn ket(index: usize, qubits: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(1 << qubits, 1);
    v[(index, 0)] = ONE;
    v
}

/// The state `|+_α^r⟩ = (|0⟩ + (−1)^r e^{iα}|1⟩)/√2` as a column vector.
pub fn alpha_ket(alpha: Angle, r: bool) -> ComplexMatrix {
    let sign = if r { -1.0 } else { 1.0 };
    ComplexMatrix::from_column_slice(2, 1, &[c(FRAC_1_SQRT_2), alpha.phase() * sign * FRAC_1_SQRT_2])
}

/// The rank-one projector `|ψ⟩⟨ψ|` of a column vector.
pub fn outer(v: &ComplexMatrix) -> ComplexMatrix {
    v * v.adjoint()
}

/// Kind of single-qubit rank-one projector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectorKind {
    /// `½(1 + (−1)^r Z)`.
    Z,
    /// `½(1 + (−1)^r (cos α X + sin α Y))`.
    Alpha(Angle),
    /// `S^s Π_X^r (S^s)†`: an X measurement for `s = 0`, a Y measurement for `s = 1`.
    XTwist(bool),
}

/// Eigenvector of the projector of `kind` with outcome `r`.
pub fn projector_ket(kind: ProjectorKind, r: bool) -> ComplexMatrix {
    match kind {
        ProjectorKind::Z => ket(r as usize, 1),
        ProjectorKind::Alpha(a) => alpha_ket(a, r),
        ProjectorKind::XTwist(s) => {
            let v = alpha_ket(Angle::ZERO, r);
            if s {
                gate("S").expect("known gate") * v
            } else {
                v
            }
        }
    }
}

/// Rank-one projector of `kind` with outcome bit `r`.
pub fn projector(kind: ProjectorKind, r: bool) -> ComplexMatrix {
    outer(&projector_ket(kind, r))
}

/// Kronecker product of a list of matrices, left factor most significant.
pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .fold(ComplexMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// Tensor product of single-qubit Paulis named by a string such as `"XYY"`.
pub fn pauli_string(s: &str) -> Result<ComplexMatrix> {
    let mats = s
        .chars()
        .map(|ch| gate(&ch.to_string()))
        .collect::<Result<Vec<_>>>()?;
    Ok(kron_all(&mats))
}

/// Largest absolute entry of a matrix.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entrywise difference; `∞` on shape mismatch.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn min_hermitian_eigenvalue(m: &ComplexMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let h = (m + m.adjoint()) * c(0.5);
    SymmetricEigen::new(h).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// A completely positive map `L((ℂ²)^⊗m) → L((ℂ²)^⊗n)` stored as a superoperator.
#[derive(Clone, Debug, PartialEq)]
pub struct CpMap {
    in_qubits: usize,
    out_qubits: usize,
    superop: ComplexMatrix,
}

impl CpMap {
    /// Wraps a `d_out² × d_in²` superoperator without checking complete positivity.
    pub fn from_superop(in_qubits: usize, out_qubits: usize, superop: ComplexMatrix) -> Result<CpMap> {
        let (di, dout) = (1usize << in_qubits, 1usize << out_qubits);
        if superop.shape() != (dout * dout, di * di) {
            return Err(Error::Dimension(format!(
                "superoperator of shape {:?} does not act {in_qubits} → {out_qubits} qubits",
                superop.shape()
            )));
        }
        Ok(CpMap {
            in_qubits,
            out_qubits,
            superop,
        })
    }

    /// The map `X ↦ A X A†` for a `d_out × d_in` matrix `A`.
    pub fn from_conjugation(a: &ComplexMatrix) -> Result<CpMap> {
        let m = qubits_of_dim(a.ncols())?;
        let n = qubits_of_dim(a.nrows())?;
        CpMap::from_superop(m, n, a.conjugate().kronecker(a))
    }

    /// The map `X ↦ Σ_k K_k X K_k†`.
    pub fn from_kraus(ops: &[ComplexMatrix]) -> Result<CpMap> {
        let first = ops
            .first()
            .ok_or_else(|| Error::Invalid("empty Kraus list".into()))?;
        let mut acc = CpMap::from_conjugation(first)?;
        for k in &ops[1..] {
            acc = acc.add(&CpMap::from_conjugation(k)?)?;
        }
        Ok(acc)
    }

    /// The identity map on `m` qubits.
    pub fn identity(m: usize) -> CpMap {
        let d = 1usize << (2 * m);
        CpMap {
            in_qubits: m,
            out_qubits: m,
            superop: ComplexMatrix::identity(d, d),
        }
    }

    /// The zero map `m → n` qubits.
    pub fn zero(m: usize, n: usize) -> CpMap {
        CpMap {
            in_qubits: m,
            out_qubits: n,
            superop: ComplexMatrix::zeros(1 << (2 * n), 1 << (2 * m)),
        }
    }

    /// Multiplication by a non-negative scalar on `ℂ`.
    pub fn scalar(value: f64) -> Result<CpMap> {
        if value < -TOL {
            return Err(Error::Invalid(format!("negative scalar CP map {value}")));
        }
        Ok(CpMap {
            in_qubits: 0,
            out_qubits: 0,
            superop: ComplexMatrix::from_element(1, 1, c(value.max(0.0))),
        })
    }

    /// The trace `L((ℂ²)^⊗m) → ℂ`.
    pub fn trace(m: usize) -> CpMap {
        let d = 1usize << m;
        let mut s = ComplexMatrix::zeros(1, d * d);
        for i in 0..d {
            s[(0, i + d * i)] = ONE;
        }
        CpMap {
            in_qubits: m,
            out_qubits: 0,
            superop: s,
        }
    }

    /// Number of input qubits.
    pub fn in_qubits(&self) -> usize {
        self.in_qubits
    }

    /// Number of output qubits.
    pub fn out_qubits(&self) -> usize {
        self.out_qubits
    }

    /// The superoperator matrix.
    pub fn superop(&self) -> &ComplexMatrix {
        &self.superop
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &CpMap) -> Result<CpMap> {
        if self.out_qubits != next.in_qubits {
            return Err(Error::Dimension(format!(
                "cannot compose {}-qubit output with {}-qubit input",
                self.out_qubits, next.in_qubits
            )));
        }
        Ok(CpMap {
            in_qubits: self.in_qubits,
            out_qubits: next.out_qubits,
            superop: &next.superop * &self.superop,
        })
    }

    /// Tensor product `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &CpMap) -> CpMap {
        let (ai, ao) = (1usize << self.in_qubits, 1usize << self.out_qubits);
        let (bi, bo) = (1usize << other.in_qubits, 1usize << other.out_qubits);
        let (di, dout) = (ai * bi, ao * bo);
        let mut s = ComplexMatrix::zeros(dout * dout, di * di);
        let nz = |m: &ComplexMatrix| {
            let mut v = Vec::new();
            for col in 0..m.ncols() {
                for row in 0..m.nrows() {
                    let z = m[(row, col)];
                    if z != ZERO {
                        v.push((row, col, z));
                    }
                }
            }
            v
        };
        let a_nz = nz(&self.superop);
        let b_nz = nz(&other.superop);
        for &(ar, ac, az) in &a_nz {
            let (a_i2, a_j2) = (ar % ao, ar / ao);
            let (a_i1, a_j1) = (ac % ai, ac / ai);
            for &(br, bc, bz) in &b_nz {
                let (b_i2, b_j2) = (br % bo, br / bo);
                let (b_i1, b_j1) = (bc % bi, bc / bi);
                let row = (a_i2 * bo + b_i2) + dout * (a_j2 * bo + b_j2);
                let col = (a_i1 * bi + b_i1) + di * (a_j1 * bi + b_j1);
                s[(row, col)] += az * bz;
            }
        }
        CpMap {
            in_qubits: self.in_qubits + other.in_qubits,
            out_qubits: self.out_qubits + other.out_qubits,
            superop: s,
        }
    }

    /// Pointwise sum of two maps with equal arities.
    pub fn add(&self, other: &CpMap) -> Result<CpMap> {
        if (self.in_qubits, self.out_qubits) != (other.in_qubits, other.out_qubits) {
            return Err(Error::Dimension("cannot add CP maps of different arities".into()));
        }
        Ok(CpMap {
            in_qubits: self.in_qubits,
            out_qubits: self.out_qubits,
            superop: &self.superop + &other.superop,
        })
    }

    /// Multiplication by a non-negative real.
    pub fn scale(&self, factor: f64) -> CpMap {
        CpMap {
            in_qubits: self.in_qubits,
            out_qubits: self.out_qubits,
            superop: &self.superop * c(factor),
        }
    }

    /// Applies the map to an operator.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let di = 1usize << self.in_qubits;
        if x.shape() != (di, di) {
            return Err(Error::Dimension(format!(
                "operator of shape {:?} given to a map on {} qubits",
                x.shape(),
                self.in_qubits
            )));
        }
        let v = DVector::from_column_slice(x.as_slice());
        let w = &self.superop * v;
        let dout = 1usize << self.out_qubits;
        Ok(ComplexMatrix::from_column_slice(dout, dout, w.as_slice()))
    }

    /// Choi matrix `Σ_ij E_ij ⊗ Φ(E_ij)`.
    pub fn choi(&self) -> ComplexMatrix {
        let (di, dout) = (1usize << self.in_qubits, 1usize << self.out_qubits);
        let mut j = ComplexMatrix::zeros(di * dout, di * dout);
        for i in 0..di {
            for jj in 0..di {
                for ip in 0..dout {
                    for jp in 0..dout {
                        j[(i * dout + ip, jj * dout + jp)] = self.superop[(ip + dout * jp, i + di * jj)];
                    }
                }
            }
        }
        j
    }

    /// Rebuilds a map from its Choi matrix.
    pub fn from_choi(in_qubits: usize, out_qubits: usize, choi: &ComplexMatrix) -> Result<CpMap> {
        let (di, dout) = (1usize << in_qubits, 1usize << out_qubits);
        if choi.shape() != (di * dout, di * dout) {
            return Err(Error::Dimension("Choi matrix has the wrong shape".into()));
        }
        let mut s = ComplexMatrix::zeros(dout * dout, di * di);
        for i in 0..di {
            for jj in 0..di {
                for ip in 0..dout {
                    for jp in 0..dout {
                        s[(ip + dout * jp, i + di * jj)] = choi[(i * dout + ip, jj * dout + jp)];
                    }
                }
            }
        }
        CpMap::from_superop(in_qubits, out_qubits, s)
    }

    /// Complete positivity: the Choi matrix is Hermitian with eigenvalues `≥ −tol`.
    pub fn is_cp(&self, tol: f64) -> bool {
        let j = self.choi();
        max_abs_diff(&j, &j.adjoint()) <= tol && min_hermitian_eigenvalue(&j) >= -tol
    }

    /// Trace preservation: the partial trace of the Choi matrix over the output is the identity.
    pub fn is_tp(&self, tol: f64) -> bool {
        max_abs_diff(&self.output_partial_trace(), &ComplexMatrix::identity(1 << self.in_qubits, 1 << self.in_qubits)) <= tol
    }

    /// `Tr_out` of the Choi matrix; the identity exactly when the map is trace preserving.
    pub fn output_partial_trace(&self) -> ComplexMatrix {
        let (di, dout) = (1usize << self.in_qubits, 1usize << self.out_qubits);
        let j = self.choi();
        ComplexMatrix::from_fn(di, di, |a, b| (0..dout).map(|k| j[(a * dout + k, b * dout + k)]).sum())
    }

    /// A Kraus decomposition computed from the Choi matrix; eigenvalues below `tol` are dropped.
    pub fn kraus(&self, tol: f64) -> Vec<ComplexMatrix> {
        let (di, dout) = (1usize << self.in_qubits, 1usize << self.out_qubits);
        let j = self.choi();
        let h = (&j + j.adjoint()) * c(0.5);
        let eig = SymmetricEigen::new(h);
        let mut ops = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= tol {
                continue;
            }
            let v = eig.eigenvectors.column(k);
            let scale = lambda.sqrt();
            ops.push(ComplexMatrix::from_fn(dout, di, |ip, i| v[i * dout + ip] * scale));
        }
        ops
    }

    /// Largest absolute superoperator entry difference; `∞` on arity mismatch.
    pub fn distance(&self, other: &CpMap) -> f64 {
        if (self.in_qubits, self.out_qubits) != (other.in_qubits, other.out_qubits) {
            return f64::INFINITY;
        }
        max_abs_diff(&self.superop, &other.superop)
    }

    /// True when every superoperator entry is zero within `tol`.
    pub fn is_zero(&self, tol: f64) -> bool {
        max_abs(&self.superop) <= tol
    }
}

/// `X ↦ A X A†`.
pub fn cp_from_conjugation(a: &ComplexMatrix) -> Result<CpMap> {
    CpMap::from_conjugation(a)
}

/// `X ↦ Σ_k K_k X K_k†`.
pub fn cp_from_kraus(ops: &[ComplexMatrix]) -> Result<CpMap> {
    CpMap::from_kraus(ops)
}

/// `outer ∘ inner`.
pub fn compose_cp(outer: &CpMap, inner: &CpMap) -> Result<CpMap> {
    inner.then(outer)
}

/// `a ⊗ b`.
pub fn tensor_cp(a: &CpMap, b: &CpMap) -> CpMap {
    a.tensor(b)
}

/// `Φ(ρ)`.
pub fn apply_cp(phi: &CpMap, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    phi.apply(rho)
}

/// The trace map on `m` qubits.
pub fn trace_cp(m: usize) -> CpMap {
    CpMap::trace(m)
}

/// Multiplication by `value ≥ 0` on `ℂ`.
pub fn scalar_cp(value: f64) -> Result<CpMap> {
    CpMap::scalar(value)
}

/// Choi matrix of a map.
pub fn choi(phi: &CpMap) -> ComplexMatrix {
    phi.choi()
}

/// See [`CpMap::is_cp`].
pub fn is_cp(phi: &CpMap, tol: f64) -> bool {
    phi.is_cp(tol)
}

/// See [`CpMap::is_tp`].
pub fn is_tp(phi: &CpMap, tol: f64) -> bool {
    phi.is_tp(tol)
}

/// Validates a 1-based permutation of `1..=m` and returns it 0-based.
pub fn check_permutation(perm: &[usize], m: usize) -> Result<Vec<usize>> {
    if perm.len() != m {
        return Err(Error::Invalid(format!("permutation of length {} for {m} wires", perm.len())));
    }
    let mut seen = vec![false; m];
    let mut out = Vec::with_capacity(m);
    for &p in perm {
        if p == 0 || p > m || seen[p - 1] {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation of 1..={m}")));
        }
        seen[p - 1] = true;
        out.push(p - 1);
    }
    Ok(out)
}

/// Basis-index map of the wire permutation sending qubit `i` to position `perm[i]` (0-based).
pub fn permutation_index_map(perm0: &[usize]) -> Vec<usize> {
    let m = perm0.len();
    (0..1usize << m)
        .map(|x| {
            let mut y = 0usize;
            for (i, &p) in perm0.iter().enumerate() {
                let bit = (x >> (m - 1 - i)) & 1;
                y |= bit << (m - 1 - p);
            }
            y
        })
        .collect()
}

/// Conjugation by the qubit-permutation unitary moving wire `i` to wire `perm[i]` (1-based).
pub fn permute_wires(perm: &[usize], m: usize) -> Result<CpMap> {
    let perm0 = check_permutation(perm, m)?;
    let map = permutation_index_map(&perm0);
    let d = 1usize << m;
    let mut u = ComplexMatrix::zeros(d, d);
    for (x, &y) in map.iter().enumerate() {
        u[(y, x)] = ONE;
    }
    CpMap::from_conjugation(&u)
}

/// A density operator on `qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<DensityMatrix> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension("density matrix must be square".into()));
        }
        let qubits = qubits_of_dim(matrix.nrows())?;
        if max_abs_diff(&matrix, &matrix.adjoint()) > 1e-10 {
            return Err(Error::Invalid("density matrix is not Hermitian".into()));
        }
        if (matrix.trace() - ONE).norm() > 1e-10 {
            return Err(Error::Invalid("density matrix does not have unit trace".into()));
        }
        if min_hermitian_eigenvalue(&matrix) < -TOL {
            return Err(Error::Invalid("density matrix is not positive semidefinite".into()));
        }
        Ok(DensityMatrix { qubits, matrix })
    }

    /// The pure state of a (not necessarily normalized) column vector.
    pub fn pure(v: &ComplexMatrix) -> Result<DensityMatrix> {
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::Invalid("zero state vector".into()));
        }
        DensityMatrix::new(outer(&(v / c(norm))))
    }

    /// `|0…0⟩⟨0…0|`.
    pub fn zero_state(qubits: usize) -> DensityMatrix {
        DensityMatrix {
            qubits,
            matrix: outer(&ket(0, qubits)),
        }
    }

    /// `1/2^n · I`.
    pub fn maximally_mixed(qubits: usize) -> DensityMatrix {
        let d = 1usize << qubits;
        DensityMatrix {
            qubits,
            matrix: ComplexMatrix::identity(d, d) * c(1.0 / d as f64),
        }
    }

    /// Number of qubits.
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `Tr(ρ O)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<C64> {
        if op.shape() != self.matrix.shape() {
            return Err(Error::Dimension("observable and state dimensions differ".into()));
        }
        Ok((&self.matrix * op).trace())
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// `|GHZ⟩⟨GHZ|` with `|GHZ⟩ = (|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_density(n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::Invalid("GHZ state needs at least one qubit".into()));
    }
    let d = 1usize << n;
    let mut v = ComplexMatrix::zeros(d, 1);
    v[(0, 0)] = c(FRAC_1_SQRT_2);
    v[(d - 1, 0)] = c(FRAC_1_SQRT_2);
    DensityMatrix::pure(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_reduces_and_normalizes_sign() {
        assert_eq!(Angle::new(2, -8).unwrap(), Angle::MINUS_PI_4);
        assert!(Angle::new(1, 0).is_err());
        assert_eq!(Angle::new(0, 5).unwrap(), Angle::ZERO);
        assert_eq!(Angle::PI_4.to_string(), "1π/4");
    }

    #[test]
    fn gate_x_matches_pauli_display() {
        let x = gate("X").unwrap();
        assert_eq!(x[(0, 1)], ONE);
        assert_eq!(x[(1, 0)], ONE);
        assert_eq!(x[(0, 0)], ZERO);
        assert!(gate("Q").is_err());
    }

    #[test]
    fn s_squared_is_z() {
        let s = gate("S").unwrap();
        assert!(max_abs_diff(&(&s * &s), &gate("Z").unwrap()) < 1e-15);
        let t = gate("T").unwrap();
        assert!(max_abs_diff(&(&t * &t), &s) < 1e-15);
    }

    #[test]
    fn e_is_controlled_z() {
        let e = gate("E").unwrap();
        let expected = ket(0, 1) * ket(0, 1).adjoint();
        let expected = expected.kronecker(&ComplexMatrix::identity(2, 2))
            + (ket(1, 1) * ket(1, 1).adjoint()).kronecker(&gate("Z").unwrap());
        assert!(max_abs_diff(&e, &expected) < 1e-15);
    }

    #[test]
    fn projectors_match_closed_forms() {
        let p0 = projector(ProjectorKind::Z, false);
        assert!(max_abs_diff(&p0, &ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO])) < 1e-15);
        let py = projector(ProjectorKind::Alpha(Angle::PI_2), false);
        let expected = (ComplexMatrix::identity(2, 2) + gate("Y").unwrap()) * c(0.5);
        assert!(max_abs_diff(&py, &expected) < 1e-15);
        let yt = projector(ProjectorKind::XTwist(true), false);
        assert!(max_abs_diff(&yt, &expected) < 1e-15);
    }

    #[test]
    fn hadamard_maps_zero_to_plus() {
        let h = cp_from_conjugation(&gate("H").unwrap()).unwrap();
        let out = h.apply(&outer(&ket(0, 1))).unwrap();
        assert!(max_abs_diff(&out, &ComplexMatrix::from_element(2, 2, c(0.5))) < 1e-15);
    }

    #[test]
    fn trace_map_is_trace_preserving() {
        let t = trace_cp(1);
        assert!(t.is_cp(TOL) && t.is_tp(TOL));
        assert!(max_abs_diff(&t.output_partial_trace(), &ComplexMatrix::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn unitary_then_adjoint_is_identity() {
        let t = gate("T").unwrap();
        let a = cp_from_conjugation(&t).unwrap();
        let b = cp_from_conjugation(&t.adjoint()).unwrap();
        assert!(compose_cp(&b, &a).unwrap().distance(&CpMap::identity(1)) < 1e-12);
    }

    #[test]
    fn identity_choi_is_unnormalized_bell_projector() {
        let j = CpMap::identity(1).choi();
        for (r, cidx) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_eq!(j[(r, cidx)], ONE);
        }
        assert_eq!(j.iter().filter(|z| **z != ZERO).count(), 4);
    }

    #[test]
    fn transpose_map_is_not_cp() {
        let mut s = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                s[(j + 2 * i, i + 2 * j)] = ONE;
            }
        }
        let t = CpMap::from_superop(1, 1, s).unwrap();
        assert!(!t.is_cp(TOL));
        assert!(t.is_tp(TOL));
    }

    #[test]
    fn depolarizing_map_is_channel() {
        let k: Vec<_> = ["I", "X", "Y", "Z"]
            .iter()
            .map(|g| gate(g).unwrap() * c(0.5))
            .collect();
        let phi = cp_from_kraus(&k).unwrap();
        assert!(phi.is_cp(TOL) && phi.is_tp(TOL));
        let rho = outer(&ket(1, 1));
        assert!(max_abs_diff(&phi.apply(&rho).unwrap(), &(ComplexMatrix::identity(2, 2) * c(0.5))) < 1e-15);
    }

    #[test]
    fn swap_moves_basis_state() {
        let swap = permute_wires(&[2, 1], 2).unwrap();
        let out = swap.apply(&outer(&ket(0b01, 2))).unwrap();
        assert!(max_abs_diff(&out, &outer(&ket(0b10, 2))) < 1e-15);
        assert!(permute_wires(&[1, 1], 2).is_err());
        assert!(permute_wires(&[1, 2, 3], 3).unwrap().distance(&CpMap::identity(3)) < 1e-15);
    }

    #[test]
    fn permutation_and_inverse_cancel() {
        let p = permute_wires(&[2, 3, 1], 3).unwrap();
        let q = permute_wires(&[3, 1, 2], 3).unwrap();
        assert!(p.then(&q).unwrap().distance(&CpMap::identity(3)) < 1e-15);
    }

    #[test]
    fn ghz_state_properties() {
        let g1 = ghz_density(1).unwrap();
        assert!(max_abs_diff(g1.matrix(), &ComplexMatrix::from_element(2, 2, c(0.5))) < 1e-15);
        let g = ghz_density(3).unwrap();
        assert!((g.purity() - 1.0).abs() < 1e-12);
        assert!((g.expectation(&pauli_string("XXX").unwrap()).unwrap() - ONE).norm() < 1e-12);
        assert!((g.expectation(&pauli_string("ZZI").unwrap()).unwrap() - ONE).norm() < 1e-12);
        assert!(ghz_density(0).is_err());
    }

    #[test]
    fn kraus_roundtrip() {
        let phi = cp_from_kraus(&[gate("H").unwrap() * c(0.6), gate("Z").unwrap() * c(0.8)]).unwrap();
        let again = cp_from_kraus(&phi.kraus(1e-12)).unwrap();
        assert!(phi.distance(&again) < 1e-12);
    }
}
