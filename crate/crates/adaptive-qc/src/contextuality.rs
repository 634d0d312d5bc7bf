//! Simplicial Bell scenarios on the joined sphere, local deterministic
//! strategies, the noncontextual fraction, distances to affine Boolean
//! functions and the bound on the success probability of computing a Boolean
//! function with a Bell instrument.

use num_rational::{BigRational, Rational64};
use num_traits::Zero;

use crate::dpg::{Dpg, Endpoint, GraphBuilder};
use crate::error::{Error, Result};
use crate::inst::{born_at, AdaptiveInstrument, KleisliMap};
use crate::lp::{maximize, rationalize, LpScalar};
use crate::models::gadgets::{copy_into, xor_into, zero_into};
use crate::models::{evaluate, labels, semantics, LabelSemantics, Model};
use crate::quantum::{ghz_density, projector, CpMap, DensityMatrix, ProjectorKind};

/// Slack allowed by [`bound_check`].
pub const BOUND_SLACK: f64 = 1e-7;

/// Probabilities usable in scenarios: floats with a validation tolerance or exact rationals.
pub trait Probability: LpScalar {
    /// Tolerance for normalization and compatibility checks.
    fn validation_tol() -> Self;
}

impl Probability for f64 {
    fn validation_tol() -> f64 {
        1e-9
    }
}

impl Probability for BigRational {
    fn validation_tol() -> BigRational {
        BigRational::zero()
    }
}

fn within<T: Probability>(a: &T, b: &T, tol: &T) -> bool {
    let d = if a > b { a.clone() - b.clone() } else { b.clone() - a.clone() };
    d <= *tol
}

/// A simplex of the join `S⁰ ⋆ ⋯ ⋆ S⁰` (`m` factors): for every factor either
/// one of its two points or nothing.
///
/// The generating simplices `σ_{i₁…i_m}` choose a point in every factor. The
/// face `d_k` removes the `k`-th chosen point (0-based), so the last face of a
/// generating simplex forgets the last setting bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphereSimplex {
    coords: Vec<Option<bool>>,
}

impl SphereSimplex {
    /// The generating simplex `σ_{i₁…i_m}` of a packed big-endian bit string.
    pub fn generating(m: usize, bits: usize) -> Result<SphereSimplex> {
        if bits >= 1 << m {
            return Err(Error::Invalid(format!("setting {bits} out of range for m = {m}")));
        }
        let coords = (0..m).map(|j| Some((bits >> (m - 1 - j)) & 1 == 1)).collect();
        Ok(SphereSimplex { coords })
    }

    /// Number of join factors.
    pub fn m(&self) -> usize {
        self.coords.len()
    }

    /// Chosen point per factor.
    pub fn coords(&self) -> &[Option<bool>] {
        &self.coords
    }

    /// Simplicial dimension: number of chosen points minus one.
    pub fn dimension(&self) -> isize {
        self.coords.iter().filter(|c| c.is_some()).count() as isize - 1
    }

    /// The face `d_k`.
    pub fn face(&self, k: usize) -> Result<SphereSimplex> {
        let pos = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_some())
            .map(|(i, _)| i)
            .nth(k)
            .ok_or_else(|| Error::Invalid(format!("face {k} of a simplex of dimension {}", self.dimension())))?;
        let mut coords = self.coords.clone();
        coords[pos] = None;
        Ok(SphereSimplex { coords })
    }
}

/// A table of outcome distributions `p_i(s)` over `i, s ∈ ℤ₂^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct BellScenario<T = f64> {
    m: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Probability> BellScenario<T> {
    /// Validates shape, non-negativity and normalization of every row.
    pub fn new(m: usize, rows: Vec<Vec<T>>) -> Result<BellScenario<T>> {
        let size = 1usize << m;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidDistribution(format!("scenario with m = {m} needs {size} rows of length {size}")));
        }
        let tol = T::validation_tol();
        for (i, row) in rows.iter().enumerate() {
            let neg = T::zero() - tol.clone();
            if row.iter().any(|p| *p < neg) {
                return Err(Error::InvalidDistribution(format!("row {i} has a negative entry")));
            }
            let sum = row.iter().cloned().fold(T::zero(), |a, b| a + b);
            if !within(&sum, &T::one(), &tol) {
                return Err(Error::InvalidDistribution(format!("row {i} sums to {:?}", sum.to_f64())));
            }
        }
        Ok(BellScenario { m, rows })
    }

    /// Number of parties.
    pub fn m(&self) -> usize {
        self.m
    }

    /// All rows, indexed by setting.
    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// Probability of outcome `s` at setting `i`.
    pub fn prob(&self, i: usize, s: usize) -> &T {
        &self.rows[i][s]
    }

    /// The marginal of row `i` with party `j` (0-based) summed out, indexed by
    /// the remaining outcome bits.
    pub fn marginal(&self, i: usize, j: usize) -> Vec<T> {
        let m = self.m;
        let mut out = vec![T::zero(); 1 << (m - 1)];
        for (s, p) in self.rows[i].iter().enumerate() {
            out[remove_bit(s, m - 1 - j)] = out[remove_bit(s, m - 1 - j)].clone() + p.clone();
        }
        out
    }

    /// The distribution on the face shared by `σ_i` and `σ_{i ⊕ e_j}`.
    pub fn face_distribution(&self, i: usize, j: usize) -> Vec<T> {
        self.marginal(i, j)
    }

    /// Float copy.
    pub fn to_f64(&self) -> BellScenario<f64> {
        BellScenario {
            m: self.m,
            rows: self.rows.iter().map(|r| r.iter().map(LpScalar::to_f64).collect()).collect(),
        }
    }
}

impl BellScenario<f64> {
    /// Exact copy with every probability snapped by [`rationalize`].
    pub fn to_exact(&self) -> Result<BellScenario<BigRational>> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|p| rationalize(*p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(BellScenario { m: self.m, rows })
    }
}

fn remove_bit(x: usize, bit: usize) -> usize {
    let low = x & ((1 << bit) - 1);
    let high = x >> (bit + 1);
    (high << bit) | low
}

/// Marginal independence for one party: the distribution of the other
/// parties' outcomes does not depend on the setting of party `j`.
pub fn check_party_compatibility<T: Probability>(sc: &BellScenario<T>, j: usize, tol: &T) -> bool {
    let m = sc.m;
    j < m
        && (0..1usize << m).all(|i| {
            let flipped = i ^ (1 << (m - 1 - j));
            sc.marginal(i, j)
                .iter()
                .zip(sc.marginal(flipped, j))
                .all(|(a, b)| within(a, &b, tol))
        })
}

/// Per-party marginal independence: for every party `j` and setting `i`, the
/// marginal over the other parties does not depend on `i_j`.
pub fn check_compatibility<T: Probability>(sc: &BellScenario<T>, tol: &T) -> bool {
    (0..sc.m).all(|j| check_party_compatibility(sc, j, tol))
}

/// A local deterministic strategy: one function `g_j: ℤ₂ → ℤ₂` per party.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalStrategy {
    funcs: Vec<[bool; 2]>,
}

impl LocalStrategy {
    /// A strategy from its per-party value tables `[g_j(0), g_j(1)]`.
    pub fn new(funcs: Vec<[bool; 2]>) -> LocalStrategy {
        LocalStrategy { funcs }
    }

    /// The per-party tables.
    pub fn funcs(&self) -> &[[bool; 2]] {
        &self.funcs
    }

    /// The outcome string `s` with `s_j = g_j(i_j)`.
    pub fn outcome(&self, i: usize) -> usize {
        let m = self.funcs.len();
        self.funcs
            .iter()
            .enumerate()
            .fold(0, |acc, (j, g)| (acc << 1) | g[(i >> (m - 1 - j)) & 1] as usize)
    }
}

/// All `4^m` strategies; index `Σ_j c_j 4^{m−1−j}` with `c_j = 2·g_j(0) + g_j(1)`.
pub fn strategies(m: usize) -> Vec<LocalStrategy> {
    (0..1usize << (2 * m))
        .map(|x| {
            let funcs = (0..m)
                .map(|j| {
                    let c = (x >> (2 * (m - 1 - j))) & 3;
                    [c & 2 != 0, c & 1 != 0]
                })
                .collect();
            LocalStrategy { funcs }
        })
        .collect()
}

/// The deterministic scenario `p_i = δ_{g(i)}`.
pub fn strategy_scenario<T: Probability>(g: &LocalStrategy) -> BellScenario<T> {
    let m = g.funcs.len();
    let rows = (0..1usize << m)
        .map(|i| {
            let s = g.outcome(i);
            (0..1usize << m).map(|t| if t == s { T::one() } else { T::zero() }).collect()
        })
        .collect();
    BellScenario { m, rows }
}

/// The convex mixture `Σ_g w_g δ_{g(i)}` with weights indexed as in [`strategies`].
pub fn strategy_mixture(m: usize, weights: &[f64]) -> Result<BellScenario<f64>> {
    let all = strategies(m);
    if weights.len() != all.len() {
        return Err(Error::InvalidDistribution(format!("need {} weights, got {}", all.len(), weights.len())));
    }
    if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution("weights must be non-negative and sum to 1".into()));
    }
    let size = 1usize << m;
    let mut rows = vec![vec![0.0; size]; size];
    for (g, w) in all.iter().zip(weights) {
        for (i, row) in rows.iter_mut().enumerate() {
            row[g.outcome(i)] += w;
        }
    }
    BellScenario::new(m, rows)
}

/// Strategies `g` with `p_i(g(i)) > tol` for every setting `i`.
pub fn support<T: Probability>(sc: &BellScenario<T>) -> Vec<LocalStrategy> {
    let tol = T::validation_tol();
    strategies(sc.m)
        .into_iter()
        .filter(|g| (0..1usize << sc.m).all(|i| sc.rows[i][g.outcome(i)] > tol))
        .collect()
}

/// Whether the support is empty.
pub fn is_strongly_contextual<T: Probability>(sc: &BellScenario<T>) -> bool {
    support(sc).is_empty()
}

/// The noncontextual fraction: the largest total weight of strategies whose
/// mixture is dominated entrywise by the scenario. Errors on incompatible scenarios.
pub fn ncf<T: Probability>(sc: &BellScenario<T>) -> Result<T> {
    if !check_compatibility(sc, &T::validation_tol()) {
        return Err(Error::InvalidDistribution("scenario violates compatibility".into()));
    }
    ncf_unchecked(sc)
}

/// The same linear program as [`ncf`] without the compatibility check.
///
/// Scenarios of adaptive Bell instruments are only marginal-independent for
/// parties whose outcomes control no other party; the program and the
/// decomposition it certifies remain meaningful for every table.
pub fn ncf_unchecked<T: Probability>(sc: &BellScenario<T>) -> Result<T> {
    let all = strategies(sc.m);
    let size = 1usize << sc.m;
    let mut a = Vec::with_capacity(size * size);
    let mut b = Vec::with_capacity(size * size);
    for i in 0..size {
        for s in 0..size {
            a.push(all.iter().map(|g| if g.outcome(i) == s { T::one() } else { T::zero() }).collect());
            b.push(sc.rows[i][s].clone());
        }
    }
    let c = vec![T::one(); all.len()];
    Ok(maximize(&c, &a, &b)?.value)
}

/// The contextual fraction `1 − ncf`.
pub fn cf<T: Probability>(sc: &BellScenario<T>) -> Result<T> {
    Ok(T::one() - ncf(sc)?)
}

/// A total Boolean function `ℤ₂^k → ℤ₂^ℓ` given by its table, big-endian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanFunction {
    k: usize,
    l: usize,
    table: Vec<usize>,
}

impl BooleanFunction {
    /// Validates the table.
    pub fn new(k: usize, l: usize, table: Vec<usize>) -> Result<BooleanFunction> {
        if table.len() != 1 << k || table.iter().any(|&v| v >= 1 << l) {
            return Err(Error::Invalid(format!("table does not describe a map from {k} to {l} bits")));
        }
        Ok(BooleanFunction { k, l, table })
    }

    /// The function of a closure.
    pub fn from_fn(k: usize, l: usize, f: impl Fn(usize) -> usize) -> BooleanFunction {
        BooleanFunction { k, l, table: (0..1 << k).map(|x| f(x) & ((1 << l) - 1)).collect() }
    }

    /// Input bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Output bits.
    pub fn l(&self) -> usize {
        self.l
    }

    /// The table.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Value at `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Two-bit OR.
    pub fn or() -> BooleanFunction {
        BooleanFunction::from_fn(2, 1, |x| (x != 0) as usize)
    }

    /// Two-bit AND.
    pub fn and() -> BooleanFunction {
        BooleanFunction::from_fn(2, 1, |x| (x == 3) as usize)
    }
}

/// An affine map `x ↦ A x ⊕ c` over ℤ₂, with `A` stored as one input bit mask per output bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    k: usize,
    l: usize,
    rows: Vec<usize>,
    constant: usize,
}

impl AffineMap {
    /// Validates the masks: `rows[j]` selects the input bits XORed into output bit `j`.
    pub fn new(k: usize, l: usize, rows: Vec<usize>, constant: usize) -> Result<AffineMap> {
        if rows.len() != l || rows.iter().any(|&r| r >= 1 << k) || constant >= 1 << l {
            return Err(Error::Invalid(format!("affine map data does not fit {k} → {l} bits")));
        }
        Ok(AffineMap { k, l, rows, constant })
    }

    /// The identity on `k` bits.
    pub fn identity(k: usize) -> AffineMap {
        AffineMap { k, l: k, rows: (0..k).map(|j| 1 << (k - 1 - j)).collect(), constant: 0 }
    }

    /// The parity of all `k` input bits.
    pub fn parity(k: usize) -> AffineMap {
        AffineMap { k, l: 1, rows: vec![(1 << k) - 1], constant: 0 }
    }

    /// Input bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Output bits.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Input masks per output bit.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Constant term.
    pub fn constant(&self) -> usize {
        self.constant
    }

    /// Value at `x`.
    pub fn apply(&self, x: usize) -> usize {
        let lin = self
            .rows
            .iter()
            .fold(0usize, |acc, r| (acc << 1) | ((r & x).count_ones() as usize & 1));
        lin ^ self.constant
    }

    /// The affine map with the given table, if the table is affine.
    pub fn from_table(f: &BooleanFunction) -> Option<AffineMap> {
        let (k, l) = (f.k, f.l);
        let c = f.apply(0);
        let cols: Vec<usize> = (0..k).map(|i| f.apply(1 << (k - 1 - i)) ^ c).collect();
        let rows = (0..l)
            .map(|j| {
                (0..k).fold(0usize, |acc, i| (acc << 1) | ((cols[i] >> (l - 1 - j)) & 1))
            })
            .collect();
        let h = AffineMap { k, l, rows, constant: c };
        (0..1usize << k).all(|x| h.apply(x) == f.apply(x)).then_some(h)
    }

    /// All `2^{ℓ(k+1)}` affine maps `ℤ₂^k → ℤ₂^ℓ`.
    pub fn all(k: usize, l: usize) -> impl Iterator<Item = AffineMap> {
        let bits = l * (k + 1);
        (0..1usize << bits).map(move |code| {
            let constant = code & ((1 << l) - 1);
            let rows = (0..l).map(|j| (code >> (l + j * k)) & ((1 << k) - 1)).collect();
            AffineMap { k, l, rows, constant }
        })
    }

    /// The table of the map.
    pub fn to_function(&self) -> BooleanFunction {
        BooleanFunction::from_fn(self.k, self.l, |x| self.apply(x))
    }
}

/// Distance to the nearest affine function: `min_h |{r : f(r) ≠ h(r)}| / 2^k`, by brute force.
pub fn nu(f: &BooleanFunction) -> Rational64 {
    let best = AffineMap::all(f.k, f.l)
        .map(|h| (0..1usize << f.k).filter(|&r| f.apply(r) != h.apply(r)).count())
        .min()
        .unwrap_or(0);
    Rational64::new(best as i64, 1 << f.k)
}

/// Average success probability `2^{-k} Σ_r p_r(f(r))`.
pub fn p_succ(p: &KleisliMap, f: &BooleanFunction) -> Result<f64> {
    if (p.k(), p.l()) != (f.k, f.l) {
        return Err(Error::ArityMismatch(format!(
            "Kleisli map {} → {} against function {} → {}",
            p.k(),
            p.l(),
            f.k,
            f.l
        )));
    }
    let total: f64 = (0..1usize << f.k).map(|r| p.row(r)[f.apply(r)]).sum();
    Ok(total / (1u64 << f.k) as f64)
}

/// Adaptive input of one party: the XOR of the listed earlier outcomes and a constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adaptivity {
    /// Indices (0-based) of earlier parties whose outcomes are XORed in.
    pub earlier: Vec<usize>,
    /// Constant bit.
    pub constant: bool,
}

/// A Bell instrument: single-qubit `(1; 1 → 1; 1)` instruments whose
/// effective setting is the XOR of an external bit and an affine function of
/// earlier outcomes; every qubit is discarded after its measurement.
#[derive(Clone, Debug)]
pub struct BellInstrumentSpec {
    bases: Vec<AdaptiveInstrument>,
    adaptivity: Vec<Adaptivity>,
}

impl BellInstrumentSpec {
    /// Validates arities and that adaptivity only refers to earlier parties.
    pub fn new(bases: Vec<AdaptiveInstrument>, adaptivity: Vec<Adaptivity>) -> Result<BellInstrumentSpec> {
        if bases.len() != adaptivity.len() || bases.is_empty() {
            return Err(Error::Invalid("one adaptivity entry per party is required".into()));
        }
        for (j, (b, a)) in bases.iter().zip(&adaptivity).enumerate() {
            if (b.k(), b.l(), b.m(), b.n()) != (1, 1, 1, 1) {
                return Err(Error::ArityMismatch(format!("party {j} instrument must be (1; 1 → 1; 1)")));
            }
            if a.earlier.iter().any(|&e| e >= j) {
                return Err(Error::Invalid(format!("party {j} depends on a later outcome")));
            }
        }
        Ok(BellInstrumentSpec { bases, adaptivity })
    }

    /// Non-adaptive spec.
    pub fn local(bases: Vec<AdaptiveInstrument>) -> Result<BellInstrumentSpec> {
        let n = bases.len();
        BellInstrumentSpec::new(bases, vec![Adaptivity { earlier: vec![], constant: false }; n])
    }

    /// Number of parties.
    pub fn m(&self) -> usize {
        self.bases.len()
    }

    /// Single-qubit instruments.
    pub fn bases(&self) -> &[AdaptiveInstrument] {
        &self.bases
    }

    /// Adaptive inputs.
    pub fn adaptivity(&self) -> &[Adaptivity] {
        &self.adaptivity
    }

    /// Parties whose outcome feeds no other party's adaptive input.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.m())
            .filter(|&j| self.adaptivity.iter().all(|a| !a.earlier.contains(&j)))
            .collect()
    }

    /// The induced graph in the wrapped local-instrument model and its semantics.
    ///
    /// Party `j` is a wrapped vertex `phi{j+1}~` fed by qubit `j`, external
    /// setting `j` and its adaptive input; one copy of its outcome is boundary
    /// output `j`, the other feeds later parties or is deleted.
    pub fn graph(&self) -> Result<(LabelSemantics, Dpg)> {
        let m = self.m();
        let mut sem = semantics(Model::ATilde);
        for (j, b) in self.bases.iter().enumerate() {
            sem = sem.with_local(&format!("phi{}", j + 1), b.clone())?;
        }
        let mut b = GraphBuilder::new();
        let qs: Vec<Endpoint> = (0..m).map(|_| b.h_input()).collect();
        let settings: Vec<Endpoint> = (0..m).map(|_| b.v_input()).collect();
        let mut spare: Vec<Option<Endpoint>> = vec![None; m];
        for j in 0..m {
            let a = &self.adaptivity[j];
            let mut r2 = zero_into(&mut b);
            if a.constant {
                let (_, one) = b.add(labels::one(), &[], &[]);
                r2 = xor_into(&mut b, r2, one[0].clone());
            }
            for &e in &a.earlier {
                let src = spare[e].take().expect("earlier outcome available");
                let (use_now, keep) = copy_into(&mut b, src);
                spare[e] = Some(keep);
                r2 = xor_into(&mut b, r2, use_now);
            }
            let (_, s) = b.add(
                labels::wrapped(&format!("phi{}", j + 1)),
                &[qs[j].clone()],
                &[settings[j].clone(), r2],
            );
            b.v_output(s[0].clone());
            spare[j] = Some(s[1].clone());
        }
        for e in spare.into_iter().flatten() {
            b.add(labels::delete(), &[], &[e]);
        }
        Ok((sem, b.build()?))
    }

    /// The instrument `(m; m → 0; m)` of the induced graph.
    pub fn instrument(&self) -> Result<AdaptiveInstrument> {
        let (sem, g) = self.graph()?;
        evaluate(&g, &sem)
    }
}

/// The scenario `p_i(s) = Tr Φ_i^s(ρ)` of a Bell instrument.
///
/// Marginal independence is verified for every party in [`BellInstrumentSpec::sinks`];
/// for a non-adaptive spec that is every party.
pub fn scenario_from(rho: &DensityMatrix, spec: &BellInstrumentSpec) -> Result<BellScenario<f64>> {
    if rho.qubits() != spec.m() {
        return Err(Error::Dimension(format!("state has {} qubits, instrument {}", rho.qubits(), spec.m())));
    }
    let inst = spec.instrument()?;
    let rows = (0..1usize << spec.m())
        .map(|i| born_at(rho, &inst, i))
        .collect::<Result<Vec<_>>>()?;
    let sc = BellScenario::new(spec.m(), rows)?;
    if spec.sinks().into_iter().any(|j| !check_party_compatibility(&sc, j, &1e-9)) {
        return Err(Error::InvalidDistribution("Bell instrument produced an incompatible scenario".into()));
    }
    Ok(sc)
}

/// Outcome of [`bound_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    /// Average success probability of the post-processed scenario against `f`.
    pub lhs: f64,
    /// `1 − ncf·ν(f)`.
    pub rhs: f64,
    /// Noncontextual fraction of the scenario.
    pub ncf: f64,
    /// Distance of `f` to the affine functions.
    pub nu: Rational64,
    /// `lhs ≤ rhs + 1e-7`.
    pub holds: bool,
}

/// The Kleisli map `r ↦ h_*(p_{τ(r)})`.
pub fn composite_kleisli(sc: &BellScenario<f64>, h: &AffineMap, tau: &AffineMap) -> Result<KleisliMap> {
    if tau.l != sc.m || h.k != sc.m {
        return Err(Error::ArityMismatch("settings map and post-processing must match the scenario".into()));
    }
    let rows = (0..1usize << tau.k)
        .map(|r| {
            let mut row = vec![0.0; 1 << h.l];
            for (s, p) in sc.rows[tau.apply(r)].iter().enumerate() {
                row[h.apply(s)] += p;
            }
            row
        })
        .collect();
    KleisliMap::new(tau.k, h.l, rows)
}

/// Checks `p_succ ≤ 1 − ncf·ν(f)` for a scenario post-processed by an affine
/// `h` and with settings `τ(r)`.
pub fn bound_check_scenario(
    sc: &BellScenario<f64>,
    h: &AffineMap,
    f: &BooleanFunction,
    tau: &AffineMap,
) -> Result<BoundReport> {
    if (tau.k, h.l) != (f.k, f.l) {
        return Err(Error::ArityMismatch("function arity differs from the composite".into()));
    }
    let lhs = p_succ(&composite_kleisli(sc, h, tau)?, f)?;
    let ncf = ncf_unchecked(sc)?.clamp(0.0, 1.0);
    let nu = nu(f);
    let rhs = 1.0 - ncf * (*nu.numer() as f64 / *nu.denom() as f64);
    Ok(BoundReport { lhs, rhs, ncf, nu, holds: lhs <= rhs + BOUND_SLACK })
}

/// [`bound_check_scenario`] on the scenario of `ρ` and a Bell instrument.
pub fn bound_check(
    rho: &DensityMatrix,
    spec: &BellInstrumentSpec,
    h: &AffineMap,
    f: &BooleanFunction,
    tau: &AffineMap,
) -> Result<BoundReport> {
    bound_check_scenario(&scenario_from(rho, spec)?, h, f, tau)
}

/// The exact noncontextual fraction of a float scenario after snapping each
/// probability to a simple fraction.
pub fn ncf_exact(sc: &BellScenario<f64>) -> Result<BigRational> {
    if !check_compatibility(sc, &f64::validation_tol()) {
        return Err(Error::InvalidDistribution("scenario violates compatibility".into()));
    }
    ncf_unchecked(&renormalize(sc.to_exact()?)?)
}

fn renormalize(sc: BellScenario<BigRational>) -> Result<BellScenario<BigRational>> {
    let rows = sc
        .rows
        .into_iter()
        .map(|r| {
            let sum = r.iter().cloned().fold(BigRational::zero(), |a, b| a + b);
            if sum.is_zero() {
                r
            } else {
                r.into_iter().map(|p| p / sum.clone()).collect()
            }
        })
        .collect();
    BellScenario::new(sc.m, rows)
}

/// The non-destructive single-qubit instrument measuring `kinds[a]` at setting `a`.
pub fn projective_instrument(kinds: [ProjectorKind; 2]) -> Result<AdaptiveInstrument> {
    let mut entries = Vec::new();
    for (a, kind) in kinds.into_iter().enumerate() {
        for s in 0..2 {
            entries.push(((a, s), CpMap::from_conjugation(&projector(kind, s == 1))?));
        }
    }
    AdaptiveInstrument::new(1, 1, 1, 1, entries)
}

/// The X or Y measurement instrument: setting 0 measures X, setting 1 measures Y.
pub fn xy_instrument() -> Result<AdaptiveInstrument> {
    projective_instrument([ProjectorKind::XTwist(false), ProjectorKind::XTwist(true)])
}

/// A Boolean function computed by post-processing a Bell scenario.
#[derive(Clone, Debug)]
pub struct BoundInstance {
    /// Shared state.
    pub state: DensityMatrix,
    /// Bell instrument.
    pub spec: BellInstrumentSpec,
    /// Settings map `τ: ℤ₂^k → ℤ₂^m`.
    pub tau: AffineMap,
    /// Affine post-processing `h: ℤ₂^m → ℤ₂^ℓ`.
    pub h: AffineMap,
    /// Target function.
    pub f: BooleanFunction,
}

impl BoundInstance {
    /// [`bound_check`] of the instance.
    pub fn check(&self) -> Result<BoundReport> {
        bound_check(&self.state, &self.spec, &self.h, &self.f, &self.tau)
    }
}

/// OR computed from X and Y measurements on GHZ(3) with `τ(a, b) = (a, b, a ⊕ b)`
/// and the parity of the three outcomes.
pub fn ghz_or_instance() -> Result<BoundInstance> {
    let base = xy_instrument()?;
    Ok(BoundInstance {
        state: ghz_density(3)?,
        spec: BellInstrumentSpec::local(vec![base; 3])?,
        tau: AffineMap::new(2, 3, vec![0b10, 0b01, 0b11], 0)?,
        h: AffineMap::parity(3),
        f: BooleanFunction::or(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_satisfy_simplicial_identity() {
        let s = SphereSimplex::generating(3, 0b101).unwrap();
        assert_eq!(s.dimension(), 2);
        for i in 0..3 {
            for j in (i + 1)..3 {
                let a = s.face(j).unwrap().face(i).unwrap();
                let b = s.face(i).unwrap().face(j - 1).unwrap();
                assert_eq!(a, b);
            }
        }
        assert_eq!(
            SphereSimplex::generating(2, 0b10).unwrap().face(1).unwrap(),
            SphereSimplex::generating(2, 0b11).unwrap().face(1).unwrap()
        );
        assert!(SphereSimplex::generating(1, 2).is_err());
    }

    #[test]
    fn strategy_counts_and_outcomes() {
        assert_eq!(strategies(2).len(), 16);
        let id = LocalStrategy::new(vec![[false, true]; 3]);
        for i in 0..8 {
            assert_eq!(id.outcome(i), i);
        }
    }

    #[test]
    fn remove_bit_drops_position() {
        assert_eq!(remove_bit(0b1011, 1), 0b101);
        assert_eq!(remove_bit(0b1011, 0), 0b101);
        assert_eq!(remove_bit(0b1011, 3), 0b011);
    }

    #[test]
    fn affine_roundtrip() {
        for h in AffineMap::all(2, 2) {
            assert_eq!(AffineMap::from_table(&h.to_function()).unwrap().to_function(), h.to_function());
        }
        assert!(AffineMap::from_table(&BooleanFunction::or()).is_none());
        assert_eq!(AffineMap::all(2, 1).count(), 8);
    }

    #[test]
    fn nu_small_cases() {
        assert_eq!(nu(&BooleanFunction::or()), Rational64::new(1, 4));
        assert_eq!(nu(&BooleanFunction::and()), Rational64::new(1, 4));
        assert_eq!(nu(&AffineMap::parity(3).to_function()), Rational64::new(0, 1));
    }
}
