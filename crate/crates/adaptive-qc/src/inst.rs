//! Adaptive instruments: finite tables of CP maps indexed by classical input
//! and output bit strings, with horizontal and vertical composition.
//!
//! Bit strings are encoded as integers with the first bit most significant.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::quantum::{ComplexMatrix, CpMap, DensityMatrix, TOL};

/// Bit `i` (0-based, most significant first) of an `n`-bit string.
pub fn bit(x: usize, i: usize, n: usize) -> bool {
    (x >> (n - 1 - i)) & 1 == 1
}

/// Packs bits (first most significant) into an integer.
pub fn pack(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Unpacks an `n`-bit integer into bits (first most significant).
pub fn unpack(x: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| bit(x, i, n)).collect()
}

/// Formats an `n`-bit integer as a string of `0`/`1` characters.
pub fn bitstring(x: usize, n: usize) -> String {
    unpack(x, n).iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bitstring(s: &str) -> Result<(usize, usize)> {
    let mut bits = Vec::new();
    for ch in s.chars() {
        match ch {
            '0' => bits.push(false),
            '1' => bits.push(true),
            _ => return Err(Error::Invalid(format!("'{s}' is not a bit string"))),
        }
    }
    Ok((pack(&bits), bits.len()))
}

/// An adaptive instrument `(k; m → n; ℓ)`.
///
/// `table[(a, b)]` is the CP map applied when the classical input is `a ∈ ℤ₂^k`
/// and the classical output is `b ∈ ℤ₂^ℓ`; absent entries are zero maps.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveInstrument {
    k: usize,
    l: usize,
    m: usize,
    n: usize,
    table: BTreeMap<(usize, usize), CpMap>,
}

impl AdaptiveInstrument {
    /// Builds an instrument and checks complete positivity and the channel condition.
    pub fn new(
        k: usize,
        l: usize,
        m: usize,
        n: usize,
        entries: impl IntoIterator<Item = ((usize, usize), CpMap)>,
    ) -> Result<AdaptiveInstrument> {
        let inst = AdaptiveInstrument::unchecked(k, l, m, n, entries)?;
        inst.validate(TOL)?;
        Ok(inst)
    }

    /// Builds an instrument checking only shapes and index ranges.
    pub fn unchecked(
        k: usize,
        l: usize,
        m: usize,
        n: usize,
        entries: impl IntoIterator<Item = ((usize, usize), CpMap)>,
    ) -> Result<AdaptiveInstrument> {
        let mut table = BTreeMap::new();
        for ((a, b), phi) in entries {
            if a >= 1 << k || b >= 1 << l {
                return Err(Error::InvalidInstrument(format!("entry ({a},{b}) out of range for k={k}, l={l}")));
            }
            if phi.in_qubits() != m || phi.out_qubits() != n {
                return Err(Error::Dimension(format!(
                    "entry ({a},{b}) acts {} → {} qubits, expected {m} → {n}",
                    phi.in_qubits(),
                    phi.out_qubits()
                )));
            }
            match table.remove(&(a, b)) {
                None => {
                    table.insert((a, b), phi);
                }
                Some(prev) => {
                    table.insert((a, b), CpMap::add(&prev, &phi)?);
                }
            }
        }
        Ok(AdaptiveInstrument { k, l, m, n, table })
    }

    /// Checks that every entry is CP and that each input yields a channel.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for ((a, b), phi) in &self.table {
            if !phi.is_cp(tol) {
                return Err(Error::InvalidInstrument(format!("entry ({a},{b}) is not completely positive")));
            }
        }
        for a in 0..1usize << self.k {
            if !self.channel_at(a).is_tp(tol) {
                return Err(Error::InvalidInstrument(format!("input {a} does not yield a channel")));
            }
        }
        Ok(())
    }

    /// Classical input bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Classical output bits.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Input qubits.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Output qubits.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The sparse table of non-zero entries.
    pub fn table(&self) -> &BTreeMap<(usize, usize), CpMap> {
        &self.table
    }

    /// The entry at `(a, b)`, or the zero map.
    pub fn entry(&self, a: usize, b: usize) -> CpMap {
        self.table.get(&(a, b)).cloned().unwrap_or_else(|| CpMap::zero(self.m, self.n))
    }

    /// `Σ_b Φ_a^b`.
    pub fn channel_at(&self, a: usize) -> CpMap {
        self.table
            .range((a, 0)..(a + 1, 0))
            .fold(CpMap::zero(self.m, self.n), |acc, (_, phi)| acc.add(phi).expect("equal arities"))
    }

    /// The instrument `a ↦ δ_{b, f(a)}·1` on `ℂ` for a Boolean function `f: ℤ₂^k → ℤ₂^ℓ`.
    pub fn boolean(k: usize, l: usize, f: impl Fn(usize) -> usize) -> AdaptiveInstrument {
        let table = (0..1usize << k)
            .map(|a| ((a, f(a)), CpMap::scalar(1.0).expect("positive")))
            .collect();
        AdaptiveInstrument { k, l, m: 0, n: 0, table }
    }

    /// An instrument whose every entry is the same function of `(a, b)`, skipping zero maps.
    pub fn from_fn(
        k: usize,
        l: usize,
        m: usize,
        n: usize,
        f: impl Fn(usize, usize) -> Option<CpMap>,
    ) -> Result<AdaptiveInstrument> {
        let mut entries = Vec::new();
        for a in 0..1usize << k {
            for b in 0..1usize << l {
                if let Some(phi) = f(a, b) {
                    entries.push(((a, b), phi));
                }
            }
        }
        AdaptiveInstrument::unchecked(k, l, m, n, entries)
    }

    /// Horizontal composite: `self` first, then `next`.
    pub fn compose_h(&self, next: &AdaptiveInstrument) -> Result<AdaptiveInstrument> {
        compose_h(self, next)
    }

    /// Vertical composite: `self` on top, `below` underneath.
    pub fn compose_v(&self, below: &AdaptiveInstrument) -> Result<AdaptiveInstrument> {
        compose_v(self, below)
    }
}

/// Horizontal composite `Ψ∘Φ` with `(Ψ∘Φ)_{(a₁,a₂)}^{(b₁,b₂)} = Ψ_{a₂}^{b₂} ∘ Φ_{a₁}^{b₁}`.
pub fn compose_h(phi: &AdaptiveInstrument, psi: &AdaptiveInstrument) -> Result<AdaptiveInstrument> {
    if phi.n != psi.m {
        return Err(Error::ArityMismatch(format!(
            "horizontal composition of {} output qubits with {} input qubits",
            phi.n, psi.m
        )));
    }
    let mut entries = Vec::new();
    for (&(a1, b1), f) in &phi.table {
        for (&(a2, b2), g) in &psi.table {
            entries.push((((a1 << psi.k) | a2, (b1 << psi.l) | b2), f.then(g)?));
        }
    }
    AdaptiveInstrument::unchecked(phi.k + psi.k, phi.l + psi.l, phi.m, psi.n, entries)
}

/// Vertical composite `Ψ•Φ` with `(Ψ•Φ)_a^c = Σ_b Φ_a^b ⊗ Ψ_b^c`.
pub fn compose_v(phi: &AdaptiveInstrument, psi: &AdaptiveInstrument) -> Result<AdaptiveInstrument> {
    if phi.l != psi.k {
        return Err(Error::ArityMismatch(format!(
            "vertical composition of {} output bits with {} input bits",
            phi.l, psi.k
        )));
    }
    let mut entries = Vec::new();
    for (&(a, b), f) in &phi.table {
        for (&(_, c), g) in psi.table.range((b, 0)..(b + 1, 0)) {
            entries.push(((a, c), f.tensor(g)));
        }
    }
    AdaptiveInstrument::unchecked(phi.k, psi.l, phi.m + psi.m, phi.n + psi.n, entries)
}

/// Horizontal identity on `m` qubits.
pub fn id_h(m: usize) -> AdaptiveInstrument {
    AdaptiveInstrument {
        k: 0,
        l: 0,
        m,
        n: m,
        table: BTreeMap::from([((0, 0), CpMap::identity(m))]),
    }
}

/// Vertical identity on `k` bits.
pub fn id_v(k: usize) -> AdaptiveInstrument {
    AdaptiveInstrument::boolean(k, k, |a| a)
}

/// Largest absolute superoperator difference over all table entries.
pub fn instrument_distance(phi: &AdaptiveInstrument, psi: &AdaptiveInstrument) -> Result<f64> {
    if (phi.k, phi.l, phi.m, phi.n) != (psi.k, psi.l, psi.m, psi.n) {
        return Err(Error::ArityMismatch(format!(
            "({};{}→{};{}) vs ({};{}→{};{})",
            phi.k, phi.m, phi.n, phi.l, psi.k, psi.m, psi.n, psi.l
        )));
    }
    let mut worst: f64 = 0.0;
    for key in phi.table.keys().chain(psi.table.keys()) {
        worst = worst.max(phi.entry(key.0, key.1).distance(&psi.entry(key.0, key.1)));
    }
    Ok(worst)
}

/// True when every table entry agrees within `tol`.
pub fn instrument_equal(phi: &AdaptiveInstrument, psi: &AdaptiveInstrument, tol: f64) -> Result<bool> {
    Ok(instrument_distance(phi, psi)? <= tol)
}

/// A Markov kernel `ℤ₂^k → D(ℤ₂^ℓ)` stored as dense rows.
#[derive(Clone, Debug, PartialEq)]
pub struct KleisliMap {
    k: usize,
    l: usize,
    rows: Vec<Vec<f64>>,
}

impl KleisliMap {
    /// Validates non-negativity and normalization of every row.
    pub fn new(k: usize, l: usize, rows: Vec<Vec<f64>>) -> Result<KleisliMap> {
        if rows.len() != 1 << k || rows.iter().any(|r| r.len() != 1 << l) {
            return Err(Error::InvalidDistribution("row shape does not match arities".into()));
        }
        for (a, r) in rows.iter().enumerate() {
            if r.iter().any(|&p| p < -TOL) || (r.iter().sum::<f64>() - 1.0).abs() > TOL {
                return Err(Error::InvalidDistribution(format!("row {a} is not a distribution")));
            }
        }
        Ok(KleisliMap { k, l, rows })
    }

    /// The deterministic kernel of a function.
    pub fn deterministic(k: usize, l: usize, f: impl Fn(usize) -> usize) -> KleisliMap {
        let rows = (0..1usize << k)
            .map(|a| {
                let mut r = vec![0.0; 1 << l];
                r[f(a)] = 1.0;
                r
            })
            .collect();
        KleisliMap { k, l, rows }
    }

    /// Input bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Output bits.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Row `a`.
    pub fn row(&self, a: usize) -> &[f64] {
        &self.rows[a]
    }

    /// All rows.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// `Some(f)` when every row is a point mass within `tol`.
    pub fn as_function(&self, tol: f64) -> Option<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| {
                let (best, p) = r
                    .iter()
                    .enumerate()
                    .fold((0, f64::MIN), |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc });
                ((p - 1.0).abs() <= tol).then_some(best)
            })
            .collect()
    }
}

/// The Kleisli map of an instrument without quantum systems.
pub fn kleisli(phi: &AdaptiveInstrument) -> Result<KleisliMap> {
    if phi.m != 0 || phi.n != 0 {
        return Err(Error::ArityMismatch("kleisli requires an instrument on ℂ".into()));
    }
    let mut rows = vec![vec![0.0; 1 << phi.l]; 1 << phi.k];
    for (&(a, b), c) in &phi.table {
        rows[a][b] += c.superop()[(0, 0)].re;
    }
    KleisliMap::new(phi.k, phi.l, rows)
}

/// The channel of an instrument without classical wires.
pub fn channel(phi: &AdaptiveInstrument) -> Result<CpMap> {
    if phi.k != 0 || phi.l != 0 {
        return Err(Error::ArityMismatch("channel requires an instrument without bits".into()));
    }
    Ok(phi.channel_at(0))
}

/// Outcome distribution `p(b) = Tr(Φ_a^b(ρ))` for a fixed input `a`.
pub fn born_at(rho: &DensityMatrix, phi: &AdaptiveInstrument, a: usize) -> Result<Vec<f64>> {
    if rho.qubits() != phi.m {
        return Err(Error::Dimension(format!(
            "state on {} qubits, instrument on {}",
            rho.qubits(),
            phi.m
        )));
    }
    if a >= 1 << phi.k {
        return Err(Error::Invalid(format!("input {a} out of range for {} bits", phi.k)));
    }
    let tr = CpMap::trace(phi.n);
    let mut dist = vec![0.0; 1 << phi.l];
    for (&(_, b), f) in phi.table.range((a, 0)..(a + 1, 0)) {
        let out: ComplexMatrix = f.then(&tr)?.apply(rho.matrix())?;
        dist[b] += out[(0, 0)].re;
    }
    Ok(dist)
}

/// Outcome distribution of an instrument with no classical input.
pub fn born(rho: &DensityMatrix, phi: &AdaptiveInstrument) -> Result<Vec<f64>> {
    if phi.k != 0 {
        return Err(Error::ArityMismatch("born requires k = 0; use born_at".into()));
    }
    born_at(rho, phi, 0)
}
