//! A dense primal simplex solver for `max cᵀx` subject to `Ax ≤ b`, `x ≥ 0`,
//! `b ≥ 0`, generic over floating point and exact rational arithmetic.
//!
//! The slack basis is feasible because `b ≥ 0`. Pivoting follows Bland's
//! rule, so the method terminates without cycling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};

/// Scalars usable by the solver.
pub trait LpScalar: Clone + PartialOrd + Num + std::fmt::Debug {
    /// Values at most this are treated as zero when choosing pivots.
    fn tolerance() -> Self;

    /// Conversion to a float for reporting.
    fn to_f64(&self) -> f64;

    /// Whether the value exceeds the tolerance.
    fn is_pos(&self) -> bool {
        *self > Self::tolerance()
    }
}

impl LpScalar for f64 {
    fn tolerance() -> f64 {
        1e-12
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl LpScalar for BigRational {
    fn tolerance() -> BigRational {
        BigRational::zero()
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Optimal value and an optimal point.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    /// Optimal objective value.
    pub value: T,
    /// Optimal values of the decision variables.
    pub x: Vec<T>,
}

/// Solves `max cᵀx` subject to `Ax ≤ b`, `x ≥ 0` with `b ≥ 0`.
///
/// Errors if shapes disagree, some `b` is negative or the problem is unbounded.
pub fn maximize<T: LpScalar>(c: &[T], a: &[Vec<T>], b: &[T]) -> Result<LpSolution<T>> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("constraint matrix shape does not match".into()));
    }
    if b.iter().any(|v| *v < T::zero()) {
        return Err(Error::Invalid("right-hand side must be non-negative".into()));
    }
    let width = n + m;
    let mut tab: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|j| if i == j { T::one() } else { T::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut reduced: Vec<T> = c.iter().cloned().chain((0..m).map(|_| T::zero())).collect();
    let mut value = T::zero();
    let mut basis: Vec<usize> = (n..width).collect();

    loop {
        let Some(enter) = (0..width).find(|&j| reduced[j].is_pos()) else {
            break;
        };
        let mut leave: Option<(usize, T)> = None;
        for (i, row) in tab.iter().enumerate() {
            if !row[enter].is_pos() {
                continue;
            }
            let ratio = row[width].clone() / row[enter].clone();
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        let Some((r, _)) = leave else {
            return Err(Error::Invalid("linear program is unbounded".into()));
        };
        let piv = tab[r][enter].clone();
        for v in tab[r].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * p.clone();
            }
        }
        let f = reduced[enter].clone();
        for (v, p) in reduced.iter_mut().zip(&pivot_row) {
            *v = v.clone() - f.clone() * p.clone();
        }
        value = value + f * pivot_row[width].clone();
        basis[r] = enter;
    }

    let mut x = vec![T::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab[i][width].clone();
        }
    }
    Ok(LpSolution { value, x })
}

/// The nearest simple fraction to `x`: continued-fraction convergents with
/// denominator at most `2^20` are accepted within `1e-12`; otherwise the exact
/// binary value of the float is returned.
pub fn rationalize(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::Invalid(format!("cannot rationalize {x}")));
    }
    let max_den = BigInt::from(1u64 << 20);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > max_den {
            break;
        }
        let approx = BigRational::new(h2.clone(), k2.clone());
        if (approx.to_f64() - x).abs() <= 1e-12 {
            return Ok(approx);
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a;
        if frac.abs() < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    BigRational::from_float(x).ok_or_else(|| Error::Invalid(format!("cannot rationalize {x}")))
}
