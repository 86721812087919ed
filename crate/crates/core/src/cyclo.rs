//! Exact arithmetic in the cyclotomic integers `Z[zeta_p]`.
//!
//! Every character sum in this crate lands here. An element is stored as
//! `c_0 + c_1 z + ... + c_{p-2} z^{p-2}`; `z^{p-1}` is always rewritten as
//! `-1 - z - ... - z^{p-2}`, which makes the representation unique.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldCtx, FieldElt, FieldVector};

/// Relative tolerance for comparing the float value of a direct Gauss sum with its closed form.
pub const PHASE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 2, "root order must be at least 2");
        Self { p, coeffs: vec![BigInt::zero(); p as usize - 1] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_integer(p, 1)
    }

    pub fn from_integer(p: u32, n: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(p);
        out.coeffs[0] = n.into();
        out
    }

    /// `z^e` for any integer exponent.
    pub fn zeta_power(p: u32, e: i64) -> Self {
        let mut counts = vec![0i64; p as usize];
        counts[e.rem_euclid(p as i64) as usize] = 1;
        Self::from_exponent_counts(p, &counts)
    }

    /// `sum_j counts[j] z^j` over all `j in [0, p)`, reduced.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let top = counts[p as usize - 1];
        let coeffs = counts[..p as usize - 1].iter().map(|&c| BigInt::from(c - top)).collect();
        Self { p, coeffs }
    }

    fn from_full(p: u32, full: Vec<BigInt>) -> Self {
        debug_assert_eq!(full.len(), p as usize);
        let top = full[p as usize - 1].clone();
        let coeffs = full.into_iter().take(p as usize - 1).map(|c| c - &top).collect();
        Self { p, coeffs }
    }

    /// Builds from already-reduced coefficients (`p - 1` of them).
    pub fn from_coeffs(p: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != p as usize - 1 {
            return Err(Error::DimensionMismatch { expected: p as usize - 1, found: coeffs.len() });
        }
        Ok(Self { p, coeffs })
    }

    #[inline]
    pub fn root_order(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    /// Complex conjugation, `z -> z^{-1}`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (j, c) in self.coeffs.iter().enumerate() {
            full[(p - j) % p] = c.clone();
        }
        Self::from_full(self.p, full)
    }

    /// `x * conj(x)`, a nonnegative real cyclotomic integer.
    pub fn norm_squared(&self) -> Self {
        self * &self.conj()
    }

    /// `self * z^e`, by rotating coefficients.
    pub fn mul_zeta_power(&self, e: i64) -> Self {
        let p = self.p as usize;
        let shift = e.rem_euclid(p as i64) as usize;
        let mut full = vec![BigInt::zero(); p];
        for (j, c) in self.coeffs.iter().enumerate() {
            full[(j + shift) % p] = c.clone();
        }
        Self::from_full(self.p, full)
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        Self { p: self.p, coeffs: self.coeffs.iter().map(|c| c * n).collect() }
    }

    /// Float value at `z = exp(2 pi i / p)`. Display and phase checks only.
    pub fn to_complex(&self) -> Complex64 {
        let step = 2.0 * std::f64::consts::PI / self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| Complex64::from_polar(1.0, step * j as f64) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::RootOrderMismatch { left: self.p, right: other.p })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { p: self.p, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { p: self.p, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        Ok(Self::from_full(self.p, full))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.try_add(rhs).expect("cyclotomic root orders must match")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.try_sub(rhs).expect("cyclotomic root orders must match")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.try_mul(rhs).expect("cyclotomic root orders must match")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}z")?,
                (_, true) => write!(f, "z^{j}")?,
                (_, false) => write!(f, "{mag}z^{j}")?,
            }
        }
        Ok(())
    }
}

/// Accumulates `sum z^{e}` as exponent counts; the hot-loop form of a character sum.
#[derive(Debug, Clone)]
pub struct CharacterSum {
    p: u32,
    counts: Vec<i64>,
}

impl CharacterSum {
    pub fn new(p: u32) -> Self {
        Self { p, counts: vec![0; p as usize] }
    }

    #[inline]
    pub fn add_exponent(&mut self, e: u32, weight: i64) {
        self.counts[e as usize] += weight;
    }

    pub fn clear(&mut self) {
        self.counts.iter_mut().for_each(|c| *c = 0);
    }

    /// The value as a rational integer, without building a `CycInt`.
    pub fn as_i64(&self) -> Option<i64> {
        let top = self.counts[self.p as usize - 1];
        self.counts[1..self.p as usize - 1].iter().all(|&c| c == top).then(|| self.counts[0] - top)
    }

    pub fn value(&self) -> CycInt {
        CycInt::from_exponent_counts(self.p, &self.counts)
    }
}

/// Symbolic `sign * i^{i_power} * q^{half_exponent / 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactRadical {
    pub q: u64,
    pub sign: i8,
    /// 0 or 1; `i^2` is folded into `sign`.
    pub i_power: u8,
    pub half_exponent: u32,
}

impl ExactRadical {
    pub fn new(q: u64, sign: i8, i_power: u32, half_exponent: u32) -> Self {
        let mut sign = if sign < 0 { -1 } else { 1 };
        let ip = i_power % 4;
        if ip >= 2 {
            sign = -sign;
        }
        Self { q, sign, i_power: (ip % 2) as u8, half_exponent }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "radicals over different q");
        Self::new(
            self.q,
            self.sign * other.sign,
            (self.i_power + other.i_power) as u32,
            self.half_exponent + other.half_exponent,
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let sign = if self.sign < 0 && e % 2 == 1 { -1 } else { 1 };
        Self::new(self.q, sign, self.i_power as u32 * (e % 4), self.half_exponent * e)
    }

    /// The value when it is a rational integer (no `i`, even exponent of `sqrt q`).
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.i_power != 0 || self.half_exponent % 2 != 0 {
            return None;
        }
        let mag = num_traits::pow(BigInt::from(self.q), (self.half_exponent / 2) as usize);
        Some(if self.sign < 0 { -mag } else { mag })
    }

    pub fn to_complex(&self) -> Complex64 {
        let mag = (self.q as f64).powf(self.half_exponent as f64 / 2.0) * self.sign as f64;
        if self.i_power == 1 {
            Complex64::new(0.0, mag)
        } else {
            Complex64::new(mag, 0.0)
        }
    }
}

impl fmt::Display for ExactRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "+" };
        let i = if self.i_power == 1 { "i*" } else { "" };
        write!(f, "{sign}{i}{}^({}/2)", self.q, self.half_exponent)
    }
}

/// The canonical additive character `chi(a) = z^{Tr(a)}`.
pub fn chi(ctx: &FieldCtx, a: FieldElt) -> CycInt {
    CycInt::zeta_power(ctx.p(), ctx.trace(a) as i64)
}

/// `G_a = sum_{s != 0} eta(s) chi(a s)`, summed term by term.
pub fn gauss_direct(ctx: &FieldCtx, a: FieldElt) -> Result<CycInt> {
    if a.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let mut acc = CharacterSum::new(ctx.p());
    for s in ctx.nonzero_elements() {
        acc.add_exponent(ctx.trace(ctx.mul(a, s)), ctx.eta(s) as i64);
    }
    Ok(acc.value())
}

/// Closed form of `G_1` over GF(p^ell).
pub fn gauss_explicit(p: u32, ell: u32) -> Result<ExactRadical> {
    if !is_prime(p as u64) {
        return Err(Error::NonPrime(p as u64));
    }
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if ell == 0 {
        return Err(Error::InvalidDegree);
    }
    let q = (p as u64).pow(ell);
    let sign = if ell % 2 == 1 { 1 } else { -1 };
    let i_power = if p % 4 == 1 { 0 } else { ell };
    Ok(ExactRadical::new(q, sign, i_power, 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteSquare {
    pub lhs: CycInt,
    pub rhs: CycInt,
    pub equal: bool,
}

/// Compares `sum_s chi(a s^2 + b s)` with `eta(a) G_1 chi(b^2 / (-4a))`.
pub fn complete_square_sum(ctx: &FieldCtx, a: FieldElt, b: FieldElt) -> Result<CompleteSquare> {
    let g1 = gauss_direct(ctx, FieldElt::ONE)?;
    complete_square_sum_with(ctx, &g1, a, b)
}

/// As [`complete_square_sum`] with a precomputed `G_1`.
pub fn complete_square_sum_with(ctx: &FieldCtx, g1: &CycInt, a: FieldElt, b: FieldElt) -> Result<CompleteSquare> {
    if a.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let mut acc = CharacterSum::new(ctx.p());
    for s in ctx.elements() {
        let v = ctx.add(ctx.mul(a, ctx.square(s)), ctx.mul(b, s));
        acc.add_exponent(ctx.trace(v), 1);
    }
    let lhs = acc.value();
    let minus_four_a = ctx.mul(ctx.from_int(-4), a);
    let shift = ctx.div(ctx.square(b), minus_four_a)?;
    let rhs = (g1 * &chi(ctx, shift)).scale(&BigInt::from(ctx.eta(a)));
    let equal = lhs == rhs;
    Ok(CompleteSquare { lhs, rhs, equal })
}

/// Every `(a, b)` with `a != 0` for which the completed square fails, and the number of pairs checked.
pub fn complete_square_failures(ctx: &FieldCtx) -> Result<(u64, Vec<(FieldElt, FieldElt)>)> {
    let g1 = gauss_direct(ctx, FieldElt::ONE)?;
    let nonzero: Vec<FieldElt> = ctx.nonzero_elements().collect();
    let rows = crate::par::map_items(&nonzero, |&a| -> Result<Vec<(FieldElt, FieldElt)>> {
        let mut bad = Vec::new();
        for b in ctx.elements() {
            if !complete_square_sum_with(ctx, &g1, a, b)?.equal {
                bad.push((a, b));
            }
        }
        Ok(bad)
    });
    let mut failures = Vec::new();
    for row in rows {
        failures.extend(row?);
    }
    Ok((nonzero.len() as u64 * ctx.q() as u64, failures))
}

/// `sum_{alpha in F_q^k} chi(beta . alpha)`, with `k = beta.dim()`.
pub fn orthogonality_sum(ctx: &FieldCtx, beta: &FieldVector) -> Result<CycInt> {
    let mut acc = CharacterSum::new(ctx.p());
    for alpha in ctx.vectors(beta.dim())? {
        acc.add_exponent(ctx.trace(ctx.dot(beta.coords(), alpha.coords())), 1);
    }
    Ok(acc.value())
}

/// Every exactly-checkable Gauss-sum identity for one field.
#[derive(Debug, Clone)]
pub struct GaussReport {
    pub p: u32,
    pub ell: u32,
    pub q: u32,
    pub g1: CycInt,
    pub explicit: ExactRadical,
    /// Nonzero `a` with `G_a != eta(a) G_1`.
    pub ga_failures: Vec<FieldElt>,
    pub norm: CycInt,
    pub norm_ok: bool,
    pub square: CycInt,
    pub square_ok: bool,
    pub explicit_square_ok: bool,
    pub fourth_power_ok: bool,
    pub relative_phase_error: f64,
    pub phase_ok: bool,
}

impl GaussReport {
    pub fn passed(&self) -> bool {
        self.ga_failures.is_empty()
            && self.norm_ok
            && self.square_ok
            && self.explicit_square_ok
            && self.fourth_power_ok
            && self.phase_ok
    }
}

pub fn verify_gauss(ctx: &FieldCtx) -> Result<GaussReport> {
    let p = ctx.p();
    let q = BigInt::from(ctx.q());
    let g1 = gauss_direct(ctx, FieldElt::ONE)?;
    let explicit = gauss_explicit(p, ctx.ell())?;

    let mut ga_failures = Vec::new();
    for a in ctx.nonzero_elements() {
        let ga = gauss_direct(ctx, a)?;
        if ga != g1.scale(&BigInt::from(ctx.eta(a))) {
            ga_failures.push(a);
        }
    }

    let norm = g1.norm_squared();
    let norm_ok = norm == CycInt::from_integer(p, q.clone());
    let square = &g1 * &g1;
    let expected_square = CycInt::from_integer(p, &q * BigInt::from(ctx.eta_minus_one()));
    let square_ok = square == expected_square;
    let explicit_square_ok = explicit.pow(2).to_integer().map(|n| CycInt::from_integer(p, n)) == Some(square.clone());
    let fourth_power_ok =
        explicit.pow(4).to_integer().map(|n| CycInt::from_integer(p, n)) == Some(square.pow(2));

    let direct = g1.to_complex();
    let closed = explicit.to_complex();
    let relative_phase_error = (direct - closed).norm() / closed.norm();
    let phase_ok = relative_phase_error <= PHASE_TOLERANCE;

    Ok(GaussReport {
        p,
        ell: ctx.ell(),
        q: ctx.q(),
        g1,
        explicit,
        ga_failures,
        norm,
        norm_ok,
        square,
        square_ok,
        explicit_square_ok,
        fourth_power_ok,
        relative_phase_error,
        phase_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn cyc(p: u32, v: &[i64]) -> CycInt {
        CycInt::from_coeffs(p, big(v)).unwrap()
    }

    #[test]
    fn chi_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(chi(&f3, FieldElt::ZERO), cyc(3, &[1, 0]));
        assert_eq!(chi(&f3, f3.from_int(1)), cyc(3, &[0, 1]));
        assert_eq!(chi(&f3, f3.from_int(2)), cyc(3, &[-1, -1]));
    }

    #[test]
    fn chi_is_additive() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        for a in f9.elements() {
            for b in f9.elements() {
                assert_eq!(&chi(&f9, a) * &chi(&f9, b), chi(&f9, f9.add(a, b)));
            }
        }
    }

    #[test]
    fn ring_op_examples() {
        let z = cyc(3, &[0, 1]);
        assert_eq!(&z * &z, cyc(3, &[-1, -1]));
        assert_eq!(z.conj(), cyc(3, &[-1, -1]));
        assert_eq!(cyc(3, &[-3, 0]).as_integer(), Some(BigInt::from(-3)));
        assert_eq!(z.as_integer(), None);
        assert_eq!(z.try_add(&CycInt::one(5)).unwrap_err(), Error::RootOrderMismatch { left: 3, right: 5 });
        // z^3 = 1
        assert_eq!(z.pow(3), CycInt::one(3));
        assert_eq!(format!("{}", cyc(5, &[1, -2, 0, 1])), "1 - 2z + z^3");
    }

    #[test]
    fn gauss_direct_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        let g = gauss_direct(&f3, FieldElt::ONE).unwrap();
        assert_eq!(g, cyc(3, &[1, 2]));
        assert_eq!(&g * &g, cyc(3, &[-3, 0]));
        let c = g.to_complex();
        assert!(c.re.abs() < 1e-12 && (c.im - 3f64.sqrt()).abs() < 1e-12);

        let f7 = FieldCtx::prime(7).unwrap();
        let g7 = gauss_direct(&f7, FieldElt::ONE).unwrap();
        assert_eq!(g7.norm_squared().as_integer(), Some(BigInt::from(7)));
        assert_eq!(gauss_direct(&f7, FieldElt::ZERO).unwrap_err(), Error::ZeroParameter);
    }

    #[test]
    fn gauss_explicit_examples() {
        let g = gauss_explicit(3, 1).unwrap();
        assert_eq!((g.sign, g.i_power, g.half_exponent, g.q), (1, 1, 1, 3));
        let g = gauss_explicit(5, 1).unwrap();
        assert_eq!((g.sign, g.i_power, g.half_exponent), (1, 0, 1));
        // (-1)^1 i^2 sqrt(9) = +3, matching the direct 9-term sum below
        let g = gauss_explicit(3, 2).unwrap();
        assert_eq!(g.pow(2).to_integer(), Some(BigInt::from(9)));
        assert_eq!((g.sign, g.i_power), (1, 0));
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(gauss_direct(&f9, FieldElt::ONE).unwrap().as_integer(), Some(BigInt::from(3)));
        assert_eq!(gauss_explicit(2, 1).unwrap_err(), Error::EvenCharacteristic);
        assert_eq!(gauss_explicit(9, 1).unwrap_err(), Error::NonPrime(9));
    }

    #[test]
    fn radical_normalization() {
        let r = ExactRadical::new(7, 1, 3, 1);
        assert_eq!((r.sign, r.i_power), (-1, 1));
        let g = gauss_explicit(7, 1).unwrap();
        assert_eq!(g.pow(2).to_integer(), Some(BigInt::from(-7)));
        assert_eq!(g.pow(4).to_integer(), Some(BigInt::from(49)));
        assert_eq!(g.pow(3).to_integer(), None);
        assert_eq!(g.mul(&g), g.pow(2));
    }

    #[test]
    fn complete_square_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        let r = complete_square_sum(&f3, FieldElt::ONE, FieldElt::ZERO).unwrap();
        assert_eq!(r.lhs, cyc(3, &[1, 2]));
        assert!(r.equal);
        let f7 = FieldCtx::prime(7).unwrap();
        assert!(complete_square_sum(&f7, f7.from_int(1), f7.from_int(2)).unwrap().equal);
        assert_eq!(complete_square_sum(&f7, FieldElt::ZERO, FieldElt::ONE).unwrap_err(), Error::ZeroParameter);
    }

    #[test]
    fn complete_square_exhaustive_small() {
        for (p, ell) in [(3, 1), (3, 2), (5, 1), (7, 1), (3, 3)] {
            let ctx = FieldCtx::new(p, ell).unwrap();
            let g1 = gauss_direct(&ctx, FieldElt::ONE).unwrap();
            for a in ctx.nonzero_elements() {
                for b in ctx.elements() {
                    assert!(complete_square_sum_with(&ctx, &g1, a, b).unwrap().equal);
                }
            }
        }
    }

    #[test]
    fn orthogonality_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(orthogonality_sum(&f3, &f3.vector(&[0, 0])).unwrap().as_integer(), Some(BigInt::from(9)));
        assert!(orthogonality_sum(&f3, &f3.vector(&[1, 0])).unwrap().is_zero());
        let f7 = FieldCtx::prime(7).unwrap();
        assert!(orthogonality_sum(&f7, &f7.vector(&[3])).unwrap().is_zero());
        let f9 = FieldCtx::new(3, 2).unwrap();
        for beta in f9.vectors(2).unwrap() {
            let s = orthogonality_sum(&f9, &beta).unwrap();
            let expected = if beta.is_zero() { 81 } else { 0 };
            assert_eq!(s.as_integer(), Some(BigInt::from(expected)));
        }
    }

    #[test]
    fn gauss_identities_hold_for_small_fields() {
        for (p, ell) in [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (11, 1), (13, 1)] {
            let ctx = FieldCtx::new(p, ell).unwrap();
            let r = verify_gauss(&ctx).unwrap();
            assert!(r.passed(), "GF({p}^{ell}): {r:?}");
        }
    }

    fn arb_cyc(p: u32) -> impl Strategy<Value = CycInt> {
        proptest::collection::vec(-50i64..50, p as usize - 1).prop_map(move |v| cyc(p, &v))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_cyc(5), b in arb_cyc(5), c in arb_cyc(5)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn conjugation_laws(a in arb_cyc(7), b in arb_cyc(7)) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!(a.conj().conj(), a.clone());
            // |a|^2 is real: fixed by conjugation
            let n = a.norm_squared();
            prop_assert_eq!(n.conj(), n);
        }

        #[test]
        fn float_evaluation_is_a_ring_map(a in arb_cyc(5), b in arb_cyc(5)) {
            let lhs = (&a * &b).to_complex();
            let rhs = a.to_complex() * b.to_complex();
            prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        }
    }
}
