//! Arithmetic in GF(p^l) for odd p.
//!
//! Elements are stored as their integer encoding `c_0 + c_1 p + ... + c_{l-1} p^{l-1}`
//! of the polynomial-basis coefficients, so the canonical element order is the
//! numeric order of that encoding. For fields of order up to the configured
//! threshold every operation is a table lookup.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TABLE_THRESHOLD: u32 = 2048;
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

/// Largest order for which lookup tables are ever built (entries are `u16`).
const MAX_TABLE_ORDER: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldConfig {
    pub table_threshold: u32,
    pub enumeration_budget: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            table_threshold: DEFAULT_TABLE_THRESHOLD,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElt(pub(crate) u32);

impl FieldElt {
    pub const ZERO: FieldElt = FieldElt(0);
    pub const ONE: FieldElt = FieldElt(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point of `F_q^k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldVector(Vec<FieldElt>);

impl FieldVector {
    pub fn new(coords: Vec<FieldElt>) -> Self {
        Self(coords)
    }

    pub fn zero(k: usize) -> Self {
        Self(vec![FieldElt::ZERO; k])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[FieldElt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<FieldElt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn indices(&self) -> Vec<u32> {
        self.0.iter().map(|c| c.index()).collect()
    }

    /// Prepends `head`, embedding the vector into one dimension higher.
    pub fn prepend(&self, head: FieldElt) -> Self {
        let mut coords = Vec::with_capacity(self.0.len() + 1);
        coords.push(head);
        coords.extend_from_slice(&self.0);
        Self(coords)
    }
}

impl fmt::Display for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    trace: Vec<u16>,
    eta: Vec<i8>,
    /// Canonical square root, or `u16::MAX` for non-squares.
    sqrt: Vec<u16>,
}

/// A concrete finite field GF(p^l). Immutable after construction.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    ell: u32,
    q: u32,
    /// Monic modulus, low degree first; present iff `ell > 1`.
    modulus: Option<Vec<u32>>,
    config: FieldConfig,
    tables: Option<Tables>,
}

/// Builds GF(p^ell) with the default configuration.
pub fn mk_field(p: u32, ell: u32, modulus: Option<&[u32]>) -> Result<FieldCtx> {
    FieldCtx::with_config(p, ell, modulus, FieldConfig::default())
}

impl FieldCtx {
    pub fn new(p: u32, ell: u32) -> Result<Self> {
        mk_field(p, ell, None)
    }

    pub fn prime(p: u32) -> Result<Self> {
        mk_field(p, 1, None)
    }

    pub fn with_config(p: u32, ell: u32, modulus: Option<&[u32]>, config: FieldConfig) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if ell == 0 {
            return Err(Error::InvalidDegree);
        }
        let q = (p as u64)
            .checked_pow(ell)
            .filter(|&q| q <= (1 << 31))
            .ok_or(Error::FieldTooLarge { p, ell })? as u32;

        let modulus = if ell == 1 {
            if let Some(m) = modulus {
                // a degree-1 modulus carries no information, but must still be well formed
                if m.len() != 2 || m[1] != 1 || m[0] >= p {
                    return Err(Error::InvalidModulus(format!("{m:?} is not a monic linear polynomial")));
                }
            }
            None
        } else {
            let m = match modulus {
                Some(m) => {
                    if m.len() != ell as usize + 1 {
                        return Err(Error::InvalidModulus(format!("expected {} coefficients, got {}", ell + 1, m.len())));
                    }
                    if m[ell as usize] != 1 {
                        return Err(Error::InvalidModulus("modulus must be monic".into()));
                    }
                    if m.iter().any(|&c| c >= p) {
                        return Err(Error::InvalidModulus(format!("coefficients must lie in [0, {p})")));
                    }
                    if !poly::is_irreducible(m, p) {
                        return Err(Error::ReducibleModulus { p });
                    }
                    m.to_vec()
                }
                None => poly::first_irreducible(p, ell),
            };
            Some(m)
        };

        let mut ctx = Self { p, ell, q, modulus, config, tables: None };
        if q <= config.table_threshold.min(MAX_TABLE_ORDER) {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn ell(&self) -> u32 {
        self.ell
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn config(&self) -> &FieldConfig {
        &self.config
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// `q mod 4`, which is 1 or 3 for odd q.
    pub fn q_mod4(&self) -> u32 {
        self.q % 4
    }

    /// `eta(-1)`: +1 when q = 1 mod 4, -1 when q = 3 mod 4.
    pub fn eta_minus_one(&self) -> i8 {
        if self.q % 4 == 1 {
            1
        } else {
            -1
        }
    }

    // ---- element construction ----

    pub fn elt(&self, index: u32) -> Result<FieldElt> {
        if index < self.q {
            Ok(FieldElt(index))
        } else {
            Err(Error::InvalidElement(format!("index {index} >= q = {}", self.q)))
        }
    }

    /// Embeds a rational integer via the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElt {
        FieldElt(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElt> {
        if coeffs.len() != self.ell as usize {
            return Err(Error::InvalidElement(format!("expected {} coefficients, got {}", self.ell, coeffs.len())));
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidElement(format!("coefficients must lie in [0, {})", self.p)));
        }
        Ok(FieldElt(self.encode(coeffs)))
    }

    pub fn coeffs(&self, a: FieldElt) -> Vec<u32> {
        self.decode(a.0)
    }

    pub fn vector(&self, coords: &[i64]) -> FieldVector {
        FieldVector(coords.iter().map(|&c| self.from_int(c)).collect())
    }

    // ---- arithmetic ----

    #[inline]
    pub fn add(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        match &self.tables {
            Some(t) => FieldElt(t.add[(a.0 * self.q + b.0) as usize] as u32),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElt) -> FieldElt {
        match &self.tables {
            Some(t) => FieldElt(t.neg[a.0 as usize] as u32),
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        match &self.tables {
            Some(t) => FieldElt(t.mul[(a.0 * self.q + b.0) as usize] as u32),
            None => self.mul_slow(a, b),
        }
    }

    pub fn square(&self, a: FieldElt) -> FieldElt {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElt, mut e: u64) -> FieldElt {
        let mut base = a;
        let mut acc = FieldElt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElt) -> Result<FieldElt> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => FieldElt(t.inv[a.0 as usize] as u32),
            None => self.pow(a, self.q as u64 - 2),
        })
    }

    pub fn div(&self, a: FieldElt, b: FieldElt) -> Result<FieldElt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Absolute trace to Z_p, returned as a residue in `[0, p)`.
    #[inline]
    pub fn trace(&self, a: FieldElt) -> u32 {
        match &self.tables {
            Some(t) => t.trace[a.0 as usize] as u32,
            None => self.trace_slow(a),
        }
    }

    /// Quadratic character: +1 on nonzero squares, -1 on non-squares, 0 at 0.
    #[inline]
    pub fn eta(&self, a: FieldElt) -> i8 {
        match &self.tables {
            Some(t) => t.eta[a.0 as usize],
            None => self.eta_slow(a),
        }
    }

    /// Canonical square root: the smaller of `{r, -r}` in element order.
    pub fn sqrt(&self, a: FieldElt) -> Option<FieldElt> {
        match &self.tables {
            Some(t) => {
                let r = t.sqrt[a.0 as usize];
                (r != u16::MAX).then_some(FieldElt(r as u32))
            }
            None => self.sqrt_slow(a),
        }
    }

    pub fn dot(&self, x: &[FieldElt], y: &[FieldElt]) -> FieldElt {
        x.iter()
            .zip(y)
            .fold(FieldElt::ZERO, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }

    pub fn sub_vec(&self, x: &FieldVector, y: &FieldVector) -> FieldVector {
        FieldVector(x.0.iter().zip(&y.0).map(|(&a, &b)| self.sub(a, b)).collect())
    }

    pub fn add_vec(&self, x: &FieldVector, y: &FieldVector) -> FieldVector {
        FieldVector(x.0.iter().zip(&y.0).map(|(&a, &b)| self.add(a, b)).collect())
    }

    pub fn neg_vec(&self, x: &FieldVector) -> FieldVector {
        FieldVector(x.0.iter().map(|&a| self.neg(a)).collect())
    }

    // ---- enumeration ----

    pub fn elements(&self) -> impl Iterator<Item = FieldElt> + Clone {
        (0..self.q).map(FieldElt)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElt> + Clone {
        (1..self.q).map(FieldElt)
    }

    /// Number of vectors in `F_q^k`, checked against the enumeration budget.
    pub fn vector_count(&self, k: usize) -> Result<u64> {
        let total = (self.q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if total > self.config.enumeration_budget as u128 {
            return Err(Error::BudgetExceeded { requested: total, budget: self.config.enumeration_budget });
        }
        Ok(total as u64)
    }

    /// All of `F_q^k` in lexicographic order (first coordinate most significant).
    pub fn vectors(&self, k: usize) -> Result<impl Iterator<Item = FieldVector> + '_> {
        let n = self.vector_count(k)?;
        Ok((0..n).map(move |i| self.vector_from_index(k, i)))
    }

    pub fn vector_index(&self, v: &FieldVector) -> u64 {
        v.0.iter().fold(0u64, |acc, c| acc * self.q as u64 + c.0 as u64)
    }

    pub fn vector_from_index(&self, k: usize, mut index: u64) -> FieldVector {
        let q = self.q as u64;
        let mut coords = vec![FieldElt::ZERO; k];
        for slot in coords.iter_mut().rev() {
            *slot = FieldElt((index % q) as u32);
            index /= q;
        }
        FieldVector(coords)
    }

    // ---- internals ----

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn decode(&self, mut index: u32) -> Vec<u32> {
        let mut out = vec![0; self.ell as usize];
        for c in out.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        out
    }

    fn add_slow(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        if self.ell == 1 {
            return FieldElt((a.0 + b.0) % self.p);
        }
        let (x, y) = (self.decode(a.0), self.decode(b.0));
        let sum: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        FieldElt(self.encode(&sum))
    }

    fn neg_slow(&self, a: FieldElt) -> FieldElt {
        if self.ell == 1 {
            return FieldElt((self.p - a.0) % self.p);
        }
        let x: Vec<u32> = self.decode(a.0).iter().map(|&u| (self.p - u) % self.p).collect();
        FieldElt(self.encode(&x))
    }

    fn mul_slow(&self, a: FieldElt, b: FieldElt) -> FieldElt {
        match &self.modulus {
            None => FieldElt(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
            Some(m) => {
                let prod = poly::mul(&self.decode(a.0), &self.decode(b.0), self.p);
                let mut r = poly::rem(&prod, m, self.p);
                r.resize(self.ell as usize, 0);
                FieldElt(self.encode(&r))
            }
        }
    }

    fn trace_slow(&self, a: FieldElt) -> u32 {
        let mut acc = a;
        let mut conj = a;
        for _ in 1..self.ell {
            conj = self.pow(conj, self.p as u64);
            acc = self.add(acc, conj);
        }
        debug_assert!(acc.0 < self.p, "trace must land in the prime subfield");
        acc.0
    }

    fn eta_slow(&self, a: FieldElt) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if self.pow(a, (self.q as u64 - 1) / 2) == FieldElt::ONE {
            1
        } else {
            -1
        }
    }

    /// Tonelli-Shanks in the multiplicative group of GF(q).
    fn sqrt_slow(&self, a: FieldElt) -> Option<FieldElt> {
        if a.is_zero() {
            return Some(a);
        }
        if self.eta_slow(a) != 1 {
            return None;
        }
        let mut s = 0u32;
        let mut t = self.q as u64 - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = self.nonzero_elements().find(|&z| self.eta_slow(z) == -1)?;
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut x = self.pow(a, t.div_ceil(2));
        let mut b = self.pow(a, t);
        while b != FieldElt::ONE {
            let mut i = 0;
            let mut b2 = b;
            while b2 != FieldElt::ONE {
                b2 = self.mul(b2, b2);
                i += 1;
            }
            let mut f = c;
            for _ in 0..(m - i - 1) {
                f = self.mul(f, f);
            }
            x = self.mul(x, f);
            c = self.mul(f, f);
            b = self.mul(b, c);
            m = i;
        }
        let neg = self.neg(x);
        Some(x.min(neg))
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_slow(FieldElt(a as u32), FieldElt(b as u32)).0 as u16;
                mul[a * q + b] = self.mul_slow(FieldElt(a as u32), FieldElt(b as u32)).0 as u16;
            }
        }
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            neg[a] = self.neg_slow(FieldElt(a as u32)).0 as u16;
            if a != 0 {
                let row = &mul[a * q..(a + 1) * q];
                inv[a] = row.iter().position(|&v| v == 1).expect("every nonzero element is invertible") as u16;
            }
        }
        let mut sqrt = vec![u16::MAX; q];
        let mut eta = vec![-1i8; q];
        eta[0] = 0;
        for r in 0..q {
            let s = mul[r * q + r] as usize;
            if sqrt[s] == u16::MAX {
                sqrt[s] = r as u16;
            }
            if s != 0 {
                eta[s] = 1;
            }
        }
        let trace = (0..q).map(|a| self.trace_slow(FieldElt(a as u32)) as u16).collect();
        Tables { add, mul, neg, inv, trace, eta, sqrt }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Dense polynomials over Z_p, low degree first.
mod poly {
    fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p = p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
            }
        }
        out.into_iter().map(|c| c as u32).collect()
    }

    /// Remainder of `a` modulo a monic `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let p64 = p as u64;
        while r.len() > dm {
            let lead = *r.last().unwrap() as u64;
            let shift = r.len() - 1 - dm;
            for (j, &c) in m.iter().enumerate() {
                let sub = lead * c as u64 % p64;
                r[shift + j] = ((r[shift + j] as u64 + p64 - sub) % p64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    /// Exhaustive trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for n in 0..count {
                let mut cand = Vec::with_capacity(d + 1);
                let mut x = n;
                for _ in 0..d {
                    cand.push((x % p as u64) as u32);
                    x /= p as u64;
                }
                cand.push(1);
                if rem(m, &cand, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// First monic irreducible of degree `ell`, scanning the encoding of the lower coefficients.
    pub fn first_irreducible(p: u32, ell: u32) -> Vec<u32> {
        let count = (p as u64).pow(ell);
        for n in 0..count {
            let mut m = Vec::with_capacity(ell as usize + 1);
            let mut x = n;
            for _ in 0..ell {
                m.push((x % p as u64) as u32);
                x /= p as u64;
            }
            m.push(1);
            if is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares_by_search(ctx: &FieldCtx) -> Vec<bool> {
        let mut is_sq = vec![false; ctx.q() as usize];
        for r in ctx.elements() {
            is_sq[ctx.mul_slow(r, r).index() as usize] = true;
        }
        is_sq
    }

    #[test]
    fn construction_examples() {
        let f3 = mk_field(3, 1, None).unwrap();
        assert_eq!((f3.q(), f3.modulus()), (3, None));
        let f9 = mk_field(3, 2, None).unwrap();
        assert_eq!(f9.modulus(), Some(&[1, 0, 1][..]));
        assert_eq!(mk_field(9, 1, None).unwrap_err(), Error::NonPrime(9));
        assert_eq!(mk_field(2, 3, None).unwrap_err(), Error::EvenCharacteristic);
        assert_eq!(mk_field(3, 0, None).unwrap_err(), Error::InvalidDegree);
        // x^2 + 2 = (x+1)(x+2) over Z_3
        assert_eq!(mk_field(3, 2, Some(&[2, 0, 1])).unwrap_err(), Error::ReducibleModulus { p: 3 });
        assert!(mk_field(3, 2, Some(&[2, 1, 1])).is_ok());
        assert!(matches!(mk_field(3, 2, Some(&[1, 0, 2])), Err(Error::InvalidModulus(_))));
    }

    #[test]
    fn modulus_search_matches_brute_force_root_test() {
        // degree 2 and 3 polynomials are irreducible iff rootless
        for (p, ell) in [(3u32, 2u32), (5, 2), (7, 2), (3, 3), (5, 3)] {
            let ctx = mk_field(p, ell, None).unwrap();
            let m = ctx.modulus().unwrap();
            let has_root = |m: &[u32]| {
                (0..p as u64).any(|x| m.iter().rev().fold(0u64, |acc, &c| (acc * x + c as u64) % p as u64) == 0)
            };
            assert!(!has_root(m));
            // every earlier candidate in scan order has a root
            let target = m[..ell as usize].iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64);
            for n in 0..target {
                let mut cand: Vec<u32> = (0..ell).map(|i| ((n / (p as u64).pow(i)) % p as u64) as u32).collect();
                cand.push(1);
                assert!(has_root(&cand), "{cand:?} should be reducible");
            }
        }
    }

    #[test]
    fn arithmetic_examples() {
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(f7.mul(f7.from_int(3), f7.from_int(5)), f7.from_int(1));
        assert_eq!(f7.inv(f7.from_int(3)).unwrap(), f7.from_int(5));
        assert_eq!(f7.inv(FieldElt::ZERO).unwrap_err(), Error::DivisionByZero);

        let f9 = FieldCtx::new(3, 2).unwrap();
        let x = f9.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f9.mul(x, x), f9.from_int(2));
        assert_eq!(f9.coeffs(f9.mul(x, x)), vec![2, 0]);
    }

    #[test]
    fn trace_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(f3.trace(f3.from_int(2)), 2);
        let f9 = FieldCtx::new(3, 2).unwrap();
        let x = f9.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f9.trace(x), 0);
        assert_eq!(f9.trace(FieldElt::ONE), 2);
    }

    #[test]
    fn eta_and_sqrt_examples() {
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(f7.eta(f7.from_int(2)), 1);
        assert_eq!(f7.eta(f7.from_int(3)), -1);
        assert_eq!(f7.eta(FieldElt::ZERO), 0);
        assert_eq!(f7.sqrt(f7.from_int(2)), Some(f7.from_int(3)));
        assert_eq!(f7.sqrt(f7.from_int(3)), None);
        assert_eq!(f7.sqrt(FieldElt::ZERO), Some(FieldElt::ZERO));
    }

    #[test]
    fn enumeration_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(f3.elements().map(|e| e.index()).collect::<Vec<_>>(), vec![0, 1, 2]);
        let v: Vec<_> = f3.vectors(2).unwrap().collect();
        assert_eq!(v.len(), 9);
        assert_eq!(v[0], f3.vector(&[0, 0]));
        assert_eq!(v[8], f3.vector(&[2, 2]));
        assert_eq!(v[1], f3.vector(&[0, 1]));
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(f7.vectors(4).unwrap().count(), 2401);
        let tiny = FieldCtx::with_config(7, 1, None, FieldConfig { enumeration_budget: 100, ..Default::default() }).unwrap();
        assert!(matches!(tiny.vectors(3), Err(Error::BudgetExceeded { requested: 343, budget: 100 })));
    }

    #[test]
    fn vector_index_round_trip() {
        let f5 = FieldCtx::prime(5).unwrap();
        for (i, v) in f5.vectors(3).unwrap().enumerate() {
            assert_eq!(f5.vector_index(&v), i as u64);
        }
    }

    /// Tables and the slow paths must agree everywhere.
    #[test]
    fn table_and_slow_paths_agree() {
        for (p, ell) in [(3, 1), (3, 3), (5, 2), (7, 2), (11, 1), (3, 4)] {
            let fast = FieldCtx::new(p, ell).unwrap();
            let slow = FieldCtx::with_config(p, ell, None, FieldConfig { table_threshold: 0, ..Default::default() }).unwrap();
            assert!(fast.has_tables() && !slow.has_tables());
            for a in fast.elements() {
                assert_eq!(fast.neg(a), slow.neg(a));
                assert_eq!(fast.trace(a), slow.trace(a));
                assert_eq!(fast.eta(a), slow.eta(a));
                assert_eq!(fast.sqrt(a), slow.sqrt(a), "sqrt in GF({p}^{ell}) of {a}");
                if !a.is_zero() {
                    assert_eq!(fast.inv(a), slow.inv(a));
                }
                for b in fast.elements().step_by(3) {
                    assert_eq!(fast.add(a, b), slow.add(a, b));
                    assert_eq!(fast.mul(a, b), slow.mul(a, b));
                }
            }
        }
    }

    #[test]
    fn quadratic_character_properties() {
        for (p, ell) in [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2), (7, 3), (11, 1), (13, 1)] {
            let ctx = FieldCtx::new(p, ell).unwrap();
            if ctx.q() > 343 {
                continue;
            }
            let is_sq = squares_by_search(&ctx);
            let nonzero_squares = ctx.nonzero_elements().filter(|&a| ctx.eta(a) == 1).count();
            assert_eq!(nonzero_squares as u32, (ctx.q() - 1) / 2);
            for a in ctx.nonzero_elements() {
                assert_eq!(ctx.eta(a) * ctx.eta(a), 1);
                assert_eq!(ctx.eta(a) == 1, is_sq[a.index() as usize]);
                match ctx.sqrt(a) {
                    Some(r) => {
                        assert_eq!(ctx.mul(r, r), a);
                        assert!(r <= ctx.neg(r));
                    }
                    None => assert_eq!(ctx.eta(a), -1),
                }
                for b in ctx.nonzero_elements() {
                    assert_eq!(ctx.eta(ctx.mul(a, b)), ctx.eta(a) * ctx.eta(b));
                }
            }
        }
    }

    #[test]
    fn trace_is_linear_and_surjective() {
        for (p, ell) in [(3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (7, 3), (11, 2)] {
            let ctx = FieldCtx::new(p, ell).unwrap();
            let mut hit = vec![false; p as usize];
            for a in ctx.elements() {
                hit[ctx.trace(a) as usize] = true;
                for c in 0..p {
                    let ca = ctx.mul(ctx.from_int(c as i64), a);
                    assert_eq!(ctx.trace(ca), c * ctx.trace(a) % p);
                }
                for b in ctx.elements().step_by(5) {
                    assert_eq!(ctx.trace(ctx.add(a, b)), (ctx.trace(a) + ctx.trace(b)) % p);
                }
            }
            assert!(hit.iter().all(|&h| h));
            for c in 0..p {
                let a = ctx.from_int(c as i64);
                assert_eq!(ctx.pow(a, p as u64), a, "Frobenius fixes the prime subfield");
            }
        }
    }
}
