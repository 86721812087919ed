use std::fmt::Display;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

/// One checked relation, with both sides rendered exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Assertion {
    pub fn new(name: impl Into<String>, lhs: impl Display, rhs: impl Display, pass: bool) -> Self {
        Self { name: name.into(), lhs: lhs.to_string(), rhs: rhs.to_string(), pass }
    }

    pub fn le<T: PartialOrd + Display>(name: impl Into<String>, lhs: T, rhs: T) -> Self {
        let pass = lhs <= rhs;
        Self::new(name, lhs, rhs, pass)
    }

    pub fn eq<T: PartialEq + Display>(name: impl Into<String>, lhs: T, rhs: T) -> Self {
        let pass = lhs == rhs;
        Self::new(name, lhs, rhs, pass)
    }
}

/// Largest integer magnitude a JSON reader can hold in an IEEE double without loss.
pub const MAX_SAFE_INTEGER: u64 = 1 << 53;

/// Serializes as a JSON number when `|n| <= 2^53`, otherwise as a decimal string.
pub struct Exact<'a>(pub &'a BigInt);

impl Serialize for Exact<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.unsigned_abs() <= MAX_SAFE_INTEGER => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub fn serialize_exact<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    Exact(n).serialize(s)
}

/// `(value, multiplicity)` pairs as `{"value", "multiplicity"}` objects.
pub fn serialize_spectrum<S: Serializer>(pairs: &[(BigInt, u64)], s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        value: Exact<'a>,
        multiplicity: u64,
    }
    s.collect_seq(pairs.iter().map(|(v, m)| Entry { value: Exact(v), multiplicity: *m }))
}
