//! The cone `Q(x) = -x_1^2 + x_2^2 + ... + x_k^2 = 0`, the zero-sphere
//! `||x|| = x_1^2 + ... + x_k^2 = 0`, and general spheres `||x - c|| = r`.
//!
//! Point sets are found by exhaustive evaluation over `F_q^k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElt, FieldVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Cone,
    Norm,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::Cone => "cone",
            Form::Norm => "norm",
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Form {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cone" => Ok(Form::Cone),
            "norm" | "sphere" => Ok(Form::Norm),
            other => Err(format!("unknown form '{other}' (expected cone or norm)")),
        }
    }
}

/// A quadratic hypersurface through the origin in `F_q^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarietySpec {
    pub form: Form,
    pub k: usize,
}

impl VarietySpec {
    pub fn new(form: Form, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidDimension(k));
        }
        Ok(Self { form, k })
    }

    /// Evaluates the form on raw coordinates; the caller guarantees the length.
    #[inline]
    pub fn eval_coords(&self, ctx: &FieldCtx, x: &[FieldElt]) -> FieldElt {
        let tail = x[1..].iter().fold(FieldElt::ZERO, |acc, &c| ctx.add(acc, ctx.square(c)));
        let head = ctx.square(x[0]);
        match self.form {
            Form::Cone => ctx.sub(tail, head),
            Form::Norm => ctx.add(tail, head),
        }
    }

    pub fn eval(&self, ctx: &FieldCtx, x: &FieldVector) -> Result<FieldElt> {
        if x.dim() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: x.dim() });
        }
        Ok(self.eval_coords(ctx, x.coords()))
    }

    #[inline]
    pub fn contains_coords(&self, ctx: &FieldCtx, x: &[FieldElt]) -> bool {
        self.eval_coords(ctx, x).is_zero()
    }
}

pub fn form_eval(spec: &VarietySpec, ctx: &FieldCtx, x: &FieldVector) -> Result<FieldElt> {
    spec.eval(ctx, x)
}

/// The zero set, in lexicographic order.
pub fn variety_points(spec: &VarietySpec, ctx: &FieldCtx) -> Result<Vec<FieldVector>> {
    Ok(ctx.vectors(spec.k)?.filter(|x| spec.contains_coords(ctx, x.coords())).collect())
}

pub fn variety_card(spec: &VarietySpec, ctx: &FieldCtx) -> Result<u64> {
    Ok(ctx.vectors(spec.k)?.filter(|x| spec.contains_coords(ctx, x.coords())).count() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sphere {
    pub center: FieldVector,
    /// The right-hand side `r` of `||x - c|| = r`, not a square root of it.
    pub radius: FieldElt,
}

impl Sphere {
    pub fn new(center: FieldVector, radius: FieldElt) -> Result<Self> {
        if center.dim() < 2 {
            return Err(Error::InvalidDimension(center.dim()));
        }
        Ok(Self { center, radius })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// `||x - c||`.
    #[inline]
    pub fn distance_from_center(&self, ctx: &FieldCtx, x: &[FieldElt]) -> FieldElt {
        x.iter()
            .zip(self.center.coords())
            .fold(FieldElt::ZERO, |acc, (&a, &c)| ctx.add(acc, ctx.square(ctx.sub(a, c))))
    }

    pub fn contains(&self, ctx: &FieldCtx, x: &FieldVector) -> Result<bool> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        Ok(self.distance_from_center(ctx, x.coords()) == self.radius)
    }
}

pub fn sphere_points(s: &Sphere, ctx: &FieldCtx) -> Result<Vec<FieldVector>> {
    Ok(ctx
        .vectors(s.dim())?
        .filter(|x| s.distance_from_center(ctx, x.coords()) == s.radius)
        .collect())
}
