//! Point-sphere incidences in `F_q^d` and the lift into a Cayley graph on `F_q^{d+1}`.
//!
//! A point `p` becomes `(0, p)`. A sphere `||x - a|| = t` becomes `(r, a)`, where
//! `r = sqrt(t)` for square `t` (cone graph) or `r = sqrt(-t)` for non-square `t`
//! when `q = 3 mod 4` (zero-sphere graph). In both cases the lifted pair differs by
//! an element of the connection set exactly when the point lies on the sphere.
//!
//! All bounds are compared in exact integer arithmetic after clearing
//! denominators and square roots.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElt, FieldVector};
use crate::geometry::{Form, Sphere, VarietySpec};
use crate::par;
use crate::report::Assertion;
use crate::spectrum::ConnectionSet;

/// Per-trial seed derivation shared by every randomized suite.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_add(trial)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<FieldVector>,
}

impl PointSet {
    /// Sorts the points; rejects duplicates and mixed lengths.
    pub fn new(dim: usize, mut points: Vec<FieldVector>) -> Result<Self> {
        if let Some(bad) = points.iter().find(|x| x.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement);
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[FieldVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusClass {
    Square,
    NonSquare,
    Arbitrary,
}

impl RadiusClass {
    pub fn name(self) -> &'static str {
        match self {
            RadiusClass::Square => "square",
            RadiusClass::NonSquare => "nonsquare",
            RadiusClass::Arbitrary => "arbitrary",
        }
    }

    pub fn admits(self, ctx: &FieldCtx, r: FieldElt, allow_zero: bool) -> bool {
        match self {
            RadiusClass::Square => ctx.eta(r) == 1 || (allow_zero && r.is_zero()),
            RadiusClass::NonSquare => ctx.eta(r) == -1,
            RadiusClass::Arbitrary => true,
        }
    }

    /// Admissible radii in element order.
    pub fn radii(self, ctx: &FieldCtx, allow_zero: bool) -> Vec<FieldElt> {
        ctx.elements().filter(|&r| self.admits(ctx, r, allow_zero)).collect()
    }
}

impl fmt::Display for RadiusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RadiusClass {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "square" => Ok(Self::Square),
            "nonsquare" | "non-square" => Ok(Self::NonSquare),
            "arbitrary" | "any" => Ok(Self::Arbitrary),
            other => Err(format!("unknown radius class '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereSet {
    dim: usize,
    spheres: Vec<Sphere>,
    radius_class: RadiusClass,
    allow_zero_radius: bool,
}

impl SphereSet {
    /// Sorts the spheres and checks every radius against `radius_class`.
    /// Radius 0 is admitted in the square class only with `allow_zero_radius`.
    pub fn new(
        dim: usize,
        mut spheres: Vec<Sphere>,
        radius_class: RadiusClass,
        allow_zero_radius: bool,
        ctx: &FieldCtx,
    ) -> Result<Self> {
        if let Some(bad) = spheres.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        if spheres.iter().any(|s| !radius_class.admits(ctx, s.radius, allow_zero_radius)) {
            return Err(Error::RadiusClassViolation);
        }
        spheres.sort();
        if spheres.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement);
        }
        Ok(Self { dim, spheres, radius_class, allow_zero_radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spheres(&self) -> &[Sphere] {
        &self.spheres
    }

    pub fn radius_class(&self) -> RadiusClass {
        self.radius_class
    }

    pub fn allow_zero_radius(&self) -> bool {
        self.allow_zero_radius
    }

    pub fn len(&self) -> usize {
        self.spheres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spheres.is_empty()
    }
}

fn check_dims(points: &PointSet, spheres: &SphereSet) -> Result<()> {
    if points.dim() != spheres.dim() {
        return Err(Error::DimensionMismatch { expected: points.dim(), found: spheres.dim() });
    }
    Ok(())
}

/// `I(P, S)`: pairs `(p, s)` with `p` on `s`, by direct evaluation.
pub fn count_incidences(points: &PointSet, spheres: &SphereSet, ctx: &FieldCtx) -> Result<u64> {
    check_dims(points, spheres)?;
    let per_sphere = par::map_items(spheres.spheres(), |s| {
        points
            .points()
            .iter()
            .filter(|x| s.distance_from_center(ctx, x.coords()) == s.radius)
            .count() as u64
    });
    Ok(per_sphere.into_iter().sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lift {
    pub form: Form,
    pub k: usize,
    /// `(0, p)` for each point, in point order.
    pub points: Vec<FieldVector>,
    /// `(r, a)` for each sphere, in sphere order.
    pub spheres: Vec<FieldVector>,
}

impl Lift {
    /// `W`: the union of both families, sorted and deduplicated.
    pub fn vertex_set(&self) -> Vec<FieldVector> {
        let mut w: Vec<FieldVector> = self.points.iter().chain(&self.spheres).cloned().collect();
        w.sort();
        w.dedup();
        w
    }
}

/// Which graph a radius class lifts into over this field, if any.
pub fn lift_form(class: RadiusClass, ctx: &FieldCtx) -> Result<Form> {
    match class {
        RadiusClass::Square => Ok(Form::Cone),
        RadiusClass::NonSquare if ctx.q_mod4() == 3 => Ok(Form::Norm),
        RadiusClass::NonSquare => Err(Error::UnsupportedRadiusClass("non-square radii need q = 3 mod 4".into())),
        RadiusClass::Arbitrary => Err(Error::UnsupportedRadiusClass("arbitrary radii cannot be lifted".into())),
    }
}

pub fn lift(points: &PointSet, spheres: &SphereSet, ctx: &FieldCtx) -> Result<Lift> {
    check_dims(points, spheres)?;
    let form = lift_form(spheres.radius_class(), ctx)?;
    let lifted_points = points.points().iter().map(|x| x.prepend(FieldElt::ZERO)).collect();
    let lifted_spheres = spheres
        .spheres()
        .iter()
        .map(|s| {
            // cone: -r^2 + ||p - a|| = 0 with r^2 = t.
            // zero-sphere: r^2 + ||p - a|| = 0 with r^2 = -t; -t is a square because
            // eta(-1) = -1 when q = 3 mod 4.
            let target = match form {
                Form::Cone => s.radius,
                Form::Norm => ctx.neg(s.radius),
            };
            let r = ctx.sqrt(target).ok_or(Error::RadiusClassViolation)?;
            Ok(s.center.prepend(r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Lift { form, k: points.dim() + 1, points: lifted_points, spheres: lifted_spheres })
}

fn common_dim(w: &[FieldVector]) -> Result<usize> {
    let k = w.first().map_or(0, FieldVector::dim);
    if let Some(bad) = w.iter().find(|x| x.dim() != k) {
        return Err(Error::DimensionMismatch { expected: k, found: bad.dim() });
    }
    Ok(k)
}

/// Ordered pairs `(x, y)` in `from x to` with `x - y` in the connection set, by direct testing.
pub fn cross_edges(from: &[FieldVector], to: &[FieldVector], form: Form, ctx: &FieldCtx) -> Result<u64> {
    if from.is_empty() || to.is_empty() {
        return Ok(0);
    }
    let k = common_dim(from)?;
    if let Some(bad) = to.iter().find(|y| y.dim() != k) {
        return Err(Error::DimensionMismatch { expected: k, found: bad.dim() });
    }
    let spec = VarietySpec::new(form, k)?;
    let rows = par::map_items(from, |x| {
        let mut diff = vec![FieldElt::ZERO; k];
        to.iter()
            .filter(|y| {
                for (d, (&a, &b)) in diff.iter_mut().zip(x.coords().iter().zip(y.coords())) {
                    *d = ctx.sub(a, b);
                }
                spec.contains_coords(ctx, &diff)
            })
            .count() as u64
    });
    Ok(rows.into_iter().sum())
}

/// `e(W, W)` by the double loop over all ordered pairs.
pub fn edge_count_pairwise(w: &[FieldVector], form: Form, ctx: &FieldCtx) -> Result<u64> {
    cross_edges(w, w, form, ctx)
}

/// `e(W, W)`: ordered pairs in `W x W` whose difference lies in the connection set.
/// Coincident pairs count, since the origin is in the connection set. `W` must not
/// contain duplicates.
pub fn edge_count(w: &[FieldVector], form: Form, ctx: &FieldCtx) -> Result<u64> {
    let k = common_dim(w)?;
    if w.is_empty() {
        return Ok(0);
    }
    let spec = VarietySpec::new(form, k)?;
    let n = w.len() as u128;
    let space = ctx.vector_count(k)? as u128;
    if n * n <= space {
        return edge_count_pairwise(w, form, ctx);
    }
    let conn = ConnectionSet::new(spec, ctx)?;
    if n == space {
        // the whole vertex set of a |E|-regular graph
        return Ok((n * conn.len() as u128) as u64);
    }
    if n <= conn.len() as u128 {
        return edge_count_pairwise(w, form, ctx);
    }
    let members: HashSet<u64> = w.iter().map(|x| ctx.vector_index(x)).collect();
    let rows = par::map_items(w, |x| {
        let mut neighbour = FieldVector::zero(k);
        conn.points()
            .filter(|z| {
                let coords: Vec<FieldElt> = x.coords().iter().zip(z.iter()).map(|(&a, &b)| ctx.sub(a, b)).collect();
                neighbour = FieldVector::new(coords);
                members.contains(&ctx.vector_index(&neighbour))
            })
            .count() as u64
    });
    Ok(rows.into_iter().sum())
}

/// Whether the positive nontrivial eigenvalues of the `(form, k)` graph all equal `q^{(k-2)/2}`.
pub fn mixing_applies(form: Form, k: usize, ctx: &FieldCtx) -> bool {
    ctx.q_mod4() == 3
        && match form {
            Form::Cone => k % 4 == 0,
            Form::Norm => k % 4 == 2,
        }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingCheck {
    pub size: u64,
    pub edges: u64,
    /// `|W|^2 / q + q^{(k-2)/2} |W|`.
    pub bound: BigRational,
    pub pass: bool,
}

/// `e(W, W) <= |W|^2/q + q^{(k-2)/2} |W|`, compared as `q e <= |W|^2 + q^{k/2} |W|`.
pub fn mixing_bound_check(w: &[FieldVector], form: Form, ctx: &FieldCtx) -> Result<MixingCheck> {
    let k = common_dim(w)?;
    if w.is_empty() {
        return Ok(MixingCheck { size: 0, edges: 0, bound: BigRational::from_integer(0.into()), pass: true });
    }
    if !mixing_applies(form, k, ctx) {
        return Err(Error::UnsupportedCase(format!(
            "mixing bound needs q = 3 mod 4 and k = {} mod 4 for the {form} graph",
            if form == Form::Cone { 0 } else { 2 }
        )));
    }
    let edges = edge_count(w, form, ctx)?;
    let q = BigInt::from(ctx.q());
    let n = BigInt::from(w.len());
    let numer = &n * &n + pow(q.clone(), k / 2) * &n;
    let pass = &q * BigInt::from(edges) <= numer;
    Ok(MixingCheck { size: w.len() as u64, edges, bound: BigRational::new(numer, q), pass })
}

/// `lhs <= sqrt(rhs_squared)` exactly.
fn le_sqrt(lhs: &BigInt, rhs_squared: &BigInt) -> bool {
    !lhs.is_positive() || lhs * lhs <= *rhs_squared
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftSummary {
    pub form: Form,
    pub k: usize,
    pub vertices: u64,
    /// Edges from lifted points to lifted spheres; equals `I(P, S)`.
    pub cross_edges: u64,
    pub edges: u64,
    /// Whether the lift graph has the single positive nontrivial eigenvalue `q^{(k-2)/2}`.
    pub theorem_backed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IncidenceReport {
    pub q: u32,
    pub d: usize,
    pub points: u64,
    pub spheres: u64,
    pub n: u64,
    pub radius_class: RadiusClass,
    pub incidences: u64,
    pub lift: Option<LiftSummary>,
    /// `q^{-1}|P||S| + q^{(d-1)/2} sqrt(|P||S|)`, report only.
    pub small_family_rhs: f64,
    /// `|I - |P||S|/q| / (q^{(d-1)/2} sqrt(|P||S|))`, report only.
    pub small_family_ratio: f64,
    /// `q^{-1} N^2 + q^{(d-1)/2} N`, report only.
    pub balanced_rhs: f64,
    /// `I / balanced_rhs`, report only.
    pub balanced_ratio: f64,
    pub assertions: Vec<Assertion>,
}

impl IncidenceReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }
}

pub fn incidence_report(points: &PointSet, spheres: &SphereSet, ctx: &FieldCtx) -> Result<IncidenceReport> {
    check_dims(points, spheres)?;
    let d = points.dim();
    let q = ctx.q();
    let qb = BigInt::from(q);
    let (np, ns) = (points.len() as u64, spheres.len() as u64);
    let n = np.max(ns);
    let incidences = count_incidences(points, spheres, ctx)?;
    let mut assertions = Vec::new();

    // |I - |P||S|/q| <= q^{d/2} sqrt(|P||S|)  <=>  (qI - |P||S|)^2 <= q^{d+2} |P||S|
    let product = BigInt::from(np) * BigInt::from(ns);
    let deviation = &qb * BigInt::from(incidences) - &product;
    let deviation_sq = &deviation * &deviation;
    let deviation_rhs = pow(qb.clone(), d + 2) * &product;
    assertions.push(Assertion::le("deviation_bound", deviation_sq, deviation_rhs));

    let lift_summary = match lift_form(spheres.radius_class(), ctx) {
        Ok(_) => {
            let lifted = lift(points, spheres, ctx)?;
            let w = lifted.vertex_set();
            let cross = cross_edges(&lifted.points, &lifted.spheres, lifted.form, ctx)?;
            let edges = edge_count(&w, lifted.form, ctx)?;
            assertions.push(Assertion::eq("lift_preserves_incidences", incidences, cross));
            assertions.push(Assertion::le("incidences_le_edges", incidences, edges));
            // I <= 4N^2/q + 2 q^{(d-1)/2} N  <=>  qI - 4N^2 <= 2 q^{(d+1)/2} N
            let nb = BigInt::from(n);
            let excess = &qb * BigInt::from(incidences) - BigInt::from(4) * &nb * &nb;
            let rhs_sq = BigInt::from(4) * pow(qb.clone(), d + 1) * &nb * &nb;
            assertions.push(Assertion::new("derived_mixing_bound", &excess, format!("sqrt({rhs_sq})"), le_sqrt(&excess, &rhs_sq)));
            Some(LiftSummary {
                form: lifted.form,
                k: lifted.k,
                vertices: w.len() as u64,
                cross_edges: cross,
                edges,
                theorem_backed: mixing_applies(lifted.form, lifted.k, ctx),
            })
        }
        Err(_) => None,
    };

    let qf = q as f64;
    let half = qf.powf((d as f64 - 1.0) / 2.0);
    let root = ((np * ns) as f64).sqrt();
    let small_family_rhs = (np * ns) as f64 / qf + half * root;
    let small_family_ratio = if root > 0.0 { (incidences as f64 - (np * ns) as f64 / qf).abs() / (half * root) } else { 0.0 };
    let balanced_rhs = (n * n) as f64 / qf + half * n as f64;
    let balanced_ratio = if n > 0 { incidences as f64 / balanced_rhs } else { 0.0 };

    Ok(IncidenceReport {
        q,
        d,
        points: np,
        spheres: ns,
        n,
        radius_class: spheres.radius_class(),
        incidences,
        lift: lift_summary,
        small_family_rhs,
        small_family_ratio,
        balanced_rhs,
        balanced_ratio,
        assertions,
    })
}

/// `U(t)`: ordered pairs of `E` at distance `t != 0`.
pub fn distance_count(set: &PointSet, t: FieldElt, ctx: &FieldCtx) -> Result<u64> {
    if t.is_zero() {
        return Err(Error::ZeroDistance);
    }
    Ok(distance_histogram(set, ctx)[t.index() as usize])
}

/// Ordered-pair counts of `||x - y||` for every value, coincident pairs included (at 0).
pub fn distance_histogram(set: &PointSet, ctx: &FieldCtx) -> Vec<u64> {
    let q = ctx.q() as usize;
    let rows = par::map_items(set.points(), |x| {
        let mut h = vec![0u64; q];
        for y in set.points() {
            let dist = x
                .coords()
                .iter()
                .zip(y.coords())
                .fold(FieldElt::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.square(ctx.sub(a, b))));
            h[dist.index() as usize] += 1;
        }
        h
    });
    rows.into_iter().fold(vec![0u64; q], |mut acc, h| {
        acc.iter_mut().zip(h).for_each(|(a, b)| *a += b);
        acc
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceCheck {
    pub t: FieldElt,
    pub count: u64,
    pub pass: bool,
}

/// `U(t) <= |E|^2/q + 2 q^{(d-1)/2} |E|` for every `t != 0`.
pub fn distance_bound_checks(set: &PointSet, ctx: &FieldCtx) -> Vec<DistanceCheck> {
    let hist = distance_histogram(set, ctx);
    let q = BigInt::from(ctx.q());
    let e = BigInt::from(set.len());
    let rhs_sq = BigInt::from(4) * pow(q.clone(), set.dim() + 1) * &e * &e;
    ctx.nonzero_elements()
        .map(|t| {
            let count = hist[t.index() as usize];
            let excess = &q * BigInt::from(count) - &e * &e;
            DistanceCheck { t, count, pass: le_sqrt(&excess, &rhs_sq) }
        })
        .collect()
}

fn sample_indices(population: u64, n: u64, seed: u64) -> Result<Vec<u64>> {
    if n > population {
        return Err(Error::PopulationTooSmall { requested: n, available: population });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<u64> =
        rand::seq::index::sample(&mut rng, population as usize, n as usize).into_iter().map(|i| i as u64).collect();
    picked.sort_unstable();
    Ok(picked)
}

/// `n` distinct uniform points of `F_q^d`.
pub fn gen_points(ctx: &FieldCtx, d: usize, n: u64, seed: u64) -> Result<PointSet> {
    let population = ctx.vector_count(d)?;
    let picked = sample_indices(population, n, seed)?;
    PointSet::new(d, picked.into_iter().map(|i| ctx.vector_from_index(d, i)).collect())
}

/// `n` distinct uniform spheres with centers in `F_q^d` and radii from `class`.
pub fn gen_spheres(
    ctx: &FieldCtx,
    d: usize,
    n: u64,
    class: RadiusClass,
    allow_zero_radius: bool,
    seed: u64,
) -> Result<SphereSet> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let radii = class.radii(ctx, allow_zero_radius);
    let population = ctx.vector_count(d)? * radii.len() as u64;
    let picked = sample_indices(population, n, seed)?;
    let r = radii.len() as u64;
    let spheres = picked
        .into_iter()
        .map(|i| Sphere::new(ctx.vector_from_index(d, i / r), radii[(i % r) as usize]))
        .collect::<Result<Vec<_>>>()?;
    SphereSet::new(d, spheres, class, allow_zero_radius, ctx)
}

/// Points and spheres for one randomized instance; the two families use independent streams.
pub fn gen_instance(
    ctx: &FieldCtx,
    d: usize,
    n_points: u64,
    n_spheres: u64,
    class: RadiusClass,
    allow_zero_radius: bool,
    seed: u64,
) -> Result<(PointSet, SphereSet)> {
    let points = gen_points(ctx, d, n_points, seed)?;
    let spheres = gen_spheres(ctx, d, n_spheres, class, allow_zero_radius, seed ^ SPHERE_STREAM)?;
    Ok((points, spheres))
}

const SPHERE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sphere_points, variety_card};

    fn f(p: u32) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    fn pts(ctx: &FieldCtx, d: usize, v: &[&[i64]]) -> PointSet {
        PointSet::new(d, v.iter().map(|c| ctx.vector(c)).collect()).unwrap()
    }

    fn one_sphere(ctx: &FieldCtx, c: &[i64], r: i64, class: RadiusClass) -> SphereSet {
        let s = Sphere::new(ctx.vector(c), ctx.from_int(r)).unwrap();
        SphereSet::new(c.len(), vec![s], class, false, ctx).unwrap()
    }

    #[test]
    fn incidence_examples() {
        let f3 = f(3);
        let s = one_sphere(&f3, &[0, 0, 0], 1, RadiusClass::Square);
        assert_eq!(count_incidences(&pts(&f3, 3, &[&[1, 0, 0]]), &s, &f3).unwrap(), 1);
        assert_eq!(count_incidences(&pts(&f3, 3, &[]), &s, &f3).unwrap(), 0);

        let f7 = f(7);
        let all = PointSet::new(3, f7.vectors(3).unwrap().collect()).unwrap();
        let unit = one_sphere(&f7, &[0, 0, 0], 1, RadiusClass::Square);
        let size = sphere_points(&unit.spheres()[0], &f7).unwrap().len() as u64;
        assert_eq!(count_incidences(&all, &unit, &f7).unwrap(), size);
        assert!(matches!(
            count_incidences(&pts(&f7, 2, &[&[1, 0]]), &unit, &f7),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn set_validation() {
        let f7 = f(7);
        assert_eq!(PointSet::new(2, vec![f7.vector(&[1, 1]), f7.vector(&[1, 1])]).unwrap_err(), Error::DuplicateElement);
        let s = Sphere::new(f7.vector(&[0, 0]), f7.from_int(3)).unwrap();
        assert_eq!(SphereSet::new(2, vec![s.clone()], RadiusClass::Square, false, &f7).unwrap_err(), Error::RadiusClassViolation);
        assert!(SphereSet::new(2, vec![s], RadiusClass::NonSquare, false, &f7).is_ok());
        let zero = Sphere::new(f7.vector(&[0, 0]), FieldElt::ZERO).unwrap();
        assert!(SphereSet::new(2, vec![zero.clone()], RadiusClass::Square, false, &f7).is_err());
        assert!(SphereSet::new(2, vec![zero.clone()], RadiusClass::Square, true, &f7).is_ok());
        assert!(SphereSet::new(2, vec![zero], RadiusClass::Arbitrary, false, &f7).is_ok());
    }

    #[test]
    fn lift_examples() {
        let f7 = f(7);
        let p = pts(&f7, 3, &[&[1, 0, 0]]);
        let sq = one_sphere(&f7, &[1, 2, 3], 2, RadiusClass::Square);
        let l = lift(&p, &sq, &f7).unwrap();
        assert_eq!((l.form, l.k), (Form::Cone, 4));
        assert_eq!(l.spheres, vec![f7.vector(&[3, 1, 2, 3])]);
        assert_eq!(l.points, vec![f7.vector(&[0, 1, 0, 0])]);

        let ns = one_sphere(&f7, &[1, 2, 3], 3, RadiusClass::NonSquare);
        let l = lift(&p, &ns, &f7).unwrap();
        assert_eq!(l.form, Form::Norm);
        assert_eq!(l.spheres, vec![f7.vector(&[2, 1, 2, 3])]);

        let any = one_sphere(&f7, &[1, 2, 3], 3, RadiusClass::Arbitrary);
        assert!(matches!(lift(&p, &any, &f7), Err(Error::UnsupportedRadiusClass(_))));
        let f5 = f(5);
        let ns5 = one_sphere(&f5, &[1, 2, 3], 2, RadiusClass::NonSquare);
        assert!(matches!(lift(&pts(&f5, 3, &[&[0, 0, 0]]), &ns5, &f5), Err(Error::UnsupportedRadiusClass(_))));
    }

    #[test]
    fn lift_turns_incidences_into_edges_exhaustively() {
        // every point of F_3^2 against every square / non-square sphere
        let f3 = f(3);
        let all = PointSet::new(2, f3.vectors(2).unwrap().collect()).unwrap();
        for class in [RadiusClass::Square, RadiusClass::NonSquare] {
            let spheres: Vec<_> = f3
                .vectors(2)
                .unwrap()
                .flat_map(|c| class.radii(&f3, false).into_iter().map(move |r| Sphere::new(c.clone(), r).unwrap()))
                .collect();
            let s = SphereSet::new(2, spheres, class, false, &f3).unwrap();
            let l = lift(&all, &s, &f3).unwrap();
            let i = count_incidences(&all, &s, &f3).unwrap();
            assert_eq!(cross_edges(&l.points, &l.spheres, l.form, &f3).unwrap(), i);
            let w = l.vertex_set();
            assert_eq!(w.len(), all.len() + s.len());
            assert!(i <= edge_count(&w, l.form, &f3).unwrap());
        }
    }

    #[test]
    fn edge_count_examples() {
        let f3 = f(3);
        let full: Vec<_> = f3.vectors(4).unwrap().collect();
        assert_eq!(edge_count(&full, Form::Cone, &f3).unwrap(), 1701);
        assert_eq!(edge_count_pairwise(&full, Form::Cone, &f3).unwrap(), 1701);
        assert_eq!(edge_count(&[FieldVector::zero(4)], Form::Cone, &f3).unwrap(), 1);
        let two = vec![f3.vector(&[0, 0, 0, 0]), f3.vector(&[1, 1, 0, 0])];
        assert_eq!(edge_count(&two, Form::Cone, &f3).unwrap(), 4);
        assert!(matches!(
            edge_count(&[f3.vector(&[0, 0]), f3.vector(&[0, 0, 0])], Form::Cone, &f3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn edge_count_strategies_agree() {
        let f5 = f(5);
        for (n, seed) in [(30u64, 1u64), (200, 2), (500, 3), (624, 4)] {
            let w = gen_points(&f5, 4, n, seed).unwrap();
            for form in [Form::Cone, Form::Norm] {
                assert_eq!(
                    edge_count(w.points(), form, &f5).unwrap(),
                    edge_count_pairwise(w.points(), form, &f5).unwrap(),
                    "{form} n={n}"
                );
            }
        }
    }

    #[test]
    fn mixing_examples() {
        let f3 = f(3);
        let full: Vec<_> = f3.vectors(4).unwrap().collect();
        let m = mixing_bound_check(&full, Form::Cone, &f3).unwrap();
        assert_eq!(m.edges, 1701);
        assert_eq!(m.bound, BigRational::from_integer(BigInt::from(2430)));
        assert!(m.pass);
        let m = mixing_bound_check(&[FieldVector::zero(4)], Form::Cone, &f3).unwrap();
        assert_eq!(m.bound, BigRational::new(BigInt::from(10), BigInt::from(3)));
        assert!(m.pass);
        assert!(matches!(mixing_bound_check(&full, Form::Norm, &f3), Err(Error::UnsupportedCase(_))));

        let f7 = f(7);
        for trial in 0..100 {
            let w = gen_points(&f7, 4, 50, trial_seed(0, trial)).unwrap();
            assert!(mixing_bound_check(w.points(), Form::Cone, &f7).unwrap().pass);
        }
    }

    #[test]
    fn incidence_report_examples() {
        let f7 = f(7);
        let p = gen_points(&f7, 3, 30, 1).unwrap();
        let s = gen_spheres(&f7, 3, 30, RadiusClass::Square, false, 1).unwrap();
        let r = incidence_report(&p, &s, &f7).unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
        assert!(r.lift.as_ref().unwrap().theorem_backed);

        let f11 = f(11);
        let p = gen_points(&f11, 3, 40, 2).unwrap();
        let centers: Vec<Sphere> = p.points().iter().map(|c| Sphere::new(c.clone(), FieldElt::ONE).unwrap()).collect();
        let s = SphereSet::new(3, centers, RadiusClass::Square, false, &f11).unwrap();
        let r = incidence_report(&p, &s, &f11).unwrap();
        assert!(r.passed());
        assert!(r.balanced_ratio.is_finite());

        let empty = PointSet::new(3, vec![]).unwrap();
        let r = incidence_report(&empty, &s, &f11).unwrap();
        assert_eq!(r.incidences, 0);
        assert!(r.passed());
    }

    #[test]
    fn distance_examples() {
        let f7 = f(7);
        let e = pts(&f7, 3, &[&[0, 0, 0], &[1, 0, 0]]);
        assert_eq!(distance_count(&e, FieldElt::ONE, &f7).unwrap(), 2);
        assert_eq!(distance_count(&e, FieldElt::ZERO, &f7).unwrap_err(), Error::ZeroDistance);

        let f3 = f(3);
        let all = PointSet::new(3, f3.vectors(3).unwrap().collect()).unwrap();
        let sphere = sphere_points(&Sphere::new(FieldVector::zero(3), FieldElt::ONE).unwrap(), &f3).unwrap();
        assert_eq!(distance_count(&all, FieldElt::ONE, &f3).unwrap(), 27 * sphere.len() as u64);

        for trial in 0..50 {
            let e = gen_points(&f7, 3, 60, trial_seed(3, trial)).unwrap();
            assert!(distance_bound_checks(&e, &f7).iter().all(|c| c.pass));
            let hist = distance_histogram(&e, &f7);
            assert_eq!(hist.iter().sum::<u64>(), 60 * 60);
        }
    }

    #[test]
    fn generators() {
        let f7 = f(7);
        assert_eq!(gen_points(&f7, 3, 10, 42).unwrap(), gen_points(&f7, 3, 10, 42).unwrap());
        assert_ne!(gen_points(&f7, 3, 10, 42).unwrap(), gen_points(&f7, 3, 10, 43).unwrap());
        let s = gen_spheres(&f7, 3, 200, RadiusClass::Square, false, 5).unwrap();
        assert!(s.spheres().iter().all(|s| [1, 2, 4].contains(&s.radius.index())));
        let full = gen_points(&f7, 2, 49, 0).unwrap();
        assert_eq!(full.points(), f7.vectors(2).unwrap().collect::<Vec<_>>().as_slice());
        assert!(matches!(gen_points(&f7, 2, 50, 0), Err(Error::PopulationTooSmall { requested: 50, available: 49 })));
        assert!(matches!(
            gen_spheres(&f7, 2, 49 * 3 + 1, RadiusClass::NonSquare, false, 0),
            Err(Error::PopulationTooSmall { .. })
        ));
    }

    #[test]
    fn cone_cardinality_matches_regular_degree() {
        let f5 = f(5);
        let full: Vec<_> = f5.vectors(3).unwrap().collect();
        let deg = variety_card(&VarietySpec::new(Form::Norm, 3).unwrap(), &f5).unwrap();
        assert_eq!(edge_count(&full, Form::Norm, &f5).unwrap(), 125 * deg);
        assert_eq!(edge_count_pairwise(&full, Form::Norm, &f5).unwrap(), 125 * deg);
    }
}
