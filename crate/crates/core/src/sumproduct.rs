//! Sumsets, square sums and additive energy of subsets of `F_q`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElt};
use crate::incidence::trial_seed;
use crate::par;
use crate::report::Assertion;

/// A subset of `F_q`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ScalarSet(Vec<FieldElt>);

impl ScalarSet {
    pub fn new(mut elements: Vec<FieldElt>) -> Result<Self> {
        elements.sort();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement);
        }
        Ok(Self(elements))
    }

    pub fn from_ints(ctx: &FieldCtx, values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| ctx.from_int(v)).collect())
    }

    fn from_mask(mask: &[bool]) -> Self {
        Self(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| FieldElt(i as u32)).collect())
    }

    pub fn elements(&self) -> &[FieldElt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: FieldElt) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn indices(&self) -> Vec<u32> {
        self.0.iter().map(|x| x.index()).collect()
    }
}

/// `A + B`.
pub fn sumset(a: &ScalarSet, b: &ScalarSet, ctx: &FieldCtx) -> ScalarSet {
    let mut mask = vec![false; ctx.q() as usize];
    for &x in a.elements() {
        for &y in b.elements() {
            mask[ctx.add(x, y).index() as usize] = true;
        }
    }
    ScalarSet::from_mask(&mask)
}

/// `A^2 = {a^2 : a in A}`.
pub fn square_set(a: &ScalarSet, ctx: &FieldCtx) -> ScalarSet {
    let mut mask = vec![false; ctx.q() as usize];
    for &x in a.elements() {
        mask[ctx.square(x).index() as usize] = true;
    }
    ScalarSet::from_mask(&mask)
}

/// `dA^2 = {a_1^2 + ... + a_d^2}`.
pub fn d_a_squared(a: &ScalarSet, d: usize, ctx: &FieldCtx) -> Result<ScalarSet> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let squares = square_set(a, ctx);
    let mut acc = squares.clone();
    for _ in 1..d {
        acc = sumset(&acc, &squares, ctx);
    }
    Ok(acc)
}

/// Multiplicities of `x_1^2 + ... + x_n^2` over `A^n`, indexed by field element.
pub fn square_sum_histogram(a: &ScalarSet, n: usize, ctx: &FieldCtx) -> Result<Vec<u64>> {
    let q = ctx.q() as usize;
    (a.len() as u64).checked_pow(n as u32).ok_or(Error::BudgetExceeded {
        requested: (a.len() as u128).saturating_pow(n as u32),
        budget: u64::MAX,
    })?;
    let mut step = vec![0u64; q];
    for &x in a.elements() {
        step[ctx.square(x).index() as usize] += 1;
    }
    let support: Vec<(FieldElt, u64)> =
        step.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (FieldElt(i as u32), c)).collect();
    let mut hist = vec![0u64; q];
    hist[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u64; q];
        for (v, &c) in hist.iter().enumerate().filter(|(_, &c)| c > 0) {
            for &(s, m) in &support {
                next[ctx.add(FieldElt(v as u32), s).index() as usize] += c * m;
            }
        }
        hist = next;
    }
    Ok(hist)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TupleClasses {
    pub square: u64,
    pub nonsquare: u64,
    pub zero: u64,
}

impl TupleClasses {
    pub fn total(&self) -> u64 {
        self.square + self.nonsquare + self.zero
    }
}

/// Classifies every tuple of `A^d` by `eta(x_1^2 + ... + x_d^2)`.
pub fn square_sum_tuples(a: &ScalarSet, d: usize, ctx: &FieldCtx) -> Result<TupleClasses> {
    let hist = square_sum_histogram(a, d, ctx)?;
    let mut out = TupleClasses { square: 0, nonsquare: 0, zero: 0 };
    for (v, &c) in hist.iter().enumerate() {
        match ctx.eta(FieldElt(v as u32)) {
            1 => out.square += c,
            -1 => out.nonsquare += c,
            _ => out.zero += c,
        }
    }
    Ok(out)
}

/// `E^+((d-1)A^2, (d-1)A^2) = sum_b m(b)^2` over the square-sum multiset of `A^{d-1}`.
pub fn energy_plus(a: &ScalarSet, d: usize, ctx: &FieldCtx) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let hist = square_sum_histogram(a, d - 1, ctx)?;
    hist.iter().try_fold(0u64, |acc, &m| {
        m.checked_mul(m).and_then(|m2| acc.checked_add(m2)).ok_or(Error::BudgetExceeded {
            requested: (a.len() as u128).saturating_pow(2 * (d as u32 - 1)),
            budget: u64::MAX,
        })
    })
}

fn enumeration_guard(a: &ScalarSet, n: usize, ctx: &FieldCtx) -> Result<()> {
    let total = (a.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let budget = ctx.config().enumeration_budget;
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { requested: total, budget });
    }
    Ok(())
}

/// Calls `f` with `x_1^2 + ... + x_n^2` for every tuple of `A^n`.
fn for_each_square_sum(a: &ScalarSet, n: usize, ctx: &FieldCtx, mut f: impl FnMut(FieldElt)) {
    let squares: Vec<FieldElt> = a.elements().iter().map(|&x| ctx.square(x)).collect();
    if squares.is_empty() && n > 0 {
        return;
    }
    let mut idx = vec![0usize; n];
    loop {
        f(idx.iter().fold(FieldElt::ZERO, |acc, &i| ctx.add(acc, squares[i])));
        let Some(pos) = idx.iter().rposition(|&i| i + 1 < squares.len()) else { return };
        idx[pos] += 1;
        idx[pos + 1..].iter_mut().for_each(|i| *i = 0);
    }
}

/// [`square_sum_tuples`] by visiting all `|A|^d` tuples.
pub fn square_sum_tuples_direct(a: &ScalarSet, d: usize, ctx: &FieldCtx) -> Result<TupleClasses> {
    enumeration_guard(a, d, ctx)?;
    let mut out = TupleClasses { square: 0, nonsquare: 0, zero: 0 };
    for_each_square_sum(a, d, ctx, |s| match ctx.eta(s) {
        1 => out.square += 1,
        -1 => out.nonsquare += 1,
        _ => out.zero += 1,
    });
    Ok(out)
}

/// [`energy_plus`] by testing all `|A|^{2(d-1)}` pairs of tuples.
pub fn energy_plus_direct(a: &ScalarSet, d: usize, ctx: &FieldCtx) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    enumeration_guard(a, 2 * (d - 1), ctx)?;
    let mut sums = Vec::new();
    for_each_square_sum(a, d - 1, ctx, |s| sums.push(s));
    let mut count = 0;
    for x in &sums {
        count += sums.iter().filter(|&y| y == x).count() as u64;
    }
    Ok(count)
}

/// `size` distinct uniform elements of `F_q`.
pub fn gen_scalar_set(ctx: &FieldCtx, size: usize, seed: u64) -> Result<ScalarSet> {
    let q = ctx.q() as usize;
    if size > q {
        return Err(Error::PopulationTooSmall { requested: size as u64, available: q as u64 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ScalarSet::new(rand::seq::index::sample(&mut rng, q, size).into_iter().map(|i| FieldElt(i as u32)).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct SPTrial {
    pub trial: u64,
    pub seed: u64,
    pub set: Vec<u32>,
    pub sumset: u64,
    pub d_squares: u64,
    pub tuples: TupleClasses,
    pub square_fraction: f64,
    pub energy: u64,
    /// `E^+ / |A|^{2d-3}`.
    pub energy_ratio: f64,
    /// `|A|^d / q^{(d-1)/2}`.
    pub target: f64,
    /// `max(|A+A|, |dA^2|) / target`.
    pub ratio: f64,
    /// `|A|^{(3d-5)/(d-1)} q^{(2-d)/(d-1)}`, for comparison only.
    pub comparison_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SPReport {
    pub p: u32,
    pub ell: u32,
    pub q: u32,
    pub d: usize,
    pub size_a: usize,
    pub trials: u64,
    pub seed: u64,
    pub results: Vec<SPTrial>,
    pub assertions: Vec<Assertion>,
}

impl SPReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }
}

/// Statistics for one set `A`; `trial` and `seed` are recorded as given.
pub fn sp_trial(ctx: &FieldCtx, d: usize, a: &ScalarSet, trial: u64, seed: u64) -> Result<(SPTrial, Vec<Assertion>)> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let n = a.len() as f64;
    let qf = ctx.q() as f64;
    let df = d as f64;
    let sums = sumset(a, a, ctx).len() as u64;
    let squares = d_a_squared(a, d, ctx)?.len() as u64;
    let tuples = square_sum_tuples(a, d, ctx)?;
    let energy = energy_plus(a, d, ctx)?;
    let total = (a.len() as u64).pow(d as u32);
    let target = n.powi(d as i32) / qf.powf((df - 1.0) / 2.0);
    let comparison_bound =
        if d >= 2 { n.powf((3.0 * df - 5.0) / (df - 1.0)) * qf.powf((2.0 - df) / (df - 1.0)) } else { f64::NAN };
    let assertions = vec![
        Assertion::eq(format!("trial{trial}.tuple_classes_total"), tuples.total(), total),
        Assertion::le(format!("trial{trial}.energy_trivial_bound"), energy, (a.len() as u64).pow(2 * (d as u32 - 1))),
    ];
    let stats = SPTrial {
        trial,
        seed,
        set: a.indices(),
        sumset: sums,
        d_squares: squares,
        tuples,
        square_fraction: if total > 0 { tuples.square as f64 / total as f64 } else { 0.0 },
        energy,
        energy_ratio: if n > 0.0 { energy as f64 / n.powi(2 * d as i32 - 3) } else { 0.0 },
        target,
        ratio: if target > 0.0 { sums.max(squares) as f64 / target } else { 0.0 },
        comparison_bound,
    };
    Ok((stats, assertions))
}

/// Runs `trials` independent samples of `|A| = size_a`, trial `i` seeded with `seed + i`.
/// With `require_q3mod4`, fields with `q = 1 mod 4` are rejected.
pub fn sp_experiment(
    ctx: &FieldCtx,
    d: usize,
    size_a: usize,
    trials: u64,
    seed: u64,
    require_q3mod4: bool,
) -> Result<SPReport> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if require_q3mod4 && ctx.q_mod4() != 3 {
        return Err(Error::UnsupportedCase(format!("q = {} is not 3 mod 4", ctx.q())));
    }
    if size_a > ctx.q() as usize {
        return Err(Error::PopulationTooSmall { requested: size_a as u64, available: ctx.q() as u64 });
    }
    let ids: Vec<u64> = (0..trials).collect();
    let runs = par::map_items(&ids, |&t| {
        let s = trial_seed(seed, t);
        gen_scalar_set(ctx, size_a, s).and_then(|a| sp_trial(ctx, d, &a, t, s))
    });
    let mut results = Vec::with_capacity(runs.len());
    let mut assertions = Vec::new();
    for run in runs {
        let (stats, checks) = run?;
        results.push(stats);
        assertions.extend(checks);
    }
    Ok(SPReport {
        p: ctx.p(),
        ell: ctx.ell(),
        q: ctx.q(),
        d,
        size_a,
        trials,
        seed,
        results,
        assertions,
    })
}
