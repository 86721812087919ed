//! Spectra of the Cayley graphs on `F_q^k` whose connection set is the cone
//! or the zero-sphere.
//!
//! The eigenvalue attached to the character `x -> chi(m.x)` is
//! `lambda_m = sum_{x in E} chi(-m.x)`, i.e. `q^k` times the normalized Fourier
//! transform of the indicator of `E`. Everything here is kept unnormalized so
//! that each eigenvalue is an exact rational integer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{pow, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{chi, gauss_explicit, CharacterSum, CycInt};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElt, FieldVector};
use crate::geometry::{variety_points, Form, VarietySpec};
use crate::par;

/// Default cap on character evaluations for one sweep (`q^k * |E|`).
pub const DEFAULT_SWEEP_BUDGET: u64 = 1 << 31;

/// Which closed form governs `(form, k, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralCase {
    /// Cone, `k = 0 mod 4`, `q = 3 mod 4`.
    ConeUniquePositive,
    /// Cone, `k = 0 mod 4` with `q = 1 mod 4`, or `k = 2 mod 4`.
    ConeEven,
    ConeOdd,
    /// Zero-sphere, `k = 2 mod 4`, `q = 3 mod 4`.
    NormUniquePositive,
    /// Zero-sphere, `k = 2 mod 4` with `q = 1 mod 4`, or `k = 0 mod 4`.
    NormEven,
    NormOdd,
}

impl SpectralCase {
    pub fn classify(form: Form, q_mod4: u32, k: usize) -> Self {
        let odd = k % 2 == 1;
        match form {
            Form::Cone if odd => Self::ConeOdd,
            Form::Cone if k % 4 == 0 && q_mod4 == 3 => Self::ConeUniquePositive,
            Form::Cone => Self::ConeEven,
            Form::Norm if odd => Self::NormOdd,
            Form::Norm if k % 4 == 2 && q_mod4 == 3 => Self::NormUniquePositive,
            Form::Norm => Self::NormEven,
        }
    }

    /// Whether the only positive nontrivial eigenvalue is `q^{(k-2)/2}`.
    pub fn has_unique_positive(self) -> bool {
        matches!(self, Self::ConeUniquePositive | Self::NormUniquePositive)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::ConeUniquePositive => "cone_unique_positive",
            Self::ConeEven => "cone_even",
            Self::ConeOdd => "cone_odd",
            Self::NormUniquePositive => "norm_unique_positive",
            Self::NormEven => "norm_even",
            Self::NormOdd => "norm_odd",
        }
    }
}

/// How a frequency `m` is classified inside its case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyClass {
    /// `m` on the variety (the origin included).
    OnVariety,
    OffVariety,
    /// Odd `k`: the value of `eta` that enters the closed form.
    Eta(i8),
}

impl FrequencyClass {
    pub fn label(self) -> String {
        match self {
            Self::OnVariety => "on_variety".into(),
            Self::OffVariety => "off_variety".into(),
            Self::Eta(e) => format!("eta={e:+}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenvalueCase {
    pub form: Form,
    pub k_mod4: u32,
    pub q_mod4: u32,
    pub case: SpectralCase,
    pub class: FrequencyClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenvalue {
    pub case: EigenvalueCase,
    pub value: BigInt,
}

fn qpow(q: u32, e: usize) -> BigInt {
    pow(BigInt::from(q), e)
}

/// Closed-form eigenvalue `lambda_m` of the cone / zero-sphere Cayley graph.
pub fn eigenvalue_formula(form: Form, ctx: &FieldCtx, k: usize, m: &FieldVector) -> Result<Eigenvalue> {
    let spec = VarietySpec::new(form, k)?;
    let value_at_m = spec.eval(ctx, m)?;
    let q = ctx.q();
    let case = SpectralCase::classify(form, ctx.q_mod4(), k);
    let delta = if m.is_zero() { qpow(q, k - 1) } else { BigInt::zero() };

    let (class, value) = match case {
        SpectralCase::ConeUniquePositive | SpectralCase::NormUniquePositive => {
            if value_at_m.is_zero() {
                (FrequencyClass::OnVariety, delta - qpow(q, k / 2) + qpow(q, (k - 2) / 2))
            } else {
                (FrequencyClass::OffVariety, qpow(q, (k - 2) / 2))
            }
        }
        SpectralCase::ConeEven | SpectralCase::NormEven => {
            if value_at_m.is_zero() {
                (FrequencyClass::OnVariety, delta + qpow(q, k / 2) - qpow(q, (k - 2) / 2))
            } else {
                (FrequencyClass::OffVariety, -qpow(q, (k - 2) / 2))
            }
        }
        SpectralCase::ConeOdd | SpectralCase::NormOdd => {
            // lambda_m = q^{k-1} delta_0(m) + q^{-1} eta(.) G_1^{k+1}; the sign of
            // G_1^{k+1} comes from the closed form of G_1, not from hand folding.
            let g_power = gauss_explicit(ctx.p(), ctx.ell())?
                .pow(k as u32 + 1)
                .to_integer()
                .ok_or_else(|| Error::UnsupportedCase(format!("G_1^{} is not rational", k + 1)))?;
            let eta = match form {
                Form::Cone => ctx.eta(value_at_m),
                Form::Norm => ctx.eta(ctx.neg(value_at_m)),
            };
            let (quot, rem) = g_power.div_rem(&BigInt::from(q));
            if !rem.is_zero() {
                return Err(Error::UnsupportedCase(format!("G_1^{} not divisible by q", k + 1)));
            }
            (FrequencyClass::Eta(eta), delta + quot * BigInt::from(eta))
        }
    };
    let case = EigenvalueCase { form, k_mod4: (k % 4) as u32, q_mod4: ctx.q_mod4(), case, class };
    Ok(Eigenvalue { case, value })
}

/// `sum_{x in set} chi(-m.x)`: `q^k` times the Fourier transform of the indicator at `m`.
pub fn indicator_fourier(set: &[FieldVector], m: &FieldVector, ctx: &FieldCtx) -> Result<CycInt> {
    let p = ctx.p();
    let mut acc = CharacterSum::new(p);
    for x in set {
        if x.dim() != m.dim() {
            return Err(Error::DimensionMismatch { expected: m.dim(), found: x.dim() });
        }
        let e = ctx.trace(ctx.dot(m.coords(), x.coords()));
        acc.add_exponent((p - e) % p, 1);
    }
    Ok(acc.value())
}

/// A variety stored as flat coordinates for tight loops.
#[derive(Debug, Clone)]
pub struct ConnectionSet {
    spec: VarietySpec,
    flat: Vec<FieldElt>,
}

impl ConnectionSet {
    pub fn new(spec: VarietySpec, ctx: &FieldCtx) -> Result<Self> {
        let flat = variety_points(&spec, ctx)?.into_iter().flat_map(FieldVector::into_coords).collect();
        Ok(Self { spec, flat })
    }

    pub fn spec(&self) -> &VarietySpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.spec.k
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &[FieldElt]> {
        self.flat.chunks_exact(self.spec.k)
    }

    /// Accumulates `sum_{x in E} chi(-m.x)` into `acc`.
    pub fn fourier_into(&self, ctx: &FieldCtx, m: &[FieldElt], acc: &mut CharacterSum) {
        let p = ctx.p();
        acc.clear();
        for x in self.points() {
            let e = ctx.trace(ctx.dot(m, x));
            acc.add_exponent((p - e) % p, 1);
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub budget: u64,
    /// Adds one to the closed-form value at the origin. Only for exercising failure paths.
    #[doc(hidden)]
    pub corrupt_formula: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_SWEEP_BUDGET, corrupt_formula: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumMismatch {
    pub m: Vec<u32>,
    #[serde(serialize_with = "crate::report::serialize_exact")]
    pub formula: BigInt,
    pub oracle: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquePositiveCheck {
    #[serde(serialize_with = "crate::report::serialize_exact")]
    pub expected: BigInt,
    /// Number of nonzero frequencies with a positive eigenvalue.
    pub positive_count: u64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub form: Form,
    pub p: u32,
    pub ell: u32,
    pub q: u32,
    pub k: usize,
    pub case: SpectralCase,
    pub connection_size: u64,
    pub frequencies: u64,
    pub branch_counts: BTreeMap<String, u64>,
    /// Distinct eigenvalues with multiplicities, ascending.
    #[serde(serialize_with = "crate::report::serialize_spectrum")]
    pub spectrum: Vec<(BigInt, u64)>,
    pub mismatches: Vec<SpectrumMismatch>,
    pub non_integer: u64,
    #[serde(serialize_with = "crate::report::serialize_exact")]
    pub trace_sum: BigInt,
    pub trace_ok: bool,
    #[serde(serialize_with = "crate::report::serialize_exact")]
    pub square_sum: BigInt,
    pub square_ok: bool,
    #[serde(serialize_with = "crate::report::serialize_exact")]
    pub lambda_zero: BigInt,
    pub lambda_zero_ok: bool,
    pub unique_positive: Option<UniquePositiveCheck>,
}

impl SpectrumReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
            && self.non_integer == 0
            && self.trace_ok
            && self.square_ok
            && self.lambda_zero_ok
            && self.unique_positive.as_ref().is_none_or(|c| c.ok)
    }
}

#[derive(Default)]
struct BlockTally {
    branch_counts: BTreeMap<String, u64>,
    spectrum: BTreeMap<i64, u64>,
    mismatches: Vec<SpectrumMismatch>,
    non_integer: u64,
    trace_sum: i128,
    square_sum: i128,
    positive_count: u64,
    positive_bad: u64,
}

/// Compares the closed form against the brute-force character sum at every `m in F_q^k`.
pub fn spectrum_verify(form: Form, ctx: &FieldCtx, k: usize) -> Result<SpectrumReport> {
    spectrum_verify_with(form, ctx, k, &SweepOptions::default())
}

pub fn spectrum_verify_with(form: Form, ctx: &FieldCtx, k: usize, opts: &SweepOptions) -> Result<SpectrumReport> {
    let spec = VarietySpec::new(form, k)?;
    let frequencies = ctx.vector_count(k)?;
    let conn = ConnectionSet::new(spec, ctx)?;
    let cost = frequencies as u128 * conn.len() as u128;
    if cost > opts.budget as u128 {
        return Err(Error::BudgetExceeded { requested: cost, budget: opts.budget });
    }
    let case = SpectralCase::classify(form, ctx.q_mod4(), k);
    let q = ctx.q();
    let unique_positive_value = pow(q as i64, (k - 2) / 2);

    let blocks = par::map_blocks(frequencies, 256, |range| -> Result<BlockTally> {
        let mut tally = BlockTally::default();
        let mut acc = CharacterSum::new(ctx.p());
        for idx in range {
            let m = ctx.vector_from_index(k, idx);
            let eig = eigenvalue_formula(form, ctx, k, &m)?;
            let mut formula = eig.value;
            if opts.corrupt_formula && idx == 0 {
                formula += 1;
            }
            *tally.branch_counts.entry(eig.case.class.label()).or_default() += 1;

            conn.fourier_into(ctx, m.coords(), &mut acc);
            let Some(oracle) = acc.as_i64() else {
                tally.non_integer += 1;
                tally.mismatches.push(SpectrumMismatch { m: m.indices(), formula, oracle: acc.value().to_string() });
                continue;
            };
            if formula != BigInt::from(oracle) {
                tally.mismatches.push(SpectrumMismatch { m: m.indices(), formula, oracle: oracle.to_string() });
            }
            *tally.spectrum.entry(oracle).or_default() += 1;
            tally.trace_sum += oracle as i128;
            tally.square_sum += (oracle as i128) * (oracle as i128);
            if idx != 0 && oracle > 0 {
                tally.positive_count += 1;
                if oracle != unique_positive_value {
                    tally.positive_bad += 1;
                }
            }
        }
        Ok(tally)
    });

    let mut total = BlockTally::default();
    for block in blocks {
        let b = block?;
        for (label, n) in b.branch_counts {
            *total.branch_counts.entry(label).or_default() += n;
        }
        for (v, n) in b.spectrum {
            *total.spectrum.entry(v).or_default() += n;
        }
        total.mismatches.extend(b.mismatches);
        total.non_integer += b.non_integer;
        total.trace_sum += b.trace_sum;
        total.square_sum += b.square_sum;
        total.positive_count += b.positive_count;
        total.positive_bad += b.positive_bad;
    }
    total.mismatches.sort_by(|a, b| a.m.cmp(&b.m));

    let qk = frequencies as i128;
    let size = conn.len() as u64;
    let lambda_zero = eigenvalue_formula(form, ctx, k, &FieldVector::zero(k))?.value;
    let unique_positive = case.has_unique_positive().then(|| UniquePositiveCheck {
        expected: BigInt::from(unique_positive_value),
        positive_count: total.positive_count,
        ok: total.positive_bad == 0 && total.positive_count > 0,
    });

    Ok(SpectrumReport {
        form,
        p: ctx.p(),
        ell: ctx.ell(),
        q,
        k,
        case,
        connection_size: size,
        frequencies,
        branch_counts: total.branch_counts,
        spectrum: total.spectrum.into_iter().map(|(v, n)| (BigInt::from(v), n)).collect(),
        mismatches: total.mismatches,
        non_integer: total.non_integer,
        trace_sum: BigInt::from(total.trace_sum),
        trace_ok: total.trace_sum == qk,
        square_sum: BigInt::from(total.square_sum),
        square_ok: total.square_sum == qk * size as i128,
        lambda_zero_ok: lambda_zero == BigInt::from(size),
        lambda_zero,
        unique_positive,
    })
}

/// Plancherel in unnormalized form: `sum_m |F(m)|^2 = q^k sum_x |f(x)|^2`,
/// where `F(m) = sum_x chi(-m.x) f(x)`. `f` is indexed in lexicographic vector order.
pub fn plancherel_check(f: &[CycInt], ctx: &FieldCtx, k: usize) -> Result<bool> {
    let n = ctx.vector_count(k)?;
    if f.len() as u64 != n {
        return Err(Error::DimensionMismatch { expected: n as usize, found: f.len() });
    }
    let p = ctx.p();
    if let Some(bad) = f.iter().find(|v| v.root_order() != p) {
        return Err(Error::RootOrderMismatch { left: p, right: bad.root_order() });
    }
    let support: Vec<(FieldVector, &CycInt)> =
        f.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (ctx.vector_from_index(k, i as u64), v)).collect();

    let mut lhs = CycInt::zero(p);
    for idx in 0..n {
        let m = ctx.vector_from_index(k, idx);
        let mut transform = CycInt::zero(p);
        for (x, v) in &support {
            let e = ctx.trace(ctx.dot(m.coords(), x.coords()));
            transform = &transform + &v.mul_zeta_power(-(e as i64));
        }
        lhs = &lhs + &transform.norm_squared();
    }
    let mut rhs = CycInt::zero(p);
    for (_, v) in &support {
        rhs = &rhs + &v.norm_squared();
    }
    Ok(lhs == rhs.scale(&BigInt::from(n)))
}

/// Checks `(A v_m)(x) = lambda_m v_m(x)` for `v_m(x) = chi(m.x)` at each sampled vertex,
/// with `lambda_m` from the closed form.
pub fn eigenvector_check(form: Form, ctx: &FieldCtx, k: usize, m: &FieldVector, samples: &[FieldVector]) -> Result<bool> {
    let lambda = eigenvalue_formula(form, ctx, k, m)?.value;
    let conn = ConnectionSet::new(VarietySpec::new(form, k)?, ctx)?;
    let p = ctx.p();
    for x in samples {
        if x.dim() != k {
            return Err(Error::DimensionMismatch { expected: k, found: x.dim() });
        }
        let mut row = CharacterSum::new(p);
        for z in conn.points() {
            let diff: Vec<FieldElt> = x.coords().iter().zip(z).map(|(&a, &b)| ctx.sub(a, b)).collect();
            row.add_exponent(ctx.trace(ctx.dot(m.coords(), &diff)), 1);
        }
        let rhs = chi(ctx, ctx.dot(m.coords(), x.coords())).scale(&lambda);
        if row.value() != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn fourier_examples_cone4_gf3() {
        let ctx = f(3);
        let c4 = variety_points(&VarietySpec::new(Form::Cone, 4).unwrap(), &ctx).unwrap();
        let at = |v: &[i64]| indicator_fourier(&c4, &ctx.vector(v), &ctx).unwrap().as_integer().unwrap();
        assert_eq!(at(&[0, 0, 0, 0]), BigInt::from(21));
        assert_eq!(at(&[1, 1, 0, 0]), BigInt::from(-6));
        assert_eq!(at(&[1, 0, 0, 0]), BigInt::from(3));
        assert!(matches!(
            indicator_fourier(&c4, &ctx.vector(&[1, 0]), &ctx),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn formula_examples() {
        let ctx = f(3);
        let val = |form, k, v: &[i64]| eigenvalue_formula(form, &ctx, k, &ctx.vector(v)).unwrap().value;
        // 81 * (1/3 - 1/9 + 1/27)
        assert_eq!(val(Form::Cone, 4, &[0, 0, 0, 0]), BigInt::from(21));
        assert_eq!(val(Form::Cone, 4, &[1, 1, 0, 0]), BigInt::from(-6));
        assert_eq!(val(Form::Cone, 4, &[1, 0, 0, 0]), BigInt::from(3));
        // 729 * 3^-4
        assert_eq!(val(Form::Norm, 6, &[1, 0, 0, 0, 0, 0]), BigInt::from(9));
        assert_eq!(val(Form::Norm, 6, &[1, 1, 1, 0, 0, 0]), BigInt::from(-18));
        assert_eq!(val(Form::Norm, 6, &[0; 6]), BigInt::from(225));
    }

    #[test]
    fn case_partition_is_total() {
        for form in [Form::Cone, Form::Norm] {
            for k in 2..12 {
                for qm in [1, 3] {
                    let c = SpectralCase::classify(form, qm, k);
                    assert_eq!(c.has_unique_positive(), match form {
                        Form::Cone => k % 4 == 0 && qm == 3,
                        Form::Norm => k % 4 == 2 && qm == 3,
                    });
                }
            }
        }
    }

    #[test]
    fn sweep_examples() {
        let r = spectrum_verify(Form::Cone, &f(3), 4).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.branch_counts["on_variety"], 21);
        assert_eq!(r.branch_counts["off_variety"], 60);
        assert_eq!(r.spectrum, vec![(BigInt::from(-6), 20), (BigInt::from(3), 60), (BigInt::from(21), 1)]);

        let r = spectrum_verify(Form::Cone, &f(5), 4).unwrap();
        assert_eq!(r.case, SpectralCase::ConeEven);
        assert!(r.passed());

        let r = spectrum_verify(Form::Norm, &f(3), 3).unwrap();
        assert_eq!(r.case, SpectralCase::NormOdd);
        assert!(r.passed());
        assert_eq!(r.branch_counts.values().sum::<u64>(), 27);
    }

    #[test]
    fn every_case_on_small_fields() {
        for (p, ell) in [(3, 1), (5, 1), (7, 1), (3, 2), (13, 1)] {
            let ctx = FieldCtx::new(p, ell).unwrap();
            for form in [Form::Cone, Form::Norm] {
                for k in 2..=4 {
                    if ctx.q().pow(k as u32) > 3000 {
                        continue;
                    }
                    let r = spectrum_verify(form, &ctx, k).unwrap();
                    assert!(r.passed(), "{form} GF({p}^{ell}) k={k}: {:?}", r.mismatches);
                }
            }
        }
    }

    #[test]
    fn corrupted_formula_is_caught() {
        let opts = SweepOptions { corrupt_formula: true, ..Default::default() };
        let r = spectrum_verify_with(Form::Cone, &f(3), 4, &opts).unwrap();
        assert_eq!(r.mismatches.len(), 1);
        assert_eq!(r.mismatches[0].m, vec![0, 0, 0, 0]);
        assert!(!r.passed());
    }

    #[test]
    fn sweep_budget_guard() {
        let opts = SweepOptions { budget: 100, ..Default::default() };
        assert!(matches!(spectrum_verify_with(Form::Cone, &f(3), 4, &opts), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn plancherel_examples() {
        let ctx = f(3);
        let k = 4;
        let c4 = variety_points(&VarietySpec::new(Form::Cone, k).unwrap(), &ctx).unwrap();
        let indicator: Vec<CycInt> = ctx
            .vectors(k)
            .unwrap()
            .map(|x| CycInt::from_integer(3, c4.binary_search(&x).is_ok() as i64))
            .collect();
        assert!(plancherel_check(&indicator, &ctx, k).unwrap());
        // sum of squared eigenvalues: 81 * 21
        let r = spectrum_verify(Form::Cone, &ctx, k).unwrap();
        assert_eq!(r.square_sum, BigInt::from(1701));

        let mut delta = vec![CycInt::zero(3); 81];
        delta[17] = CycInt::one(3);
        assert!(plancherel_check(&delta, &ctx, k).unwrap());
        assert!(plancherel_check(&vec![CycInt::zero(3); 81], &ctx, k).unwrap());

        // non-real values
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f2: Vec<CycInt> = (0..9).map(|_| CycInt::zeta_power(3, rng.random_range(0..3)).scale(&BigInt::from(rng.random_range(-3..4)))).collect();
        assert!(plancherel_check(&f2, &ctx, 2).unwrap());
        assert!(plancherel_check(&f2[..8], &ctx, 2).is_err());
    }

    #[test]
    fn eigenvector_examples() {
        let ctx = f(3);
        assert!(eigenvector_check(Form::Cone, &ctx, 4, &ctx.vector(&[0, 0, 0, 0]), &[ctx.vector(&[0, 0, 0, 0])]).unwrap());
        assert!(eigenvector_check(Form::Cone, &ctx, 4, &ctx.vector(&[1, 0, 0, 0]), &[ctx.vector(&[1, 2, 0, 1])]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rand_vec = |rng: &mut ChaCha8Rng| ctx.vector(&(0..6).map(|_| rng.random_range(0..3)).collect::<Vec<_>>());
        let m = rand_vec(&mut rng);
        let samples: Vec<_> = (0..10).map(|_| rand_vec(&mut rng)).collect();
        assert!(eigenvector_check(Form::Norm, &ctx, 6, &m, &samples).unwrap());
    }
}
