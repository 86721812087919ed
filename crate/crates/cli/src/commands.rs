//! One function per subcommand: validate, compute, and collect results.

use clap::Args;
use ffincidence::cyclo::{complete_square_failures, verify_gauss, PHASE_TOLERANCE};
use ffincidence::incidence::{
    distance_bound_checks, gen_instance, gen_points, incidence_report, mixing_applies, mixing_bound_check, trial_seed,
};
use ffincidence::report::Assertion;
use ffincidence::spectrum::{spectrum_verify_with, SpectrumReport, SweepOptions, DEFAULT_SWEEP_BUDGET};
use ffincidence::sumproduct::sp_experiment;
use ffincidence::{Error, FieldCtx, Form, RadiusClass};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::to_value;
use crate::{CliError, Hooks};

/// Default cap on the `q^3` cost of the completing-square check.
pub const DEFAULT_GAUSS_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Args, Serialize)]
pub struct FieldArgs {
    /// Characteristic (odd prime)
    #[arg(long)]
    pub p: u32,
    /// Extension degree
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
}

impl FieldArgs {
    pub fn ctx(&self) -> Result<FieldCtx, CliError> {
        Ok(FieldCtx::new(self.p, self.ell)?)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GaussArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    /// Skip the completing-square check when q^3 exceeds this
    #[arg(long, default_value_t = DEFAULT_GAUSS_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub k: usize,
    /// cone or norm
    #[arg(long, value_parser = parse_form)]
    pub form: Form,
    /// Maximum q^k * |E| character evaluations
    #[arg(long, default_value_t = DEFAULT_SWEEP_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MixingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_form)]
    pub form: Form,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// |W|: a number, `sqrt` for q^(k/2), or `full`
    #[arg(long)]
    pub size: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IncidenceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, value_parser = parse_radius_class)]
    pub radius_class: RadiusClass,
    #[arg(long)]
    pub np: u64,
    #[arg(long)]
    pub ns: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Admit radius 0 in the square class
    #[arg(long)]
    pub allow_zero_radius: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistanceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long)]
    pub size: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SumprodArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long = "sizeA", alias = "size-a")]
    #[serde(rename = "sizeA")]
    pub size_a: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Permit q = 1 mod 4
    #[arg(long)]
    pub allow_q1mod4: bool,
}

fn parse_form(s: &str) -> Result<Form, String> {
    s.parse()
}

fn parse_radius_class(s: &str) -> Result<RadiusClass, String> {
    s.parse()
}

/// What a command produced, before the envelope is filled in.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Vec<Value>,
    pub mismatches: Vec<Value>,
    pub assertions: Vec<Assertion>,
    pub seed: Option<u64>,
}

impl Outcome {
    fn failing_assertions_as_mismatches(mut self) -> Self {
        self.mismatches.extend(self.assertions.iter().filter(|a| !a.pass).map(to_value));
        self
    }
}

pub fn gauss(args: &GaussArgs) -> Result<Outcome, CliError> {
    let ctx = args.field.ctx()?;
    let q = ctx.q() as u64;
    let r = verify_gauss(&ctx)?;
    let complete = if q.pow(3) <= args.budget { Some(complete_square_failures(&ctx)?) } else { None };

    let mut mismatches: Vec<Value> =
        r.ga_failures.iter().map(|a| json!({"kind": "gauss_sum", "a": a.index()})).collect();
    let mut assertions = vec![
        Assertion::eq("g_a_eq_eta_a_g_1.failures", r.ga_failures.len(), 0),
        Assertion::new("g_1_times_conj_eq_q", &r.norm, q, r.norm_ok),
        Assertion::new("g_1_squared_eq_eta_minus_one_q", &r.square, q as i64 * ctx.eta_minus_one() as i64, r.square_ok),
        Assertion::new("closed_form_squared_eq_g_1_squared", r.explicit.pow(2), &r.square, r.explicit_square_ok),
        Assertion::new("closed_form_fourth_eq_g_1_fourth", r.explicit.pow(4), r.square.pow(2), r.fourth_power_ok),
        Assertion::new("closed_form_relative_error", r.relative_phase_error, PHASE_TOLERANCE, r.phase_ok),
    ];
    if let Some((_, failures)) = &complete {
        mismatches.extend(failures.iter().map(|(a, b)| json!({"kind": "complete_square", "a": a.index(), "b": b.index()})));
        assertions.push(Assertion::eq("complete_square.failures", failures.len(), 0));
    }
    let result = json!({
        "p": r.p,
        "ell": r.ell,
        "q": r.q,
        "g_1": r.g1.to_string(),
        "closed_form": r.explicit.to_string(),
        "g_1_times_conj": r.norm.to_string(),
        "g_1_squared": r.square.to_string(),
        "g_a_checked": q - 1,
        "g_a_failures": r.ga_failures.len(),
        "relative_phase_error": r.relative_phase_error,
        "complete_square": match &complete {
            Some((pairs, failures)) => json!({"pairs": pairs, "failures": failures.len()}),
            None => json!("skipped"),
        },
    });
    Ok(Outcome { results: vec![to_value(&result)], mismatches, assertions, seed: None })
}

pub fn spectrum_assertions(ctx: &FieldCtx, r: &SpectrumReport) -> Vec<Assertion> {
    let qk = BigInt::from(ctx.q()).pow(r.k as u32);
    let e = BigInt::from(r.connection_size);
    let mut out = vec![
        Assertion::eq("closed_form_eq_oracle.mismatches", r.mismatches.len(), 0),
        Assertion::eq("non_integer_eigenvalues", r.non_integer, 0),
        Assertion::new("sum_lambda_eq_q^k", &r.trace_sum, &qk, r.trace_ok),
        Assertion::new("sum_lambda_squared_eq_q^k_times_|E|", &r.square_sum, &qk * &e, r.square_ok),
        Assertion::new("lambda_0_eq_|E|", &r.lambda_zero, &e, r.lambda_zero_ok),
    ];
    if let Some(c) = &r.unique_positive {
        out.push(Assertion::new(
            "positive_nontrivial_eigenvalues_eq_q^((k-2)/2)",
            format!("{} frequencies", c.positive_count),
            &c.expected,
            c.ok,
        ));
    }
    out
}

pub fn spectrum(args: &SpectrumArgs, hooks: Hooks) -> Result<Outcome, CliError> {
    let ctx = args.field.ctx()?;
    let opts = SweepOptions { budget: args.budget, corrupt_formula: hooks.corrupt_eigenvalue };
    let r = spectrum_verify_with(args.form, &ctx, args.k, &opts)?;
    Ok(Outcome {
        results: vec![to_value(&r)],
        mismatches: r.mismatches.iter().map(to_value).collect(),
        assertions: spectrum_assertions(&ctx, &r),
        seed: None,
    })
}

/// `|W|` from `n`, `sqrt` (`q^{k/2}`) or `full` (`q^k`).
pub fn resolve_size(ctx: &FieldCtx, k: usize, size: &str) -> Result<u64, CliError> {
    let space = ctx.vector_count(k)?;
    let n = match size {
        "full" => space,
        "sqrt" => (ctx.q() as u64).pow((k / 2) as u32),
        other => other.parse().map_err(|_| CliError::Usage(format!("invalid --size '{other}'")))?,
    };
    if n > space {
        return Err(Error::PopulationTooSmall { requested: n, available: space }.into());
    }
    Ok(n)
}

pub fn mixing(args: &MixingArgs) -> Result<Outcome, CliError> {
    let ctx = args.field.ctx()?;
    if !mixing_applies(args.form, args.k, &ctx) {
        return Err(Error::UnsupportedCase(format!(
            "the {} graph over GF({}) in dimension {} has more than one positive nontrivial eigenvalue",
            args.form,
            ctx.q(),
            args.k
        ))
        .into());
    }
    let n = resolve_size(&ctx, args.k, &args.size)?;
    let mut out = Outcome { seed: Some(args.seed), ..Default::default() };
    for t in 0..args.trials {
        let seed = trial_seed(args.seed, t);
        let w = gen_points(&ctx, args.k, n, seed)?;
        let m = mixing_bound_check(w.points(), args.form, &ctx)?;
        out.results.push(to_value(&json!({
            "trial": t,
            "seed": seed,
            "size": m.size,
            "edges": m.edges,
            "bound": m.bound.to_string(),
            "pass": m.pass,
        })));
        out.assertions.push(Assertion::new(format!("trial{t}.mixing_bound"), m.edges, &m.bound, m.pass));
    }
    Ok(out.failing_assertions_as_mismatches())
}

pub fn incidence(args: &IncidenceArgs) -> Result<Outcome, CliError> {
    let ctx = args.field.ctx()?;
    let points = ctx.vector_count(args.d)?;
    if args.np > points {
        return Err(Error::PopulationTooSmall { requested: args.np, available: points }.into());
    }
    let spheres = points * args.radius_class.radii(&ctx, args.allow_zero_radius).len() as u64;
    if args.ns > spheres {
        return Err(Error::PopulationTooSmall { requested: args.ns, available: spheres }.into());
    }
    let mut out = Outcome { seed: Some(args.seed), ..Default::default() };
    for t in 0..args.trials {
        let seed = trial_seed(args.seed, t);
        let (p, s) = gen_instance(&ctx, args.d, args.np, args.ns, args.radius_class, args.allow_zero_radius, seed)?;
        let r = incidence_report(&p, &s, &ctx)?;
        let mut item = serde_json::Map::new();
        item.insert("trial".into(), json!(t));
        item.insert("seed".into(), json!(seed));
        if let Value::Object(fields) = to_value(&r) {
            item.extend(fields.into_iter().filter(|(k, _)| k != "assertions"));
        }
        out.results.push(to_value(&item));
        out.assertions.extend(r.assertions.into_iter().map(|mut a| {
            a.name = format!("trial{t}.{}", a.name);
            a
        }));
    }
    Ok(out.failing_assertions_as_mismatches())
}

pub fn distance(args: &DistanceArgs) -> Result<Outcome, CliError> {
    let ctx = args.field.ctx()?;
    let space = ctx.vector_count(args.d)?;
    if args.size > space {
        return Err(Error::PopulationTooSmall { requested: args.size, available: space }.into());
    }
    let q = ctx.q() as f64;
    let e = args.size as f64;
    let rhs = e * e / q + 2.0 * q.powf((args.d as f64 - 1.0) / 2.0) * e;
    let mut out = Outcome { seed: Some(args.seed), ..Default::default() };
    for t in 0..args.trials {
        let seed = trial_seed(args.seed, t);
        let set = gen_points(&ctx, args.d, args.size, seed)?;
        let checks = distance_bound_checks(&set, &ctx);
        let worst = checks.iter().max_by_key(|c| c.count);
        let failures = checks.iter().filter(|c| !c.pass).count();
        out.results.push(to_value(&json!({
            "trial": t,
            "seed": seed,
            "size": args.size,
            "max_count": worst.map(|c| c.count),
            "max_at": worst.map(|c| c.t.index()),
            "bound": rhs,
            "failures": failures,
        })));
        out.assertions.push(Assertion::new(
            format!("trial{t}.distance_bound"),
            worst.map_or(0, |c| c.count),
            rhs,
            failures == 0,
        ));
    }
    Ok(out.failing_assertions_as_mismatches())
}

pub fn sumprod(args: &SumprodArgs) -> Result<Outcome, CliError> {
    let ctx = args.field.ctx()?;
    let r = sp_experiment(&ctx, args.d, args.size_a, args.trials, args.seed, !args.allow_q1mod4)?;
    Ok(Outcome {
        results: r.results.iter().map(to_value).collect(),
        mismatches: vec![],
        assertions: r.assertions,
        seed: Some(args.seed),
    }
    .failing_assertions_as_mismatches())
}
