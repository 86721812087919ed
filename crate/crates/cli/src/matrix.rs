//! The `verify-all` campaign: every verification cell, each skipped when its
//! estimated cost exceeds the budget.

use ffincidence::cyclo::{complete_square_failures, verify_gauss};
use ffincidence::field::is_prime;
use ffincidence::incidence::{
    distance_bound_checks, gen_instance, gen_points, incidence_report, mixing_bound_check, trial_seed,
};
use ffincidence::report::Assertion;
use ffincidence::spectrum::{spectrum_verify_with, SweepOptions};
use ffincidence::sumproduct::{
    energy_plus, energy_plus_direct, gen_scalar_set, square_sum_tuples, square_sum_tuples_direct, ScalarSet,
};
use ffincidence::{FieldCtx, Form, RadiusClass};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{resolve_size, Outcome};
use crate::output::to_value;
use crate::{run_captured, CliError, Hooks};

/// Default per-cell cost cap; the zero-sphere sweep in dimension 6 over GF(7) sits above it.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

pub const SUITE_SIZES: [u64; 3] = [10, 50, 200];
pub const MIXING_TRIALS: u64 = 100;
pub const INCIDENCE_TRIALS: u64 = 200;
pub const DISTANCE_TRIALS: u64 = 50;
pub const SEED: u64 = 0;

/// Committed reference reports and the arguments that regenerate them.
pub const GOLDEN: [(&str, &[&str], &str); 2] = [
    (
        "spectrum_3_1_4_cone.json",
        &["spectrum", "--p", "3", "--ell", "1", "--k", "4", "--form", "cone"],
        include_str!("../tests/golden/spectrum_3_1_4_cone.json"),
    ),
    (
        "sumprod_19_3_5_t20_s7.json",
        &["sumprod", "--p", "19", "--ell", "1", "--d", "3", "--sizeA", "5", "--trials", "20", "--seed", "7"],
        include_str!("../tests/golden/sumprod_19_3_5_t20_s7.json"),
    ),
];

/// Drops the `elapsed_ms` line so reports can be compared byte for byte.
pub fn strip_elapsed(report: &str) -> String {
    report.lines().filter(|l| !l.contains("\"elapsed_ms\"")).map(|l| format!("{l}\n")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub criterion: u8,
    pub name: String,
    pub status: Status,
    pub cost: u128,
    pub detail: Value,
}

struct SweepRecord {
    name: String,
    traces_ok: bool,
    unique_positive: Option<bool>,
}

struct Runner {
    budget: u64,
    hooks: Hooks,
    cells: Vec<Cell>,
    sweeps: Vec<SweepRecord>,
}

type CellResult = Result<(bool, Value), CliError>;

impl Runner {
    fn cell(&mut self, criterion: u8, name: impl Into<String>, cost: u128, f: impl FnOnce(&mut Self) -> CellResult) {
        let name = name.into();
        let (status, detail) = if cost > self.budget as u128 {
            (Status::Skipped, json!({"reason": format!("estimated cost {cost} exceeds budget {}", self.budget)}))
        } else {
            match f(self) {
                Ok((true, d)) => (Status::Pass, d),
                Ok((false, d)) => (Status::Fail, d),
                Err(e) => (Status::Fail, json!({"error": e.to_string()})),
            }
        };
        self.cells.push(Cell { criterion, name, status, cost, detail });
    }

    /// Full sweep; `spot` lists the expected `(eigenvalue, multiplicity)` spectrum.
    fn sweep(&mut self, criterion: u8, form: Form, p: u32, ell: u32, k: usize, spot: Option<&[(i64, u64)]>) {
        let q = (p as u128).pow(ell);
        let cost = q.pow(k as u32) * q.pow(k as u32 - 1);
        let name = format!("spectrum {form} GF({q}) k={k}");
        self.cell(criterion, name.clone(), cost, |r| {
            let ctx = FieldCtx::new(p, ell)?;
            let opts = SweepOptions { budget: u64::MAX, corrupt_formula: r.hooks.corrupt_eigenvalue };
            let rep = spectrum_verify_with(form, &ctx, k, &opts)?;
            r.sweeps.push(SweepRecord {
                name,
                traces_ok: rep.trace_ok && rep.square_ok,
                unique_positive: rep.unique_positive.as_ref().map(|c| c.ok),
            });
            let spot_ok = spot.is_none_or(|s| {
                let expected: Vec<(BigInt, u64)> = s.iter().map(|&(v, m)| (BigInt::from(v), m)).collect();
                rep.spectrum == expected
            });
            let detail = json!({
                "case": rep.case,
                "connection_size": rep.connection_size,
                "mismatches": rep.mismatches.len(),
                "spectrum": to_value(&rep)["spectrum"].clone(),
                "spot_values_ok": spot.map(|_| spot_ok),
            });
            Ok((rep.passed() && spot_ok, detail))
        });
    }
}

fn prime_power_fields(primes: &[u32], max_q: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for &p in primes {
        let mut ell = 1;
        while p.pow(ell) <= max_q {
            out.push((p, ell));
            ell += 1;
        }
    }
    out
}

fn gauss_cells(r: &mut Runner) {
    for (p, ell) in prime_power_fields(&[3, 5, 7, 11, 13], 343).into_iter().filter(|&(_, l)| l <= 3) {
        let q = p.pow(ell) as u128;
        r.cell(1, format!("gauss GF({q})"), q * q, |_| {
            let rep = verify_gauss(&FieldCtx::new(p, ell)?)?;
            let detail = json!({
                "g_1": rep.g1.to_string(),
                "closed_form": rep.explicit.to_string(),
                "relative_phase_error": rep.relative_phase_error,
            });
            Ok((rep.passed(), detail))
        });
    }
    let primes: Vec<u32> = (3..=121).filter(|&p| is_prime(p as u64)).collect();
    for (p, ell) in prime_power_fields(&primes, 121) {
        let q = p.pow(ell) as u128;
        r.cell(2, format!("complete square GF({q})"), q * q * q, |_| {
            let (pairs, failures) = complete_square_failures(&FieldCtx::new(p, ell)?)?;
            Ok((failures.is_empty(), json!({"pairs": pairs, "failures": failures.len()})))
        });
    }
}

fn spectrum_cells(r: &mut Runner) {
    r.sweep(3, Form::Cone, 3, 1, 4, Some(&[(-6, 20), (3, 60), (21, 1)]));
    r.sweep(3, Form::Cone, 7, 1, 4, None);
    r.sweep(3, Form::Cone, 11, 1, 4, None);

    r.sweep(4, Form::Cone, 5, 1, 4, None);
    r.sweep(4, Form::Cone, 3, 1, 6, None);
    for (p, k) in [(3, 3), (7, 3), (3, 5)] {
        r.sweep(4, Form::Cone, p, 1, k, None);
    }

    r.sweep(5, Form::Norm, 3, 1, 6, Some(&[(-18, 224), (9, 504), (225, 1)]));
    for (p, k) in [(3, 4), (5, 2), (13, 2), (5, 6), (3, 3), (7, 3), (7, 6)] {
        r.sweep(5, Form::Norm, p, 1, k, None);
    }

    let traces: Vec<&SweepRecord> = r.sweeps.iter().collect();
    let failed: Vec<String> = traces.iter().filter(|s| !s.traces_ok).map(|s| s.name.clone()).collect();
    let swept = traces.len();
    r.cell(6, "trace identities on every sweep", 0, |_| Ok((failed.is_empty(), json!({"sweeps": swept, "failed": failed}))));

    let unique: Vec<(String, bool)> =
        r.sweeps.iter().filter_map(|s| s.unique_positive.map(|ok| (s.name.clone(), ok))).collect();
    let bad: Vec<&String> = unique.iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
    let detail = json!({"sweeps": unique.len(), "failed": bad});
    r.cell(7, "single positive nontrivial eigenvalue", 0, |_| Ok((bad.is_empty(), detail)));
}

fn mixing_cells(r: &mut Runner) {
    for (form, p, k) in [(Form::Cone, 3, 4), (Form::Cone, 7, 4), (Form::Cone, 11, 4), (Form::Norm, 3, 6), (Form::Norm, 7, 6)] {
        for size in ["1", "10", "50", "sqrt", "full"] {
            let q = p as u128;
            let space = q.pow(k as u32);
            let n = match size {
                "full" => space,
                "sqrt" => q.pow(k as u32 / 2),
                s => s.parse::<u128>().unwrap().min(space),
            };
            let per_trial = if n == space { space } else { (n * n).min(n * q.pow(k as u32 - 1)) };
            r.cell(8, format!("mixing {form} GF({p}) k={k} |W|={n}"), per_trial * MIXING_TRIALS as u128, |_| {
                let ctx = FieldCtx::prime(p)?;
                let n = resolve_size(&ctx, k, size).or_else(|e| match e {
                    CliError::Core(ffincidence::Error::PopulationTooSmall { available, .. }) => Ok(available),
                    e => Err(e),
                })?;
                let mut max_edges = 0;
                let mut failures = 0;
                for t in 0..MIXING_TRIALS {
                    let w = gen_points(&ctx, k, n, trial_seed(SEED, t))?;
                    let m = mixing_bound_check(w.points(), form, &ctx)?;
                    max_edges = max_edges.max(m.edges);
                    failures += u64::from(!m.pass);
                }
                Ok((failures == 0, json!({"trials": MIXING_TRIALS, "size": n, "max_edges": max_edges, "failures": failures})))
            });
        }
    }
}

fn incidence_cells(r: &mut Runner) {
    for p in [7u32, 11, 19, 23] {
        for class in [RadiusClass::Square, RadiusClass::NonSquare] {
            let q = p as u128;
            let cost = INCIDENCE_TRIALS as u128 * (200 * 200 + 400 * 400 + 400 * q * q * q) / 3;
            r.cell(9, format!("incidence GF({p}) d=3 {class}"), cost, |_| {
                let ctx = FieldCtx::prime(p)?;
                let mut failures = Vec::new();
                let (mut small_family, mut balanced) = (0f64, 0f64);
                let mut theorem_backed = true;
                for t in 0..INCIDENCE_TRIALS {
                    let np = SUITE_SIZES[(t % 3) as usize];
                    let ns = SUITE_SIZES[((t / 3) % 3) as usize];
                    let (pts, sph) = gen_instance(&ctx, 3, np, ns, class, false, trial_seed(SEED, t))?;
                    let rep = incidence_report(&pts, &sph, &ctx)?;
                    failures.extend(rep.assertions.iter().filter(|a| !a.pass).map(|a| format!("trial{t}.{}", a.name)));
                    small_family = small_family.max(rep.small_family_ratio);
                    balanced = balanced.max(rep.balanced_ratio);
                    theorem_backed &= rep.lift.as_ref().is_some_and(|l| l.theorem_backed);
                }
                let detail = json!({
                    "trials": INCIDENCE_TRIALS,
                    "failures": failures,
                    "max_small_family_ratio": small_family,
                    "max_balanced_ratio": balanced,
                    "theorem_backed": theorem_backed,
                });
                Ok((failures.is_empty(), detail))
            });
        }
    }
}

fn distance_cells(r: &mut Runner) {
    for p in [7u32, 11, 19] {
        r.cell(10, format!("distance GF({p}) d=3"), DISTANCE_TRIALS as u128 * 200 * 200, |_| {
            let ctx = FieldCtx::prime(p)?;
            let mut failures = 0;
            let mut max_count = 0;
            for t in 0..DISTANCE_TRIALS {
                let set = gen_points(&ctx, 3, SUITE_SIZES[(t % 3) as usize], trial_seed(SEED, t))?;
                for c in distance_bound_checks(&set, &ctx) {
                    failures += u64::from(!c.pass);
                    max_count = max_count.max(c.count);
                }
            }
            Ok((failures == 0, json!({"trials": DISTANCE_TRIALS, "failures": failures, "max_count": max_count})))
        });
    }
}

/// All subsets of `{0..q}` with `size` elements, in lexicographic order.
fn subsets(q: u32, size: usize) -> Vec<Vec<u32>> {
    if size == 0 {
        return vec![vec![]];
    }
    if size as u32 > q {
        return vec![];
    }
    let mut out = Vec::new();
    let mut idx: Vec<u32> = (0..size as u32).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..size).rev().find(|&i| idx[i] < q - (size - i) as u32) else { return out };
        idx[pos] += 1;
        for j in pos + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn sumprod_cells(r: &mut Runner) {
    for (p, ell) in (3..=19).filter(|&p| is_prime(p as u64)).flat_map(|p| prime_power_fields(&[p], 19)) {
        let q = p.pow(ell);
        let cost = (1..=4).map(|s| subsets(q, s).len() as u128 * 3 * 4u128.pow(4)).sum();
        r.cell(11, format!("energy and tuple oracles GF({q})"), cost, |_| {
            let ctx = FieldCtx::new(p, ell)?;
            let mut checked = 0;
            let mut failures = Vec::new();
            for size in 1..=4.min(q as usize) {
                for s in subsets(q, size) {
                    let a = ScalarSet::new(s.iter().map(|&i| ctx.elt(i)).collect::<Result<_, _>>()?)?;
                    for d in 1..=3 {
                        checked += 1;
                        if energy_plus(&a, d, &ctx)? != energy_plus_direct(&a, d, &ctx)?
                            || square_sum_tuples(&a, d, &ctx)? != square_sum_tuples_direct(&a, d, &ctx)?
                        {
                            failures.push(json!({"set": s, "d": d}));
                        }
                    }
                }
            }
            Ok((failures.is_empty(), json!({"cases": checked, "failures": failures})))
        });
    }
    r.cell(11, "tuple classes total |A|^d on 100 random sets", 100 * 19u128.pow(3), |_| {
        let ctx = FieldCtx::prime(19)?;
        let mut failures = 0;
        for t in 0..100u64 {
            let size = 1 + (t % 19) as usize;
            let a = gen_scalar_set(&ctx, size, trial_seed(SEED, t))?;
            failures += u64::from(square_sum_tuples(&a, 3, &ctx)?.total() != (size as u64).pow(3));
        }
        Ok((failures == 0, json!({"sets": 100, "failures": failures})))
    });
    let (file, argv, golden) = GOLDEN[1];
    r.cell(11, format!("golden {file}"), 20 * 5u128.pow(3), |_| {
        let (code, text) = run_captured(std::iter::once("ffincidence").chain(argv.iter().copied()), Hooks::default())?;
        Ok((code == 0 && strip_elapsed(&text) == strip_elapsed(golden), json!({"exit_code": code})))
    });
}

fn determinism_cells(r: &mut Runner) {
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    for (file, argv, golden) in GOLDEN {
        r.cell(12, format!("golden {file} on 1 and {workers} workers"), 1 << 16, |_| {
            let mut outputs = Vec::new();
            for threads in [1, workers] {
                let n = threads.to_string();
                let args = ["ffincidence", "--threads", n.as_str()].into_iter().chain(argv.iter().copied());
                outputs.push(run_captured(args, Hooks::default())?);
            }
            let same = outputs.iter().all(|(c, t)| *c == 0 && strip_elapsed(t) == strip_elapsed(golden));
            Ok((same, json!({"workers": [1, workers], "exit_codes": outputs.iter().map(|o| o.0).collect::<Vec<_>>()})))
        });
    }
}

pub fn verify_all(budget: u64, hooks: Hooks) -> Result<Outcome, CliError> {
    let mut r = Runner { budget, hooks, cells: Vec::new(), sweeps: Vec::new() };
    gauss_cells(&mut r);
    spectrum_cells(&mut r);
    mixing_cells(&mut r);
    incidence_cells(&mut r);
    distance_cells(&mut r);
    sumprod_cells(&mut r);
    determinism_cells(&mut r);

    let assertions = r
        .cells
        .iter()
        .filter(|c| c.status != Status::Skipped)
        .map(|c| {
            let status = serde_json::to_value(c.status).expect("status serializes");
            Assertion::new(format!("criterion{}.{}", c.criterion, c.name), status.as_str().unwrap_or(""), "pass", c.status == Status::Pass)
        })
        .collect();
    Ok(Outcome {
        results: r.cells.iter().map(to_value).collect(),
        mismatches: r.cells.iter().filter(|c| c.status == Status::Fail).map(to_value).collect(),
        assertions,
        seed: Some(SEED),
    })
}
