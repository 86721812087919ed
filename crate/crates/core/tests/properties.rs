use ffincidence::cyclo::CharacterSum;
use ffincidence::incidence::{
    count_incidences, cross_edges, edge_count, edge_count_pairwise, gen_points, gen_spheres, incidence_report, lift,
};
use ffincidence::spectrum::eigenvalue_formula;
use ffincidence::{CycInt, FieldCtx, FieldVector, Form, RadiusClass};
use num_bigint::BigInt;
use proptest::prelude::*;

/// `q^{-k} sum_m lambda_m |sum_{x in W} chi(m.x)|^2`, exactly.
fn spectral_edge_count(w: &[FieldVector], form: Form, ctx: &FieldCtx, k: usize) -> BigInt {
    let p = ctx.p();
    let mut total = CycInt::zero(p);
    let mut acc = CharacterSum::new(p);
    for m in ctx.vectors(k).unwrap() {
        acc.clear();
        for x in w {
            acc.add_exponent(ctx.trace(ctx.dot(m.coords(), x.coords())), 1);
        }
        let lambda = eigenvalue_formula(form, ctx, k, &m).unwrap().value;
        total = &total + &acc.value().norm_squared().scale(&lambda);
    }
    let n = total.as_integer().expect("edge count is rational");
    let qk = BigInt::from(ctx.q()).pow(k as u32);
    assert_eq!(&n % &qk, BigInt::from(0));
    n / qk
}

fn field(p: u32, ell: u32) -> FieldCtx {
    FieldCtx::new(p, ell).unwrap()
}

#[test]
fn spectral_identity_for_edge_counts() {
    let cases = [(3u32, 1u32, 2usize), (3, 1, 3), (3, 1, 4), (5, 1, 2), (7, 1, 2), (3, 2, 2)];
    for (p, ell, k) in cases {
        let ctx = field(p, ell);
        let space = ctx.vector_count(k).unwrap();
        for form in [Form::Cone, Form::Norm] {
            for (i, n) in [1, space / 3, space / 2, space].into_iter().enumerate() {
                let w = gen_points(&ctx, k, n, i as u64).unwrap();
                let direct = edge_count_pairwise(w.points(), form, &ctx).unwrap();
                assert_eq!(spectral_edge_count(w.points(), form, &ctx, k), BigInt::from(direct), "{form} p={p} ell={ell} k={k}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lift_preserves_incidences(seed in any::<u64>(), np in 1u64..60, ns in 1u64..60, pi in 0usize..3, sq in any::<bool>()) {
        let p = [3u32, 7, 11][pi];
        let ctx = field(p, 1);
        let class = if sq { RadiusClass::Square } else { RadiusClass::NonSquare };
        let pts = gen_points(&ctx, 2, np.min(p as u64 * p as u64), seed).unwrap();
        let sph = gen_spheres(&ctx, 2, ns.min(p as u64 * p as u64), class, false, seed ^ 1).unwrap();
        let l = lift(&pts, &sph, &ctx).unwrap();
        let i = count_incidences(&pts, &sph, &ctx).unwrap();
        prop_assert_eq!(cross_edges(&l.points, &l.spheres, l.form, &ctx).unwrap(), i);
        let report = incidence_report(&pts, &sph, &ctx).unwrap();
        prop_assert!(report.passed());
    }

    #[test]
    fn edge_count_strategies_agree(seed in any::<u64>(), frac in 0.0f64..=1.0, cone in any::<bool>()) {
        let ctx = field(3, 1);
        let n = ((81.0 * frac) as u64).max(1);
        let w = gen_points(&ctx, 4, n, seed).unwrap();
        let form = if cone { Form::Cone } else { Form::Norm };
        prop_assert_eq!(edge_count(w.points(), form, &ctx).unwrap(), edge_count_pairwise(w.points(), form, &ctx).unwrap());
    }

    #[test]
    fn deviation_bound_for_any_radius(seed in any::<u64>(), np in 1u64..80, ns in 1u64..80) {
        let ctx = field(5, 1);
        let pts = gen_points(&ctx, 3, np, seed).unwrap();
        let sph = gen_spheres(&ctx, 3, ns, RadiusClass::Arbitrary, false, seed.wrapping_add(9)).unwrap();
        let report = incidence_report(&pts, &sph, &ctx).unwrap();
        prop_assert!(report.lift.is_none());
        prop_assert!(report.passed());
    }
}
