use proptest::prelude::*;

use aoi_sched::closed_form::{solve_inverse_age, solve_proportional_age, Branch};
use aoi_sched::trajectory::{build, integrate};
use aoi_sched::{
    check_feasibility, solve, DistortionKind, DistortionSpec, ProblemInstance, Schedule,
};

fn spec_strategy() -> impl Strategy<Value = DistortionSpec> {
    prop_oneof![
        (0.5..10.0f64, 0.1..2.0f64, 0.5..5.0f64).prop_map(|(a, b, c_max)| {
            DistortionSpec::exponential(a, b, (-b * c_max).exp(), c_max).unwrap()
        }),
        (0.5..10.0f64, 0.1..2.0f64, 0.05..2.0f64, 0.5..10.0f64)
            .prop_map(|(a, b, d, c_max)| DistortionSpec::inverse_linear(a, b, d, c_max).unwrap()),
    ]
}

fn schedule_strategy() -> impl Strategy<Value = Schedule> {
    (1usize..8).prop_flat_map(|n| {
        (
            prop::collection::vec(0.0..5.0f64, n + 1),
            prop::collection::vec(0.0..1.0f64, n),
        )
            .prop_map(|(y, u)| {
                let c = (0..u.len()).map(|i| y[i + 1] * u[i]).collect();
                Schedule::new(y, c).unwrap()
            })
    })
}

fn instance_strategy() -> impl Strategy<Value = ProblemInstance> {
    let constant = (1usize..7, 1.0..20.0f64, 0.0..1.0f64)
        .prop_map(|(n, t, u)| ProblemInstance::constant(t, n, u * t / n as f64).unwrap());
    let inverse = (1usize..7, 1.0..20.0f64, 0.01..3.0f64)
        .prop_map(|(n, t, a)| ProblemInstance::inverse_age(t, n, a).unwrap());
    let proportional =
        (1usize..7, 1.0..20.0f64, 0.01..1.0f64, 0.01..0.49f64).prop_map(|(n, t, u, a)| {
            // keep c small enough that the chain fits: sum of the chain is below N c
            ProblemInstance::proportional_age(t, n, u * t / (n as f64 + 1.0), a).unwrap()
        });
    prop_oneof![constant, inverse, proportional]
}

proptest! {
    #[test]
    fn distortion_decreases(spec in spec_strategy(), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        prop_assume!(hi - lo > 1e-9);
        let (a, b) = (spec.eval(lo * spec.c_max).unwrap(), spec.eval(hi * spec.c_max).unwrap());
        prop_assert!(a > b, "{spec:?}: D({lo}) = {a} <= D({hi}) = {b}");
    }

    #[test]
    fn budget_round_trip(spec in spec_strategy(), u in 0.0..1.0f64) {
        let c = u * spec.c_max;
        let beta = spec.eval(c).unwrap();
        let back = spec.min_processing_for(beta).unwrap();
        prop_assert!((back - c).abs() <= 1e-8 * spec.c_max.max(1.0), "{c} -> {beta} -> {back}");
        if spec.kind == DistortionKind::Exponential {
            prop_assert!(spec.eval(back).unwrap() <= beta + 1e-12);
        }
    }

    #[test]
    fn trajectory_area_is_total_age(s in schedule_strategy()) {
        let area = integrate(&build(&s).unwrap());
        prop_assert!((area - s.total_age()).abs() <= 1e-9 * s.total_age().max(1.0));
    }

    #[test]
    fn inverse_age_scales_with_horizon(t in 0.5..20.0f64, k in 0.1..10.0f64, n in 1usize..7, alpha in 0.01..3.0f64) {
        let base = solve_inverse_age(t, n, alpha).unwrap();
        let scaled = solve_inverse_age(k * t, n, alpha).unwrap();
        let expected = base.schedule.scaled(k);
        for (a, b) in scaled.schedule.intervals().iter().zip(expected.intervals()) {
            prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1e-300));
        }
        prop_assert!((scaled.total_age - k * k * base.total_age).abs() <= 1e-9 * scaled.total_age);
    }

    #[test]
    fn inverse_age_tight_rules(t in 0.5..20.0f64, n in 1usize..7, alpha in 0.01..3.0f64) {
        let sol = solve_inverse_age(t, n, alpha).unwrap();
        let (y, c) = (sol.schedule.intervals(), sol.schedule.processing());
        for i in 0..n {
            prop_assert_eq!(c[i], alpha * y[i]);
        }
        if sol.regime.branch == Branch::InverseGeometric {
            for i in 1..n {
                prop_assert_eq!(y[i], alpha * y[i - 1]);
            }
        }
    }

    #[test]
    fn proportional_tight_rule(t in 1.0..20.0f64, n in 1usize..7, c in 0.05..2.0f64, alpha in 0.01..0.49f64) {
        if let Ok(sol) = solve_proportional_age(t, n, c, alpha) {
            let (y, p) = (sol.schedule.intervals(), sol.schedule.processing());
            for i in 0..n {
                prop_assert_eq!(p[i], (c - alpha * y[i]).max(0.0));
            }
        }
    }

    #[test]
    fn solutions_are_feasible(inst in instance_strategy()) {
        if let Ok(sol) = solve(&inst) {
            let report = check_feasibility(&inst, &sol.schedule, 1e-9).unwrap();
            prop_assert!(report.is_feasible(), "{inst:?}: {report}");
            prop_assert!((sol.total_age - sol.schedule.total_age()).abs() <= 1e-12 * sol.total_age.max(1.0));
        }
    }
}
