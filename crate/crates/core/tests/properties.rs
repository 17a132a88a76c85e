use aiprod_core::dynamics::{
    chain_rates, fosd_check, interval_patterns, steady_state, sweep_adjacent, GridSpec,
    IntervalPattern, SkillChain, SteadyState, TransitionFunction,
};
use aiprod_core::effort::{
    effort_basic, effort_exante, effort_full_adaptation, vshape_threshold, ReliabilityModel,
};
use aiprod_core::functions::{
    certainty_equivalent_assistance, critical_level, CostFunction, ProductionFunction,
};
use aiprod_core::literacy::{
    bayes_effort, critical_skill, modality, posteriors, CrossingCurve, LiteracyModel, Verification,
};
use aiprod_core::optim::linspace;
use aiprod_core::oracle::central_difference;
use proptest::prelude::*;

fn smooth_concave() -> impl Strategy<Value = ProductionFunction> {
    prop_oneof![
        (0.5..2.0f64).prop_map(|s| ProductionFunction::fractional(s).unwrap()),
        (0.3..1.0f64, 0.2..0.8f64).prop_map(|(c, e)| ProductionFunction::power_law(c, e).unwrap()),
        (0.5..4.0f64).prop_map(|c| ProductionFunction::logarithmic(c).unwrap()),
        Just(ProductionFunction::gaussian_integral()),
    ]
}

fn concave() -> impl Strategy<Value = ProductionFunction> {
    prop_oneof![
        smooth_concave(),
        (1.0..3.0f64, 0.5..2.0f64)
            .prop_map(|(a, b)| ProductionFunction::truncated_quadratic(a, b).unwrap()),
        (1.0..3.0f64).prop_map(|b| ProductionFunction::piecewise_linear_capped(b).unwrap()),
    ]
}

fn chain() -> impl Strategy<Value = SkillChain> {
    (
        prop::collection::vec(0.0..1.0f64, 2..8),
        0.005..0.5f64,
        0.1..3.0f64,
        0.01..1.0f64,
    )
        .prop_map(|(mut s, l0, l1, mu)| {
            s.sort_by(f64::total_cmp);
            SkillChain::new(s, TransitionFunction::new(l0, l1).unwrap(), mu).unwrap()
        })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivatives_match_differences(p in smooth_concave(), x in 0.05..2.0f64) {
        let h = 1e-5;
        prop_assert!(close(p.d1(x), central_difference(|y| p.value(y), x, h), 1e-6));
        prop_assert!(close(p.d2(x), central_difference(|y| p.d1(y), x, h), 1e-6));
    }

    #[test]
    fn critical_level_is_last_crossing(p in smooth_concave(), gamma in 0.05..0.9f64) {
        let c = CostFunction::linear(gamma).unwrap();
        let x = critical_level(&p, &c).unwrap();
        if x > 0.0 {
            prop_assert!(p.d1(x) >= gamma - 1e-8);
        }
        prop_assert!(p.d1(x + 1e-6) < gamma);
    }

    #[test]
    fn certainty_equivalent_below_mean(
        p in smooth_concave(), s in 0.05..1.0f64, a_bar in 0.01..1.0f64, q in 0.0..=1.0f64,
    ) {
        let ce = certainty_equivalent_assistance(&p, s, 0.0, a_bar, q).unwrap();
        prop_assert!(ce.a_ce <= q * a_bar + 1e-9);
    }

    #[test]
    fn basic_effort_monotone_in_total_input(
        p in concave(), gamma in 0.2..0.8f64, mut xs in prop::collection::vec(0.0..1.5f64, 2..20),
    ) {
        let c = CostFunction::linear(gamma).unwrap();
        xs.sort_by(f64::total_cmp);
        let sols: Vec<_> = xs.iter().map(|&x| effort_basic(&p, &c, x / 2.0, x / 2.0).unwrap()).collect();
        for w in sols.windows(2) {
            prop_assert!(w[1].effort <= w[0].effort + 1e-12);
            prop_assert!(w[1].productivity >= w[0].productivity - 1e-12);
        }
    }

    #[test]
    fn exante_with_sure_assistance_is_basic(
        p in concave(), gamma in 0.2..0.8f64, s in 0.0..1.0f64, a in 0.0..1.0f64,
    ) {
        let c = CostFunction::linear(gamma).unwrap();
        let ex = effort_exante(&p, &c, s, &ReliabilityModel::new(a, 1.0).unwrap()).unwrap();
        let basic = effort_basic(&p, &c, s, a).unwrap();
        prop_assert_eq!(ex.effort.to_bits(), basic.effort.to_bits());
        prop_assert_eq!(ex.productivity.to_bits(), basic.productivity.to_bits());
    }

    #[test]
    fn full_adaptation_monotone(
        p in concave(), c2 in prop_oneof![Just(0.0), 0.05..0.5f64],
        s in 0.0..0.8f64, a in 0.0..0.8f64, q in 0.0..=1.0f64, bump in 0.001..0.3f64,
    ) {
        let c = CostFunction::quadratic(0.5, c2).unwrap();
        let base = effort_full_adaptation(&p, &c, s, &ReliabilityModel::new(a, q).unwrap()).unwrap();
        let moved = [
            effort_full_adaptation(&p, &c, s + bump, &ReliabilityModel::new(a, q).unwrap()).unwrap(),
            effort_full_adaptation(&p, &c, s, &ReliabilityModel::new(a + bump, q).unwrap()).unwrap(),
            effort_full_adaptation(&p, &c, s, &ReliabilityModel::new(a, (q + bump).min(1.0)).unwrap()).unwrap(),
        ];
        for m in moved {
            prop_assert!(m.effort <= base.effort + 1e-9);
            prop_assert!(m.productivity >= base.productivity - 1e-9);
        }
    }

    #[test]
    fn relaxed_classes_turn_once(
        beta in 1.0..3.0f64, ratio in 0.3..0.95f64, q in 0.05..0.95f64, perturbed: bool,
    ) {
        let gamma = ratio * beta;
        let p = if perturbed {
            ProductionFunction::perturbed_default(beta).unwrap()
        } else {
            ProductionFunction::piecewise_linear_capped(beta).unwrap()
        };
        let c = CostFunction::linear(gamma).unwrap();
        let tau = vshape_threshold(&p, 0.0, q, gamma);
        let hi = if tau.is_finite() { 2.0 * tau.max(0.1) } else { 2.0 / beta };
        let grid = linspace(0.0, hi, 257);
        let vals: Vec<f64> = grid
            .iter()
            .map(|&a| effort_exante(&p, &c, 0.0, &ReliabilityModel::new(a, q).unwrap()).unwrap().productivity)
            .collect();
        for (w, g) in vals.windows(2).zip(grid.windows(2)) {
            if g[1] <= tau {
                prop_assert!(w[1] <= w[0] + 1e-9);
            } else if g[0] >= tau {
                prop_assert!(w[1] >= w[0] - 1e-9);
            }
        }
    }

    #[test]
    fn global_balance(ch in chain(), p in concave(), a in 0.0..1.0f64) {
        let c = CostFunction::linear(0.5).unwrap();
        let ss = steady_state(&ch, &p, &c, a).unwrap();
        let (up, down) = chain_rates(&ch, &p, &c, a).unwrap();
        prop_assert!(ss.global_balance_residual(&up, &down) < 1e-10);
        prop_assert!((ss.pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn less_assistance_dominates(ch in chain(), p in concave(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let c = CostFunction::linear(0.5).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let low = steady_state(&ch, &p, &c, lo).unwrap();
        let high = steady_state(&ch, &p, &c, hi).unwrap();
        prop_assert!(fosd_check(&low, &high).unwrap());
    }

    #[test]
    fn posteriors_bracket_prior(q in 0.01..0.99f64, v in 0.5..=1.0f64) {
        let post = posteriors(q, v);
        prop_assert!(post.q0 <= q + 1e-15 && q <= post.q1 + 1e-15);
        if v > 0.5 + 1e-9 {
            prop_assert!(post.q0 < q && q < post.q1);
        }
    }

    #[test]
    fn near_sure_reliability_is_basic(
        kappa in 0.2..20.0f64, gamma in 0.1..1.0f64, ratio in 1.05..4.0f64, a_bar in 0.0..1.0f64,
    ) {
        let beta = gamma * ratio;
        let m = LiteracyModel::new(Verification::saturating_affine(kappa).unwrap(), beta, gamma, 1.0 - 1e-6).unwrap();
        let p = ProductionFunction::piecewise_linear_capped(beta).unwrap();
        let c = CostFunction::linear(gamma).unwrap();
        let worst = linspace(0.0, 1.5 / beta, 200)
            .into_iter()
            .map(|s| (bayes_effort(&m, s, a_bar).unwrap().e_b - effort_basic(&p, &c, s, a_bar).unwrap().effort).abs())
            .fold(0.0, f64::max);
        prop_assert!(worst < 1e-5);
    }

    #[test]
    fn posterior_hits_threshold_at_critical_skill(
        kappa in 0.2..20.0f64, gamma in 0.1..1.0f64, ratio in 1.05..4.0f64, q in 0.02..0.98f64, exp: bool,
    ) {
        let v = if exp { Verification::exponential_approach(kappa) } else { Verification::saturating_affine(kappa) }.unwrap();
        let m = LiteracyModel::new(v, gamma * ratio, gamma, q).unwrap();
        let crit = critical_skill(&m);
        if let Some(st) = crit.s_tilde {
            let post = posteriors(q, v.value(st));
            let designated = match crit.crossing {
                CrossingCurve::Q0 => post.q0,
                CrossingCurve::Q1 => post.q1,
            };
            prop_assert!((designated - m.threshold()).abs() < 1e-9);
        }
    }

    #[test]
    fn at_least_one_mode(w in prop::collection::vec(0.0..1.0f64, 1..30)) {
        let total: f64 = w.iter().sum::<f64>() + 1e-9;
        let pi = SteadyState { pi: w.iter().map(|x| (x + 1e-9 / w.len() as f64) / total).collect() };
        prop_assert!(modality(&pi).mode_count >= 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn interval_pattern_never_dips_first(ch in chain(), p in smooth_concave()) {
        let c = CostFunction::linear(0.5).unwrap();
        let x = critical_level(&p, &c).unwrap();
        let series = sweep_adjacent(&ch, &p, &c, &GridSpec::uniform(64, x + 0.5)).unwrap();
        for (m, pat) in interval_patterns(&series) {
            prop_assert!(pat != IntervalPattern::Other, "interval {m}: {pat:?}");
        }
    }
}
