use aiprod_core::checks::negative_gap_model;
use aiprod_core::dynamics::TransitionFunction;
use aiprod_core::functions::{CostFunction, ProductionFunction};
use aiprod_core::literacy::{
    bayes_effort, check_condition_multimodal, critical_skill, effort_skill_profile, literacy_rates,
    literacy_steady_state, modality, posteriors, search_multimodal_instance, signal_prob_good,
    skill_grid, Clause, CrossingCurve, LiteracyModel, Monotonicity, Verification,
};
use aiprod_core::mcsim::{simulate, tv_distance};
use aiprod_core::optim::linspace;
use aiprod_core::oracle::oracle_effort;

fn models() -> Vec<LiteracyModel> {
    let mut out = vec![negative_gap_model()];
    for (v, beta, gamma, q) in [
        (Verification::saturating_affine(5.0).unwrap(), 2.0, 1.0, 0.3),
        (
            Verification::exponential_approach(3.0).unwrap(),
            3.0,
            1.0,
            0.8,
        ),
        (
            Verification::exponential_approach(0.7).unwrap(),
            1.5,
            0.4,
            0.15,
        ),
        (Verification::constant(0.8).unwrap(), 2.0, 0.5, 0.5),
    ] {
        out.push(LiteracyModel::new(v, beta, gamma, q).unwrap());
    }
    out
}

#[test]
fn mixture_matches_brute_force_argmax() {
    for m in models() {
        let p = ProductionFunction::piecewise_linear_capped(m.beta).unwrap();
        let c = CostFunction::linear(m.gamma).unwrap();
        let st = critical_skill(&m).s_tilde;
        for a_bar in [0.0, 0.2, 0.35] {
            for s in linspace(0.0, 1.2 / m.beta, 37) {
                if st.is_some_and(|t| (s - t).abs() < 1e-3) {
                    continue;
                }
                let v = m.verification.value(s);
                let g = m.q * v + (1.0 - m.q) * (1.0 - v);
                let q1 = m.q * v / g;
                let q0 = m.q * (1.0 - v) / (1.0 - g);
                let (e1, p1) = oracle_effort(&p, &c, s, a_bar, q1, 1.0 / m.beta);
                let (e0, p0) = oracle_effort(&p, &c, s, a_bar, q0, 1.0 / m.beta);
                let out = bayes_effort(&m, s, a_bar).unwrap();
                assert!(
                    (out.e_b - (g * e1 + (1.0 - g) * e0)).abs() < 1e-6,
                    "{m:?} s={s} a={a_bar}"
                );
                assert!(
                    (out.p_b - (g * p1 + (1.0 - g) * p0)).abs() < 1e-8,
                    "{m:?} s={s} a={a_bar}"
                );
                assert!((out.signal_prob_good - g).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn posteriors_worked_example() {
    // q = 0.6, v = 0.7: good signal 0.54, posteriors 7/9 and 9/23
    let post = posteriors(0.6, 0.7);
    assert!((signal_prob_good(0.6, 0.7) - 0.54).abs() < 1e-15);
    assert!((post.q1 - 7.0 / 9.0).abs() < 1e-15);
    assert!((post.q0 - 9.0 / 23.0).abs() < 1e-15);
}

#[test]
fn critical_skill_matches_dense_scan() {
    for m in models() {
        let crit = critical_skill(&m);
        let thr = m.threshold();
        let side = |s: f64| {
            let post = posteriors(m.q, m.verification.value(s));
            match crit.crossing {
                CrossingCurve::Q0 => post.q0 > thr,
                CrossingCurve::Q1 => post.q1 > thr,
            }
        };
        let grid = linspace(0.0, 4.0, 400_001);
        let flip = grid.windows(2).find(|w| side(w[0]) != side(w[1]));
        match (crit.s_tilde, flip) {
            (Some(st), Some(w)) => assert!(
                w[0] - 1e-9 <= st && st <= w[1] + 1e-9,
                "{m:?}: {st} vs {w:?}"
            ),
            (None, None) => {}
            (st, w) => panic!("{m:?}: {st:?} vs {w:?}"),
        }
    }
}

#[test]
fn low_reliability_verdict_matches_profile() {
    let mut checked = 0;
    for kappa in [1.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
        for q in [0.1, 0.2, 0.3, 0.4, 0.45] {
            for v in [
                Verification::saturating_affine(kappa).unwrap(),
                Verification::exponential_approach(kappa).unwrap(),
            ] {
                let m = LiteracyModel::new(v, 2.0, 1.0, q).unwrap();
                let verdict = check_condition_multimodal(&m);
                let Some(st) = verdict.s_tilde else { continue };
                assert_eq!(verdict.clause, Some(Clause::LowReliability));
                if verdict.bound.is_finite() && (verdict.bound - st).abs() < 0.02 {
                    continue;
                }
                let grid = skill_grid(&m, 1.0 / m.beta, 2001);
                let profile = effort_skill_profile(&m, 1.0 / m.beta, &grid).unwrap();
                assert_eq!(
                    verdict.holds,
                    profile.verdict == Monotonicity::NonMonotonic,
                    "{m:?}: {verdict:?} {:?}",
                    profile.witness
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 30);
}

#[test]
fn witness_distribution_survives_simulation() {
    let m = negative_gap_model();
    let lambda = TransitionFunction::new(0.01, 1.0).unwrap();
    let grid = skill_grid(&m, 1.0, 201);
    let report = search_multimodal_instance(&m, &lambda, 0.2, &grid)
        .unwrap()
        .unwrap();
    let w = report.witness.unwrap();
    let ss = literacy_steady_state(&m, &lambda, w.mu, &w.states, 0.2).unwrap();
    assert_eq!(ss.pi, w.pi);
    assert!(modality(&ss).mode_count >= 2);
    let up = literacy_rates(&m, &lambda, &w.states, 0.2);
    let down = vec![w.mu; up.len()];
    let run = simulate(&up, &down, 1_000_000, 0, 7).unwrap();
    let emp = run.empirical();
    assert!(tv_distance(&emp, &w.pi).unwrap() <= 0.02);
}

#[test]
fn constant_verification_never_rises() {
    for v in [0.5, 0.75, 1.0] {
        let m = LiteracyModel::new(Verification::constant(v).unwrap(), 2.0, 1.0, 0.4).unwrap();
        assert!(critical_skill(&m).s_tilde.is_none());
        assert!(!check_condition_multimodal(&m).holds);
        for a_bar in [0.0, 0.25, 0.5] {
            let profile = effort_skill_profile(&m, a_bar, &linspace(0.0, 1.0, 501)).unwrap();
            assert_eq!(profile.verdict, Monotonicity::Decreasing);
        }
    }
}
