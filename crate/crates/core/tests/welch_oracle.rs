//! Welch's t-test against frozen reference values and an independent
//! Student t implementation.

use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use screenml_core::evaluation::{
    ln_gamma, regularized_incomplete_beta, student_t_two_sided_p, welch_ttest,
};

struct Fixture {
    a: &'static [f64],
    b: &'static [f64],
    t: f64,
    df: f64,
    p: f64,
}

/// Reference values from `scipy.stats.ttest_ind(a, b, equal_var=False)`.
const FIXTURES: [Fixture; 3] = [
    Fixture {
        a: &[
            27.5, 21.0, 19.0, 23.6, 17.0, 17.9, 16.9, 20.1, 21.9, 22.6, 23.1, 19.6, 19.0, 21.7,
            21.4,
        ],
        b: &[
            27.1, 22.0, 20.8, 23.4, 23.4, 23.5, 25.8, 22.0, 24.8, 20.2, 21.9, 22.8, 23.0, 22.8,
            22.5,
        ],
        t: -2.6171141788393313,
        df: 23.74284506988018,
        p: 0.015182185496493307,
    },
    Fixture {
        a: &[0.5, 0.7, 0.9, 1.4],
        b: &[2.0, 2.2, 1.9, 2.5, 2.8, 3.1],
        t: -5.658259689411199,
        df: 7.482337858595491,
        p: 0.0006063066477925399,
    },
    Fixture {
        a: &[1.0, 2.0, 3.0, 4.0, 5.0],
        b: &[1.5, 2.5, 2.0],
        t: 1.3093073414159542,
        df: 5.157894736842106,
        p: 0.24572103030770182,
    },
];

fn reference_p(t: f64, df: f64) -> f64 {
    2.0 * StudentsT::new(0.0, 1.0, df).unwrap().cdf(-t.abs())
}

#[test]
fn frozen_reference_values() {
    for f in &FIXTURES {
        let r = welch_ttest(f.a, f.b).unwrap();
        assert!(
            (r.t_statistic - f.t).abs() <= 1e-6,
            "t {} vs {}",
            r.t_statistic,
            f.t
        );
        assert!(
            (r.degrees_of_freedom - f.df).abs() <= 1e-6,
            "df {} vs {}",
            r.degrees_of_freedom,
            f.df
        );
        assert!(
            (r.p_value - f.p).abs() <= 1e-8,
            "p {} vs {}",
            r.p_value,
            f.p
        );
        assert!((r.p_value - reference_p(f.t, f.df)).abs() <= 1e-8);
    }
}

#[test]
fn identical_samples_give_zero_statistic_and_unit_p() {
    for f in &FIXTURES {
        let r = welch_ttest(f.a, f.a).unwrap();
        assert_eq!(r.t_statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }
}

#[test]
fn extreme_separation_gives_tiny_positive_p() {
    let a: Vec<f64> = (0..100).map(|i| 0.9 + 1e-4 * (i % 7) as f64).collect();
    let b: Vec<f64> = (0..100).map(|i| 0.1 + 1e-4 * (i % 5) as f64).collect();
    let r = welch_ttest(&a, &b).unwrap();
    assert!(r.p_value > 0.0 && r.p_value < 1e-100, "p = {}", r.p_value);
}

#[test]
fn special_functions_match_statrs() {
    for x in [0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 50.5, 171.2, 1000.0] {
        let ours = ln_gamma(x);
        let theirs = statrs::function::gamma::ln_gamma(x);
        assert!(
            (ours - theirs).abs() <= 1e-10 * (1.0 + theirs.abs()),
            "ln_gamma({x}): {ours} vs {theirs}"
        );
    }
    for (a, b) in [
        (0.5, 0.5),
        (1.0, 3.0),
        (12.0, 0.5),
        (250.0, 0.5),
        (3.3, 7.1),
    ] {
        for x in [0.0, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0] {
            let ours = regularized_incomplete_beta(x, a, b);
            let theirs = statrs::function::beta::beta_reg(a, b, x);
            assert!(
                (ours - theirs).abs() <= 1e-10,
                "I_{x}({a}, {b}): {ours} vs {theirs}"
            );
        }
    }
}

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 2..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn p_values_match_statrs(a in sample(), b in sample()) {
        if let Ok(r) = welch_ttest(&a, &b) {
            let reference = reference_p(r.t_statistic, r.degrees_of_freedom);
            prop_assert!((r.p_value - reference).abs() <= 1e-8, "{} vs {}", r.p_value, reference);
            prop_assert!(r.p_value > 0.0 && r.p_value <= 1.0);
        }
    }

    #[test]
    fn swapping_samples_negates_t(a in sample(), b in sample()) {
        if let (Ok(ab), Ok(ba)) = (welch_ttest(&a, &b), welch_ttest(&b, &a)) {
            prop_assert!((ab.t_statistic + ba.t_statistic).abs() <= 1e-12 * (1.0 + ab.t_statistic.abs()));
            prop_assert!((ab.p_value - ba.p_value).abs() <= 1e-12);
            prop_assert!((ab.degrees_of_freedom - ba.degrees_of_freedom).abs() <= 1e-9);
        }
    }

    #[test]
    fn tail_probability_matches_statrs(t in -40.0f64..40.0, df in 1.0f64..2000.0) {
        let ours = student_t_two_sided_p(t, df);
        prop_assert!((ours - reference_p(t, df)).abs() <= 1e-8);
    }
}
