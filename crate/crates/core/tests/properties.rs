use std::collections::BTreeSet;

use holozeta::characters::{genuine_char, GLWeight};
use holozeta::linalg::Mat;
use holozeta::verify::{
    monte_carlo, verify_formal_degree, verify_s, verify_zeta, verify_zeta_reduced, McConfig, Method,
};
use holozeta::weights::{
    blattner_to_hc, c_squared_of, classify_theta, closed_s, closed_t, dual_sigma, hc_to_blattner,
    rebuild_dual, weyl_dim, HCParameter, HalfInt, SigmaParams, ThetaCase, ThetaDatum,
};
use holozeta::{Rational, C64};
use proptest::prelude::*;
use rand::Rng;

/// Strictly decreasing proper half-integers, `n + 1` of them, `|entry| <= 21/2`.
fn hc_param() -> impl Strategy<Value = HCParameter> {
    (1usize..=4)
        .prop_flat_map(|n| proptest::collection::btree_set(-5i64..=5, n + 1))
        .prop_map(|set: BTreeSet<i64>| {
            let twice: Vec<i64> = set.into_iter().rev().map(|k| 2 * k + 1).collect();
            HCParameter::from_twice(&twice).unwrap()
        })
}

fn admissible() -> impl Strategy<Value = (HCParameter, ThetaDatum)> {
    hc_param().prop_filter_map("inadmissible", |l| classify_theta(&l).ok().map(|t| (l, t)))
}

proptest! {
    #[test]
    fn parse_display_round_trip(l in hc_param()) {
        let s = l.to_string();
        let inner = s.trim_start_matches('(').trim_end_matches(')');
        prop_assert_eq!(HCParameter::parse(inner).unwrap(), l);
    }

    #[test]
    fn blattner_shift_inverts(l in hc_param()) {
        prop_assert_eq!(blattner_to_hc(&hc_to_blattner(&l)).unwrap(), l);
    }

    #[test]
    fn classification_is_consistent((l, t) in admissible()) {
        prop_assert_eq!(t.p + t.q, l.n() + 1);
        prop_assert_eq!(rebuild_dual(&t), t.dual.clone());
        prop_assert_eq!(t.blattner.contragredient(), t.dual.clone());
        prop_assert_eq!(t.dual.contragredient().contragredient(), t.dual.clone());
        prop_assert!(weyl_dim(&l) >= 1);
    }

    #[test]
    fn projection_constant_identity((_l, t) in admissible()) {
        let c2 = c_squared_of(&t);
        let one = Rational::from_integer(1.into());
        prop_assert!(c2 > Rational::from_integer(0.into()));
        // the bound fails once a primed minor enters the harmonic vector
        let primed = t.case == ThetaCase::CaseII && t.alphas.iter().any(|&a| a != 0);
        if !primed {
            prop_assert!(c2 <= one);
            prop_assert_eq!(c2 == one, t.p == 0 || t.q == 0);
        }
        let s0 = closed_s(t.n, 1, &dual_sigma(&t), &Rational::from_integer(0.into())).unwrap();
        let half = Rational::new((t.n as i64 + 1).into(), 2.into());
        prop_assert_eq!(s0.scale(&c2), closed_t(&t, &half).unwrap());
    }

    #[test]
    fn formal_degree_pairs(a in admissible(), b in admissible()) {
        prop_assume!(a.1.n == b.1.n);
        prop_assert!(verify_formal_degree(&[a.0, b.0]).unwrap().verdict().is_pass());
    }
}

#[test]
fn monte_carlo_is_bit_reproducible() {
    let cfg = McConfig::new(30_000, 11).with_workers(3);
    let lam = HCParameter::parse("5/2,1/2").unwrap();
    let a = verify_zeta(&lam, &cfg, None).unwrap();
    let b = verify_zeta(&lam, &cfg, None).unwrap();
    assert_eq!(a.estimate.value.re.to_bits(), b.estimate.value.re.to_bits());
    assert_eq!(a.estimate.value.im.to_bits(), b.estimate.value.im.to_bits());
    assert_eq!(a.estimate.stderr.to_bits(), b.estimate.stderr.to_bits());
}

#[test]
fn stderr_scales_with_inverse_square_root() {
    let sigma = SigmaParams::SecondOneDim {
        kappa: vec![HalfInt::from_int(0), HalfInt::from_int(-1)],
        iota: HalfInt::from_int(0),
    };
    let s = Rational::from_integer(3.into());
    let run = |k| verify_s(2, 1, &sigma, &s, Method::MonteCarlo, &McConfig::new(k, 5).with_workers(2), None).unwrap();
    let (small, large) = (run(20_000), run(200_000));
    let ratio = small.estimate.stderr / large.estimate.stderr;
    let ideal = 10f64.sqrt();
    assert!(ratio > ideal / 2.0 && ratio < ideal * 2.0, "ratio {ratio}");

    // and for a plain Haar average
    let f = |rng: &mut rand_chacha::ChaCha8Rng| {
        let u = holozeta::group::haar_unitary(2, rng);
        let w = GLWeight::new(vec![1, 0], 0).unwrap();
        let zeta = u.det().sqrt();
        Ok(C64::new(genuine_char(&w, &u, &zeta)?.norm_sqr(), 0.0))
    };
    let a = monte_carlo(&McConfig::new(10_000, 1).with_workers(1), f).unwrap();
    let b = monte_carlo(&McConfig::new(100_000, 1).with_workers(1), f).unwrap();
    let ratio = a.stderr / b.stderr;
    assert!(ratio > ideal / 2.0 && ratio < ideal * 2.0, "ratio {ratio}");
}

#[test]
fn full_and_reduced_zeta_integrands_agree() {
    let lam = HCParameter::parse("3/2,1/2").unwrap();
    let cfg = McConfig::new(100_000, 21).with_workers(2);
    let full = verify_zeta(&lam, &cfg, None).unwrap();
    let red = verify_zeta_reduced(&lam, &cfg, None).unwrap();
    let diff = (full.estimate.c64() - red.estimate.c64()).norm();
    let band = 3.0 * (full.estimate.stderr.powi(2) + red.estimate.stderr.powi(2)).sqrt();
    assert!(diff <= band.max(1e-12), "diff {diff}, band {band}");
}

#[test]
fn character_at_identity_is_dimension() {
    let mut rng = rand::rng();
    for _ in 0..20 {
        let m = rng.random_range(1..=4);
        let mut parts: Vec<i64> = (0..m).map(|_| rng.random_range(-4..=4)).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let w = GLWeight::new(parts, 0).unwrap();
        let id = Mat::<C64>::identity(m);
        let c = genuine_char(&w, &id, &C64::new(1.0, 0.0)).unwrap();
        assert!((c - C64::new(w.dim() as f64, 0.0)).norm() < 1e-9);
    }
}
