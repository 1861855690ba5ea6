use std::f64::consts::PI;

use approx::assert_relative_eq;
use gridkrig::spectral::{aliased_sum, aliased_terms, CovarianceModel, Family, Profile, SumMode};
use gridkrig::theory::quadrature::{integrate_whole_line, QuadratureSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn model(f: Family, t: f64, p: Profile) -> CovarianceModel {
    CovarianceModel::new(f, t, p).unwrap()
}

/// `Σ_k θ/(θ² + (ω + k/h)²) = πh sinh(2πθh) / (cosh(2πθh) - cos(2πωh))`,
/// the Poisson-summed form of the Lorentzian comb.
fn lorentzian_comb(theta: f64, omega: f64, h: f64) -> f64 {
    let a = 2.0 * PI * theta * h;
    // cosh a - cos c = 2 sinh²(a/2) + 2 sin²(c/2), free of cancellation.
    let c = 2.0 * PI * omega * h;
    let denom = 2.0 * (0.5 * a).sinh().powi(2) + 2.0 * (0.5 * c).sin().powi(2);
    PI * h * a.sinh() / denom
}

#[test]
fn coth_identity_over_random_triples() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for _ in 0..100 {
        let theta = 10f64.powf(rng.random_range(-1.0..1.0));
        let th = 10f64.powf(rng.random_range(-3.0..0.0));
        let h = th / theta;
        let omega = rng.random_range(-2.0..2.0) / h;
        let m = model(Family::Exponential, theta, Profile::PaperVerbatim);
        let oracle = lorentzian_comb(theta, omega, h);
        let closed = aliased_sum(&m, omega, h, SumMode::ClosedForm).unwrap();
        let trunc = aliased_sum(&m, omega, h, SumMode::Truncated { tolerance: 1e-12 }).unwrap();
        assert_relative_eq!(closed, oracle, max_relative = 1e-10);
        assert_relative_eq!(trunc, oracle, max_relative = 1e-10);
    }
}

#[test]
fn truncated_sum_matches_brute_force_for_every_family() {
    for fam in Family::ALL {
        for profile in [Profile::PaperVerbatim, Profile::Consistent] {
            let m = model(fam, 0.9, profile);
            let (omega, h) = (0.37, 0.4);
            let brute: f64 = (-400_000i64..=400_000)
                .map(|k| m.spectral_density(omega + k as f64 / h))
                .sum();
            let s = aliased_sum(&m, omega, h, SumMode::Truncated { tolerance: 1e-13 }).unwrap();
            // The brute-force partial sum misses a tail of order 1/K for the
            // exponential family.
            let tol = if fam == Family::Exponential { 1e-6 } else { 1e-11 };
            assert_relative_eq!(s, brute, max_relative = tol);
        }
    }
}

#[test]
fn alias_tail_bound_is_certified() {
    for fam in Family::ALL {
        let m = model(fam, 1.0, Profile::Consistent);
        let terms = aliased_terms(&m, 0.1, 0.5, 1e-8).unwrap();
        let exact = aliased_sum(&m, 0.1, 0.5, SumMode::Truncated { tolerance: 1e-14 }).unwrap();
        assert!((terms.total() - exact).abs() <= terms.error_bound + 1e-15 * exact);
    }
}

#[test]
fn consistent_density_inverts_to_covariance() {
    // R(r) = ∫ F(ν) cos(2πνr) dν under the ordinary-frequency convention.
    let spec = QuadratureSpec::with_tolerances(1e-11, 1e-12);
    for fam in [Family::Matern32, Family::Matern52, Family::SquaredExponential] {
        let m = model(fam, 1.7, Profile::Consistent);
        for r in [0.0, 0.3, 1.1] {
            let value = integrate_whole_line(
                |v| m.spectral_density(v) * (2.0 * PI * v * r).cos(),
                |w| m.spectral_tail(w),
                &spec,
                Some(0.25),
            )
            .unwrap()
            .value;
            assert_relative_eq!(value, m.covariance(r), max_relative = 1e-9, epsilon = 1e-12);
        }
    }
}

#[test]
fn printed_exponential_mass_is_pi() {
    let m = model(Family::Exponential, 0.4, Profile::PaperVerbatim);
    let spec = QuadratureSpec::with_tolerances(1e-12, 1e-10);
    let i = integrate_whole_line(|w| m.spectral_density(w), |w| m.spectral_tail(w), &spec, None).unwrap();
    assert_relative_eq!(i.value, PI, max_relative = 1e-9);
    assert_relative_eq!(m.spectral_mass(), PI, max_relative = 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn aliased_sums_are_periodic_and_even(
        fam_index in 0usize..4,
        theta in 0.1f64..5.0,
        h in 0.05f64..1.0,
        omega in -3.0f64..3.0,
    ) {
        let m = model(Family::ALL[fam_index], theta, Profile::Consistent);
        let mode = SumMode::Truncated { tolerance: 1e-12 };
        let a = aliased_sum(&m, omega, h, mode).unwrap();
        let shifted = aliased_sum(&m, omega + 2.0 / h, h, mode).unwrap();
        let mirrored = aliased_sum(&m, -omega, h, mode).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!((a - shifted).abs() <= 1e-9 * a);
        prop_assert!((a - mirrored).abs() <= 1e-12 * a);
    }

    #[test]
    fn aliasing_fraction_lies_in_unit_interval(
        fam_index in 0usize..4,
        theta in 0.1f64..5.0,
        h in 0.01f64..1.0,
        u in -0.5f64..0.5,
    ) {
        let m = model(Family::ALL[fam_index], theta, Profile::PaperVerbatim);
        let a = aliased_terms(&m, u / h, h, 1e-12).unwrap().aliasing_fraction();
        prop_assert!((0.0..=1.0).contains(&a), "{}", a);
    }
}
