mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use ridgefp::linalg::eigenvalues_dense;
use ridgefp::solvers::probe_iteration_matrix;
use ridgefp::spectral::{
    admissible_upper, g3_pair, optimal_rate, rho, spectral_radii, spectrum_g1, spectrum_g3, theta_thresholds,
};
use ridgefp::{ComplexSpectrum, Method, RateFamily, SpectralInfo};

const FAMILIES: [RateFamily; 3] = [RateFamily::Separable, RateFamily::Coupled, RateFamily::GaussSeidel];

fn spectral_info() -> impl Strategy<Value = SpectralInfo> {
    (prop::collection::vec(0.01f64..20.0, 1..6), 0.05f64..10.0, 0usize..4, 0usize..4).prop_map(
        |(mut sigma, lambda_n, extra_d, extra_n)| {
            sigma.sort_by(|a, b| b.total_cmp(a));
            let p = sigma.len();
            SpectralInfo::new(sigma, p + extra_d, p + extra_n, lambda_n).unwrap()
        },
    )
}

proptest! {
    #[test]
    fn radius_of_separable_is_square_of_coupled(s in spectral_info()) {
        let (r1, r2) = spectral_radii(&s);
        prop_assert!((r1 - r2 * r2).abs() <= 1e-12 * r1.max(1.0));
    }

    #[test]
    fn thresholds_ordered_inside_unit_interval(s in spectral_info()) {
        let t = theta_thresholds(&s).theta_bar;
        prop_assert!(t.iter().all(|&v| v > 0.0 && v < 1.0));
        prop_assert!(t.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn below_first_threshold_all_moduli_equal(s in spectral_info(), frac in 0.001f64..1.0) {
        let theta = theta_thresholds(&s).theta_bar[0] * frac;
        let spectrum = spectrum_g3(&s, theta);
        for z in &spectrum.eigenvalues {
            prop_assert!((z.norm() - (1.0 - theta)).abs() < 1e-10, "{} vs {}", z.norm(), 1.0 - theta);
        }
    }

    #[test]
    fn real_pairs_are_nested_between_thresholds(s in spectral_info(), frac in 0.0f64..=1.0) {
        let bars = theta_thresholds(&s).theta_bar;
        for l in 0..bars.len() {
            let hi = bars.get(l + 1).copied().unwrap_or(1.0);
            let theta = bars[l] + frac * (hi - bars[l]);
            let pairs: Vec<(Complex64, Complex64)> =
                s.sigma()[..=l].iter().map(|&sig| g3_pair(sig, s.lambda_n(), theta)).collect();
            let slack = 1e-12;
            for (j, (minus, plus)) in pairs.iter().enumerate() {
                prop_assert!(minus.im.abs() < slack && plus.im.abs() < slack, "pair {} not real", j);
                prop_assert!(minus.re <= theta - 1.0 + slack);
                prop_assert!(theta - 1.0 <= plus.re + slack);
                prop_assert!(plus.re <= slack);
            }
            for w in pairs.windows(2) {
                prop_assert!(w[0].0.re <= w[1].0.re + slack);
                prop_assert!(w[1].1.re <= w[0].1.re + slack);
            }
        }
    }

    #[test]
    fn admissible_boundary_has_unit_radius(s in spectral_info()) {
        for family in FAMILIES {
            let upper = admissible_upper(family, s.sigma1(), s.lambda_n());
            let r = rho(family, s.sigma1(), s.lambda_n(), upper);
            prop_assert!((r - 1.0).abs() < 1e-10, "{:?}: {}", family, r);
            let inside = rho(family, s.sigma1(), s.lambda_n(), 0.999 * upper);
            prop_assert!(inside < 1.0);
        }
    }

    #[test]
    fn gauss_seidel_optimum_is_best(s in spectral_info()) {
        let (s1, ln) = (s.sigma1(), s.lambda_n());
        let r1 = optimal_rate(RateFamily::Separable, s1, ln);
        let r2 = optimal_rate(RateFamily::Coupled, s1, ln);
        let r3 = optimal_rate(RateFamily::GaussSeidel, s1, ln);
        prop_assert!(r3 <= r1 + 1e-15 && r1 <= r2 + 1e-15, "{} {} {}", r1, r2, r3);
    }
}

#[test]
fn gauss_seidel_rate_is_v_shaped_around_first_threshold() {
    for (sigma1, lambda_n) in [(2.0, 1.0), (5.0, 0.5), (0.7, 3.0), (30.0, 1.0)] {
        let s = SpectralInfo::new(vec![sigma1], 1, 4, lambda_n).unwrap();
        let bar = theta_thresholds(&s).theta_bar[0];
        let upper = admissible_upper(RateFamily::GaussSeidel, sigma1, lambda_n);
        let grid: Vec<f64> = (1..=100).map(|i| upper * i as f64 / 101.0).collect();
        let rates: Vec<(f64, f64)> =
            grid.iter().map(|&t| (t, rho(RateFamily::GaussSeidel, sigma1, lambda_n, t))).collect();
        for w in rates.windows(2) {
            let ((t0, r0), (t1, r1)) = (w[0], w[1]);
            if t1 <= bar {
                assert!(r1 <= r0 + 1e-12);
            } else if t0 >= bar {
                assert!(r1 >= r0 - 1e-12);
            }
        }
        for &(t, r) in rates.iter().filter(|(t, _)| *t <= bar) {
            assert!((r - (1.0 - t)).abs() < 1e-12);
        }
    }
}

/// The reordered modified schemes have triangular iteration matrices: one
/// half of `G₁`'s spectrum plus zeros. Their radius never exceeds `G₁`'s and
/// equals it from `θ₁*` upward, where `σ₁` sets the radius.
#[test]
fn modified_schemes_carry_half_of_separable_spectrum() {
    for seed in 0..4u64 {
        let p = common::seeded(seed, 3, 7);
        let s = SpectralInfo::from_problem(&p).unwrap();
        let upper = admissible_upper(RateFamily::Separable, s.sigma1(), s.lambda_n());
        let theta_star = ridgefp::spectral::optimal_theta(RateFamily::Separable, s.sigma1(), s.lambda_n());
        for theta in [0.3 * theta_star, theta_star, 0.5 * (theta_star + upper), 0.99 * upper] {
            let half = |len: usize| -> Vec<f64> {
                let mut v: Vec<f64> = s
                    .sigma()
                    .iter()
                    .map(|sig| 1.0 - theta - theta * sig * sig / s.lambda_n())
                    .collect();
                v.resize(len, 1.0 - theta);
                v
            };
            for (method, zeros, kept) in [(Method::Mqtz, p.d(), p.big_n()), (Method::Mqtz2, p.big_n(), p.d())] {
                let mut expected = vec![0.0; zeros];
                expected.extend(half(kept));
                let expected = ComplexSpectrum::from_real(expected);
                let dense = eigenvalues_dense(&probe_iteration_matrix(&p, method, theta).unwrap()).unwrap();
                let gap = expected.match_distance(&dense).unwrap();
                assert!(gap < 1e-8, "{method} seed {seed}: {gap}");
                let g1_radius = spectrum_g1(&s, theta).spectral_radius();
                assert!(dense.spectral_radius() <= g1_radius + 1e-8);
                if theta >= theta_star {
                    assert!((dense.spectral_radius() - g1_radius).abs() < 1e-8, "{method} seed {seed} theta {theta}");
                }
            }
        }
    }
}

#[test]
fn dual_first_scheme_shares_gauss_seidel_spectrum() {
    for seed in 0..4u64 {
        let p = common::seeded(seed, 4, 6);
        let s = SpectralInfo::from_problem(&p).unwrap();
        let upper = admissible_upper(RateFamily::GaussSeidel, s.sigma1(), s.lambda_n());
        for k in 1..=5 {
            let theta = upper * k as f64 / 6.0;
            let dense = eigenvalues_dense(&probe_iteration_matrix(&p, Method::Nqtz, theta).unwrap()).unwrap();
            let gap = spectrum_g3(&s, theta).match_distance(&dense).unwrap();
            assert!(gap < 1e-8, "seed {seed} theta {theta}: {gap}");
        }
    }
}
