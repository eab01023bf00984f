mod common;

use common::{random_point, seeded};
use ridgefp::linalg::distance;
use ridgefp::solvers::step;
use ridgefp::spectral::{admissible_upper, iteration_matrix, optimal_rate, optimal_theta};
use ridgefp::{
    complexity_factors, conditioning, iterations_to_eps, solve, IterationBound, Method, PrimalDualPoint, RateFamily,
    RidgeProblem, SolverConfig, SpectralInfo, Status, ThetaChoice,
};

/// Same data with `y = 0`: the solution is the origin, so iterates are the
/// error vectors of the original problem and shrink without a round-off floor.
fn homogeneous(p: &RidgeProblem) -> RidgeProblem {
    p.with_response(vec![0.0; p.big_n()]).unwrap()
}

fn iterate(method: Method, p: &RidgeProblem, x0: &PrimalDualPoint, theta: f64, k: usize) -> Vec<PrimalDualPoint> {
    let mut out = vec![x0.clone()];
    for _ in 0..k {
        let next = step(method, p, out.last().unwrap(), theta).unwrap();
        out.push(next);
    }
    out
}

#[test]
fn every_step_fixes_the_solution() {
    for seed in 0..10u64 {
        let p = seeded(seed, 5, 30);
        let star = p.solve_direct().unwrap();
        for method in Method::FIXED_POINT {
            for theta in [0.05, 0.5, 1.0] {
                let next = step(method, &p, &star, theta).unwrap();
                assert!(next.distance(&star) < 1e-12, "{method} seed {seed} theta {theta}: {}", next.distance(&star));
            }
        }
    }
}

#[test]
fn separable_contraction_holds_every_step() {
    for seed in 0..5u64 {
        let p = seeded(seed, 6, 40);
        let s = SpectralInfo::from_problem(&p).unwrap();
        let theta = optimal_theta(RateFamily::Separable, s.sigma1(), s.lambda_n());
        let bound = optimal_rate(RateFamily::Separable, s.sigma1(), s.lambda_n());
        let h = homogeneous(&p);
        let path = iterate(Method::Pdfp1, &h, &random_point(&p, seed), theta, 300);
        for w in path.windows(2) {
            let ratio = w[1].norm() / w[0].norm();
            assert!(ratio <= bound + 1e-10, "seed {seed}: {ratio} > {bound}");
        }
    }
}

#[test]
fn asymptotic_rates_match_theory() {
    for seed in 0..5u64 {
        let p = seeded(seed, 6, 40);
        let s = SpectralInfo::from_problem(&p).unwrap();
        let h = homogeneous(&p);
        for (method, family) in [(Method::Pdfp2, RateFamily::Coupled), (Method::Qtz, RateFamily::GaussSeidel)] {
            let theta = optimal_theta(family, s.sigma1(), s.lambda_n());
            let expected = optimal_rate(family, s.sigma1(), s.lambda_n());
            let path = iterate(method, &h, &random_point(&p, 50 + seed), theta, 200);
            let measured = (path[200].norm() / path[0].norm()).powf(1.0 / 200.0);
            let rel = (measured - expected).abs() / expected;
            assert!(rel < 0.05, "{method} seed {seed}: {measured} vs {expected}");
        }
    }
}

#[test]
fn gauss_seidel_steps_follow_the_affine_map() {
    let p = seeded(3, 4, 20);
    let s = SpectralInfo::from_problem(&p).unwrap();
    let theta = 0.5 * admissible_upper(RateFamily::GaussSeidel, s.sigma1(), s.lambda_n());
    let g3 = iteration_matrix(&p, RateFamily::GaussSeidel, theta);
    let mut x = random_point(&p, 1);
    let mut flat = x.to_flat();
    for k in 0..50 {
        x = step(Method::Qtz, &p, &x, theta).unwrap();
        flat = g3.matvec(&flat).unwrap();
        for (v, y) in flat[p.d()..].iter_mut().zip(p.y()) {
            *v += theta * y;
        }
        let gap = distance(&x.to_flat(), &flat) / x.norm();
        assert!(gap < 1e-12, "step {k}: {gap}");
    }
}

#[test]
fn beyond_admissible_range_no_contraction() {
    for seed in 0..3u64 {
        let p = seeded(seed, 4, 25);
        let s = SpectralInfo::from_problem(&p).unwrap();
        let h = homogeneous(&p);
        for method in Method::FIXED_POINT {
            let family = method.rate_family().unwrap();
            let theta = 1.01 * admissible_upper(family, s.sigma1(), s.lambda_n());
            let path = iterate(method, &h, &random_point(&p, seed + 7), theta, 500);
            let norms: Vec<f64> = path.iter().map(PrimalDualPoint::norm).collect();
            assert!(norms[500] >= norms[250], "{method} seed {seed}: {} < {}", norms[500], norms[250]);
        }
    }
}

#[test]
fn inside_admissible_range_converges() {
    let p = seeded(11, 4, 25);
    let s = SpectralInfo::from_problem(&p).unwrap();
    for method in Method::FIXED_POINT {
        let family = method.rate_family().unwrap();
        let upper = admissible_upper(family, s.sigma1(), s.lambda_n());
        for frac in [0.2, 0.5, 0.9] {
            let cfg = SolverConfig::new(method)
                .theta(ThetaChoice::Explicit(frac * upper))
                .tol(1e-9)
                .max_iter(200_000);
            let res = solve(&p, &cfg, &p.zero_point()).unwrap();
            assert_eq!(res.status, Status::Converged, "{method} at {frac} of the admissible range");
        }
    }
}

#[test]
fn gauss_seidel_beats_separable_beats_coupled() {
    for seed in 0..10u64 {
        let p = seeded(seed, 10, 50);
        let s = SpectralInfo::from_problem(&p).unwrap();
        assert!(s.sigma1().powi(2) > s.lambda_n());
        let count = |method| {
            let cfg = SolverConfig::new(method).tol(1e-8).sigma_source(ridgefp::SigmaSource::Known(s.sigma1()));
            let res = solve(&p, &cfg, &p.zero_point()).unwrap();
            assert_eq!(res.status, Status::Converged);
            res.iterations
        };
        let (q, s1, s2) = (count(Method::Qtz), count(Method::Pdfp1), count(Method::Pdfp2));
        assert!(q < s1 && s1 < s2, "seed {seed}: qtz {q}, pdfp1 {s1}, pdfp2 {s2}");
    }
}

#[test]
fn predicted_iterations_bound_separable_runs() {
    for seed in 0..10u64 {
        let p = seeded(seed, 6, 40);
        let s = SpectralInfo::from_problem(&p).unwrap();
        let star = p.solve_direct().unwrap();
        let eps = 1e-8;
        let rho = optimal_rate(RateFamily::Separable, s.sigma1(), s.lambda_n());
        let l = conditioning(&p, &s).l_smooth;
        let predicted = match iterations_to_eps(rho, l, p.zero_point().distance(&star), eps).unwrap() {
            IterationBound::Finite(k) => k as usize,
            IterationBound::Unbounded => panic!("rate below one expected"),
        };
        let cfg = SolverConfig::new(Method::Pdfp1).tol(eps);
        let res = solve(&p, &cfg, &p.zero_point()).unwrap();
        assert_eq!(res.status, Status::Converged);
        assert!(res.iterations <= predicted, "seed {seed}: {} > {predicted}", res.iterations);
        assert!(!complexity_factors(&s).regime_warning);
    }
}

#[test]
fn matched_relaxation_equivalences() {
    for seed in 0..5u64 {
        let p = seeded(seed, 10, 50);
        let run = |method, theta| {
            let cfg = SolverConfig::new(method).theta(ThetaChoice::Explicit(theta)).tol(1e-8);
            solve(&p, &cfg, &p.zero_point()).unwrap().iterations as i64
        };
        let s = SpectralInfo::from_problem(&p).unwrap();
        let t3 = optimal_theta(RateFamily::GaussSeidel, s.sigma1(), s.lambda_n());
        let t1 = optimal_theta(RateFamily::Separable, s.sigma1(), s.lambda_n());
        assert!((run(Method::Qtz, t3) - run(Method::Nqtz, t3)).abs() <= 1, "seed {seed}");
        assert!((run(Method::Mqtz, t1) - run(Method::Pdfp1, t1)).abs() <= 1, "seed {seed}");
    }
}
