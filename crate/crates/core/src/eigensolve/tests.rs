use super::*;
use crate::matio::{toy_matrix, DenseMatrix};
use proptest::prelude::*;
use rand::Rng;

fn c(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

fn e1(n: usize) -> Vector {
    let mut v = vec![c(0.0); n];
    v[0] = c(1.0);
    v
}

/// `P_N(A / lambda) v0` from the defining recurrence on vectors, unnormalized.
fn family_apply(
    a: &MatrixOperator,
    p: &ProbVector,
    lambda: f64,
    v0: &[Complex],
    n: usize,
) -> Vector {
    let m = p.order();
    let mut w: Vec<Vector> = vec![v0.to_vec()];
    for k in 1..=n {
        let prev = &w[k - 1];
        let av: Vector = a
            .matvec(prev)
            .unwrap()
            .into_iter()
            .map(|x| x / lambda)
            .collect();
        let next = if k < m {
            av
        } else {
            let mut out: Vector = av.into_iter().map(|x| x / p.p0()).collect();
            for j in 2..=m {
                let coef = p.get(j) / p.p0();
                for (o, x) in out.iter_mut().zip(&w[k - j]) {
                    *o -= x * coef;
                }
            }
            out
        };
        w.push(next);
    }
    w.pop().unwrap()
}

fn random_dense(rng: &mut ChaCha8Rng, n: usize) -> MatrixOperator {
    let mut d = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            d.set(i, j, c(rng.random_range(-1.0..1.0)));
        }
    }
    MatrixOperator::Dense(d)
}

#[test]
fn momentum_table() {
    for lam in [0.5, 1.0, 2.0] {
        let b2 = momentum_params(&ProbVector::hypocycloid(2).unwrap(), lam).beta;
        assert_eq!(b2.len(), 1);
        assert!((b2[0] - 0.25 * lam * lam).abs() < 1e-12);
        let b3 = momentum_params(&ProbVector::hypocycloid(3).unwrap(), lam).beta;
        assert_eq!(b3[0], 0.0);
        assert!((b3[1] - 4.0 / 27.0 * lam.powi(3)).abs() < 1e-12);
        let b4 = momentum_params(&ProbVector::hypocycloid(4).unwrap(), lam).beta;
        assert!((b4[2] - 27.0 / 256.0 * lam.powi(4)).abs() < 1e-12);
    }
}

#[test]
fn power_identity() {
    let a = MatrixOperator::Dense(DenseMatrix::identity(3));
    let v0 = vec![c(3.0), c(0.0), c(4.0)];
    let sol = power_iterate(&a, Some(&v0), &RunOptions::new(5)).unwrap();
    assert_eq!(sol.x, vec![c(0.6), c(0.0), c(0.8)]);
    assert!((sol.trace.h0 - 5.0).abs() < 1e-15);
    assert!(sol.trace.records.iter().all(|r| r.d == 0.0));
    assert_eq!(sol.status, Termination::Completed);
}

#[test]
fn power_diagonal_closed_form() {
    let a = MatrixOperator::diagonal_real(&[2.0, 1.0]);
    let opts = RunOptions::new(30).with_truth(vec![c(1.0), c(0.0)]);
    let sol = power_iterate(&a, Some(&[c(1.0), c(1.0)]), &opts).unwrap();
    for rec in &sol.trace.records {
        // x_{k+1} is proportional to (2^{k+1}, 1)
        let t = 0.5f64.powi(rec.k as i32 + 1);
        assert!((rec.relerr.unwrap() - t / (1.0 + t * t).sqrt()).abs() < 1e-14);
    }
    assert!((sol.eigenvalue - c(2.0)).norm() < 1e-12);
}

#[test]
fn power_toy_ratio() {
    let sol = power_iterate(&toy_matrix(), None, &RunOptions::new(3000).with_seed(1)).unwrap();
    let d: Vec<f64> = sol.trace.records.iter().map(|r| r.d).collect();
    let ratio = d[2999] / d[2998];
    assert!((ratio - 1.0 / 1.01).abs() < 1e-6);
}

#[test]
fn rejects_bad_input() {
    let a = MatrixOperator::diagonal_real(&[2.0, 1.0]);
    assert!(matches!(
        power_iterate(&a, Some(&[c(0.0), c(0.0)]), &RunOptions::new(3)),
        Err(Error::ZeroVector { iteration: 0 })
    ));
    assert!(matches!(
        power_iterate(&a, Some(&[c(1.0)]), &RunOptions::new(3)),
        Err(Error::DimensionMismatch { .. })
    ));
    let p = ProbVector::hypocycloid(4).unwrap();
    assert!(static_momentum(&a, None, &SolverConfig::new(p.clone(), 10)).is_err());
    assert!(static_momentum(
        &a,
        None,
        &SolverConfig::new(p.clone(), 3).with_lambda_star(1.0)
    )
    .is_err());
    assert!(static_momentum(&a, None, &SolverConfig::new(p, 10).with_lambda_star(-1.0)).is_err());
    // the zero matrix annihilates every start
    let z = MatrixOperator::diagonal_real(&[0.0, 0.0]);
    assert!(matches!(
        power_iterate(&z, None, &RunOptions::new(3)),
        Err(Error::ZeroVector { iteration: 1 })
    ));
}

#[test]
fn static_matches_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let laws = [
        "1/2,0,1/2",
        "2/3,0,0,1/3",
        "3/4,0,0,0,1/4",
        "7/12,0,1/4,1/6",
        "5/8,0,1/4,0,1/8",
    ];
    for (i, law) in laws.iter().enumerate() {
        let p: ProbVector = law.parse().unwrap();
        for trial in 0..4 {
            let n = 4 + 3 * trial;
            let a = random_dense(&mut rng, n);
            let v0 = random_start(n, i as u64 * 10 + trial as u64);
            let lambda = rng.random_range(0.3..1.5);
            let iters = 12 + 6 * trial;
            let cfg = SolverConfig::new(p.clone(), iters).with_lambda_star(lambda);
            let sol = static_momentum(&a, Some(&v0), &cfg).unwrap();
            let w = family_apply(&a, &p, lambda, &v0, iters);
            assert!(relative_error(&sol.x, &w) < 1e-8, "{law} n={n}");
        }
    }
}

#[test]
fn iterates_stay_unit_norm() {
    let a = toy_matrix();
    let p = ProbVector::hypocycloid(4).unwrap();
    let mut cfg = SolverConfig::new(p, 200).with_lambda_star(1.0);
    cfg.run.record_trace = true;
    let mut run = Runner::start(&a, None, &cfg.run, 4).unwrap();
    let beta = momentum_params(&cfg.prob, 1.0).beta;
    warm_up(&mut run, cfg.prob.p0(), 4).unwrap();
    for k in 3..200 {
        let (v, nu, d) = run.apply().unwrap();
        let u = run.momentum_update(v, &beta);
        run.push(k, u, nu, d, None, None, Vec::new()).unwrap();
        assert!((norm(run.current()) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn static_toy_rate() {
    let truth = e1(4);
    let p = ProbVector::hypocycloid(4).unwrap();
    let mut cfg = SolverConfig::new(p, 2000).with_lambda_star(1.0);
    cfg.run = cfg.run.with_truth(truth).with_seed(3);
    let sol = static_momentum(&toy_matrix(), None, &cfg).unwrap();
    let e: Vec<f64> = sol
        .trace
        .records
        .iter()
        .map(|r| r.relerr.unwrap())
        .collect();
    let (a, b) = (400, 800);
    let ratio = (e[b] / e[a]).powf(1.0 / (b - a) as f64);
    let predicted = predicted_decay(3.0, 0.01);
    assert!(
        (ratio - predicted).abs() < 0.01,
        "ratio {ratio} vs {predicted}"
    );
}

#[test]
fn chebyshev_fails_on_toy() {
    let p = ProbVector::hypocycloid(2).unwrap();
    let mut cfg = SolverConfig::new(p, 2000).with_lambda_star(1.0);
    cfg.run = cfg.run.with_truth(e1(4)).with_seed(3);
    let sol = static_momentum(&toy_matrix(), None, &cfg).unwrap();
    assert!(sol.trace.records.iter().all(|r| r.relerr.unwrap() > 1e-2));
}

#[test]
fn dynamic_converges_on_toy() {
    for law in ["3/4,0,0,0,1/4", "4/5,0,0,0,0,1/5", "5/8,0,1/4,0,1/8"] {
        let p: ProbVector = law.parse().unwrap();
        let mut cfg = SolverConfig::new(p, 1000);
        cfg.run = cfg.run.with_truth(e1(4)).with_seed(3);
        let sol = dynamic_momentum(&toy_matrix(), None, &cfg).unwrap();
        assert!(sol.final_relerr().unwrap() <= 1e-10, "{law}");
        let power = power_iterate(&toy_matrix(), None, &cfg.run).unwrap();
        assert!(power.final_relerr().unwrap() > 1e-6);
        // the gap estimate settles near lambda_2 / lambda_1
        let r = sol.trace.records.last().unwrap().r.unwrap();
        assert!((r - 1.0 / 1.01).abs() < 1e-3, "{law}: r = {r}");
    }
}

#[test]
fn dynamic_stalls_when_imaginary_pair_escapes() {
    // i/2 lies outside lambda_* Gamma for these laws, and the iteration
    // locks onto rho = 1 where the imaginary pair grows as fast as lambda_1
    for law in ["1/2,0,1/2", "2/3,0,0,1/3", "7/12,0,1/4,1/6"] {
        let p: ProbVector = law.parse().unwrap();
        let mut cfg = SolverConfig::new(p, 2000);
        cfg.run = cfg.run.with_truth(e1(4)).with_seed(3);
        let sol = dynamic_momentum(&toy_matrix(), None, &cfg).unwrap();
        assert!(sol.final_relerr().unwrap() > 1e-2, "{law}");
        assert!(sol.trace.records.last().unwrap().r.unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn dynamic_recovers_gap_ratio() {
    let a = MatrixOperator::diagonal_real(&[2.0, 1.0]);
    for (law, tol) in [
        ("1/2,0,1/2", 0.01),
        ("3/4,0,0,0,1/4", 0.025),
        ("7/12,0,1/4,1/6", 0.01),
        ("5/8,0,1/4,0,1/8", 0.01),
    ] {
        let mut cfg = SolverConfig::new(law.parse().unwrap(), 120);
        cfg.rho_floor = false;
        let sol = dynamic_momentum(&a, Some(&[c(1.0), c(1.0)]), &cfg).unwrap();
        let tail: Vec<f64> = sol
            .trace
            .records
            .iter()
            .rev()
            .take(10)
            .map(|r| r.r.unwrap())
            .collect();
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        assert!((mean - 0.5).abs() < tol, "{law}: r = {mean}");
    }
}

#[test]
fn floor_keeps_gap_estimate_high() {
    // with the floor on, r never drops below r(threshold)
    let a = MatrixOperator::diagonal_real(&[2.0, 1.0]);
    let p = ProbVector::hypocycloid(2).unwrap();
    let min_r = ratio_from_rate(1.0, contraction_threshold(1.0) + 1e-6);
    let sol = dynamic_momentum(&a, Some(&[c(1.0), c(1.0)]), &SolverConfig::new(p, 60)).unwrap();
    assert!(sol
        .trace
        .records
        .iter()
        .filter_map(|r| r.r)
        .all(|r| r >= min_r - 1e-12));
}

#[test]
fn dynamic_floor_bounds_rho() {
    let a = MatrixOperator::diagonal_real(&[2.0, 1.0]);
    let p = ProbVector::hypocycloid(3).unwrap();
    let floor = contraction_threshold(p.variance());
    let sol = dynamic_momentum(&a, Some(&[c(1.0), c(1.0)]), &SolverConfig::new(p, 40)).unwrap();
    for rec in &sol.trace.records {
        if let (Some(rho), Some(r)) = (rec.rho, rec.r) {
            assert!(rho > floor && rho <= 1.0);
            assert!(r > 0.0 && r <= 1.0);
        }
    }
}

#[test]
fn dynamic_stalls_on_exact_eigenvector() {
    let a = MatrixOperator::diagonal_real(&[2.0, 1.0]);
    let sol = dynamic_momentum(
        &a,
        Some(&[c(1.0), c(0.0)]),
        &SolverConfig::new(ProbVector::hypocycloid(2).unwrap(), 10),
    )
    .unwrap();
    assert_eq!(sol.status, Termination::Stalled);
    assert_eq!(sol.x, vec![c(1.0), c(0.0)]);
}

#[test]
fn tolerance_stops_early() {
    let a = MatrixOperator::diagonal_real(&[2.0, 1.0]);
    let opts = RunOptions::new(100).with_tolerance(1e-6);
    let sol = power_iterate(&a, Some(&[c(1.0), c(1.0)]), &opts).unwrap();
    assert_eq!(sol.status, Termination::Converged);
    assert!(sol.iterations < 30);
    assert_eq!(sol.iterations_to(1e-6), Some(sol.iterations));
}

#[test]
fn relative_error_examples() {
    let x = vec![c(1.0), Complex::new(0.5, -2.0)];
    assert_eq!(relative_error(&x, &x), 0.0);
    let scaled: Vector = x.iter().map(|v| v * Complex::new(-0.3, 1.7)).collect();
    assert!(relative_error(&scaled, &x) < 1e-15);
    assert!((relative_error(&[c(0.0), c(1.0)], &[c(3.0), c(0.0)]) - 1.0).abs() < 1e-15);
}

#[test]
fn random_start_is_reproducible() {
    let a = random_start(50, 7);
    assert_eq!(a, random_start(50, 7));
    assert_ne!(a, random_start(50, 8));
    assert!((norm(&a) - 1.0).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn static_equivalence_property(seed in 0u64..10_000, n in 2usize..=16, iters in 6usize..=30, lambda in 0.2f64..2.0, law in 0usize..4) {
        let laws = ["1/2,0,1/2", "2/3,0,0,1/3", "7/12,0,1/4,1/6", "5/8,0,1/4,0,1/8"];
        let p: ProbVector = laws[law].parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_dense(&mut rng, n);
        let v0 = random_start(n, seed + 1);
        let sol = static_momentum(&a, Some(&v0), &SolverConfig::new(p.clone(), iters).with_lambda_star(lambda)).unwrap();
        let w = family_apply(&a, &p, lambda, &v0, iters);
        prop_assert!(relative_error(&sol.x, &w) < 1e-8);
        prop_assert!((norm(&sol.x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_identity(r in 0.01f64..=1.0, sigma2 in 0.25f64..10.0) {
        prop_assert!((ratio_from_rate(sigma2, rate_from_ratio(sigma2, r)) - r).abs() < 1e-12);
    }
}
