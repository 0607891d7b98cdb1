//! Quick invariant checks over every module, used by `specmom selfcheck`.

use serde::Serialize;

use crate::analysis::{boundedness_scan, ellipse_minmax_bounds, ellipse_upper_bound, EllipseSpec};
use crate::eigensolve::{
    contraction_constant, contraction_threshold, dr_drho, rate_from_ratio, ratio_from_rate,
    relative_error, static_momentum, SolverConfig,
};
use crate::matio::{parse_matrix_market, toy_matrix, write_matrix_market};
use crate::polyfam::{dominant_root, eval_family, growth_rate};
use crate::region::{curve_derivative, cusps};
use crate::walk_approx::{alpha_coeffs, approximate_with, azuma_tail, walk_distribution};
use crate::{prob, Complex, ProbVector};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> CheckResult {
    match f() {
        Ok(detail) => CheckResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckResult {
            name,
            passed: false,
            detail,
        },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn laws() -> Vec<(&'static str, ProbVector)> {
    [
        "dynamic2",
        "dynamic3",
        "dynamic4",
        "dynamic5",
        "dynamic2-3",
        "dynamic2-4",
    ]
    .into_iter()
    .map(|n| (n, prob::named(n).expect("built-in law")))
    .collect()
}

pub fn run() -> Vec<CheckResult> {
    vec![
        check("variance table", || {
            let expect = [2.0, 1.0, 2.0 / 3.0, 0.5, 4.0 / 3.0, 1.0];
            for ((name, p), e) in laws().into_iter().zip(expect) {
                let got = 2.0 / p.variance();
                ensure((got - e).abs() < 1e-12, || {
                    format!("{name}: 2/sigma^2 = {got}, expected {e}")
                })?;
            }
            Ok("6 laws".into())
        }),
        check("family at 1", || {
            for (name, p) in laws() {
                let v = eval_family(&p, Complex::new(1.0, 0.0), 500).map_err(|e| e.to_string())?;
                let worst = v
                    .values
                    .iter()
                    .map(|x| (x - 1.0).norm())
                    .fold(0.0, f64::max);
                ensure(worst < 1e-9, || {
                    format!("{name}: |P_n(1) - 1| up to {worst:e}")
                })?;
            }
            Ok("P_n(1) = 1 for n <= 500".into())
        }),
        check("cusps", || {
            let expect = [2usize, 3, 4, 5, 1, 2];
            for ((name, p), e) in laws().into_iter().zip(expect) {
                let cs = cusps(&p);
                ensure(cs.count == e, || {
                    format!("{name}: {} cusps, expected {e}", cs.count)
                })?;
                for t in cs.parameters() {
                    let d = curve_derivative(&p, t).norm();
                    ensure(d < 1e-10, || format!("{name}: |z'| = {d:e} at a cusp"))?;
                }
            }
            Ok("counts and derivatives".into())
        }),
        check("root growth bound", || {
            for (name, p) in laws() {
                for eps in [1e-6, 1e-4, 1e-2, 0.3] {
                    let r = dominant_root(&p, Complex::new(1.0 + eps, 0.0))
                        .map_err(|e| e.to_string())?;
                    ensure(r.re >= growth_rate(&p, eps), || {
                        format!("{name}: eps={eps} root {r}")
                    })?;
                }
            }
            Ok("dominant root exceeds 1 + sqrt(2 eps)/sigma".into())
        }),
        check("walk reconstruction", || {
            for (name, p) in laws() {
                let d = walk_distribution(&p, 40);
                ensure(
                    (d.total() - 1.0).abs() < 1e-12 && d.mean().abs() < 1e-12,
                    || format!("{name}: distribution invariants"),
                )?;
                let coeffs = alpha_coeffs(&p, 40);
                let z = Complex::new(0.3, 0.1);
                let full = approximate_with(&coeffs, &p, z, 1e9).map_err(|e| e.to_string())?;
                let err = (full.approx - z.powi(40)).norm();
                ensure(err < 1e-9, || {
                    format!("{name}: reconstruction error {err:e}")
                })?;
                for t in [1.0, 2.0, 3.0] {
                    let deg = (t * 40f64.sqrt()) as usize;
                    ensure(coeffs.tail_mass(deg) <= azuma_tail(p.order(), t), || {
                        format!("{name}: tail above Azuma at t={t}")
                    })?;
                }
            }
            Ok("sum alpha_k P_k(z) = z^40".into())
        }),
        check("rate maps", || {
            for s in [0.5, 1.0, 2.0, 4.0] {
                for i in 1..=100 {
                    let r = i as f64 / 100.0;
                    let back = ratio_from_rate(s, rate_from_ratio(s, r));
                    ensure((back - r).abs() < 1e-12, || {
                        format!("sigma^2={s}: r={r} -> {back}")
                    })?;
                }
                let rho1 = contraction_threshold(s) + 0.01;
                let c = contraction_constant(s, rho1);
                for i in 0..=50 {
                    let rho = rho1 + (1.0 - rho1) * i as f64 / 50.0;
                    let d = dr_drho(s, rho);
                    ensure((0.0..=c).contains(&d) && c < 1.0, || {
                        format!("sigma^2={s}: dr/drho={d} at {rho}")
                    })?;
                }
            }
            Ok("round trip and contraction".into())
        }),
        check("boundedness", || {
            let cheb = boundedness_scan(&prob::named("chebyshev").expect("built-in"), 200, 256)
                .map_err(|e| e.to_string())?;
            ensure((cheb - 1.0).abs() < 1e-9, || {
                format!("Chebyshev scan {cheb}")
            })?;
            let delt = boundedness_scan(&prob::named("deltoid").expect("built-in"), 200, 256)
                .map_err(|e| e.to_string())?;
            ensure(delt.is_finite(), || "deltoid scan not finite".into())?;
            Ok(format!("Chebyshev {cheb:.12}, deltoid {delt:.6}"))
        }),
        check("ellipse bounds", || {
            for i in 1..40 {
                let rho = 1.0 + i as f64 / 13.0;
                let eps = i as f64 / 41.0;
                let n = i;
                let b = ellipse_minmax_bounds(rho, Complex::new(1.0 + eps, 0.0), n)
                    .map_err(|e| e.to_string())?;
                let up = ellipse_upper_bound(EllipseSpec::Rho(rho).delta(), eps, n)
                    .map_err(|e| e.to_string())?;
                ensure(b.lower <= b.upper && b.upper <= up, || {
                    format!("rho={rho} eps={eps} n={n}")
                })?;
            }
            Ok("lower <= upper <= (1 + 3 eps / (2 delta))^n".into())
        }),
        check("toy static momentum", || {
            let p = ProbVector::hypocycloid(4).map_err(|e| e.to_string())?;
            let mut cfg = SolverConfig::new(p, 2000).with_lambda_star(1.0);
            cfg.run.record_trace = false;
            let sol = static_momentum(&toy_matrix(), None, &cfg).map_err(|e| e.to_string())?;
            let truth = [1.0, 0.0, 0.0, 0.0].map(|v| Complex::new(v, 0.0));
            let err = relative_error(&sol.x, &truth);
            ensure(err <= 1e-10, || format!("relerr {err:e}"))?;
            Ok(format!("relerr {err:.3e} after 2000 steps"))
        }),
        check("Matrix Market round trip", || {
            let a = toy_matrix();
            let back = parse_matrix_market(write_matrix_market(&a).as_bytes())
                .map_err(|e| e.to_string())?;
            ensure(back == a, || "toy matrix changed".into())?;
            Ok("toy matrix".into())
        }),
    ]
}
