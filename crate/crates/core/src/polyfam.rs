//! The polynomial family `P_n(z)` attached to a [`ProbVector`].
//!
//! `P_k(z) = z^k` for `k < m`, then
//!
//! ```text
//! P_{k+1}(z) = (z / p0) P_k(z) - sum_{j=2..m} (p_j / p0) P_{k+1-j}(z)
//! ```
//!
//! For fixed `z` this is an `m`-th order linear recurrence with
//! characteristic polynomial `Q_z(r) = r^m - (z/p0) r^{m-1} + sum_j (p_j/p0) r^{m-j}`.
//! Its roots satisfy `z = psi(r) = sum_j p_j r^{1-j}`; the boundary of the
//! stability region is `psi` of the unit circle.

use std::collections::VecDeque;

use serde::Serialize;

use crate::{Complex, Error, ProbVector, Result};

/// Magnitude past which family evaluation reports [`Error::Overflow`].
pub const OVERFLOW_LIMIT: f64 = 1e300;

/// Residual target for [`char_roots`].
pub const ROOT_RESIDUAL_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 500;

fn check_finite(z: Complex, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Streaming evaluation of `P_0(z), P_1(z), ...` keeping only the last `m`
/// values.
#[derive(Debug, Clone)]
pub struct FamilyIter<'a> {
    prob: &'a ProbVector,
    z: Complex,
    next_index: usize,
    // window[0] is the newest value
    window: VecDeque<Complex>,
}

impl<'a> FamilyIter<'a> {
    pub fn new(prob: &'a ProbVector, z: Complex) -> Self {
        Self {
            prob,
            z,
            next_index: 0,
            window: VecDeque::with_capacity(prob.order() + 1),
        }
    }
}

impl Iterator for FamilyIter<'_> {
    type Item = Complex;

    fn next(&mut self) -> Option<Complex> {
        let m = self.prob.order();
        let k = self.next_index;
        let value = if k == 0 {
            Complex::new(1.0, 0.0)
        } else if k < m {
            self.window[0] * self.z
        } else {
            let p0 = self.prob.p0();
            let mut acc = self.window[0] * (self.z / p0);
            // window[j - 1] holds P_{k-j}
            for j in 2..=m {
                let pj = self.prob.get(j);
                if pj != 0.0 {
                    acc -= self.window[j - 1] * (pj / p0);
                }
            }
            acc
        };
        self.window.push_front(value);
        self.window.truncate(m);
        self.next_index += 1;
        Some(value)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyEval {
    pub prob: ProbVector,
    pub point: Complex,
    pub values: Vec<Complex>,
}

fn collect_checked(iter: impl Iterator<Item = Complex>, n: usize) -> Result<Vec<Complex>> {
    let mut values = Vec::with_capacity(n + 1);
    for (index, v) in iter.take(n + 1).enumerate() {
        if v.norm().is_nan() || v.norm() > OVERFLOW_LIMIT {
            return Err(Error::Overflow { index });
        }
        values.push(v);
    }
    Ok(values)
}

/// `P_0(z), ..., P_n(z)`.
pub fn eval_family(p: &ProbVector, z: Complex, n: usize) -> Result<FamilyEval> {
    check_finite(z, "z")?;
    let values = collect_checked(FamilyIter::new(p, z), n)?;
    Ok(FamilyEval {
        prob: p.clone(),
        point: z,
        values,
    })
}

/// Monic rescaling `~P_k(z) = (lambda* p0)^k P_k(z / lambda*)`, evaluated with
/// its own recurrence `~P_{k+1} = z ~P_k - sum_{j>=2} beta_{j-1} ~P_{k+1-j}`
/// from `~P_k(z) = p0^k z^k` for `k < m`.
pub fn eval_monic(p: &ProbVector, lambda_star: f64, z: Complex, n: usize) -> Result<FamilyEval> {
    check_finite(z, "z")?;
    if !(lambda_star > 0.0 && lambda_star.is_finite()) {
        return Err(Error::DomainError(format!(
            "lambda_star must be positive, got {lambda_star}"
        )));
    }
    let m = p.order();
    let p0 = p.p0();
    // beta[j - 1] = p_j p0^{j-1} lambda*^j
    let beta: Vec<f64> = (2..=m)
        .map(|j| p.get(j) * p0.powi(j as i32 - 1) * lambda_star.powi(j as i32))
        .collect();

    let mut values: Vec<Complex> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let v = if k == 0 {
            Complex::new(1.0, 0.0)
        } else if k < m {
            values[k - 1] * z * p0
        } else {
            let mut acc = values[k - 1] * z;
            for j in 2..=m {
                if beta[j - 2] != 0.0 {
                    acc -= values[k - j] * beta[j - 2];
                }
            }
            acc
        };
        if v.norm().is_nan() || v.norm() > OVERFLOW_LIMIT {
            return Err(Error::Overflow { index: k });
        }
        values.push(v);
    }
    Ok(FamilyEval {
        prob: p.clone(),
        point: z,
        values,
    })
}

/// Monic characteristic polynomial, coefficients by descending power.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharPoly {
    pub point: Complex,
    /// `coefficients[i]` multiplies `r^{m-i}`.
    pub coefficients: Vec<Complex>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, r: Complex) -> Complex {
        self.coefficients
            .iter()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * r + c)
    }

    /// Value and first derivative.
    pub fn eval_with_derivative(&self, r: Complex) -> (Complex, Complex) {
        let mut q = Complex::new(0.0, 0.0);
        let mut dq = Complex::new(0.0, 0.0);
        for &c in &self.coefficients {
            dq = dq * r + q;
            q = q * r + c;
        }
        (q, dq)
    }

    /// Coefficients of the `order`-th derivative, same layout.
    pub fn derivative(&self, order: usize) -> CharPoly {
        let mut coeffs = self.coefficients.clone();
        for _ in 0..order {
            let deg = coeffs.len() - 1;
            if deg == 0 {
                coeffs = vec![Complex::new(0.0, 0.0)];
                break;
            }
            coeffs = coeffs[..deg]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (deg - i) as f64)
                .collect();
        }
        CharPoly {
            point: self.point,
            coefficients: coeffs,
        }
    }

    /// `|Q(r)| / max(1, |r|^m)`, the residual scaled to the size of the
    /// leading term so that it is meaningful for large roots.
    pub fn scaled_residual(&self, r: Complex) -> f64 {
        let scale = r.norm().powi(self.degree() as i32).max(1.0);
        self.eval(r).norm() / scale
    }
}

pub fn char_poly(p: &ProbVector, z: Complex) -> CharPoly {
    let m = p.order();
    let p0 = p.p0();
    let mut coefficients = Vec::with_capacity(m + 1);
    coefficients.push(Complex::new(1.0, 0.0));
    coefficients.push(-z / p0);
    for j in 2..=m {
        coefficients.push(Complex::new(p.get(j) / p0, 0.0));
    }
    CharPoly {
        point: z,
        coefficients,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSet {
    pub roots: Vec<Complex>,
    /// Largest [`CharPoly::scaled_residual`] over the roots.
    pub residual: f64,
}

impl RootSet {
    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }
}

fn newton_polish(q: &CharPoly, mut r: Complex, steps: usize) -> Complex {
    let mut best = (q.eval(r).norm(), r);
    for _ in 0..steps {
        let (v, dv) = q.eval_with_derivative(r);
        if v.norm() == 0.0 || dv.norm() == 0.0 {
            break;
        }
        r -= v / dv;
        if !(r.re.is_finite() && r.im.is_finite()) {
            break;
        }
        let res = q.eval(r).norm();
        if res < best.0 {
            best = (res, r);
        } else {
            break;
        }
    }
    best.1
}

/// Roots that agree to about the square root of machine precision are a
/// numerically multiple root. Their mean is refined as a simple root of the
/// `(k-1)`-th derivative, which is well conditioned, and replaces the whole
/// cluster when it also annihilates `Q`.
fn merge_clusters(q: &CharPoly, roots: &mut [Complex]) {
    let n = roots.len();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let scale = roots[i].norm().max(1.0);
        let members: Vec<usize> = (i..n)
            .filter(|&j| !assigned[j] && (roots[j] - roots[i]).norm() <= 1e-6 * scale)
            .collect();
        if members.len() < 2 {
            continue;
        }
        let k = members.len();
        let mean = members.iter().map(|&j| roots[j]).sum::<Complex>() / k as f64;
        let dq = q.derivative(k - 1);
        let mut c = mean;
        for _ in 0..50 {
            let (v, dv) = dq.eval_with_derivative(c);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            c -= step;
            if step.norm() <= 1e-17 * scale {
                break;
            }
        }
        let spread = members
            .iter()
            .map(|&j| (roots[j] - mean).norm())
            .fold(0.0, f64::max);
        if (c - mean).norm() <= 2.0 * spread + 1e-12 * scale
            && q.scaled_residual(c) <= q.scaled_residual(mean).max(1e-14)
        {
            for &j in &members {
                roots[j] = c;
                assigned[j] = true;
            }
        }
    }
}

/// All `m` roots of `Q_z`: Durand-Kerner sweeps from a rotated circle of
/// starting points, Newton polish, then multiple-root clean-up.
pub fn char_roots(p: &ProbVector, z: Complex) -> Result<RootSet> {
    check_finite(z, "z")?;
    let q = char_poly(p, z);
    let m = q.degree();

    // Fujiwara-style bound on root moduli sets the starting radius
    let bound = q.coefficients[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c.norm().powf(1.0 / (i + 1) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let radius = bound.clamp(0.5, 1e6);
    let mut roots: Vec<Complex> = (0..m)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4;
            Complex::from_polar(radius * (1.0 + 0.01 * k as f64), theta)
        })
        .collect();

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut max_step: f64 = 0.0;
        for i in 0..m {
            let ri = roots[i];
            let mut denom = Complex::new(1.0, 0.0);
            for (j, &rj) in roots.iter().enumerate() {
                if j != i {
                    denom *= ri - rj;
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex::new(1e-14, 1e-14);
            }
            let step = q.eval(ri) / denom;
            if step.re.is_finite() && step.im.is_finite() {
                roots[i] = ri - step;
                max_step = max_step.max(step.norm() / ri.norm().max(1.0));
            }
        }
        if max_step <= 1e-15 {
            break;
        }
    }

    for r in roots.iter_mut() {
        *r = newton_polish(&q, *r, 8);
    }
    merge_clusters(&q, &mut roots);

    let residual = roots
        .iter()
        .map(|&r| q.scaled_residual(r))
        .fold(0.0, f64::max);
    if residual.is_nan() || residual > ROOT_RESIDUAL_TOL {
        return Err(Error::NoConvergence { residual });
    }
    Ok(RootSet { roots, residual })
}

/// Root of largest modulus; ties go to the larger real part, then the larger
/// imaginary part.
pub fn dominant_root(p: &ProbVector, z: Complex) -> Result<Complex> {
    let set = char_roots(p, z)?;
    Ok(pick_dominant(&set.roots))
}

pub(crate) fn pick_dominant(roots: &[Complex]) -> Complex {
    let mut best = roots[0];
    for &r in &roots[1..] {
        let (a, b) = (r.norm(), best.norm());
        let tie = (a - b).abs() <= 1e-12 * b.max(1.0);
        let better = if tie {
            r.re > best.re || (r.re == best.re && r.im > best.im)
        } else {
            a > b
        };
        if better {
            best = r;
        }
    }
    best
}

/// `psi(r) = sum_j p_j r^{1-j}`, the exterior map of the stability region.
pub fn psi(p: &ProbVector, r: Complex) -> Result<Complex> {
    check_finite(r, "r")?;
    if r.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let inv = r.inv();
    let mut power = r; // r^{1-j} starting at j = 0
    let mut acc = Complex::new(0.0, 0.0);
    for &pj in p.entries() {
        acc += power * pj;
        power *= inv;
    }
    Ok(acc)
}

/// Rate factor `(1 + sqrt(2 eps) / sigma)^n` of the growth lower bound past 1.
pub fn growth_lower_bound(p: &ProbVector, eps: f64, n: usize) -> f64 {
    growth_rate(p, eps).powi(n as i32)
}

/// Per-step factor `1 + sqrt(2 eps) / sigma`.
pub fn growth_rate(p: &ProbVector, eps: f64) -> f64 {
    1.0 + (2.0 * eps).sqrt() / p.sigma()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn deltoid() -> ProbVector {
        ProbVector::hypocycloid(3).unwrap()
    }

    fn cheb() -> ProbVector {
        ProbVector::hypocycloid(2).unwrap()
    }

    fn sample_laws() -> Vec<ProbVector> {
        let mut v: Vec<ProbVector> = (2..=6)
            .map(|m| ProbVector::hypocycloid(m).unwrap())
            .collect();
        v.push("7/12,0,1/4,1/6".parse().unwrap());
        v.push("5/8,0,1/4,0,1/8".parse().unwrap());
        v
    }

    #[test]
    fn deltoid_third_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let f = eval_family(&deltoid(), z, 3).unwrap();
            let expect = z.powi(3) * 1.5 - 0.5;
            assert!((f.values[3] - expect).norm() < 1e-12);
            assert!((f.values[2] - z * z).norm() < 1e-14);
        }
    }

    #[test]
    fn fixed_point_at_one() {
        for p in sample_laws() {
            let f = eval_family(&p, c(1.0, 0.0), 1000).unwrap();
            for v in &f.values {
                assert!((v - c(1.0, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn chebyshev_matches_cosines() {
        for &theta in &[0.1, 0.7, 1.3, 2.9] {
            let f = eval_family(&cheb(), c(f64::cos(theta), 0.0), 200).unwrap();
            for (k, v) in f.values.iter().enumerate() {
                assert!((v.re - (k as f64 * theta).cos()).abs() < 1e-9, "k={k}");
                assert!(v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn recurrence_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in sample_laws() {
            let m = p.order();
            for _ in 0..10 {
                let z = c(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2));
                let vals = eval_family(&p, z, 120).unwrap().values;
                for k in (m - 1)..120 {
                    let lhs: Complex = (0..=m).map(|j| vals[k + 1 - j] * p.get(j)).sum();
                    let rhs = z * vals[k];
                    let scale = lhs.norm().max(rhs.norm()).max(1.0);
                    assert!((lhs - rhs).norm() <= 1e-10 * scale);
                }
            }
        }
    }

    #[test]
    fn overflow_reported() {
        let err = eval_family(&deltoid(), c(50.0, 0.0), 1000).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
        assert!(matches!(
            eval_family(&deltoid(), c(f64::NAN, 0.0), 3),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn monic_initial_values() {
        let f = eval_monic(&cheb(), 2.0, c(0.3, 0.4), 1).unwrap();
        assert!((f.values[1] - c(0.15, 0.2)).norm() < 1e-15);
        assert!(eval_monic(&cheb(), 0.0, c(1.0, 0.0), 3).is_err());
    }

    /// Coefficients of P_n by expanding the recurrence on coefficient vectors.
    fn expand_coefficients(p: &ProbVector, n: usize) -> Vec<Vec<f64>> {
        let m = p.order();
        let mut polys: Vec<Vec<f64>> = Vec::new();
        for k in 0..=n {
            let poly = if k < m {
                let mut v = vec![0.0; k + 1];
                v[k] = 1.0;
                v
            } else {
                let mut v = vec![0.0; k + 1];
                for (i, a) in polys[k - 1].iter().enumerate() {
                    v[i + 1] += a / p.p0();
                }
                for j in 2..=m {
                    for (i, a) in polys[k - j].iter().enumerate() {
                        v[i] -= p.get(j) / p.p0() * a;
                    }
                }
                v
            };
            polys.push(poly);
        }
        polys
    }

    #[test]
    fn monic_leading_coefficient() {
        for p in sample_laws() {
            for &lambda in &[0.5, 1.0, 1.7] {
                let coeffs = expand_coefficients(&p, 8);
                for (n, row) in coeffs.iter().enumerate().take(9) {
                    // the step is monic, so the leading coefficient stays at
                    // the p0^{m-1} reached by the initial values
                    let expect = p.p0().powi(n.min(p.order() - 1) as i32);
                    let lead = (lambda * p.p0()).powi(n as i32) * row[n] / lambda.powi(n as i32);
                    assert!((lead - expect).abs() < 1e-12);
                    let z = c(1e6, 0.0);
                    let v = eval_monic(&p, lambda, z, n).unwrap().values[n];
                    assert!((v / z.powi(n as i32) / expect - 1.0).norm() < 1e-4, "n={n}");
                }
            }
        }
    }

    #[test]
    fn monic_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in sample_laws() {
            let lambda = rng.random_range(0.5..2.0);
            let w = c(rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8));
            let base = eval_family(&p, w, 50).unwrap().values;
            let monic = eval_monic(&p, lambda, w * lambda, 50).unwrap().values;
            for n in 0..=50 {
                let expect = base[n] * (lambda * p.p0()).powi(n as i32);
                assert!((monic[n] - expect).norm() <= 1e-9 * expect.norm().max(1e-300) + 1e-300);
            }
        }
    }

    #[test]
    fn char_poly_examples() {
        let z = c(0.3, -0.2);
        let q = char_poly(&cheb(), z);
        assert_eq!(q.coefficients, vec![c(1.0, 0.0), -z * 2.0, c(1.0, 0.0)]);
        let q = char_poly(&deltoid(), c(0.0, 0.0));
        assert_eq!(q.coefficients.len(), 4);
        assert!((q.coefficients[3] - c(0.5, 0.0)).norm() < 1e-15);
        assert!(q.coefficients[1].norm() == 0.0 && q.coefficients[2].norm() == 0.0);
        // (4/3) = 1/p0 and 1/3 = p4/p0 for the astroid law
        let q = char_poly(&ProbVector::hypocycloid(4).unwrap(), c(1.0, 0.0));
        let expect = [1.0, -4.0 / 3.0, 0.0, 0.0, 1.0 / 3.0];
        for (a, b) in q.coefficients.iter().zip(expect) {
            assert!((a - c(b, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn chebyshev_roots_at_five() {
        let set = char_roots(&cheb(), c(5.0, 0.0)).unwrap();
        let mut re: Vec<f64> = set.roots.iter().map(|r| r.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] - (5.0 - 24f64.sqrt())).abs() < 1e-12);
        assert!((re[1] - (5.0 + 24f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn deltoid_roots_at_zero() {
        let set = char_roots(&deltoid(), c(0.0, 0.0)).unwrap();
        for r in &set.roots {
            assert!((r.powi(3) + c(0.5, 0.0)).norm() < 1e-12);
            assert!((r.norm() - 0.5f64.powf(1.0 / 3.0)).abs() < 1e-12);
        }
        // the three roots are distinct
        for i in 0..3 {
            for j in 0..i {
                assert!((set.roots[i] - set.roots[j]).norm() > 0.5);
            }
        }
    }

    #[test]
    fn roots_satisfy_exterior_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in sample_laws() {
            for _ in 0..20 {
                let z = c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
                let set = char_roots(&p, z).unwrap();
                assert_eq!(set.roots.len(), p.order());
                assert!(set.residual <= 1e-9);
                for &r in &set.roots {
                    assert!((psi(&p, r).unwrap() - z).norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn boundary_points_have_unit_root() {
        for p in sample_laws() {
            for i in 0..64 {
                let t = 2.0 * std::f64::consts::PI * (i as f64 + 0.37) / 64.0;
                let z = psi(&p, Complex::from_polar(1.0, t)).unwrap();
                let set = char_roots(&p, z).unwrap();
                let closest = set
                    .roots
                    .iter()
                    .map(|r| (r.norm() - 1.0).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(closest < 1e-6, "t={t} closest={closest}");
            }
        }
    }

    #[test]
    fn dominant_root_examples() {
        let eps: f64 = 0.02;
        let r = dominant_root(&cheb(), c(1.0 + eps, 0.0)).unwrap();
        let expect = 1.0 + eps + (2.0 * eps + eps * eps).sqrt();
        assert!((r - c(expect, 0.0)).norm() < 1e-12);

        for p in sample_laws() {
            let r = dominant_root(&p, c(1.0, 0.0)).unwrap();
            assert!((r - c(1.0, 0.0)).norm() < 1e-9, "{p}: {r}");
        }
        for m in 2..=6 {
            let p = ProbVector::hypocycloid(m).unwrap();
            for e in [1e-5, 1e-4, 1e-3, 1e-2, 1e-1] {
                let r = dominant_root(&p, c(1.0 + e, 0.0)).unwrap();
                assert!(r.im.abs() < 1e-9);
                assert!(r.re >= 1.0 + (2.0 * e / (m - 1) as f64).sqrt());
            }
        }
    }

    #[test]
    fn tie_break_prefers_real_then_imaginary() {
        let roots = [c(-1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, -1.0)];
        assert_eq!(pick_dominant(&roots), c(1.0, 0.0));
        let roots = [c(0.0, -1.0), c(0.0, 1.0)];
        assert_eq!(pick_dominant(&roots), c(0.0, 1.0));
    }

    #[test]
    fn psi_examples() {
        for p in sample_laws() {
            assert!((psi(&p, c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        }
        assert!((psi(&cheb(), c(2.0, 0.0)).unwrap() - c(1.25, 0.0)).norm() < 1e-15);
        let t: f64 = 0.8;
        let z = psi(&deltoid(), Complex::from_polar(1.0, t)).unwrap();
        let expect = Complex::from_polar(2.0 / 3.0, t) + Complex::from_polar(1.0 / 3.0, -2.0 * t);
        assert!((z - expect).norm() < 1e-15);
        assert_eq!(psi(&cheb(), c(0.0, 0.0)), Err(Error::ZeroArgument));
    }

    #[test]
    fn growth_bound_examples() {
        let eps: f64 = 1e-3;
        let d = growth_lower_bound(&deltoid(), eps, 10);
        assert!((d - (1.0 + eps.sqrt()).powi(10)).abs() < 1e-12);
        let ch = growth_lower_bound(&cheb(), eps, 10);
        assert!((ch - (1.0 + (2.0 * eps).sqrt()).powi(10)).abs() < 1e-12);
        assert!((growth_lower_bound(&deltoid(), 1e-300, 100) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_growth_past_one() {
        for p in sample_laws() {
            for eps in [1e-4, 1e-2, 0.2] {
                let vals = eval_family(&p, c(1.0 + eps, 0.0), 400).unwrap().values;
                for k in 0..400 {
                    assert!(vals[k].im == 0.0 && vals[k].re > 0.0);
                    assert!(vals[k + 1].re >= (1.0 + eps) * vals[k].re * (1.0 - 1e-14));
                }
            }
        }
    }

    #[test]
    fn ratio_converges_to_dominant_root() {
        for p in sample_laws() {
            // larger eps overflows f64 before n = 2000
            for eps in [1e-4, 1e-3, 1e-2] {
                let z = c(1.0 + eps, 0.0);
                let vals: Vec<f64> = FamilyIter::new(&p, z).take(2002).map(|v| v.re).collect();
                let ratio = vals[2001] / vals[2000];
                let r = dominant_root(&p, z).unwrap();
                assert!((ratio - r.re).abs() < 1e-6, "{p} eps={eps}");
            }
        }
    }
}
