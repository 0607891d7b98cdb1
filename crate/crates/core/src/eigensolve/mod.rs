//! Power iteration and the static and dynamic generalized momentum methods.
//!
//! All three solvers keep unit-norm iterates `x_k` and record, per step,
//! the normalization `h_{k+1}`, the Rayleigh quotient `nu_k = <A x_k, x_k>`
//! and the residual `d_k = |A x_k - nu_k x_k|`.

mod rates;

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::{Complex, Error, MatrixOperator, ProbVector, Result, Vector};

pub use rates::{
    contraction_constant, contraction_threshold, dr_drho, predicted_decay, rate_from_ratio,
    ratio_from_rate,
};

/// Norms below this are treated as a collapsed iterate.
const ZERO_NORM: f64 = 1e-300;
/// Offset added to the contraction threshold when flooring `rho`.
const RHO_FLOOR_MARGIN: f64 = 1e-6;

/// Options shared by every solver.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub max_iters: usize,
    /// Seed for the random start vector when none is given.
    pub seed: u64,
    pub record_trace: bool,
    /// Stop once `d_k <= tol`.
    pub tolerance: Option<f64>,
    /// Reference eigenvector for `relerr`.
    pub truth: Option<Vector>,
}

impl RunOptions {
    pub fn new(max_iters: usize) -> Self {
        Self {
            max_iters,
            seed: 0,
            record_trace: true,
            tolerance: None,
            truth: None,
        }
    }

    pub fn with_truth(mut self, truth: Vector) -> Self {
        self.truth = Some(truth);
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if let Some(t) = self.tolerance {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "tolerance must be a finite non-negative number, got {t}"
                )));
            }
        }
        if let Some(t) = &self.truth {
            if norm(t) == 0.0 || t.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidConfig(
                    "reference vector must be finite and nonzero".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub prob: ProbVector,
    /// Required by the static method, ignored by the dynamic one.
    pub lambda_star: Option<f64>,
    /// Floor `rho` at the contraction threshold before mapping it to `r`.
    pub rho_floor: bool,
    pub run: RunOptions,
}

impl SolverConfig {
    pub fn new(prob: ProbVector, max_iters: usize) -> Self {
        Self {
            prob,
            lambda_star: None,
            rho_floor: true,
            run: RunOptions::new(max_iters),
        }
    }

    pub fn with_lambda_star(mut self, lambda_star: f64) -> Self {
        self.lambda_star = Some(lambda_star);
        self
    }

    fn validate(&self) -> Result<()> {
        self.run.validate()?;
        let m = self.prob.order();
        if self.run.max_iters < m {
            return Err(Error::InvalidConfig(format!(
                "iteration count {} is below the order {m}",
                self.run.max_iters
            )));
        }
        if let Some(l) = self.lambda_star {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "lambda_star must be positive, got {l}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    /// `h_{k+1}`.
    pub h: f64,
    pub nu: Complex,
    pub d: f64,
    /// `rho_{k-1}` after clamping.
    pub rho: Option<f64>,
    pub r: Option<f64>,
    /// `beta_{k,1..m-1}`; empty for plain power steps.
    pub beta: Vec<f64>,
    /// Relative error of `x_{k+1}`.
    pub relerr: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct IterationTrace {
    pub h0: f64,
    pub records: Vec<IterationRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    /// All `max_iters` steps ran.
    Completed,
    /// `d_k` fell below the tolerance.
    Converged,
    /// `d_k = 0` exactly; the current iterate is an eigenvector.
    Stalled,
}

#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    pub x: Vector,
    pub trace: IterationTrace,
    pub status: Termination,
    /// Number of matrix-vector products performed.
    pub iterations: usize,
    /// Last Rayleigh quotient.
    pub eigenvalue: Complex,
}

impl Solution {
    pub fn final_relerr(&self) -> Option<f64> {
        self.trace.records.last().and_then(|r| r.relerr)
    }

    /// First iteration count after which `d_k <= tol`.
    pub fn iterations_to(&self, tol: f64) -> Option<usize> {
        self.trace
            .records
            .iter()
            .position(|r| r.d <= tol)
            .map(|k| k + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumParams {
    /// `beta[j-1] = p_{j+1} p_0^j lambda_*^{j+1}` for `j = 1..m-1`.
    pub beta: Vec<f64>,
}

pub fn momentum_params(p: &ProbVector, lambda_star: f64) -> MomentumParams {
    let p0 = p.p0();
    let beta = (1..p.order())
        .map(|j| p.get(j + 1) * p0.powi(j as i32) * lambda_star.powi(j as i32 + 1))
        .collect();
    MomentumParams { beta }
}

pub fn norm(x: &[Complex]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `<v, x> = x^H v`.
pub fn inner(v: &[Complex], x: &[Complex]) -> Complex {
    x.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `|omega x - x_true| / |x_true|` with `omega = x^H x_true / x^H x`.
/// A zero `x` gives 1.
pub fn relative_error(x: &[Complex], x_true: &[Complex]) -> f64 {
    let xx = inner(x, x);
    let omega = if xx.norm() == 0.0 {
        Complex::new(0.0, 0.0)
    } else {
        inner(x_true, x) / xx
    };
    let diff: f64 = x
        .iter()
        .zip(x_true)
        .map(|(a, b)| (omega * a - b).norm_sqr())
        .sum();
    diff.sqrt() / norm(x_true)
}

/// Unit vector with independent standard normal entries.
pub fn random_start(n: usize, seed: u64) -> Vector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vector = (0..n)
            .map(|_| Complex::new(StandardNormal.sample(&mut rng), 0.0))
            .collect();
        let h = norm(&v);
        if h > 0.0 {
            return v.into_iter().map(|c| c / h).collect();
        }
    }
}

struct Runner<'a> {
    a: &'a MatrixOperator,
    opts: &'a RunOptions,
    trace: IterationTrace,
    /// Most recent iterate first.
    xs: VecDeque<Vector>,
    /// `h_k` for the iterates in `xs`.
    hs: VecDeque<f64>,
    keep: usize,
    last_nu: Complex,
}

impl<'a> Runner<'a> {
    fn start(
        a: &'a MatrixOperator,
        v0: Option<&[Complex]>,
        opts: &'a RunOptions,
        keep: usize,
    ) -> Result<Self> {
        let n = a.dim();
        let v0: Vector = match v0 {
            Some(v) => v.to_vec(),
            None => random_start(n, opts.seed),
        };
        if v0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v0.len(),
            });
        }
        if let Some(t) = &opts.truth {
            if t.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: t.len(),
                });
            }
        }
        if v0.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteIterate { iteration: 0 });
        }
        let h0 = norm(&v0);
        if h0 < ZERO_NORM {
            return Err(Error::ZeroVector { iteration: 0 });
        }
        let x0 = v0.iter().map(|v| v / h0).collect();
        Ok(Self {
            a,
            opts,
            trace: IterationTrace {
                h0,
                records: Vec::new(),
            },
            xs: VecDeque::from([x0]),
            hs: VecDeque::from([h0]),
            keep,
            last_nu: Complex::new(0.0, 0.0),
        })
    }

    fn current(&self) -> &Vector {
        &self.xs[0]
    }

    /// `A x_k`, `nu_k` and `d_k`.
    fn apply(&mut self) -> Result<(Vector, Complex, f64)> {
        let x = self.current();
        let v = self.a.matvec(x)?;
        let nu = inner(&v, x);
        let d = v
            .iter()
            .zip(x)
            .map(|(a, b)| (a - nu * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        self.last_nu = nu;
        Ok((v, nu, d))
    }

    /// Normalizes `u` into `x_{k+1}` and records the step.
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        k: usize,
        u: Vector,
        nu: Complex,
        d: f64,
        rho: Option<f64>,
        r: Option<f64>,
        beta: Vec<f64>,
    ) -> Result<()> {
        let h = norm(&u);
        if !h.is_finite() || !nu.is_finite() || !d.is_finite() {
            return Err(Error::NonFiniteIterate { iteration: k + 1 });
        }
        if h < ZERO_NORM {
            return Err(Error::ZeroVector { iteration: k + 1 });
        }
        let x: Vector = u.into_iter().map(|c| c / h).collect();
        if self.opts.record_trace || self.opts.truth.is_some() {
            let relerr = self.opts.truth.as_ref().map(|t| relative_error(&x, t));
            self.trace.records.push(IterationRecord {
                k,
                h,
                nu,
                d,
                rho,
                r,
                beta,
                relerr,
            });
        }
        self.xs.push_front(x);
        self.hs.push_front(h);
        self.xs.truncate(self.keep);
        self.hs.truncate(self.keep);
        Ok(())
    }

    /// `A x_k - sum_j beta_j / H_{k,j} x_{k-j}`.
    fn momentum_update(&self, v: Vector, beta: &[f64]) -> Vector {
        let mut u = v;
        let mut hprod = 1.0;
        for (j, &b) in beta.iter().enumerate() {
            // H_{k,j} = h_k h_{k-1} ... h_{k+1-j}
            hprod *= self.hs[j];
            if b == 0.0 {
                continue;
            }
            let coef = b / hprod;
            for (ui, xi) in u.iter_mut().zip(&self.xs[j + 1]) {
                *ui -= xi * coef;
            }
        }
        u
    }

    fn converged(&self, d: f64) -> bool {
        self.opts.tolerance.is_some_and(|t| d <= t)
    }

    fn finish(mut self, status: Termination, iterations: usize) -> Solution {
        if !self.opts.record_trace {
            // keep only the final record when it was needed for relerr
            let last = self.trace.records.pop();
            self.trace.records = last.into_iter().collect();
        }
        Solution {
            x: self.xs.pop_front().expect("iterate present"),
            trace: self.trace,
            status,
            iterations,
            eigenvalue: self.last_nu,
        }
    }
}

/// Plain power iteration for `opts.max_iters` steps.
pub fn power_iterate(
    a: &MatrixOperator,
    v0: Option<&[Complex]>,
    opts: &RunOptions,
) -> Result<Solution> {
    opts.validate()?;
    let mut run = Runner::start(a, v0, opts, 1)?;
    for k in 0..opts.max_iters {
        let (v, nu, d) = run.apply()?;
        run.push(k, v, nu, d, None, None, Vec::new())?;
        if run.converged(d) {
            return Ok(run.finish(Termination::Converged, k + 1));
        }
    }
    Ok(run.finish(Termination::Completed, opts.max_iters))
}

/// `m - 1` power steps on `p_0 A`. Returns the step count if the tolerance
/// was met, and the last `d`.
fn warm_up(run: &mut Runner, p0: f64, m: usize) -> Result<(Option<usize>, f64)> {
    let mut last = 0.0;
    for k in 0..m - 1 {
        let (v, nu, d) = run.apply()?;
        let u = v.into_iter().map(|c| c * p0).collect();
        run.push(k, u, nu, d, None, None, Vec::new())?;
        if run.converged(d) {
            return Ok((Some(k + 1), d));
        }
        last = d;
    }
    Ok((None, last))
}

/// Generalized momentum iteration with fixed parameters `beta_j =
/// p_{j+1} p_0^j lambda_*^{j+1}`. The returned iterate is the normalized
/// `P_N(A / lambda_*) v0`.
pub fn static_momentum(
    a: &MatrixOperator,
    v0: Option<&[Complex]>,
    config: &SolverConfig,
) -> Result<Solution> {
    config.validate()?;
    let lambda_star = config
        .lambda_star
        .ok_or_else(|| Error::InvalidConfig("static momentum needs lambda_star".into()))?;
    let p = &config.prob;
    let m = p.order();
    let beta = momentum_params(p, lambda_star).beta;
    let mut run = Runner::start(a, v0, &config.run, m)?;
    if let (Some(iters), _) = warm_up(&mut run, p.p0(), m)? {
        return Ok(run.finish(Termination::Converged, iters));
    }
    for k in m - 1..config.run.max_iters {
        let (v, nu, d) = run.apply()?;
        let u = run.momentum_update(v, &beta);
        run.push(k, u, nu, d, None, None, beta.clone())?;
        if run.converged(d) {
            return Ok(run.finish(Termination::Converged, k + 1));
        }
    }
    Ok(run.finish(Termination::Completed, config.run.max_iters))
}

/// Momentum iteration whose parameters are re-estimated every step from the
/// residual ratio `rho_{k-1} = min(d_k / d_{k-1}, 1)`, the gap estimate
/// `r_k = r(rho_{k-1})` and `lambda_* ~ Re(nu_k) r_k`.
pub fn dynamic_momentum(
    a: &MatrixOperator,
    v0: Option<&[Complex]>,
    config: &SolverConfig,
) -> Result<Solution> {
    config.validate()?;
    let p = &config.prob;
    let m = p.order();
    let sigma2 = p.variance();
    let floor = if config.rho_floor {
        contraction_threshold(sigma2) + RHO_FLOOR_MARGIN
    } else {
        0.0
    };
    let mut run = Runner::start(a, v0, &config.run, m)?;
    let mut d_prev = match warm_up(&mut run, p.p0(), m)? {
        (Some(iters), _) => return Ok(run.finish(Termination::Converged, iters)),
        (None, d) => d,
    };
    for k in m - 1..config.run.max_iters {
        let (v, nu, d) = run.apply()?;
        if d == 0.0 && !run.converged(d) {
            return Ok(run.finish(Termination::Stalled, k + 1));
        }
        let (rho, r, beta) = if k >= m {
            let rho = (d / d_prev).min(1.0).max(floor);
            let r = ratio_from_rate(sigma2, rho);
            (Some(rho), Some(r), momentum_params(p, nu.re * r).beta)
        } else {
            (None, None, vec![0.0; m - 1])
        };
        d_prev = d;
        let u = run.momentum_update(v, &beta);
        run.push(k, u, nu, d, rho, r, beta)?;
        if run.converged(d) {
            return Ok(run.finish(Termination::Converged, k + 1));
        }
    }
    Ok(run.finish(Termination::Completed, config.run.max_iters))
}

#[cfg(test)]
mod tests;
