//! Exact distribution of the reflecting martingale `Y_n` and the resulting
//! degree-`t sqrt(n)` approximation of `z^n`.
//!
//! Transitions from state `k`:
//!
//! - `0 <= k <= m-2`: to `k+1` with probability `(2k+1)/(2k+2)`, to `-(k+1)`
//!   with probability `1/(2k+2)`;
//! - `k >= m-1`: to `k+1-j` with probability `p_j`;
//! - `k < 0`: mirror image of `-k`.
//!
//! With `P_{-k} = P_k` the walk satisfies `E P_{Y_n}(z) = z^n`, so
//! `alpha_k = P(|Y_n| = k)` expands `z^n` exactly in the family.

use serde::Serialize;

use crate::polyfam::eval_family;
use crate::{Complex, Error, ProbVector, Result};

#[derive(Debug, Clone, Serialize)]
pub struct WalkDistribution {
    pub prob: ProbVector,
    pub steps: usize,
    /// `mass[i]` is the probability of state `i - steps`.
    pub mass: Vec<f64>,
}

impl WalkDistribution {
    pub fn start(p: &ProbVector) -> Self {
        Self {
            prob: p.clone(),
            steps: 0,
            mass: vec![1.0],
        }
    }

    /// Probability of state `k`.
    pub fn at(&self, k: i64) -> f64 {
        let idx = k + self.steps as i64;
        if idx < 0 || idx as usize >= self.mass.len() {
            0.0
        } else {
            self.mass[idx as usize]
        }
    }

    pub fn states(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.steps as i64;
        self.mass
            .iter()
            .enumerate()
            .map(move |(i, &w)| (i as i64 - n, w))
    }

    /// Advances the walk one step.
    pub fn step(&self) -> Self {
        let m = self.prob.order() as i64;
        let n = self.steps as i64 + 1;
        let mut next = vec![0.0; 2 * n as usize + 1];
        let mut put = |state: i64, w: f64| next[(state + n) as usize] += w;
        for (k, w) in self.states() {
            if w == 0.0 {
                continue;
            }
            let (a, sign) = (k.abs(), if k < 0 { -1 } else { 1 });
            if a <= m - 2 {
                let denom = (2 * a + 2) as f64;
                put(sign * (a + 1), w * (2 * a + 1) as f64 / denom);
                put(-sign * (a + 1), w / denom);
            } else {
                for (j, &pj) in self.prob.entries().iter().enumerate() {
                    if pj > 0.0 {
                        put(sign * (a + 1 - j as i64), w * pj);
                    }
                }
            }
        }
        Self {
            prob: self.prob.clone(),
            steps: n as usize,
            mass: next,
        }
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.states().map(|(k, w)| k as f64 * w).sum()
    }
}

pub fn walk_distribution(p: &ProbVector, n: usize) -> WalkDistribution {
    let mut dist = WalkDistribution::start(p);
    for _ in 0..n {
        dist = dist.step();
    }
    dist
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaCoeffs {
    pub steps: usize,
    /// `alpha[k] = P(|Y_n| = k)`.
    pub alpha: Vec<f64>,
}

impl AlphaCoeffs {
    pub fn from_distribution(dist: &WalkDistribution) -> Self {
        let n = dist.steps;
        let alpha = (0..=n as i64)
            .map(|k| {
                if k == 0 {
                    dist.at(0)
                } else {
                    dist.at(k) + dist.at(-k)
                }
            })
            .collect();
        Self { steps: n, alpha }
    }

    /// `sum_{k > degree} alpha_k`.
    pub fn tail_mass(&self, degree: usize) -> f64 {
        self.alpha.iter().skip(degree + 1).sum()
    }
}

pub fn alpha_coeffs(p: &ProbVector, n: usize) -> AlphaCoeffs {
    AlphaCoeffs::from_distribution(&walk_distribution(p, n))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerApprox {
    pub approx: Complex,
    /// `min(floor(t sqrt n), n)`.
    pub degree: usize,
    pub tail_mass: f64,
}

/// Truncated expansion `sum_{k <= t sqrt(n)} alpha_k P_k(z)` of `z^n`.
pub fn approximate_power(p: &ProbVector, z: Complex, n: usize, t: f64) -> Result<PowerApprox> {
    if n < 1 {
        return Err(Error::DomainError("n must be at least 1".into()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::DomainError(format!("t must be positive, got {t}")));
    }
    let coeffs = alpha_coeffs(p, n);
    approximate_with(&coeffs, p, z, t)
}

/// Same as [`approximate_power`] with precomputed coefficients.
pub fn approximate_with(
    coeffs: &AlphaCoeffs,
    p: &ProbVector,
    z: Complex,
    t: f64,
) -> Result<PowerApprox> {
    let n = coeffs.steps;
    let degree = ((t * (n as f64).sqrt()).floor() as usize).min(n);
    let values = eval_family(p, z, degree)?.values;
    let approx = values.iter().zip(&coeffs.alpha).map(|(v, a)| v * *a).sum();
    Ok(PowerApprox {
        approx,
        degree,
        tail_mass: coeffs.tail_mass(degree),
    })
}

/// Azuma tail bound `2 exp(-t^2 / (2 (2m-1)^2))`.
pub fn azuma_tail(m: usize, t: f64) -> f64 {
    let width = (2 * m - 1) as f64;
    2.0 * (-t * t / (2.0 * width * width)).exp()
}
