//! Growth measurements past 1, boundedness scans on the boundary curve and
//! the min-max bounds for ellipses and disks.

use rayon::prelude::*;
use serde::Serialize;

use crate::polyfam::{growth_rate, FamilyIter, OVERFLOW_LIMIT};
use crate::region::{curve_point, cusps};
use crate::{Complex, Error, ProbVector, Result};

/// An ellipse with vertices `+-1`, given either by its Joukowski radius
/// `rho > 1` or by its co-vertex `delta` in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EllipseSpec {
    Rho(f64),
    Delta(f64),
}

impl EllipseSpec {
    pub fn validate(self) -> Result<Self> {
        match self {
            Self::Rho(r) if r > 1.0 && r.is_finite() => Ok(self),
            Self::Delta(d) if d > 0.0 && d < 1.0 => Ok(self),
            Self::Rho(r) => Err(Error::DomainError(format!("rho must exceed 1, got {r}"))),
            Self::Delta(d) => Err(Error::DomainError(format!(
                "delta must lie in (0, 1), got {d}"
            ))),
        }
    }

    /// `(rho^2 - 1) / (rho^2 + 1)`.
    pub fn delta(self) -> f64 {
        match self {
            Self::Rho(r) => (r * r - 1.0) / (r * r + 1.0),
            Self::Delta(d) => d,
        }
    }

    pub fn rho(self) -> f64 {
        match self {
            Self::Rho(r) => r,
            Self::Delta(d) => ((1.0 + d) / (1.0 - d)).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    /// `|P_n(1 + eps)|`.
    pub value: f64,
    /// `(1 + sqrt(2 eps) / sigma)^n`.
    pub predicted: f64,
    /// `|P_n| / |P_{n-1}|`; 1 at `n = 0`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub eps: f64,
    pub rows: Vec<GrowthRow>,
    /// First `n` whose value exceeded the overflow limit, if any.
    pub truncated_at: Option<usize>,
}

impl GrowthReport {
    pub fn last_ratio(&self) -> Option<f64> {
        self.rows.last().map(|r| r.ratio)
    }
}

/// `|P_n(1 + eps)|` for `n = 0..=n_max`, stopping early on overflow.
pub fn empirical_growth(p: &ProbVector, eps: f64, n_max: usize) -> Result<GrowthReport> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::DomainError(format!(
            "eps must be non-negative, got {eps}"
        )));
    }
    if n_max < 10 {
        return Err(Error::DomainError(format!(
            "n_max must be at least 10, got {n_max}"
        )));
    }
    let rate = growth_rate(p, eps);
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut truncated_at = None;
    let mut prev = 1.0;
    let mut predicted = 1.0;
    for (n, v) in FamilyIter::new(p, Complex::new(1.0 + eps, 0.0))
        .take(n_max + 1)
        .enumerate()
    {
        let value = v.norm();
        if value.is_nan() || value > OVERFLOW_LIMIT {
            truncated_at = Some(n);
            break;
        }
        let ratio = if n == 0 { 1.0 } else { value / prev };
        rows.push(GrowthRow {
            n,
            value,
            predicted,
            ratio,
        });
        prev = value;
        predicted *= rate;
    }
    Ok(GrowthReport {
        eps,
        rows,
        truncated_at,
    })
}

/// Largest `|P_n(z(t))|` over `n <= n_max` and `samples` equally spaced
/// parameters `t` of the boundary curve.
pub fn boundedness_scan(p: &ProbVector, n_max: usize, samples: usize) -> Result<f64> {
    if n_max < 1 {
        return Err(Error::DomainError("n_max must be at least 1".into()));
    }
    if samples < 64 {
        return Err(Error::DomainError(format!(
            "at least 64 boundary samples needed, got {samples}"
        )));
    }
    let max = (0..samples)
        .into_par_iter()
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / samples as f64;
            max_along(p, curve_point(p, t), n_max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(max)
}

/// Largest `|P_n|` over `n <= n_max` at the cusps only.
pub fn cusp_scan(p: &ProbVector, n_max: usize) -> f64 {
    cusps(p)
        .positions
        .iter()
        .map(|&z| max_along(p, z, n_max))
        .fold(0.0, f64::max)
}

fn max_along(p: &ProbVector, z: Complex, n_max: usize) -> f64 {
    FamilyIter::new(p, z)
        .take(n_max + 1)
        .map(|v| v.norm())
        .fold(
            0.0,
            |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) },
        )
}

/// `(1 + 3 eps / (2 delta))^n`.
pub fn ellipse_upper_bound(delta: f64, eps: f64, n: usize) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DomainError(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::DomainError(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    Ok((1.0 + 1.5 * eps / delta).powi(n as i32))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MinMaxBounds {
    pub lower: f64,
    pub upper: f64,
    /// The larger-modulus root `s` of `r^2 - 2 r w + 1`, `w = gamma (rho + 1/rho) / 2`.
    pub s: Complex,
}

/// Lower and upper bounds on `min max |P|` over the ellipse with vertices
/// `+-1` and radius `rho`, among degree-`n` polynomials with `P(gamma) = 1`.
pub fn ellipse_minmax_bounds(rho: f64, gamma: Complex, n: usize) -> Result<MinMaxBounds> {
    EllipseSpec::Rho(rho).validate()?;
    if !gamma.is_finite() {
        return Err(Error::NonFinite("gamma"));
    }
    let w = gamma * (rho + 1.0 / rho) / 2.0;
    let root = (w * w - 1.0).sqrt();
    let (a, b) = (w + root, w - root);
    let s = if a.norm() >= b.norm() { a } else { b };
    if s.norm() <= rho {
        return Err(Error::GammaInside);
    }
    // both bounds carry the factor (|s| / rho)^n
    let base = (s.norm() / rho).powi(n as i32);
    let num = (Complex::new(1.0, 0.0) + s.powi(-2 * n as i32)).norm();
    let den = 1.0 + rho.powi(-2 * n as i32);
    Ok(MinMaxBounds {
        lower: base * num / den,
        upper: base,
        s,
    })
}

/// `|rho / gamma|^n`, the min-max value on the disk of radius `rho`.
pub fn disk_bound(gamma: Complex, rho: f64, n: usize) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::DomainError(format!(
            "rho must be positive, got {rho}"
        )));
    }
    if gamma.norm() < rho {
        return Err(Error::DomainError(format!(
            "|gamma| = {} is inside the disk of radius {rho}",
            gamma.norm()
        )));
    }
    Ok((rho / gamma.norm()).powi(n as i32))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundsRow {
    pub n: usize,
    pub ellipse_upper: f64,
    pub minmax_lower: f64,
    pub minmax_upper: f64,
    pub growth_lower: f64,
    pub disk: f64,
}

/// Side-by-side comparison at `gamma = 1 + eps` for `n = 1..=n_max`.
pub fn bounds_table(p: &ProbVector, rho: f64, eps: f64, n_max: usize) -> Result<Vec<BoundsRow>> {
    let delta = EllipseSpec::Rho(rho).validate()?.delta();
    let gamma = Complex::new(1.0 + eps, 0.0);
    let rate = growth_rate(p, eps);
    (1..=n_max)
        .map(|n| {
            let mm = ellipse_minmax_bounds(rho, gamma, n)?;
            Ok(BoundsRow {
                n,
                ellipse_upper: ellipse_upper_bound(delta, eps, n)?,
                minmax_lower: mm.lower,
                minmax_upper: mm.upper,
                growth_lower: rate.powi(n as i32),
                disk: disk_bound(gamma, 1.0, n)?,
            })
        })
        .collect()
}
