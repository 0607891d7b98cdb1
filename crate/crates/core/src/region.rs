//! Geometry of the stability region: the closed curve
//! `z(t) = sum_j p_j e^{i(1-j)t}`, its cusps, and membership of points.
//!
//! Membership is decided from the characteristic roots: every root of
//! `Q_w` lies strictly inside the unit disk when `w` is interior, and exactly
//! one root leaves the disk when `w` is exterior.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::polyfam::char_roots;
use crate::{Complex, Error, ProbVector, Result};

/// Default width of the boundary band in root modulus.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Interior,
    Boundary,
    Exterior,
}

impl Membership {
    pub fn as_str(self) -> &'static str {
        match self {
            Membership::Interior => "interior",
            Membership::Boundary => "boundary",
            Membership::Exterior => "exterior",
        }
    }
}

pub fn curve_point(p: &ProbVector, t: f64) -> Complex {
    p.entries()
        .iter()
        .enumerate()
        .map(|(j, &pj)| Complex::from_polar(pj, (1.0 - j as f64) * t))
        .sum()
}

/// `z'(t) = sum_j i (1-j) p_j e^{i(1-j)t}`.
pub fn curve_derivative(p: &ProbVector, t: f64) -> Complex {
    p.entries()
        .iter()
        .enumerate()
        .map(|(j, &pj)| {
            let k = 1.0 - j as f64;
            Complex::i() * Complex::from_polar(k * pj, k * t)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySample {
    pub t: f64,
    pub z: Complex,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryCurve {
    pub prob: ProbVector,
    pub samples: Vec<BoundarySample>,
}

/// Samples the boundary on a uniform grid of `samples` points over
/// `[0, 2 pi]`, both endpoints included.
pub fn boundary(p: &ProbVector, samples: usize) -> Result<BoundaryCurve> {
    if samples < 16 {
        return Err(Error::DomainError(format!(
            "boundary needs at least 16 samples, got {samples}"
        )));
    }
    let step = 2.0 * PI / (samples - 1) as f64;
    let samples = (0..samples)
        .map(|i| {
            let t = if i + 1 == samples {
                2.0 * PI
            } else {
                i as f64 * step
            };
            BoundarySample {
                t,
                z: curve_point(p, t),
            }
        })
        .collect();
    Ok(BoundaryCurve {
        prob: p.clone(),
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspSet {
    pub count: usize,
    pub positions: Vec<Complex>,
    pub gcd_support: Vec<usize>,
}

impl CuspSet {
    /// Curve parameters `2 pi k / count` at which the cusps sit.
    pub fn parameters(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |k| 2.0 * PI * k as f64 / self.count as f64)
    }

    /// Human-readable summary, e.g. `3 at 1, e^{2πi/3}, e^{4πi/3}`.
    pub fn summary(&self) -> String {
        let n = self.count;
        let mut parts = vec!["1".to_string()];
        for k in 1..n {
            let num = 2 * k;
            let g = gcd(num, n);
            let (a, b) = (num / g, n / g);
            let coeff = if a == 1 { String::new() } else { a.to_string() };
            if b == 1 {
                parts.push(format!("e^{{{coeff}πi}}"));
            } else {
                parts.push(format!("e^{{{coeff}πi/{b}}}"));
            }
        }
        format!("{n} at {}", parts.join(", "))
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Cusps sit at the `n`-th roots of unity, `n = gcd{ j >= 2 : p_j > 0 }`.
pub fn cusps(p: &ProbVector) -> CuspSet {
    let gcd_support: Vec<usize> = p.support().collect();
    // p_m > 0 so the support is never empty
    let count = gcd_support.iter().copied().fold(0, gcd);
    let positions = (0..count)
        .map(|k| Complex::from_polar(1.0, 2.0 * PI * k as f64 / count as f64))
        .collect();
    CuspSet {
        count,
        positions,
        gcd_support,
    }
}

/// Membership oracle with a configurable boundary band.
#[derive(Debug, Clone)]
pub struct Region {
    pub prob: ProbVector,
    pub tol: f64,
}

impl Region {
    pub fn new(prob: ProbVector) -> Self {
        Self {
            prob,
            tol: MEMBERSHIP_TOL,
        }
    }

    pub fn with_tolerance(prob: ProbVector, tol: f64) -> Self {
        Self { prob, tol }
    }

    pub fn contains(&self, w: Complex) -> Result<Membership> {
        let set = char_roots(&self.prob, w)?;
        let max = set.max_modulus();
        if max < 1.0 - self.tol {
            return Ok(Membership::Interior);
        }
        if max > 1.0 + self.tol {
            let outside = set.roots.iter().filter(|r| r.norm() > 1.0).count();
            if outside == 1 {
                return Ok(Membership::Exterior);
            }
        }
        Ok(Membership::Boundary)
    }

    /// True unless the point is exterior.
    pub fn encloses(&self, w: Complex) -> Result<bool> {
        Ok(self.contains(w)? != Membership::Exterior)
    }

    /// Distance from 0 to the boundary along direction `theta`, by bisection
    /// of the membership predicate on `[0, 1.5]`.
    pub fn radial_extent(&self, theta: f64) -> Result<f64> {
        let dir = Complex::from_polar(1.0, theta);
        let (mut lo, mut hi) = (0.0, 1.5);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.encloses(dir * mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

pub fn contains(p: &ProbVector, w: Complex) -> Result<Membership> {
    Region::new(p.clone()).contains(w)
}

/// Membership in `lambda* Gamma`.
pub fn scaled_contains(p: &ProbVector, lambda_star: f64, w: Complex) -> Result<Membership> {
    if !(lambda_star > 0.0 && lambda_star.is_finite()) {
        return Err(Error::DomainError(format!(
            "lambda_star must be positive, got {lambda_star}"
        )));
    }
    contains(p, w / lambda_star)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridPoint {
    pub z: Complex,
    pub membership: Membership,
}

/// Classifies a `size x size` lattice over `[-extent, extent]^2`, row by row
/// from the bottom. Points run in parallel.
pub fn classify_grid(p: &ProbVector, size: usize, extent: f64) -> Result<Vec<GridPoint>> {
    if size < 2 || extent.is_nan() || extent <= 0.0 {
        return Err(Error::DomainError(
            "grid needs size >= 2 and positive extent".into(),
        ));
    }
    let region = Region::new(p.clone());
    let step = 2.0 * extent / (size - 1) as f64;
    (0..size * size)
        .into_par_iter()
        .map(|idx| {
            let (row, col) = (idx / size, idx % size);
            let z = Complex::new(-extent + col as f64 * step, -extent + row as f64 * step);
            region
                .contains(z)
                .map(|membership| GridPoint { z, membership })
        })
        .collect()
}
