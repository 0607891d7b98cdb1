//! Probability vectors `p = (p0, p1, ..., pm)` describing the step law of a
//! mean-zero walk: a step of `1 - j` is taken with probability `p_j`.
//!
//! Every polynomial family in this crate is keyed by one of these. The
//! constructor enforces the constraints the rest of the crate relies on:
//! nonnegative entries summing to one, `p0 > 0`, `p1 == 0` and
//! `sum_j (1 - j) p_j == 0`. Trailing zeros are trimmed so the order `m` is
//! the index of the last positive entry.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;

use crate::{Error, Result};

/// Absolute tolerance for the sum-to-one and mean-zero checks.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbVector {
    entries: Vec<f64>,
    variance: f64,
}

impl ProbVector {
    /// Validates `raw` and returns the canonical (trimmed) vector.
    pub fn new(raw: &[f64]) -> Result<Self> {
        if raw.len() < 3 {
            return Err(Error::TooShort(raw.len()));
        }
        for (index, &value) in raw.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let sum: f64 = raw.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::SumNotOne { sum });
        }
        if raw[0] <= 0.0 {
            return Err(Error::P0Zero);
        }
        if raw[1] != 0.0 {
            return Err(Error::P1NonZero(raw[1]));
        }
        let mean: f64 = raw
            .iter()
            .enumerate()
            .map(|(j, &p)| (1.0 - j as f64) * p)
            .sum();
        if mean.abs() > PROB_TOL {
            return Err(Error::MeanNotZero { mean });
        }

        let last = raw.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        let entries = raw[..=last].to_vec();
        // p0 > 0 and mean zero force some p_j > 0 with j >= 2
        debug_assert!(entries.len() >= 3);
        let variance = entries
            .iter()
            .enumerate()
            .map(|(j, &p)| (1.0 - j as f64).powi(2) * p)
            .sum();
        Ok(Self { entries, variance })
    }

    /// The m-cusped hypocycloid law: `p0 = (m-1)/m`, `pm = 1/m`.
    pub fn hypocycloid(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::OrderTooSmall(m));
        }
        let mut raw = vec![0.0; m + 1];
        raw[0] = (m - 1) as f64 / m as f64;
        raw[m] = 1.0 / m as f64;
        Self::new(&raw)
    }

    /// Convex combination of `parts`, shorter parts padded with zeros.
    pub fn mix(weights: &[f64], parts: &[ProbVector]) -> Result<Self> {
        if weights.is_empty() || weights.len() != parts.len() {
            return Err(Error::WeightsInvalid(format!(
                "{} weights for {} parts",
                weights.len(),
                parts.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::WeightsInvalid(format!("weight {w} is negative")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::WeightsInvalid(format!("weights sum to {total}")));
        }
        let len = parts.iter().map(|p| p.entries.len()).max().unwrap_or(0);
        let mut raw = vec![0.0; len];
        for (w, part) in weights.iter().zip(parts) {
            for (slot, &pj) in raw.iter_mut().zip(&part.entries) {
                *slot += w * pj;
            }
        }
        // p1 is exactly zero in every part, keep it that way after rounding
        raw[1] = 0.0;
        Self::new(&raw)
    }

    /// The order `m` (index of the last positive entry).
    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `p_j`, zero past the order.
    pub fn get(&self, j: usize) -> f64 {
        self.entries.get(j).copied().unwrap_or(0.0)
    }

    pub fn p0(&self) -> f64 {
        self.entries[0]
    }

    /// Walk variance `sigma^2 = sum_j (1 - j)^2 p_j`.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn sigma(&self) -> f64 {
        self.variance.sqrt()
    }

    /// Indices `j >= 2` with `p_j > 0`.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .enumerate()
            .skip(2)
            .filter(|(_, &p)| p > 0.0)
            .map(|(j, _)| j)
    }

    /// Largest single move of the walk in absolute value, `m - 1`.
    pub fn max_step(&self) -> usize {
        self.order() - 1
    }
}

impl fmt::Display for ProbVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|p| format!("{p}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn parse_entry(token: &str) -> Result<f64> {
    let token = token.trim();
    if token.contains('/') {
        let ratio: Ratio<i64> = token
            .parse()
            .map_err(|e| Error::ParseProb(format!("{token:?}: {e}")))?;
        Ok(*ratio.numer() as f64 / *ratio.denom() as f64)
    } else {
        token
            .parse::<f64>()
            .map_err(|e| Error::ParseProb(format!("{token:?}: {e}")))
    }
}

/// Parses comma-separated rationals or decimals, e.g. `7/12,0,1/4,1/6`.
impl FromStr for ProbVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let raw = s
            .split(',')
            .map(parse_entry)
            .collect::<Result<Vec<f64>>>()?;
        Self::new(&raw)
    }
}

/// The six laws used in the dynamic experiments, keyed by name.
pub fn named(name: &str) -> Option<ProbVector> {
    let p = match name {
        "dynamic2" | "chebyshev" => "1/2,0,1/2",
        "dynamic3" | "deltoid" => "2/3,0,0,1/3",
        "dynamic4" | "astroid" => "3/4,0,0,0,1/4",
        "dynamic5" => "4/5,0,0,0,0,1/5",
        "dynamic2-3" => "7/12,0,1/4,1/6",
        "dynamic2-4" => "5/8,0,1/4,0,1/8",
        _ => return None,
    };
    p.parse().ok()
}
