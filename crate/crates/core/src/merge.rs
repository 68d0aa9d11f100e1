//! P-value combining statistics: weighted r-means (with the r → 0
//! geometric limit), the Simes function, and the Cauchy combination.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// A point on the unit simplex Δ_n.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    values: Vec<f64>,
    interior: bool,
}

impl Weights {
    /// Entries must lie in [0,1] and sum to 1 within 1e-12.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::shape("weights must be nonempty"));
        }
        if values.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(Error::domain("weights must lie in [0, 1]"));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("weights must sum to 1, got {sum}")));
        }
        let interior = values.iter().all(|&w| w > 0.0);
        Ok(Weights { values, interior })
    }

    pub fn equal(n: usize) -> Self {
        assert!(n >= 1);
        Weights {
            values: vec![1.0 / n as f64; n],
            interior: true,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Membership in Δ⁺_n (all entries strictly positive).
    pub fn is_interior(&self) -> bool {
        self.interior
    }
}

/// p-values to combine; every entry strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct PValues(Vec<f64>);

impl PValues {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::shape("p-value vector must be nonempty"));
        }
        // Endpoints are rejected rather than clamped: u = 0 is singular
        // for negative exponents and both endpoints usually indicate a
        // data bug upstream.
        if values.iter().any(|u| !(*u > 0.0 && *u < 1.0)) {
            return Err(Error::domain("p-values must lie strictly in (0, 1)"));
        }
        Ok(PValues(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A p-value combining statistic.
#[derive(Debug, Clone, PartialEq)]
pub enum MergeStatistic {
    /// Weighted r-mean; r = 0 denotes the weighted geometric mean.
    RMean { r: f64, weights: Weights },
    Simes,
    CauchyCombination { weights: Weights },
}

impl MergeStatistic {
    pub fn rmean(r: f64, weights: Weights) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::domain(format!("r-mean exponent must be finite, got {r}")));
        }
        Ok(MergeStatistic::RMean { r, weights })
    }

    /// Dimension the statistic expects, if it carries weights.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            MergeStatistic::RMean { weights, .. } => Some(weights.len()),
            MergeStatistic::Simes => None,
            MergeStatistic::CauchyCombination { weights } => Some(weights.len()),
        }
    }
}

/// Kahan-compensated sum of w_i · f(u_i).
#[inline]
fn compensated_dot(weights: &[f64], u: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for (&w, &ui) in weights.iter().zip(u) {
        if w == 0.0 {
            continue; // zero-weight entries never contribute
        }
        let y = w * f(ui) - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Weighted r-mean (Σ wᵢ uᵢ^r)^{1/r}; geometric mean for r = 0.
pub fn r_mean(r: f64, weights: &Weights, p: &PValues) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::domain(format!("r-mean exponent must be finite, got {r}")));
    }
    if weights.len() != p.len() {
        return Err(Error::shape(format!(
            "weights length {} != p-values length {}",
            weights.len(),
            p.len()
        )));
    }
    r_mean_raw(r, weights, p.values())
}

fn r_mean_raw(r: f64, weights: &Weights, u: &[f64]) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::domain(format!("r-mean exponent must be finite, got {r}")));
    }
    let w = weights.values();
    if r == 0.0 {
        // Explicit geometric branch in log space.
        let s = compensated_dot(w, u, f64::ln);
        return Ok(s.exp().clamp(f64::MIN_POSITIVE, 1.0));
    }
    let s = compensated_dot(w, u, |ui| ui.powf(r));
    Ok(s.powf(1.0 / r).clamp(f64::MIN_POSITIVE, 1.0))
}

/// Fast unweighted harmonic mean used on the Monte Carlo hot path.
#[inline]
pub(crate) fn harmonic_mean_equal(u: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for &ui in u {
        let y = 1.0 / ui - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    u.len() as f64 / sum
}

/// Simes function min_i { n·u_(i)/i } over ascending order statistics.
pub fn simes(p: &PValues) -> Result<f64> {
    let mut u = p.values().to_vec();
    u.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(simes_sorted(&u))
}

#[inline]
pub(crate) fn simes_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &ui)| n * ui / (i + 1) as f64)
        .fold(f64::INFINITY, f64::min)
}

/// Cauchy combination g⁻¹(Σ wᵢ g(uᵢ)) with g(p) = tan(π(p − 1/2)).
pub fn cauchy_combine(weights: &Weights, p: &PValues) -> Result<f64> {
    if weights.len() != p.len() {
        return Err(Error::shape(format!(
            "weights length {} != p-values length {}",
            weights.len(),
            p.len()
        )));
    }
    let s = compensated_dot(weights.values(), p.values(), |ui| (PI * (ui - 0.5)).tan());
    Ok((s.atan() / PI + 0.5).clamp(f64::MIN_POSITIVE, 1.0))
}

/// Dispatch over the statistic union.
pub fn merge(stat: &MergeStatistic, p: &PValues) -> Result<f64> {
    merge_slice(stat, p.values(), &mut Vec::new())
}

/// Merge a raw sample already guaranteed to lie strictly in (0,1);
/// `scratch` is reused as Simes sort workspace on the Monte Carlo hot
/// path.
pub(crate) fn merge_slice(
    stat: &MergeStatistic,
    u: &[f64],
    scratch: &mut Vec<f64>,
) -> Result<f64> {
    match stat {
        MergeStatistic::RMean { r, weights } => {
            if weights.len() != u.len() {
                return Err(Error::shape(format!(
                    "weights length {} != p-values length {}",
                    weights.len(),
                    u.len()
                )));
            }
            if *r == -1.0 && weights.values().iter().all(|&w| w == weights.values[0]) {
                return Ok(harmonic_mean_equal(u).clamp(f64::MIN_POSITIVE, 1.0));
            }
            r_mean_raw(*r, weights, u)
        }
        MergeStatistic::Simes => {
            scratch.clear();
            scratch.extend_from_slice(u);
            scratch.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(simes_sorted(scratch))
        }
        MergeStatistic::CauchyCombination { weights } => {
            if weights.len() != u.len() {
                return Err(Error::shape(format!(
                    "weights length {} != p-values length {}",
                    weights.len(),
                    u.len()
                )));
            }
            let s = compensated_dot(weights.values(), u, |ui| (PI * (ui - 0.5)).tan());
            Ok((s.atan() / PI + 0.5).clamp(f64::MIN_POSITIVE, 1.0))
        }
    }
}
