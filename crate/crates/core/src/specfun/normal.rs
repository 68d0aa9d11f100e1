//! Standard normal CDF and quantile.

use super::gamma_beta::reg_lower_gamma;
use crate::error::{Error, Result};

/// Φ(x), via the incomplete-gamma identity erfc(z) = Q(1/2, z²).
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let p_half = reg_lower_gamma(0.5, 0.5 * x * x).expect("valid incomplete gamma arguments");
    if x >= 0.0 {
        0.5 + 0.5 * p_half
    } else {
        0.5 - 0.5 * p_half
    }
}

/// Φ⁻¹(q) for q ∈ (0, 1).
pub fn normal_quantile(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("normal quantile requires q in (0,1), got {q}")));
    }
    // Acklam's rational approximation, then two Newton refinements
    // against normal_cdf bring the roundtrip error below 1e-12.
    let mut x = acklam(q);
    for _ in 0..2 {
        let err = normal_cdf(x) - q;
        let pdf = (-(0.5) * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        if pdf > 0.0 {
            x -= err / pdf;
        }
    }
    Ok(x)
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -acklam(1.0 - p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_symmetry() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        for &x in &[0.3, 1.0, 2.5, 5.0, 8.0] {
            assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn quantile_roundtrip() {
        let mut q = 1e-12;
        while q < 1.0 {
            let x = normal_quantile(q).unwrap();
            assert!(
                (normal_cdf(x) - q).abs() < 1e-10,
                "q={q} x={x} cdf={}",
                normal_cdf(x)
            );
            q = (q * 3.7).min(q + 0.037);
        }
        let x = normal_quantile(1.0 - 1e-12).unwrap();
        assert!((normal_cdf(x) - (1.0 - 1e-12)).abs() < 1e-10);
    }

    #[test]
    fn quantile_domain_errors() {
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
    }

    #[test]
    fn cdf_strictly_increasing() {
        let mut prev = normal_cdf(-8.0);
        for i in 1..=160 {
            let v = normal_cdf(-8.0 + 0.1 * i as f64);
            assert!(v > prev);
            prev = v;
        }
    }
}
