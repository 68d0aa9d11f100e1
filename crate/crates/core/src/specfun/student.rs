//! Student-t CDF via the incomplete-beta identity.

use super::gamma_beta::reg_inc_beta;
use crate::error::{Error, Result};

pub fn student_t_cdf(x: f64, df: f64) -> Result<f64> {
    if !(df > 0.0) || !df.is_finite() {
        return Err(Error::domain(format!("degrees of freedom must be positive, got {df}")));
    }
    if x.is_nan() {
        return Err(Error::domain("student t argument is NaN".to_string()));
    }
    if x == 0.0 {
        return Ok(0.5);
    }
    let ib = reg_inc_beta(0.5 * df, 0.5, df / (df + x * x))?;
    Ok(if x > 0.0 { 1.0 - 0.5 * ib } else { 0.5 * ib })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry() {
        for &df in &[0.5, 1.0, 4.0, 30.0] {
            assert!((student_t_cdf(0.0, df).unwrap() - 0.5).abs() < 1e-15);
            for &x in &[0.2, 1.5, 4.0] {
                let s = student_t_cdf(x, df).unwrap() + student_t_cdf(-x, df).unwrap();
                assert!((s - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn cauchy_special_case() {
        // df = 1 is the Cauchy distribution: F(x) = atan(x)/pi + 1/2.
        for &x in &[-3.0f64, -0.5, 0.7, 2.0] {
            let want = x.atan() / std::f64::consts::PI + 0.5;
            assert!((student_t_cdf(x, 1.0).unwrap() - want).abs() < 1e-13);
        }
    }

    #[test]
    fn df4_closed_form_point() {
        // F(1.5; 4) = 0.896 exactly.
        assert!((student_t_cdf(1.5, 4.0).unwrap() - 0.896).abs() < 1e-12);
    }

    #[test]
    fn domain_error() {
        assert!(student_t_cdf(1.0, 0.0).is_err());
        assert!(student_t_cdf(1.0, -2.0).is_err());
    }
}
