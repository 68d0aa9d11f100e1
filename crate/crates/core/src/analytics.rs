//! Closed-form and semi-analytic quantities for the harmonic-mean
//! p-value: the exact Clayton merged-p-value CDF, the Gamma upper bound
//! and its supremum over the parameter, the κ multiplier, validity
//! thresholds, the asymptotic independence threshold, and the discrete
//! lower bound p_m.

use crate::error::{Error, Result};
use crate::specfun::{reg_inc_beta, reg_lower_gamma, stable1_quantile};

/// The Euler–Mascheroni constant γ.
pub const EULER_MASCHERONI: f64 = 0.5772156649015329;

/// Result of the κ supremum: κ = sup (1/p)·G_{1/b}(1/(p^{−b}−1)) over
/// p ∈ (0, 0.1], b ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaResult {
    pub kappa: f64,
    pub p_star: f64,
    pub b_star: f64,
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("significance level must be in (0,1), got {p}")));
    }
    Ok(())
}

fn clamp_prob(raw: f64) -> f64 {
    debug_assert!(
        (-1e-12..=1.0 + 1e-12).contains(&raw),
        "probability out of tolerance: {raw}"
    );
    raw.clamp(0.0, 1.0)
}

/// P(M_{−r}(U₁,…,U_n) ≤ p) for (U₁,…,U_n) ~ Clayton(r), r ≥ 1:
/// 1 − B_{n,r}((n·p^{−r} − n)/(n·p^{−r} − n + 1)) with B_{n,r} the
/// Beta(n, 1/r) CDF.
pub fn clayton_exact_cdf(n: usize, r: f64, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::domain(format!("clayton exponent r must be >= 1, got {r}")));
    }
    check_p(p)?;
    let nf = n as f64;
    let a = nf * p.powf(-r) - nf;
    // complement form: 1 − B_{n,1/r}(a/(a+1)) = B_{1/r,n}(1/(a+1)),
    // which avoids cancellation when a is huge (small p, large r)
    Ok(clamp_prob(reg_inc_beta(1.0 / r, nf, 1.0 / (a + 1.0))?))
}

/// Upper bound G_{1/t}(1/(p^{−t} − 1)); independent of n and weights.
pub fn clayton_gamma_bound(t: f64, p: f64) -> Result<f64> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::domain(format!("bound parameter t must be >= 1, got {t}")));
    }
    check_p(p)?;
    let denom = p.powf(-t) - 1.0;
    if denom <= 0.0 {
        // p^{-t} underflow territory; the bound is 1 in the limit.
        return Ok(1.0);
    }
    Ok(clamp_prob(reg_lower_gamma(1.0 / t, 1.0 / denom)?))
}

/// sup_{b ≥ 1} G_{1/b}(1/(p^{−b} − 1)), by grid search plus
/// golden-section refinement to 1e-8 in value.
pub fn clayton_sup_bound(p: f64) -> Result<f64> {
    check_p(p)?;
    let f = |b: f64| clayton_gamma_bound(b, p).unwrap_or(0.0);
    let (_, v) = maximize_1d(&f, 1.0, 200.0, 400);
    Ok(clamp_prob(v))
}

/// Grid scan then golden-section around the best cell; returns (argmax, max).
fn maximize_1d(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, cells: usize) -> (f64, f64) {
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    let step = (hi - lo) / cells as f64;
    for i in 0..=cells {
        let v = f(lo + step * i as f64);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    golden_max(f, a, b)
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..120 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// κ = sup over p ∈ (0, 0.1], b ≥ 1 of (1/p)·G_{1/b}(1/(p^{−b} − 1)).
pub fn kappa_constant() -> KappaResult {
    let obj = |p: f64, b: f64| clayton_gamma_bound(b, p).unwrap_or(0.0) / p;
    // Truncated search domain; the objective decays toward both truncated
    // boundaries, which is asserted below and the domain widened if not.
    let mut p_min = 1e-6;
    let mut b_max = 100.0;
    loop {
        let (kappa, p_star, b_star) = kappa_search(&obj, p_min, b_max);
        let p_lo_ok = obj(p_min, b_star) < kappa - 1e-9;
        let b_hi_ok = obj(p_star, b_max) < kappa - 1e-9;
        if p_lo_ok && b_hi_ok {
            return KappaResult { kappa, p_star, b_star };
        }
        if !p_lo_ok {
            p_min *= 0.1;
        }
        if !b_hi_ok {
            b_max *= 2.0;
        }
        assert!(p_min > 1e-30 && b_max < 1e9, "kappa search failed to localize");
    }
}

fn kappa_search(obj: &dyn Fn(f64, f64) -> f64, p_min: f64, b_max: f64) -> (f64, f64, f64) {
    // Log-spaced grid in p, linear in b, then coordinate descent.
    let mut best = (f64::NEG_INFINITY, 0.1, 2.0);
    let np = 60;
    let nb = 80;
    for i in 0..=np {
        let p = p_min * (0.1f64 / p_min).powf(i as f64 / np as f64);
        for k in 0..=nb {
            let b = 1.0 + (b_max - 1.0) * k as f64 / nb as f64;
            let v = obj(p, b);
            if v > best.0 {
                best = (v, p, b);
            }
        }
    }
    let (_, mut p, mut b) = best;
    let mut val = best.0;
    for _ in 0..40 {
        let (nb_, vb) = golden_max(&|x| obj(p, x), (b - 0.5).max(1.0), (b + 0.5).min(b_max));
        b = nb_;
        let (np_, vp) = golden_max(&|x| obj(x, b), (p * 0.8).max(p_min), (p * 1.25).min(0.1));
        p = np_;
        if (vp - val).abs() < 1e-12 {
            val = vp;
            break;
        }
        val = vp.max(vb);
    }
    (val, p, b)
}

/// Simple Clayton(1) validity threshold t_p = p/(1+p).
pub fn clayton_threshold(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(p / (1.0 + p))
}

/// κ-corrected threshold u_p = p/1.131, valid for p ∈ (0, 0.1] under
/// Clayton(t), t ≥ 1.
pub fn clayton_threshold_kappa(p: f64) -> Result<f64> {
    check_p(p)?;
    if p > 0.1 {
        return Err(Error::domain(format!(
            "kappa threshold guarantee covers p in (0, 0.1], got {p}"
        )));
    }
    Ok(p / 1.131)
}

/// Asymptotic independence threshold
/// a_{n,p} ≈ ((π/2)·S₁⁻¹(1−p) + log(nπ/2) + 1 − γ)⁻¹.
pub fn asymptotic_threshold(n: usize, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("asymptotic threshold requires n >= 2"));
    }
    check_p(p)?;
    let denom = std::f64::consts::FRAC_PI_2 * stable1_quantile(1.0 - p)?
        + (n as f64 * std::f64::consts::FRAC_PI_2).ln()
        + 1.0
        - EULER_MASCHERONI;
    if denom <= 0.0 {
        return Err(Error::domain(format!(
            "asymptotic form is meaningless here (n = {n} too small for p = {p}: \
             nonpositive denominator {denom})"
        )));
    }
    Ok(1.0 / denom)
}

/// Lower bound p_m for the discrete anti-conservativeness statement:
/// p_m = p − (p^{1−r}/m)·((n·p^r − (n−1)((m+1)/m)^r)^{1/r} − 1/m)^{r−1}
/// when m > n^{−1/r}·p^{−1}, and 0 otherwise.
pub fn discrete_pm(n: usize, m: u64, r: f64, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if m < 2 {
        return Err(Error::domain(format!("grid size m must be >= 2, got {m}")));
    }
    if !(r <= -1.0) {
        return Err(Error::domain(format!("discrete bound requires r <= -1, got {r}")));
    }
    check_p(p)?;
    let nf = n as f64;
    let mf = m as f64;
    if mf <= nf.powf(-1.0 / r) / p {
        return Ok(0.0);
    }
    let z = (nf * p.powf(r) - (nf - 1.0) * ((mf + 1.0) / mf).powf(r)).powf(1.0 / r) - 1.0 / mf;
    // just above activation the correction term can exceed p; the bound
    // is vacuous there, not negative
    Ok((p - (p.powf(1.0 - r) / mf) * z.powf(r - 1.0)).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clayton_exact_single_uniform_reduces_to_p() {
        for &r in &[1.0, 2.0, 5.0] {
            for &p in &[0.01, 0.3, 0.9] {
                let v = clayton_exact_cdf(1, r, p).unwrap();
                assert!((v - p).abs() < 1e-12, "r={r} p={p} v={v}");
            }
        }
    }

    #[test]
    fn clayton_exact_hand_value() {
        // n=2, r=1, p=0.1: 1 - (18/19)^2 = 37/361
        let v = clayton_exact_cdf(2, 1.0, 0.1).unwrap();
        assert!((v - 37.0 / 361.0).abs() < 1e-12, "v={v}");
    }

    #[test]
    fn gamma_bound_t1_closed_form() {
        for &p in &[0.01, 0.1, 0.4] {
            let want = 1.0 - (1.0f64 - 1.0 / (1.0 - p)).exp();
            let got = clayton_gamma_bound(1.0, p).unwrap();
            assert!((got - want).abs() < 1e-12, "p={p}");
        }
        let got = clayton_gamma_bound(1.0, 0.1).unwrap();
        assert!((got - (1.0 - (-1.0f64 / 9.0).exp())).abs() < 1e-12);
    }

    #[test]
    fn bound_dominates_exact() {
        for &n in &[2usize, 5, 10] {
            for &t in &[1.0, 2.0] {
                for &p in &[0.01, 0.05, 0.1] {
                    let exact = clayton_exact_cdf(n, t, p).unwrap();
                    let bound = clayton_gamma_bound(t, p).unwrap();
                    assert!(p < exact, "n={n} t={t} p={p}");
                    assert!(exact <= bound + 1e-12, "n={n} t={t} p={p}");
                }
            }
        }
    }

    #[test]
    fn sup_bound_values() {
        let v = clayton_sup_bound(0.1).unwrap();
        assert!((v - 0.11304391).abs() < 1e-6, "v={v}");
        for &p in &[0.01, 0.05, 0.1] {
            assert!(clayton_sup_bound(p).unwrap() >= clayton_gamma_bound(1.0, p).unwrap());
        }
    }

    #[test]
    fn kappa_matches_reference() {
        let k = kappa_constant();
        assert!((k.kappa - 1.1304).abs() < 1e-3, "kappa={}", k.kappa);
        assert!((k.p_star - 0.1).abs() < 1e-3, "p*={}", k.p_star);
        assert!((k.b_star - 2.0853).abs() < 1e-2, "b*={}", k.b_star);
    }

    #[test]
    fn kappa_dominates_random_points() {
        let k = kappa_constant();
        let mut rng = crate::rng::RandomStream::new(77, 0);
        for _ in 0..100 {
            let p = rng.uniform(1e-4, 0.1);
            let b = rng.uniform(1.0, 50.0);
            let v = clayton_gamma_bound(b, p).unwrap() / p;
            assert!(k.kappa >= v - 1e-9, "p={p} b={b} v={v}");
        }
    }

    #[test]
    fn thresholds_arithmetic() {
        assert!((clayton_threshold(0.05).unwrap() - 0.05 / 1.05).abs() < 1e-15);
        assert!((clayton_threshold_kappa(0.05).unwrap() - 0.05 / 1.131).abs() < 1e-15);
        assert!(clayton_threshold_kappa(0.2).is_err());
    }

    #[test]
    fn asymptotic_threshold_log_slope() {
        for &p in &[0.05, 0.1, 0.3] {
            let a1 = asymptotic_threshold(100, p).unwrap();
            let a2 = asymptotic_threshold(1000, p).unwrap();
            assert!((1.0 / a2 - 1.0 / a1 - 10f64.ln()).abs() < 1e-9, "p={p}");
            assert!(a2 < a1);
        }
    }

    #[test]
    fn asymptotic_threshold_reference_value() {
        // ((π/2)·S₁⁻¹(0.9) + log(2500π) + 1 − γ)⁻¹
        let a = asymptotic_threshold(5000, 0.1).unwrap();
        assert!((a - 0.048569006).abs() < 1e-6, "a={a}");
    }

    #[test]
    fn discrete_pm_cases() {
        assert_eq!(discrete_pm(2, 20, -1.0, 0.1).unwrap(), 0.0);
        let v = discrete_pm(2, 100, -1.0, 0.1).unwrap();
        assert!((v - 0.04490707253065201).abs() < 1e-10, "v={v}");
        let v = discrete_pm(2, 1_000_000, -1.0, 0.1).unwrap();
        assert!((v - 0.1).abs() < 1e-3);
        assert!(discrete_pm(2, 100, -0.5, 0.1).is_err());
    }

    #[test]
    fn discrete_pm_monotone_in_m() {
        let mut prev = 0.0;
        for &m in &[21u64, 50, 100, 1000, 10_000, 100_000] {
            let v = discrete_pm(2, m, -1.0, 0.1).unwrap();
            assert!(v >= prev, "m={m}");
            assert!(v < 0.1);
            prev = v;
        }
    }
}
