//! The stable law S₁ (tail index 1, skewness 1, unit scale, zero location),
//! with characteristic function exp(−|θ|(1 + i(2/π)·sign(θ)·log|θ|)).
//!
//! The CDF is computed by Gil–Pelaez inversion of the characteristic
//! function with adaptive quadrature. Deep in the tails the oscillatory
//! inversion integral degenerates, so there the equivalent non-oscillatory
//! exponential-form integral is used instead; the two representations
//! agree to machine precision on the overlap (see tests).
//!
//! The sampler is the Chambers–Mallows–Stuck transform specialized to
//! α = 1, β = 1, which for this α carries the log-correction term
//! −ln((π/2)·W·cos V / (π/2 + V)).

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use std::f64::consts::{FRAC_PI_2, PI};

const CDF_TOL: f64 = 1e-10;

/// Marker for the fully fixed S₁ law.
#[derive(Debug, Clone, Copy, Default)]
pub struct StableOneParams;

/// F(x) for S₁. Absolute error target 1e-8 (typically much better).
pub fn stable1_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("stable1_cdf requires finite x, got {x}")));
    }
    // Left of -2.5 the CDF is below the oscillatory-cancellation noise
    // floor of the inversion integral; use the exponential form there.
    let v = if (-2.5..=30.0).contains(&x) {
        gil_pelaez(x)?
    } else {
        exponential_form(x)?
    };
    Ok(v.clamp(0.0, 1.0))
}

/// Gil–Pelaez: F(x) = 1/2 + (1/π) ∫₀^∞ e^{−t} sin(t·x + (2/π)·t·ln t)/t dt.
fn gil_pelaez(x: f64) -> Result<f64> {
    // The integrand behaves like x + (2/π)ln t near 0 (integrable log
    // singularity); handle [0, eps] by its leading expansion.
    let eps = 1e-8;
    let head = eps * x + (2.0 / PI) * eps * (eps.ln() - 1.0);
    // e^{-t}/t tail bound: below 1e-18 past t = 45.
    let upper = 45.0;
    let f = |t: f64| (-t).exp() * (t * x + (2.0 / PI) * t * t.ln()).sin() / t;
    // Pre-split so each panel sees at most ~one oscillation period.
    let period = 2.0 * PI / (x.abs() + 4.0);
    let panels = ((upper - eps) / period).ceil().max(8.0) as usize;
    let mut sum = 0.0;
    let mut achieved = 0.0f64;
    let step = (upper - eps) / panels as f64;
    for k in 0..panels {
        let a = eps + step * k as f64;
        let (v, e) = adaptive_gk15(&f, a, a + step, CDF_TOL / panels as f64, 30);
        sum += v;
        achieved += e;
    }
    if achieved > 1e-8 {
        return Err(Error::Accuracy { achieved, target: 1e-8 });
    }
    Ok(0.5 + (head + sum) / PI)
}

/// Non-oscillatory representation used deep in the tails:
/// F(x) = (1/π) ∫_{−π/2}^{π/2} exp(−V(u)·e^{−πx/2}) du with
/// V(u) = (2/π)·((π/2 + u)/cos u)·exp((π/2 + u)·tan u).
fn exponential_form(x: f64) -> Result<f64> {
    let log_c = -FRAC_PI_2 * x;
    let f = |u: f64| {
        let half_plus = FRAC_PI_2 + u;
        if half_plus <= 0.0 {
            // endpoint limit: V -> (2/π) e^{-1}
            let w = (2.0 / PI).ln() - 1.0 + log_c;
            return exp_neg_exp(w);
        }
        let log_v = (2.0 / PI).ln() + half_plus.ln() - u.cos().ln() + half_plus * u.tan();
        exp_neg_exp(log_v + log_c)
    };
    // For large x the integrand transitions from 1 to 0 in a thin layer
    // near u = π/2; seed the subdivision geometrically toward that end.
    let mut knots = vec![-FRAC_PI_2];
    for k in 0..60 {
        let u = FRAC_PI_2 - FRAC_PI_2 * 0.7f64.powi(k);
        if u > -FRAC_PI_2 {
            knots.push(u);
        }
    }
    knots.push(FRAC_PI_2);
    let mut sum = 0.0;
    let mut achieved = 0.0f64;
    for w in knots.windows(2) {
        let (v, e) = adaptive_gk15(&f, w[0], w[1], CDF_TOL / knots.len() as f64, 40);
        sum += v;
        achieved += e;
    }
    if achieved > 1e-8 {
        return Err(Error::Accuracy { achieved, target: 1e-8 });
    }
    Ok(sum / PI)
}

/// exp(−e^w), guarded against overflow/underflow of the inner exp.
fn exp_neg_exp(w: f64) -> f64 {
    if w > 5.0 {
        0.0
    } else if w < -40.0 {
        1.0
    } else {
        (-w.exp()).exp()
    }
}

/// Quantile of S₁: root of stable1_cdf(x) = q by geometric bracket
/// expansion and bisection with interpolation acceleration.
pub fn stable1_quantile(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("stable1_quantile requires q in (0,1), got {q}")));
    }
    // Initial guess: median ~0.5756; right tail ~ 1 - (2/π)/x.
    let mut lo = if q > 0.9 { (2.0 / PI) / (1.0 - q) * 0.2 } else { -3.0 };
    let mut hi = if q > 0.9 { (2.0 / PI) / (1.0 - q) * 5.0 } else { 3.0 };
    let mut flo = stable1_cdf(lo)? - q;
    while flo > 0.0 {
        lo = if lo < 0.0 { lo * 2.0 } else { lo - 2.0 * (hi - lo).abs().max(1.0) };
        flo = stable1_cdf(lo)? - q;
    }
    let mut fhi = stable1_cdf(hi)? - q;
    while fhi < 0.0 {
        hi = if hi > 0.0 { hi * 2.0 } else { hi + 2.0 * (hi - lo).abs().max(1.0) };
        fhi = stable1_cdf(hi)? - q;
    }
    // Bisection with a secant step when it stays inside the bracket.
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        let secant = lo - flo * (hi - lo) / (fhi - flo);
        mid = if secant > lo && secant < hi && (fhi - flo).abs() > 0.0 {
            0.5 * (secant + 0.5 * (lo + hi))
        } else {
            0.5 * (lo + hi)
        };
        let fm = stable1_cdf(mid)? - q;
        if fm.abs() <= 1e-9 || (hi - lo) < 1e-12 * (1.0 + mid.abs()) {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    let achieved = (stable1_cdf(mid)? - q).abs();
    if achieved <= 1e-8 {
        Ok(mid)
    } else {
        Err(Error::Accuracy { achieved, target: 1e-8 })
    }
}

/// One S₁ draw via the Chambers–Mallows–Stuck transform (α = 1, β = 1).
pub fn stable1_sample(rng: &mut RandomStream) -> f64 {
    let v = rng.uniform(-FRAC_PI_2, FRAC_PI_2);
    let w = rng.exp1();
    let a = FRAC_PI_2 + v;
    (2.0 / PI) * (a * v.tan() - (FRAC_PI_2 * w * v.cos() / a).ln())
}

/// Adaptive Gauss–Kronrod 7-15 on [a, b]; returns (integral, error estimate).
pub(crate) fn adaptive_gk15<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> (f64, f64) {
    let (v, e) = gk15(f, a, b);
    if e <= tol || depth == 0 || (b - a) < 1e-14 {
        return (v, e);
    }
    let m = 0.5 * (a + b);
    let (v1, e1) = adaptive_gk15(f, a, m, 0.5 * tol, depth - 1);
    let (v2, e2) = adaptive_gk15(f, m, b, 0.5 * tol, depth - 1);
    (v1 + v2, e1 + e2)
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    // Kronrod 15-point nodes/weights and embedded Gauss 7-point weights.
    const XK: [f64; 8] = [
        0.991455371120813,
        0.949107912342759,
        0.864864423359769,
        0.741531185599394,
        0.586087235467691,
        0.405845151377397,
        0.207784955007898,
        0.0,
    ];
    const WK: [f64; 8] = [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
    ];
    const WG: [f64; 4] = [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
    ];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut resk = 0.0;
    let mut resg = 0.0;
    for i in 0..8 {
        let dx = h * XK[i];
        let fv = if i == 7 {
            f(c)
        } else {
            f(c - dx) + f(c + dx)
        };
        resk += WK[i] * fv;
        if i % 2 == 1 {
            resg += WG[i / 2] * fv;
        }
    }
    let vk = resk * h;
    let vg = resg * h;
    (vk, (vk - vg).abs().powf(1.5).min((vk - vg).abs()))
}
