//! Cross-checks of the special functions and Monte Carlo estimates
//! against an independent adaptive Simpson integrator written here, so
//! the library's own quadrature is never its own oracle.

use subuni::copula::CopulaModel;
use subuni::mc::{estimate_rn, SimulationPlan};
use subuni::merge::{MergeStatistic, Weights};
use subuni::specfun::{ln_gamma, normal_cdf, reg_inc_beta, reg_lower_gamma};

/// Adaptive Simpson, plain recursive bisection.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    fn simpson_rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    let whole = simpson_rule(f, a, b);
    let m = 0.5 * (a + b);
    let left = simpson_rule(f, a, m);
    let right = simpson_rule(f, m, b);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        left + right + (left + right - whole) / 15.0
    } else {
        simpson(f, a, m, 0.5 * tol, depth - 1) + simpson(f, m, b, 0.5 * tol, depth - 1)
    }
}

#[test]
fn incomplete_beta_against_simpson() {
    for &(a, b, x) in &[(3.0, 0.5, 0.7), (2.0, 2.0, 0.25), (0.5, 5.0, 0.1), (8.0, 1.5, 0.9)] {
        let lnb = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
        let dens = |t: f64| ((a - 1.0) * t.ln() + (b - 1.0) * (1.0 - t).ln() - lnb).exp();
        // avoid endpoint singularities: integrate on [eps, x] and add the
        // leading power behavior of the head analytically
        let eps = 1e-9f64;
        let head = (a * eps.ln() - a.ln() - lnb).exp(); // ∫0^eps t^{a-1}/B ≈ eps^a/(aB)
        let want = head + simpson(&dens, eps, x, 1e-12, 40);
        let got = reg_inc_beta(a, b, x).unwrap();
        assert!((got - want).abs() < 1e-9, "a={a} b={b} x={x} got={got} want={want}");
    }
    // frozen external reference
    let v = reg_inc_beta(3.0, 0.5, 0.7).unwrap();
    assert!((v - 0.15993052742645147349).abs() < 1e-13, "v={v}");
}

#[test]
fn incomplete_gamma_against_simpson() {
    for &(s, x) in &[(0.5, 1.0), (1.0, 2.0), (2.5, 0.7), (10.0, 12.0)] {
        let lng = ln_gamma(s);
        let dens = |t: f64| ((s - 1.0) * t.ln() - t - lng).exp();
        let eps = 1e-10f64;
        let head = (s * eps.ln() - s.ln() - lng).exp();
        let want = head + simpson(&dens, eps, x, 1e-13, 40);
        let got = reg_lower_gamma(s, x).unwrap();
        assert!((got - want).abs() < 1e-9, "s={s} x={x} got={got} want={want}");
    }
    let v = reg_lower_gamma(0.5, 1.0).unwrap();
    assert!((v - 0.84270079294971486934).abs() < 1e-13, "v={v}"); // erf(1)
}

#[test]
fn normal_cdf_against_simpson() {
    let dens = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    for &x in &[-2.0, -0.3, 0.0, 1.0, 2.5] {
        let want = 0.5 + simpson(&dens, 0.0, x, 1e-13, 40);
        let got = normal_cdf(x);
        assert!((got - want).abs() < 1e-11, "x={x}");
    }
    let v = normal_cdf(1.0);
    assert!((v - 0.84134474606854294859).abs() < 1e-13);
}

#[test]
fn independence_n2_rejection_rate_against_2d_quadrature() {
    // P(2/(1/U1 + 1/U2) <= p) = P(1/U1 + 1/U2 >= 2/p); for p = 0.1 the
    // exact value by nested quadrature is 0.11472219489583... The inner
    // integral is analytic: P(1/U2 >= T - 1/u) given u.
    let t_thr = 20.0f64;
    let inner = |u: f64| {
        let rem = t_thr - 1.0 / u;
        if rem <= 1.0 {
            1.0
        } else {
            1.0 / rem
        }
    };
    let want = simpson(&inner, 1e-12, 1.0, 1e-12, 48);
    assert!((want - 0.11472219489583259).abs() < 1e-9, "oracle drifted: {want}");

    let plan = SimulationPlan::new(31, 400_000).with_chunks(32);
    let model = CopulaModel::Independence { n: 2 };
    let stat = MergeStatistic::rmean(-1.0, Weights::equal(2)).unwrap();
    let est = estimate_rn(&plan, &model, &stat, 0.1).unwrap();
    assert!(
        est.ci_low <= want && want <= est.ci_high,
        "est={est:?} want={want}"
    );
}
