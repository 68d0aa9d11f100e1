//! Statistical checks on the copula samplers: uniform marginals
//! (Kolmogorov–Smirnov), pairwise correlations of the block examples,
//! Kendall tau, and the stable-law sampler against its own CDF.

use subuni::copula::{kendall_tau_empirical, CopulaModel};
use subuni::specfun::stable1_cdf;
use subuni::RandomStream;

const N: usize = 20_000;
// asymptotic KS critical value at alpha = 0.001, with headroom
fn ks_crit(n: usize) -> f64 {
    1.95 / (n as f64).sqrt()
}

fn draw(model: &CopulaModel, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = RandomStream::new(seed, 0);
    (0..n).map(|_| model.sample(&mut rng)).collect()
}

fn ks_uniform(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let lo = (x - i as f64 / n).abs();
            let hi = ((i + 1) as f64 / n - x).abs();
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

fn assert_uniform_margins(model: CopulaModel, seed: u64) {
    let model = model.validate().unwrap();
    let dim = model.dimension();
    let samples = draw(&model, N, seed);
    for j in 0..dim {
        let col: Vec<f64> = samples.iter().map(|s| s[j]).collect();
        let d = ks_uniform(col);
        assert!(d < ks_crit(N), "margin {j} of {model:?}: KS = {d}");
    }
}

#[test]
fn marginals_independence_comonotone_extremal() {
    assert_uniform_margins(CopulaModel::Independence { n: 4 }, 1);
    assert_uniform_margins(CopulaModel::Comonotone { n: 3 }, 2);
    assert_uniform_margins(CopulaModel::Extremal { n: 4, j: vec![1, 3] }, 3);
    assert_uniform_margins(
        CopulaModel::ExtremalMixture {
            n: 3,
            components: vec![(vec![1], 0.25), (vec![1, 2], 0.35), (vec![1, 2, 3], 0.4)],
        },
        4,
    );
}

#[test]
fn marginals_elliptical() {
    assert_uniform_margins(CopulaModel::GaussEquicorr { n: 4, rho: 0.6 }, 5);
    assert_uniform_margins(CopulaModel::TEquicorr { n: 3, rho: 0.5, df: 4.0 }, 6);
}

#[test]
fn marginals_archimedean() {
    assert_uniform_margins(CopulaModel::Clayton { n: 4, t: 1.0 }, 7);
    assert_uniform_margins(CopulaModel::Clayton { n: 3, t: 0.3 }, 8);
    assert_uniform_margins(CopulaModel::Gumbel { n: 4, theta: 2.5 }, 9);
}

#[test]
fn marginals_blocks_and_combinators() {
    assert_uniform_margins(CopulaModel::BlockExampleA { n: 3, beta: 0.5 }, 10);
    assert_uniform_margins(CopulaModel::BlockExampleB { n: 3, beta: 0.5 }, 11);
    assert_uniform_margins(
        CopulaModel::Mixture {
            components: vec![
                (CopulaModel::Independence { n: 3 }, 0.5),
                (CopulaModel::Clayton { n: 3, t: 1.0 }, 0.5),
            ],
        },
        12,
    );
    assert_uniform_margins(
        CopulaModel::Product {
            factors: vec![
                CopulaModel::Comonotone { n: 2 },
                CopulaModel::Gumbel { n: 2, theta: 3.0 },
            ],
        },
        13,
    );
    assert_uniform_margins(
        CopulaModel::ComonotoneGroups {
            base: Box::new(CopulaModel::Clayton { n: 2, t: 1.0 }),
            sizes: vec![2, 3],
        },
        14,
    );
}

#[test]
fn discretized_marginal_matches_discrete_uniform() {
    // U = ceil(mV)/m lives on {1/m, …, 1}; its CDF at k/m equals k/m.
    let m = 50u64;
    let model = CopulaModel::Discretized {
        base: Box::new(CopulaModel::Independence { n: 2 }),
        m,
    }
    .validate()
    .unwrap();
    let samples = draw(&model, N, 15);
    for j in 0..2 {
        for k in [1u64, 10, 25, 49] {
            let x = k as f64 / m as f64;
            let emp = samples.iter().filter(|s| s[j] <= x + 1e-12).count() as f64 / N as f64;
            assert!((emp - x).abs() < ks_crit(N), "k={k} emp={emp}");
        }
        assert!(samples.iter().all(|s| {
            let v = s[j] * m as f64;
            (v - v.round()).abs() < 1e-9 && s[j] > 0.0 && s[j] <= 1.0
        }));
    }
}

fn pearson(samples: &[Vec<f64>], i: usize, j: usize) -> f64 {
    let n = samples.len() as f64;
    let mi = samples.iter().map(|s| s[i]).sum::<f64>() / n;
    let mj = samples.iter().map(|s| s[j]).sum::<f64>() / n;
    let mut cij = 0.0;
    let mut cii = 0.0;
    let mut cjj = 0.0;
    for s in samples {
        let a = s[i] - mi;
        let b = s[j] - mj;
        cij += a * b;
        cii += a * a;
        cjj += b * b;
    }
    cij / (cii * cjj).sqrt()
}

#[test]
fn block_example_correlations() {
    let beta = 0.5f64;
    let a = draw(
        &CopulaModel::BlockExampleA { n: 3, beta }.validate().unwrap(),
        100_000,
        16,
    );
    let got = pearson(&a, 0, 2);
    let want = 1.0 - beta.powi(3);
    assert!((got - want).abs() < 0.01, "A: got={got} want={want}");

    let b = draw(
        &CopulaModel::BlockExampleB { n: 3, beta }.validate().unwrap(),
        100_000,
        17,
    );
    let got = pearson(&b, 0, 1);
    let want = beta.powi(4);
    assert!((got - want).abs() < 0.01, "B: got={got} want={want}");
}

#[test]
fn gauss_equicorr_latent_correlation() {
    // pairwise correlation of the latent normals is rho^2
    let rho = 0.7f64;
    let model = CopulaModel::GaussEquicorr { n: 2, rho }.validate().unwrap();
    let samples = draw(&model, 100_000, 18);
    let z: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| {
            s.iter()
                .map(|&u| subuni::specfun::normal_quantile(u).unwrap())
                .collect()
        })
        .collect();
    let got = pearson(&z, 0, 1);
    assert!((got - rho * rho).abs() < 0.01, "got={got} want={}", rho * rho);
}

#[test]
fn clayton_kendall_tau_theory() {
    let mut rng = RandomStream::new(19, 0);
    for &t in &[1.0, 2.0] {
        let model = CopulaModel::Clayton { n: 2, t }.validate().unwrap();
        let tau = kendall_tau_empirical(&model, (1, 2), 60_000, &mut rng).unwrap();
        let want = t / (t + 2.0);
        assert!((tau - want).abs() < 0.01, "t={t} tau={tau} want={want}");
    }
}

#[test]
fn stable_sampler_matches_cdf() {
    // transform draws through the CDF; result must be uniform
    let mut rng = RandomStream::new(20, 0);
    let us: Vec<f64> = (0..N)
        .map(|_| stable1_cdf(subuni::specfun::stable1_sample(&mut rng)).unwrap())
        .collect();
    let d = ks_uniform(us);
    assert!(d < ks_crit(N), "KS = {d}");
}
