//! Dependence models: sampling joint vectors of n dependent standard
//! uniform (or grid-discretized) p-values, plus the mixture, product,
//! and comonotone-group combinators.

mod kendall;
pub mod parse;

pub use kendall::kendall_tau_empirical;
pub use parse::{parse_model, parse_stat};

use crate::error::{Error, Result};
use crate::merge::Weights;
use crate::rng::RandomStream;
use crate::specfun::{normal_cdf, student_t_cdf};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub enum CopulaModel {
    Independence { n: usize },
    Comonotone { n: usize },
    /// Uᵢ = Φ(ρZ + √(1−ρ²)Zᵢ). ρ is the mixing coefficient; the pairwise
    /// correlation of the latent normals is ρ².
    GaussEquicorr { n: usize, rho: f64 },
    TEquicorr { n: usize, rho: f64, df: f64 },
    Clayton { n: usize, t: f64 },
    Gumbel { n: usize, theta: f64 },
    /// Uⱼ = U for j ∈ J, 1 − U otherwise; J is canonicalized to contain 1.
    Extremal { n: usize, j: Vec<usize> },
    ExtremalMixture {
        n: usize,
        components: Vec<(Vec<usize>, f64)>,
    },
    /// Uᵢ = 1{X≤β}Zᵢ + 1{X>β}Y with shared X and Y; corr(Uᵢ,Uⱼ) = 1 − β³.
    BlockExampleA { n: usize, beta: f64 },
    /// Uᵢ = 1{Xᵢ≤β}Z + 1{Xᵢ>β}Yᵢ with shared Z; corr(Uᵢ,Uⱼ) = β⁴.
    BlockExampleB { n: usize, beta: f64 },
    Mixture { components: Vec<(CopulaModel, f64)> },
    Product { factors: Vec<CopulaModel> },
    ComonotoneGroups {
        base: Box<CopulaModel>,
        sizes: Vec<usize>,
    },
    /// Uᵢ = ⌈m·Vᵢ⌉/m for a base sample (V₁,…,V_n).
    Discretized { base: Box<CopulaModel>, m: u64 },
}

/// Gaussian model parameterized by target pairwise latent correlation
/// instead of the mixing coefficient.
pub fn gauss_equicorr_from_pairwise(n: usize, pairwise: f64) -> Result<CopulaModel> {
    if !(0.0..=1.0).contains(&pairwise) {
        return Err(Error::domain(format!("pairwise correlation must be in [0,1], got {pairwise}")));
    }
    CopulaModel::GaussEquicorr { n, rho: pairwise.sqrt() }.validate()
}

impl CopulaModel {
    pub fn dimension(&self) -> usize {
        match self {
            CopulaModel::Independence { n }
            | CopulaModel::Comonotone { n }
            | CopulaModel::GaussEquicorr { n, .. }
            | CopulaModel::TEquicorr { n, .. }
            | CopulaModel::Clayton { n, .. }
            | CopulaModel::Gumbel { n, .. }
            | CopulaModel::Extremal { n, .. }
            | CopulaModel::ExtremalMixture { n, .. }
            | CopulaModel::BlockExampleA { n, .. }
            | CopulaModel::BlockExampleB { n, .. } => *n,
            CopulaModel::Mixture { components } => {
                components.first().map_or(0, |(m, _)| m.dimension())
            }
            CopulaModel::Product { factors } => factors.iter().map(|f| f.dimension()).sum(),
            CopulaModel::ComonotoneGroups { sizes, .. } => sizes.iter().sum(),
            CopulaModel::Discretized { base, .. } => base.dimension(),
        }
    }

    /// Check all invariants and return the canonicalized model.
    pub fn validate(self) -> Result<CopulaModel> {
        match self {
            CopulaModel::Independence { n } | CopulaModel::Comonotone { n } if n == 0 => {
                Err(Error::domain("dimension must be at least 1"))
            }
            m @ (CopulaModel::Independence { .. } | CopulaModel::Comonotone { .. }) => Ok(m),
            CopulaModel::GaussEquicorr { n, rho } => {
                check_dim(n)?;
                if !(0.0..=1.0).contains(&rho) {
                    return Err(Error::domain(format!("gauss rho must be in [0,1], got {rho}")));
                }
                Ok(CopulaModel::GaussEquicorr { n, rho })
            }
            CopulaModel::TEquicorr { n, rho, df } => {
                check_dim(n)?;
                if !(0.0..=1.0).contains(&rho) {
                    return Err(Error::domain(format!("t-copula rho must be in [0,1], got {rho}")));
                }
                if !(df > 0.0) || !df.is_finite() {
                    return Err(Error::domain(format!("t-copula df must be positive, got {df}")));
                }
                Ok(CopulaModel::TEquicorr { n, rho, df })
            }
            CopulaModel::Clayton { n, t } => {
                check_dim(n)?;
                if !(t > 0.0) || !t.is_finite() {
                    return Err(Error::domain(format!("clayton parameter t must be positive, got {t}")));
                }
                Ok(CopulaModel::Clayton { n, t })
            }
            CopulaModel::Gumbel { n, theta } => {
                check_dim(n)?;
                if !(theta >= 1.0) || !theta.is_finite() {
                    return Err(Error::domain(format!("gumbel parameter theta must be >= 1, got {theta}")));
                }
                Ok(CopulaModel::Gumbel { n, theta })
            }
            CopulaModel::Extremal { n, j } => {
                check_dim(n)?;
                let j = canonicalize_index_set(n, j)?;
                Ok(CopulaModel::Extremal { n, j })
            }
            CopulaModel::ExtremalMixture { n, components } => {
                check_dim(n)?;
                if components.is_empty() {
                    return Err(Error::shape("extremal mixture needs at least one component"));
                }
                let weights = normalize_weights(components.iter().map(|(_, a)| *a).collect())?;
                let comps = components
                    .into_iter()
                    .zip(weights)
                    .map(|((j, _), a)| Ok((canonicalize_index_set(n, j)?, a)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(CopulaModel::ExtremalMixture { n, components: comps })
            }
            CopulaModel::BlockExampleA { n: _, beta } | CopulaModel::BlockExampleB { n: _, beta }
                if !(beta > 0.0 && beta < 1.0) =>
            {
                Err(Error::domain(format!("block example beta must be in (0,1), got {beta}")))
            }
            CopulaModel::BlockExampleA { n, beta } => {
                check_dim(n)?;
                Ok(CopulaModel::BlockExampleA { n, beta })
            }
            CopulaModel::BlockExampleB { n, beta } => {
                check_dim(n)?;
                Ok(CopulaModel::BlockExampleB { n, beta })
            }
            CopulaModel::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::shape("mixture needs at least one component"));
                }
                let weights = normalize_weights(components.iter().map(|(_, a)| *a).collect())?;
                let comps = components
                    .into_iter()
                    .zip(weights)
                    .map(|((m, _), a)| Ok((m.validate()?, a)))
                    .collect::<Result<Vec<_>>>()?;
                let dim = comps[0].0.dimension();
                if comps.iter().any(|(m, _)| m.dimension() != dim) {
                    return Err(Error::shape("mixture components must have equal dimension"));
                }
                Ok(CopulaModel::Mixture { components: comps })
            }
            CopulaModel::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::shape("product needs at least one factor"));
                }
                let factors = factors
                    .into_iter()
                    .map(CopulaModel::validate)
                    .collect::<Result<Vec<_>>>()?;
                Ok(CopulaModel::Product { factors })
            }
            CopulaModel::ComonotoneGroups { base, sizes } => {
                let base = base.validate()?;
                if sizes.len() != base.dimension() {
                    return Err(Error::shape(format!(
                        "groups: {} sizes given for base dimension {}",
                        sizes.len(),
                        base.dimension()
                    )));
                }
                if sizes.iter().any(|&s| s == 0) {
                    return Err(Error::domain("group sizes must be positive"));
                }
                Ok(CopulaModel::ComonotoneGroups { base: Box::new(base), sizes })
            }
            CopulaModel::Discretized { base, m } => {
                if m < 2 {
                    return Err(Error::domain(format!("discretization grid size must be >= 2, got {m}")));
                }
                let base = base.validate()?;
                Ok(CopulaModel::Discretized { base: Box::new(base), m })
            }
        }
    }

    /// Draw one joint vector; entries in (0,1), or on {1/m,…,m/m} for
    /// Discretized. Assumes the model has been validated.
    pub fn sample(&self, rng: &mut RandomStream) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dimension());
        self.sample_into(rng, &mut out);
        out
    }

    /// Append one joint vector to `out` (allocation-free hot path).
    pub fn sample_into(&self, rng: &mut RandomStream, out: &mut Vec<f64>) {
        match self {
            CopulaModel::Independence { n } => {
                for _ in 0..*n {
                    out.push(rng.open01());
                }
            }
            CopulaModel::Comonotone { n } => {
                let u = rng.open01();
                for _ in 0..*n {
                    out.push(u);
                }
            }
            CopulaModel::GaussEquicorr { n, rho } => {
                let z = rng.standard_normal();
                let s = (1.0 - rho * rho).max(0.0).sqrt();
                for _ in 0..*n {
                    let x = rho * z + s * rng.standard_normal();
                    out.push(clamp_open(normal_cdf(x)));
                }
            }
            CopulaModel::TEquicorr { n, rho, df } => {
                let z = rng.standard_normal();
                let s = (1.0 - rho * rho).max(0.0).sqrt();
                let chi2 = 2.0 * rng.gamma(0.5 * df);
                let denom = (chi2 / df).sqrt().max(f64::MIN_POSITIVE);
                for _ in 0..*n {
                    let x = (rho * z + s * rng.standard_normal()) / denom;
                    let u = student_t_cdf(x, *df).expect("validated df");
                    out.push(clamp_open(u));
                }
            }
            CopulaModel::Clayton { n, t } => {
                // Frailty construction with unit exponential scale:
                // Uᵢ = (1 + Xᵢ/Y)^{−1/t}, Xᵢ ~ Exp(1), Y ~ Gamma(1/t, 1).
                let y = rng.gamma(1.0 / t).max(f64::MIN_POSITIVE);
                for _ in 0..*n {
                    let x = rng.exp1();
                    out.push(clamp_open((1.0 + x / y).powf(-1.0 / t)));
                }
            }
            CopulaModel::Gumbel { n, theta } => {
                if *theta == 1.0 {
                    for _ in 0..*n {
                        out.push(rng.open01());
                    }
                    return;
                }
                // Marshall–Olkin with positive-stable(1/θ) frailty.
                let alpha = 1.0 / theta;
                let s = positive_stable(alpha, rng);
                for _ in 0..*n {
                    let e = rng.exp1();
                    out.push(clamp_open((-(e / s).powf(alpha)).exp()));
                }
            }
            CopulaModel::Extremal { n, j } => {
                let u = rng.open01();
                push_extremal(*n, j, u, out);
            }
            CopulaModel::ExtremalMixture { n, components } => {
                let k = pick_component(components.iter().map(|(_, a)| *a), rng);
                let u = rng.open01();
                push_extremal(*n, &components[k].0, u, out);
            }
            CopulaModel::BlockExampleA { n, beta } => {
                let x = rng.open01();
                if x <= *beta {
                    for _ in 0..*n {
                        out.push(rng.uniform(0.0, *beta));
                    }
                } else {
                    let y = rng.uniform(*beta, 1.0);
                    for _ in 0..*n {
                        out.push(y);
                    }
                }
            }
            CopulaModel::BlockExampleB { n, beta } => {
                let z = rng.uniform(0.0, *beta);
                for _ in 0..*n {
                    let x = rng.open01();
                    if x <= *beta {
                        out.push(z);
                    } else {
                        out.push(rng.uniform(*beta, 1.0));
                    }
                }
            }
            CopulaModel::Mixture { components } => {
                let k = pick_component(components.iter().map(|(_, a)| *a), rng);
                components[k].0.sample_into(rng, out);
            }
            CopulaModel::Product { factors } => {
                for f in factors {
                    f.sample_into(rng, out);
                }
            }
            CopulaModel::ComonotoneGroups { base, sizes } => {
                let reps = base.sample(rng);
                for (u, &k) in reps.iter().zip(sizes) {
                    for _ in 0..k {
                        out.push(*u);
                    }
                }
            }
            CopulaModel::Discretized { base, m } => {
                let start = out.len();
                base.sample_into(rng, out);
                let m = *m as f64;
                for u in &mut out[start..] {
                    *u = (m * *u).ceil() / m;
                }
            }
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::domain("dimension must be at least 1"))
    } else {
        Ok(())
    }
}

fn clamp_open(u: f64) -> f64 {
    u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

/// Sort, dedup, range-check a 1-based index set; flip to the complement
/// when component 1 is absent (the two orientations give the same copula).
fn canonicalize_index_set(n: usize, mut j: Vec<usize>) -> Result<Vec<usize>> {
    j.sort_unstable();
    j.dedup();
    if j.iter().any(|&i| i == 0 || i > n) {
        return Err(Error::domain(format!("extremal index set must be within 1..={n}")));
    }
    if j.is_empty() || j[0] != 1 {
        let mut flipped = Vec::with_capacity(n - j.len());
        let mut it = j.iter().peekable();
        for i in 1..=n {
            if it.peek() == Some(&&i) {
                it.next();
            } else {
                flipped.push(i);
            }
        }
        j = flipped;
    }
    Ok(j)
}

fn normalize_weights(raw: Vec<f64>) -> Result<Vec<f64>> {
    if raw.iter().any(|a| !(0.0..=1.0 + 1e-9).contains(a)) {
        return Err(Error::domain("mixture weights must lie in [0, 1]"));
    }
    let sum: f64 = raw.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!("mixture weights must sum to 1 (within 1e-9), got {sum}")));
    }
    let w: Vec<f64> = raw.iter().map(|a| a / sum).collect();
    // normalize_weights output always forms a valid simplex point
    debug_assert!(Weights::new(w.clone()).is_ok());
    Ok(w)
}

fn pick_component(weights: impl Iterator<Item = f64>, rng: &mut RandomStream) -> usize {
    let u = rng.open01();
    let mut acc = 0.0;
    let mut last = 0;
    for (k, a) in weights.enumerate() {
        acc += a;
        last = k;
        if u <= acc {
            return k;
        }
    }
    last
}

fn push_extremal(n: usize, j: &[usize], u: f64, out: &mut Vec<f64>) {
    let mut it = j.iter().peekable();
    for i in 1..=n {
        if it.peek() == Some(&&i) {
            it.next();
            out.push(u);
        } else {
            out.push(1.0 - u);
        }
    }
}

/// Kanter's sampler for the positive stable law with Laplace transform
/// exp(−s^α), 0 < α < 1.
fn positive_stable(alpha: f64, rng: &mut RandomStream) -> f64 {
    let v = rng.uniform(0.0, PI);
    let w = rng.exp1();
    let a = (alpha * v).sin() / v.sin().powf(1.0 / alpha);
    let b = ((1.0 - alpha) * v).sin() / w;
    a * b.powf((1.0 - alpha) / alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comonotone_entries_equal() {
        let m = CopulaModel::Comonotone { n: 4 }.validate().unwrap();
        let mut rng = RandomStream::new(0, 0);
        for _ in 0..100 {
            let v = m.sample(&mut rng);
            assert!(v.iter().all(|&u| u == v[0]));
        }
    }

    #[test]
    fn extremal_defining_display() {
        let m = CopulaModel::Extremal { n: 3, j: vec![1, 3] }.validate().unwrap();
        let mut rng = RandomStream::new(1, 0);
        for _ in 0..100 {
            let v = m.sample(&mut rng);
            assert_eq!(v[0], v[2]);
            assert_eq!(v[1], 1.0 - v[0]);
        }
    }

    #[test]
    fn extremal_canonicalization_flips_to_contain_one() {
        let m = CopulaModel::Extremal { n: 3, j: vec![2] }.validate().unwrap();
        match m {
            CopulaModel::Extremal { j, .. } => assert_eq!(j, vec![1, 3]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn validate_rejects_bad_parameters() {
        assert!(CopulaModel::Gumbel { n: 3, theta: 0.5 }.validate().is_err());
        assert!(CopulaModel::Clayton { n: 3, t: 0.0 }.validate().is_err());
        assert!(CopulaModel::GaussEquicorr { n: 3, rho: 1.2 }.validate().is_err());
        assert!(CopulaModel::BlockExampleA { n: 3, beta: 1.0 }.validate().is_err());
        assert!(
            CopulaModel::Discretized { base: Box::new(CopulaModel::Independence { n: 2 }), m: 1 }
                .validate()
                .is_err()
        );
    }

    #[test]
    fn mixture_dimension_mismatch() {
        let m = CopulaModel::Mixture {
            components: vec![
                (CopulaModel::Independence { n: 2 }, 0.5),
                (CopulaModel::Independence { n: 3 }, 0.5),
            ],
        };
        assert!(matches!(m.validate(), Err(Error::Shape(_))));
    }

    #[test]
    fn mixture_weights_normalized_within_tolerance() {
        let m = CopulaModel::ExtremalMixture {
            n: 3,
            components: vec![(vec![1, 3], 0.5), (vec![1], 0.5 + 1e-12)],
        }
        .validate()
        .unwrap();
        match m {
            CopulaModel::ExtremalMixture { components, .. } => {
                let s: f64 = components.iter().map(|(_, a)| a).sum();
                assert!((s - 1.0).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
        let bad = CopulaModel::Mixture {
            components: vec![(CopulaModel::Independence { n: 2 }, 0.6), (CopulaModel::Independence { n: 2 }, 0.6)],
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn product_and_groups_dimensions() {
        let p = CopulaModel::Product {
            factors: vec![
                CopulaModel::Clayton { n: 3, t: 1.0 },
                CopulaModel::Independence { n: 2 },
            ],
        }
        .validate()
        .unwrap();
        assert_eq!(p.dimension(), 5);
        let g = CopulaModel::ComonotoneGroups {
            base: Box::new(CopulaModel::Independence { n: 3 }),
            sizes: vec![2, 2, 1],
        }
        .validate()
        .unwrap();
        assert_eq!(g.dimension(), 5);
        let mut rng = RandomStream::new(2, 0);
        let v = g.sample(&mut rng);
        assert_eq!(v[0], v[1]);
        assert_eq!(v[2], v[3]);
    }

    #[test]
    fn discretized_on_grid() {
        let m = CopulaModel::Discretized {
            base: Box::new(CopulaModel::Independence { n: 4 }),
            m: 50,
        }
        .validate()
        .unwrap();
        let mut rng = RandomStream::new(3, 0);
        for _ in 0..1000 {
            for u in m.sample(&mut rng) {
                let j = (u * 50.0).round();
                assert!((u - j / 50.0).abs() < 1e-12);
                assert!((1.0..=50.0).contains(&j));
            }
        }
    }

    #[test]
    fn sampling_deterministic() {
        let m = CopulaModel::Clayton { n: 5, t: 1.5 }.validate().unwrap();
        let a: Vec<f64> = m.sample(&mut RandomStream::new(9, 4));
        let b: Vec<f64> = m.sample(&mut RandomStream::new(9, 4));
        assert_eq!(a, b);
    }

    #[test]
    fn gauss_rho_one_is_comonotone() {
        let m = CopulaModel::GaussEquicorr { n: 3, rho: 1.0 }.validate().unwrap();
        let mut rng = RandomStream::new(4, 0);
        for _ in 0..50 {
            let v = m.sample(&mut rng);
            assert!((v[0] - v[1]).abs() < 1e-12 && (v[1] - v[2]).abs() < 1e-12);
        }
    }
}
