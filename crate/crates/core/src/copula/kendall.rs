//! Empirical Kendall tau between two coordinates of a copula model.

use super::CopulaModel;
use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Pairwise concordance estimator over `reps` samples of coordinates
/// (i, j) (1-based). O(reps log reps) via inversion counting.
pub fn kendall_tau_empirical(
    model: &CopulaModel,
    pair: (usize, usize),
    reps: usize,
    rng: &mut RandomStream,
) -> Result<f64> {
    let (i, j) = pair;
    let dim = model.dimension();
    if i == j || i == 0 || j == 0 || i > dim || j > dim {
        return Err(Error::shape(format!(
            "invalid coordinate pair ({i}, {j}) for dimension {dim}"
        )));
    }
    if reps < 1000 {
        return Err(Error::Precondition(format!(
            "kendall tau needs reps >= 1000, got {reps}"
        )));
    }
    let mut xs = Vec::with_capacity(reps);
    let mut buf = Vec::with_capacity(dim);
    for _ in 0..reps {
        buf.clear();
        model.sample_into(rng, &mut buf);
        xs.push((buf[i - 1], buf[j - 1]));
    }
    // Sort by the first coordinate (ties broken by the second), then count
    // strict inversions of the second coordinate.
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ys: Vec<f64> = xs.iter().map(|p| p.1).collect();
    let mut tmp = vec![0.0; ys.len()];
    let inversions = count_inversions(&mut ys, &mut tmp);
    let n = reps as f64;
    Ok(1.0 - 4.0 * inversions as f64 / (n * (n - 1.0)))
}

fn count_inversions(a: &mut [f64], tmp: &mut [f64]) -> u64 {
    let n = a.len();
    if n <= 1 {
        return 0;
    }
    let mid = n / 2;
    let (lo, hi) = a.split_at_mut(mid);
    let mut inv = count_inversions(lo, &mut tmp[..mid]) + count_inversions(hi, &mut tmp[mid..]);
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < lo.len() && j < hi.len() {
        if hi[j] < lo[i] {
            inv += (lo.len() - i) as u64;
            tmp[k] = hi[j];
            j += 1;
        } else {
            tmp[k] = lo[i];
            i += 1;
        }
        k += 1;
    }
    tmp[k..k + lo.len() - i].copy_from_slice(&lo[i..]);
    tmp[k + lo.len() - i..n].copy_from_slice(&hi[j..]);
    a.copy_from_slice(&tmp[..n]);
    inv
}
