//! Indicator-based fitness with the additive epsilon indicator.

use rand::Rng;

/// Objective-wise normalization of a minimized set to `[0, 1]`. A component
/// with zero range maps to 0.
fn normalize(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for m in 0..2 {
            lo[m] = lo[m].min(p[m]);
            hi[m] = hi[m].max(p[m]);
        }
    }
    points
        .iter()
        .map(|p| {
            let mut q = [0.0; 2];
            for m in 0..2 {
                let range = hi[m] - lo[m];
                q[m] = if range > 0.0 {
                    (p[m] - lo[m]) / range
                } else {
                    0.0
                };
            }
            q
        })
        .collect()
}

/// Smallest shift by which `y` must be translated to weakly dominate `x`.
#[inline]
fn eps_indicator(y: [f64; 2], x: [f64; 2]) -> f64 {
    (y[0] - x[0]).max(y[1] - x[1])
}

/// Pairwise indicator matrix `I[y][x]` over the normalized set.
fn indicator_matrix(points: &[[f64; 2]]) -> Vec<Vec<f64>> {
    let norm = normalize(points);
    norm.iter()
        .map(|&y| norm.iter().map(|&x| eps_indicator(y, x)).collect())
        .collect()
}

/// `F(x) = sum over y != x of -exp(-I(y, x) / kappa)` on a minimized set;
/// higher is better.
pub fn ibea_fitness(points: &[[f64; 2]], kappa: f64) -> Vec<f64> {
    let ind = indicator_matrix(points);
    let n = points.len();
    (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x)
                .map(|y| -(-ind[y][x] / kappa).exp())
                .sum()
        })
        .collect()
}

/// Removes the worst-fitness member one at a time, updating the remaining
/// fitness after each removal, until `keep` members remain. Exact ties for
/// the worst are settled uniformly by `rng`. Returns the removed indices in
/// removal order.
pub fn ibea_removal_order<R: Rng + ?Sized>(
    points: &[[f64; 2]],
    kappa: f64,
    keep: usize,
    rng: &mut R,
) -> Vec<usize> {
    let n = points.len();
    let ind = indicator_matrix(points);
    let mut fitness: Vec<f64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x)
                .map(|y| -(-ind[y][x] / kappa).exp())
                .sum()
        })
        .collect();
    let mut alive = vec![true; n];
    let mut removed = Vec::new();
    while n - removed.len() > keep {
        let worst_val = (0..n)
            .filter(|&i| alive[i])
            .map(|i| fitness[i])
            .fold(f64::INFINITY, f64::min);
        let ties: Vec<usize> = (0..n)
            .filter(|&i| alive[i] && fitness[i] == worst_val)
            .collect();
        let worst = if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.gen_range(0..ties.len())]
        };
        alive[worst] = false;
        removed.push(worst);
        for z in 0..n {
            if alive[z] {
                fitness[z] += (-ind[worst][z] / kappa).exp();
            }
        }
    }
    removed
}
