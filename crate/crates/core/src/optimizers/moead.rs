//! Tchebycheff decomposition.

/// Weight substituted for a zero weight component.
pub const MIN_WEIGHT: f64 = 1e-6;

/// `max_i w_i * |point_i - ideal_i|` on a minimized point.
pub fn moead_aggregate(point: [f64; 2], weight: [f64; 2], ideal: [f64; 2]) -> f64 {
    (0..2)
        .map(|i| {
            let w = if weight[i] == 0.0 {
                MIN_WEIGHT
            } else {
                weight[i]
            };
            w * (point[i] - ideal[i]).abs()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `n` uniformly spaced weight vectors from `(0, 1)` to `(1, 0)`.
pub fn uniform_weights(n: usize) -> Vec<[f64; 2]> {
    if n == 1 {
        return vec![[0.5, 0.5]];
    }
    (0..n)
        .map(|i| {
            let a = i as f64 / (n - 1) as f64;
            [a, 1.0 - a]
        })
        .collect()
}

/// For each weight, the `size` nearest weights (itself included) by
/// Euclidean distance, ties broken by index.
pub fn neighborhoods(weights: &[[f64; 2]], size: usize) -> Vec<Vec<usize>> {
    let size = size.min(weights.len());
    weights
        .iter()
        .map(|w| {
            let mut idx: Vec<usize> = (0..weights.len()).collect();
            let dist = |j: usize| (w[0] - weights[j][0]).powi(2) + (w[1] - weights[j][1]).powi(2);
            idx.sort_by(|&a, &b| dist(a).total_cmp(&dist(b)).then(a.cmp(&b)));
            idx.truncate(size);
            idx
        })
        .collect()
}
