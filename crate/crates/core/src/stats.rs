//! Wilcoxon rank-sum test and the Vargha-Delaney Â12 effect size.

use statrs::function::erf::erfc;

/// Largest pooled sample size for the exact null distribution.
const EXACT_LIMIT: usize = 20;

/// Midranks (1-based) of the pooled samples.
fn ranks(pooled: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..pooled.len()).collect();
    idx.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut out = vec![0.0; pooled.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && pooled[idx[j + 1]] == pooled[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}

/// Number of `m`-subsets of `{1..n}` with each rank sum.
fn rank_sum_counts(n: usize, m: usize) -> Vec<Vec<u64>> {
    let max = n * (n + 1) / 2;
    // counts[k][s]: k-subsets of the ranks seen so far summing to s.
    let mut counts = vec![vec![0u64; max + 1]; m + 1];
    counts[0][0] = 1;
    for r in 1..=n {
        for k in (1..=m.min(r)).rev() {
            for s in (r..=max).rev() {
                counts[k][s] += counts[k - 1][s - r];
            }
        }
    }
    counts
}

/// Two-sided rank-sum (Mann-Whitney) p-value. Uses the exact null
/// distribution for at most 20 pooled values without ties, else the normal
/// approximation with tie and continuity corrections.
pub fn wilcoxon_rank_sum(x: &[f64], y: &[f64]) -> f64 {
    assert!(
        !x.is_empty() && !y.is_empty(),
        "rank-sum needs non-empty samples"
    );
    let (m, n) = (x.len(), y.len());
    let total = m + n;
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let r = ranks(&pooled);
    let w: f64 = r[..m].iter().sum();
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let has_ties = sorted.windows(2).any(|p| p[0] == p[1]);

    if total <= EXACT_LIMIT && !has_ties {
        let counts = &rank_sum_counts(total, m)[m];
        let all: u64 = counts.iter().sum();
        let w = w as usize;
        let lower: u64 = counts[..=w].iter().sum();
        let upper: u64 = counts[w..].iter().sum();
        let tail = lower.min(upper) as f64 / all as f64;
        return (2.0 * tail).min(1.0);
    }

    let (mf, nf, tf) = (m as f64, n as f64, total as f64);
    let u = w - mf * (mf + 1.0) / 2.0;
    let mean = mf * nf / 2.0;
    let mut tie_term = 0.0;
    let mut sorted = r.clone();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = mf * nf / 12.0 * ((tf + 1.0) - tie_term / (tf * (tf - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}

/// Probability that a value from `x` beats one from `y`, ties counting half.
pub fn a12(x: &[f64], y: &[f64]) -> f64 {
    assert!(
        !x.is_empty() && !y.is_empty(),
        "a12 needs non-empty samples"
    );
    let mut score = 0.0;
    for a in x {
        for b in y {
            if a > b {
                score += 1.0;
            } else if a == b {
                score += 0.5;
            }
        }
    }
    score / (x.len() * y.len()) as f64
}
