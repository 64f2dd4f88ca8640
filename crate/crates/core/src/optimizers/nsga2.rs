//! Nondominated sorting and crowding distance.

use std::cmp::Ordering;

use crate::problem::{dominates_min, Direction};

/// Orients a point set so that both components are minimized.
pub(crate) fn to_min(points: &[[f64; 2]], orientation: [Direction; 2]) -> Vec<[f64; 2]> {
    points
        .iter()
        .map(|p| {
            [
                orientation[0].minimized(p[0]),
                orientation[1].minimized(p[1]),
            ]
        })
        .collect()
}

/// Partitions `points` into fronts of indices. Front 0 is the nondominated
/// set; front `k` is nondominated once fronts `< k` are removed. Indices
/// within a front are ascending.
pub fn nondominated_sort(points: &[[f64; 2]], orientation: [Direction; 2]) -> Vec<Vec<usize>> {
    sort_min(&to_min(points, orientation))
}

pub(crate) fn sort_min(points: &[[f64; 2]]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates_min(points[i], points[j]) {
                dominates[i].push(j);
                dominated_by[j] += 1;
            } else if dominates_min(points[j], points[i]) {
                dominates[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Indices (ascending) of the nondominated points of a minimized set.
/// Identical points do not dominate each other and are all kept.
pub fn nondominated_indices(points: &[[f64; 2]]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
            .then(a.cmp(&b))
    });
    let mut keep = Vec::new();
    let mut best_prev = f64::INFINITY;
    let mut k = 0;
    while k < order.len() {
        let x = points[order[k]][0];
        let group_min = points[order[k]][1];
        let mut end = k;
        while end < order.len() && points[order[end]][0] == x {
            let y = points[order[end]][1];
            if best_prev > y && y <= group_min {
                keep.push(order[end]);
            }
            end += 1;
        }
        best_prev = best_prev.min(group_min);
        k = end;
    }
    keep.sort_unstable();
    keep
}

/// Crowding distance of each point of a front (both components minimized or
/// both maximized; the measure is orientation-free). Boundary points get
/// `+inf`; others get the sum over objectives of the range-normalized gap
/// between their neighbours. Sorting is stable with ties broken by index.
pub fn crowding_distance(front: &[[f64; 2]]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    for m in 0..2 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| front[a][m].total_cmp(&front[b][m]).then(a.cmp(&b)));
        let lo = front[order[0]][m];
        let hi = front[order[n - 1]][m];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range > 0.0 {
            for k in 1..n - 1 {
                dist[order[k]] += (front[order[k + 1]][m] - front[order[k - 1]][m]) / range;
            }
        }
    }
    dist
}

/// Crowding distances rounded to a 1e-9 grid so that distances equal up to
/// floating-point noise compare as ties.
pub(crate) fn crowding_key(d: f64) -> f64 {
    if d.is_finite() {
        (d * 1e9).round()
    } else {
        d
    }
}

/// Rank (front number) and crowding key of every member.
pub(crate) fn rank_and_crowding(points: &[[f64; 2]]) -> (Vec<usize>, Vec<f64>) {
    let mut rank = vec![0; points.len()];
    let mut crowd = vec![0.0; points.len()];
    for (r, front) in sort_min(points).iter().enumerate() {
        let pts: Vec<[f64; 2]> = front.iter().map(|&i| points[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&pts)) {
            rank[i] = r;
            crowd[i] = crowding_key(d);
        }
    }
    (rank, crowd)
}

/// Crowded-comparison: lower rank first, then larger crowding distance.
pub(crate) fn crowded_compare(rank: &[usize], crowd: &[f64], a: usize, b: usize) -> Ordering {
    rank[a].cmp(&rank[b]).then(crowd[b].total_cmp(&crowd[a]))
}
