//! Hypervolume, aspiration-aware hypervolume (A-HV), gains, speedup and
//! outcome classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::patterns::{transform, ObjectiveRange, Scenario};
use crate::problem::{Direction, PerfVector};

/// Reference point of A-HV in satisfaction space.
pub const AHV_REFERENCE: [f64; 2] = [-0.1, -0.1];

/// Exact 2-D hypervolume of the region dominated by `points` and bounded by
/// `reference`. Points that do not strictly dominate the reference add
/// nothing.
pub fn hypervolume_2d(points: &[[f64; 2]], reference: [f64; 2], orientation: Direction) -> f64 {
    let r = [
        orientation.minimized(reference[0]),
        orientation.minimized(reference[1]),
    ];
    let mut pts: Vec<[f64; 2]> = points
        .iter()
        .map(|p| [orientation.minimized(p[0]), orientation.minimized(p[1])])
        .filter(|p| p[0] < r[0] && p[1] < r[1])
        .collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    let mut area = 0.0;
    let mut prev_y = r[1];
    for p in pts {
        if p[1] < prev_y {
            area += (r[0] - p[0]) * (prev_y - p[1]);
            prev_y = p[1];
        }
    }
    area
}

/// A-HV of a set of raw measurements under `scenario`'s patterns and fixed
/// posterior bounds.
pub fn a_hv(set: &[PerfVector], scenario: &Scenario, posterior: &[ObjectiveRange; 2]) -> f64 {
    let pts: Vec<[f64; 2]> = set
        .iter()
        .map(|p| transform(scenario, p, posterior))
        .collect();
    hypervolume_2d(&pts, AHV_REFERENCE, Direction::Maximize)
}

/// Per-pair percentage gains of sorted `x` over sorted `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gains {
    pub values: Vec<f64>,
    /// Pairs skipped because the baseline value was zero.
    pub undefined: usize,
}

/// Sorts both lists ascending and returns `(x_i - y_i) / y_i * 100` per
/// pair. Lengths must match.
pub fn percent_gain(x: &[f64], y: &[f64]) -> Gains {
    assert_eq!(x.len(), y.len(), "gain lists must have equal length");
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let mut values = Vec::with_capacity(xs.len());
    let mut undefined = 0;
    for (a, b) in xs.iter().zip(&ys) {
        if *b == 0.0 {
            undefined += 1;
        } else {
            values.push((a - b) / b * 100.0);
        }
    }
    Gains { values, undefined }
}

/// Mean and standard error (sample standard deviation over `sqrt(n)`).
/// Empty input gives `(NaN, NaN)`; a single value has zero error.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Checkpoints every `ceil(budget / 20)` measurements, ending at `budget`.
pub fn checkpoints(budget: usize) -> Vec<usize> {
    if budget == 0 {
        return Vec::new();
    }
    let step = budget.div_ceil(20);
    let mut out: Vec<usize> = (1..)
        .map(|k| k * step)
        .take_while(|&c| c < budget)
        .collect();
    out.push(budget);
    out
}

/// A-HV of each measurement prefix at the given checkpoints. A run that
/// stopped early keeps its final value.
pub fn run_trajectory(
    log: &[PerfVector],
    scenario: &Scenario,
    posterior: &[ObjectiveRange; 2],
    checkpoints: &[usize],
) -> Vec<f64> {
    checkpoints
        .iter()
        .map(|&c| a_hv(&log[..c.min(log.len())], scenario, posterior))
        .collect()
}

/// Mean A-HV against measurement count for one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<(usize, f64)>,
}

impl Trajectory {
    /// Averages per-run values taken at shared checkpoints.
    pub fn mean_of(checkpoints: &[usize], runs: &[Vec<f64>]) -> Self {
        let points = checkpoints
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let vals: Vec<f64> = runs.iter().map(|r| r[i]).collect();
                (c, mean_se(&vals).0)
            })
            .collect();
        Self { points }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Speedup {
    Value(f64),
    NotReached,
}

impl fmt::Display for Speedup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Speedup::Value(v) => write!(f, "{v}"),
            Speedup::NotReached => f.write_str("not_reached"),
        }
    }
}

/// `b / m`, where `b` is the first count at which the baseline reaches its
/// best mean A-HV `T` and `m` the first count at which `other` reaches `T`.
pub fn speedup(baseline: &Trajectory, other: &Trajectory) -> Speedup {
    let Some(&(first, _)) = baseline.points.first() else {
        return Speedup::NotReached;
    };
    let (mut b, mut t) = (first, f64::NEG_INFINITY);
    for &(c, v) in &baseline.points {
        if v > t {
            t = v;
            b = c;
        }
    }
    match other.points.iter().find(|(_, v)| *v >= t) {
        Some(&(m, _)) => Speedup::Value(b as f64 / m as f64),
        None => Speedup::NotReached,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Win,
    Tie,
    Loss,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Effect {
    None,
    Small,
    Medium,
    Large,
}

impl Verdict {
    pub fn token(self) -> &'static str {
        match self {
            Verdict::Win => "win",
            Verdict::Tie => "tie",
            Verdict::Loss => "loss",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "win" => Some(Verdict::Win),
            "tie" => Some(Verdict::Tie),
            "loss" => Some(Verdict::Loss),
            _ => None,
        }
    }
}

impl Effect {
    pub fn token(self) -> &'static str {
        match self {
            Effect::None => "none",
            Effect::Small => "small",
            Effect::Medium => "medium",
            Effect::Large => "large",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub significant: bool,
    pub effect: Effect,
}

/// Win/tie/loss of PS-w over PS-w/o from Â12 and the rank-sum p-value.
pub fn classify_outcome(a12: f64, p_value: f64) -> Outcome {
    let verdict = if a12 > 0.5 + 1e-9 {
        Verdict::Win
    } else if a12 < 0.5 - 1e-9 {
        Verdict::Loss
    } else {
        Verdict::Tie
    };
    let effect = if a12 >= 0.8 || a12 <= 0.2 {
        Effect::Large
    } else if a12 >= 0.7 || a12 <= 0.3 {
        Effect::Medium
    } else if a12 >= 0.6 || a12 <= 0.4 {
        Effect::Small
    } else {
        Effect::None
    };
    Outcome {
        verdict,
        significant: p_value < 0.05 && effect != Effect::None,
        effect,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{Pattern, PatternKind};
    use crate::problem::ObjectiveSpec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Union area of reference-anchored rectangles by inclusion-exclusion
    /// (maximize, so each point spans `[r, p]`).
    fn rect_union(points: &[[f64; 2]], r: [f64; 2]) -> f64 {
        let pts: Vec<[f64; 2]> = points
            .iter()
            .copied()
            .filter(|p| p[0] > r[0] && p[1] > r[1])
            .collect();
        let n = pts.len();
        let mut total = 0.0;
        for mask in 1u32..(1 << n) {
            let mut lo = [f64::INFINITY; 2];
            for (i, p) in pts.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    lo = [lo[0].min(p[0]), lo[1].min(p[1])];
                }
            }
            let area = (lo[0] - r[0]) * (lo[1] - r[1]);
            total += if mask.count_ones() % 2 == 1 {
                area
            } else {
                -area
            };
        }
        total
    }

    #[test]
    fn hypervolume_examples() {
        assert_eq!(hypervolume_2d(&[], AHV_REFERENCE, Direction::Maximize), 0.0);
        // 1.21 is not representable; the product 1.1 * 1.1 lands one ulp above.
        assert!(
            (hypervolume_2d(&[[1.0, 1.0]], AHV_REFERENCE, Direction::Maximize) - 1.21).abs()
                < 1e-12
        );
        let v = hypervolume_2d(
            &[[1.0, 0.5], [0.5, 1.0]],
            AHV_REFERENCE,
            Direction::Maximize,
        );
        assert!((v - 0.96).abs() < 1e-12);
        let v = hypervolume_2d(&[[1.0, 2.0], [2.0, 1.0]], [3.0, 3.0], Direction::Minimize);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn non_dominating_points_add_nothing() {
        let r = AHV_REFERENCE;
        assert_eq!(
            hypervolume_2d(&[[-0.1, 1.0], [1.0, -0.2]], r, Direction::Maximize),
            0.0
        );
        let v = hypervolume_2d(
            &[[1.0, 0.0], [1.0, 0.0], [0.0, -0.5]],
            r,
            Direction::Maximize,
        );
        assert!((v - 0.11).abs() < 1e-12);
    }

    #[test]
    fn sweep_matches_inclusion_exclusion_on_grids() {
        let grid: Vec<[f64; 2]> = (0..4)
            .flat_map(|i| (0..4).map(move |j| [i as f64 / 3.0 - 0.1, j as f64 / 3.0]))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3000 {
            let k = rng.gen_range(0..=4);
            let pts: Vec<[f64; 2]> = (0..k).map(|_| grid[rng.gen_range(0..grid.len())]).collect();
            let a = hypervolume_2d(&pts, AHV_REFERENCE, Direction::Maximize);
            assert!(
                (a - rect_union(&pts, AHV_REFERENCE)).abs() < 1e-12,
                "{pts:?}"
            );
        }
    }

    #[test]
    fn sweep_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..3 {
            let pts: Vec<[f64; 2]> = (0..10).map(|_| [rng.gen(), rng.gen()]).collect();
            let exact = hypervolume_2d(&pts, AHV_REFERENCE, Direction::Maximize);
            let n = 200_000;
            let hits = (0..n)
                .filter(|_| {
                    let s = [rng.gen_range(-0.1..1.0), rng.gen_range(-0.1..1.0)];
                    pts.iter().any(|p| p[0] >= s[0] && p[1] >= s[1])
                })
                .count();
            let mc = hits as f64 / n as f64 * 1.21;
            assert!((exact - mc).abs() < 0.01, "{exact} vs {mc}");
        }
    }

    fn scenario(kinds: [PatternKind; 2], d: [f64; 2]) -> Scenario {
        let p = |k: PatternKind, d: f64| {
            if k.has_aspiration() {
                Pattern::with_level(k, d).unwrap()
            } else {
                Pattern::p0()
            }
        };
        Scenario::online(
            [p(kinds[0], d[0]), p(kinds[1], d[1])],
            [ObjectiveSpec::minimize("f1"), ObjectiveSpec::minimize("f2")],
        )
    }

    #[test]
    fn a_hv_examples() {
        let s = scenario([PatternKind::P2, PatternKind::P2], [5.0, 5.0]);
        let bounds = [
            ObjectiveRange {
                min: 0.0,
                max: 10.0,
            },
            ObjectiveRange {
                min: 0.0,
                max: 10.0,
            },
        ];
        assert!((a_hv(&[PerfVector { f: [1.0, 2.0] }], &s, &bounds) - 1.21).abs() < 1e-12);
        let v = a_hv(&[PerfVector { f: [1.0, 9.0] }], &s, &bounds);
        assert!((v - 0.11).abs() < 1e-12);
        assert_eq!(a_hv(&[], &s, &bounds), 0.0);
    }

    #[test]
    fn a_hv_is_hypervolume_of_transformed_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let bounds = [
            ObjectiveRange {
                min: 0.0,
                max: 10.0,
            },
            ObjectiveRange {
                min: 0.0,
                max: 10.0,
            },
        ];
        for kinds in crate::patterns::pattern_pair_vocabulary() {
            let s = scenario(kinds, [rng.gen_range(1.0..9.0), rng.gen_range(1.0..9.0)]);
            let set: Vec<PerfVector> = (0..5)
                .map(|_| PerfVector {
                    f: [rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)],
                })
                .collect();
            let pts: Vec<[f64; 2]> = set.iter().map(|p| transform(&s, p, &bounds)).collect();
            let v = a_hv(&set, &s, &bounds);
            assert_eq!(v, hypervolume_2d(&pts, AHV_REFERENCE, Direction::Maximize));
            assert!((0.0..=1.21 + 1e-12).contains(&v));
        }
    }

    proptest! {
        #[test]
        fn adding_points_never_decreases_hypervolume(
            pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 0..8),
            extra in (0.0f64..1.0, 0.0f64..1.0),
        ) {
            let a: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let mut b = a.clone();
            b.push([extra.0, extra.1]);
            let (ha, hb) = (hypervolume_2d(&a, AHV_REFERENCE, Direction::Maximize), hypervolume_2d(&b, AHV_REFERENCE, Direction::Maximize));
            prop_assert!(hb >= ha - 1e-12);
            prop_assert!((ha - rect_union(&a, AHV_REFERENCE)).abs() < 1e-9);
        }

        #[test]
        fn covering_sets_have_at_least_the_volume(
            pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..6),
            lift in prop::collection::vec((0.0f64..0.5, 0.0f64..0.5), 6),
        ) {
            let b: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let a: Vec<[f64; 2]> = b.iter().zip(&lift).map(|(p, l)| [p[0] + l.0, p[1] + l.1]).collect();
            let (ha, hb) = (hypervolume_2d(&a, AHV_REFERENCE, Direction::Maximize), hypervolume_2d(&b, AHV_REFERENCE, Direction::Maximize));
            prop_assert!(ha >= hb - 1e-12);
        }
    }

    #[test]
    fn gain_examples() {
        assert_eq!(percent_gain(&[1.2], &[1.0]).values.len(), 1);
        assert!((percent_gain(&[1.2], &[1.0]).values[0] - 20.0).abs() < 1e-9);
        assert_eq!(
            percent_gain(&[0.3, 0.7], &[0.3, 0.7]).values,
            vec![0.0, 0.0]
        );
        let g = percent_gain(&[1.2, 0.8], &[1.0, 1.0]).values;
        assert!((g[0] + 20.0).abs() < 1e-9 && (g[1] - 20.0).abs() < 1e-9);
        let g = percent_gain(&[1.0, 2.0], &[0.0, 1.0]);
        assert_eq!((g.values, g.undefined), (vec![100.0], 1));
    }

    #[test]
    fn single_pair_gain_flips_sign_only() {
        let (a, b) = (
            percent_gain(&[2.0], &[1.0]).values[0],
            percent_gain(&[1.0], &[2.0]).values[0],
        );
        assert!(a > 0.0 && b < 0.0);
    }

    #[test]
    fn mean_and_error() {
        assert_eq!(mean_se(&[0.0, 0.0, 0.0]), (0.0, 0.0));
        let (m, se) = mean_se(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn checkpoint_spacing() {
        assert_eq!(checkpoints(500).len(), 20);
        assert_eq!(checkpoints(500)[0], 25);
        assert_eq!(
            checkpoints(30),
            vec![2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30]
        );
        assert_eq!(checkpoints(7), vec![1, 2, 3, 4, 5, 6, 7]);
    }

    fn traj(points: &[(usize, f64)]) -> Trajectory {
        Trajectory {
            points: points.to_vec(),
        }
    }

    #[test]
    fn speedup_examples() {
        let base = traj(&[(30, 0.2), (100, 0.5), (300, 0.9), (500, 0.9)]);
        assert_eq!(speedup(&base, &base), Speedup::Value(1.0));
        let fast = traj(&[(30, 0.9), (100, 0.95)]);
        assert_eq!(speedup(&base, &fast), Speedup::Value(10.0));
        let slow = traj(&[(30, 0.1), (500, 0.85)]);
        assert_eq!(speedup(&base, &slow), Speedup::NotReached);
    }

    #[test]
    fn outcome_examples() {
        let o = classify_outcome(0.5, 1.0);
        assert_eq!(
            (o.verdict, o.significant, o.effect),
            (Verdict::Tie, false, Effect::None)
        );
        let o = classify_outcome(0.85, 0.001);
        assert_eq!(
            (o.verdict, o.significant, o.effect),
            (Verdict::Win, true, Effect::Large)
        );
        let o = classify_outcome(0.55, 0.01);
        assert_eq!(
            (o.verdict, o.significant, o.effect),
            (Verdict::Win, false, Effect::None)
        );
        assert_eq!(classify_outcome(0.35, 0.01).effect, Effect::Small);
        assert_eq!(classify_outcome(0.7, 0.01).effect, Effect::Medium);
        assert_eq!(classify_outcome(0.3, 0.01).effect, Effect::Medium);
        assert_eq!(classify_outcome(0.2, 0.01).verdict, Verdict::Loss);
        assert!(!classify_outcome(0.9, 0.05).significant);
    }
}
