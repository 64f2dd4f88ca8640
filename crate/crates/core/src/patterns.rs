//! Requirement patterns p0–p3 and the satisfaction-space transform that
//! guides aspiration-aware search and feeds A-HV.
//!
//! Patterns operate on minimized values. Aspiration levels and bounds are
//! stored in native units on a [`Scenario`] and negated together with the
//! measurement when an objective is maximized.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Direction, ObjectiveSpec, Objectives, PerfVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternKind {
    #[serde(rename = "p0")]
    P0,
    #[serde(rename = "p1")]
    P1,
    #[serde(rename = "p2")]
    P2,
    #[serde(rename = "p3")]
    P3,
}

impl PatternKind {
    pub const ALL: [PatternKind; 4] = [
        PatternKind::P0,
        PatternKind::P1,
        PatternKind::P2,
        PatternKind::P3,
    ];

    pub fn token(self) -> &'static str {
        match self {
            PatternKind::P0 => "p0",
            PatternKind::P1 => "p1",
            PatternKind::P2 => "p2",
            PatternKind::P3 => "p3",
        }
    }

    pub fn has_aspiration(self) -> bool {
        self != PatternKind::P0
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for PatternKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "p0" => Ok(PatternKind::P0),
            "p1" => Ok(PatternKind::P1),
            "p2" => Ok(PatternKind::P2),
            "p3" => Ok(PatternKind::P3),
            other => Err(Error::InvalidScenario(format!("unknown pattern {other:?}"))),
        }
    }
}

/// A requirement pattern with its aspiration level `d` (absent for p0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pattern {
    kind: PatternKind,
    aspiration: Option<f64>,
}

impl Pattern {
    pub fn p0() -> Self {
        Self {
            kind: PatternKind::P0,
            aspiration: None,
        }
    }

    pub fn new(kind: PatternKind, aspiration: Option<f64>) -> Result<Self> {
        match (kind, aspiration) {
            (PatternKind::P0, None) => Ok(Self::p0()),
            (PatternKind::P0, Some(_)) => Err(Error::InvalidScenario(
                "p0 takes no aspiration level".into(),
            )),
            (_, Some(d)) if d.is_finite() => Ok(Self { kind, aspiration }),
            (_, _) => Err(Error::InvalidScenario(format!(
                "{kind} needs a finite aspiration level"
            ))),
        }
    }

    pub fn with_level(kind: PatternKind, d: f64) -> Result<Self> {
        Self::new(kind, Some(d))
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn aspiration(&self) -> Option<f64> {
        self.aspiration
    }

    /// The same pattern with its aspiration level expressed in minimized form.
    fn minimized(&self, direction: Direction) -> Self {
        Self {
            kind: self.kind,
            aspiration: self.aspiration.map(|d| direction.minimized(d)),
        }
    }
}

/// Lower (`alpha`) and upper (`beta`) bound of a minimized objective.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub alpha: f64,
    pub beta: f64,
}

impl Bounds {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) || alpha > beta {
            return Err(Error::InvalidInput(format!(
                "invalid bounds [{alpha}, {beta}]"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Bounds of the minimized objective for a native value range.
    pub fn from_range(range: ObjectiveRange, direction: Direction) -> Self {
        match direction {
            Direction::Minimize => Self {
                alpha: range.min,
                beta: range.max,
            },
            Direction::Maximize => Self {
                alpha: -range.max,
                beta: -range.min,
            },
        }
    }
}

/// Observed value range of one objective in native units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveRange {
    pub min: f64,
    pub max: f64,
}

impl ObjectiveRange {
    pub fn point(x: f64) -> Self {
        Self { min: x, max: x }
    }

    pub fn include(&mut self, x: f64) {
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }
}

/// Satisfaction degree in `[0, 1]` of a minimized value `x`.
///
/// `x` is clamped into `[alpha, beta]` first. Degenerate denominators
/// (`beta == d` for p1, `d == alpha` for p3, `beta == alpha` for p0) take the
/// step limit of the linear segment.
pub fn apply_pattern(pattern: &Pattern, x: f64, bounds: Bounds) -> f64 {
    let Bounds { alpha, beta } = bounds;
    let x = x.max(alpha).min(beta);
    let d = pattern.aspiration.unwrap_or(f64::NAN);
    let value = match pattern.kind {
        PatternKind::P0 => {
            if beta > alpha {
                (beta - x) / (beta - alpha)
            } else if x <= alpha {
                1.0
            } else {
                0.0
            }
        }
        PatternKind::P1 => {
            if x <= d {
                1.0
            } else if beta > d {
                (beta - x) / (beta - d)
            } else {
                0.0
            }
        }
        PatternKind::P2 => {
            if x <= d {
                1.0
            } else {
                0.0
            }
        }
        PatternKind::P3 => {
            if x > d {
                0.0
            } else if d > alpha {
                (d - x) / (d - alpha)
            } else if x <= alpha {
                1.0
            } else {
                0.0
            }
        }
    };
    value.clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundsMode {
    /// Normalize with the running min/max of the current run.
    Online,
    /// Normalize with fixed bounds supplied up front.
    Posterior,
}

/// Running per-objective min/max of every raw measurement seen in a run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundsTracker {
    ranges: Option<[ObjectiveRange; 2]>,
}

impl BoundsTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, raw: &PerfVector) {
        match &mut self.ranges {
            None => {
                self.ranges = Some([
                    ObjectiveRange::point(raw.f[0]),
                    ObjectiveRange::point(raw.f[1]),
                ])
            }
            Some(r) => {
                r[0].include(raw.f[0]);
                r[1].include(raw.f[1]);
            }
        }
    }

    pub fn ranges(&self) -> Option<[ObjectiveRange; 2]> {
        self.ranges
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_none()
    }
}

/// A requirement scenario: a pattern pair with aspiration levels, the two
/// objectives, and how the patterns are normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    patterns: [Pattern; 2],
    objectives: Objectives,
    bounds_mode: BoundsMode,
    fixed_bounds: Option<[ObjectiveRange; 2]>,
}

impl Scenario {
    pub fn new(
        patterns: [Pattern; 2],
        objectives: Objectives,
        bounds_mode: BoundsMode,
        fixed_bounds: Option<[ObjectiveRange; 2]>,
    ) -> Result<Self> {
        if bounds_mode == BoundsMode::Posterior && fixed_bounds.is_none() {
            return Err(Error::InvalidScenario(
                "posterior bounds mode requires alpha and beta".into(),
            ));
        }
        if let Some(fb) = &fixed_bounds {
            for r in fb {
                if !(r.min.is_finite() && r.max.is_finite()) || r.min > r.max {
                    return Err(Error::InvalidScenario(format!(
                        "invalid bounds [{}, {}]",
                        r.min, r.max
                    )));
                }
            }
        }
        Ok(Self {
            patterns,
            objectives,
            bounds_mode,
            fixed_bounds,
        })
    }

    /// Scenario with online bounds.
    pub fn online(patterns: [Pattern; 2], objectives: Objectives) -> Self {
        Self {
            patterns,
            objectives,
            bounds_mode: BoundsMode::Online,
            fixed_bounds: None,
        }
    }

    pub fn patterns(&self) -> &[Pattern; 2] {
        &self.patterns
    }

    pub fn objectives(&self) -> &Objectives {
        &self.objectives
    }

    pub fn bounds_mode(&self) -> BoundsMode {
        self.bounds_mode
    }

    pub fn fixed_bounds(&self) -> Option<[ObjectiveRange; 2]> {
        self.fixed_bounds
    }

    pub fn kinds(&self) -> [PatternKind; 2] {
        [self.patterns[0].kind, self.patterns[1].kind]
    }

    /// Aspiration levels in native units.
    pub fn aspirations(&self) -> [Option<f64>; 2] {
        [self.patterns[0].aspiration, self.patterns[1].aspiration]
    }

    pub fn has_both_aspirations(&self) -> bool {
        self.patterns.iter().all(|p| p.kind.has_aspiration())
    }

    /// Short form such as `p2-p3`, safe inside CSV cells and paths.
    pub fn label(&self) -> String {
        pair_label(self.kinds())
    }

    /// Native ranges that normalize guidance: the fixed bounds in posterior
    /// mode, otherwise the tracker's running range.
    pub fn guiding_ranges(&self, tracker: &BoundsTracker) -> Option<[ObjectiveRange; 2]> {
        match self.bounds_mode {
            BoundsMode::Posterior => self.fixed_bounds,
            BoundsMode::Online => tracker.ranges(),
        }
    }

    /// Same patterns and objectives evaluated under fixed posterior bounds.
    pub fn with_posterior_bounds(&self, ranges: [ObjectiveRange; 2]) -> Self {
        Self {
            patterns: self.patterns,
            objectives: self.objectives.clone(),
            bounds_mode: BoundsMode::Posterior,
            fixed_bounds: Some(ranges),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ScenarioFile::from(self)).expect("scenario serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ScenarioFile::from(self)).expect("scenario serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::from_json_str(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_string() + "\n")
            .map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }
}

/// Transforms a raw measurement into satisfaction space (maximize both)
/// under the given native ranges.
pub fn transform(scenario: &Scenario, raw: &PerfVector, ranges: &[ObjectiveRange; 2]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for j in 0..2 {
        let dir = scenario.objectives[j].direction;
        let bounds = Bounds::from_range(ranges[j], dir);
        let pattern = scenario.patterns[j].minimized(dir);
        out[j] = apply_pattern(&pattern, dir.minimized(raw.f[j]), bounds);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct BoundsFile {
    mode: BoundsMode,
    alpha: Option<Vec<f64>>,
    beta: Option<Vec<f64>>,
}

/// On-disk JSON layout of a scenario.
#[derive(Serialize, Deserialize)]
struct ScenarioFile {
    objectives: Vec<ObjectiveSpec>,
    patterns: Vec<PatternKind>,
    aspirations: Vec<Option<f64>>,
    bounds: BoundsFile,
}

fn pair<T: Clone>(v: &[T], what: &str) -> Result<[T; 2]> {
    match v {
        [a, b] => Ok([a.clone(), b.clone()]),
        _ => Err(Error::InvalidScenario(format!(
            "{what}: expected 2 entries, got {}",
            v.len()
        ))),
    }
}

impl TryFrom<ScenarioFile> for Scenario {
    type Error = Error;

    fn try_from(f: ScenarioFile) -> Result<Self> {
        let objectives = pair(&f.objectives, "objectives")?;
        let kinds = pair(&f.patterns, "patterns")?;
        let levels = pair(&f.aspirations, "aspirations")?;
        let patterns = [
            Pattern::new(kinds[0], levels[0])?,
            Pattern::new(kinds[1], levels[1])?,
        ];
        let fixed_bounds = match (&f.bounds.alpha, &f.bounds.beta) {
            (Some(a), Some(b)) => {
                let a = pair(a, "bounds.alpha")?;
                let b = pair(b, "bounds.beta")?;
                Some([
                    ObjectiveRange {
                        min: a[0],
                        max: b[0],
                    },
                    ObjectiveRange {
                        min: a[1],
                        max: b[1],
                    },
                ])
            }
            (None, None) => None,
            _ => {
                return Err(Error::InvalidScenario(
                    "bounds.alpha and bounds.beta must be given together".into(),
                ))
            }
        };
        Scenario::new(patterns, objectives, f.bounds.mode, fixed_bounds)
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        Self {
            objectives: s.objectives.to_vec(),
            patterns: s.kinds().to_vec(),
            aspirations: s.aspirations().to_vec(),
            bounds: BoundsFile {
                mode: s.bounds_mode,
                alpha: s.fixed_bounds.map(|b| vec![b[0].min, b[1].min]),
                beta: s.fixed_bounds.map(|b| vec![b[0].max, b[1].max]),
            },
        }
    }
}

/// Parses a pattern pair such as `p2,p3`, `{p2,p3}` or `p2-p3`.
pub fn parse_pattern_pair(s: &str) -> Result<[PatternKind; 2]> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    let parts: Vec<&str> = inner.split([',', '-']).collect();
    match parts.as_slice() {
        [a, b] => Ok([a.parse()?, b.parse()?]),
        _ => Err(Error::InvalidScenario(format!(
            "expected a pattern pair, got {s:?}"
        ))),
    }
}

pub fn pair_label(kinds: [PatternKind; 2]) -> String {
    format!("{}-{}", kinds[0], kinds[1])
}

/// The fifteen pattern pairs with at least one aspiration level.
pub fn pattern_pair_vocabulary() -> Vec<[PatternKind; 2]> {
    let mut out = Vec::new();
    for a in PatternKind::ALL {
        for b in PatternKind::ALL {
            if a != PatternKind::P0 || b != PatternKind::P0 {
                out.push([a, b]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(alpha: f64, beta: f64) -> Bounds {
        Bounds::new(alpha, beta).unwrap()
    }

    fn pat(kind: PatternKind, d: f64) -> Pattern {
        Pattern::with_level(kind, d).unwrap()
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(apply_pattern(&Pattern::p0(), 25.0, b(0.0, 100.0)), 0.75);

        let p1 = pat(PatternKind::P1, 40.0);
        assert_eq!(apply_pattern(&p1, 30.0, b(0.0, 100.0)), 1.0);
        assert_eq!(apply_pattern(&p1, 70.0, b(0.0, 100.0)), 0.5);
        assert_eq!(apply_pattern(&p1, 100.0, b(0.0, 100.0)), 0.0);

        let p2 = pat(PatternKind::P2, 40.0);
        assert_eq!(apply_pattern(&p2, 40.0, b(0.0, 100.0)), 1.0);
        assert_eq!(apply_pattern(&p2, 40.000001, b(0.0, 100.0)), 0.0);

        let p3 = pat(PatternKind::P3, 40.0);
        assert_eq!(apply_pattern(&p3, 10.0, b(10.0, 100.0)), 1.0);
        assert_eq!(apply_pattern(&p3, 25.0, b(10.0, 100.0)), 0.5);
        assert_eq!(apply_pattern(&p3, 41.0, b(10.0, 100.0)), 0.0);
    }

    #[test]
    fn degenerate_denominators_take_step_limits() {
        assert_eq!(apply_pattern(&Pattern::p0(), 5.0, b(5.0, 5.0)), 1.0);
        let p1 = pat(PatternKind::P1, 10.0);
        assert_eq!(apply_pattern(&p1, 10.0, b(0.0, 10.0)), 1.0);
        assert_eq!(apply_pattern(&p1, 3.0, b(0.0, 10.0)), 1.0);
        let p3 = pat(PatternKind::P3, 2.0);
        assert_eq!(apply_pattern(&p3, 2.0, b(2.0, 9.0)), 1.0);
        assert_eq!(apply_pattern(&p3, 2.5, b(2.0, 9.0)), 0.0);
    }

    #[test]
    fn out_of_bounds_values_are_clamped() {
        assert_eq!(apply_pattern(&Pattern::p0(), -50.0, b(0.0, 100.0)), 1.0);
        assert_eq!(apply_pattern(&Pattern::p0(), 150.0, b(0.0, 100.0)), 0.0);
        assert_eq!(
            apply_pattern(&pat(PatternKind::P3, 40.0), 0.0, b(10.0, 100.0)),
            1.0
        );
    }

    #[test]
    fn tracker_updates() {
        let mut t = BoundsTracker::new();
        t.update(&PerfVector::new(3.0, 7.0).unwrap());
        assert_eq!(
            t.ranges().unwrap(),
            [ObjectiveRange::point(3.0), ObjectiveRange::point(7.0)]
        );

        let mut t = BoundsTracker::new();
        t.update(&PerfVector::new(1.0, 1.0).unwrap());
        t.update(&PerfVector::new(5.0, 5.0).unwrap());
        t.update(&PerfVector::new(0.0, 9.0).unwrap());
        let r = t.ranges().unwrap();
        assert_eq!(
            (r[0].min, r[1].min, r[0].max, r[1].max),
            (0.0, 1.0, 5.0, 9.0)
        );
        let before = t.clone();
        t.update(&PerfVector::new(0.0, 9.0).unwrap());
        assert_eq!(t, before);
    }

    fn min2() -> Objectives {
        [ObjectiveSpec::minimize("f1"), ObjectiveSpec::minimize("f2")]
    }

    #[test]
    fn transform_full_satisfaction_with_maximized_objective() {
        // PNSR is maximized, energy minimized.
        let objectives = [
            ObjectiveSpec::maximize("pnsr"),
            ObjectiveSpec::minimize("energy"),
        ];
        let scenario = Scenario::online(
            [pat(PatternKind::P2, 40.0), pat(PatternKind::P3, 80.0)],
            objectives,
        );
        let ranges = [
            ObjectiveRange {
                min: 20.0,
                max: 90.0,
            },
            ObjectiveRange {
                min: 10.0,
                max: 200.0,
            },
        ];
        let raw = PerfVector::new(65.0, 10.0).unwrap();
        assert_eq!(transform(&scenario, &raw, &ranges), [1.0, 1.0]);
        let raw = PerfVector::new(35.0, 45.0).unwrap();
        assert_eq!(transform(&scenario, &raw, &ranges), [0.0, 0.5]);
    }

    #[test]
    fn unreachable_p2_levels_zero_a_component() {
        let scenario = Scenario::online(
            [pat(PatternKind::P2, 2.0), pat(PatternKind::P2, 2.0)],
            min2(),
        );
        let pts = [(1.0, 9.0), (5.0, 5.0), (9.0, 1.0)];
        let ranges = [ObjectiveRange { min: 1.0, max: 9.0 }; 2];
        for (x, y) in pts {
            let t = transform(&scenario, &PerfVector::new(x, y).unwrap(), &ranges);
            assert!(t.contains(&0.0), "{t:?}");
        }
    }

    #[test]
    fn p0_transform_preserves_dominance() {
        use crate::problem::{dominates, Direction};
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let objectives = [
            ObjectiveSpec::minimize("lat"),
            ObjectiveSpec::maximize("thr"),
        ];
        let scenario = Scenario::online([Pattern::p0(), Pattern::p0()], objectives.clone());
        let raws: Vec<PerfVector> = (0..60)
            .map(|_| {
                PerfVector::new(
                    rng.gen_range(0..20) as f64,
                    rng.gen_range(0..20) as f64 * 1.5,
                )
                .unwrap()
            })
            .collect();
        let mut tracker = BoundsTracker::new();
        raws.iter().for_each(|r| tracker.update(r));
        let ranges = tracker.ranges().unwrap();
        let dirs = crate::problem::directions(&objectives);
        let max2 = [Direction::Maximize; 2];
        for a in &raws {
            for c in &raws {
                let ta = transform(&scenario, a, &ranges);
                let tc = transform(&scenario, c, &ranges);
                assert_eq!(dominates(a.f, c.f, dirs), dominates(ta, tc, max2));
            }
        }
    }

    #[test]
    fn scenario_file_round_trip_and_validation() {
        let json = r#"{
            "objectives": [{"name": "latency", "direction": "minimize"},
                           {"name": "throughput", "direction": "maximize"}],
            "patterns": ["p0", "p3"],
            "aspirations": [null, 1000.5],
            "bounds": {"mode": "posterior", "alpha": [1.0, 10.0], "beta": [9.0, 2000.0]}
        }"#;
        let s = Scenario::from_json_str(json).unwrap();
        assert_eq!(s.kinds(), [PatternKind::P0, PatternKind::P3]);
        assert_eq!(s.aspirations(), [None, Some(1000.5)]);
        assert_eq!(
            s.fixed_bounds().unwrap()[1],
            ObjectiveRange {
                min: 10.0,
                max: 2000.0
            }
        );
        assert_eq!(Scenario::from_json_str(&s.to_json_string()).unwrap(), s);

        let bad = json.replace("[null, 1000.5]", "[3.0, 1000.5]");
        assert!(Scenario::from_json_str(&bad).is_err());
        let bad = json.replace("[null, 1000.5]", "[null, null]");
        assert!(Scenario::from_json_str(&bad).is_err());
        let bad = json.replace(
            r#""alpha": [1.0, 10.0], "beta": [9.0, 2000.0]"#,
            r#""alpha": null, "beta": null"#,
        );
        assert!(Scenario::from_json_str(&bad).is_err());
    }

    #[test]
    fn vocabulary_has_fifteen_pairs() {
        let v = pattern_pair_vocabulary();
        assert_eq!(v.len(), 15);
        assert_eq!(
            v.iter().filter(|p| !p.contains(&PatternKind::P0)).count(),
            9
        );
        assert_eq!(
            parse_pattern_pair("{p2,p3}").unwrap(),
            [PatternKind::P2, PatternKind::P3]
        );
        assert!(parse_pattern_pair("p2").is_err());
        assert_eq!(
            parse_pattern_pair("p1-p0").unwrap(),
            [PatternKind::P1, PatternKind::P0]
        );
        assert_eq!(pair_label([PatternKind::P1, PatternKind::P0]), "p1-p0");
    }

    proptest! {
        #[test]
        fn pattern_range_and_monotonicity(
            (alpha, beta) in (-1e3..1e3f64, 0.0..1e3f64).prop_map(|(a, w)| (a, a + w)),
            d in -1.5e3..2e3f64,
            xs in proptest::collection::vec(-2e3..3e3f64, 2..20),
            kind_seed in 0usize..4,
        ) {
            let pattern = match kind_seed {
                0 => Pattern::p0(),
                1 => pat(PatternKind::P1, d),
                2 => pat(PatternKind::P2, d),
                _ => pat(PatternKind::P3, d),
            };
            let bounds = b(alpha, beta);
            let mut xs = xs;
            xs.sort_by(f64::total_cmp);
            let ys: Vec<f64> = xs.iter().map(|&x| apply_pattern(&pattern, x, bounds)).collect();
            for w in ys.windows(2) {
                prop_assert!((0.0..=1.0).contains(&w[0]));
                prop_assert!(w[1] <= w[0]);
            }
        }

        #[test]
        fn relaxation_ordering(
            (alpha, beta) in (-1e3..1e3f64, 0.0..1e3f64).prop_map(|(a, w)| (a, a + w)),
            d in -1.5e3..2e3f64,
            x in -2e3..3e3f64,
        ) {
            let bounds = b(alpha, beta);
            let p1 = apply_pattern(&pat(PatternKind::P1, d), x, bounds);
            let p2 = apply_pattern(&pat(PatternKind::P2, d), x, bounds);
            let p3 = apply_pattern(&pat(PatternKind::P3, d), x, bounds);
            let xc = x.max(alpha).min(beta);
            if xc <= d {
                prop_assert!(p1 >= p2 && p2 >= p3);
            } else {
                prop_assert!(p2 == 0.0 && p3 == 0.0 && p1 >= 0.0);
            }
        }
    }
}
