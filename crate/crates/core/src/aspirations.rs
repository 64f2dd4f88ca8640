//! Aspiration levels built from an approximated Pareto front, and realism
//! classification of an aspiration space against a landscape.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{directions, dominates_min, ObjectiveSpec, Objectives, PerfVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Position {
    /// 20th percentile on objective 1, 80th on objective 2.
    #[serde(rename = "l")]
    LeftShifted,
    /// 80th percentile on objective 1, 20th on objective 2.
    #[serde(rename = "r")]
    RightShifted,
    #[serde(rename = "c")]
    Centered,
    /// 5th percentile on both objectives.
    #[serde(rename = "u")]
    Unrealistic,
    #[serde(rename = "custom")]
    Custom,
}

impl Position {
    pub fn token(self) -> &'static str {
        match self {
            Position::LeftShifted => "l",
            Position::RightShifted => "r",
            Position::Centered => "c",
            Position::Unrealistic => "u",
            Position::Custom => "custom",
        }
    }

    /// Percentiles (per objective, minimized form) that define the position.
    pub fn percentiles(self) -> Option<[f64; 2]> {
        match self {
            Position::LeftShifted => Some([20.0, 80.0]),
            Position::RightShifted => Some([80.0, 20.0]),
            Position::Centered => Some([50.0, 50.0]),
            Position::Unrealistic => Some([5.0, 5.0]),
            Position::Custom => None,
        }
    }

    pub fn is_realistic(self) -> bool {
        matches!(
            self,
            Position::LeftShifted | Position::RightShifted | Position::Centered
        )
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "l" => Ok(Position::LeftShifted),
            "r" => Ok(Position::RightShifted),
            "c" => Ok(Position::Centered),
            "u" => Ok(Position::Unrealistic),
            "custom" => Ok(Position::Custom),
            other => Err(Error::InvalidInput(format!("unknown position {other:?}"))),
        }
    }
}

/// Aspiration levels in native units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AspirationLevels {
    pub d: [f64; 2],
    pub position: Position,
}

/// An approximated Pareto front.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontSample {
    points: Vec<PerfVector>,
    objectives: Objectives,
}

impl FrontSample {
    pub fn new(points: Vec<PerfVector>, objectives: Objectives) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        let dirs = directions(&objectives);
        let mins: Vec<[f64; 2]> = points.iter().map(|p| p.minimized(dirs)).collect();
        for a in &mins {
            if mins.iter().any(|b| dominates_min(*b, *a)) {
                return Err(Error::InvalidInput(format!(
                    "front point ({}, {}) is dominated",
                    dirs[0].native(a[0]),
                    dirs[1].native(a[1])
                )));
            }
        }
        Ok(Self { points, objectives })
    }

    /// The nondominated subset of `points`, in input order.
    pub fn from_landscape(points: &[PerfVector], objectives: Objectives) -> Result<Self> {
        let dirs = directions(&objectives);
        let mins: Vec<[f64; 2]> = points.iter().map(|p| p.minimized(dirs)).collect();
        let front = crate::optimizers::nondominated_indices(&mins)
            .into_iter()
            .map(|i| points[i])
            .collect();
        Self::new(front, objectives)
    }

    pub fn points(&self) -> &[PerfVector] {
        &self.points
    }

    pub fn objectives(&self) -> &Objectives {
        &self.objectives
    }

    /// Reads a two-column CSV whose header names the objectives.
    pub fn load_csv(path: impl AsRef<Path>, objectives: Objectives) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let load_err = |line: usize, message: String| Error::Load {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| load_err(1, "missing header".into()))?;
        let names: Vec<&str> = header.split(',').map(str::trim).collect();
        if names != [objectives[0].name.as_str(), objectives[1].name.as_str()] {
            return Err(load_err(
                1,
                format!(
                    "header {header:?} does not name objectives {} and {}",
                    objectives[0].name, objectives[1].name
                ),
            ));
        }
        let mut points = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            let parse = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite());
            match cells.as_slice() {
                [a, b] => match (parse(a), parse(b)) {
                    (Some(a), Some(b)) => points.push(PerfVector { f: [a, b] }),
                    _ => return Err(load_err(i + 1, format!("non-numeric value in {line:?}"))),
                },
                _ => {
                    return Err(load_err(
                        i + 1,
                        format!("expected 2 columns, got {}", cells.len()),
                    ))
                }
            }
        }
        Self::new(points, objectives).map_err(|e| load_err(0, e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{}\n", self.objectives[0].name, self.objectives[1].name);
        for p in &self.points {
            out.push_str(&format!("{},{}\n", p.f[0], p.f[1]));
        }
        out
    }
}

/// Nearest-rank percentile: the element at 1-based rank `ceil(p/100 * n)` of
/// the ascending sort, with `p = 0` giving the minimum.
pub fn percentile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(0.0..=100.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "percentile {p} outside [0, 100]"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let rank = ((p * n as f64) / 100.0).ceil() as usize;
    Ok(sorted[rank.clamp(1, n) - 1])
}

/// Builds the aspiration levels at `position` from the front's objective
/// values in minimized form; the result is in native units.
pub fn build_aspiration_levels(
    front: &FrontSample,
    position: Position,
) -> Result<AspirationLevels> {
    let pcts = position
        .percentiles()
        .ok_or_else(|| Error::InvalidInput("custom levels are not derived from a front".into()))?;
    let dirs = directions(&front.objectives);
    let mut d = [0.0; 2];
    for j in 0..2 {
        let column: Vec<f64> = front
            .points
            .iter()
            .map(|p| dirs[j].minimized(p.f[j]))
            .collect();
        d[j] = dirs[j].native(percentile(&column, pcts[j])?);
    }
    Ok(AspirationLevels { d, position })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Realism {
    /// Some point meets both levels at once.
    Realistic,
    /// Each level is met by some point, but never both by the same point.
    Unrealistic,
    /// At least one level is met by no point at all.
    InfeasiblePerObjective,
}

pub fn classify_realism(
    landscape: &[PerfVector],
    levels: &AspirationLevels,
    objectives: &[ObjectiveSpec; 2],
) -> Result<Realism> {
    if landscape.is_empty() {
        return Err(Error::EmptySample);
    }
    let dirs = directions(objectives);
    let d = [
        dirs[0].minimized(levels.d[0]),
        dirs[1].minimized(levels.d[1]),
    ];
    let mut meets = [false; 2];
    for p in landscape {
        let m = p.minimized(dirs);
        let ok = [m[0] <= d[0], m[1] <= d[1]];
        if ok[0] && ok[1] {
            return Ok(Realism::Realistic);
        }
        meets[0] |= ok[0];
        meets[1] |= ok[1];
    }
    Ok(if meets[0] && meets[1] {
        Realism::Unrealistic
    } else {
        Realism::InfeasiblePerObjective
    })
}
