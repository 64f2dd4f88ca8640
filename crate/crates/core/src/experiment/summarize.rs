//! Aggregate tables over an experiment directory: outcome counts per
//! scenario, gains per position, speedups and mean trajectories.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::SUMMARY_HEADER;
use crate::aspirations::Position;
use crate::error::{Error, Result};
use crate::metrics::{mean_se, speedup, Trajectory, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummaryReport {
    pub cases: usize,
    /// Missing or unreadable artifacts that were skipped.
    pub problems: Vec<String>,
}

struct Row {
    case_id: String,
    scenario: String,
    position: Position,
    mean_gain: f64,
    verdict: Option<Verdict>,
    significant: bool,
}

#[derive(Default)]
struct Counts {
    win: usize,
    win_sig: usize,
    tie: usize,
    loss: usize,
    loss_sig: usize,
}

impl Counts {
    fn add(&mut self, v: Verdict, significant: bool) {
        match v {
            Verdict::Win => {
                self.win += 1;
                self.win_sig += usize::from(significant);
            }
            Verdict::Tie => self.tie += 1,
            Verdict::Loss => {
                self.loss += 1;
                self.loss_sig += usize::from(significant);
            }
        }
    }

    fn cell(n: usize, sig: usize) -> String {
        if n == 0 {
            "0".into()
        } else {
            format!("{n} ({sig} significant)")
        }
    }

    fn row(&self) -> String {
        format!(
            "{},{},{}",
            Self::cell(self.win, self.win_sig),
            self.tie,
            Self::cell(self.loss, self.loss_sig)
        )
    }
}

fn parse_row(line: &str, columns: &[&str]) -> std::result::Result<Row, String> {
    let cells: Vec<&str> = line.split(',').collect();
    if cells.len() != columns.len() {
        return Err(format!(
            "expected {} cells, got {}",
            columns.len(),
            cells.len()
        ));
    }
    let get = |name: &str| {
        cells[columns
            .iter()
            .position(|c| *c == name)
            .expect("known column")]
    };
    let position = get("position")
        .parse::<Position>()
        .map_err(|e| e.to_string())?;
    let mean_gain = match get("mean_gain") {
        "na" => f64::NAN,
        g => g
            .parse::<f64>()
            .map_err(|_| format!("bad mean_gain {g:?}"))?,
    };
    Ok(Row {
        case_id: get("case_id").to_string(),
        scenario: get("scenario").to_string(),
        position,
        mean_gain,
        verdict: Verdict::parse(get("verdict")),
        significant: get("significant") == "true",
    })
}

fn read_trajectories(path: &Path) -> std::result::Result<BTreeMap<String, Trajectory>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or("empty trajectory file")?
        .split(',')
        .collect();
    if header.first() != Some(&"evaluations") {
        return Err(format!("{}: bad header", path.display()));
    }
    let mut out: BTreeMap<String, Trajectory> = header[1..]
        .iter()
        .map(|m| (m.to_string(), Trajectory { points: Vec::new() }))
        .collect();
    for line in lines.filter(|l| !l.is_empty()) {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(format!("{}: ragged row {line:?}", path.display()));
        }
        let count: usize = cells[0]
            .parse()
            .map_err(|_| format!("{}: bad count {:?}", path.display(), cells[0]))?;
        for (m, v) in header[1..].iter().zip(&cells[1..]) {
            let v: f64 = v
                .parse()
                .map_err(|_| format!("{}: bad value {v:?}", path.display()))?;
            out.get_mut(*m)
                .expect("header model")
                .points
                .push((count, v));
        }
    }
    Ok(out)
}

fn write(path: &Path, body: String) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Reads `summary.csv` and per-case trajectories under `dir` and writes
/// `outcome_counts.csv`, `gain_by_position.csv`, `speedup.csv` and
/// `trajectory_by_position.csv` next to them.
pub fn summarize(dir: &Path) -> Result<SummaryReport> {
    let summary_path = dir.join("summary.csv");
    let Ok(text) = fs::read_to_string(&summary_path) else {
        return Err(Error::NoCases(dir.to_path_buf()));
    };
    let mut lines = text.lines().enumerate();
    let header = lines.next().map(|(_, h)| h).unwrap_or("");
    if header != SUMMARY_HEADER {
        return Err(Error::Load {
            path: summary_path,
            line: 1,
            message: "unexpected summary header".into(),
        });
    }
    let columns: Vec<&str> = header.split(',').collect();
    let mut problems = Vec::new();
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        match parse_row(line, &columns) {
            Ok(r) => rows.push(r),
            Err(e) => problems.push(format!("{}:{}: {e}", summary_path.display(), i + 1)),
        }
    }
    if rows.is_empty() {
        return Err(Error::NoCases(dir.to_path_buf()));
    }

    let mut counts: BTreeMap<&str, Counts> = BTreeMap::new();
    let mut total = Counts::default();
    for r in &rows {
        if let Some(v) = r.verdict {
            counts.entry(&r.scenario).or_default().add(v, r.significant);
            total.add(v, r.significant);
        }
    }
    let mut out = String::from("scenario,win,tie,loss\n");
    for (s, c) in &counts {
        out.push_str(&format!("{s},{}\n", c.row()));
    }
    out.push_str(&format!("all,{}\n", total.row()));
    write(&dir.join("outcome_counts.csv"), out)?;

    let mut gains: BTreeMap<Position, Vec<f64>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.mean_gain.is_finite()) {
        gains.entry(r.position).or_default().push(r.mean_gain);
    }
    let mut out = String::from("position,cases,mean_gain,se_gain\n");
    for (p, g) in &gains {
        let (m, se) = mean_se(g);
        out.push_str(&format!("{p},{},{m},{se}\n", g.len()));
    }
    write(&dir.join("gain_by_position.csv"), out)?;

    let mut speed = String::from("case_id,position,baseline,speedup\n");
    let mut by_position: BTreeMap<(Position, String, usize), Vec<f64>> = BTreeMap::new();
    for r in &rows {
        let path = dir.join("cases").join(&r.case_id).join("trajectory.csv");
        let traj = match read_trajectories(&path) {
            Ok(t) => t,
            Err(e) => {
                problems.push(e);
                continue;
            }
        };
        for (m, t) in &traj {
            for &(c, v) in &t.points {
                by_position
                    .entry((r.position, m.clone(), c))
                    .or_default()
                    .push(v);
            }
        }
        let (base, other) = if r.position.is_realistic() {
            ("without", "with")
        } else {
            ("with", "without")
        };
        if let (Some(b), Some(o)) = (traj.get(base), traj.get(other)) {
            speed.push_str(&format!(
                "{},{},{base},{}\n",
                r.case_id,
                r.position,
                speedup(b, o)
            ));
        }
    }
    write(&dir.join("speedup.csv"), speed)?;

    let mut out = String::from("position,model,evaluations,mean_ahv\n");
    for ((p, m, c), vals) in &by_position {
        out.push_str(&format!("{p},{m},{c},{}\n", mean_se(vals).0));
    }
    write(&dir.join("trajectory_by_position.csv"), out)?;

    Ok(SummaryReport {
        cases: rows.len(),
        problems,
    })
}
