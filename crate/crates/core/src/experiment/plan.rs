use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::aspirations::Position;
use crate::error::{Error, Result};
use crate::optimizers::{Mode, OptimizerKind};
use crate::patterns::{pair_label, parse_pattern_pair, PatternKind};
use crate::systems::SystemSource;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PopulationRepr", into = "PopulationRepr")]
pub enum PopulationSize {
    #[default]
    Auto,
    Fixed(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PopulationRepr {
    Number(usize),
    Word(String),
}

impl TryFrom<PopulationRepr> for PopulationSize {
    type Error = String;

    fn try_from(r: PopulationRepr) -> std::result::Result<Self, String> {
        match r {
            PopulationRepr::Number(n) => Ok(PopulationSize::Fixed(n)),
            PopulationRepr::Word(w) if w == "auto" => Ok(PopulationSize::Auto),
            PopulationRepr::Word(w) => Err(format!(
                "population_size must be a number or \"auto\", got {w:?}"
            )),
        }
    }
}

impl From<PopulationSize> for PopulationRepr {
    fn from(p: PopulationSize) -> Self {
        match p {
            PopulationSize::Auto => PopulationRepr::Word("auto".into()),
            PopulationSize::Fixed(n) => PopulationRepr::Number(n),
        }
    }
}

fn both_models() -> Vec<Mode> {
    vec![Mode::With, Mode::Without]
}

/// Default candidate population sizes for automatic selection.
pub fn default_candidates() -> Vec<usize> {
    (1..=10).map(|i| i * 10).collect()
}

/// A grid of cases: scenario x position x optimizer, each run `repeats`
/// times per model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub system: SystemSource,
    /// Pattern pairs such as `"p2,p3"`.
    pub scenarios: Vec<String>,
    pub positions: Vec<Position>,
    pub optimizers: Vec<OptimizerKind>,
    #[serde(default = "both_models")]
    pub models: Vec<Mode>,
    pub budget: usize,
    #[serde(default)]
    pub population_size: PopulationSize,
    pub repeats: usize,
    #[serde(default)]
    pub base_seed: u64,
    pub output_dir: PathBuf,
    /// Budget of each pilot run that approximates the Pareto front; defaults
    /// to ten times `budget`.
    #[serde(default)]
    pub pilot_budget: Option<usize>,
    #[serde(default = "default_candidates")]
    pub population_candidates: Vec<usize>,
}

/// One cell of the experiment grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseSpec {
    pub id: String,
    pub kinds: [PatternKind; 2],
    pub position: Position,
    pub optimizer: OptimizerKind,
}

impl ExperimentPlan {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidPlan(e.to_string()))
    }

    /// Loads a plan; relative system and output paths resolve against the
    /// plan's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let mut plan = Self::from_json_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        plan.system = plan.system.relative_to(base);
        if plan.output_dir.is_relative() {
            plan.output_dir = base.join(&plan.output_dir);
        }
        Ok(plan)
    }

    pub fn pilot_budget(&self) -> usize {
        self.pilot_budget.unwrap_or(self.budget.saturating_mul(10))
    }

    /// Checks the plan and returns its cases in grid order.
    pub fn cases(&self) -> Result<Vec<CaseSpec>> {
        let bad = |m: String| Err(Error::InvalidPlan(m));
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if self.budget == 0 {
            return bad("budget must be at least 1".into());
        }
        if self.scenarios.is_empty()
            || self.positions.is_empty()
            || self.optimizers.is_empty()
            || self.models.is_empty()
        {
            return bad("scenarios, positions, optimizers and models must be non-empty".into());
        }
        let mut kinds = Vec::new();
        for s in &self.scenarios {
            let k = parse_pattern_pair(s).map_err(|e| Error::InvalidPlan(e.to_string()))?;
            if kinds.contains(&k) {
                return bad(format!("duplicate scenario {s:?}"));
            }
            kinds.push(k);
        }
        if self.positions.contains(&Position::Custom) {
            return bad("position custom cannot be used in a plan".into());
        }
        if self.positions.contains(&Position::Unrealistic) {
            if let Some(k) = kinds.iter().find(|k| k.contains(&PatternKind::P0)) {
                return bad(format!(
                    "position u needs aspirations on both objectives, but scenario {} uses p0",
                    pair_label(*k)
                ));
            }
        }
        for (name, dupes) in [
            (
                "positions",
                self.positions.len() != self.positions.iter().collect::<HashSet<_>>().len(),
            ),
            (
                "optimizers",
                self.optimizers.len() != self.optimizers.iter().collect::<HashSet<_>>().len(),
            ),
            (
                "models",
                self.models.len() != self.models.iter().collect::<HashSet<_>>().len(),
            ),
        ] {
            if dupes {
                return bad(format!("duplicate entries in {name}"));
            }
        }
        match self.population_size {
            PopulationSize::Fixed(0) => return bad("population_size must be at least 1".into()),
            PopulationSize::Fixed(n) if n > self.budget => {
                return bad(format!(
                    "budget {} is below population size {n}",
                    self.budget
                ));
            }
            PopulationSize::Fixed(n) if n > self.pilot_budget() => {
                return bad(format!(
                    "pilot budget {} is below population size {n}",
                    self.pilot_budget()
                ));
            }
            PopulationSize::Auto => match self.population_candidates.iter().min() {
                None | Some(0) => return bad("population candidates must be positive".into()),
                Some(&m) if m > self.budget => {
                    return bad(format!(
                        "budget {} is below the smallest population candidate {m}",
                        self.budget
                    ));
                }
                _ => {}
            },
            _ => {}
        }

        let mut cases = Vec::new();
        for &k in &kinds {
            for &position in &self.positions {
                for &optimizer in &self.optimizers {
                    cases.push(CaseSpec {
                        id: format!("{}_{}_{}", pair_label(k), position, optimizer),
                        kinds: k,
                        position,
                        optimizer,
                    });
                }
            }
        }
        Ok(cases)
    }
}

/// Stable seed for one run, from the plan seed and the run's identity.
pub fn run_seed(base_seed: u64, case_id: &str, mode: Mode, repeat: usize) -> u64 {
    // FNV-1a over the identity, then a splitmix finalizer.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    eat(&base_seed.to_le_bytes());
    eat(case_id.as_bytes());
    eat(mode.token().as_bytes());
    eat(&(repeat as u64).to_le_bytes());
    let mut x = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(extra: &str) -> ExperimentPlan {
        let base = r#"{"system":{"kind":"table","path":"d.csv"},"scenarios":["p2,p3"],"positions":["c"],
            "optimizers":["nsga2"],"budget":50,"repeats":3,"output_dir":"out""#;
        ExperimentPlan::from_json_str(&format!("{base}{extra}}}")).unwrap()
    }

    #[test]
    fn defaults() {
        let p = plan("");
        assert_eq!(p.models, vec![Mode::With, Mode::Without]);
        assert_eq!(p.population_size, PopulationSize::Auto);
        assert_eq!(p.pilot_budget(), 500);
        assert_eq!(p.population_candidates, default_candidates());
        let cases = p.cases().unwrap();
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].id, "p2-p3_c_nsga2");
    }

    #[test]
    fn population_forms() {
        assert_eq!(
            plan(r#","population_size":20"#).population_size,
            PopulationSize::Fixed(20)
        );
        assert_eq!(
            plan(r#","population_size":"auto""#).population_size,
            PopulationSize::Auto
        );
        assert!(ExperimentPlan::from_json_str(r#"{"population_size":"big"}"#).is_err());
    }

    #[test]
    fn unrealistic_position_rejects_p0() {
        let mut p = plan("");
        p.scenarios = vec!["p0,p3".into()];
        p.positions = vec![Position::Unrealistic];
        assert!(matches!(p.cases(), Err(Error::InvalidPlan(m)) if m.contains("p0-p3")));
        p.scenarios = vec!["p1,p3".into()];
        assert!(p.cases().is_ok());
    }

    #[test]
    fn invalid_plans() {
        let mut p = plan("");
        p.repeats = 0;
        assert!(p.cases().is_err());
        let mut p = plan(r#","population_size":60"#);
        assert!(p.cases().is_err());
        p.population_size = PopulationSize::Fixed(10);
        p.scenarios = vec!["p2,p3".into(), "{p2,p3}".into()];
        assert!(p.cases().is_err());
        let mut p = plan("");
        p.population_candidates = vec![60, 70];
        assert!(p.cases().is_err());
        assert!(ExperimentPlan::from_json_str(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn grid_order() {
        let mut p = plan("");
        p.scenarios = vec!["p2,p3".into(), "p1,p1".into()];
        p.positions = vec![Position::LeftShifted, Position::Unrealistic];
        p.optimizers = vec![OptimizerKind::Nsga2, OptimizerKind::Moead];
        let ids: Vec<String> = p.cases().unwrap().into_iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), 8);
        assert_eq!(ids[0], "p2-p3_l_nsga2");
        assert_eq!(ids[3], "p2-p3_u_moead");
        assert_eq!(ids[7], "p1-p1_u_moead");
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(
            run_seed(1, "a", Mode::With, 0),
            run_seed(1, "a", Mode::With, 0)
        );
        let mut seen = HashSet::new();
        for case in ["p2-p3_c_nsga2", "p2-p3_c_ibea", "p1-p1_l_nsga2"] {
            for mode in [Mode::With, Mode::Without] {
                for r in 0..100 {
                    assert!(seen.insert(run_seed(7, case, mode, r)));
                }
            }
        }
        assert_ne!(
            run_seed(7, "a", Mode::With, 0),
            run_seed(8, "a", Mode::With, 0)
        );
    }
}
