//! Per-run artifacts: `evals.csv`, `final_set.csv` and `meta.json`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Mode, OptimizerKind, RunResult};
use crate::error::{Error, Result};
use crate::problem::{ConfigurationSpace, PerfVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub seed: u64,
    pub model: Mode,
    pub optimizer: OptimizerKind,
    pub scenario: Option<serde_json::Value>,
    pub budget: usize,
    pub distinct_count: usize,
    pub population_size: usize,
    pub generations: usize,
}

impl RunResult {
    pub fn meta(&self) -> RunMeta {
        RunMeta {
            seed: self.seed,
            model: self.model.mode(),
            optimizer: self.optimizer,
            scenario: self.model.scenario().map(|s| s.to_json_value()),
            budget: self.budget,
            distinct_count: self.distinct_count(),
            population_size: self.population_size,
            generations: self.generations.len().saturating_sub(1),
        }
    }

    pub fn evals_csv(&self, space: &ConfigurationSpace) -> String {
        let mut out = String::from("eval_index");
        for o in space.options() {
            out.push(',');
            out.push_str(o.name());
        }
        out.push_str(",f1,f2\n");
        for r in &self.eval_log {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.index,
                space.canonical_key(&r.config),
                r.perf.f[0],
                r.perf.f[1]
            ));
        }
        out
    }

    pub fn final_set_csv(&self, space: &ConfigurationSpace) -> String {
        let mut out = space
            .options()
            .iter()
            .map(|o| o.name())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(",f1,f2\n");
        for (c, p) in &self.final_set {
            out.push_str(&format!(
                "{},{},{}\n",
                space.canonical_key(c),
                p.f[0],
                p.f[1]
            ));
        }
        out
    }

    /// Writes the run's artifacts into `dir`, creating it if needed.
    pub fn write_dir(&self, dir: &Path, space: &ConfigurationSpace) -> Result<()> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        let write = |name: &str, body: String| {
            let p = dir.join(name);
            std::fs::write(&p, body).map_err(|e| Error::io(format!("writing {}", p.display()), e))
        };
        write("evals.csv", self.evals_csv(space))?;
        write("final_set.csv", self.final_set_csv(space))?;
        write(
            "meta.json",
            serde_json::to_string_pretty(&self.meta())? + "\n",
        )
    }
}

/// Reads the trailing `f1,f2` columns of an `evals.csv` or `final_set.csv`.
pub fn read_perf_column(path: &Path) -> Result<Vec<PerfVector>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut lines = text.lines().enumerate();
    let load_err = |line: usize, message: String| Error::Load {
        path: path.to_path_buf(),
        line,
        message,
    };
    match lines.next() {
        Some((_, h)) if h.ends_with(",f1,f2") || h == "f1,f2" => {}
        _ => return Err(load_err(1, "header must end with f1,f2".into())),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut cells = line.rsplit(',');
        let f2 = cells.next().and_then(|s| s.parse::<f64>().ok());
        let f1 = cells.next().and_then(|s| s.parse::<f64>().ok());
        match (f1, f2) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => {
                out.push(PerfVector { f: [a, b] })
            }
            _ => return Err(load_err(i + 1, format!("bad objective values in {line:?}"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizers::{run, ModelChoice, OptimizerConfig};
    use crate::problem::{ObjectiveSpec, OptionDef};
    use crate::systems::FnSystem;

    fn result() -> (RunResult, ConfigurationSpace) {
        let space = ConfigurationSpace::new(vec![
            OptionDef::binary("a").unwrap(),
            OptionDef::enumerated("m", ["x", "y", "z"]).unwrap(),
        ])
        .unwrap();
        let sys = FnSystem::new(
            space.clone(),
            [ObjectiveSpec::minimize("t"), ObjectiveSpec::maximize("q")],
            |c| {
                let v = c.values();
                Ok::<_, crate::error::MeasureError>(PerfVector {
                    f: [1.0 + v[0] as f64, 0.5 * v[1] as f64],
                })
            },
        );
        let r = run(
            &space,
            &sys,
            4,
            &ModelChoice::Without,
            &OptimizerConfig::new(OptimizerKind::Nsga2, 2),
            5,
        )
        .unwrap();
        (r, space)
    }

    #[test]
    fn artifacts_round_trip() {
        let (r, space) = result();
        let dir = tempfile::tempdir().unwrap();
        r.write_dir(&dir.path().join("run_0"), &space).unwrap();
        let evals = std::fs::read_to_string(dir.path().join("run_0/evals.csv")).unwrap();
        assert!(evals.starts_with("eval_index,a,m,f1,f2\n1,"));
        assert_eq!(evals.lines().count(), r.distinct_count() + 1);
        let perf = read_perf_column(&dir.path().join("run_0/evals.csv")).unwrap();
        assert_eq!(perf, r.eval_log.iter().map(|e| e.perf).collect::<Vec<_>>());
        let fin = read_perf_column(&dir.path().join("run_0/final_set.csv")).unwrap();
        assert_eq!(fin, r.final_set.iter().map(|f| f.1).collect::<Vec<_>>());
        let meta: RunMeta = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("run_0/meta.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(meta, r.meta());
        assert_eq!(meta.scenario, None);
    }

    #[test]
    fn perf_column_errors_carry_lines() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        std::fs::write(&p, "a,f1,f2\n1,2,3\n1,x,3\n").unwrap();
        assert!(matches!(
            read_perf_column(&p),
            Err(Error::Load { line: 3, .. })
        ));
        std::fs::write(&p, "a,b\n").unwrap();
        assert!(matches!(
            read_perf_column(&p),
            Err(Error::Load { line: 1, .. })
        ));
    }
}
