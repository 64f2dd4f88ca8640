//! Configurable-system backends: measured tables, a seeded synthetic
//! landscape, and an external measurement process.

mod subprocess;
mod synth;
mod table;

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use subprocess::SubprocessSystem;
pub use synth::{SynthParams, SynthSystem};
pub use table::TableSystem;

use crate::error::{Error, MeasureError, Result};
use crate::problem::{
    Configuration, ConfigurationSpace, Direction, ObjectiveSpec, Objectives, OptionDef, PerfVector,
};

/// A configurable system that can be measured. Implementations must be safe
/// to call from concurrent runs.
pub trait System: Send + Sync {
    fn space(&self) -> &ConfigurationSpace;
    fn objectives(&self) -> &Objectives;
    fn measure(&self, config: &Configuration) -> Result<PerfVector, MeasureError>;
}

/// A system backed by a closure.
pub struct FnSystem<F> {
    space: ConfigurationSpace,
    objectives: Objectives,
    f: F,
}

impl<F> FnSystem<F>
where
    F: Fn(&Configuration) -> Result<PerfVector, MeasureError> + Send + Sync,
{
    pub fn new(space: ConfigurationSpace, objectives: Objectives, f: F) -> Self {
        Self {
            space,
            objectives,
            f,
        }
    }
}

impl<F> System for FnSystem<F>
where
    F: Fn(&Configuration) -> Result<PerfVector, MeasureError> + Send + Sync,
{
    fn space(&self) -> &ConfigurationSpace {
        &self.space
    }

    fn objectives(&self) -> &Objectives {
        &self.objectives
    }

    fn measure(&self, config: &Configuration) -> Result<PerfVector, MeasureError> {
        (self.f)(config)
    }
}

/// Parses one `opt:` header cell.
pub fn parse_option_cell(cell: &str) -> std::result::Result<OptionDef, String> {
    let parts: Vec<&str> = cell.splitn(4, ':').collect();
    let fail = |why: &str| format!("bad option header {cell:?}: {why}");
    match parts.as_slice() {
        ["opt", name, "bin"] => OptionDef::binary(*name).map_err(|e| e.to_string()),
        ["opt", name, "int", range] => {
            let (lo, hi) = range
                .split_once(':')
                .ok_or_else(|| fail("expected int:<lo>:<hi>"))?;
            let lo = lo
                .parse::<i64>()
                .map_err(|_| fail("non-integer lower bound"))?;
            let hi = hi
                .parse::<i64>()
                .map_err(|_| fail("non-integer upper bound"))?;
            OptionDef::integer(*name, lo, hi).map_err(|e| e.to_string())
        }
        ["opt", name, "enum", tokens] => {
            OptionDef::enumerated(*name, tokens.split('|')).map_err(|e| e.to_string())
        }
        _ => Err(fail("expected opt:<name>:bin|int|enum")),
    }
}

/// Parses one `obj:` header cell.
pub fn parse_objective_cell(cell: &str) -> std::result::Result<ObjectiveSpec, String> {
    match cell.split(':').collect::<Vec<_>>().as_slice() {
        ["obj", name, "min"] if !name.is_empty() => {
            Ok(ObjectiveSpec::new(*name, Direction::Minimize))
        }
        ["obj", name, "max"] if !name.is_empty() => {
            Ok(ObjectiveSpec::new(*name, Direction::Maximize))
        }
        _ => Err(format!(
            "bad objective header {cell:?}: expected obj:<name>:min|max"
        )),
    }
}

/// Parses a dataset header: option cells followed by exactly two objective
/// cells.
pub fn parse_header<S: AsRef<str>>(
    cells: &[S],
) -> std::result::Result<(ConfigurationSpace, Objectives), String> {
    if cells.len() < 3 {
        return Err("header needs at least one option and two objectives".into());
    }
    let (opts, objs) = cells.split_at(cells.len() - 2);
    let options = opts
        .iter()
        .map(|c| parse_option_cell(c.as_ref()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let objectives = [
        parse_objective_cell(objs[0].as_ref())?,
        parse_objective_cell(objs[1].as_ref())?,
    ];
    let space = ConfigurationSpace::new(options).map_err(|e| e.to_string())?;
    Ok((space, objectives))
}

/// Header cells describing a space and its objectives.
pub fn header_cells(space: &ConfigurationSpace, objectives: &Objectives) -> Vec<String> {
    space
        .options()
        .iter()
        .map(OptionDef::header_cell)
        .chain(
            objectives
                .iter()
                .map(|o| format!("obj:{}:{}", o.name, o.direction.token())),
        )
        .collect()
}

/// Where a system comes from, as written in plan and system files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SystemSource {
    Table {
        path: PathBuf,
    },
    Synth {
        header: Vec<String>,
        #[serde(flatten)]
        params: SynthParams,
    },
    Subprocess {
        header: Vec<String>,
        command: Vec<String>,
        #[serde(default = "default_timeout_ms")]
        timeout_ms: u64,
    },
}

fn default_timeout_ms() -> u64 {
    60_000
}

impl SystemSource {
    /// A `.csv` path is a table dataset; anything else is a JSON system file.
    pub fn from_path(path: &Path) -> Result<Self> {
        if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        {
            return Ok(SystemSource::Table {
                path: path.to_path_buf(),
            });
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let source: SystemSource = serde_json::from_str(&text)?;
        Ok(source.relative_to(path.parent().unwrap_or(Path::new("."))))
    }

    /// Resolves relative table paths against `base`.
    pub fn relative_to(self, base: &Path) -> Self {
        match self {
            SystemSource::Table { path } if path.is_relative() => SystemSource::Table {
                path: base.join(path),
            },
            other => other,
        }
    }

    /// Short name used in result tables.
    pub fn label(&self) -> String {
        match self {
            SystemSource::Table { path } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "table".into()),
            SystemSource::Synth { params, .. } => format!("synth-{}", params.seed),
            SystemSource::Subprocess { command, .. } => command
                .first()
                .and_then(|c| Path::new(c).file_name())
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "subprocess".into()),
        }
    }

    pub fn open(&self) -> Result<Box<dyn System>> {
        let header_err = |e: String| Error::InvalidInput(format!("system header: {e}"));
        Ok(match self {
            SystemSource::Table { path } => Box::new(TableSystem::load(path)?),
            SystemSource::Synth { header, params } => {
                let (space, objectives) = parse_header(header).map_err(header_err)?;
                Box::new(SynthSystem::new(space, objectives, params.clone())?)
            }
            SystemSource::Subprocess {
                header,
                command,
                timeout_ms,
            } => {
                let (space, objectives) = parse_header(header).map_err(header_err)?;
                Box::new(SubprocessSystem::new(
                    space,
                    objectives,
                    command.clone(),
                    Duration::from_millis(*timeout_ms),
                )?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trip() {
        let cells = [
            "opt:a:bin",
            "opt:n:int:-2:5",
            "opt:e:enum:x|y|z",
            "obj:lat:min",
            "obj:thr:max",
        ];
        let (space, objectives) = parse_header(&cells).unwrap();
        assert_eq!(space.cardinality(), 2 * 8 * 3);
        assert_eq!(objectives[1].direction, Direction::Maximize);
        assert_eq!(header_cells(&space, &objectives), cells);
    }

    #[test]
    fn header_errors() {
        assert!(parse_header(&["opt:a:bin", "obj:x:min"]).is_err());
        assert!(parse_header(&["opt:a:float", "obj:x:min", "obj:y:min"]).is_err());
        assert!(parse_header(&["opt:a:int:3:1", "obj:x:min", "obj:y:min"]).is_err());
        assert!(parse_header(&["opt:a:bin", "obj:x:min", "obj:y:up"]).is_err());
        assert!(parse_header(&["opt:a:bin", "opt:a:bin", "obj:x:min", "obj:y:min"]).is_err());
    }

    #[test]
    fn source_json_forms() {
        let s: SystemSource = serde_json::from_str(
            r#"{"kind":"synth","header":["opt:a:bin","obj:f1:min","obj:f2:min"],"seed":3,"k":1,"sparsity":0.5,"conflict":0.8}"#,
        )
        .unwrap();
        assert_eq!(s.label(), "synth-3");
        let sys = s.open().unwrap();
        assert_eq!(sys.space().cardinality(), 2);
        let t: SystemSource = serde_json::from_str(r#"{"kind":"table","path":"d.csv"}"#).unwrap();
        assert_eq!(
            t.relative_to(Path::new("/data")),
            SystemSource::Table {
                path: PathBuf::from("/data/d.csv")
            }
        );
    }
}
