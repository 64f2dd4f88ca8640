use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use super::{header_cells, parse_header, System};
use crate::error::{Error, MeasureError, Result};
use crate::problem::{Configuration, ConfigurationSpace, Objectives, PerfVector};

/// A measured dataset: exact-match lookup of configurations.
///
/// File format: UTF-8, comma-separated, no quoting. The header holds
/// `opt:<name>:bin`, `opt:<name>:int:<lo>:<hi>` or
/// `opt:<name>:enum:<v1>|<v2>|...` cells followed by two
/// `obj:<name>:min|max` cells. Repeated configurations are aggregated by the
/// per-objective median.
#[derive(Clone, Debug)]
pub struct TableSystem {
    space: ConfigurationSpace,
    objectives: Objectives,
    rows: HashMap<Configuration, PerfVector>,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

impl TableSystem {
    /// Builds a table, median-aggregating repeated configurations.
    pub fn from_rows(
        space: ConfigurationSpace,
        objectives: Objectives,
        rows: impl IntoIterator<Item = (Configuration, PerfVector)>,
    ) -> Result<Self> {
        let mut grouped: BTreeMap<Configuration, [Vec<f64>; 2]> = BTreeMap::new();
        for (c, p) in rows {
            space.validate(&c)?;
            let e = grouped.entry(c).or_default();
            e[0].push(p.f[0]);
            e[1].push(p.f[1]);
        }
        let rows = grouped
            .into_iter()
            .map(|(c, mut v)| {
                let f = [median(&mut v[0]), median(&mut v[1])];
                (c, PerfVector { f })
            })
            .collect();
        Ok(Self {
            space,
            objectives,
            rows,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::parse(&text, path)
    }

    /// Parses dataset text; `path` only labels errors.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, message: String| Error::Load {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = text.split('\n').enumerate();
        let header = lines
            .next()
            .map(|(_, l)| l.trim_end_matches('\r'))
            .unwrap_or("");
        if header.is_empty() {
            return Err(err(1, "missing header".into()));
        }
        let cells: Vec<&str> = header.split(',').collect();
        let (space, objectives) = parse_header(&cells).map_err(|m| err(1, m))?;
        let width = cells.len();
        let mut rows = Vec::new();
        for (i, line) in lines {
            let line = line.trim_end_matches('\r');
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != width {
                return Err(err(
                    lineno,
                    format!("expected {width} cells, got {}", cells.len()),
                ));
            }
            let mut values = Vec::with_capacity(space.len());
            for (o, cell) in space.options().iter().zip(&cells) {
                let v = o.parse_token(cell).ok_or_else(|| {
                    err(
                        lineno,
                        format!("value {cell:?} is not in the domain of option {}", o.name()),
                    )
                })?;
                values.push(v);
            }
            let mut f = [0.0; 2];
            for (j, cell) in cells[space.len()..].iter().enumerate() {
                f[j] = cell
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(lineno, format!("non-numeric objective value {cell:?}")))?;
            }
            rows.push((Configuration::new(values), PerfVector { f }));
        }
        Self::from_rows(space, objectives, rows)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows in configuration order.
    pub fn rows(&self) -> Vec<(&Configuration, &PerfVector)> {
        let mut rows: Vec<_> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = header_cells(&self.space, &self.objectives).join(",");
        out.push('\n');
        for (c, p) in self.rows() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.space.canonical_key(c),
                p.f[0],
                p.f[1]
            ));
        }
        out
    }
}

impl System for TableSystem {
    fn space(&self) -> &ConfigurationSpace {
        &self.space
    }

    fn objectives(&self) -> &Objectives {
        &self.objectives
    }

    fn measure(&self, config: &Configuration) -> Result<PerfVector, MeasureError> {
        self.rows
            .get(config)
            .copied()
            .ok_or(MeasureError::Unmeasured)
    }
}
