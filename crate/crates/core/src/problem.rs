//! Configuration spaces, configurations, raw performance vectors and Pareto
//! dominance.
//!
//! A configuration stores one `i64` gene per option. Binary and integer genes
//! hold the option value itself; enumerated genes hold the index of the token
//! in the option's ordered token list.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Separator used by canonical keys and the dataset file format.
pub const COLUMN_SEPARATOR: char = ',';

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OptionKind {
    Binary,
    Integer { lo: i64, hi: i64 },
    Enumerated(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptionDef {
    name: String,
    kind: OptionKind,
}

fn check_identifier(name: &str) -> Result<()> {
    if name.is_empty() || name.contains([COLUMN_SEPARATOR, ':', '\n', '\r']) {
        return Err(Error::InvalidSpace(format!("invalid option name {name:?}")));
    }
    Ok(())
}

impl OptionDef {
    pub fn binary(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        check_identifier(&name)?;
        Ok(Self {
            name,
            kind: OptionKind::Binary,
        })
    }

    pub fn integer(name: impl Into<String>, lo: i64, hi: i64) -> Result<Self> {
        let name = name.into();
        check_identifier(&name)?;
        if lo > hi {
            return Err(Error::InvalidSpace(format!(
                "option {name}: integer range [{lo}, {hi}] is empty"
            )));
        }
        Ok(Self {
            name,
            kind: OptionKind::Integer { lo, hi },
        })
    }

    pub fn enumerated<S: Into<String>>(
        name: impl Into<String>,
        tokens: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let name = name.into();
        check_identifier(&name)?;
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::InvalidSpace(format!("option {name}: no tokens")));
        }
        let mut seen = HashSet::new();
        for t in &tokens {
            if t.is_empty() || t.contains([COLUMN_SEPARATOR, '|', '\n', '\r']) {
                return Err(Error::InvalidSpace(format!(
                    "option {name}: invalid token {t:?}"
                )));
            }
            if !seen.insert(t.as_str()) {
                return Err(Error::InvalidSpace(format!(
                    "option {name}: duplicate token {t:?}"
                )));
            }
        }
        Ok(Self {
            name,
            kind: OptionKind::Enumerated(tokens),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &OptionKind {
        &self.kind
    }

    /// Smallest gene value.
    pub fn lower(&self) -> i64 {
        match &self.kind {
            OptionKind::Binary => 0,
            OptionKind::Integer { lo, .. } => *lo,
            OptionKind::Enumerated(_) => 0,
        }
    }

    /// Largest gene value.
    pub fn upper(&self) -> i64 {
        match &self.kind {
            OptionKind::Binary => 1,
            OptionKind::Integer { hi, .. } => *hi,
            OptionKind::Enumerated(tokens) => tokens.len() as i64 - 1,
        }
    }

    pub fn cardinality(&self) -> u128 {
        (self.upper() as i128 - self.lower() as i128 + 1) as u128
    }

    pub fn contains(&self, value: i64) -> bool {
        (self.lower()..=self.upper()).contains(&value)
    }

    /// Text form of a gene value, as used in keys and files.
    pub fn token(&self, value: i64) -> String {
        match &self.kind {
            OptionKind::Enumerated(tokens) => tokens[value as usize].clone(),
            _ => value.to_string(),
        }
    }

    pub fn parse_token(&self, token: &str) -> Option<i64> {
        let value = match &self.kind {
            OptionKind::Enumerated(tokens) => tokens.iter().position(|t| t == token)? as i64,
            _ => token.trim().parse::<i64>().ok()?,
        };
        self.contains(value).then_some(value)
    }

    /// JSON form of a gene value: numbers for binary/integer, strings for
    /// enumerated tokens.
    pub fn json_value(&self, value: i64) -> serde_json::Value {
        match &self.kind {
            OptionKind::Enumerated(tokens) => {
                serde_json::Value::String(tokens[value as usize].clone())
            }
            _ => serde_json::Value::from(value),
        }
    }

    /// Header cell of the dataset format, e.g. `opt:threads:int:1:8`.
    pub fn header_cell(&self) -> String {
        match &self.kind {
            OptionKind::Binary => format!("opt:{}:bin", self.name),
            OptionKind::Integer { lo, hi } => format!("opt:{}:int:{lo}:{hi}", self.name),
            OptionKind::Enumerated(tokens) => {
                format!("opt:{}:enum:{}", self.name, tokens.join("|"))
            }
        }
    }

    fn random_value<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        rng.gen_range(self.lower()..=self.upper())
    }
}

/// A concrete assignment of one value per option.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    values: Vec<i64>,
}

impl Configuration {
    /// Wraps raw gene values; validity is checked by
    /// [`ConfigurationSpace::validate`].
    pub fn new(values: Vec<i64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn values_mut(&mut self) -> &mut [i64] {
        &mut self.values
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigurationSpace {
    options: Vec<OptionDef>,
}

impl ConfigurationSpace {
    pub fn new(options: Vec<OptionDef>) -> Result<Self> {
        if options.is_empty() {
            return Err(Error::InvalidSpace("no options".into()));
        }
        let mut names = HashSet::new();
        for o in &options {
            if !names.insert(o.name()) {
                return Err(Error::InvalidSpace(format!(
                    "duplicate option name {}",
                    o.name()
                )));
            }
        }
        Ok(Self { options })
    }

    pub fn options(&self) -> &[OptionDef] {
        &self.options
    }

    pub fn len(&self) -> usize {
        self.options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.options.iter().position(|o| o.name() == name)
    }

    /// Size of the Cartesian product, saturating at `u128::MAX`.
    pub fn cardinality(&self) -> u128 {
        self.options
            .iter()
            .fold(1u128, |acc, o| acc.saturating_mul(o.cardinality()))
    }

    pub fn validate(&self, config: &Configuration) -> Result<()> {
        if config.len() != self.options.len() {
            return Err(Error::InvalidConfiguration(format!(
                "expected {} values, got {}",
                self.options.len(),
                config.len()
            )));
        }
        for (o, &v) in self.options.iter().zip(config.values()) {
            if !o.contains(v) {
                return Err(Error::InvalidConfiguration(format!(
                    "value {v} outside the domain of option {}",
                    o.name()
                )));
            }
        }
        Ok(())
    }

    /// Deterministic, injective text key: option tokens joined by `,`.
    pub fn canonical_key(&self, config: &Configuration) -> String {
        let mut key = String::new();
        for (i, (o, &v)) in self.options.iter().zip(config.values()).enumerate() {
            if i > 0 {
                key.push(COLUMN_SEPARATOR);
            }
            key.push_str(&o.token(v));
        }
        key
    }

    /// Inverse of [`canonical_key`](Self::canonical_key).
    pub fn parse_key(&self, key: &str) -> Result<Configuration> {
        let tokens: Vec<&str> = key.split(COLUMN_SEPARATOR).collect();
        if tokens.len() != self.options.len() {
            return Err(Error::InvalidConfiguration(format!(
                "key {key:?} has {} fields, expected {}",
                tokens.len(),
                self.options.len()
            )));
        }
        self.options
            .iter()
            .zip(tokens)
            .map(|(o, t)| {
                o.parse_token(t).ok_or_else(|| {
                    Error::InvalidConfiguration(format!(
                        "token {t:?} invalid for option {}",
                        o.name()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Configuration::new)
    }

    /// Draws each option value uniformly from its domain.
    pub fn random_config<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        Configuration::new(self.options.iter().map(|o| o.random_value(rng)).collect())
    }

    /// Lazily enumerates the whole space in lexicographic gene order.
    pub fn iter(&self) -> SpaceIter<'_> {
        SpaceIter {
            space: self,
            next: Some(self.options.iter().map(OptionDef::lower).collect()),
        }
    }
}

pub struct SpaceIter<'a> {
    space: &'a ConfigurationSpace,
    next: Option<Vec<i64>>,
}

impl Iterator for SpaceIter<'_> {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for (i, o) in self.space.options.iter().enumerate().rev() {
            if succ[i] < o.upper() {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = o.lower();
        }
        Some(Configuration::new(current))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// Maps a native value to minimized form.
    pub fn minimized(self, x: f64) -> f64 {
        match self {
            Direction::Minimize => x,
            Direction::Maximize => -x,
        }
    }

    /// Maps a minimized value back to native units.
    pub fn native(self, x: f64) -> f64 {
        self.minimized(x)
    }

    pub fn token(self) -> &'static str {
        match self {
            Direction::Minimize => "min",
            Direction::Maximize => "max",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub name: String,
    pub direction: Direction,
}

impl ObjectiveSpec {
    pub fn new(name: impl Into<String>, direction: Direction) -> Self {
        Self {
            name: name.into(),
            direction,
        }
    }

    pub fn minimize(name: impl Into<String>) -> Self {
        Self::new(name, Direction::Minimize)
    }

    pub fn maximize(name: impl Into<String>) -> Self {
        Self::new(name, Direction::Maximize)
    }
}

/// The two objectives of a problem.
pub type Objectives = [ObjectiveSpec; 2];

pub fn directions(objectives: &Objectives) -> [Direction; 2] {
    [objectives[0].direction, objectives[1].direction]
}

/// Raw measurements of the two objectives in native units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerfVector {
    pub f: [f64; 2],
}

impl PerfVector {
    pub fn new(f1: f64, f2: f64) -> Result<Self> {
        if !(f1.is_finite() && f2.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite performance ({f1}, {f2})"
            )));
        }
        Ok(Self { f: [f1, f2] })
    }

    /// Both components in minimized form.
    pub fn minimized(&self, directions: [Direction; 2]) -> [f64; 2] {
        [
            directions[0].minimized(self.f[0]),
            directions[1].minimized(self.f[1]),
        ]
    }
}

impl fmt::Display for PerfVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f[0], self.f[1])
    }
}

/// True iff `a` is no worse than `b` in both components and strictly better
/// in at least one, under the given per-component orientation.
pub fn dominates(a: [f64; 2], b: [f64; 2], orientation: [Direction; 2]) -> bool {
    let a = [
        orientation[0].minimized(a[0]),
        orientation[1].minimized(a[1]),
    ];
    let b = [
        orientation[0].minimized(b[0]),
        orientation[1].minimized(b[1]),
    ];
    dominates_min(a, b)
}

/// [`dominates`] with both components minimized.
#[inline]
pub fn dominates_min(a: [f64; 2], b: [f64; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}
