use std::collections::HashMap;

use crate::error::{Error, MeasureError, Result};
use crate::problem::{Configuration, PerfVector};
use crate::systems::System;

/// One distinct measurement. `index` is 1-based: the number of distinct
/// measurements made up to and including this one.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalRecord {
    pub index: usize,
    pub config: Configuration,
    pub perf: PerfVector,
}

/// Cache of every distinct configuration measured in a run, with the
/// position of its record in the evaluation log.
#[derive(Clone, Debug, Default)]
pub struct MeasurementCache {
    entries: HashMap<Configuration, usize>,
    log: Vec<EvalRecord>,
}

impl MeasurementCache {
    pub fn get(&self, config: &Configuration) -> Option<&EvalRecord> {
        self.entries.get(config).map(|&i| &self.log[i])
    }

    pub fn position(&self, config: &Configuration) -> Option<usize> {
        self.entries.get(config).copied()
    }

    pub fn distinct(&self) -> usize {
        self.log.len()
    }

    pub fn log(&self) -> &[EvalRecord] {
        &self.log
    }

    pub fn into_log(self) -> Vec<EvalRecord> {
        self.log
    }

    fn insert(&mut self, config: Configuration, perf: PerfVector) -> usize {
        let pos = self.log.len();
        self.entries.insert(config.clone(), pos);
        self.log.push(EvalRecord {
            index: pos + 1,
            config,
            perf,
        });
        pos
    }
}

/// A system wrapped with a cache and a budget of distinct measurements.
pub struct BudgetedSystem<'a> {
    system: &'a dyn System,
    cache: MeasurementCache,
    budget: usize,
}

impl<'a> BudgetedSystem<'a> {
    pub fn new(system: &'a dyn System, budget: usize) -> Self {
        Self {
            system,
            cache: MeasurementCache::default(),
            budget,
        }
    }

    pub fn system(&self) -> &'a dyn System {
        self.system
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn cache(&self) -> &MeasurementCache {
        &self.cache
    }

    pub fn into_cache(self) -> MeasurementCache {
        self.cache
    }

    pub fn remaining(&self) -> usize {
        self.budget.saturating_sub(self.cache.distinct())
    }

    /// Returns the cached value on a hit. A miss consumes one unit of budget
    /// and invokes the system once; with no budget left it fails with
    /// [`Error::BudgetExhausted`].
    pub fn measure(&mut self, config: &Configuration) -> Result<PerfVector> {
        self.measure_indexed(config).map(|(p, _)| p)
    }

    /// Like [`measure`](Self::measure), also returning the log position.
    pub fn measure_indexed(&mut self, config: &Configuration) -> Result<(PerfVector, usize)> {
        if let Some(pos) = self.cache.position(config) {
            return Ok((self.cache.log[pos].perf, pos));
        }
        if self.cache.distinct() >= self.budget {
            return Err(Error::BudgetExhausted);
        }
        let perf = self
            .system
            .measure(config)
            .and_then(|p| {
                if p.f.iter().all(|v| v.is_finite()) {
                    Ok(p)
                } else {
                    Err(MeasureError::NonFinite)
                }
            })
            .map_err(|source| Error::Measurement {
                config: self.system.space().canonical_key(config),
                source,
            })?;
        let pos = self.cache.insert(config.clone(), perf);
        Ok((perf, pos))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{ConfigurationSpace, ObjectiveSpec, OptionDef};
    use crate::systems::FnSystem;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn cache_hits_are_free_and_misses_are_budgeted() {
        let calls = AtomicUsize::new(0);
        let space = ConfigurationSpace::new(vec![OptionDef::integer("x", 0, 9).unwrap()]).unwrap();
        let sys = FnSystem::new(
            space,
            [ObjectiveSpec::minimize("a"), ObjectiveSpec::minimize("b")],
            |c: &Configuration| {
                calls.fetch_add(1, Ordering::SeqCst);
                let x = c.values()[0] as f64;
                Ok(PerfVector { f: [x, -x] })
            },
        );
        let mut bs = BudgetedSystem::new(&sys, 1);
        let a = Configuration::new(vec![3]);
        assert_eq!(bs.measure(&a).unwrap().f, [3.0, -3.0]);
        assert_eq!(bs.measure(&a).unwrap().f, [3.0, -3.0]);
        assert_eq!(bs.cache().distinct(), 1);
        assert_eq!(calls.load(Ordering::SeqCst), 1);
        assert!(matches!(
            bs.measure(&Configuration::new(vec![4])),
            Err(Error::BudgetExhausted)
        ));
        assert_eq!(bs.cache().log()[0].index, 1);
    }

    #[test]
    fn failures_carry_the_configuration() {
        let space =
            ConfigurationSpace::new(vec![OptionDef::enumerated("e", ["a", "b"]).unwrap()]).unwrap();
        let sys = FnSystem::new(
            space,
            [ObjectiveSpec::minimize("a"), ObjectiveSpec::minimize("b")],
            |_: &Configuration| Err(MeasureError::Unmeasured),
        );
        let mut bs = BudgetedSystem::new(&sys, 5);
        match bs.measure(&Configuration::new(vec![1])) {
            Err(Error::Measurement { config, .. }) => assert_eq!(config, "b"),
            other => panic!("{other:?}"),
        }
        assert_eq!(bs.cache().distinct(), 0);
    }
}
