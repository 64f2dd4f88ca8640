//! Population size selection from the average change rate of the
//! population in pilot runs.

use rayon::prelude::*;

use super::plan::run_seed;
use crate::error::{Error, Result};
use crate::optimizers::{run, Mode, ModelChoice, OptimizerConfig, OptimizerKind};
use crate::systems::System;

/// Largest change rate at which a population counts as settled.
pub const MAX_CHANGE_RATE: f64 = 0.1;
/// Returned when no candidate settles.
pub const FALLBACK_SIZE: usize = 10;

/// Mean of `c_i / size` over the last `max(1, ceil(0.1 G))` of `G`
/// generations, where `c_i` counts members new in generation `i`. `None`
/// when no generation completed.
pub fn population_change_rate(changes: &[usize], size: usize) -> Option<f64> {
    let g = changes.len();
    if g == 0 || size == 0 {
        return None;
    }
    let k = ((g as f64 * 0.1).ceil() as usize).max(1);
    let tail = &changes[g - k..];
    Some(tail.iter().map(|&c| c as f64 / size as f64).sum::<f64>() / k as f64)
}

/// Picks the largest candidate whose PS-w/o pilot runs (one per optimizer)
/// all settle to a change rate of at most 0.1, or 10 if none does.
pub fn select_population_size(
    system: &dyn System,
    budget: usize,
    candidates: &[usize],
    optimizers: &[OptimizerKind],
    seed: u64,
) -> Result<usize> {
    let smallest = candidates.iter().copied().min().ok_or(Error::EmptySample)?;
    if budget < smallest {
        return Err(Error::BudgetBelowPopulation {
            budget,
            population: smallest,
        });
    }
    let mut conditions = Vec::new();
    for &s in candidates.iter().filter(|&&s| s <= budget) {
        for (i, &opt) in optimizers.iter().enumerate() {
            conditions.push((
                s,
                opt,
                run_seed(seed, &format!("population-{s}"), Mode::Without, i),
            ));
        }
    }
    let rates: Vec<Result<(usize, Option<f64>)>> = conditions
        .par_iter()
        .map(|&(s, opt, seed)| {
            let r = run(
                system.space(),
                system,
                budget,
                &ModelChoice::Without,
                &OptimizerConfig::new(opt, s),
                seed,
            )?;
            Ok((s, population_change_rate(&r.population_changes(), s)))
        })
        .collect();
    let rates = rates.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(pick_size(candidates, budget, &rates))
}

/// Largest candidate within budget whose every pilot rate is known and at
/// most 0.1; otherwise the fallback size.
pub fn pick_size(candidates: &[usize], budget: usize, rates: &[(usize, Option<f64>)]) -> usize {
    candidates
        .iter()
        .copied()
        .filter(|&s| s <= budget)
        .filter(|&s| {
            rates
                .iter()
                .filter(|r| r.0 == s)
                .all(|r| r.1.is_some_and(|g| g <= MAX_CHANGE_RATE))
        })
        .max()
        .unwrap_or(FALLBACK_SIZE)
}
