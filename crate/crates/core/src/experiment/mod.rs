//! Experiment runner: pilot front, aspiration levels, seeded case runs,
//! posterior A-HV evaluation, statistics and summary tables.

mod plan;
mod popsize;
mod summarize;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

pub use plan::{default_candidates, run_seed, CaseSpec, ExperimentPlan, PopulationSize};
pub use popsize::{
    pick_size, population_change_rate, select_population_size, FALLBACK_SIZE, MAX_CHANGE_RATE,
};
pub use summarize::{summarize, SummaryReport};

use crate::aspirations::{build_aspiration_levels, AspirationLevels, FrontSample, Position};
use crate::error::{Error, Result};
use crate::metrics::{
    a_hv, checkpoints, classify_outcome, mean_se, percent_gain, speedup, Gains, Outcome, Speedup,
    Trajectory,
};
use crate::optimizers::{
    guided_front, run, Mode, ModelChoice, OptimizerConfig, OptimizerKind, RunResult,
};
use crate::patterns::{BoundsTracker, ObjectiveRange, Pattern, PatternKind, Scenario};
use crate::problem::{directions, Configuration, Objectives, PerfVector};
use crate::stats::{a12, wilcoxon_rank_sum};
use crate::systems::System;

pub const SUMMARY_HEADER: &str = "case_id,system,scenario,position,optimizer,model,mean_ahv,se_ahv,mean_gain,se_gain,p_value,a12,verdict,significant,effect";

/// PS-w against PS-w/o over repeated runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub gains: Gains,
    pub p_value: f64,
    pub a12: f64,
    pub outcome: Outcome,
}

/// Gains, rank-sum p-value, Â12 and verdict of `with` over `without`.
pub fn compare(with: &[f64], without: &[f64]) -> Comparison {
    let p_value = wilcoxon_rank_sum(with, without);
    let a12 = a12(with, without);
    Comparison {
        gains: percent_gain(with, without),
        p_value,
        a12,
        outcome: classify_outcome(a12, p_value),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseResult {
    pub case: CaseSpec,
    /// Per-run A-HV by model, in repeat order.
    pub ahv: BTreeMap<Mode, Vec<f64>>,
    pub trajectories: BTreeMap<Mode, Trajectory>,
    /// Present when both models ran.
    pub comparison: Option<Comparison>,
    pub speedup: Option<Speedup>,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub output_dir: PathBuf,
    pub population_size: usize,
    pub posterior_bounds: Option<[ObjectiveRange; 2]>,
    pub cases: Vec<CaseResult>,
    /// Failed cases with the first error of each.
    pub failed: Vec<(String, String)>,
}

/// Approximates the Pareto front by merging long PS-w/o runs of every
/// optimizer.
pub fn pilot_front(
    system: &dyn System,
    budget: usize,
    population: usize,
    seed: u64,
) -> Result<FrontSample> {
    let runs: Vec<Result<RunResult>> = OptimizerKind::ALL
        .par_iter()
        .enumerate()
        .map(|(i, &opt)| {
            let s = run_seed(seed, "pilot", Mode::Without, i);
            run(
                system.space(),
                system,
                budget,
                &ModelChoice::Without,
                &OptimizerConfig::new(opt, population),
                s,
            )
        })
        .collect();
    let mut measured: BTreeMap<Configuration, PerfVector> = BTreeMap::new();
    for r in runs {
        for e in r?.eval_log {
            measured.insert(e.config, e.perf);
        }
    }
    let points: Vec<PerfVector> = measured.into_values().collect();
    FrontSample::from_landscape(&points, system.objectives().clone())
}

/// The scenario of a case: p0 where the pattern has no aspiration, else the
/// position's level for that objective.
pub fn case_scenario(
    kinds: [PatternKind; 2],
    levels: Option<&AspirationLevels>,
    objectives: &Objectives,
) -> Result<Scenario> {
    let pattern = |j: usize| -> Result<Pattern> {
        if !kinds[j].has_aspiration() {
            return Ok(Pattern::p0());
        }
        let levels =
            levels.ok_or_else(|| Error::InvalidPlan("missing aspiration levels".into()))?;
        Pattern::with_level(kinds[j], levels.d[j])
    };
    Ok(Scenario::online(
        [pattern(0)?, pattern(1)?],
        objectives.clone(),
    ))
}

fn model_for(mode: Mode, scenario: &Scenario) -> ModelChoice {
    match mode {
        Mode::With => ModelChoice::With(scenario.clone()),
        Mode::Without => ModelChoice::Without,
    }
}

/// A-HV of the guided nondominated set of each measurement prefix.
fn trajectory_values(
    r: &RunResult,
    scenario: &Scenario,
    posterior: &[ObjectiveRange; 2],
    cps: &[usize],
) -> Vec<f64> {
    let dirs = directions(scenario.objectives());
    let perfs: Vec<PerfVector> = r.eval_log.iter().map(|e| e.perf).collect();
    cps.iter()
        .map(|&c| {
            let prefix = &perfs[..c.min(perfs.len())];
            let front: Vec<PerfVector> = guided_front(&r.model, dirs, prefix)
                .into_iter()
                .map(|i| prefix[i])
                .collect();
            a_hv(&front, scenario, posterior)
        })
        .collect()
}

fn write(path: &Path, body: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .map_err(|e| Error::io(format!("creating {}", parent.display()), e))?;
    }
    fs::write(path, body).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn opt_num(v: Option<f64>) -> String {
    v.map_or_else(|| "na".to_string(), |v| v.to_string())
}

struct Task {
    case: usize,
    mode: Mode,
    repeat: usize,
    seed: u64,
}

/// Runs every case of `plan` and writes the result tree into its output
/// directory. Failed cases are reported, not fatal.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    let cases = plan.cases()?;
    let system = plan.system.open()?;
    let system: &dyn System = system.as_ref();
    let objectives = system.objectives().clone();
    let out = plan.output_dir.clone();
    fs::create_dir_all(&out).map_err(|e| Error::io(format!("creating {}", out.display()), e))?;

    let population = match plan.population_size {
        PopulationSize::Fixed(n) => n,
        PopulationSize::Auto => select_population_size(
            system,
            plan.budget,
            &plan.population_candidates,
            &plan.optimizers,
            plan.base_seed,
        )?,
    };
    if population > plan.budget {
        return Err(Error::BudgetBelowPopulation {
            budget: plan.budget,
            population,
        });
    }

    let mut levels: BTreeMap<Position, AspirationLevels> = BTreeMap::new();
    let pilot_budget = plan.pilot_budget().max(population);
    if cases
        .iter()
        .any(|c| c.kinds.iter().any(|k| k.has_aspiration()))
    {
        let front = pilot_front(system, pilot_budget, population, plan.base_seed)?;
        write(&out.join("pilot_front.csv"), front.to_csv())?;
        for &p in &plan.positions {
            levels.insert(p, build_aspiration_levels(&front, p)?);
        }
    }
    let scenarios = cases
        .iter()
        .map(|c| case_scenario(c.kinds, levels.get(&c.position), &objectives))
        .collect::<Result<Vec<_>>>()?;

    let mut tasks = Vec::new();
    let mut seeds = HashSet::new();
    for (i, c) in cases.iter().enumerate() {
        for &mode in &plan.models {
            for repeat in 0..plan.repeats {
                let seed = run_seed(plan.base_seed, &c.id, mode, repeat);
                if !seeds.insert(seed) {
                    return Err(Error::InvalidPlan(format!(
                        "seed collision for {} {mode} run {repeat}",
                        c.id
                    )));
                }
                tasks.push(Task {
                    case: i,
                    mode,
                    repeat,
                    seed,
                });
            }
        }
    }

    let results: Vec<Result<RunResult>> = tasks
        .par_iter()
        .map(|t| {
            let model = model_for(t.mode, &scenarios[t.case]);
            let opt = OptimizerConfig::new(cases[t.case].optimizer, population);
            run(system.space(), system, plan.budget, &model, &opt, t.seed)
        })
        .collect();

    let mut runs: Vec<Vec<(&Task, RunResult)>> = cases.iter().map(|_| Vec::new()).collect();
    let mut errors: Vec<Option<String>> = vec![None; cases.len()];
    for (t, r) in tasks.iter().zip(results) {
        match r {
            Ok(r) => runs[t.case].push((t, r)),
            Err(e) => {
                errors[t.case].get_or_insert_with(|| format!("{} run {}: {e}", t.mode, t.repeat));
            }
        }
    }

    let mut tracker = BoundsTracker::new();
    for (i, case_runs) in runs.iter().enumerate() {
        if errors[i].is_none() {
            for (_, r) in case_runs {
                r.eval_log.iter().for_each(|e| tracker.update(&e.perf));
            }
        }
    }
    let posterior = tracker.ranges();

    let mut summary = String::from(SUMMARY_HEADER);
    summary.push('\n');
    let mut results = Vec::new();
    let mut failed = Vec::new();
    let cps = checkpoints(plan.budget);
    let system_label = plan.system.label();
    for (i, case) in cases.iter().enumerate() {
        if let Some(e) = &errors[i] {
            failed.push((case.id.clone(), e.clone()));
            continue;
        }
        let posterior = posterior.expect("a successful case has measurements");
        let scenario = &scenarios[i];
        let case_dir = out.join("cases").join(&case.id);
        let mut ahv: BTreeMap<Mode, Vec<f64>> = BTreeMap::new();
        let mut traj_runs: BTreeMap<Mode, Vec<Vec<f64>>> = BTreeMap::new();
        let mut runs_csv = String::from("model,repeat,seed,ahv,distinct,generations\n");
        for (t, r) in &runs[i] {
            r.write_dir(
                &case_dir
                    .join(t.mode.token())
                    .join(format!("run_{}", t.repeat)),
                system.space(),
            )?;
            let finals: Vec<PerfVector> = r.final_set.iter().map(|(_, p)| *p).collect();
            let v = a_hv(&finals, scenario, &posterior);
            runs_csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                t.mode,
                t.repeat,
                t.seed,
                v,
                r.distinct_count(),
                r.generations.len().saturating_sub(1)
            ));
            ahv.entry(t.mode).or_default().push(v);
            traj_runs
                .entry(t.mode)
                .or_default()
                .push(trajectory_values(r, scenario, &posterior, &cps));
        }
        let trajectories: BTreeMap<Mode, Trajectory> = traj_runs
            .iter()
            .map(|(m, rs)| (*m, Trajectory::mean_of(&cps, rs)))
            .collect();

        let (comparison, speed) = match (ahv.get(&Mode::With), ahv.get(&Mode::Without)) {
            (Some(w), Some(wo)) => {
                let (base, other) = if case.position.is_realistic() {
                    (Mode::Without, Mode::With)
                } else {
                    (Mode::With, Mode::Without)
                };
                (
                    Some(compare(w, wo)),
                    Some(speedup(&trajectories[&base], &trajectories[&other])),
                )
            }
            _ => (None, None),
        };

        let mut traj_csv = String::from("evaluations");
        for m in trajectories.keys() {
            traj_csv.push(',');
            traj_csv.push_str(m.token());
        }
        traj_csv.push('\n');
        for (k, &c) in cps.iter().enumerate() {
            traj_csv.push_str(&c.to_string());
            for t in trajectories.values() {
                traj_csv.push_str(&format!(",{}", t.points[k].1));
            }
            traj_csv.push('\n');
        }
        write(&case_dir.join("runs.csv"), runs_csv)?;
        write(&case_dir.join("trajectory.csv"), traj_csv)?;
        scenario
            .with_posterior_bounds(posterior)
            .save(case_dir.join("scenario.json"))?;

        let model = if comparison.is_some() {
            Mode::With
        } else {
            plan.models[0]
        };
        let (mean_ahv, se_ahv) = mean_se(&ahv[&model]);
        let row_stats = match &comparison {
            Some(c) => {
                let (mg, sg) = mean_se(&c.gains.values);
                format!(
                    "{},{},{},{},{},{},{}",
                    mg,
                    sg,
                    c.p_value,
                    c.a12,
                    c.outcome.verdict.token(),
                    c.outcome.significant,
                    c.outcome.effect.token()
                )
            }
            None => vec![opt_num(None); 7].join(","),
        };
        summary.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            case.id,
            system_label,
            scenario.label(),
            case.position,
            case.optimizer,
            model,
            mean_ahv,
            se_ahv,
            row_stats
        ));
        results.push(CaseResult {
            case: case.clone(),
            ahv,
            trajectories,
            comparison,
            speedup: speed,
        });
    }
    write(&out.join("summary.csv"), summary)?;

    let level_map: BTreeMap<&str, [f64; 2]> =
        levels.iter().map(|(p, l)| (p.token(), l.d)).collect();
    let meta = json!({
        "system": system_label,
        "objectives": objectives,
        "base_seed": plan.base_seed,
        "budget": plan.budget,
        "repeats": plan.repeats,
        "population_size": population,
        "pilot_budget": pilot_budget,
        "aspiration_levels": level_map,
        "posterior_bounds": posterior,
        "cases": cases.len(),
        "failed_cases": failed.iter().map(|(id, e)| json!({"case_id": id, "error": e})).collect::<Vec<_>>(),
    });
    write(
        &out.join("meta.json"),
        serde_json::to_string_pretty(&meta)? + "\n",
    )?;

    Ok(ExperimentReport {
        output_dir: out,
        population_size: population,
        posterior_bounds: posterior,
        cases: results,
        failed,
    })
}
