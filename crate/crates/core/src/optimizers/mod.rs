//! Unified Pareto search with and without aspirations.
//!
//! The search loop is shared by NSGA-II, IBEA and MOEA/D. With aspirations
//! (PS-w), mating and environmental selection compare members by their
//! satisfaction-space fitness, recomputed from cached raw measurements under
//! the current normalization bounds. Without aspirations (PS-w/o), they
//! compare the raw objectives. Internally every guiding fitness is a
//! minimized pair: raw values in minimized form, or `1 - satisfaction`.

mod budget;
mod ibea;
mod moead;
mod nsga2;
mod operators;
mod output;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use budget::{BudgetedSystem, EvalRecord, MeasurementCache};
pub use ibea::{ibea_fitness, ibea_removal_order};
pub use moead::{moead_aggregate, neighborhoods, uniform_weights};
pub use nsga2::{crowding_distance, nondominated_indices, nondominated_sort};
pub use operators::{binary_tournament, boundary_mutation, uniform_crossover};
pub use output::{read_perf_column, RunMeta};

use crate::error::{Error, Result};
use crate::patterns::{transform, BoundsTracker, ObjectiveRange, Scenario};
use crate::problem::{directions, Configuration, ConfigurationSpace, Direction, PerfVector};
use crate::systems::System;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OptimizerKind {
    #[serde(rename = "nsga2")]
    Nsga2,
    #[serde(rename = "ibea")]
    Ibea,
    #[serde(rename = "moead")]
    Moead,
}

impl OptimizerKind {
    pub const ALL: [OptimizerKind; 3] = [
        OptimizerKind::Nsga2,
        OptimizerKind::Ibea,
        OptimizerKind::Moead,
    ];

    pub fn token(self) -> &'static str {
        match self {
            OptimizerKind::Nsga2 => "nsga2",
            OptimizerKind::Ibea => "ibea",
            OptimizerKind::Moead => "moead",
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nsga2" | "nsga-ii" => Ok(OptimizerKind::Nsga2),
            "ibea" => Ok(OptimizerKind::Ibea),
            "moead" | "moea/d" => Ok(OptimizerKind::Moead),
            other => Err(Error::InvalidInput(format!("unknown optimizer {other:?}"))),
        }
    }
}

/// With or without aspirations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "with")]
    With,
    #[serde(rename = "without")]
    Without,
}

impl Mode {
    pub fn token(self) -> &'static str {
        match self {
            Mode::With => "with",
            Mode::Without => "without",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "with" | "ps-w" => Ok(Mode::With),
            "without" | "ps-w/o" => Ok(Mode::Without),
            other => Err(Error::InvalidInput(format!("unknown model {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelChoice {
    /// PS-w: guided by the scenario's satisfaction space.
    With(Scenario),
    /// PS-w/o: guided by the raw objectives.
    Without,
}

impl ModelChoice {
    pub fn mode(&self) -> Mode {
        match self {
            ModelChoice::With(_) => Mode::With,
            ModelChoice::Without => Mode::Without,
        }
    }

    pub fn scenario(&self) -> Option<&Scenario> {
        match self {
            ModelChoice::With(s) => Some(s),
            ModelChoice::Without => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub kind: OptimizerKind,
    pub population_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub ibea_kappa: f64,
    pub moead_neighborhood: usize,
    /// Stop after this many consecutive generations without a new distinct
    /// measurement.
    pub max_stall_generations: usize,
}

impl OptimizerConfig {
    pub fn new(kind: OptimizerKind, population_size: usize) -> Self {
        Self {
            kind,
            population_size,
            crossover_rate: 0.9,
            mutation_rate: 0.1,
            ibea_kappa: 0.05,
            moead_neighborhood: default_neighborhood(population_size),
            max_stall_generations: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.population_size == 0 {
            return bad("population size must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_rate)
        {
            return bad("rates must lie in [0, 1]".into());
        }
        if self.ibea_kappa.is_nan() || self.ibea_kappa <= 0.0 {
            return bad("ibea_kappa must be positive".into());
        }
        if self.moead_neighborhood == 0 || self.moead_neighborhood > self.population_size.max(2) {
            return bad(format!(
                "moead neighborhood {} must lie in [1, {}]",
                self.moead_neighborhood, self.population_size
            ));
        }
        Ok(())
    }
}

/// `max(2, ceil(0.2 n))`, capped at `n`.
pub fn default_neighborhood(n: usize) -> usize {
    ((n as f64 * 0.2).ceil() as usize).max(2).min(n.max(1))
}

/// Outcome of one seeded run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub seed: u64,
    pub optimizer: OptimizerKind,
    pub model: ModelChoice,
    pub budget: usize,
    pub population_size: usize,
    /// Every distinct measurement in order.
    pub eval_log: Vec<EvalRecord>,
    /// Nondominated measured configurations under the guiding fitness, in
    /// evaluation order.
    pub final_set: Vec<(Configuration, PerfVector)>,
    /// Population of each generation (generation 0 is the initial one) as
    /// positions in `eval_log`.
    pub generations: Vec<Vec<usize>>,
}

impl RunResult {
    pub fn distinct_count(&self) -> usize {
        self.eval_log.len()
    }

    /// Per generation `i >= 1`, the number of members absent from
    /// generation `i - 1`.
    pub fn population_changes(&self) -> Vec<usize> {
        self.generations
            .windows(2)
            .map(|w| w[1].iter().filter(|m| !w[0].contains(m)).count())
            .collect()
    }
}

/// Minimized guiding fitness of raw measurements under a model.
pub(crate) struct Guide<'a> {
    model: &'a ModelChoice,
    dirs: [Direction; 2],
    ranges: Option<[ObjectiveRange; 2]>,
}

impl<'a> Guide<'a> {
    pub(crate) fn new(
        model: &'a ModelChoice,
        dirs: [Direction; 2],
        tracker: &BoundsTracker,
    ) -> Self {
        let ranges = match model {
            ModelChoice::With(s) => s.guiding_ranges(tracker),
            ModelChoice::Without => tracker.ranges(),
        };
        Self {
            model,
            dirs,
            ranges,
        }
    }

    pub(crate) fn fitness(&self, raw: &PerfVector) -> [f64; 2] {
        match self.model {
            ModelChoice::Without => raw.minimized(self.dirs),
            ModelChoice::With(s) => {
                let ranges = self
                    .ranges
                    .expect("bounds available after the first measurement");
                let t = transform(s, raw, &ranges);
                [1.0 - t[0], 1.0 - t[1]]
            }
        }
    }

    /// Guiding fitness rescaled to `[0, 1]` per objective by the running
    /// bounds (identity for satisfaction-space fitness).
    fn normalized(&self, raw: &PerfVector) -> [f64; 2] {
        let f = self.fitness(raw);
        match (self.model, self.ranges) {
            (ModelChoice::Without, Some(r)) => {
                let mut out = [0.0; 2];
                for j in 0..2 {
                    let (lo, hi) = match self.dirs[j] {
                        Direction::Minimize => (r[j].min, r[j].max),
                        Direction::Maximize => (-r[j].max, -r[j].min),
                    };
                    out[j] = if hi > lo {
                        (f[j] - lo) / (hi - lo)
                    } else {
                        0.0
                    };
                }
                out
            }
            _ => f,
        }
    }

    /// Normalized fitness of the best raw value seen on each objective.
    fn ideal(&self) -> [f64; 2] {
        let r = self
            .ranges
            .expect("bounds available after the first measurement");
        let best = |j: usize| match self.dirs[j] {
            Direction::Minimize => r[j].min,
            Direction::Maximize => r[j].max,
        };
        self.normalized(&PerfVector {
            f: [best(0), best(1)],
        })
    }
}

#[derive(Clone, Copy, Debug)]
struct Member {
    pos: usize,
    perf: PerfVector,
}

struct Search<'a, 's> {
    space: &'a ConfigurationSpace,
    system: BudgetedSystem<'s>,
    model: &'a ModelChoice,
    opt: &'a OptimizerConfig,
    rng: ChaCha8Rng,
    tracker: BoundsTracker,
    dirs: [Direction; 2],
    cardinality: u128,
    exhausted: bool,
}

impl Search<'_, '_> {
    fn guide(&self) -> Guide<'_> {
        Guide::new(self.model, self.dirs, &self.tracker)
    }

    fn config(&self, m: &Member) -> &Configuration {
        &self.system.cache().log()[m.pos].config
    }

    /// `Ok(None)` once the budget is exhausted on a miss.
    fn measure(&mut self, config: &Configuration) -> Result<Option<Member>> {
        match self.system.measure_indexed(config) {
            Ok((perf, pos)) => {
                self.tracker.update(&perf);
                Ok(Some(Member { pos, perf }))
            }
            Err(Error::BudgetExhausted) => {
                self.exhausted = true;
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    fn finished(&self) -> bool {
        let distinct = self.system.cache().distinct();
        self.exhausted || distinct >= self.system.budget() || distinct as u128 >= self.cardinality
    }

    fn breed(&mut self, a: &Configuration, b: &Configuration) -> (Configuration, Configuration) {
        let (x, y) = uniform_crossover(a, b, self.opt.crossover_rate, &mut self.rng);
        let x = boundary_mutation(&x, self.opt.mutation_rate, &mut self.rng, self.space);
        let y = boundary_mutation(&y, self.opt.mutation_rate, &mut self.rng, self.space);
        (x, y)
    }

    fn fitness_of(&self, members: &[Member]) -> Vec<[f64; 2]> {
        let guide = self.guide();
        members.iter().map(|m| guide.fitness(&m.perf)).collect()
    }

    /// Produces up to `n` measured offspring, two per mating, using
    /// `select` for each parent.
    fn offspring(
        &mut self,
        pop: &[Member],
        n: usize,
        mut select: impl FnMut(&mut ChaCha8Rng) -> usize,
    ) -> Result<Vec<Member>> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let a = select(&mut self.rng);
            let b = select(&mut self.rng);
            let (pa, pb) = (self.config(&pop[a]).clone(), self.config(&pop[b]).clone());
            let (x, y) = self.breed(&pa, &pb);
            for child in [x, y] {
                if out.len() == n {
                    break;
                }
                match self.measure(&child)? {
                    Some(m) => out.push(m),
                    None => return Ok(out),
                }
            }
        }
        Ok(out)
    }

    fn nsga2_generation(&mut self, pop: Vec<Member>) -> Result<Vec<Member>> {
        let n = self.opt.population_size;
        let fit = self.fitness_of(&pop);
        let (rank, crowd) = nsga2::rank_and_crowding(&fit);
        let children = self.offspring(&pop, n, |rng| {
            binary_tournament(pop.len(), rng, |a, b| {
                nsga2::crowded_compare(&rank, &crowd, a, b)
            })
        })?;
        let mut combined = pop;
        combined.extend(children);
        let fit = self.fitness_of(&combined);
        let mut next = Vec::with_capacity(n);
        for front in nsga2::sort_min(&fit) {
            if next.len() + front.len() <= n {
                next.extend(front.iter().map(|&i| combined[i]));
                if next.len() == n {
                    break;
                }
                continue;
            }
            let pts: Vec<[f64; 2]> = front.iter().map(|&i| fit[i]).collect();
            let crowd: Vec<f64> = crowding_distance(&pts)
                .into_iter()
                .map(nsga2::crowding_key)
                .collect();
            let coin: Vec<u64> = front.iter().map(|_| self.rng.gen()).collect();
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| crowd[b].total_cmp(&crowd[a]).then(coin[a].cmp(&coin[b])));
            let missing = n - next.len();
            next.extend(order[..missing].iter().map(|&k| combined[front[k]]));
            break;
        }
        Ok(next)
    }

    fn ibea_generation(&mut self, pop: Vec<Member>) -> Result<Vec<Member>> {
        let n = self.opt.population_size;
        let kappa = self.opt.ibea_kappa;
        let fitness = ibea_fitness(&self.fitness_of(&pop), kappa);
        let children = self.offspring(&pop, n, |rng| {
            binary_tournament(pop.len(), rng, |a, b| fitness[b].total_cmp(&fitness[a]))
        })?;
        let mut combined = pop;
        combined.extend(children);
        let fit = self.fitness_of(&combined);
        let removed = ibea_removal_order(&fit, kappa, n, &mut self.rng);
        let mut keep = vec![true; combined.len()];
        removed.into_iter().for_each(|i| keep[i] = false);
        Ok(combined
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(m, _)| m)
            .collect())
    }

    fn moead_generation(
        &mut self,
        mut pop: Vec<Member>,
        weights: &[[f64; 2]],
        hoods: &[Vec<usize>],
    ) -> Result<Vec<Member>> {
        for i in 0..pop.len() {
            let hood = &hoods[i];
            let agg: Vec<f64> = {
                let guide = self.guide();
                let ideal = guide.ideal();
                hood.iter()
                    .map(|&j| moead_aggregate(guide.normalized(&pop[j].perf), weights[i], ideal))
                    .collect()
            };
            let parent_a = hood
                [binary_tournament(hood.len(), &mut self.rng, |a, b| agg[a].total_cmp(&agg[b]))];
            let parent_b = hood
                [binary_tournament(hood.len(), &mut self.rng, |a, b| agg[a].total_cmp(&agg[b]))];
            let (pa, pb) = (
                self.config(&pop[parent_a]).clone(),
                self.config(&pop[parent_b]).clone(),
            );
            let (child, _) = self.breed(&pa, &pb);
            let Some(child) = self.measure(&child)? else {
                break;
            };
            let guide = self.guide();
            let ideal = guide.ideal();
            let c = guide.normalized(&child.perf);
            for &j in hood {
                let current = guide.normalized(&pop[j].perf);
                if moead_aggregate(c, weights[j], ideal)
                    < moead_aggregate(current, weights[j], ideal)
                {
                    pop[j] = child;
                }
            }
        }
        Ok(pop)
    }
}

/// Runs one seeded search until the budget of distinct measurements is
/// spent, the space is fully measured, or the search stalls.
pub fn run(
    space: &ConfigurationSpace,
    system: &dyn System,
    budget: usize,
    model: &ModelChoice,
    opt: &OptimizerConfig,
    seed: u64,
) -> Result<RunResult> {
    opt.validate()?;
    let n = opt.population_size;
    if budget < n {
        return Err(Error::BudgetBelowPopulation {
            budget,
            population: n,
        });
    }
    if let ModelChoice::With(s) = model {
        if s.objectives() != system.objectives() {
            return Err(Error::InvalidScenario(
                "scenario objectives do not match the system's objectives".into(),
            ));
        }
    }
    let dirs = directions(system.objectives());
    let mut search = Search {
        space,
        system: BudgetedSystem::new(system, budget),
        model,
        opt,
        rng: ChaCha8Rng::seed_from_u64(seed),
        tracker: BoundsTracker::new(),
        dirs,
        cardinality: space.cardinality(),
        exhausted: false,
    };

    let mut pop = Vec::with_capacity(n);
    for _ in 0..n {
        let c = space.random_config(&mut search.rng);
        let m = search
            .measure(&c)?
            .expect("budget covers the initial population");
        pop.push(m);
    }
    let mut generations = vec![pop.iter().map(|m| m.pos).collect::<Vec<_>>()];

    let (weights, hoods) = if opt.kind == OptimizerKind::Moead {
        let w = uniform_weights(n);
        let h = neighborhoods(&w, opt.moead_neighborhood);
        (w, h)
    } else {
        (Vec::new(), Vec::new())
    };

    let mut stall = 0;
    while !search.finished() && stall < opt.max_stall_generations {
        let before = search.system.cache().distinct();
        pop = match opt.kind {
            OptimizerKind::Nsga2 => search.nsga2_generation(pop)?,
            OptimizerKind::Ibea => search.ibea_generation(pop)?,
            OptimizerKind::Moead => search.moead_generation(pop, &weights, &hoods)?,
        };
        generations.push(pop.iter().map(|m| m.pos).collect());
        stall = if search.system.cache().distinct() == before {
            stall + 1
        } else {
            0
        };
    }

    let guide = search.guide();
    let fit: Vec<[f64; 2]> = search
        .system
        .cache()
        .log()
        .iter()
        .map(|r| guide.fitness(&r.perf))
        .collect();
    let log = search.system.into_cache().into_log();
    let final_set = nondominated_indices(&fit)
        .into_iter()
        .map(|i| (log[i].config.clone(), log[i].perf))
        .collect();
    Ok(RunResult {
        seed,
        optimizer: opt.kind,
        model: model.clone(),
        budget,
        population_size: n,
        eval_log: log,
        final_set,
        generations,
    })
}

/// Nondominated subset (positions, ascending) of measured raw vectors under
/// a model's guiding fitness, with bounds taken from the vectors themselves.
pub fn guided_front(model: &ModelChoice, dirs: [Direction; 2], raws: &[PerfVector]) -> Vec<usize> {
    let mut tracker = BoundsTracker::new();
    raws.iter().for_each(|r| tracker.update(r));
    if raws.is_empty() {
        return Vec::new();
    }
    let guide = Guide::new(model, dirs, &tracker);
    let fit: Vec<[f64; 2]> = raws.iter().map(|r| guide.fitness(r)).collect();
    nondominated_indices(&fit)
}
