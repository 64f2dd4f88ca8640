use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use aspire_core::experiment::{case_scenario, compare, pilot_front};
use aspire_core::metrics::mean_se;
use aspire_core::optimizers::read_perf_column;
use aspire_core::patterns::{parse_pattern_pair, BoundsTracker};
use aspire_core::{
    a_hv, build_aspiration_levels, run, run_experiment, summarize, Error, ExperimentPlan, Mode,
    ModelChoice, OptimizerConfig, OptimizerKind, Position, Scenario, SystemSource,
};
use clap::{Parser, Subcommand};

/// Multi-objective configuration tuning with and without aspirations.
#[derive(Parser)]
#[command(name = "aspire", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One seeded search; writes evals.csv, final_set.csv and meta.json.
    Tune {
        /// Table dataset (.csv) or JSON system file.
        #[arg(long)]
        system: PathBuf,
        /// Scenario file; required with `--model with`.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, default_value = "with")]
        model: Mode,
        #[arg(long, default_value = "nsga2")]
        optimizer: OptimizerKind,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 10)]
        pop: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Derives aspiration levels from a pilot front and writes a scenario.
    Aspire {
        #[arg(long)]
        system: PathBuf,
        /// l, r, c or u.
        #[arg(long)]
        position: Position,
        /// Pattern pair such as `p2,p3`.
        #[arg(long, default_value = "p2,p3")]
        patterns: String,
        #[arg(long, default_value_t = 1000)]
        pilot_budget: usize,
        #[arg(long, default_value_t = 10)]
        pop: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scenario file to write.
        #[arg(long)]
        out: PathBuf,
        /// Also write the pilot front as CSV.
        #[arg(long)]
        front_out: Option<PathBuf>,
    },
    /// Runs every case of a plan file.
    Experiment {
        #[arg(long)]
        plan: PathBuf,
        /// Overrides the plan's pilot budget.
        #[arg(long)]
        pilot_budget: Option<usize>,
        /// Overrides the plan's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A-HV of every run under a directory; writes `ahv.csv` there.
    Evaluate {
        #[arg(long)]
        runs: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Compares the `ahv.csv` of two run directories (a over b).
    Stats {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Aggregate tables over an experiment directory.
    Summarize {
        #[arg(long)]
        dir: PathBuf,
    },
}

/// Exit status for a plan whose cases partly failed.
const PARTIAL_FAILURE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Tune {
            system,
            scenario,
            model,
            optimizer,
            budget,
            pop,
            seed,
            out,
        } => tune(
            &system,
            scenario.as_deref(),
            model,
            optimizer,
            budget,
            pop,
            seed,
            &out,
        ),
        Command::Aspire {
            system,
            position,
            patterns,
            pilot_budget,
            pop,
            seed,
            out,
            front_out,
        } => aspire(
            &system,
            position,
            &patterns,
            pilot_budget,
            pop,
            seed,
            &out,
            front_out.as_deref(),
        ),
        Command::Experiment {
            plan,
            pilot_budget,
            out,
        } => experiment(&plan, pilot_budget, out),
        Command::Evaluate { runs, scenario } => evaluate(&runs, &scenario),
        Command::Stats { a, b } => stats(&a, &b),
        Command::Summarize { dir } => {
            let report = summarize(&dir)?;
            for p in &report.problems {
                eprintln!("warning: {p}");
            }
            println!("summarized {} cases in {}", report.cases, dir.display());
            Ok(0)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn tune(
    system: &Path,
    scenario: Option<&Path>,
    model: Mode,
    optimizer: OptimizerKind,
    budget: usize,
    pop: usize,
    seed: u64,
    out: &Path,
) -> anyhow::Result<u8> {
    let sys = SystemSource::from_path(system)?.open()?;
    let model = match (model, scenario) {
        (Mode::With, Some(path)) => ModelChoice::With(Scenario::load(path)?),
        (Mode::With, None) => bail!("--model with needs --scenario"),
        (Mode::Without, _) => ModelChoice::Without,
    };
    let r = run(
        sys.space(),
        sys.as_ref(),
        budget,
        &model,
        &OptimizerConfig::new(optimizer, pop),
        seed,
    )?;
    r.write_dir(out, sys.space())?;
    println!(
        "{} measurements, {} generations, final set of {} written to {}",
        r.distinct_count(),
        r.generations.len().saturating_sub(1),
        r.final_set.len(),
        out.display()
    );
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn aspire(
    system: &Path,
    position: Position,
    patterns: &str,
    pilot_budget: usize,
    pop: usize,
    seed: u64,
    out: &Path,
    front_out: Option<&Path>,
) -> anyhow::Result<u8> {
    let kinds = parse_pattern_pair(patterns)?;
    if position == Position::Unrealistic && !kinds.iter().all(|k| k.has_aspiration()) {
        bail!("position u needs aspirations on both objectives");
    }
    let sys = SystemSource::from_path(system)?.open()?;
    let front = pilot_front(sys.as_ref(), pilot_budget, pop, seed)?;
    let levels = build_aspiration_levels(&front, position)?;
    let scenario = case_scenario(kinds, Some(&levels), sys.objectives())?;
    scenario.save(out)?;
    if let Some(path) = front_out {
        fs::write(path, front.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    println!(
        "pilot front of {} points; {} levels d = ({}, {}) written to {}",
        front.points().len(),
        position,
        levels.d[0],
        levels.d[1],
        out.display()
    );
    Ok(0)
}

fn experiment(
    path: &Path,
    pilot_budget: Option<usize>,
    out: Option<PathBuf>,
) -> anyhow::Result<u8> {
    let mut plan = ExperimentPlan::load(path)?;
    if pilot_budget.is_some() {
        plan.pilot_budget = pilot_budget;
    }
    if let Some(out) = out {
        plan.output_dir = out;
    }
    let report = run_experiment(&plan)?;
    println!(
        "{} cases done with population {} in {}",
        report.cases.len(),
        report.population_size,
        report.output_dir.display()
    );
    for (id, why) in &report.failed {
        eprintln!("case {id} failed: {why}");
    }
    Ok(if report.failed.is_empty() {
        0
    } else {
        PARTIAL_FAILURE
    })
}

/// Directories under `root` (inclusive) that hold a `final_set.csv`.
fn run_dirs(root: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut found = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        if dir.join("final_set.csv").is_file() {
            found.push(dir.clone());
        }
        for entry in fs::read_dir(&dir).with_context(|| format!("listing {}", dir.display()))? {
            let p = entry?.path();
            if p.is_dir() {
                stack.push(p);
            }
        }
    }
    found.sort();
    Ok(found)
}

fn evaluate(root: &Path, scenario: &Path) -> anyhow::Result<u8> {
    let scenario = Scenario::load(scenario)?;
    let dirs = run_dirs(root)?;
    if dirs.is_empty() {
        return Err(Error::NoCases(root.to_path_buf()).into());
    }
    // Posterior bounds: the scenario's own, else every measurement found.
    let bounds = match scenario.fixed_bounds() {
        Some(b) => b,
        None => {
            let mut tracker = BoundsTracker::new();
            for d in &dirs {
                read_perf_column(&d.join("evals.csv"))?
                    .iter()
                    .for_each(|p| tracker.update(p));
            }
            tracker.ranges().context("no measurements found")?
        }
    };
    let mut csv = String::from("run,ahv\n");
    let mut values = Vec::new();
    for d in &dirs {
        let v = a_hv(
            &read_perf_column(&d.join("final_set.csv"))?,
            &scenario,
            &bounds,
        );
        let name = d
            .strip_prefix(root)
            .unwrap_or(d)
            .to_string_lossy()
            .replace('\\', "/");
        csv.push_str(&format!(
            "{},{v}\n",
            if name.is_empty() { "." } else { &name }
        ));
        values.push(v);
    }
    let path = root.join("ahv.csv");
    fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
    let (m, se) = mean_se(&values);
    println!(
        "{} runs, mean A-HV {m} (SE {se}), written to {}",
        values.len(),
        path.display()
    );
    Ok(0)
}

fn read_ahv(dir: &Path) -> anyhow::Result<Vec<f64>> {
    let path = dir.join("ahv.csv");
    let text = fs::read_to_string(&path)
        .with_context(|| format!("reading {} (run `aspire evaluate` first)", path.display()))?;
    let mut values = Vec::new();
    for (i, line) in text
        .lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.is_empty())
    {
        let cell = line.rsplit(',').next().unwrap_or("");
        let v: f64 = cell
            .parse()
            .with_context(|| format!("{}:{}: bad A-HV {cell:?}", path.display(), i + 1))?;
        values.push(v);
    }
    if values.is_empty() {
        bail!("{} lists no runs", path.display());
    }
    Ok(values)
}

fn stats(a: &Path, b: &Path) -> anyhow::Result<u8> {
    let (x, y) = (read_ahv(a)?, read_ahv(b)?);
    if x.len() != y.len() {
        bail!("run counts differ: {} vs {}", x.len(), y.len());
    }
    let c = compare(&x, &y);
    let (mg, sg) = mean_se(&c.gains.values);
    println!("runs,mean_gain,se_gain,p_value,a12,verdict,significant,effect");
    println!(
        "{},{mg},{sg},{},{},{},{},{}",
        x.len(),
        c.p_value,
        c.a12,
        c.outcome.verdict.token(),
        c.outcome.significant,
        c.outcome.effect.token()
    );
    Ok(0)
}
