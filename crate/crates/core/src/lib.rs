//! Aspiration-guided multi-objective configuration tuning.
//!
//! Two Pareto searches are compared: plain search over the raw performance
//! objectives (PS-w/o) and search over requirement-satisfaction values
//! produced by pattern functions with aspiration levels (PS-w).

pub mod aspirations;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod optimizers;
pub mod patterns;
pub mod problem;
pub mod stats;
pub mod systems;

pub use aspirations::{
    build_aspiration_levels, classify_realism, AspirationLevels, FrontSample, Position, Realism,
};
pub use error::{Error, MeasureError, Result};
pub use experiment::{run_experiment, summarize, ExperimentPlan};
pub use metrics::{
    a_hv, classify_outcome, hypervolume_2d, percent_gain, speedup, Outcome, Speedup, Trajectory,
    Verdict,
};
pub use optimizers::{run, Mode, ModelChoice, OptimizerConfig, OptimizerKind, RunResult};
pub use patterns::{
    apply_pattern, transform, Bounds, ObjectiveRange, Pattern, PatternKind, Scenario,
};
pub use problem::{
    dominates, Configuration, ConfigurationSpace, Direction, ObjectiveSpec, Objectives, OptionDef,
    PerfVector,
};
pub use stats::{a12, wilcoxon_rank_sum};
pub use systems::{System, SystemSource};
