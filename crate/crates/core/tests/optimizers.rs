mod common;

use aspire_core::optimizers::guided_front;
use aspire_core::problem::directions;
use aspire_core::*;
use common::*;
use proptest::prelude::*;

fn guided() -> ModelChoice {
    ModelChoice::With(Scenario::online(
        [
            Pattern::with_level(PatternKind::P2, 40.0).unwrap(),
            Pattern::with_level(PatternKind::P3, 60.0).unwrap(),
        ],
        min_max(),
    ))
}

fn weakly_dominates(a: [f64; 2], b: [f64; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1]
}

/// Every member of a generation is weakly dominated by a member of the next,
/// unless the next generation is entirely mutually nondominated.
fn elitism_violations(r: &RunResult) -> usize {
    let dirs = directions(&min_max());
    let fit = |pos: &usize| r.eval_log[*pos].perf.minimized(dirs);
    let mut violations = 0;
    for w in r.generations.windows(2) {
        let next: Vec<[f64; 2]> = w[1].iter().map(fit).collect();
        let all_nondominated = next
            .iter()
            .all(|a| !next.iter().any(|b| dominates_min(*b, *a)));
        if all_nondominated {
            continue;
        }
        violations += w[0]
            .iter()
            .filter(|p| !next.iter().any(|q| weakly_dominates(*q, fit(p))))
            .count();
    }
    violations
}

fn dominates_min(a: [f64; 2], b: [f64; 2]) -> bool {
    weakly_dominates(a, b) && a != b
}

#[test]
fn runs_are_deterministic() {
    let sys = table_of(&synth(mixed_space(), min_max(), 21, 2, 0.8));
    for kind in OptimizerKind::ALL {
        for model in [ModelChoice::Without, guided()] {
            let cfg = OptimizerConfig::new(kind, 10);
            let a = run(sys.space(), &sys, 80, &model, &cfg, 9).unwrap();
            let b = run(sys.space(), &sys, 80, &model, &cfg, 9).unwrap();
            assert_eq!(a, b, "{kind}");
            let c = run(sys.space(), &sys, 80, &model, &cfg, 10).unwrap();
            assert_ne!(a.eval_log, c.eval_log, "{kind}: seeds should matter");
        }
    }
}

#[test]
fn final_set_is_the_guided_front_of_the_log() {
    let sys = synth(desk_space(), min_max(), 22, 3, 0.8);
    for kind in OptimizerKind::ALL {
        for model in [ModelChoice::Without, guided()] {
            for seed in 0..3 {
                let r = run(
                    sys.space(),
                    &sys,
                    150,
                    &model,
                    &OptimizerConfig::new(kind, 20),
                    seed,
                )
                .unwrap();
                let raws: Vec<PerfVector> = r.eval_log.iter().map(|e| e.perf).collect();
                let want: Vec<(Configuration, PerfVector)> =
                    guided_front(&model, directions(&min_max()), &raws)
                        .into_iter()
                        .map(|i| (r.eval_log[i].config.clone(), raws[i]))
                        .collect();
                assert_eq!(r.final_set, want, "{kind} seed {seed}");
                assert!(!r.final_set.is_empty());
            }
        }
    }
}

#[test]
fn nsga2_keeps_its_elite() {
    let sys = table_of(&synth(mixed_space(), min_max(), 23, 2, 0.8));
    for seed in 0..20 {
        let r = run(
            sys.space(),
            &sys,
            150,
            &ModelChoice::Without,
            &OptimizerConfig::new(OptimizerKind::Nsga2, 10),
            seed,
        )
        .unwrap();
        assert_eq!(elitism_violations(&r), 0, "seed {seed}");
    }
}

/// Generations in which some objective's best value in the population got
/// worse.
fn best_value_regressions(r: &RunResult) -> usize {
    let dirs = directions(&min_max());
    let best = |g: &Vec<usize>, j: usize| {
        g.iter()
            .map(|&p| r.eval_log[p].perf.minimized(dirs)[j])
            .fold(f64::INFINITY, f64::min)
    };
    r.generations
        .windows(2)
        .filter(|w| (0..2).any(|j| best(&w[1], j) > best(&w[0], j)))
        .count()
}

/// Members dropped from a generation that strictly dominate a survivor.
fn dropped_dominators(r: &RunResult) -> usize {
    let dirs = directions(&min_max());
    let fit = |p: &usize| r.eval_log[*p].perf.minimized(dirs);
    r.generations
        .windows(2)
        .map(|w| {
            w[0].iter()
                .filter(|p| !w[1].contains(p))
                .filter(|p| w[1].iter().any(|q| dominates_min(fit(p), fit(q))))
                .count()
        })
        .sum()
}

#[test]
fn nsga2_best_values_never_worsen() {
    let sys = table_of(&synth(mixed_space(), min_max(), 23, 2, 0.8));
    for seed in 0..20 {
        let r = run(
            sys.space(),
            &sys,
            150,
            &ModelChoice::Without,
            &OptimizerConfig::new(OptimizerKind::Nsga2, 10),
            seed,
        )
        .unwrap();
        assert_eq!(best_value_regressions(&r), 0, "seed {seed}");
    }
}

// Additive-epsilon IBEA may drop an extreme member that sits close to a
// neighbor, so only the dominance guarantee of worst-first removal holds.
#[test]
fn survivors_are_never_dominated_by_the_dropped() {
    let sys = table_of(&synth(mixed_space(), min_max(), 23, 2, 0.8));
    for kind in [OptimizerKind::Nsga2, OptimizerKind::Ibea] {
        for seed in 0..20 {
            let r = run(
                sys.space(),
                &sys,
                150,
                &ModelChoice::Without,
                &OptimizerConfig::new(kind, 10),
                seed,
            )
            .unwrap();
            assert_eq!(dropped_dominators(&r), 0, "{kind} seed {seed}");
        }
    }
}

#[test]
fn populations_keep_their_size() {
    let sys = synth(toy_space(), min_min(), 24, 2, 0.5);
    for kind in OptimizerKind::ALL {
        let r = run(
            sys.space(),
            &sys,
            60,
            &guided_min(),
            &OptimizerConfig::new(kind, 12),
            1,
        )
        .unwrap();
        assert!(r.generations.iter().all(|g| g.len() == 12), "{kind}");
        assert!(r
            .generations
            .iter()
            .flatten()
            .all(|&p| p < r.eval_log.len()));
    }
}

fn guided_min() -> ModelChoice {
    ModelChoice::With(Scenario::online(
        [
            Pattern::with_level(PatternKind::P1, 50.0).unwrap(),
            Pattern::p0(),
        ],
        min_min(),
    ))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eval_log_respects_budget(seed in 0u64..1000, budget in 10usize..200, pop in 2usize..10, kind in 0usize..3, with in any::<bool>()) {
        let sys = synth(toy_space(), min_min(), 25, 2, 0.8);
        let model = if with { guided_min() } else { ModelChoice::Without };
        let r = run(sys.space(), &sys, budget, &model, &OptimizerConfig::new(OptimizerKind::ALL[kind], pop), seed).unwrap();
        prop_assert!(r.distinct_count() <= budget.min(128));
        let indices: Vec<usize> = r.eval_log.iter().map(|e| e.index).collect();
        prop_assert_eq!(indices, (1..=r.distinct_count()).collect::<Vec<_>>());
        let distinct: std::collections::HashSet<&Configuration> = r.eval_log.iter().map(|e| &e.config).collect();
        prop_assert_eq!(distinct.len(), r.distinct_count());
    }
}
