#![allow(dead_code)]

use aspire_core::systems::{SynthParams, SynthSystem, TableSystem};
use aspire_core::{ConfigurationSpace, ObjectiveSpec, Objectives, OptionDef, System};

pub fn min_min() -> Objectives {
    [
        ObjectiveSpec::minimize("latency"),
        ObjectiveSpec::minimize("energy"),
    ]
}

pub fn min_max() -> Objectives {
    [
        ObjectiveSpec::minimize("latency"),
        ObjectiveSpec::maximize("throughput"),
    ]
}

pub fn binaries(n: usize) -> Vec<OptionDef> {
    (0..n)
        .map(|i| OptionDef::binary(format!("b{i}")).unwrap())
        .collect()
}

/// 5 binaries and a 4-valued enumeration: 128 configurations, all reachable
/// by crossover and mutation.
pub fn toy_space() -> ConfigurationSpace {
    let mut opts = binaries(5);
    opts.push(OptionDef::enumerated("mode", ["a", "b", "c", "d"]).unwrap());
    ConfigurationSpace::new(opts).unwrap()
}

/// 4 binaries, an integer in [0, 3] and a 3-valued enumeration: 192
/// configurations.
pub fn mixed_space() -> ConfigurationSpace {
    let mut opts = binaries(4);
    opts.push(OptionDef::integer("threads", 0, 3).unwrap());
    opts.push(OptionDef::enumerated("codec", ["x", "y", "z"]).unwrap());
    ConfigurationSpace::new(opts).unwrap()
}

pub fn synth(
    space: ConfigurationSpace,
    objectives: Objectives,
    seed: u64,
    k: usize,
    conflict: f64,
) -> SynthSystem {
    SynthSystem::new(
        space,
        objectives,
        SynthParams {
            seed,
            k,
            sparsity: 0.7,
            conflict,
        },
    )
    .unwrap()
}

/// Fully measured table of a synthetic landscape.
pub fn table_of(system: &dyn System) -> TableSystem {
    let rows = system.space().iter().map(|c| {
        let p = system.measure(&c).unwrap();
        (c, p)
    });
    TableSystem::from_rows(
        system.space().clone(),
        system.objectives().clone(),
        rows.collect::<Vec<_>>(),
    )
    .unwrap()
}

/// About 10^4 configurations: 8 binaries, an integer in [0, 4] and an
/// 8-valued enumeration.
pub fn desk_space() -> ConfigurationSpace {
    let mut opts = binaries(8);
    opts.push(OptionDef::integer("workers", 0, 4).unwrap());
    opts.push(
        OptionDef::enumerated("policy", ["p0", "p1", "p2", "p3", "p4", "p5", "p6", "p7"]).unwrap(),
    );
    ConfigurationSpace::new(opts).unwrap()
}
