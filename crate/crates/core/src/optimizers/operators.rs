//! Mating selection and variation operators shared by all optimizers.

use std::cmp::Ordering;

use rand::Rng;

use crate::problem::{Configuration, ConfigurationSpace, OptionKind};

/// Binary tournament over `n` members.
///
/// Draws two distinct positions uniformly and keeps the better one according
/// to `compare` (`Less` means the first argument is better). Exact ties are
/// settled by a fair coin.
pub fn binary_tournament<R, F>(n: usize, rng: &mut R, mut compare: F) -> usize
where
    R: Rng + ?Sized,
    F: FnMut(usize, usize) -> Ordering,
{
    assert!(n > 0, "tournament over an empty population");
    if n == 1 {
        return 0;
    }
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    match compare(a, b) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if rng.gen_bool(0.5) {
                a
            } else {
                b
            }
        }
    }
}

/// With probability `rate`, swaps each gene between the two offspring with
/// probability 0.5; otherwise the offspring are copies of the parents.
pub fn uniform_crossover<R: Rng + ?Sized>(
    a: &Configuration,
    b: &Configuration,
    rate: f64,
    rng: &mut R,
) -> (Configuration, Configuration) {
    let mut x = a.clone();
    let mut y = b.clone();
    if rng.gen::<f64>() < rate {
        let (xv, yv) = (x.values_mut(), y.values_mut());
        for i in 0..xv.len() {
            if rng.gen_bool(0.5) {
                std::mem::swap(&mut xv[i], &mut yv[i]);
            }
        }
    }
    (x, y)
}

/// Mutates each gene with probability `rate`. Binary and integer genes jump
/// to the lower or upper bound of their domain; enumerated genes take a
/// uniformly random token.
pub fn boundary_mutation<R: Rng + ?Sized>(
    config: &Configuration,
    rate: f64,
    rng: &mut R,
    space: &ConfigurationSpace,
) -> Configuration {
    let mut out = config.clone();
    for (gene, option) in out.values_mut().iter_mut().zip(space.options()) {
        if rng.gen::<f64>() < rate {
            *gene = match option.kind() {
                OptionKind::Enumerated(tokens) => rng.gen_range(0..tokens.len()) as i64,
                _ => {
                    if rng.gen_bool(0.5) {
                        option.lower()
                    } else {
                        option.upper()
                    }
                }
            };
        }
    }
    out
}
