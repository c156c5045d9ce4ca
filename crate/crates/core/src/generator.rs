//! Seeded workload generation.
//!
//! Random workloads are uniformly random tables. Class workloads are
//! drawn from a fixed number of NPN classes: each class has a random base
//! function and every member is the base under a fresh random transform.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canon::{canonical_form, MAX_CANON_ARITY};
use crate::error::{Error, Result};
use crate::truth_table::{NpnTransform, TruthTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GenMode {
    /// Uniformly random tables.
    #[default]
    Random,
    /// Members of a fixed set of NPN classes.
    Classes,
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenMode::Random => "random",
            GenMode::Classes => "classes",
        })
    }
}

impl FromStr for GenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" | "group1" => Ok(GenMode::Random),
            "classes" | "group2" => Ok(GenMode::Classes),
            other => Err(Error::Config(format!(
                "unknown mode `{other}` (expected random or classes)"
            ))),
        }
    }
}

pub const DEFAULT_CLASS_COUNT: usize = 100;
pub const DEFAULT_EQUIVALENT_FRACTION: f64 = 0.15;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every bit an independent fair coin.
pub fn random_table<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<TruthTable> {
    let words = TruthTable::zero(n)?.words().len();
    TruthTable::from_words(n, (0..words).map(|_| rng.gen()).collect())
}

/// Uniform over all `2^(n+1) n!` transforms.
pub fn random_transform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> NpnTransform {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let neg = rng.gen::<u32>() & ((1u64 << n) - 1) as u32;
    NpnTransform::new(perm, neg, rng.gen()).expect("shuffled identity is a permutation")
}

pub fn gen_random(n: usize, count: usize, seed: u64) -> Result<Vec<TruthTable>> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|_| random_table(n, &mut rng)).collect()
}

/// Like [`gen_random`] but with no repeated table. Fails if fewer than
/// `count` tables exist.
pub fn gen_random_distinct(n: usize, count: usize, seed: u64) -> Result<Vec<TruthTable>> {
    if n < 6 && count as u128 > 1u128 << (1u32 << n) {
        return Err(Error::Config(format!(
            "only {} distinct {n}-input tables exist",
            1u128 << (1u32 << n)
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let t = random_table(n, &mut rng)?;
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Random base functions from pairwise distinct NPN classes. Distinctness is
/// checked through canonical forms up to the canonicalisation limit; beyond
/// it random bases are distinct with overwhelming probability.
pub fn class_bases<R: Rng + ?Sized>(
    n: usize,
    class_count: usize,
    rng: &mut R,
) -> Result<Vec<TruthTable>> {
    if class_count == 0 {
        return Err(Error::Config("class count must be positive".into()));
    }
    let max_attempts = 64 * class_count + 1000;
    let mut canons = HashSet::with_capacity(class_count);
    let mut bases = Vec::with_capacity(class_count);
    for _ in 0..max_attempts {
        if bases.len() == class_count {
            break;
        }
        let t = random_table(n, rng)?;
        let fresh = if n <= MAX_CANON_ARITY {
            canons.insert(canonical_form(&t)?.canon)
        } else {
            canons.insert(t.clone())
        };
        if fresh {
            bases.push(t);
        }
    }
    if bases.len() < class_count {
        return Err(Error::Config(format!(
            "found only {} distinct {n}-input classes, {class_count} requested",
            bases.len()
        )));
    }
    Ok(bases)
}

/// `count` functions from `class_count` classes, each paired with its class
/// index. Every class occurs at least once; the order is shuffled.
pub fn gen_classes(
    n: usize,
    count: usize,
    class_count: usize,
    seed: u64,
) -> Result<Vec<(TruthTable, usize)>> {
    if class_count > count {
        return Err(Error::Config(format!(
            "{class_count} classes cannot fit in {count} functions"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let bases = class_bases(n, class_count, &mut rng)?;
    let mut labels: Vec<usize> = (0..class_count).collect();
    labels.extend((class_count..count).map(|_| rng.gen_range(0..class_count)));
    labels.shuffle(&mut rng);
    labels
        .into_iter()
        .map(|c| Ok((bases[c].apply(&random_transform(n, &mut rng))?, c)))
        .collect()
}

/// A list of pairs to match, with ground truth where it is known by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWorkload {
    pub pairs: Vec<(TruthTable, TruthTable)>,
    /// `Some(true)` for pairs planted as equivalent, `Some(false)` for pairs
    /// from distinct classes, `None` when unknown.
    pub planted: Vec<Option<bool>>,
}

impl PairWorkload {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Independent uniformly random pairs.
pub fn random_pairs(n: usize, count: usize, seed: u64) -> Result<PairWorkload> {
    let mut rng = rng_from_seed(seed);
    let pairs = (0..count)
        .map(|_| Ok((random_table(n, &mut rng)?, random_table(n, &mut rng)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PairWorkload {
        planted: vec![None; pairs.len()],
        pairs,
    })
}

/// Pairs over `class_count` classes: each is equivalent with probability
/// `fraction` (two transformed copies of one base) and otherwise joins
/// members of two distinct classes.
pub fn class_pairs(
    n: usize,
    count: usize,
    class_count: usize,
    fraction: f64,
    seed: u64,
) -> Result<PairWorkload> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::Config(format!("fraction {fraction} outside [0, 1]")));
    }
    if class_count < 2 && fraction < 1.0 {
        return Err(Error::Config(
            "non-equivalent pairs need at least two classes".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let bases = class_bases(n, class_count, &mut rng)?;
    let mut pairs = Vec::with_capacity(count);
    let mut planted = Vec::with_capacity(count);
    for _ in 0..count {
        let equivalent = rng.gen_bool(fraction);
        let a = rng.gen_range(0..class_count);
        let b = if equivalent {
            a
        } else {
            (a + rng.gen_range(1..class_count)) % class_count
        };
        let f = bases[a].apply(&random_transform(n, &mut rng))?;
        let g = bases[b].apply(&random_transform(n, &mut rng))?;
        pairs.push((f, g));
        planted.push(Some(equivalent));
    }
    Ok(PairWorkload { pairs, planted })
}
