//! Benchmark harness: collision counts and per-phase timing over seeded
//! pair workloads.
//!
//! Every repeat matches the same pairs three ways: with phase 3, without
//! phase 3, and with only the minterm check in front of the exact check.
//! Collision counts come from the configured run and are identical across
//! repeats; timings are averaged.

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::generator::{
    class_pairs, random_pairs, GenMode, PairWorkload, DEFAULT_CLASS_COUNT,
    DEFAULT_EQUIVALENT_FRACTION,
};
use crate::pipeline::{match_pair, MatchOutcome, Phase};
use crate::pruning::PruneConfig;
use crate::truth_table::WordWidth;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub arities: Vec<usize>,
    pub pairs: usize,
    pub mode: GenMode,
    pub repeat: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub width: WordWidth,
    pub no_phase3: bool,
    /// Share of planted equivalent pairs in class workloads.
    pub fraction: f64,
    pub class_count: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            arities: vec![5, 6, 7, 8],
            pairs: 10_000,
            mode: GenMode::Random,
            repeat: 10,
            seed: 1,
            max_iter: 3,
            width: WordWidth::W64,
            no_phase3: false,
            fraction: DEFAULT_EQUIVALENT_FRACTION,
            class_count: DEFAULT_CLASS_COUNT,
        }
    }
}

/// Mean and median of a set of wall-clock samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TimeStat {
    pub mean: Duration,
    pub median: Duration,
}

impl TimeStat {
    pub fn from_samples(samples: &[Duration]) -> Self {
        if samples.is_empty() {
            return TimeStat::default();
        }
        let mut sorted = samples.to_vec();
        sorted.sort();
        let m = sorted.len();
        let median = if m % 2 == 1 {
            sorted[m / 2]
        } else {
            (sorted[m / 2 - 1] + sorted[m / 2]) / 2
        };
        TimeStat {
            mean: samples.iter().sum::<Duration>() / m as u32,
            median,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub matchings: u64,
    pub equivalent: u64,
    pub coll_p2: u64,
    /// `None` when phase 3 is disabled.
    pub coll_p3: Option<u64>,
    /// Cumulative time per phase in the configured run, averaged over repeats.
    pub phase_times: [TimeStat; 4],
    pub total_without_p3: TimeStat,
    pub total_with_p3: TimeStat,
    /// Phases 2 and 3 disabled.
    pub total_exact_only: TimeStat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
}

fn workload(cfg: &BenchConfig, n: usize) -> Result<PairWorkload> {
    let seed = cfg.seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    match cfg.mode {
        GenMode::Random => random_pairs(n, cfg.pairs, seed),
        GenMode::Classes => class_pairs(n, cfg.pairs, cfg.class_count, cfg.fraction, seed),
    }
}

struct Run {
    outcomes: Vec<MatchOutcome>,
    wall: Duration,
}

fn run(pairs: &PairWorkload, cfg: &PruneConfig) -> Result<Run> {
    let start = Instant::now();
    let outcomes = pairs
        .pairs
        .iter()
        .map(|(f, g)| match_pair(f, g, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(Run {
        outcomes,
        wall: start.elapsed(),
    })
}

fn verdicts(r: &Run) -> Vec<bool> {
    r.outcomes.iter().map(|o| o.equivalent).collect()
}

/// Counts pairs that got past phase 2 and past phase 3 from the resolving
/// phase alone, independently of the per-pair flags.
pub fn recount(outcomes: &[MatchOutcome]) -> (u64, u64) {
    let past = |p: Phase| outcomes.iter().filter(|o| o.resolved_phase > p).count() as u64;
    (past(Phase::P2), past(Phase::P3))
}

fn bench_arity(cfg: &BenchConfig, n: usize) -> Result<BenchRow> {
    let pairs = workload(cfg, n)?;
    let base = PruneConfig {
        max_iter: cfg.max_iter,
        width: cfg.width,
        ..Default::default()
    };
    let with_p3 = base.clone();
    let without_p3 = PruneConfig {
        use_advanced: false,
        ..base.clone()
    };
    let exact_only = PruneConfig {
        use_basic: false,
        use_advanced: false,
        ..base
    };

    let mut phase_samples: [Vec<Duration>; 4] = Default::default();
    let (mut t_wo, mut t_w, mut t_exact) = (Vec::new(), Vec::new(), Vec::new());
    let mut counts: Option<(u64, u64, u64)> = None;
    for _ in 0..cfg.repeat {
        let r_wo = run(&pairs, &without_p3)?;
        let r_w = if cfg.no_phase3 {
            None
        } else {
            Some(run(&pairs, &with_p3)?)
        };
        let r_exact = run(&pairs, &exact_only)?;

        let reference = verdicts(&r_exact);
        if verdicts(&r_wo) != reference || r_w.as_ref().is_some_and(|r| verdicts(r) != reference) {
            return Err(Error::Config(format!(
                "verdicts differ between configurations at n={n}"
            )));
        }
        for (i, planted) in pairs.planted.iter().enumerate() {
            if planted.is_some_and(|p| p != reference[i]) {
                return Err(Error::Config(format!(
                    "pair {i} at n={n} contradicts its planted verdict"
                )));
            }
        }

        let main_run = r_w.as_ref().unwrap_or(&r_wo);
        let flagged_p2 = main_run.outcomes.iter().filter(|o| o.survived_p2).count() as u64;
        let flagged_p3 = main_run.outcomes.iter().filter(|o| o.survived_p3).count() as u64;
        let (re_p2, re_p3) = recount(&main_run.outcomes);
        if (flagged_p2, flagged_p3) != (re_p2, re_p3) {
            return Err(Error::Config(format!(
                "collision recount disagrees at n={n}"
            )));
        }
        let equivalent = reference.iter().filter(|&&e| e).count() as u64;
        let now = (equivalent, flagged_p2, flagged_p3);
        if counts.is_some_and(|c| c != now) {
            return Err(Error::Config(format!(
                "collision counts changed between repeats at n={n}"
            )));
        }
        counts = Some(now);

        for (p, samples) in phase_samples.iter_mut().enumerate() {
            samples.push(main_run.outcomes.iter().map(|o| o.phase_times[p]).sum());
        }
        t_wo.push(r_wo.wall);
        if let Some(r) = &r_w {
            t_w.push(r.wall);
        }
        t_exact.push(r_exact.wall);
    }

    let (equivalent, coll_p2, coll_p3) = counts.unwrap_or_default();
    Ok(BenchRow {
        n,
        matchings: pairs.len() as u64,
        equivalent,
        coll_p2,
        coll_p3: (!cfg.no_phase3).then_some(coll_p3),
        phase_times: phase_samples.map(|s| TimeStat::from_samples(&s)),
        total_without_p3: TimeStat::from_samples(&t_wo),
        total_with_p3: TimeStat::from_samples(&t_w),
        total_exact_only: TimeStat::from_samples(&t_exact),
    })
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.repeat == 0 {
        return Err(Error::Config("repeat must be at least 1".into()));
    }
    PruneConfig {
        max_iter: cfg.max_iter,
        ..Default::default()
    }
    .validate()?;
    let rows = cfg
        .arities
        .iter()
        .map(|&n| bench_arity(cfg, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport {
        config: cfg.clone(),
        rows,
    })
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl BenchReport {
    /// One `key=value` per line. Timing keys contain `.time.`; everything
    /// else is deterministic for a given configuration.
    pub fn to_kv(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(out, "mode={}", c.mode);
        let _ = writeln!(out, "pairs={}", c.pairs);
        let _ = writeln!(out, "repeat={}", c.repeat);
        let _ = writeln!(out, "seed={}", c.seed);
        let _ = writeln!(out, "max_iter={}", c.max_iter);
        let _ = writeln!(out, "compress={}", c.width.bits());
        let _ = writeln!(out, "phase3={}", !c.no_phase3);
        for r in &self.rows {
            let p = format!("row.{}", r.n);
            let _ = writeln!(out, "{p}.matchings={}", r.matchings);
            let _ = writeln!(out, "{p}.equivalent={}", r.equivalent);
            let _ = writeln!(out, "{p}.coll_p2={}", r.coll_p2);
            if let Some(c3) = r.coll_p3 {
                let _ = writeln!(out, "{p}.coll_p3={c3}");
            }
            for (i, t) in r.phase_times.iter().enumerate() {
                let _ = writeln!(out, "{p}.time.p{}_mean_ms={:.3}", i + 1, ms(t.mean));
                let _ = writeln!(out, "{p}.time.p{}_median_ms={:.3}", i + 1, ms(t.median));
            }
            let mut total = |name: &str, t: &TimeStat| {
                let _ = writeln!(out, "{p}.time.{name}_mean_ms={:.3}", ms(t.mean));
                let _ = writeln!(out, "{p}.time.{name}_median_ms={:.3}", ms(t.median));
            };
            total("total_without_p3", &r.total_without_p3);
            if r.coll_p3.is_some() {
                total("total_with_p3", &r.total_with_p3);
            }
            total("total_exact_only", &r.total_exact_only);
        }
        out
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "mode={} pairs={} repeat={} seed={} max_iter={} compress={}",
            c.mode,
            c.pairs,
            c.repeat,
            c.seed,
            c.max_iter,
            c.width.bits()
        )?;
        writeln!(
            f,
            "{:>3} {:>9} {:>7} {:>9} {:>9} {:>10} {:>10} {:>10} {:>10} {:>12} {:>12} {:>12}",
            "n",
            "matchings",
            "equiv",
            "coll_P2",
            "coll_P3",
            "t1(ms)",
            "t2(ms)",
            "t3(ms)",
            "t4(ms)",
            "W/O P3(ms)",
            "W P3(ms)",
            "exact(ms)"
        )?;
        for r in &self.rows {
            let c3 = r.coll_p3.map_or_else(|| "-".to_string(), |v| v.to_string());
            let w = if r.coll_p3.is_some() {
                format!("{:.3}", ms(r.total_with_p3.mean))
            } else {
                "-".to_string()
            };
            writeln!(
                f,
                "{:>3} {:>9} {:>7} {:>9} {:>9} {:>10.3} {:>10.3} {:>10.3} {:>10.3} {:>12.3} {:>12} {:>12.3}",
                r.n,
                r.matchings,
                r.equivalent,
                r.coll_p2,
                c3,
                ms(r.phase_times[0].mean),
                ms(r.phase_times[1].mean),
                ms(r.phase_times[2].mean),
                ms(r.phase_times[3].mean),
                ms(r.total_without_p3.mean),
                w,
                ms(r.total_exact_only.mean)
            )?;
        }
        Ok(())
    }
}
