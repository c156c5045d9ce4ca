//! `sensmatch`: match, classify, generate and benchmark truth tables.
//!
//! Exit status: 0 on success (or EQUIVALENT), 1 for NOT-EQUIVALENT or a
//! failed sidecar check, 2 on any input or configuration error.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sensmatch::bench::{run_bench, BenchConfig};
use sensmatch::generator::{
    gen_classes, gen_random, gen_random_distinct, GenMode, DEFAULT_CLASS_COUNT,
};
use sensmatch::truth_table::{parse_table_file, render_table_file};
use sensmatch::{classify, match_pair, PruneConfig, TextFormat, TruthTable, WordWidth};

#[derive(Parser)]
#[command(
    name = "sensmatch",
    version,
    about = "NPN Boolean matching with sensitivity pruning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two functions are NPN equivalent.
    Match(MatchArgs),
    /// Partition a file of functions into NPN classes.
    Classify(ClassifyArgs),
    /// Write a seeded workload of truth tables.
    Gen(GenArgs),
    /// Measure collisions and phase timings on seeded pair workloads.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct PruneFlags {
    /// Skip the advanced (sensitivity-domain) pruning phase.
    #[arg(long)]
    no_phase3: bool,
    /// Sensitivity levels examined by advanced pruning.
    #[arg(long, default_value_t = 3)]
    max_iter: usize,
    /// Lane width of the packed sensitivity scan.
    #[arg(long, default_value = "64", value_parser = ["32", "64"])]
    compress: String,
}

impl PruneFlags {
    fn width(&self) -> Result<WordWidth> {
        Ok(self.compress.parse()?)
    }

    fn config(&self) -> Result<PruneConfig> {
        let cfg = PruneConfig {
            max_iter: self.max_iter,
            use_advanced: !self.no_phase3,
            width: self.width()?,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct MatchArgs {
    /// File holding `f`, or both functions on two lines.
    first: PathBuf,
    /// File holding `g`.
    second: Option<PathBuf>,
    #[command(flatten)]
    prune: PruneFlags,
}

#[derive(Args)]
struct ClassifyArgs {
    file: PathBuf,
    /// Expected class id per line; the partitions must agree.
    #[arg(long)]
    sidecar: Option<PathBuf>,
    #[command(flatten)]
    prune: PruneFlags,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Random,
    Classes,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Binary,
    Hex,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    count: usize,
    #[arg(long, value_enum, default_value = "random")]
    mode: ModeArg,
    /// Number of source classes in `classes` mode.
    #[arg(long, default_value_t = DEFAULT_CLASS_COUNT)]
    classes: usize,
    /// Reject repeated tables in `random` mode.
    #[arg(long)]
    distinct: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output format; hex by default from 8 inputs up, binary below.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write class ids, one per line, in `classes` mode.
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Arities to benchmark, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [5usize, 6, 7, 8])]
    n: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pairs: usize,
    #[arg(long, value_enum, default_value = "random")]
    mode: ModeArg,
    #[arg(long, default_value_t = 10)]
    repeat: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Share of planted equivalent pairs in `classes` mode.
    #[arg(long, default_value_t = 0.15)]
    fraction: f64,
    #[arg(long, default_value_t = DEFAULT_CLASS_COUNT)]
    classes: usize,
    /// Print `key=value` lines instead of the table.
    #[arg(long)]
    kv: bool,
    #[command(flatten)]
    prune: PruneFlags,
}

fn read_tables(path: &Path) -> Result<Vec<TruthTable>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_table_file(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_one(path: &Path) -> Result<TruthTable> {
    let mut tables = read_tables(path)?;
    if tables.len() != 1 {
        bail!(
            "{}: expected one truth table, found {}",
            path.display(),
            tables.len()
        );
    }
    Ok(tables.remove(0))
}

fn cmd_match(args: &MatchArgs) -> Result<ExitCode> {
    let cfg = args.prune.config()?;
    let (f, g) = match &args.second {
        Some(second) => (read_one(&args.first)?, read_one(second)?),
        None => {
            let tables = read_tables(&args.first)?;
            match <[TruthTable; 2]>::try_from(tables) {
                Ok([f, g]) => (f, g),
                Err(t) => bail!(
                    "{}: expected two truth tables, found {}",
                    args.first.display(),
                    t.len()
                ),
            }
        }
    };
    let out = match_pair(&f, &g, &cfg)?;
    match out.witness {
        Some(w) => {
            println!("EQUIVALENT {w}");
            Ok(ExitCode::SUCCESS)
        }
        None => {
            let sig = out.rejecting_signature.map_or("canonical", |s| s.name());
            println!(
                "NOT-EQUIVALENT phase={} signature={sig}",
                out.resolved_phase
            );
            Ok(ExitCode::from(1))
        }
    }
}

fn read_sidecar(path: &Path) -> Result<Vec<u64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse().with_context(|| {
                format!("{}:{}: bad class id `{}`", path.display(), i + 1, l.trim())
            })
        })
        .collect()
}

fn cmd_classify(args: &ClassifyArgs) -> Result<ExitCode> {
    let cfg = args.prune.config()?;
    let tables = read_tables(&args.file)?;
    let part = classify(&tables, &cfg)?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    for (i, &c) in part.class_of.iter().enumerate() {
        writeln!(out, "{i} {c} {}", part.classes[c].canon.to_hex())?;
    }
    writeln!(out, "{} classes", part.classes.len())?;
    let s = part.stats;
    writeln!(
        out,
        "probe pairs {}: rejected P1 {}, P2 {}, P3 {}, reached P4 {}",
        s.probe_pairs, s.rejected_p1, s.rejected_p2, s.rejected_p3, s.reached_p4
    )?;
    out.flush()?;

    if let Some(path) = &args.sidecar {
        let ids = read_sidecar(path)?;
        if ids.len() != tables.len() {
            bail!(
                "sidecar has {} ids for {} functions",
                ids.len(),
                tables.len()
            );
        }
        // the partitions agree iff the id <-> class relation is a bijection
        let mut class_for_id = HashMap::new();
        let mut id_for_class = HashMap::new();
        let consistent = ids.iter().zip(&part.class_of).all(|(&id, &c)| {
            *class_for_id.entry(id).or_insert(c) == c && *id_for_class.entry(c).or_insert(id) == id
        });
        let distinct: HashSet<_> = ids.iter().collect();
        if consistent {
            println!("sidecar agrees: {} ids", distinct.len());
        } else {
            println!(
                "sidecar disagrees: {} ids vs {} classes",
                distinct.len(),
                part.classes.len()
            );
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(args: &GenArgs) -> Result<ExitCode> {
    let format = match args.format {
        Some(FormatArg::Binary) => TextFormat::Binary,
        Some(FormatArg::Hex) => TextFormat::Hex,
        None if args.n >= 8 => TextFormat::Hex,
        None => TextFormat::Binary,
    };
    let (tables, ids) = match args.mode {
        ModeArg::Random if args.distinct => {
            (gen_random_distinct(args.n, args.count, args.seed)?, None)
        }
        ModeArg::Random => (gen_random(args.n, args.count, args.seed)?, None),
        ModeArg::Classes => {
            let labelled = gen_classes(args.n, args.count, args.classes, args.seed)?;
            let (t, c): (Vec<_>, Vec<_>) = labelled.into_iter().unzip();
            (t, Some(c))
        }
    };
    let text = render_table_file(&tables, format);
    match &args.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout().write_all(text.as_bytes())?,
    }
    if let Some(path) = &args.sidecar {
        let Some(ids) = ids else {
            bail!("--sidecar needs --mode classes");
        };
        let body: String = ids.iter().map(|c| format!("{c}\n")).collect();
        fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode> {
    let cfg = BenchConfig {
        arities: args.n.clone(),
        pairs: args.pairs,
        mode: match args.mode {
            ModeArg::Random => GenMode::Random,
            ModeArg::Classes => GenMode::Classes,
        },
        repeat: args.repeat,
        seed: args.seed,
        max_iter: args.prune.max_iter,
        width: args.prune.width()?,
        no_phase3: args.prune.no_phase3,
        fraction: args.fraction,
        class_count: args.classes,
    };
    let report = run_bench(&cfg)?;
    if args.kv {
        print!("{}", report.to_kv());
    } else {
        print!("{report}");
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Match(a) => cmd_match(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
