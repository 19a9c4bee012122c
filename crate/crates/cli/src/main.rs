//! `fcgrid`: generate grid sets, build cascades, query, verify, benchmark.
//!
//! Exit status: 0 on success/agreement, 1 on a property violation or
//! mismatch, 2 on usage, IO or parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use fcgrid_core::bench::run_bench;
use fcgrid_core::io::{
    decode_raw, encode_cascade, parse_document, write_document, GridDocument,
};
use fcgrid_core::naive::naive_lookup;
use fcgrid_core::verify::{
    fuzz_gridsets, random_keys, verification_keys, verify_gridset, verify_sets, VerifyReport,
};
use fcgrid_core::xsec::eval_micro_at;
use fcgrid_core::{
    build_cascade, build_cascade_with, generate_gridset, paper_example_gridset, structure_stats,
    validate_structure, BuildOptions, CascadeGrid, GenSpec, GridSet, Promotion, StructureStats,
};

#[derive(Parser)]
#[command(name = "fcgrid", version, about = "Cascade grids for simultaneous predecessor search")]
struct Cli {
    /// Emit tab-separated output instead of text.
    #[arg(long, global = true)]
    tsv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic grid set.
    Gen(GenArgs),
    /// Build a cascade from a grid file and write a snapshot.
    Build {
        #[arg(long)]
        grids: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Look up one energy in every grid.
    Query {
        #[arg(long)]
        grids: PathBuf,
        /// Use this snapshot instead of building.
        #[arg(long)]
        cascade: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        key: f64,
        /// Also print comparison counts.
        #[arg(long)]
        stats: bool,
    },
    /// Differential verification against the naive oracle.
    Verify(VerifyArgs),
    /// Time cascade lookups against k binary searches.
    Bench {
        #[arg(long)]
        grids: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print structure statistics and the size-bound check.
    Stats {
        #[arg(long)]
        grids: PathBuf,
        /// Build with even-position promotion (the variant that can break
        /// the size bound).
        #[arg(long)]
        even_promotion: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 64)]
    min_size: usize,
    #[arg(long, default_value_t = 1024)]
    max_size: usize,
    #[arg(long, default_value_t = 1e-5)]
    energy_min: f64,
    #[arg(long, default_value_t = 2e7)]
    energy_max: f64,
    #[arg(long, default_value_t = 0.0)]
    dup_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include sigma columns.
    #[arg(long)]
    sigma: bool,
    /// Emit the fixed three-grid example instead.
    #[arg(long)]
    paper_example: bool,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    grids: Option<PathBuf>,
    /// Check this snapshot (requires --grids) instead of a fresh build.
    #[arg(long, requires = "grids")]
    cascade: Option<PathBuf>,
    /// Number of generated grid sets.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random keys per grid set, on top of the boundary keys.
    #[arg(long, default_value_t = 1000)]
    keys: usize,
    /// Worker threads (default: all cores). Reports do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

/// Errors that map to exit status 2.
type Fallible = Result<ExitCode>;

fn read_document(path: &Path) -> Result<GridDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_document(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_output(path: Option<&Path>, contents: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, contents).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(contents).context("writing stdout")
        }
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_stats(s: &StructureStats, tsv: bool) {
    let sizes: Vec<String> = s.level_sizes.iter().map(ToString::to_string).collect();
    let verdict = if s.within_bound() { "PASS" } else { "FAIL" };
    if tsv {
        println!("k\tlevel_sizes\ttotal\tgrid_total\tratio\tmemory_bytes\tbound\tstatus");
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{verdict}",
            s.k,
            sizes.join(","),
            s.total_entries,
            s.total_grid,
            s.ratio,
            s.memory_bytes,
            s.bound()
        );
    } else {
        println!("{s}");
        println!("bound: {} <= {}: {verdict}", s.total_entries, s.bound());
    }
}

fn cmd_gen(a: GenArgs) -> Fallible {
    let doc = if a.paper_example {
        GridDocument::new(paper_example_gridset())
    } else {
        let spec = GenSpec {
            k: a.k,
            size_min: a.min_size,
            size_max: a.max_size,
            energy_min: a.energy_min,
            energy_max: a.energy_max,
            duplicate_fraction: a.dup_fraction,
            seed: a.seed,
            with_sigma: a.sigma,
        };
        generate_gridset(&spec)?
    };
    write_output(a.out.as_deref(), write_document(&doc).as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_build(grids: &Path, out: &Path, tsv: bool) -> Fallible {
    let doc = read_document(grids)?;
    let cascade = build_cascade(&doc.grids);
    let violations = validate_structure(&cascade, &doc.grids);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        return Ok(status(false));
    }
    write_output(Some(out), &encode_cascade(&cascade))?;
    print_stats(&structure_stats(&cascade), tsv);
    Ok(ExitCode::SUCCESS)
}

/// Loads a snapshot unchecked; the caller validates against the grids.
fn load_snapshot(path: &Path, grids: &GridSet) -> Result<std::result::Result<CascadeGrid, VerifyReport>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let raw = decode_raw(&bytes).with_context(|| format!("decoding {}", path.display()))?;
    Ok(raw.into_cascade(grids).map_err(|v| VerifyReport {
        gridsets: 1,
        structural_violations: v.len(),
        first_violation: v.first().map(ToString::to_string),
        ..Default::default()
    }))
}

fn cmd_query(grids: &Path, cascade: Option<&Path>, key: f64, stats: bool, tsv: bool) -> Fallible {
    let doc = read_document(grids)?;
    let g = &doc.grids;
    let cascade = match cascade {
        Some(p) => match load_snapshot(p, g)? {
            Ok(c) => c,
            Err(report) => {
                eprintln!("{report}");
                return Ok(status(false));
            }
        },
        None => build_cascade(g),
    };
    let trace = cascade.lookup_traced(key)?;
    let naive = naive_lookup(g, key)?;
    let sigma = match doc.tables() {
        Some(tables) => Some(eval_micro_at(&tables?, &trace.result.indices, key)?),
        None => None,
    };

    if tsv {
        println!("grid\tfc\tnaive{}", if sigma.is_some() { "\tsigma" } else { "" });
    }
    for i in 0..g.k() {
        let (fc, nv) = (trace.result.indices[i], naive.indices[i]);
        let s = sigma.as_ref().map(|s| s[i]);
        if tsv {
            let s = s.map(|s| format!("\t{s:?}")).unwrap_or_default();
            println!("{}\t{fc}\t{nv}{s}", i + 1);
        } else {
            let s = s.map(|s| format!(" sigma = {s}")).unwrap_or_default();
            println!("grid {}: fc = {fc}, naive = {nv}{s}", i + 1);
        }
    }
    let agree = trace.result == naive;
    if stats {
        let steps: Vec<String> = trace.per_level_comparisons.iter().map(ToString::to_string).collect();
        if tsv {
            println!(
                "#stats\tbinary_searches={}\tbinary_search_comparisons={}\tper_level={}",
                trace.binary_searches,
                trace.binary_search_comparisons,
                steps.join(",")
            );
        } else {
            println!(
                "binary searches: {}, binary search comparisons: {}, per-level comparisons: [{}]",
                trace.binary_searches,
                trace.binary_search_comparisons,
                steps.join(", ")
            );
        }
    }
    if !tsv {
        println!("{}", if agree { "match" } else { "MISMATCH" });
    }
    Ok(status(agree))
}

fn cmd_verify(a: VerifyArgs, tsv: bool) -> Fallible {
    if let Some(t) = a.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring worker threads")?;
    }
    let report = match (&a.grids, a.random) {
        (Some(path), _) => {
            let grids = read_document(path)?.grids;
            match &a.cascade {
                Some(snap) => match load_snapshot(snap, &grids)? {
                    Ok(c) => {
                        let keys = verification_keys(&grids, a.keys, a.seed);
                        verify_gridset(0, &grids, &c, &keys)
                    }
                    Err(report) => report,
                },
                None => verify_sets(std::slice::from_ref(&grids), a.keys, a.seed),
            }
        }
        (None, Some(n)) => {
            if n == 0 {
                bail!("--random needs at least one grid set");
            }
            verify_sets(&fuzz_gridsets(n, a.seed)?, a.keys, a.seed)
        }
        (None, None) => unreachable!("clap requires --grids or --random"),
    };
    if tsv {
        print!("{}", report.to_tsv());
    } else {
        println!("{report}");
    }
    Ok(status(report.passed()))
}

fn cmd_bench(grids: &Path, queries: usize, seed: u64, tsv: bool) -> Fallible {
    let g = read_document(grids)?.grids;
    let cascade = build_cascade(&g);
    let keys = random_keys(&g, queries, seed);
    let report = run_bench(&g, &cascade, &keys)?;
    if tsv {
        print!("{}", report.to_tsv());
    } else {
        println!("{report}");
    }
    Ok(status(report.bound_holds()))
}

fn cmd_stats(grids: &Path, even_promotion: bool, tsv: bool) -> Fallible {
    let g = read_document(grids)?.grids;
    let options = BuildOptions {
        promotion: if even_promotion {
            Promotion::EvenPositions
        } else {
            Promotion::OddPositions
        },
        ..Default::default()
    };
    let stats = structure_stats(&build_cascade_with(&g, options));
    print_stats(&stats, tsv);
    Ok(status(stats.within_bound()))
}

fn run(cli: Cli) -> Fallible {
    let tsv = cli.tsv;
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build { grids, out } => cmd_build(&grids, &out, tsv),
        Command::Query {
            grids,
            cascade,
            key,
            stats,
        } => cmd_query(&grids, cascade.as_deref(), key, stats, tsv),
        Command::Verify(a) => cmd_verify(a, tsv),
        Command::Bench {
            grids,
            queries,
            seed,
        } => cmd_bench(&grids, queries, seed, tsv),
        Command::Stats {
            grids,
            even_promotion,
        } => cmd_stats(&grids, even_promotion, tsv),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
