//! Command-line driver for `ramop-core`: dimension tables, verification suites,
//! the conjecture verdict, JSON reports and the component cache.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
//! resource errors.

pub mod cache;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ramop_core::dual::conjecture_verdict;
use ramop_core::forms::DEFAULT_SEED;
use ramop_core::graph::{GraphPresentation, Mode};
use ramop_core::ram::{self, Which};
use ramop_core::ramanujan::{predicted_dims, psi};
use ramop_core::report::{Check, SuiteReport};
use ramop_core::Limits;

use crate::cache::{presentation_hash, Cache};
use crate::report::Report;
use crate::suites::{predicted_for, Context, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ramop", version, about = "Exact computations in the Ramanujan operad and its dual cooperad")]
pub struct Cli {
    /// Output on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cache directory (default: $RAMOP_CACHE_DIR, else ./.ramop-cache).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, default_value_t = Limits::default().max_arity, global = true)]
    pub max_arity: usize,
    #[arg(long, default_value_t = Limits::default().max_rows, global = true)]
    pub max_rows: usize,
    /// Seed of the random points in the forms suite.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperadArg {
    Ram,
    Poisson,
    Bessel,
    Liegriess,
    Com,
}

impl From<OperadArg> for Which {
    fn from(o: OperadArg) -> Which {
        match o {
            OperadArg::Ram => Which::Ram,
            OperadArg::Poisson => Which::Poisson,
            OperadArg::Bessel => Which::Bessel,
            OperadArg::Liegriess => Which::LieGriess,
            OperadArg::Com => Which::Com,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AmbientArg {
    Forest,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Hopf,
    Differentials,
    Cooperad,
    Lemmas,
    Forms,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Clear,
    Info,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bigraded dimensions of an operad on n labels.
    Dims {
        #[arg(long, value_enum)]
        operad: OperadArg,
        #[arg(long)]
        n: usize,
    },
    /// Bigraded dimensions of the graph algebra R on n vertices.
    RalgDims {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = AmbientArg::Forest)]
        ambient: AmbientArg,
    },
    /// The Ramanujan polynomial and its coefficient table.
    Ramanujan {
        #[arg(long)]
        n: usize,
    },
    /// Run verification suites on label sets of size up to n.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        n: usize,
    },
    /// Whether rho: Ram(n) -> R(n)* is an isomorphism.
    Conjecture {
        #[arg(long)]
        n: usize,
    },
    /// Inspect or clear the component cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] ramop_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Parses `args` (program name first), runs the command, writes the report to
/// `stdout` and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Json => report.to_json(),
                Format::Table => report.to_table(),
            };
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            if stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return EXIT_USAGE;
            }
            eprintln!("{}: {:.2} s", report.command, start.elapsed().as_secs_f64());
            if report.passed {
                EXIT_OK
            } else {
                for s in report.suites.iter() {
                    for c in s.checks.iter().filter(|c| !c.passed) {
                        eprintln!("FAILED [{}] {}: {}", s.suite, c.name, c.witness.as_deref().unwrap_or(""));
                    }
                }
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn context(cli: &Cli) -> Context {
    Context {
        limits: Limits {
            max_arity: cli.max_arity,
            max_rows: cli.max_rows,
        },
        cache: (!cli.no_cache).then(|| Cache::resolve(cli.cache_dir.clone())),
        seed: cli.seed,
    }
}

fn positive(n: usize) -> Result<usize, CliError> {
    if n == 0 {
        return Err(ramop_core::Error::InvalidArgument("--n must be at least 1".into()).into());
    }
    Ok(n)
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let cx = context(cli);
    match &cli.command {
        Command::Dims { operad, n } => {
            let n = positive(*n)?;
            let which = Which::from(*operad);
            let mut r = Report::new("dims");
            r.param("operad", which.name());
            r.param("n", n);
            let p = ram::presentation(which);
            r.presentation_hashes.insert(which.name().into(), presentation_hash(&p.fingerprint()));
            let mut ws = cx.operad(which, n);
            let d = ws.dims(n)?;
            cx.keep_operad(&ws);
            r.table(format!("{}({n})", which.name()), d.clone());
            if let Some(pred) = predicted_for(which, n) {
                let mut s = SuiteReport::new("dims", n);
                let mut c = Check::new("dims equal Ramanujan coefficients");
                c.case(d == pred, || format!("computed {d}, predicted {pred}"));
                s.push(c);
                r.suite(s);
            }
            Ok(r)
        }
        Command::RalgDims { n, ambient } => {
            let n = positive(*n)?;
            let mode = match ambient {
                AmbientArg::Forest => Mode::Forest,
                AmbientArg::Full => Mode::Full,
            };
            let mut r = Report::new("ralg-dims");
            r.param("n", n);
            r.param("ambient", mode.name());
            r.presentation_hashes.insert("R".into(), presentation_hash(&GraphPresentation::r().fingerprint()));
            let mut ws = cx.graph(mode, n);
            let d = ws.dims(n)?;
            cx.keep_graph(&ws);
            r.table(format!("R({n})"), d);
            Ok(r)
        }
        Command::Ramanujan { n } => {
            let n = positive(*n)?;
            cx.limits.check_arity(n.min(64), "ramanujan")?;
            let mut r = Report::new("ramanujan");
            r.param("n", n);
            let p = psi(n);
            r.table(format!("psi_{n}"), predicted_dims(n));
            r.result = Some(serde_json::json!({
                "polynomial": p.to_string(),
                "value at (1,1)": p.eval(1, 1).to_string(),
            }));
            Ok(r)
        }
        Command::Verify { suite, n } => {
            let n = positive(*n)?;
            let chosen: Vec<Suite> = match suite {
                SuiteArg::Hopf => vec![Suite::Hopf],
                SuiteArg::Differentials => vec![Suite::Differentials],
                SuiteArg::Cooperad => vec![Suite::Cooperad],
                SuiteArg::Lemmas => vec![Suite::Lemmas],
                SuiteArg::Forms => vec![Suite::Forms],
                SuiteArg::All => Suite::ALL.to_vec(),
            };
            let mut r = Report::new("verify");
            r.param("suite", format!("{suite:?}").to_lowercase());
            r.param("n", n);
            if chosen.contains(&Suite::Forms) {
                r.seed = Some(cx.seed);
                r.param("trials", suites::FORMS_TRIALS);
            }
            r.presentation_hashes
                .insert("ram".into(), presentation_hash(&ram::presentation(Which::Ram).fingerprint()));
            r.presentation_hashes.insert("R".into(), presentation_hash(&GraphPresentation::r().fingerprint()));
            let results: Vec<_> = std::thread::scope(|scope| {
                let handles: Vec<_> = chosen
                    .iter()
                    .map(|&s| {
                        let cx = &cx;
                        scope.spawn(move || {
                            let t = Instant::now();
                            let out = cx.run(s, n);
                            eprintln!("suite {}: {:.2} s", s.name(), t.elapsed().as_secs_f64());
                            out
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
            });
            for res in results {
                for s in res? {
                    r.suite(s);
                }
            }
            Ok(r)
        }
        Command::Conjecture { n } => {
            let n = positive(*n)?;
            let mut r = Report::new("conjecture");
            r.param("n", n);
            r.presentation_hashes
                .insert("ram".into(), presentation_hash(&ram::presentation(Which::Ram).fingerprint()));
            r.presentation_hashes.insert("R".into(), presentation_hash(&GraphPresentation::r().fingerprint()));
            cx.limits.check_arity(n, "conjecture")?;
            let mut dw = cx.dual(n);
            let v = conjecture_verdict(&mut dw, n)?;
            cx.keep_dual(&dw);
            r.table(format!("Ram({n})"), v.ram_dims.clone());
            r.table(format!("R({n})"), v.r_dims.clone());
            let mut s = SuiteReport::new("conjecture", n);
            s.push(v.well_defined.clone());
            r.suite(s);
            r.result = Some(serde_json::to_value(&v).expect("verdict serializes"));
            Ok(r)
        }
        Command::Cache { action, dir } => {
            let c = Cache::resolve(dir.clone().or_else(|| cli.cache_dir.clone()));
            let mut r = Report::new("cache");
            r.param("action", format!("{action:?}").to_lowercase());
            r.param("dir", c.dir.display().to_string());
            match action {
                CacheAction::Info => {
                    let entries = c.info()?;
                    let bytes: u64 = entries.iter().map(|e| e.bytes).sum();
                    r.result = Some(serde_json::json!({
                        "entry count": entries.len(),
                        "bytes": bytes,
                        "entries": entries,
                    }));
                }
                CacheAction::Clear => {
                    let removed = c.clear()?;
                    r.result = Some(serde_json::json!({ "removed": removed }));
                }
            }
            Ok(r)
        }
    }
}
