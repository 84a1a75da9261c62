//! Command-line front end: `analyze`, `oracle`, `compare` and `sweep`.

mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use crn_lyapunov::error::Error;
use crn_lyapunov::exec::Exec;
use crn_lyapunov::hierarchy::compare;
use crn_lyapunov::network::{parse_network, split, ReactionNetwork};
use crn_lyapunov::oracle::{perron_source, PerronOptions};
use crn_lyapunov::renorm::{Mode, RenormOptions, ResonanceBranch};
use crn_lyapunov::sweep::{analyze, sweep, Quantity, SweepSpec};

const EXIT_FAILURE: u8 = 1;
const EXIT_RESONANCE: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_DEVIATION: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "crn-lyapunov", version, about = "Lyapunov estimates for autocatalytic reaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Renormalize a network and print the coalescence tree, cores and estimates.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        renorm: RenormArgs,
    },
    /// Run the numerical oracle: Perron data, a-priori bounds and Green kernels.
    Oracle {
        file: PathBuf,
        /// Source species (defaults to the first declared species).
        #[arg(long)]
        sigma0: Option<String>,
        /// Also print the Green kernel from the source at this horizon.
        #[arg(long, value_name = "N")]
        green: Option<usize>,
    },
    /// Compare hierarchical estimates with the oracle.
    Compare {
        file: PathBuf,
        #[command(flatten)]
        renorm: RenormArgs,
        /// Largest accepted deviation in scale units.
        #[arg(long, value_name = "N", default_value_t = 2.0)]
        max_dev: f64,
    },
    /// Sweep the scale of one reaction and write a CSV of `-log_b` values.
    Sweep {
        file: PathBuf,
        #[command(flatten)]
        renorm: RenormArgs,
        /// Reaction index in file order, starting at 0.
        #[arg(long, value_name = "INDEX")]
        reaction: usize,
        #[arg(long, value_name = "N", allow_hyphen_values = true)]
        from: i64,
        #[arg(long, value_name = "N", allow_hyphen_values = true)]
        to: i64,
        #[arg(long, value_name = "N", default_value_t = 1)]
        step: i64,
        /// Comma-separated quantities, e.g. `lambda_hier,lambda_oracle,pi_log:2`.
        #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
        quantities: String,
        /// Output path, or `-` for standard output.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct RenormArgs {
    /// Source species (defaults to the first declared species).
    #[arg(long)]
    sigma0: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Scale)]
    mode: ModeArg,
    /// Scales differing by at most this many units have the same order.
    #[arg(long, value_name = "N", default_value_t = 0)]
    tol: i64,
    /// Classification of resonant clusters.
    #[arg(long, value_enum, default_value_t = BranchArg::Auto)]
    resonance_branch: BranchArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Scale,
    Weighted,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BranchArg {
    /// Resonant clusters count as autocatalytic.
    Auto,
    /// Resonant clusters count as free.
    Free,
}

impl RenormArgs {
    fn options(&self) -> Result<RenormOptions> {
        if self.tol < 0 {
            bail!("--tol must be nonnegative");
        }
        Ok(RenormOptions {
            mode: match self.mode {
                ModeArg::Scale => Mode::Scale,
                ModeArg::Weighted => Mode::Weighted,
            },
            tol: self.tol,
            resonance_branch: match self.resonance_branch {
                BranchArg::Auto => ResonanceBranch::AssumeAutocatalytic,
                BranchArg::Free => ResonanceBranch::AssumeFree,
            },
        })
    }
}

fn load(path: &Path) -> Result<ReactionNetwork> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_network(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn source(net: &ReactionNetwork, name: Option<&str>) -> Result<usize> {
    match name {
        None if net.species.is_empty() => bail!("the network declares no species"),
        None => Ok(0),
        Some(n) => net.index_of(n).with_context(|| format!("unknown species `{n}`")),
    }
}

fn run(cli: Cli) -> Result<u8> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Analyze { file, renorm } => {
            let net = load(&file)?;
            let sigma0 = source(&net, renorm.sigma0.as_deref())?;
            let a = analyze(&net, sigma0, renorm.options()?, false)?;
            out.write_all(report::analysis(&net, &a).as_bytes())?;
            Ok(if a.estimate.flags.any_resonance() { EXIT_RESONANCE } else { 0 })
        }
        Command::Oracle { file, sigma0, green } => {
            let net = load(&file)?;
            let sigma0 = source(&net, sigma0.as_deref())?;
            let g = split(&net);
            let o = perron_source(&g, sigma0, PerronOptions::default())?;
            out.write_all(report::oracle(&g, &o, sigma0, green)?.as_bytes())?;
            Ok(0)
        }
        Command::Compare { file, renorm, max_dev } => {
            let net = load(&file)?;
            let sigma0 = source(&net, renorm.sigma0.as_deref())?;
            let a = analyze(&net, sigma0, renorm.options()?, true)?;
            let oracle = a.oracle.as_ref().expect("oracle requested");
            let c = compare(&a.estimate, oracle, &split(&net));
            out.write_all(report::comparison(&a, &c, max_dev).as_bytes())?;
            Ok(if c.max_deviation <= max_dev { 0 } else { EXIT_DEVIATION })
        }
        Command::Sweep { file, renorm, reaction, from, to, step, quantities, out: path } => {
            let net = load(&file)?;
            let sigma0 = source(&net, renorm.sigma0.as_deref())?;
            let quantities = quantities
                .split(',')
                .map(str::trim)
                .filter(|q| !q.is_empty())
                .map(|q| q.parse::<Quantity>())
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let spec = SweepSpec { reaction, from, to, step, sigma0, quantities, options: renorm.options()? };
            let rows = if spec.quantities.is_empty() {
                spec.points()?;
                Vec::new()
            } else {
                sweep(&net, &spec, Exec::default())?
            };
            if path.as_os_str() == "-" {
                report::write_csv(&mut out, &spec, &rows)?;
            } else {
                let mut file = fs::File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
                report::write_csv(&mut file, &spec, &rows)?;
            }
            Ok(0)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NonConvergence { .. }) => EXIT_NO_CONVERGENCE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_FAILURE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
