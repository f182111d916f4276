use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cosphere::{PhasePoint, SupportPattern};
use cosphere_cli::{
    cmd_examples, cmd_flow, cmd_lattice, cmd_reduce, cmd_verify, parse_planes, CliError, CliResult,
    FlowMethodArg, RunConfig, Source, EXIT_OK, EXIT_VERIFICATION,
};

/// Contact reduction of cosphere bundles at zero momentum.
#[derive(Parser)]
#[command(name = "cosphere", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write isotropy.dot, cl.dot and contact.dot.
    Lattice {
        #[command(flatten)]
        source: SourceArgs,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the JSON stratification report.
    Reduce {
        #[command(flatten)]
        source: SourceArgs,
        /// Report path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the zero level and check it against the reduced-space description.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        /// Sweep every base/covector support pattern.
        #[arg(long)]
        all_patterns: bool,
        /// Band separating equalities from strict inequalities.
        #[arg(long, default_value_t = cosphere::tolerance::STRICT_BAND)]
        tolerance: f64,
        /// Also write every sample to this CSV file.
        #[arg(long)]
        samples: Option<PathBuf>,
        /// JSON report path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a Reeb trajectory as CSV.
    Flow {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = 2.0)]
        t_end: f64,
        #[arg(long, default_value_t = cosphere::tolerance::DEFAULT_RK4_STEP)]
        step: f64,
        #[arg(long, value_enum, default_value_t = FlowMethodArg::Rk4)]
        method: FlowMethodArg,
        /// Which sample of the seeded stream to start from.
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Explicit start: base coordinates, comma separated.
        #[arg(long, requires = "u", allow_hyphen_values = true)]
        x: Option<String>,
        /// Explicit start: covector coordinates (normalized before use).
        #[arg(long, requires = "x", allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, default_value_t = cosphere::tolerance::STRICT_BAND)]
        tolerance: f64,
        /// CSV path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check both builtin examples end to end.
    Examples {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Generic samples per fixture.
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Builtin fixture name or path to an action JSON file ({"weights": [[..]]}).
    #[arg(long)]
    action: Option<String>,
    /// Builtin fixture: s1-on-r2 or t2-on-r4.
    #[arg(long)]
    fixture: Option<String>,
    /// Abstract isotropy poset JSON (lattice and reduce only).
    #[arg(long)]
    poset: Option<PathBuf>,
}

impl SourceArgs {
    fn resolve(&self) -> CliResult<Source> {
        match (&self.action, &self.fixture, &self.poset) {
            (Some(a), _, _) => Source::from_action_arg(a),
            (_, Some(f), _) => Ok(Source::Fixture(f.parse()?)),
            (_, _, Some(p)) => Source::from_poset_file(p),
            _ => unreachable!("clap enforces one source"),
        }
    }
}

#[derive(Args)]
struct SamplingArgs {
    /// RNG seed; required, there is no ambient entropy
    #[arg(long)]
    seed: Option<u64>,
    /// Planes (zero-based, comma separated, or "none") allowed in the base point.
    #[arg(long, value_parser = planes)]
    x_support: Option<Planes>,
    /// Planes allowed in the covector.
    #[arg(long, value_parser = planes)]
    u_support: Option<Planes>,
}

#[derive(Clone)]
struct Planes(Vec<usize>);

fn planes(s: &str) -> Result<Planes, String> {
    parse_planes(s).map(Planes)
}

impl SamplingArgs {
    fn apply(&self, config: &mut RunConfig) {
        config.seed = self.seed;
        config.pattern = SupportPattern::new(
            self.x_support.as_ref().map(|p| p.0.as_slice()),
            self.u_support.as_ref().map(|p| p.0.as_slice()),
        );
    }
}

fn parse_coords(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Input(format!("bad coordinate `{v}`: {e}")))
        })
        .collect()
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Lattice { source, out } => {
            let mut config = RunConfig::new(source.resolve()?);
            config.out = out;
            for path in cmd_lattice(&config)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Reduce { source, out } => {
            let mut config = RunConfig::new(source.resolve()?);
            config.out = out;
            cmd_reduce(&config)?;
        }
        Command::Verify {
            source,
            sampling,
            count,
            all_patterns,
            tolerance,
            samples,
            out,
        } => {
            let mut config = RunConfig::new(source.resolve()?);
            sampling.apply(&mut config);
            config.count = count;
            config.all_patterns = all_patterns;
            config.tolerance.band = tolerance;
            config.samples_csv = samples;
            config.out = out;
            cmd_verify(&config)?;
        }
        Command::Flow {
            source,
            sampling,
            t_end,
            step,
            method,
            index,
            x,
            u,
            tolerance,
            out,
        } => {
            let mut config = RunConfig::new(source.resolve()?);
            sampling.apply(&mut config);
            config.t_end = t_end;
            config.step = step;
            config.sample_index = index;
            config.tolerance.band = tolerance;
            config.out = out;
            if let (Some(x), Some(u)) = (x, u) {
                config.start = Some(PhasePoint::new(parse_coords(&x)?, parse_coords(&u)?)?);
            }
            let summary = cmd_flow(&config, method)?;
            eprintln!(
                "{} rows, endpoint error {:e}, closed-form error {:e}",
                summary.rows, summary.endpoint_error, summary.max_closed_form_error
            );
        }
        Command::Examples { seed, count, out } => {
            let report = cmd_examples(seed, count)?;
            print!("{}", report.render());
            if let Some(path) = out {
                cosphere_cli::emit(
                    Some(&path),
                    &serde_json::to_string_pretty(&report).expect("serializable"),
                )?;
            }
            return Ok(if report.passed {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            });
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
