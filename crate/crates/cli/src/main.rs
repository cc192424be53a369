//! `flexdist` command-line front end.
//!
//! Exit status: 0 on success, 2 for unreadable or invalid input (including
//! bad flags), 1 for anything else.

mod commands;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flexdist::ingest::HeaderMode;
use flexdist::{AmplitudeWeight, FdWeights, Measure, TemporalWeight};

#[derive(Debug, Parser)]
#[command(name = "flexdist", version, about = "Flexibility Distance and baseline measures for load profiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,

    #[command(flatten)]
    input: InputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Field delimiter of input files.
    #[arg(long, global = true, default_value_t = ',')]
    delimiter: char,

    /// Whether input files start with a header row.
    #[arg(long, global = true, value_enum, default_value_t = HeaderArg::Auto)]
    header: HeaderArg,

    /// Sampling interval in minutes for files without timestamps.
    #[arg(long, global = true, default_value_t = flexdist::DEFAULT_INTERVAL_MINUTES)]
    interval: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HeaderArg {
    Auto,
    Present,
    Absent,
}

impl From<HeaderArg> for HeaderMode {
    fn from(h: HeaderArg) -> Self {
        match h {
            HeaderArg::Auto => HeaderMode::Auto,
            HeaderArg::Present => HeaderMode::Present,
            HeaderArg::Absent => HeaderMode::Absent,
        }
    }
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, value_enum, default_value_t = MeasureKind::Fd)]
    measure: MeasureKind,

    #[command(flatten)]
    weights: WeightArgs,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// FD amplitude weight P.
    #[arg(long, value_name = "C")]
    amplitude_weight: Option<f64>,

    /// FD temporal weight T: a constant, or `maxmin` for the range of both
    /// series divided by their length.
    #[arg(long, value_name = "W|maxmin", value_parser = parse_temporal)]
    temporal_weight: Option<TemporalWeight>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureKind {
    Ed,
    Dtw,
    Fd,
}

fn parse_temporal(s: &str) -> Result<TemporalWeight, String> {
    if s.eq_ignore_ascii_case("maxmin") {
        return Ok(TemporalWeight::MaxminScaled);
    }
    s.parse::<f64>().map(TemporalWeight::Constant).map_err(|_| format!("expected a number or `maxmin`, got {s:?}"))
}

impl WeightArgs {
    fn is_set(&self) -> bool {
        self.amplitude_weight.is_some() || self.temporal_weight.is_some()
    }

    fn resolve(&self) -> flexdist::Result<Measure> {
        let d = FdWeights::default();
        Measure::flexibility(FdWeights::new(
            self.amplitude_weight.map_or(d.amplitude, AmplitudeWeight::Constant),
            self.temporal_weight.unwrap_or(d.temporal),
        )?)
    }
}

impl MeasureArgs {
    fn resolve(&self) -> flexdist::Result<Measure> {
        match self.measure {
            MeasureKind::Ed | MeasureKind::Dtw if self.weights.is_set() => Err(flexdist::Error::InvalidParameter(
                "--amplitude-weight and --temporal-weight only apply to --measure fd".into(),
            )),
            MeasureKind::Ed => Ok(Measure::Euclidean),
            MeasureKind::Dtw => Ok(Measure::Dtw),
            MeasureKind::Fd => self.weights.resolve(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance between two single-series files.
    Dist {
        x: PathBuf,
        y: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Include the FD reshape plan.
        #[arg(long)]
        plan: bool,
        /// Include the FD cost matrix.
        #[arg(long)]
        matrix: bool,
    },
    /// Day-level matrix profile and the most anomalous day.
    Discord {
        series: PathBuf,
        #[arg(long)]
        samples_per_day: usize,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    /// k-nearest-neighbour classification of labelled patterns.
    Knn {
        train: PathBuf,
        /// Defaults to the training file.
        test: Option<PathBuf>,
        #[arg(long, default_value_t = flexdist::classify::DEFAULT_K)]
        k: usize,
        /// Classify each training pattern against all the others.
        #[arg(long, conflicts_with = "test")]
        loo: bool,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    /// Rank rescheduling scenarios by distance to an ideal profile.
    Rank {
        /// Wide CSV file, or a directory of single-series CSV files.
        bundle: PathBuf,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        original: String,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    /// Median timing of ED, DTW and FD on random series.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = flexdist::bench::DEFAULT_SIZES.to_vec())]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = flexdist::bench::DEFAULT_REPETITIONS)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        weights: WeightArgs,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let argv: Vec<String> = std::env::args().collect();
    let input = commands::Input::new(&cli.input)?;
    let report = match cli.command {
        Command::Dist { x, y, measure, plan, matrix } => {
            if cli.output == OutputFormat::Csv && plan && matrix {
                return Err(flexdist::Error::InvalidParameter(
                    "--output csv takes at most one of --plan and --matrix".into(),
                )
                .into());
            }
            commands::dist(&input, &x, &y, &measure.resolve()?, plan, matrix)?
        }
        Command::Discord { series, samples_per_day, measure } => {
            commands::discord(&input, &series, samples_per_day, &measure.resolve()?)?
        }
        Command::Knn { train, test, k, loo, measure } => {
            commands::knn(&input, &train, test.as_deref(), k, loo, &measure.resolve()?)?
        }
        Command::Rank { bundle, ideal, original, measure } => {
            commands::rank(&input, &bundle, &ideal, &original, &measure.resolve()?)?
        }
        Command::Bench { sizes, reps, seed, weights } => commands::bench(&sizes, reps, seed, weights.resolve()?)?,
    };
    let report = report.with_command(argv);

    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match cli.output {
        OutputFormat::Json => report.write_json(&mut out)?,
        OutputFormat::Csv => report.write_csv(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("flexdist: {e:#}");
            if e.downcast_ref::<flexdist::Error>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
