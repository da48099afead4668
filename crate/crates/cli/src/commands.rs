use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use microrisk::{
    build_report, enumerate_known_sets, validate_parameters, BinSpec, Execution, KnownSetSource,
    RiskConfig, RiskModel, BRUTE_FORCE_LIMIT,
};

use crate::config_file::load_config;
use crate::error::{io_error, CliError};
use crate::input::load_dataset;
use crate::report_json::{format_real, ReportDocument};

#[derive(Debug, Parser)]
#[command(name = "microrisk", version, about = "Per-record disclosure risk for microdata")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every record of a CSV file and write a JSON report.
    Compute(ComputeArgs),
    /// List the known sets that survive pruning for a configuration.
    Enumerate(EnumerateArgs),
    /// Print the histogram of a report as CSV or TSV.
    Histogram(HistogramArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Configuration JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Where to write the JSON report.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// High-risk threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Optional per-record scores CSV (record_index,risk).
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Test all 2^m known sets instead of pruning (m <= 20).
    #[arg(long)]
    pub brute_force: bool,
    /// Worker threads; 1 runs sequentially. Defaults to available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Largest terms listed per high-risk record; 0 disables.
    #[arg(long, default_value_t = 10)]
    pub top_contributions: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HistogramFormat {
    Csv,
    Tsv,
}

#[derive(Debug, Clone, Args)]
pub struct HistogramArgs {
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long, value_enum, default_value_t = HistogramFormat::Csv)]
    pub format: HistogramFormat,
}

/// Runs a parsed command, writing normal output to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match &cli.command {
        Command::Compute(args) => cmd_compute(args, out).map(|_| ()),
        Command::Enumerate(args) => cmd_enumerate(args, out),
        Command::Histogram(args) => cmd_histogram(args, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn write_out(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<(), CliError> {
    out.write_fmt(text).map_err(|e| io_error("stdout", e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComputeSummary {
    pub n_records: usize,
    pub retained_set_count: usize,
    pub high_risk_count: usize,
    pub high_risk_percent: f64,
}

pub fn cmd_compute(args: &ComputeArgs, out: &mut dyn Write) -> Result<ComputeSummary, CliError> {
    let mut config = load_config(&args.config)?;
    if let Some(e) = args.epsilon {
        config.epsilon = e;
    }
    if let Some(a) = args.alpha {
        config.alpha = a;
    }
    if let Some(t) = args.threshold {
        config.high_risk_threshold = t;
    }
    validate_parameters(&config)?;
    if args.brute_force && config.n_attributes() > BRUTE_FORCE_LIMIT {
        return Err(microrisk::Error::BruteForceLimit {
            m: config.n_attributes(),
            limit: BRUTE_FORCE_LIMIT,
        }
        .into());
    }
    let dataset = load_dataset(&args.data)?;

    let source = if args.brute_force {
        KnownSetSource::BruteForce
    } else {
        KnownSetSource::Pruned
    };
    let execution = Execution::from_jobs(args.jobs);
    let model = RiskModel::prepare(&dataset, &config, source, execution)?;
    let risks = model.evaluate_all(0, execution)?;
    let bins = BinSpec::default();
    let mut report = build_report(&risks, model.tables().len(), &config, bins)?;
    if args.top_contributions > 0 {
        for entry in &mut report.high_risk {
            *entry = model.evaluate(entry.record_index, args.top_contributions)?;
        }
    }

    let document = ReportDocument::new(&report, dataset.schema(), source, bins.min_exponent);
    fs::write(&args.out, document.to_json()).map_err(|e| io_error(args.out.display(), e))?;
    if let Some(path) = &args.scores {
        write_scores(path, risks.iter().map(|r| r.risk))?;
    }

    write_out(
        out,
        format_args!(
            "records: {}\nretained known sets: {}\nhigh-risk records: {} of {} ({:.2}%) above {}\n",
            report.n_records,
            report.retained_set_count,
            report.high_risk_count(),
            report.n_records,
            report.high_risk_percent(),
            config.high_risk_threshold,
        ),
    )?;
    Ok(ComputeSummary {
        n_records: report.n_records,
        retained_set_count: report.retained_set_count,
        high_risk_count: report.high_risk_count(),
        high_risk_percent: report.high_risk_percent(),
    })
}

fn write_scores(path: &PathBuf, risks: impl Iterator<Item = f64>) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| io_error(path.display(), e))?;
    let mut w = BufWriter::new(file);
    let io = |e| io_error(path.display(), e);
    writeln!(w, "record_index,risk").map_err(io)?;
    for (i, r) in risks.enumerate() {
        writeln!(w, "{i},{}", format_real(r)).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn cmd_enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut config: RiskConfig = load_config(&args.config)?;
    if let Some(e) = args.epsilon {
        config.epsilon = e;
    }
    validate_parameters(&config)?;
    let names = config.attribute_names();
    let sets = enumerate_known_sets(&config);
    for ks in &sets {
        write_out(
            out,
            format_args!("{{{}}}\t{}\n", ks.names(&names).join(","), format_real(ks.pk())),
        )?;
    }
    write_out(out, format_args!("total: {}\n", sets.len()))
}

pub fn cmd_histogram(args: &HistogramArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.report).map_err(|e| io_error(args.report.display(), e))?;
    let document = ReportDocument::from_json(&text)
        .map_err(|e| io_error(format!("invalid report {}", args.report.display()), e))?;
    let sep = match args.format {
        HistogramFormat::Csv => ',',
        HistogramFormat::Tsv => '\t',
    };
    write_out(out, format_args!("bin_lower{sep}bin_upper{sep}count\n"))?;
    for bin in &document.histogram {
        write_out(out, format_args!("{}{sep}{}{sep}{}\n", bin.lower, bin.upper, bin.count))?;
    }
    Ok(())
}
