use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ringpir::error::{Error, Result};
use ringpir::experiment::{
    cmd_attack, cmd_bounds, cmd_free_density, cmd_paper_example, cmd_roundtrip, human_table, init_thread_pool,
    render_bounds, write_output, ExperimentConfig, OutputFormat, SuiteSpec, TABLE_ONE,
};
use ringpir::zm::NfConvention;

#[derive(Parser)]
#[command(name = "ringpir", version, about = "Experiments with a code-based PIR scheme over Z_m and an attack on it")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay the fixed worked example over Z_36 and check every value.
    PaperExample(PaperArgs),
    /// Seeded round trips: plant a file, query, respond, recover.
    Roundtrip(RunArgs),
    /// Seeded attack trials against random planted indices.
    Attack(AttackArgs),
    /// Lower bounds on the number of files for the attack.
    Bounds(BoundsArgs),
    /// Fraction of random generator matrices that give free codes.
    FreeDensity(DensityArgs),
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct PaperArgs {
    /// Also check the retrieval entries against the repair condition.
    #[arg(long)]
    repair: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// `--repair`, `--repair true` or `--repair false`.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    repair: Option<bool>,
    #[arg(long, value_parser = parse_convention)]
    nf_convention: Option<NfConvention>,
    /// Fixture name: `repairable` or `worked`.
    #[arg(long)]
    suite: Option<String>,
    /// Record wall time per phase in each trial record.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct AttackArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated values of t for the timing table, e.g. 9,17,33.
    #[arg(long, value_delimiter = ',')]
    sweep: Vec<usize>,
    #[arg(long)]
    sweep_reps: Option<usize>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, requires_all = ["s", "r"])]
    n: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    e: u32,
    #[arg(long, default_value_t = 8)]
    rank: usize,
    #[arg(long, default_value_t = 20)]
    length: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_convention(s: &str) -> std::result::Result<NfConvention, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = self.$field.clone() { cfg.$target = v; })*
            };
        }
        set!(m => m, n => n, s => s, r => r, t => t, l => l, seed => seed, trials => trials,
             repair => repair, nf_convention => nf_convention);
        if let Some(name) = &self.suite {
            cfg.suite = SuiteSpec::Named(name.clone());
        }
        cfg.timing |= self.timing;
        if self.out.out.is_some() {
            cfg.out = self.out.out.clone();
        }
        if let Some(f) = self.out.format {
            cfg.format = f;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Writes a single value as JSON, or CSV rows built by `csv_rows`.
fn emit<T: Serialize>(out: &OutArgs, value: &T, csv_rows: impl FnOnce() -> Vec<Vec<String>>) -> Result<()> {
    let Some(path) = &out.out else { return Ok(()) };
    let w = BufWriter::new(File::create(path)?);
    match out.format.unwrap_or_default() {
        OutputFormat::Json => serde_json::to_writer_pretty(w, value)?,
        OutputFormat::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            for row in csv_rows() {
                csv.write_record(&row)?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    init_thread_pool()?;
    match cli.command {
        Command::PaperExample(args) => {
            let report = cmd_paper_example(args.repair, args.seed)?;
            print!("{}", report.render());
            emit(&args.out, &report, || {
                let mut rows = vec![vec!["row".into(), "col".into(), "candidates".into()]];
                for c in &report.ambiguity {
                    let vals: Vec<String> = c.values.iter().map(u64::to_string).collect();
                    rows.push(vec![c.row.to_string(), c.col.to_string(), vals.join(" ")]);
                }
                rows
            })?;
        }
        Command::Roundtrip(args) => {
            let cfg = args.config()?;
            let (records, summary) = cmd_roundtrip(&cfg)?;
            let rows = summary.rows();
            print!("{}", human_table("roundtrip", &rows));
            write_output(&cfg, &records, &rows)?;
        }
        Command::Attack(args) => {
            let mut cfg = args.run.config()?;
            if !args.sweep.is_empty() {
                cfg.t_sweep = args.sweep;
            }
            if let Some(reps) = args.sweep_reps {
                cfg.sweep_reps = reps;
            }
            let (records, summary) = cmd_attack(&cfg)?;
            let rows = summary.rows();
            print!("{}", human_table("attack", &rows));
            write_output(&cfg, &records, &rows)?;
        }
        Command::Bounds(args) => {
            let params = match (args.n, args.s, args.r) {
                (Some(n), Some(s), Some(r)) => vec![(n, s, r)],
                _ => TABLE_ONE.to_vec(),
            };
            let rows = cmd_bounds(&params)?;
            print!("{}", render_bounds(&rows));
            emit(&args.out, &rows, || {
                let mut out = vec![["n", "s", "r", "t_zj", "t_dim", "t_general"].map(String::from).to_vec()];
                for row in &rows {
                    let b = row.bounds;
                    out.push(vec![
                        row.n.to_string(),
                        row.s.to_string(),
                        row.r.to_string(),
                        b.t_zj.to_string(),
                        b.t_dim.map_or(String::new(), |t| t.to_string()),
                        b.t_general.to_string(),
                    ]);
                }
                out
            })?;
        }
        Command::FreeDensity(args) => {
            let report = cmd_free_density(args.p, args.e, args.rank, args.length, args.trials, args.seed)?;
            println!(
                "free fraction of {}x{} generators over Z_{}: {:.4} ({} trials)",
                report.rank,
                report.length,
                args.p.pow(args.e),
                report.fraction,
                report.trials
            );
            emit(&args.out, &report, || {
                vec![
                    vec!["metric".into(), "value".into()],
                    vec!["fraction".into(), report.fraction.to_string()],
                    vec!["trials".into(), report.trials.to_string()],
                ]
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::GoldenMismatch(_)) => {
            eprintln!("FAIL: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
