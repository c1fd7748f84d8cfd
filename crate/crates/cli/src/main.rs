use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use randwave::harness::{
    emit_report, interval_scaling_study, run_experiment_with, scaling_verdicts, tail_study, ExperimentConfig,
    ExperimentReport, NamedVerdict,
};
use randwave::moments::moment_suite;
use randwave::trees::{tree_rows, tree_suite, TreeRow};
use randwave::Verdict;

#[derive(Parser)]
#[command(name = "randwave", version, about = "Picard iterates with randomized data: checks and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tree enumeration, constants and nested quadrature checks.
    Trees {
        /// Directory for trees.csv and verdicts.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moment identities, Stirling bounds and tail conversion checks.
    Moments {
        /// Seed for the Monte Carlo checks.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Directory for verdicts.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo run of iterates 0..=n_max.
    Simulate(RunArgs),
    /// Interval scaling fit of the median norm.
    Scaling(RunArgs),
    /// Empirical tail against the moment-derived bound.
    Tails {
        #[command(flatten)]
        run: RunArgs,
        /// Iterate order; defaults to the config's tail order.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Print the verdicts stored in a report directory.
    Report {
        /// Directory holding summary.json.
        dir: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Experiment TOML file.
    #[arg(long)]
    config: PathBuf,
    /// Override the base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of Monte Carlo samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the highest iterate order.
    #[arg(long)]
    n_max: Option<usize>,
    /// Override the points per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Override the box side length.
    #[arg(long = "box")]
    box_length: Option<f64>,
    /// Override the final time.
    #[arg(long)]
    t: Option<f64>,
    /// Override the number of time steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Dump final-time fields of the first sample.
    #[arg(long)]
    partial: bool,
}

impl RunArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut c = ExperimentConfig::load(&self.config)?;
        if let Some(v) = self.seed {
            c.run.base_seed = v;
        }
        if let Some(v) = self.samples {
            c.run.samples = v;
        }
        if let Some(v) = &self.out {
            c.output = v.clone();
        }
        if let Some(v) = self.n_max {
            c.run.n_max = v;
        }
        if let Some(v) = self.grid {
            c.grid.n_points = v;
        }
        if let Some(v) = self.box_length {
            c.grid.box_length = v;
        }
        if let Some(v) = self.t {
            c.time.t_final = v;
        }
        if let Some(v) = self.steps {
            c.time.n_steps = v;
        }
        c.validate()?;
        Ok(c)
    }
}

fn print_verdicts(verdicts: &[Verdict]) -> bool {
    println!("{}", Verdict::HEADER);
    for v in verdicts {
        println!("{}", v.to_csv());
    }
    verdicts.iter().all(|v| v.pass)
}

fn print_named(verdicts: &[NamedVerdict]) -> bool {
    for v in verdicts {
        println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
    }
    verdicts.iter().all(|v| v.pass)
}

fn write_verdicts(dir: &Path, verdicts: &[Verdict]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut body = format!("{}\n", Verdict::HEADER);
    for v in verdicts {
        body.push_str(&v.to_csv());
        body.push('\n');
    }
    let path = dir.join("verdicts.csv");
    std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

fn finish(report: &ExperimentReport, dir: &Path) -> Result<bool> {
    for path in emit_report(report, dir)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(print_named(&report.verdicts))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Trees { out } => {
            let verdicts = tree_suite()?;
            if let Some(dir) = out {
                write_verdicts(&dir, &verdicts)?;
                let mut body = format!("{}\n", TreeRow::HEADER);
                for row in tree_rows(7)? {
                    body.push_str(&row.to_csv());
                    body.push('\n');
                }
                std::fs::write(dir.join("trees.csv"), body)?;
            }
            Ok(print_verdicts(&verdicts))
        }
        Command::Moments { seed, out } => {
            let verdicts = moment_suite(seed)?;
            if let Some(dir) = out {
                write_verdicts(&dir, &verdicts)?;
            }
            Ok(print_verdicts(&verdicts))
        }
        Command::Simulate(args) => {
            let c = args.load()?;
            let dump = args.partial.then(|| c.output.join("fields"));
            let report = run_experiment_with(&c, dump.as_deref())?;
            finish(&report, &c.output)
        }
        Command::Scaling(args) => {
            let c = args.load()?;
            let fits = interval_scaling_study(&c)?;
            let mut report = run_experiment_with(&c, None)?;
            report.verdicts.extend(scaling_verdicts(&fits));
            report.scaling = fits;
            finish(&report, &c.output)
        }
        Command::Tails { run, order } => {
            let c = run.load()?;
            let (_, report) = tail_study(&c, order.unwrap_or(c.tails.n))?;
            finish(&report, &c.output)
        }
        Command::Report { dir } => {
            let path = dir.join("summary.json");
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let Some(verdicts) = value.get("verdicts") else {
                bail!("{} has no verdicts", path.display());
            };
            let verdicts: Vec<NamedVerdict> = serde_json::from_value(verdicts.clone())?;
            Ok(print_named(&verdicts))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
