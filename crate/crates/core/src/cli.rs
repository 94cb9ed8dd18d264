//! Command-line front end. Exit codes: 0 success, 1 a check failed,
//! 2 usage or input error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dist::RngStream;
use crate::error::{Error, Result};
use crate::experiment::{run_experiment, ExperimentConfig, GeneratorKind, DEFAULT_J_GRID};
use crate::generators::{dlp_generate, gnm, gnp};
use crate::graph::{
    connected_components, core_mantle_decompose, read_colored_edge_list, read_edge_list,
    write_colored_edge_list, write_edge_list, Graph,
};
use crate::oracle::{max_rainbow_tree, ColoredGraphSmall};
use crate::rainbow::{order_edges, rainbow_giant, run_process};
use crate::theory::{color_count, loss_prefix, theory_summary};
use crate::verify::{check_oracle_dominance, distribution_suite, format_check};

#[derive(Debug, Parser)]
#[command(
    name = "rainbow-giant",
    version,
    about = "Rainbow colouring of the giant component of sparse random graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a graph and write it as an edge list.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "gnp")]
        generator: GeneratorKind,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Role sidecar (`vertex role` lines), dlp only.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Decompose the largest component of an edge list into core and mantle.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the coloring process on the largest component of an edge list.
    Process {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Ambient vertex count for the palette and the loss prefix; defaults to the header count.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Colored edge list (`u v color`, -1 for deleted edges).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Step-by-step trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run seeded trials and emit the report; exits 1 if a check fails.
    Experiment {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "gnp")]
        generator: GeneratorKind,
        #[arg(long, value_delimiter = ',')]
        j_grid: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = all cores). Does not affect the report.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Print the closed-form predictions as JSON.
    Theory {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Observed giant edge count for the expected-loss bound.
        #[arg(long)]
        edges: Option<usize>,
    },
    /// Check the mu solver, the Borel tail bound and tree sizes against Borel.
    VerifyDistributions {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the process with exhaustive search on small instances, or
    /// solve one colored edge list given with --input.
    OracleCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 20)]
        runs: usize,
    },
}

enum Outcome {
    Ok,
    ChecksFailed,
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_graph(path: &Path) -> Result<Graph> {
    read_edge_list(BufReader::new(File::open(path)?))
}

fn print_json<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<()> {
    let mut w = open_out(out)?;
    writeln!(
        w,
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    )?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Decomposition {
    n: usize,
    edges: usize,
    giant: usize,
    giant_edges: usize,
    core_vertices: usize,
    core_edges: usize,
    mantle_edges: usize,
    /// `(desc, number of mantle edges)` pairs.
    desc_histogram: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct ProcessSummary {
    giant: usize,
    colors: usize,
    processed: usize,
    deleted: usize,
    rainbow_giant: usize,
    loss_prefix: usize,
    loss: usize,
    rainbow: bool,
}

fn execute(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Generate {
            model,
            generator,
            out,
            labels,
        } => {
            let mut rng = RngStream::new(model.seed, 0);
            let p = ((1.0 + model.epsilon) / model.n as f64).min(1.0);
            let g = match generator {
                GeneratorKind::Gnp => gnp(model.n, p, &mut rng)?,
                GeneratorKind::Gnm => gnm(
                    model.n,
                    ((1.0 + model.epsilon) * model.n as f64 / 2.0).round() as usize,
                    &mut rng,
                )?,
                GeneratorKind::Dlp => {
                    let d = dlp_generate(model.n, model.epsilon, &mut rng)?;
                    if let Some(path) = &labels {
                        let mut w = BufWriter::new(File::create(path)?);
                        d.write_labels(&mut w)?;
                        w.flush()?;
                    }
                    d.graph
                }
            };
            if labels.is_some() && generator != GeneratorKind::Dlp {
                return Err(Error::Domain(
                    "--labels is only available with --generator dlp".into(),
                ));
            }
            let mut w = open_out(&out)?;
            write_edge_list(&g, &mut w)?;
            w.flush()?;
            Ok(Outcome::Ok)
        }
        Command::Decompose { input, out } => {
            let g = read_graph(&input)?;
            let part = connected_components(&g);
            let cm = core_mantle_decompose(&g, &part, part.largest())?;
            let mut hist = std::collections::BTreeMap::new();
            for &e in cm.mantle_edges() {
                *hist.entry(cm.desc(e).unwrap()).or_insert(0) += 1;
            }
            let d = Decomposition {
                n: g.n(),
                edges: g.num_edges(),
                giant: cm.component_size(),
                giant_edges: cm.num_edges(),
                core_vertices: cm.core_vertices().len(),
                core_edges: cm.core_edges().len(),
                mantle_edges: cm.mantle_edges().len(),
                desc_histogram: hist.into_iter().collect(),
            };
            print_json(&d, &out)?;
            Ok(Outcome::Ok)
        }
        Command::Process {
            input,
            alpha,
            epsilon,
            n,
            seed,
            out,
            trace,
        } => {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Error::Domain(format!(
                    "alpha must be positive, got {alpha}"
                )));
            }
            let g = read_graph(&input)?;
            let ambient = n.unwrap_or(g.n());
            let part = connected_components(&g);
            let cm = core_mantle_decompose(&g, &part, part.largest())?;
            let ordering = order_edges(&g, &cm);
            let colors = color_count(ambient, alpha);
            let mut rng = RngStream::new(seed, 0);
            let (coloring, tr) = run_process(&g, &ordering, colors, &mut rng);
            if let Some(path) = &out {
                let mut w = BufWriter::new(File::create(path)?);
                write_colored_edge_list(&g, &coloring.output_colors(), &mut w)?;
                w.flush()?;
            }
            if let Some(path) = &trace {
                let mut w = BufWriter::new(File::create(path)?);
                tr.write_csv(&mut w)?;
                w.flush()?;
            }
            let prefix = loss_prefix(ambient, epsilon);
            let summary = ProcessSummary {
                giant: cm.component_size(),
                colors,
                processed: ordering.len(),
                deleted: tr.deleted(),
                rainbow_giant: rainbow_giant(&g, &coloring).size,
                loss_prefix: prefix,
                loss: tr.loss_after(prefix),
                rainbow: coloring.is_rainbow(),
            };
            print_json(&summary, &None)?;
            Ok(Outcome::Ok)
        }
        Command::Experiment {
            n,
            epsilon,
            alpha,
            trials,
            seed,
            generator,
            j_grid,
            format,
            out,
            workers,
        } => {
            let mut cfg = ExperimentConfig::new(n, epsilon, alpha, trials, seed, generator);
            cfg.j_grid = j_grid.unwrap_or_else(|| DEFAULT_J_GRID.to_vec());
            cfg.workers = workers;
            let report = run_experiment(&cfg)?;
            let mut w = open_out(&out)?;
            match format {
                Format::Json => writeln!(w, "{}", report.to_json())?,
                Format::Csv => report.write_csv(&mut w)?,
            }
            w.flush()?;
            for c in &report.checks {
                eprintln!("{}", format_check(c));
            }
            Ok(if report.passed() {
                Outcome::Ok
            } else {
                Outcome::ChecksFailed
            })
        }
        Command::Theory {
            n,
            epsilon,
            alpha,
            edges,
        } => {
            let t = theory_summary(n, epsilon, alpha, edges)?;
            print_json(&t, &None)?;
            Ok(Outcome::Ok)
        }
        Command::VerifyDistributions { seed } => {
            let checks = distribution_suite(seed);
            for c in &checks {
                println!("{}", format_check(c));
            }
            Ok(if checks.iter().all(|c| c.passed) {
                Outcome::Ok
            } else {
                Outcome::ChecksFailed
            })
        }
        Command::OracleCheck {
            seed,
            input,
            instances,
            runs,
        } => {
            if let Some(path) = input {
                let (g, colors) = read_colored_edge_list(BufReader::new(File::open(path)?))?;
                let cg = ColoredGraphSmall::from_colored(g, &colors)?;
                print_json(&max_rainbow_tree(&cg), &None)?;
                return Ok(Outcome::Ok);
            }
            let checks = check_oracle_dominance(instances, runs, seed);
            for c in &checks {
                println!("{}", format_check(c));
            }
            Ok(if checks.iter().all(|c| c.passed) {
                Outcome::Ok
            } else {
                Outcome::ChecksFailed
            })
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::ChecksFailed) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
