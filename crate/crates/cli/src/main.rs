//! Batch front end: parse a scenario config, run its tasks in parallel,
//! emit a deterministic text report on stdout and optionally a JSON report.
//!
//! Exit codes: 0 all tasks pass, 1 some task fails, 2 the config does not
//! parse or validate, 3 a task errors out.

mod config;
mod report;
mod tasks;

use clap::{Parser, Subcommand};
use config::{ConfigFile, Overrides};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "iwafitt")]
#[command(about = "Exact Fitting-ideal computations over truncated Iwasawa algebras")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the tasks of a scenario configuration file.
    Run {
        /// Path to the JSON configuration.
        config: PathBuf,

        /// Override the prime p.
        #[arg(long)]
        p: Option<u64>,

        /// Override the coefficient precision N (coefficients in Z/p^N).
        #[arg(long)]
        coeff_precision: Option<u32>,

        /// Override the T-truncation M used by membership tests.
        #[arg(long)]
        t_precision: Option<u32>,

        /// Override the group factor orders, comma separated (e.g. 9,3).
        #[arg(long, value_delimiter = ',')]
        group: Option<Vec<u64>>,

        /// Worker threads for task- and minor-level parallelism.
        #[arg(long)]
        jobs: Option<usize>,

        /// Also write a JSON report to this path.
        #[arg(long)]
        json: Option<PathBuf>,

        /// Maximum complex degree for exactness tasks.
        #[arg(long, default_value_t = 4)]
        max_degree: usize,

        /// Permit p = 2 (the worked identities are only asserted for odd p).
        #[arg(long, default_value_t = false)]
        allow_even_p: bool,

        /// Per-degree rank budget for bar resolutions.
        #[arg(long, default_value_t = iwafitt::complex::BAR_RANK_BUDGET)]
        budget: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            p,
            coeff_precision,
            t_precision,
            group,
            jobs,
            json,
            max_degree,
            allow_even_p,
            budget,
        } => {
            if let Some(jobs) = jobs {
                // ignore failure when a pool already exists (e.g. in tests)
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build_global();
            }
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            let mut cfg: ConfigFile = match serde_json::from_str(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!(
                        "error: {} does not parse at line {}, column {}: {e}",
                        config.display(),
                        e.line(),
                        e.column()
                    );
                    return ExitCode::from(2);
                }
            };
            cfg.apply_overrides(&Overrides {
                p,
                coeff_precision,
                t_precision,
                group,
                allow_even_p,
            });
            // validate the ring data before dispatching any task
            if let Err(e) = cfg.base_context() {
                eprintln!("error: invalid configuration: {e}");
                return ExitCode::from(2);
            }
            if allow_even_p && cfg.p == 2 {
                eprintln!(
                    "warning: p = 2 enabled; the worked identities are only asserted for odd p"
                );
            }
            let opts = tasks::RunOptions { max_degree, budget };
            let rep = report::run_all(&cfg, &opts);
            print!("{}", report::render_text(&rep, &cfg));
            for r in &rep.results {
                eprintln!("task {} [{}] took {} ms", r.index + 1, r.kind, r.millis);
            }
            if let Some(path) = json {
                let value = report::render_json(&rep, &cfg);
                match std::fs::write(&path, serde_json::to_string_pretty(&value).unwrap()) {
                    Ok(()) => {}
                    Err(e) => {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(3);
                    }
                }
            }
            ExitCode::from(report::exit_code(&rep) as u8)
        }
    }
}
