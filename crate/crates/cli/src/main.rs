use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand};
use plexcav::scenario::{compare_storage, run_to_dir, ScenarioConfig, BUILTINS};
use plexcav::Error;

/// Two plasmon-coupled quantum dots in photonic cavities: scenario runner.
///
/// Exit codes: 0 ok, 1 usage or I/O error, 2 configuration error, 3 numeric failure.
#[derive(Parser)]
#[command(name = "plexcav", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios and write <name>.csv and <name>.summary.toml.
    Run {
        /// Builtin scenario name or path to a TOML file.
        #[arg(required = true)]
        scenarios: Vec<String>,
        /// Override one config value, e.g. `--set system.g_mev=3`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Output directory (default: `output.dir` from the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of scenarios run at once.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// List builtin scenarios.
    List,
    /// Run a cavity and an open-geometry scenario and compare C at t*.
    CompareStorage {
        cavity: String,
        open: String,
        /// Comparison time in fs.
        #[arg(long)]
        t_star: f64,
        /// Override applied to both scenarios. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Parse and validate a scenario file, then print the resolved config.
    Validate { path: String },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } => 2,
        Error::Io(_) => 1,
        _ => 3,
    }
}

fn load(name: &str, overrides: &[String]) -> Result<ScenarioConfig, Error> {
    let mut cfg = ScenarioConfig::load(name)?;
    cfg.apply_overrides(overrides)?;
    Ok(cfg)
}

fn run_all(scenarios: &[String], overrides: &[String], out: Option<PathBuf>, jobs: usize) -> Result<(), Error> {
    let configs = scenarios.iter().map(|s| load(s, overrides)).collect::<Result<Vec<_>, _>>()?;
    let mut names: Vec<&str> = configs.iter().map(|c| c.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Config { key: "name".into(), msg: "scenarios in one invocation need distinct names".into() });
    }
    let next = AtomicUsize::new(0);
    let failures = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, configs.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cfg) = configs.get(i) else { break };
                let dir = out.clone().unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
                match run_to_dir(cfg, &dir) {
                    Ok((summary, path)) => {
                        println!("# {} -> {}", cfg.name, path.display());
                        print!("{}", summary.to_toml());
                    }
                    Err(e) => {
                        eprintln!("{}: {e}", cfg.name);
                        failures.lock().unwrap().push(e);
                    }
                }
            });
        }
    });
    match failures.into_inner().unwrap().into_iter().max_by_key(exit_code) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn execute(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Run { scenarios, overrides, out, jobs } => run_all(&scenarios, &overrides, out, jobs),
        Command::List => {
            for (name, desc) in BUILTINS {
                println!("{name:14} {desc}");
            }
            Ok(())
        }
        Command::CompareStorage { cavity, open, t_star, overrides } => {
            let c = compare_storage(&load(&cavity, &overrides)?, &load(&open, &overrides)?, t_star)?;
            println!("t_star_fs = {}\nc_cavity = {}\nc_open = {}\nratio = {}", c.t_star_fs, c.c_cavity, c.c_open, c.ratio);
            Ok(())
        }
        Command::Validate { path } => {
            let text = std::fs::read_to_string(&path)?;
            print!("{}", ScenarioConfig::from_toml(&text)?.to_toml());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
