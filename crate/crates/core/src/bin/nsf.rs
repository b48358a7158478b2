use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use clap::error::ErrorKind;

use nsf_galerkin::exponents::classify;
use nsf_galerkin::io::{
    emit_reports, exit_code, parse_config, prepare_out_dir, summary_text, sweep, sweep_table, verify, RunManifest,
    Settings, SweepAxis, EXIT_INVARIANT, EXIT_OK, EXIT_USAGE,
};
use nsf_galerkin::solver::{run, Scenario};
use nsf_galerkin::Error;

#[derive(Parser)]
#[command(name = "nsf", version, about = "Galerkin simulator for heat-conducting power-law fluids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration and write reports.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overwrite a nonempty output directory.
        #[arg(long)]
        force: bool,
    },
    /// Print which notions of solution exist for a growth exponent.
    Classify {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// Run a Cartesian product of overrides in parallel.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// `key=v1,v2,...`; repeat for more axes.
        #[arg(long, required = true)]
        vary: Vec<String>,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite and fail on any violation.
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// steady, buoyant-blob, shear-decay or conduction.
    #[arg(long)]
    scenario: Option<Scenario>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Reconstruct the pressure and add it to field dumps.
    #[arg(long)]
    pressure: bool,
    /// Any config key, as `key=value`; repeatable.
    #[arg(long = "set")]
    set: Vec<String>,
}

impl RunArgs {
    fn settings(&self) -> Result<Settings, Error> {
        let mut s = match &self.config {
            Some(path) => parse_config(path)?,
            None => Settings::default(),
        };
        if let Some(sc) = self.scenario {
            s.run.scenario = sc;
        }
        let mut pairs: Vec<(String, String)> = Vec::new();
        let opt = |key: &str, v: Option<String>, pairs: &mut Vec<(String, String)>| {
            if let Some(v) = v {
                pairs.push((key.to_string(), v));
            }
        };
        opt("n", self.n.map(|v| v.to_string()), &mut pairs);
        opt("m", self.m.map(|v| v.to_string()), &mut pairs);
        opt("k", self.k.map(|v| v.to_string()), &mut pairs);
        opt("p", self.p.map(|v| v.to_string()), &mut pairs);
        opt("alpha", self.alpha.map(|v| v.to_string()), &mut pairs);
        opt("dt", self.dt.map(|v| v.to_string()), &mut pairs);
        opt("t_end", self.t_end.map(|v| v.to_string()), &mut pairs);
        opt("seed", self.seed.map(|v| v.to_string()), &mut pairs);
        if self.pressure {
            pairs.push(("pressure".into(), "true".into()));
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("--set expects key=value, got `{kv}`")))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        for (k, v) in pairs {
            s.set(&k, &v).map_err(|reason| Error::InvalidParameter { key: k.clone(), reason })?;
        }
        s.validate()?;
        Ok(s)
    }
}

fn simulate(args: &RunArgs, out: Option<PathBuf>, force: bool) -> Result<i32, Error> {
    let settings = args.settings()?;
    if let Some(dir) = &out {
        prepare_out_dir(dir, force)?;
    }
    let start = Instant::now();
    let (model, traj, report) = run(&settings.run, &settings.diagnostics)?;
    let elapsed = start.elapsed();
    match out {
        Some(dir) => {
            let manifest = RunManifest::new(&settings, &model);
            emit_reports(&dir, &manifest, &model, &traj, &report, Some(elapsed), true)?;
            eprintln!("wrote {}", dir.display());
        }
        None => print!("{}", summary_text(&report, &traj)),
    }
    Ok(EXIT_OK)
}

fn execute(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Simulate { run, out, force } => simulate(&run, out, force),
        Command::Classify { p, d } => {
            let c = classify(p, d)?;
            println!("{c}");
            Ok(EXIT_OK)
        }
        Command::Sweep { run, vary, out } => {
            let base = run.settings()?;
            let axes = vary.iter().map(|s| SweepAxis::parse(s)).collect::<Result<Vec<_>, _>>()?;
            let table = sweep_table(&sweep(&base, &axes));
            match out {
                Some(path) => std::fs::write(path, table)?,
                None => print!("{table}"),
            }
            Ok(EXIT_OK)
        }
        Command::Verify { run } => {
            let report = verify(&run.settings()?)?;
            for c in &report.checks {
                println!("{c}");
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_INVARIANT })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            return ExitCode::from(code as u8);
        }
    };
    let code = match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
