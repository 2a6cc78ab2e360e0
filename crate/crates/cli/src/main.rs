use std::path::PathBuf;
use std::process::ExitCode;

use blochdress_cli::device::{self, DeviceKind};
use blochdress_cli::{config, plot, run, spectrum};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "blochdress", version, about = "Bloch oscillations of a light-dressed atom chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config and write the output bundle.
    Simulate {
        config: PathBuf,
        /// Output directory; defaults to `outputs.directory` or `out/<config stem>`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the sector-parallel integrator.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Power spectrum of one column of a frames.csv file.
    Spectrum {
        frames: PathBuf,
        #[arg(long, default_value = "mean_n")]
        column: String,
        /// Print every bin, not just the detected peaks.
        #[arg(long)]
        full: bool,
    },
    /// Write plot scripts for an output bundle.
    Plot { dir: PathBuf },
    /// Map physical device parameters to chain parameters.
    Device {
        kind: DeviceKind,
        params: PathBuf,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Parse and validate a config without running it.
    Validate { config: PathBuf },
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_NUMERIC: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { config, out, threads } => simulate(config, out, threads),
        Command::Spectrum { frames, column, full } => spectrum_cmd(frames, &column, full),
        Command::Plot { dir } => match plot::emit_plots(&dir) {
            Ok(plan) => {
                for s in &plan.scripts {
                    println!("{}", s.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_VALIDATION)
            }
        },
        Command::Device { kind, params, json } => match device::load_report(kind, &params) {
            Ok(report) => {
                print!("{}", device::render_text(&report));
                if let Some(path) = json {
                    let text = serde_json::to_string_pretty(&report).expect("report is plain JSON");
                    if let Err(e) = std::fs::write(&path, text + "\n") {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(EXIT_NUMERIC);
                    }
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_VALIDATION)
            }
        },
        Command::Validate { config } => match config::load(&config) {
            Ok(cfg) => {
                let c = &cfg.chain;
                println!("{}: ok", config.display());
                if !cfg.description.is_empty() {
                    println!("  {}", cfg.description);
                }
                println!(
                    "  N = {}, t_a = {}, t_b = {}, g0 = {:.6e}, omega_B = {}, n_max = {}",
                    c.n_sites, c.t_a.re, c.t_b.re, c.g0, c.omega_b, c.n_max
                );
                println!(
                    "  {} steps of dt = {:.6e} to t = {:.6e}, every {} steps sampled",
                    cfg.plan.steps(),
                    cfg.plan.effective_dt(),
                    cfg.plan.t_end,
                    cfg.plan.sample_stride
                );
                ExitCode::SUCCESS
            }
            Err(errors) => {
                eprintln!("{}: invalid\n{errors}", config.display());
                ExitCode::from(EXIT_VALIDATION)
            }
        },
    }
}

fn simulate(path: PathBuf, out: Option<PathBuf>, threads: Option<usize>) -> ExitCode {
    if let Some(k) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: cannot set up {k} threads: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    }
    let cfg = match config::load(&path) {
        Ok(c) => c,
        Err(errors) => {
            eprintln!("{}: invalid\n{errors}", path.display());
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let dir = out.or_else(|| cfg.outputs.directory.clone()).unwrap_or_else(|| {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
        PathBuf::from("out").join(stem)
    });
    log::info!("{} steps, writing to {}", cfg.plan.steps(), dir.display());
    match run::simulate(&cfg, Some(&dir)) {
        Ok(o) => {
            println!(
                "{} frames in {:.1} s, max norm drift {:.3e}, max sector drift {:.3e}",
                o.frames.len(),
                o.wall_time.as_secs_f64(),
                o.max_norm_drift,
                o.max_sector_drift
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn spectrum_cmd(path: PathBuf, column: &str, full: bool) -> ExitCode {
    let result = spectrum::read_column(&path, column).and_then(|(times, values)| {
        let dt = spectrum::uniform_spacing(&times)?;
        spectrum::spectrum(&values, dt)
    });
    match result {
        Ok(s) => {
            println!("# angular frequency bin {:.6e}, threshold {:.6e}", s.bin_width(), s.threshold);
            println!("frequency,power");
            if full {
                for (f, p) in s.frequencies.iter().zip(&s.power) {
                    println!("{f:.16e},{p:.16e}");
                }
            } else {
                for (f, p) in &s.peaks {
                    println!("{f:.16e},{p:.16e}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
