use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use perturba::cli::{
    self, CliError, ConfigFile, GridScale, Preset, SweepMode, SweepSpec, CONFIG_ENV_VAR,
};
use perturba::hyperfine::{self, HyperfineConfig, HyperfineEngine};

/// Exact, improved and traditional transition probabilities for hydrogen
/// hyperfine levels in a magnetic field.
#[derive(Parser, Debug)]
#[command(name = "perturba", version)]
struct Cli {
    /// key = value file with mu_e, delta_nu_h, planck_h, elementary_charge, b_field
    #[arg(long, global = true, env = CONFIG_ENV_VAR)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the three normalized curves on a grid and write CSV.
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First grid times where each curve deviates from the exact one.
    Report {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
    },
    /// Print exact and improved energies with the correction terms.
    Levels {
        /// Field in T (defaults to the config value, then 1e-3).
        #[arg(long)]
        b_field: Option<f64>,
    },
    /// List the named plotting windows.
    Presets,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Start from a named window (see `perturba presets`).
    #[arg(long)]
    preset: Option<String>,
    /// time or field
    #[arg(long)]
    mode: Option<String>,
    /// Field in T for time sweeps, time in s for field sweeps.
    #[arg(long)]
    fixed: Option<f64>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    /// linear or log
    #[arg(long)]
    scale: Option<String>,
}

impl GridArgs {
    fn resolve(&self, file: &ConfigFile) -> Result<SweepSpec, CliError> {
        let base = match &self.preset {
            Some(name) => Some(name.parse::<Preset>()?.spec(&file.constants)),
            None => None,
        };
        let mode = match (&self.mode, &base) {
            (Some(m), _) => m.parse()?,
            (None, Some(b)) => b.mode,
            (None, None) => SweepMode::Time,
        };
        let default_fixed = match mode {
            SweepMode::Time => file.b_field.unwrap_or(Preset::TIME_WINDOW_FIELD),
            SweepMode::Field => Preset::FIELD_WINDOW_TIME,
        };
        let missing = |what: &str| CliError::InvalidSpec(format!("--{what} is required without a preset"));
        let spec = SweepSpec {
            mode,
            fixed_value: self.fixed.or(base.map(|b| b.fixed_value)).unwrap_or(default_fixed),
            start: self.start.or(base.map(|b| b.start)).ok_or_else(|| missing("start"))?,
            stop: self.stop.or(base.map(|b| b.stop)).ok_or_else(|| missing("stop"))?,
            samples: self.samples.or(base.map(|b| b.samples)).unwrap_or(Preset::DEFAULT_SAMPLES),
            scale: match &self.scale {
                Some(s) => s.parse()?,
                None => base.map(|b| b.scale).unwrap_or(GridScale::Linear),
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn load(path: &Option<PathBuf>) -> Result<ConfigFile, CliError> {
    match path {
        Some(p) => cli::load_config(p),
        None => Ok(ConfigFile::default()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = load(&cli.config)?;
    let stdout = io::stdout();
    match cli.command {
        Command::Sweep { grid, out } => {
            let spec = grid.resolve(&file)?;
            let cfg = HyperfineConfig::new(file.constants, file.b_field.unwrap_or(0.0))?;
            let rows = cli::run_sweep(&spec, &cfg)?;
            match out {
                Some(path) => {
                    let bytes = cli::write_csv_file(&rows, &path)?;
                    eprintln!("wrote {} rows ({bytes} bytes) to {}", rows.len(), path.display());
                }
                None => {
                    cli::emit_csv(&rows, stdout.lock())?;
                }
            }
        }
        Command::Report { grid, threshold } => {
            let spec = grid.resolve(&file)?;
            let cfg = HyperfineConfig::new(file.constants, spec.fixed_value)?;
            let report = cli::divergence_report(&spec, &cfg, threshold)?;
            let mut out = stdout.lock();
            writeln!(out, "field_T,threshold,t_traditional_s,t_improved_s")?;
            writeln!(
                out,
                "{},{},{},{}",
                cli::format_number(spec.fixed_value),
                cli::format_number(threshold),
                cli::format_number(report.t_traditional),
                cli::format_number(report.t_improved)
            )?;
        }
        Command::Levels { b_field } => {
            let b = b_field.or(file.b_field).unwrap_or(Preset::TIME_WINDOW_FIELD);
            let cfg = HyperfineConfig::new(file.constants, b)?;
            let engine = HyperfineEngine::new(&cfg)?;
            let exact = hyperfine::exact_eigensystem_closed_form(&cfg);
            let mut out = stdout.lock();
            writeln!(out, "# B = {b} T, W = {:.11e} eV, mu_e*B = {:.11e} eV", cfg.w(), cfg.zeeman())?;
            writeln!(out, "level,diagonal_eV,G2_eV,G3_eV,G4_eV,improved_eV,exact_eV")?;
            for level in 0..4 {
                let [g2, g3, g4] = engine.spectrum().g_terms()[level];
                writeln!(
                    out,
                    "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    level + 1,
                    engine.redivided().diagonal()[level],
                    g2,
                    g3,
                    g4,
                    engine.spectrum().energies()[level],
                    exact.energies[level]
                )?;
            }
        }
        Command::Presets => {
            let mut out = stdout.lock();
            writeln!(out, "name,mode,fixed,start,stop,samples")?;
            for p in Preset::ALL {
                let s = p.spec(&file.constants);
                writeln!(out, "{},{},{},{:.16e},{:.16e},{}", p.name(), s.mode, s.fixed_value, s.start, s.stop, s.samples)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
