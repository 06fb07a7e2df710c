use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use dynwave_cli::config::{resolve, tokenize, Assignment};
use dynwave_cli::presets::run_all;
use dynwave_cli::{commands, emit_csv, CliError, Command, ExperimentResult, RunConfig};

/// Wave equations with dynamical boundary conditions: simulations, spectra
/// and verification presets.
#[derive(Parser, Debug)]
#[command(name = "dynwave", version)]
struct Cli {
    command: Command,
    /// key=value configuration file; `--key value` flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides as `--key value` or `--key=value`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
    overrides: Vec<String>,
}

fn overrides(args: &[String]) -> Result<(Vec<Assignment>, Option<PathBuf>), CliError> {
    let mut out = Vec::new();
    let mut config = None;
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let Some(flag) = arg.strip_prefix("--") else {
            return Err(CliError::Config(format!("expected --key, got '{arg}'")));
        };
        let (key, value) = match flag.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| CliError::Config(format!("--{flag} needs a value")))?;
                (flag.to_string(), v.clone())
            }
        };
        if key == "config" {
            config = Some(PathBuf::from(value));
        } else {
            out.push(Assignment { origin: format!("--{key}"), key, value });
        }
    }
    Ok((out, config))
}

fn load(cli: &Cli) -> Result<(RunConfig, Vec<Assignment>), CliError> {
    let (flags, late_config) = overrides(&cli.overrides)?;
    let mut all = Vec::new();
    if let Some(path) = late_config.as_ref().or(cli.config.as_ref()) {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        all = tokenize(&text)?;
        for a in &mut all {
            a.origin = format!("{}: {}", path.display(), a.origin);
        }
    }
    all.extend(flags.iter().cloned());
    all.push(Assignment { origin: "command line".into(), key: "command".into(), value: cli.command.to_string() });
    Ok((resolve(&all)?, flags))
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("DYNWAVE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("DYNWAVE_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

/// `dir/run.csv` → `dir/run.<tag>.csv`.
fn tagged(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}.{tag}.{ext}"),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn report(title: &str, result: &ExperimentResult) {
    println!("== {title}");
    print!("{}", result.summary());
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let (cfg, _) = load(cli)?;
    if cfg.command == Command::Verify && cfg.preset.is_none() {
        let mut all_pass = true;
        let mut worst: Option<CliError> = None;
        for (preset, pcfg, result) in run_all() {
            match result {
                Ok(r) => {
                    report(preset.name(), &r);
                    all_pass &= r.passed();
                    if let Some(out) = &cfg.output {
                        let mut pcfg = pcfg.clone();
                        let path = tagged(Path::new(out), preset.name());
                        pcfg.output = Some(path.display().to_string());
                        emit_csv(&r, &pcfg, &path)?;
                    }
                }
                Err(e) => {
                    println!("== {preset}\nERROR {e}");
                    if worst.as_ref().is_none_or(|w| e.exit_code() > w.exit_code()) {
                        worst = Some(e);
                    }
                }
            }
        }
        return match worst {
            Some(e) => Err(e),
            None => Ok(all_pass),
        };
    }
    let result = match (cfg.command, cfg.preset) {
        (Command::Verify, Some(p)) => dynwave_cli::run_preset(p, &cfg)?,
        _ => commands::run(&cfg)?,
    };
    let title = match cfg.preset {
        Some(p) => format!("{} ({p})", cfg.command),
        None => cfg.command.to_string(),
    };
    report(&title, &result);
    if let Some(out) = &cfg.output {
        emit_csv(&result, &cfg, Path::new(out))?;
    }
    Ok(result.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("dynwave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
