use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use symadapt::config::{OutputFormat, RunConfig};
use symadapt::fermion::SpinOrbitalConvention;
use symadapt::mapping::MappingKind;
use symadapt::pipeline::{self, QubitSystem};
use symadapt::symmetry::{AdaptedOperator, Method, SymmetryKind};
use symadapt::verify::{self, SuiteOptions};
use symadapt::{Error, Result};

#[derive(Parser)]
#[command(name = "symadapt", version, about = "Symmetry-adapted qubit Hamiltonians from FCIDUMP integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map H, N and S^2 to qubits and write them as JSON.
    Build(Overrides),
    /// Build symmetry-adapted operators (the full grid unless --method is given).
    Adapt(Overrides),
    /// Labeled spectrum of H with one column per adapted operator.
    Spectra(Overrides),
    /// Run the randomized property suite.
    Verify(Overrides),
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// FCIDUMP integral file.
    #[arg(long)]
    fcidump: Option<PathBuf>,
    /// Bundled data set (lih_sto3g, h2o_631g) instead of --fcidump.
    #[arg(long)]
    fixture: Option<String>,
    /// jw, parity or bk (default jw).
    #[arg(long, value_parser = parse_mapping)]
    mapping: Option<MappingKind>,
    /// Spin-orbital ordering: interleaved or blocked.
    #[arg(long, value_parser = parse_ordering)]
    ordering: Option<SpinOrbitalConvention>,
    /// Pauli-coefficient prune threshold.
    #[arg(long)]
    threshold: Option<f64>,
    /// Penalty strength of the shift method, in hartree.
    #[arg(long)]
    mu: Option<f64>,
    /// number or spin.
    #[arg(long, value_parser = parse_symmetry)]
    symmetry: Option<SymmetryKind>,
    /// Electron count (number) or spin S (spin).
    #[arg(long)]
    target: Option<f64>,
    /// php, hp, shift, reflect, reflect-singlet or sos.
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,
    /// Add the nuclear repulsion to the Hamiltonian constant.
    #[arg(long)]
    include_vnn: bool,
    /// Largest qubit count for dense diagonalization.
    #[arg(long)]
    dense_limit: Option<usize>,
    /// Output file, or directory for multi-file outputs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or table.
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Random trials per property check.
    #[arg(long)]
    trials: Option<usize>,
    /// Seed of the property-suite RNG.
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_mapping(s: &str) -> std::result::Result<MappingKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ordering(s: &str) -> std::result::Result<SpinOrbitalConvention, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_symmetry(s: &str) -> std::result::Result<SymmetryKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Overrides {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.fcidump {
            cfg.fcidump = Some(v.clone());
            cfg.fixture = None;
        }
        if let Some(v) = &self.fixture {
            cfg.fixture = Some(v.clone());
            cfg.fcidump = None;
        }
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        take!(mapping, ordering, threshold, mu, symmetry, dense_limit, format, trials, seed);
        if self.target.is_some() {
            cfg.target = self.target;
        }
        if self.method.is_some() {
            cfg.method = self.method;
        }
        if self.include_vnn {
            cfg.include_vnn = true;
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, text)?;
    info!("wrote {}", path.display());
    Ok(())
}

/// Prints `text`, or writes it to `--out` when given.
fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn stamp(mut op: AdaptedOperator, cfg: &RunConfig) -> AdaptedOperator {
    op.provenance.run = Some(cfg.to_json_value());
    op
}

fn cmd_build(cfg: &RunConfig) -> Result<()> {
    let sys = QubitSystem::from_config(cfg)?;
    let summary = sys.summary_json();
    let run = cfg.to_json_value();
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir)?;
        for (name, op) in [("hamiltonian", &sys.hamiltonian), ("number", &sys.number), ("s2", &sys.s2)] {
            write_file(&dir.join(format!("{name}.json")), &pipeline::operator_document(name, op, &sys, Some(&run)))?;
        }
        write_file(&dir.join("summary.json"), &summary)?;
    }
    match cfg.format {
        OutputFormat::Json => print!("{summary}"),
        OutputFormat::Table => {
            let (h, n, s2) = sys.counts();
            println!("qubits {}  mapping {}", sys.n_qubits(), sys.mapping);
            println!("{:<12} {:>6}\n{:<12} {:>6}\n{:<12} {:>6}", "H", h, "N", n, "S^2", s2);
        }
    }
    Ok(())
}

fn cmd_adapt(cfg: &RunConfig) -> Result<()> {
    let sys = QubitSystem::from_config(cfg)?;
    match cfg.method {
        Some(method) => {
            let spec = sys.spec(cfg.symmetry, cfg.target)?;
            let op = stamp(sys.adapt(&spec, method, cfg.mu, cfg.dense_limit)?, cfg);
            match cfg.format {
                OutputFormat::Json => emit(cfg, &op.to_json()),
                OutputFormat::Table => emit(
                    cfg,
                    &format!(
                        "{} {}={} terms {}\n",
                        op.method,
                        spec.kind,
                        cfg.target.unwrap_or(spec.target),
                        op.term_count()
                    ),
                ),
            }
        }
        None => {
            let grid = pipeline::adaptation_grid(&sys, cfg.mu, cfg.dense_limit)?;
            if let Some(dir) = &cfg.out {
                std::fs::create_dir_all(dir)?;
                for e in &grid {
                    for op in e.operators() {
                        let file = dir.join(format!("{}_{}.json", e.row.name(), op.method.cli_name()));
                        write_file(&file, &stamp(op.clone(), cfg).to_json())?;
                    }
                }
                write_file(&dir.join("grid.json"), &pipeline::grid_json(&sys, &grid))?;
            }
            match cfg.format {
                OutputFormat::Json => print!("{}", pipeline::grid_json(&sys, &grid)),
                OutputFormat::Table => print!("{}", pipeline::grid_table(&grid)),
            }
            Ok(())
        }
    }
}

fn cmd_spectra(cfg: &RunConfig) -> Result<()> {
    let sys = QubitSystem::from_config(cfg)?;
    let spec = sys.spec(cfg.symmetry, cfg.target)?;
    let methods = match cfg.method {
        Some(m) => vec![m],
        None if spec.kind == SymmetryKind::Spin && spec.target == 0.0 => {
            vec![Method::LowdinPhp, Method::Shift, Method::ReflectionSinglet]
        }
        None => vec![Method::LowdinPhp, Method::Shift, Method::Reflection],
    };
    let report = pipeline::spectra(&sys, &spec, &methods, cfg.mu, cfg.dense_limit)?;
    match cfg.format {
        OutputFormat::Json => emit(cfg, &report.to_json()),
        OutputFormat::Table => emit(cfg, &report.to_table()),
    }
}

fn cmd_verify(cfg: &RunConfig) -> Result<()> {
    let checks = verify::run_suite(SuiteOptions {
        trials: cfg.trials,
        seed: cfg.seed,
        dense_limit: cfg.dense_limit,
    })?;
    match cfg.format {
        OutputFormat::Table => emit(cfg, &verify::suite_table(&checks))?,
        OutputFormat::Json => emit(cfg, &(serde_json::to_string_pretty(&checks)? + "\n"))?,
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Mismatch(format!("property checks failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let run = |o: &Overrides, f: fn(&RunConfig) -> Result<()>| o.resolve().and_then(|cfg| f(&cfg));
    let outcome = match &cli.command {
        Command::Build(o) => run(o, cmd_build),
        Command::Adapt(o) => run(o, cmd_adapt),
        Command::Spectra(o) => run(o, cmd_spectra),
        Command::Verify(o) => run(o, cmd_verify),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("symadapt: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
