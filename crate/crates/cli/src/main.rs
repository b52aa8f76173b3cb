//! `lame`: rotor spectra, ladder tables and invariant runs from the command line.

mod output;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lame_core::harmonics::{total_energy, Multiplet, SpheroconalHarmonic};
use lame_core::ladder::{LadderDecomposition, LadderSet, Operator};
use lame_core::oracle::check_decomposition;
use lame_core::verify::{self, Fault};
use lame_core::{AsymmetryConfigF64, Error};

use output::{ConfigRecord, LadderRecord, StateRecord};

/// Largest oracle residual accepted under `--verify`.
const ORACLE_TOL: f64 = 1e-6;
/// Grid points per coordinate for oracle checks.
const ORACLE_POINTS: usize = 40;
const DEFAULT_VERIFY_E1: f64 = 0.9;

#[derive(Parser)]
#[command(name = "lame", version, about = "Spheroconal harmonics and asymmetric-rotor spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced energies 2E* of every state up to `--lmax`.
    Spectrum(SpectrumArgs),
    /// Ladder-operator decompositions.
    Ladder(LadderArgs),
    /// Invariant suite over every multiplet up to `--lmax`.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct Input {
    /// Largest asymmetry parameter, in (1/2, 1).
    #[arg(long, conflicts_with = "moments", allow_hyphen_values = true)]
    e1: Option<f64>,
    /// Principal moments of inertia I1 <= I2 <= I3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    moments: Option<Vec<f64>>,
}

#[derive(Args, Clone)]
struct Emit {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 2)]
    lmax: u32,
    #[command(flatten)]
    emit: Emit,
}

#[derive(Args)]
struct LadderArgs {
    #[command(flatten)]
    input: Input,
    /// Operators to apply (default: all six).
    #[arg(long, value_delimiter = ',')]
    op: Vec<Operator>,
    /// Single source multiplet.
    #[arg(long, conflicts_with = "lmax")]
    l: Option<u32>,
    /// Every source multiplet up to this `l`.
    #[arg(long)]
    lmax: Option<u32>,
    /// Check each decomposition against finite differences.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
    #[command(flatten)]
    emit: Emit,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 6)]
    lmax: u32,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
    #[command(flatten)]
    emit: Emit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    SignFlip,
}

/// Validated run parameters shared by every subcommand.
struct RunConfig {
    config: AsymmetryConfigF64,
    moments: Option<[f64; 3]>,
    lmax: u32,
    operators: Vec<Operator>,
    format: Format,
    out: Option<PathBuf>,
    verify: bool,
}

enum Failure {
    Invariant(String),
    Params(String),
    Oracle(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invariant(_) => 1,
            Failure::Params(_) => 2,
            Failure::Oracle(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invariant(m) | Failure::Params(m) | Failure::Oracle(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SphericalTop { .. }
            | Error::SymmetricTop { .. }
            | Error::InvalidOrdering(_)
            | Error::OutOfRange { .. }
            | Error::InvalidArgument(_) => Failure::Params(e.to_string()),
            _ => Failure::Invariant(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Params(format!("cannot write output: {e}"))
    }
}

fn resolve(input: &Input, default_e1: Option<f64>) -> Result<(AsymmetryConfigF64, Option<[f64; 3]>), Failure> {
    match (&input.moments, input.e1.or(default_e1)) {
        (Some(m), _) => {
            if m.len() != 3 {
                return Err(Failure::Params(format!("--moments takes three values I1,I2,I3, got {}", m.len())));
            }
            let config = AsymmetryConfigF64::from_moments(m[0], m[1], m[2])?;
            Ok((config, Some([m[0], m[1], m[2]])))
        }
        (None, Some(e1)) => Ok((AsymmetryConfigF64::from_e1(e1)?, None)),
        (None, None) => Err(Failure::Params("one of --e1 or --moments is required".into())),
    }
}

impl RunConfig {
    fn new(input: &Input, default_e1: Option<f64>, lmax: u32, emit: &Emit) -> Result<Self, Failure> {
        let (config, moments) = resolve(input, default_e1)?;
        Ok(Self {
            config,
            moments,
            lmax,
            operators: Operator::ALL.to_vec(),
            format: emit.format,
            out: emit.out.clone(),
            verify: false,
        })
    }

    fn record(&self) -> ConfigRecord {
        ConfigRecord::new(&self.config, self.moments, self.lmax)
    }

    fn sink(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn species_order(s: &SpheroconalHarmonic<f64>) -> u8 {
    let l = s.label;
    (l.x() as u8) << 2 | (l.y() as u8) << 1 | l.z() as u8
}

fn state_records(run: &RunConfig, multiplets: &[Multiplet<f64>]) -> Result<Vec<StateRecord>, Failure> {
    let mut states: Vec<&SpheroconalHarmonic<f64>> = multiplets.iter().flat_map(|m| &m.states).collect();
    states.sort_by(|a, b| {
        a.ell
            .cmp(&b.ell)
            .then(a.estar2.total_cmp(&b.estar2))
            .then(species_order(a).cmp(&species_order(b)))
    });
    states
        .into_iter()
        .map(|s| {
            let energy = match run.moments {
                Some(_) => Some(total_energy(s, &run.config)?),
                None => None,
            };
            Ok(StateRecord::new(s, energy))
        })
        .collect()
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), Failure> {
    let run = RunConfig::new(&args.input, None, args.lmax, &args.emit)?;
    let multiplets = (0..=run.lmax)
        .map(|l| Multiplet::build(l, &run.config))
        .collect::<Result<Vec<_>, _>>()?;
    let states = state_records(&run, &multiplets)?;
    let mut w = run.sink()?;
    match run.format {
        Format::Json => output::write_json(&mut w, &run.record(), &states, &[])?,
        Format::Csv => output::write_states_csv(&mut w, &states, run.moments.is_some())?,
    }
    w.flush()?;
    Ok(())
}

fn corrupt(d: &mut LadderDecomposition<f64>) {
    if let Some(t) = d.terms.first_mut() {
        t.coefficient = -t.coefficient;
    }
}

fn cmd_ladder(args: &LadderArgs) -> Result<(), Failure> {
    let (lo, hi) = match (args.l, args.lmax) {
        (Some(l), _) => (l, l),
        (None, Some(lmax)) => (0, lmax),
        (None, None) => return Err(Failure::Params("one of --l or --lmax is required".into())),
    };
    let mut run = RunConfig::new(&args.input, None, hi, &args.emit)?;
    if !args.op.is_empty() {
        run.operators = args.op.clone();
    }
    run.verify = args.verify;
    let set = LadderSet::build(&run.config, hi)?;
    let states = state_records(&run, &set.multiplets[lo as usize..=hi as usize])?;

    let mut records = Vec::new();
    let mut worst: Option<(f64, String)> = None;
    for &op in &run.operators {
        for ell in lo..=hi {
            for s in &set.multiplets[ell as usize].states {
                let mut d = set.apply(op, &s.id())?;
                if args.inject_fault.is_some() {
                    corrupt(&mut d);
                }
                let residual = if run.verify {
                    let r = check_decomposition(&set, &d, ORACLE_POINTS)?.worst();
                    if worst.as_ref().map_or(true, |(w, _)| r > *w) {
                        worst = Some((r, format!("{op} on {}", s.id())));
                    }
                    Some(r)
                } else {
                    None
                };
                records.push(LadderRecord::new(&d, residual));
            }
        }
    }

    let mut w = run.sink()?;
    match run.format {
        Format::Json => output::write_json(&mut w, &run.record(), &states, &records)?,
        Format::Csv => output::write_ladders_csv(&mut w, &records, run.verify)?,
    }
    w.flush()?;
    match worst {
        Some((r, at)) if r > ORACLE_TOL => Err(Failure::Oracle(format!(
            "oracle residual {r:e} exceeds {ORACLE_TOL:e} ({at})"
        ))),
        _ => Ok(()),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let run = RunConfig::new(&args.input, Some(DEFAULT_VERIFY_E1), args.lmax, &args.emit)?;
    let fault = args.inject_fault.map(|FaultArg::SignFlip| Fault::SignFlip);
    let report = verify::run(&run.config, run.lmax, fault)?;
    let mut w = run.sink()?;
    match run.format {
        Format::Json => output::write_report_json(&mut w, &run.record(), &report)?,
        Format::Csv => output::write_report_csv(&mut w, &report)?,
    }
    w.flush()?;
    let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("invariant failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Ladder(a) => cmd_ladder(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lame: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
