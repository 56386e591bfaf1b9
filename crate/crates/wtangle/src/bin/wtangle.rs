//! Command-line front end: measure states, emit separability certificates,
//! run the randomized audit, and produce CSV sweeps.
//!
//! Exit codes: 0 success, 1 audit found violations, 2 usage error (clap),
//! 3 invalid input, 4 the separability hypothesis does not hold for the
//! given state (nonzero coherences or impossible vacuum coupling).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use wtangle::error::{Error, Result};
use wtangle::linalg::{DEFAULT_CAP, DEFAULT_TOL};
use wtangle::measures::{
    closed_form_one_tangle, closed_form_pair_negativity, closed_form_pi_tangle, closed_form_sum_pi,
    closed_form_sum_two_tangles, MeasureReport, Z_LARGE_N_PI, Z_LARGE_N_TWO_TANGLE, Z_THREE_QUBIT,
};
use wtangle::sampling::{sample_state, SamplerConfig, SamplerKind};
use wtangle::separability::{audit_theorem, certify};
use wtangle::states::{build_asymmetric, build_symmetric, WSubspaceState};
use wtangle::sweep::{
    dephase_scan, fig1_grid, fig2_n_scan, DephaseConfig, Fig1Config, Fig2Config, SweepTable,
};

#[derive(Parser)]
#[command(
    name = "wtangle",
    version,
    about = "Entanglement measures and separability certificates for W-class qubit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pairwise and per-pivot measures for one state, as JSON.
    Measure(MeasureArgs),
    /// Explicit product decomposition of a zero-coherence state, as JSON.
    Certify(CertifyArgs),
    /// Randomized stress test of the separability construction.
    Audit(AuditArgs),
    /// CSV parameter sweeps.
    Sweep(SweepArgs),
    /// Closed-form reference values for the uniform state, unnormalized.
    ClosedForm(ClosedFormArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ZPresetArg {
    /// 3/4: pair sum reaches 1 on the three-qubit family.
    ThreeQubit,
    /// 1/2: pair sum approaches 1 as n grows.
    LargeNTwoTangle,
    /// 1/4: pivot sum of pi-tangles approaches 1 as n grows.
    LargeNPi,
}

impl ZPresetArg {
    fn value(self) -> f64 {
        match self {
            ZPresetArg::ThreeQubit => Z_THREE_QUBIT,
            ZPresetArg::LargeNTwoTangle => Z_LARGE_N_TWO_TANGLE,
            ZPresetArg::LargeNPi => Z_LARGE_N_PI,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerKindArg {
    PureSymmetric,
    PureAsymmetric,
    MixedGeneral,
    MixedZeroCoherence,
}

impl From<SamplerKindArg> for SamplerKind {
    fn from(k: SamplerKindArg) -> SamplerKind {
        match k {
            SamplerKindArg::PureSymmetric => SamplerKind::PureSymmetric,
            SamplerKindArg::PureAsymmetric => SamplerKind::PureAsymmetric,
            SamplerKindArg::MixedGeneral => SamplerKind::MixedGeneral,
            SamplerKindArg::MixedZeroCoherence => SamplerKind::MixedZeroCoherence,
        }
    }
}

#[derive(clap::Args)]
struct MeasureArgs {
    /// Qubit count (required with --symmetric-a, optional with --asymmetric-k).
    #[arg(long)]
    n: Option<usize>,
    /// Symmetric family: vacuum amplitude as "re" or "re,im".
    #[arg(long, value_name = "RE[,IM]", conflicts_with_all = ["asymmetric_k", "input"])]
    symmetric_a: Option<String>,
    /// Pure state with the given real excitation amplitudes, comma-separated.
    #[arg(long, value_name = "K1,K2,...", conflicts_with = "input")]
    asymmetric_k: Option<String>,
    /// State JSON file (covers mixed states and complex amplitudes).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Normalization preset applied to both sums.
    #[arg(long, value_enum, conflicts_with = "z")]
    z_preset: Option<ZPresetArg>,
    /// Explicit normalization constant applied to both sums (default 1).
    #[arg(long)]
    z: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Largest n for which mixed-state quantities may use the 2^n route.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CertifyArgs {
    /// State JSON file to certify.
    #[arg(long, required_unless_present = "sample", conflicts_with = "sample")]
    input: Option<PathBuf>,
    /// Draw a zero-coherence state instead of reading one.
    #[arg(long)]
    sample: bool,
    /// Qubit count for --sample.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Seed for --sample.
    #[arg(long, env = "WTANGLE_SEED", default_value_t = 0)]
    seed: u64,
    /// Coherence tolerance for the zero-coherence hypothesis.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct AuditArgs {
    /// Qubit counts to audit.
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 5, 6])]
    ns: Vec<usize>,
    /// Samples per qubit count.
    #[arg(long, default_value_t = 2500)]
    samples: usize,
    #[arg(long, env = "WTANGLE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[command(subcommand)]
    kind: SweepKind,
}

#[derive(Subcommand)]
enum SweepKind {
    /// Pair-sum landscape over two real amplitudes of the three-qubit family.
    Fig1Grid {
        /// Points per axis over [0, 1].
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Normalization of the pair sum (default: the three-qubit preset).
        #[arg(long, default_value_t = Z_THREE_QUBIT)]
        z: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value = "fig1_grid.csv")]
        out: PathBuf,
        /// Also write a gnuplot companion script next to the CSV.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Uniform-state scan over n: pi-tangle and both normalized sums.
    Fig2NScan {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value = "fig2_n_scan.csv")]
        out: PathBuf,
        #[arg(long)]
        gnuplot: bool,
    },
    /// Entanglement decay of one sampled state under dephasing.
    DephaseScan {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SamplerKindArg::PureSymmetric)]
        kind: SamplerKindArg,
        #[arg(long, env = "WTANGLE_SEED", default_value_t = 0)]
        seed: u64,
        /// Strength values over [0, 1].
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Normalization applied to both sums.
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value = "dephase_scan.csv")]
        out: PathBuf,
        #[arg(long)]
        gnuplot: bool,
    },
}

#[derive(clap::Args)]
struct ClosedFormArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = |_| Error::InvalidConfig {
        reason: format!("cannot parse '{text}' as a complex amplitude (expected RE or RE,IM)"),
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.trim().parse().map_err(bad)?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.trim().parse().map_err(bad)?,
            im.trim().parse().map_err(bad)?,
        )),
        _ => Err(Error::InvalidConfig {
            reason: format!("expected RE or RE,IM, got '{text}'"),
        }),
    }
}

fn parse_reals(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|_| Error::InvalidConfig {
                reason: format!("cannot parse '{t}' as a real amplitude"),
            })
        })
        .collect()
}

fn load_state(path: &Path) -> Result<WSubspaceState> {
    let body =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    WSubspaceState::from_json(&body)
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{body}\n"))
            .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{body}") {
                Ok(()) => Ok(()),
                // The reader went away (e.g. piped into head); not our error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
                Err(e) => Err(Error::Io(e.to_string())),
            }
        }
    }
}

fn build_measure_state(args: &MeasureArgs) -> Result<WSubspaceState> {
    if let Some(path) = &args.input {
        return load_state(path);
    }
    if let Some(a_text) = &args.symmetric_a {
        let n = args.n.ok_or_else(|| Error::InvalidConfig {
            reason: "--symmetric-a requires --n".into(),
        })?;
        return build_symmetric(n, parse_complex(a_text)?);
    }
    if let Some(k_text) = &args.asymmetric_k {
        let k: Vec<Complex64> = parse_reals(k_text)?
            .into_iter()
            .map(|re| Complex64::new(re, 0.0))
            .collect();
        let n = args.n.unwrap_or(k.len());
        return build_asymmetric(n, k);
    }
    Err(Error::InvalidConfig {
        reason: "provide a state via --input, --symmetric-a, or --asymmetric-k".into(),
    })
}

fn run_measure(args: MeasureArgs) -> Result<i32> {
    let z = args
        .z_preset
        .map(ZPresetArg::value)
        .or(args.z)
        .unwrap_or(1.0);
    let state = build_measure_state(&args)?;
    let report = MeasureReport::from_subspace(&state, z, z, args.tol, args.cap)?;
    emit(
        &args.out,
        &serde_json::to_string_pretty(&report).map_err(Error::from)?,
    )?;
    Ok(0)
}

fn run_certify(args: CertifyArgs) -> Result<i32> {
    let state = if args.sample {
        sample_state(&SamplerConfig {
            kind: SamplerKind::MixedZeroCoherence,
            n: args.n,
            seed: args.seed,
        })?
    } else {
        load_state(args.input.as_deref().expect("clap enforces --input"))?
    };
    let cert = certify(&state, args.tol)?;
    emit(&args.out, &cert.to_json()?)?;
    Ok(0)
}

fn run_audit(args: AuditArgs) -> Result<i32> {
    let report = audit_theorem(&args.ns, args.samples, args.seed, args.tol)?;
    emit(
        &args.out,
        &serde_json::to_string_pretty(&report).map_err(Error::from)?,
    )?;
    eprintln!(
        "audit: {}/{} samples passed (max residual {:.2e})",
        report.passed, report.total, report.max_residual
    );
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn write_sweep(table: &SweepTable, out: &Path, gnuplot: bool, grid: bool) -> Result<()> {
    table.write_csv(out)?;
    if gnuplot {
        let csv_name = out
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_else(|| out.display().to_string());
        let gp_path = out.with_extension("gp");
        fs::write(&gp_path, table.gnuplot(&csv_name, grid))
            .map_err(|e| Error::Io(format!("{}: {e}", gp_path.display())))?;
    }
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<i32> {
    match args.kind {
        SweepKind::Fig1Grid {
            grid,
            z,
            tol,
            out,
            gnuplot,
        } => {
            let table = fig1_grid(&Fig1Config { grid, z, tol })?;
            write_sweep(&table, &out, gnuplot, true)?;
            eprintln!("wrote {} rows to {}", table.rows.len(), out.display());
        }
        SweepKind::Fig2NScan {
            n_min,
            n_max,
            tol,
            out,
            gnuplot,
        } => {
            let table = fig2_n_scan(&Fig2Config { n_min, n_max, tol })?;
            write_sweep(&table, &out, gnuplot, false)?;
            eprintln!("wrote {} rows to {}", table.rows.len(), out.display());
        }
        SweepKind::DephaseScan {
            n,
            kind,
            seed,
            steps,
            z,
            tol,
            cap,
            out,
            gnuplot,
        } => {
            let table = dephase_scan(&DephaseConfig {
                n,
                kind: kind.into(),
                seed,
                steps,
                z_two: z,
                z_pi: z,
                tol,
                cap,
            })?;
            write_sweep(&table, &out, gnuplot, false)?;
            eprintln!("wrote {} rows to {}", table.rows.len(), out.display());
        }
    }
    Ok(0)
}

fn run_closed_form(args: ClosedFormArgs) -> Result<i32> {
    let body = serde_json::json!({
        "n": args.n,
        "sum_two_tangles": closed_form_sum_two_tangles(args.n)?,
        "pair_negativity": closed_form_pair_negativity(args.n)?,
        "one_tangle": closed_form_one_tangle(args.n)?,
        "pi_tangle": closed_form_pi_tangle(args.n)?,
        "sum_pi_tangles": closed_form_sum_pi(args.n)?,
    });
    emit(
        &args.out,
        &serde_json::to_string_pretty(&body).map_err(Error::from)?,
    )?;
    Ok(0)
}

/// 4 when the zero-coherence hypothesis itself fails, 3 for anything else.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CoherencesNotZero { .. } | Error::SylvesterViolation { .. } => 4,
        _ => 3,
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measure(args) => run_measure(args),
        Command::Certify(args) => run_certify(args),
        Command::Audit(args) => run_audit(args),
        Command::Sweep(args) => run_sweep(args),
        Command::ClosedForm(args) => run_closed_form(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
