//! Convergence-study runner behind the `momspec` binary: configure a
//! problem, sweep orders for every enabled estimator, and emit a CSV
//! dataset of ground-state errors against a reference energy.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use num_rational::BigRational;
use thiserror::Error;

use crate::cmx_lt::{cmx_lt_estimate, CmxOrder};
use crate::gaussian_poly::{GaussianWidth, Polynomial, Potential};
use crate::krylov_solver::{
    build_pencil, bishop_roots, cmpa_coefficients, cmpa_roots, rrvm_eigenvalues, Method,
    SolverError, SpectralEstimate,
};
use crate::moment_engine::{compute_moments, MomentError, MomentTable, DEFAULT_MOMENT_CAP};
use crate::xprec::{BigReal, MIN_PRECISION};

/// Ground-state energy of `-d²/dx² + x⁸`, from a high-accuracy published
/// computation; used as the built-in reference for the x⁸ study.
pub const X8_GROUND_STATE: &str = "1.225820113800492191";

/// Even-parity spectrum of `-d²/dx² + x²`: analytic values `4k + 1`.
pub const HARMONIC_EVEN_STATES: [&str; 3] = ["1", "5", "9"];

/// Significant digits in the CSV `value` column.
pub const CSV_VALUE_DIGITS: usize = 30;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("--potential: {0}")]
    Potential(String),
    #[error("--width: {0}")]
    Width(String),
    #[error("--nmax: order must be in 1..={max} (moment cap), got {got}")]
    NMax { got: usize, max: usize },
    #[error("--cmx-nmax: order must be at most {max} (moment cap), got {got}")]
    CmxNMax { got: usize, max: usize },
    #[error("--precision: must be at least {MIN_PRECISION} bits, got {0}")]
    Precision(u32),
    #[error("--reference: {0}")]
    Reference(String),
    #[error("--methods: {0}")]
    Methods(String),
    #[error(transparent)]
    Usage(#[from] clap::Error),
}

#[derive(Debug, Error)]
pub enum StudyError {
    #[error(transparent)]
    Moments(#[from] MomentError),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Fully validated study configuration.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub potential: Potential,
    pub width: GaussianWidth,
    pub n_max: usize,
    pub cmx_n_max: usize,
    pub precision_bits: u32,
    pub reference_energy: Option<BigReal>,
    pub methods: Vec<Method>,
    pub out_path: Option<PathBuf>,
    pub dump_moments_path: Option<PathBuf>,
    pub plot_script_path: Option<PathBuf>,
}

/// One row of the convergence study.
#[derive(Debug, Clone)]
pub struct ConvergenceRecord {
    pub method: Method,
    pub order: usize,
    pub moments_used: usize,
    /// Ground-root estimate; absent when the solver failed at this order.
    pub value: Option<BigReal>,
    /// `log10 |value - reference|`; negative infinity when the error is
    /// exactly zero. Present iff a reference energy is configured.
    pub log10_abs_error: Option<f64>,
    pub flags: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "momspec",
    version,
    about = "Convergence studies for Hamiltonian-moment eigenvalue estimators"
)]
struct Cli {
    /// Potential V(x): shorthand "x^K" (K even) or even-power coefficients
    /// "c0,c2,c4,..." with exact rational entries
    #[arg(long)]
    potential: String,

    /// Gaussian width a of the seed exp(-a x^2), an exact rational like "8" or "1/2"
    #[arg(long)]
    width: String,

    /// Largest pencil order N for the RRVM/CMPA/BISHOP sweep
    #[arg(long, default_value_t = 12)]
    nmax: usize,

    /// Largest CMX-LT order n (default: the same moment budget as --nmax)
    #[arg(long)]
    cmx_nmax: Option<usize>,

    /// Working precision in bits
    #[arg(long, default_value_t = crate::DEFAULT_PRECISION)]
    precision: u32,

    /// Reference energy (decimal); overrides the built-in registry
    #[arg(long)]
    reference: Option<String>,

    /// Comma-separated subset of rrvm,cmpa,bishop,cmx_lt (default: all)
    #[arg(long)]
    methods: Option<String>,

    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write the reduced moment table (one "j<TAB>num/den" line per moment)
    #[arg(long)]
    dump_moments: Option<PathBuf>,

    /// Also write a gnuplot companion script for the CSV
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

/// Parse a rational in "p/q" or integer form.
fn rational_from_str(s: &str) -> Result<BigRational, String> {
    BigRational::from_str(s.trim()).map_err(|e| format!("{:?} is not a rational number ({})", s, e))
}

/// Accept "x^K" shorthand or an even-power coefficient list "c0,c2,c4,...".
pub fn parse_potential(s: &str) -> Result<Potential, String> {
    let s = s.trim();
    if let Some(power) = s.strip_prefix("x^") {
        let k: usize = power
            .parse()
            .map_err(|_| format!("{:?} is not a power of x", s))?;
        return Potential::monomial(k).map_err(|e| e.to_string());
    }
    let coeffs: Result<Vec<BigRational>, String> =
        s.split(',').map(rational_from_str).collect();
    let even = coeffs?;
    let mut full = Vec::with_capacity(2 * even.len());
    for c in even {
        full.push(c);
        full.push(BigRational::from_integer(0.into()));
    }
    Potential::new(Polynomial::new(full)).map_err(|e| e.to_string())
}

/// Built-in reference energies for known potentials; the ground state
/// first, excited even-parity states after where known.
pub fn builtin_references(potential: &Potential) -> Option<Vec<&'static str>> {
    if potential == &Potential::monomial(8).expect("even") {
        Some(vec![X8_GROUND_STATE])
    } else if potential == &Potential::monomial(2).expect("even") {
        Some(HARMONIC_EVEN_STATES.to_vec())
    } else {
        None
    }
}

/// Parse and validate CLI arguments into a study configuration.
pub fn parse_config<I, T>(args: I) -> Result<StudyConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;

    let potential = parse_potential(&cli.potential).map_err(ConfigError::Potential)?;
    let width_value = rational_from_str(&cli.width).map_err(ConfigError::Width)?;
    let width = GaussianWidth::new(width_value).map_err(|e| ConfigError::Width(e.to_string()))?;

    if cli.precision < MIN_PRECISION {
        return Err(ConfigError::Precision(cli.precision));
    }
    let n_cap = DEFAULT_MOMENT_CAP / 2;
    if cli.nmax < 1 || cli.nmax > n_cap {
        return Err(ConfigError::NMax {
            got: cli.nmax,
            max: n_cap,
        });
    }
    let cmx_cap = (DEFAULT_MOMENT_CAP - 1) / 2 - 1;
    let cmx_n_max = cli.cmx_nmax.unwrap_or(cli.nmax - 1);
    if cmx_n_max > cmx_cap {
        return Err(ConfigError::CmxNMax {
            got: cmx_n_max,
            max: cmx_cap,
        });
    }

    let methods = match &cli.methods {
        None => Method::ALL.to_vec(),
        Some(list) => {
            let mut chosen = Vec::new();
            for item in list.split(',') {
                let m: Method = item.trim().parse().map_err(ConfigError::Methods)?;
                if !chosen.contains(&m) {
                    chosen.push(m);
                }
            }
            if chosen.is_empty() {
                return Err(ConfigError::Methods("no methods selected".into()));
            }
            // canonical order keeps the CSV deterministic regardless of
            // how the flag was spelled
            Method::ALL
                .iter()
                .copied()
                .filter(|m| chosen.contains(m))
                .collect()
        }
    };

    let reference_energy = match &cli.reference {
        Some(text) => Some(
            BigReal::from_decimal_str(text, cli.precision)
                .map_err(|e| ConfigError::Reference(e.to_string()))?,
        ),
        None => builtin_references(&potential).map(|refs| {
            BigReal::from_decimal_str(refs[0], cli.precision)
                .expect("registry entries are valid decimals")
        }),
    };

    Ok(StudyConfig {
        potential,
        width,
        n_max: cli.nmax,
        cmx_n_max,
        precision_bits: cli.precision,
        reference_energy,
        methods,
        out_path: cli.out,
        dump_moments_path: cli.dump_moments,
        plot_script_path: cli.plot_script,
    })
}

fn estimate_record(
    config: &StudyConfig,
    order: usize,
    moments_used: usize,
    method: Method,
    outcome: Result<SpectralEstimate, String>,
) -> ConvergenceRecord {
    match outcome {
        Ok(est) => {
            let value = est.ground().cloned();
            let flags = if est.collapsed() {
                format!(
                    "collapse(rank={})",
                    est.rank_report.as_ref().map(|r| r.rank).unwrap_or(0)
                )
            } else {
                String::new()
            };
            let log10_abs_error = match (&value, &config.reference_energy) {
                (Some(v), Some(r)) => {
                    let diff = v - r;
                    Some(
                        diff.approx_log10_abs()
                            .unwrap_or(f64::NEG_INFINITY),
                    )
                }
                _ => None,
            };
            ConvergenceRecord {
                method,
                order,
                moments_used,
                value,
                log10_abs_error,
                flags,
            }
        }
        Err(flag) => ConvergenceRecord {
            method,
            order,
            moments_used,
            value: None,
            log10_abs_error: None,
            flags: flag,
        },
    }
}

fn solver_flag(err: &SolverError) -> String {
    match err {
        SolverError::InsufficientMoments { .. } => "error:insufficient_moments".into(),
        SolverError::SingularMomentMatrix(report) => {
            format!("error:singular_moment_matrix(rank={})", report.rank)
        }
        SolverError::RootCountMismatch { expected, found } => {
            format!("error:root_count_mismatch({}/{})", found, expected)
        }
        SolverError::Linalg(e) => format!("error:linalg({})", linalg_tag(e)),
    }
}

fn linalg_tag(e: &crate::xprec::LinalgError) -> &'static str {
    use crate::xprec::LinalgError::*;
    match e {
        IndefiniteMatrix { .. } => "indefinite_matrix",
        NonConvergence { .. } => "non_convergence",
        IntervalTooSmall => "interval_too_small",
    }
}

/// Compute the moment table once and sweep every enabled method and order.
/// Per-record solver failures become flag annotations, not aborts.
pub fn run_study(config: &StudyConfig) -> Result<Vec<ConvergenceRecord>, StudyError> {
    let table = compute_study_table(config)?;
    Ok(sweep_table(config, &table))
}

/// The moment table a study needs (also used for `--dump-moments`).
pub fn compute_study_table(config: &StudyConfig) -> Result<MomentTable, StudyError> {
    let mut top_index = 1;
    for m in &config.methods {
        let needed = match m {
            Method::CmxLt => 2 * config.cmx_n_max + 1,
            _ => 2 * config.n_max - 1,
        };
        top_index = top_index.max(needed);
    }
    Ok(compute_moments(&config.width, &config.potential, top_index)?)
}

/// Sweep every enabled method and order over a precomputed moment table.
pub fn sweep_table(config: &StudyConfig, table: &MomentTable) -> Vec<ConvergenceRecord> {
    let prec = config.precision_bits;
    let mut records = Vec::new();
    for &method in &config.methods {
        match method {
            Method::Rrvm => {
                for n in 1..=config.n_max {
                    let outcome = build_pencil(table, n, prec)
                        .and_then(|p| rrvm_eigenvalues(&p))
                        .map_err(|e| solver_flag(&e));
                    records.push(estimate_record(config, n, 2 * n, method, outcome));
                }
            }
            Method::Cmpa => {
                for n in 1..=config.n_max {
                    let outcome = cmpa_coefficients(table, n, prec)
                        .and_then(|c| cmpa_roots(&c))
                        .map_err(|e| solver_flag(&e));
                    records.push(estimate_record(config, n, 2 * n, method, outcome));
                }
            }
            Method::Bishop => {
                for n in 1..=config.n_max {
                    let outcome =
                        bishop_roots(table, n, prec).map_err(|e| solver_flag(&e));
                    records.push(estimate_record(config, n, 2 * n, method, outcome));
                }
            }
            Method::CmxLt => {
                for n in 0..=config.cmx_n_max {
                    let outcome = cmx_lt_estimate(table, CmxOrder(n), prec).map_err(|e| {
                        match e {
                            crate::cmx_lt::CmxError::SingularConnectedMatrix(r) => {
                                format!("error:singular_connected_matrix(rank={})", r.rank)
                            }
                            other => format!("error:{}", snake_tag(&other.to_string())),
                        }
                    });
                    records.push(estimate_record(config, n, 2 * n + 2, method, outcome));
                }
            }
        }
    }
    records.sort_by_key(|r| (r.method, r.moments_used, r.order));
    records
}

fn snake_tag(msg: &str) -> String {
    msg.split(' ').take(3).collect::<Vec<_>>().join("_")
}

/// Write records as CSV: header `method,order,moments,value,log10_abs_error,flags`,
/// values with 30 significant digits, deterministic row order.
pub fn emit_csv(records: &[ConvergenceRecord], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "method,order,moments,value,log10_abs_error,flags")?;
    for r in records {
        let value = r
            .value
            .as_ref()
            .map(|v| v.to_decimal(CSV_VALUE_DIGITS))
            .unwrap_or_default();
        let log10 = r
            .log10_abs_error
            .map(|e| format!("{:.6}", e))
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.method, r.order, r.moments_used, value, log10, r.flags
        )?;
    }
    Ok(())
}

pub fn emit_csv_to_path(records: &[ConvergenceRecord], path: &Path) -> Result<(), StudyError> {
    let mut file = std::fs::File::create(path).map_err(|e| StudyError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    emit_csv(records, &mut file).map_err(|e| StudyError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Companion gnuplot script plotting the error columns of the study CSV.
pub fn plot_script(csv_name: &str) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set xlabel \"number of moments M\"\n");
    s.push_str("set ylabel \"log10 |E_approx - E_exact|\"\n");
    s.push_str("set key top right\n");
    s.push_str(&format!(
        "plot '{}' every ::1 using (strcol(1) eq \"RRVM\" ? $3 : NaN):5 \
         with linespoints pt 7 title \"RRVM\", \\\n",
        csv_name
    ));
    s.push_str(&format!(
        "     '{}' every ::1 using (strcol(1) eq \"CMX_LT\" ? $3 : NaN):5 \
         with points pt 4 title \"CMX-LT\"\n",
        csv_name
    ));
    s
}
