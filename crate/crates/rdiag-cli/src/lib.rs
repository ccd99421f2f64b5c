//! Thin command-line adapter over `rdiag-core`: argument parsing, JSON/CSV
//! emission, and exit-code mapping. No numeric logic lives here.
//!
//! Exit codes: 0 success, 2 validation failure, 3 resource-guard trip.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use rdiag_core::cumulants::{self, CumulantSpec, MomentSeq};
use rdiag_core::error::Error;
use rdiag_core::mehler::{self, DiscreteMeasure, JacobiCoeffs};
use rdiag_core::noncrossing;
use rdiag_core::normlab::{self, ScanConfig, ScanModel};
use rdiag_core::ratio::{rat_from_str, rat_to_string, Rat};
use rdiag_core::semigroup::{self, GeneratorWord};
use rdiag_core::strings::StarString;
use rdiag_core::bounds;

#[derive(Parser)]
#[command(name = "rdiag", version, about = "Workbench for R-diagonal dilation semigroups: non-crossing partition counts, free-cumulant moments, Mehler kernels, and ultracontractivity scans.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Count |NC(S)| and |NC2(S)| for a 1/* string.
    NcCount {
        #[arg(long)]
        string: String,
    },
    /// Enumerate NC(S) (or just its pairings) in canonical order.
    NcEnum {
        #[arg(long)]
        string: String,
        /// Restrict to pairings (NC2).
        #[arg(long)]
        pairings: bool,
    },
    /// Evaluate the R-diagonal moment phi(a^S) for a cumulant spec.
    Moment {
        /// `circular`, `haar`, inline `{kind,d}` JSON, or `@file`.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        string: String,
    },
    /// Exhaustively verify the NC2 bound sandwich up to a string length.
    BoundsVerify {
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate the Mehler kernel m_mu(r; x, y) exactly.
    MehlerKernel {
        /// `bernoulli`, `three-point:<a>:<lambda>`, inline `{"atoms":[..]}`, or `@file`.
        #[arg(long)]
        measure: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Markovianity report for a finite-support measure over an r grid.
    MarkovCheck {
        #[arg(long)]
        measure: String,
        /// Comma-separated rationals; default 1/10..9/10.
        #[arg(long)]
        r_grid: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Apply a semigroup extension to a generator word.
    SemigroupApply {
        /// e.g. "a1* a1 a1* a2 a2 a1*"
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = Mode::Generic)]
        mode: Mode,
        /// Symmetric normalized measure for the Markov extension:
        /// `semicircle`, `gaussian`, `{"moments":[..]}`, `{"atoms":[..]}`, or `@file`.
        #[arg(long)]
        measure: Option<String>,
    },
    /// Ultracontractivity scan: truncated psi norms and log-log slope fits.
    Scan {
        #[arg(long, value_enum, default_value_t = Model::Circular)]
        model: Model,
        /// Custom cumulant spec (JSON or @file); overrides --model with the
        /// spec's v statistic.
        #[arg(long)]
        spec: Option<String>,
        /// Even integer p; the float pipeline supports p = 4.
        #[arg(long, default_value_t = 4)]
        p: u32,
        #[arg(long, default_value_t = 0.005)]
        t_min: f64,
        #[arg(long, default_value_t = 0.05)]
        t_max: f64,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 40.0)]
        trunc: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Slope of sum n^q e^{-nt} on a log grid; target -(q+1).
    SumExp {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 0.002)]
        t_min: f64,
        #[arg(long, default_value_t = 0.02)]
        t_max: f64,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 40.0)]
        trunc: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Generic,
    Markov,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Circular,
    Haar,
}

/// Runs the CLI against explicit argv and output streams; returns the
/// process exit code. Identical argv yields byte-identical output.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    init_workers();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Resource(_) => 3,
                _ => 2,
            }
        }
    }
}

/// Worker count comes from RDIAG_THREADS when set; default is the
/// available parallelism. Result aggregation is ordered either way.
fn init_workers() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| {
        if let Some(n) = std::env::var("RDIAG_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
        {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    });
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> rdiag_core::Result<()> {
    match cmd {
        Command::NcCount { string } => {
            let s = StarString::parse(&string)?;
            guard_len(&s)?;
            let nc2 = noncrossing::count_nc2(&s);
            let nc = noncrossing::count_nc_alternating(&s);
            emit(out, serde_json::json!({"nc": count_json(&nc), "nc2": count_json(&nc2)}));
        }
        Command::NcEnum { string, pairings } => {
            let s = StarString::parse(&string)?;
            let parts = if pairings {
                noncrossing::enumerate_nc2(&s)?
            } else {
                noncrossing::enumerate_nc_alternating(&s)?
            };
            let rendered: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
            emit(out, serde_json::json!({"count": rendered.len(), "partitions": rendered}));
        }
        Command::Moment { spec, string } => {
            let spec = parse_spec(&spec)?;
            let s = StarString::parse(&string)?;
            let m = cumulants::rdiag_moment(&spec, &s)?;
            emit(out, serde_json::json!({"moment": rat_to_string(&m)}));
        }
        Command::BoundsVerify { max_len, format } => {
            let reports = bounds::verify_bounds(max_len)?;
            match format {
                Format::Csv => {
                    write_str(out, &bounds::reports_to_csv(&reports));
                }
                Format::Json => {
                    let rows: Vec<serde_json::Value> = reports
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "string": r.string.format(),
                                "n": r.half_length,
                                "r": r.runs,
                                "i": r.min_block,
                                "h": r.height,
                                "count_nc2": count_json(&r.count_nc2),
                                "count_nc": count_json(&r.count_nc),
                                "lower": count_json(&r.lower),
                                "upper_height": count_json(&r.upper_height),
                                "upper_length": rat_to_string(&r.upper_length),
                                "pass": r.pass(),
                            })
                        })
                        .collect();
                    let all_pass = reports.iter().all(|r| r.pass());
                    emit(out, serde_json::json!({"all_pass": all_pass, "rows": rows}));
                }
            }
        }
        Command::MehlerKernel { measure, r, x, y } => {
            let mu = parse_measure(&measure)?.into_atoms()?;
            let value = mehler::mehler_eval(&mu, &rat_from_str(&r)?, &rat_from_str(&x)?, &rat_from_str(&y)?)?;
            emit(out, serde_json::json!({"value": rat_to_string(&value)}));
        }
        Command::MarkovCheck { measure, r_grid, format } => {
            let mu = parse_measure(&measure)?.into_atoms()?;
            let grid = match r_grid {
                Some(g) => g
                    .split(',')
                    .map(|t| rat_from_str(t.trim()))
                    .collect::<rdiag_core::Result<Vec<_>>>()?,
                None => (1..=9).map(|k| Rat::new(k.into(), 10.into())).collect(),
            };
            let report = mehler::markov_check(&mu, &grid)?;
            match format {
                Format::Csv => write_str(out, &report.to_csv()),
                Format::Json => {
                    let rows: Vec<serde_json::Value> = report
                        .rows
                        .iter()
                        .map(|row| {
                            serde_json::json!({
                                "r": rat_to_string(&row.r),
                                "min_value": rat_to_string(&row.min_value),
                                "markovian": row.markovian,
                                "positivity_preserving": row.positivity_preserving,
                                "l1_contractive": row.l1_contractive,
                                "linf_contractive": row.linf_contractive,
                                "trace_preserving": row.trace_preserving,
                            })
                        })
                        .collect();
                    emit(out, serde_json::json!({"markovian": report.all_markovian(), "rows": rows}));
                }
            }
        }
        Command::SemigroupApply { word, mode, measure } => {
            let w = GeneratorWord::parse(&word)?;
            let combination = match mode {
                Mode::Generic => semigroup::generic_dt(&w),
                Mode::Markov => {
                    let arg = measure.ok_or_else(|| {
                        Error::domain("--measure is required for the markov extension")
                    })?;
                    let needed = 2 * w.len().max(1);
                    let moments = parse_measure(&arg)?.into_moments(needed)?;
                    let gens: BTreeMap<usize, MomentSeq> = w
                        .letters()
                        .iter()
                        .map(|&(g, _)| (g, moments.clone()))
                        .collect();
                    semigroup::markov_tt(&w, &gens)?
                }
            };
            emit(out, combination.to_json());
        }
        Command::Scan { model, spec, p, t_min, t_max, points, trunc, format } => {
            if p != 4 {
                return Err(Error::domain(
                    "the float scan pipeline evaluates 4-norms; use --p 4",
                ));
            }
            let grid = normlab::geometric_grid(t_min, t_max, points)?;
            let model = match spec {
                Some(arg) => {
                    let spec = parse_spec(&arg)?;
                    let v = cumulants::v_stat(&spec)?;
                    ScanModel::Custom {
                        v: v.to_f64().ok_or_else(|| Error::domain("v does not fit in f64"))?,
                    }
                }
                None => match model {
                    Model::Circular => ScanModel::Circular,
                    Model::Haar => ScanModel::Haar,
                },
            };
            let cfg = ScanConfig::new(grid, trunc, model)?;
            let report = normlab::ultracontractive_scan(&cfg)?;
            match format {
                Format::Csv => write_str(out, &normlab::scan_to_csv(&report)),
                Format::Json => {
                    let targets = normlab::expected_slopes(model);
                    let fits: Vec<serde_json::Value> = targets
                        .iter()
                        .map(|t| {
                            let fit = match t.name {
                                "norm4_4" => &report.fit_norm4,
                                "ratio_p4" => &report.fit_ratio_p4,
                                _ => &report.fit_ratio_inf,
                            };
                            serde_json::json!({
                                "name": t.name,
                                "target": t.target,
                                "slope": fit.slope,
                                "tolerance": t.tolerance,
                                "pass": (fit.slope - t.target).abs() <= t.tolerance,
                            })
                        })
                        .collect();
                    emit(
                        out,
                        serde_json::json!({
                            "model": model.name(),
                            "p": p,
                            "points": report.points.iter().map(|pt| serde_json::json!({
                                "t": pt.t,
                                "N": pt.n_trunc,
                                "norm2_sq": pt.norm2_sq,
                                "norm4_4": pt.norm4_4,
                                "ratio_p4": pt.ratio_p4,
                                "ratio_inf": pt.ratio_inf,
                            })).collect::<Vec<_>>(),
                            "fits": fits,
                        }),
                    );
                }
            }
        }
        Command::SumExp { q, t_min, t_max, points, trunc } => {
            let grid = normlab::geometric_grid(t_min, t_max, points)?;
            let fit = normlab::sum_exp_slope(q, &grid, trunc);
            let target = -(q as f64 + 1.0);
            emit(
                out,
                serde_json::json!({
                    "name": format!("sum_exp_q{q}"),
                    "target": target,
                    "slope": fit.slope,
                    "tolerance": 0.05,
                    "pass": (fit.slope - target).abs() <= 0.05,
                }),
            );
        }
    }
    Ok(())
}

fn guard_len(s: &StarString) -> rdiag_core::Result<()> {
    if s.total_length() > noncrossing::NC_S_MAX_LEN {
        return Err(Error::resource(format!(
            "string length {} exceeds the {} guard",
            s.total_length(),
            noncrossing::NC_S_MAX_LEN
        )));
    }
    Ok(())
}

fn count_json(n: &num_bigint::BigUint) -> serde_json::Value {
    match n.to_u64() {
        Some(v) => serde_json::json!(v),
        None => serde_json::json!(n.to_string()),
    }
}

fn emit(out: &mut dyn Write, value: serde_json::Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("valid json"));
}

fn write_str(out: &mut dyn Write, s: &str) {
    let _ = out.write_all(s.as_bytes());
}

fn read_arg_or_file(arg: &str) -> rdiag_core::Result<String> {
    if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("cannot read {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_spec(arg: &str) -> rdiag_core::Result<CumulantSpec> {
    match arg {
        "circular" => Ok(CumulantSpec::circular(12)),
        "haar" | "haar_unitary" => Ok(CumulantSpec::haar_unitary(12)),
        other => {
            let text = read_arg_or_file(other)?;
            let v: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::domain(format!("invalid spec JSON: {e}")))?;
            CumulantSpec::from_json(&v)
        }
    }
}

enum MeasureArg {
    Atoms(DiscreteMeasure),
    Moments(Vec<Rat>),
}

impl MeasureArg {
    fn into_atoms(self) -> rdiag_core::Result<DiscreteMeasure> {
        match self {
            MeasureArg::Atoms(m) => Ok(m),
            MeasureArg::Moments(_) => Err(Error::domain(
                "this command needs a finite-support measure (atoms)",
            )),
        }
    }

    fn into_moments(self, len: usize) -> rdiag_core::Result<MomentSeq> {
        match self {
            MeasureArg::Atoms(m) => m.moments(len),
            MeasureArg::Moments(values) => {
                if values.len() < len {
                    return Err(Error::domain(format!(
                        "measure supplies {} moments, needs {len}",
                        values.len()
                    )));
                }
                MomentSeq::new(values[..len].to_vec())
            }
        }
    }
}

fn parse_measure(arg: &str) -> rdiag_core::Result<MeasureArg> {
    if arg == "bernoulli" {
        return Ok(MeasureArg::Atoms(DiscreteMeasure::two_point(Rat::new(
            1.into(),
            1.into(),
        ))?));
    }
    if arg == "semicircle" {
        return Ok(MeasureArg::Moments(MomentSeq::semicircle(24).values().to_vec()));
    }
    if arg == "gaussian" {
        let b = JacobiCoeffs::new((1..=12).map(|k| Rat::new(k.into(), 1.into())).collect());
        return Ok(MeasureArg::Moments(
            mehler::moments_from_jacobi(&b, 24)?.values().to_vec(),
        ));
    }
    if let Some(rest) = arg.strip_prefix("three-point:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(Error::domain("expected three-point:<a>:<lambda>"));
        }
        return Ok(MeasureArg::Atoms(DiscreteMeasure::three_point(
            rat_from_str(parts[0])?,
            rat_from_str(parts[1])?,
        )?));
    }
    let text = read_arg_or_file(arg)?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::domain(format!("invalid measure JSON: {e}")))?;
    if v.get("atoms").is_some() {
        return Ok(MeasureArg::Atoms(DiscreteMeasure::from_json(&v)?));
    }
    if let Some(moments) = v.get("moments").and_then(|m| m.as_array()) {
        let values = moments
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| Error::domain("moments must be \"p/q\" strings"))
                    .and_then(rat_from_str)
            })
            .collect::<rdiag_core::Result<Vec<_>>>()?;
        return Ok(MeasureArg::Moments(values));
    }
    Err(Error::domain(
        "measure JSON needs either an \"atoms\" or a \"moments\" field",
    ))
}
