//! Command-line driver: orbital-integral verification suites, two-sided
//! trace-identity evaluation, equidistribution tables, and fixture
//! generation. Machine reports are JSON (schema 1) with an embedded run
//! manifest; the equidistribution table is CSV.
//!
//! Exit codes: 0 = all checks passed, 1 = a numeric check failed,
//! 2 = input error.

use adtrace::equid::{convergence_report, MomentPoly};
use adtrace::geomside::{geometric_side, TestInput, TraceConfig};
use adtrace::localfactors::SymLaurentPoly;
use adtrace::specside::{
    load_fixture_dir, spectral_constant, spectral_side, write_level1_fixture, NewformData,
    SpectralMode,
};
use adtrace::verify::{run_verification, OrbitalCase, VerifyOpts};
use adtrace::TruncationPolicy;
use clap::{Parser, Subcommand};
use num_complex::Complex64 as C;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "adtrace", version, about = "trace-identity verification engine")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compare every closed-form local orbital integral against its
    /// brute-force oracle on random in-strip parameter draws.
    VerifyOrbital {
        /// one of hyp-arch, hyp-generic, hyp-level, hyp-s, ell-arch,
        /// ell-generic, ell-dyadic5, ell-level, ell-s (default: all nine)
        #[arg(long)]
        case: Option<String>,
        /// draws per case
        #[arg(long, default_value_t = 20)]
        draws: usize,
        /// p-adic refinement depth
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// archimedean quadrature budget (integrand evaluations)
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// pass threshold for the finite-place cases (normalized absolute)
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        /// pass threshold for the archimedean cases (relative)
        #[arg(long, default_value_t = 1e-6)]
        eps_arch: f64,
        /// JSON report path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the geometric and spectral sides independently and report
    /// the residual of the identity.
    Trace {
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long, default_value_t = 12)]
        weight: u32,
        /// comma-separated odd primes of S (empty for none)
        #[arg(long, default_value = "")]
        s: String,
        /// per-prime test function: sigma0, sigma1, ... (same at each S prime)
        #[arg(long, default_value = "sigma1")]
        alpha: String,
        /// raw resolvent parameter (real part) instead of a test function
        #[arg(long)]
        raw_s: Option<f64>,
        /// deformation parameter z (real part)
        #[arg(long, default_value_t = 0.5)]
        z: f64,
        /// imaginary part of z
        #[arg(long, default_value_t = 0.0)]
        z_im: f64,
        /// elliptic height bound
        #[arg(long, default_value_t = 80.0)]
        height: f64,
        /// newform fixture directory (internal level-one data when omitted)
        #[arg(long, env = "ADTRACE_DATA")]
        data: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// residual tolerance for the exit code
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Emit the equidistribution moment table (CSV).
    Equid {
        /// comma-separated levels
        #[arg(long, default_value = "1")]
        levels: String,
        #[arg(long, default_value_t = 12)]
        weight: u32,
        /// comma-separated z grid in [0, 1]
        #[arg(long, default_value = "0.5,1.0")]
        z_grid: String,
        /// comma-separated S primes
        #[arg(long, default_value = "")]
        s: String,
        /// newform fixture directory
        #[arg(long, env = "ADTRACE_DATA")]
        data: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the internal level-one newform fixtures.
    GenFixtures {
        /// comma-separated weights among 12,16,18,20,22
        #[arg(long, default_value = "12,16,18,20,22")]
        weights: String,
        /// eigenvalue bound (a_p for p <= bound)
        #[arg(long, default_value_t = 200)]
        bound: u64,
        /// output directory
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

#[derive(Serialize)]
struct RunManifest {
    schema: u32,
    command: String,
    tool_version: String,
    config: serde_json::Value,
    input_digests: Vec<(String, String)>,
    wall_time_ms: u128,
}

fn manifest(
    command: &str,
    config: serde_json::Value,
    inputs: &[(String, String)],
    t0: Instant,
) -> RunManifest {
    RunManifest {
        schema: 1,
        command: command.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config,
        input_digests: inputs.to_vec(),
        wall_time_ms: t0.elapsed().as_millis(),
    }
}

fn digest_dir(dir: &PathBuf) -> Vec<(String, String)> {
    let mut out = Vec::new();
    if let Ok(rd) = std::fs::read_dir(dir) {
        let mut paths: Vec<_> = rd.filter_map(|e| e.ok()).map(|e| e.path()).collect();
        paths.sort();
        for p in paths {
            if let Ok(bytes) = std::fs::read(&p) {
                let mut h = Sha256::new();
                h.update(&bytes);
                out.push((
                    p.file_name().unwrap().to_string_lossy().to_string(),
                    hex::encode(h.finalize()),
                ));
            }
        }
    }
    out
}

fn parse_primes(s: &str) -> Result<Vec<u64>, String> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| format!("bad prime {x:?}: {e}")))
        .collect()
}

fn parse_sigma(name: &str) -> Result<SymLaurentPoly, String> {
    let name = name.trim();
    if let Some(n) = name.strip_prefix("sigma") {
        let n: u32 = n.parse().map_err(|e| format!("bad test function {name:?}: {e}"))?;
        return Ok(SymLaurentPoly::sigma(n));
    }
    Err(format!("unknown test function {name:?} (expected sigmaN)"))
}

fn emit(out: Option<PathBuf>, text: String) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() {
    let code = match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn run() -> Result<i32, String> {
    let cli = Cli::parse();
    let t0 = Instant::now();
    match cli.command {
        Cmd::VerifyOrbital { case, draws, depth, budget, eps, eps_arch, out } => {
            let selector = match &case {
                None => None,
                Some(name) => Some(
                    OrbitalCase::parse(name)
                        .ok_or_else(|| format!("invalid case selector {name:?}"))?,
                ),
            };
            let opts = VerifyOpts {
                draws,
                depth,
                budget,
                eps_finite: eps,
                eps_arch,
                ..Default::default()
            };
            let (rows, all_pass) = run_verification(selector, &opts).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct Report {
                manifest: RunManifest,
                rows: Vec<adtrace::verify::SampleRow>,
                all_pass: bool,
                max_abs_diff: f64,
            }
            let max_abs_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
            let report = Report {
                manifest: manifest(
                    "verify-orbital",
                    serde_json::json!({
                        "case": case, "draws": draws, "depth": depth,
                        "budget": budget, "eps": eps, "eps_arch": eps_arch
                    }),
                    &[],
                    t0,
                ),
                rows,
                all_pass,
                max_abs_diff,
            };
            emit(out, serde_json::to_string_pretty(&report).unwrap()).map_err(|e| e.to_string())?;
            Ok(if all_pass { 0 } else { 1 })
        }
        Cmd::Trace { level, weight, s, alpha, raw_s, z, z_im, height, data, out, tol } => {
            let s_primes = parse_primes(&s)?;
            let zc = C::new(z, z_im);
            let test = match raw_s {
                Some(sr) => {
                    TestInput::RawS(s_primes.iter().map(|&p| (p, C::new(sr, 0.0))).collect())
                }
                None => {
                    let poly = parse_sigma(&alpha)?;
                    TestInput::Alpha(s_primes.iter().map(|&p| (p, poly.clone())).collect())
                }
            };
            let cfg = TraceConfig {
                weight,
                level,
                test,
                z: zc,
                policy: TruncationPolicy { height, ..Default::default() },
            };
            let (forms, digests) = load_forms(level, weight, &data)?;
            let geom = geometric_side(&cfg).map_err(|e| e.to_string())?;
            let (lhs, mode_name) = match raw_s {
                Some(sr) => {
                    let mode = SpectralMode::Resolvent {
                        s: s_primes.iter().map(|&p| (p, C::new(sr, 0.0))).collect(),
                    };
                    let spec =
                        spectral_side(level, weight, &mode, zc, &forms).map_err(|e| e.to_string())?;
                    (C::new(spectral_constant(weight, level), 0.0) * spec, "resolvent")
                }
                None => {
                    let poly = parse_sigma(&alpha)?;
                    let mode = SpectralMode::TestFunction {
                        alpha: s_primes.iter().map(|&p| (p, poly.clone())).collect(),
                    };
                    let spec =
                        spectral_side(level, weight, &mode, zc, &forms).map_err(|e| e.to_string())?;
                    let sign = if s_primes.len() % 2 == 0 { 1.0 } else { -1.0 };
                    (C::new(sign * spectral_constant(weight, level), 0.0) * spec, "test-function")
                }
            };
            let residual = (geom.total - lhs).norm();
            #[derive(Serialize)]
            struct Report {
                manifest: RunManifest,
                mode: String,
                geometric: (f64, f64),
                j_unip: (f64, f64),
                j_hyp: (f64, f64),
                j_ell: (f64, f64),
                certified_tail: f64,
                spectral: (f64, f64),
                residual: f64,
                class_count: usize,
                pass: bool,
            }
            let pass = residual <= tol + geom.j_ell_tail + geom.j_hyp_tail;
            let report = Report {
                manifest: manifest(
                    "trace",
                    serde_json::json!({
                        "level": level, "weight": weight, "s": s, "alpha": alpha,
                        "raw_s": raw_s, "z": z, "z_im": z_im, "height": height, "tol": tol
                    }),
                    &digests,
                    t0,
                ),
                mode: mode_name.into(),
                geometric: (geom.total.re, geom.total.im),
                j_unip: (geom.j_unip.re, geom.j_unip.im),
                j_hyp: (geom.j_hyp.re, geom.j_hyp.im),
                j_ell: (geom.j_ell.re, geom.j_ell.im),
                certified_tail: geom.j_ell_tail + geom.j_hyp_tail,
                spectral: (lhs.re, lhs.im),
                residual,
                class_count: geom.class_count,
                pass,
            };
            emit(out, serde_json::to_string_pretty(&report).unwrap()).map_err(|e| e.to_string())?;
            Ok(if pass { 0 } else { 1 })
        }
        Cmd::Equid { levels, weight, z_grid, s, data, out } => {
            let levels: Vec<u64> = if levels.trim().is_empty() {
                vec![]
            } else {
                levels
                    .split(',')
                    .map(|x| x.trim().parse().map_err(|e| format!("bad level: {e}")))
                    .collect::<Result<_, String>>()?
            };
            let zs: Vec<f64> = z_grid
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse().map_err(|e| format!("bad z: {e}")))
                .collect::<Result<_, String>>()?;
            let s_primes = parse_primes(&s)?;
            let mut load_errors: Vec<(String, String)> = Vec::new();
            let all_forms = match &data {
                Some(dir) => {
                    let (forms, errs) = load_fixture_dir(dir).map_err(|e| e.to_string())?;
                    load_errors = errs;
                    forms
                }
                None => {
                    let mut forms = Vec::new();
                    if levels.contains(&1) {
                        forms.push(
                            adtrace::specside::level1_newform(weight, 420)
                                .map_err(|e| e.to_string())?,
                        );
                    }
                    forms
                }
            };
            let f = MomentPoly::constant_one(s_primes.len());
            let rows = convergence_report(&levels, weight, &zs, &f, &s_primes, &|lvl| {
                let matching: Vec<NewformData> = all_forms
                    .iter()
                    .filter(|g| lvl % g.level == 0 && g.weight == weight)
                    .cloned()
                    .collect();
                if matching.is_empty() {
                    None
                } else {
                    Some(matching)
                }
            })
            .map_err(|e| e.to_string())?;
            let mut csv = String::from("N,z,empirical,limit,discrepancy,forms_used\n");
            for r in &rows {
                csv.push_str(&format!(
                    "{},{},{:.12e},{:.12e},{:.12e},{}\n",
                    r.level, r.z, r.empirical, r.limit, r.discrepancy, r.forms_used
                ));
            }
            for (file, err) in &load_errors {
                eprintln!("warning: skipped {file}: {err}");
            }
            emit(out, csv).map_err(|e| e.to_string())?;
            Ok(if load_errors.is_empty() { 0 } else { 2 })
        }
        Cmd::GenFixtures { weights, bound, dir } => {
            let ws: Vec<u32> = weights
                .split(',')
                .map(|x| x.trim().parse().map_err(|e| format!("bad weight: {e}")))
                .collect::<Result<_, String>>()?;
            std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
            for w in ws {
                let path = write_level1_fixture(&dir, w, bound).map_err(|e| e.to_string())?;
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
    }
}

/// Load the spectral data: fixtures from a directory, or the internal
/// level-one eigenforms when none is given (level must then be 1).
fn load_forms(
    level: u64,
    weight: u32,
    data: &Option<PathBuf>,
) -> Result<(Vec<NewformData>, Vec<(String, String)>), String> {
    match data {
        Some(dir) => {
            let (forms, errs) = load_fixture_dir(dir).map_err(|e| e.to_string())?;
            for (f, e) in &errs {
                eprintln!("warning: skipped fixture {f}: {e}");
            }
            let matching: Vec<NewformData> = forms
                .into_iter()
                .filter(|f| level % f.level == 0 && f.weight == weight)
                .collect();
            Ok((matching, digest_dir(dir)))
        }
        None => {
            if level != 1 {
                return Err(format!(
                    "level {level} needs a newform fixture directory (--data); only level 1 is internal"
                ));
            }
            let f = adtrace::specside::level1_newform(weight, 420).map_err(|e| e.to_string())?;
            Ok((vec![f], vec![]))
        }
    }
}
