//! Command-line surface: exact singularity invariants, symbolic identity
//! checks, and the numeric period fit, as text or JSON reports.
//!
//! Exit codes: 0 success, 1 verification or regression failure, 2 input
//! error, 3 resource cap exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cydegen::invariants::{
    alpha_bcov, euler_hypersurface, verify_derivative_classes, verify_koszul, verify_omega,
    yoshikawa_degree_hypersurface_family, yoshikawa_degree_isolated,
    yoshikawa_degree_kulikov_surface,
};
use cydegen::milnor::{milnor_number, parse_poly, MilnorError};
use cydegen::ncd::{quadratic_model, NCDError, NCDModel};
use cydegen::periodfit::{fit_asymptotics, read_csv, sample_legendre, write_csv, FitResult};
use cydegen::rat::{parse_rat, rat_int, rat_string, rat_to_f64, Rat};

/// Every default cap and tolerance the binary uses; each is overridable by
/// the flag of the same name.
mod defaults {
    /// Stabilization search cap for `milnor --degree-cap`.
    pub const DEGREE_CAP: u32 = 30;
    /// Identity range for `verify --n-max`.
    pub const VERIFY_N_MAX: u32 = 5;
    /// Hard upper bound accepted by `verify --n-max`.
    pub const VERIFY_HARD_CAP: u32 = 6;
    /// Grid ends for `fit legendre`; deep enough that the constant inside
    /// the period logarithm no longer biases the three-term fit.
    pub const FIT_S_MIN: f64 = 1e-120;
    pub const FIT_S_MAX: f64 = 1e-60;
    /// Sample count for `fit legendre -n`.
    pub const FIT_COUNT: usize = 40;
    /// Regression tolerance on alpha_hat against the model prediction.
    pub const FIT_ALPHA_TOL: f64 = 0.02;
    /// Regression tolerance on beta_hat against the model prediction.
    pub const FIT_BETA_TOL: f64 = 0.1;
}

const EXIT_OK: u8 = 0;
const EXIT_REGRESSION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cydegen",
    version,
    about = "Exact and numeric invariants of one-parameter degenerations"
)]
struct RunConfig {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Milnor number of an isolated hypersurface singularity germ.
    Milnor {
        /// The germ, e.g. "x^3 + y^5".
        poly: String,
        /// Comma-separated variable names, e.g. x,y.
        #[arg(short, long, value_delimiter = ',', required = true)]
        variables: Vec<String>,
        /// Give up if the colength has not stabilized below this degree.
        #[arg(long, default_value_t = defaults::DEGREE_CAP)]
        degree_cap: u32,
    },
    /// Log-canonical threshold and degeneration shape of a model document.
    Lct {
        /// Path to the normal-crossings model (JSON).
        model: PathBuf,
    },
    /// Euler number of a smooth degree-d hypersurface in projective N-space.
    Euler {
        /// Ambient projective dimension N.
        ambient_dim: u32,
        /// Hypersurface degree d.
        degree: u32,
    },
    /// Degree of the singularity class, by any of its three routes.
    Yoshikawa {
        #[command(subcommand)]
        route: YoshikawaRoute,
    },
    /// BCOV degeneration coefficient and its log-log companion.
    #[command(allow_negative_numbers = true)]
    AlphaBcov {
        /// Fiber dimension n >= 1.
        n: u32,
        /// Euler number of the general fiber.
        chi_general: i64,
        /// Euler number of the special fiber.
        chi_special: i64,
        /// Norm coefficient alpha in [0, 1), as "p/q" or an integer.
        alpha: String,
        /// Degeneracy index beta.
        beta: u32,
        /// Boundary correction integral, as "p/q" or an integer.
        b_correction: String,
    },
    /// Check the symbolic characteristic-class identities.
    Verify {
        /// Check n = 1 up to this value (at most 6).
        #[arg(long, default_value_t = defaults::VERIFY_N_MAX)]
        n_max: u32,
    },
    /// Sample the Legendre family and/or fit the degeneration shape.
    Fit {
        #[command(subcommand)]
        source: FitSource,
    },
}

#[derive(Subcommand)]
enum YoshikawaRoute {
    /// From the Milnor numbers of isolated critical points.
    Isolated {
        /// Fiber dimension n >= 1.
        #[arg(short)]
        n: u32,
        /// Comma-separated Milnor numbers, e.g. 1,1,2.
        #[arg(long, value_delimiter = ',')]
        mu: Vec<u64>,
    },
    /// From the vanishing-cycle count of a hypersurface family.
    #[command(allow_negative_numbers = true)]
    Hypersurface {
        /// Fiber dimension n >= 1.
        #[arg(short)]
        n: u32,
        /// chi(general fiber) - chi(special fiber).
        #[arg(long, allow_hyphen_values = true)]
        delta_chi: i64,
    },
    /// Kulikov surface family (fiber dimension 2).
    #[command(allow_negative_numbers = true)]
    Kulikov {
        /// chi(general fiber) - chi(special fiber).
        #[arg(long, allow_hyphen_values = true)]
        delta_chi: i64,
    },
}

#[derive(Subcommand)]
enum FitSource {
    /// AGM samples of the Legendre family, checked against the quadratic
    /// model prediction (alpha, beta) = (0, 1).
    Legendre {
        #[arg(long, default_value_t = defaults::FIT_S_MIN)]
        s_min: f64,
        #[arg(long, default_value_t = defaults::FIT_S_MAX)]
        s_max: f64,
        /// Number of log-spaced samples.
        #[arg(short = 'n', long, default_value_t = defaults::FIT_COUNT)]
        count: usize,
        /// Pass/fail tolerance on alpha_hat.
        #[arg(long, default_value_t = defaults::FIT_ALPHA_TOL)]
        alpha_tol: f64,
        /// Pass/fail tolerance on beta_hat.
        #[arg(long, default_value_t = defaults::FIT_BETA_TOL)]
        beta_tol: f64,
        /// Also write the sampled grid as CSV to this path.
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
    /// Fit samples read from a CSV file with header s,l2_norm,neglog.
    Csv { path: PathBuf },
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let code = match config.command {
        Command::Milnor {
            poly,
            variables,
            degree_cap,
        } => cmd_milnor(&poly, &variables, degree_cap, config.format),
        Command::Lct { model } => cmd_lct(&model, config.format),
        Command::Euler {
            ambient_dim,
            degree,
        } => cmd_euler(ambient_dim, degree, config.format),
        Command::Yoshikawa { route } => cmd_yoshikawa(&route, config.format),
        Command::AlphaBcov {
            n,
            chi_general,
            chi_special,
            alpha,
            beta,
            b_correction,
        } => cmd_alpha_bcov(
            n,
            chi_general,
            chi_special,
            &alpha,
            beta,
            &b_correction,
            config.format,
        ),
        Command::Verify { n_max } => cmd_verify(n_max, config.format),
        Command::Fit { source } => cmd_fit(&source, config.format),
    };
    ExitCode::from(code)
}

/// `p/q`, shortened to the integer when the denominator is one.
fn pretty_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        rat_string(r)
    }
}

fn fail_input(message: &str) -> u8 {
    eprintln!("error: {message}");
    EXIT_INPUT
}

fn cmd_milnor(poly: &str, variables: &[String], degree_cap: u32, format: Format) -> u8 {
    let vars: Vec<&str> = variables.iter().map(String::as_str).collect();
    let f = match parse_poly(poly, &vars) {
        Ok(f) => f,
        Err(e) => return fail_input(&e.to_string()),
    };
    match milnor_number(&f, degree_cap) {
        Ok(result) => {
            match format {
                Format::Text => {
                    println!("mu = {}", result.mu);
                    println!(
                        "stabilization degree = {} (d({}) = d({}))",
                        result.stabilization_degree,
                        result.stabilization_degree,
                        result.stabilization_degree + 1
                    );
                    let basis: Vec<String> = result
                        .monomial_basis
                        .iter()
                        .map(|e| f.monomial_string(e))
                        .collect();
                    println!("quotient basis = {}", basis.join(", "));
                }
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&result).unwrap());
                }
            }
            EXIT_OK
        }
        Err(MilnorError::SmoothGerm) => {
            match format {
                Format::Text => {
                    println!("mu = 0");
                    println!("the germ is smooth: a first partial is a unit at the origin");
                }
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "mu": 0,
                            "smooth_germ": true,
                        }))
                        .unwrap()
                    );
                }
            }
            EXIT_OK
        }
        Err(e @ MilnorError::CapExceeded { .. }) => {
            eprintln!("error: {e}");
            EXIT_RESOURCE
        }
        Err(e) => fail_input(&e.to_string()),
    }
}

fn cmd_lct(model_path: &PathBuf, format: Format) -> u8 {
    let text = match fs::read_to_string(model_path) {
        Ok(text) => text,
        Err(e) => return fail_input(&format!("cannot read {}: {e}", model_path.display())),
    };
    let model = match NCDModel::from_json(&text) {
        Ok(model) => model,
        Err(e) => return fail_input(&e.to_string()),
    };
    let report = match model.asymptotic_report() {
        Ok(report) => report,
        Err(NCDError::InvalidModel(violations)) => {
            eprintln!("error: the model document is invalid:");
            for v in violations {
                eprintln!("  - {v}");
            }
            return EXIT_INPUT;
        }
        Err(e) => return fail_input(&e.to_string()),
    };
    match format {
        Format::Text => {
            println!("lct = {}", pretty_rat(&report.lct));
            println!("alpha = {}", pretty_rat(&report.alpha));
            println!("beta = {}", report.beta);
            println!(
                "monodromy rotation = {} (eigenvalue exp(-2*pi*i * {}))",
                pretty_rat(&report.monodromy_rotation),
                pretty_rat(&report.monodromy_rotation)
            );
            println!("weight = {}", report.weight);
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
    }
    EXIT_OK
}

fn cmd_euler(ambient_dim: u32, degree: u32, format: Format) -> u8 {
    if ambient_dim < 1 || degree < 1 {
        return fail_input("ambient dimension and degree must both be at least 1");
    }
    let chi = euler_hypersurface(ambient_dim, degree);
    match format {
        Format::Text => println!("chi = {chi}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "ambient_dim": ambient_dim,
                "degree": degree,
                "chi": chi.to_string(),
            }))
            .unwrap()
        ),
    }
    EXIT_OK
}

fn cmd_yoshikawa(route: &YoshikawaRoute, format: Format) -> u8 {
    let (degree, description, fields) = match route {
        YoshikawaRoute::Isolated { n, mu } => {
            if *n < 1 {
                return fail_input("fiber dimension must be at least 1");
            }
            (
                yoshikawa_degree_isolated(*n, mu),
                format!("isolated route, n = {n}, mu = {mu:?}"),
                json!({"route": "isolated", "n": n, "mu": mu}),
            )
        }
        YoshikawaRoute::Hypersurface { n, delta_chi } => {
            if *n < 1 {
                return fail_input("fiber dimension must be at least 1");
            }
            (
                yoshikawa_degree_hypersurface_family(*n, *delta_chi),
                format!("hypersurface-family route, n = {n}, delta_chi = {delta_chi}"),
                json!({"route": "hypersurface", "n": n, "delta_chi": delta_chi}),
            )
        }
        YoshikawaRoute::Kulikov { delta_chi } => (
            yoshikawa_degree_kulikov_surface(*delta_chi),
            format!("Kulikov surface route, delta_chi = {delta_chi}"),
            json!({"route": "kulikov", "n": 2, "delta_chi": delta_chi}),
        ),
    };
    match format {
        Format::Text => {
            println!("degree = {} ({description})", pretty_rat(&degree));
        }
        Format::Json => {
            let mut report = fields;
            report["degree"] = json!(rat_string(&degree));
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
    }
    EXIT_OK
}

#[allow(clippy::too_many_arguments)]
fn cmd_alpha_bcov(
    n: u32,
    chi_general: i64,
    chi_special: i64,
    alpha_text: &str,
    beta: u32,
    b_correction_text: &str,
    format: Format,
) -> u8 {
    if n < 1 {
        return fail_input("fiber dimension must be at least 1");
    }
    let alpha = match parse_rat(alpha_text) {
        Ok(r) => r,
        Err(e) => return fail_input(&format!("alpha: {e}")),
    };
    let b_correction = match parse_rat(b_correction_text) {
        Ok(r) => r,
        Err(e) => return fail_input(&format!("b_correction: {e}")),
    };
    if alpha < rat_int(0) || alpha >= rat_int(1) {
        return fail_input("alpha must lie in [0, 1)");
    }
    let report = alpha_bcov(n, chi_general, chi_special, &alpha, beta, &b_correction);
    match format {
        Format::Text => {
            println!("alpha_bcov = {}", pretty_rat(&report.alpha_bcov));
            println!(
                "loglog coefficient = {}",
                pretty_rat(&report.loglog_coefficient)
            );
            println!(
                "log of the BCOV norm = {} * log|s|^2 + {} * log(-log|s|^2) + O(1)",
                pretty_rat(&report.alpha_bcov),
                pretty_rat(&report.loglog_coefficient)
            );
            if let Some(note) = &report.note {
                eprintln!("warning: {note}");
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
    }
    EXIT_OK
}

/// An identity check: display name and the library verifier.
type IdentityCheck = (&'static str, fn(u32) -> bool);

fn cmd_verify(n_max: u32, format: Format) -> u8 {
    if !(1..=defaults::VERIFY_HARD_CAP).contains(&n_max) {
        return fail_input(&format!(
            "--n-max must lie in 1..={}",
            defaults::VERIFY_HARD_CAP
        ));
    }
    // One thread per n; each runs its three identities in order.
    let per_n: Vec<Vec<(&str, bool, f64)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (1..=n_max)
            .map(|n| {
                scope.spawn(move || {
                    let checks: [IdentityCheck; 3] = [
                        ("koszul", verify_koszul),
                        ("derivative classes", verify_derivative_classes),
                        ("omega", verify_omega),
                    ];
                    checks
                        .into_iter()
                        .map(|(name, run)| {
                            let start = Instant::now();
                            let ok = run(n);
                            (name, ok, start.elapsed().as_secs_f64())
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut first_failure: Option<(u32, &str)> = None;
    for (i, results) in per_n.iter().enumerate() {
        let n = i as u32 + 1;
        for (name, ok, _) in results {
            if !ok && first_failure.is_none() {
                first_failure = Some((n, name));
            }
        }
    }

    match format {
        Format::Text => {
            for (i, results) in per_n.iter().enumerate() {
                let line: Vec<String> = results
                    .iter()
                    .map(|(name, ok, secs)| {
                        format!("{name} {} ({secs:.3} s)", if *ok { "ok" } else { "FAILED" })
                    })
                    .collect();
                println!("n = {}: {}", i + 1, line.join(", "));
            }
            match first_failure {
                None => println!("all identities verified for n = 1..={n_max}"),
                Some((n, name)) => eprintln!("error: identity `{name}` failed at n = {n}"),
            }
        }
        Format::Json => {
            let results: Vec<_> = per_n
                .iter()
                .enumerate()
                .flat_map(|(i, results)| {
                    results.iter().map(move |(name, ok, secs)| {
                        json!({"n": i as u32 + 1, "identity": name, "ok": ok, "seconds": secs})
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "n_max": n_max,
                    "results": results,
                    "all_ok": first_failure.is_none(),
                }))
                .unwrap()
            );
        }
    }
    if first_failure.is_some() {
        EXIT_REGRESSION
    } else {
        EXIT_OK
    }
}

fn print_fit_text(fit: &FitResult) {
    println!("alpha_hat = {:+.6}", fit.alpha_hat);
    println!("beta_hat = {:.6}", fit.beta_hat);
    println!("const_hat = {:.6}", fit.const_hat);
    println!(
        "residual = {:.3e}, condition = {:.3e}",
        fit.residual_norm, fit.condition_estimate
    );
}

fn cmd_fit(source: &FitSource, format: Format) -> u8 {
    match source {
        FitSource::Legendre {
            s_min,
            s_max,
            count,
            alpha_tol,
            beta_tol,
            csv_out,
        } => {
            if !(s_min.is_finite()
                && s_max.is_finite()
                && *s_min > 0.0
                && s_min < s_max
                && *s_max < 0.5)
            {
                return fail_input("the grid needs 0 < s_min < s_max < 1/2");
            }
            if *count < 4 {
                return fail_input("need at least 4 samples to fit 3 coefficients");
            }
            if !(alpha_tol.is_finite()
                && beta_tol.is_finite()
                && *alpha_tol > 0.0
                && *beta_tol > 0.0)
            {
                return fail_input("tolerances must be positive");
            }
            let samples = match sample_legendre(*s_min, *s_max, *count) {
                Ok(samples) => samples,
                Err(e) => return fail_input(&e.to_string()),
            };
            if let Some(path) = csv_out {
                let file = match fs::File::create(path) {
                    Ok(file) => file,
                    Err(e) => return fail_input(&format!("cannot write {}: {e}", path.display())),
                };
                if let Err(e) = write_csv(&samples, file) {
                    return fail_input(&e.to_string());
                }
            }
            let data: Vec<(f64, f64)> = samples.iter().map(|p| (p.s, -p.l2_norm.ln())).collect();
            let fit = match fit_asymptotics(&data) {
                Ok(fit) => fit,
                Err(e) => return fail_input(&e.to_string()),
            };

            let prediction = quadratic_model(1, 1)
                .asymptotic_report()
                .expect("the quadratic model is always valid");
            let alpha_predicted = rat_to_f64(&prediction.alpha);
            let beta_predicted = f64::from(prediction.beta);
            let within = (fit.alpha_hat - alpha_predicted).abs() <= *alpha_tol
                && (fit.beta_hat - beta_predicted).abs() <= *beta_tol;

            match format {
                Format::Text => {
                    println!("sampled {count} points on [{s_min:e}, {s_max:e}]");
                    print_fit_text(&fit);
                    println!(
                        "model prediction: alpha = {}, beta = {}",
                        pretty_rat(&prediction.alpha),
                        prediction.beta
                    );
                    if within {
                        println!("PASS: within ({alpha_tol}, {beta_tol}) of the prediction");
                    } else {
                        println!("FAIL: outside ({alpha_tol}, {beta_tol}) of the prediction");
                    }
                }
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "source": "legendre",
                            "s_min": s_min,
                            "s_max": s_max,
                            "count": count,
                            "fit": fit,
                            "prediction": {
                                "alpha": rat_string(&prediction.alpha),
                                "beta": prediction.beta,
                            },
                            "tolerance": {
                                "alpha": alpha_tol,
                                "beta": beta_tol,
                            },
                            "within_tolerance": within,
                        }))
                        .unwrap()
                    );
                }
            }
            if within {
                EXIT_OK
            } else {
                EXIT_REGRESSION
            }
        }
        FitSource::Csv { path } => {
            let file = match fs::File::open(path) {
                Ok(file) => file,
                Err(e) => return fail_input(&format!("cannot read {}: {e}", path.display())),
            };
            let rows = match read_csv(file) {
                Ok(rows) => rows,
                Err(e) => return fail_input(&e.to_string()),
            };
            let data: Vec<(f64, f64)> = rows.iter().map(|&(s, _, neglog)| (s, neglog)).collect();
            let fit = match fit_asymptotics(&data) {
                Ok(fit) => fit,
                Err(e) => return fail_input(&e.to_string()),
            };
            match format {
                Format::Text => {
                    println!("fitted {} samples from {}", rows.len(), path.display());
                    print_fit_text(&fit);
                }
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "source": "csv",
                            "path": path.display().to_string(),
                            "count": rows.len(),
                            "fit": fit,
                        }))
                        .unwrap()
                    );
                }
            }
            EXIT_OK
        }
    }
}
