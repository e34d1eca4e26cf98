//! Command-line surface: evaluation tables, cross-route verification,
//! series/ODE pipelines, singularity lists and the nome-plane curve.
//!
//! Every output embeds its effective configuration in a header so reruns
//! with the same flags are byte-identical. Exit codes: 0 success,
//! 1 verification failure, 2 usage error, 3 numeric budget exhaustion.

use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

use crate::error::Error;
use crate::exact::{series_chid, ExactSeries};
use crate::form_factors::{ff_eval, ff_quad, FormFactorKey, Route};
use crate::ode::{cyclotomic_factors, guess_ode, ode_to_json, singular_points, verify_annihilation};
use crate::report::run_suite;
use crate::singularities::{density_report, diagonal_singularities, nickel_enumerate, qcurve};
use crate::susceptibility::{chid_closed, chid_quad};
use crate::Tolerances;

#[derive(Parser)]
#[command(
    name = "ising-chi",
    version,
    about = "Diagonal Ising form factors, correlations and susceptibility, cross-validated along independent routes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate diagonal form factors f^(n)_{N,N}(t) along selected routes
    Ff {
        /// particle number n
        #[arg(long)]
        n: u8,
        /// diagonal separation N
        #[arg(long = "N", visible_alias = "big-n")]
        big_n: u32,
        /// comma-separated t values in (0, 0.95]
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// comma-separated routes: quad, closed, hyp, theta
        #[arg(long, value_delimiter = ',', default_value = "quad,closed")]
        routes: Vec<String>,
        /// quadrature nodes per axis (defaults chosen per dimension)
        #[arg(long)]
        nodes: Option<usize>,
        /// target tolerance for quadrature refinement
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a named verification suite
    Verify {
        /// identities | routes | relations | decomposition | correlations |
        /// susceptibility | critical | singularities | all
        suite: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Diagonal susceptibility sectors
    Chid {
        #[command(subcommand)]
        cmd: ChidCommand,
    },
    /// Fit and inspect linear ODEs from exact series
    Ode {
        #[command(subcommand)]
        cmd: OdeCommand,
    },
    /// Singularity enumeration
    Sing {
        #[command(subcommand)]
        cmd: SingCommand,
    },
    /// Image of |k| = 1 in the nome plane
    Qcurve {
        /// number of uniform phi samples
        #[arg(long, default_value_t = 720)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum ChidCommand {
    /// Exact series of a sector (JSON)
    Series {
        /// sector index, 1..=3
        #[arg(long)]
        n: u8,
        /// truncation order
        #[arg(long, default_value_t = 40)]
        order: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate sectors along closed/quadrature routes
    Table {
        /// comma-separated sector indices
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        n: Vec<u8>,
        /// comma-separated t values
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum OdeCommand {
    /// Guess the smallest annihilating ODE of a JSON series
    Guess {
        /// path to a series JSON file ({variable, order, coefficients})
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[arg(long, default_value_t = 10)]
        min_margin: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum SingCommand {
    /// Bulk unit-circle singularities of sector n
    Nickel {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Diagonal-sector singularities on |t| = 1
    Diagonal {
        #[arg(long)]
        sector: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cumulative angle counts and maximal gaps up to a sector
    Density {
        #[arg(long)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// 17-significant-digit float formatting used in all emitted tables.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_out(output: &OutputArgs, content: &str) -> std::io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}

fn config_header(pairs: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        s.push_str(&format!("# {k} = {v}\n"));
    }
    s
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::BudgetExhausted(_) | Error::Precision(_) => 3,
        _ => 2,
    }
}

fn run_ff(
    n: u8,
    big_n: u32,
    ts: &[f64],
    routes: &[String],
    nodes: Option<usize>,
    tol_override: Option<f64>,
    output: &OutputArgs,
) -> Result<i32, Error> {
    let tol = Tolerances::default();
    let key = FormFactorKey::new(n, big_n);
    let parsed: Vec<Route> = routes
        .iter()
        .map(|r| r.parse::<Route>())
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for &t in ts {
        for &route in &parsed {
            let (value, err) = match route {
                Route::Quadrature => {
                    let spec = nodes.map(|npts| {
                        crate::quad::QuadratureSpec::new(
                            n as usize,
                            npts,
                            crate::quad::Substitution::Trig,
                            tol_override.unwrap_or(1e-10),
                        )
                    });
                    ff_quad(key, t, spec)?
                }
                other => (ff_eval(key, t, other, &tol)?, 0.0),
            };
            rows.push((t, route, value, err));
        }
    }
    let header = config_header(&[
        ("command", "ff".to_string()),
        ("n", n.to_string()),
        ("N", big_n.to_string()),
        ("routes", routes.join(",")),
        ("nodes", format!("{nodes:?}")),
        ("tol", format!("{tol_override:?}")),
    ]);
    let content = if output.format == "json" {
        let items: Vec<_> = rows
            .iter()
            .map(|(t, route, v, e)| {
                serde_json::json!({"n": n, "N": big_n, "t": t, "route": route.to_string(),
                                   "value": v, "error_estimate": e})
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "config": {"command": "ff", "n": n, "N": big_n, "routes": routes,
                        "nodes": nodes, "tol": tol_override},
            "rows": items,
        }))
        .unwrap()
            + "\n"
    } else {
        let mut s = header;
        s.push_str("n,N,t,route,value,error_estimate\n");
        for (t, route, v, e) in &rows {
            s.push_str(&format!("{n},{big_n},{},{route},{},{}\n", fmt(*t), fmt(*v), fmt(*e)));
        }
        s
    };
    write_out(output, &content).map_err(|e| Error::internal(e.to_string()))?;
    Ok(0)
}

fn run_verify(suite: &str, output: &OutputArgs) -> Result<i32, Error> {
    let tol = Tolerances::default();
    let reports = run_suite(suite, &tol)?;
    let pass = reports.iter().all(|r| r.pass);
    let content = serde_json::to_string_pretty(&serde_json::json!({
        "config": {"command": "verify", "suite": suite},
        "suites": reports,
        "pass": pass,
    }))
    .unwrap()
        + "\n";
    write_out(output, &content).map_err(|e| Error::internal(e.to_string()))?;
    Ok(if pass { 0 } else { 1 })
}

fn run_chid_series(n: u8, order: usize, output: &OutputArgs) -> Result<i32, Error> {
    let s = series_chid(n, order)?;
    let content = serde_json::to_string_pretty(&serde_json::json!({
        "config": {"command": "chid series", "n": n, "order": order},
        "series": s.to_json(),
    }))
    .unwrap()
        + "\n";
    write_out(output, &content).map_err(|e| Error::internal(e.to_string()))?;
    Ok(0)
}

fn run_chid_table(ns: &[u8], ts: &[f64], output: &OutputArgs) -> Result<i32, Error> {
    let mut rows = Vec::new();
    for &n in ns {
        for &t in ts {
            if n <= 2 {
                rows.push((n, t, "closed", chid_closed(n, t)?));
            }
            rows.push((n, t, "quadrature", chid_quad(n, t, None)?));
        }
    }
    let content = if output.format == "json" {
        let items: Vec<_> = rows
            .iter()
            .map(|(n, t, route, v)| {
                serde_json::json!({"n": n, "t": t, "route": route, "value": v})
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "config": {"command": "chid table", "n": ns, "t": ts},
            "rows": items,
        }))
        .unwrap()
            + "\n"
    } else {
        let mut s = config_header(&[
            ("command", "chid table".to_string()),
            ("n", format!("{ns:?}")),
        ]);
        s.push_str("n,t,route,value\n");
        for (n, t, route, v) in &rows {
            s.push_str(&format!("{n},{},{route},{}\n", fmt(*t), fmt(*v)));
        }
        s
    };
    write_out(output, &content).map_err(|e| Error::internal(e.to_string()))?;
    Ok(0)
}

fn run_ode_guess(
    input: &PathBuf,
    max_order: usize,
    max_degree: usize,
    min_margin: usize,
    output: &OutputArgs,
) -> Result<i32, Error> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", input.display())))?;
    let json: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::domain(format!("bad JSON in {}: {e}", input.display())))?;
    // accept either a bare series object or the `chid series` wrapper
    let series_json = if json.get("series").is_some() {
        &json["series"]
    } else {
        &json
    };
    let series = ExactSeries::from_json(series_json)?;
    let found = guess_ode(&series, max_order, max_degree, min_margin)?;
    let content = match &found {
        Some(ode) => {
            let (annihilates, _) = verify_annihilation(ode, &series);
            let roots: Vec<_> = singular_points(ode)
                .into_iter()
                .map(|(z, m)| serde_json::json!({"re": z.re, "im": z.im, "multiplicity": m}))
                .collect();
            let cyclotomic: Vec<u32> = cyclotomic_factors(ode, ode.degree as u32 + 1);
            serde_json::to_string_pretty(&serde_json::json!({
                "config": {"command": "ode guess", "input": input.display().to_string(),
                            "max_order": max_order, "max_degree": max_degree,
                            "min_margin": min_margin},
                "found": true,
                "ode": ode_to_json(ode),
                "annihilates_input": annihilates,
                "leading_roots": roots,
                "cyclotomic_factors": cyclotomic,
            }))
            .unwrap()
                + "\n"
        }
        None => {
            serde_json::to_string_pretty(&serde_json::json!({
                "config": {"command": "ode guess", "input": input.display().to_string(),
                            "max_order": max_order, "max_degree": max_degree,
                            "min_margin": min_margin},
                "found": false,
            }))
            .unwrap()
                + "\n"
        }
    };
    write_out(output, &content).map_err(|e| Error::internal(e.to_string()))?;
    Ok(0)
}

fn run_sing(cmd: &SingCommand) -> Result<i32, Error> {
    match cmd {
        SingCommand::Nickel { n, output } => {
            let recs = nickel_enumerate(*n)?;
            let mut s = config_header(&[
                ("command", "sing nickel".to_string()),
                ("n", n.to_string()),
            ]);
            s.push_str("sector,parity,re,im,theta,exponent,log_flag,j,k\n");
            for r in &recs {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.sector,
                    if r.sector % 2 == 0 { "even" } else { "odd" },
                    fmt(r.location.re),
                    fmt(r.location.im),
                    fmt(r.angle),
                    r.exponent,
                    r.log_flag,
                    r.indices.0,
                    r.indices.1,
                ));
            }
            write_out(output, &s).map_err(|e| Error::internal(e.to_string()))?;
            Ok(0)
        }
        SingCommand::Diagonal { sector, output } => {
            let recs = diagonal_singularities(*sector)?;
            let mut s = config_header(&[
                ("command", "sing diagonal".to_string()),
                ("sector", sector.to_string()),
            ]);
            s.push_str("sector,parity,re,im,theta,exponent,log_flag\n");
            for r in &recs {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.sector,
                    if r.sector % 2 == 0 { "even" } else { "odd" },
                    fmt(r.location.re),
                    fmt(r.location.im),
                    fmt(r.angle),
                    r.exponent,
                    r.log_flag,
                ));
            }
            write_out(output, &s).map_err(|e| Error::internal(e.to_string()))?;
            Ok(0)
        }
        SingCommand::Density { n_max, output } => {
            let rows = density_report(*n_max)?;
            let mut s = config_header(&[
                ("command", "sing density".to_string()),
                ("n_max", n_max.to_string()),
            ]);
            s.push_str("sector,cumulative_count,max_gap\n");
            for r in &rows {
                s.push_str(&format!("{},{},{}\n", r.sector, r.cumulative_count, fmt(r.max_gap)));
            }
            write_out(output, &s).map_err(|e| Error::internal(e.to_string()))?;
            Ok(0)
        }
    }
}

fn run_qcurve(samples: usize, output: &OutputArgs) -> Result<i32, Error> {
    let pts = qcurve(samples)?;
    let mut s = config_header(&[
        ("command", "qcurve".to_string()),
        ("samples", samples.to_string()),
    ]);
    s.push_str("phi,re_q,im_q\n");
    for p in &pts {
        s.push_str(&format!("{},{},{}\n", fmt(p.phi), fmt(p.q.re), fmt(p.q.im)));
    }
    write_out(output, &s).map_err(|e| Error::internal(e.to_string()))?;
    Ok(0)
}

/// Parse the process arguments and run; returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ff {
            n,
            big_n,
            t,
            routes,
            nodes,
            tol,
            output,
        } => run_ff(*n, *big_n, t, routes, *nodes, *tol, output),
        Command::Verify { suite, output } => run_verify(suite, output),
        Command::Chid { cmd } => match cmd {
            ChidCommand::Series { n, order, output } => run_chid_series(*n, *order, output),
            ChidCommand::Table { n, t, output } => run_chid_table(n, t, output),
        },
        Command::Ode { cmd } => match cmd {
            OdeCommand::Guess {
                input,
                max_order,
                max_degree,
                min_margin,
                output,
            } => run_ode_guess(input, *max_order, *max_degree, *min_margin, output),
        },
        Command::Sing { cmd } => run_sing(cmd),
        Command::Qcurve { samples, output } => run_qcurve(*samples, output),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
