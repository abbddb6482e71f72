//! Command-line front end: kernel evaluation through every
//! representation, azimuthal Fourier coefficients, Gegenbauer series,
//! the d=3 addition theorem, the general-order conjecture check, CSV
//! grids, and the cross-validation suites.
//!
//! Values print with 17 significant digits (round-trip safe). Angles are
//! radians. Exit codes: 0 success, 1 validation failure, 2 domain error,
//! 3 convergence failure, 4 I/O error.

use clap::{Parser, Subcommand};
use hyperlap::fourier::{fourier_d2, fourier_d3_elliptic, fourier_quadrature};
use hyperlap::gegenbauer::{addition_theorem_h3, conjecture_check, gegenbauer_series};
use hyperlap::geometry::acosh_stable;
use hyperlap::greens::{GreensValue, Representation};
use hyperlap::validate::run_suite;
use hyperlap::{Error, SeriesEval};
use std::io::Write;

#[derive(Parser)]
#[command(
    name = "hyperlap",
    version,
    about = "Fundamental solutions of the Laplacian on the d-dimensional hyperboloid"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the radial kernel I_d(rho) in one or all representations.
    Eval {
        #[arg(long)]
        d: u32,
        /// Geodesic separation on the unit hyperboloid.
        #[arg(long)]
        rho: f64,
        /// finite | hyp2f1_a | hyp2f1_b | legendre_q | all
        #[arg(long, default_value = "finite")]
        rep: String,
    },
    /// Azimuthal Fourier coefficient H_m of the kernel.
    Fourier {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        rp: f64,
        /// Polar angles of the first point (d-2 values, comma separated).
        #[arg(long, value_delimiter = ',')]
        theta: Vec<f64>,
        /// Polar angles of the second point.
        #[arg(long, value_delimiter = ',')]
        thetap: Vec<f64>,
        /// closed | elliptic | quadrature | both (d-dependent default)
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Gegenbauer expansion of H_R^d summed to a tail tolerance.
    Series {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        rp: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// d=3 addition theorem for the azimuthal coefficient H_m.
    Addition {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        rp: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        thetap: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 3000)]
        lmax: usize,
    },
    /// Numerical support check for the general-order expansion identity.
    Conjecture {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        rp: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Emit a CSV grid of kernel values.
    Grid {
        #[arg(long)]
        d: u32,
        /// rho | r | rp | gamma
        #[arg(long, default_value = "rho")]
        var: String,
        #[arg(long)]
        min: f64,
        #[arg(long)]
        max: f64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value = "all")]
        rep: String,
        /// Fixed geodesic radii and separation angle for r/rp/gamma grids.
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        #[arg(long, default_value_t = 1.0)]
        rp: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long)]
        out: std::path::PathBuf,
    },
    /// Run a cross-validation suite.
    Validate {
        /// representations | fourier | gegenbauer | addition | limits |
        /// wronskian | all
        #[arg(long)]
        suite: String,
        /// Loosen built-in thresholds to this value (never tightens).
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Singularity(_) | Error::Overflow(_) => 2,
        Error::Convergence(_) => 3,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Singularity(_) => "singularity",
        Error::Convergence(_) => "convergence",
        Error::Overflow(_) => "overflow",
    }
}

fn fail(e: Error) -> ! {
    eprintln!("error kind={} message=\"{}\"", error_kind(&e), e);
    std::process::exit(exit_code(&e));
}

fn print_series_eval(s: &SeriesEval, label: &str) {
    println!(
        "{:.16e} {label} terms_used={} tail_estimate={:.3e} converged={}",
        s.value, s.terms_used, s.tail_estimate, s.converged
    );
}

fn cmd_eval(d: u32, rho: f64, rep: &str) -> hyperlap::Result<()> {
    if rep == "all" {
        let mut vals = Vec::new();
        for r in Representation::ALL {
            let g = GreensValue::compute(d, 1.0, rho, r)?;
            println!("{:.16e} rep={} d={d} rho={rho}", g.value, r.tag());
            vals.push(g.value);
        }
        let mut dev = 0.0_f64;
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                dev = dev.max((vals[i] - vals[j]).abs() / vals[i].abs().max(vals[j].abs()));
            }
        }
        println!("max_pairwise_rel_deviation={dev:.3e}");
    } else {
        let r: Representation = rep.parse()?;
        let g = GreensValue::compute(d, 1.0, rho, r)?;
        println!("{:.16e} rep={} d={d} rho={rho}", g.value, r.tag());
    }
    Ok(())
}

fn cmd_fourier(
    d: u32,
    m: u32,
    r: f64,
    rp: f64,
    theta: &[f64],
    thetap: &[f64],
    method: &str,
) -> hyperlap::Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("d = {d} below 2")));
    }
    if theta.len() != d as usize - 2 || thetap.len() != d as usize - 2 {
        return Err(Error::Domain(format!(
            "expected {} polar angles per point for d = {d}",
            d - 2
        )));
    }
    let method = match (method, d) {
        ("auto", 2) => "closed",
        ("auto", 3) => "both",
        ("auto", _) => "quadrature",
        (m, _) => m,
    };
    let closed = |label: &str| -> hyperlap::Result<f64> {
        match d {
            2 => fourier_d2(m, r, rp),
            3 => fourier_d3_elliptic(m, r, rp, theta[0], thetap[0]),
            _ => Err(Error::Domain(format!(
                "method '{label}' is only available for d = 2 (closed) or d = 3 (elliptic)"
            ))),
        }
    };
    match method {
        "closed" | "elliptic" => {
            let v = closed(method)?;
            println!("{v:.16e} method={method} d={d} m={m}");
        }
        "quadrature" => {
            let v = fourier_quadrature(d, m, r, rp, theta, thetap)?;
            println!("{v:.16e} method=quadrature d={d} m={m}");
        }
        "both" => {
            let a = closed("both")?;
            let b = fourier_quadrature(d, m, r, rp, theta, thetap)?;
            let label = if d == 2 { "closed" } else { "elliptic" };
            println!("{a:.16e} method={label} d={d} m={m}");
            println!("{b:.16e} method=quadrature d={d} m={m}");
            println!("abs_deviation={:.3e}", (a - b).abs());
        }
        other => return Err(Error::Domain(format!("unknown method '{other}'"))),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_grid(
    d: u32,
    var: &str,
    min: f64,
    max: f64,
    count: usize,
    rep: &str,
    fixed: (f64, f64, f64),
    out: &std::path::Path,
) -> hyperlap::Result<()> {
    if count < 1 {
        return Err(Error::Domain("grid: count must be at least 1".into()));
    }
    if !matches!(var, "rho" | "r" | "rp" | "gamma") {
        return Err(Error::Domain(format!("grid: unknown variable '{var}'")));
    }
    let reps: Vec<Representation> = if rep == "all" {
        Representation::ALL.to_vec()
    } else {
        vec![rep.parse()?]
    };

    let mut csv = String::new();
    csv.push_str(var);
    if var != "rho" {
        csv.push_str(",rho");
    }
    for r in &reps {
        csv.push(',');
        csv.push_str(r.tag());
    }
    if reps.len() > 1 {
        csv.push_str(",max_rel_dev");
    }
    csv.push('\n');

    let (r0, rp0, gamma0) = fixed;
    for i in 0..count {
        let x = if count == 1 {
            min
        } else {
            min + (max - min) * i as f64 / (count - 1) as f64
        };
        let rho = if var == "rho" {
            x
        } else {
            let (rr, rrp, gg) = match var {
                "r" => (x, rp0, gamma0),
                "rp" => (r0, x, gamma0),
                _ => (r0, rp0, x),
            };
            acosh_stable(rr.cosh() * rrp.cosh() - rr.sinh() * rrp.sinh() * gg.cos())?
        };
        csv.push_str(&format!("{x:.16e}"));
        if var != "rho" {
            csv.push_str(&format!(",{rho:.16e}"));
        }
        let mut vals = Vec::new();
        for r in &reps {
            let v = GreensValue::compute(d, 1.0, rho, *r)?.value;
            csv.push_str(&format!(",{v:.16e}"));
            vals.push(v);
        }
        if reps.len() > 1 {
            let mut dev = 0.0_f64;
            for a in 0..vals.len() {
                for b in a + 1..vals.len() {
                    dev = dev.max((vals[a] - vals[b]).abs() / vals[a].abs().max(vals[b].abs()));
                }
            }
            csv.push_str(&format!(",{dev:.3e}"));
        }
        csv.push('\n');
    }

    // no partial files: write a sibling temp file, rename into place
    let tmp = out.with_extension("csv.tmp");
    let write = || -> std::io::Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(csv.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, out)
    };
    if let Err(e) = write() {
        let _ = std::fs::remove_file(&tmp);
        eprintln!("error kind=io message=\"{e}\"");
        std::process::exit(4);
    }
    Ok(())
}

fn cmd_validate(suite: &str, tol: Option<f64>) -> hyperlap::Result<()> {
    let reports = run_suite(suite, tol)?;
    let mut all_ok = true;
    for (name, checks) in reports {
        println!("suite {name}");
        for c in checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            all_ok &= c.passed;
            if c.tolerance.is_finite() {
                println!(
                    "{status} {} deviation={:.3e} tolerance={:.3e}",
                    c.name, c.deviation, c.tolerance
                );
            } else {
                println!("INFO {} deviation={:.3e}", c.name, c.deviation);
            }
            if let Some(note) = c.note {
                println!("     note: {note}");
            }
        }
    }
    if !all_ok {
        std::process::exit(1);
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Eval { d, rho, rep } => cmd_eval(d, rho, &rep),
        Cmd::Fourier { d, m, r, rp, theta, thetap, method } => {
            cmd_fourier(d, m, r, rp, &theta, &thetap, &method)
        }
        Cmd::Series { d, r, rp, gamma, radius, tol } => {
            gegenbauer_series(d, radius, r, rp, gamma, tol).map(|s| {
                print_series_eval(&s, &format!("series d={d} radius={radius}"));
            })
        }
        Cmd::Addition { m, r, rp, theta, thetap, tol, lmax } => {
            addition_theorem_h3(m, r, rp, theta, thetap, tol, lmax).map(|s| {
                print_series_eval(&s, &format!("addition d=3 m={m}"));
            })
        }
        Cmd::Conjecture { mu, r, rp, gamma, tol } => {
            conjecture_check(mu, r, rp, gamma, tol).map(|(lhs, rhs)| {
                println!("CONJECTURE SUPPORT (numerical check, not a proof) mu={mu}");
                println!("{lhs:.16e} lhs");
                print_series_eval(&rhs, "rhs");
                println!("rel_deviation={:.3e}", (lhs - rhs.value).abs() / lhs.abs());
            })
        }
        Cmd::Grid { d, var, min, max, count, rep, r, rp, gamma, out } => {
            cmd_grid(d, &var, min, max, count, &rep, (r, rp, gamma), &out)
        }
        Cmd::Validate { suite, tol } => cmd_validate(&suite, tol),
    };
    if let Err(e) = result {
        fail(e);
    }
}
