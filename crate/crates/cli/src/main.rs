//! `fractal-calc`: command-line front end for the fractal-order calculus
//! library.
//!
//! Exit codes: 0 success, 1 usage or parse error (including domain
//! preconditions), 2 numerical divergence finding, 3 internal numerical
//! error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use fractal_calc::{
    circle_param, claims, contour_integral, expr_eval, lf_fourier, lf_integral, lf_laplace,
    lfd_symbolic, period_solve, sphere_param, Contour, Error as CoreError, ExprNode, FCircleSpec,
    FracPowerSeries, FractalOrder, GridSpec, IntegralScheme, QuadOutcome, QuadSpec, RefinePolicy,
    SeriesControl,
};
use fractal_calc_cli::parse;
use std::fs::File;
use std::io::Write;

#[derive(Parser)]
#[command(
    name = "fractal-calc",
    about = "Local fractional calculus of fractal order: series evaluation, derivatives, integrals, transforms, geometry, and an identity verification harness",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct AlphaArg {
    /// Fractal order in (0, 1].
    #[arg(long)]
    alpha: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression at a point; prints the bare value.
    Eval {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Expression, e.g. "E_a(x^{1a})" or "x^{2a} / (1 + x)".
        #[arg(long)]
        expr: String,
        /// Evaluation point (x >= 0).
        #[arg(long)]
        at: f64,
    },
    /// Symbolic fractional derivative; prints the derivative expression, or
    /// its value when --at is given.
    Derive {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        at: Option<f64>,
    },
    /// Fractional integral of an expression over [from, to] on the real line.
    Integrate {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// stieltjes | literal:<n> | literal-limit
        #[arg(long, default_value = "stieltjes", value_parser = parse_scheme)]
        scheme: IntegralScheme,
    },
    /// Fractional contour integral of an expression along a polyline.
    Contour {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long)]
        expr: String,
        /// Semicolon-separated plane points "re,im;re,im;...".
        #[arg(long)]
        points: String,
        /// Treat the polyline as closed (endpoints must coincide).
        #[arg(long)]
        closed: bool,
        #[arg(long, default_value = "stieltjes", value_parser = parse_scheme)]
        scheme: IntegralScheme,
    },
    /// Fractional Fourier transform; emits CSV rows (omega, re, im).
    Fourier {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Integrand, treated as supported on x >= 0.
        #[arg(long)]
        expr: String,
        /// Comma-separated frequencies, all >= 0.
        #[arg(long)]
        omega: String,
        #[arg(long, default_value_t = 40.0)]
        cutoff: f64,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
    /// Fractional Laplace transform; emits CSV rows (s, value).
    Laplace {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Integrand on [0, cutoff].
        #[arg(long)]
        expr: String,
        /// Comma-separated transform points, all > 0.
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 40.0)]
        cutoff: f64,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
    /// Scan for the period candidate of E_a(i^a P^a).
    Period {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long, default_value_t = 4.0 * std::f64::consts::PI)]
        pmax: f64,
        #[arg(long, default_value_t = 20_000)]
        grid: usize,
    },
    /// Sample the fractional circle parametrization; CSV rows
    /// (theta, xa, ya, residual).
    Circle {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Sample the fractional sphere parametrization; CSV rows
    /// (eta, theta, ua, va, wa, residual).
    Sphere {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    /// Run the identity claims registry; emits one JSON object per line.
    Verify {
        /// Comma-separated fractal orders, e.g. "1" or "0.5,1".
        #[arg(long)]
        alpha: String,
        /// Write the JSON lines to a file instead of stdout.
        #[arg(long)]
        out: Option<String>,
        /// Seed for the claim grids.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Base grid resolution per claim.
        #[arg(long, default_value_t = 16)]
        resolution: usize,
    },
    /// Operate on a formal power series literal "[c0, c1, ...]@alpha".
    Series {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Series literal; the @alpha suffix, when present, must match --alpha.
        #[arg(long)]
        series: String,
        /// lfd | lfi | normalize | eval
        #[arg(long)]
        op: String,
        /// Evaluation point for op = eval.
        #[arg(long)]
        at: Option<f64>,
    },
}

fn parse_scheme(s: &str) -> Result<IntegralScheme, String> {
    match s {
        "stieltjes" => Ok(IntegralScheme::Stieltjes),
        "literal-limit" => Ok(IntegralScheme::LiteralLimit),
        other => {
            if let Some(n) = other.strip_prefix("literal:") {
                let n: usize = n
                    .parse()
                    .map_err(|_| format!("invalid literal subdivision count '{n}'"))?;
                if n == 0 {
                    return Err("literal scheme needs n >= 1".into());
                }
                Ok(IntegralScheme::Literal(n))
            } else {
                Err(format!(
                    "unknown scheme '{other}' (expected stieltjes, literal:<n>, literal-limit)"
                ))
            }
        }
    }
}

enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Domain(_)
            | CoreError::InvalidOrder(_)
            | CoreError::OrderMismatch { .. }
            | CoreError::BranchCut { .. }
            | CoreError::UnknownClaim(_)
            | CoreError::DegenerateGrid => CliError::Usage(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<parse::ParseError> for CliError {
    fn from(e: parse::ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => match dispatch(cli.command) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {}", e.message());
                e.exit_code()
            }
        },
        Err(e) => {
            // Help and version are successes; everything else is usage.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            code
        }
    };
    std::process::exit(code);
}

fn order(alpha: f64) -> Result<FractalOrder, CliError> {
    FractalOrder::new(alpha).map_err(CliError::from)
}

fn parse_list(src: &str, what: &str) -> Result<Vec<f64>, CliError> {
    src.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("invalid {what} value '{}'", p.trim())))
        })
        .collect()
}

fn parse_points(src: &str) -> Result<Vec<(f64, f64)>, CliError> {
    src.split(';')
        .map(|pair| {
            let mut it = pair.split(',');
            let bad = || CliError::Usage(format!("invalid point '{pair}' (expected re,im)"));
            let re = it.next().ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?;
            let im = it.next().ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?;
            if it.next().is_some() {
                return Err(bad());
            }
            Ok((re, im))
        })
        .collect()
}

/// Real-line wrapper around a parsed expression. Expressions are defined on
/// x >= 0; transform domains extend by zero on the negative axis.
fn expr_fn(
    e: ExprNode,
    o: FractalOrder,
    ctl: SeriesControl,
    zero_extend: bool,
) -> impl Fn(f64) -> fractal_calc::Result<f64> {
    move |x: f64| {
        if zero_extend && x < 0.0 {
            Ok(0.0)
        } else {
            expr_eval(&e, o, x, &ctl)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    let ctl = SeriesControl::default();
    match cmd {
        Command::Eval { alpha, expr, at } => {
            let o = order(alpha.alpha)?;
            let tree = parse::parse_expr(&expr)?;
            let value = expr_eval(&tree, o, at, &ctl)?;
            println!("{value}");
            Ok(0)
        }
        Command::Derive { alpha, expr, at } => {
            let o = order(alpha.alpha)?;
            let tree = parse::parse_expr(&expr)?;
            let derivative = lfd_symbolic(&tree, o)?;
            match at {
                Some(x) => println!("{}", expr_eval(&derivative, o, x, &ctl)?),
                None => println!("{derivative}"),
            }
            Ok(0)
        }
        Command::Integrate { alpha, expr, from, to, scheme } => {
            let o = order(alpha.alpha)?;
            let tree = parse::parse_expr(&expr)?;
            let result = lf_integral(
                expr_fn(tree, o, ctl, false),
                from,
                to,
                o,
                scheme,
                &RefinePolicy::default(),
            )?;
            println!("scheme,n,value,converged,rel_change,growth_exponent");
            let n = result.diagnostics.sequence.last().map_or(0, |&(n, _)| n);
            let rel = result
                .diagnostics
                .rel_change
                .map_or(String::new(), |r| format!("{r}"));
            match result.outcome {
                QuadOutcome::Value(v) => {
                    println!(
                        "{},{n},{v},{},{rel},",
                        result.diagnostics.scheme, result.diagnostics.converged
                    );
                    Ok(0)
                }
                QuadOutcome::Divergent { exponent } => {
                    println!(
                        "{},{n},,{},{rel},{exponent}",
                        result.diagnostics.scheme, result.diagnostics.converged
                    );
                    Ok(2)
                }
            }
        }
        Command::Contour { alpha, expr, points, closed, scheme } => {
            let o = order(alpha.alpha)?;
            let tree = parse::parse_expr(&expr)?;
            let contour = Contour::from_pairs(&parse_points(&points)?, closed)?;
            let result = contour_integral(
                |z| fractal_calc::expr_eval_complex(&tree, o, z, &ctl),
                &contour,
                o,
                scheme,
                &RefinePolicy::default(),
            )?;
            println!("scheme,n,re,im,converged,growth_exponent");
            let n = result.diagnostics.sequence.last().map_or(0, |&(n, _)| n);
            match result.outcome {
                QuadOutcome::Value(v) => {
                    println!(
                        "{},{n},{},{},{},",
                        result.diagnostics.scheme, v.re, v.im, result.diagnostics.converged
                    );
                    Ok(0)
                }
                QuadOutcome::Divergent { exponent } => {
                    println!(
                        "{},{n},,,{},{exponent}",
                        result.diagnostics.scheme, result.diagnostics.converged
                    );
                    Ok(2)
                }
            }
        }
        Command::Fourier { alpha, expr, omega, cutoff, n } => {
            let o = order(alpha.alpha)?;
            let tree = parse::parse_expr(&expr)?;
            let spec = QuadSpec { cutoff, n, scheme: IntegralScheme::Stieltjes };
            let f = expr_fn(tree, o, ctl, true);
            println!("omega,re,im");
            let mut diverged = false;
            for w in parse_list(&omega, "omega")? {
                let r = lf_fourier(&f, w, o, &spec)?;
                match r.outcome {
                    QuadOutcome::Value(v) => println!("{w},{},{}", v.a, v.b),
                    QuadOutcome::Divergent { .. } => {
                        println!("{w},,");
                        diverged = true;
                    }
                }
            }
            Ok(if diverged { 2 } else { 0 })
        }
        Command::Laplace { alpha, expr, s, cutoff, n } => {
            let o = order(alpha.alpha)?;
            let tree = parse::parse_expr(&expr)?;
            let spec = QuadSpec { cutoff, n, scheme: IntegralScheme::Stieltjes };
            let f = expr_fn(tree, o, ctl, true);
            println!("s,value,tail_estimate");
            let mut diverged = false;
            for sv in parse_list(&s, "s")? {
                let r = lf_laplace(&f, sv, o, &spec)?;
                match r.outcome {
                    QuadOutcome::Value(v) => println!("{sv},{v},{}", r.tail_estimate),
                    QuadOutcome::Divergent { .. } => {
                        println!("{sv},,{}", r.tail_estimate);
                        diverged = true;
                    }
                }
            }
            Ok(if diverged { 2 } else { 0 })
        }
        Command::Period { alpha, pmax, grid } => {
            let o = order(alpha.alpha)?;
            let (best_p, residual) = period_solve(o, pmax, grid)?;
            println!("best_p,residual");
            println!("{best_p},{residual}");
            Ok(0)
        }
        Command::Circle { alpha, radius, samples } => {
            let o = order(alpha.alpha)?;
            if samples < 2 {
                return Err(CliError::Usage("samples must be at least 2".into()));
            }
            let spec = FCircleSpec::new(radius, o)?;
            println!("theta,xa,ya,residual");
            for i in 0..samples {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / (samples - 1) as f64;
                let (xa, ya, residual) = circle_param(theta, &spec, &ctl)?;
                println!("{theta},{xa},{ya},{residual}");
            }
            Ok(0)
        }
        Command::Sphere { alpha, radius, samples } => {
            let o = order(alpha.alpha)?;
            if samples < 2 {
                return Err(CliError::Usage("samples must be at least 2".into()));
            }
            let spec = FCircleSpec::new(radius, o)?;
            println!("eta,theta,ua,va,wa,residual");
            for i in 0..samples {
                // Midpoint grid keeps eta inside the open interval (0, pi).
                let eta = std::f64::consts::PI * (i as f64 + 0.5) / samples as f64;
                for j in 0..samples {
                    let theta = 2.0 * std::f64::consts::PI * j as f64 / (samples - 1) as f64;
                    let (ua, va, wa, residual) = sphere_param(eta, theta, &spec, &ctl)?;
                    println!("{eta},{theta},{ua},{va},{wa},{residual}");
                }
            }
            Ok(0)
        }
        Command::Verify { alpha, out, seed, resolution } => {
            let orders: Vec<FractalOrder> = parse_list(&alpha, "alpha")?
                .into_iter()
                .map(order)
                .collect::<Result<_, _>>()?;
            let grid = GridSpec { seed, resolution };
            match out {
                Some(path) => {
                    let mut file = File::create(&path)
                        .map_err(|e| CliError::Usage(format!("cannot create {path}: {e}")))?;
                    claims::run_all(&orders, &grid, &mut file)?;
                    file.flush()
                        .map_err(|e| CliError::Internal(format!("write failed: {e}")))?;
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    claims::run_all(&orders, &grid, &mut lock)?;
                }
            }
            Ok(0)
        }
        Command::Series { alpha, series, op, at } => {
            let o = order(alpha.alpha)?;
            let (coeffs, literal_alpha) = parse::parse_series_literal(&series)?;
            if let Some(la) = literal_alpha {
                if la != alpha.alpha {
                    return Err(CliError::Usage(format!(
                        "series literal order {la} disagrees with --alpha {}",
                        alpha.alpha
                    )));
                }
            }
            let s = FracPowerSeries::new(o, coeffs);
            match op.as_str() {
                "lfd" => println!("{}", parse::format_series_literal(&s.lfd().coeffs, o.alpha())),
                "lfi" => println!("{}", parse::format_series_literal(&s.lfi().coeffs, o.alpha())),
                "normalize" => {
                    println!("{}", parse::format_series_literal(&s.normalize().coeffs, o.alpha()))
                }
                "eval" => {
                    let x = at
                        .ok_or_else(|| CliError::Usage("op = eval requires --at".into()))?;
                    println!("{}", s.eval(x)?);
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown series op '{other}' (expected lfd, lfi, normalize, eval)"
                    )))
                }
            }
            Ok(0)
        }
    }
}
