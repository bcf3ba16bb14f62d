//! Command-line front end.
//!
//! Subcommands: `optimize`, `sweep`, `curves`, `baseline`, `simulate`.
//! Exit codes: 0 success, 2 usage or input validation, 3 infeasible
//! optimization, 4 simulation validation failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ack_model::AckModel;
use crate::baselines::{
    default_iir_cap, fr_no_replace_aoi, fr_replace_aoi, geometric_service_dist, iir_aoi, iir_dist,
};
use crate::error::Error;
use crate::sdo::{p_lambda, rho_for_fixed_n1, solve, SdoConfig};
use crate::service_time::{build_dist, Schedule, ServiceTimeDist};
use crate::sim::{simulate, SimConfig, SimScheme};
use crate::waiting::{epoch_moments, solve_gamma};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 2;
const EXIT_INFEASIBLE: i32 = 3;
const EXIT_VALIDATION: i32 = 4;

#[derive(Parser)]
#[command(
    name = "aoi-harq",
    version,
    about = "Age-of-information-optimal HARQ transmission schedules"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve for the optimal schedule and waiting threshold
    Optimize(OptimizeArgs),
    /// Compare schemes over a grid of processing delays, as CSV or JSON
    Sweep(SweepArgs),
    /// Emit solver diagnostic curves as CSV
    Curves(CurvesArgs),
    /// Evaluate the baseline schemes at one processing delay
    Baseline(BaselineArgs),
    /// Cross-check an analytical age against the Monte Carlo simulator
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Message length in bits
    #[arg(long, default_value_t = 64)]
    k: u32,
    /// Terminal cumulative blocklength
    #[arg(long, default_value_t = 192)]
    nmax: u32,
    /// ACK model: `gaussian-tbcc` or `table:<csv path>`
    #[arg(long, default_value = "gaussian-tbcc")]
    model: String,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Processing delay per decoding attempt
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Constrain the number of transmissions per message
    #[arg(long = "fixed-m")]
    fixed_m: Option<usize>,
    /// Write the machine-readable report to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stdout format
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    format: TextFormat,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Processing delays: comma list `0,10,20` or range `start:end:step`
    #[arg(long, default_value = "0:150:10")]
    betas: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(Args)]
struct CurvesArgs {
    /// Which curve to emit
    #[arg(value_enum)]
    curve: CurveKind,
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Number of multiplier samples for `p-lambda`
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Scheme to simulate
    #[arg(long, value_enum, default_value_t = SimSchemeArg::Harq)]
    scheme: SimSchemeArg,
    /// Explicit cumulative blocklengths, e.g. `119,132,143,157,172,192`
    /// (HARQ only; skips the optimizer)
    #[arg(long)]
    schedule: Option<String>,
    /// Waiting threshold: `zero`, `opt`, or a number
    #[arg(long, default_value = "zero")]
    gamma: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    epochs: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CurveKind {
    /// Auxiliary objective and optimal mean service time vs multiplier
    PLambda,
    /// Optimal zero-wait age vs pinned first blocklength
    RhoN1,
    /// Optimal cumulative blocklengths vs pinned first blocklength
    IrN1,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SimSchemeArg {
    Harq,
    Iir,
    FrNoReplace,
    FrReplace,
}

/// One row of the scheme-comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub beta: f64,
    pub scheme: String,
    pub n1: Option<u32>,
    pub m: Option<usize>,
    pub aoi_zero_wait: Option<f64>,
    pub aoi_with_wait: Option<f64>,
    pub gamma_star: Option<f64>,
    pub error: Option<String>,
}

#[derive(Serialize)]
struct OptimizeReport {
    schema: u32,
    config: ReportConfig,
    lambda_star: f64,
    rho_star: f64,
    schedule: Vec<u64>,
    ir_lengths: Vec<u64>,
    gamma_star: f64,
    aoi_with_wait: f64,
}

#[derive(Serialize)]
struct ReportConfig {
    k: u32,
    n_max: u32,
    beta: f64,
    model: String,
    fixed_m: Option<usize>,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.cmd {
        Cmd::Optimize(args) => cmd_optimize(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Curves(args) => cmd_curves(args),
        Cmd::Baseline(args) => cmd_baseline(args),
        Cmd::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) | Error::NoBracket(_) | Error::BranchExplosion { .. } => {
            EXIT_INFEASIBLE
        }
        _ => EXIT_USAGE,
    }
}

fn resolve_model(spec: &str, k: u32) -> crate::error::Result<AckModel> {
    if spec == "gaussian-tbcc" {
        Ok(AckModel::gaussian_tbcc(k))
    } else if let Some(path) = spec.strip_prefix("table:") {
        AckModel::from_csv(Path::new(path), k)
    } else {
        Err(Error::InvalidConfig(format!(
            "unknown model `{spec}` (expected `gaussian-tbcc` or `table:<path>`)"
        )))
    }
}

fn check_beta(beta: f64) -> Result<(), i32> {
    if !beta.is_finite() || beta < 0.0 {
        eprintln!("error: beta must be >= 0, got {beta}");
        return Err(EXIT_USAGE);
    }
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_opt_f64(v: &Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn cmd_optimize(args: OptimizeArgs) -> crate::error::Result<i32> {
    if let Err(code) = check_beta(args.beta) {
        return Ok(code);
    }
    let model = resolve_model(&args.common.model, args.common.k)?;
    let mut cfg = SdoConfig::new(args.common.k, args.beta, args.common.nmax);
    cfg.fixed_m = args.fixed_m;
    let sol = solve(&cfg, &model)?;

    let dist = build_dist(&sol.schedule, &model)?;
    let ws = solve_gamma(&dist);
    let schedule: Vec<u64> = sol.schedule.blocklengths().iter().map(|x| *x as u64).collect();
    let ir_lengths: Vec<u64> = sol.schedule.ir_lengths().iter().map(|x| *x as u64).collect();

    let report = OptimizeReport {
        schema: 1,
        config: ReportConfig {
            k: args.common.k,
            n_max: args.common.nmax,
            beta: args.beta,
            model: args.common.model.clone(),
            fixed_m: args.fixed_m,
        },
        lambda_star: sol.lambda_star,
        rho_star: sol.rho_star,
        schedule,
        ir_lengths,
        gamma_star: ws.gamma_star,
        aoi_with_wait: ws.aoi_with_wait,
    };

    match args.format {
        TextFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"))
        }
        TextFormat::Text => {
            println!("lambda*        = {:.6}", sol.lambda_star);
            println!("p(lambda*)     = {:.6}", sol.p_of_lambda);
            println!("rho0*          = {:.6}", sol.rho_star);
            println!("n1*            = {}", sol.n1_star);
            println!("schedule       = {:?}", report.schedule);
            println!("ir lengths     = {:?}", report.ir_lengths);
            println!("rho0 (rounded) = {:.6}", ws.aoi_zero_wait);
            println!("gamma*         = {:.6}", ws.gamma_star);
            println!("aoi with wait  = {:.6}", ws.aoi_with_wait);
        }
    }
    if let Some(out) = &args.out {
        std::fs::write(out, serde_json::to_string_pretty(&report).expect("serializable"))?;
    }
    Ok(EXIT_OK)
}

/// Scheme-comparison rows at one processing delay, in scheme-name order.
/// Per-row failures land in the `error` field without aborting the sweep.
pub fn sweep_rows_at(beta: f64, k: u32, n_max: u32, model: &AckModel) -> Vec<SweepRecord> {
    let blank = |scheme: &str| SweepRecord {
        beta,
        scheme: scheme.to_string(),
        n1: None,
        m: None,
        aoi_zero_wait: None,
        aoi_with_wait: None,
        gamma_star: None,
        error: None,
    };

    let mut fr_no = blank("fr-no-replace");
    match fr_no_replace_aoi(k, beta, model, k..=4 * k) {
        Ok(r) => {
            fr_no.n1 = Some(r.n1_star);
            fr_no.m = Some(r.attempts);
            fr_no.aoi_zero_wait = Some(r.aoi_zero_wait);
            fr_no.aoi_with_wait = Some(r.aoi);
            fr_no.gamma_star = r.gamma_star;
        }
        Err(e) => fr_no.error = Some(e.to_string()),
    }

    let mut fr_re = blank("fr-replace");
    match fr_replace_aoi(k, beta, model, k..=4 * k) {
        Ok(r) => {
            fr_re.n1 = Some(r.n1_star);
            fr_re.m = Some(r.attempts);
            fr_re.aoi_zero_wait = Some(r.aoi_zero_wait);
            fr_re.aoi_with_wait = Some(r.aoi);
            fr_re.gamma_star = None;
        }
        Err(e) => fr_re.error = Some(e.to_string()),
    }

    let mut harq = blank("harq");
    let mut harq_rounded = blank("harq-rounded");
    match solve(&SdoConfig::new(k, beta, n_max), model) {
        Ok(sol) => {
            match build_dist(&sol.real_schedule, model) {
                Ok(dist) => {
                    let ws = solve_gamma(&dist);
                    harq.n1 = Some(sol.n1_star);
                    harq.m = Some(sol.real_schedule.attempts());
                    harq.aoi_zero_wait = Some(sol.rho_star);
                    harq.aoi_with_wait = Some(ws.aoi_with_wait);
                    harq.gamma_star = Some(ws.gamma_star);
                }
                Err(e) => harq.error = Some(e.to_string()),
            }
            match build_dist(&sol.schedule, model) {
                Ok(dist) => {
                    let ws = solve_gamma(&dist);
                    harq_rounded.n1 = Some(sol.schedule.blocklengths()[0] as u32);
                    harq_rounded.m = Some(sol.schedule.attempts());
                    harq_rounded.aoi_zero_wait = Some(ws.aoi_zero_wait);
                    harq_rounded.aoi_with_wait = Some(ws.aoi_with_wait);
                    harq_rounded.gamma_star = Some(ws.gamma_star);
                }
                Err(e) => harq_rounded.error = Some(e.to_string()),
            }
        }
        Err(e) => {
            harq.error = Some(e.to_string());
            harq_rounded.error = Some(e.to_string());
        }
    }

    let mut iir = blank("iir");
    match default_iir_cap(model).and_then(|cap| iir_aoi(k, beta, model, cap)) {
        Ok(r) => {
            iir.n1 = Some(r.n1_star);
            iir.m = Some(r.attempts);
            iir.aoi_zero_wait = Some(r.aoi_zero_wait);
            iir.aoi_with_wait = Some(r.aoi);
            iir.gamma_star = r.gamma_star;
        }
        Err(e) => iir.error = Some(e.to_string()),
    }

    vec![fr_no, fr_re, harq, harq_rounded, iir]
}

fn parse_betas(spec: &str) -> Result<Vec<f64>, String> {
    let parse_one = |s: &str| -> Result<f64, String> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid beta value `{}`", s.trim()))
    };
    let values: Vec<f64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected `start:end:step`, got `{spec}`"));
        }
        let (start, end, step) =
            (parse_one(parts[0])?, parse_one(parts[1])?, parse_one(parts[2])?);
        if step.is_nan() || step <= 0.0 {
            return Err("step must be positive".into());
        }
        let mut out = Vec::new();
        let mut i = 0u32;
        loop {
            let b = start + step * f64::from(i);
            if b > end + 1e-9 {
                break;
            }
            out.push(b);
            if out.len() > 10_000 {
                return Err("beta grid has more than 10000 points".into());
            }
            i += 1;
        }
        out
    } else {
        spec.split(',').map(parse_one).collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err("empty beta set".into());
    }
    if values.iter().any(|b| b.is_nan() || *b < 0.0) {
        return Err("beta must be >= 0".into());
    }
    Ok(values)
}

fn cmd_sweep(args: SweepArgs) -> crate::error::Result<i32> {
    let betas = match parse_betas(&args.betas) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return Ok(EXIT_USAGE);
        }
    };
    let model = resolve_model(&args.common.model, args.common.k)?;
    let mut betas = betas;
    betas.sort_by(|a, b| a.partial_cmp(b).expect("finite betas"));

    let mut rows = Vec::new();
    for &beta in &betas {
        rows.extend(sweep_rows_at(beta, args.common.k, args.common.nmax, &model));
    }

    let text = match args.format {
        TableFormat::Json => serde_json::to_string_pretty(&rows).expect("serializable"),
        TableFormat::Csv => {
            let mut s =
                String::from("beta,scheme,n1,m,aoi_zero_wait,aoi_with_wait,gamma_star,error\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:.6},{},{},{},{},{},{},{}",
                    r.beta,
                    r.scheme,
                    fmt_opt(&r.n1),
                    fmt_opt(&r.m),
                    fmt_opt_f64(&r.aoi_zero_wait),
                    fmt_opt_f64(&r.aoi_with_wait),
                    fmt_opt_f64(&r.gamma_star),
                    r.error.as_deref().unwrap_or("")
                );
            }
            s
        }
    };
    emit(&text, args.out.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_curves(args: CurvesArgs) -> crate::error::Result<i32> {
    if let Err(code) = check_beta(args.beta) {
        return Ok(code);
    }
    let model = resolve_model(&args.common.model, args.common.k)?;
    let cfg = SdoConfig::new(args.common.k, args.beta, args.common.nmax);

    let mut s = String::new();
    match args.curve {
        CurveKind::PLambda => {
            if args.points < 2 {
                eprintln!("error: --points must be at least 2");
                return Ok(EXIT_USAGE);
            }
            // Double out to where the auxiliary objective goes negative,
            // then sample the interval evenly.
            let mut lambda_max = 1.0;
            while p_lambda(lambda_max, &cfg, &model)?.0 >= 0.0 {
                lambda_max *= 2.0;
                if lambda_max > 1e12 {
                    return Err(Error::NoBracket("p(lambda) never became negative".into()));
                }
            }
            s.push_str("lambda,p,e_tau\n");
            for i in 0..args.points {
                let lambda = lambda_max * i as f64 / (args.points - 1) as f64;
                let (p, sched) = p_lambda(lambda, &cfg, &model)?;
                let mean = build_dist(&sched, &model)?.mean();
                let _ = writeln!(s, "{lambda:.6},{p:.6},{mean:.6}");
            }
        }
        CurveKind::RhoN1 => {
            s.push_str("n1,rho0\n");
            for n1 in args.common.k..=args.common.nmax {
                match rho_for_fixed_n1(n1, &cfg, &model) {
                    Ok((rho, _)) => {
                        let _ = writeln!(s, "{n1},{rho:.6}");
                    }
                    Err(Error::Infeasible(_)) | Err(Error::NoBracket(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        CurveKind::IrN1 => {
            s.push_str("n1,m,f,n_f,ell_f\n");
            for n1 in args.common.k..=args.common.nmax {
                match rho_for_fixed_n1(n1, &cfg, &model) {
                    Ok((_, sched)) => {
                        let m = sched.attempts();
                        let lengths = sched.ir_lengths();
                        for (i, (n_f, ell)) in
                            sched.blocklengths().iter().zip(&lengths).enumerate()
                        {
                            let _ = writeln!(s, "{n1},{m},{},{n_f:.6},{ell:.6}", i + 1);
                        }
                    }
                    Err(Error::Infeasible(_)) | Err(Error::NoBracket(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    emit(&s, args.out.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_baseline(args: BaselineArgs) -> crate::error::Result<i32> {
    if let Err(code) = check_beta(args.beta) {
        return Ok(code);
    }
    let model = resolve_model(&args.common.model, args.common.k)?;
    let k = args.common.k;
    let cap = default_iir_cap(&model)?;
    let results = [
        fr_no_replace_aoi(k, args.beta, &model, k..=4 * k)?,
        fr_replace_aoi(k, args.beta, &model, k..=4 * k)?,
        iir_aoi(k, args.beta, &model, cap)?,
    ];

    let text = match args.format {
        TableFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                scheme: String,
                n1: u32,
                aoi: f64,
                aoi_zero_wait: f64,
                gamma_star: Option<f64>,
            }
            let rows: Vec<Row> = results
                .iter()
                .map(|r| Row {
                    scheme: r.scheme.to_string(),
                    n1: r.n1_star,
                    aoi: r.aoi,
                    aoi_zero_wait: r.aoi_zero_wait,
                    gamma_star: r.gamma_star,
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("serializable")
        }
        TableFormat::Csv => {
            let mut s = String::from("scheme,n1,aoi,aoi_zero_wait,gamma_star\n");
            for r in &results {
                let _ = writeln!(
                    s,
                    "{},{},{:.6},{:.6},{}",
                    r.scheme,
                    r.n1_star,
                    r.aoi,
                    r.aoi_zero_wait,
                    fmt_opt_f64(&r.gamma_star)
                );
            }
            s
        }
    };
    emit(&text, args.out.as_deref())?;
    Ok(EXIT_OK)
}

enum GammaSpec {
    Zero,
    Opt,
    Value(f64),
}

fn parse_gamma(spec: &str) -> Result<GammaSpec, String> {
    match spec {
        "zero" => Ok(GammaSpec::Zero),
        "opt" => Ok(GammaSpec::Opt),
        v => v
            .parse::<f64>()
            .ok()
            .filter(|g| *g >= 0.0 && g.is_finite())
            .map(GammaSpec::Value)
            .ok_or_else(|| {
                format!("invalid gamma `{v}` (expected `zero`, `opt`, or a number >= 0)")
            }),
    }
}

fn parse_schedule(spec: &str, k: u32, beta: f64) -> crate::error::Result<Schedule> {
    let n: Vec<f64> = spec
        .split(',')
        .map(|s| {
            s.trim().parse::<u32>().map(f64::from).map_err(|_| {
                Error::InvalidSchedule(format!("invalid blocklength `{}`", s.trim()))
            })
        })
        .collect::<crate::error::Result<_>>()?;
    Schedule::new(k, beta, n)
}

fn cmd_simulate(args: SimulateArgs) -> crate::error::Result<i32> {
    if let Err(code) = check_beta(args.beta) {
        return Ok(code);
    }
    let gamma_spec = match parse_gamma(&args.gamma) {
        Ok(g) => g,
        Err(msg) => {
            eprintln!("error: {msg}");
            return Ok(EXIT_USAGE);
        }
    };
    let model = resolve_model(&args.common.model, args.common.k)?;
    let k = args.common.k;
    let beta = args.beta;

    // Resolve the scheme to an analytical description.
    let (label, dist, fr_replace): (String, Option<ServiceTimeDist>, Option<(f64, f64)>) =
        match args.scheme {
            SimSchemeArg::Harq => {
                let sched = match &args.schedule {
                    Some(spec) => parse_schedule(spec, k, beta)?,
                    None => {
                        let cfg = SdoConfig::new(k, beta, args.common.nmax);
                        solve(&cfg, &model)?.schedule
                    }
                };
                let label = format!(
                    "harq schedule {:?}",
                    sched.blocklengths().iter().map(|x| *x as u64).collect::<Vec<_>>()
                );
                (label, Some(build_dist(&sched, &model)?), None)
            }
            SimSchemeArg::Iir => {
                let cap = default_iir_cap(&model)?;
                let r = iir_aoi(k, beta, &model, cap)?;
                (
                    format!("iir n1={} cap={cap}", r.n1_star),
                    Some(iir_dist(k, beta, &model, r.n1_star, cap)?),
                    None,
                )
            }
            SimSchemeArg::FrNoReplace => {
                let r = fr_no_replace_aoi(k, beta, &model, k..=4 * k)?;
                let p = model.ack_prob(f64::from(r.n1_star))?;
                (
                    format!("fr-no-replace n1={}", r.n1_star),
                    Some(geometric_service_dist(
                        f64::from(r.n1_star) + beta,
                        p,
                        crate::baselines::TAIL_MASS,
                    )?),
                    None,
                )
            }
            SimSchemeArg::FrReplace => {
                let r = fr_replace_aoi(k, beta, &model, k..=4 * k)?;
                let p = model.ack_prob(f64::from(r.n1_star))?;
                (
                    format!("fr-replace n1={}", r.n1_star),
                    None,
                    Some((f64::from(r.n1_star) + beta, p)),
                )
            }
        };

    let (analytical, gamma, scheme) = match (&dist, &fr_replace) {
        (Some(d), None) => {
            let gamma = match gamma_spec {
                GammaSpec::Zero => 0.0,
                GammaSpec::Opt => solve_gamma(d).gamma_star,
                GammaSpec::Value(g) => g,
            };
            let (e_l, e_q) = epoch_moments(d, gamma);
            (e_q / e_l, gamma, SimScheme::Service(d.clone()))
        }
        (None, &Some((t, p))) => {
            // Zero waiting is optimal for replacement; gamma is ignored.
            (
                t * (1.0 / p + 0.5),
                0.0,
                SimScheme::FrReplace { service_time: t, ack_prob: p },
            )
        }
        _ => unreachable!("exactly one scheme description is set"),
    };

    let cfg = SimConfig { epochs: args.epochs, seed: args.seed, gamma };
    let result = simulate(&cfg, &scheme);
    let diff = (result.aoi_estimate - analytical).abs();
    let pass = diff <= 3.0 * result.std_error;

    println!("scheme         = {label}");
    println!("gamma          = {gamma:.6}");
    println!("epochs         = {} (seed {})", result.epochs_used, cfg.seed);
    println!("analytical aoi = {analytical:.6}");
    println!("simulated aoi  = {:.6}", result.aoi_estimate);
    println!("std error      = {:.6}", result.std_error);
    println!("|difference|   = {diff:.6}");
    println!("3-sigma check  = {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { EXIT_OK } else { EXIT_VALIDATION })
}
