//! Sequential differential optimization of transmission schedules.
//!
//! The zero-wait average age `rho_0 = E[tau] + E[tau^2] / (2 E[tau])` is a
//! ratio objective, so it is minimized through a Dinkelbach-style auxiliary
//! problem: for a fixed multiplier `lambda >= 0`,
//!
//! ```text
//! p(lambda) = min over schedules of  (1 - lambda) E[tau] + 0.5 E[tau^2]
//! ```
//!
//! and the optimal age is `rho_0* = p(lambda*) + lambda*` at the unique
//! `lambda*` where `p(lambda) = E[tau_lambda]`.
//!
//! For fixed `lambda` the auxiliary problem decomposes sequentially: setting
//! the partial derivative with respect to `N_f` to zero yields a quadratic
//! for the next blocklength. With `A_f = N_f + f beta`,
//! `R = (P(N_f) - P(N_{f-1})) / P'(N_f)` (just `P(N_1)/P'(N_1)` for `f = 1`):
//!
//! ```text
//! A_{f+1}^2 + 2 (1 - lambda) A_{f+1} - c = 0
//! c = 2 (1 - lambda) (R + A_f) + 2 A_f (R + A_f / 2)
//! ```
//!
//! so `A_{f+1} = -(1 - lambda) +- sqrt((1 - lambda)^2 + c)`. A negative
//! discriminant means no stationary continuation exists and the whole
//! sequence is rejected. Both roots are expanded as branches; non-increasing
//! candidates are pruned, and a candidate reaching the terminal blocklength
//! is clamped to it, ending the branch. The first blocklength is swept over
//! an integer grid, and the best completed sequence per sweep value wins.
//!
//! Schedules stay real-valued throughout; [`round_schedule`] projects the
//! final result onto integers at the very end.

use std::collections::VecDeque;

use crate::ack_model::AckModel;
use crate::error::{Error, Result};
use crate::service_time::{build_dist, Schedule};

/// Hard cap on attempts per candidate sequence; branches that crawl without
/// reaching the terminal blocklength are dropped.
const MAX_ATTEMPTS_PER_SEQUENCE: usize = 4096;

/// Nodes of the coarse multiplier scan used to locate root brackets.
const LAMBDA_SCAN_NODES: usize = 32;

/// Optimizer inputs: message length, processing delay, terminal blocklength,
/// and search knobs.
#[derive(Debug, Clone)]
pub struct SdoConfig {
    /// Message length in bits.
    pub k: u32,
    /// Processing delay per decoding attempt, in time units.
    pub beta: f64,
    /// Terminal cumulative blocklength `N_m` (fixed; the attempt count `m`
    /// is free unless `fixed_m` is set).
    pub n_max: u32,
    /// Integer step of the first-blocklength sweep.
    pub n1_step: u32,
    /// Absolute tolerance of the multiplier bisection. The solver refines
    /// beyond this internally so that `rho_star`, `p_of_lambda` and the
    /// returned schedule stay mutually consistent.
    pub lambda_tol: f64,
    /// Cap on concurrently tracked solution sequences per sweep value.
    pub max_branches: usize,
    /// Optional constraint on the exact number of transmissions.
    pub fixed_m: Option<usize>,
}

impl SdoConfig {
    pub fn new(k: u32, beta: f64, n_max: u32) -> Self {
        Self {
            k,
            beta,
            n_max,
            n1_step: 1,
            lambda_tol: 1e-4,
            max_branches: 64,
            fixed_m: None,
        }
    }

    fn validate(&self, model: &AckModel) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be positive".into()));
        }
        if self.n_max <= self.k {
            return Err(Error::InvalidConfig(format!(
                "n_max = {} must exceed k = {}",
                self.n_max, self.k
            )));
        }
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(Error::InvalidConfig(format!("beta must be >= 0, got {}", self.beta)));
        }
        if self.n1_step == 0 {
            return Err(Error::InvalidConfig("n1_step must be >= 1".into()));
        }
        if self.lambda_tol.is_nan() || self.lambda_tol <= 0.0 {
            return Err(Error::InvalidConfig("lambda_tol must be > 0".into()));
        }
        if self.max_branches == 0 {
            return Err(Error::InvalidConfig("max_branches must be >= 1".into()));
        }
        if self.fixed_m == Some(0) {
            return Err(Error::InvalidConfig("fixed_m must be >= 1".into()));
        }
        if model.k() != self.k {
            return Err(Error::InvalidConfig(format!(
                "model message length {} differs from config k = {}",
                model.k(),
                self.k
            )));
        }
        if f64::from(self.n_max) > model.max_blocklength() {
            return Err(Error::InvalidConfig(format!(
                "n_max = {} exceeds the model's largest blocklength {}",
                self.n_max,
                model.max_blocklength()
            )));
        }
        Ok(())
    }
}

/// Result of the full optimization.
#[derive(Debug, Clone)]
pub struct SdoSolution {
    /// Final schedule, rounded to integer blocklengths.
    pub schedule: Schedule,
    /// Schedule before rounding (real-valued blocklengths).
    pub real_schedule: Schedule,
    /// Multiplier at the crossing `p(lambda) = E[tau_lambda]`.
    pub lambda_star: f64,
    /// Auxiliary objective value at the crossing.
    pub p_of_lambda: f64,
    /// Optimal zero-wait average age `p(lambda*) + lambda*`.
    pub rho_star: f64,
    /// First blocklength of the optimal schedule.
    pub n1_star: u32,
    /// Optional `(N_1, rho_0*(N_1))` curve; filled by [`solve_with_trace`].
    pub objective_trace: Vec<(u32, f64)>,
}

/// Candidate values for the next cumulative blocklength `N_{f+1}` given the
/// previous one or two, at multiplier `lambda`.
///
/// Returns zero (negative discriminant), one, or two roots in ascending
/// order. `prev2` is absent exactly when `f = 1`, in which case the
/// probability increment is `P(N_1)` itself.
pub fn next_blocklength(
    prev2: Option<f64>,
    prev: f64,
    f: usize,
    lambda: f64,
    cfg: &SdoConfig,
    model: &AckModel,
) -> Result<Vec<f64>> {
    if f == 0 {
        return Err(Error::InvalidConfig("attempt index f must be >= 1".into()));
    }
    if let Some(p2) = prev2 {
        if p2.partial_cmp(&prev) != Some(std::cmp::Ordering::Less) {
            return Err(Error::InvalidSchedule(format!(
                "predecessor {p2} must be below current blocklength {prev}"
            )));
        }
    }
    let p_prev = model.ack_prob(prev)?;
    let delta_p = match prev2 {
        Some(p2) => p_prev - model.ack_prob(p2)?,
        None => p_prev,
    };
    let slope = model.ack_prob_deriv(prev)?;
    let a_f = prev + f as f64 * cfg.beta;
    let ratio = delta_p / slope;
    let one_minus = 1.0 - lambda;
    let c = 2.0 * one_minus * (ratio + a_f) + 2.0 * a_f * (ratio + 0.5 * a_f);
    let disc = one_minus * one_minus + c;
    if disc < 0.0 {
        return Ok(Vec::new());
    }
    let sqrt_disc = disc.sqrt();
    let shift = (f + 1) as f64 * cfg.beta;
    if sqrt_disc == 0.0 {
        return Ok(vec![-one_minus - shift]);
    }
    Ok(vec![
        -one_minus - sqrt_disc - shift,
        -one_minus + sqrt_disc - shift,
    ])
}

/// Expands every stationary continuation of `prefix` until the terminal
/// blocklength is reached, and returns the completed sequence with the
/// smallest auxiliary objective, or `None` when all branches are rejected.
fn expand_prefix(
    prefix: &[f64],
    lambda: f64,
    cfg: &SdoConfig,
    model: &AckModel,
) -> Result<Option<(Schedule, f64)>> {
    let n_max = f64::from(cfg.n_max);
    let mut complete: Vec<Vec<f64>> = Vec::new();
    let mut live: VecDeque<Vec<f64>> = VecDeque::new();

    // A schedule starting at N_1 can only round onto strictly increasing
    // integers if it has at most n_max - N_1 + 1 attempts; branches that
    // crawl past that (sub-bit steps, which appear as beta -> 0) can never
    // become valid integer schedules and are dropped.
    let room = ((n_max - prefix[0].floor()) as usize + 1).min(MAX_ATTEMPTS_PER_SEQUENCE);

    let last = *prefix.last().expect("prefix is nonempty");
    if last >= n_max {
        complete.push(prefix.to_vec());
    } else {
        live.push_back(prefix.to_vec());
    }

    while let Some(branch) = live.pop_front() {
        let f = branch.len();
        let prev = *branch.last().expect("branch is nonempty");
        let prev2 = if f >= 2 { Some(branch[f - 2]) } else { None };
        for root in next_blocklength(prev2, prev, f, lambda, cfg, model)? {
            if root <= prev {
                continue;
            }
            let mut next = branch.clone();
            if root >= n_max {
                if next.len() < room {
                    next.push(n_max);
                    complete.push(next);
                }
            } else if next.len() + 1 < room {
                next.push(root);
                live.push_back(next);
            }
        }
        if live.len() > cfg.max_branches {
            return Err(Error::BranchExplosion { limit: cfg.max_branches });
        }
    }

    let mut best: Option<(Schedule, f64)> = None;
    for n in complete {
        if let Some(m) = cfg.fixed_m {
            if n.len() != m {
                continue;
            }
        }
        let sched = Schedule::new(cfg.k, cfg.beta, n)?;
        let dist = build_dist(&sched, model)?;
        let obj = (1.0 - lambda) * dist.mean() + 0.5 * dist.second_moment();
        if best.as_ref().is_none_or(|(_, b)| obj < *b) {
            best = Some((sched, obj));
        }
    }
    Ok(best)
}

/// Solves the auxiliary problem for one fixed first blocklength.
///
/// Returns the best completed schedule starting at `n1` and its objective,
/// or `None` when every solution sequence from `n1` is rejected.
pub fn solve_sequence(
    n1: f64,
    lambda: f64,
    cfg: &SdoConfig,
    model: &AckModel,
) -> Result<Option<(Schedule, f64)>> {
    cfg.validate(model)?;
    if n1 < f64::from(cfg.k) || n1 > f64::from(cfg.n_max) {
        return Err(Error::InvalidConfig(format!(
            "n1 = {n1} outside [{}, {}]",
            cfg.k, cfg.n_max
        )));
    }
    expand_prefix(&[n1], lambda, cfg, model)
}

/// Integer sweep grid including both endpoints.
fn sweep_grid(lo: u32, hi: u32, step: u32) -> Vec<u32> {
    let mut grid: Vec<u32> = (lo..=hi).step_by(step as usize).collect();
    if grid.last() != Some(&hi) {
        grid.push(hi);
    }
    grid
}

/// Objective of the best completed sequence when the sweep variable takes
/// the (real) value `s`; rejected values count as infinite.
fn sweep_objective(
    s: f64,
    lambda: f64,
    cfg: &SdoConfig,
    model: &AckModel,
    fixed_n1: Option<u32>,
) -> Result<Option<(Schedule, f64)>> {
    match fixed_n1 {
        None => expand_prefix(&[s], lambda, cfg, model),
        Some(n1) => expand_prefix(&[f64::from(n1), s], lambda, cfg, model),
    }
}

/// Continuously refines the sweep winner inside its one-step bracket.
///
/// Within a fixed-attempt-count piece the objective is monotone in the sweep
/// value and is minimized at the kink where the final quadratic root lands
/// exactly on the terminal blocklength; there the last free stationarity
/// condition holds too. An iteratively shrinking grid localizes that kink
/// without smoothness assumptions.
fn refine_winner(
    s_best: f64,
    bounds: (f64, f64),
    lambda: f64,
    cfg: &SdoConfig,
    model: &AckModel,
    fixed_n1: Option<u32>,
    mut best: (f64, Schedule),
) -> Result<(f64, Schedule)> {
    let (s_lo, s_hi) = bounds;
    let mut lo = (s_best - 1.0).max(s_lo);
    let mut hi = (s_best + 1.0).min(s_hi);
    const POINTS: usize = 16;
    const ROUNDS: usize = 7;
    for _ in 0..ROUNDS {
        let step = (hi - lo) / POINTS as f64;
        if step <= 1e-9 {
            break;
        }
        let mut center = None;
        for i in 0..=POINTS {
            let s = lo + step * i as f64;
            if let Some((sched, obj)) = sweep_objective(s, lambda, cfg, model, fixed_n1)? {
                if obj < best.0 {
                    best = (obj, sched);
                    center = Some(s);
                }
            }
        }
        let c = center.unwrap_or((lo + hi) / 2.0);
        lo = (c - step).max(s_lo);
        hi = (c + step).min(s_hi);
    }
    Ok(best)
}

fn p_lambda_inner(
    lambda: f64,
    cfg: &SdoConfig,
    model: &AckModel,
    fixed_n1: Option<u32>,
) -> Result<(f64, Schedule)> {
    let mut best: Option<(f64, Schedule, f64)> = None;
    let mut consider = |s: f64, candidate: Result<Option<(Schedule, f64)>>| -> Result<()> {
        if let Some((sched, obj)) = candidate? {
            if best.as_ref().is_none_or(|(b, _, _)| obj < *b) {
                best = Some((obj, sched, s));
            }
        }
        Ok(())
    };

    match fixed_n1 {
        None => {
            for n1 in sweep_grid(cfg.k, cfg.n_max, cfg.n1_step) {
                let s = f64::from(n1);
                consider(s, sweep_objective(s, lambda, cfg, model, fixed_n1))?;
            }
        }
        Some(n1) if n1 == cfg.n_max => {
            consider(
                f64::from(n1),
                expand_prefix(&[f64::from(n1)], lambda, cfg, model),
            )?;
        }
        Some(n1) => {
            for n2 in sweep_grid(n1 + 1, cfg.n_max, cfg.n1_step) {
                let s = f64::from(n2);
                consider(s, sweep_objective(s, lambda, cfg, model, fixed_n1))?;
            }
        }
    }

    let (obj, sched, s_best) = best.ok_or_else(|| {
        Error::Infeasible(format!("every sweep value rejected at lambda = {lambda}"))
    })?;
    // Only the free sweep refines its winner off the integer grid. The
    // pinned-first-blocklength variant keeps pure integer sampling so the
    // curves it produces stay on the documented grid.
    if fixed_n1.is_some() {
        return Ok((obj, sched));
    }
    let bounds = (f64::from(cfg.k), f64::from(cfg.n_max));
    let (obj, sched) =
        refine_winner(s_best, bounds, lambda, cfg, model, fixed_n1, (obj, sched))?;
    Ok((obj, sched))
}

/// Solves the auxiliary problem at multiplier `lambda`: sweeps the first
/// blocklength over the integer grid and returns `p(lambda)` with its
/// minimizing schedule.
pub fn p_lambda(lambda: f64, cfg: &SdoConfig, model: &AckModel) -> Result<(f64, Schedule)> {
    cfg.validate(model)?;
    p_lambda_inner(lambda, cfg, model, None)
}

#[derive(Clone)]
struct Crossing {
    lambda: f64,
    p: f64,
    schedule: Schedule,
}

/// Locates the multiplier where `p(lambda) = E[tau_lambda]`.
///
/// `p(lambda)` is decreasing and eventually negative, so `g = p - E[tau]`
/// goes from positive at 0 to negative at the doubled-out upper end. A
/// coarse scan locates every sign change (piecewise-linear ACK tables can
/// produce more than one); each bracket is bisected and the crossing with
/// the smallest `p + lambda` wins.
fn find_lambda_star(
    eval: &mut dyn FnMut(f64) -> Result<(f64, f64, Schedule)>,
    lambda_tol: f64,
) -> Result<Crossing> {
    let (p0, e0, _) = eval(0.0)?;
    let g0 = p0 - e0;
    if g0 <= 0.0 {
        return Err(Error::NoBracket(format!(
            "g(0) = p(0) - E[tau_0] = {g0} is not positive"
        )));
    }

    let mut hi = 1.0;
    let mut hi_val = eval(hi)?;
    let mut doublings = 0;
    while hi_val.0 >= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::NoBracket("p(lambda) never became negative".into()));
        }
        hi_val = eval(hi)?;
    }

    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(LAMBDA_SCAN_NODES + 1);
    nodes.push((0.0, g0));
    for i in 1..LAMBDA_SCAN_NODES {
        let lam = hi * i as f64 / LAMBDA_SCAN_NODES as f64;
        let (p, e, _) = eval(lam)?;
        nodes.push((lam, p - e));
    }
    nodes.push((hi, hi_val.0 - hi_val.1));

    let mut brackets: Vec<(f64, f64)> = Vec::new();
    for w in nodes.windows(2) {
        if w[0].1 > 0.0 && w[1].1 <= 0.0 {
            brackets.push((w[0].0, w[1].0));
        }
    }
    if brackets.is_empty() {
        return Err(Error::NoBracket("no sign change of p(lambda) - E[tau_lambda]".into()));
    }
    if brackets.len() > 1 {
        log::warn!(
            "p(lambda) - E[tau_lambda] changes sign {} times; reporting the smallest-objective crossing",
            brackets.len()
        );
    }

    // Refine well past the user tolerance so the reported triple
    // (lambda*, p, schedule) is self-consistent to ~1e-9 relative.
    let eff_tol = lambda_tol.min(1e-9 * hi.max(1.0));
    let mut best: Option<Crossing> = None;
    for (mut lo, mut hi_b) in brackets {
        while hi_b - lo > eff_tol {
            let mid = 0.5 * (lo + hi_b);
            let (p, e, _) = eval(mid)?;
            if p - e > 0.0 {
                lo = mid;
            } else {
                hi_b = mid;
            }
        }
        let lambda = 0.5 * (lo + hi_b);
        let (p, _, schedule) = eval(lambda)?;
        if best
            .as_ref()
            .is_none_or(|b| p + lambda < b.p + b.lambda)
        {
            best = Some(Crossing { lambda, p, schedule });
        }
    }
    Ok(best.expect("at least one bracket was refined"))
}

fn crossing_for(
    cfg: &SdoConfig,
    model: &AckModel,
    fixed_n1: Option<u32>,
) -> Result<Crossing> {
    let mut eval = |lambda: f64| -> Result<(f64, f64, Schedule)> {
        let (p, sched) = p_lambda_inner(lambda, cfg, model, fixed_n1)?;
        let mean = build_dist(&sched, model)?.mean();
        Ok((p, mean, sched))
    };
    find_lambda_star(&mut eval, cfg.lambda_tol)
}

/// Optimal zero-wait age achievable when the first blocklength is pinned to
/// `n1` and the remaining blocklengths are optimized. Returns the age and
/// the real-valued schedule.
pub fn rho_for_fixed_n1(n1: u32, cfg: &SdoConfig, model: &AckModel) -> Result<(f64, Schedule)> {
    cfg.validate(model)?;
    if n1 < cfg.k || n1 > cfg.n_max {
        return Err(Error::InvalidConfig(format!(
            "n1 = {n1} outside [{}, {}]",
            cfg.k, cfg.n_max
        )));
    }
    let crossing = crossing_for(cfg, model, Some(n1))?;
    Ok((crossing.p + crossing.lambda, crossing.schedule))
}

/// Unconstrained pinned-first-blocklength curve: each feasible grid point's
/// crossing. Grid points whose pinned problem is infeasible are skipped.
fn pinned_curve(cfg: &SdoConfig, model: &AckModel) -> Result<Vec<(u32, Crossing)>> {
    let unconstrained = SdoConfig { fixed_m: None, ..cfg.clone() };
    let mut curve = Vec::new();
    for n1 in sweep_grid(cfg.k, cfg.n_max, cfg.n1_step) {
        match crossing_for(&unconstrained, model, Some(n1)) {
            Ok(c) => curve.push((n1, c)),
            Err(Error::Infeasible(_)) | Err(Error::NoBracket(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(curve)
}

fn solution_from(crossing: Crossing, objective_trace: Vec<(u32, f64)>) -> Result<SdoSolution> {
    let real_schedule = crossing.schedule;
    let schedule = round_schedule(&real_schedule)?;
    let n1_star = real_schedule.blocklengths()[0].round() as u32;
    Ok(SdoSolution {
        schedule,
        real_schedule,
        lambda_star: crossing.lambda,
        p_of_lambda: crossing.p,
        rho_star: crossing.p + crossing.lambda,
        n1_star,
        objective_trace,
    })
}

fn trace_of(curve: &[(u32, Crossing)]) -> Vec<(u32, f64)> {
    curve.iter().map(|(n1, c)| (*n1, c.p + c.lambda)).collect()
}

fn solve_impl(cfg: &SdoConfig, model: &AckModel, with_trace: bool) -> Result<SdoSolution> {
    cfg.validate(model)?;

    if let Some(budget) = cfg.fixed_m {
        // Attempt-budget methodology: take the unconstrained pinned-N_1
        // optima, keep the first blocklengths whose optimal schedule already
        // fits the budget, and choose the best age among them.
        let curve = pinned_curve(cfg, model)?;
        let best = curve
            .iter()
            .filter(|(_, c)| c.schedule.attempts() <= budget)
            .min_by(|(_, a), (_, b)| {
                (a.p + a.lambda).partial_cmp(&(b.p + b.lambda)).expect("finite objectives")
            })
            .map(|(_, c)| c.clone())
            .ok_or_else(|| {
                Error::Infeasible(format!(
                    "no first blocklength admits an optimal schedule within {budget} attempts"
                ))
            })?;
        let trace = if with_trace { trace_of(&curve) } else { Vec::new() };
        return solution_from(best, trace);
    }

    let crossing = crossing_for(cfg, model, None)?;
    let trace = if with_trace {
        trace_of(&pinned_curve(cfg, model)?)
    } else {
        Vec::new()
    };
    solution_from(crossing, trace)
}

/// Full optimization: finds `lambda*`, the optimal schedule, and the
/// zero-wait age `rho_0*`.
pub fn solve(cfg: &SdoConfig, model: &AckModel) -> Result<SdoSolution> {
    solve_impl(cfg, model, false)
}

/// Like [`solve`], additionally filling `objective_trace` with the
/// `rho_0*(N_1)` curve from the pinned-first-blocklength variant.
pub fn solve_with_trace(cfg: &SdoConfig, model: &AckModel) -> Result<SdoSolution> {
    solve_impl(cfg, model, true)
}

/// Rounds a real-valued schedule to integers, all entries at once: nearest
/// integer first, then collisions repaired upward left to right, with the
/// terminal blocklength pinned.
pub fn round_schedule(sched: &Schedule) -> Result<Schedule> {
    let mut n: Vec<f64> = sched.blocklengths().iter().map(|x| x.round()).collect();
    let last = n.len() - 1;
    for i in 1..=last {
        if n[i] <= n[i - 1] {
            n[i] = n[i - 1] + 1.0;
        }
    }
    n[last] = sched.n_max().round();
    for i in (0..last).rev() {
        if n[i] >= n[i + 1] {
            n[i] = n[i + 1] - 1.0;
        }
    }
    Schedule::new(sched.k(), sched.beta(), n)
}
