//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them all).

use std::sync::LazyLock;
use std::time::{Duration, Instant};

use aoi_harq::baselines::geometric_service_dist;
use aoi_harq::cli::{sweep_rows_at, SweepRecord};
use aoi_harq::sdo::{p_lambda, rho_for_fixed_n1};
use aoi_harq::{
    build_dist, epoch_moments, moment_partials, simulate, solve, solve_gamma, solve_with_trace,
    AckModel, Schedule, SdoConfig, ServiceTimeDist, SimConfig, SimScheme,
};

fn model() -> AckModel {
    AckModel::gaussian_tbcc(64)
}

fn cfg(beta: f64) -> SdoConfig {
    SdoConfig::new(64, beta, 192)
}

/// Timed reference solve at beta = 10.
static SOLVE10: LazyLock<(aoi_harq::SdoSolution, Duration)> = LazyLock::new(|| {
    let start = Instant::now();
    let sol = solve(&cfg(10.0), &model()).expect("solve at beta = 10");
    (sol, start.elapsed())
});

/// Pinned-first-blocklength curve at beta = 10.
static TRACE10: LazyLock<Vec<(u32, f64)>> = LazyLock::new(|| {
    solve_with_trace(&cfg(10.0), &model())
        .expect("trace solve at beta = 10")
        .objective_trace
});

/// Full comparison sweep over beta in {0, 10, ..., 150}.
static SWEEP: LazyLock<Vec<Vec<SweepRecord>>> = LazyLock::new(|| {
    let m = model();
    (0..=15)
        .map(|i| sweep_rows_at(10.0 * f64::from(i), 64, 192, &m))
        .collect()
});

fn row<'a>(rows: &'a [SweepRecord], scheme: &str) -> &'a SweepRecord {
    rows.iter().find(|r| r.scheme == scheme).expect("scheme row present")
}

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id:02} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id:02} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_crossing_reproduction() {
    let (sol, elapsed) = &*SOLVE10;
    let pass = (68.0..=72.0).contains(&sol.lambda_star)
        && (135.0..=141.0).contains(&sol.p_of_lambda)
        && *elapsed < Duration::from_secs(10);
    report(
        1,
        "multiplier crossing reproduction",
        pass,
        &format!(
            "lambda* = {:.3} (target 70±2), p(lambda*) = {:.3} (target 138±3), solve took {:.2?}",
            sol.lambda_star, sol.p_of_lambda, elapsed
        ),
    );
}

#[test]
fn criterion_02_optimal_schedule() {
    let trace = &*TRACE10;
    let (n1, rho) = trace
        .iter()
        .copied()
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite ages"))
        .expect("nonempty trace");
    let (_, sched) = rho_for_fixed_n1(n1, &cfg(10.0), &model()).expect("argmin resolves");
    let m = sched.attempts();
    let pass = (118..=120).contains(&n1) && m == 6 && (204.0..=212.0).contains(&rho);
    report(
        2,
        "optimal schedule",
        pass,
        &format!("N_1* = {n1} (target 119±1), m = {m} (target 6), rho0* = {rho:.3} (target 208±4)"),
    );
}

#[test]
fn criterion_03_route_identity() {
    let (sol, _) = &*SOLVE10;
    let trace_min = TRACE10
        .iter()
        .map(|(_, rho)| *rho)
        .fold(f64::INFINITY, f64::min);
    let rel = (sol.rho_star - trace_min).abs() / trace_min;
    report(
        3,
        "multiplier route matches pinned route",
        rel <= 0.005,
        &format!(
            "p(lambda*)+lambda* = {:.4} vs min-over-N1 {trace_min:.4} ({:.4}% relative)",
            sol.rho_star,
            100.0 * rel
        ),
    );
}

#[test]
fn criterion_04_fixed_attempt_budget() {
    let mut c = cfg(10.0);
    c.fixed_m = Some(5);
    let sol = solve(&c, &model()).expect("budgeted solve");
    let pass = (136..=138).contains(&sol.n1_star);
    report(
        4,
        "fixed-attempt-budget first blocklength",
        pass,
        &format!(
            "selected N_1 = {} with age {:.3} (target 137±1, which has age {:.3}); \
             the 5- and 6-attempt pinned-N_1 families are near-tied (within ~0.1 time \
             units) for N_1 between 119 and 136, so the attempt-count map is not crisp \
             there and the budget filter admits a smaller N_1 with a lower age",
            sol.n1_star,
            sol.rho_star,
            TRACE10
                .iter()
                .find(|(n1, _)| *n1 == 137)
                .map(|(_, rho)| *rho)
                .unwrap_or(f64::NAN)
        ),
    );
}

#[test]
fn criterion_05_dominance_sweep() {
    let mut detail = String::new();
    let mut pass = true;
    let mut crossover: Option<f64> = None;
    for rows in SWEEP.iter() {
        let beta = rows[0].beta;
        let harq = row(rows, "harq").aoi_zero_wait.expect("harq solved");
        let iir = row(rows, "iir").aoi_with_wait.expect("iir solved");
        let fr_no = row(rows, "fr-no-replace").aoi_with_wait.expect("fr solved");
        let fr_re = row(rows, "fr-replace").aoi_zero_wait.expect("fr solved");
        if harq > iir || harq > fr_no {
            pass = false;
            detail = format!("dominance broken at beta = {beta}: harq {harq:.3}, iir {iir:.3}, fr-no-replace {fr_no:.3}");
            break;
        }
        if crossover.is_none() && fr_re < harq {
            crossover = Some(beta);
        }
    }
    if pass {
        match crossover {
            Some(b) if (100.0..=140.0).contains(&b) => {
                detail = format!(
                    "schedule beats iir and fr-no-replace at all 16 grid points; fr-replace first wins at beta = {b}"
                );
            }
            other => {
                pass = false;
                detail = format!("fr-replace crossover at {other:?}, expected within [100, 140]");
            }
        }
    }
    report(5, "dominance sweep", pass, &detail);
}

#[test]
fn criterion_06_rounding_robustness() {
    let mut worst = 0.0f64;
    let mut worst_beta = 0.0;
    for rows in SWEEP.iter() {
        let real = row(rows, "harq").aoi_zero_wait.expect("harq solved");
        let rounded = row(rows, "harq-rounded").aoi_zero_wait.expect("rounded solved");
        let rel = (rounded - real).abs() / real;
        if rel > worst {
            worst = rel;
            worst_beta = rows[0].beta;
        }
    }
    report(
        6,
        "rounding robustness",
        worst <= 0.01,
        &format!("worst rounding shift {:.4}% at beta = {worst_beta} (limit 1%)", 100.0 * worst),
    );
}

#[test]
fn criterion_07_stationarity_oracle() {
    let m = model();
    let mut worst_grad = 0.0f64;
    let mut worst_fd = 0.0f64;
    for &beta in &[10.0, 15.0, 20.0] {
        let c = cfg(beta);
        let sol = solve(&c, &m).expect("solve");
        let sched = &sol.real_schedule;
        let dist = build_dist(sched, &m).expect("dist");
        let obj = (1.0 - sol.lambda_star) * dist.mean() + 0.5 * dist.second_moment();
        let limit = 1e-4 * (1.0 + obj.abs());
        for f in 1..sched.attempts() {
            let (dm1, dm2) = moment_partials(sched, &m, f).expect("partials");
            let grad = ((1.0 - sol.lambda_star) * dm1 + 0.5 * dm2).abs() / limit;
            worst_grad = worst_grad.max(grad);

            // Finite-difference cross-check of the closed-form partials.
            let h = 1e-3;
            let perturb = |delta: f64| {
                let mut n = sched.blocklengths().to_vec();
                n[f - 1] += delta;
                let s = Schedule::new(sched.k(), sched.beta(), n).expect("valid perturbation");
                build_dist(&s, &m).expect("dist").moments()
            };
            let (m1_hi, m2_hi) = perturb(h);
            let (m1_lo, m2_lo) = perturb(-h);
            let fd1 = (m1_hi - m1_lo) / (2.0 * h);
            let fd2 = (m2_hi - m2_lo) / (2.0 * h);
            let noise1 = 100.0 * f64::EPSILON * dist.mean() / h;
            let noise2 = 100.0 * f64::EPSILON * dist.second_moment() / h;
            worst_fd = worst_fd
                .max((dm1 - fd1).abs() / (1e-5 * dm1.abs().max(noise1)).max(noise1))
                .max((dm2 - fd2).abs() / (1e-5 * dm2.abs().max(noise2)).max(noise2));
        }
    }
    let pass = worst_grad <= 1.0 && worst_fd <= 1.0;
    report(
        7,
        "stationarity oracle",
        pass,
        &format!(
            "max |gradient| = {:.3}x the 1e-4(1+|p|) limit; max partial-vs-FD deviation = {:.3}x its 1e-5 relative budget",
            worst_grad, worst_fd
        ),
    );
}

#[test]
fn criterion_08_waiting_policy_properties() {
    let m = model();
    let (sol, _) = &*SOLVE10;
    let dists: Vec<(&str, ServiceTimeDist)> = vec![
        ("two-point", ServiceTimeDist::from_parts(vec![15.0, 30.0], vec![0.5, 0.5]).unwrap()),
        ("deterministic", ServiceTimeDist::from_parts(vec![202.0], vec![1.0]).unwrap()),
        ("dispersed", ServiceTimeDist::from_parts(vec![5.0, 100.0], vec![0.9, 0.1]).unwrap()),
        ("optimal-schedule", build_dist(&sol.schedule, &m).unwrap()),
        ("geometric", geometric_service_dist(74.0, 0.3, 1e-12).unwrap()),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (name, dist) in &dists {
        let ws = solve_gamma(dist);
        if ws.gamma_star <= 0.0 || ws.aoi_with_wait > ws.aoi_zero_wait + 1e-12 {
            pass = false;
            detail = format!("{name}: gamma* = {}, with-wait {} vs zero-wait {}", ws.gamma_star, ws.aoi_with_wait, ws.aoi_zero_wait);
            break;
        }
    }

    // Deterministic service times solve in closed form.
    let det = solve_gamma(&dists[1].1);
    if pass && (det.eta_star != 303.0 || det.gamma_star != 101.0) {
        pass = false;
        detail = format!("deterministic: eta* = {}, gamma* = {}", det.eta_star, det.gamma_star);
    }

    // Grid-search oracle on the two-point distribution.
    if pass {
        let dist = &dists[0].1;
        let ws = solve_gamma(dist);
        let mut grid_best = f64::INFINITY;
        let mut g = 0.0;
        while g <= 60.0 {
            let (l, q) = epoch_moments(dist, g);
            grid_best = grid_best.min(q / l);
            g += 1e-3;
        }
        let (l, q) = epoch_moments(dist, ws.gamma_star);
        if (ws.eta_star - grid_best).abs() > 1e-2 || q / l > grid_best + 1e-2 {
            pass = false;
            detail = format!("two-point: eta* = {}, grid best {grid_best}", ws.eta_star);
        } else {
            detail = format!(
                "gamma* > 0 on all {} distributions; deterministic eta* = 303 and gamma* = 101 exactly; two-point grid search agrees within 1e-2",
                dists.len()
            );
        }
    }
    report(8, "waiting-policy properties", pass, &detail);
}

#[test]
fn criterion_09_simulator_concordance() {
    let m = model();
    let beta10 = build_dist(&SOLVE10.0.schedule, &m).unwrap();
    let gamma10 = solve_gamma(&beta10).gamma_star;
    let sol20 = solve(&cfg(20.0), &m).unwrap();
    let beta20 = build_dist(&sol20.schedule, &m).unwrap();
    let cap = aoi_harq::baselines::default_iir_cap(&m).unwrap();
    let iir_best = aoi_harq::baselines::iir_aoi(64, 10.0, &m, cap).unwrap();
    let iir10 = aoi_harq::baselines::iir_dist(64, 10.0, &m, iir_best.n1_star, cap).unwrap();
    let iir0 = aoi_harq::baselines::iir_dist(64, 0.0, &m, 64, cap).unwrap();
    let p150 = m.ack_prob(150.0).unwrap();
    let fr10 = geometric_service_dist(160.0, p150, 1e-12).unwrap();
    let two = ServiceTimeDist::from_parts(vec![15.0, 30.0], vec![0.5, 0.5]).unwrap();
    let det = ServiceTimeDist::from_parts(vec![202.0], vec![1.0]).unwrap();

    // (label, distribution, gamma, seed)
    let service_cases: Vec<(&str, &ServiceTimeDist, f64, u64)> = vec![
        ("harq beta=10 zero-wait", &beta10, 0.0, 101),
        ("harq beta=10 threshold", &beta10, gamma10, 102),
        ("harq beta=20 zero-wait", &beta20, 0.0, 103),
        ("iir beta=10", &iir10, 0.0, 104),
        ("iir beta=0", &iir0, 0.0, 105),
        ("fr-no-replace n1=150", &fr10, 0.0, 106),
        ("fr-no-replace threshold", &fr10, solve_gamma(&fr10).gamma_star, 107),
        ("two-point hand value", &two, 0.0, 108),
        ("deterministic", &det, 0.0, 109),
    ];

    let mut pass = true;
    let mut detail = String::new();
    let mut checked = 0;
    for (label, dist, gamma, seed) in service_cases {
        let (l, q) = epoch_moments(dist, gamma);
        let analytical = q / l;
        let r = simulate(
            &SimConfig { epochs: 1_000_000, seed, gamma },
            &SimScheme::Service((*dist).clone()),
        );
        checked += 1;
        if (r.aoi_estimate - analytical).abs() > 3.0 * r.std_error {
            pass = false;
            detail = format!(
                "{label}: simulated {} vs analytical {analytical} (se {})",
                r.aoi_estimate, r.std_error
            );
            break;
        }
        if label == "two-point hand value" && (r.aoi_estimate - 35.0).abs() > 3.0 * r.std_error {
            pass = false;
            detail = format!("two-point estimate {} not within 3 sigma of 35.0", r.aoi_estimate);
            break;
        }
    }
    if pass {
        for (t, p, seed) in [(160.0, p150, 110u64), (150.0 + 120.0, m.ack_prob(150.0).unwrap(), 111)] {
            let analytical = t * (1.0 / p + 0.5);
            let r = simulate(
                &SimConfig { epochs: 1_000_000, seed, gamma: 0.0 },
                &SimScheme::FrReplace { service_time: t, ack_prob: p },
            );
            checked += 1;
            if (r.aoi_estimate - analytical).abs() > 3.0 * r.std_error {
                pass = false;
                detail = format!("fr-replace t={t}: simulated {} vs {analytical}", r.aoi_estimate);
                break;
            }
        }
    }
    if pass {
        detail = format!("{checked} (scheme, beta) pairs within 3 standard errors at 1e6 epochs");
    }
    report(9, "simulator concordance", pass, &detail);
}

#[test]
fn criterion_10_monotonicity_suite() {
    let m = model();
    let mut pass = true;
    let mut detail = String::new();

    'outer: for &beta in &[10.0, 15.0, 20.0] {
        let c = cfg(beta);
        let mut lambda_max = 1.0;
        while p_lambda(lambda_max, &c, &m).expect("p(lambda)").0 >= 0.0 {
            lambda_max *= 2.0;
        }
        let mut prev_p = f64::INFINITY;
        let mut prev_e = 0.0;
        for i in 0..50 {
            let lambda = lambda_max * i as f64 / 49.0;
            let (p, sched) = p_lambda(lambda, &c, &m).expect("p(lambda)");
            let e = build_dist(&sched, &m).expect("dist").mean();
            // 1e-9 absolute slack covers float noise only.
            if p > prev_p + 1e-9 || e < prev_e - 1e-9 {
                pass = false;
                detail = format!(
                    "beta = {beta}, lambda = {lambda:.3}: p {p:.6} (prev {prev_p:.6}), E[tau] {e:.6} (prev {prev_e:.6})"
                );
                break 'outer;
            }
            prev_p = p;
            prev_e = e;
        }
    }

    // Optimal first blocklength does not decrease with the processing delay.
    if pass {
        let mut prev_n1 = 0;
        for &beta in &[10.0, 15.0, 20.0] {
            let trace = solve_with_trace(&cfg(beta), &m).expect("trace").objective_trace;
            let (n1, _) = trace
                .iter()
                .copied()
                .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
                .expect("nonempty");
            if n1 < prev_n1 {
                pass = false;
                detail = format!("N_1* dropped from {prev_n1} to {n1} at beta = {beta}");
                break;
            }
            prev_n1 = n1;
        }
        if pass {
            detail = format!(
                "p nonincreasing and E[tau] nondecreasing on 50-point grids at beta = 10, 15, 20; N_1* nondecreasing (ends at {prev_n1})"
            );
        }
    }
    report(10, "monotonicity suite", pass, &detail);
}
