//! Service-time distributions induced by a transmission schedule.
//!
//! A schedule fixes the cumulative blocklengths `N_1 < N_2 < ... < N_m`; with
//! a per-attempt processing delay `beta`, attempt `f` completes at time
//! `N_f + f * beta`. Under the approximation that an ACK at `N_f` implies an
//! ACK at every later blocklength, the service time `tau` is the discrete
//! random variable
//!
//! ```text
//! P(tau = N_1 +   beta) = P(N_1)
//! P(tau = N_f + f beta) = P(N_f) - P(N_{f-1})     2 <= f <= m-1
//! P(tau = N_m + m beta) = 1 - P(N_{m-1})
//! ```
//!
//! where `P` is the ACK-probability model. The residual convention on the
//! final attempt keeps the masses summing to one even when `P(N_m) < 1`.
//!
//! Everything here is a pure function of immutable inputs.

use crate::ack_model::AckModel;
use crate::error::{Error, Result};

/// Ordered cumulative blocklengths plus message length and processing delay.
///
/// Blocklengths are kept real-valued: the optimizer relaxes integrality and
/// only the final reported schedule is rounded.
#[derive(Debug, Clone)]
pub struct Schedule {
    k: u32,
    beta: f64,
    n: Vec<f64>,
}

impl Schedule {
    pub fn new(k: u32, beta: f64, n: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSchedule("message length k must be positive".into()));
        }
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidSchedule(format!("beta must be >= 0, got {beta}")));
        }
        if n.is_empty() {
            return Err(Error::InvalidSchedule("schedule needs at least one attempt".into()));
        }
        if n[0] < f64::from(k) {
            return Err(Error::InvalidSchedule(format!(
                "first blocklength {} is below k = {k}",
                n[0]
            )));
        }
        for w in n.windows(2) {
            if w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::InvalidSchedule(format!(
                    "blocklengths must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if n.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSchedule("blocklengths must be finite".into()));
        }
        Ok(Self { k, beta, n })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Cumulative blocklengths `N_1..N_m`.
    pub fn blocklengths(&self) -> &[f64] {
        &self.n
    }

    /// Number of transmission attempts `m`.
    pub fn attempts(&self) -> usize {
        self.n.len()
    }

    /// Terminal blocklength `N_m`.
    pub fn n_max(&self) -> f64 {
        *self.n.last().expect("schedule is nonempty")
    }

    /// Per-attempt transmission lengths: `N_1, N_2 - N_1, ...`.
    pub fn ir_lengths(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n.len());
        let mut prev = 0.0;
        for &x in &self.n {
            out.push(x - prev);
            prev = x;
        }
        out
    }

    /// Completion time of attempt `f` (1-based): `N_f + f * beta`.
    pub fn attempt_time(&self, f: usize) -> f64 {
        self.n[f - 1] + f as f64 * self.beta
    }
}

/// Finite discrete service-time distribution with cached first and second
/// moments.
#[derive(Debug, Clone)]
pub struct ServiceTimeDist {
    support: Vec<f64>,
    mass: Vec<f64>,
    m1: f64,
    m2: f64,
}

impl ServiceTimeDist {
    /// Builds a distribution from raw support/mass vectors.
    ///
    /// Support must be strictly increasing and positive, masses nonnegative
    /// and summing to one within 1e-12.
    pub fn from_parts(support: Vec<f64>, mass: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != mass.len() {
            return Err(Error::InvalidSchedule(
                "support and mass must be nonempty and equal-length".into(),
            ));
        }
        if support[0] <= 0.0 {
            return Err(Error::InvalidSchedule("support must be positive".into()));
        }
        for w in support.windows(2) {
            if w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::InvalidSchedule("support must be strictly increasing".into()));
            }
        }
        for (i, &p) in mass.iter().enumerate() {
            if p.is_nan() || p < 0.0 {
                return Err(Error::NegativeMass { attempt: i + 1 });
            }
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSchedule(format!(
                "masses sum to {total}, expected 1 within 1e-12"
            )));
        }
        let m1: f64 = support.iter().zip(&mass).map(|(t, p)| t * p).sum();
        let m2: f64 = support.iter().zip(&mass).map(|(t, p)| t * t * p).sum();
        Ok(Self { support, mass, m1, m2 })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// First moment `E[tau]`.
    pub fn mean(&self) -> f64 {
        self.m1
    }

    /// Second moment `E[tau^2]`.
    pub fn second_moment(&self) -> f64 {
        self.m2
    }

    /// `(E[tau], E[tau^2])`.
    pub fn moments(&self) -> (f64, f64) {
        (self.m1, self.m2)
    }

    pub fn min_support(&self) -> f64 {
        self.support[0]
    }

    /// Zero-wait long-term average age: `E[tau] + E[tau^2] / (2 E[tau])`.
    pub fn rho_zero_wait(&self) -> f64 {
        self.m1 + self.m2 / (2.0 * self.m1)
    }

    /// `P(tau <= t)`.
    pub fn cdf(&self, t: f64) -> f64 {
        self.support
            .iter()
            .zip(&self.mass)
            .take_while(|(s, _)| **s <= t)
            .map(|(_, p)| p)
            .sum()
    }
}

/// Builds the service-time distribution of a schedule under a model.
pub fn build_dist(sched: &Schedule, model: &AckModel) -> Result<ServiceTimeDist> {
    let m = sched.attempts();
    let mut support = Vec::with_capacity(m);
    let mut mass = Vec::with_capacity(m);
    if m == 1 {
        support.push(sched.attempt_time(1));
        mass.push(1.0);
        return ServiceTimeDist::from_parts(support, mass);
    }
    let mut prev_p = 0.0;
    for f in 1..=m {
        support.push(sched.attempt_time(f));
        let p = if f < m {
            let pf = model.ack_prob(sched.blocklengths()[f - 1])?;
            let delta = pf - prev_p;
            prev_p = pf;
            delta
        } else {
            1.0 - prev_p
        };
        if p < 0.0 {
            return Err(Error::NegativeMass { attempt: f });
        }
        mass.push(p);
    }
    ServiceTimeDist::from_parts(support, mass)
}

/// Partial derivatives of `E[tau]` and `E[tau^2]` with respect to `N_f`,
/// for a free attempt index `1 <= f <= m-1` (the terminal blocklength is
/// fixed and carries no derivative).
///
/// With `A_f = N_f + f beta` and `dP = P(N_f) - P(N_{f-1})` (just `P(N_1)`
/// for `f = 1`):
///
/// ```text
/// dE[tau]  /dN_f = dP + (A_f - A_{f+1}) P'(N_f)
/// dE[tau^2]/dN_f = 2 A_f dP + (A_f^2 - A_{f+1}^2) P'(N_f)
/// ```
pub fn moment_partials(sched: &Schedule, model: &AckModel, f: usize) -> Result<(f64, f64)> {
    let m = sched.attempts();
    if f < 1 || f >= m {
        return Err(Error::IndexOutOfRange { f, max: m.saturating_sub(1) });
    }
    let n = sched.blocklengths();
    let a_f = sched.attempt_time(f);
    let a_next = sched.attempt_time(f + 1);
    let p_f = model.ack_prob(n[f - 1])?;
    let dp = if f == 1 { p_f } else { p_f - model.ack_prob(n[f - 2])? };
    let slope = model.ack_prob_deriv(n[f - 1])?;
    let dm1 = dp + (a_f - a_next) * slope;
    let dm2 = 2.0 * a_f * dp + (a_f * a_f - a_next * a_next) * slope;
    Ok((dm1, dm2))
}
