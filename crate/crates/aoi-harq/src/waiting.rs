//! Optimal waiting threshold for a fixed service-time distribution.
//!
//! With threshold `gamma`, each epoch starts by idling `W = [gamma - tau_prev]+`
//! before sampling, so the epoch length is `L = W + tau` and the age area is
//! `Q = tau_prev L + L^2 / 2`. Over the stationary epoch (with `tau_prev` and
//! `tau` i.i.d.):
//!
//! ```text
//! E[L] = E[[gamma - tau]+] + E[tau]
//! E[Q] = E[tau [gamma - tau]+] + E[tau]^2 + 0.5 E[([gamma - tau]+ + tau)^2]
//! ```
//!
//! The ratio `E[Q]/E[L]` is minimized by another Dinkelbach pass: for fixed
//! `eta`, `q(eta) = min_gamma E[Q] - eta E[L]` is attained at
//! `gamma(eta) = max(eta - E[tau], 0)`, `q` is strictly decreasing, and the
//! root `eta*` of `q` is the optimal age, with `gamma* = eta* - E[tau]`.
//! Since `q(E[tau]) = E[tau^2]/2 > 0` and `q(rho_0) <= 0` (zero wait attains
//! the ratio `rho_0`), the root always lies in `[E[tau], rho_0]` and
//! `gamma*` is strictly positive.

use crate::service_time::ServiceTimeDist;

/// Outcome of the threshold optimization.
#[derive(Debug, Clone, Copy)]
pub struct WaitingSolution {
    /// Optimal waiting threshold, always `> 0`.
    pub gamma_star: f64,
    /// Root of `q`; equals the optimal long-term average age.
    pub eta_star: f64,
    /// Average age under the optimal threshold (same as `eta_star`).
    pub aoi_with_wait: f64,
    /// Average age under the zero-wait policy, for comparison.
    pub aoi_zero_wait: f64,
}

/// Expected epoch length and age area for threshold `gamma`, as exact sums
/// over the (finite) support.
pub fn epoch_moments(dist: &ServiceTimeDist, gamma: f64) -> (f64, f64) {
    let (m1, m2) = dist.moments();
    let mut w1 = 0.0; // E[(gamma - tau)+]
    let mut w2 = 0.0; // E[((gamma - tau)+)^2]
    let mut tw = 0.0; // E[tau (gamma - tau)+]
    for (&t, &p) in dist.support().iter().zip(dist.mass()) {
        if t >= gamma {
            break; // support is sorted
        }
        let w = gamma - t;
        w1 += p * w;
        w2 += p * w * w;
        tw += p * t * w;
    }
    let e_l = w1 + m1;
    // Independence of the waiting epoch's two service draws expands the
    // square exactly: E[(W + tau)^2] = E[W^2] + 2 E[W] E[tau] + E[tau^2].
    let e_q = tw + m1 * m1 + 0.5 * (w2 + 2.0 * w1 * m1 + m2);
    (e_l, e_q)
}

/// Dinkelbach auxiliary value `q(eta) = min_gamma E[Q] - eta E[L]`, using the
/// stationary minimizer `gamma(eta) = max(eta - E[tau], 0)`.
pub fn q_eta(dist: &ServiceTimeDist, eta: f64) -> f64 {
    let gamma = (eta - dist.mean()).max(0.0);
    let (e_l, e_q) = epoch_moments(dist, gamma);
    e_q - eta * e_l
}

/// Solves for the optimal waiting threshold of `dist`.
pub fn solve_gamma(dist: &ServiceTimeDist) -> WaitingSolution {
    let m1 = dist.mean();
    let rho0 = dist.rho_zero_wait();
    let (mut lo, mut hi) = (m1, rho0);
    // q(lo) = E[tau^2]/2 > 0 and q(hi) <= 0: bisect to f64 resolution.
    let tol = 1e-13 * hi.max(1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if q_eta(dist, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Exact-root short cut keeps deterministic distributions bit-exact.
    let eta_star = if q_eta(dist, hi) == 0.0 { hi } else { 0.5 * (lo + hi) };
    WaitingSolution {
        gamma_star: eta_star - m1,
        eta_star,
        aoi_with_wait: eta_star,
        aoi_zero_wait: rho0,
    }
}
