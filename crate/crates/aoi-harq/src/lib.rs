//! Age-of-information-optimal transmission schedules for HARQ with
//! incremental redundancy.
//!
//! A transmitter repeatedly samples a source and delivers each `k`-bit
//! measurement over a noisy channel, extending the codeword with
//! incremental-redundancy bits after every NACK. Each decoding attempt
//! costs a fixed processing delay `beta` on top of the transmission time,
//! so the choice of cumulative blocklengths `N_1 < N_2 < ... < N_m`
//! trades retransmission risk against per-attempt overhead. This crate
//! finds the schedule minimizing the long-term average age of information
//! at the receiver, given any strictly increasing ACK-probability model:
//!
//! * [`ack_model`]: the Gaussian fit for tail-biting convolutional codes
//!   plus CSV-loadable table models, with derivatives;
//! * [`service_time`]: the induced discrete service-time distribution,
//!   its moments, and their closed-form partial derivatives;
//! * [`sdo`]: sequential differential optimization of the blocklengths
//!   inside a Dinkelbach fractional-programming loop;
//! * [`waiting`]: the optimal post-delivery waiting threshold for any
//!   fixed service-time distribution;
//! * [`baselines`]: bit-by-bit incremental redundancy and fixed-length
//!   repetition (with and without message replacement) for comparison;
//! * [`sim`]: a seeded Monte Carlo renewal simulator that cross-checks
//!   every analytical value;
//! * [`cli`]: the `aoi-harq` command-line front end.
//!
//! See the `examples/` directory for one runnable program per capability,
//! starting with `optimize_schedule`.

pub mod ack_model;
pub mod baselines;
pub mod cli;
pub mod error;
pub mod sdo;
pub mod service_time;
pub mod sim;
pub mod waiting;

pub use ack_model::AckModel;
pub use baselines::{fr_no_replace_aoi, fr_replace_aoi, iir_aoi, BaselineResult, BaselineScheme};
pub use error::{Error, Result};
pub use sdo::{round_schedule, solve, solve_with_trace, SdoConfig, SdoSolution};
pub use service_time::{build_dist, moment_partials, Schedule, ServiceTimeDist};
pub use sim::{simulate, SimConfig, SimResult, SimScheme};
pub use waiting::{epoch_moments, q_eta, solve_gamma, WaitingSolution};
