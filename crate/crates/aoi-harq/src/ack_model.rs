//! ACK-probability models.
//!
//! A model maps a cumulative blocklength `n` (bits, real-valued) to the
//! probability that the receiver acknowledges successful decoding, together
//! with the derivative of that map. Two kinds are supported:
//!
//! * `GaussianTbcc`: the Gaussian-tail fit for tail-biting convolutional
//!   codes on an AWGN channel at 2 dB SNR,
//!   `P(n) = Q((k/n - mu) / sigma)` with `mu = 0.5666`, `sigma = 0.0573`,
//!   where `Q` is the standard normal upper-tail function.
//! * `Table`: a user-supplied strictly increasing `(N, p)` table with
//!   piecewise-linear interpolation, loaded from CSV.
//!
//! Both kinds are strictly increasing in `n` over their domain and are
//! immutable after construction, so they can be shared freely across threads.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Default rate-offset mean of the convolutional-code fit.
pub const TBCC_MU: f64 = 0.5666;
/// Default rate-offset standard deviation of the convolutional-code fit.
pub const TBCC_SIGMA: f64 = 0.0573;

/// Standard normal upper-tail function `Q(x) = P(Z > x)`.
///
/// Evaluated through `erfc` so that deep-tail values (down to ~1e-300)
/// retain full relative precision.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

#[derive(Debug, Clone)]
enum Kind {
    GaussianTbcc { mu: f64, sigma: f64 },
    Table { points: Vec<(f64, f64)> },
}

/// Monotone map from cumulative blocklength to ACK probability.
#[derive(Debug, Clone)]
pub struct AckModel {
    k: u32,
    kind: Kind,
}

impl AckModel {
    /// Gaussian fit for tail-biting convolutional codes with the default
    /// 2 dB constants.
    pub fn gaussian_tbcc(k: u32) -> Self {
        Self::gaussian_with_params(k, TBCC_MU, TBCC_SIGMA)
            .expect("default fit constants are valid")
    }

    /// Gaussian fit with explicit rate-offset constants.
    pub fn gaussian_with_params(k: u32, mu: f64, sigma: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("message length k must be positive".into()));
        }
        if sigma.is_nan() || sigma <= 0.0 || !mu.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "gaussian fit requires finite mu and sigma > 0, got mu={mu}, sigma={sigma}"
            )));
        }
        Ok(Self { k, kind: Kind::GaussianTbcc { mu, sigma } })
    }

    /// Table model from in-memory `(N, p)` pairs.
    ///
    /// Pairs must be strictly increasing in both coordinates with all
    /// probabilities in `[0, 1]`, and there must be at least two of them.
    pub fn from_table(k: u32, pairs: &[(u32, f64)]) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("message length k must be positive".into()));
        }
        Self::validate_pairs(pairs, 0)?;
        let points = pairs.iter().map(|&(n, p)| (f64::from(n), p)).collect();
        Ok(Self { k, kind: Kind::Table { points } })
    }

    /// Loads a table model from a CSV file with header `N,p_ack`.
    ///
    /// One `(N, p)` pair per line, strictly increasing in both columns.
    /// Errors name the offending 1-based line.
    pub fn from_csv(path: &Path, k: u32) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "N,p_ack" => {}
            Some((_, header)) => {
                return Err(Error::TableParse {
                    line: 1,
                    reason: format!("expected header `N,p_ack`, found `{}`", header.trim()),
                });
            }
            None => {
                return Err(Error::TableParse { line: 1, reason: "empty file".into() });
            }
        }

        let mut pairs: Vec<(u32, f64)> = Vec::new();
        let mut line_of_pair: Vec<usize> = Vec::new();
        for (idx, raw) in lines {
            let line = idx + 1;
            let row = raw.trim();
            if row.is_empty() {
                continue;
            }
            let mut cols = row.split(',');
            let (n_str, p_str) = match (cols.next(), cols.next(), cols.next()) {
                (Some(a), Some(b), None) => (a.trim(), b.trim()),
                _ => {
                    return Err(Error::TableParse {
                        line,
                        reason: format!("expected two comma-separated columns, found `{row}`"),
                    });
                }
            };
            let n: u32 = n_str.parse().map_err(|_| Error::TableParse {
                line,
                reason: format!("invalid blocklength `{n_str}`"),
            })?;
            let p: f64 = p_str.parse().map_err(|_| Error::TableParse {
                line,
                reason: format!("invalid probability `{p_str}`"),
            })?;
            if n == 0 {
                return Err(Error::TableParse { line, reason: "blocklength must be positive".into() });
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::TableParse {
                    line,
                    reason: format!("probability {p} outside [0, 1]"),
                });
            }
            pairs.push((n, p));
            line_of_pair.push(line);
        }

        if pairs.len() < 2 {
            let line = line_of_pair.last().copied().unwrap_or(1);
            return Err(Error::TableParse {
                line,
                reason: format!("need at least 2 table points, found {}", pairs.len()),
            });
        }
        for i in 1..pairs.len() {
            if pairs[i].0 <= pairs[i - 1].0 {
                return Err(Error::TableMonotonicity {
                    line: line_of_pair[i],
                    reason: format!("N={} does not increase past N={}", pairs[i].0, pairs[i - 1].0),
                });
            }
            if pairs[i].1 <= pairs[i - 1].1 {
                return Err(Error::TableMonotonicity {
                    line: line_of_pair[i],
                    reason: format!(
                        "p_ack={} does not increase past p_ack={}",
                        pairs[i].1,
                        pairs[i - 1].1
                    ),
                });
            }
        }

        Self::from_table(k, &pairs)
    }

    fn validate_pairs(pairs: &[(u32, f64)], line_offset: usize) -> Result<()> {
        if pairs.len() < 2 {
            return Err(Error::TableParse {
                line: line_offset,
                reason: format!("need at least 2 table points, found {}", pairs.len()),
            });
        }
        for (i, &(n, p)) in pairs.iter().enumerate() {
            if n == 0 {
                return Err(Error::TableParse {
                    line: line_offset + i,
                    reason: "blocklength must be positive".into(),
                });
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::TableParse {
                    line: line_offset + i,
                    reason: format!("probability {p} outside [0, 1]"),
                });
            }
            if i > 0 {
                let (pn, pp) = pairs[i - 1];
                if n <= pn {
                    return Err(Error::TableMonotonicity {
                        line: line_offset + i,
                        reason: format!("N={n} does not increase past N={pn}"),
                    });
                }
                if p <= pp {
                    return Err(Error::TableMonotonicity {
                        line: line_offset + i,
                        reason: format!("p_ack={p} does not increase past p_ack={pp}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Message length in bits.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Largest blocklength the model can evaluate. Unbounded for the
    /// Gaussian kind.
    pub fn max_blocklength(&self) -> f64 {
        match &self.kind {
            Kind::GaussianTbcc { .. } => f64::INFINITY,
            Kind::Table { points } => points.last().expect("validated nonempty").0,
        }
    }

    /// ACK probability at cumulative blocklength `n`.
    pub fn ack_prob(&self, n: f64) -> Result<f64> {
        self.check_domain(n)?;
        Ok(match &self.kind {
            Kind::GaussianTbcc { mu, sigma } => q_function((f64::from(self.k) / n - mu) / sigma),
            Kind::Table { points } => {
                let (i, x0, y0, x1, y1) = self.segment(points, n)?;
                let _ = i;
                y0 + (y1 - y0) * (n - x0) / (x1 - x0)
            }
        })
    }

    /// Complement `1 - P_ACK(n)`, computed on the failure side so that deep
    /// success regions (`P` close to 1) keep full relative precision.
    pub fn nack_prob(&self, n: f64) -> Result<f64> {
        self.check_domain(n)?;
        Ok(match &self.kind {
            Kind::GaussianTbcc { mu, sigma } => {
                q_function(-(f64::from(self.k) / n - mu) / sigma)
            }
            Kind::Table { points } => {
                let (_, x0, y0, x1, y1) = self.segment(points, n)?;
                (1.0 - y0) + (y0 - y1) * (n - x0) / (x1 - x0)
            }
        })
    }

    /// Derivative of the ACK probability with respect to `n` (per bit).
    ///
    /// For the Gaussian kind this is the closed form
    /// `phi(z) * k / (sigma * n^2)` with `z = (k/n - mu)/sigma`; for tables it
    /// is the slope of the active segment.
    pub fn ack_prob_deriv(&self, n: f64) -> Result<f64> {
        self.check_domain(n)?;
        Ok(match &self.kind {
            Kind::GaussianTbcc { mu, sigma } => {
                let z = (f64::from(self.k) / n - mu) / sigma;
                normal_pdf(z) * f64::from(self.k) / (sigma * n * n)
            }
            Kind::Table { points } => {
                let (_, x0, y0, x1, y1) = self.segment(points, n)?;
                (y1 - y0) / (x1 - x0)
            }
        })
    }

    fn check_domain(&self, n: f64) -> Result<()> {
        if !n.is_finite() || n < f64::from(self.k) {
            return Err(Error::BelowMessageLength { n, k: self.k });
        }
        Ok(())
    }

    /// Active interpolation segment for `n`; errors outside the table range.
    fn segment(&self, points: &[(f64, f64)], n: f64) -> Result<(usize, f64, f64, f64, f64)> {
        let min = points.first().expect("validated nonempty").0;
        let max = points.last().expect("validated nonempty").0;
        if n < min || n > max {
            return Err(Error::OutsideTableRange { n, min, max });
        }
        // Last segment owns the right endpoint.
        let i = points.partition_point(|&(x, _)| x <= n).min(points.len() - 1).max(1) - 1;
        let (x0, y0) = points[i];
        let (x1, y1) = points[i + 1];
        Ok((i, x0, y0, x1, y1))
    }
}
