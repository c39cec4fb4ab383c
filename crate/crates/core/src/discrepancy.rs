//! Star and extreme discrepancy of finite sorted point sets in `[0, 1]`, and
//! level-by-level scans of LS-sequences.
//!
//! For sorted `x_1 ≤ … ≤ x_N` put
//!
//! ```text
//! D⁺ = max(0, max_i (i/N − x_i)),   D⁻ = max(0, max_i (x_i − (i−1)/N)).
//! ```
//!
//! With half-open test intervals `[0, b)` and `[a, b)` these give
//! `D* = max(D⁺, D⁻)` and `D = D⁺ + D⁻` exactly.

use rayon::prelude::*;

use crate::beta::{derived_constants, LsParams, Regime};
use crate::error::{Error, Result};
use crate::partition::{counts, endpoints_with, generate_with, stream_points, Convention, Limits, Mode};
use crate::scalar::Real;

/// Single-pass `(D*, D)` over points delivered in ascending order.
#[derive(Debug, Clone)]
pub struct DiscrepancyAccumulator<F> {
    total: F,
    seen: u64,
    expected: u64,
    prev: F,
    below_prev: F,
    d_plus: F,
    d_minus: F,
}

impl<F: Real> DiscrepancyAccumulator<F> {
    /// `n` is the number of points that will be pushed.
    pub fn new(n: u64) -> Self {
        Self {
            total: F::of_count(n),
            seen: 0,
            expected: n,
            prev: F::neg_infinity(),
            below_prev: F::zero(),
            d_plus: F::zero(),
            d_minus: F::zero(),
        }
    }

    pub fn push(&mut self, x: F) -> Result<()> {
        let index = self.seen as usize;
        if !(x >= F::zero() && x <= F::one()) {
            return Err(Error::OutOfUnitInterval {
                index,
                value: x.to_f64().unwrap_or(f64::NAN),
            });
        }
        if x < self.prev {
            return Err(Error::Unsorted { index });
        }
        if self.seen == self.expected {
            return Err(Error::InvalidArgument(format!(
                "more than the announced {} points",
                self.expected
            )));
        }
        self.seen += 1;
        // `below` is (i−1)/N, `upto` is i/N.
        let below = self.below_prev;
        let upto = F::of_count(self.seen) / self.total;
        self.d_plus = self.d_plus.max(upto - x);
        self.d_minus = self.d_minus.max(x - below);
        self.below_prev = upto;
        self.prev = x;
        Ok(())
    }

    /// `(D*, D)`.
    pub fn finish(self) -> Result<(F, F)> {
        if self.seen == 0 {
            return Err(Error::EmptyPointSet);
        }
        if self.seen != self.expected {
            return Err(Error::InvalidArgument(format!(
                "announced {} points, received {}",
                self.expected, self.seen
            )));
        }
        Ok((self.d_plus.max(self.d_minus), self.d_plus + self.d_minus))
    }
}

/// `(D*, D)` of a sorted slice.
pub fn discrepancies<F: Real>(points: &[F]) -> Result<(F, F)> {
    let mut acc = DiscrepancyAccumulator::new(points.len() as u64);
    for &x in points {
        acc.push(x)?;
    }
    acc.finish()
}

/// `sup_{0<b≤1} |#{x_j < b}/N − b|`.
pub fn star_discrepancy<F: Real>(points: &[F]) -> Result<F> {
    discrepancies(points).map(|(star, _)| star)
}

/// `sup_{0≤a<b≤1} |#{a ≤ x_j < b}/N − (b − a)|`.
pub fn extreme_discrepancy<F: Real>(points: &[F]) -> Result<F> {
    discrepancies(points).map(|(_, d)| d)
}

/// How `D*` is rescaled into the constant `c_n` that a regime predicts bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// `c_n = t_n·D*`.
    Linear,
    /// `c_n = t_n·D*/ln t_n`.
    Logarithmic,
    /// `c_n = t_n^γ·D*`.
    Power(f64),
}

impl Normalization {
    pub fn for_regime(regime: Regime, gamma: f64) -> Self {
        match regime {
            Regime::Low => Normalization::Linear,
            Regime::Critical => Normalization::Logarithmic,
            Regime::High => Normalization::Power(gamma),
        }
    }

    pub fn apply(&self, d_star: f64, t: u64) -> Result<f64> {
        let tf = t as f64;
        match *self {
            Normalization::Linear => Ok(d_star * tf),
            Normalization::Logarithmic => {
                if t < 2 {
                    return Err(Error::LogUndefined(t));
                }
                Ok(d_star * tf / tf.ln())
            }
            Normalization::Power(gamma) => Ok(d_star * tf.powf(gamma)),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Normalization::Linear => "linear",
            Normalization::Logarithmic => "log",
            Normalization::Power(_) => "gamma",
        }
    }
}

/// The regime's own normalization of `D*`.
pub fn normalize(d_star: f64, t: u64, regime: Regime, gamma: f64) -> Result<f64> {
    Normalization::for_regime(regime, gamma).apply(d_star, t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyRow {
    pub n: u32,
    pub t: u64,
    pub d_star: f64,
    pub d: f64,
    pub normalized: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    NotBounded,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Bounded => "bounded",
            Verdict::NotBounded => "not-bounded",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub convention: Convention,
    pub mode: Mode,
    /// `None` uses the regime's own normalization.
    pub normalization: Option<Normalization>,
    /// Levels the band test looks at; `None` means the last 11 levels.
    pub window: Option<(u32, u32)>,
    pub ratio_limit: f64,
    pub slope_limit: f64,
    pub limits: Limits,
    /// Cap on `t_n` for streamed floating-point levels.
    pub max_stream_points: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            convention: Convention::RightEndpoints,
            mode: Mode::Float,
            normalization: None,
            window: None,
            ratio_limit: 5.0,
            slope_limit: 0.02,
            limits: Limits::default(),
            max_stream_points: 2_000_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegimeReport {
    pub params: LsParams,
    pub regime: Regime,
    pub gamma: f64,
    pub normalization: Normalization,
    pub convention: Convention,
    pub mode: Mode,
    pub rows: Vec<DiscrepancyRow>,
    pub window: (u32, u32),
    pub band_min: f64,
    pub band_max: f64,
    /// Least-squares slope of `ln c_n` against `n` over the window.
    pub slope: f64,
    pub verdict: Verdict,
}

/// Least-squares slope of `ln y` against `x`.
pub fn log_slope(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let mean_y = samples.iter().map(|s| s.1.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in samples {
        sxy += (x - mean_x) * (y.ln() - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    sxy / sxx
}

/// `(t_n, D*, D)` of level `n`.
pub fn level_discrepancy(params: LsParams, n: u32, config: &ScanConfig) -> Result<(u64, f64, f64)> {
    let c = counts(params, n);
    let t = c.t_u64().filter(|&t| t <= config.max_stream_points).ok_or_else(|| Error::ResourceCap {
        what: "streamed partition size t_n",
        requested: c.t.to_string(),
        cap: config.max_stream_points,
    })?;
    let (d_star, d) = match config.mode {
        Mode::Float => {
            let mut acc = DiscrepancyAccumulator::new(t);
            for x in stream_points::<f64>(params, n, config.convention)? {
                acc.push(x)?;
            }
            acc.finish()?
        }
        Mode::Exact => {
            let seq = generate_with(params, n, &config.limits)?;
            let pts = endpoints_with::<f64>(&seq, config.convention, Mode::Exact, &config.limits)?;
            discrepancies(pts.values())?
        }
    };
    Ok((t, d_star, d))
}

/// Computes `D*`, `D` and `c_n` for `n_min ..= n_max` and tests the window
/// for boundedness: `band_max/band_min < ratio_limit` and a log-slope below
/// `slope_limit`. Levels run in parallel; rows come back ordered by `n`.
pub fn regime_scan(params: LsParams, n_min: u32, n_max: u32, config: &ScanConfig) -> Result<RegimeReport> {
    if n_min < 1 || n_max < n_min {
        return Err(Error::InvalidArgument(format!(
            "level range must satisfy 1 <= n_min <= n_max, got {n_min}..={n_max}"
        )));
    }
    let window = config.window.unwrap_or((n_min.max(n_max.saturating_sub(10)), n_max));
    if window.0 < n_min || window.1 > n_max || window.0 > window.1 {
        return Err(Error::InvalidArgument(format!(
            "window {}..={} outside scanned levels {n_min}..={n_max}",
            window.0, window.1
        )));
    }
    let constants = derived_constants(params);
    let normalization = config
        .normalization
        .unwrap_or_else(|| Normalization::for_regime(constants.regime, constants.gamma));

    let rows = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let (t, d_star, d) = level_discrepancy(params, n, config)?;
            Ok(DiscrepancyRow {
                n,
                t,
                d_star,
                d,
                normalized: normalization.apply(d_star, t)?,
                regime: constants.regime,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let windowed: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= window.0 && r.n <= window.1)
        .map(|r| (f64::from(r.n), r.normalized))
        .collect();
    let band_min = windowed.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let band_max = windowed.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let slope = if windowed.len() >= 2 { log_slope(&windowed) } else { 0.0 };
    let verdict = if band_max / band_min < config.ratio_limit && slope < config.slope_limit {
        Verdict::Bounded
    } else {
        Verdict::NotBounded
    };
    Ok(RegimeReport {
        params,
        regime: constants.regime,
        gamma: constants.gamma,
        normalization,
        convention: config.convention,
        mode: config.mode,
        rows,
        window,
        band_min,
        band_max,
        slope,
        verdict,
    })
}
