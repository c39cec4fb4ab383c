//! Equal-weight quadrature over partition endpoints.
//!
//! The estimate of `∫₀¹ f` is the mean of `f` over the endpoint set. Reports
//! compare the error with the Koksma bound `V(f)·D*`; that inequality is the
//! classical one for functions of bounded variation.

use std::ops::RangeInclusive;

use crate::beta::LsParams;
use crate::discrepancy::DiscrepancyAccumulator;
use crate::error::{Error, Result};
use crate::partition::{counts, stream_points, Convention};
use crate::scalar::{NeumaierSum, Real};

/// Threshold of the built-in step function, `1/√2`.
pub const STEP_THRESHOLD: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy)]
pub struct Integrand<F> {
    pub name: &'static str,
    pub evaluate: fn(F) -> F,
    pub exact_integral: f64,
    /// Total variation on `[0, 1]`; `None` when infinite.
    pub total_variation: Option<f64>,
}

fn constant<F: Real>(_: F) -> F {
    F::one()
}

fn identity<F: Real>(x: F) -> F {
    x
}

fn square<F: Real>(x: F) -> F {
    x * x
}

fn sin2pi<F: Real>(x: F) -> F {
    (F::TAU() * x).sin()
}

fn step<F: Real>(x: F) -> F {
    if x >= F::of(STEP_THRESHOLD) {
        F::one()
    } else {
        F::zero()
    }
}

impl<F: Real> Integrand<F> {
    pub fn constant() -> Self {
        Self {
            name: "const",
            evaluate: constant,
            exact_integral: 1.0,
            total_variation: Some(0.0),
        }
    }

    pub fn identity() -> Self {
        Self {
            name: "identity",
            evaluate: identity,
            exact_integral: 0.5,
            total_variation: Some(1.0),
        }
    }

    pub fn square() -> Self {
        Self {
            name: "square",
            evaluate: square,
            exact_integral: 1.0 / 3.0,
            total_variation: Some(1.0),
        }
    }

    /// `sin(2πx)`: rises by 1, falls by 2, rises by 1.
    pub fn sin2pi() -> Self {
        Self {
            name: "sin2pi",
            evaluate: sin2pi,
            exact_integral: 0.0,
            total_variation: Some(4.0),
        }
    }

    /// Indicator of `[1/√2, 1]`.
    pub fn step() -> Self {
        Self {
            name: "step",
            evaluate: step,
            exact_integral: 1.0 - STEP_THRESHOLD,
            total_variation: Some(1.0),
        }
    }

    pub fn builtins() -> [Self; 5] {
        [
            Self::constant(),
            Self::identity(),
            Self::square(),
            Self::sin2pi(),
            Self::step(),
        ]
    }

    pub fn builtin(name: &str) -> Option<Self> {
        Self::builtins().into_iter().find(|f| f.name == name)
    }

    pub fn eval(&self, x: F) -> F {
        (self.evaluate)(x)
    }
}

/// Mean of `f` over `points`, with compensated summation.
pub fn integrate<F: Real>(f: &Integrand<F>, points: &[F]) -> Result<F> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let sum: NeumaierSum<F> = points.iter().map(|&x| f.eval(x)).collect();
    Ok(sum.value() / F::of_count(points.len() as u64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub estimate: f64,
    pub abs_error: f64,
    /// `V(f)·D*`, absent for infinite variation.
    pub variation_bound: Option<f64>,
    pub bound_satisfied: Option<bool>,
}

fn report(f_integral: f64, variation: Option<f64>, estimate: f64, d_star: f64) -> ErrorReport {
    let abs_error = (estimate - f_integral).abs();
    let variation_bound = variation.map(|v| v * d_star);
    ErrorReport {
        estimate,
        abs_error,
        variation_bound,
        bound_satisfied: variation_bound.map(|b| abs_error <= b + 1e-12),
    }
}

pub fn error_report<F: Real>(f: &Integrand<F>, points: &[F], d_star: f64) -> Result<ErrorReport> {
    let estimate = integrate(f, points)?.as_f64();
    Ok(report(f.exact_integral, f.total_variation, estimate, d_star))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: u32,
    pub t: u64,
    pub d_star: f64,
    pub report: ErrorReport,
    /// `abs_error·t_n`.
    pub scaled_error: f64,
}

/// Per-level estimates over `ρ_{L,S}^n`, streamed so deep levels stay cheap.
pub fn convergence_table<F: Real>(
    f: &Integrand<F>,
    params: LsParams,
    levels: RangeInclusive<u32>,
    convention: Convention,
) -> Result<Vec<ConvergenceRow>> {
    levels
        .map(|n| {
            let t = counts(params, n).t_u64().ok_or_else(|| Error::ResourceCap {
                what: "partition size t_n",
                requested: counts(params, n).t.to_string(),
                cap: u64::MAX,
            })?;
            let mut acc = DiscrepancyAccumulator::<F>::new(t);
            let mut sum = NeumaierSum::<F>::new();
            for x in stream_points::<F>(params, n, convention)? {
                acc.push(x)?;
                sum.add(f.eval(x));
            }
            let d_star = acc.finish()?.0.as_f64();
            let estimate = (sum.value() / F::of_count(t)).as_f64();
            let report = report(f.exact_integral, f.total_variation, estimate, d_star);
            Ok(ConvergenceRow {
                n,
                t,
                d_star,
                report,
                scaled_error: report.abs_error * t as f64,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::star_discrepancy;

    const BETA: f64 = 0.618_033_988_749_894_9;

    fn p(l: u32, s: u32) -> LsParams {
        LsParams::new(l, s).unwrap()
    }

    #[test]
    fn integrate_examples() {
        let pts = [BETA * BETA, BETA, 1.0];
        assert_eq!(integrate(&Integrand::constant(), &pts).unwrap(), 1.0);
        let est = integrate(&Integrand::identity(), &pts).unwrap();
        assert!((est - 2.0 / 3.0).abs() < 1e-15);
        let grid: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
        assert!((integrate(&Integrand::identity(), &grid).unwrap() - 0.55).abs() < 1e-15);
        assert_eq!(integrate::<f64>(&Integrand::identity(), &[]), Err(Error::EmptyPointSet));
    }

    #[test]
    fn report_examples() {
        let pts = [BETA * BETA, BETA, 1.0];
        let d_star = star_discrepancy(&pts).unwrap();
        let r = error_report(&Integrand::identity(), &pts, d_star).unwrap();
        assert!((r.abs_error - 1.0 / 6.0).abs() < 1e-15);
        assert!((r.variation_bound.unwrap() - BETA * BETA).abs() < 1e-15);
        assert_eq!(r.bound_satisfied, Some(true));
        let c = error_report(&Integrand::constant(), &pts, d_star).unwrap();
        assert_eq!(c.abs_error, 0.0);
        assert_eq!(c.bound_satisfied, Some(true));
    }

    #[test]
    fn infinite_variation_not_applicable() {
        fn wild(x: f64) -> f64 {
            if x > 0.0 { x * (1.0 / x).sin() } else { 0.0 }
        }
        let f = Integrand {
            name: "wild",
            evaluate: wild,
            exact_integral: 0.378_530_017_124_161,
            total_variation: None,
        };
        let r = error_report(&f, &[0.25, 0.5, 0.75, 1.0], 0.25).unwrap();
        assert_eq!(r.variation_bound, None);
        assert_eq!(r.bound_satisfied, None);
    }

    #[test]
    fn lookup() {
        for name in ["const", "identity", "square", "sin2pi", "step"] {
            assert_eq!(Integrand::<f64>::builtin(name).unwrap().name, name);
        }
        assert!(Integrand::<f64>::builtin("cosine").is_none());
    }

    #[test]
    fn square_at_level_ten_within_koksma() {
        let rows = convergence_table(&Integrand::<f64>::square(), p(1, 1), 10..=10, Convention::RightEndpoints).unwrap();
        let row = rows[0];
        assert_eq!(row.t, 144);
        assert!(row.report.abs_error <= row.d_star);
    }

    #[test]
    fn sin_estimates_vanish() {
        let rows = convergence_table(&Integrand::<f64>::sin2pi(), p(1, 1), 2..=20, Convention::RightEndpoints).unwrap();
        assert!(rows.last().unwrap().report.abs_error < 1e-4);
        assert!(rows.iter().all(|r| r.report.bound_satisfied == Some(true)));
    }

    #[test]
    fn f32_integration() {
        let pts: Vec<f32> = (1..=4).map(|i| i as f32 / 4.0).collect();
        assert_eq!(integrate(&Integrand::identity(), &pts).unwrap(), 0.625f32);
    }
}
