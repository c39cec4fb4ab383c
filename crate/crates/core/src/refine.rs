//! General ρ-refinement of partitions of `[0, 1]`.
//!
//! Every interval of maximal length is split positively homothetically to a
//! fixed template partition ρ. Kakutani's α-refinement is the template
//! `[α, 1 − α]`.

use crate::error::{Error, Result};
use crate::scalar::{NeumaierSum, Real};

/// Template partition: interval lengths in left-to-right order.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoSpec<F> {
    lengths: Vec<F>,
    /// Prefix sums, ending in exactly 1.
    offsets: Vec<F>,
}

impl<F: Real> RhoSpec<F> {
    pub fn lengths(&self) -> &[F] {
        &self.lengths
    }

    pub fn min_length(&self) -> F {
        self.lengths.iter().copied().fold(F::one(), F::min)
    }
}

pub fn make_rho<F: Real>(lengths: &[F]) -> Result<RhoSpec<F>> {
    if lengths.len() < 2 {
        return Err(Error::InvalidRho(format!(
            "need at least 2 intervals, got {}",
            lengths.len()
        )));
    }
    if let Some(bad) = lengths.iter().find(|&&x| x <= F::zero() || !x.is_finite()) {
        return Err(Error::InvalidRho(format!("nonpositive length {bad}")));
    }
    let sum = lengths.iter().copied().collect::<NeumaierSum<F>>().value();
    if (sum - F::one()).abs() > F::of(1e-9) {
        return Err(Error::InvalidRho(format!("lengths sum to {sum}, not 1")));
    }
    let lengths: Vec<F> = lengths.iter().map(|&x| x / sum).collect();
    let mut offsets = Vec::with_capacity(lengths.len());
    let mut acc = NeumaierSum::new();
    for &x in &lengths[..lengths.len() - 1] {
        acc.add(x);
        offsets.push(acc.value());
    }
    offsets.push(F::one());
    Ok(RhoSpec { lengths, offsets })
}

/// A finite partition by its endpoints. Interval lengths are carried
/// alongside, built multiplicatively, so equal-type intervals compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericPartition<F> {
    endpoints: Vec<F>,
    lengths: Vec<F>,
    generation: u32,
}

impl<F: Real> GenericPartition<F> {
    /// `ω = {[0, 1)}`.
    pub fn trivial() -> Self {
        Self {
            endpoints: vec![F::zero(), F::one()],
            lengths: vec![F::one()],
            generation: 0,
        }
    }

    pub fn endpoints(&self) -> &[F] {
        &self.endpoints
    }

    pub fn lengths(&self) -> &[F] {
        &self.lengths
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn interval_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn max_length(&self) -> F {
        self.lengths.iter().copied().fold(F::zero(), F::max)
    }

    /// `y_1, …, y_k`.
    pub fn right_endpoints(&self) -> &[F] {
        &self.endpoints[1..]
    }

    /// `y_0, …, y_{k−1}`.
    pub fn left_endpoints(&self) -> &[F] {
        &self.endpoints[..self.endpoints.len() - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineOptions {
    /// Intervals with length `≥ (1 − rel_tol)·max` count as maximal.
    pub rel_tol: f64,
    /// Shortest interval the engine will produce.
    pub min_length: f64,
    /// Interval-count cap for [`iterate`].
    pub max_intervals: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            min_length: 1e-15,
            max_intervals: 10_000_000,
        }
    }
}

pub fn rho_refine<F: Real>(
    pi: &GenericPartition<F>,
    rho: &RhoSpec<F>,
    opts: &RefineOptions,
) -> Result<GenericPartition<F>> {
    let threshold = (F::one() - F::of(opts.rel_tol)) * pi.max_length();
    let min_len = F::of(opts.min_length);
    let split = pi.lengths.iter().filter(|&&x| x >= threshold).count();
    let size = pi.lengths.len() + split * (rho.lengths.len() - 1);

    let mut endpoints = Vec::with_capacity(size + 1);
    let mut lengths = Vec::with_capacity(size);
    endpoints.push(F::zero());
    for (window, &len) in pi.endpoints.windows(2).zip(&pi.lengths) {
        let (start, end) = (window[0], window[1]);
        if len >= threshold {
            let (last, inner) = rho.offsets.split_last().expect("template has intervals");
            debug_assert!(*last == F::one());
            for &off in inner {
                endpoints.push(start + len * off);
            }
            endpoints.push(end);
            for &r in &rho.lengths {
                let sub = len * r;
                if sub < min_len {
                    return Err(Error::DepthLimit {
                        step: pi.generation + 1,
                    });
                }
                lengths.push(sub);
            }
        } else {
            endpoints.push(end);
            lengths.push(len);
        }
    }
    Ok(GenericPartition {
        endpoints,
        lengths,
        generation: pi.generation + 1,
    })
}

/// Per-step summary reported by [`iterate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSummary<F> {
    pub step: u32,
    pub intervals: usize,
    pub max_length: F,
}

impl<F: Real> StepSummary<F> {
    pub fn of(pi: &GenericPartition<F>) -> Self {
        Self {
            step: pi.generation,
            intervals: pi.interval_count(),
            max_length: pi.max_length(),
        }
    }
}

/// `n` successive ρ-refinements of `ω`; `observer` sees every partition,
/// from `ω` itself through the last one, which is returned.
pub fn iterate<F: Real, O>(
    rho: &RhoSpec<F>,
    n: u32,
    opts: &RefineOptions,
    mut observer: O,
) -> Result<GenericPartition<F>>
where
    O: FnMut(&GenericPartition<F>),
{
    let mut pi = GenericPartition::trivial();
    observer(&pi);
    for _ in 0..n {
        let next = rho_refine(&pi, rho, opts)?;
        if next.interval_count() > opts.max_intervals {
            return Err(Error::ResourceCap {
                what: "refinement interval count",
                requested: next.interval_count().to_string(),
                cap: opts.max_intervals as u64,
            });
        }
        pi = next;
        observer(&pi);
    }
    Ok(pi)
}

/// Kakutani's α-sequence `α^n ω`.
pub fn kakutani_alpha<F: Real>(alpha: F, n: u32) -> Result<GenericPartition<F>> {
    if !(alpha > F::zero() && alpha < F::one()) {
        return Err(Error::InvalidRho(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let rho = make_rho(&[alpha, F::one() - alpha])?;
    iterate(&rho, n, &RefineOptions::default(), |_| {})
}
