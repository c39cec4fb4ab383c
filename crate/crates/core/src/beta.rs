//! Arithmetic in `Q(β)` where `β ∈ (0, 1)` is the root of `Sx² + Lx − 1`.
//!
//! Elements are stored as `a + bβ` with arbitrary-precision rational
//! coefficients, reduced with `β² = (1 − Lβ)/S`. When `L² + 4S` is a perfect
//! square the polynomial factors and `β` is rational (e.g. `L = 1, S = 2`
//! gives `β = 1/2`); the pair representation is then not unique, so equality
//! and ordering are always decided numerically through [`QBeta::exact_cmp`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The pair `(L, S)`: `L` long intervals of length `β` followed by `S` short
/// intervals of length `β²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LsParams {
    l: u32,
    s: u32,
}

impl LsParams {
    pub fn new(l: u32, s: u32) -> Result<Self> {
        if l == 0 || s == 0 {
            return Err(Error::InvalidParams { l, s });
        }
        Ok(Self { l, s })
    }

    pub fn long(&self) -> u32 {
        self.l
    }

    pub fn short(&self) -> u32 {
        self.s
    }

    /// `L² + 4S`, the discriminant of `Sx² + Lx − 1`.
    pub fn discriminant(&self) -> u64 {
        let l = u64::from(self.l);
        l * l + 4 * u64::from(self.s)
    }

    /// `β` as a rational number when the discriminant is a perfect square.
    pub fn rational_beta(&self) -> Option<BigRational> {
        let d = self.discriminant();
        let r = d.sqrt();
        (r * r == d).then(|| {
            BigRational::new(
                BigInt::from(r) - BigInt::from(self.l),
                BigInt::from(2 * u64::from(self.s)),
            )
        })
    }
}

impl fmt::Display for LsParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(L={}, S={})", self.l, self.s)
    }
}

/// Which of the three discrepancy behaviours a parameter pair falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `S < L + 1`, `Sβ < 1`: discrepancy of order `1/t_n`.
    Low,
    /// `S = L + 1`, `Sβ = 1`: order `log t_n / t_n`.
    Critical,
    /// `S > L + 1`, `Sβ > 1`: order `t_n^{-γ}`.
    High,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Low => "LOW",
            Regime::Critical => "CRITICAL",
            Regime::High => "HIGH",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Regime of `(L, S)`, decided by comparing `S` with `L + 1` as integers.
pub fn classify_regime(params: LsParams) -> Regime {
    match params.s.cmp(&(params.l + 1)) {
        Ordering::Less => Regime::Low,
        Ordering::Equal => Regime::Critical,
        Ordering::Greater => Regime::High,
    }
}

/// Floating-point `β`: the radical `(√(L²+4S) − L)/(2S)` written in its
/// cancellation-free form `2/(L + √(L²+4S))`, then one Newton step.
pub fn beta_approx<F: Real>(params: LsParams) -> F {
    let l = F::of(f64::from(params.l));
    let s = F::of(f64::from(params.s));
    let two = F::of(2.0);
    let disc = l * l + F::of(4.0) * s;
    let x = two / (l + disc.sqrt());
    let residual = (s * x + l) * x - F::one();
    x - residual / (two * s * x + l)
}

/// `β` as the exact field generator together with its `f64` approximation.
pub fn solve_beta(params: LsParams) -> (QBeta, f64) {
    (QBeta::beta(params), beta_approx::<f64>(params))
}

/// Sign of `a + bβ` for integer coefficients.
///
/// With `r = −a/b` the sign is `sign(b)·sign(β − r)`; `β − r` is positive when
/// `r ≤ 0`, negative when `r ≥ 1`, and otherwise has the sign of `−p(r)` with
/// `p(x) = Sx² + Lx − 1` increasing on `(0, 1)`. `b²p(r) = Sa² − Lab − b²`.
pub(crate) fn sign_linear<T>(a: &T, b: &T, params: LsParams) -> Ordering
where
    T: Integer + Signed + Clone + From<u32>,
{
    let zero = T::zero();
    if b.is_zero() {
        return a.cmp(&zero);
    }
    let b_sign = b.cmp(&zero);
    let beta_minus_r = if !(a.clone() * b.clone()).is_negative() {
        Ordering::Greater
    } else if !((zero.clone() - a.clone() - b.clone()) * b.clone()).is_negative() {
        Ordering::Less
    } else {
        let l = T::from(params.l);
        let s = T::from(params.s);
        let p = s * a.clone() * a.clone() - l * a.clone() * b.clone() - b.clone() * b.clone();
        zero.cmp(&p)
    };
    match b_sign {
        Ordering::Greater => beta_minus_r,
        _ => beta_minus_r.reverse(),
    }
}

/// Element `a + bβ` of `Q(β)` for a fixed `(L, S)`.
#[derive(Clone, Debug)]
pub struct QBeta {
    a: BigRational,
    b: BigRational,
    params: LsParams,
}

impl QBeta {
    pub fn new(a: BigRational, b: BigRational, params: LsParams) -> Self {
        Self { a, b, params }
    }

    pub fn from_integers(a: i64, b: i64, params: LsParams) -> Self {
        Self::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
            params,
        )
    }

    pub fn zero(params: LsParams) -> Self {
        Self::from_integers(0, 0, params)
    }

    pub fn one(params: LsParams) -> Self {
        Self::from_integers(1, 0, params)
    }

    /// The generator `β` itself, `0 + 1β`.
    pub fn beta(params: LsParams) -> Self {
        Self::from_integers(0, 1, params)
    }

    /// `β⁻¹ = L + Sβ`, from `β(L + Sβ) = 1`.
    pub fn beta_inverse(params: LsParams) -> Self {
        Self::from_integers(i64::from(params.l), i64::from(params.s), params)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn params(&self) -> LsParams {
        self.params
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.params == other.params {
            Ok(())
        } else {
            Err(Error::MismatchedParams {
                left: self.params,
                right: other.params,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&self.a + &other.a, &self.b + &other.b, self.params))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&self.a - &other.a, &self.b - &other.b, self.params))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let l = BigRational::from_integer(self.params.l.into());
        let s = BigRational::from_integer(self.params.s.into());
        let bb = &self.b * &other.b;
        let a = &self.a * &other.a + &bb / &s;
        let b = &self.a * &other.b + &other.a * &self.b - bb * l / s;
        Ok(Self::new(a, b, self.params))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.checked_mul(&other.recip()?)
    }

    /// Multiplicative inverse via the conjugate `a + bβ'`, `β' = −L/S − β`.
    pub fn recip(&self) -> Result<Self> {
        let l = BigRational::from_integer(self.params.l.into());
        let s = BigRational::from_integer(self.params.s.into());
        let norm = &self.a * &self.a - &self.a * &self.b * &l / &s - &self.b * &self.b / &s;
        if !norm.is_zero() {
            let a = (&self.a - &self.b * &l / &s) / &norm;
            let b = -&self.b / &norm;
            return Ok(Self::new(a, b, self.params));
        }
        // A zero norm with a nonzero value only happens when β is rational.
        match self.params.rational_beta() {
            Some(beta) => {
                let value = &self.a + &self.b * beta;
                if value.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Self::new(value.recip(), BigRational::zero(), self.params))
                }
            }
            None => Err(Error::DivisionByZero),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.a * k, &self.b * k, self.params)
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.params);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact sign of the represented real number.
    pub fn signum(&self) -> Ordering {
        // Clearing positive denominators preserves the sign.
        let a = self.a.numer() * self.b.denom();
        let b = self.b.numer() * self.a.denom();
        sign_linear(&a, &b, self.params)
    }

    /// Exact comparison of the represented reals; no floating point involved.
    pub fn exact_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.signum())
    }

    pub fn is_zero_value(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    /// The value as an integer when it is one.
    ///
    /// Anything equal to a rational number at both roots of `Sx² + Lx − 1`
    /// has `b = 0`, so the check is on the representation.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.b.is_zero() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    /// `a + b·β̂` with the `f64` approximation of `β`. The error is about
    /// `|b|·ulp(β)` plus one rounding, so cancellation between large `a` and
    /// `bβ` loses relative accuracy; prefer [`QBeta::to_f64`] for endpoints.
    pub fn to_f64_fast(&self) -> f64 {
        let beta = beta_approx::<f64>(self.params);
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * beta
    }

    /// Nearly correctly rounded conversion: `β` is replaced by a rational
    /// within `2^-256` and the resulting rational is rounded once.
    pub fn to_f64(&self) -> f64 {
        let value = &self.a + &self.b * rational_beta_approx(self.params, 256);
        value.to_f64().unwrap_or(f64::NAN)
    }

    fn assert_same(&self, other: &Self) {
        assert_eq!(
            self.params, other.params,
            "QBeta operands belong to different fields"
        );
    }
}

/// `β` as a rational, exact when `β ∈ Q`, else truncated to `bits` bits.
pub(crate) fn rational_beta_approx(params: LsParams, bits: u32) -> BigRational {
    if let Some(beta) = params.rational_beta() {
        return beta;
    }
    let scale = BigInt::one() << bits;
    let root = (BigInt::from(params.discriminant()) * &scale * &scale).sqrt();
    BigRational::new(
        root - BigInt::from(params.l) * &scale,
        BigInt::from(2 * u64::from(params.s)) * scale,
    )
}

impl PartialEq for QBeta {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.checked_sub(other).is_ok_and(|d| d.is_zero_value())
    }
}

impl Eq for QBeta {}

impl PartialOrd for QBeta {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QBeta {
    /// Orders by parameters first, then by value.
    fn cmp(&self, other: &Self) -> Ordering {
        self.params
            .cmp(&other.params)
            .then_with(|| self.exact_cmp(other).expect("same params"))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QBeta> for &QBeta {
            type Output = QBeta;
            fn $method(self, rhs: &QBeta) -> QBeta {
                self.assert_same(rhs);
                self.$checked(rhs).expect("checked above")
            }
        }

        impl $trait for QBeta {
            type Output = QBeta;
            fn $method(self, rhs: QBeta) -> QBeta {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Div<&QBeta> for &QBeta {
    type Output = QBeta;
    /// Panics on mismatched parameters or a zero divisor.
    fn div(self, rhs: &QBeta) -> QBeta {
        self.assert_same(rhs);
        self.checked_div(rhs).expect("nonzero divisor")
    }
}

impl Div for QBeta {
    type Output = QBeta;
    fn div(self, rhs: QBeta) -> QBeta {
        &self / &rhs
    }
}

impl Neg for &QBeta {
    type Output = QBeta;
    fn neg(self) -> QBeta {
        QBeta::new(-&self.a, -&self.b, self.params)
    }
}

impl Neg for QBeta {
    type Output = QBeta;
    fn neg(self) -> QBeta {
        -&self
    }
}

impl fmt::Display for QBeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}β", self.a, self.b)
    }
}

/// Constants attached to a parameter pair.
#[derive(Debug, Clone)]
pub struct DerivedConstants {
    pub params: LsParams,
    pub beta_float: f64,
    /// `A = (1 + Sβ)/(1 + Sβ²)`.
    pub a: QBeta,
    /// `B = (Sβ − Sβ²)/(1 + Sβ²)`.
    pub b: QBeta,
    /// `γ = 1 + log(Sβ)/log β`; only used for normalization in [`Regime::High`].
    pub gamma: f64,
    pub regime: Regime,
}

impl DerivedConstants {
    /// `Sβ` in double precision.
    pub fn s_beta(&self) -> f64 {
        f64::from(self.params.s) * self.beta_float
    }
}

pub fn derived_constants(params: LsParams) -> DerivedConstants {
    let beta = QBeta::beta(params);
    let s = QBeta::from_integers(i64::from(params.s), 0, params);
    let one = QBeta::one(params);
    let s_beta = &s * &beta;
    let s_beta2 = &s_beta * &beta;
    let denom = &one + &s_beta2;
    let a = &(&one + &s_beta) / &denom;
    let b = &(&s_beta - &s_beta2) / &denom;
    debug_assert!((&a - &b) == one);

    let beta_float = beta_approx::<f64>(params);
    let gamma = 1.0 + (f64::from(params.s) * beta_float).ln() / beta_float.ln();
    DerivedConstants {
        params,
        beta_float,
        a,
        b,
        gamma,
        regime: classify_regime(params),
    }
}
