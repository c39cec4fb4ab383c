//! The LS-sequence `ρ_{L,S}^n` as a long/short symbol sequence.
//!
//! At level `n` a long interval has length `β^n` and a short one `β^{n+1}`.
//! One refinement replaces every long interval by `L` longs followed by `S`
//! shorts and turns every short interval into a long one.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::beta::{beta_approx, derived_constants, rational_beta_approx, sign_linear, LsParams, QBeta};
use crate::error::{Error, Result};
use crate::scalar::{NeumaierSum, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Symbol {
    Long,
    Short,
}

/// Resource guards for materialized partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `t_n` for which a symbol sequence is built in memory.
    pub max_symbols: u64,
    /// Largest `t_n` for which endpoints are computed in `Q(β)`.
    pub max_exact_points: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_symbols: 100_000_000,
            max_exact_points: 200_000,
        }
    }
}

/// Level-`n` partition: `symbols[i]` is the type of the `(i+1)`-th interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    level: u32,
    symbols: Vec<Symbol>,
    params: LsParams,
}

impl SymbolSequence {
    /// The trivial partition `{[0, 1)}`.
    pub fn trivial(params: LsParams) -> Self {
        Self {
            level: 0,
            symbols: vec![Symbol::Long],
            params,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn params(&self) -> LsParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn count_long(&self) -> usize {
        self.symbols.iter().filter(|&&s| s == Symbol::Long).count()
    }

    pub fn count_short(&self) -> usize {
        self.len() - self.count_long()
    }

    /// Exact total length `l·β^n + s·β^{n+1}`, tallied from the symbols.
    pub fn total_length(&self) -> QBeta {
        let long_len = QBeta::beta(self.params).pow(self.level);
        let short_len = QBeta::beta(self.params).pow(self.level + 1);
        let l = BigRational::from_integer(BigInt::from(self.count_long()));
        let s = BigRational::from_integer(BigInt::from(self.count_short()));
        &long_len.scale(&l) + &short_len.scale(&s)
    }
}

/// One refinement step.
pub fn substitute(seq: &SymbolSequence) -> SymbolSequence {
    let l = seq.params.long() as usize;
    let s = seq.params.short() as usize;
    let longs = seq.count_long();
    let mut out = Vec::with_capacity(longs * (l + s) + (seq.len() - longs));
    for &sym in &seq.symbols {
        match sym {
            Symbol::Long => {
                out.extend(std::iter::repeat_n(Symbol::Long, l));
                out.extend(std::iter::repeat_n(Symbol::Short, s));
            }
            Symbol::Short => out.push(Symbol::Long),
        }
    }
    SymbolSequence {
        level: seq.level + 1,
        symbols: out,
        params: seq.params,
    }
}

pub fn generate(params: LsParams, n: u32) -> Result<SymbolSequence> {
    generate_with(params, n, &Limits::default())
}

pub fn generate_with(params: LsParams, n: u32, limits: &Limits) -> Result<SymbolSequence> {
    let t = counts(params, n).t;
    if t > BigUint::from(limits.max_symbols) {
        return Err(Error::ResourceCap {
            what: "partition size t_n",
            requested: t.to_string(),
            cap: limits.max_symbols,
        });
    }
    let mut seq = SymbolSequence::trivial(params);
    for _ in 0..n {
        seq = substitute(&seq);
    }
    Ok(seq)
}

/// Interval counts of `ρ_{L,S}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    pub n: u32,
    pub t: BigUint,
    pub l: BigUint,
    pub s: BigUint,
}

impl Counts {
    pub fn t_u64(&self) -> Option<u64> {
        self.t.to_u64()
    }
}

/// Counts for levels `0..=n_max`, by `l_n = L·l_{n−1} + s_{n−1}`, `s_n = S·l_{n−1}`.
pub fn count_table(params: LsParams, n_max: u32) -> Vec<Counts> {
    let big_l = BigUint::from(params.long());
    let big_s = BigUint::from(params.short());
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let (mut l, mut s) = (BigUint::one(), BigUint::zero());
    for n in 0..=n_max {
        if n > 0 {
            let next_l = &big_l * &l + &s;
            s = &big_s * &l;
            l = next_l;
        }
        out.push(Counts {
            n,
            t: &l + &s,
            l: l.clone(),
            s: s.clone(),
        });
    }
    out
}

pub fn counts(params: LsParams, n: u32) -> Counts {
    count_table(params, n).pop().expect("table includes level n")
}

/// `t_n = (A − B(−Sβ²)^n)/β^n`, evaluated in `Q(β)`.
pub fn counts_closed_form(params: LsParams, n: u32) -> Result<BigInt> {
    let c = derived_constants(params);
    let s = QBeta::from_integers(i64::from(params.short()), 0, params);
    let beta = QBeta::beta(params);
    let ratio = -(&(&s * &beta) * &beta);
    let numerator = &c.a - &(&c.b * &ratio.pow(n));
    let value = &numerator * &QBeta::beta_inverse(params).pow(n);
    value.to_integer().ok_or_else(|| {
        Error::Consistency(format!(
            "closed form for t_{n} of {params} is not an integer: {value}"
        ))
    })
}

/// Which endpoint of each interval represents it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// `y_1, …, y_{t_n}`: includes 1, excludes 0.
    #[default]
    RightEndpoints,
    /// `y_0, …, y_{t_n − 1}`: includes 0, excludes 1.
    LeftEndpoints,
}

impl Convention {
    pub fn label(&self) -> &'static str {
        match self {
            Convention::RightEndpoints => "right",
            Convention::LeftEndpoints => "left",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    Exact,
    #[default]
    Float,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

/// Sorted endpoint set of one partition.
#[derive(Debug, Clone)]
pub struct PointSet<F> {
    values: Vec<F>,
    exact: Option<Vec<QBeta>>,
    convention: Convention,
    mode: Mode,
    level: u32,
}

impl<F: Real> PointSet<F> {
    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// Exact endpoints, present in [`Mode::Exact`].
    pub fn exact(&self) -> Option<&[QBeta]> {
        self.exact.as_deref()
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<F> {
        self.values
    }
}

impl<F> AsRef<[F]> for PointSet<F> {
    fn as_ref(&self) -> &[F] {
        &self.values
    }
}

pub fn endpoints<F: Real>(
    seq: &SymbolSequence,
    convention: Convention,
    mode: Mode,
) -> Result<PointSet<F>> {
    endpoints_with(seq, convention, mode, &Limits::default())
}

pub fn endpoints_with<F: Real>(
    seq: &SymbolSequence,
    convention: Convention,
    mode: Mode,
    limits: &Limits,
) -> Result<PointSet<F>> {
    let (values, exact) = match mode {
        Mode::Float => {
            let values =
                FloatEndpoints::new(seq.symbols.iter().copied(), seq.params, seq.level, seq.len() as u64, convention)
                    .collect();
            (values, None)
        }
        Mode::Exact => {
            if seq.len() as u64 > limits.max_exact_points {
                return Err(Error::ResourceCap {
                    what: "exact endpoint count",
                    requested: seq.len().to_string(),
                    cap: limits.max_exact_points,
                });
            }
            let (exact, values) = exact_endpoints(seq, convention);
            let values = values.into_iter().map(F::of).collect();
            (values, Some(exact))
        }
    };
    Ok(PointSet {
        values,
        exact,
        convention,
        mode,
        level: seq.level,
    })
}

/// Exact endpoints together with their rounded values.
///
/// Every point is `(u·x + v·y + (u·z + v·w)β)/d` for integer counters `u, v`,
/// where `β^n = (x + zβ)/d` and `β^{n+1} = (y + wβ)/d`, so the loop stays in
/// integer arithmetic.
fn exact_endpoints(seq: &SymbolSequence, convention: Convention) -> (Vec<QBeta>, Vec<f64>) {
    let params = seq.params;
    let long_len = QBeta::beta(params).pow(seq.level);
    let short_len = &long_len * &QBeta::beta(params);
    let d = [long_len.a(), long_len.b(), short_len.a(), short_len.b()]
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let numer = |r: &BigRational| r.numer() * (&d / r.denom());
    let (x, z) = (numer(long_len.a()), numer(long_len.b()));
    let (y, w) = (numer(short_len.a()), numer(short_len.b()));
    let beta = rational_beta_approx(params, 256);
    let value_den = &d * beta.denom();

    let mut exact = Vec::with_capacity(seq.len());
    let mut values = Vec::with_capacity(seq.len());
    let mut push = |longs: u64, shorts: u64| {
        let (u, v) = (BigInt::from(longs), BigInt::from(shorts));
        let a = &u * &x + &v * &y;
        let b = &u * &z + &v * &w;
        let scaled = &a * beta.denom() + &b * beta.numer();
        values.push(BigRational::new_raw(scaled, value_den.clone()).to_f64().unwrap_or(f64::NAN));
        exact.push(QBeta::new(
            BigRational::new(a, d.clone()),
            BigRational::new(b, d.clone()),
            params,
        ));
    };
    let (mut longs, mut shorts) = (0u64, 0u64);
    for &sym in &seq.symbols {
        if convention == Convention::LeftEndpoints {
            push(longs, shorts);
        }
        match sym {
            Symbol::Long => longs += 1,
            Symbol::Short => shorts += 1,
        }
        if convention == Convention::RightEndpoints {
            push(longs, shorts);
        }
    }
    (exact, values)
}

/// Floating-point endpoints from a symbol stream, by compensated summation of
/// `β^n` and `β^{n+1}`. The final right endpoint is emitted as exactly 1.
pub struct FloatEndpoints<I, F> {
    symbols: I,
    long_len: F,
    short_len: F,
    acc: NeumaierSum<F>,
    emitted: u64,
    total: u64,
    convention: Convention,
}

impl<I: Iterator<Item = Symbol>, F: Real> FloatEndpoints<I, F> {
    /// `total` must be the number of symbols the stream yields.
    pub fn new(symbols: I, params: LsParams, level: u32, total: u64, convention: Convention) -> Self {
        let beta = beta_approx::<F>(params);
        let mut long_len = F::one();
        for _ in 0..level {
            long_len = long_len * beta;
        }
        Self {
            symbols,
            long_len,
            short_len: long_len * beta,
            acc: NeumaierSum::new(),
            emitted: 0,
            total,
            convention,
        }
    }
}

impl<I: Iterator<Item = Symbol>, F: Real> Iterator for FloatEndpoints<I, F> {
    type Item = F;

    fn next(&mut self) -> Option<F> {
        let sym = self.symbols.next()?;
        let len = match sym {
            Symbol::Long => self.long_len,
            Symbol::Short => self.short_len,
        };
        self.emitted += 1;
        match self.convention {
            Convention::LeftEndpoints => {
                let x = self.acc.value();
                self.acc.add(len);
                Some(x)
            }
            Convention::RightEndpoints => {
                self.acc.add(len);
                if self.emitted == self.total {
                    Some(F::one())
                } else {
                    Some(self.acc.value())
                }
            }
        }
    }
}

/// Depth below which subtrees are copied from precomputed blocks.
const STREAM_BLOCK_DEPTH: u32 = 10;

/// Level-`n` symbols in order, without materializing the sequence.
///
/// A depth-first walk of the substitution tree down to level
/// `n − d`, emitting precomputed depth-`d` expansions of each node.
pub struct SymbolStream {
    params: LsParams,
    walk_depth: u32,
    stack: Vec<(u32, Symbol, u32)>,
    long_block: Vec<Symbol>,
    short_block: Vec<Symbol>,
    current: Option<(Symbol, usize)>,
}

impl SymbolStream {
    pub fn new(params: LsParams, n: u32) -> Self {
        let d = n.min(STREAM_BLOCK_DEPTH);
        let mut long = SymbolSequence::trivial(params);
        let mut short = SymbolSequence {
            level: 0,
            symbols: vec![Symbol::Short],
            params,
        };
        for _ in 0..d {
            long = substitute(&long);
            short = substitute(&short);
        }
        Self {
            params,
            walk_depth: n - d,
            stack: vec![(0, Symbol::Long, 0)],
            long_block: long.symbols,
            short_block: short.symbols,
            current: None,
        }
    }
}

impl Iterator for SymbolStream {
    type Item = Symbol;

    fn next(&mut self) -> Option<Symbol> {
        loop {
            if let Some((kind, pos)) = &mut self.current {
                let block = match kind {
                    Symbol::Long => &self.long_block,
                    Symbol::Short => &self.short_block,
                };
                if let Some(&sym) = block.get(*pos) {
                    *pos += 1;
                    return Some(sym);
                }
                self.current = None;
            }
            let (level, kind, next_child) = self.stack.last_mut()?;
            if *level == self.walk_depth {
                self.current = Some((*kind, 0));
                self.stack.pop();
                continue;
            }
            let l = self.params.long();
            let fanout = match kind {
                Symbol::Long => l + self.params.short(),
                Symbol::Short => 1,
            };
            if *next_child == fanout {
                self.stack.pop();
                continue;
            }
            let child = match kind {
                Symbol::Long if *next_child >= l => Symbol::Short,
                _ => Symbol::Long,
            };
            *next_child += 1;
            let child_level = *level + 1;
            self.stack.push((child_level, child, 0));
        }
    }
}

/// Floating-point endpoints of level `n`, streamed.
pub fn stream_points<F: Real>(
    params: LsParams,
    n: u32,
    convention: Convention,
) -> Result<FloatEndpoints<SymbolStream, F>> {
    let total = counts(params, n).t_u64().ok_or_else(|| Error::ResourceCap {
        what: "partition size t_n",
        requested: counts(params, n).t.to_string(),
        cap: u64::MAX,
    })?;
    Ok(FloatEndpoints::new(
        SymbolStream::new(params, n),
        params,
        n,
        total,
        convention,
    ))
}

/// Endpoints `uβ^n + vβ^{n+1}` of a level-`n` grid as integer pairs `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct GridPoint {
    u: i128,
    v: i128,
}

/// Exact order of two points of the same level-`n` grid, with a float
/// shortcut when they are clearly apart.
struct GridOrder {
    params: LsParams,
    long_f: f64,
    short_f: f64,
}

impl GridOrder {
    fn new(params: LsParams, level: u32) -> Self {
        let beta = beta_approx::<f64>(params);
        let long_f = beta.powi(level as i32);
        Self {
            params,
            long_f,
            short_f: long_f * beta,
        }
    }

    fn approx(&self, p: GridPoint) -> f64 {
        p.u as f64 * self.long_f + p.v as f64 * self.short_f
    }

    fn cmp(&self, x: GridPoint, y: GridPoint) -> Ordering {
        let diff = self.approx(x) - self.approx(y);
        if diff.abs() > 1e-11 {
            return if diff > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        sign_linear(&(x.u - y.u), &(x.v - y.v), self.params)
    }
}

/// Lengths `β^{n−k}` in the level-`n` basis, for `k = −1 ..= n`
/// (`β^{m−1} = Lβ^m + Sβ^{m+1}`). Index `k + 1`.
fn basis_powers(params: LsParams, n: u32) -> Vec<GridPoint> {
    let l = i128::from(params.long());
    let s = i128::from(params.short());
    let mut out = vec![GridPoint { u: 0, v: 1 }, GridPoint { u: 1, v: 0 }];
    for k in 1..=n as usize {
        let (a, b) = (out[k], out[k - 1]);
        out.push(GridPoint {
            u: l * a.u + s * b.u,
            v: l * a.v + s * b.v,
        });
    }
    out
}

fn check_levels(coarse: &SymbolSequence, fine: &SymbolSequence) -> Result<()> {
    if coarse.params != fine.params {
        return Err(Error::MismatchedParams {
            left: coarse.params,
            right: fine.params,
        });
    }
    if fine.level < coarse.level {
        return Err(Error::LevelOrder {
            coarse: coarse.level,
            fine: fine.level,
            required: coarse.level,
        });
    }
    Ok(())
}

/// Coarse interval bounds in the fine grid basis.
fn coarse_bounds(coarse: &SymbolSequence, fine_level: u32) -> Vec<GridPoint> {
    let powers = basis_powers(coarse.params, fine_level);
    let k = (fine_level - coarse.level) as usize;
    let long_len = powers[k + 1];
    let short_len = powers[k];
    let mut bounds = Vec::with_capacity(coarse.len() + 1);
    let mut acc = GridPoint { u: 0, v: 0 };
    bounds.push(acc);
    for &sym in &coarse.symbols {
        let d = match sym {
            Symbol::Long => long_len,
            Symbol::Short => short_len,
        };
        acc = GridPoint {
            u: acc.u + d.u,
            v: acc.v + d.v,
        };
        bounds.push(acc);
    }
    bounds
}

fn fine_points(fine: &SymbolSequence, convention: Convention) -> impl Iterator<Item = GridPoint> + '_ {
    let shift = matches!(convention, Convention::RightEndpoints);
    fine.symbols.iter().scan(GridPoint { u: 0, v: 0 }, move |acc, &sym| {
        let before = *acc;
        match sym {
            Symbol::Long => acc.u += 1,
            Symbol::Short => acc.v += 1,
        }
        Some(if shift { *acc } else { before })
    })
}

/// Number of fine-level points in each half-open coarse interval
/// `[y_{i−1}^p, y_i^p)`, decided by exact comparison in `Q(β)`.
pub fn count_points_per_interval(
    coarse: &SymbolSequence,
    fine: &SymbolSequence,
    convention: Convention,
) -> Result<Vec<u64>> {
    check_levels(coarse, fine)?;
    let order = GridOrder::new(fine.params, fine.level);
    let bounds = coarse_bounds(coarse, fine.level);
    let mut counts = vec![0u64; coarse.len()];
    let mut interval = 0usize;
    for x in fine_points(fine, convention) {
        // Points below the current lower bound cannot occur: 0 is the first.
        while interval < counts.len() && order.cmp(x, bounds[interval + 1]) != Ordering::Less {
            interval += 1;
        }
        if interval == counts.len() {
            break;
        }
        counts[interval] += 1;
    }
    Ok(counts)
}

/// Fine-level points in the `index`-th (1-based) coarse interval.
///
/// A short coarse interval needs `fine.level ≥ coarse.level + 1`.
pub fn count_points_in_interval(
    coarse: &SymbolSequence,
    fine: &SymbolSequence,
    index: usize,
    convention: Convention,
) -> Result<u64> {
    check_levels(coarse, fine)?;
    if index == 0 || index > coarse.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: coarse.len(),
        });
    }
    if coarse.symbols[index - 1] == Symbol::Short && fine.level == coarse.level {
        return Err(Error::LevelOrder {
            coarse: coarse.level,
            fine: fine.level,
            required: coarse.level + 1,
        });
    }
    let order = GridOrder::new(fine.params, fine.level);
    let bounds = coarse_bounds(coarse, fine.level);
    let (lo, hi) = (bounds[index - 1], bounds[index]);
    Ok(fine_points(fine, convention)
        .filter(|&x| order.cmp(x, lo) != Ordering::Less && order.cmp(x, hi) == Ordering::Less)
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Symbol::{Long as L, Short as S};

    fn p(l: u32, s: u32) -> LsParams {
        LsParams::new(l, s).unwrap()
    }

    fn t_column(params: LsParams, n: u32) -> Vec<u64> {
        count_table(params, n).iter().map(|c| c.t_u64().unwrap()).collect()
    }

    #[test]
    fn substitution_examples() {
        let q = p(1, 1);
        let one = substitute(&SymbolSequence::trivial(q));
        assert_eq!(one.symbols(), &[L, S]);
        assert_eq!(substitute(&one).symbols(), &[L, S, L]);
        assert_eq!(substitute(&SymbolSequence::trivial(p(2, 1))).symbols(), &[L, L, S]);
    }

    #[test]
    fn generate_examples() {
        let q = p(1, 1);
        assert_eq!(generate(q, 0).unwrap().symbols(), &[L]);
        assert_eq!(generate(q, 2).unwrap().symbols(), &[L, S, L]);
        assert_eq!(generate(q, 4).unwrap().len(), 8);
    }

    #[test]
    fn generate_respects_cap() {
        let limits = Limits {
            max_symbols: 1000,
            ..Limits::default()
        };
        let err = generate_with(p(2, 2), 10, &limits).unwrap_err();
        assert!(err.is_resource_cap());
        assert!(generate(p(1, 1), 200).unwrap_err().is_resource_cap());
    }

    #[test]
    fn count_examples() {
        assert_eq!(t_column(p(1, 1), 5), [1, 2, 3, 5, 8, 13]);
        assert_eq!(t_column(p(1, 2), 4), [1, 3, 5, 11, 21]);
        assert_eq!(t_column(p(2, 1), 4), [1, 3, 7, 17, 41]);
        let c0 = counts(p(3, 2), 0);
        assert_eq!((c0.t, c0.l, c0.s), (1u32.into(), 1u32.into(), 0u32.into()));
    }

    #[test]
    fn counts_match_symbols() {
        for (l, s) in [(1, 1), (2, 3), (3, 1)] {
            let q = p(l, s);
            let mut seq = SymbolSequence::trivial(q);
            for c in count_table(q, 9) {
                assert_eq!(BigUint::from(seq.len()), c.t);
                assert_eq!(BigUint::from(seq.count_long()), c.l);
                assert_eq!(BigUint::from(seq.count_short()), c.s);
                seq = substitute(&seq);
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        for (l, s) in [(1, 1), (1, 2), (4, 1), (2, 7)] {
            assert_eq!(counts_closed_form(p(l, s), 0).unwrap(), BigInt::one());
        }
        assert_eq!(counts_closed_form(p(1, 1), 5).unwrap(), BigInt::from(13));
        let t6 = counts(p(1, 3), 6).t;
        assert_eq!(counts_closed_form(p(1, 3), 6).unwrap(), BigInt::from(t6));
    }

    #[test]
    fn endpoint_examples() {
        let q = p(1, 1);
        let beta = 0.618_033_988_749_894_9_f64;
        let e1 = endpoints::<f64>(&generate(q, 1).unwrap(), Convention::RightEndpoints, Mode::Exact).unwrap();
        assert!((e1.values()[0] - beta).abs() < 1e-16);
        assert_eq!(e1.values()[1], 1.0);
        let exact = e1.exact().unwrap();
        assert_eq!(exact[0], QBeta::beta(q));
        assert_eq!(exact[1], QBeta::one(q));

        let seq2 = generate(q, 2).unwrap();
        let r2 = endpoints::<f64>(&seq2, Convention::RightEndpoints, Mode::Exact).unwrap();
        let b = QBeta::beta(q);
        assert_eq!(r2.exact().unwrap(), &[&b * &b, b.clone(), QBeta::one(q)]);
        let l2 = endpoints::<f64>(&seq2, Convention::LeftEndpoints, Mode::Exact).unwrap();
        assert_eq!(l2.exact().unwrap(), &[QBeta::zero(q), &b * &b, b.clone()]);

        let f2 = endpoints::<f64>(&seq2, Convention::RightEndpoints, Mode::Float).unwrap();
        for (x, y) in f2.values().iter().zip(r2.values()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_cap() {
        let limits = Limits {
            max_exact_points: 10,
            ..Limits::default()
        };
        let seq = generate(p(1, 1), 6).unwrap();
        let err = endpoints_with::<f64>(&seq, Convention::RightEndpoints, Mode::Exact, &limits).unwrap_err();
        assert!(err.is_resource_cap());
        assert!(endpoints_with::<f64>(&seq, Convention::RightEndpoints, Mode::Float, &limits).is_ok());
    }

    #[test]
    fn one_two_level_one_is_quarter_grid() {
        let seq = generate(p(1, 2), 1).unwrap();
        let pts = endpoints::<f64>(&seq, Convention::RightEndpoints, Mode::Float).unwrap();
        assert_eq!(pts.values(), &[0.5, 0.75, 1.0]);
    }

    #[test]
    fn stream_matches_substitution() {
        for (l, s) in [(1, 1), (1, 2), (2, 1), (3, 2)] {
            let q = p(l, s);
            for n in [0, 1, 5, 10, 11, 13] {
                let seq = generate(q, n).unwrap();
                let streamed: Vec<Symbol> = SymbolStream::new(q, n).collect();
                assert_eq!(streamed, seq.symbols(), "{q} n={n}");
            }
        }
    }

    #[test]
    fn streamed_points_match_materialized() {
        let q = p(2, 3);
        let seq = generate(q, 8).unwrap();
        for conv in [Convention::RightEndpoints, Convention::LeftEndpoints] {
            let a = endpoints::<f64>(&seq, conv, Mode::Float).unwrap();
            let b: Vec<f64> = stream_points(q, 8, conv).unwrap().collect();
            assert_eq!(a.values(), b.as_slice());
        }
    }

    #[test]
    fn f32_endpoints() {
        let seq = generate(p(1, 1), 10).unwrap();
        let pts = endpoints::<f32>(&seq, Convention::RightEndpoints, Mode::Float).unwrap();
        assert_eq!(pts.len(), 144);
        assert_eq!(*pts.values().last().unwrap(), 1.0f32);
        assert!(pts.values().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn point_count_examples() {
        let q = p(1, 1);
        let g1 = generate(q, 1).unwrap();
        let g2 = generate(q, 2).unwrap();
        let g3 = generate(q, 3).unwrap();
        let g4 = generate(q, 4).unwrap();
        assert_eq!(count_points_in_interval(&g2, &g4, 3, Convention::RightEndpoints).unwrap(), 3);
        assert_eq!(count_points_in_interval(&g1, &g3, 1, Convention::RightEndpoints).unwrap(), 2);
        assert_eq!(count_points_in_interval(&g1, &g3, 1, Convention::LeftEndpoints).unwrap(), 3);
    }

    #[test]
    fn point_count_errors() {
        let q = p(1, 1);
        let g1 = generate(q, 1).unwrap();
        let g2 = generate(q, 2).unwrap();
        assert!(matches!(
            count_points_in_interval(&g2, &g1, 1, Convention::LeftEndpoints),
            Err(Error::LevelOrder { .. })
        ));
        assert!(matches!(
            count_points_in_interval(&g2, &g2, 0, Convention::LeftEndpoints),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            count_points_in_interval(&g2, &g2, 4, Convention::LeftEndpoints),
            Err(Error::IndexOutOfRange { .. })
        ));
        // Interval 2 of level 2 is short; it needs one more level.
        assert!(matches!(
            count_points_in_interval(&g2, &g2, 2, Convention::LeftEndpoints),
            Err(Error::LevelOrder { .. })
        ));
        let other = generate(p(1, 2), 3).unwrap();
        assert!(count_points_in_interval(&g1, &other, 1, Convention::LeftEndpoints).is_err());
    }

    #[test]
    fn per_interval_agrees_with_single() {
        let q = p(2, 2);
        let coarse = generate(q, 2).unwrap();
        let fine = generate(q, 5).unwrap();
        for conv in [Convention::RightEndpoints, Convention::LeftEndpoints] {
            let all = count_points_per_interval(&coarse, &fine, conv).unwrap();
            for (i, &c) in all.iter().enumerate() {
                assert_eq!(count_points_in_interval(&coarse, &fine, i + 1, conv).unwrap(), c);
            }
        }
    }

    #[test]
    fn total_length_is_one() {
        for (l, s) in [(1, 1), (1, 2), (3, 3)] {
            let q = p(l, s);
            assert_eq!(generate(q, 6).unwrap().total_length(), QBeta::one(q));
        }
    }
}
