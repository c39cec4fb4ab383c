//! Independent reference computations for the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `sup_b |#{x < b}/N − b|` by direct counting at every candidate `b` and
/// its right limit.
pub fn brute_star(points: &[f64]) -> f64 {
    let n = points.len() as f64;
    let mut best = 0.0f64;
    let mut candidates: Vec<f64> = points.to_vec();
    candidates.push(1.0);
    for &b in &candidates {
        let below = points.iter().filter(|&&x| x < b).count() as f64;
        best = best.max((below / n - b).abs());
        if b < 1.0 {
            let upto = points.iter().filter(|&&x| x <= b).count() as f64;
            best = best.max((upto / n - b).abs());
        }
    }
    best
}

/// `sup_{a<b} |#{a ≤ x < b}/N − (b − a)|` over all pairs of candidate
/// positions `x_j`, `x_j⁺`, 0 and 1.
pub fn brute_extreme(points: &[f64]) -> f64 {
    let n = points.len() as f64;
    // (value, right-limit flag, number of points strictly before the position)
    let mut cands: Vec<(f64, bool, usize)> = vec![(0.0, false, 0)];
    for &x in points {
        let lt = points.iter().filter(|&&y| y < x).count();
        let le = points.iter().filter(|&&y| y <= x).count();
        cands.push((x, false, lt));
        cands.push((x, true, le));
    }
    cands.push((1.0, false, points.iter().filter(|&&y| y < 1.0).count()));
    cands.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap().then(p.1.cmp(&q.1)));
    cands.dedup();
    let mut best = 0.0f64;
    for (i, a) in cands.iter().enumerate() {
        for b in &cands[i + 1..] {
            if a.0 == 1.0 {
                continue;
            }
            let count = (b.2 - a.2) as f64;
            best = best.max((count / n - (b.0 - a.0)).abs());
        }
    }
    best
}

/// Sorted random points in `[0, 1]`, with occasional ties and a point at 1.
pub fn random_points(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<f64> {
    let len = rng.gen_range(1..=max_len);
    let mut pts: Vec<f64> = (0..len).map(|_| rng.gen::<f64>()).collect();
    if len > 3 && rng.gen_bool(0.3) {
        pts[1] = pts[0];
    }
    if rng.gen_bool(0.2) {
        pts[len - 1] = 1.0;
    }
    if rng.gen_bool(0.2) {
        pts[0] = 0.0;
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts
}

/// `⌊β·10^digits⌋` for `β = (√(L²+4S) − L)/(2S)`, up to one unit.
pub fn beta_decimal(l: u32, s: u32, digits: u32) -> BigInt {
    let scale = BigInt::from(10u32).pow(digits);
    let d = BigInt::from(l * l + 4 * s);
    let root = (d * &scale * &scale).sqrt();
    (root - BigInt::from(l) * &scale) / BigInt::from(2 * s)
}
