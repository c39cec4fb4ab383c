mod common;

use ls_discrepancy::discrepancy::{discrepancies, level_discrepancy, DiscrepancyAccumulator};
use ls_discrepancy::partition::stream_points;
use ls_discrepancy::{
    counts, extreme_discrepancy, regime_scan, star_discrepancy, Convention, Error, LsParams, Mode,
    ScanConfig, Verdict,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(l: u32, s: u32) -> LsParams {
    LsParams::new(l, s).unwrap()
}

#[test]
fn star_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let pts = common::random_points(&mut rng, 500);
        let fast = star_discrepancy(&pts).unwrap();
        let slow = common::brute_star(&pts);
        assert!((fast - slow).abs() <= 1e-15, "{fast} vs {slow} for N={}", pts.len());
    }
}

#[test]
fn extreme_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let pts = common::random_points(&mut rng, 60);
        let fast = extreme_discrepancy(&pts).unwrap();
        let slow = common::brute_extreme(&pts);
        assert!((fast - slow).abs() <= 1e-14, "{fast} vs {slow}: {pts:?}");
        let d_star = star_discrepancy(&pts).unwrap();
        assert!(d_star <= fast + 1e-15 && fast <= 2.0 * d_star + 1e-15);
    }
}

#[test]
fn known_values() {
    for n in 0..=20 {
        let m = 1usize << n;
        let pts: Vec<f64> = (1..=m).map(|k| k as f64 / m as f64).collect();
        assert_eq!(star_discrepancy(&pts).unwrap(), 1.0 / m as f64);
    }
    for n in 1..=100 {
        let pts: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        let (d_star, d) = discrepancies(&pts).unwrap();
        assert!((d_star - 1.0 / n as f64).abs() < 1e-15);
        assert!((d - 1.0 / n as f64).abs() < 1e-15);
    }
    assert_eq!(discrepancies(&[0.5]).unwrap(), (0.5, 1.0));
    assert_eq!(star_discrepancy(&[0.5, 0.75, 1.0]).unwrap(), 0.5);
}

#[test]
fn invalid_input() {
    assert_eq!(star_discrepancy::<f64>(&[]), Err(Error::EmptyPointSet));
    assert!(matches!(star_discrepancy(&[0.5, 0.2]), Err(Error::Unsorted { index: 1 })));
    assert!(matches!(star_discrepancy(&[0.5, 1.5]), Err(Error::OutOfUnitInterval { index: 1, .. })));
    let mut acc = DiscrepancyAccumulator::<f64>::new(2);
    acc.push(0.5).unwrap();
    assert!(acc.finish().is_err());
}

#[test]
fn conventions_agree_up_to_one_step() {
    for &(l, s) in &[(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)] {
        let p = params(l, s);
        for n in 1..=12 {
            let t = counts(p, n).t_u64().unwrap();
            if t > 1_000_000 {
                break;
            }
            let right: Vec<f64> = stream_points(p, n, Convention::RightEndpoints).unwrap().collect();
            let left: Vec<f64> = stream_points(p, n, Convention::LeftEndpoints).unwrap().collect();
            let gap = (star_discrepancy(&right).unwrap() - star_discrepancy(&left).unwrap()).abs();
            assert!(gap <= (l + s) as f64 / t as f64, "{p} n={n}: {gap}");
        }
    }
}

#[test]
fn discrepancy_tends_to_zero() {
    for &(l, s) in &[(1, 1), (1, 2), (1, 3), (3, 1)] {
        let p = params(l, s);
        let config = ScanConfig::default();
        let mut n = 1;
        let mut last = f64::INFINITY;
        while counts(p, n).t_u64().unwrap() < 300_000 {
            last = level_discrepancy(p, n, &config).unwrap().1;
            n += 1;
        }
        assert!(last < 0.01, "{p}: {last}");
    }
}

#[test]
fn exact_and_float_levels_agree() {
    let p = params(2, 3);
    let float = level_discrepancy(p, 6, &ScanConfig::default()).unwrap();
    let exact_cfg = ScanConfig {
        mode: Mode::Exact,
        ..ScanConfig::default()
    };
    let exact = level_discrepancy(p, 6, &exact_cfg).unwrap();
    assert_eq!(float.0, exact.0);
    assert!((float.1 - exact.1).abs() < 1e-12);
    assert!((float.2 - exact.2).abs() < 1e-12);
}

#[test]
fn golden_scan_is_bounded() {
    let report = regime_scan(params(1, 1), 2, 20, &ScanConfig::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Bounded);
    assert_eq!(report.window, (10, 20));
    assert!(report.band_max / report.band_min < 1.01);
    assert_eq!(report.rows.len(), 19);
}
