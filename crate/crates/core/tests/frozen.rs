//! Reference values computed once by exhaustive enumeration outside the
//! library and frozen here as exact fractions.

use ihp_core::bitcube::{tilde_spectrum, wht_forward};
use ihp_core::matchings::{p_match, q_match, q_match_b};
use ihp_core::maxcut::{maxcut_exact, MultiGraph};
use ihp_core::CubeFunction;

/// (n, matching size, k, i, b, numerator, denominator) for a 2k-set.
const Q_B: &[(u32, u32, u32, u32, u32, u64, u64)] = &[
    (10, 3, 2, 0, 0, 1, 210),
    (10, 3, 2, 0, 1, 4, 35),
    (10, 3, 2, 0, 2, 12, 35),
    (10, 3, 2, 0, 3, 16, 105),
    (10, 3, 2, 1, 0, 3, 35),
    (10, 3, 2, 1, 1, 8, 35),
    (10, 3, 2, 1, 2, 2, 35),
    (10, 3, 2, 2, 0, 1, 70),
    (12, 4, 3, 0, 2, 2, 77),
    (12, 4, 3, 0, 3, 32, 231),
    (12, 4, 3, 1, 2, 24, 77),
    (12, 4, 3, 2, 1, 8, 77),
    (12, 4, 3, 3, 0, 1, 231),
    (11, 2, 2, 0, 0, 7, 66),
    (11, 2, 2, 0, 1, 14, 33),
    (11, 2, 2, 0, 2, 14, 55),
    (11, 2, 2, 1, 0, 7, 55),
    (11, 2, 2, 1, 1, 14, 165),
    (11, 2, 2, 2, 0, 1, 330),
];

#[test]
fn boundary_distribution_matches_enumeration() {
    for &(n, m, k, i, b, num, den) in Q_B {
        let got = q_match_b(k as f64, i as f64, b as f64, n as f64, m as f64).unwrap().prob();
        let want = num as f64 / den as f64;
        assert!((got - want).abs() < 1e-14, "n={n} m={m} k={k} i={i} b={b}: {got} vs {want}");
        if b == 0 {
            assert!((q_match(k as f64, i as f64, n as f64, m as f64).unwrap().prob() - want).abs() < 1e-14);
        }
        if b == 0 && i == k {
            assert!((p_match(k as f64, n as f64, m as f64).unwrap().prob() - want).abs() < 1e-14);
        }
    }
}

#[test]
fn impossible_configurations_have_zero_mass() {
    // 12 vertices, 4 edges, 6-set: with no inside edge at least 2 edges cross.
    for b in 0..2 {
        assert_eq!(q_match_b(3.0, 0.0, b as f64, 12.0, 4.0).unwrap().prob(), 0.0);
    }
}

#[test]
fn small_spectra() {
    // A = {011, 101} on three coordinates (bit 0 is coordinate 1).
    let a = CubeFunction::indicator(3, [0b011, 0b101]).unwrap();
    let hat = wht_forward(&a).unwrap();
    let want_hat = [0.25, -0.25, 0.0, 0.0, 0.0, 0.0, -0.25, 0.25];
    for (v, w) in want_hat.iter().enumerate() {
        assert!((hat.get(v as u64) - w).abs() < 1e-15, "v={v}");
    }
    let tilde = tilde_spectrum(&a).unwrap();
    for (v, w) in want_hat.iter().enumerate() {
        assert!((tilde.get(v as u64) - 4.0 * w).abs() < 1e-15, "v={v}");
    }
}

#[test]
fn small_max_cuts() {
    let k3 = MultiGraph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
    let k4 = MultiGraph::new(4, (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b, 1)))).unwrap();
    let c5 = MultiGraph::new(5, (0..5).map(|a| (a, (a + 1) % 5, 1))).unwrap();
    let heavy = MultiGraph::new(3, [(0, 1, 5), (1, 2, 1), (0, 2, 1)]).unwrap();
    assert_eq!(maxcut_exact(&k3).unwrap().value, 2);
    assert_eq!(maxcut_exact(&k4).unwrap().value, 4);
    assert_eq!(maxcut_exact(&c5).unwrap().value, 4);
    assert_eq!(maxcut_exact(&heavy).unwrap().value, 6);
}
