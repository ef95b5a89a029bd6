//! Level-q mass of a dense set's tilde spectrum around a centre y.

use super::{fwht_in_place, tilde_spectrum, BitVector, CubeFunction, Spectrum};
use crate::error::{Error, Result};
use crate::logmath::{ln_binom, log_le};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KklReport {
    /// `Σ_{|x⊕y|=q} |f̃(x)|` against `√(C(m,q)(4d/q)^q)`.
    pub lhs_l1: f64,
    pub rhs_l1: f64,
    /// `Σ_{|x⊕y|=q} f̃(x)²` against `(4d/q)^q`.
    pub lhs_l2: f64,
    pub rhs_l2: f64,
    pub pass_l1: bool,
    pub pass_l2: bool,
}

impl KklReport {
    pub fn pass(&self) -> bool {
        self.pass_l1 && self.pass_l2
    }
}

fn ln_rhs_l2(q: u32, d: u32) -> f64 {
    q as f64 * (4.0 * d as f64 / q as f64).ln()
}

fn validate(m: u32, set_size: u64, q: u32, d: u32) -> Result<()> {
    if q < 1 || q > d || q > m {
        return Err(Error::Precondition(format!("need 1 ≤ q ≤ min(d, m), got q={q}, d={d}, m={m}")));
    }
    if d < m && set_size < 1u64 << (m - d) {
        return Err(Error::Precondition(format!("|A| = {set_size} is below 2^(m-d) = {}", 1u64 << (m - d))));
    }
    Ok(())
}

fn report(m: u32, q: u32, d: u32, lhs_l1: f64, lhs_l2: f64) -> KklReport {
    let ln_l2 = ln_rhs_l2(q, d);
    let ln_l1 = 0.5 * (ln_binom(m as f64, q as f64) + ln_l2);
    KklReport {
        lhs_l1,
        rhs_l1: ln_l1.exp(),
        lhs_l2,
        rhs_l2: ln_l2.exp(),
        pass_l1: log_le(lhs_l1.ln(), ln_l1),
        pass_l2: log_le(lhs_l2.ln(), ln_l2),
    }
}

/// Check both level inequalities for the set `a ⊆ {0,1}^m` at one centre.
pub fn kkl_level_check(a: &CubeFunction, y: BitVector, q: u32, d: u32) -> Result<KklReport> {
    let m = a.n();
    if y.n() != m {
        return Err(Error::DimensionMismatch(y.n(), m));
    }
    validate(m, a.support_size(), q, d)?;
    let s = tilde_spectrum(a)?;
    let (mut l1, mut l2) = (0.0, 0.0);
    for (x, c) in s.coeffs().iter().enumerate() {
        if (x as u64 ^ y.value()).count_ones() == q {
            l1 += c.abs();
            l2 += c * c;
        }
    }
    Ok(report(m, q, d, l1, l2))
}

/// Level-q sums around every centre at once.
#[derive(Debug, Clone, PartialEq)]
pub struct KklProfile {
    pub m: u32,
    pub q: u32,
    pub d: u32,
    pub l1: Vec<f64>,
    pub l2: Vec<f64>,
}

impl KklProfile {
    pub fn at(&self, y: u64) -> KklReport {
        report(self.m, self.q, self.d, self.l1[y as usize], self.l2[y as usize])
    }

    pub fn all_pass(&self) -> bool {
        (0..self.l1.len() as u64).all(|y| self.at(y).pass())
    }
}

/// XOR-convolve `|f̃|` and `f̃²` with the weight-q shell, giving the level
/// sums for every centre y in O(m·2^m).
pub fn kkl_profile(tilde: &Spectrum, q: u32, d: u32) -> Result<KklProfile> {
    let m = tilde.n();
    let set_size = tilde.set_size().ok_or(Error::Normalization { expected: "tilde" })?;
    validate(m, set_size, q, d)?;
    let len = 1usize << m;
    let mut shell: Vec<f64> = (0..len).map(|x| if x.count_ones() == q { 1.0 } else { 0.0 }).collect();
    fwht_in_place(&mut shell);
    let convolve = |mut a: Vec<f64>| {
        fwht_in_place(&mut a);
        a.iter_mut().zip(&shell).for_each(|(x, k)| *x *= k);
        fwht_in_place(&mut a);
        let scale = 1.0 / len as f64;
        // Sums of non-negative terms; clamp rounding noise.
        a.iter_mut().for_each(|x| *x = (*x * scale).max(0.0));
        a
    };
    let l1 = convolve(tilde.coeffs().iter().map(|c| c.abs()).collect());
    let l2 = convolve(tilde.coeffs().iter().map(|c| c * c).collect());
    Ok(KklProfile { m, q, d, l1, l2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    #[test]
    fn half_cube() {
        // {x: x₁ = 0} has one weight-1 tilde coefficient of magnitude 1.
        for m in 1..=8 {
            let a = CubeFunction::from_fn(m, |x| if x & 1 == 0 { 1.0 } else { 0.0 }).unwrap();
            let r = kkl_level_check(&a, BitVector::zero(m), 1, 1).unwrap();
            assert!((r.lhs_l1 - 1.0).abs() < 1e-12);
            assert!((r.rhs_l1 - (4.0 * m as f64).sqrt()).abs() < 1e-9);
            assert!(r.pass());
        }
    }

    #[test]
    fn preconditions() {
        let a = CubeFunction::indicator(6, [0, 1, 2]).unwrap();
        assert!(kkl_level_check(&a, BitVector::zero(6), 1, 4).is_err()); // 3 < 2^2
        assert!(kkl_level_check(&a, BitVector::zero(6), 1, 5).is_ok());
        assert!(kkl_level_check(&a, BitVector::zero(6), 0, 5).is_err());
        assert!(kkl_level_check(&a, BitVector::zero(6), 6, 5).is_err());
    }

    #[test]
    fn affine_subspace_counts_dual_vectors() {
        // A = {x: x₀ = 1, x₁ ⊕ x₂ = 0, x₃ ⊕ x₄ ⊕ x₅ = 1} in {0,1}^8, codimension 3.
        let m = 8;
        let a = CubeFunction::from_fn(m, |x| {
            let b = |i: u32| (x >> i) & 1;
            if b(0) == 1 && b(1) == b(2) && (b(3) ^ b(4) ^ b(5)) == 1 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let duals = [0b1u64, 0b110, 0b111000];
        let span: Vec<u64> = (0..8u64)
            .map(|mask| (0..3).filter(|j| mask >> j & 1 == 1).fold(0, |acc, j| acc ^ duals[j as usize]))
            .collect();
        let d = 3;
        for q in 1..=d {
            let want = span.iter().filter(|v| v.count_ones() == q).count() as f64;
            let r = kkl_level_check(&a, BitVector::zero(m), q, d).unwrap();
            assert!((r.lhs_l1 - want).abs() < 1e-12, "q={q}");
            assert!(r.pass());
        }
    }

    #[test]
    fn profile_matches_single_centre() {
        let m = 9;
        let mut r = rng::stream(4, 0);
        let a = CubeFunction::from_fn(m, |_| if r.gen_bool(0.2) { 1.0 } else { 0.0 }).unwrap();
        let t = tilde_spectrum(&a).unwrap();
        for q in 1..=4 {
            let p = kkl_profile(&t, q, 4).unwrap();
            for y in [0u64, 5, 77, 300, 511] {
                let direct = kkl_level_check(&a, BitVector::new(m, y).unwrap(), q, 4).unwrap();
                assert!((p.l1[y as usize] - direct.lhs_l1).abs() < 1e-9);
                assert!((p.l2[y as usize] - direct.lhs_l2).abs() < 1e-9);
                assert_eq!(p.at(y).pass(), direct.pass());
            }
        }
    }

    #[test]
    fn random_dense_sets_pass() {
        let m = 12;
        let d = 4;
        for trial in 0..20 {
            let mut r = rng::stream(12, trial);
            let density = r.gen_range(1.0 / 16.0..1.0);
            let members: Vec<u64> = (0..1u64 << m).filter(|_| r.gen_bool(density)).collect();
            if (members.len() as u64) < 1 << (m - d) {
                continue;
            }
            let t = tilde_spectrum(&CubeFunction::indicator(m, members).unwrap()).unwrap();
            for q in 1..=d {
                assert!(kkl_profile(&t, q, d).unwrap().all_pass());
            }
        }
    }
}
