use super::Spectrum;
use crate::error::{Error, Result};
use crate::logmath::log_le;
use serde::Serialize;

/// `Σ_{|v|=w} |coeff(v)|` for every weight `w = 0..=n`.
pub fn weight_profile(s: &Spectrum) -> (Vec<f64>, Vec<f64>) {
    let mut l1 = vec![0.0; s.n() as usize + 1];
    let mut l2 = vec![0.0; s.n() as usize + 1];
    for (v, c) in s.coeffs().iter().enumerate() {
        let w = (v as u64).count_ones() as usize;
        l1[w] += c.abs();
        l2[w] += c * c;
    }
    (l1, l2)
}

pub fn weight_l1(s: &Spectrum, weight: u32) -> f64 {
    s.coeffs().iter().enumerate().filter(|(v, _)| v.count_ones() == weight).map(|(_, c)| c.abs()).sum()
}

pub fn weight_l2sq(s: &Spectrum, weight: u32) -> f64 {
    s.coeffs().iter().enumerate().filter(|(v, _)| v.count_ones() == weight).map(|(_, c)| c * c).sum()
}

/// ℓ1 mass at weight 2ℓ (zero when 2ℓ > n).
pub fn level_l1(s: &Spectrum, ell: u32) -> f64 {
    weight_l1(s, 2 * ell)
}

/// Squared ℓ2 mass at weight 2ℓ.
pub fn level_l2sq(s: &Spectrum, ell: u32) -> f64 {
    weight_l2sq(s, 2 * ell)
}

/// ℓ1 mass on odd weights. Zero for sets pulled back through a matching.
pub fn odd_weight_l1(s: &Spectrum) -> f64 {
    s.coeffs().iter().enumerate().filter(|(v, _)| v.count_ones() % 2 == 1).map(|(_, c)| c.abs()).sum()
}

/// Log of the level bound: 0 at ℓ = 0, `ℓ·ln(C√(s*n)/ℓ)` for `1 ≤ ℓ ≤ s*`,
/// `(ℓ/2)·ln(C²n/ℓ)` beyond.
pub fn ln_bound(c: f64, s_star: f64, n: f64, ell: f64) -> f64 {
    if ell <= 0.0 {
        0.0
    } else if ell <= s_star {
        ell * (c.ln() + 0.5 * (s_star.ln() + n.ln()) - ell.ln())
    } else {
        0.5 * ell * (2.0 * c.ln() + n.ln() - ell.ln())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelCheck {
    pub ell: u32,
    pub measured: f64,
    pub ln_measured: f64,
    pub ln_bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessReport {
    pub c: f64,
    pub s_star: u32,
    pub per_level: Vec<LevelCheck>,
    pub overall: bool,
}

impl BoundednessReport {
    pub fn failures(&self) -> impl Iterator<Item = &LevelCheck> {
        self.per_level.iter().filter(|r| !r.pass)
    }
}

/// Level-by-level test of the (C, s*) bound on a tilde spectrum.
///
/// Levels `1 ≤ ℓ ≤ s*` use the first branch of the bound; levels
/// `s* < ℓ < n/C²` use the second. Only weights `2ℓ ≤ n` exist.
pub fn check_bounded(s: &Spectrum, c: f64, s_star: u32) -> Result<BoundednessReport> {
    if !s.is_tilde() {
        return Err(Error::Normalization { expected: "tilde" });
    }
    if c.is_nan() || c <= 0.0 {
        return Err(Error::Precondition(format!("C must be positive, got {c}")));
    }
    if s_star < 1 {
        return Err(Error::Precondition("s* must be at least 1".into()));
    }
    let n = s.n() as f64;
    let (l1, _) = weight_profile(s);
    let per_level: Vec<LevelCheck> = (1..=s.n() / 2)
        .filter(|&ell| ell <= s_star || (ell as f64) < n / (c * c))
        .map(|ell| {
            let measured = l1[2 * ell as usize];
            let ln_measured = measured.ln();
            let ln_b = ln_bound(c, s_star as f64, n, ell as f64);
            LevelCheck { ell, measured, ln_measured, ln_bound: ln_b, pass: log_le(ln_measured, ln_b) }
        })
        .collect();
    let overall = per_level.iter().all(|r| r.pass);
    Ok(BoundednessReport { c, s_star, per_level, overall })
}
