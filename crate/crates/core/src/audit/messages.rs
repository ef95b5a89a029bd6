//! Exact spectra of sets defined through a single matching.

use crate::bitcube::{check_bounded, tilde_spectrum, wht_forward, BitVector, CubeFunction};
use crate::error::{Error, Result};
use crate::matchings::{apply_matching_index, match_restriction, sample_matching, Matching};
use crate::rng;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Largest cube handled by the exact single-message checks.
pub const MESSAGE_LIMIT: u32 = 20;

/// `{x : Mx ∈ A}` for `A ⊆ {0,1}^{|M|}`, with `A` given by its indicator.
pub fn preimage(m: &Matching, a: &CubeFunction) -> Result<CubeFunction> {
    if a.n() as usize != m.len() {
        return Err(Error::DimensionMismatch(a.n(), m.len() as u32));
    }
    CubeFunction::from_fn(m.n(), |x| a.get(apply_matching_index(m, x)))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StructureCheck {
    /// Coefficients of `B` that are nonzero.
    pub nonzero: usize,
    /// Nonzero coefficients not of the form `Mᵀw`.
    pub stray: usize,
    /// Coefficients `Mᵀw` whose value differs from the reduced spectrum at `w`.
    pub mismatched: usize,
    pub odd_weight_mass: f64,
    pub pass: bool,
}

/// Compare the spectrum of `{x : Mx ∈ A}` with the spectrum of `A`
/// (both unnormalized by set size), coefficient by coefficient.
pub fn matching_structure(m: &Matching, a: &CubeFunction, tol: f64) -> Result<StructureCheck> {
    let b = preimage(m, a)?;
    let hb = wht_forward(&b)?;
    let qa = wht_forward(a)?;
    let n = m.n();
    let mut out = StructureCheck::default();
    for (v, &c) in hb.coeffs().iter().enumerate() {
        let bv = BitVector::new(n, v as u64)?;
        if c.abs() > tol {
            out.nonzero += 1;
            if bv.weight() % 2 == 1 {
                out.odd_weight_mass += c.abs();
            }
        }
        match match_restriction(m, &bv) {
            Some(w) => {
                if (c - qa.get(w)).abs() > tol {
                    out.mismatched += 1;
                }
            }
            None => {
                if c.abs() > tol {
                    out.stray += 1;
                }
            }
        }
    }
    out.pass = out.stray == 0 && out.mismatched == 0 && out.odd_weight_mass == 0.0 && out.nonzero <= 1 << m.len();
    Ok(out)
}

/// A random subset of `{0,1}^bits` with at least `2^{bits−s*}` elements.
pub fn random_dense_set(bits: u32, s_star: u32, r: &mut impl Rng) -> Result<CubeFunction> {
    let total = 1u64 << bits;
    let min = (total >> s_star.min(bits)).max(1);
    let size = r.gen_range(min..=total);
    let mut all: Vec<u64> = (0..total).collect();
    all.shuffle(r);
    CubeFunction::indicator(bits, all.into_iter().take(size as usize))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingleMessageTrial {
    pub set_size: u64,
    pub density_log2: f64,
    pub bounded: bool,
    pub worst_level_margin: f64,
    pub structure: StructureCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingleMessageReport {
    pub n: u32,
    pub alpha_n: u32,
    pub s_star: u32,
    pub trials: u64,
    pub seed: u64,
    pub bounded: u64,
    pub structure_ok: u64,
    pub pass: bool,
    pub rows: Vec<SingleMessageTrial>,
}

/// Sample `M` and a dense `A_red`, build `B = {x : Mx ∈ A_red}`, and check
/// both the (3, s*) level bound and the matching structure of `B`'s
/// spectrum.
pub fn check_single_message(n: u32, alpha_n: u32, s_star: u32, trials: u64, seed: u64) -> Result<SingleMessageReport> {
    if n > MESSAGE_LIMIT {
        return Err(Error::Capacity { n, cap: MESSAGE_LIMIT });
    }
    let rows: Vec<SingleMessageTrial> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let m = sample_matching(n, alpha_n, &mut r)?;
            let a = random_dense_set(alpha_n, s_star, &mut r)?;
            single_message_trial(&m, &a, s_star)
        })
        .collect::<Result<_>>()?;
    let bounded = rows.iter().filter(|t| t.bounded).count() as u64;
    let structure_ok = rows.iter().filter(|t| t.structure.pass).count() as u64;
    Ok(SingleMessageReport { n, alpha_n, s_star, trials, seed, bounded, structure_ok, pass: bounded == trials && structure_ok == trials, rows })
}

pub fn single_message_trial(m: &Matching, a: &CubeFunction, s_star: u32) -> Result<SingleMessageTrial> {
    let b = preimage(m, a)?;
    let rep = check_bounded(&tilde_spectrum(&b)?, 3.0, s_star)?;
    let size = b.support_size();
    Ok(SingleMessageTrial {
        set_size: size,
        density_log2: (size as f64).log2() - m.n() as f64,
        bounded: rep.overall,
        worst_level_margin: rep.per_level.iter().map(|l| l.ln_bound - l.ln_measured).fold(f64::INFINITY, f64::min),
        structure: matching_structure(m, a, 1e-12)?,
    })
}

/// `max_z |2^{|M|}·Pr_{x∼B}[Mx = z] − 1|`.
pub fn pdf_deviation(set: &CubeFunction, m: &Matching) -> Result<f64> {
    if m.n() != set.n() {
        return Err(Error::DimensionMismatch(m.n(), set.n()));
    }
    let size = set.support_size();
    if size == 0 {
        return Err(Error::EmptySet);
    }
    let mut counts = vec![0u64; 1 << m.len()];
    for x in set.members() {
        counts[apply_matching_index(m, x) as usize] += 1;
    }
    let scale = (1u64 << m.len()) as f64 / size as f64;
    Ok(counts.iter().map(|&c| (c as f64 * scale - 1.0).abs()).fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PdfReport {
    pub n: u32,
    pub alpha_n: u32,
    pub s_star: u32,
    pub c: f64,
    pub delta: f64,
    pub set_size: u64,
    pub dense: bool,
    pub bounded: bool,
    /// `s* ≥ 10·ln(n+1)` and `s* ≤ δ⁴n/C²`; almost never true at this scale.
    pub preconditions_met: bool,
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    /// Fraction of sampled matchings with deviation at most δ.
    pub within_delta: f64,
}

/// Diagnostic only: reports deviations, never fails.
pub fn check_pdf_closeness(set: &CubeFunction, alpha_n: u32, s_star: u32, c: f64, delta: f64, trials: u64, seed: u64) -> Result<PdfReport> {
    let n = set.n();
    if n > MESSAGE_LIMIT {
        return Err(Error::Capacity { n, cap: MESSAGE_LIMIT });
    }
    let bounded = check_bounded(&tilde_spectrum(set)?, c, s_star)?.overall;
    let size = set.support_size();
    let deviations: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| pdf_deviation(set, &sample_matching(n, alpha_n, &mut rng::stream(seed, i))?))
        .collect::<Result<_>>()?;
    let s = s_star as f64;
    let nf = n as f64;
    Ok(PdfReport {
        n,
        alpha_n,
        s_star,
        c,
        delta,
        set_size: size,
        dense: size << s_star.min(63) >= 1u64 << n,
        bounded,
        preconditions_met: s >= 10.0 * (nf + 1.0).ln() && s <= delta.powi(4) * nf / (c * c),
        max_deviation: deviations.iter().copied().fold(0.0, f64::max),
        within_delta: deviations.iter().filter(|&&d| d <= delta).count() as f64 / trials.max(1) as f64,
        deviations,
    })
}
