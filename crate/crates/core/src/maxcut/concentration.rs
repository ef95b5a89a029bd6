use super::{cut_value, MultiGraph};
use crate::error::{Error, Result};
use crate::rng;
use crate::stats::{Moments, Proportion};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// `exp(−Δ²/(2μ + 2Δ))`, the upper tail bound for a sum of Bernoulli
/// variables whose conditional means are each at most `p`, with `μ = pn`.
pub fn chernoff_bound(mu: f64, delta: f64) -> Result<f64> {
    if !(mu > 0.0 && delta > 0.0) {
        return Err(Error::Domain(format!("need μ > 0 and Δ > 0, got μ = {mu}, Δ = {delta}")));
    }
    Ok((-delta * delta / (2.0 * mu + 2.0 * delta)).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Adaptivity {
    /// Independent Bernoulli(p).
    Iid,
    /// `Pr[X_k = 1 | past] = p` while the running sum is at most `p·k`,
    /// otherwise `p/2`.
    Adaptive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernoffReport {
    pub p: f64,
    pub n: u64,
    pub delta: f64,
    pub adaptivity: Adaptivity,
    pub mu: f64,
    pub bound: f64,
    /// Empirical `Pr[Σ X_k ≥ μ + Δ]`.
    pub tail: Proportion,
    pub pass: bool,
}

pub fn chernoff_check(p: f64, n: u64, delta: f64, adaptivity: Adaptivity, trials: u64, seed: u64) -> Result<ChernoffReport> {
    if !(0.0..=1.0).contains(&p) || n == 0 || trials == 0 {
        return Err(Error::Domain("need p ∈ [0, 1], n > 0 and trials > 0".into()));
    }
    let mu = p * n as f64;
    let bound = chernoff_bound(mu, delta)?;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let mut sum = 0u64;
            for k in 0..n {
                let pk = match adaptivity {
                    Adaptivity::Iid => p,
                    Adaptivity::Adaptive if sum as f64 <= p * k as f64 => p,
                    Adaptivity::Adaptive => p / 2.0,
                };
                sum += r.gen_bool(pk) as u64;
            }
            (sum as f64 >= mu + delta) as u64
        })
        .sum();
    let tail = Proportion::new(hits, trials);
    Ok(ChernoffReport { p, n, delta, adaptivity, mu, bound, tail, pass: tail.rate <= bound + 3.0 * tail.std_err() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutTailReport {
    pub m: u64,
    pub max_multiplicity: u32,
    pub delta: f64,
    /// `k/(δ²m)`.
    pub bound: f64,
    pub vacuous: bool,
    /// Empirical `Pr[cut(S) < m/2·(1 − δ)]` for uniform `S`.
    pub tail: Proportion,
    pub mean_cut: f64,
    pub mean_std_err: f64,
    /// `|mean − m/2| ≤ 3` standard errors.
    pub mean_pass: bool,
    pub pass: bool,
}

pub fn random_cut_tail_check(g: &MultiGraph, delta: f64, trials: u64, seed: u64) -> Result<CutTailReport> {
    if !(delta > 0.0) || trials == 0 {
        return Err(Error::Domain("need δ > 0 and trials > 0".into()));
    }
    let m = g.m();
    let k = g.max_multiplicity();
    let threshold = m as f64 / 2.0 * (1.0 - delta);
    let cuts: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let side: Vec<bool> = (0..g.n()).map(|_| r.gen()).collect();
            cut_value(g, &side)
        })
        .collect();
    let tail = Proportion::new(cuts.iter().filter(|&&c| (c as f64) < threshold).count() as u64, trials);
    let mom: Moments = cuts.iter().map(|&c| c as f64).collect();
    let bound = if m == 0 { f64::INFINITY } else { k as f64 / (delta * delta * m as f64) };
    let vacuous = bound >= 1.0;
    let se = mom.std_err();
    let mean_pass = (mom.mean - m as f64 / 2.0).abs() <= 3.0 * se + 1e-12;
    let pass = mean_pass && (vacuous || tail.rate <= bound + 3.0 * tail.std_err());
    Ok(CutTailReport { m, max_multiplicity: k, delta, bound, vacuous, tail, mean_cut: mom.mean, mean_std_err: se, mean_pass, pass })
}
