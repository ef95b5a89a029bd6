//! Total variation distance: exact on finite distributions and estimated on
//! protocol transcripts.

use super::experiment::GameParams;
use super::forest::{Forest, Insert};
use super::instance::{Case, DihpInstance};
use super::protocol::{run_protocol, Protocol};
use crate::error::{Error, Result};
use crate::matchings::{sample_matching, Matching};
use crate::rng;
use crate::stats::Moments;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

const NORM_TOL: f64 = 1e-9;

/// A finitely supported probability distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDistribution<K: Ord> {
    probs: BTreeMap<K, f64>,
}

impl<K: Ord + Clone> DiscreteDistribution<K> {
    /// Weights must be non-negative and sum to 1 within 1e-9. Repeated
    /// outcomes are merged.
    pub fn new(weights: impl IntoIterator<Item = (K, f64)>) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for (k, p) in weights {
            if !(p >= 0.0) {
                return Err(Error::Domain(format!("negative or NaN weight {p}")));
            }
            *probs.entry(k).or_insert(0.0) += p;
        }
        let total: f64 = probs.values().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(total));
        }
        Ok(Self { probs })
    }

    /// Empirical distribution of a sample.
    pub fn from_counts(counts: &BTreeMap<K, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::EmptySet);
        }
        Self::new(counts.iter().map(|(k, &c)| (k.clone(), c as f64 / total as f64)))
    }

    pub fn prob(&self, k: &K) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&K, f64)> {
        self.probs.iter().filter(|(_, &p)| p > 0.0).map(|(k, &p)| (k, p))
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Distribution of `f(X)`.
    pub fn push_forward<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> DiscreteDistribution<J> {
        let mut probs = BTreeMap::new();
        for (k, &p) in &self.probs {
            *probs.entry(f(k)).or_insert(0.0) += p;
        }
        DiscreteDistribution { probs }
    }

    /// Joint distribution of independent `(X, W)`.
    pub fn product<J: Ord + Clone>(&self, other: &DiscreteDistribution<J>) -> DiscreteDistribution<(K, J)> {
        let mut probs = BTreeMap::new();
        for (k, &p) in &self.probs {
            for (j, &q) in &other.probs {
                probs.insert((k.clone(), j.clone()), p * q);
            }
        }
        DiscreteDistribution { probs }
    }
}

/// `½ Σ_ω |μ(ω) − ν(ω)|`.
pub fn exact_tvd<K: Ord + Clone>(mu: &DiscreteDistribution<K>, nu: &DiscreteDistribution<K>) -> f64 {
    let mut sum = 0.0;
    for (k, &p) in &mu.probs {
        sum += (p - nu.prob(k)).abs();
    }
    for (k, &q) in &nu.probs {
        if !mu.probs.contains_key(k) {
            sum += q;
        }
    }
    (0.5 * sum).clamp(0.0, 1.0)
}

/// `E_{X∼μ} |1 − ν(X)/μ(X)|`, which equals twice the TVD when `ν ≪ μ`.
pub fn tvd_expectation_form<K: Ord + Clone>(mu: &DiscreteDistribution<K>, nu: &DiscreteDistribution<K>) -> Result<f64> {
    if nu.support().any(|(k, _)| mu.prob(k) == 0.0) {
        return Err(Error::Domain("ν must be absolutely continuous with respect to μ".into()));
    }
    Ok(mu.support().map(|(k, p)| p * (1.0 - nu.prob(k) / p).abs()).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TvdMode {
    /// Per sampled matching sequence, enumerate all label vectors and
    /// compute the conditional TVD exactly; average over the samples.
    Exact,
    /// Histogram sampled `(M, S)` pairs from each case and compare.
    PlugIn,
}

/// Largest label space enumerated in exact mode, in bits.
pub const EXACT_LABEL_BITS: u32 = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TvdReport {
    pub protocol: String,
    pub params: GameParams,
    pub mode: TvdMode,
    pub trials: u64,
    pub seed: u64,
    pub tvd: f64,
    pub bootstrap_se: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Plug-in only: upper bound on the expected upward bias.
    pub bias_bound: Option<f64>,
    pub distinct_yes: Option<usize>,
    pub distinct_no: Option<usize>,
}

pub const BOOTSTRAP_RESAMPLES: usize = 400;

/// TVD between `(M_{1:T}, S^Y)` and `(M_{1:T}, S^N)`.
///
/// Exact mode needs `αn·T ≤ 20`. Protocol coins are drawn from one stream
/// per sampled matching sequence and reused for every label vector.
pub fn transcript_tvd_experiment<P: Protocol>(
    p: &P,
    params: GameParams,
    mode: TvdMode,
    trials: u64,
    seed: u64,
) -> Result<TvdReport> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be positive".into()));
    }
    if 2 * params.alpha_n as u64 > params.n as u64 {
        return Err(Error::Precondition("2·alpha_n exceeds n".into()));
    }
    match mode {
        TvdMode::Exact => exact_mode(p, params, trials, seed),
        TvdMode::PlugIn => plug_in_mode(p, params, trials, seed),
    }
}

fn draw_matchings(params: GameParams, r: &mut impl Rng) -> Result<Vec<Matching>> {
    (0..params.players).map(|_| sample_matching(params.n, params.alpha_n, r)).collect()
}

fn split_labels(bits: u64, alpha_n: usize, players: usize) -> Vec<Vec<bool>> {
    (0..players).map(|t| (0..alpha_n).map(|j| bits >> (t * alpha_n + j) & 1 == 1).collect()).collect()
}

/// Whether some partition explains the labels, i.e. no odd cycle.
fn consistent(n: u32, matchings: &[Matching], labels: &[Vec<bool>]) -> bool {
    let mut f = Forest::new(n);
    for (m, w) in matchings.iter().zip(labels) {
        for (&(a, b), &l) in m.edges().iter().zip(w) {
            if f.insert(a, b, l) == (Insert::Cycle { label_sum: true }) {
                return false;
            }
        }
    }
    true
}

fn conditional_tvd<P: Protocol>(p: &P, params: GameParams, matchings: Vec<Matching>, coins: rng::Stream) -> Result<f64> {
    let (a, t) = (params.alpha_n as usize, params.players as usize);
    let bits = (a * t) as u32;
    let mut yes: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    let mut no: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    let mut inst = DihpInstance { n: params.n, alpha_n: params.alpha_n, matchings, labels: Vec::new(), case: Case::No, hidden: None };
    for w in 0..1u64 << bits {
        inst.labels = split_labels(w, a, t);
        let key = run_protocol(p, &inst, &mut coins.clone())?.key();
        if consistent(params.n, &inst.matchings, &inst.labels) {
            *yes.entry(key.clone()).or_insert(0) += 1;
        }
        *no.entry(key).or_insert(0) += 1;
    }
    Ok(exact_tvd(&DiscreteDistribution::from_counts(&yes)?, &DiscreteDistribution::from_counts(&no)?))
}

fn exact_mode<P: Protocol>(p: &P, params: GameParams, trials: u64, seed: u64) -> Result<TvdReport> {
    if params.alpha_n as u64 * params.players as u64 > EXACT_LABEL_BITS as u64 {
        return Err(Error::Precondition(format!(
            "transcript space too large for exact mode: αn·T = {} > {EXACT_LABEL_BITS}",
            params.alpha_n as u64 * params.players as u64
        )));
    }
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let ms = draw_matchings(params, &mut r)?;
            conditional_tvd(p, params, ms, r)
        })
        .collect::<Result<_>>()?;
    let tvd = values.iter().sum::<f64>() / trials as f64;
    let mut br = rng::substream(seed, 1, 0);
    let n = values.len();
    let boots: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| (0..n).map(|_| values[br.gen_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    Ok(report(p, params, TvdMode::Exact, trials, seed, tvd, boots, None))
}

type Sample = (Vec<(u32, u32)>, Vec<u8>);

fn plug_in_mode<P: Protocol>(p: &P, params: GameParams, trials: u64, seed: u64) -> Result<TvdReport> {
    let draw = |case: CaseSel, i: u64| -> Result<Sample> {
        let mut r = rng::substream(seed, case as u64 + 2, i);
        let mode = match case {
            CaseSel::Yes => super::instance::CaseMode::Yes,
            CaseSel::No => super::instance::CaseMode::No,
        };
        let inst = super::instance::gen_instance(params.n, params.alpha_n, params.players, mode, &mut r)?;
        let key = run_protocol(p, &inst, &mut r)?.key();
        let edges = inst.matchings.iter().flat_map(|m| m.edges().iter().copied().chain([(u32::MAX, u32::MAX)])).collect();
        Ok((edges, key))
    };
    let ys: Vec<Sample> = (0..trials).into_par_iter().map(|i| draw(CaseSel::Yes, i)).collect::<Result<_>>()?;
    let ns: Vec<Sample> = (0..trials).into_par_iter().map(|i| draw(CaseSel::No, i)).collect::<Result<_>>()?;

    // Intern outcomes so resampling works on small integers.
    let mut ids: BTreeMap<&Sample, usize> = BTreeMap::new();
    for s in ys.iter().chain(&ns) {
        let next = ids.len();
        ids.entry(s).or_insert(next);
    }
    let y: Vec<usize> = ys.iter().map(|s| ids[s]).collect();
    let nn: Vec<usize> = ns.iter().map(|s| ids[s]).collect();
    let k = ids.len();
    let plug = |y: &mut dyn Iterator<Item = usize>, n: &mut dyn Iterator<Item = usize>| {
        let mut c = vec![0i64; k];
        for i in y {
            c[i] += 1;
        }
        for i in n {
            c[i] -= 1;
        }
        0.5 * c.iter().map(|x| x.unsigned_abs()).sum::<u64>() as f64 / trials as f64
    };
    let tvd = plug(&mut y.iter().copied(), &mut nn.iter().copied());
    let mut br = rng::substream(seed, 1, 0);
    let r = trials as usize;
    let boots: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            let ry: Vec<usize> = (0..r).map(|_| y[br.gen_range(0..r)]).collect();
            let rn: Vec<usize> = (0..r).map(|_| nn[br.gen_range(0..r)]).collect();
            plug(&mut ry.into_iter(), &mut rn.into_iter())
        })
        .collect();
    let distinct = |v: &[usize]| {
        let mut v = v.to_vec();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    let (ky, kn) = (distinct(&y), distinct(&nn));
    let bias = 0.5 * ((ky as f64 / trials as f64).sqrt() + (kn as f64 / trials as f64).sqrt());
    let mut rep = report(p, params, TvdMode::PlugIn, trials, seed, tvd, boots, Some(bias));
    rep.distinct_yes = Some(ky);
    rep.distinct_no = Some(kn);
    Ok(rep)
}

#[derive(Clone, Copy)]
enum CaseSel {
    Yes,
    No,
}

#[allow(clippy::too_many_arguments)]
fn report<P: Protocol>(p: &P, params: GameParams, mode: TvdMode, trials: u64, seed: u64, tvd: f64, mut boots: Vec<f64>, bias: Option<f64>) -> TvdReport {
    let m: Moments = boots.iter().copied().collect();
    boots.sort_by(f64::total_cmp);
    let q = |f: f64| boots[((boots.len() - 1) as f64 * f).round() as usize];
    TvdReport {
        protocol: p.name().to_string(),
        params,
        mode,
        trials,
        seed,
        tvd,
        bootstrap_se: m.variance().sqrt(),
        ci_lo: q(0.025),
        ci_hi: q(0.975),
        bias_bound: bias,
        distinct_yes: None,
        distinct_no: None,
    }
}
