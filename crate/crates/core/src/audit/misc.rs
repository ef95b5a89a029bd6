//! Elementary inequalities, the drift lemma, the q-ratio inequality and the
//! KKL level bounds, checked exhaustively or on seeded samples.

use super::messages::random_dense_set;
use crate::bitcube::{kkl_profile, tilde_spectrum};
use crate::error::{Error, Result};
use crate::logmath::{entropy, ln_binom, ln_factorial, log_le};
use crate::rng;
use crate::stats::{Moments, Proportion};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Outcome of one family of inequality checks. `worst_margin` is the
/// smallest `rhs − lhs` seen (log domain where the check is logarithmic).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MiscCheck {
    pub name: &'static str,
    pub cases: u64,
    pub violations: u64,
    pub worst_margin: f64,
}

impl MiscCheck {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, violations: 0, worst_margin: f64::INFINITY }
    }

    /// Record `lhs ≤ rhs` (both logarithms).
    fn log_case(&mut self, lhs: f64, rhs: f64) {
        self.cases += 1;
        self.worst_margin = self.worst_margin.min(rhs - lhs);
        if !log_le(lhs, rhs) {
            self.violations += 1;
        }
    }

    /// Record `|lhs − rhs| ≤ tol` as a two-sided case.
    fn eq_case(&mut self, lhs: f64, rhs: f64, tol: f64) {
        self.cases += 1;
        let err = (lhs - rhs).abs();
        self.worst_margin = self.worst_margin.min(tol - err);
        if err > tol {
            self.violations += 1;
        }
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// `e^{nH(k/n)}/(n+1) ≤ C(n,k) ≤ e^{nH(k/n)}` for all `0 ≤ k ≤ n ≤ max_n`.
pub fn binom_entropy_check(max_n: u32) -> MiscCheck {
    let mut c = MiscCheck::new("binom-entropy");
    for n in 1..=max_n {
        let nf = n as f64;
        for k in 0..=n {
            let h = nf * entropy(k as f64 / nf);
            let b = ln_binom(nf, k as f64);
            c.log_case(b, h);
            c.log_case(h - (nf + 1.0).ln(), b);
        }
    }
    c
}

/// `(S/3m)^S ≤ Π fᵢ(aᵢ) ≤ S^S` with each `fᵢ` either `x^x` or `x!`, over
/// `per_m` random tuples for each `m ≤ 4` and every choice of the `fᵢ`.
pub fn factorial_quotient_check(per_m: u64, max_a: u32, seed: u64) -> MiscCheck {
    let mut c = MiscCheck::new("factorial-quotient");
    for m in 1..=4u32 {
        let mut r = rng::substream(seed, 0, m as u64);
        for _ in 0..per_m {
            let a: Vec<f64> = (0..m).map(|_| r.gen_range(1..=max_a) as f64).collect();
            let s: f64 = a.iter().sum();
            for choice in 0..1u32 << m {
                let prod: f64 = a
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| if choice >> i & 1 == 1 { x * x.ln() } else { ln_factorial(x) })
                    .sum();
                c.log_case(s * (s / (3.0 * m as f64)).ln(), prod);
                c.log_case(prod, s * s.ln());
            }
        }
    }
    c
}

/// `E_x[1/|P_x|] = m/2^n` for random partitions of `{0,1}^n`, `n ≤ max_n`.
pub fn partition_check(max_n: u32, per_n: u64, seed: u64) -> MiscCheck {
    let mut c = MiscCheck::new("partition");
    for n in 1..=max_n {
        let mut r = rng::substream(seed, 1, n as u64);
        let len = 1usize << n;
        for _ in 0..per_n {
            let parts = r.gen_range(1..=len);
            let label: Vec<usize> = (0..len).map(|_| r.gen_range(0..parts)).collect();
            let mut sizes = vec![0u64; parts];
            label.iter().for_each(|&p| sizes[p] += 1);
            let m = sizes.iter().filter(|&&s| s > 0).count();
            let lhs = label.iter().map(|&p| 1.0 / sizes[p] as f64).sum::<f64>() / len as f64;
            c.eq_case(lhs, m as f64 / len as f64, 1e-12);
        }
    }
    c
}

/// `Σ|aᵢ| ≤ √(m Σ aᵢ²)` on random vectors.
pub fn cauchy_schwarz_check(cases: u64, seed: u64) -> MiscCheck {
    let mut c = MiscCheck::new("cauchy-schwarz");
    let mut r = rng::substream(seed, 2, 0);
    for _ in 0..cases {
        let m = r.gen_range(1..=64);
        let scale = 10f64.powi(r.gen_range(-3..=3));
        let a: Vec<f64> = (0..m).map(|_| scale * r.gen_range(-1.0..1.0)).collect();
        let l1: f64 = a.iter().map(|x| x.abs()).sum();
        let l2: f64 = a.iter().map(|x| x * x).sum();
        if l1 == 0.0 {
            continue;
        }
        c.log_case(l1.ln(), 0.5 * (m as f64 * l2).ln());
    }
    c
}

/// All four elementary families on their default ranges.
pub fn misc_inequalities(seed: u64) -> Vec<MiscCheck> {
    vec![
        binom_entropy_check(200),
        factorial_quotient_check(5_000, 50, seed),
        partition_check(10, 50, seed),
        cauchy_schwarz_check(10_000, seed),
    ]
}

/// Exhaustive check of `q(k,i,b,n) ≤ q(k,i,n)·20^{−b}·4^{k−i}` at one `n`,
/// over every matching size `m < n/100`, `k < n/10`, `2i + b ≤ 2k` and
/// `b ≤ m − i`.
///
/// The factors `C(m,i)` and `C(n,2k)` cancel, so with `d = k − i` the check
/// is `C(m−i,b)·2^b·C(n−2m, 2d−b) ≤ C(n−2m, 2d)·20^{−b}·4^d`.
pub fn qkib_inequality_audit(n: u32) -> MiscCheck {
    let lf: Vec<f64> = (0..=n).map(|x| ln_factorial(x as f64)).collect();
    let lb = |a: u32, b: u32| lf[a as usize] - lf[b as usize] - lf[(a - b) as usize];
    let (ln2, ln4, ln20) = (2f64.ln(), 4f64.ln(), 20f64.ln());
    let k_max = (n - 1) / 10;
    let m_max = (n - 1) / 100;
    let per_m: Vec<MiscCheck> = (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut c = MiscCheck::new("qkib");
            let rest = n - 2 * m;
            for i in 0..=m.min(k_max) {
                for d in 0..=k_max - i {
                    let base = lb(rest, 2 * d);
                    for b in 0..=(m - i).min(2 * d) {
                        let lhs = lb(m - i, b) + b as f64 * ln2 + lb(rest, 2 * d - b);
                        c.log_case(lhs, base - b as f64 * ln20 + d as f64 * ln4);
                    }
                }
            }
            c
        })
        .collect();
    let mut out = MiscCheck::new("qkib");
    for c in per_m {
        out.cases += c.cases;
        out.violations += c.violations;
        out.worst_margin = out.worst_margin.min(c.worst_margin);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MartingaleReport {
    pub m: u64,
    pub rounds: u32,
    pub noise: f64,
    pub trials: u64,
    pub seed: u64,
    pub x0: f64,
    pub threshold: f64,
    pub exceed: Proportion,
    /// `2^{−T}`.
    pub bound: f64,
    pub pass: bool,
    /// Over the first trials, per bin of `X_{k−1}` (by decade), mean of `X_k / (X_{k−1}(1 + 1/m + X_{k−1}/m²))`.
    pub drift_bins: Vec<DriftBin>,
    pub drift_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftBin {
    pub log10_lo: i32,
    pub count: u64,
    pub mean_ratio: f64,
    pub std_err: f64,
}

const DRIFT_BINS: usize = 40;
/// Trials that also record the drift diagnostic.
const DRIFT_TRIALS: u64 = 200;

/// Simulate `X_k = X_{k−1}(1 + 1/m + X_{k−1}/m²)·U_k` with
/// `U_k ~ Unif[1−noise, 1+noise]`, `X_0 = m/(2·100^T)`, for `mT` steps, and
/// record how often `max X_k > m/2^T`. The drift condition holds with
/// equality in expectation.
pub fn martingale_check(m: u64, rounds: u32, noise: f64, trials: u64, seed: u64) -> Result<MartingaleReport> {
    if m == 0 || rounds == 0 || trials == 0 {
        return Err(Error::Precondition("m, T and trials must be positive".into()));
    }
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::Domain(format!("noise {noise} outside [0, 1]")));
    }
    let steps = m.checked_mul(rounds as u64).filter(|&s| s <= 1_000_000).ok_or_else(|| Error::Precondition("m·T exceeds 10^6".into()))?;
    let mf = m as f64;
    let x0 = mf / (2.0 * 100f64.powi(rounds as i32));
    let threshold = mf / 2f64.powi(rounds as i32);
    let runs: Vec<(bool, Vec<Moments>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let mut bins = vec![Moments::default(); DRIFT_BINS];
            let mut x = x0;
            let mut hit = false;
            // X = x·10^{-shift}; rescaling keeps x clear of subnormals.
            let mut shift = 0i32;
            let mut unscale = 1.0 / (mf * mf);
            for _ in 0..steps {
                let factor = 1.0 + 1.0 / mf + x * unscale;
                let u = if noise > 0.0 { r.gen_range(1.0 - noise..=1.0 + noise) } else { 1.0 };
                let next = x * factor * u;
                if i < DRIFT_TRIALS {
                    // Bin by decade of X_{k−1}, offset so that X_0 lands in a bin.
                    let decade = x.log10().floor() as i64 - shift as i64;
                    let bin = (decade + 2 * rounds as i64 + 2).clamp(0, DRIFT_BINS as i64 - 1) as usize;
                    bins[bin].push(next / (x * factor));
                }
                x = next;
                if shift == 0 && x > threshold {
                    hit = true;
                    break;
                }
                if x < 1e-200 && x > 0.0 {
                    x *= 1e200;
                    shift += 200;
                    unscale = 10f64.powi(-shift) / (mf * mf);
                } else if shift > 0 && x > 1e200 {
                    x *= 1e-200;
                    shift -= 200;
                    unscale = 10f64.powi(-shift) / (mf * mf);
                }
            }
            (hit, bins)
        })
        .collect();
    let hits = runs.iter().filter(|(h, _)| *h).count() as u64;
    let mut bins = vec![Moments::default(); DRIFT_BINS];
    for (_, b) in &runs {
        for (acc, x) in bins.iter_mut().zip(b) {
            acc.merge(x);
        }
    }
    let drift_bins: Vec<DriftBin> = bins
        .iter()
        .enumerate()
        .filter(|(_, b)| b.count > 0)
        .map(|(j, b)| DriftBin { log10_lo: j as i32 - 2 * rounds as i32 - 2, count: b.count, mean_ratio: b.mean, std_err: b.std_err() })
        .collect();
    let drift_pass = drift_bins.iter().all(|b| b.count < 30 || b.mean_ratio <= 1.0 + 3.0 * b.std_err + 1e-12);
    let exceed = Proportion::new(hits, trials);
    let bound = 2f64.powi(-(rounds as i32));
    let se = (bound * (1.0 - bound) / trials as f64).sqrt();
    Ok(MartingaleReport {
        m,
        rounds,
        noise,
        trials,
        seed,
        x0,
        threshold,
        exceed,
        bound,
        pass: exceed.rate <= bound + 3.0 * se,
        drift_bins,
        drift_pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KklAudit {
    pub sets: u64,
    pub seed: u64,
    /// `(set, centre, q)` triples checked.
    pub checks: u64,
    pub failures: u64,
    pub pass: bool,
}

/// Level bounds on `sets` random dense sets `A ⊆ {0,1}^m`, `m ∈ [4, 12]`,
/// with `|A| ≥ 2^{m−d}`, `d ∈ [1, 4]`, at every centre and every `q ≤ d`.
pub fn kkl_audit(sets: u64, seed: u64) -> Result<KklAudit> {
    let per: Vec<(u64, u64)> = (0..sets)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let m = r.gen_range(4..=12);
            let d = r.gen_range(1..=4);
            let a = random_dense_set(m, d, &mut r)?;
            let t = tilde_spectrum(&a)?;
            let (mut checks, mut fails) = (0, 0);
            for q in 1..=d {
                let p = kkl_profile(&t, q, d)?;
                for y in 0..1u64 << m {
                    checks += 1;
                    fails += !p.at(y).pass() as u64;
                }
            }
            Ok((checks, fails))
        })
        .collect::<Result<_>>()?;
    let checks = per.iter().map(|x| x.0).sum();
    let failures = per.iter().map(|x| x.1).sum();
    Ok(KklAudit { sets, seed, checks, failures, pass: failures == 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_binomial_sandwich() {
        let b = ln_binom(10.0, 5.0).exp();
        assert!((b - 252.0).abs() < 1e-9);
        assert!(1024.0 / 11.0 <= b && b <= 1024.0);
        assert!(binom_entropy_check(200).pass());
    }

    #[test]
    fn factorial_example() {
        let prod = 27.0f64 * 256.0;
        assert!((7.0f64 / 6.0).powi(7) <= prod && prod <= 7f64.powi(7));
        assert!(factorial_quotient_check(500, 50, 1).pass());
    }

    #[test]
    fn partition_and_cs() {
        let c = partition_check(8, 20, 3);
        assert!(c.pass() && c.cases == 160);
        assert!(cauchy_schwarz_check(1000, 4).pass());
    }

    #[test]
    fn qkib_small_n() {
        let c = qkib_inequality_audit(1000);
        assert!(c.pass(), "{c:?}");
        assert!(c.cases > 1000);
        assert!(c.worst_margin > -1e-9);
    }

    #[test]
    fn constant_process_never_exceeds() {
        let r = martingale_check(100, 2, 0.0, 10, 1).unwrap();
        assert_eq!(r.exceed.successes, 0);
        assert!(r.drift_pass);
    }

    #[test]
    fn noisy_process() {
        let r = martingale_check(1000, 3, 0.9, 500, 2).unwrap();
        assert!(r.pass && r.drift_pass, "{r:?}");
        assert!(martingale_check(10_000, 101, 0.5, 1, 0).is_err());
    }

    #[test]
    fn kkl_small() {
        let k = kkl_audit(50, 5).unwrap();
        assert!(k.pass && k.checks > 50);
    }
}
