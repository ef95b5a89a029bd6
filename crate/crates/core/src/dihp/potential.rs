//! Edge-by-edge tracking of the forest potential under the distinguisher.

use super::experiment::GameParams;
use super::forest::{Forest, Insert};
use super::growing::{adaptive_solver, GrowingBoard};
use super::instance::{gen_instance, CaseMode};
use super::protocol::Protocol;
use crate::error::{Error, Result};
use crate::matchings::sample_matching;
use crate::rng;
use crate::stats::Moments;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundPotential {
    pub round: usize,
    pub mean: f64,
    pub std_err: f64,
    pub max: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialTrace {
    pub params: GameParams,
    pub s: usize,
    pub trials: u64,
    pub seed: u64,
    /// `‖F_t‖` after each round `t = 1..T`.
    pub rounds: Vec<RoundPotential>,
    /// Mean of `‖F^i‖/‖F^{i−1}‖` over matching edges with `‖F^{i−1}‖ > 0`
    /// (per-trial means, then averaged).
    pub mean_ratio: f64,
    pub ratio_std_err: f64,
    /// Largest intermediate potential seen in any trial.
    pub max_potential: u64,
    /// `1 + 12/n + 8·max‖F‖/n²`.
    pub ratio_bound: f64,
    pub ratio_pass: bool,
    /// Edges of `M_t` (t ≥ 2) with both endpoints in one component.
    pub cycle_hits: u64,
    /// `Σ ‖F^{i−1}‖/n²` over the same edges.
    pub predicted_hits: f64,
    pub cycle_pass: bool,
    pub edges_examined: u64,
}

struct TrialTrace {
    per_round: Vec<u64>,
    ratio: Moments,
    hits: u64,
    predicted: f64,
    max: u64,
    edges: u64,
}

fn one_trial(p: GameParams, s: usize, seed: u64, i: u64) -> Result<TrialTrace> {
    let mut r = rng::stream(seed, i);
    let n = p.n;
    let mut f = Forest::new(n);
    let mut out = TrialTrace { per_round: Vec::new(), ratio: Moments::default(), hits: 0, predicted: 0.0, max: 0, edges: 0 };
    let n2 = n as f64 * n as f64;
    for _ in 0..p.players {
        let m = sample_matching(n, p.alpha_n, &mut r)?;
        let fresh: Vec<(u32, u32)> = m
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| !f.in_component(a) && !f.in_component(b))
            .take(s)
            .collect();
        // Conditioned on earlier edges, each edge is uniform among the rest
        // only in a random order, so the canonical order is shuffled here.
        let mut order = m.edges().to_vec();
        order.shuffle(&mut r);
        for (a, b) in order {
            let prev = f.potential();
            out.edges += 1;
            out.predicted += prev as f64 / n2;
            if f.in_component(a) || f.in_component(b) {
                if let Insert::Cycle { .. } = f.insert(a, b, false) {
                    out.hits += 1;
                }
            }
            if prev > 0 {
                out.ratio.push(f.potential() as f64 / prev as f64);
            }
            out.max = out.max.max(f.potential());
        }
        for (a, b) in fresh {
            f.insert(a, b, false);
        }
        out.max = out.max.max(f.potential());
        out.per_round.push(f.potential());
    }
    Ok(out)
}

/// Simulate the distinguisher's forest without stopping at cycles.
pub fn potential_trace(params: GameParams, s: usize, trials: u64, seed: u64) -> Result<PotentialTrace> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be positive".into()));
    }
    let traces: Vec<TrialTrace> = (0..trials).into_par_iter().map(|i| one_trial(params, s, seed, i)).collect::<Result<_>>()?;
    let rounds = (0..params.players as usize)
        .map(|t| {
            let m: Moments = traces.iter().map(|x| x.per_round[t] as f64).collect();
            RoundPotential { round: t + 1, mean: m.mean, std_err: m.std_err(), max: traces.iter().map(|x| x.per_round[t]).max().unwrap_or(0) }
        })
        .collect();
    let ratios: Moments = traces.iter().filter(|x| x.ratio.count > 0).map(|x| x.ratio.mean).collect();
    let max_potential = traces.iter().map(|x| x.max).max().unwrap_or(0);
    let n = params.n as f64;
    let ratio_bound = 1.0 + 12.0 / n + 8.0 * max_potential as f64 / (n * n);
    let cycle_hits = traces.iter().map(|x| x.hits).sum();
    let predicted_hits: f64 = traces.iter().map(|x| x.predicted).sum();
    Ok(PotentialTrace {
        params,
        s,
        trials,
        seed,
        rounds,
        mean_ratio: ratios.mean,
        ratio_std_err: ratios.std_err(),
        max_potential,
        ratio_bound,
        ratio_pass: ratios.mean <= ratio_bound + 3.0 * ratios.std_err(),
        cycle_hits,
        predicted_hits,
        cycle_pass: cycle_hits as f64 <= 2.0 * predicted_hits + 3.0 * predicted_hits.sqrt(),
        edges_examined: traces.iter().map(|x| x.edges).sum(),
    })
}

/// Mean component size of the adaptive solver, round by round.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthTrace {
    pub params: GameParams,
    pub s: usize,
    pub trials: u64,
    /// Mean over trials of (average size before pruning in round t) /
    /// (average size after pruning in round t−1), for rounds where no cycle
    /// had been found yet. Index 0 is round 2.
    pub growth: Vec<f64>,
    pub samples: Vec<u64>,
}

pub fn adaptive_growth(params: GameParams, s: usize, trials: u64, seed: u64) -> Result<GrowthTrace> {
    let p = adaptive_solver(s);
    let boards: Vec<GrowingBoard> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let inst = gen_instance(params.n, params.alpha_n, params.players, CaseMode::Yes, &mut r)?;
            let mut board = p.start(inst.n, inst.players());
            for (t, (m, w)) in inst.matchings.iter().zip(&inst.labels).enumerate() {
                let msg = p.speak(&board, t, m, w, &mut r);
                p.post(&mut board, t, m, &msg);
            }
            Ok(board)
        })
        .collect::<Result<_>>()?;
    let rounds = params.players.saturating_sub(1) as usize;
    let mut growth = vec![Moments::default(); rounds];
    for b in &boards {
        for t in 1..b.history.len() {
            let (prev, cur) = (&b.history[t - 1], &b.history[t]);
            if cur.decided || prev.kept_components == 0 || cur.components == 0 {
                continue;
            }
            let before = prev.kept_covered as f64 / prev.kept_components as f64;
            let after = cur.covered as f64 / cur.components as f64;
            growth[t - 1].push(after / before);
        }
    }
    Ok(GrowthTrace {
        params,
        s,
        trials,
        growth: growth.iter().map(|m| m.mean).collect(),
        samples: growth.iter().map(|m| m.count).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_trace_is_consistent() {
        let p = GameParams { n: 1000, alpha_n: 50, players: 4 };
        let t = potential_trace(p, 20, 50, 1).unwrap();
        assert_eq!(t.rounds.len(), 4);
        // Round 1 is s fresh edges.
        assert_eq!(t.rounds[0].mean, 80.0);
        assert!(t.rounds.windows(2).all(|w| w[0].mean <= w[1].mean));
        assert!(t.ratio_pass && t.cycle_pass);
        assert_eq!(t, potential_trace(p, 20, 50, 1).unwrap());
    }

    #[test]
    fn adaptive_components_grow() {
        let p = GameParams { n: 2000, alpha_n: 200, players: 6 };
        let g = adaptive_growth(p, 500, 40, 2).unwrap();
        assert!(g.growth[0] >= 1.05, "{:?}", g.growth);
    }
}
