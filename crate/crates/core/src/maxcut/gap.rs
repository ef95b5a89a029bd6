use super::{maxcut_exact, maxcut_local, reduce_to_graph, MultiGraph};
use crate::dihp::{gen_instance, CaseMode, GameParams};
use crate::error::{Error, Result};
use crate::rng;
use crate::stats::{Moments, Proportion};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Solver {
    /// Exhaustive; needs `n ≤ 26`.
    Exact,
    /// Local search. A lower bound only: NO-side values are not certified.
    Local { restarts: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapConfig {
    pub params: GameParams,
    pub epsilon: f64,
    /// Defaults to `ε/100`.
    pub delta: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub solver: Solver,
    /// A pair counts towards `ratio` when `cut_yes ≥ threshold·cut_no`.
    pub ratio_threshold: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GapTrial {
    pub m_yes: u64,
    pub cut_yes: u64,
    pub m_no: u64,
    pub cut_no: u64,
    pub max_multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub config: GapConfig,
    pub delta: f64,
    /// `αnT/2 · (1 − δ)`.
    pub m0: f64,
    /// YES: `maxcut ≥ m0`.
    pub yes_above_m0: Proportion,
    /// YES: `maxcut = m`.
    pub yes_bipartite: Proportion,
    /// NO: `maxcut ≤ m0/(2 − ε)`.
    pub no_below: Proportion,
    /// Paired trials with `cut_yes ≥ threshold · cut_no`.
    pub ratio: Proportion,
    pub mean_ratio: f64,
    pub median_ratio: f64,
    /// Mean of `cut_no/(m_no/2)`.
    pub no_over_half_m: f64,
    /// Both graphs of the pair have multiplicity at most 2.
    pub multiplicity_le2: Proportion,
    /// Whether every cut value was computed exactly.
    pub rigorous: bool,
    pub trials: Vec<GapTrial>,
}

fn solve(g: &MultiGraph, solver: Solver, seed: u64, phase: u64, i: u64) -> Result<u64> {
    Ok(match solver {
        Solver::Exact => maxcut_exact(g)?.value,
        Solver::Local { restarts } => maxcut_local(g, restarts, &mut rng::substream(seed, phase, i)).value,
    })
}

/// Paired YES/NO reductions: trial `i` draws its YES instance from phase 0
/// and its NO instance from phase 1 of the seed.
pub fn gap_experiment(cfg: GapConfig) -> Result<GapReport> {
    let p = cfg.params;
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {}", cfg.epsilon)));
    }
    if cfg.trials == 0 {
        return Err(Error::Precondition("trials must be positive".into()));
    }
    let delta = cfg.delta.unwrap_or(cfg.epsilon / 100.0);
    let trials: Vec<GapTrial> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let yes = reduce_to_graph(&gen_instance(p.n, p.alpha_n, p.players, CaseMode::Yes, &mut rng::substream(cfg.seed, 0, i))?);
            let no = reduce_to_graph(&gen_instance(p.n, p.alpha_n, p.players, CaseMode::No, &mut rng::substream(cfg.seed, 1, i))?);
            Ok(GapTrial {
                m_yes: yes.m(),
                cut_yes: solve(&yes, cfg.solver, cfg.seed, 2, i)?,
                m_no: no.m(),
                cut_no: solve(&no, cfg.solver, cfg.seed, 3, i)?,
                max_multiplicity: yes.max_multiplicity().max(no.max_multiplicity()),
            })
        })
        .collect::<Result<_>>()?;
    let m0 = p.alpha_n as f64 * p.players as f64 / 2.0 * (1.0 - delta);
    let count = |f: &dyn Fn(&GapTrial) -> bool| Proportion::new(trials.iter().filter(|t| f(t)).count() as u64, cfg.trials);
    let ratio_of = |t: &GapTrial| if t.cut_no == 0 { f64::INFINITY } else { t.cut_yes as f64 / t.cut_no as f64 };
    let mut ratios: Vec<f64> = trials.iter().map(ratio_of).collect();
    ratios.sort_by(f64::total_cmp);
    let finite: Moments = ratios.iter().copied().filter(|r| r.is_finite()).collect();
    let half: Moments = trials.iter().filter(|t| t.m_no > 0).map(|t| 2.0 * t.cut_no as f64 / t.m_no as f64).collect();
    Ok(GapReport {
        config: cfg,
        delta,
        m0,
        yes_above_m0: count(&|t| t.cut_yes as f64 >= m0),
        yes_bipartite: count(&|t| t.cut_yes == t.m_yes),
        no_below: count(&|t| t.cut_no as f64 <= m0 / (2.0 - cfg.epsilon)),
        ratio: count(&|t| t.cut_yes as f64 >= cfg.ratio_threshold * t.cut_no as f64),
        mean_ratio: finite.mean,
        median_ratio: ratios[ratios.len() / 2],
        no_over_half_m: half.mean,
        multiplicity_le2: count(&|t| t.max_multiplicity <= 2),
        rigorous: cfg.solver == Solver::Exact,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(solver: Solver) -> GapConfig {
        GapConfig {
            params: GameParams { n: 14, alpha_n: 3, players: 10 },
            epsilon: 0.5,
            delta: None,
            trials: 20,
            seed: 5,
            solver,
            ratio_threshold: 1.7,
        }
    }

    #[test]
    fn yes_side_is_bipartite() {
        let r = gap_experiment(cfg(Solver::Exact)).unwrap();
        assert_eq!(r.yes_bipartite.successes, 20);
        assert!(r.rigorous);
        assert!(r.trials.iter().all(|t| 2 * t.cut_no >= t.m_no && t.cut_no <= t.m_no));
        assert_eq!(r, gap_experiment(cfg(Solver::Exact)).unwrap());
    }

    #[test]
    fn heuristic_agrees_on_yes() {
        let r = gap_experiment(cfg(Solver::Local { restarts: 10 })).unwrap();
        assert_eq!(r.yes_bipartite.successes, 20);
        assert!(!r.rigorous);
    }
}
