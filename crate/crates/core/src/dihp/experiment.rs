use super::instance::{gen_instance, Case, CaseMode};
use super::protocol::{run_protocol, Protocol};
use crate::error::Result;
use crate::rng;
use crate::stats::{Moments, Proportion};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GameParams {
    pub n: u32,
    pub alpha_n: u32,
    pub players: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Outcome {
    case: Case,
    output: Case,
    cycle: bool,
    charged: usize,
    free: usize,
}

/// Success statistics of a protocol over independent seeded trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdvantageReport {
    pub protocol: String,
    pub params: GameParams,
    pub budget: usize,
    pub trials: u64,
    pub seed: u64,
    pub success: Proportion,
    /// `Pr[output = case] − 1/2`.
    pub advantage: f64,
    pub cycle: Proportion,
    pub success_yes: Proportion,
    pub success_no: Proportion,
    pub mean_charged_bits: f64,
    pub mean_free_bits: f64,
    pub max_charged_bits: usize,
}

/// Trial `i` draws its instance and protocol coins from stream `(seed, i)`.
pub fn advantage_experiment<P: Protocol>(
    p: &P,
    params: GameParams,
    mode: CaseMode,
    trials: u64,
    seed: u64,
) -> Result<AdvantageReport> {
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i);
            let inst = gen_instance(params.n, params.alpha_n, params.players, mode, &mut r)?;
            let t = run_protocol(p, &inst, &mut r)?;
            let max_charged = t.messages.iter().map(|m| m.charged()).max().unwrap_or(0);
            Ok(Outcome { case: inst.case, output: t.output, cycle: t.cycle_found, charged: max_charged, free: t.free_bits() })
        })
        .collect::<Result<_>>()?;

    let count = |f: &dyn Fn(&Outcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
    let wins = count(&|o| o.output == o.case);
    let success = Proportion::new(wins, trials);
    let yes = count(&|o| o.case == Case::Yes);
    let charged: Moments = outcomes.iter().map(|o| o.charged as f64).collect();
    let free: Moments = outcomes.iter().map(|o| o.free as f64).collect();
    Ok(AdvantageReport {
        protocol: p.name().to_string(),
        params,
        budget: p.budget(),
        trials,
        seed,
        success,
        advantage: success.rate - 0.5,
        cycle: Proportion::new(count(&|o| o.cycle), trials),
        success_yes: Proportion::new(count(&|o| o.case == Case::Yes && o.output == Case::Yes), yes),
        success_no: Proportion::new(count(&|o| o.case == Case::No && o.output == Case::No), trials - yes),
        mean_charged_bits: charged.mean,
        mean_free_bits: free.mean,
        max_charged_bits: outcomes.iter().map(|o| o.charged).max().unwrap_or(0),
    })
}
