use crate::args::*;
use crate::output::{cell, opt_cell, Body, Output, Plot, Table};
use ihp_core::audit::{self, AuditParams, AuditReport};
use ihp_core::bitcube::{check_bounded, tilde_spectrum};
use ihp_core::dihp::{
    adaptive_growth, adaptive_solver, advantage_experiment, component_growing_distinguisher, gen_instance, potential_trace,
    transcript_tvd_experiment, CaseMode, ForwardLabels, GameParams, Protocol, RandomGuess, Trivial, TvdMode, TvdReport,
};
use ihp_core::matchings::sample_matching;
use ihp_core::maxcut::{gap_experiment, reduce_to_graph, GapConfig, Solver};
use ihp_core::{rng, BitVector, Error, Result, Spectrum};
use serde::Serialize;
use serde_json::{json, Value};

impl From<GameArgs> for GameParams {
    fn from(g: GameArgs) -> Self {
        GameParams { n: g.n, alpha_n: g.alpha_n, players: g.t }
    }
}

fn mode(c: CaseArg) -> CaseMode {
    match c {
        CaseArg::Yes => CaseMode::Yes,
        CaseArg::No => CaseMode::No,
        CaseArg::Mixed => CaseMode::Mixed,
    }
}

pub fn gen(a: &GenArgs) -> Result<Output> {
    let mut r = rng::stream(a.seed, a.index);
    let inst = gen_instance(a.game.n, a.game.alpha_n, a.game.t, mode(a.case), &mut r)?;
    let text = if a.graph { reduce_to_graph(&inst).to_text() } else { inst.to_text() };
    Ok(Output { command: "gen", config: serde_json::to_value(a).unwrap_or(Value::Null), seed: a.seed, pass: true, body: Body::Text(text) })
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AdvantageOut {
    advantage: ihp_core::dihp::AdvantageReport,
    tvd: Option<TvdReport>,
}

fn run_advantage<P: Protocol>(p: &P, a: &AdvantageArgs) -> Result<AdvantageOut> {
    let params = a.game.into();
    let advantage = advantage_experiment(p, params, mode(a.case), a.trials, a.seed)?;
    let tvd = match a.tvd {
        None => None,
        Some(m) => {
            let m = if m == TvdArg::Exact { TvdMode::Exact } else { TvdMode::PlugIn };
            Some(transcript_tvd_experiment(p, params, m, a.tvd_trials.unwrap_or(a.trials), a.seed)?)
        }
    };
    Ok(AdvantageOut { advantage, tvd })
}

fn need_budget(s: usize, min: usize, who: &str) -> Result<()> {
    if s < min {
        return Err(Error::Precondition(format!("{who} needs --s ≥ {min}")));
    }
    Ok(())
}

pub fn advantage(a: &AdvantageArgs) -> Result<Output> {
    let out = match a.protocol {
        ProtocolArg::Trivial => run_advantage(&Trivial, a)?,
        ProtocolArg::Random => run_advantage(&RandomGuess, a)?,
        ProtocolArg::Distinguisher => {
            need_budget(a.s, 2, "the distinguisher")?;
            run_advantage(&component_growing_distinguisher(a.s), a)?
        }
        ProtocolArg::Adaptive => {
            need_budget(a.s, 4, "the adaptive solver")?;
            run_advantage(&adaptive_solver(a.s), a)?
        }
        ProtocolArg::Forward => run_advantage(&ForwardLabels { budget: a.s, speakers: a.speakers }, a)?,
    };
    let r = &out.advantage;
    let mut pass = r.max_charged_bits <= r.budget;
    if matches!(a.protocol, ProtocolArg::Distinguisher | ProtocolArg::Trivial) {
        // One-sided: a YES instance never closes an odd cycle.
        pass &= r.success_yes.successes == r.success_yes.trials;
    }
    let mut t = Table::new(&[
        "protocol", "n", "alpha_n", "T", "budget", "trials", "success", "ci_lo", "ci_hi", "advantage", "cycle_rate", "success_yes",
        "success_no", "mean_charged_bits", "max_charged_bits", "tvd", "tvd_ci_lo", "tvd_ci_hi",
    ]);
    let tv = out.tvd.as_ref();
    t.push(vec![
        r.protocol.clone(),
        cell(r.params.n),
        cell(r.params.alpha_n),
        cell(r.params.players),
        cell(r.budget),
        cell(r.trials),
        cell(r.success.rate),
        cell(r.success.lo),
        cell(r.success.hi),
        cell(r.advantage),
        cell(r.cycle.rate),
        cell(r.success_yes.rate),
        cell(r.success_no.rate),
        cell(r.mean_charged_bits),
        cell(r.max_charged_bits),
        opt_cell(tv.map(|x| x.tvd)),
        opt_cell(tv.map(|x| x.ci_lo)),
        opt_cell(tv.map(|x| x.ci_hi)),
    ]);
    Ok(Output::report("advantage", a, a.seed, pass, &out, t))
}

// ---------------------------------------------------------------------------

pub fn gap(a: &GapArgs) -> Result<Output> {
    let cfg = GapConfig {
        params: a.game.into(),
        epsilon: a.epsilon,
        delta: a.delta,
        trials: a.trials,
        seed: a.seed,
        solver: if a.heuristic { Solver::Local { restarts: a.restarts } } else { Solver::Exact },
        ratio_threshold: a.ratio_threshold,
    };
    let r = gap_experiment(cfg)?;
    let mut t = Table::new(&["trial", "m_yes", "cut_yes", "m_no", "cut_no", "ratio", "max_multiplicity"]);
    for (i, x) in r.trials.iter().enumerate() {
        let ratio = if x.cut_no == 0 { f64::INFINITY } else { x.cut_yes as f64 / x.cut_no as f64 };
        t.push(vec![cell(i), cell(x.m_yes), cell(x.cut_yes), cell(x.m_no), cell(x.cut_no), cell(ratio), cell(x.max_multiplicity)]);
    }
    let pass = r.yes_bipartite.successes == r.yes_bipartite.trials && r.ratio.rate >= a.ratio_target;
    Ok(Output::report("gap", a, a.seed, pass, &r, t))
}

// ---------------------------------------------------------------------------

const AUDIT_COLUMNS: [&str; 8] = ["check", "case", "ell", "lhs", "rhs", "margin", "pass", "note"];

fn tuple_label(p: &AuditParams) -> String {
    format!("n={:e};C={:e};s*={};alpha={:e}", p.n, p.c, p.s_star, p.alpha)
}

fn push_sum(t: &mut Table, r: &AuditReport) {
    let label = tuple_label(&r.params);
    let asserted = r.preconditions.p1_to_p4();
    for row in &r.rows {
        let note = match (asserted, row.exact) {
            (false, _) => "preconditions fail; not asserted",
            (true, true) => "",
            (true, false) => "upper bound",
        };
        t.push(vec![
            r.sum.name().to_string(),
            label.clone(),
            cell(row.ell),
            cell(row.lhs),
            cell(row.rhs),
            cell(row.margin),
            cell(row.pass),
            note.to_string(),
        ]);
    }
}

fn summary_row(t: &mut Table, check: &str, case: String, margin: f64, pass: bool, note: String) {
    t.push(vec![check.to_string(), case, String::new(), String::new(), String::new(), cell(margin), cell(pass), note]);
}

fn expand(which: &[Which]) -> Vec<Which> {
    use Which::*;
    let all = [S0, S1, S2, S3, T1, T2, Kkl, Misc, Qkib, Message, Spectrum, Martingale];
    let mut out: Vec<Which> = if which.contains(&All) { all.to_vec() } else { which.to_vec() };
    out.sort_by_key(|w| all.iter().position(|x| x == w));
    out.dedup();
    out
}

pub fn audit(a: &AuditArgs) -> Result<Output> {
    let tuples: Vec<AuditParams> = if a.params.is_empty() {
        audit::default_tuples()
    } else {
        a.params.iter().map(|&[n, c, s, al]| AuditParams::new(n, c, s, al)).collect()
    };
    let tuples: Vec<AuditParams> = tuples.into_iter().map(|p| AuditParams { delta: a.delta, ..p }).collect();
    let ells = (!a.ell.is_empty()).then_some(a.ell.as_slice());
    let mut t = Table::new(&AUDIT_COLUMNS);
    let mut doc = serde_json::Map::new();
    let mut pass = true;
    for w in expand(&a.which) {
        let section: Value = match w {
            Which::S0 | Which::S1 | Which::S2 | Which::S3 | Which::T1 | Which::T2 => {
                let mut reports = Vec::new();
                for p in &tuples {
                    let r = match w {
                        Which::S0 => audit::eval_s(0, p, ells)?,
                        Which::S1 => audit::eval_s(1, p, ells)?,
                        Which::S2 => audit::eval_s(2, p, ells)?,
                        Which::S3 => audit::eval_s(3, p, ells)?,
                        Which::T1 => audit::eval_t(1, p, ells, a.points)?,
                        _ => audit::eval_t(2, p, ells, a.points)?,
                    };
                    if r.preconditions.p1_to_p4() {
                        pass &= r.pass;
                    }
                    push_sum(&mut t, &r);
                    reports.push(r);
                }
                json!(reports)
            }
            Which::Kkl => {
                let r = audit::kkl_audit(a.trials.unwrap_or(1000), a.seed)?;
                pass &= r.pass;
                summary_row(&mut t, "kkl", format!("sets={}", r.sets), f64::NAN, r.pass, format!("checks={};failures={}", r.checks, r.failures));
                json!(r)
            }
            Which::Misc => {
                let r = audit::misc_inequalities(a.seed);
                for c in &r {
                    pass &= c.pass();
                    summary_row(&mut t, &format!("misc:{}", c.name), format!("cases={}", c.cases), c.worst_margin, c.pass(), format!("violations={}", c.violations));
                }
                json!(r)
            }
            Which::Qkib => {
                let r: Vec<_> = [1000, 10_000].into_iter().map(|n| (n, audit::qkib_inequality_audit(n))).collect();
                for (n, c) in &r {
                    pass &= c.pass();
                    summary_row(&mut t, "qkib", format!("n={n};cases={}", c.cases), c.worst_margin, c.pass(), format!("violations={}", c.violations));
                }
                json!(r.iter().map(|(n, c)| json!({"n": n, "check": c})).collect::<Vec<_>>())
            }
            Which::Message => {
                let r = audit::check_single_message(12, 3, 3, a.trials.unwrap_or(200), a.seed)?;
                pass &= r.pass;
                summary_row(
                    &mut t,
                    "message",
                    format!("n={};alpha_n={};s*={};trials={}", r.n, r.alpha_n, r.s_star, r.trials),
                    f64::NAN,
                    r.pass,
                    format!("bounded={};structure_ok={}", r.bounded, r.structure_ok),
                );
                json!(r)
            }
            Which::Spectrum => {
                let r = forest_audit(a.trials.unwrap_or(500), a.seed)?;
                pass &= r.mismatches == 0;
                summary_row(&mut t, "spectrum", format!("forests={}", r.forests), -r.max_error, r.mismatches == 0, format!("mismatches={}", r.mismatches));
                json!(r)
            }
            Which::Martingale => {
                let r = audit::martingale_check(a.martingale_m, a.martingale_t, a.martingale_noise, a.trials.unwrap_or(10_000), a.seed)?;
                pass &= r.pass && r.drift_pass;
                t.push(vec![
                    "martingale".into(),
                    format!("m={};T={};trials={}", r.m, r.rounds, r.trials),
                    String::new(),
                    cell(r.exceed.rate),
                    cell(r.bound),
                    cell(r.bound - r.exceed.rate),
                    cell(r.pass && r.drift_pass),
                    format!("drift_pass={}", r.drift_pass),
                ]);
                json!(r)
            }
            Which::All => unreachable!(),
        };
        doc.insert(format!("{w:?}").to_lowercase(), section);
    }
    Ok(Output::report("audit", a, a.seed, pass, &doc, t))
}

#[derive(Serialize)]
struct ForestAudit {
    forests: u64,
    max_n: u32,
    mismatches: u64,
    max_error: f64,
}

fn max_diff(x: &Spectrum, y: &Spectrum) -> f64 {
    x.coeffs().iter().zip(y.coeffs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Closed form against brute force on random labeled forests, n ≤ 14.
fn forest_audit(forests: u64, seed: u64) -> Result<ForestAudit> {
    use rand::Rng;
    let mut out = ForestAudit { forests, max_n: 14, mismatches: 0, max_error: 0.0 };
    for i in 0..forests {
        let mut r = rng::stream(seed, i);
        let n = r.gen_range(2..=out.max_n);
        let k = r.gen_range(0..n as usize);
        let edges = audit::random_labeled_forest(n, k, &mut r);
        let e = max_diff(&audit::component_spectrum(n, &edges)?, &audit::component_spectrum_brute(n, &edges)?);
        out.max_error = out.max_error.max(e);
        out.mismatches += (e > 1e-12) as u64;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------

fn parse_edges(s: &str) -> Result<Vec<(u32, u32, bool)>> {
    let bad = |tok: &str| Error::Domain(format!("bad edge {tok:?}; expected a-b:w"));
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|tok| {
            let (ab, w) = tok.trim().split_once(':').ok_or_else(|| bad(tok))?;
            let (x, y) = ab.split_once('-').ok_or_else(|| bad(tok))?;
            let p = |v: &str| v.trim().parse::<u32>().map_err(|_| bad(tok));
            let w = match w.trim() {
                "0" => false,
                "1" => true,
                _ => return Err(bad(tok)),
            };
            Ok((p(x)?, p(y)?, w))
        })
        .collect()
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Output> {
    let mut r = rng::stream(a.seed, 0);
    let (spec, detail, pass) = match a.kind {
        SpectrumKind::Forest => {
            let edges = match &a.edges {
                Some(s) => parse_edges(s)?,
                None => audit::random_labeled_forest(a.n, a.forest_edges, &mut r),
            };
            let spec = audit::component_spectrum(a.n, &edges)?;
            let err = max_diff(&spec, &audit::component_spectrum_brute(a.n, &edges)?);
            (spec, json!({"edges": edges, "brute_force_max_error": err}), err <= 1e-12)
        }
        SpectrumKind::Message => {
            let m = sample_matching(a.n, a.alpha_n, &mut r)?;
            let set = audit::random_dense_set(a.alpha_n, a.s_star, &mut r)?;
            let b = audit::preimage(&m, &set)?;
            let structure = audit::matching_structure(&m, &set, 1e-12)?;
            let pass = structure.pass;
            (tilde_spectrum(&b)?, json!({"matching": m.edges(), "set_size": set.support_size(), "structure": structure}), pass)
        }
    };
    let bounded = check_bounded(&spec, a.c, a.s_star)?;
    let max_w = a.levels.map(|l| 2 * l).unwrap_or(a.n);
    let mut t = Table::new(&["v", "weight", "coeff"]);
    let mut coeffs = Vec::new();
    for (v, &c) in spec.coeffs().iter().enumerate() {
        let bv = BitVector::new(a.n, v as u64)?;
        if c.abs() > 1e-12 && bv.weight() <= max_w {
            t.push(vec![bv.to_string(), cell(bv.weight()), cell(c)]);
            coeffs.push(json!({"v": bv.to_string(), "weight": bv.weight(), "coeff": c}));
        }
    }
    let doc = json!({"normalization": spec.normalization(), "detail": detail, "boundedness": bounded, "coefficients": coeffs});
    Ok(Output::report("spectrum", a, a.seed, pass, &doc, t))
}

// ---------------------------------------------------------------------------

pub fn potential(a: &PotentialArgs) -> Result<Output> {
    let params: GameParams = a.game.into();
    let trace = potential_trace(params, a.s, a.trials, a.seed)?;
    let growth = if a.adaptive {
        need_budget(a.s, 4, "the adaptive solver")?;
        Some(adaptive_growth(params, a.s, a.trials, a.seed)?)
    } else {
        None
    };
    let mut t = Table::new(&["round", "mean", "std_err", "max", "adaptive_growth"]);
    for r in &trace.rounds {
        let g = growth.as_ref().and_then(|g| r.round.checked_sub(2).and_then(|i| g.growth.get(i)));
        t.push(vec![cell(r.round), cell(r.mean), cell(r.std_err), cell(r.max), opt_cell(g)]);
    }
    let pass = trace.ratio_pass && trace.cycle_pass;
    let doc = json!({"trace": trace, "adaptive_growth": growth});
    Ok(Output::report("potential", a, a.seed, pass, &doc, t).with_plot(Plot { x: "round", ys: vec!["mean", "max"], logx: false }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_lists() {
        assert_eq!(parse_edges("0-1:1, 1-2:0").unwrap(), vec![(0, 1, true), (1, 2, false)]);
        assert!(parse_edges("0-1").is_err());
        assert!(parse_edges("0-1:2").is_err());
    }

    #[test]
    fn expand_all_is_ordered() {
        let w = expand(&[Which::Misc, Which::S0, Which::Misc]);
        assert_eq!(w, vec![Which::S0, Which::Misc]);
        assert_eq!(expand(&[Which::All]).len(), 12);
    }
}
