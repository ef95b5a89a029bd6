//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the report is never captured.
//!
//! Every criterion runs even when an earlier one fails. The run exits nonzero
//! unless the failing set equals `KNOWN_RED`, so a criterion that cannot be met stays
//! visibly red without hiding regressions elsewhere.

use ihp_core::audit;
use ihp_core::bitcube::{convolve_spectra, tilde_spectrum, wht_forward, wht_inverse};
use ihp_core::dihp::{
    adaptive_solver, advantage_experiment, component_growing_distinguisher, exact_tvd, gen_instance, potential_trace, tvd_expectation_form,
    CaseMode, DiscreteDistribution, GameParams,
};
use ihp_core::matchings::{p_match, q_match, q_match_b, sample_matching};
use ihp_core::maxcut::{gap_experiment, maxcut_exact, reduce_to_graph, GapConfig, MultiGraph, Solver};
use ihp_core::{rng, CubeFunction, Matching};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

/// Criteria expected to fail, with the reason printed next to them.
const KNOWN_RED: &[(u32, &str)] = &[(
    9,
    "the YES/NO ratio clause is out of reach at n=20, αn=4, T=40: NO graphs keep a max cut near 3m/4, \
     so ratio ≥ 1.7 holds in a few percent of pairs rather than 95%",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Test-only reference implementations.
mod oracle {
    /// `2^{-n} Σ_x f(x)(−1)^{x·v}` term by term.
    pub fn hat(values: &[f64]) -> Vec<f64> {
        let len = values.len();
        (0..len)
            .map(|v| {
                let s: f64 = values.iter().enumerate().map(|(x, &f)| if (x & v).count_ones() % 2 == 0 { f } else { -f }).sum();
                s / len as f64
            })
            .collect()
    }

    /// `Σ_x p(x) q(x⊕v)` term by term.
    pub fn xor_convolve(p: &[f64], q: &[f64]) -> Vec<f64> {
        (0..p.len()).map(|v| (0..p.len()).map(|x| p[x] * q[x ^ v]).sum()).collect()
    }

    /// `E_{x∈A}(−1)^{x·v}` by averaging over the members.
    pub fn sign_average(n: u32, members: &[u64]) -> Vec<f64> {
        (0..1u64 << n)
            .map(|v| members.iter().map(|&x| if (x & v).count_ones() % 2 == 0 { 1.0 } else { -1.0 }).sum::<f64>() / members.len() as f64)
            .collect()
    }

    /// All matchings with `size` edges on `[n]`, as edge lists.
    pub fn all_matchings(n: u32, size: u32) -> Vec<Vec<(u32, u32)>> {
        fn go(free: Vec<u32>, left: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            if free.len() < 2 * left as usize {
                return;
            }
            let (first, rest) = (free[0], &free[1..]);
            // `first` unmatched.
            go(rest.to_vec(), left, cur, out);
            for j in 0..rest.len() {
                let mut next = rest.to_vec();
                let partner = next.remove(j);
                cur.push((first, partner));
                go(next, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go((0..n).collect(), size, &mut Vec::new(), &mut out);
        out
    }

    /// Brute-force MAX-CUT over all 2^n sides.
    pub fn maxcut(n: u32, edges: &[(u32, u32, u32)]) -> u64 {
        (0..1u64 << n)
            .map(|s| edges.iter().filter(|&&(a, b, _)| (s >> a ^ s >> b) & 1 == 1).map(|&(_, _, w)| w as u64).sum())
            .max()
            .unwrap_or(0)
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

// 1 -------------------------------------------------------------------------

fn fourier_identities() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..500u64 {
        let mut r = rng::stream(101, i);
        let n = 2 + (i % 11) as u32;
        let len = 1usize << n;
        let f = CubeFunction::new(n, (0..len).map(|_| r.gen_range(-1.0..1.0)).collect()).unwrap();
        let g = CubeFunction::new(n, (0..len).map(|_| r.gen_range(-1.0..1.0)).collect()).unwrap();
        let fh = wht_forward(&f).unwrap();
        let gh = wht_forward(&g).unwrap();
        // Against the defining sum.
        worst = worst.max(max_abs_diff(fh.coeffs(), &oracle::hat(f.values())));
        // Parseval.
        let lhs: f64 = fh.coeffs().iter().map(|c| c * c).sum();
        let rhs: f64 = f.values().iter().map(|x| x * x).sum::<f64>() / len as f64;
        worst = worst.max((lhs - rhs).abs() / rhs.max(1e-300));
        // Convolution theorem against the direct xor-convolution.
        let conv = convolve_spectra(&fh, &gh).unwrap();
        worst = worst.max(max_abs_diff(conv.coeffs(), &oracle::xor_convolve(fh.coeffs(), gh.coeffs())));
        let product = f.pointwise_product(&g).unwrap();
        worst = worst.max(max_abs_diff(wht_forward(&product).unwrap().coeffs(), conv.coeffs()));
        // Inverse roundtrip.
        worst = worst.max(max_abs_diff(wht_inverse(&fh).unwrap().values(), f.values()));
        // Tilde against sign averaging over a random nonempty set.
        let size = r.gen_range(1..=len);
        let mut pts: Vec<u64> = (0..len as u64).collect();
        pts.shuffle(&mut r);
        pts.truncate(size);
        let a = CubeFunction::indicator(n, pts.iter().copied()).unwrap();
        let t = tilde_spectrum(&a).unwrap();
        worst = worst.max(max_abs_diff(t.coeffs(), &oracle::sign_average(n, &pts)));
    }
    outcome(worst <= 1e-10, format!("500 cases, n ∈ [2, 12], worst error {worst:.2e}"))
}

// 2 -------------------------------------------------------------------------

fn lift(n: u32, m: &Matching, w: u64) -> u64 {
    let _ = n;
    m.edges().iter().enumerate().filter(|(j, _)| w >> j & 1 == 1).map(|(_, &(a, b))| 1u64 << a | 1u64 << b).fold(0, |acc, x| acc | x)
}

fn matching_structure() -> Outcome {
    let mut bad = 0;
    for i in 0..200u64 {
        let mut r = rng::stream(202, i);
        let n = r.gen_range(4..=14u32);
        let size = r.gen_range(1..=(n / 2).min(5));
        let m = sample_matching(n, size, &mut r).unwrap();
        let a = audit::random_dense_set(size, size, &mut r).unwrap();
        let b = audit::preimage(&m, &a).unwrap();
        let hb = wht_forward(&b).unwrap();
        let qa = wht_forward(&a).unwrap();
        let mut expected = vec![0.0; 1 << n];
        for w in 0..1u64 << size {
            expected[lift(n, &m, w) as usize] = qa.get(w);
        }
        let nonzero_b = hb.coeffs().iter().filter(|c| c.abs() > 1e-12).count();
        let nonzero_q = qa.coeffs().iter().filter(|c| c.abs() > 1e-12).count();
        let lib = audit::matching_structure(&m, &a, 1e-12).unwrap();
        if max_abs_diff(hb.coeffs(), &expected) > 1e-12 || nonzero_b != nonzero_q || !lib.pass {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("200 (M, A) pairs, n ≤ 14, {bad} mismatches"))
}

// 3 -------------------------------------------------------------------------

fn one_message_bounded() -> Outcome {
    let a = audit::check_single_message(12, 3, 3, 200, 303).unwrap();
    let b = audit::check_single_message(14, 4, 4, 200, 304).unwrap();
    outcome(
        a.pass && b.pass,
        format!("(n=12, αn=3, s*=3): {}/200 bounded; (n=14, αn=4, s*=4): {}/200 bounded", a.bounded, b.bounded),
    )
}

// 4 -------------------------------------------------------------------------

fn combinatorics() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    // Exhaustive at n ≤ 8.
    let mut worst = 0.0f64;
    for n in 2..=8u32 {
        for size in 0..=n / 2 {
            let all = oracle::all_matchings(n, size);
            for k in 0..=n / 2 {
                let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
                for mm in &all {
                    let inside = |v: u32| v < 2 * k;
                    let i = mm.iter().filter(|&&(a, b)| inside(a) && inside(b)).count() as u32;
                    let b = mm.iter().filter(|&&(a, b)| inside(a) != inside(b)).count() as u32;
                    *counts.entry((i, b)).or_default() += 1;
                }
                let freq = |i, b| *counts.get(&(i, b)).unwrap_or(&0) as f64 / all.len() as f64;
                for i in 0..=k {
                    for b in 0..=2 * (k - i) {
                        let got = q_match_b(k as f64, i as f64, b as f64, n as f64, size as f64).unwrap().prob();
                        worst = worst.max((got - freq(i, b)).abs());
                    }
                    worst = worst.max((q_match(k as f64, i as f64, n as f64, size as f64).unwrap().prob() - freq(i, 0)).abs());
                }
                worst = worst.max((p_match(k as f64, n as f64, size as f64).unwrap().prob() - freq(k, 0)).abs());
            }
        }
    }
    ok &= worst < 1e-12;
    notes.push(format!("exhaustive n ≤ 8 worst {worst:.1e}"));

    // Monte Carlo, 10^6 matchings per n, A = {0, …, 2k−1}.
    let mut worst_z = 0.0f64;
    for (n, size, k) in [(10u32, 2u32, 2u32), (20, 4, 3), (50, 10, 4)] {
        let samples = 1_000_000u64;
        let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        let mut r = rng::stream(404, n as u64);
        for _ in 0..samples {
            let m = sample_matching(n, size, &mut r).unwrap();
            let inside = |v: u32| v < 2 * k;
            let i = m.edges().iter().filter(|&&(a, b)| inside(a) && inside(b)).count() as u32;
            let b = m.edges().iter().filter(|&&(a, b)| inside(a) != inside(b)).count() as u32;
            *counts.entry((i, b)).or_default() += 1;
        }
        for i in 0..=k {
            for b in 0..=2 * (k - i) {
                let p = q_match_b(k as f64, i as f64, b as f64, n as f64, size as f64).unwrap().prob();
                let f = *counts.get(&(i, b)).unwrap_or(&0) as f64 / samples as f64;
                let se = (p * (1.0 - p) / samples as f64).sqrt().max(1e-12);
                worst_z = worst_z.max((f - p).abs() / se);
            }
        }
        // Normalization.
        let total: f64 = (0..=k)
            .flat_map(|i| (0..=2 * (k - i)).map(move |b| (i, b)))
            .map(|(i, b)| q_match_b(k as f64, i as f64, b as f64, n as f64, size as f64).unwrap().prob())
            .sum();
        ok &= (total - 1.0).abs() < 1e-9;
    }
    ok &= worst_z <= 4.0;
    notes.push(format!("Monte Carlo worst |z| {worst_z:.2}"));

    for n in [1000u32, 10_000] {
        let c = audit::qkib_inequality_audit(n);
        ok &= c.pass();
        notes.push(format!("q-ratio inequality n={n}: {} cases, {} violations", c.cases, c.violations));
    }
    outcome(ok, notes.join("; "))
}

// 5 -------------------------------------------------------------------------

fn inequality_audit() -> Outcome {
    let mut ok = true;
    let mut rows = 0;
    let tuples = audit::default_tuples();
    for p in &tuples {
        ok &= p.preconditions().p1_to_p4();
        for j in 0..4 {
            let r = audit::eval_s(j, p, None).unwrap();
            rows += r.rows.len();
            ok &= r.pass;
        }
        for j in 1..3 {
            let r = audit::eval_t(j, p, None, 12).unwrap();
            ok &= r.rows.len() >= 10;
            rows += r.rows.len();
            ok &= r.pass;
        }
    }
    let kkl = audit::kkl_audit(1000, 505).unwrap();
    ok &= kkl.pass;
    let misc = audit::misc_inequalities(505);
    let violations: u64 = misc.iter().map(|c| c.violations).sum();
    ok &= violations == 0;
    outcome(
        ok,
        format!("{} tuples, {rows} sum rows; KKL {} checks / {} failures; misc violations {violations}", tuples.len(), kkl.checks, kkl.failures),
    )
}

// 6 -------------------------------------------------------------------------

fn component_spectrum() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..500u64 {
        let mut r = rng::stream(606, i);
        let n = r.gen_range(2..=14u32);
        let edges = audit::random_labeled_forest(n, r.gen_range(0..n as usize), &mut r);
        let closed = audit::component_spectrum(n, &edges).unwrap();
        let members: Vec<u64> =
            (0..1u64 << n).filter(|&x| edges.iter().all(|&(a, b, w)| ((x >> a ^ x >> b) & 1 == 1) == w)).collect();
        let a = CubeFunction::indicator(n, members.iter().copied()).unwrap();
        worst = worst.max(max_abs_diff(closed.coeffs(), tilde_spectrum(&a).unwrap().coeffs()));
    }
    outcome(worst <= 1e-12, format!("500 forests, n ≤ 14, worst error {worst:.1e}"))
}

// 7 -------------------------------------------------------------------------

fn protocol_behavior() -> Outcome {
    let d = component_growing_distinguisher(8);
    let params = GameParams { n: 200, alpha_n: 10, players: 8 };
    let yes = advantage_experiment(&d, params, CaseMode::Yes, 10_000, 707).unwrap();
    let mixed = advantage_experiment(&d, params, CaseMode::Mixed, 10_000, 708).unwrap();
    let predicted = 0.5 + mixed.cycle.rate / 4.0;
    let gap = (mixed.success.rate - predicted).abs();
    let width = mixed.success.width();
    let high = advantage_experiment(&adaptive_solver(500), GameParams { n: 2000, alpha_n: 200, players: 12 }, CaseMode::No, 200, 709).unwrap();
    let low = advantage_experiment(&adaptive_solver(10), GameParams { n: 100_000, alpha_n: 1000, players: 6 }, CaseMode::No, 200, 710).unwrap();
    let ok = yes.success.successes == 10_000 && gap <= 2.0 * width && high.cycle.rate > 0.9 && low.cycle.rate < 0.05;
    outcome(
        ok,
        format!(
            "YES {}/10000; mixed success {:.4} vs 1/2+cycle/4 = {:.4} (|Δ| {:.4}, 2·width {:.4}); adaptive detection {:.3} and {:.3}",
            yes.success.successes,
            mixed.success.rate,
            predicted,
            gap,
            2.0 * width,
            high.cycle.rate,
            low.cycle.rate
        ),
    )
}

// 8 -------------------------------------------------------------------------

fn potential_evolution() -> Outcome {
    let t = potential_trace(GameParams { n: 10_000, alpha_n: 100, players: 5 }, 50, 500, 808).unwrap();
    outcome(
        t.ratio_pass && t.cycle_pass,
        format!(
            "mean step ratio {:.6} ± {:.1e} vs bound {:.6}; cycle hits {} vs predicted {:.2}",
            t.mean_ratio, t.ratio_std_err, t.ratio_bound, t.cycle_hits, t.predicted_hits
        ),
    )
}

// 9 -------------------------------------------------------------------------

fn reduction_and_gap() -> Outcome {
    let mut notes = Vec::new();
    // YES reductions are bipartite with maxcut = m.
    let mut yes_ok = true;
    for i in 0..100u64 {
        let mut r = rng::stream(909, i);
        let inst = gen_instance(r.gen_range(4..=26), 2, 6, CaseMode::Yes, &mut r).unwrap();
        let g = reduce_to_graph(&inst);
        yes_ok &= g.bipartition().is_some() && maxcut_exact(&g).unwrap().value == g.m();
    }
    notes.push(format!("YES reductions bipartite with maxcut = m: {yes_ok}"));

    // m/2 ≤ maxcut ≤ m against a brute-force oracle.
    let mut sandwich = true;
    for i in 0..100u64 {
        let mut r = rng::stream(910, i);
        let edges: Vec<(u32, u32, u32)> = (0..r.gen_range(1..40))
            .filter_map(|_| {
                let (a, b) = (r.gen_range(0..16), r.gen_range(0..16));
                (a != b).then(|| (a, b, r.gen_range(1..=3)))
            })
            .collect();
        let g = MultiGraph::new(16, edges).unwrap();
        let best = maxcut_exact(&g).unwrap().value;
        sandwich &= 2 * best >= g.m() && best <= g.m() && best == oracle::maxcut(16, g.edges());
    }
    notes.push(format!("sandwich on 100 graphs: {sandwich}"));

    let r = gap_experiment(GapConfig {
        params: GameParams { n: 20, alpha_n: 4, players: 40 },
        epsilon: 0.5,
        delta: None,
        trials: 200,
        seed: 911,
        solver: Solver::Exact,
        ratio_threshold: 1.7,
    })
    .unwrap();
    let ratio_ok = r.ratio.rate >= 0.95;
    notes.push(format!("ratio ≥ 1.7 in {:.1}% of pairs (mean ratio {:.3})", 100.0 * r.ratio.rate, r.mean_ratio));
    outcome(yes_ok && sandwich && ratio_ok, notes.join("; "))
}

// 10 ------------------------------------------------------------------------

fn random_distribution(r: &mut impl Rng, support: u32, dense: bool) -> DiscreteDistribution<u32> {
    let w: Vec<f64> = (0..support).map(|_| if dense || r.gen_bool(0.7) { r.gen_range(0.01..1.0) } else { 0.0 }).collect();
    let w = if w.iter().all(|&x| x == 0.0) { vec![1.0; support as usize] } else { w };
    let total: f64 = w.iter().sum();
    DiscreteDistribution::new(w.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(k, &x)| (k as u32, x / total))).unwrap()
}

fn tvd_toolkit() -> Outcome {
    let bern = |p: f64| DiscreteDistribution::new([(0u8, 1.0 - p), (1u8, p)]).unwrap();
    let mut ok = exact_tvd(&bern(0.5), &bern(0.5)) == 0.0 && (exact_tvd(&bern(0.5), &bern(0.75)) - 0.25).abs() < 1e-15;
    let mut r = rng::stream(1010, 0);
    for _ in 0..100 {
        let support = r.gen_range(2..=12);
        let mu = random_distribution(&mut r, support, true);
        let nu = random_distribution(&mut r, support, false);
        let rho = random_distribution(&mut r, support, false);
        let buckets = r.gen_range(1..=support);
        let map: Vec<u32> = (0..support).map(|_| r.gen_range(0..buckets)).collect();
        let d = exact_tvd(&mu, &nu);
        ok &= exact_tvd(&mu, &mu) == 0.0;
        ok &= (d - exact_tvd(&nu, &mu)).abs() < 1e-15;
        ok &= exact_tvd(&mu.push_forward(|k| map[*k as usize]), &nu.push_forward(|k| map[*k as usize])) <= d + 1e-12;
        ok &= d <= exact_tvd(&mu, &rho) + exact_tvd(&rho, &nu) + 1e-12;
        ok &= (tvd_expectation_form(&mu, &nu).unwrap() - 2.0 * d).abs() < 1e-12;
    }
    outcome(ok, "identities, data processing, triangle and expectation form on 100 random triples")
}

// 11 ------------------------------------------------------------------------

fn reproducibility() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_ihplab");
    let dir = std::env::temp_dir().join(format!("ihplab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let runs: &[(&str, &[&str])] = &[
        ("gen", &["gen", "--n", "30", "--alpha-n", "5", "--T", "4", "--case", "mixed", "--seed", "3"]),
        ("gen-graph", &["gen", "--n", "30", "--alpha-n", "5", "--T", "4", "--case", "no", "--seed", "3", "--graph"]),
        ("advantage", &["advantage", "--protocol", "distinguisher", "--n", "100", "--alpha-n", "10", "--T", "6", "--s", "8", "--trials", "500", "--tvd", "plugin", "--seed", "4"]),
        ("gap", &["gap", "--n", "14", "--alpha-n", "3", "--T", "10", "--trials", "20", "--seed", "5"]),
        ("audit", &["audit", "--which", "s0,s1,misc,spectrum,kkl", "--trials", "40", "--seed", "6"]),
        ("spectrum", &["spectrum", "--n", "8", "--kind", "message", "--alpha-n", "3", "--s-star", "3", "--seed", "7", "--format", "json"]),
        ("potential", &["potential", "--n", "2000", "--alpha-n", "40", "--T", "4", "--s", "16", "--trials", "60", "--adaptive", "--seed", "8"]),
    ];
    let mut differing = Vec::new();
    for (name, args) in runs {
        let mut outputs = Vec::new();
        for (run, threads) in [(0, "1"), (1, "3")] {
            let path = dir.join(format!("{name}-{run}.out"));
            let status = Command::new(bin).args(*args).arg("--out").arg(&path).env("IHPLAB_THREADS", threads).status().unwrap();
            // Exit code 1 only signals a failed check; the file is still written.
            assert!(status.code().is_some_and(|c| c <= 1), "{name}: {status}");
            outputs.push(std::fs::read(&path).unwrap());
        }
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            differing.push(*name);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(differing.is_empty(), format!("{} runs compared byte for byte, differing: {differing:?}", runs.len()))
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "Fourier identities", fourier_identities),
        (2, "matching spectrum structure", matching_structure),
        (3, "one-message boundedness", one_message_bounded),
        (4, "matching combinatorics", combinatorics),
        (5, "inequality audit", inequality_audit),
        (6, "component-growing spectrum", component_spectrum),
        (7, "protocol behavior", protocol_behavior),
        (8, "potential evolution", potential_evolution),
        (9, "reduction and gap", reduction_and_gap),
        (10, "TVD toolkit", tvd_toolkit),
        (11, "CLI reproducibility", reproducibility),
    ];
    let mut failed = Vec::new();
    for (id, name, f) in criteria {
        let start = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed: Duration = start.elapsed();
        let mut line = format!("criterion {id:>2} {}: {name} ({:.1} s): {}", if o.pass { "PASS" } else { "FAIL" }, elapsed.as_secs_f64(), o.detail);
        if let Some((_, why)) = KNOWN_RED.iter().find(|(k, _)| *k == id) {
            line.push_str(&format!(" [known red: {why}]"));
        }
        println!("{line}");
        if !o.pass {
            failed.push(id);
        }
    }
    let expected: Vec<u32> = KNOWN_RED.iter().map(|(k, _)| *k).collect();
    if failed != expected {
        eprintln!("failing criteria {failed:?} differ from the known-red list {expected:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} PASS, {} FAIL (all failures on the known-red list)", 11 - failed.len(), failed.len());
}
