use super::{cut_value, MultiGraph};
use crate::error::{Error, Result};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Largest vertex count accepted by [`maxcut_exact`].
pub const EXACT_LIMIT: u32 = 26;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub value: u64,
    pub side: Vec<bool>,
}

/// Cut value and per-vertex flip gains for a fixed assignment.
struct State<'a> {
    adj: &'a [Vec<(u32, u32)>],
    side: Vec<bool>,
    gain: Vec<i64>,
    value: i64,
}

impl<'a> State<'a> {
    fn new(adj: &'a [Vec<(u32, u32)>], side: Vec<bool>) -> Self {
        let mut value = 0;
        let gain = (0..adj.len())
            .map(|v| {
                adj[v]
                    .iter()
                    .map(|&(u, w)| {
                        if side[u as usize] == side[v] {
                            w as i64
                        } else {
                            value += w as i64;
                            -(w as i64)
                        }
                    })
                    .sum()
            })
            .collect();
        Self { adj, side, gain, value: value / 2 }
    }

    fn flip(&mut self, v: usize) {
        self.value += self.gain[v];
        self.gain[v] = -self.gain[v];
        self.side[v] = !self.side[v];
        for &(u, w) in &self.adj[v] {
            let d = 2 * w as i64;
            if self.side[u as usize] == self.side[v] {
                self.gain[u as usize] += d;
            } else {
                self.gain[u as usize] -= d;
            }
        }
    }
}

fn gray_side(n: usize, idx: u64) -> Vec<bool> {
    let g = idx ^ (idx >> 1);
    (0..n).map(|v| g >> v & 1 == 1).collect()
}

/// Exact maximum cut by Gray-code enumeration of the `2^{n−1}` cuts with
/// vertex `n−1` on the `false` side. Ranges of the code are searched in
/// parallel; ties resolve to the earliest code index.
pub fn maxcut_exact(g: &MultiGraph) -> Result<Cut> {
    let n = g.n();
    if n > EXACT_LIMIT {
        return Err(Error::Capacity { n, cap: EXACT_LIMIT });
    }
    if n <= 1 {
        return Ok(Cut { value: 0, side: vec![false; n as usize] });
    }
    let adj = g.adjacency();
    let total = 1u64 << (n - 1);
    let chunks = total.min(256);
    let width = total / chunks;
    let (value, idx) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let (lo, hi) = (c * width, (c + 1) * width);
            let mut st = State::new(&adj, gray_side(n as usize, lo));
            let mut best = (st.value, lo);
            for i in lo + 1..hi {
                st.flip(i.trailing_zeros() as usize);
                if st.value > best.0 {
                    best = (st.value, i);
                }
            }
            best
        })
        .reduce(|| (i64::MIN, u64::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let side = gray_side(n as usize, idx);
    debug_assert_eq!(cut_value(g, &side) as i64, value);
    Ok(Cut { value: value as u64, side })
}

/// Two-colouring along a spanning forest, ignoring edges that close odd
/// cycles.
fn forest_colouring(adj: &[Vec<(u32, u32)>]) -> Vec<bool> {
    let mut side: Vec<Option<bool>> = vec![None; adj.len()];
    for s in 0..adj.len() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let c = side[u].unwrap();
            for &(v, _) in &adj[u] {
                if side[v as usize].is_none() {
                    side[v as usize] = Some(!c);
                    queue.push_back(v as usize);
                }
            }
        }
    }
    side.into_iter().map(|c| c.unwrap_or(false)).collect()
}

/// Best single-flip local optimum over `restarts` starts. The first start
/// is a BFS two-colouring, the rest are uniform. Every local optimum cuts
/// at least half the edges.
pub fn maxcut_local<R: Rng + ?Sized>(g: &MultiGraph, restarts: usize, rng: &mut R) -> Cut {
    let adj = g.adjacency();
    let n = adj.len();
    let mut best: Option<Cut> = None;
    for r in 0..restarts.max(1) {
        let start = if r == 0 { forest_colouring(&adj) } else { (0..n).map(|_| rng.gen()).collect() };
        let mut st = State::new(&adj, start);
        loop {
            let mut improved = false;
            for v in 0..n {
                if st.gain[v] > 0 {
                    st.flip(v);
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().map_or(true, |b| st.value as u64 > b.value) {
            best = Some(Cut { value: st.value as u64, side: st.side });
        }
    }
    best.unwrap()
}
