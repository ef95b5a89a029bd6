//! The reduction from the hidden partition game to MAX-CUT, cut solvers and
//! the concentration checks behind the gap argument.

mod concentration;
mod gap;
mod solve;

pub use concentration::{chernoff_bound, chernoff_check, random_cut_tail_check, Adaptivity, ChernoffReport, CutTailReport};
pub use gap::{gap_experiment, GapConfig, GapReport, GapTrial, Solver};
pub use solve::{maxcut_exact, maxcut_local, Cut, EXACT_LIMIT};

use crate::dihp::DihpInstance;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Undirected multigraph on `[n]` without loops. Edges are stored once per
/// vertex pair `(u < v)` with a multiplicity, in ascending pair order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    n: u32,
    edges: Vec<(u32, u32, u32)>,
    m: u64,
}

impl MultiGraph {
    /// Repeated pairs are merged by adding multiplicities; zero
    /// multiplicities are dropped.
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32, u32)>) -> Result<Self> {
        let mut acc: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for (u, v, k) in edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!("edge ({u}, {v}) outside [0, {n})")));
            }
            if u == v {
                return Err(Error::Domain(format!("loop at vertex {u}")));
            }
            if k > 0 {
                *acc.entry((u.min(v), u.max(v))).or_insert(0) += k;
            }
        }
        let edges: Vec<_> = acc.into_iter().map(|((u, v), k)| (u, v, k)).collect();
        let m = edges.iter().map(|e| e.2 as u64).sum();
        Ok(Self { n, edges, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Total edge count with multiplicity.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn edges(&self) -> &[(u32, u32, u32)] {
        &self.edges
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.edges.iter().map(|e| e.2).max().unwrap_or(0)
    }

    /// Two-colouring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let adj = self.adjacency();
        let mut colour: Vec<Option<bool>> = vec![None; self.n as usize];
        for s in 0..self.n as usize {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = colour[u].unwrap();
                for &(v, _) in &adj[u] {
                    match colour[v as usize] {
                        None => {
                            colour[v as usize] = Some(!cu);
                            stack.push(v as usize);
                        }
                        Some(cv) if cv == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<(u32, u32)>> {
        let mut adj = vec![Vec::new(); self.n as usize];
        for &(u, v, k) in &self.edges {
            adj[u as usize].push((v, k));
            adj[v as usize].push((u, k));
        }
        adj
    }

    /// ```text
    /// n <n>
    /// <u> <v> <multiplicity>
    /// ...
    /// ```
    /// Lines starting with `#` are comments. Without an `n` line the vertex
    /// count is one more than the largest endpoint.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.n);
        for (u, v, k) in &self.edges {
            let _ = writeln!(out, "{u} {v} {k}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: idx + 1, msg: msg.into() };
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<u32>().map_err(|_| err("expected an integer"));
            match parts.as_slice() {
                ["n", v] => n = Some(num(v)?),
                [u, v, k] => edges.push((num(u)?, num(v)?, num(k)?)),
                [u, v] => edges.push((num(u)?, num(v)?, 1)),
                _ => return Err(err("expected `u v multiplicity`")),
            }
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0));
        Self::new(n, edges)
    }
}

/// Keep the edges labelled 1, over all matchings, with multiplicity.
pub fn reduce_to_graph(inst: &DihpInstance) -> MultiGraph {
    let edges = inst
        .matchings
        .iter()
        .zip(&inst.labels)
        .flat_map(|(m, w)| m.edges().iter().zip(w).filter(|(_, &l)| l).map(|(&(a, b), _)| (a, b, 1)));
    MultiGraph::new(inst.n, edges).expect("matching edges are valid")
}

/// Multiplicity of edges with exactly one endpoint on the `true` side.
pub fn cut_value(g: &MultiGraph, side: &[bool]) -> u64 {
    g.edges.iter().filter(|&&(u, v, _)| side[u as usize] != side[v as usize]).map(|e| e.2 as u64).sum()
}

/// The one-pass estimator that only counts edges: returns `m/2`.
pub fn stream_halfcount(stream: impl IntoIterator<Item = (u32, u32, u32)>) -> f64 {
    stream.into_iter().map(|e| e.2 as f64).sum::<f64>() / 2.0
}
