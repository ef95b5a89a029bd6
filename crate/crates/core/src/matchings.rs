//! Random matchings on `[n]` and their closed-form class probabilities.
//!
//! Vertices are 0-based. Edges are stored as `(a, b)` with `a < b`, sorted by
//! `a`; label vectors and edge subsets always follow this order, and an edge
//! subset of a matching with at most 64 edges is a bitmask (bit `j` = edge
//! `j`).

use crate::bitcube::BitVector;
use crate::error::{domain, Error, Result};
use crate::logmath::ln_binom;
use rand::Rng;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matching {
    n: u32,
    edges: Vec<(u32, u32)>,
}

impl Matching {
    /// Validate and canonicalize an edge list.
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut edges: Vec<(u32, u32)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        let mut seen = vec![false; n as usize];
        for &(a, b) in &edges {
            if b >= n {
                return domain(format!("vertex {b} outside [0, {n})"));
            }
            if a == b || seen[a as usize] || seen[b as usize] {
                return domain(format!("edge ({a}, {b}) is not disjoint from the others"));
            }
            seen[a as usize] = true;
            seen[b as usize] = true;
        }
        edges.sort_unstable();
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Read-only access to the coordinates of a point of {0,1}^n.
pub trait Bits {
    fn bit(&self, i: u32) -> bool;
}

impl Bits for BitVector {
    fn bit(&self, i: u32) -> bool {
        self.get(i)
    }
}

impl Bits for [bool] {
    fn bit(&self, i: u32) -> bool {
        self[i as usize]
    }
}

impl Bits for Vec<bool> {
    fn bit(&self, i: u32) -> bool {
        self[i as usize]
    }
}

/// Uniform matching with `size` edges on `[n]`.
///
/// Draws a uniform injective sequence of `2·size` vertices by a partial
/// Fisher–Yates shuffle and pairs consecutive entries. Each matching arises
/// from exactly `size!·2^size` sequences, so the result is exactly uniform.
pub fn sample_matching<R: Rng + ?Sized>(n: u32, size: u32, rng: &mut R) -> Result<Matching> {
    let picks = 2 * size as u64;
    if picks > n as u64 {
        return Err(Error::Precondition(format!("matching of size {size} does not fit on {n} vertices")));
    }
    let picks = picks as u32;
    let sequence: Vec<u32> = if (picks as u64) * 16 < n as u64 {
        // Sparse shuffle: only displaced positions are stored.
        let mut moved: HashMap<u32, u32> = HashMap::with_capacity(2 * picks as usize);
        (0..picks)
            .map(|i| {
                let j = rng.gen_range(i..n);
                let at_j = *moved.get(&j).unwrap_or(&j);
                let at_i = *moved.get(&i).unwrap_or(&i);
                moved.insert(j, at_i);
                at_j
            })
            .collect()
    } else {
        let mut perm: Vec<u32> = (0..n).collect();
        for i in 0..picks {
            let j = rng.gen_range(i..n);
            perm.swap(i as usize, j as usize);
        }
        perm.truncate(picks as usize);
        perm
    };
    let edges = sequence.chunks_exact(2).map(|p| (p[0].min(p[1]), p[0].max(p[1])));
    let mut edges: Vec<(u32, u32)> = edges.collect();
    edges.sort_unstable();
    Ok(Matching { n, edges })
}

/// Per-edge parities `x_a ⊕ x_b` in canonical edge order.
pub fn apply_matching<B: Bits + ?Sized>(m: &Matching, x: &B) -> Vec<bool> {
    m.edges.iter().map(|&(a, b)| x.bit(a) ^ x.bit(b)).collect()
}

/// [`apply_matching`] packed into a bitmask (`|M| ≤ 64`).
pub fn apply_matching_index(m: &Matching, x: u64) -> u64 {
    debug_assert!(m.len() <= 64);
    m.edges.iter().enumerate().fold(0, |acc, (j, &(a, b))| acc | ((((x >> a) ^ (x >> b)) & 1) << j))
}

/// `v = Mᵀw`: the union of the endpoints of the edges selected by `w`.
pub fn lift_coefficient(m: &Matching, w: u64) -> Result<BitVector> {
    if m.len() < 64 && w >> m.len() != 0 {
        return domain(format!("edge subset {w:#b} selects edges beyond the {} of the matching", m.len()));
    }
    let value = m
        .edges
        .iter()
        .enumerate()
        .filter(|(j, _)| (w >> j) & 1 == 1)
        .fold(0u64, |acc, (_, &(a, b))| acc | (1 << a) | (1 << b));
    BitVector::new(m.n, value)
}

/// The unique `w` with `Mᵀw = v`, if the edges of `M` inside `v` cover `v`.
pub fn match_restriction(m: &Matching, v: &BitVector) -> Option<u64> {
    let mut w = 0u64;
    let mut covered = 0u32;
    for (j, &(a, b)) in m.edges.iter().enumerate() {
        match (v.get(a), v.get(b)) {
            (true, true) => {
                w |= 1 << j;
                covered += 2;
            }
            (false, false) => {}
            _ => return None,
        }
    }
    (covered == v.weight()).then_some(w)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EdgeClassification {
    pub internal: Vec<(u32, u32)>,
    pub boundary: Vec<(u32, u32)>,
    pub external: Vec<(u32, u32)>,
}

/// Split the edges of `m` by how many endpoints lie in `v` (2, 1 or 0).
pub fn classify_edges<B: Bits + ?Sized>(m: &Matching, v: &B) -> EdgeClassification {
    let mut out = EdgeClassification::default();
    for &e in &m.edges {
        match (v.bit(e.0), v.bit(e.1)) {
            (true, true) => out.internal.push(e),
            (false, false) => out.external.push(e),
            _ => out.boundary.push(e),
        }
    }
    out
}

/// A probability held as its natural log.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct LogProb(pub f64);

impl LogProb {
    pub fn ln(self) -> f64 {
        self.0
    }

    /// Linear value; anything below `e^{-700}` reads as 0.
    pub fn prob(self) -> f64 {
        if self.0 < -700.0 {
            0.0
        } else {
            self.0.exp()
        }
    }
}

fn check_count(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 || x.fract() != 0.0 {
        return domain(format!("{name} = {x} is not a non-negative integer"));
    }
    Ok(())
}

fn check_matching_size(n: f64, m_size: f64) -> Result<()> {
    check_count("n", n)?;
    check_count("m_size", m_size)?;
    if 2.0 * m_size > n {
        return domain(format!("matching size {m_size} exceeds n/2 for n = {n}"));
    }
    Ok(())
}

/// `p(ℓ, n) = C(m, ℓ)/C(n, 2ℓ)`: probability that a fixed 2ℓ-set is matched
/// onto itself by a uniform matching of size `m`.
pub fn p_match(ell: f64, n: f64, m_size: f64) -> Result<LogProb> {
    check_matching_size(n, m_size)?;
    check_count("ell", ell)?;
    if 2.0 * ell > n {
        return domain(format!("ell = {ell} exceeds n/2"));
    }
    Ok(LogProb(ln_binom(m_size, ell) - ln_binom(n, 2.0 * ell)))
}

/// `q(k, i, n) = C(m, i)·C(n−2m, 2(k−i))/C(n, 2k)`: a fixed 2k-set contains
/// exactly `i` edges and meets no other edge.
pub fn q_match(k: f64, i: f64, n: f64, m_size: f64) -> Result<LogProb> {
    q_match_b(k, i, 0.0, n, m_size)
}

/// `q(k, i, b, n) = C(m, i)·C(m−i, b)·2^b·C(n−2m, 2(k−i)−b)/C(n, 2k)`: a fixed
/// 2k-set contains exactly `i` edges and exactly `b` edges cross its boundary.
pub fn q_match_b(k: f64, i: f64, b: f64, n: f64, m_size: f64) -> Result<LogProb> {
    check_matching_size(n, m_size)?;
    for (name, x) in [("k", k), ("i", i), ("b", b)] {
        check_count(name, x)?;
    }
    if i > k || 2.0 * k > n {
        return domain(format!("need 0 ≤ i ≤ k ≤ n/2, got i = {i}, k = {k}, n = {n}"));
    }
    if 2.0 * i + b > 2.0 * k {
        return domain(format!("need 2i + b ≤ 2k, got i = {i}, b = {b}, k = {k}"));
    }
    Ok(LogProb(ln_q_kib(k, k - i, b, n, m_size)))
}

/// Unchecked `ln q(k, i, b, n)` parameterized by `d = k − i`, so that
/// `i` need not be representable when k is astronomically large.
pub(crate) fn ln_q_kib(k: f64, d: f64, b: f64, n: f64, m_size: f64) -> f64 {
    let i = k - d;
    let mut v = ln_binom(m_size, i) + ln_binom(n - 2.0 * m_size, 2.0 * d - b) - ln_binom(n, 2.0 * k);
    if b > 0.0 {
        v += ln_binom(m_size - i, b) + b * std::f64::consts::LN_2;
    }
    v
}
