//! Closed-form spectrum of the set of assignments consistent with a labeled
//! forest.

use crate::bitcube::{tilde_spectrum, CubeFunction, Normalization, Spectrum};
use crate::dihp::{Forest, Insert};
use crate::error::{Error, Result};

/// Largest vertex count for [`component_spectrum`].
pub const SPECTRUM_LIMIT: u32 = 20;

/// Tilde spectrum of `B = {x : x_a ⊕ x_b = w for every edge (a, b, w)}`.
///
/// `v` is admissible when it meets every component of the forest in an
/// even number of vertices; then the coefficient is `(−1)^{Σ w_e}` over the
/// edges `e` of the tree-path pairing of `v` (edges whose subtree holds an
/// odd number of vertices of `v`). Inadmissible `v` get 0. Edges that close
/// an even cycle are redundant and ignored; an odd cycle is a
/// contradiction.
pub fn component_spectrum(n: u32, edges: &[(u32, u32, bool)]) -> Result<Spectrum> {
    if n > SPECTRUM_LIMIT {
        return Err(Error::Capacity { n, cap: SPECTRUM_LIMIT });
    }
    let mut f = Forest::new(n);
    for &(a, b, w) in edges {
        if a >= n || b >= n || a == b {
            return Err(Error::Domain(format!("bad edge ({a}, {b})")));
        }
        if f.insert(a, b, w) == (Insert::Cycle { label_sum: true }) {
            return Err(Error::Contradiction(a, b));
        }
    }
    let tree = f.edges().to_vec();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n as usize];
    for &(a, b, w) in &tree {
        adj[a as usize].push((b as usize, w));
        adj[b as usize].push((a as usize, w));
    }
    // Root each tree, then accumulate subtree masks bottom-up.
    let mut comp_masks = Vec::new();
    let mut seen = vec![false; n as usize];
    let mut flip_mask = 0u64;
    for root in 0..n as usize {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut order = vec![root];
        let mut parent: Vec<(usize, bool)> = vec![(usize::MAX, false); n as usize];
        let mut idx = 0;
        while idx < order.len() {
            let u = order[idx];
            idx += 1;
            for &(v, w) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = (u, w);
                    order.push(v);
                }
            }
        }
        let mut sub = vec![0u64; n as usize];
        for &u in order.iter().rev() {
            sub[u] |= 1 << u;
            let (p, w) = parent[u];
            if p != usize::MAX {
                sub[p] |= sub[u];
                if w {
                    flip_mask ^= sub[u];
                }
            }
        }
        comp_masks.push(sub[root]);
    }
    let coeffs = (0..1u64 << n)
        .map(|v| {
            if comp_masks.iter().any(|&k| (v & k).count_ones() % 2 == 1) {
                0.0
            } else if (v & flip_mask).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            }
        })
        .collect();
    Spectrum::new(n, coeffs, Normalization::Tilde { set_size: 1 << (n as usize - tree.len()) })
}

/// The same spectrum by building `B` and transforming it.
pub fn component_spectrum_brute(n: u32, edges: &[(u32, u32, bool)]) -> Result<Spectrum> {
    let b = CubeFunction::from_fn(n, |x| edges.iter().all(|&(a, c, w)| ((x >> a ^ x >> c) & 1 == 1) == w) as u8 as f64)?;
    if b.support_size() == 0 {
        let &(a, c, _) = edges.first().ok_or(Error::EmptySet)?;
        return Err(Error::Contradiction(a, c));
    }
    tilde_spectrum(&b)
}

/// A random labeled forest on `[n]` with labels drawn from a hidden
/// partition, so that it is always consistent.
pub fn random_labeled_forest(n: u32, edges: usize, r: &mut impl rand::Rng) -> Vec<(u32, u32, bool)> {
    let x: Vec<bool> = (0..n).map(|_| r.gen()).collect();
    let mut f = Forest::new(n);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < edges && attempts < 50 * edges.max(1) {
        attempts += 1;
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        if a != b && f.insert(a, b, false) == Insert::Joined {
            out.push((a, b, x[a as usize] ^ x[b as usize]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    #[test]
    fn single_edge() {
        for w in [false, true] {
            let s = component_spectrum(2, &[(0, 1, w)]).unwrap();
            assert_eq!(s.coeffs(), &[1.0, 0.0, 0.0, if w { -1.0 } else { 1.0 }]);
        }
    }

    #[test]
    fn path_pairs_its_ends() {
        for (w1, w2) in [(false, true), (true, true)] {
            let s = component_spectrum(3, &[(0, 1, w1), (1, 2, w2)]).unwrap();
            let expect = if w1 ^ w2 { -1.0 } else { 1.0 };
            assert_eq!(s.get(0b101), expect);
            assert_eq!(s.get(0b001), 0.0);
            assert_eq!(s, component_spectrum_brute(3, &[(0, 1, w1), (1, 2, w2)]).unwrap());
        }
    }

    #[test]
    fn contradictions() {
        let odd = [(0, 1, true), (1, 2, true), (0, 2, true)];
        assert_eq!(component_spectrum(3, &odd), Err(Error::Contradiction(0, 2)));
        let even = [(0, 1, true), (1, 2, true), (0, 2, false)];
        assert_eq!(component_spectrum(3, &even).unwrap(), component_spectrum_brute(3, &even).unwrap());
    }

    #[test]
    fn random_forests_match_brute_force() {
        let mut r = rng::stream(1, 0);
        for _ in 0..100 {
            let n = r.gen_range(1..=10);
            let e = r.gen_range(0..n as usize);
            let edges = random_labeled_forest(n, e, &mut r);
            assert_eq!(component_spectrum(n, &edges).unwrap(), component_spectrum_brute(n, &edges).unwrap());
        }
    }
}
