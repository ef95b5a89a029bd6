//! Component-growing protocols.
//!
//! Both protocols keep a labeled forest of revealed edges on the public
//! board. A revealed edge whose endpoints are already connected closes a
//! cycle; in a YES instance the labels around any cycle sum to 0, so an odd
//! cycle certifies NO. Only the first cycle is used; afterwards every
//! player posts the empty message.

use super::forest::{Forest, Insert};
use super::instance::Case;
use super::protocol::{Message, Protocol};
use crate::matchings::Matching;
use crate::rng::Stream;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct GrowingBoard {
    pub forest: Forest,
    pub decision: Option<Case>,
    pub history: Vec<RoundStats>,
}

/// Forest shape after a round, before and after any eviction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RoundStats {
    pub components: usize,
    pub covered: u64,
    pub kept_components: usize,
    pub kept_covered: u64,
    pub potential: u64,
    /// A cycle had been found by the end of the round.
    pub decided: bool,
}

impl RoundStats {
    fn of(f: &Forest) -> Self {
        let sizes = f.component_sizes();
        let covered = sizes.iter().map(|&s| s as u64).sum();
        Self {
            components: sizes.len(),
            covered,
            kept_components: sizes.len(),
            kept_covered: covered,
            potential: f.potential(),
            decided: false,
        }
    }
}

impl GrowingBoard {
    fn new(n: u32) -> Self {
        Self { forest: Forest::new(n), decision: None, history: Vec::new() }
    }

    /// Insert revealed edges in order, stopping at the first cycle.
    fn reveal(&mut self, m: &Matching, idx: &[usize], labels: &[bool]) {
        for (&j, &w) in idx.iter().zip(labels) {
            let (a, b) = m.edges()[j];
            if let Insert::Cycle { label_sum } = self.forest.insert(a, b, w) {
                self.decision = Some(if label_sum { Case::No } else { Case::Yes });
                return;
            }
        }
    }
}

/// Indices of edges with an endpoint in a nontrivial component.
fn touching(forest: &Forest, m: &Matching) -> Vec<usize> {
    (0..m.len())
        .filter(|&j| {
            let (a, b) = m.edges()[j];
            forest.in_component(a) || forest.in_component(b)
        })
        .collect()
}

fn labels_of(idx: &[usize], labels: &[bool]) -> Vec<bool> {
    idx.iter().map(|&j| labels[j]).collect()
}

/// The distinguisher: every player reveals, for free, the edges touching
/// the forest, and pays for up to `s` fresh edges that start new
/// components.
#[derive(Clone, Copy, Debug)]
pub struct Distinguisher {
    pub s: usize,
}

pub fn component_growing_distinguisher(s: usize) -> Distinguisher {
    assert!(s >= 2, "the distinguisher needs s ≥ 2");
    Distinguisher { s }
}

impl Distinguisher {
    fn plan(&self, forest: &Forest, m: &Matching) -> (Vec<usize>, Vec<usize>) {
        let touch = touching(forest, m);
        let mut fresh = Vec::with_capacity(self.s);
        let mut k = 0;
        for j in 0..m.len() {
            if fresh.len() == self.s {
                break;
            }
            if k < touch.len() && touch[k] == j {
                k += 1;
            } else {
                fresh.push(j);
            }
        }
        (touch, fresh)
    }
}

impl Protocol for Distinguisher {
    type Board = GrowingBoard;

    fn name(&self) -> &'static str {
        "distinguisher"
    }

    fn budget(&self) -> usize {
        self.s
    }

    fn start(&self, n: u32, _: usize) -> GrowingBoard {
        GrowingBoard::new(n)
    }

    fn speak(&self, board: &GrowingBoard, _: usize, m: &Matching, labels: &[bool], _: &mut Stream) -> Message {
        if board.decision.is_some() {
            return Message::default();
        }
        let (touch, fresh) = self.plan(&board.forest, m);
        let mut bits = labels_of(&touch, labels);
        bits.extend(labels_of(&fresh, labels));
        Message { bits, free_bits: touch.len() }
    }

    fn post(&self, board: &mut GrowingBoard, _: usize, m: &Matching, message: &Message) {
        if board.decision.is_none() {
            let (touch, fresh) = self.plan(&board.forest, m);
            let (free, paid) = message.bits.split_at(touch.len());
            board.reveal(m, &touch, free);
            if board.decision.is_none() {
                board.reveal(m, &fresh, paid);
            }
        }
        let mut stats = RoundStats::of(&board.forest);
        stats.decided = board.decision.is_some();
        board.history.push(stats);
    }

    fn output(&self, board: &GrowingBoard) -> Case {
        board.decision.unwrap_or(Case::Yes)
    }

    fn found_cycle(&self, board: &GrowingBoard) -> bool {
        board.decision.is_some()
    }
}

/// The bounded-memory solver: player 1 reveals `⌊s/2⌋` edges, later players
/// reveal (and pay for) every edge touching a tracked component, and after
/// each round the smallest components are dropped until at most `s/2`
/// vertices remain tracked.
#[derive(Clone, Copy, Debug)]
pub struct AdaptiveSolver {
    pub s: usize,
}

pub fn adaptive_solver(s: usize) -> AdaptiveSolver {
    assert!(s >= 4, "the adaptive solver needs s ≥ 4");
    AdaptiveSolver { s }
}

impl AdaptiveSolver {
    fn plan(&self, t: usize, forest: &Forest, m: &Matching) -> Vec<usize> {
        if t == 0 {
            (0..m.len().min(self.s / 2)).collect()
        } else {
            touching(forest, m)
        }
    }

    fn prune(&self, forest: &mut Forest) -> (usize, u64) {
        let cap = (self.s / 2) as u64;
        let mut comps: Vec<(u32, u32)> = forest.nontrivial_roots().into_iter().map(|r| (forest.component_size(r), r)).collect();
        let mut covered: u64 = comps.iter().map(|&(s, _)| s as u64).sum();
        comps.sort_unstable();
        let mut kept = comps.len();
        for &(size, root) in &comps {
            if covered <= cap {
                break;
            }
            forest.evict(root);
            covered -= size as u64;
            kept -= 1;
        }
        (kept, covered)
    }
}

impl Protocol for AdaptiveSolver {
    type Board = GrowingBoard;

    fn name(&self) -> &'static str {
        "adaptive"
    }

    fn budget(&self) -> usize {
        self.s
    }

    fn start(&self, n: u32, _: usize) -> GrowingBoard {
        GrowingBoard::new(n)
    }

    fn speak(&self, board: &GrowingBoard, t: usize, m: &Matching, labels: &[bool], _: &mut Stream) -> Message {
        if board.decision.is_some() {
            return Message::default();
        }
        Message { bits: labels_of(&self.plan(t, &board.forest, m), labels), free_bits: 0 }
    }

    fn post(&self, board: &mut GrowingBoard, t: usize, m: &Matching, message: &Message) {
        if board.decision.is_none() {
            let idx = self.plan(t, &board.forest, m);
            board.reveal(m, &idx, &message.bits);
        }
        let mut stats = RoundStats::of(&board.forest);
        if board.decision.is_none() {
            let (kept, covered) = self.prune(&mut board.forest);
            stats.kept_components = kept;
            stats.kept_covered = covered;
            stats.potential = board.forest.potential();
        }
        stats.decided = board.decision.is_some();
        board.history.push(stats);
    }

    fn output(&self, board: &GrowingBoard) -> Case {
        board.decision.unwrap_or(Case::Yes)
    }

    fn found_cycle(&self, board: &GrowingBoard) -> bool {
        board.decision.is_some()
    }
}
