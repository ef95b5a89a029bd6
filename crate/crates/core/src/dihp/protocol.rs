use super::instance::{bits_to_string, parse_bits, Case, DihpInstance};
use crate::error::{Error, Result};
use crate::matchings::Matching;
use crate::rng::Stream;
use rand::Rng;
use serde::Serialize;
use std::fmt::Write as _;

/// One player's posting: a bit string, of which the first `free_bits` are
/// not charged against the budget.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Message {
    pub bits: Vec<bool>,
    pub free_bits: usize,
}

impl Message {
    pub fn charged(&self) -> usize {
        self.bits.len() - self.free_bits
    }
}

/// A one-way blackboard protocol.
///
/// Player `t` sees only the public board (built from earlier matchings and
/// messages), its own matching and its own labels. The board is updated by
/// [`Protocol::post`] from public information alone, so the information flow
/// of the game is enforced by the signatures.
pub trait Protocol: Sync {
    type Board: Clone + Send;

    fn name(&self) -> &'static str;

    /// Maximum number of charged bits per message.
    fn budget(&self) -> usize;

    fn start(&self, n: u32, players: usize) -> Self::Board;

    fn speak(&self, board: &Self::Board, t: usize, matching: &Matching, labels: &[bool], rng: &mut Stream) -> Message;

    fn post(&self, board: &mut Self::Board, t: usize, matching: &Matching, message: &Message);

    /// The answer, read off the board after the last message.
    fn output(&self, board: &Self::Board) -> Case;

    /// Whether the protocol observed an inconsistency-revealing cycle.
    fn found_cycle(&self, _board: &Self::Board) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub protocol: String,
    pub budget: usize,
    pub messages: Vec<Message>,
    pub output: Case,
    pub cycle_found: bool,
}

impl Transcript {
    pub fn charged_bits(&self) -> usize {
        self.messages.iter().map(Message::charged).sum()
    }

    pub fn free_bits(&self) -> usize {
        self.messages.iter().map(|m| m.free_bits).sum()
    }

    /// Canonical byte key of the message sequence (used for histograms).
    pub fn key(&self) -> Vec<u8> {
        let mut key = Vec::new();
        for m in &self.messages {
            key.extend(m.bits.iter().map(|&b| b as u8));
            key.push(2);
        }
        key
    }

    /// ```text
    /// dihp-transcript 1
    /// protocol <name>
    /// budget <s>
    /// message <t> <bits or -> free <k>
    /// cycle yes|no
    /// output yes|no
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dihp-transcript 1");
        let _ = writeln!(out, "protocol {}", self.protocol);
        let _ = writeln!(out, "budget {}", self.budget);
        for (t, m) in self.messages.iter().enumerate() {
            let bits = if m.bits.is_empty() { "-".to_string() } else { bits_to_string(&m.bits) };
            let _ = writeln!(out, "message {} {} free {}", t + 1, bits, m.free_bits);
        }
        let _ = writeln!(out, "cycle {}", if self.cycle_found { "yes" } else { "no" });
        let _ = writeln!(out, "output {}", self.output.as_str());
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut t = Transcript {
            protocol: String::new(),
            budget: 0,
            messages: Vec::new(),
            output: Case::Yes,
            cycle_found: false,
        };
        for (idx, line) in text.lines().enumerate() {
            let err = |msg: &str| Error::Parse { line: idx + 1, msg: msg.into() };
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                [] => {}
                ["dihp-transcript", "1"] => {}
                ["protocol", name] => t.protocol = name.to_string(),
                ["budget", s] => t.budget = s.parse().map_err(|_| err("bad budget"))?,
                ["message", _, bits, "free", k] => {
                    let bits = if *bits == "-" { Vec::new() } else { parse_bits(bits).ok_or_else(|| err("bad bits"))? };
                    let free_bits = k.parse().map_err(|_| err("bad free count"))?;
                    t.messages.push(Message { bits, free_bits });
                }
                ["cycle", c] => t.cycle_found = *c == "yes",
                ["output", c] => t.output = Case::parse(c).ok_or_else(|| err("bad output"))?,
                _ => return Err(err("unknown record")),
            }
        }
        Ok(t)
    }
}

/// Run the players in order, enforcing the budget.
pub fn run_protocol<P: Protocol>(p: &P, inst: &DihpInstance, rng: &mut Stream) -> Result<Transcript> {
    let mut board = p.start(inst.n, inst.players());
    let mut messages = Vec::with_capacity(inst.players());
    for (t, (m, w)) in inst.matchings.iter().zip(&inst.labels).enumerate() {
        let msg = p.speak(&board, t, m, w, rng);
        if msg.free_bits > msg.bits.len() || msg.charged() > p.budget() {
            return Err(Error::Budget { player: t + 1, bits: msg.charged(), budget: p.budget() });
        }
        p.post(&mut board, t, m, &msg);
        messages.push(msg);
    }
    Ok(Transcript {
        protocol: p.name().to_string(),
        budget: p.budget(),
        messages,
        output: p.output(&board),
        cycle_found: p.found_cycle(&board),
    })
}

/// Says nothing and answers YES.
#[derive(Clone, Copy, Debug, Default)]
pub struct Trivial;

impl Protocol for Trivial {
    type Board = ();

    fn name(&self) -> &'static str {
        "trivial"
    }

    fn budget(&self) -> usize {
        0
    }

    fn start(&self, _: u32, _: usize) {}

    fn speak(&self, _: &(), _: usize, _: &Matching, _: &[bool], _: &mut Stream) -> Message {
        Message::default()
    }

    fn post(&self, _: &mut (), _: usize, _: &Matching, _: &Message) {}

    fn output(&self, _: &()) -> Case {
        Case::Yes
    }
}

/// The last player posts a fair coin; the answer is that coin.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomGuess;

#[derive(Clone, Debug)]
pub struct GuessBoard {
    players: usize,
    coin: bool,
}

impl Protocol for RandomGuess {
    type Board = GuessBoard;

    fn name(&self) -> &'static str {
        "random"
    }

    fn budget(&self) -> usize {
        1
    }

    fn start(&self, _: u32, players: usize) -> GuessBoard {
        GuessBoard { players, coin: false }
    }

    fn speak(&self, board: &GuessBoard, t: usize, _: &Matching, _: &[bool], rng: &mut Stream) -> Message {
        if t + 1 == board.players {
            Message { bits: vec![rng.gen()], free_bits: 0 }
        } else {
            Message::default()
        }
    }

    fn post(&self, board: &mut GuessBoard, _: usize, _: &Matching, message: &Message) {
        if let Some(&b) = message.bits.first() {
            board.coin = b;
        }
    }

    fn output(&self, board: &GuessBoard) -> Case {
        if board.coin {
            Case::Yes
        } else {
            Case::No
        }
    }
}

/// Each of the first `speakers` players forwards the labels of its first
/// `budget` edges; answers YES.
#[derive(Clone, Copy, Debug)]
pub struct ForwardLabels {
    pub budget: usize,
    pub speakers: usize,
}

impl Protocol for ForwardLabels {
    type Board = ();

    fn name(&self) -> &'static str {
        "forward"
    }

    fn budget(&self) -> usize {
        self.budget
    }

    fn start(&self, _: u32, _: usize) {}

    fn speak(&self, _: &(), t: usize, _: &Matching, labels: &[bool], _: &mut Stream) -> Message {
        if t < self.speakers {
            Message { bits: labels.iter().take(self.budget).copied().collect(), free_bits: 0 }
        } else {
            Message::default()
        }
    }

    fn post(&self, _: &mut (), _: usize, _: &Matching, _: &Message) {}

    fn output(&self, _: &()) -> Case {
        Case::Yes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dihp::instance::{gen_instance, CaseMode};
    use crate::rng;

    /// Claims a budget of 1 but posts 2 bits.
    struct Liar;

    impl Protocol for Liar {
        type Board = ();
        fn name(&self) -> &'static str {
            "liar"
        }
        fn budget(&self) -> usize {
            1
        }
        fn start(&self, _: u32, _: usize) {}
        fn speak(&self, _: &(), _: usize, _: &Matching, _: &[bool], _: &mut Stream) -> Message {
            Message { bits: vec![true, true], free_bits: 0 }
        }
        fn post(&self, _: &mut (), _: usize, _: &Matching, _: &Message) {}
        fn output(&self, _: &()) -> Case {
            Case::No
        }
    }

    #[test]
    fn budget_violation_is_an_error() {
        let mut r = rng::stream(1, 0);
        let inst = gen_instance(10, 2, 3, CaseMode::No, &mut r).unwrap();
        assert_eq!(run_protocol(&Liar, &inst, &mut r), Err(Error::Budget { player: 1, bits: 2, budget: 1 }));
    }

    #[test]
    fn trivial_always_yes() {
        let mut r = rng::stream(2, 0);
        for _ in 0..100 {
            let inst = gen_instance(10, 2, 3, CaseMode::Mixed, &mut r).unwrap();
            let t = run_protocol(&Trivial, &inst, &mut r).unwrap();
            assert_eq!(t.output, Case::Yes);
            assert_eq!(t.charged_bits(), 0);
        }
    }

    #[test]
    fn random_guess_is_a_coin() {
        let trials = 100_000;
        let mut wins = 0;
        for i in 0..trials {
            let mut r = rng::stream(3, i);
            let inst = gen_instance(8, 2, 2, CaseMode::Mixed, &mut r).unwrap();
            let t = run_protocol(&RandomGuess, &inst, &mut r).unwrap();
            assert!(t.messages.iter().all(|m| m.charged() <= 1));
            wins += (t.output == inst.case) as u32;
        }
        assert!((wins as f64 / trials as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn forward_respects_budget_and_roundtrips() {
        let mut r = rng::stream(4, 0);
        let inst = gen_instance(20, 5, 3, CaseMode::Yes, &mut r).unwrap();
        let p = ForwardLabels { budget: 3, speakers: 2 };
        let t = run_protocol(&p, &inst, &mut r).unwrap();
        assert_eq!(t.messages[0].bits, inst.labels[0][..3]);
        assert!(t.messages[2].bits.is_empty());
        assert_eq!(Transcript::from_text(&t.to_text()).unwrap(), t);
    }
}
