use crate::error::{Error, Result};
use crate::matchings::{apply_matching, sample_matching, Matching};
use rand::Rng;
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Case {
    Yes,
    No,
}

impl Case {
    pub fn as_str(self) -> &'static str {
        match self {
            Case::Yes => "yes",
            Case::No => "no",
        }
    }

    pub fn parse(s: &str) -> Option<Case> {
        match s {
            "yes" | "YES" => Some(Case::Yes),
            "no" | "NO" => Some(Case::No),
            _ => None,
        }
    }
}

/// Which distribution to draw instances from; `Mixed` flips a fair coin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseMode {
    Yes,
    No,
    Mixed,
}

/// One draw of the game: T matchings with their labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DihpInstance {
    pub n: u32,
    pub alpha_n: u32,
    pub matchings: Vec<Matching>,
    pub labels: Vec<Vec<bool>>,
    pub case: Case,
    /// The hidden partition, present exactly for YES instances.
    pub hidden: Option<Vec<bool>>,
}

impl DihpInstance {
    pub fn players(&self) -> usize {
        self.matchings.len()
    }

    /// Check shape invariants and, for YES instances, `w_t = M_t X*`.
    pub fn validate(&self) -> Result<()> {
        if self.matchings.len() != self.labels.len() {
            return Err(Error::Precondition("one label vector per matching".into()));
        }
        for (m, w) in self.matchings.iter().zip(&self.labels) {
            if m.n() != self.n || m.len() != self.alpha_n as usize || w.len() != m.len() {
                return Err(Error::Precondition("matching or label length disagrees with (n, alpha_n)".into()));
            }
        }
        match (&self.case, &self.hidden) {
            (Case::Yes, Some(x)) => {
                if x.len() != self.n as usize {
                    return Err(Error::Precondition("hidden partition has the wrong length".into()));
                }
                for (m, w) in self.matchings.iter().zip(&self.labels) {
                    if &apply_matching(m, x) != w {
                        return Err(Error::Precondition("labels are not parities of the hidden partition".into()));
                    }
                }
                Ok(())
            }
            (Case::No, None) => Ok(()),
            _ => Err(Error::Precondition("hidden partition present iff the case is YES".into())),
        }
    }

    /// Line-delimited text form.
    ///
    /// ```text
    /// dihp-instance 1
    /// n <n>
    /// alpha_n <αn>
    /// players <T>
    /// case yes|no
    /// hidden <bits>            (YES only; coordinate 0 first)
    /// matching <t> <a>:<b> ...  (t from 1, canonical edge order)
    /// labels <t> <bits>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dihp-instance 1");
        let _ = writeln!(out, "n {}", self.n);
        let _ = writeln!(out, "alpha_n {}", self.alpha_n);
        let _ = writeln!(out, "players {}", self.players());
        let _ = writeln!(out, "case {}", self.case.as_str());
        if let Some(x) = &self.hidden {
            let _ = writeln!(out, "hidden {}", bits_to_string(x));
        }
        for (t, (m, w)) in self.matchings.iter().zip(&self.labels).enumerate() {
            let _ = write!(out, "matching {}", t + 1);
            for (a, b) in m.edges() {
                let _ = write!(out, " {a}:{b}");
            }
            out.push('\n');
            let _ = writeln!(out, "labels {} {}", t + 1, bits_to_string(w));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut alpha_n = None;
        let mut players = None;
        let mut case = None;
        let mut hidden = None;
        let mut matchings = Vec::new();
        let mut labels = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or_default();
            let num = |s: Option<&str>| -> Result<u32> {
                s.and_then(|s| s.parse().ok()).ok_or_else(|| err("expected an integer"))
            };
            match key {
                "dihp-instance" => {
                    if parts.next() != Some("1") {
                        return Err(err("unsupported version"));
                    }
                }
                "n" => n = Some(num(parts.next())?),
                "alpha_n" => alpha_n = Some(num(parts.next())?),
                "players" => players = Some(num(parts.next())?),
                "case" => case = Some(parts.next().and_then(Case::parse).ok_or_else(|| err("expected yes or no"))?),
                "hidden" => hidden = Some(parse_bits(parts.next().unwrap_or("")).ok_or_else(|| err("bad bits"))?),
                "matching" => {
                    let t = num(parts.next())? as usize;
                    if t != matchings.len() + 1 {
                        return Err(err("matchings out of order"));
                    }
                    let mut edges = Vec::new();
                    for tok in parts {
                        let (a, b) = tok.split_once(':').ok_or_else(|| err("edge must be a:b"))?;
                        edges.push((num(Some(a))?, num(Some(b))?));
                    }
                    let nn = n.ok_or_else(|| err("n must precede matchings"))?;
                    matchings.push(Matching::new(nn, edges).map_err(|e| err(&e.to_string()))?);
                }
                "labels" => {
                    let t = num(parts.next())? as usize;
                    if t != labels.len() + 1 {
                        return Err(err("labels out of order"));
                    }
                    let bits = parts.next().unwrap_or("");
                    labels.push(parse_bits(bits).ok_or_else(|| err("bad bits"))?);
                }
                _ => return Err(err("unknown record")),
            }
        }
        let missing = |what: &str| Error::Parse { line: 0, msg: format!("missing {what}") };
        let inst = DihpInstance {
            n: n.ok_or_else(|| missing("n"))?,
            alpha_n: alpha_n.ok_or_else(|| missing("alpha_n"))?,
            matchings,
            labels,
            case: case.ok_or_else(|| missing("case"))?,
            hidden,
        };
        if players != Some(inst.players() as u32) {
            return Err(missing("consistent player count"));
        }
        inst.validate()?;
        Ok(inst)
    }
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// Draw an instance. Mixed mode flips the case coin first; YES draws `X*`
/// before the matchings, NO draws each label vector after its matching.
pub fn gen_instance<R: Rng + ?Sized>(n: u32, alpha_n: u32, players: u32, mode: CaseMode, rng: &mut R) -> Result<DihpInstance> {
    if 2 * alpha_n as u64 > n as u64 {
        return Err(Error::Precondition(format!("2·alpha_n = {} exceeds n = {n}", 2 * alpha_n as u64)));
    }
    let case = match mode {
        CaseMode::Yes => Case::Yes,
        CaseMode::No => Case::No,
        CaseMode::Mixed => {
            if rng.gen::<bool>() {
                Case::Yes
            } else {
                Case::No
            }
        }
    };
    let hidden: Option<Vec<bool>> = (case == Case::Yes).then(|| (0..n).map(|_| rng.gen()).collect());
    let mut matchings = Vec::with_capacity(players as usize);
    let mut labels = Vec::with_capacity(players as usize);
    for _ in 0..players {
        let m = sample_matching(n, alpha_n, rng)?;
        let w = match &hidden {
            Some(x) => apply_matching(&m, x),
            None => (0..alpha_n).map(|_| rng.gen()).collect(),
        };
        matchings.push(m);
        labels.push(w);
    }
    Ok(DihpInstance { n, alpha_n, matchings, labels, case, hidden })
}
