//! The double sums over coefficient weights, evaluated in log space with
//! `n`, `C`, `s*` and `α` treated as plain numbers.

use crate::bitcube::ln_bound;
use crate::error::{Error, Result};
use crate::logmath::{ln_binom, log_le, log_sum_range, RangeSum};
use crate::matchings::ln_q_kib;
use serde::Serialize;
use std::cell::Cell;
use std::f64::consts::LN_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SumKind {
    S0,
    S1,
    S2,
    S3,
    T1,
    T2,
}

impl SumKind {
    pub const ALL: [SumKind; 6] = [SumKind::S0, SumKind::S1, SumKind::S2, SumKind::S3, SumKind::T1, SumKind::T2];

    pub fn name(self) -> &'static str {
        match self {
            SumKind::S0 => "s0",
            SumKind::S1 => "s1",
            SumKind::S2 => "s2",
            SumKind::S3 => "s3",
            SumKind::T1 => "t1",
            SumKind::T2 => "t2",
        }
    }

    pub fn parse(s: &str) -> Option<SumKind> {
        SumKind::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn is_low(self) -> bool {
        matches!(self, SumKind::S0 | SumKind::S1 | SumKind::S2 | SumKind::S3)
    }
}

/// How the right-hand side of each sum's bound is formed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum BoundShape {
    /// `bound_{c}(ℓ)` with an absolute constant `c`.
    Absolute(f64),
    /// `bound_{factor·C}(ℓ)`.
    ScaledC(f64),
    /// `((factor·C)²n/ℓ)^{ℓ/2}` regardless of ℓ versus s*.
    HighBranch(f64),
    /// The constant 1.
    One,
}

/// Right-hand sides of the sum bounds.
pub const BOUND_TABLE: [(SumKind, BoundShape); 6] = [
    (SumKind::S0, BoundShape::Absolute(15.0)),
    (SumKind::S1, BoundShape::ScaledC(1e8)),
    (SumKind::S2, BoundShape::ScaledC(1e7)),
    (SumKind::S3, BoundShape::One),
    (SumKind::T1, BoundShape::ScaledC(1e7)),
    (SumKind::T2, BoundShape::HighBranch(1e8)),
];

pub fn bound_shape(kind: SumKind) -> BoundShape {
    BOUND_TABLE.iter().find(|(k, _)| *k == kind).unwrap().1
}

/// `ln bound_C(ℓ)` for the (C, s*) level bound.
pub fn bound_fn(c: f64, s_star: f64, n: f64, ell: f64) -> f64 {
    ln_bound(c, s_star, n, ell)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AuditParams {
    pub n: f64,
    pub c: f64,
    pub s_star: f64,
    pub alpha: f64,
    /// Only used by the (P5) flag.
    pub delta: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Preconditions {
    /// α < 1e-10
    pub p1: bool,
    /// C > 1e6
    pub p2: bool,
    /// s* < n/(1e9·C³)
    pub p3: bool,
    /// n > 1e9·C⁴
    pub p4: bool,
    /// δ ∈ (1/n, 1/2), when δ is given.
    pub p5: Option<bool>,
}

impl Preconditions {
    pub fn p1_to_p4(&self) -> bool {
        self.p1 && self.p2 && self.p3 && self.p4
    }
}

impl AuditParams {
    pub fn new(n: f64, c: f64, s_star: f64, alpha: f64) -> Self {
        Self { n, c, s_star, alpha, delta: None }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(self.n) && ok(self.c) && ok(self.s_star) && ok(self.alpha)) {
            return Err(Error::Domain("n, C, s* and α must be positive and finite".into()));
        }
        if self.s_star.fract() != 0.0 || self.n.fract() != 0.0 {
            return Err(Error::Domain("n and s* must be integers".into()));
        }
        if self.alpha_n() < 1.0 || 2.0 * self.alpha_n() > self.n {
            return Err(Error::Domain(format!("αn = {} must lie in [1, n/2]", self.alpha_n())));
        }
        Ok(())
    }

    /// Matching size `⌊αn⌋`.
    pub fn alpha_n(&self) -> f64 {
        (self.alpha * self.n).floor()
    }

    pub fn preconditions(&self) -> Preconditions {
        let (n, c) = (self.n, self.c);
        Preconditions {
            p1: self.alpha < 1e-10,
            p2: c > 1e6,
            p3: self.s_star.ln() < n.ln() - 9.0 * 10f64.ln() - 3.0 * c.ln(),
            p4: n.ln() > 9.0 * 10f64.ln() + 4.0 * c.ln(),
            p5: self.delta.map(|d| d > 1.0 / n && d < 0.5),
        }
    }

    /// Integer grid on `[s*, n/(2C²)]`: both ends plus geometric interior
    /// points, `points` values in all (fewer if the range is short).
    pub fn high_grid(&self, points: usize) -> Vec<f64> {
        let lo = self.s_star;
        let hi = (self.n / (2.0 * self.c * self.c)).floor();
        if hi < lo {
            return Vec::new();
        }
        let mut g: Vec<f64> = (0..points.max(2))
            .map(|j| (lo.ln() + (hi.ln() - lo.ln()) * j as f64 / (points.max(2) - 1) as f64).exp().round().clamp(lo, hi))
            .collect();
        g[0] = lo;
        *g.last_mut().unwrap() = hi;
        g.dedup();
        g
    }

    pub fn low_grid(&self) -> Vec<f64> {
        (1..=self.s_star as u64).map(|l| l as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRow {
    pub ell: f64,
    /// Log of the sum (an upper bound on it when `exact` is false).
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    pub pass: bool,
    pub exact: bool,
    pub unimodal: bool,
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub sum: SumKind,
    pub params: AuditParams,
    pub preconditions: Preconditions,
    pub rows: Vec<AuditRow>,
    pub worst_margin: f64,
    /// Every row passed and every sum was confirmed unimodal where sampled.
    pub pass: bool,
}

fn rhs(kind: SumKind, p: &AuditParams, ell: f64) -> f64 {
    match bound_shape(kind) {
        BoundShape::Absolute(c) => bound_fn(c, p.s_star, p.n, ell),
        BoundShape::ScaledC(f) => bound_fn(f * p.c, p.s_star, p.n, ell),
        BoundShape::HighBranch(f) => 0.5 * ell * (2.0 * (f * p.c).ln() + p.n.ln() - ell.ln()),
        BoundShape::One => 0.0,
    }
}

/// `x·ln(a/x)` with the convention `0·ln(a/0) = 0`.
fn power_term(a_ln: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (a_ln - x.ln())
    }
}

struct Ctx {
    n: f64,
    an: f64,
    ln_15: f64,
    ln_3an: f64,
}

impl Ctx {
    /// Inner sum over `d = k − i ∈ [0, min(k, ℓ)]`, with `i ≤ αn`.
    fn inner(&self, kind: SumKind, k: f64, ell: f64) -> RangeSum {
        let lo = (k - self.an).max(0.0);
        let hi = k.min(ell);
        log_sum_range(lo, hi, |d| {
            let q = ln_q_kib(k, d, 0.0, self.n, self.an);
            let e = ell - d;
            if kind.is_low() {
                q + power_term(self.ln_15, e)
            } else {
                q + 0.5 * power_term(self.ln_3an, e)
            }
        })
    }
}

/// Evaluate one sum at one ℓ.
pub fn eval_row(kind: SumKind, p: &AuditParams, ell: f64) -> Result<AuditRow> {
    p.validate()?;
    let (n, c, s) = (p.n, p.c, p.s_star);
    let an = p.alpha_n();
    let ctx = Ctx { n, an, ln_15: (15.0f64).ln() + 0.5 * (s.ln() + an.ln()), ln_3an: (3.0 * an).ln() };
    let n_c2 = (n / (c * c)).floor();
    let n_100 = (n / 100.0).floor();
    // Nonzero terms need k = i + d ≤ αn + ℓ.
    let k_cap = an + ell;
    let ln_sqrt_binom = |k: f64| 0.5 * (s * LN_2 + ln_binom(n, 2.0 * k));
    let (lo, hi) = match kind {
        SumKind::S0 => (0.0, 0.0),
        SumKind::S1 => (1.0, 100.0 * s),
        SumKind::S2 => (100.0 * s + 1.0, n_c2),
        SumKind::S3 => (n_c2, n_100),
        SumKind::T1 => (1.0, n_c2),
        SumKind::T2 => (n_c2 + 1.0, n_100),
    };
    // (all inner sums exact, all unimodal, terms evaluated)
    let flags = Cell::new((true, true, 0usize));
    let total = log_sum_range(lo, hi.min(k_cap), |k| {
        let w = match kind {
            SumKind::S0 | SumKind::S1 | SumKind::S2 => bound_fn(c, s, n, k),
            SumKind::S3 | SumKind::T2 => ln_sqrt_binom(k),
            SumKind::T1 => s * LN_2 + 0.5 * k * (2.0 * c.ln() + n.ln() - k.ln()),
        };
        let r = ctx.inner(kind, k, ell);
        let (e, u, t) = flags.get();
        flags.set((e && r.exact, u && r.unimodal, t + r.evaluated));
        w + r.value
    });
    let (exact_in, unimodal_in, terms_in) = flags.get();
    let lhs = total.value;
    let rhs = rhs(kind, p, ell);
    Ok(AuditRow {
        ell,
        lhs,
        rhs,
        margin: rhs - lhs,
        pass: log_le(lhs, rhs),
        exact: total.exact && exact_in,
        unimodal: total.unimodal && unimodal_in,
        terms: total.evaluated + terms_in,
    })
}

fn eval(kind: SumKind, p: &AuditParams, ells: &[f64]) -> Result<AuditReport> {
    let rows: Vec<AuditRow> = ells.iter().map(|&l| eval_row(kind, p, l)).collect::<Result<_>>()?;
    let worst_margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let pass = rows.iter().all(|r| r.pass && r.unimodal);
    Ok(AuditReport { sum: kind, params: *p, preconditions: p.preconditions(), rows, worst_margin, pass })
}

/// `S_j` at every ℓ in `[1, s*]`, or at the given ℓ values.
pub fn eval_s(j: u32, p: &AuditParams, ells: Option<&[f64]>) -> Result<AuditReport> {
    let kind = match j {
        0 => SumKind::S0,
        1 => SumKind::S1,
        2 => SumKind::S2,
        3 => SumKind::S3,
        _ => return Err(Error::Domain(format!("no sum S{j}"))),
    };
    let grid = p.low_grid();
    eval(kind, p, ells.unwrap_or(&grid))
}

/// `T_j` on a grid of `points` values in `[s*, n/(2C²)]`, or at the given ℓ.
pub fn eval_t(j: u32, p: &AuditParams, ells: Option<&[f64]>, points: usize) -> Result<AuditReport> {
    let kind = match j {
        1 => SumKind::T1,
        2 => SumKind::T2,
        _ => return Err(Error::Domain(format!("no sum T{j}"))),
    };
    let grid = p.high_grid(points);
    eval(kind, p, ells.unwrap_or(&grid))
}

/// Tuples satisfying (P1)–(P4), used as the default audit grid.
pub fn default_tuples() -> Vec<AuditParams> {
    [
        (1e40, 2e6, 10.0, 1e-11),
        (1e40, 2e6, 20.0, 5e-11),
        (1e36, 1.5e6, 8.0, 1e-12),
        (1e45, 1e7, 16.0, 1e-11),
        (1e50, 3e6, 30.0, 9e-11),
    ]
    .into_iter()
    .map(|(n, c, s, a)| AuditParams::new(n, c, s, a))
    .collect()
}
