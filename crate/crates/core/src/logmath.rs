//! Log-domain arithmetic.
//!
//! Counts are carried as `f64` so the same routines serve desk-scale
//! enumeration (n ≤ 10⁴) and pure-number parameters such as n = 10⁴⁰.
//! Binomials are computed through a Stirling difference that avoids the
//! cancellation of `lnΓ(n+1) − lnΓ(n−k+1)` when n is astronomically large.

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_MIN: f64 = 30.0;

/// Beyond this magnitude consecutive integers are no longer distinct `f64`s.
pub const INTEGER_LIMIT: f64 = 4_503_599_627_370_496.0; // 2^52

fn stirling_series(z: f64) -> f64 {
    let r = 1.0 / z;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    if x < STIRLING_MIN {
        let mut z = x;
        let mut prod = 1.0;
        while z < STIRLING_MIN {
            prod *= z;
            z += 1.0;
        }
        return ln_gamma(z) - prod.ln();
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_series(x)
}

/// `ln n!`.
pub fn ln_factorial(n: f64) -> f64 {
    ln_gamma(n + 1.0)
}

/// `ln (n)_j = ln(n·(n−1)···(n−j+1))` for integers `0 ≤ j ≤ n`.
pub fn ln_falling(n: f64, j: f64) -> f64 {
    if j < 0.0 || j > n {
        return f64::NEG_INFINITY;
    }
    if j == 0.0 {
        return 0.0;
    }
    if j <= 64.0 {
        let ln_n = n.ln();
        let mut acc = 0.0;
        let mut r = 0.0;
        while r < j {
            acc += ln_n + (-r / n).ln_1p();
            r += 1.0;
        }
        return acc;
    }
    let z1 = n + 1.0;
    let z2 = n - j + 1.0;
    if z2 < STIRLING_MIN {
        return ln_gamma(z1) - ln_gamma(z2);
    }
    j * z1.ln() - (z2 - 0.5) * (-j / z1).ln_1p() - j + (stirling_series(z1) - stirling_series(z2))
}

/// `ln C(n, k)`; `−∞` outside `0 ≤ k ≤ n`.
pub fn ln_binom(n: f64, k: f64) -> f64 {
    if n < 0.0 || k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k == 0.0 {
        return 0.0;
    }
    ln_falling(n, k) - ln_factorial(k)
}

/// Slack used by every log-domain comparison.
pub const LOG_SLACK: f64 = 1e-9;

/// `lhs ≤ rhs` for log-values, with slack `1e-9·max(1, |rhs|)`.
///
/// The slack is relative because audited log-values reach 10²⁸, where an
/// absolute 1e-9 is below one ulp.
pub fn log_le(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + LOG_SLACK * rhs.abs().max(1.0)
}

/// `x ln y` with the convention `0·ln 0 = 0` (so `0^0 = 1`).
pub fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Natural-log binary entropy.
pub fn entropy(p: f64) -> f64 {
    -(xlny(p, p) + xlny(1.0 - p, 1.0 - p))
}

/// `ln(e^a + e^b)`.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{xᵢ}`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_infinite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Streaming log-sum-exp accumulator.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    max: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self { max: f64::NEG_INFINITY, scaled: 0.0 }
    }
}

impl LogSum {
    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.scaled += (x - self.max).exp();
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

// ---------------------------------------------------------------------------
// Sums over long integer ranges
// ---------------------------------------------------------------------------

/// Result of summing `e^{f(x)}` over an integer range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSum {
    /// Log of the sum, or of an upper bound on it when `exact` is false.
    pub value: f64,
    pub exact: bool,
    /// Location and log-value of the largest term found.
    pub argmax: f64,
    pub max: f64,
    /// Number of terms evaluated explicitly.
    pub evaluated: usize,
    /// False when a probe on a geometric grid exceeded the located peak.
    pub unimodal: bool,
}

const DIRECT_LIMIT: f64 = 65_536.0;
const WINDOW_DROP: f64 = 60.0;
const WINDOW_MAX: usize = 1 << 14;
const PROBES: usize = 64;

/// Log of `Σ_{x=lo}^{hi} e^{f(x)}` for unimodal `f`.
///
/// Short ranges are summed term by term. Long ranges are summed in a window
/// around the peak (found by ternary search) and the two tails are bounded
/// by `min(count, geometric)` times the edge term; the geometric bound uses
/// the ratio at the window edge and is valid when `f` is concave. Past
/// 2^52, where consecutive integers collapse, the whole sum is bounded by
/// `count · max`. The result is never below the true sum.
pub fn log_sum_range(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> RangeSum {
    let lo = lo.ceil();
    let hi = hi.floor();
    if hi < lo {
        return RangeSum {
            value: f64::NEG_INFINITY,
            exact: true,
            argmax: lo,
            max: f64::NEG_INFINITY,
            evaluated: 0,
            unimodal: true,
        };
    }
    let count = hi - lo + 1.0;
    if count <= DIRECT_LIMIT && hi < INTEGER_LIMIT {
        let mut acc = LogSum::default();
        let (mut argmax, mut max) = (lo, f64::NEG_INFINITY);
        let mut x = lo;
        while x <= hi {
            let v = f(x);
            if v > max {
                max = v;
                argmax = x;
            }
            acc.add(v);
            x += 1.0;
        }
        return RangeSum { value: acc.value(), exact: true, argmax, max, evaluated: count as usize, unimodal: true };
    }

    let (argmax, max, mut evaluated) = ternary_argmax(lo, hi, &f);
    let unimodal = probe_unimodal(lo, hi, max, &f);
    evaluated += PROBES;

    if hi >= INTEGER_LIMIT {
        return RangeSum { value: max + count.ln(), exact: false, argmax, max, evaluated, unimodal };
    }

    let mut acc = LogSum::default();
    acc.add(max);
    let mut exact = true;

    // Right side.
    let mut x = argmax + 1.0;
    let mut prev = max;
    let mut steps = 0;
    while x <= hi {
        let v = f(x);
        evaluated += 1;
        acc.add(v);
        steps += 1;
        if v < max - WINDOW_DROP || steps >= WINDOW_MAX {
            if x < hi {
                acc.add(tail_bound(v, prev, hi - x));
                exact = false;
            }
            break;
        }
        prev = v;
        x += 1.0;
    }

    // Left side.
    let mut x = argmax - 1.0;
    let mut prev = max;
    let mut steps = 0;
    while x >= lo {
        let v = f(x);
        evaluated += 1;
        acc.add(v);
        steps += 1;
        if v < max - WINDOW_DROP || steps >= WINDOW_MAX {
            if x > lo {
                acc.add(tail_bound(v, prev, x - lo));
                exact = false;
            }
            break;
        }
        prev = v;
        x -= 1.0;
    }

    RangeSum { value: acc.value(), exact, argmax, max, evaluated, unimodal }
}

/// Bound on the `remaining` terms past an edge term `edge` whose inner
/// neighbour is `inner`.
fn tail_bound(edge: f64, inner: f64, remaining: f64) -> f64 {
    if edge == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let by_count = edge + remaining.ln();
    let drop = inner - edge;
    if drop > 0.0 {
        // Σ_{j≥1} e^{edge − j·drop}
        let geometric = edge - drop - (-(-drop).exp()).ln_1p();
        by_count.min(geometric)
    } else {
        by_count
    }
}

fn ternary_argmax(lo: f64, hi: f64, f: &impl Fn(f64) -> f64) -> (f64, f64, usize) {
    let (mut a, mut b) = (lo, hi);
    let mut evaluated = 0;
    for _ in 0..2000 {
        // Past 2^53 neighbouring integers are not representable.
        if b - a <= 2.0 || b - a <= 8.0 * f64::EPSILON * b.abs() {
            break;
        }
        let third = ((b - a) / 3.0).floor().max(1.0);
        let m1 = a + third;
        let m2 = b - third;
        if m1 >= m2 {
            break;
        }
        let (v1, v2) = (f(m1), f(m2));
        evaluated += 2;
        if v1 < v2 {
            a = m1 + 1.0;
        } else {
            b = m2;
        }
    }
    let mut best = (a, f(a));
    evaluated += 1;
    let mut x = a + 1.0;
    while x <= b && x > best.0 {
        let v = f(x);
        evaluated += 1;
        if v > best.1 {
            best = (x, v);
        }
        x += 1.0;
    }
    (best.0, best.1, evaluated)
}

fn probe_unimodal(lo: f64, hi: f64, max: f64, f: &impl Fn(f64) -> f64) -> bool {
    let span = hi - lo;
    // Terms far from the peak are differences of large log-gamma values;
    // their magnitude sets the rounding floor near the peak too.
    let scale = [max, f(lo), f(hi), 1.0].iter().map(|v| if v.is_finite() { v.abs() } else { 0.0 }).fold(0.0, f64::max);
    let tol = 1e-9 * scale;
    (0..PROBES).all(|j| {
        let t = j as f64 / (PROBES - 1) as f64;
        let x = (lo + span.powf(t) - 1.0).clamp(lo, hi).floor();
        f(x) <= max + tol
    })
}
