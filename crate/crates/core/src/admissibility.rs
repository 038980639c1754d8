//! Exact symbolic verification of exponent/weight hypotheses for the
//! convolution, cross-Wigner, Weyl boundedness, and localization boundedness
//! theorems.
//!
//! Exponents are exact rationals extended with ∞ (reciprocal 0); weight
//! powers enter as exact rationals as well. These hypotheses are
//! boundary-sensitive — several switch between strict and non-strict
//! inequalities at equality points — so no floating-point comparison is ever
//! used. Each check returns a [`Verdict`] with one entry per quoted
//! condition.

use crate::{Result, TfError};
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Extended-real Lebesgue exponent in [1, ∞], exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtExp {
    /// A finite rational exponent ≥ 1.
    Finite(Rational64),
    /// The supremum exponent ∞.
    Inf,
}

impl ExtExp {
    /// Exact rational constructor, validating the range.
    pub fn from_ratio(num: i64, den: i64) -> Result<ExtExp> {
        if den == 0 {
            return Err(TfError::InvalidArgument("zero denominator".into()));
        }
        let r = Rational64::new(num, den);
        if r < Rational64::one() {
            return Err(TfError::InvalidArgument(format!(
                "exponent {r} lies below 1"
            )));
        }
        Ok(ExtExp::Finite(r))
    }

    /// Integer constructor.
    pub fn from_int(v: i64) -> Result<ExtExp> {
        ExtExp::from_ratio(v, 1)
    }

    /// Parse "inf", an integer, or "a/b".
    pub fn parse(s: &str) -> Result<ExtExp> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(ExtExp::Inf);
        }
        let r = parse_rational(s)?;
        if r < Rational64::one() {
            return Err(TfError::InvalidArgument(format!(
                "exponent {s} lies below 1"
            )));
        }
        Ok(ExtExp::Finite(r))
    }

    /// Reciprocal with 1/∞ = 0.
    pub fn recip(&self) -> Rational64 {
        match self {
            ExtExp::Finite(r) => r.recip(),
            ExtExp::Inf => Rational64::zero(),
        }
    }

    /// Floating-point value for numeric callers; ∞ maps to `None`.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ExtExp::Finite(r) => Some(*r.numer() as f64 / *r.denom() as f64),
            ExtExp::Inf => None,
        }
    }
}

impl std::fmt::Display for ExtExp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtExp::Finite(r) => write!(f, "{r}"),
            ExtExp::Inf => write!(f, "inf"),
        }
    }
}

impl PartialOrd for ExtExp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp_ext(other))
    }
}

impl ExtExp {
    fn cmp_ext(&self, other: &ExtExp) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (ExtExp::Inf, ExtExp::Inf) => Ordering::Equal,
            (ExtExp::Inf, _) => Ordering::Greater,
            (_, ExtExp::Inf) => Ordering::Less,
            (ExtExp::Finite(a), ExtExp::Finite(b)) => a.cmp(b),
        }
    }

    fn min_ext(self, other: ExtExp) -> ExtExp {
        if self.cmp_ext(&other) == std::cmp::Ordering::Greater {
            other
        } else {
            self
        }
    }
}

/// Parse an exact rational "a", "a/b", or a decimal with a short fraction
/// part (e.g. "0.5"); arbitrary binary floats are rejected to keep the
/// arithmetic exact.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: i64 = a
            .trim()
            .parse()
            .map_err(|_| TfError::Parse(format!("bad rational `{s}`")))?;
        let den: i64 = b
            .trim()
            .parse()
            .map_err(|_| TfError::Parse(format!("bad rational `{s}`")))?;
        if den == 0 {
            return Err(TfError::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational64::new(num, den));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.len() > 9 {
            return Err(TfError::Parse(format!(
                "decimal `{s}` too long for exact conversion; use a/b"
            )));
        }
        let neg = ip.trim_start().starts_with('-');
        let ipv: i64 = ip
            .parse()
            .map_err(|_| TfError::Parse(format!("bad decimal `{s}`")))?;
        let fpv: i64 = if fp.is_empty() {
            0
        } else {
            fp.parse()
                .map_err(|_| TfError::Parse(format!("bad decimal `{s}`")))?
        };
        let den = 10i64.pow(fp.len() as u32);
        let frac = Rational64::new(fpv, den);
        let base = Rational64::from_integer(ipv);
        return Ok(if neg { base - frac } else { base + frac });
    }
    let v: i64 = s
        .parse()
        .map_err(|_| TfError::Parse(format!("bad rational `{s}`")))?;
    Ok(Rational64::from_integer(v))
}

/// Hölder conjugate: 1/p + 1/p′ = 1, with 1′ = ∞ and ∞′ = 1.
pub fn conjugate(p: ExtExp) -> ExtExp {
    match p {
        ExtExp::Inf => ExtExp::Finite(Rational64::one()),
        ExtExp::Finite(r) => {
            if r == Rational64::one() {
                ExtExp::Inf
            } else {
                // p/(p-1), exactly.
                ExtExp::Finite(r / (r - Rational64::one()))
            }
        }
    }
}

/// Young functional ℛ(p) = 2 − 1/p0 − 1/p1 − 1/p2, exact.
pub fn young_functional(p0: ExtExp, p1: ExtExp, p2: ExtExp) -> Rational64 {
    Rational64::from_integer(2) - p0.recip() - p1.recip() - p2.recip()
}

/// Parameters of the convolution theorem: exponent triples and exact weight
/// powers, with the dimension entering the weighted condition.
#[derive(Clone, Debug)]
pub struct ConvParams {
    /// Exponent triple (p0, p1, p2).
    pub p: [ExtExp; 3],
    /// Exponent triple (q0, q1, q2).
    pub q: [ExtExp; 3],
    /// Frequency-weight powers (s0, s1, s2).
    pub s: [Rational64; 3],
    /// Space-weight powers (t0, t1, t2).
    pub t: [Rational64; 3],
    /// Dimension d.
    pub d: i64,
}

/// One checked condition: its label, outcome, the two compared values, and
/// whether the comparison was strict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Condition {
    /// Condition label as quoted from the theorem.
    pub label: String,
    /// Whether the condition holds.
    pub satisfied: bool,
    /// Rendered left-hand side.
    pub lhs: String,
    /// Rendered right-hand side.
    pub rhs: String,
    /// Whether strict inequality was required.
    pub strict: bool,
}

/// Structured admissibility result for one theorem's hypotheses.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    /// Which theorem was checked.
    pub theorem: String,
    /// Conjunction of all condition outcomes.
    pub pass: bool,
    /// Per-condition diagnostics; never empty.
    pub conditions: Vec<Condition>,
}

impl Verdict {
    fn assemble(theorem: &str, conditions: Vec<Condition>) -> Verdict {
        let pass = conditions.iter().all(|c| c.satisfied);
        Verdict {
            theorem: theorem.to_string(),
            pass,
            conditions,
        }
    }

    /// The first failing condition label, if any.
    pub fn first_failure(&self) -> Option<&str> {
        self.conditions
            .iter()
            .find(|c| !c.satisfied)
            .map(|c| c.label.as_str())
    }
}

fn cond_le(label: &str, lhs: Rational64, rhs: Rational64, strict: bool) -> Condition {
    Condition {
        label: label.to_string(),
        satisfied: if strict { lhs < rhs } else { lhs <= rhs },
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        strict,
    }
}

fn cond_le_ext(label: &str, lhs: ExtExp, rhs: ExtExp, strict: bool) -> Condition {
    let ord = lhs.cmp_ext(&rhs);
    Condition {
        label: label.to_string(),
        satisfied: if strict {
            ord == std::cmp::Ordering::Less
        } else {
            ord != std::cmp::Ordering::Greater
        },
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        strict,
    }
}

/// Check the hypotheses of the weighted convolution theorem:
/// 0 ≤ ℛ(p) ≤ 1/2, ℛ(q) ≤ 1, 0 ≤ t_j + t_k (j ≠ k),
/// 0 ≤ t0 + t1 + t2 − d·ℛ(p) (strict when ℛ(p) > 0 and some t_j = d·ℛ(p)),
/// and 0 ≤ s0 + s1 + s2.
pub fn check_convolution_thm(cp: &ConvParams) -> Verdict {
    let rp = young_functional(cp.p[0], cp.p[1], cp.p[2]);
    let rq = young_functional(cp.q[0], cp.q[1], cp.q[2]);
    let zero = Rational64::zero();
    let mut conds = vec![
        cond_le("R(p) >= 0", zero, rp, false),
        cond_le("R(p) <= 1/2", rp, Rational64::new(1, 2), false),
        cond_le("R(q) <= 1", rq, Rational64::one(), false),
    ];
    for (j, k) in [(0usize, 1usize), (0, 2), (1, 2)] {
        conds.push(cond_le(
            &format!("lastineq2A: 0 <= t{j} + t{k}"),
            zero,
            cp.t[j] + cp.t[k],
            false,
        ));
    }
    let tsum = cp.t[0] + cp.t[1] + cp.t[2];
    let drp = Rational64::from_integer(cp.d) * rp;
    let strict_b = rp > zero && cp.t.iter().any(|tj| *tj == drp);
    conds.push(cond_le(
        "lastineq2B: 0 <= t0 + t1 + t2 - d*R(p)",
        zero,
        tsum - drp,
        strict_b,
    ));
    conds.push(cond_le(
        "lastineq2C: 0 <= s0 + s1 + s2",
        zero,
        cp.s[0] + cp.s[1] + cp.s[2],
        false,
    ));
    Verdict::assemble("convolution", conds)
}

/// Check the hypotheses of the cross-Wigner boundedness theorem:
/// p ≤ p_i, q_i ≤ q (i = 1, 2) and
/// min{1/p1 + 1/p2, 1/q1 + 1/q2} ≥ 1/p + 1/q.
pub fn check_wigner_thm(
    p1: ExtExp,
    q1: ExtExp,
    p2: ExtExp,
    q2: ExtExp,
    p: ExtExp,
    q: ExtExp,
) -> Verdict {
    let mut conds = vec![
        cond_le_ext("uslov1: p <= p1", p, p1, false),
        cond_le_ext("uslov1: p <= p2", p, p2, false),
        cond_le_ext("uslov1: q1 <= q", q1, q, false),
        cond_le_ext("uslov1: q2 <= q", q2, q, false),
    ];
    let lhs = (p1.recip() + p2.recip()).min(q1.recip() + q2.recip());
    conds.push(cond_le(
        "uslov2: 1/p + 1/q <= min{1/p1 + 1/p2, 1/q1 + 1/q2}",
        p.recip() + q.recip(),
        lhs,
        false,
    ));
    Verdict::assemble("wigner", conds)
}

/// Check the hypotheses of the extended Weyl boundedness theorem:
/// s ≥ 0, q ≤ min{p1′, q1′, p2, q2}, and
/// min{1/p1 + 1/p2′, 1/q1 + 1/q2′} ≥ 1/p′ + 1/q′.
#[allow(clippy::too_many_arguments)]
pub fn check_weyl_bound_thm(
    p1: ExtExp,
    q1: ExtExp,
    p2: ExtExp,
    q2: ExtExp,
    p: ExtExp,
    q: ExtExp,
    s: Rational64,
) -> Verdict {
    let mut conds = vec![cond_le("s >= 0", Rational64::zero(), s, false)];
    let m = conjugate(p1)
        .min_ext(conjugate(q1))
        .min_ext(p2)
        .min_ext(q2);
    conds.push(cond_le_ext(
        "uslov11: q <= min{p1', q1', p2, q2}",
        q,
        m,
        false,
    ));
    let lhs = (p1.recip() + conjugate(p2).recip()).min(q1.recip() + conjugate(q2).recip());
    conds.push(cond_le(
        "uslov22: 1/p' + 1/q' <= min{1/p1 + 1/p2', 1/q1 + 1/q2'}",
        conjugate(p).recip() + conjugate(q).recip(),
        lhs,
        false,
    ));
    Verdict::assemble("weyl", conds)
}

/// Parameters of the localization boundedness theorem.
#[derive(Clone, Debug)]
pub struct LocParams {
    /// Input modulation exponents (p1, q1).
    pub p1: ExtExp,
    /// Input modulation exponents (p1, q1).
    pub q1: ExtExp,
    /// Output modulation exponents (p2, q2).
    pub p2: ExtExp,
    /// Output modulation exponents (p2, q2).
    pub q2: ExtExp,
    /// Weyl-symbol exponents (p, q).
    pub p: ExtExp,
    /// Weyl-symbol exponents (p, q).
    pub q: ExtExp,
    /// Localization-symbol exponents (p0, q0).
    pub p0: ExtExp,
    /// Localization-symbol exponents (p0, q0).
    pub q0: ExtExp,
    /// Window exponents (r1, r2).
    pub r1: ExtExp,
    /// Window exponents (r1, r2).
    pub r2: ExtExp,
    /// Weyl-symbol frequency weight s.
    pub s: Rational64,
    /// Localization-symbol frequency weight s0.
    pub s0: Rational64,
    /// Localization-symbol space weight t0.
    pub t0: Rational64,
    /// Dimension d.
    pub d: i64,
    /// Whether the strict inequality t0 > d(1/p − 1/p0) is enforced at
    /// p0 = p, following the theorem statement literally. Turning it off
    /// reproduces the theorem's own linear recovery case (p0 = p, t0 = 0).
    pub strict_at_equality: bool,
}

/// Check the hypotheses of the localization boundedness theorem, composing
/// the extended Weyl check with the window and symbol-transfer conditions:
/// q0 ≤ q; p0 ≥ p with p0 ≤ 2p/(2−p) when p < 2; 1/r1 + 1/r2 ≥ 1;
/// s0 ≥ −s; and t0 ≥ d(1/p − 1/p0), strict when p0 = p.
pub fn check_localization_thm(lp: &LocParams) -> Verdict {
    let weyl = check_weyl_bound_thm(lp.p1, lp.q1, lp.p2, lp.q2, lp.p, lp.q, lp.s);
    let mut conds = weyl.conditions;
    conds.push(cond_le_ext("q0 <= q", lp.q0, lp.q, false));
    conds.push(cond_le_ext("p0 uslov: p <= p0", lp.p, lp.p0, false));
    // Upper branch: 2p/(2-p) for 1 <= p < 2, taken as inf for p >= 2 (the
    // limit convention keeps the two branches consistent at the seam).
    let two = Rational64::from_integer(2);
    let upper = match lp.p {
        ExtExp::Finite(r) if r < two => ExtExp::Finite((two * r) / (two - r)),
        _ => ExtExp::Inf,
    };
    conds.push(cond_le_ext("p0 uslov: p0 <= 2p/(2-p)", lp.p0, upper, false));
    conds.push(cond_le(
        "window: 1 <= 1/r1 + 1/r2",
        Rational64::one(),
        lp.r1.recip() + lp.r2.recip(),
        false,
    ));
    conds.push(cond_le("s0 >= -s", -lp.s, lp.s0, false));
    let gap = Rational64::from_integer(lp.d) * (lp.p.recip() - lp.p0.recip());
    let strict = lp.strict_at_equality && lp.p0 == lp.p;
    conds.push(cond_le("t0 >= d(1/p - 1/p0)", gap, lp.t0, strict));
    Verdict::assemble("localization", conds)
}

/// Human-readable per-condition report.
pub fn explain(v: &Verdict) -> String {
    let mut out = format!(
        "theorem `{}`: {}\n",
        v.theorem,
        if v.pass { "PASS" } else { "FAIL" }
    );
    for c in &v.conditions {
        let rel = if c.strict { "strictly" } else { "" };
        out.push_str(&format!(
            "  [{}] {} (lhs = {}, rhs = {} {})\n",
            if c.satisfied { "ok" } else { "violated" },
            c.label,
            c.lhs,
            c.rhs,
            rel
        ));
    }
    out
}
