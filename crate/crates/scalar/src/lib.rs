//! Exact scalar arithmetic for the engine: arbitrary-precision rationals and
//! Laurent polynomials in the formal variable `q`.
//!
//! The Laurent layer carries the quantum integers `[a]`, quantum factorials
//! `[a]!`, the bar involution `q ↦ q⁻¹`, and exact division (used for
//! q-binomials and divided-power integrality checks).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Exact rational scalar: always reduced, denominator positive.
pub type Q = BigRational;

/// Construct a rational from an integer.
pub fn q_int(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Construct a rational `n/d`.
pub fn q_ratio(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Errors raised by scalar operations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("negative argument to quantum_factorial: {0}")]
    NegativeFactorial(i64),
    #[error("exponent overflow in Laurent arithmetic")]
    ExponentOverflow,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Laurent polynomial in `q` with rational coefficients.
///
/// Invariant: no stored zero coefficients. Exponents are bounded machine
/// integers; overflow is reported as an error, never wrapped.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentQ {
    terms: BTreeMap<i64, Q>,
}

impl LaurentQ {
    pub fn zero() -> Self {
        LaurentQ { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, Q::one())
    }

    /// The monomial `c·q^k` (normalised away if `c = 0`).
    pub fn monomial(k: i64, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentQ { terms }
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::monomial(k, Q::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(0, q_int(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^k` (zero if absent).
    pub fn coeff(&self, k: i64) -> Q {
        self.terms.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    /// Iterate `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Smallest and largest exponents, if nonzero.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().next()?;
        let hi = self.terms.keys().next_back()?;
        Some((*lo, *hi))
    }

    fn insert_add(&mut self, k: i64, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentQ::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let k = k1
                    .checked_add(*k2)
                    .unwrap_or_else(|| panic!("{}", ScalarError::ExponentOverflow));
                out.insert_add(k, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return LaurentQ::zero();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c.clone();
        }
        out
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = LaurentQ::zero();
        for (e, c) in &self.terms {
            let ke = e
                .checked_add(k)
                .unwrap_or_else(|| panic!("{}", ScalarError::ExponentOverflow));
            out.terms.insert(ke, c.clone());
        }
        out
    }

    /// Bar involution: substitute `q ↦ q⁻¹`.
    pub fn bar(&self) -> Self {
        let mut out = LaurentQ::zero();
        for (e, c) in &self.terms {
            out.terms.insert(-e, c.clone());
        }
        out
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Exact division: returns `Some(self / d)` when the division has no
    /// remainder, `None` otherwise.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentQ::zero());
        }
        let (d_lo, d_hi) = d.support().unwrap();
        let (s_lo, _) = self.support().unwrap();
        // Any exact quotient has exponents in [s_lo − d_lo, s_hi − d_hi];
        // dipping below the floor proves the division inexact (exponents are
        // unbounded below, so this is also the termination guarantee).
        let k_floor = s_lo - d_lo;
        let d_lead = d.coeff(d_hi);
        let mut rem = self.clone();
        let mut quot = LaurentQ::zero();
        while !rem.is_zero() {
            let (_, r_hi) = rem.support().unwrap();
            let k = r_hi - d_hi;
            if k < k_floor {
                return None;
            }
            let c = rem.coeff(r_hi) / d_lead.clone();
            let t = LaurentQ::monomial(k, c);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(d));
        }
        Some(quot)
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// True when every coefficient is a nonnegative integer.
    pub fn has_nonneg_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer() && !c.is_negative())
    }

    /// Evaluate at `q = 1` (the classical limit).
    pub fn eval_at_one(&self) -> Q {
        let mut s = Q::zero();
        for c in self.terms.values() {
            s += c.clone();
        }
        s
    }
}

/// Quantum integer `[a] = (q^a − q^−a)/(q − q^−1)`; `[0] = 0`, `[−a] = −[a]`.
pub fn quantum_int(a: i64) -> LaurentQ {
    let n = a.unsigned_abs() as i64;
    let mut out = LaurentQ::zero();
    for k in 0..n {
        out.insert_add(n - 1 - 2 * k, Q::one());
    }
    if a < 0 {
        out = out.neg();
    }
    out
}

/// Quantum factorial `[a]! = [1][2]⋯[a]`; `[0]! = 1`. Negative input is an error.
pub fn quantum_factorial(a: i64) -> Result<LaurentQ, ScalarError> {
    if a < 0 {
        return Err(ScalarError::NegativeFactorial(a));
    }
    let mut out = LaurentQ::one();
    for k in 1..=a {
        out = out.mul(&quantum_int(k));
    }
    Ok(out)
}

/// Quantum binomial `[n choose k] = [n]! / ([k]!·[n−k]!)` by exact division.
pub fn quantum_binomial(n: i64, k: i64) -> Option<LaurentQ> {
    if k < 0 || k > n {
        return Some(LaurentQ::zero());
    }
    let num = quantum_factorial(n).ok()?;
    let den = quantum_factorial(k).ok()?.mul(&quantum_factorial(n - k).ok()?);
    num.div_exact(&den)
}

/// Bar involution as a free function (mirrors the method).
pub fn bar(x: &LaurentQ) -> LaurentQ {
    x.bar()
}

fn fmt_q_coeff(c: &Q) -> String {
    if c.is_integer() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for LaurentQ {
    /// Renders as `c_k*q^k + ...` with exponents strictly descending, e.g.
    /// `q^2 + 1 + q^-2` or `-3/2*q + 2`. Zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_str = fmt_q_coeff(&mag);
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{coeff_str}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{coeff_str}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{coeff_str}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for LaurentQ {
    type Err = ScalarError;

    /// Parses the `Display` format losslessly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ScalarError::Parse("empty input".into()));
        }
        if s == "0" {
            return Ok(LaurentQ::zero());
        }
        // Split into signed terms on top-level " + " / " - ", allowing a leading "-".
        let mut out = LaurentQ::zero();
        let mut rest = s;
        let mut sign = Q::one();
        if let Some(r) = rest.strip_prefix('-') {
            sign = -Q::one();
            rest = r.trim_start();
        }
        loop {
            let (term, tail, next_sign) = match (rest.find(" + "), rest.find(" - ")) {
                (Some(p), Some(m)) if p < m => (&rest[..p], &rest[p + 3..], Q::one()),
                (Some(_), Some(m)) => (&rest[..m], &rest[m + 3..], -Q::one()),
                (Some(p), None) => (&rest[..p], &rest[p + 3..], Q::one()),
                (None, Some(m)) => (&rest[..m], &rest[m + 3..], -Q::one()),
                (None, None) => (rest, "", Q::one()),
            };
            let (k, c) = parse_term(term.trim())?;
            out.insert_add(k, c * sign.clone());
            if tail.is_empty() {
                break;
            }
            rest = tail;
            sign = next_sign;
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Result<Q, ScalarError> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, ScalarError> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| ScalarError::Parse(format!("bad integer {t:?}: {e}")))
    };
    if let Some((n, d)) = s.split_once('/') {
        let d = parse_int(d)?;
        if d.is_zero() {
            return Err(ScalarError::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(parse_int(n)?, d))
    } else {
        Ok(BigRational::from_integer(parse_int(s)?))
    }
}

fn parse_term(term: &str) -> Result<(i64, Q), ScalarError> {
    // Forms: "c", "q", "q^k", "c*q", "c*q^k" with c an integer or n/d.
    let (coeff_str, q_str) = match term.split_once('*') {
        Some((c, rest)) => (Some(c), Some(rest.trim())),
        None => {
            if term.starts_with('q') {
                (None, Some(term))
            } else {
                (Some(term), None)
            }
        }
    };
    let c = match coeff_str {
        Some(cs) => parse_rational(cs)?,
        None => Q::one(),
    };
    let k = match q_str {
        None => 0,
        Some("q") => 1,
        Some(qs) => {
            let body = qs
                .strip_prefix("q^")
                .ok_or_else(|| ScalarError::Parse(format!("bad q-power {qs:?}")))?;
            body.parse::<i64>()
                .map_err(|e| ScalarError::Parse(format!("bad exponent {body:?}: {e}")))?
        }
    };
    Ok((k, c))
}
