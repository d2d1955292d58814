//! Sparse multivariate polynomials in `t1..tm` over exact rationals, graded
//! with `deg tᵢ = 2`, together with the signed-permutation (hyperoctahedral)
//! group action: `s₀` negates `t₁`, `sₚ` (p ≥ 1) swaps `tₚ` and `tₚ₊₁`.

use num::traits::{One, Signed, Zero};
use scalar::Q;
use std::collections::BTreeMap;
use std::fmt;

/// Errors raised by polynomial operations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable-count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("zero polynomial has no degree")]
    ZeroDegree,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Homogeneity report for `Poly::degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Homogeneous(i64),
    Heterogeneous,
}

/// Sparse multivariate polynomial. Invariants: no stored zero coefficients;
/// every exponent vector has length `num_vars`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(num_vars: usize) -> Self {
        Poly { num_vars, terms: BTreeMap::new() }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Q::one())
    }

    pub fn constant(num_vars: usize, c: Q) -> Self {
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; num_vars], c);
        }
        p
    }

    pub fn from_int(num_vars: usize, n: i64) -> Self {
        Self::constant(num_vars, scalar::q_int(n))
    }

    /// The variable `t_i` (1-based `i`).
    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= num_vars, "variable index {i} out of range 1..={num_vars}");
        let mut e = vec![0; num_vars];
        e[i - 1] = 1;
        Self::monomial(num_vars, e, Q::one())
    }

    /// `t_i^k`.
    pub fn var_pow(num_vars: usize, i: usize, k: u32) -> Self {
        assert!(i >= 1 && i <= num_vars, "variable index {i} out of range 1..={num_vars}");
        let mut e = vec![0; num_vars];
        e[i - 1] = k;
        Self::monomial(num_vars, e, Q::one())
    }

    pub fn monomial(num_vars: usize, exps: Vec<u32>, c: Q) -> Self {
        assert_eq!(exps.len(), num_vars);
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.num_vars])
                .is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.num_vars])
    }

    fn insert_add(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
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
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = Self::zero(self.num_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_add(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c.clone();
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.num_vars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Degree with the convention `deg tᵢ = 2`.
    pub fn degree(&self) -> Result<Degree, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroDegree);
        }
        let mut degs = self
            .terms
            .keys()
            .map(|e| 2 * e.iter().map(|&x| x as i64).sum::<i64>());
        let first = degs.next().unwrap();
        if degs.all(|d| d == first) {
            Ok(Degree::Homogeneous(first))
        } else {
            Ok(Degree::Heterogeneous)
        }
    }

    /// Lex-leading term (largest exponent vector in lexicographic order).
    fn leading(&self) -> Option<(&Vec<u32>, &Q)> {
        self.terms.iter().next_back()
    }

    /// Exact division: `Some(self / d)` when the remainder is zero, else `None`.
    ///
    /// Single-divisor long division in lexicographic order; for genuine
    /// multiples this always succeeds because lex leading terms multiply.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.num_vars, d.num_vars);
        if d.is_zero() {
            return None;
        }
        let (d_lead_e, d_lead_c) = d.leading().unwrap();
        let d_lead_e = d_lead_e.clone();
        let d_lead_c = d_lead_c.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.num_vars);
        while !rem.is_zero() {
            let (r_e, r_c) = rem.leading().unwrap();
            let mut q_e = Vec::with_capacity(self.num_vars);
            for (a, b) in r_e.iter().zip(&d_lead_e) {
                if a < b {
                    return None;
                }
                q_e.push(a - b);
            }
            let t = Self::monomial(self.num_vars, q_e, r_c / &d_lead_c);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(d));
        }
        Some(quot)
    }

    /// Substitute numeric values for every variable (handy in tests).
    pub fn eval(&self, vals: &[Q]) -> Q {
        assert_eq!(vals.len(), self.num_vars);
        let mut total = Q::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in vals.iter().zip(e) {
                for _ in 0..k {
                    m *= x.clone();
                }
            }
            total += m;
        }
        total
    }

    /// Reinterpret in a larger variable set (new variables unused).
    pub fn extend_vars(&self, new_num_vars: usize) -> Self {
        assert!(new_num_vars >= self.num_vars);
        let mut out = Self::zero(new_num_vars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.resize(new_num_vars, 0);
            out.terms.insert(e2, c.clone());
        }
        out
    }
}

/// Signed permutation: `w(tᵢ) = signs[i] · t_{perm[i]}` (0-based storage).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct WeylElement {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(m: usize) -> Self {
        WeylElement { perm: (0..m).collect(), signs: vec![1; m] }
    }

    /// Simple reflection `s_p` on `m` variables: `s₀` negates `t₁`; `s_p`
    /// (1 ≤ p ≤ m−1) swaps `t_p` and `t_{p+1}`.
    pub fn simple(p: usize, m: usize) -> Self {
        assert!(p < m, "simple reflection index {p} out of range for m = {m}");
        let mut w = Self::identity(m);
        if p == 0 {
            w.signs[0] = -1;
        } else {
            w.perm.swap(p - 1, p);
        }
        w
    }

    pub fn num_vars(&self) -> usize {
        self.perm.len()
    }

    /// Composition `u ∘ v` (first `v`, then `u`).
    pub fn compose(u: &Self, v: &Self) -> Self {
        assert_eq!(u.perm.len(), v.perm.len());
        let m = u.perm.len();
        let mut perm = vec![0; m];
        let mut signs = vec![1i8; m];
        for i in 0..m {
            perm[i] = u.perm[v.perm[i]];
            signs[i] = v.signs[i] * u.signs[v.perm[i]];
        }
        WeylElement { perm, signs }
    }

    /// Product of simple reflections, applied right-to-left: `word = [p₁,…,p_k]`
    /// yields `s_{p₁}∘…∘s_{p_k}`.
    pub fn from_word(word: &[usize], m: usize) -> Self {
        let mut w = Self::identity(m);
        for &p in word.iter().rev() {
            w = Self::compose(&Self::simple(p, m), &w);
        }
        w
    }

    pub fn inverse(&self) -> Self {
        let m = self.perm.len();
        let mut perm = vec![0; m];
        let mut signs = vec![1i8; m];
        for i in 0..m {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        WeylElement { perm, signs }
    }

    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|&s| s == 1) && self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Apply a signed permutation to a polynomial: `tᵢ ↦ signs[i]·t_{perm[i]}`.
pub fn act(w: &WeylElement, f: &Poly) -> Poly {
    assert_eq!(
        w.num_vars(),
        f.num_vars(),
        "variable-count mismatch between group element and polynomial"
    );
    let m = f.num_vars();
    let mut out = Poly::zero(m);
    for (e, c) in f.iter() {
        let mut e2 = vec![0u32; m];
        let mut sign = 1i64;
        for i in 0..m {
            e2[w.perm[i]] += e[i];
            if w.signs[i] < 0 && e[i] % 2 == 1 {
                sign = -sign;
            }
        }
        out.insert_add(e2, c * scalar::q_int(sign));
    }
    out
}

/// True iff `f` is fixed by every listed simple reflection.
pub fn is_invariant(f: &Poly, gens: &[usize]) -> bool {
    gens.iter()
        .all(|&p| act(&WeylElement::simple(p, f.num_vars()), f) == *f)
}

impl fmt::Display for Poly {
    /// Renders like `3/2*t1^2*t3 - t2` with terms in descending lexicographic
    /// order of exponent vectors; zero renders as `0`.
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
            let mut factors: Vec<String> = Vec::new();
            let coeff_needed = !mag.is_one() || e.iter().all(|&x| x == 0);
            if coeff_needed {
                if mag.is_integer() {
                    factors.push(format!("{}", mag.numer()));
                } else {
                    factors.push(format!("{}/{}", mag.numer(), mag.denom()));
                }
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("t{}", i + 1)),
                    _ => factors.push(format!("t{}^{}", i + 1, k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parse the `Display` format. The variable count must be supplied because a
/// rendered polynomial does not mention unused trailing variables.
pub fn parse_poly(s: &str, num_vars: usize) -> Result<Poly, PolyError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(PolyError::Parse("empty input".into()));
    }
    if s == "0" {
        return Ok(Poly::zero(num_vars));
    }
    let mut out = Poly::zero(num_vars);
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
        let (e, c) = parse_poly_term(term.trim(), num_vars)?;
        out.insert_add(e, c * sign.clone());
        if tail.is_empty() {
            break;
        }
        rest = tail;
        sign = next_sign;
    }
    Ok(out)
}

fn parse_poly_term(term: &str, num_vars: usize) -> Result<(Vec<u32>, Q), PolyError> {
    let mut coeff = Q::one();
    let mut exps = vec![0u32; num_vars];
    for factor in term.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(PolyError::Parse(format!("empty factor in term {term:?}")));
        }
        if let Some(body) = factor.strip_prefix('t') {
            let (idx_str, pow) = match body.split_once('^') {
                Some((i, p)) => {
                    let pow = p
                        .parse::<u32>()
                        .map_err(|e| PolyError::Parse(format!("bad power {p:?}: {e}")))?;
                    (i, pow)
                }
                None => (body, 1),
            };
            let idx = idx_str
                .parse::<usize>()
                .map_err(|e| PolyError::Parse(format!("bad variable {factor:?}: {e}")))?;
            if idx < 1 || idx > num_vars {
                return Err(PolyError::Parse(format!(
                    "variable t{idx} out of range 1..={num_vars}"
                )));
            }
            exps[idx - 1] += pow;
        } else {
            // Rational coefficient.
            let c = if let Some((n, d)) = factor.split_once('/') {
                let n = n
                    .trim()
                    .parse::<num::BigInt>()
                    .map_err(|e| PolyError::Parse(format!("bad numerator {n:?}: {e}")))?;
                let d = d
                    .trim()
                    .parse::<num::BigInt>()
                    .map_err(|e| PolyError::Parse(format!("bad denominator {d:?}: {e}")))?;
                if d.is_zero() {
                    return Err(PolyError::Parse("zero denominator".into()));
                }
                Q::new(n, d)
            } else {
                let n = factor
                    .parse::<num::BigInt>()
                    .map_err(|e| PolyError::Parse(format!("bad coefficient {factor:?}: {e}")))?;
                Q::from_integer(n)
            };
            coeff *= c;
        }
    }
    Ok((exps, coeff))
}
