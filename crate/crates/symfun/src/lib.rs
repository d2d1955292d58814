//! Elementary and complete symmetric polynomials over a block of consecutive
//! variables, together with their squared-variable variants.
//!
//! Conventions:
//! - `e_p = 0` for `p < 0` or `p > |I|`, and `e_0 = 1`.
//! - `h_p = 0` for `p < 0`, and `h_0 = 1`; `h_p` is computed via the
//!   alternating convolution with `e` (the Euler identity) rather than by
//!   monomial enumeration.
//! - Squared-variable versions substitute `t_i^2` for `t_i`; the complete kind
//!   additionally accepts a rational index and vanishes unless the index is a
//!   nonnegative integer.

use num::{Signed, ToPrimitive};
use polyring::Poly;
use scalar::Q;

/// Closed interval `[lo, hi]` of 1-based variable indices. `lo > hi` encodes
/// the empty block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        Interval { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    /// The variables of the block, as 1-based indices.
    pub fn vars(&self) -> Vec<usize> {
        if self.is_empty() {
            Vec::new()
        } else {
            (self.lo..=self.hi).collect()
        }
    }
}

/// e_p of an arbitrary list of (polynomial) arguments.
fn elem_of(args: &[Poly], p: i64, m: usize) -> Poly {
    if p < 0 || p as usize > args.len() {
        return Poly::zero(m);
    }
    let p = p as usize;
    // dp[j] = e_j of the prefix processed so far.
    let mut dp: Vec<Poly> = Vec::with_capacity(p + 1);
    dp.push(Poly::one(m));
    for _ in 0..p {
        dp.push(Poly::zero(m));
    }
    for x in args {
        for j in (1..=p).rev() {
            let add = dp[j - 1].mul(x);
            dp[j] = dp[j].add(&add);
        }
    }
    dp.pop().unwrap()
}

/// h_p of an arbitrary list of arguments, via h_k = Σ_{j≥1} (−1)^{j+1} e_j h_{k−j}.
fn complete_of(args: &[Poly], p: i64, m: usize) -> Poly {
    if p < 0 {
        return Poly::zero(m);
    }
    let p = p as usize;
    let n = args.len();
    let elems: Vec<Poly> = (0..=n.min(p)).map(|j| elem_of(args, j as i64, m)).collect();
    let mut h: Vec<Poly> = Vec::with_capacity(p + 1);
    h.push(Poly::one(m));
    for k in 1..=p {
        let mut acc = Poly::zero(m);
        for j in 1..=k.min(n) {
            let term = elems[j].mul(&h[k - j]);
            if j % 2 == 1 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        h.push(acc);
    }
    h.pop().unwrap()
}

fn block_vars(i: Interval, m: usize, squared: bool) -> Vec<Poly> {
    i.vars()
        .into_iter()
        .map(|v| {
            assert!(v >= 1 && v <= m, "variable t{v} outside ring with {m} variables");
            if squared {
                Poly::var_pow(m, v, 2)
            } else {
                Poly::var(m, v)
            }
        })
        .collect()
}

/// Elementary symmetric polynomial `e_p(t_i : i ∈ I)` in a ring with `m` variables.
pub fn elem(p: i64, i: Interval, m: usize) -> Poly {
    elem_of(&block_vars(i, m, false), p, m)
}

/// Complete homogeneous symmetric polynomial `h_p(t_i : i ∈ I)`.
pub fn complete(p: i64, i: Interval, m: usize) -> Poly {
    complete_of(&block_vars(i, m, false), p, m)
}

/// Squared-variable elementary symmetric polynomial `e_p(t_i^2 : i ∈ I)`.
pub fn elem_j(p: i64, i: Interval, m: usize) -> Poly {
    elem_of(&block_vars(i, m, true), p, m)
}

/// Squared-variable complete symmetric polynomial with a rational index:
/// zero unless the index is a nonnegative integer.
pub fn complete_j(p: &Q, i: Interval, m: usize) -> Poly {
    if !p.is_integer() || p.is_negative() {
        return Poly::zero(m);
    }
    let p_int = match rational_to_i64(p) {
        Some(v) => v,
        None => return Poly::zero(m),
    };
    complete_of(&block_vars(i, m, true), p_int, m)
}

/// Integer-index convenience wrapper for [`complete_j`].
pub fn complete_j_int(p: i64, i: Interval, m: usize) -> Poly {
    if p < 0 {
        return Poly::zero(m);
    }
    complete_of(&block_vars(i, m, true), p, m)
}

fn rational_to_i64(p: &Q) -> Option<i64> {
    if !p.is_integer() {
        return None;
    }
    p.numer().to_i64()
}
