//! Demazure (divided-difference) operators on `k[t_1..t_m]` and the three
//! graded Frobenius extensions used throughout the calculus:
//!
//! - `SplitLeft [b,a]` — the extension `k[t_a] ⊗ Λ_{[a+1,b]}` over `Λ_{[a,b]}`,
//!   with form values `t_a^k ↦ h_{k−b+a,[a,b]}`;
//! - `SplitRight [a,b]` — the extension `Λ_{[a,b−1]} ⊗ k[t_b]` over `Λ_{[a,b]}`,
//!   with form values `t_b^k ↦ h_{k−b+a,[a,b]}`;
//! - `JBlock [1,a]` — the extension `Λ^ȷ_{[1,a−1]} ⊗ k[t_a]` over `Λ^ȷ_{[1,a]}`
//!   (invariants of the signed-permutation group in squared variables), with
//!   form values `t_a^k ↦ h^ȷ_{(k−1)/2−a+1,[1,a]}` (zero for even `k`).
//!
//! Each pair carries a distinguished free basis, the dual basis with respect
//! to the form, the grading shift, and a Casimir element satisfying the counit
//! identity `(form ⊗ 1)(π) = (1 ⊗ form)(π) = 1`.

use polyring::{act, Poly, WeylElement};
use symfun::{elem, elem_j, Interval};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DemazureError {
    #[error("polynomial is not invariant under generator s{generator} required by the {role} ring")]
    NotInvariant { generator: usize, role: &'static str },
    #[error("invalid Frobenius parameters: {0}")]
    BadParameters(String),
}

/// Simple-reflection Demazure operator `∂_s(f) = (f − s(f)) / α_s^∨`, with
/// `α_{s_0}^∨ = −2t_1` and `α_{s_p}^∨ = t_p − t_{p+1}` for `p ≥ 1`.
pub fn demazure_simple(s: usize, f: &Poly) -> Poly {
    let m = f.num_vars();
    assert!(s < m, "generator s{s} needs at least {} variables", s + 1);
    let refl = WeylElement::simple(s, m);
    let diff = f.sub(&act(&refl, f));
    if diff.is_zero() {
        return Poly::zero(m);
    }
    let coroot = if s == 0 {
        Poly::var(m, 1).scale(&scalar::q_int(-2))
    } else {
        Poly::var(m, s).sub(&Poly::var(m, s + 1))
    };
    diff.div_exact(&coroot)
        .expect("numerator f - s(f) is always divisible by the coroot")
}

/// Composite `∂_{s_{i_1}} ∂_{s_{i_2}} ⋯` for a word written left-to-right:
/// the rightmost letter acts first.
pub fn demazure_word(word: &[usize], f: &Poly) -> Poly {
    let mut out = f.clone();
    for &s in word.iter().rev() {
        out = demazure_simple(s, &out);
    }
    out
}

/// Which of the three Frobenius extensions a pair is, with its block data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrobeniusKind {
    /// `[b,a]` with `a ≤ b`: free variable `t_a` on the left of block `[a,b]`.
    SplitLeft { b: usize, a: usize },
    /// `[a,b]` with `a ≤ b`: free variable `t_b` on the right of block `[a,b]`.
    SplitRight { a: usize, b: usize },
    /// `[1,a]`: free variable `t_a` atop the signed block `[1,a]`.
    JBlock { a: usize },
}

/// A graded Frobenius extension with its distinguished basis data.
#[derive(Clone, Debug)]
pub struct FrobeniusPair {
    pub kind: FrobeniusKind,
    pub num_vars: usize,
    pub rank: usize,
    /// Free basis over the base ring: powers of the moving variable.
    pub basis: Vec<Poly>,
    /// Dual basis with respect to the form: `form(basis_k · dual_basis_l) = δ_{k,l}`.
    pub dual_basis: Vec<Poly>,
    /// Grading shift of the form (degree drop of `frobenius_apply`).
    pub shift: i64,
}

impl FrobeniusPair {
    pub fn split_left(b: usize, a: usize, m: usize) -> Result<Self, DemazureError> {
        if !(1 <= a && a <= b && b <= m) {
            return Err(DemazureError::BadParameters(format!(
                "SplitLeft[{b},{a}] needs 1 <= a <= b <= m (m = {m})"
            )));
        }
        let n = b - a;
        let basis: Vec<Poly> = (0..=n).map(|k| Poly::var_pow(m, a, k as u32)).collect();
        let dual_basis: Vec<Poly> = (0..=n)
            .map(|k| {
                let r = (n - k) as i64;
                let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
                elem(r, Interval::new(a + 1, b), m).scale(&scalar::q_int(sign))
            })
            .collect();
        Ok(FrobeniusPair {
            kind: FrobeniusKind::SplitLeft { b, a },
            num_vars: m,
            rank: n + 1,
            basis,
            dual_basis,
            shift: -2 * (n as i64),
        })
    }

    pub fn split_right(a: usize, b: usize, m: usize) -> Result<Self, DemazureError> {
        if !(1 <= a && a <= b && b <= m) {
            return Err(DemazureError::BadParameters(format!(
                "SplitRight[{a},{b}] needs 1 <= a <= b <= m (m = {m})"
            )));
        }
        let n = b - a;
        let basis: Vec<Poly> = (0..=n).map(|k| Poly::var_pow(m, b, k as u32)).collect();
        let dual_basis: Vec<Poly> = (0..=n)
            .map(|k| {
                let r = (n - k) as i64;
                let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
                elem(r, Interval::new(a, b - 1), m).scale(&scalar::q_int(sign))
            })
            .collect();
        Ok(FrobeniusPair {
            kind: FrobeniusKind::SplitRight { a, b },
            num_vars: m,
            rank: n + 1,
            basis,
            dual_basis,
            shift: -2 * (n as i64),
        })
    }

    pub fn j_block(a: usize, m: usize) -> Result<Self, DemazureError> {
        if !(1 <= a && a <= m) {
            return Err(DemazureError::BadParameters(format!(
                "JBlock[1,{a}] needs 1 <= a <= m (m = {m})"
            )));
        }
        let basis: Vec<Poly> = (0..2 * a).map(|k| Poly::var_pow(m, a, k as u32)).collect();
        let dual_basis: Vec<Poly> = (0..2 * a)
            .map(|k| {
                // Pairing read off the Casimir element
                // (t_a⊗1 + 1⊗t_a) Σ_{r=0}^{a−1} t_a^{2(a−1−r)} ⊗ (−1)^r e^ȷ_{r,[1,a−1]}.
                let r = a - 1 - k / 2;
                let sign = if r % 2 == 0 { 1 } else { -1 };
                let e = elem_j(r as i64, Interval::new(1, a - 1), m)
                    .scale(&scalar::q_int(sign));
                if k % 2 == 0 {
                    e.mul(&Poly::var(m, a))
                } else {
                    e
                }
            })
            .collect();
        Ok(FrobeniusPair {
            kind: FrobeniusKind::JBlock { a },
            num_vars: m,
            rank: 2 * a,
            basis,
            dual_basis,
            shift: -2 * (2 * a as i64 - 1),
        })
    }

    /// The 1-based index of the moving variable (whose powers form the basis).
    pub fn moving_var(&self) -> usize {
        match self.kind {
            FrobeniusKind::SplitLeft { a, .. } => a,
            FrobeniusKind::SplitRight { b, .. } => b,
            FrobeniusKind::JBlock { a } => a,
        }
    }

    /// Generators under which source-ring elements must be invariant.
    pub fn source_gens(&self) -> Vec<usize> {
        match self.kind {
            FrobeniusKind::SplitLeft { b, a } => (a + 1..b).collect(),
            FrobeniusKind::SplitRight { a, b } => (a..b.saturating_sub(1)).collect(),
            FrobeniusKind::JBlock { a } => (0..a.saturating_sub(1)).collect(),
        }
    }

    /// Generators under which base-ring elements must be invariant.
    pub fn base_gens(&self) -> Vec<usize> {
        match self.kind {
            FrobeniusKind::SplitLeft { b, a } | FrobeniusKind::SplitRight { a, b } => {
                (a..b).collect()
            }
            FrobeniusKind::JBlock { a } => (0..a).collect(),
        }
    }

    /// The word of simple reflections realizing the form, rightmost first.
    fn word(&self) -> Vec<usize> {
        match self.kind {
            // Apply ∂_{s_a} first, end with ∂_{s_{b−1}}.
            FrobeniusKind::SplitLeft { b, a } => (a..b).rev().collect(),
            // Apply ∂_{s_{b−1}} first, end with ∂_{s_a}.
            FrobeniusKind::SplitRight { a, b } => (a..b).collect(),
            // Palindrome s_{a−1} ⋯ s_1 s_0 s_1 ⋯ s_{a−1}.
            FrobeniusKind::JBlock { a } => {
                let mut w: Vec<usize> = (1..a).rev().collect();
                w.push(0);
                w.extend(1..a);
                w
            }
        }
    }

    /// Overall sign relating the form to the plain word composite.
    fn word_sign(&self) -> i64 {
        match self.kind {
            FrobeniusKind::SplitLeft { .. } => 1,
            FrobeniusKind::SplitRight { a, b } => {
                if (b - a) % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            FrobeniusKind::JBlock { .. } => -1,
        }
    }
}

fn check_invariance(
    f: &Poly,
    gens: &[usize],
    role: &'static str,
) -> Result<(), DemazureError> {
    let m = f.num_vars();
    for &g in gens {
        let refl = WeylElement::simple(g, m);
        if act(&refl, f) != *f {
            return Err(DemazureError::NotInvariant { generator: g, role });
        }
    }
    Ok(())
}

/// Apply the Frobenius form of `pair` to `f`. `f` must be invariant under the
/// source-ring generators (variables outside the block are spectators).
pub fn frobenius_apply(pair: &FrobeniusPair, f: &Poly) -> Result<Poly, DemazureError> {
    assert_eq!(f.num_vars(), pair.num_vars, "variable count mismatch");
    check_invariance(f, &pair.source_gens(), "source")?;
    Ok(form_value(pair, f))
}

/// The signed word composite realizing the form, applied with no invariance
/// checks. All reflections of the word fix any variable outside the pair's
/// block, so this is the correct form value even when `f` carries extra free
/// variables from a finer ring.
pub fn form_value(pair: &FrobeniusPair, f: &Poly) -> Poly {
    assert_eq!(f.num_vars(), pair.num_vars, "variable count mismatch");
    let raw = demazure_word(&pair.word(), f);
    raw.scale(&scalar::q_int(pair.word_sign()))
}

/// Expansion coefficients `coeff_k = form(f · dual_k)` with no membership
/// checks on `f` or the outputs. Used when `f` lives in a finer ring than the
/// pair's source: the coefficients then land one refinement step down rather
/// than in the pair's base ring.
pub fn expand_raw(pair: &FrobeniusPair, f: &Poly) -> Vec<(usize, Poly)> {
    assert_eq!(f.num_vars(), pair.num_vars, "variable count mismatch");
    let mut out = Vec::new();
    for (k, dual) in pair.dual_basis.iter().enumerate() {
        let coeff = form_value(pair, &f.mul(dual));
        if !coeff.is_zero() {
            out.push((k, coeff));
        }
    }
    out
}

/// The Casimir element `π = Σ_k basis_k ⊗ dual_k` as a list of tensor factors.
pub fn casimir(pair: &FrobeniusPair) -> Vec<(Poly, Poly)> {
    pair.basis
        .iter()
        .cloned()
        .zip(pair.dual_basis.iter().cloned())
        .collect()
}

/// Expand `f = Σ basis_k · coeff_k` with base-ring coefficients
/// `coeff_k = form(f · dual_k)`. Returns the nonzero `(k, coeff_k)` pairs.
pub fn expand_in_basis(
    pair: &FrobeniusPair,
    f: &Poly,
) -> Result<Vec<(usize, Poly)>, DemazureError> {
    assert_eq!(f.num_vars(), pair.num_vars, "variable count mismatch");
    check_invariance(f, &pair.source_gens(), "source")?;
    let mut out = Vec::new();
    for (k, dual) in pair.dual_basis.iter().enumerate() {
        let coeff = frobenius_apply(pair, &f.mul(dual))?;
        if coeff.is_zero() {
            continue;
        }
        check_invariance(&coeff, &pair.base_gens(), "base")?;
        out.push((k, coeff));
    }
    Ok(out)
}
