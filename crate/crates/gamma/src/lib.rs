//! Exact evaluation of string diagrams as operator matrices between the
//! polynomial bimodule realizations of words.
//!
//! The realization of a word is the free right module over the invariant
//! ring of its rightmost region, with basis tuples built from each slot's
//! local Frobenius pair (see [`flagcat`]). A diagram evaluates to an
//! [`OperatorMatrix`]: for each source basis tuple, the image element of the
//! target word, computed layer by layer through the atom formulas — dots
//! multiply by the slot's moving variable, same-label crossings apply a
//! divided-difference operator to the product of adjacent slots, opposite
//! caps apply local Frobenius forms, cups insert the dual-pair sum, and the
//! diamond-labelled clockwise cap and cup carry the factors 1/2 and 2.
//!
//! All arithmetic is exact rational; results are canonical
//! [`TensorElement`]s, so equality of evaluated 2-morphisms is decidable by
//! comparison.

use std::collections::BTreeMap;

use demazure::{casimir, demazure_simple, expand_raw, form_value, FrobeniusPair};
use diagram::{Atom, AtomKind, Diagram, DiagramError};
use flagcat::{
    local_frobenius, normalize, step, weight_of, FlagError, FlagObject, Label, SignedLabel,
    TensorElement, Word,
};
use polyring::{Degree, Poly};
use scalar::{q_int, q_ratio, Q};
use symfun::{complete, complete_j, elem, elem_j, Interval};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GammaError {
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A bimodule map between word realizations, stored column by column: the
/// image of each source basis tuple as a canonical element of the target
/// word. Missing columns are zero; a zero 1-morphism on either side yields
/// the zero matrix (no columns).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorMatrix {
    source: Word,
    target: Word,
    columns: BTreeMap<Vec<usize>, TensorElement>,
}

/// All basis tuples for the given local ranks, in lexicographic order.
pub fn tuples(ranks: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in ranks {
        let mut next = Vec::with_capacity(out.len() * r);
        for t in &out {
            for k in 0..r {
                let mut t2 = t.clone();
                t2.push(k);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

impl OperatorMatrix {
    pub fn zero(source: Word, target: Word) -> Self {
        OperatorMatrix { source, target, columns: BTreeMap::new() }
    }

    pub fn identity(word: Word) -> Result<Self, GammaError> {
        let ranks = match word.local_ranks() {
            Some(r) => r,
            None => return Ok(Self::zero(word.clone(), word)),
        };
        let m = word.source().size();
        let mut columns = BTreeMap::new();
        for t in tuples(&ranks) {
            let mut coeffs = BTreeMap::new();
            coeffs.insert(t.clone(), Poly::one(m));
            columns.insert(t, TensorElement::from_coeffs(word.clone(), coeffs)?);
        }
        Ok(OperatorMatrix { source: word.clone(), target: word, columns })
    }

    pub fn source(&self) -> &Word {
        &self.source
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn columns(&self) -> &BTreeMap<Vec<usize>, TensorElement> {
        &self.columns
    }

    pub fn column(&self, tuple: &[usize]) -> Option<&TensorElement> {
        self.columns.get(tuple)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.values().all(|e| e.is_zero())
    }

    /// Image of an arbitrary element of the source word, by right-linearity
    /// over the base ring.
    pub fn apply(&self, elt: &TensorElement) -> Result<TensorElement, GammaError> {
        if elt.word() != &self.source {
            return Err(GammaError::Shape(format!(
                "element over {}, matrix source {}",
                elt.word(),
                self.source
            )));
        }
        let mut out = TensorElement::zero(self.target.clone());
        for (tuple, c) in elt.coeffs() {
            if let Some(col) = self.columns.get(tuple) {
                out = out.add(&col.act_base(c))?;
            }
        }
        Ok(out)
    }

    /// Composite `self ∘ first` (apply `first`, then `self`).
    pub fn compose(&self, first: &OperatorMatrix) -> Result<OperatorMatrix, GammaError> {
        if first.target != self.source {
            return Err(GammaError::Shape(format!(
                "inner boundary mismatch: {} vs {}",
                first.target, self.source
            )));
        }
        if self.source.is_zero() || first.source.is_zero() || self.target.is_zero() {
            return Ok(Self::zero(first.source.clone(), self.target.clone()));
        }
        let mut columns = BTreeMap::new();
        for (t, elt) in &first.columns {
            let image = self.apply(elt)?;
            if !image.is_zero() {
                columns.insert(t.clone(), image);
            }
        }
        Ok(OperatorMatrix {
            source: first.source.clone(),
            target: self.target.clone(),
            columns,
        })
    }

    pub fn scale(&self, c: &Q) -> OperatorMatrix {
        let columns = self
            .columns
            .iter()
            .map(|(t, e)| (t.clone(), e.scale(c)))
            .filter(|(_, e)| !e.is_zero())
            .collect();
        OperatorMatrix {
            source: self.source.clone(),
            target: self.target.clone(),
            columns,
        }
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, GammaError> {
        if self.source != other.source || self.target != other.target {
            return Err(GammaError::Shape(format!(
                "matrix sum boundary mismatch: [{} -> {}] vs [{} -> {}]",
                self.source, self.target, other.source, other.target
            )));
        }
        let mut columns = self.columns.clone();
        for (t, e) in &other.columns {
            let entry = columns
                .entry(t.clone())
                .or_insert_with(|| TensorElement::zero(self.target.clone()));
            *entry = entry.add(e)?;
        }
        columns.retain(|_, e| !e.is_zero());
        Ok(OperatorMatrix {
            source: self.source.clone(),
            target: self.target.clone(),
            columns,
        })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, GammaError> {
        self.add(&other.scale(&q_int(-1)))
    }

    /// Right-multiply the whole matrix by a base-ring element (precompose
    /// with multiplication by `g`).
    pub fn act_base(&self, g: &Poly) -> OperatorMatrix {
        let columns = self
            .columns
            .iter()
            .map(|(t, e)| (t.clone(), e.act_base(g)))
            .filter(|(_, e)| !e.is_zero())
            .collect();
        OperatorMatrix {
            source: self.source.clone(),
            target: self.target.clone(),
            columns,
        }
    }

    /// Check that every matrix entry raises degree by exactly `d`, using the
    /// grading in which a basis tuple carries its monomial degrees plus the
    /// word's total shift.
    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        let (src_pairs, src_shift) = match (self.source.slot_pairs(), self.source.total_shift()) {
            (Some(p), Some(s)) => (p, s),
            _ => return true,
        };
        let (tgt_pairs, tgt_shift) = match (self.target.slot_pairs(), self.target.total_shift()) {
            (Some(p), Some(s)) => (p, s),
            _ => return true,
        };
        for (t, elt) in &self.columns {
            let src_deg = tuple_degree(&src_pairs, t) + src_shift;
            for (tt, c) in elt.coeffs() {
                let cdeg = match c.degree() {
                    Ok(Degree::Homogeneous(v)) => v,
                    _ => return false,
                };
                if tuple_degree(&tgt_pairs, tt) + tgt_shift + cdeg != src_deg + d {
                    return false;
                }
            }
        }
        true
    }

    /// Export as JSON: `{source, target, columns: [{tuple, element}]}` with
    /// polynomials rendered as strings.
    pub fn to_json(&self) -> serde_json::Value {
        let columns: Vec<serde_json::Value> = self
            .columns
            .iter()
            .map(|(t, e)| {
                let terms: Vec<serde_json::Value> = e
                    .coeffs()
                    .iter()
                    .map(|(tt, c)| {
                        serde_json::json!({ "tuple": tt, "coeff": c.to_string() })
                    })
                    .collect();
                serde_json::json!({ "tuple": t, "element": terms })
            })
            .collect();
        serde_json::json!({
            "source": self.source.to_string(),
            "target": self.target.to_string(),
            "columns": columns,
        })
    }
}

fn tuple_degree(pairs: &[FrobeniusPair], tuple: &[usize]) -> i64 {
    tuple
        .iter()
        .zip(pairs)
        .map(|(&k, p)| match p.basis[k].degree() {
            Ok(Degree::Homogeneous(v)) => v,
            _ => 0,
        })
        .sum()
}

/// Column-wise equality (matrices must share boundaries; zero columns may be
/// present or absent on either side).
pub fn equal(a: &OperatorMatrix, b: &OperatorMatrix) -> bool {
    if a.source != b.source || a.target != b.target {
        return false;
    }
    let zero_a = TensorElement::zero(a.target.clone());
    let keys: std::collections::BTreeSet<&Vec<usize>> =
        a.columns.keys().chain(b.columns.keys()).collect();
    for t in keys {
        let ca = a.columns.get(t).unwrap_or(&zero_a);
        let cb = b.columns.get(t).unwrap_or(&zero_a);
        if ca != cb {
            return false;
        }
    }
    true
}

/// The word obtained by applying one atom's letter replacement at its
/// position.
fn splice_word(bottom: &Word, atom: &Atom) -> Word {
    let mut letters: Vec<SignedLabel> = bottom.letters().to_vec();
    let p = atom.position;
    let k = atom.kind.arity();
    letters.splice(p..p + k, atom.kind.top_letters());
    Word::new(bottom.source().clone(), letters)
}

/// Apply one atom to a canonical element of the (nonzero) bottom word,
/// producing a canonical element of the (nonzero) top word.
fn apply_atom(
    atom: &Atom,
    bottom: &Word,
    top: &Word,
    elt: &TensorElement,
) -> Result<TensorElement, GammaError> {
    let m = bottom.source().size();
    let p = atom.position;
    let objs = bottom
        .objects()
        .ok_or(FlagError::ZeroWord { letter_index: 0 })?;
    let pairs = bottom
        .slot_pairs()
        .ok_or(FlagError::ZeroWord { letter_index: 0 })?;
    let raw = elt.to_raw();
    let mut out: Vec<(Vec<Poly>, Poly)> = Vec::new();
    match atom.kind {
        AtomKind::Id(_) => out = raw,
        AtomKind::Dot(_, n) => {
            let var = Poly::var(m, pairs[p].moving_var()).pow(n);
            for (mut factors, c) in raw {
                factors[p] = factors[p].mul(&var);
                out.push((factors, c));
            }
        }
        AtomKind::CrossUp(i, j) | AtomKind::CrossDown(i, j) => {
            let up = matches!(atom.kind, AtomKind::CrossUp(..));
            let o = &objs[p + 2];
            if i == j {
                // Negated divided difference on the product, re-split through
                // the nested two-step tower (inner = new left slot's pair).
                // The sign makes the dot-slide identities come out with +1 on
                // the right-hand side.
                let s_index = if up {
                    (o.entry(i) + 1) as usize
                } else {
                    (o.entry(i) - 1) as usize
                };
                let inner_obj = step(o, if up { SignedLabel::e(i) } else { SignedLabel::f(i) })
                    .ok_or(FlagError::ZeroWord { letter_index: p })?;
                let inner = local_frobenius(&inner_obj, if up { SignedLabel::e(i) } else { SignedLabel::f(i) })?;
                for (factors, c) in raw {
                    let h = demazure_simple(s_index, &factors[p].mul(&factors[p + 1])).scale(&q_int(-1));
                    for (k, a) in expand_raw(&inner, &h) {
                        let mut f2 = factors.clone();
                        f2[p] = inner.basis[k].clone();
                        f2[p + 1] = a;
                        out.push((f2, c.clone()));
                    }
                }
            } else {
                // Transpose the slot contents; for the label pair that picks
                // up a linear-difference factor, emit two terms with one
                // moving variable each: `(left_var, left_sign)` multiplies
                // the new left slot, `(right_var, right_sign)` the new right.
                let multiplier = if up && i.distance(j) == 1 && i.index() == j.index() + 1 {
                    // factor t_{o_j+1} − t_{o_i+1}
                    Some((
                        Poly::var(m, (o.entry(j) + 1) as usize),
                        1,
                        Poly::var(m, (o.entry(i) + 1) as usize),
                        -1,
                    ))
                } else if !up && i.distance(j) == 1 && j.index() == i.index() + 1 {
                    // factor t_{o_j} − t_{o_i}, matching the clockwise
                    // rotation of the upward crossing through the adjoints
                    Some((Poly::var(m, o.entry(j) as usize), 1, Poly::var(m, o.entry(i) as usize), -1))
                } else {
                    None
                };
                for (factors, c) in raw {
                    match &multiplier {
                        None => {
                            let mut f2 = factors.clone();
                            f2.swap(p, p + 1);
                            out.push((f2, c));
                        }
                        Some((left_var, left_sign, right_var, right_sign)) => {
                            let mut f_left = factors.clone();
                            f_left.swap(p, p + 1);
                            f_left[p] = f_left[p].mul(left_var);
                            out.push((f_left, c.scale(&q_int(*left_sign))));
                            let mut f_right = factors;
                            f_right.swap(p, p + 1);
                            f_right[p + 1] = f_right[p + 1].mul(right_var);
                            out.push((f_right, c.scale(&q_int(*right_sign))));
                        }
                    }
                }
            }
        }
        AtomKind::CapCcw(i) | AtomKind::CapCw(i) => {
            let ccw = matches!(atom.kind, AtomKind::CapCcw(_));
            let o = &objs[p + 2];
            let pair = if ccw {
                local_frobenius(o, SignedLabel::f(i))?
            } else {
                local_frobenius(o, SignedLabel::e(i))?
            };
            let scalar = if !ccw && i.is_diamond() {
                q_ratio(1, 2)
            } else {
                q_int(1)
            };
            for (factors, c) in raw {
                let v = form_value(&pair, &factors[p].mul(&factors[p + 1])).scale(&scalar);
                if v.is_zero() {
                    continue;
                }
                let mut f2: Vec<Poly> = Vec::with_capacity(factors.len() - 2);
                f2.extend_from_slice(&factors[..p]);
                f2.extend_from_slice(&factors[p + 2..]);
                let mut c2 = c;
                if p < f2.len() {
                    // The form value lives over the region right of the cap;
                    // fold it into the next slot to the right.
                    f2[p] = f2[p].mul(&v);
                } else {
                    c2 = c2.mul(&v);
                }
                out.push((f2, c2));
            }
        }
        AtomKind::CupCcw(i) | AtomKind::CupCw(i) => {
            let ccw = matches!(atom.kind, AtomKind::CupCcw(_));
            let region = &objs[p];
            let (pair, scalar) = if ccw {
                let mid = step(region, SignedLabel::e(i))
                    .ok_or(FlagError::ZeroWord { letter_index: p })?;
                (local_frobenius(&mid, SignedLabel::f(i))?, q_int(1))
            } else {
                let mid = step(region, SignedLabel::f(i))
                    .ok_or(FlagError::ZeroWord { letter_index: p })?;
                let scalar = if i.is_diamond() { q_int(2) } else { q_int(1) };
                (local_frobenius(&mid, SignedLabel::e(i))?, scalar)
            };
            let cas = casimir(&pair);
            for (factors, c) in raw {
                for (b, dual) in &cas {
                    let mut f2 = factors.clone();
                    f2.insert(p, dual.clone());
                    f2.insert(p, b.clone());
                    out.push((f2, c.scale(&scalar)));
                }
            }
        }
        AtomKind::ChiLeft(..) | AtomKind::ChiRight(..) => {
            unreachable!("sideways crossings are macro-expanded before evaluation")
        }
    }
    Ok(normalize(top, &out)?)
}

/// Evaluate a diagram as an operator matrix. Sideways crossings are
/// macro-expanded first; a zero 1-morphism anywhere in the stack makes the
/// whole matrix zero (with the diagram's formal boundary words).
pub fn eval_diagram(d: &Diagram) -> Result<OperatorMatrix, GammaError> {
    let d = if d.has_chi() { d.expand_chi() } else { d.clone() };
    let mut current_word = d.source_word().clone();
    let mut matrix = OperatorMatrix::identity(current_word.clone())?;
    let mut dead = current_word.is_zero();
    for layer in d.layers() {
        // Atoms act on disjoint strand intervals; applying right to left
        // keeps every atom's position valid in the intermediate words.
        for atom in layer.iter().rev() {
            let next_word = splice_word(&current_word, atom);
            if dead || next_word.is_zero() {
                dead = true;
            } else {
                let mut columns = BTreeMap::new();
                for (t, eltc) in matrix.columns() {
                    let image = apply_atom(atom, &current_word, &next_word, eltc)?;
                    if !image.is_zero() {
                        columns.insert(t.clone(), image);
                    }
                }
                matrix = OperatorMatrix {
                    source: matrix.source.clone(),
                    target: next_word.clone(),
                    columns,
                };
            }
            current_word = next_word;
        }
    }
    if dead {
        return Ok(OperatorMatrix::zero(d.source_word().clone(), current_word));
    }
    Ok(matrix)
}

/// Endomorphism of the word's realization that multiplies the region at
/// `gap` by `g`: gap `k` is the region immediately left of slot `k`, and gap
/// `len` is the rightmost region (plain base action).  `g` must lie in the
/// region's invariant ring for this to be a bimodule map; closed-circle
/// values evaluated in interior regions enter relation sides through here.
pub fn region_insertion(word: &Word, gap: usize, g: &Poly) -> Result<OperatorMatrix, GammaError> {
    if gap > word.len() {
        return Err(GammaError::Shape(format!(
            "gap {gap} out of range for a {}-letter word",
            word.len()
        )));
    }
    let id = OperatorMatrix::identity(word.clone())?;
    if gap == word.len() {
        return Ok(id.act_base(g));
    }
    let mut columns = BTreeMap::new();
    for (t, elt) in id.columns() {
        let mut raw = elt.to_raw();
        for (factors, _) in raw.iter_mut() {
            factors[gap] = factors[gap].mul(g);
        }
        let image = normalize(word, &raw)?;
        if !image.is_zero() {
            columns.insert(t.clone(), image);
        }
    }
    Ok(OperatorMatrix { source: word.clone(), target: word.clone(), columns })
}

/// Closed-form bubble value with `s` dots at region `a`: an element of the
/// region's invariant ring. Negative `s` below the degree threshold gives 0;
/// the formulas are total in `s`, so the formal (fake) range is defined by
/// the same expressions.
///
/// Writing `A = a_{i−1}`, `B = a_i`, `C = a_{i+1}` and `λ_i` for the weight:
///
/// - clockwise, diamond: `2 Σ_r (−1)^r e_r[B+1,C] · h^(2)_{(s+1−λ−r)/2}[1,B]`
/// - clockwise, other: `Σ_r (−1)^r e_r[B+1,C] · h_{s+A+C−2B+1−r}[A+1,B]`
/// - counterclockwise, diamond: `Σ_r (−1)^r e^(2)_r[1,B] · h_{s+λ+2−2r}[B+1,C]`
/// - counterclockwise, other: `Σ_r (−1)^r e_r[A+1,B] · h_{s+2B−A−C+1−r}[B+1,C]`
///
/// where `e^(2)`, `h^(2)` are the symmetric functions in squared variables
/// on the signed block.
pub fn bubble(i: Label, s: i64, clockwise: bool, a: &FlagObject) -> Poly {
    let m = a.size();
    let idx = i.index() as isize;
    let lam = weight_of(a).component(i);
    let big_a = a.entry_ext(idx - 1);
    let big_b = a.entry_ext(idx);
    let big_c = a.entry_ext(idx + 1);
    let outer = Interval::new(big_b as usize + 1, big_c as usize);
    let mut total = Poly::zero(m);
    if clockwise {
        if i.is_diamond() {
            for r in 0..=(big_c - big_b).max(0) {
                let h = complete_j(&q_ratio(s + 1 - lam - r, 2), Interval::new(1, big_b as usize), m);
                if h.is_zero() {
                    continue;
                }
                let term = elem(r, outer, m).mul(&h).scale(&q_int(if r % 2 == 0 { 2 } else { -2 }));
                total = total.add(&term);
            }
        } else {
            let inner = Interval::new(big_a as usize + 1, big_b as usize);
            for r in 0..=(big_c - big_b).max(0) {
                let h = complete(s + big_a + big_c - 2 * big_b + 1 - r, inner, m);
                if h.is_zero() {
                    continue;
                }
                let term = elem(r, outer, m).mul(&h).scale(&q_int(if r % 2 == 0 { 1 } else { -1 }));
                total = total.add(&term);
            }
        }
    } else if i.is_diamond() {
        for r in 0..=big_b.max(0) {
            let h = complete(s + lam + 2 - 2 * r, outer, m);
            if h.is_zero() {
                continue;
            }
            let term = elem_j(r, Interval::new(1, big_b as usize), m)
                .mul(&h)
                .scale(&q_int(if r % 2 == 0 { 1 } else { -1 }));
            total = total.add(&term);
        }
    } else {
        let inner = Interval::new(big_a as usize + 1, big_b as usize);
        for r in 0..=(big_b - big_a).max(0) {
            let h = complete(s + 2 * big_b - big_a - big_c + 1 - r, outer, m);
            if h.is_zero() {
                continue;
            }
            let term = elem(r, inner, m).mul(&h).scale(&q_int(if r % 2 == 0 { 1 } else { -1 }));
            total = total.add(&term);
        }
    }
    total
}

/// The closed circle with `s` dots as an actual diagram over the identity
/// word: clockwise is built cup-clockwise / dots on the raising strand /
/// cap-counterclockwise, counterclockwise the other way around.
pub fn circle_diagram(i: Label, s: u32, clockwise: bool, a: &FlagObject) -> Result<Diagram, DiagramError> {
    let word = Word::identity(a.clone());
    let (cup, dot_pos, dot_letter, cap) = if clockwise {
        (AtomKind::CupCw(i), 0, SignedLabel::e(i), AtomKind::CapCcw(i))
    } else {
        (AtomKind::CupCcw(i), 1, SignedLabel::e(i), AtomKind::CapCw(i))
    };
    let mut layers = vec![vec![Atom::new(cup, 0)]];
    if s > 0 {
        layers.push(vec![Atom::new(AtomKind::Dot(dot_letter, s), dot_pos)]);
    }
    layers.push(vec![Atom::new(cap, 0)]);
    Diagram::new(word, layers)
}

/// Evaluate a diagram with identity source and target words down to the
/// single base-ring entry of its matrix.
pub fn scalar_value(d: &Diagram) -> Result<Poly, GammaError> {
    let m = d.object().size();
    let mat = eval_diagram(d)?;
    if !mat.source().is_empty() || !mat.target().is_empty() {
        return Err(GammaError::Shape(format!(
            "not an endomorphism of an identity word: {} -> {}",
            mat.source(),
            mat.target()
        )));
    }
    match mat.column(&[]) {
        None => Ok(Poly::zero(m)),
        Some(e) => Ok(e.coeffs().get(&Vec::new()).cloned().unwrap_or_else(|| Poly::zero(m))),
    }
}
