//! Flag-type objects, their weights, words of raising/lowering letters, and
//! the canonical tensor-module form of their polynomial realizations.
//!
//! An object of rank `r` and size `m` is a weakly increasing integer sequence
//! `a = (a_◇, …, a_{r−◇})` with values in `[0, m]`, indexed by the
//! half-integer labels `◇ = 1/2, 3/2, …, r − 1/2`, with the boundary
//! conventions `a_{◇−1} = −a_◇` and `a_{r−◇+1} = m`. Its invariant ring `R^a`
//! sits inside `k[t_1..t_m]`: a signed-symmetric block on `t_1..t_{a_◇}`
//! followed by ordinary symmetric blocks between consecutive entries.
//!
//! A word is a sequence of letters `E(i)` / `F(i)` applied right-to-left to a
//! rightmost object. Its realization is the iterated tensor product of
//! one-step refinement rings, a free right module over `R^a` whose rank is the
//! product of local Frobenius ranks; `TensorElement` stores elements in the
//! canonical basis-tuple form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use demazure::{expand_in_basis, FrobeniusPair};
use polyring::{act, Poly, WeylElement};
use scalar::LaurentQ;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlagError {
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("word is the zero 1-morphism (step leaves the object set at letter {letter_index})")]
    ZeroWord { letter_index: usize },
    #[error("tensor factor in slot {slot} is not in its refinement ring (fails s{generator}-invariance)")]
    RingMembership { slot: usize, generator: usize },
    #[error("coefficient not in the base ring: fails s{generator}-invariance")]
    CoefficientRing { generator: usize },
    #[error("tuple {tuple:?} out of range for local ranks {ranks:?}")]
    TupleRange { tuple: Vec<usize>, ranks: Vec<usize> },
    #[error("words differ: {0}")]
    WordMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Frobenius(#[from] demazure::DemazureError),
}

/// A half-integer label `i ∈ {1/2, 3/2, …}` stored as the doubled odd integer.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(i64);

impl Label {
    /// Lowest label `◇ = 1/2`.
    pub const DIAMOND: Label = Label(1);

    pub fn from_doubled(d: i64) -> Result<Self, FlagError> {
        if d <= 0 || d % 2 == 0 {
            return Err(FlagError::Parse(format!(
                "label must be a positive half-integer, got {d}/2"
            )));
        }
        Ok(Label(d))
    }

    pub fn from_index(idx: usize) -> Self {
        Label(2 * idx as i64 + 1)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    /// Zero-based slot index: `◇ ↦ 0`, `◇+1 ↦ 1`, ….
    pub fn index(self) -> usize {
        ((self.0 - 1) / 2) as usize
    }

    pub fn is_diamond(self) -> bool {
        self.0 == 1
    }

    /// Distance `|i − j|` in label steps.
    pub fn distance(self, other: Label) -> i64 {
        ((self.0 - other.0) / 2).abs()
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

/// Symmetrized Cartan pairing `⟨θα_i^∨, α_j⟩`: `2 + δ_{i,◇}` on the diagonal,
/// `−1` for adjacent labels, `0` otherwise.
pub fn cartan_pairing(i: Label, j: Label) -> i64 {
    if i == j {
        2 + if i.is_diamond() { 1 } else { 0 }
    } else if i.distance(j) == 1 {
        -1
    } else {
        0
    }
}

/// Sign `t_{ij}` for distinct labels: `−1` when `j = i − 1`, else `+1`.
pub fn t_sign(i: Label, j: Label) -> i64 {
    assert_ne!(i, j, "t_sign is defined for distinct labels");
    if j.doubled() == i.doubled() - 2 {
        -1
    } else {
        1
    }
}

/// Letter direction: `Up` is a raising letter `E`, `Down` a lowering `F`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Dir {
    Up,
    Down,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
        }
    }
}

/// A signed label `±i`: one letter of a word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SignedLabel {
    pub label: Label,
    pub dir: Dir,
}

impl SignedLabel {
    pub fn e(label: Label) -> Self {
        SignedLabel { label, dir: Dir::Up }
    }

    pub fn f(label: Label) -> Self {
        SignedLabel { label, dir: Dir::Down }
    }

    pub fn is_e(self) -> bool {
        self.dir == Dir::Up
    }

    pub fn flip(self) -> Self {
        SignedLabel { label: self.label, dir: self.dir.flip() }
    }
}

impl fmt::Display for SignedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.is_e() { 'E' } else { 'F' };
        write!(f, "{}({})", c, self.label)
    }
}

/// A weakly increasing sequence in `[0, m]`, one entry per label.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagObject {
    r: usize,
    m: usize,
    a: Vec<i64>,
}

impl FlagObject {
    pub fn new(r: usize, m: usize, a: Vec<i64>) -> Result<Self, FlagError> {
        if a.len() != r {
            return Err(FlagError::InvalidObject(format!(
                "expected {r} entries, got {}",
                a.len()
            )));
        }
        for (k, &v) in a.iter().enumerate() {
            if v < 0 || v > m as i64 {
                return Err(FlagError::InvalidObject(format!(
                    "entry {v} at slot {k} outside [0, {m}]"
                )));
            }
            if k > 0 && a[k - 1] > v {
                return Err(FlagError::InvalidObject(format!(
                    "sequence not weakly increasing at slot {k}"
                )));
            }
        }
        Ok(FlagObject { r, m, a })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[i64] {
        &self.a
    }

    pub fn entry(&self, i: Label) -> i64 {
        self.a[i.index()]
    }

    /// Entry with boundary conventions: index `−1` gives `−a_◇`, index `r`
    /// gives `m`.
    pub fn entry_ext(&self, idx: isize) -> i64 {
        if idx < 0 {
            -self.a[0]
        } else if idx as usize >= self.r {
            self.m as i64
        } else {
            self.a[idx as usize]
        }
    }

    /// All objects of the given rank and size.
    pub fn all(r: usize, m: usize) -> Vec<FlagObject> {
        fn rec(r: usize, m: usize, prefix: &mut Vec<i64>, out: &mut Vec<FlagObject>) {
            if prefix.len() == r {
                out.push(FlagObject { r, m, a: prefix.clone() });
                return;
            }
            let lo = *prefix.last().unwrap_or(&0);
            for v in lo..=m as i64 {
                prefix.push(v);
                rec(r, m, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(r, m, &mut Vec::new(), &mut out);
        out
    }

    /// Generators `s_p` fixing `R^a`: all `p ∈ [0, m)` except the entry values.
    pub fn ring_gens(&self) -> Vec<usize> {
        gens_avoiding(&self.a, self.m)
    }

    /// Is `f` an element of `R^a`?
    pub fn contains(&self, f: &Poly) -> bool {
        invariant_under(f, &self.ring_gens())
    }
}

fn gens_avoiding(values: &[i64], m: usize) -> Vec<usize> {
    (0..m)
        .filter(|&p| !values.contains(&(p as i64)))
        .collect()
}

fn invariant_under(f: &Poly, gens: &[usize]) -> bool {
    let m = f.num_vars();
    gens.iter().all(|&g| act(&WeylElement::simple(g, m), f) == *f)
}

fn first_violation(f: &Poly, gens: &[usize]) -> Option<usize> {
    let m = f.num_vars();
    gens.iter()
        .copied()
        .find(|&g| act(&WeylElement::simple(g, m), f) != *f)
}

impl fmt::Debug for FlagObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={} ; r={} m={}",
            self.a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
            self.r,
            self.m
        )
    }
}

impl fmt::Display for FlagObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The weight `λ(a)`, one integer per label.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Weight {
    lambda: Vec<i64>,
}

impl Weight {
    pub fn component(&self, i: Label) -> i64 {
        self.lambda[i.index()]
    }

    pub fn components(&self) -> &[i64] {
        &self.lambda
    }

    pub fn diamond(&self) -> i64 {
        self.lambda[0]
    }
}

/// `λ_i = −a_{i−1} + 2a_i − a_{i+1}` with the boundary conventions (so
/// `λ_◇ = 3a_◇ − a_{◇+1}`).
pub fn weight_of(a: &FlagObject) -> Weight {
    let lambda = (0..a.rank())
        .map(|idx| {
            let i = idx as isize;
            -a.entry_ext(i - 1) + 2 * a.entry_ext(i) - a.entry_ext(i + 1)
        })
        .collect();
    Weight { lambda }
}

/// One-step move: raise (`E`) or lower (`F`) the labeled entry; `None` when
/// the result leaves the object set (the zero 1-morphism).
pub fn step(a: &FlagObject, s: SignedLabel) -> Option<FlagObject> {
    let mut v = a.a.clone();
    let idx = s.label.index();
    if idx >= a.r {
        return None;
    }
    v[idx] += if s.is_e() { 1 } else { -1 };
    FlagObject::new(a.r, a.m, v).ok()
}

/// Values of the one-step refinement object (both old and new entry kept).
fn refinement_values(o: &FlagObject, s: SignedLabel) -> Vec<i64> {
    let mut v = o.a.clone();
    let oi = o.entry(s.label);
    v.push(if s.is_e() { oi + 1 } else { oi - 1 });
    v
}

/// Generators fixing the refinement ring of the letter `s` with right object `o`.
pub fn refinement_gens(o: &FlagObject, s: SignedLabel) -> Vec<usize> {
    gens_avoiding(&refinement_values(o, s), o.m)
}

/// The free-module structure of the letter's refinement ring over the ring of
/// its *right* object `o`.
pub fn local_frobenius(o: &FlagObject, s: SignedLabel) -> Result<FrobeniusPair, FlagError> {
    if step(o, s).is_none() {
        return Err(FlagError::ZeroWord { letter_index: 0 });
    }
    let m = o.m;
    let idx = s.label.index() as isize;
    let oi = o.entry(s.label);
    let pair = if s.is_e() {
        // Block [o_i + 1, o_{i+1}] splits off its leftmost variable.
        FrobeniusPair::split_left(o.entry_ext(idx + 1) as usize, (oi + 1) as usize, m)?
    } else if s.label.is_diamond() {
        FrobeniusPair::j_block(oi as usize, m)?
    } else {
        // Block [o_{i−1} + 1, o_i] splits off its rightmost variable.
        FrobeniusPair::split_right((o.entry_ext(idx - 1) + 1) as usize, oi as usize, m)?
    };
    Ok(pair)
}

/// The free-module structure of the letter's refinement ring over the ring of
/// its *left* object (the target of the step). `o` is still the right object.
pub fn local_frobenius_left(
    o: &FlagObject,
    s: SignedLabel,
) -> Result<FrobeniusPair, FlagError> {
    if step(o, s).is_none() {
        return Err(FlagError::ZeroWord { letter_index: 0 });
    }
    let m = o.m;
    let idx = s.label.index() as isize;
    let oi = o.entry(s.label);
    let pair = if s.is_e() {
        if s.label.is_diamond() {
            FrobeniusPair::j_block((oi + 1) as usize, m)?
        } else {
            // Block [o_{i−1} + 1, o_i + 1] of the left object splits off its
            // rightmost variable.
            FrobeniusPair::split_right((o.entry_ext(idx - 1) + 1) as usize, (oi + 1) as usize, m)?
        }
    } else {
        // Block [o_i − 1 + 1, o_{i+1}] = [o_i, o_{i+1}] splits off its
        // leftmost variable (works for ◇ too: the signed block shrank).
        FrobeniusPair::split_left(o.entry_ext(idx + 1) as usize, oi as usize, m)?
    };
    Ok(pair)
}

/// Grading shift carried by the letter with right object `o`:
/// `{1 + a_i − a_{i+1}}` for `E_i`, `{1 + a_{i−1} − a_i}` for `F_i`.
pub fn letter_shift(o: &FlagObject, s: SignedLabel) -> i64 {
    let idx = s.label.index() as isize;
    if s.is_e() {
        1 + o.entry_ext(idx) - o.entry_ext(idx + 1)
    } else {
        1 + o.entry_ext(idx - 1) - o.entry_ext(idx)
    }
}

/// A word of letters in display order (leftmost first); the stored object is
/// the *rightmost* region, and the rightmost letter acts on it first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    object: FlagObject,
    letters: Vec<SignedLabel>,
}

impl Word {
    pub fn new(object: FlagObject, letters: Vec<SignedLabel>) -> Self {
        Word { object, letters }
    }

    pub fn identity(object: FlagObject) -> Self {
        Word { object, letters: Vec::new() }
    }

    pub fn letters(&self) -> &[SignedLabel] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The rightmost object `a`.
    pub fn source(&self) -> &FlagObject {
        &self.object
    }

    /// Region objects `o_0, …, o_n` left to right (`o_n` = source object);
    /// `None` when some step leaves the object set.
    pub fn objects(&self) -> Option<Vec<FlagObject>> {
        let n = self.letters.len();
        let mut objs = vec![self.object.clone(); n + 1];
        for j in (0..n).rev() {
            objs[j] = step(&objs[j + 1], self.letters[j])?;
        }
        Some(objs)
    }

    /// The leftmost object (target), unless the word is zero.
    pub fn target(&self) -> Option<FlagObject> {
        self.objects().map(|o| o[0].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.objects().is_none()
    }

    /// Right-module Frobenius pair of each letter (slot `j` over `R^{o_j}`).
    pub fn slot_pairs(&self) -> Option<Vec<FrobeniusPair>> {
        let objs = self.objects()?;
        let mut pairs = Vec::with_capacity(self.letters.len());
        for (j, &s) in self.letters.iter().enumerate() {
            pairs.push(local_frobenius(&objs[j + 1], s).ok()?);
        }
        Some(pairs)
    }

    pub fn local_ranks(&self) -> Option<Vec<usize>> {
        Some(self.slot_pairs()?.iter().map(|p| p.rank).collect())
    }

    /// Rank of the realization as a free right module (0 for the zero word).
    pub fn tensor_rank(&self) -> usize {
        match self.local_ranks() {
            None => 0,
            Some(r) => r.iter().product(),
        }
    }

    /// Total grading shift of the realization.
    pub fn total_shift(&self) -> Option<i64> {
        let objs = self.objects()?;
        Some(
            self.letters
                .iter()
                .enumerate()
                .map(|(j, &s)| letter_shift(&objs[j + 1], s))
                .sum(),
        )
    }

    /// Concatenation `self · other` (self to the left of other); requires the
    /// target of `other` to equal the source region we attach to, i.e. the
    /// caller supplies compatible words.
    pub fn compose_left_of(&self, other: &Word) -> Option<Word> {
        let other_target = other.target()?;
        if other_target != self.object {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().copied());
        Some(Word { object: other.object.clone(), letters })
    }
}

impl fmt::Display for Word {
    /// Format: `E(3/2) F(1/2) E(1/2) | a=1,2 ; r=2 m=3` (identity word prints
    /// `1 | …`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            write!(f, "1 | {}", self.object)
        } else {
            let ws: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
            write!(f, "{} | {}", ws.join(" "), self.object)
        }
    }
}

impl FromStr for Word {
    type Err = FlagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (word_part, obj_part) = s
            .split_once('|')
            .ok_or_else(|| FlagError::Parse("missing '|' separator".into()))?;
        let obj_part = obj_part.trim();
        let (a_part, rm_part) = obj_part
            .split_once(';')
            .ok_or_else(|| FlagError::Parse("missing ';' in object part".into()))?;
        let a_part = a_part.trim();
        let a_values = a_part
            .strip_prefix("a=")
            .ok_or_else(|| FlagError::Parse("object must start with 'a='".into()))?;
        let a: Vec<i64> = if a_values.trim().is_empty() {
            Vec::new()
        } else {
            a_values
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<i64>()
                        .map_err(|e| FlagError::Parse(format!("bad entry {v:?}: {e}")))
                })
                .collect::<Result<_, _>>()?
        };
        let rm = rm_part.trim();
        let mut r = None;
        let mut m = None;
        for tok in rm.split_whitespace() {
            if let Some(v) = tok.strip_prefix("r=") {
                r = Some(v.parse::<usize>().map_err(|e| FlagError::Parse(e.to_string()))?);
            } else if let Some(v) = tok.strip_prefix("m=") {
                m = Some(v.parse::<usize>().map_err(|e| FlagError::Parse(e.to_string()))?);
            } else {
                return Err(FlagError::Parse(format!("unexpected token {tok:?}")));
            }
        }
        let r = r.ok_or_else(|| FlagError::Parse("missing r=".into()))?;
        let m = m.ok_or_else(|| FlagError::Parse("missing m=".into()))?;
        let object = FlagObject::new(r, m, a)?;
        let mut letters = Vec::new();
        let word_part = word_part.trim();
        if word_part != "1" && !word_part.is_empty() {
            for tok in word_part.split_whitespace() {
                let (dir, rest) = if let Some(rest) = tok.strip_prefix("E(") {
                    (Dir::Up, rest)
                } else if let Some(rest) = tok.strip_prefix("F(") {
                    (Dir::Down, rest)
                } else {
                    return Err(FlagError::Parse(format!("bad letter {tok:?}")));
                };
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| FlagError::Parse(format!("bad letter {tok:?}")))?;
                let doubled = match inner.split_once('/') {
                    Some((num, den)) if den.trim() == "2" => num
                        .trim()
                        .parse::<i64>()
                        .map_err(|e| FlagError::Parse(e.to_string()))?,
                    _ => {
                        return Err(FlagError::Parse(format!(
                            "label must be an odd half {inner:?}"
                        )))
                    }
                };
                let label = Label::from_doubled(doubled)?;
                letters.push(SignedLabel { label, dir });
            }
        }
        Ok(Word { object, letters })
    }
}

/// An element of the realization of a word, in canonical form: a map from
/// basis-index tuples (one local basis index per letter) to coefficients in
/// `R^a`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorElement {
    word: Word,
    coeffs: BTreeMap<Vec<usize>, Poly>,
}

impl TensorElement {
    pub fn zero(word: Word) -> Self {
        TensorElement { word, coeffs: BTreeMap::new() }
    }

    /// The element `1 ⊗ 1 ⊗ … ⊗ 1` (tuple of zero exponents, coefficient 1).
    pub fn unit(word: Word) -> Result<Self, FlagError> {
        let m = word.source().size();
        let n = word.len();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![0usize; n], Poly::one(m));
        let el = TensorElement { word, coeffs };
        el.validate()?;
        Ok(el)
    }

    pub fn from_coeffs(
        word: Word,
        coeffs: BTreeMap<Vec<usize>, Poly>,
    ) -> Result<Self, FlagError> {
        let mut el = TensorElement { word, coeffs };
        el.coeffs.retain(|_, c| !c.is_zero());
        el.validate()?;
        Ok(el)
    }

    fn validate(&self) -> Result<(), FlagError> {
        let ranks = self
            .word
            .local_ranks()
            .ok_or(FlagError::ZeroWord { letter_index: 0 })?;
        let gens = self.word.source().ring_gens();
        for (tuple, c) in &self.coeffs {
            if tuple.len() != ranks.len()
                || tuple.iter().zip(&ranks).any(|(k, r)| k >= r)
            {
                return Err(FlagError::TupleRange {
                    tuple: tuple.clone(),
                    ranks: ranks.clone(),
                });
            }
            if let Some(g) = first_violation(c, &gens) {
                return Err(FlagError::CoefficientRing { generator: g });
            }
        }
        Ok(())
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement, FlagError> {
        if self.word != other.word {
            return Err(FlagError::WordMismatch(format!(
                "{} vs {}",
                self.word, other.word
            )));
        }
        let mut coeffs = self.coeffs.clone();
        for (t, c) in &other.coeffs {
            let entry = coeffs.entry(t.clone()).or_insert_with(|| Poly::zero(c.num_vars()));
            *entry = entry.add(c);
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(TensorElement { word: self.word.clone(), coeffs })
    }

    pub fn scale(&self, c: &scalar::Q) -> TensorElement {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(t, p)| (t.clone(), p.scale(c)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        TensorElement { word: self.word.clone(), coeffs }
    }

    pub fn negate(&self) -> TensorElement {
        self.scale(&scalar::q_int(-1))
    }

    pub fn sub(&self, other: &TensorElement) -> Result<TensorElement, FlagError> {
        self.add(&other.negate())
    }

    /// Right action of `g ∈ R^a`.
    pub fn act_base(&self, g: &Poly) -> TensorElement {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(t, p)| (t.clone(), p.mul(g)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        TensorElement { word: self.word.clone(), coeffs }
    }

    /// Decompose back into raw pure tensors `(factors, coefficient)` with each
    /// factor the basis monomial of its slot.
    pub fn to_raw(&self) -> Vec<(Vec<Poly>, Poly)> {
        let pairs = self.word.slot_pairs().expect("canonical element of a nonzero word");
        self.coeffs
            .iter()
            .map(|(tuple, c)| {
                let factors = tuple
                    .iter()
                    .zip(&pairs)
                    .map(|(&k, pair)| pair.basis[k].clone())
                    .collect();
                (factors, c.clone())
            })
            .collect()
    }
}

/// Normalize a raw sum of pure tensors `Σ f_1 ⊗ … ⊗ f_n · c` into canonical
/// tuple form: every factor is expanded in its slot basis left to right, with
/// expansion coefficients pushed into the next slot.
pub fn normalize(
    word: &Word,
    raw: &[(Vec<Poly>, Poly)],
) -> Result<TensorElement, FlagError> {
    let n = word.len();
    let m = word.source().size();
    let objs = word
        .objects()
        .ok_or(FlagError::ZeroWord { letter_index: 0 })?;
    let pairs = word.slot_pairs().ok_or(FlagError::ZeroWord { letter_index: 0 })?;
    let base_gens = word.source().ring_gens();
    let mut coeffs: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();

    for (factors, trailing) in raw {
        if factors.len() != n {
            return Err(FlagError::WordMismatch(format!(
                "pure tensor has {} factors, word has {n} letters",
                factors.len()
            )));
        }
        // Membership check: each factor must lie in its refinement ring.
        for (j, f) in factors.iter().enumerate() {
            let gens = refinement_gens(&objs[j + 1], word.letters()[j]);
            if let Some(g) = first_violation(f, &gens) {
                return Err(FlagError::RingMembership { slot: j, generator: g });
            }
        }
        // Left-to-right expansion: states are (tuple prefix, multiplier to
        // fold into the next slot).
        let mut states: Vec<(Vec<usize>, Poly)> = vec![(Vec::new(), Poly::one(m))];
        for (j, f) in factors.iter().enumerate() {
            let mut next_states = Vec::new();
            for (prefix, carry) in &states {
                let content = f.mul(carry);
                for (k, coeff) in expand_in_basis(&pairs[j], &content)? {
                    let mut tuple = prefix.clone();
                    tuple.push(k);
                    next_states.push((tuple, coeff));
                }
            }
            states = next_states;
        }
        for (tuple, carry) in states {
            let c = carry.mul(trailing);
            if c.is_zero() {
                continue;
            }
            if let Some(g) = first_violation(&c, &base_gens) {
                return Err(FlagError::CoefficientRing { generator: g });
            }
            let entry = coeffs.entry(tuple).or_insert_with(|| Poly::zero(m));
            *entry = entry.add(&c);
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(TensorElement { word: word.clone(), coeffs })
}

/// Graded rank of the realization of `w` over `R^a`: the sum of
/// `q^(monomial degree + total shift)` over basis tuples; `0` for zero words.
pub fn graded_rank(w: &Word) -> LaurentQ {
    let (pairs, shift) = match (w.slot_pairs(), w.total_shift()) {
        (Some(p), Some(s)) => (p, s),
        _ => return LaurentQ::zero(),
    };
    let mut total = LaurentQ::monomial(shift, scalar::q_int(1));
    for pair in &pairs {
        let mut factor = LaurentQ::zero();
        for b in &pair.basis {
            let d = match b.degree() {
                Ok(polyring::Degree::Homogeneous(d)) => d,
                _ => 0,
            };
            factor = factor.add(&LaurentQ::monomial(d, scalar::q_int(1)));
        }
        total = total.mul(&factor);
    }
    total
}
