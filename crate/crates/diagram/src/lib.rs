//! Layered string-diagram calculus on words of raising/lowering letters.
//!
//! A [`Diagram`] is a vertical stack of layers over a bottom boundary
//! [`Word`]; each layer is a list of [`Atom`]s acting on disjoint strand
//! intervals, with uncovered strands passing through as implicit identities.
//! The module provides construction with full boundary validation, a
//! line-oriented DSL (parse/render round-trip), degree computation from the
//! local region weights, macro-expansion of the sideways crossings, and the
//! three diagram symmetries (generator-table based, with their inverses).
//!
//! Diagrams are purely syntactic: no isotopy or relation quotient is applied
//! here. Equality of the 2-morphisms they present is decided downstream by
//! the evaluation functor.

use std::fmt;

use flagcat::{weight_of, Dir, FlagError, FlagObject, Label, SignedLabel, Word};
use scalar::{q_int, Q};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("layer {layer}: {msg}")]
    Layer { layer: usize, msg: String },
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("boundary mismatch: {0}")]
    Boundary(String),
    #[error("word passes through an invalid object; weights are undefined ({0})")]
    ZeroWord(String),
    #[error("object has no negation partner within bound {bound}: {msg}")]
    Partner { bound: i64, msg: String },
    #[error(transparent)]
    Flag(#[from] FlagError),
}

/// One generating 2-morphism shape. Boundary conventions (left to right):
///
/// - `Id(s)`, `Dot(s, n)`: one strand `s`, unchanged.
/// - `CrossUp(i, j)`: two up-strands, bottom `E_i E_j`, top `E_j E_i`.
/// - `CrossDown(i, j)`: two down-strands, bottom `F_i F_j`, top `F_j F_i`.
/// - `CapCcw(i)`: closes bottom `E_i F_i` (counterclockwise cap).
/// - `CapCw(i)`: closes bottom `F_i E_i` (clockwise cap).
/// - `CupCcw(i)`: creates top `F_i E_i` (counterclockwise cup).
/// - `CupCw(i)`: creates top `E_i F_i` (clockwise cup).
/// - `ChiLeft(i, j)`: sideways crossing `F_j E_i → E_i F_j`.
/// - `ChiRight(i, j)`: sideways crossing `E_j F_i → F_i E_j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AtomKind {
    Id(SignedLabel),
    Dot(SignedLabel, u32),
    CrossUp(Label, Label),
    CrossDown(Label, Label),
    CapCcw(Label),
    CapCw(Label),
    CupCcw(Label),
    CupCw(Label),
    ChiLeft(Label, Label),
    ChiRight(Label, Label),
}

impl AtomKind {
    pub fn bottom_letters(&self) -> Vec<SignedLabel> {
        match *self {
            AtomKind::Id(s) | AtomKind::Dot(s, _) => vec![s],
            AtomKind::CrossUp(i, j) => vec![SignedLabel::e(i), SignedLabel::e(j)],
            AtomKind::CrossDown(i, j) => vec![SignedLabel::f(i), SignedLabel::f(j)],
            AtomKind::CapCcw(i) => vec![SignedLabel::e(i), SignedLabel::f(i)],
            AtomKind::CapCw(i) => vec![SignedLabel::f(i), SignedLabel::e(i)],
            AtomKind::CupCcw(_) | AtomKind::CupCw(_) => Vec::new(),
            AtomKind::ChiLeft(i, j) => vec![SignedLabel::f(j), SignedLabel::e(i)],
            AtomKind::ChiRight(i, j) => vec![SignedLabel::e(j), SignedLabel::f(i)],
        }
    }

    pub fn top_letters(&self) -> Vec<SignedLabel> {
        match *self {
            AtomKind::Id(s) | AtomKind::Dot(s, _) => vec![s],
            AtomKind::CrossUp(i, j) => vec![SignedLabel::e(j), SignedLabel::e(i)],
            AtomKind::CrossDown(i, j) => vec![SignedLabel::f(j), SignedLabel::f(i)],
            AtomKind::CapCcw(_) | AtomKind::CapCw(_) => Vec::new(),
            AtomKind::CupCcw(i) => vec![SignedLabel::f(i), SignedLabel::e(i)],
            AtomKind::CupCw(i) => vec![SignedLabel::e(i), SignedLabel::f(i)],
            AtomKind::ChiLeft(i, j) => vec![SignedLabel::e(i), SignedLabel::f(j)],
            AtomKind::ChiRight(i, j) => vec![SignedLabel::f(i), SignedLabel::e(j)],
        }
    }

    /// Number of bottom strands consumed (0 for cups).
    pub fn arity(&self) -> usize {
        self.bottom_letters().len()
    }

    pub fn is_cup(&self) -> bool {
        matches!(self, AtomKind::CupCcw(_) | AtomKind::CupCw(_))
    }

    pub fn is_chi(&self) -> bool {
        matches!(self, AtomKind::ChiLeft(..) | AtomKind::ChiRight(..))
    }
}

/// An atom placed in a layer. For consuming atoms `position` is the index of
/// their leftmost bottom strand; for cups it is the insertion point
/// `0 ..= n` between strands of the layer's bottom word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Atom {
    pub kind: AtomKind,
    pub position: usize,
}

impl Atom {
    pub fn new(kind: AtomKind, position: usize) -> Self {
        Atom { kind, position }
    }
}

/// Apply one layer to a letter sequence. Returns the canonically ordered
/// layer (sorted, explicit identities dropped) and the top letters.
fn apply_layer(
    letters: &[SignedLabel],
    layer: &[Atom],
) -> Result<(Vec<Atom>, Vec<SignedLabel>), String> {
    let mut sorted: Vec<Atom> = layer.to_vec();
    // Cups insert strictly left of the strand at their index, so order them
    // before a consuming atom at the same position.
    sorted.sort_by_key(|a| (a.position, !a.kind.is_cup() as u8));
    for w in sorted.windows(2) {
        if w[0].kind.is_cup() && w[1].kind.is_cup() && w[0].position == w[1].position {
            return Err(format!(
                "two cups at the same insertion point {} (ambiguous order)",
                w[0].position
            ));
        }
    }
    let mut out = Vec::new();
    let mut kept = Vec::new();
    let mut cursor = 0usize;
    for atom in sorted {
        let p = atom.position;
        let k = atom.kind.arity();
        if p < cursor {
            return Err(format!(
                "atom {:?} at position {p} overlaps an earlier atom in the layer",
                atom.kind
            ));
        }
        if p + k > letters.len() || (k == 0 && p > letters.len()) {
            return Err(format!(
                "atom {:?} at position {p} exceeds the boundary of length {}",
                atom.kind,
                letters.len()
            ));
        }
        out.extend_from_slice(&letters[cursor..p]);
        let expected = atom.kind.bottom_letters();
        let found = &letters[p..p + k];
        if expected != found {
            let shown: Vec<String> = found.iter().map(|l| l.to_string()).collect();
            let want: Vec<String> = expected.iter().map(|l| l.to_string()).collect();
            return Err(format!(
                "atom {:?} at position {p} expects [{}], boundary has [{}]",
                atom.kind,
                want.join(" "),
                shown.join(" ")
            ));
        }
        out.extend(atom.kind.top_letters());
        cursor = p + k;
        if !matches!(atom.kind, AtomKind::Id(_)) {
            kept.push(atom);
        }
    }
    out.extend_from_slice(&letters[cursor..]);
    Ok((kept, out))
}

/// A stack of validated layers over a bottom boundary word. Stored in
/// canonical form: each layer sorted left to right with explicit identity
/// atoms removed, plus the full list of boundary words (one more than the
/// number of layers).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    boundaries: Vec<Word>,
    layers: Vec<Vec<Atom>>,
}

impl Diagram {
    pub fn new(source: Word, layers: Vec<Vec<Atom>>) -> Result<Self, DiagramError> {
        let mut boundaries = vec![source];
        let mut canonical = Vec::with_capacity(layers.len());
        for (idx, layer) in layers.into_iter().enumerate() {
            let current = boundaries.last().unwrap();
            let (kept, top) = apply_layer(current.letters(), &layer)
                .map_err(|msg| DiagramError::Layer { layer: idx, msg })?;
            boundaries.push(Word::new(current.source().clone(), top));
            canonical.push(kept);
        }
        Ok(Diagram { boundaries, layers: canonical })
    }

    pub fn identity(word: Word) -> Self {
        Diagram { boundaries: vec![word], layers: Vec::new() }
    }

    /// Shared rightmost region object.
    pub fn object(&self) -> &FlagObject {
        self.boundaries[0].source()
    }

    pub fn source_word(&self) -> &Word {
        &self.boundaries[0]
    }

    pub fn target_word(&self) -> &Word {
        self.boundaries.last().unwrap()
    }

    /// All boundary words bottom to top (`layers.len() + 1` of them).
    pub fn boundaries(&self) -> &[Word] {
        &self.boundaries
    }

    pub fn layers(&self) -> &[Vec<Atom>] {
        &self.layers
    }

    /// Stack `upper` on top of `self`; boundaries must agree exactly.
    pub fn compose_vertical(&self, upper: &Diagram) -> Result<Diagram, DiagramError> {
        if self.target_word() != upper.source_word() {
            return Err(DiagramError::Boundary(format!(
                "lower top is {}, upper bottom is {}",
                self.target_word(),
                upper.source_word()
            )));
        }
        let mut boundaries = self.boundaries.clone();
        boundaries.extend(upper.boundaries[1..].iter().cloned());
        let mut layers = self.layers.clone();
        layers.extend(upper.layers.iter().cloned());
        Ok(Diagram { boundaries, layers })
    }

    /// Degree of one atom at its local weight (the region immediately to its
    /// right): dots 2 per mark; same-label crossings −2, adjacent +1, distant
    /// 0; counterclockwise cap and clockwise cup `1 − λ_i`; clockwise cap and
    /// counterclockwise cup `λ_i + 1 + δ_{i,◇}`; sideways crossings
    /// `δ_{i,j} δ_{i,◇}`.
    fn atom_degree(kind: AtomKind, right_object: &FlagObject) -> i64 {
        let lam = |i: Label| weight_of(right_object).component(i);
        let delta = |i: Label| if i.is_diamond() { 1 } else { 0 };
        match kind {
            AtomKind::Id(_) => 0,
            AtomKind::Dot(_, n) => 2 * n as i64,
            AtomKind::CrossUp(i, j) | AtomKind::CrossDown(i, j) => {
                if i == j {
                    -2
                } else if i.distance(j) == 1 {
                    1
                } else {
                    0
                }
            }
            AtomKind::CapCcw(i) | AtomKind::CupCw(i) => 1 - lam(i),
            AtomKind::CapCw(i) | AtomKind::CupCcw(i) => lam(i) + 1 + delta(i),
            AtomKind::ChiLeft(i, j) | AtomKind::ChiRight(i, j) => {
                if i == j && i.is_diamond() {
                    1
                } else {
                    0
                }
            }
        }
    }

    /// Total degree: the sum of atom degrees at their local weights. Errors
    /// if any boundary word passes through an invalid object (no weights).
    pub fn degree(&self) -> Result<i64, DiagramError> {
        let mut total = 0;
        for (w, layer) in self.boundaries.iter().zip(&self.layers) {
            let objs = w
                .objects()
                .ok_or_else(|| DiagramError::ZeroWord(w.to_string()))?;
            for atom in layer {
                let right = &objs[atom.position + atom.kind.arity()];
                total += Self::atom_degree(atom.kind, right);
            }
        }
        Ok(total)
    }

    /// Replace every sideways crossing by its defining three-layer composite:
    ///
    /// - `ChiRight(i,j)` at `p` → cup `(F_i,E_i)` at `p`, up-up crossing
    ///   `(i,j)` at `p+1`, cap `(E_i,F_i)` at `p+2`;
    /// - `ChiLeft(i,j)` at `p` → cup `(E_i,F_i)` at `p`, down-down crossing
    ///   `(i,j)` at `p+1`, cap `(F_i,E_i)` at `p+2`.
    ///
    /// Layers containing a sideways crossing are first split into one atom
    /// per layer, right to left (equivalent: supports are disjoint).
    pub fn expand_chi(&self) -> Diagram {
        let mut out_layers: Vec<Vec<Atom>> = Vec::new();
        for layer in &self.layers {
            if !layer.iter().any(|a| a.kind.is_chi()) {
                out_layers.push(layer.clone());
                continue;
            }
            for atom in layer.iter().rev() {
                match atom.kind {
                    AtomKind::ChiRight(i, j) => {
                        let p = atom.position;
                        out_layers.push(vec![Atom::new(AtomKind::CupCcw(i), p)]);
                        out_layers.push(vec![Atom::new(AtomKind::CrossUp(i, j), p + 1)]);
                        out_layers.push(vec![Atom::new(AtomKind::CapCcw(i), p + 2)]);
                    }
                    AtomKind::ChiLeft(i, j) => {
                        let p = atom.position;
                        out_layers.push(vec![Atom::new(AtomKind::CupCw(i), p)]);
                        out_layers.push(vec![Atom::new(AtomKind::CrossDown(i, j), p + 1)]);
                        out_layers.push(vec![Atom::new(AtomKind::CapCw(i), p + 2)]);
                    }
                    _ => out_layers.push(vec![*atom]),
                }
            }
        }
        Diagram::new(self.boundaries[0].clone(), out_layers)
            .expect("macro expansion preserves boundary chaining")
    }

    pub fn has_chi(&self) -> bool {
        self.layers.iter().flatten().any(|a| a.kind.is_chi())
    }
}

// ---------------------------------------------------------------------------
// DSL
// ---------------------------------------------------------------------------

fn parse_label(tok: &str, line: usize, column: usize) -> Result<Label, DiagramError> {
    let err = |msg: String| DiagramError::Syntax { line, column, msg };
    let (num, den) = tok
        .split_once('/')
        .ok_or_else(|| err(format!("expected half-integer label, got {tok:?}")))?;
    if den.trim() != "2" {
        return Err(err(format!("label denominator must be 2, got {tok:?}")));
    }
    let d: i64 = num
        .trim()
        .parse()
        .map_err(|e| err(format!("bad label {tok:?}: {e}")))?;
    Label::from_doubled(d).map_err(|e| err(e.to_string()))
}

fn parse_signed(tok: &str, line: usize, column: usize) -> Result<SignedLabel, DiagramError> {
    let tok = tok.trim();
    if let Some(rest) = tok.strip_prefix('+') {
        Ok(SignedLabel::e(parse_label(rest, line, column)?))
    } else if let Some(rest) = tok.strip_prefix('-') {
        Ok(SignedLabel::f(parse_label(rest, line, column)?))
    } else {
        Err(DiagramError::Syntax {
            line,
            column,
            msg: format!("strand must be signed (+i or -i), got {tok:?}"),
        })
    }
}

fn parse_atom(tok: &str, line: usize, column: usize) -> Result<Atom, DiagramError> {
    let err = |msg: String| DiagramError::Syntax { line, column, msg };
    let tok = tok.trim();
    let (head, rest) = tok
        .split_once('@')
        .ok_or_else(|| err(format!("atom {tok:?} is missing '@position'")))?;
    let position: usize = rest
        .trim()
        .parse()
        .map_err(|e| err(format!("bad position in {tok:?}: {e}")))?;
    let head = head.trim();
    let (name, args) = head
        .split_once('(')
        .ok_or_else(|| err(format!("atom {head:?} is missing its argument list")))?;
    let args = args
        .strip_suffix(')')
        .ok_or_else(|| err(format!("atom {head:?} has an unclosed argument list")))?;
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    let kind = match (name.trim(), parts.as_slice()) {
        ("id", [s]) => AtomKind::Id(parse_signed(s, line, column)?),
        ("dot", [s, n]) => {
            let count: u32 = n
                .parse()
                .map_err(|e| err(format!("bad dot count {n:?}: {e}")))?;
            AtomKind::Dot(parse_signed(s, line, column)?, count)
        }
        ("x", [i, j, dir]) => {
            let i = parse_label(i, line, column)?;
            let j = parse_label(j, line, column)?;
            match *dir {
                "up" => AtomKind::CrossUp(i, j),
                "down" => AtomKind::CrossDown(i, j),
                other => return Err(err(format!("crossing direction must be up|down, got {other:?}"))),
            }
        }
        ("cap", [i, orient]) => {
            let i = parse_label(i, line, column)?;
            match *orient {
                "ccw" => AtomKind::CapCcw(i),
                "cw" => AtomKind::CapCw(i),
                other => return Err(err(format!("cap orientation must be cw|ccw, got {other:?}"))),
            }
        }
        ("cup", [i, orient]) => {
            let i = parse_label(i, line, column)?;
            match *orient {
                "ccw" => AtomKind::CupCcw(i),
                "cw" => AtomKind::CupCw(i),
                other => return Err(err(format!("cup orientation must be cw|ccw, got {other:?}"))),
            }
        }
        ("chi", [i, j, side]) => {
            let i = parse_label(i, line, column)?;
            let j = parse_label(j, line, column)?;
            match *side {
                "l" => AtomKind::ChiLeft(i, j),
                "r" => AtomKind::ChiRight(i, j),
                other => return Err(err(format!("chi side must be l|r, got {other:?}"))),
            }
        }
        (other, _) => {
            return Err(err(format!(
                "unknown atom {other:?} (expected id, dot, x, cap, cup, chi) or wrong arity"
            )))
        }
    };
    Ok(Atom { kind, position })
}

fn render_label(i: Label) -> String {
    format!("{}/2", i.doubled())
}

fn render_signed(s: SignedLabel) -> String {
    format!("{}{}", if s.is_e() { '+' } else { '-' }, render_label(s.label))
}

fn render_atom(a: &Atom) -> String {
    let head = match a.kind {
        AtomKind::Id(s) => format!("id({})", render_signed(s)),
        AtomKind::Dot(s, n) => format!("dot({},{n})", render_signed(s)),
        AtomKind::CrossUp(i, j) => format!("x({},{},up)", render_label(i), render_label(j)),
        AtomKind::CrossDown(i, j) => format!("x({},{},down)", render_label(i), render_label(j)),
        AtomKind::CapCcw(i) => format!("cap({},ccw)", render_label(i)),
        AtomKind::CapCw(i) => format!("cap({},cw)", render_label(i)),
        AtomKind::CupCcw(i) => format!("cup({},ccw)", render_label(i)),
        AtomKind::CupCw(i) => format!("cup({},cw)", render_label(i)),
        AtomKind::ChiLeft(i, j) => format!("chi({},{},l)", render_label(i), render_label(j)),
        AtomKind::ChiRight(i, j) => format!("chi({},{},r)", render_label(i), render_label(j)),
    };
    format!("{head}@{}", a.position)
}

/// Parse the line-oriented DSL:
///
/// ```text
/// object a=1,2; r=2; m=3
/// bottom E(1/2) F(1/2)
/// layer cap(1/2,ccw)@0
/// ```
///
/// Blank lines and `#` comment lines are skipped. Atom lists are
/// comma-separated; strands not covered by an atom are implicit identities.
pub fn parse(text: &str) -> Result<Diagram, DiagramError> {
    let mut object: Option<FlagObject> = None;
    let mut bottom: Option<Vec<SignedLabel>> = None;
    let mut layers: Vec<(usize, Vec<Atom>)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |column: usize, msg: String| DiagramError::Syntax { line, column, msg };
        if let Some(rest) = trimmed.strip_prefix("object") {
            let mut a: Option<Vec<i64>> = None;
            let mut r: Option<usize> = None;
            let mut m: Option<usize> = None;
            for part in rest.split(';') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let col = raw.find(part).map(|c| c + 1).unwrap_or(1);
                if let Some(v) = part.strip_prefix("a=") {
                    let entries = if v.trim().is_empty() {
                        Vec::new()
                    } else {
                        v.split(',')
                            .map(|t| {
                                t.trim()
                                    .parse::<i64>()
                                    .map_err(|e| err(col, format!("bad entry {t:?}: {e}")))
                            })
                            .collect::<Result<Vec<_>, _>>()?
                    };
                    a = Some(entries);
                } else if let Some(v) = part.strip_prefix("r=") {
                    r = Some(v.trim().parse().map_err(|e| err(col, format!("bad r: {e}")))?);
                } else if let Some(v) = part.strip_prefix("m=") {
                    m = Some(v.trim().parse().map_err(|e| err(col, format!("bad m: {e}")))?);
                } else {
                    return Err(err(col, format!("unexpected object field {part:?}")));
                }
            }
            let a = a.ok_or_else(|| err(1, "object line is missing a=".into()))?;
            let r = r.ok_or_else(|| err(1, "object line is missing r=".into()))?;
            let m = m.ok_or_else(|| err(1, "object line is missing m=".into()))?;
            object = Some(FlagObject::new(r, m, a).map_err(|e| err(1, e.to_string()))?);
        } else if let Some(rest) = trimmed.strip_prefix("bottom") {
            let mut letters = Vec::new();
            for tok in rest.split_whitespace() {
                if tok == "1" {
                    continue;
                }
                let col = raw.find(tok).map(|c| c + 1).unwrap_or(1);
                let (dir, inner) = if let Some(v) = tok.strip_prefix("E(") {
                    (Dir::Up, v)
                } else if let Some(v) = tok.strip_prefix("F(") {
                    (Dir::Down, v)
                } else {
                    return Err(err(col, format!("bad letter {tok:?} (expected E(i) or F(i))")));
                };
                let inner = inner
                    .strip_suffix(')')
                    .ok_or_else(|| err(col, format!("unclosed letter {tok:?}")))?;
                let label = parse_label(inner, line, col)?;
                letters.push(SignedLabel { label, dir });
            }
            bottom = Some(letters);
        } else if let Some(rest) = trimmed.strip_prefix("layer") {
            // Atom argument lists contain commas, so splitting the layer on
            // ',' can break an atom apart; merge pieces back until the
            // parentheses balance.
            let mut merged: Vec<String> = Vec::new();
            for piece in rest.split(',') {
                match merged.last_mut() {
                    Some(last)
                        if last.matches('(').count() != last.matches(')').count() =>
                    {
                        last.push(',');
                        last.push_str(piece);
                    }
                    _ => merged.push(piece.to_string()),
                }
            }
            let mut parsed = Vec::new();
            for tok in merged {
                let tok = tok.trim().to_string();
                if tok.is_empty() {
                    continue;
                }
                let col = raw.find(tok.as_str()).map(|c| c + 1).unwrap_or(1);
                parsed.push(parse_atom(&tok, line, col)?);
            }
            layers.push((line, parsed));
        } else {
            return Err(err(
                1,
                format!("unknown directive {trimmed:?} (expected object, bottom, layer)"),
            ));
        }
    }
    let object = object.ok_or(DiagramError::Syntax {
        line: 1,
        column: 1,
        msg: "missing object line".into(),
    })?;
    let bottom = bottom.ok_or(DiagramError::Syntax {
        line: 1,
        column: 1,
        msg: "missing bottom line".into(),
    })?;
    let source = Word::new(object, bottom);
    Diagram::new(source, layers.into_iter().map(|(_, l)| l).collect())
}

/// Render to the canonical DSL form; `parse(render(d)) == d`.
pub fn render(d: &Diagram) -> String {
    let obj = d.object();
    let mut out = String::new();
    out.push_str(&format!(
        "object a={}; r={}; m={}\n",
        obj.entries()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(","),
        obj.rank(),
        obj.size()
    ));
    let letters: Vec<String> = d
        .source_word()
        .letters()
        .iter()
        .map(|l| l.to_string())
        .collect();
    if letters.is_empty() {
        out.push_str("bottom 1\n");
    } else {
        out.push_str(&format!("bottom {}\n", letters.join(" ")));
    }
    for layer in d.layers() {
        let rendered: Vec<String> = layer.iter().map(render_atom).collect();
        out.push_str(&format!("layer {}\n", rendered.join(", ")));
    }
    out
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

// ---------------------------------------------------------------------------
// Negation partner objects
// ---------------------------------------------------------------------------

/// Gap coordinates of an object: `[2a_◇, a_{◇+1}−a_◇, …, m−a_{r−◇}]`
/// (length `r + 1`). Weight components are successive differences:
/// `λ_i = gap_i − gap_{i+1}`.
pub fn gap_coords(o: &FlagObject) -> Vec<i64> {
    let r = o.rank();
    let mut b = Vec::with_capacity(r + 1);
    b.push(2 * o.entry_ext(0));
    for p in 1..r {
        b.push(o.entry_ext(p as isize) - o.entry_ext(p as isize - 1));
    }
    b.push(o.size() as i64 - o.entry_ext(r as isize - 1));
    b
}

/// Smallest admissible odd reflection bound for `negation_partner_with`.
pub fn partner_bound(o: &FlagObject) -> i64 {
    let b = gap_coords(o);
    let mut need = b[0] + 1;
    for &g in &b[1..] {
        need = need.max(g);
    }
    if need % 2 == 0 {
        need + 1
    } else {
        need
    }
}

/// The object realizing the negated-shifted weight `−λ(o) − ϖ` obtained by
/// reflecting every gap coordinate in the odd bound `k`: ordinary gaps map to
/// `k − g`, the doubled first gap to `k − 1 − g`. Requires `k` odd and at
/// least `partner_bound(o)`. With a fixed `k` this reflection exchanges the
/// raising and lowering steps exactly, and it is an involution.
pub fn negation_partner_with(o: &FlagObject, k: i64) -> Result<FlagObject, DiagramError> {
    if k % 2 == 0 || k < partner_bound(o) {
        return Err(DiagramError::Partner {
            bound: partner_bound(o),
            msg: format!("bound {k} is even or too small for {o}"),
        });
    }
    let b = gap_coords(o);
    let r = o.rank();
    let mut a = Vec::with_capacity(r);
    let mut acc = (k - 1 - b[0]) / 2;
    a.push(acc);
    for &g in b.iter().take(r).skip(1) {
        acc += k - g;
        a.push(acc);
    }
    let m = (acc + (k - b[r])) as usize;
    FlagObject::new(r, m, a).map_err(DiagramError::from)
}

/// `negation_partner_with` at the smallest admissible bound.
pub fn negation_partner(o: &FlagObject) -> Result<FlagObject, DiagramError> {
    negation_partner_with(o, partner_bound(o))
}

// ---------------------------------------------------------------------------
// Symmetries
// ---------------------------------------------------------------------------

/// The three diagram symmetries and the inverses of the two non-involutive
/// ones: `Psi` flips diagrams upside down (contravariant, weights fixed);
/// `Omega` reverses all strand orientations (covariant, weights negated and
/// shifted); `Sigma` mirrors diagrams left to right (contravariant on
/// 1-morphisms, weights negated and shifted).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Symmetry {
    Psi,
    Omega,
    OmegaInv,
    Sigma,
    SigmaInv,
}

/// Scalar-carrying atom image under `Omega`/`OmegaInv`/`Sigma`/`SigmaInv`.
/// `mirror` controls label order on crossings (true for the mirror
/// symmetries).
fn atom_image(kind: AtomKind, which: Symmetry) -> (AtomKind, Q) {
    let two_pow = |e: i64, i: Label| -> Q {
        if i.is_diamond() {
            if e >= 0 {
                q_int(1 << e)
            } else {
                scalar::q_ratio(1, 1 << (-e))
            }
        } else {
            q_int(1)
        }
    };
    match which {
        Symmetry::Psi => {
            let image = match kind {
                AtomKind::Id(s) => AtomKind::Id(s),
                AtomKind::Dot(s, n) => AtomKind::Dot(s, n),
                AtomKind::CrossUp(i, j) => AtomKind::CrossUp(j, i),
                AtomKind::CrossDown(i, j) => AtomKind::CrossDown(j, i),
                AtomKind::CapCcw(i) => AtomKind::CupCw(i),
                AtomKind::CapCw(i) => AtomKind::CupCcw(i),
                AtomKind::CupCcw(i) => AtomKind::CapCw(i),
                AtomKind::CupCw(i) => AtomKind::CapCcw(i),
                AtomKind::ChiLeft(..) | AtomKind::ChiRight(..) => {
                    unreachable!("sideways crossings are expanded before symmetries")
                }
            };
            (image, q_int(1))
        }
        Symmetry::Omega => match kind {
            AtomKind::Id(s) => (AtomKind::Id(s.flip()), q_int(1)),
            AtomKind::Dot(s, n) => (AtomKind::Dot(s.flip(), n), q_int(1)),
            AtomKind::CrossUp(i, j) => (AtomKind::CrossDown(i, j), q_int(-1)),
            AtomKind::CrossDown(i, j) => (AtomKind::CrossUp(i, j), q_int(-1)),
            AtomKind::CupCcw(i) => (AtomKind::CupCw(i), two_pow(-1, i)),
            AtomKind::CupCw(i) => (AtomKind::CupCcw(i), q_int(1)),
            AtomKind::CapCcw(i) => (AtomKind::CapCw(i), two_pow(1, i)),
            AtomKind::CapCw(i) => (AtomKind::CapCcw(i), q_int(1)),
            AtomKind::ChiLeft(..) | AtomKind::ChiRight(..) => {
                unreachable!("sideways crossings are expanded before symmetries")
            }
        },
        Symmetry::OmegaInv => match kind {
            AtomKind::Id(s) => (AtomKind::Id(s.flip()), q_int(1)),
            AtomKind::Dot(s, n) => (AtomKind::Dot(s.flip(), n), q_int(1)),
            AtomKind::CrossUp(i, j) => (AtomKind::CrossDown(i, j), q_int(-1)),
            AtomKind::CrossDown(i, j) => (AtomKind::CrossUp(i, j), q_int(-1)),
            AtomKind::CupCcw(i) => (AtomKind::CupCw(i), q_int(1)),
            AtomKind::CupCw(i) => (AtomKind::CupCcw(i), two_pow(1, i)),
            AtomKind::CapCcw(i) => (AtomKind::CapCw(i), q_int(1)),
            AtomKind::CapCw(i) => (AtomKind::CapCcw(i), two_pow(-1, i)),
            AtomKind::ChiLeft(..) | AtomKind::ChiRight(..) => {
                unreachable!("sideways crossings are expanded before symmetries")
            }
        },
        Symmetry::Sigma => match kind {
            AtomKind::Id(s) => (AtomKind::Id(s), q_int(1)),
            AtomKind::Dot(s, n) => (AtomKind::Dot(s, n), q_int(1)),
            AtomKind::CrossUp(i, j) => (AtomKind::CrossUp(j, i), q_int(-1)),
            AtomKind::CrossDown(i, j) => (AtomKind::CrossDown(j, i), q_int(-1)),
            AtomKind::CupCcw(i) => (AtomKind::CupCw(i), two_pow(-1, i)),
            AtomKind::CupCw(i) => (AtomKind::CupCcw(i), q_int(1)),
            AtomKind::CapCcw(i) => (AtomKind::CapCw(i), two_pow(1, i)),
            AtomKind::CapCw(i) => (AtomKind::CapCcw(i), q_int(1)),
            AtomKind::ChiLeft(..) | AtomKind::ChiRight(..) => {
                unreachable!("sideways crossings are expanded before symmetries")
            }
        },
        Symmetry::SigmaInv => match kind {
            AtomKind::Id(s) => (AtomKind::Id(s), q_int(1)),
            AtomKind::Dot(s, n) => (AtomKind::Dot(s, n), q_int(1)),
            AtomKind::CrossUp(i, j) => (AtomKind::CrossUp(j, i), q_int(-1)),
            AtomKind::CrossDown(i, j) => (AtomKind::CrossDown(j, i), q_int(-1)),
            AtomKind::CupCcw(i) => (AtomKind::CupCw(i), q_int(1)),
            AtomKind::CupCw(i) => (AtomKind::CupCcw(i), two_pow(1, i)),
            AtomKind::CapCcw(i) => (AtomKind::CapCw(i), q_int(1)),
            AtomKind::CapCw(i) => (AtomKind::CapCcw(i), two_pow(-1, i)),
            AtomKind::ChiLeft(..) | AtomKind::ChiRight(..) => {
                unreachable!("sideways crossings are expanded before symmetries")
            }
        },
    }
}

/// Odd reflection bound large enough for every region of every boundary word
/// of the diagram.
fn diagram_partner_bound(d: &Diagram) -> Result<i64, DiagramError> {
    let mut need = 1i64;
    for w in d.boundaries() {
        let objs = w
            .objects()
            .ok_or_else(|| DiagramError::ZeroWord(w.to_string()))?;
        for o in &objs {
            need = need.max(partner_bound(o));
        }
    }
    Ok(need)
}

/// Apply a symmetry. Returns the transformed diagram together with the
/// accumulated unit (sign times a power of 2). Sideways crossings are
/// macro-expanded first; boundary words must avoid invalid objects.
pub fn symmetry(d: &Diagram, which: Symmetry) -> Result<(Diagram, Q), DiagramError> {
    let d = if d.has_chi() { d.expand_chi() } else { d.clone() };
    match which {
        Symmetry::Psi => {
            let mut scalar = q_int(1);
            let mut layers: Vec<Vec<Atom>> = Vec::new();
            for layer in d.layers().iter().rev() {
                let mut new_layer = Vec::with_capacity(layer.len());
                let mut delta: i64 = 0;
                for atom in layer {
                    let (image, c) = atom_image(atom.kind, Symmetry::Psi);
                    scalar = &scalar * &c;
                    let top_pos = (atom.position as i64 + delta) as usize;
                    delta += atom.kind.top_letters().len() as i64
                        - atom.kind.arity() as i64;
                    new_layer.push(Atom::new(image, top_pos));
                }
                layers.push(new_layer);
            }
            let source = d.target_word().clone();
            Ok((Diagram::new(source, layers)?, scalar))
        }
        Symmetry::Omega | Symmetry::OmegaInv => {
            let k = diagram_partner_bound(&d)?;
            let new_object = negation_partner_with(d.object(), k)?;
            let letters: Vec<SignedLabel> = d
                .source_word()
                .letters()
                .iter()
                .map(|l| l.flip())
                .collect();
            let mut scalar = q_int(1);
            let mut layers = Vec::with_capacity(d.layers().len());
            for layer in d.layers() {
                let mut new_layer = Vec::with_capacity(layer.len());
                for atom in layer {
                    let (image, c) = atom_image(atom.kind, which);
                    scalar = &scalar * &c;
                    new_layer.push(Atom::new(image, atom.position));
                }
                layers.push(new_layer);
            }
            Ok((Diagram::new(Word::new(new_object, letters), layers)?, scalar))
        }
        Symmetry::Sigma | Symmetry::SigmaInv => {
            let k = diagram_partner_bound(&d)?;
            let left = d
                .source_word()
                .target()
                .ok_or_else(|| DiagramError::ZeroWord(d.source_word().to_string()))?;
            let new_object = negation_partner_with(&left, k)?;
            let letters: Vec<SignedLabel> = d
                .source_word()
                .letters()
                .iter()
                .rev()
                .copied()
                .collect();
            let mut scalar = q_int(1);
            let mut layers = Vec::with_capacity(d.layers().len());
            for (w, layer) in d.boundaries().iter().zip(d.layers()) {
                let n = w.len();
                let mut new_layer = Vec::with_capacity(layer.len());
                for atom in layer {
                    let (image, c) = atom_image(atom.kind, which);
                    scalar = &scalar * &c;
                    let new_pos = n - atom.kind.arity() - atom.position;
                    new_layer.push(Atom::new(image, new_pos));
                }
                layers.push(new_layer);
            }
            Ok((Diagram::new(Word::new(new_object, letters), layers)?, scalar))
        }
    }
}
