//! Oracles for the diagram evaluation engine: hand-computed endpoint values,
//! bubble normalizations and series identities, homogeneity of every
//! generator, and functoriality under vertical composition.

use std::collections::BTreeMap;

use diagram::{Atom, AtomKind, Diagram};
use flagcat::{normalize, step, weight_of, FlagObject, Label, SignedLabel, Word};
use gamma::{bubble, circle_diagram, equal, eval_diagram, scalar_value, tuples, OperatorMatrix};
use polyring::Poly;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use scalar::{q_int, q_ratio, Q};

fn lab(idx: usize) -> Label {
    Label::from_index(idx)
}

fn e(idx: usize) -> SignedLabel {
    SignedLabel::e(lab(idx))
}

fn f(idx: usize) -> SignedLabel {
    SignedLabel::f(lab(idx))
}

fn obj(r: usize, m: usize, a: &[i64]) -> FlagObject {
    FlagObject::new(r, m, a.to_vec()).unwrap()
}

fn word(o: &FlagObject, letters: &[SignedLabel]) -> Word {
    Word::new(o.clone(), letters.to_vec())
}

fn diag(o: &FlagObject, letters: &[SignedLabel], layers: Vec<Vec<Atom>>) -> Diagram {
    Diagram::new(word(o, letters), layers).unwrap()
}

#[test]
fn tuple_enumeration_is_lexicographic() {
    assert_eq!(tuples(&[]), vec![Vec::<usize>::new()]);
    assert_eq!(
        tuples(&[2, 3]),
        vec![
            vec![0, 0],
            vec![0, 1],
            vec![0, 2],
            vec![1, 0],
            vec![1, 1],
            vec![1, 2]
        ]
    );
}

#[test]
fn identity_matrix_fixes_every_element() {
    let a = obj(2, 3, &[0, 2]);
    let w = word(&a, &[e(0), f(1)]);
    let ranks = w.local_ranks().unwrap();
    let id = OperatorMatrix::identity(w.clone()).unwrap();
    assert_eq!(id.columns().len(), ranks.iter().product::<usize>());
    // A non-basis element round-trips unchanged.
    let m = a.size();
    let raw = vec![(
        vec![Poly::var(m, 1).pow(2), Poly::var(m, 2)],
        Poly::var(m, 3),
    )];
    let elt = normalize(&w, &raw).unwrap();
    assert!(!elt.is_zero());
    assert_eq!(id.apply(&elt).unwrap(), elt);
    assert!(id.is_homogeneous_of(0));
}

#[test]
fn zero_words_evaluate_to_the_zero_matrix() {
    // One lowering strand below the bottom diamond value: the word itself is
    // the zero 1-morphism.
    let a = obj(1, 1, &[0]);
    let w = word(&a, &[f(0)]);
    assert!(w.is_zero());
    let d = Diagram::new(w.clone(), vec![vec![Atom::new(AtomKind::Dot(f(0), 1), 0)]]).unwrap();
    let mat = eval_diagram(&d).unwrap();
    assert!(mat.is_zero());
    assert_eq!(mat.source(), &w);
    assert_eq!(mat.target(), &w);
    // A cup whose raising letter annihilates the region also kills the stack.
    let top_zero = Diagram::new(
        Word::identity(obj(1, 2, &[2])),
        vec![vec![Atom::new(AtomKind::CupCcw(lab(0)), 0)]],
    )
    .unwrap();
    assert!(top_zero.target_word().is_zero());
    assert!(eval_diagram(&top_zero).unwrap().is_zero());
}

/// The two sideways crossings on a single diamond pair, applied to the unit
/// basis vector: one is the negated unit of the flipped word, the other the
/// sum of the two first-power vectors.
#[test]
fn sideways_crossing_endpoint_values() {
    for a in [obj(1, 2, &[1]), obj(1, 3, &[1]), obj(2, 3, &[1, 2])] {
        let m = a.size();
        let var = Poly::var(m, (a.entries()[0] + 1) as usize);
        let one = Poly::one(m);

        let left = diag(
            &a,
            &[f(0), e(0)],
            vec![vec![Atom::new(AtomKind::ChiLeft(lab(0), lab(0)), 0)]],
        );
        let mat = eval_diagram(&left).unwrap();
        let expected = normalize(
            &word(&a, &[e(0), f(0)]),
            &[(vec![one.clone(), one.clone()], one.scale(&q_int(-1)))],
        )
        .unwrap();
        assert_eq!(mat.column(&[0, 0]).unwrap(), &expected, "chi-left at {a}");

        let right = diag(
            &a,
            &[e(0), f(0)],
            vec![vec![Atom::new(AtomKind::ChiRight(lab(0), lab(0)), 0)]],
        );
        let mat = eval_diagram(&right).unwrap();
        let expected = normalize(
            &word(&a, &[f(0), e(0)]),
            &[
                (vec![var.clone(), one.clone()], one.clone()),
                (vec![one.clone(), var.clone()], one.clone()),
            ],
        )
        .unwrap();
        assert_eq!(mat.column(&[0, 0]).unwrap(), &expected, "chi-right at {a}");
    }
}

/// The clockwise cap on a lowering-raising diamond pair sends the unit to
/// 1/2 exactly when the first gap above the diamond is one step wide.
#[test]
fn clockwise_cap_on_unit() {
    let cases = [
        (obj(1, 2, &[1]), Some(q_ratio(1, 2))),
        (obj(1, 3, &[1]), None),
        (obj(2, 3, &[1, 2]), Some(q_ratio(1, 2))),
    ];
    for (a, expect) in cases {
        let d = diag(
            &a,
            &[f(0), e(0)],
            vec![vec![Atom::new(AtomKind::CapCw(lab(0)), 0)]],
        );
        let mat = eval_diagram(&d).unwrap();
        match expect {
            None => assert!(
                mat.column(&[0, 0]).map_or(true, |c| c.is_zero()),
                "cap at {a}"
            ),
            Some(c) => {
                let col = mat.column(&[0, 0]).unwrap();
                let coeff = col.coeffs().get(&Vec::new()).unwrap();
                assert_eq!(coeff, &Poly::one(a.size()).scale(&c), "cap at {a}");
            }
        }
    }
}

/// Both cups at the diamond over the one-step object in two variables,
/// frozen entry by entry.
#[test]
fn cup_insertions_at_the_diamond() {
    let a = obj(1, 2, &[1]);
    let t1 = Poly::var(2, 1);
    let t2 = Poly::var(2, 2);

    // Clockwise cup: twice the dual-pair sum for the split of [t1, t2] at 1.
    let d = Diagram::new(
        Word::identity(a.clone()),
        vec![vec![Atom::new(AtomKind::CupCw(lab(0)), 0)]],
    )
    .unwrap();
    let mat = eval_diagram(&d).unwrap();
    let col = mat.column(&[]).unwrap();
    let mut expect = BTreeMap::new();
    expect.insert(vec![0, 0], t2.scale(&q_int(-2)));
    expect.insert(vec![1, 0], Poly::one(2).scale(&q_int(2)));
    assert_eq!(col.coeffs(), &expect);

    // Counterclockwise cup: the dual-pair sum for the signed block of rank 4.
    let d = Diagram::new(
        Word::identity(a.clone()),
        vec![vec![Atom::new(AtomKind::CupCcw(lab(0)), 0)]],
    )
    .unwrap();
    let mat = eval_diagram(&d).unwrap();
    let col = mat.column(&[]).unwrap();
    let mut expect = BTreeMap::new();
    expect.insert(vec![0, 0], t1.pow(2).mul(&t2).scale(&q_int(-1)));
    expect.insert(vec![1, 0], t1.pow(2).scale(&q_int(-1)));
    expect.insert(vec![2, 0], t2.clone());
    expect.insert(vec![3, 0], Poly::one(2));
    assert_eq!(col.coeffs(), &expect);
}

fn sweep_objects(max_r: usize, max_m: usize) -> Vec<FlagObject> {
    let mut out = Vec::new();
    for r in 1..=max_r {
        for m in 1..=max_m {
            out.extend(FlagObject::all(r, m));
        }
    }
    out
}

#[test]
fn bubble_normalizations_and_thresholds() {
    for a in sweep_objects(2, 3) {
        let m = a.size();
        let lamv = weight_of(&a);
        for idx in 0..a.rank() {
            let i = lab(idx);
            let lam = lamv.component(i);
            let delta = if i.is_diamond() { 1 } else { 0 };
            // Normalization values.
            assert_eq!(
                bubble(i, lam - 1, true, &a),
                Poly::one(m).scale(&q_int(1 << delta)),
                "cw normalization at {a}, label {idx}"
            );
            assert_eq!(
                bubble(i, -lam - 1 - delta, false, &a),
                Poly::one(m),
                "ccw normalization at {a}, label {idx}"
            );
            // Everything below threshold vanishes.
            for back in 1..=4 {
                assert!(bubble(i, lam - 1 - back, true, &a).is_zero());
                assert!(bubble(i, -lam - 1 - delta - back, false, &a).is_zero());
            }
            // Homogeneity of the nonzero values.
            for extra in 1..=3 {
                let cw = bubble(i, lam - 1 + extra, true, &a);
                if !cw.is_zero() {
                    assert_eq!(
                        cw.degree().unwrap(),
                        polyring::Degree::Homogeneous(2 * extra),
                        "cw degree at {a}"
                    );
                }
                let ccw = bubble(i, -lam - 1 - delta + extra, false, &a);
                if !ccw.is_zero() {
                    assert_eq!(
                        ccw.degree().unwrap(),
                        polyring::Degree::Homogeneous(2 * extra),
                        "ccw degree at {a}"
                    );
                }
            }
        }
    }
}

/// Real closed circles with dots agree with the closed formulas.
#[test]
fn circle_diagrams_match_closed_formulas() {
    for a in sweep_objects(2, 3) {
        for idx in 0..a.rank() {
            let i = lab(idx);
            for s in 0..=3u32 {
                for cw in [true, false] {
                    let d = circle_diagram(i, s, cw, &a).unwrap();
                    let v = scalar_value(&d).unwrap();
                    assert_eq!(
                        v,
                        bubble(i, s as i64, cw, &a),
                        "circle {} dots, cw={cw}, label {idx}, at {a}",
                        s
                    );
                }
            }
        }
    }
}

/// The generating series of clockwise and counterclockwise bubble values are
/// inverse to each other up to the factor 2^δ: every mixed convolution of
/// total dot count above the base point vanishes, through degree 10.
#[test]
fn bubble_series_product_telescopes() {
    for a in sweep_objects(3, 4) {
        let m = a.size();
        let lamv = weight_of(&a);
        for idx in 0..a.rank() {
            let i = lab(idx);
            let lam = lamv.component(i);
            let delta = if i.is_diamond() { 1 } else { 0 };
            for n in 0..=10i64 {
                let mut acc = Poly::zero(m);
                for l in 0..=n {
                    let t = lam - 1 + l;
                    let s = -lam - 1 - delta + (n - l);
                    acc = acc.add(&bubble(i, t, true, &a).mul(&bubble(i, s, false, &a)));
                }
                let expect = if n == 0 {
                    Poly::one(m).scale(&q_int(1 << delta))
                } else {
                    Poly::zero(m)
                };
                assert_eq!(acc, expect, "series coefficient n={n} at {a}, label {idx}");
            }
        }
    }
}

/// The recursion characterizing formally-dotted diamond circles: twice a
/// counterclockwise value equals minus the convolution with all higher
/// clockwise values.
#[test]
fn fake_diamond_bubbles_satisfy_the_recursion() {
    for a in sweep_objects(3, 4) {
        let i = lab(0);
        let lam = weight_of(&a).component(i);
        for alpha in 1..=6i64 {
            let lhs = bubble(i, -lam - 2 + alpha, false, &a).scale(&q_int(2));
            let mut rhs = Poly::zero(a.size());
            for l in 1..=alpha {
                let term = bubble(i, lam - 1 + l, true, &a)
                    .mul(&bubble(i, -lam - 2 + alpha - l, false, &a));
                rhs = rhs.sub(&term);
            }
            assert_eq!(lhs, rhs, "recursion alpha={alpha} at {a}");
        }
    }
}

/// Every generator evaluates to a homogeneous matrix of its listed degree,
/// over all regions with at most three strand labels in at most four
/// variables.
#[test]
fn generators_evaluate_homogeneously() {
    for a in sweep_objects(3, 4) {
        let r = a.rank();
        let mut atoms: Vec<(Vec<SignedLabel>, AtomKind)> = Vec::new();
        for idx in 0..r {
            for n in 1..=2u32 {
                atoms.push((vec![e(idx)], AtomKind::Dot(e(idx), n)));
                atoms.push((vec![f(idx)], AtomKind::Dot(f(idx), n)));
            }
            atoms.push((vec![e(idx), f(idx)], AtomKind::CapCcw(lab(idx))));
            atoms.push((vec![f(idx), e(idx)], AtomKind::CapCw(lab(idx))));
            atoms.push((Vec::new(), AtomKind::CupCcw(lab(idx))));
            atoms.push((Vec::new(), AtomKind::CupCw(lab(idx))));
            for jdx in 0..r {
                atoms.push((
                    vec![e(idx), e(jdx)],
                    AtomKind::CrossUp(lab(idx), lab(jdx)),
                ));
                atoms.push((
                    vec![f(idx), f(jdx)],
                    AtomKind::CrossDown(lab(idx), lab(jdx)),
                ));
                atoms.push((
                    vec![e(jdx), f(idx)],
                    AtomKind::ChiRight(lab(idx), lab(jdx)),
                ));
                atoms.push((
                    vec![f(jdx), e(idx)],
                    AtomKind::ChiLeft(lab(idx), lab(jdx)),
                ));
            }
        }
        for (letters, kind) in atoms {
            let w = word(&a, &letters);
            let d = Diagram::new(w, vec![vec![Atom::new(kind, 0)]]).unwrap();
            if d.source_word().is_zero() || d.target_word().is_zero() {
                continue;
            }
            let deg = d.degree().unwrap();
            let mat = eval_diagram(&d).unwrap();
            assert!(
                mat.is_homogeneous_of(deg),
                "degree {deg} fails for {kind:?} at {a}"
            );
        }
    }
}

#[test]
fn json_export_mentions_both_boundaries() {
    let a = obj(1, 2, &[1]);
    let d = diag(
        &a,
        &[f(0), e(0)],
        vec![vec![Atom::new(AtomKind::CapCw(lab(0)), 0)]],
    );
    let mat = eval_diagram(&d).unwrap();
    let js = mat.to_json();
    let text = js.to_string();
    assert!(text.contains("source"));
    assert!(text.contains("target"));
    assert!(js["columns"].as_array().is_some());
}

// ---- randomized vertical-composition functoriality ----

fn pool() -> Vec<FlagObject> {
    vec![
        obj(1, 2, &[1]),
        obj(1, 2, &[0]),
        obj(1, 3, &[1]),
        obj(2, 3, &[0, 2]),
        obj(2, 3, &[1, 2]),
        obj(2, 2, &[1, 2]),
    ]
}

fn random_source(rng: &mut StdRng) -> Word {
    let objects = pool();
    let a = objects[rng.gen_range(0..objects.len())].clone();
    let r = a.rank();
    let len = rng.gen_range(0..=3usize);
    let mut letters: Vec<SignedLabel> = Vec::new();
    let mut front = a.clone();
    for _ in 0..len {
        let mut options: Vec<SignedLabel> = Vec::new();
        for idx in 0..r {
            for sl in [e(idx), f(idx)] {
                if let Some(next) = step(&front, sl) {
                    if next.entries().iter().all(|&x| x >= 0) {
                        options.push(sl);
                    }
                }
            }
        }
        if options.is_empty() {
            break;
        }
        let sl = options[rng.gen_range(0..options.len())];
        front = step(&front, sl).unwrap();
        letters.insert(0, sl);
    }
    Word::new(a, letters)
}

fn layer_moves(bottom: &Word) -> Vec<Atom> {
    let letters = bottom.letters();
    let n = letters.len();
    let r = bottom.source().rank();
    let mut moves = Vec::new();
    for p in 0..n {
        for marks in 1..=2u32 {
            moves.push(Atom::new(AtomKind::Dot(letters[p], marks), p));
        }
    }
    for p in 0..n.saturating_sub(1) {
        let (x, y) = (letters[p], letters[p + 1]);
        match (x.is_e(), y.is_e()) {
            (true, true) => moves.push(Atom::new(AtomKind::CrossUp(x.label, y.label), p)),
            (false, false) => {
                moves.push(Atom::new(AtomKind::CrossDown(x.label, y.label), p))
            }
            (true, false) => {
                if x.label == y.label {
                    moves.push(Atom::new(AtomKind::CapCcw(x.label), p));
                }
                moves.push(Atom::new(AtomKind::ChiRight(y.label, x.label), p));
            }
            (false, true) => {
                if x.label == y.label {
                    moves.push(Atom::new(AtomKind::CapCw(x.label), p));
                }
                moves.push(Atom::new(AtomKind::ChiLeft(y.label, x.label), p));
            }
        }
    }
    if n < 4 {
        for p in 0..=n {
            for idx in 0..r {
                moves.push(Atom::new(AtomKind::CupCcw(lab(idx)), p));
                moves.push(Atom::new(AtomKind::CupCw(lab(idx)), p));
            }
        }
    }
    moves
}

fn random_diagram(rng: &mut StdRng) -> Diagram {
    loop {
        let src = random_source(rng);
        let mut d = Diagram::identity(src);
        for _ in 0..rng.gen_range(1..=3usize) {
            let bottom = d.target_word().clone();
            let moves = layer_moves(&bottom);
            if moves.is_empty() {
                break;
            }
            let atom = moves[rng.gen_range(0..moves.len())];
            let upper = match Diagram::new(bottom, vec![vec![atom]]) {
                Ok(u) => u,
                Err(_) => continue,
            };
            if upper.target_word().tensor_rank() > 48 {
                continue;
            }
            d = d.compose_vertical(&upper).unwrap();
        }
        if d.boundaries().iter().all(|w| w.tensor_rank() <= 48) && !d.layers().is_empty() {
            return d;
        }
    }
}

/// Evaluation respects vertical composition: splitting a random stack at any
/// interior boundary and composing the two matrix halves reproduces the
/// whole.
#[test]
fn evaluation_respects_vertical_composition() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let mut checked = 0;
    while checked < 30 {
        let d = random_diagram(&mut rng);
        let layers = d.layers().to_vec();
        let cut = rng.gen_range(0..=layers.len());
        let lower = Diagram::new(d.source_word().clone(), layers[..cut].to_vec()).unwrap();
        let upper = Diagram::new(d.boundaries()[cut].clone(), layers[cut..].to_vec()).unwrap();
        let whole = eval_diagram(&d).unwrap();
        let lower_m = eval_diagram(&lower).unwrap();
        let upper_m = eval_diagram(&upper).unwrap();
        let composed = upper_m.compose(&lower_m).unwrap();
        assert!(
            equal(&whole, &composed),
            "split at {cut} of:\n{}",
            diagram::render(&d)
        );
        checked += 1;
    }
}

/// Matrix sums and scalings behave linearly under application.
#[test]
fn matrix_algebra_is_linear() {
    let a = obj(1, 2, &[1]);
    let w = word(&a, &[e(0)]);
    let d1 = diag(&a, &[e(0)], vec![vec![Atom::new(AtomKind::Dot(e(0), 1), 0)]]);
    let m1 = eval_diagram(&d1).unwrap();
    let id = OperatorMatrix::identity(w.clone()).unwrap();
    let two: Q = q_int(2);
    let sum = m1.add(&id.scale(&two)).unwrap();
    let elt = flagcat::TensorElement::unit(w).unwrap();
    let lhs = sum.apply(&elt).unwrap();
    let rhs = m1
        .apply(&elt)
        .unwrap()
        .add(&id.apply(&elt).unwrap().scale(&two))
        .unwrap();
    assert_eq!(lhs, rhs);
    assert!(sum.sub(&sum).unwrap().is_zero());
}
