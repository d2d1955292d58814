//! Temporary diagnostic dump for failing relation instances.

use diagram::{Atom, AtomKind, Diagram};
use flagcat::{FlagObject, Label, SignedLabel, Word};
use gamma::{eval_diagram, OperatorMatrix};

fn lab(half: i64) -> Label {
    Label::from_doubled(half).unwrap()
}

fn obj(r: usize, m: usize, entries: &[i64]) -> FlagObject {
    FlagObject::new(r, m, entries.to_vec()).unwrap()
}

fn word(a: &FlagObject, letters: &[SignedLabel]) -> Word {
    Word::new(a.clone(), letters.to_vec())
}

fn show(tag: &str, mat: &OperatorMatrix) {
    println!("== {tag} ==");
    println!("{}", mat.to_json());
}

fn eval(a: &FlagObject, letters: &[SignedLabel], layers: Vec<Vec<Atom>>) -> OperatorMatrix {
    let w = word(a, letters);
    let d = Diagram::new(w, layers).unwrap();
    eval_diagram(&d).unwrap()
}

#[test]
fn dump_cyc_cross_direct() {
    // bottom [F_diamond, F_3/2] at a = (1,2), m = 2.
    let a = obj(2, 2, &[1, 2]);
    let i = lab(1);
    let j = lab(3);
    let fs = [SignedLabel::f(i), SignedLabel::f(j)];

    let direct = eval(&a, &fs, vec![vec![Atom::new(AtomKind::CrossDown(i, j), 0)]]);
    show("direct CrossDown(1/2,3/2)", &direct);

    let cw = eval(
        &a,
        &fs,
        vec![
            vec![Atom::new(AtomKind::CupCw(i), 2)],
            vec![Atom::new(AtomKind::CupCw(j), 3)],
            vec![Atom::new(AtomKind::CrossUp(i, j), 2)],
            vec![Atom::new(AtomKind::CapCw(j), 1)],
            vec![Atom::new(AtomKind::CapCw(i), 0)],
        ],
    );
    show("cw rotation", &cw);

    let ccw = eval(
        &a,
        &fs,
        vec![
            vec![Atom::new(AtomKind::CupCcw(j), 0)],
            vec![Atom::new(AtomKind::CupCcw(i), 1)],
            vec![Atom::new(AtomKind::CrossUp(i, j), 2)],
            vec![Atom::new(AtomKind::CapCcw(i), 3)],
            vec![Atom::new(AtomKind::CapCcw(j), 2)],
        ],
    );
    show("ccw rotation", &ccw);
}

#[test]
fn dump_qha_dot() {
    // bottom [E_diamond, E_diamond] at a = (0), m = 2, r = 1.
    let a = obj(1, 2, &[0]);
    let i = lab(1);
    let es = [SignedLabel::e(i), SignedLabel::e(i)];

    let dot_then_cross = eval(
        &a,
        &es,
        vec![
            vec![Atom::new(AtomKind::Dot(SignedLabel::e(i), 1), 0)],
            vec![Atom::new(AtomKind::CrossUp(i, i), 0)],
        ],
    );
    show("dot@0 then cross", &dot_then_cross);

    let cross_then_dot = eval(
        &a,
        &es,
        vec![
            vec![Atom::new(AtomKind::CrossUp(i, i), 0)],
            vec![Atom::new(AtomKind::Dot(SignedLabel::e(i), 1), 1)],
        ],
    );
    show("cross then dot@1", &cross_then_dot);
}

#[test]
fn dump_nodal_one() {
    // bottom [E_3/2, F_3/2] at a = (0,1), m = 2: lambda_i = 0.
    let a = obj(2, 2, &[0, 1]);
    let i = lab(3);
    let letters = [SignedLabel::e(i), SignedLabel::f(i)];

    let lhs = eval(
        &a,
        &letters,
        vec![
            vec![Atom::new(AtomKind::ChiRight(i, i), 0)],
            vec![Atom::new(AtomKind::CapCw(i), 0)],
        ],
    );
    show("chiR then capCw", &lhs);

    let rhs = eval(&a, &letters, vec![vec![Atom::new(AtomKind::CapCcw(i), 0)]]);
    show("plain capCcw (t=0 term, ccw bubble value 1)", &rhs);
}

#[test]
fn dump_mixed_one() {
    // bottom [E_diamond, F_3/2] at a = (0,2), m = 2.
    let a = obj(2, 2, &[0, 2]);
    let i = lab(1);
    let j = lab(3);
    let letters = [SignedLabel::e(i), SignedLabel::f(j)];

    let lhs = eval(
        &a,
        &letters,
        vec![
            vec![Atom::new(AtomKind::ChiRight(j, i), 0)],
            vec![Atom::new(AtomKind::ChiLeft(i, j), 0)],
        ],
    );
    show("chiR(j,i) then chiL(i,j)", &lhs);

    let id = OperatorMatrix::identity(word(&a, &letters)).unwrap();
    show("identity", &id);
}

#[test]
fn dump_quotient_at_weight_one() {
    // bottom = top = [F_d, E_d, F_d] at a = (1), r = 1, m = 2: diamond weight 1.
    let a = obj(1, 2, &[1]);
    let i = lab(1);
    let fd = SignedLabel::f(i);
    let ed = SignedLabel::e(i);
    let letters = [fd, ed, fd];

    let t1 = eval(
        &a,
        &letters,
        vec![
            vec![Atom::new(AtomKind::ChiLeft(i, i), 0)],
            vec![Atom::new(AtomKind::CrossDown(i, i), 1)],
            vec![Atom::new(AtomKind::ChiRight(i, i), 0)],
        ],
    );
    let t2 = eval(
        &a,
        &letters,
        vec![
            vec![Atom::new(AtomKind::ChiRight(i, i), 1)],
            vec![Atom::new(AtomKind::CrossDown(i, i), 0)],
            vec![Atom::new(AtomKind::ChiLeft(i, i), 1)],
        ],
    );
    let t3 = eval(
        &a,
        &letters,
        vec![
            vec![Atom::new(AtomKind::CapCcw(i), 1)],
            vec![Atom::new(AtomKind::CupCcw(i), 0)],
        ],
    );
    let t4 = eval(
        &a,
        &letters,
        vec![
            vec![Atom::new(AtomKind::CapCw(i), 0)],
            vec![Atom::new(AtomKind::CupCw(i), 1)],
        ],
    );
    let s5 = eval(
        &a,
        &letters,
        vec![
            vec![Atom::new(AtomKind::CapCcw(i), 1)],
            vec![Atom::new(AtomKind::CupCw(i), 1)],
        ],
    );
    // ccw bubble with -3 dots at weight 1 evaluates to 1, so s5 carries
    // coefficient 1 and s6 is empty.
    let id = OperatorMatrix::identity(word(&a, &letters)).unwrap();

    let lhs = t1.sub(&t2).unwrap().sub(&t3).unwrap().sub(&t4).unwrap().add(&s5).unwrap();
    show("T1", &t1);
    show("T2", &t2);
    show("T3", &t3);
    show("T4", &t4);
    show("S5", &s5);
    show("combination minus identity", &lhs.sub(&id).unwrap());
}

#[test]
fn dump_symmetry_ratios() {
    use relcheck::{core_cases, symmetry_transformed};
    use diagram::Symmetry;

    let objects: Vec<FlagObject> = vec![
        obj(2, 2, &[0, 0]),
        obj(2, 2, &[0, 1]),
        obj(2, 2, &[0, 2]),
        obj(2, 2, &[1, 1]),
        obj(2, 2, &[1, 2]),
        obj(2, 2, &[2, 2]),
    ];
    let syms = [
        (Symmetry::Psi, "Psi"),
        (Symmetry::Omega, "Omega"),
        (Symmetry::OmegaInv, "OmegaInv"),
        (Symmetry::Sigma, "Sigma"),
        (Symmetry::SigmaInv, "SigmaInv"),
    ];

    let eval_side = |terms: &[relcheck::Term], src: &Word, tgt: &Word| -> OperatorMatrix {
        let mut acc = OperatorMatrix::zero(src.clone(), tgt.clone());
        for t in terms {
            let m = eval_diagram(&t.diagram).unwrap();
            acc = acc.add(&m.scale(&t.coeff)).unwrap();
        }
        acc
    };

    for a in &objects {
        for c in core_cases(a) {
            for (s, name) in &syms {
                let Some(tc) = symmetry_transformed(&c, *s) else { continue };
                let lhs = eval_side(&tc.lhs, &tc.source, &tc.target);
                let rhs = eval_side(&tc.rhs, &tc.source, &tc.target);
                if gamma::equal(&lhs, &rhs) {
                    continue;
                }
                let flipped = rhs.scale(&scalar::q_int(-1));
                let diag = if gamma::equal(&lhs, &flipped) {
                    "LHS == -RHS"
                } else {
                    "other mismatch"
                };
                println!("{} [{}] @ {} : {}", tc.id, name, tc.labels, diag);
            }
        }
    }
}
