//! The core relation families over small object sweeps, plus the symmetry
//! audit on the bubble-free cases.

use diagram::Symmetry;
use flagcat::FlagObject;
use relcheck::{check, core_cases, run_cases, sweep_core, symmetry_transformed, ReportEntry};

fn report_failures(entries: &[ReportEntry]) -> String {
    let fails: Vec<String> = entries
        .iter()
        .filter(|e| !e.passed())
        .map(|e| format!("{} @ {} [{}]: {}", e.case_id, e.object, e.labels, e.status))
        .collect();
    format!("{} failures:\n{}", fails.len(), fails.join("\n"))
}

#[test]
fn core_families_hold_on_the_small_sweep() {
    let entries = sweep_core(2, 2);
    assert!(!entries.is_empty());
    assert!(
        entries.iter().all(|e| e.passed()),
        "{}",
        report_failures(&entries)
    );
}

#[test]
fn core_families_hold_on_a_rank_one_tall_sweep() {
    let entries = sweep_core(1, 3);
    assert!(
        entries.iter().all(|e| e.passed()),
        "{}",
        report_failures(&entries)
    );
}

#[test]
fn braid_relation_sees_the_sign_matrix() {
    // On an object where all three-strand raising words are nonzero, the
    // braid case with i = k adjacent to j has a nonzero right side.
    let a = FlagObject::new(2, 3, vec![0, 1]).unwrap();
    let cases = core_cases(&a);
    let braid: Vec<_> = cases.iter().filter(|c| c.id == "qhalast").collect();
    assert!(braid.iter().any(|c| !c.rhs.is_empty()), "no adjacent braid instance");
    for c in braid {
        let e = check(c);
        assert!(e.passed(), "{} [{}]: {}", e.case_id, e.labels, e.status);
    }
}

#[test]
fn quotient_relation_holds_in_all_weight_regimes() {
    // λ_◇ = 3a_◇ − a_{◇+1} at rank ≥ 2, 3a_◇ − m at rank 1: cover positive,
    // zero, and negative values.
    let picks = [
        FlagObject::new(1, 2, vec![1]),  // λ = 1
        FlagObject::new(1, 3, vec![1]),  // λ = 0
        FlagObject::new(1, 4, vec![1]),  // λ = −1
        FlagObject::new(2, 3, vec![1, 1]), // λ = 2
        FlagObject::new(2, 4, vec![1, 1]), // λ = 2 taller
        FlagObject::new(2, 4, vec![1, 4]), // λ = −1
    ];
    for a in picks {
        let a = a.unwrap();
        let cases = core_cases(&a);
        let pi: Vec<_> = cases.into_iter().filter(|c| c.id == "Pi=1").collect();
        for c in pi {
            let e = check(&c);
            assert!(e.passed(), "Pi=1 @ {}: {}", e.object, e.status);
        }
    }
}

#[test]
fn symmetry_images_of_bubble_free_cases_pass() {
    let mut transformed = Vec::new();
    for a in [
        FlagObject::new(1, 2, vec![1]).unwrap(),
        FlagObject::new(2, 3, vec![1, 2]).unwrap(),
    ] {
        for c in core_cases(&a) {
            for which in [
                Symmetry::Psi,
                Symmetry::Omega,
                Symmetry::OmegaInv,
                Symmetry::Sigma,
                Symmetry::SigmaInv,
            ] {
                if let Some(t) = symmetry_transformed(&c, which) {
                    transformed.push(t);
                }
            }
        }
    }
    assert!(transformed.len() > 50, "audit found too few transformable cases");
    let entries = run_cases(transformed);
    assert!(
        entries.iter().all(|e| e.passed()),
        "{}",
        report_failures(&entries)
    );
}

#[test]
fn report_entries_serialize_with_the_documented_fields() {
    let a = FlagObject::new(1, 2, vec![1]).unwrap();
    let entries = run_cases(core_cases(&a));
    let js = serde_json::to_value(&entries[0]).unwrap();
    for key in [
        "case_id",
        "object",
        "labels",
        "status",
        "degree",
        "source_rank",
        "target_rank",
        "millis",
    ] {
        assert!(js.get(key).is_some(), "missing field {key}");
    }
}
