use std::collections::BTreeSet;

use super::*;
use crate::cat::slice::Slice;
use crate::classes::SliceClass;

fn failing(class: &MapClass, n: usize, which: &[AxiomId]) -> BTreeSet<AxiomId> {
    let reports = check_axioms(class, &Scope::new(n), which);
    for r in &reports {
        assert_ne!(r.status, Status::Inconclusive, "{class} {}: {:?}", r.id, r.note);
        if r.status == Status::Fail {
            assert!(r.counterexample.is_some());
        }
    }
    reports.iter().filter(|r| r.status == Status::Fail).map(|r| r.id.parse().unwrap()).collect()
}

/// Maps of the scope as raw tables `(n, m, table)`.
fn raw_maps(n: usize) -> Vec<(usize, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            let total = b.pow(a as u32);
            for code in 0..total {
                let table = (0..a).map(|i| code / b.pow(i as u32) % b).collect();
                out.push((a, b, table));
            }
        }
    }
    out
}

fn max_fiber(m: usize, t: &[usize]) -> usize {
    (0..m).map(|j| t.iter().filter(|&&v| v == j).count()).max().unwrap_or(0)
}

#[test]
fn monos_fail_exactly_finiteness() {
    assert_eq!(failing(&MapClass::monos(), 3, &AxiomId::SMALL), BTreeSet::from([AxiomId::A4]));
}

#[test]
fn isos_fail_finiteness_and_diagonals() {
    assert_eq!(failing(&MapClass::isos(), 3, &AxiomId::SMALL), BTreeSet::from([AxiomId::A4, AxiomId::A9]));
    let rep = &check_axioms(&MapClass::isos(), &Scope::new(3), &[AxiomId::A4])[0];
    let cex = rep.counterexample.as_ref().unwrap();
    assert!(cex.get("1+1→1").is_some());
    assert!(cex.get("0→1").is_some());
    assert!(cex.get("1→1").is_none());
}

#[test]
fn diagonal_oracle_for_isos() {
    // Raw check: the diagonal n → n² is a bijection only for n ≤ 1.
    let bad: Vec<usize> = (0..=3).filter(|&n| n != n * n).collect();
    assert_eq!(bad, vec![2, 3]);
}

#[test]
fn fiber_bound_two_fails_only_composition() {
    assert_eq!(failing(&MapClass::fiber_bound(2), 3, &AxiomId::SMALL), BTreeSet::from([AxiomId::A5]));
    let rep = &check_axioms(&MapClass::fiber_bound(2), &Scope::new(3), &[AxiomId::A5])[0];
    let h = rep.counterexample.as_ref().unwrap().get("g∘f").unwrap();
    assert_eq!(h["cod"].as_array().unwrap().len(), 1);
    assert_eq!(h["dom"].as_array().unwrap().len(), 3);
}

#[test]
fn composition_oracle() {
    // Independent of the checker: some pair of maps with fibers ≤ 2 composes
    // to a fiber of 3 at size 3, and none does at size 2.
    let exceeds = |n: usize| {
        let ms = raw_maps(n);
        ms.iter().any(|(a, b, f)| {
            max_fiber(*b, f) <= 2
                && ms.iter().any(|(b2, c, g)| {
                    b2 == b && max_fiber(*c, g) <= 2 && {
                        let h: Vec<usize> = f.iter().map(|&i| g[i]).collect();
                        max_fiber(*c, &h) > 2 && *a == 3
                    }
                })
        })
    };
    assert!(exceeds(3));
    assert!(!exceeds(2));
}

#[test]
fn fiber_bound_two_passes_at_scope_two() {
    assert!(failing(&MapClass::fiber_bound(2), 2, &AxiomId::SMALL).is_empty());
}

#[test]
fn all_maps_pass_everything_structural() {
    let mut ids = AxiomId::SMALL.to_vec();
    ids.extend([AxiomId::A10, AxiomId::L1, AxiomId::L2, AxiomId::L3, AxiomId::M]);
    assert!(failing(&MapClass::all(), 3, &ids).is_empty());
}

#[test]
fn collection_has_witness() {
    let rep = &check_axioms(&MapClass::fiber_bound(1), &Scope::new(2), &[AxiomId::A7])[0];
    assert_eq!(rep.status, Status::Pass);
    assert!(rep.witness.is_some());
}

#[test]
fn scov_needs_display_axioms() {
    assert!(scov(&MapClass::fiber_bound(2), &Scope::new(3)).is_err());
    assert!(scov(&MapClass::isos(), &Scope::new(3)).is_err());
    // 1+1 → 1 is needed, so fiber:1 is not a display class either.
    assert!(scov(&MapClass::fiber_bound(1), &Scope::new(3)).is_err());
    let c = scov(&MapClass::fiber_bound(3), &Scope::new(3)).unwrap();
    assert_eq!(c.to_string(), "covered(fiber:3)");
}

#[test]
fn covered_closure_on_scope() {
    let maps = FinSet.all_homs(&Scope::new(3));
    for base in [MapClass::fiber_bound(1), MapClass::fiber_bound(2), MapClass::isos()] {
        let cov = MapClass::covered(base.clone());
        for f in &maps {
            assert_eq!(cov.contains(f), base.contains(f), "{base} at {f:?}");
        }
    }
    let small = FinSet.all_homs(&Scope::new(2));
    let once = MapClass::covered(MapClass::proj_fiber([1, 2]));
    let twice = MapClass::covered(once.clone());
    for f in &small {
        assert_eq!(once.contains(f), twice.contains(f));
    }
}

#[test]
fn slices_reuse_the_checkers() {
    let slice = Slice::new(&FinSet, FinObj::range(2));
    let cls = MapClass::fiber_bound(1);
    let sc = SliceClass(&cls);
    for id in [AxiomId::A1, AxiomId::A3, AxiomId::A5, AxiomId::A9, AxiomId::L3] {
        let r = check_axiom_generic(&slice, &sc, &Scope::new(2), id, None).unwrap();
        assert_eq!(r.status, Status::Pass, "{id}");
        assert!(r.instances > 0);
    }
}

#[test]
fn higher_axioms_for_fiber_bound() {
    let cls = MapClass::fiber_bound(2);
    let ids = [AxiomId::PE, AxiomId::PS, AxiomId::PiE, AxiomId::PiS, AxiomId::NE, AxiomId::WE, AxiomId::WS];
    let reps = check_axioms(&cls, &Scope::new(2), &ids);
    let status: Vec<Status> = reps.iter().map(|r| r.status).collect();
    // ℘s_X(f) over a 2-element fiber has 4 subsets. A Π fiber is a product
    // of g-fibers whose sizes sum to at most the scope, so it stays ≤ 2 here.
    assert_eq!(
        status,
        vec![Status::Pass, Status::Fail, Status::Pass, Status::Pass, Status::Pass, Status::Pass, Status::OutOfScope]
    );
    let pi3 = &check_axioms(&cls, &Scope::new(3), &[AxiomId::PiS])[0];
    assert_eq!(pi3.status, Status::Pass);
}

#[test]
fn all_maps_have_power_and_pi() {
    let reps = check_axioms(&MapClass::all(), &Scope::new(2), &[AxiomId::PE, AxiomId::PS, AxiomId::PiS, AxiomId::NS]);
    assert!(reps.iter().all(|r| r.status == Status::Pass));
    assert!(reps[3].note.as_ref().unwrap().contains("fails absolutely"));
}

#[test]
fn fullness_axiom_verdicts() {
    let all = &check_axioms(&MapClass::all(), &Scope::new(2), &[AxiomId::F])[0];
    assert_eq!(all.status, Status::Pass);
    // Four sections need a map 4 → 2, beyond scope 3.
    let two = &check_axioms(&MapClass::fiber_bound(2), &Scope::new(3), &[AxiomId::F])[0];
    assert_eq!(two.status, Status::Pass);
}

#[test]
fn axiom_ids_parse() {
    assert_eq!("ΠE".parse::<AxiomId>().unwrap(), AxiomId::PiE);
    assert_eq!("a10".parse::<AxiomId>().unwrap(), AxiomId::A10);
    assert!("A11".parse::<AxiomId>().is_err());
}
