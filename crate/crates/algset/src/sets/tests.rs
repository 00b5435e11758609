use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::cat::{all_maps, FinObj};
use crate::classes::{minimal_mvs, Representation, Status};
use crate::wtypes::{bisimilar, BisimMode, PolySig};

fn hf(s: &str) -> HFSet {
    s.parse().unwrap()
}

fn env(pairs: &[(&str, &str)]) -> Env {
    pairs.iter().map(|(k, v)| (k.to_string(), hf(v))).collect()
}

fn holds(src: &str, e: &Env, n: usize) -> bool {
    eval(&parse_formula(src).unwrap(), e, n).unwrap()
}

#[test]
fn core_constructions() {
    let e = HFSet::empty();
    assert_eq!(HFSet::pair(&e, &e), hf("{{}}"));
    assert_eq!(HFSet::nat(3), hf("{{},{{}},{{},{{}}}}"));
    assert_eq!(HFSet::union_of(&hf("{{{}},{{{}}}}")), hf("{{},{{}}}"));
    assert_eq!(HFSet::singleton(&e), HFSet::succ(&e));
    assert_eq!((0..5).map(|k| HFSet::nat(k).rank()).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    assert_eq!(hf(" { {} , { } } "), hf("{{}}"));
    assert!("{{}".parse::<HFSet>().is_err());
    assert!("{}x".parse::<HFSet>().is_err());
}

#[test]
fn int_and_ext_are_inverse() {
    for v in universe(4).unwrap() {
        assert_eq!(HFSet::new(v.elems().iter().cloned()), *v);
        assert_eq!(v.to_string().parse::<HFSet>().unwrap(), *v);
        assert!(!v.contains(v));
        let expected = v.elems().iter().map(|c| c.rank() + 1).max().unwrap_or(0);
        assert_eq!(v.rank(), expected);
    }
    assert!(hf("{{}}").contains(&HFSet::empty()));
}

#[test]
fn kuratowski_pairs_decode() {
    let v = universe(3).unwrap();
    for x in v {
        for y in v {
            assert_eq!(HFSet::kpair(x, y).unpair(), Some((x.clone(), y.clone())));
        }
    }
    assert_eq!(hf("{{},{{}}}").unpair(), None);
}

#[test]
fn universe_sizes_and_transitivity() {
    let sizes: Vec<usize> = (0..=4).map(|n| universe(n).unwrap().len()).collect();
    assert_eq!(sizes, vec![0, 1, 2, 4, 16]);
    for n in 1..=4 {
        let v = universe(n).unwrap();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert!(v.iter().all(|x| x.rank() < n && x.elems().iter().all(|c| v.contains(c))));
    }
    assert!(universe(6).is_err());
}

/// The order is rank first, then size, then the sorted elements.
#[test]
fn canonical_order_on_small_sets() {
    let v = universe(3).unwrap();
    let shown: Vec<String> = v.iter().map(HFSet::to_string).collect();
    assert_eq!(shown, vec!["{}", "{{}}", "{{{}}}", "{{},{{}}}"]);
}

#[test]
fn no_proper_subalgebra() {
    for n in 1..=4 {
        let v = universe(n).unwrap();
        let mut s: BTreeSet<HFSet> = BTreeSet::new();
        loop {
            let pool: Vec<HFSet> = s.iter().cloned().collect();
            let next: BTreeSet<HFSet> =
                HFSet::new(pool).subsets().into_iter().filter(|x| x.rank() < n).collect();
            if next == s {
                break;
            }
            s = next;
        }
        assert_eq!(s.into_iter().collect::<Vec<_>>(), v);
    }
}

#[test]
fn build_v_on_the_standard_representations() {
    assert_eq!(build_v(&Representation::standard(2), 2), universe(3).unwrap());
    assert_eq!(build_v(&Representation::standard(4), 3), universe(4).unwrap());
    for k in 0..=3 {
        let sig = PolySig::new(Representation::standard(k).pi);
        for d in 0..=if k == 3 { 2 } else { 3 } {
            assert_eq!(build_v_literal(&sig, d), build_v_levelwise(&sig, d), "k = {k}, depth {d}");
        }
    }
    // Branching at most 2 at height 3 leaves out the larger subsets of V_3.
    let narrow = build_v(&Representation::standard(2), 3);
    let expected: Vec<HFSet> = universe(4).unwrap().iter().filter(|x| x.len() <= 2).cloned().collect();
    assert_eq!(narrow, expected);
}

#[test]
fn levelwise_respects_missing_arities() {
    // Unary nodes over a leaf only reach the iterated singletons of ∅.
    let sig = PolySig::from_fiber_sizes(&[0, 1]);
    let v = build_v_levelwise(&sig, 3);
    assert_eq!(v, build_v_literal(&sig, 3));
    assert_eq!(v.len(), 4);
    let no_leaf = PolySig::from_fiber_sizes(&[1, 2]);
    assert!(build_v_levelwise(&no_leaf, 3).is_empty());
}

#[test]
fn canonical_form_commutes_with_sup() {
    let sig = PolySig::new(Representation::standard(2).pi);
    for w in sig.enumerate(3) {
        let kids: BTreeSet<HFSet> = w.children().iter().map(canonical_hf).collect();
        let ext: BTreeSet<HFSet> = canonical_hf(&w).elems().iter().cloned().collect();
        assert_eq!(ext, kids);
    }
}

#[test]
fn canonical_forms_detect_bisimilarity() {
    let sig = PolySig::new(Representation::standard(2).pi);
    let trees = sig.enumerate(2);
    for a in &trees {
        for b in &trees {
            assert_eq!(canonical_hf(a) == canonical_hf(b), bisimilar(&sig, a, b, &BisimMode::Plain));
        }
    }
}

#[test]
fn parser_examples() {
    let atom = parse_formula("eps(x,a)").unwrap();
    assert!(matches!(atom, Formula::Eps(..)) && atom.is_bounded());
    let bf = parse_formula("forall x in a . eps(x,b)").unwrap();
    assert!(matches!(bf, Formula::Quant { q: Quant::Forall, bound: Some(_), .. }) && bf.is_bounded());
    let ub = parse_formula("exists y . forall x in a . eps(x,y)").unwrap();
    assert!(!ub.is_bounded());
    assert_eq!(ub.free_vars().into_iter().collect::<Vec<_>>(), vec!["a".to_string()]);
    assert_eq!(parse_formula("eq(x, {})").unwrap(), parse_formula("x = {}").unwrap());
}

#[test]
fn precedence_and_quantifier_scope() {
    let p = |s: &str| parse_formula(s).unwrap();
    assert_eq!(p("a = b or c = d and e = f"), p("a = b or (c = d and e = f)"));
    assert_eq!(p("a = b -> c = d -> e = f"), p("a = b -> (c = d -> e = f)"));
    assert_eq!(p("not a = b and c = d"), p("(not a = b) and c = d"));
    assert_eq!(
        p("forall z in a . eps(z,b) and forall z in b . eps(z,a) -> a = b"),
        p("((forall z in a . eps(z,b)) and (forall z in b . eps(z,a))) -> a = b")
    );
}

#[test]
fn parse_errors_carry_positions() {
    let pos = |s: &str| match parse_formula(s) {
        Err(Error::Parse { pos, .. }) => pos,
        other => panic!("{s}: {other:?}"),
    };
    assert_eq!(pos("eps(x a)"), 6);
    assert_eq!(pos("forall in . x = x"), 7);
    assert_eq!(pos("x = y )"), 6);
    assert_eq!(pos("x = {{}"), 7);
    assert_eq!(pos("x = "), 4);
    assert_eq!(pos("x ? y"), 2);
}

#[test]
fn evaluation_examples() {
    let v3 = universe(3).unwrap();
    for a in v3 {
        for b in v3 {
            let e: Env = [("a".to_string(), a.clone()), ("b".to_string(), b.clone())].into();
            assert!(holds("forall z in a . eps(z,b) and forall z in b . eps(z,a) -> a = b", &e, 3));
        }
    }
    assert!(holds("exists y . forall x in a . eps(x,y)", &env(&[("a", "{{},{{}}}")]), 4));
    for x in v3 {
        assert!(!holds("not (eq(x,x))", &[("x".to_string(), x.clone())].into(), 3));
    }
    // The only element of {∅} is ∅, which is an element of {∅}.
    assert!(holds("forall x in {{}} . eps(x, {{}})", &Env::new(), 3));
    // V_2 has no set containing both ∅ and {∅}.
    assert!(!holds("exists z . (eps({},z) and eps({{}},z))", &Env::new(), 2));
    assert!(holds("exists z . (eps({},z) and eps({{}},z))", &Env::new(), 3));
}

#[test]
fn evaluation_errors() {
    let phi = parse_formula("eps(x, {{{}}})").unwrap();
    assert!(matches!(eval(&phi, &env(&[("x", "{}")]), 2), Err(Error::RankExceeded { rank: 2, bound: 2, .. })));
    assert!(matches!(eval(&phi, &Env::new(), 3), Err(Error::UnboundVariable(v)) if v == "x"));
    assert!(matches!(eval(&phi, &env(&[("x", "{{{{}}}}")]), 3), Err(Error::RankExceeded { .. })));
}

fn battery() -> Vec<&'static str> {
    vec![
        "eps(x, a)",
        "forall y in x . eps(y, a)",
        "exists y in a . eps(x, y)",
        "not x = a and forall y in x . not eps(y, y)",
        "forall y in a . exists w in y . w = x",
        "eps(x, a) -> exists y in x . y = {}",
        "forall y in x . forall w in y . eps(w, a)",
        "exists y in x . exists w in y . eps(w, a) or x = a",
        "x = {} or exists y in x . y = {{}}",
        "forall y in x . (eps(y, a) or y = a)",
    ]
}

/// Brute-force oracle for bounded formulas: quantifiers never consult the
/// universe, so the answer must not depend on the rank bound.
#[test]
fn bounded_evaluation_ignores_the_rank_bound() {
    let v3 = universe(3).unwrap();
    for src in battery() {
        let phi = parse_formula(src).unwrap();
        assert!(phi.is_bounded(), "{src}");
        for x in v3 {
            for a in v3 {
                let e: Env = [("x".to_string(), x.clone()), ("a".to_string(), a.clone())].into();
                assert_eq!(eval(&phi, &e, 3).unwrap(), eval(&phi, &e, 4).unwrap(), "{src}");
            }
        }
    }
}

#[test]
fn closed_axioms_in_v3() {
    for ax in SetAxiom::closed_axioms() {
        let r = check_axiom(&ax, 3, &Env::new()).unwrap();
        if ax == SetAxiom::Infinity {
            assert_eq!(r.status, Status::Fail);
            assert!(r.note.as_deref().unwrap().starts_with("holds in no finite truncation"));
            assert_eq!(r.counterexample.unwrap().set, Some(HFSet::nat(2)));
        } else {
            assert!(r.passed(), "{}: {:?}", r.axiom, r.note);
        }
    }
    let pairing = check_axiom(&SetAxiom::Pairing, 3, &Env::new()).unwrap();
    assert_eq!(pairing.instances, 4);
    for w in &pairing.witnesses {
        assert_eq!(w.set.as_ref().unwrap(), &HFSet::pair(&w.params["x"], &w.params["y"]));
    }
    let union = check_axiom(&SetAxiom::Union, 4, &Env::new()).unwrap();
    for w in &union.witnesses {
        assert_eq!(w.set.as_ref().unwrap(), &HFSet::union_of(&w.params["x"]));
    }
    let empty = check_axiom(&SetAxiom::Empty, 3, &Env::new()).unwrap();
    assert_eq!(empty.witnesses[0].set, Some(HFSet::empty()));
}

#[test]
fn pairing_in_v2() {
    let r = check_axiom(&SetAxiom::Pairing, 2, &Env::new()).unwrap();
    assert!(r.passed());
    assert_eq!(r.instances, 1);
}

#[test]
fn separation_examples() {
    let ax = SetAxiom::BoundedSeparation { phi: parse_formula("eps(x, b)").unwrap(), a: Some(hf("{{},{{}}}")) };
    let r = check_axiom(&ax, 3, &env(&[("b", "{{}}")])).unwrap();
    assert!(r.passed());
    assert_eq!(r.witnesses[0].set, Some(hf("{{}}")));
    for src in battery() {
        let phi = parse_formula(src).unwrap();
        let r = check_axiom(&SetAxiom::BoundedSeparation { phi, a: None }, 3, &Env::new()).unwrap();
        assert!(r.passed(), "{src}");
        assert_eq!(r.instances, 4);
    }
    let unbounded = parse_formula("exists y . eps(x, y)").unwrap();
    let bad = SetAxiom::BoundedSeparation { phi: unbounded.clone(), a: None };
    assert!(matches!(check_axiom(&bad, 3, &Env::new()), Err(Error::IllTyped(_))));
    let full = check_axiom(&SetAxiom::FullSeparation { phi: unbounded, a: None }, 3, &Env::new()).unwrap();
    assert!(full.passed());
}

#[test]
fn strong_collection_examples() {
    for a in universe(3).unwrap() {
        let ax = SetAxiom::StrongCollection { phi: parse_formula("eq(y, x)").unwrap(), a: Some(a.clone()) };
        let r = check_axiom(&ax, 4, &Env::new()).unwrap();
        assert!(r.passed());
        assert_eq!(r.witnesses[0].set.as_ref(), Some(a));
    }
    let sing = SetAxiom::StrongCollection { phi: parse_formula("eps(x, y)").unwrap(), a: None };
    let r = check_axiom(&sing, 3, &Env::new()).unwrap();
    assert!(r.passed());
    // {∅} collects to {{∅}}, whose rank exceeds V_2's.
    let r = check_axiom(&SetAxiom::StrongCollection { phi: parse_formula("eps(x, y)").unwrap(), a: Some(hf("{{}}")) }, 2, &Env::new());
    let r = r.unwrap();
    assert_eq!(r.status, Status::Fail);
    assert_eq!(r.counterexample.unwrap().set, Some(hf("{{{}}}")));
}

#[test]
fn set_induction_passes_for_bounded_formulas() {
    for src in battery() {
        let r = check_axiom(&SetAxiom::SetInduction(parse_formula(src).unwrap()), 3, &Env::new()).unwrap();
        assert!(r.passed(), "{src}");
    }
    let unbounded = SetAxiom::SetInduction(parse_formula("exists y . eps(x, y)").unwrap());
    assert!(matches!(check_axiom(&unbounded, 3, &Env::new()), Err(Error::IllTyped(_))));
}

#[test]
fn power_sets() {
    let r = check_axiom(&SetAxiom::PowerSet { x: Some(hf("{{}}")) }, 4, &Env::new()).unwrap();
    assert!(r.passed());
    assert_eq!(r.witnesses[0].set, Some(hf("{{},{{}}}")));
    let all = check_axiom(&SetAxiom::PowerSet { x: None }, 4, &Env::new()).unwrap();
    assert!(all.passed());
    assert_eq!(all.instances, 4);
    // P({∅,{∅}}) has rank 3 and so is missing from V_3.
    let high = check_axiom(&SetAxiom::PowerSet { x: Some(hf("{{},{{}}}")) }, 3, &Env::new()).unwrap();
    assert_eq!(high.status, Status::Fail);
}

/// `f: b → a` as a set of Kuratowski pairs on von Neumann numerals.
fn encode(table: &[usize], a: usize) -> (HFSet, HFSet) {
    let f = HFSet::new(table.iter().enumerate().map(|(x, &y)| HFSet::kpair(&HFSet::nat(x), &HFSet::nat(y))));
    (f, HFSet::new((0..a).map(HFSet::nat)))
}

#[test]
fn fullness_examples() {
    let (f, a) = encode(&[0, 0, 1], 2);
    let z = fullness_set(&f, &a).unwrap();
    let expected = HFSet::new([
        HFSet::new([HFSet::nat(0), HFSet::nat(2)]),
        HFSet::new([HFSet::nat(1), HFSet::nat(2)]),
    ]);
    assert_eq!(z, expected);
    let (f, a) = encode(&[], 0);
    assert_eq!(fullness_set(&f, &a).unwrap(), hf("{{}}"));
    let (f, a) = encode(&[0, 0, 0], 1);
    assert_eq!(fullness_set(&f, &a).unwrap(), HFSet::new((0..3).map(|i| HFSet::singleton(&HFSet::nat(i)))));
    assert!(matches!(fullness_set(&hf("{{}}"), &a), Err(Error::NotFunction(_))));
    let (f, _) = encode(&[0, 1], 2);
    assert!(matches!(fullness_set(&f, &a), Err(Error::NotFunction(_))));
}

/// Minimal sections agree with the brute-force minimum and with the
/// category-level computation on the same function.
#[test]
fn fullness_against_oracles() {
    for nb in 0..=3 {
        for na in 0..=3 {
            let (b_obj, a_obj) = (FinObj::range(nb), FinObj::range(na));
            for phi in all_maps(&b_obj, &a_obj) {
                let (f, a) = encode(phi.table(), na);
                let z = fullness_set(&f, &a).unwrap();
                let all = mvss_by_subsets(&f, &a).unwrap();
                let minimal: Vec<HFSet> =
                    all.iter().filter(|m| !all.iter().any(|c| c != *m && c.is_subset(m))).cloned().collect();
                assert_eq!(z, HFSet::new(minimal));
                let transported: BTreeSet<HFSet> = minimal_mvs(&phi)
                    .iter()
                    .map(|p| HFSet::new(p.indices().into_iter().map(HFSet::nat)))
                    .collect();
                assert_eq!(transported, z.elems().iter().cloned().collect());
            }
        }
    }
}

#[test]
fn fullness_axiom_report() {
    let (f, a) = encode(&[0, 1, 1], 2);
    let r = check_axiom(&SetAxiom::Fullness { f: f.clone(), a: a.clone() }, 5, &Env::new());
    assert!(matches!(r, Err(Error::RankExceeded { .. })));
    let small = HFSet::new([HFSet::kpair(&HFSet::empty(), &HFSet::empty())]);
    let r = check_axiom(&SetAxiom::Fullness { f: small, a: hf("{{}}") }, 5, &Env::new()).unwrap();
    assert!(r.passed());
    assert_eq!(r.witnesses[0].set, Some(hf("{{{}}}")));
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let var = prop::sample::select(vec!["x", "y", "a", "b'", "z_1"]).prop_map(|s| Term::Var(s.to_string()));
    let lit = prop::sample::select(universe(3).unwrap().to_vec()).prop_map(Term::Lit);
    let term = prop_oneof![var.clone(), lit];
    let atom = prop_oneof![
        (term.clone(), term.clone()).prop_map(|(s, t)| Formula::Eps(s, t)),
        (term.clone(), term.clone()).prop_map(|(s, t)| Formula::Eq(s, t)),
    ];
    atom.prop_recursive(4, 24, 2, move |inner| {
        let names = prop::sample::select(vec!["x", "y", "w"]);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Formula::Not(Box::new(a))),
            (any::<bool>(), names, prop::option::of(term.clone()), inner).prop_map(|(all, v, bound, body)| {
                Formula::Quant {
                    q: if all { Quant::Forall } else { Quant::Exists },
                    var: v.to_string(),
                    bound,
                    body: Box::new(body),
                }
            }),
        ]
    })
}

proptest! {
    #[test]
    fn printer_round_trips(phi in arb_formula()) {
        let text = phi.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), phi);
    }
}
