use super::*;
use crate::cat::{Elem, FinObj, Square};
use crate::classes::Representation;

#[test]
fn poly_apply_sizes() {
    let x = FinObj::range(3);
    assert_eq!(PolySig::from_fiber_sizes(&[0]).poly_apply(&x).len(), 1);
    assert_eq!(PolySig::from_fiber_sizes(&[1]).poly_apply(&x).len(), 3);
    assert_eq!(PolySig::from_fiber_sizes(&[0, 2]).poly_apply(&x).len(), 10);
}

#[test]
fn nno_trees_are_chains() {
    let sig = PolySig::nno();
    let trees = sig.enumerate(5);
    assert_eq!(trees.len(), 6);
    assert!(trees.iter().all(|t| t.children().len() <= 1));
    let heights: Vec<usize> = trees.iter().map(WTree::height).collect();
    assert_eq!(heights, vec![0, 1, 2, 3, 4, 5]);
}

#[test]
fn enumeration_matches_recurrence() {
    let leaf_only = PolySig::from_fiber_sizes(&[0]);
    assert_eq!(leaf_only.enumerate(4).len(), 1);
    let binary = PolySig::from_fiber_sizes(&[0, 2]);
    assert_eq!(binary.enumerate(1).len(), 2);
    assert_eq!(binary.enumerate(2).len(), 5);
    for sizes in [&[0, 1][..], &[0, 2], &[0, 1, 2], &[1, 2], &[0, 0, 1], &[2, 0, 3]] {
        let sig = PolySig::from_fiber_sizes(sizes);
        for d in 0..=3 {
            if sig.count(d) > 50_000 {
                continue;
            }
            assert_eq!(sig.enumerate(d).len() as u128, sig.count(d), "{sizes:?} at {d}");
        }
    }
}

#[test]
fn lambek_and_no_proper_subalgebra() {
    for sizes in [&[0, 1][..], &[0, 2], &[0, 1, 2], &[1, 2]] {
        let sig = PolySig::from_fiber_sizes(sizes);
        for d in 0..=2 {
            sig.check_lambek(d).unwrap();
            assert_eq!(sig.least_subalgebra(d), sig.enumerate(d));
        }
    }
}

fn mod3(sig: &PolySig) -> Algebra {
    // Successor on Z/3; the zero constructor goes to 0.
    let succ = sig.map().cod().index_of(&Elem::Inj(0, Box::new(Elem::Atom(0)))).unwrap();
    Algebra::new(sig, FinObj::range(3), |a, xs| if a == succ { (xs[0] + 1) % 3 } else { 0 }).unwrap()
}

#[test]
fn fold_is_depth_mod_three() {
    let sig = PolySig::nno();
    let alg = mod3(&sig);
    for (n, w) in sig.enumerate(7).iter().enumerate() {
        assert_eq!(fold(&sig, &alg, w).unwrap(), n % 3);
    }
}

#[test]
fn fold_of_constant_and_of_sup() {
    let sig = PolySig::from_fiber_sizes(&[0, 2, 1]);
    let alg = Algebra::new(&sig, FinObj::range(2), |_, _| 1).unwrap();
    for w in sig.enumerate(2) {
        assert_eq!(fold(&sig, &alg, &w).unwrap(), 1);
        assert_eq!(fold_with(&w, &mut |a, xs: &[WTree]| WTree::sup(a, xs.to_vec())), w);
    }
}

#[test]
fn attempts_glue() {
    let sig = PolySig::from_fiber_sizes(&[0, 2]);
    let alg = Algebra::new(&sig, FinObj::range(3), |a, xs| if a == 0 { 0 } else { (xs[0] + 2 * xs[1] + 1) % 3 }).unwrap();
    let trees = sig.enumerate(2);
    for w in &trees {
        let aw = attempt(&sig, &alg, w).unwrap();
        for v in &trees {
            let av = attempt(&sig, &alg, v).unwrap();
            for (k, val) in &aw {
                if let Some(other) = av.get(k) {
                    assert_eq!(val, other);
                }
            }
        }
    }
}

#[test]
fn fold_is_the_only_solution() {
    // Every assignment on the truncation satisfying the recursion is the fold.
    let sig = PolySig::nno();
    let alg = mod3(&sig);
    let trees = sig.enumerate(3);
    let sizes = vec![3; trees.len()];
    let mut solutions = 0;
    for h in crate::cat::product_indices(&sizes) {
        let ok = trees.iter().enumerate().all(|(i, w)| {
            let xs: Vec<usize> = w.children().iter().map(|c| h[trees.binary_search(c).unwrap()]).collect();
            alg.apply(&sig, w.label(), &xs).unwrap() == h[i]
        });
        if ok {
            solutions += 1;
            for (i, w) in trees.iter().enumerate() {
                assert_eq!(h[i], fold(&sig, &alg, w).unwrap());
            }
        }
    }
    assert_eq!(solutions, 1);
}

#[test]
fn closure_is_least_transitive() {
    let sig = PolySig::from_fiber_sizes(&[0, 1, 2]);
    let trees = sig.enumerate(2);
    for w in &trees {
        let (tc, st) = transitive_closure(w);
        assert!(tc.iter().all(|t| t.children().iter().all(|c| tc.contains(c))));
        assert_eq!(st.len() + 1, tc.len());
        // Any transitive set containing w contains tc(w): grow from {w}.
        let mut grown = vec![w.clone()];
        let mut i = 0;
        while i < grown.len() {
            for c in grown[i].children().to_vec() {
                if !grown.contains(&c) {
                    grown.push(c);
                }
            }
            i += 1;
        }
        grown.sort();
        assert_eq!(grown, tc);
    }
}

#[test]
fn plain_bisim_examples() {
    let sig = PolySig::from_fiber_sizes(&[0, 1, 2]);
    let leaf = WTree::leaf(0);
    let one = WTree::sup(1, vec![leaf.clone()]);
    let two = WTree::sup(2, vec![leaf.clone(), leaf.clone()]);
    let m = BisimMode::Plain;
    assert!(bisim_test(&sig, &one, &one, &m).unwrap().top());
    assert!(bisim_test(&sig, &two, &one, &m).unwrap().top());
    assert!(!bisim_test(&sig, &leaf, &one, &m).unwrap().top());
}

#[test]
fn tables_satisfy_recursion_in_any_order() {
    let sig = PolySig::from_fiber_sizes(&[0, 1, 2]);
    let trees = sig.enumerate(2);
    let m = BisimMode::Plain;
    for w in &trees {
        for v in &trees {
            let t = bisim_test(&sig, w, v, &m).unwrap();
            t.verify(&sig, &m).unwrap();
            assert_eq!(t.top(), bisimilar(&sig, w, v, &m));
        }
    }
}

#[test]
fn plain_bisim_is_an_equivalence() {
    let sig = PolySig::from_fiber_sizes(&[0, 1, 2]);
    let trees = sig.enumerate(2);
    let m = BisimMode::Plain;
    let rel: Vec<Vec<bool>> =
        trees.iter().map(|w| trees.iter().map(|v| bisimilar(&sig, w, v, &m)).collect()).collect();
    let n = trees.len();
    for i in 0..n {
        assert!(rel[i][i]);
        for j in 0..n {
            assert_eq!(rel[i][j], rel[j][i]);
            for k in 0..n {
                assert!(!(rel[i][j] && rel[j][k]) || rel[i][k]);
            }
        }
    }
}

/// The representation-derived span for a map with the given fiber sizes.
fn span_for(sizes: &[usize]) -> (PolySig, Square) {
    let f_sig = PolySig::from_fiber_sizes(sizes);
    let k = sizes.iter().copied().max().unwrap_or(0);
    let span = collection_span(f_sig.map(), &Representation::standard(k)).unwrap();
    (f_sig, span)
}

#[test]
fn identity_span_relabels() {
    let f_sig = PolySig::from_fiber_sizes(&[0, 2]);
    let f = f_sig.map().clone();
    let sq = Square::new(
        FinMap::identity(f.dom()),
        f.clone(),
        f.clone(),
        FinMap::identity(f.cod()),
    )
    .unwrap();
    let q = wtype_via_span(&f_sig, &sq, 2).unwrap();
    assert!(q.bijective);
    assert_eq!(q.reflexive, q.total);
    assert!(q.classes.iter().all(|(g, ft)| g == ft));
}

#[test]
fn span_quotient_matches_direct_enumeration() {
    let (f_sig, span) = span_for(&[0, 1, 2]);
    assert_eq!(span.left.cod().len(), 5);
    check_collection_span(&span, &crate::cat::Scope::new(3)).unwrap();
    let q = wtype_via_span(&f_sig, &span, 2).unwrap();
    assert!(q.bijective);
    assert_eq!(q.classes.len(), 13);
    assert!(q.reflexive < q.total);
}

#[test]
fn non_reflexive_trees_are_excluded() {
    let (f_sig, span) = span_for(&[0, 1, 2]);
    let g_sig = PolySig::new(span.left.clone());
    let mode = BisimMode::Labeled { p: span.bottom.clone(), q: span.top.clone() };
    // A node over the one-point fiber whose two children both sit over that
    // point but carry different labels under p.
    let (p, q) = (&span.bottom, &span.top);
    let leaf_label = (0..g_sig.labels()).find(|&a| g_sig.arity(a) == 0).unwrap();
    let unary = (0..g_sig.labels()).find(|&a| g_sig.arity(a) == 1 && p.at(a) != p.at(leaf_label)).unwrap();
    let binary = (0..g_sig.labels())
        .find(|&a| g_sig.arity(a) == 2 && q.at(g_sig.fiber(a)[0]) == q.at(g_sig.fiber(a)[1]))
        .unwrap();
    let leaf = WTree::leaf(leaf_label);
    let bad = WTree::sup(binary, vec![leaf.clone(), WTree::sup(unary, vec![leaf.clone()])]);
    assert!(!bisim_test(&g_sig, &bad, &bad, &mode).unwrap().top());
    let good = WTree::sup(binary, vec![leaf.clone(), leaf]);
    assert!(bisim_test(&g_sig, &good, &good, &mode).unwrap().top());
    let _ = f_sig;
}

#[test]
fn p_pi_examples() {
    let rep = Representation::standard(2);
    let q = p_pi_quotient(&FinObj::range(2), &rep).unwrap();
    assert_eq!(q.p_pi.len(), 7);
    assert_eq!(q.classes.len(), 4);
    assert!(q.coincides());
    let e = p_pi_quotient(&FinObj::empty(), &rep).unwrap();
    assert_eq!(e.classes.len(), 1);
    for n in 0..=3 {
        assert!(p_pi_quotient(&FinObj::range(n), &rep).unwrap().tau.is_surjective());
    }
}
