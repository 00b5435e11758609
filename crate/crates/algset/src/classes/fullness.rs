//! Multi-valued sections and the fullness axiom.

use serde_json::json;

use super::axioms::{AxiomId, AxiomReport, Diagram, Status};
use super::{Decision, MapClass};
use crate::cat::{pullback, Category, Elem, FinMap, FinObj, FinSet, Scope, Subobject};
use crate::error::{Error, Result};

/// Largest domain whose subsets are enumerated outright.
const MAX_ENUM_BITS: usize = 20;

/// All `P ⊆ dom(φ)` on which `φ` is still surjective, by size and then lexicographically.
pub fn mvs_enumerate(phi: &FinMap) -> Vec<Subobject> {
    let b = phi.dom();
    assert!(b.len() <= MAX_ENUM_BITS, "domain too large to enumerate subsets");
    let mut out: Vec<Subobject> = Subobject::all(b).into_iter().filter(|p| covers(phi, p)).collect();
    out.sort_by_key(|p| (p.len(), p.indices()));
    out
}

fn covers(phi: &FinMap, p: &Subobject) -> bool {
    let mut hit = vec![false; phi.cod().len()];
    for i in p.indices() {
        hit[phi.at(i)] = true;
    }
    hit.into_iter().all(|h| h)
}

/// The inclusion-minimal mvss: these are exactly the images of sections of `φ`.
pub fn minimal_mvs(phi: &FinMap) -> Vec<Subobject> {
    let fibers = phi.fibers();
    if fibers.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let sizes: Vec<usize> = fibers.iter().map(Vec::len).collect();
    let mut out: Vec<Subobject> = crate::cat::product_indices(&sizes)
        .map(|choice| Subobject::from_indices(phi.dom(), choice.iter().enumerate().map(|(a, &c)| fibers[a][c])))
        .collect();
    out.sort_by_key(|p| p.indices());
    out
}

/// The restriction of `φ` to the part lying over `x`, as a map of fibers.
fn restrict(phi: &FinMap, over: &FinMap, x: usize) -> FinMap {
    let a: Vec<usize> = over.fiber(x);
    let b: Vec<usize> = (0..phi.dom().len()).filter(|&i| over.at(phi.at(i)) == x).collect();
    let a_obj = FinObj::new(a.iter().map(|&i| over.dom().elem(i).clone()));
    let b_obj = FinObj::new(b.iter().map(|&i| phi.dom().elem(i).clone()));
    FinMap::from_fn(b_obj, a_obj, |e| phi.apply(e).expect("element of B").clone()).expect("fiber map")
}

/// Checks fullness for `φ: B → A` over `over: A → X`.
///
/// The candidate generic family takes `X' = X`, indexes `Y` by the minimal
/// mvss of each fiber and lets `P` be the tautological mvs. Every generic
/// family must contain all minimal mvss over each point (test against `Z = 1`),
/// so if `Y → X` falls outside the class the axiom fails for `φ`.
pub fn check_fullness(phi: &FinMap, over: &FinMap, class: &MapClass, scope: &Scope) -> Result<AxiomReport> {
    if phi.cod() != over.dom() {
        return Err(Error::NotComposable(format!("{} vs {}", phi.cod(), over.dom())));
    }
    if class.decide_map(phi) != Decision::Yes || class.decide_map(over) != Decision::Yes {
        return Err(Error::Precondition("φ and its codomain must belong to the class".into()));
    }
    let x = over.cod();
    let mut y_elems = Vec::new();
    for xi in 0..x.len() {
        let local = restrict(phi, over, xi);
        for m in minimal_mvs(&local) {
            let members = Elem::set(m.indices().into_iter().map(|i| local.dom().elem(i).clone()));
            y_elems.push((Elem::pair(x.elem(xi).clone(), members), xi));
        }
    }
    y_elems.sort();
    let y_obj = FinObj::new(y_elems.iter().map(|(e, _)| e.clone()));
    let y = FinMap::from_indices(y_obj, x.clone(), y_elems.iter().map(|(_, xi)| *xi).collect())?;

    let full = over.after(phi)?;
    let yb = pullback(&y, &full)?;
    let p_mask: Vec<bool> = yb
        .obj
        .elems()
        .iter()
        .map(|e| {
            let t = e.as_tuple().expect("pair");
            let chosen = t[0].as_tuple().expect("index")[1].as_set().expect("mvs");
            chosen.contains(&t[1])
        })
        .collect();
    let p = Subobject::from_mask(&yb.obj, p_mask)?;
    let p_to_y = yb.p1.after(&p.inclusion())?;

    let witness = Diagram::new()
        .with("q", json!(FinMap::identity(x)))
        .with("y", json!(y))
        .with("P", json!(p));
    match class.decide_map(&y) {
        Decision::No => {
            let cex = Diagram::new().with("phi", json!(phi)).with("over", json!(over)).with("minimal_mvs_index", json!(y));
            return Ok(AxiomReport::fail(AxiomId::F, cex)
                .with_note("the minimal mvss over some point cannot be indexed by a map of the class"));
        }
        Decision::Unknown => return Ok(AxiomReport::new(AxiomId::F, Status::Inconclusive).with_note("class membership of the index map undecided")),
        Decision::Yes => {}
    }
    if class.decide_map(&p_to_y) != Decision::Yes {
        return Ok(AxiomReport::new(AxiomId::F, Status::Inconclusive).with_note("tautological mvs is not displayed"));
    }

    // P_y as a set of elements of B, per index y.
    let p_fib: Vec<Vec<usize>> = {
        let mut v = vec![Vec::new(); y.dom().len()];
        for i in p.indices() {
            v[yb.p1.at(i)].push(yb.p2.at(i));
        }
        v
    };
    let mut instances = 0;
    for z_obj in FinSet.objects(scope) {
        for z in crate::cat::all_maps(&z_obj, x) {
            let zb = pullback(&z, &full)?;
            if zb.obj.len() > MAX_ENUM_BITS {
                return Ok(AxiomReport::new(AxiomId::F, Status::Inconclusive).with_note("pulled-back family too large to enumerate"));
            }
            let za = pullback(&z, over)?;
            let zphi = za.factor(&zb.p1, &phi.after(&zb.p2)?)?;
            for q in mvs_enumerate(&zphi) {
                let q_to_z = zb.p1.after(&q.inclusion())?;
                if class.decide_map(&q_to_z) != Decision::Yes {
                    continue;
                }
                instances += 1;
                let mut q_fib = vec![Vec::new(); z_obj.len()];
                for i in q.indices() {
                    q_fib[zb.p1.at(i)].push(zb.p2.at(i));
                }
                // The largest U: pairs (y, ζ) over the same point with P_y ⊆ Q_ζ.
                let uncovered = (0..z_obj.len()).find(|&zeta| {
                    !(0..y.dom().len())
                        .any(|yi| y.at(yi) == z.at(zeta) && p_fib[yi].iter().all(|b| q_fib[zeta].contains(b)))
                });
                if let Some(zeta) = uncovered {
                    let cex = Diagram::new()
                        .with("phi", json!(phi))
                        .with("z", json!(z))
                        .with("Q", json!(q))
                        .with("point", json!(z_obj.elem(zeta)));
                    return Ok(AxiomReport::fail(AxiomId::F, cex).with_witness(witness));
                }
            }
        }
    }
    let mut rep = AxiomReport::new(AxiomId::F, Status::Pass)
        .with_witness(witness)
        .with_note(format!("generic over all Z of size ≤ {}", scope.max_size));
    rep.instances = instances;
    Ok(rep)
}
