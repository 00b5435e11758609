//! Representations of classes by a single map, and the universal small map.

use serde::Serialize;
use serde_json::json;

use super::axioms::{AxiomReport, Diagram, Status};
use super::{Decision, MapClass};
use crate::cat::{
    all_maps, is_covering_square, is_pullback_square, pullback, surjections, Category, Elem, FinMap, FinObj, FinSet,
    Scope, Square,
};
use crate::error::{Error, Result};

const REPRESENTABILITY: &str = "Rep";
const STRICT: &str = "StrictRep";

/// A map `π: E → U` whose pullbacks are meant to cover a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub pi: FinMap,
}

impl Representation {
    pub fn new(pi: FinMap) -> Self {
        Representation { pi }
    }

    /// `π_k`: `U = {0,…,k}` with the fiber over `m` of size `m`.
    pub fn standard(k: usize) -> Self {
        let sizes: Vec<usize> = (0..=k).collect();
        Representation { pi: FinMap::with_fiber_sizes(&sizes) }
    }

    pub fn identity_on_one() -> Self {
        Representation { pi: FinMap::identity(&FinObj::one()) }
    }

    pub fn total(&self) -> &FinObj {
        self.pi.dom()
    }

    pub fn base(&self) -> &FinObj {
        self.pi.cod()
    }

    /// `E_u` as an object.
    pub fn fiber(&self, u: usize) -> FinObj {
        FinObj::new(self.pi.fiber(u).into_iter().map(|i| self.pi.dom().elem(i).clone()))
    }
}

/// The left and right squares exhibiting `f` as covered by a pullback of `π`.
pub(crate) struct TwoSquares {
    pub(crate) left: Square,
    pub(crate) right: Square,
}

impl TwoSquares {
    fn render(&self) -> Diagram {
        Diagram::new()
            .with("A→Y", json!(self.left.top))
            .with("A→B", json!(self.left.left))
            .with("B→X", json!(self.left.bottom))
            .with("A→E", json!(self.right.top))
            .with("B→U", json!(self.right.bottom))
    }
}

/// Builds `B = {(x, u, s)}` with `s: E_u → Y_x` chosen by `admit`, the pullback
/// `A = B ×_U E` and the evident squares. `None` when some `x` gets no index.
pub(crate) fn two_squares(
    rep: &Representation,
    f: &FinMap,
    admit: impl Fn(&FinObj, &FinObj) -> Vec<FinMap>,
) -> Result<Option<TwoSquares>> {
    let fibers = f.fibers();
    let mut rows: Vec<(Elem, usize, usize, FinMap)> = Vec::new();
    for (x, fib) in fibers.iter().enumerate() {
        let yx = FinObj::new(fib.iter().map(|&i| f.dom().elem(i).clone()));
        let before = rows.len();
        for u in 0..rep.base().len() {
            for s in admit(&rep.fiber(u), &yx) {
                let label = Elem::Tuple(vec![
                    f.cod().elem(x).clone(),
                    rep.base().elem(u).clone(),
                    Elem::Tuple(s.table().iter().map(|&j| yx.elem(j).clone()).collect()),
                ]);
                rows.push((label, x, u, s));
            }
        }
        if rows.len() == before {
            return Ok(None);
        }
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let b_obj = FinObj::new(rows.iter().map(|r| r.0.clone()));
    let to_x = FinMap::from_indices(b_obj.clone(), f.cod().clone(), rows.iter().map(|r| r.1).collect())?;
    let to_u = FinMap::from_indices(b_obj, rep.base().clone(), rows.iter().map(|r| r.2).collect())?;
    let pb = pullback(&to_u, &rep.pi)?;
    let to_y = FinMap::from_fn(pb.obj.clone(), f.dom().clone(), |e| {
        let t = e.as_tuple().expect("pair");
        let row = &rows[to_u.dom().index_of(&t[0]).expect("row")];
        let fib = rep.fiber(row.2);
        let yx = &fibers[row.1];
        f.dom().elem(yx[row.3.at(fib.index_of(&t[1]).expect("fiber element"))]).clone()
    })?;
    let left = Square::new(to_y, pb.p1.clone(), f.clone(), to_x)?;
    let right = Square::new(pb.p2, pb.p1, rep.pi.clone(), to_u)?;
    Ok(Some(TwoSquares { left, right }))
}

fn bijections(a: &FinObj, b: &FinObj) -> Vec<FinMap> {
    if a.len() != b.len() {
        return Vec::new();
    }
    surjections(a, b)
}

fn members_in_scope(class: &MapClass, scope: &Scope) -> Vec<FinMap> {
    FinSet.all_homs(scope).into_iter().filter(|f| class.decide_map(f) == Decision::Yes).collect()
}

/// Every member of the class in scope must sit in a covering square whose left
/// leg is a pullback of `π`.
///
/// A covering square makes each fiber `Y_x` an image of some `E_u`, so the
/// search over `(u, s: E_u ↠ Y_x)` is complete and a missing index is a genuine
/// counterexample.
pub fn check_representation(rep: &Representation, class: &MapClass, scope: &Scope) -> Result<AxiomReport> {
    if class.decide_map(&rep.pi) == Decision::No {
        return Ok(AxiomReport::fail(REPRESENTABILITY, Diagram::new().with("pi", json!(rep.pi)))
            .with_note("π does not belong to the class"));
    }
    let mut instances = 0;
    let mut witness = None;
    for f in members_in_scope(class, scope) {
        instances += 1;
        match two_squares(rep, &f, surjections)? {
            None => {
                let mut r = AxiomReport::fail(REPRESENTABILITY, Diagram::new().with("f", json!(f)))
                    .with_note("some fiber of f is not an image of a fiber of π");
                r.instances = instances;
                return Ok(r);
            }
            Some(sq) => {
                let ok = is_covering_square(&sq.left).is_covering() && is_pullback_square(&sq.right);
                if !ok {
                    return Err(Error::NotCommuting(format!("witness squares for {f:?} are malformed")));
                }
                if witness.is_none() && f.max_fiber() > 1 {
                    witness = Some(sq.render().with("f", json!(f)));
                }
            }
        }
    }
    let mut r = AxiomReport::new(REPRESENTABILITY, Status::Pass);
    r.witness = witness;
    r.instances = instances;
    Ok(r)
}

/// Whether a relation on `n` points, given as index pairs, is an equivalence relation.
fn is_equivalence(n: usize, pairs: &[(usize, usize)]) -> bool {
    let mut m = vec![vec![false; n]; n];
    for &(a, b) in pairs {
        m[a][b] = true;
    }
    (0..n).all(|a| m[a][a])
        && (0..n).all(|a| (0..n).all(|b| m[a][b] == m[b][a]))
        && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(m[a][b] && m[b][c]) || m[a][c])))
}

/// Classes of an equivalence relation, as sorted index lists.
fn classes_of(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if out.iter().any(|c| c.contains(&a)) {
            continue;
        }
        let mut c: Vec<usize> = (0..n).filter(|&b| pairs.contains(&(a, b))).collect();
        c.sort_unstable();
        out.push(c);
    }
    out
}

/// `π′: E′ → U′` over triples `(u, v, p: E_v → E_u × E_u)` whose image is an
/// equivalence relation, with fiber `E_u / Im p`.
pub fn universal_small_map(rep: &Representation, class: &MapClass) -> Result<Representation> {
    let check = check_representation(rep, class, &Scope::new(2))?;
    if check.status != Status::Pass {
        return Err(Error::Precondition(format!("π does not represent {class}")));
    }
    let mut base = Vec::new();
    let mut total = Vec::new();
    for u in 0..rep.base().len() {
        let eu = rep.fiber(u);
        let sq = crate::cat::product(&eu, &eu);
        for v in 0..rep.base().len() {
            let ev = rep.fiber(v);
            for p in all_maps(&ev, &sq.obj) {
                let pairs: Vec<(usize, usize)> = p.range().indices().into_iter().map(|i| (sq.p1.at(i), sq.p2.at(i))).collect();
                if !is_equivalence(eu.len(), &pairs) {
                    continue;
                }
                let label = Elem::Tuple(vec![
                    rep.base().elem(u).clone(),
                    rep.base().elem(v).clone(),
                    Elem::Tuple(p.table().iter().map(|&j| sq.obj.elem(j).clone()).collect()),
                ]);
                for c in classes_of(eu.len(), &pairs) {
                    let cls = Elem::set(c.into_iter().map(|i| eu.elem(i).clone()));
                    total.push((Elem::pair(label.clone(), cls), label.clone()));
                }
                base.push(label);
            }
        }
    }
    let base = FinObj::new(base);
    let dom = FinObj::new(total.iter().map(|t| t.0.clone()));
    let pi = FinMap::from_fn(dom, base, |e| e.as_tuple().expect("pair")[0].clone())?;
    Ok(Representation { pi })
}

/// Every member in scope must be a pullback of `π` along a map out of some `B`
/// that covers its codomain, both squares being pullbacks.
pub fn check_strict_representation(rep: &Representation, class: &MapClass, scope: &Scope) -> Result<AxiomReport> {
    let mut instances = 0;
    let mut witness = None;
    for f in members_in_scope(class, scope) {
        instances += 1;
        match two_squares(rep, &f, bijections)? {
            None => {
                let mut r = AxiomReport::fail(STRICT, Diagram::new().with("f", json!(f)))
                    .with_note("some fiber of f matches no fiber of π in size");
                r.instances = instances;
                return Ok(r);
            }
            Some(sq) => {
                let ok = is_pullback_square(&sq.left) && sq.left.bottom.is_surjective() && is_pullback_square(&sq.right);
                if !ok {
                    return Err(Error::NotCommuting(format!("witness squares for {f:?} are malformed")));
                }
                if witness.is_none() && f.max_fiber() > 1 {
                    witness = Some(sq.render().with("f", json!(f)));
                }
            }
        }
    }
    let mut r = AxiomReport::new(STRICT, Status::Pass);
    r.witness = witness;
    r.instances = instances;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_shape() {
        let r = Representation::standard(2);
        assert_eq!(r.pi.fiber_sizes(), vec![0, 1, 2]);
    }

    #[test]
    fn standard_represents_fiber_bound() {
        for k in 0..=2 {
            let rep = check_representation(&Representation::standard(k), &MapClass::fiber_bound(k), &Scope::new(3)).unwrap();
            assert_eq!(rep.status, Status::Pass, "k={k}");
        }
    }

    #[test]
    fn point_represents_isos() {
        let rep = check_representation(&Representation::identity_on_one(), &MapClass::isos(), &Scope::new(3)).unwrap();
        assert_eq!(rep.status, Status::Pass);
    }

    #[test]
    fn pi1_misses_two_to_one() {
        let rep = check_representation(&Representation::standard(1), &MapClass::fiber_bound(2), &Scope::new(3)).unwrap();
        assert_eq!(rep.status, Status::Fail);
        let f = rep.counterexample.unwrap().get("f").unwrap().clone();
        assert_eq!(f, json!(FinMap::to_terminal(&FinObj::range(2))));
    }

    #[test]
    fn pi1_universal_map() {
        let u = universal_small_map(&Representation::standard(1), &MapClass::fiber_bound(1)).unwrap();
        // (0,0,!) with empty fiber, (1,1,p) with one class.
        assert_eq!(u.pi.fiber_sizes(), vec![0, 1]);
    }

    #[test]
    fn pi2_universal_map() {
        let u = universal_small_map(&Representation::standard(2), &MapClass::fiber_bound(2)).unwrap();
        let mut sizes = u.pi.fiber_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![0, 1, 1, 2, 2]);
        let rep = check_strict_representation(&u, &MapClass::fiber_bound(2), &Scope::new(2)).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn universal_fibers_are_quotients() {
        // Oracle: the classes of Im p are counted by their least elements.
        let rep = Representation::standard(2);
        let u = universal_small_map(&rep, &MapClass::fiber_bound(2)).unwrap();
        for (i, label) in u.pi.cod().elems().iter().enumerate() {
            let t = label.as_tuple().unwrap();
            let eu = rep.fiber(rep.base().index_of(&t[0]).unwrap());
            let pairs: Vec<(&Elem, &Elem)> = t[2]
                .as_tuple()
                .unwrap()
                .iter()
                .map(|p| (&p.as_tuple().unwrap()[0], &p.as_tuple().unwrap()[1]))
                .collect();
            let least = eu.elems().iter().filter(|a| !pairs.iter().any(|(x, y)| x == a && y < a)).count();
            assert_eq!(u.pi.fiber(i).len(), least);
        }
    }
}
