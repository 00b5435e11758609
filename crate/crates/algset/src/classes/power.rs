//! Power classes `℘s(X)` for the shipped classes.

use serde_json::json;

use super::axioms::Diagram;
use super::{ClassKind, MapClass};
use crate::cat::{all_maps, product, Elem, FinMap, FinObj, Pullback, Subobject};
use crate::error::{Error, Result};

/// The object of subsets of `X` admitted by a class, with its membership relation.
#[derive(Clone, Debug)]
pub struct PowerClass {
    pub x: FinObj,
    /// Elements are `Elem::Set`s of elements of `x`.
    pub obj: FinObj,
    /// `∈_X ⊆ X × ℘s(X)`.
    pub memb: Subobject,
    /// Maximal subset size, `None` for all subsets.
    pub bound: Option<usize>,
}

fn bound_of(class: &MapClass) -> Result<Option<usize>> {
    match class.kind {
        ClassKind::FiberBound(k) => Ok(Some(k)),
        ClassKind::AllMaps => Ok(None),
        _ => Err(Error::Precondition(format!("power classes are built for fiber:k and all, not {class}"))),
    }
}

/// Subsets of `x` given by index lists, of size at most `bound`.
fn subsets(n: usize, bound: Option<usize>) -> Vec<Vec<usize>> {
    assert!(n < 24, "too many subsets to enumerate");
    (0u32..1 << n)
        .map(|bits| (0..n).filter(|&i| bits >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| bound.is_none_or(|k| s.len() <= k))
        .collect()
}

pub fn power_class(x: &FinObj, class: &MapClass) -> Result<PowerClass> {
    let bound = bound_of(class)?;
    let obj = FinObj::new(
        subsets(x.len(), bound)
            .into_iter()
            .map(|s| Elem::set(s.into_iter().map(|i| x.elem(i).clone()))),
    );
    let xp = product(x, &obj);
    let mask = xp
        .obj
        .elems()
        .iter()
        .map(|e| {
            let t = e.as_tuple().expect("pair");
            t[1].as_set().expect("subset").contains(&t[0])
        })
        .collect();
    let memb = Subobject::from_mask(&xp.obj, mask)?;
    Ok(PowerClass { x: x.clone(), obj, memb, bound })
}

impl PowerClass {
    pub fn product(&self) -> Pullback {
        product(&self.x, &self.obj)
    }

    /// The projection `∈_X → ℘s(X)`, which belongs to the class.
    pub fn memb_proj(&self) -> FinMap {
        let xp = self.product();
        xp.p2.after(&self.memb.inclusion()).expect("memb lies in the product")
    }

    /// The subset named by an element of `℘s(X)`.
    pub fn members(&self, s: usize) -> Vec<usize> {
        let set = self.obj.elem(s).as_set().expect("subset");
        set.iter().map(|e| self.x.index_of(e).expect("element of X")).collect()
    }

    fn index_of_subset(&self, idx: impl IntoIterator<Item = usize>) -> Result<usize> {
        let e = Elem::set(idx.into_iter().map(|i| self.x.elem(i).clone()));
        self.obj
            .index_of(&e)
            .ok_or_else(|| Error::NotDisplayed(format!("{e} exceeds the bound {:?}", self.bound)))
    }

    /// The unique `ρ: Y → ℘s(X)` with `ρ*(∈_X) = R`, for a displayed `R ⊆ X × Y`.
    pub fn classify(&self, y: &FinObj, r: &Subobject) -> Result<FinMap> {
        let xy = product(&self.x, y);
        if r.ambient() != &xy.obj {
            return Err(Error::AmbientMismatch(format!("{} is not X × Y", r.ambient())));
        }
        let mut fibers = vec![Vec::new(); y.len()];
        for i in r.indices() {
            fibers[xy.p2.at(i)].push(xy.p1.at(i));
        }
        let table = fibers
            .into_iter()
            .map(|xs| self.index_of_subset(xs))
            .collect::<Result<Vec<_>>>()?;
        FinMap::from_indices(y.clone(), self.obj.clone(), table)
    }

    /// `ρ*(∈_X)` as a subobject of `X × Y`.
    pub fn pull_memb(&self, rho: &FinMap) -> Result<Subobject> {
        if rho.cod() != &self.obj {
            return Err(Error::CodomainMismatch(format!("{} vs ℘s(X)", rho.cod())));
        }
        let xy = product(&self.x, rho.dom());
        let mask = (0..xy.obj.len())
            .map(|i| self.members(rho.at(xy.p2.at(i))).contains(&xy.p1.at(i)))
            .collect();
        Subobject::from_mask(&xy.obj, mask)
    }

    /// Checks the classifying property against every `R ⊆ X × Y`: displayed
    /// families have exactly one classifying map, others have none.
    pub fn check_universal(&self, y: &FinObj) -> Result<Option<Diagram>> {
        let xy = product(&self.x, y);
        let rhos = all_maps(y, &self.obj);
        let pulled: Vec<Subobject> = rhos.iter().map(|r| self.pull_memb(r)).collect::<Result<_>>()?;
        for r in Subobject::all(&xy.obj) {
            let displayed = self.classify(y, &r).is_ok();
            let matching: Vec<&FinMap> = rhos.iter().zip(&pulled).filter(|(_, p)| **p == r).map(|(m, _)| m).collect();
            let ok = if displayed {
                matching.len() == 1 && *matching[0] == self.classify(y, &r)?
            } else {
                matching.is_empty()
            };
            if !ok {
                return Ok(Some(
                    Diagram::new()
                        .with("family", json!(r))
                        .with("displayed", json!(displayed))
                        .with("classifying_maps", json!(matching)),
                ));
            }
        }
        Ok(None)
    }

    /// `η_X: X → ℘s(X)`, `x ↦ {x}`.
    pub fn unit(&self) -> Result<FinMap> {
        let table = (0..self.x.len()).map(|i| self.index_of_subset([i])).collect::<Result<Vec<_>>>()?;
        FinMap::from_indices(self.x.clone(), self.obj.clone(), table)
    }

    /// `μ_X: ℘s(℘s(X)) → ℘s(X)`, the union; `outer` must be the power class of `self.obj`.
    ///
    /// For fiber-bounded classes a union of `k` sets of size `k` may exceed
    /// the bound, in which case this reports the offending element.
    pub fn mult(&self, outer: &PowerClass) -> Result<FinMap> {
        if outer.x != self.obj {
            return Err(Error::Precondition("outer power class must be taken of ℘s(X)".into()));
        }
        let table = (0..outer.obj.len())
            .map(|s| {
                let mut union: Vec<usize> = outer.members(s).into_iter().flat_map(|t| self.members(t)).collect();
                union.sort_unstable();
                union.dedup();
                self.index_of_subset(union)
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::from_indices(outer.obj.clone(), self.obj.clone(), table)
    }

    /// The direct image `℘s(f): ℘s(X) → ℘s(Y)`.
    pub fn direct_image(&self, f: &FinMap, target: &PowerClass) -> Result<FinMap> {
        if f.dom() != &self.x || f.cod() != &target.x {
            return Err(Error::Precondition("map must go between the underlying objects".into()));
        }
        let table = (0..self.obj.len())
            .map(|s| {
                let mut img: Vec<usize> = self.members(s).into_iter().map(|i| f.at(i)).collect();
                img.sort_unstable();
                img.dedup();
                target.index_of_subset(img)
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::from_indices(self.obj.clone(), target.obj.clone(), table)
    }
}

/// `℘s_X(f) → X` for `f: Y → X`: the fiber over `x` consists of the subsets of
/// `f⁻¹(x)` with at most `k` elements.
pub fn power_over(f: &FinMap, k: usize) -> FinMap {
    let mut elems = Vec::new();
    for (x, fib) in f.fibers().iter().enumerate() {
        for s in subsets(fib.len(), Some(k)) {
            let sub = Elem::set(s.into_iter().map(|i| f.dom().elem(fib[i]).clone()));
            elems.push((Elem::pair(f.cod().elem(x).clone(), sub), x));
        }
    }
    elems.sort();
    let obj = FinObj::new(elems.iter().map(|(e, _)| e.clone()));
    FinMap::from_indices(obj, f.cod().clone(), elems.into_iter().map(|(_, x)| x).collect()).expect("valid table")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{surjections, Category, FinSet, Scope};

    #[test]
    fn sizes() {
        let x = FinObj::syms(&["a", "b"]);
        assert_eq!(power_class(&x, &MapClass::fiber_bound(1)).unwrap().obj.len(), 3);
        assert_eq!(power_class(&FinObj::empty(), &MapClass::fiber_bound(2)).unwrap().obj.len(), 1);
        assert_eq!(power_class(&FinObj::range(3), &MapClass::all()).unwrap().obj.len(), 8);
        assert!(power_class(&x, &MapClass::monos()).is_err());
    }

    #[test]
    fn memb_projection_is_in_class() {
        for k in 0..=2 {
            let cls = MapClass::fiber_bound(k);
            for n in 0..=3 {
                let pc = power_class(&FinObj::range(n), &cls).unwrap();
                assert!(cls.contains(&pc.memb_proj()));
            }
        }
    }

    #[test]
    fn classify_is_unique() {
        for k in 0..=2 {
            for xs in 0..=2 {
                let pc = power_class(&FinObj::range(xs), &MapClass::fiber_bound(k)).unwrap();
                for ys in 0..=2 {
                    assert_eq!(pc.check_universal(&FinObj::range(ys)).unwrap(), None, "k={k} |X|={xs} |Y|={ys}");
                }
            }
        }
    }

    #[test]
    fn classify_rejects_undisplayed() {
        let pc = power_class(&FinObj::range(2), &MapClass::fiber_bound(1)).unwrap();
        let y = FinObj::one();
        let r = Subobject::top(&product(&FinObj::range(2), &y).obj);
        assert!(matches!(pc.classify(&y, &r), Err(Error::NotDisplayed(_))));
    }

    #[test]
    fn monad_laws_for_all_maps() {
        let cls = MapClass::all();
        for n in 0..=3 {
            let p = power_class(&FinObj::range(n), &cls).unwrap();
            let pp = power_class(&p.obj, &cls).unwrap();
            let mu = p.mult(&pp).unwrap();
            let eta = p.unit().unwrap();
            let eta_p = pp.unit().unwrap();
            let id = FinMap::identity(&p.obj);
            // μ ∘ η_℘ = id and μ ∘ ℘(η) = id.
            assert_eq!(mu.after(&eta_p).unwrap(), id);
            assert_eq!(mu.after(&p.direct_image(&eta, &pp).unwrap()).unwrap(), id);
            if n <= 2 {
                // μ ∘ μ_℘ = μ ∘ ℘(μ) on ℘℘℘(X).
                let ppp = power_class(&pp.obj, &cls).unwrap();
                let lhs = mu.after(&pp.mult(&ppp).unwrap()).unwrap();
                let rhs = mu.after(&ppp.direct_image(&mu, &pp).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn unit_needs_room() {
        let pc = power_class(&FinObj::range(2), &MapClass::fiber_bound(0)).unwrap();
        assert!(pc.unit().is_err());
    }

    #[test]
    fn power_preserves_covers() {
        for k in 1..=2 {
            let cls = MapClass::fiber_bound(k);
            for x in FinSet.objects(&Scope::new(3)) {
                for y in FinSet.objects(&Scope::new(3)) {
                    let px = power_class(&x, &cls).unwrap();
                    let py = power_class(&y, &cls).unwrap();
                    for f in surjections(&x, &y) {
                        assert!(px.direct_image(&f, &py).unwrap().is_surjective());
                    }
                }
            }
        }
    }

    #[test]
    fn power_over_counts() {
        let f = FinMap::with_fiber_sizes(&[2, 0, 3]);
        let p = power_over(&f, 2);
        assert_eq!(p.fiber_sizes(), vec![4, 1, 7]);
    }
}
