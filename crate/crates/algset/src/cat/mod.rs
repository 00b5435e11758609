//! Positive Heyting categories.
//!
//! [`Category`] is the interface the axiom checkers are written against.
//! [`FinSet`] is the concrete finite-set instance; [`slice::Slice`] and the
//! exact completion in [`crate::exreg`] are further instances built on top.

pub mod finset;
pub mod slice;

use std::fmt::Debug;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
pub use finset::{
    all_maps, diagonal, eq_classifier, exists, exponential, forall, image_factor, is_covering_square,
    is_pullback_square, maps_over, pi, product, product_indices, pull, pullback, sum, sum_map, surjections, CoveringVerdict,
    DepProduct, Elem, FinMap, FinObj, Pullback, Square, Subobject, Sum, TruthObj,
};

/// The finite enumeration bound used by exhaustive checks.
///
/// Objects in scope are the canonical objects of each instance with at most
/// `max_size` elements (for finite sets: `{0..n-1}`, `n ≤ max_size`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Scope {
    pub max_size: usize,
}

impl Scope {
    pub fn new(max_size: usize) -> Self {
        Scope { max_size }
    }
}

impl Default for Scope {
    fn default() -> Self {
        Scope { max_size: 3 }
    }
}

/// A chosen pullback in an arbitrary instance.
#[derive(Clone, Debug)]
pub struct Cone<O, M> {
    pub obj: O,
    pub p1: M,
    pub p2: M,
}

/// A chosen binary sum in an arbitrary instance.
#[derive(Clone, Debug)]
pub struct Cocone<O, M> {
    pub obj: O,
    pub inl: M,
    pub inr: M,
}

/// The operations of a positive Heyting category, plus finite enumeration.
pub trait Category: Sync {
    type Obj: Clone + PartialEq + Debug + Send + Sync;
    type Mor: Clone + PartialEq + Debug + Send + Sync;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    /// Cardinality of the underlying carrier, used for search budgets.
    fn size(&self, x: &Self::Obj) -> usize;
    fn id(&self, x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    fn terminal(&self) -> Self::Obj;
    fn initial(&self) -> Self::Obj;
    fn to_terminal(&self, x: &Self::Obj) -> Self::Mor;
    fn from_initial(&self, x: &Self::Obj) -> Self::Mor;
    fn pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Cone<Self::Obj, Self::Mor>>;
    /// The map into the pullback of `f` and `g` induced by a commuting cone `(h, k)`.
    fn factor(&self, pb: &Cone<Self::Obj, Self::Mor>, h: &Self::Mor, k: &Self::Mor) -> Result<Self::Mor>;
    fn coproduct(&self, x: &Self::Obj, y: &Self::Obj) -> Cocone<Self::Obj, Self::Mor>;
    fn copair(&self, s: &Cocone<Self::Obj, Self::Mor>, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    /// `None` for covers; otherwise a description of a point not in the image.
    fn cover_defect(&self, f: &Self::Mor) -> Option<String>;
    fn is_mono(&self, f: &Self::Mor) -> bool;
    /// Cover-mono factorization `(e, m)` with `f = m ∘ e`.
    fn image(&self, f: &Self::Mor) -> (Self::Mor, Self::Mor);
    /// One mono per subobject of `x`.
    fn subobjects(&self, x: &Self::Obj) -> Vec<Self::Mor>;
    /// Order on monos into a common object.
    fn sub_le(&self, m: &Self::Mor, n: &Self::Mor) -> bool;
    /// `∀_f(m)` for a mono `m` into the domain of `f`.
    fn forall_along(&self, f: &Self::Mor, m: &Self::Mor) -> Result<Self::Mor>;
    fn objects(&self, scope: &Scope) -> Vec<Self::Obj>;
    fn homs(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor>;
    fn render(&self, f: &Self::Mor) -> Value;

    fn is_cover(&self, f: &Self::Mor) -> bool {
        self.cover_defect(f).is_none()
    }

    fn is_iso(&self, f: &Self::Mor) -> bool {
        self.is_mono(f) && self.is_cover(f)
    }

    fn product(&self, x: &Self::Obj, y: &Self::Obj) -> Cone<Self::Obj, Self::Mor> {
        self.pullback(&self.to_terminal(x), &self.to_terminal(y)).expect("maps into the terminal object")
    }

    fn diagonal(&self, x: &Self::Obj) -> Self::Mor {
        let id = self.id(x);
        let pr = self.product(x, x);
        self.factor(&pr, &id, &id).expect("diagonal cone commutes")
    }

    fn sum_map(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        let src = self.coproduct(&self.dom(f), &self.dom(g));
        let tgt = self.coproduct(&self.cod(f), &self.cod(g));
        let l = self.compose(&tgt.inl, f)?;
        let r = self.compose(&tgt.inr, g)?;
        self.copair(&src, &l, &r)
    }

    fn same_sub(&self, m: &Self::Mor, n: &Self::Mor) -> bool {
        self.sub_le(m, n) && self.sub_le(n, m)
    }

    /// Checks that the square commutes: `right ∘ top = bottom ∘ left`.
    fn commutes(&self, s: &Square<Self::Mor>) -> Result<bool> {
        Ok(self.compose(&s.right, &s.top)? == self.compose(&s.bottom, &s.left)?)
    }

    fn covering_verdict(&self, s: &Square<Self::Mor>) -> Result<CoveringVerdict> {
        if !self.commutes(s)? {
            return Err(Error::NotCommuting("square".into()));
        }
        let pb = self.pullback(&s.right, &s.bottom)?;
        let cmp = self.factor(&pb, &s.top, &s.left)?;
        let missed = self.cover_defect(&cmp);
        Ok(CoveringVerdict {
            quasi_pullback: missed.is_none(),
            bottom_cover: self.is_cover(&s.bottom),
            missed,
        })
    }

    fn is_pullback(&self, s: &Square<Self::Mor>) -> Result<bool> {
        if !self.commutes(s)? {
            return Ok(false);
        }
        let pb = self.pullback(&s.right, &s.bottom)?;
        Ok(self.is_iso(&self.factor(&pb, &s.top, &s.left)?))
    }

    /// All morphisms with codomain `y` whose domain lies in scope.
    fn maps_into(&self, y: &Self::Obj, scope: &Scope) -> Vec<Self::Mor> {
        self.objects(scope).iter().flat_map(|x| self.homs(x, y)).collect()
    }

    /// All morphisms with domain `x` whose codomain lies in scope.
    fn maps_from(&self, x: &Self::Obj, scope: &Scope) -> Vec<Self::Mor> {
        self.objects(scope).iter().flat_map(|y| self.homs(x, y)).collect()
    }

    fn all_homs(&self, scope: &Scope) -> Vec<Self::Mor> {
        let objs = self.objects(scope);
        objs.iter().flat_map(|x| objs.iter().flat_map(move |y| self.homs(x, y))).collect()
    }
}

/// The category of finite sets.
#[derive(Clone, Copy, Debug, Default)]
pub struct FinSet;

impl Category for FinSet {
    type Obj = FinObj;
    type Mor = FinMap;

    fn dom(&self, f: &FinMap) -> FinObj {
        f.dom().clone()
    }

    fn cod(&self, f: &FinMap) -> FinObj {
        f.cod().clone()
    }

    fn size(&self, x: &FinObj) -> usize {
        x.len()
    }

    fn id(&self, x: &FinObj) -> FinMap {
        FinMap::identity(x)
    }

    fn compose(&self, g: &FinMap, f: &FinMap) -> Result<FinMap> {
        g.after(f)
    }

    fn terminal(&self) -> FinObj {
        FinObj::one()
    }

    fn initial(&self) -> FinObj {
        FinObj::empty()
    }

    fn to_terminal(&self, x: &FinObj) -> FinMap {
        FinMap::to_terminal(x)
    }

    fn from_initial(&self, x: &FinObj) -> FinMap {
        FinMap::from_initial(x)
    }

    fn pullback(&self, f: &FinMap, g: &FinMap) -> Result<Cone<FinObj, FinMap>> {
        let pb = finset::pullback(f, g)?;
        Ok(Cone { obj: pb.obj, p1: pb.p1, p2: pb.p2 })
    }

    fn factor(&self, pb: &Cone<FinObj, FinMap>, h: &FinMap, k: &FinMap) -> Result<FinMap> {
        Pullback { obj: pb.obj.clone(), p1: pb.p1.clone(), p2: pb.p2.clone() }.factor(h, k)
    }

    fn coproduct(&self, x: &FinObj, y: &FinObj) -> Cocone<FinObj, FinMap> {
        let s = finset::sum(x, y);
        Cocone { obj: s.obj, inl: s.inl, inr: s.inr }
    }

    fn copair(&self, s: &Cocone<FinObj, FinMap>, f: &FinMap, g: &FinMap) -> Result<FinMap> {
        Sum { obj: s.obj.clone(), inl: s.inl.clone(), inr: s.inr.clone() }.copair(f, g)
    }

    fn cover_defect(&self, f: &FinMap) -> Option<String> {
        f.first_missed().map(|e| e.to_string())
    }

    fn is_mono(&self, f: &FinMap) -> bool {
        f.is_injective()
    }

    fn image(&self, f: &FinMap) -> (FinMap, FinMap) {
        finset::image_factor(f)
    }

    fn subobjects(&self, x: &FinObj) -> Vec<FinMap> {
        Subobject::all(x).iter().map(Subobject::inclusion).collect()
    }

    fn sub_le(&self, m: &FinMap, n: &FinMap) -> bool {
        m.range().le(&n.range()).unwrap_or(false)
    }

    fn forall_along(&self, f: &FinMap, m: &FinMap) -> Result<FinMap> {
        Ok(finset::forall(f, &m.range())?.inclusion())
    }

    fn objects(&self, scope: &Scope) -> Vec<FinObj> {
        (0..=scope.max_size).map(FinObj::range).collect()
    }

    fn homs(&self, x: &FinObj, y: &FinObj) -> Vec<FinMap> {
        finset::all_maps(x, y)
    }

    fn render(&self, f: &FinMap) -> Value {
        serde_json::to_value(f).expect("maps serialize")
    }
}
