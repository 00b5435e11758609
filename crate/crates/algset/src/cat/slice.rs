//! The slice `C/X` of an instance over a fixed object.

use serde_json::{json, Value};

use super::{Category, Cocone, Cone, Scope};
use crate::error::{Error, Result};

/// A morphism of `C/X`: a map `map` with `tgt ∘ map = src`.
#[derive(Clone, Debug, PartialEq)]
pub struct Over<M> {
    pub map: M,
    pub src: M,
    pub tgt: M,
}

/// The slice of `base` over `over`.
pub struct Slice<'a, C: Category> {
    pub base: &'a C,
    pub over: C::Obj,
}

impl<'a, C: Category> Slice<'a, C> {
    pub fn new(base: &'a C, over: C::Obj) -> Self {
        Slice { base, over }
    }

    fn check_over(&self, x: &C::Mor) -> Result<()> {
        if self.base.cod(x) != self.over {
            return Err(Error::AmbientMismatch("object of the slice must map into the base".into()));
        }
        Ok(())
    }

    /// Wraps a map `m: dom(x) → dom(y)` as a slice morphism, checking it commutes.
    pub fn lift(&self, m: C::Mor, x: &C::Mor, y: &C::Mor) -> Result<Over<C::Mor>> {
        self.check_over(x)?;
        self.check_over(y)?;
        if self.base.compose(y, &m)? != *x {
            return Err(Error::NotCommuting("map is not over the base".into()));
        }
        Ok(Over { map: m, src: x.clone(), tgt: y.clone() })
    }
}

impl<C: Category> Category for Slice<'_, C> {
    type Obj = C::Mor;
    type Mor = Over<C::Mor>;

    fn dom(&self, f: &Self::Mor) -> C::Mor {
        f.src.clone()
    }

    fn cod(&self, f: &Self::Mor) -> C::Mor {
        f.tgt.clone()
    }

    fn size(&self, x: &C::Mor) -> usize {
        self.base.size(&self.base.dom(x))
    }

    fn id(&self, x: &C::Mor) -> Self::Mor {
        Over { map: self.base.id(&self.base.dom(x)), src: x.clone(), tgt: x.clone() }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if f.tgt != g.src {
            return Err(Error::NotComposable("slice morphisms".into()));
        }
        Ok(Over { map: self.base.compose(&g.map, &f.map)?, src: f.src.clone(), tgt: g.tgt.clone() })
    }

    fn terminal(&self) -> C::Mor {
        self.base.id(&self.over)
    }

    fn initial(&self) -> C::Mor {
        self.base.from_initial(&self.over)
    }

    fn to_terminal(&self, x: &C::Mor) -> Self::Mor {
        Over { map: x.clone(), src: x.clone(), tgt: self.terminal() }
    }

    fn from_initial(&self, x: &C::Mor) -> Self::Mor {
        Over { map: self.base.from_initial(&self.base.dom(x)), src: self.initial(), tgt: x.clone() }
    }

    fn pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Cone<C::Mor, Self::Mor>> {
        if f.tgt != g.tgt {
            return Err(Error::CodomainMismatch("slice morphisms".into()));
        }
        let pb = self.base.pullback(&f.map, &g.map)?;
        let obj = self.base.compose(&f.src, &pb.p1)?;
        Ok(Cone {
            p1: Over { map: pb.p1, src: obj.clone(), tgt: f.src.clone() },
            p2: Over { map: pb.p2, src: obj.clone(), tgt: g.src.clone() },
            obj,
        })
    }

    fn factor(&self, pb: &Cone<C::Mor, Self::Mor>, h: &Self::Mor, k: &Self::Mor) -> Result<Self::Mor> {
        let base_pb = Cone { obj: self.base.dom(&pb.obj), p1: pb.p1.map.clone(), p2: pb.p2.map.clone() };
        let m = self.base.factor(&base_pb, &h.map, &k.map)?;
        Ok(Over { map: m, src: h.src.clone(), tgt: pb.obj.clone() })
    }

    fn coproduct(&self, x: &C::Mor, y: &C::Mor) -> Cocone<C::Mor, Self::Mor> {
        let s = self.base.coproduct(&self.base.dom(x), &self.base.dom(y));
        let obj = self.base.copair(&s, x, y).expect("both legs map into the base");
        Cocone {
            inl: Over { map: s.inl, src: x.clone(), tgt: obj.clone() },
            inr: Over { map: s.inr, src: y.clone(), tgt: obj.clone() },
            obj,
        }
    }

    fn copair(&self, s: &Cocone<C::Mor, Self::Mor>, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        let base_s = Cocone { obj: self.base.dom(&s.obj), inl: s.inl.map.clone(), inr: s.inr.map.clone() };
        let m = self.base.copair(&base_s, &f.map, &g.map)?;
        Ok(Over { map: m, src: s.obj.clone(), tgt: f.tgt.clone() })
    }

    fn cover_defect(&self, f: &Self::Mor) -> Option<String> {
        self.base.cover_defect(&f.map)
    }

    fn is_mono(&self, f: &Self::Mor) -> bool {
        self.base.is_mono(&f.map)
    }

    fn image(&self, f: &Self::Mor) -> (Self::Mor, Self::Mor) {
        let (e, m) = self.base.image(&f.map);
        let mid = self.base.compose(&f.tgt, &m).expect("image lies over the codomain");
        (
            Over { map: e, src: f.src.clone(), tgt: mid.clone() },
            Over { map: m, src: mid, tgt: f.tgt.clone() },
        )
    }

    fn subobjects(&self, x: &C::Mor) -> Vec<Self::Mor> {
        self.base
            .subobjects(&self.base.dom(x))
            .into_iter()
            .map(|m| {
                let src = self.base.compose(x, &m).expect("subobject of the domain");
                Over { map: m, src, tgt: x.clone() }
            })
            .collect()
    }

    fn sub_le(&self, m: &Self::Mor, n: &Self::Mor) -> bool {
        self.base.sub_le(&m.map, &n.map)
    }

    fn forall_along(&self, f: &Self::Mor, m: &Self::Mor) -> Result<Self::Mor> {
        let a = self.base.forall_along(&f.map, &m.map)?;
        let src = self.base.compose(&f.tgt, &a)?;
        Ok(Over { map: a, src, tgt: f.tgt.clone() })
    }

    fn objects(&self, scope: &Scope) -> Vec<C::Mor> {
        self.base.maps_into(&self.over, scope)
    }

    fn homs(&self, x: &C::Mor, y: &C::Mor) -> Vec<Self::Mor> {
        self.base
            .homs(&self.base.dom(x), &self.base.dom(y))
            .into_iter()
            .filter(|m| self.base.compose(y, m).is_ok_and(|c| c == *x))
            .map(|m| Over { map: m, src: x.clone(), tgt: y.clone() })
            .collect()
    }

    fn render(&self, f: &Self::Mor) -> Value {
        json!({ "map": self.base.render(&f.map), "over": self.base.render(&f.tgt) })
    }
}
