//! Finite sets and tabulated functions.
//!
//! Objects are sorted, duplicate-free element lists, so structural equality
//! is set equality. Maps store, for each domain index, the codomain index.

use std::fmt;
use std::sync::Arc;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of a finite set.
///
/// Constructed objects (pullbacks, sums, function sets) build their elements
/// out of the elements of their inputs, so the variants mirror those
/// constructions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Elem {
    Atom(u32),
    Sym(Arc<str>),
    Tuple(Vec<Elem>),
    Inj(u32, Box<Elem>),
    Set(Vec<Elem>),
}

impl Elem {
    pub fn sym(name: &str) -> Self {
        Elem::Sym(Arc::from(name))
    }

    pub fn pair(a: Elem, b: Elem) -> Self {
        Elem::Tuple(vec![a, b])
    }

    /// A finite set of elements in canonical (sorted, deduplicated) form.
    pub fn set(items: impl IntoIterator<Item = Elem>) -> Self {
        let mut v: Vec<Elem> = items.into_iter().collect();
        v.sort();
        v.dedup();
        Elem::Set(v)
    }

    pub fn as_set(&self) -> Option<&[Elem]> {
        match self {
            Elem::Set(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Elem]> {
        match self {
            Elem::Tuple(v) => Some(v),
            _ => None,
        }
    }
}

impl From<u32> for Elem {
    fn from(n: u32) -> Self {
        Elem::Atom(n)
    }
}

impl From<&str> for Elem {
    fn from(s: &str) -> Self {
        Elem::sym(s)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, open: &str, items: &[Elem], close: &str) -> fmt::Result {
    f.write_str(open)?;
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{e}")?;
    }
    f.write_str(close)
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Atom(n) => write!(f, "{n}"),
            Elem::Sym(s) => f.write_str(s),
            Elem::Tuple(v) => write_list(f, "(", v, ")"),
            Elem::Inj(i, e) => write!(f, "in{i}({e})"),
            Elem::Set(v) => write_list(f, "{", v, "}"),
        }
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A finite set with canonically ordered elements.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinObj {
    elems: Arc<[Elem]>,
}

impl FinObj {
    pub fn new(elems: impl IntoIterator<Item = Elem>) -> Self {
        let mut v: Vec<Elem> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        FinObj { elems: v.into() }
    }

    /// `{0, …, n-1}`.
    pub fn range(n: usize) -> Self {
        FinObj { elems: (0..n as u32).map(Elem::Atom).collect() }
    }

    pub fn syms(names: &[&str]) -> Self {
        FinObj::new(names.iter().map(|s| Elem::sym(s)))
    }

    pub fn empty() -> Self {
        FinObj::range(0)
    }

    pub fn one() -> Self {
        FinObj::range(1)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn elem(&self, i: usize) -> &Elem {
        &self.elems[i]
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.elems.binary_search(e).ok()
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.index_of(e).is_some()
    }

    fn require(&self, e: &Elem) -> Result<usize> {
        self.index_of(e).ok_or_else(|| Error::NotAnElement(e.to_string()))
    }
}

impl fmt::Display for FinObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, "{", &self.elems, "}")
    }
}

impl fmt::Debug for FinObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FinObj {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for e in self.elems.iter() {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

/// A total function between finite sets, stored as an index table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinMap {
    dom: FinObj,
    cod: FinObj,
    table: Arc<[usize]>,
}

impl FinMap {
    pub fn from_indices(dom: FinObj, cod: FinObj, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.len() {
            return Err(Error::Precondition(format!(
                "table has {} entries for a domain of size {}",
                table.len(),
                dom.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&j| j >= cod.len()) {
            return Err(Error::NotAnElement(format!("index {bad} of {cod}")));
        }
        Ok(FinMap { dom, cod, table: table.into() })
    }

    pub(crate) fn from_indices_unchecked(dom: FinObj, cod: FinObj, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), dom.len());
        FinMap { dom, cod, table: table.into() }
    }

    pub fn from_fn(dom: FinObj, cod: FinObj, f: impl Fn(&Elem) -> Elem) -> Result<Self> {
        let table = dom
            .elems()
            .iter()
            .map(|e| cod.require(&f(e)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap { dom, cod, table: table.into() })
    }

    /// Builds a map from an explicit list of `(x, f(x))` pairs covering the domain.
    pub fn from_pairs(dom: FinObj, cod: FinObj, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let mut table = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let i = dom.require(x)?;
            table[i] = cod.require(y)?;
        }
        if let Some(i) = table.iter().position(|&j| j == usize::MAX) {
            return Err(Error::Precondition(format!("no value given for {}", dom.elem(i))));
        }
        Ok(FinMap { dom, cod, table: table.into() })
    }

    pub fn identity(x: &FinObj) -> Self {
        FinMap::from_indices_unchecked(x.clone(), x.clone(), (0..x.len()).collect())
    }

    pub fn to_terminal(x: &FinObj) -> Self {
        FinMap::from_indices_unchecked(x.clone(), FinObj::one(), vec![0; x.len()])
    }

    pub fn from_initial(x: &FinObj) -> Self {
        FinMap::from_indices_unchecked(FinObj::empty(), x.clone(), vec![])
    }

    /// The map `{0..n-1} → {0..k-1}` whose fiber over `j` has `sizes[j]` elements,
    /// listed fiber by fiber.
    pub fn with_fiber_sizes(sizes: &[usize]) -> Self {
        let table: Vec<usize> = sizes.iter().enumerate().flat_map(|(j, &s)| std::iter::repeat_n(j, s)).collect();
        FinMap::from_indices_unchecked(FinObj::range(table.len()), FinObj::range(sizes.len()), table)
    }

    pub fn dom(&self) -> &FinObj {
        &self.dom
    }

    pub fn cod(&self) -> &FinObj {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn at(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply(&self, x: &Elem) -> Result<&Elem> {
        let i = self.dom.require(x)?;
        Ok(self.cod.elem(self.table[i]))
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &FinMap) -> Result<FinMap> {
        if f.cod != self.dom {
            return Err(Error::NotComposable(format!("{} vs {}", f.cod, self.dom)));
        }
        let table = f.table.iter().map(|&j| self.table[j]).collect();
        Ok(FinMap::from_indices_unchecked(f.dom.clone(), self.cod.clone(), table))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FinMap) -> Result<FinMap> {
        g.after(self)
    }

    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (0..self.dom.len()).filter(|&i| self.table[i] == j).collect()
    }

    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cod.len()];
        for (i, &j) in self.table.iter().enumerate() {
            out[j].push(i);
        }
        out
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.cod.len()];
        for &j in self.table.iter() {
            out[j] += 1;
        }
        out
    }

    pub fn max_fiber(&self) -> usize {
        self.fiber_sizes().into_iter().max().unwrap_or(0)
    }

    /// Sorted fiber sizes: two maps are isomorphic as arrows iff their profiles agree.
    pub fn profile(&self) -> Vec<usize> {
        let mut s = self.fiber_sizes();
        s.sort_unstable();
        s
    }

    pub fn is_surjective(&self) -> bool {
        self.fiber_sizes().iter().all(|&s| s > 0)
    }

    pub fn is_injective(&self) -> bool {
        self.fiber_sizes().iter().all(|&s| s <= 1)
    }

    pub fn is_iso(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    /// The range as a subobject of the codomain.
    pub fn range(&self) -> Subobject {
        let mut mask = vec![false; self.cod.len()];
        for &j in self.table.iter() {
            mask[j] = true;
        }
        Subobject { ambient: self.cod.clone(), mask }
    }

    /// First codomain element with an empty fiber.
    pub fn first_missed(&self) -> Option<&Elem> {
        self.fiber_sizes().iter().position(|&s| s == 0).map(|j| self.cod.elem(j))
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{} [", self.dom, self.cod)?;
        for (i, &j) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}↦{}", self.dom.elem(i), self.cod.elem(j))?;
        }
        f.write_str("]")
    }
}

impl Serialize for FinMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(&Elem, &Elem)> =
            self.table.iter().enumerate().map(|(i, &j)| (self.dom.elem(i), self.cod.elem(j))).collect();
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("dom", &self.dom)?;
        m.serialize_entry("cod", &self.cod)?;
        m.serialize_entry("map", &pairs)?;
        m.end()
    }
}

/// A subobject of a finite set, represented by its carrier.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subobject {
    ambient: FinObj,
    mask: Vec<bool>,
}

impl Subobject {
    pub fn new(ambient: &FinObj, carrier: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let mut mask = vec![false; ambient.len()];
        for e in carrier {
            mask[ambient.require(&e)?] = true;
        }
        Ok(Subobject { ambient: ambient.clone(), mask })
    }

    pub fn from_mask(ambient: &FinObj, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != ambient.len() {
            return Err(Error::AmbientMismatch(format!("mask of length {} over {}", mask.len(), ambient)));
        }
        Ok(Subobject { ambient: ambient.clone(), mask })
    }

    pub fn from_indices(ambient: &FinObj, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; ambient.len()];
        for i in idx {
            mask[i] = true;
        }
        Subobject { ambient: ambient.clone(), mask }
    }

    pub fn top(x: &FinObj) -> Self {
        Subobject { ambient: x.clone(), mask: vec![true; x.len()] }
    }

    pub fn bottom(x: &FinObj) -> Self {
        Subobject { ambient: x.clone(), mask: vec![false; x.len()] }
    }

    /// All subobjects of `x`, ordered by the binary value of the mask.
    pub fn all(x: &FinObj) -> Vec<Subobject> {
        assert!(x.len() < 24, "too many subobjects to enumerate");
        (0u32..1 << x.len())
            .map(|bits| Subobject {
                ambient: x.clone(),
                mask: (0..x.len()).map(|i| bits >> i & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn ambient(&self) -> &FinObj {
        &self.ambient
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.ambient.index_of(e).is_some_and(|i| self.mask[i])
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&i| self.mask[i]).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn carrier(&self) -> FinObj {
        FinObj::new(self.indices().into_iter().map(|i| self.ambient.elem(i).clone()))
    }

    /// The inclusion of the carrier into the ambient object.
    pub fn inclusion(&self) -> FinMap {
        let idx = self.indices();
        let carrier = FinObj::new(idx.iter().map(|&i| self.ambient.elem(i).clone()));
        FinMap::from_indices_unchecked(carrier, self.ambient.clone(), idx)
    }

    fn same_ambient(&self, other: &Subobject) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(format!("{} vs {}", self.ambient, other.ambient)));
        }
        Ok(())
    }

    pub fn le(&self, other: &Subobject) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b))
    }

    fn zip_with(&self, other: &Subobject, op: impl Fn(bool, bool) -> bool) -> Result<Subobject> {
        self.same_ambient(other)?;
        let mask = self.mask.iter().zip(&other.mask).map(|(&a, &b)| op(a, b)).collect();
        Ok(Subobject { ambient: self.ambient.clone(), mask })
    }

    pub fn meet(&self, other: &Subobject) -> Result<Subobject> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn join(&self, other: &Subobject) -> Result<Subobject> {
        self.zip_with(other, |a, b| a || b)
    }

    /// Heyting implication; in a powerset lattice this is `¬a ∨ b`.
    pub fn implies(&self, other: &Subobject) -> Result<Subobject> {
        self.zip_with(other, |a, b| !a || b)
    }
}

impl Serialize for Subobject {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.carrier().serialize(s)
    }
}

/// Inverse image `f⁻¹(s)` of a subobject of the codomain.
pub fn pull(f: &FinMap, s: &Subobject) -> Result<Subobject> {
    if s.ambient() != f.cod() {
        return Err(Error::AmbientMismatch(format!("{} is not the codomain {}", s.ambient(), f.cod())));
    }
    let mask = f.table().iter().map(|&j| s.mask[j]).collect();
    Ok(Subobject { ambient: f.dom().clone(), mask })
}

/// Direct image `f(s)`.
pub fn exists(f: &FinMap, s: &Subobject) -> Result<Subobject> {
    if s.ambient() != f.dom() {
        return Err(Error::AmbientMismatch(format!("{} is not the domain {}", s.ambient(), f.dom())));
    }
    let mut mask = vec![false; f.cod().len()];
    for i in s.indices() {
        mask[f.at(i)] = true;
    }
    Ok(Subobject { ambient: f.cod().clone(), mask })
}

/// Dual image `{x : f⁻¹(x) ⊆ s}`.
pub fn forall(f: &FinMap, s: &Subobject) -> Result<Subobject> {
    if s.ambient() != f.dom() {
        return Err(Error::AmbientMismatch(format!("{} is not the domain {}", s.ambient(), f.dom())));
    }
    let mut mask = vec![true; f.cod().len()];
    for (i, &j) in f.table().iter().enumerate() {
        if !s.mask[i] {
            mask[j] = false;
        }
    }
    Ok(Subobject { ambient: f.cod().clone(), mask })
}

/// A chosen pullback `P = B ×_A C` with its projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub obj: FinObj,
    /// Projection to the domain of the first map.
    pub p1: FinMap,
    /// Projection to the domain of the second map.
    pub p2: FinMap,
}

/// `{(b, c) : f(b) = g(c)}`, with elements written as pairs.
pub fn pullback(f: &FinMap, g: &FinMap) -> Result<Pullback> {
    if f.cod() != g.cod() {
        return Err(Error::CodomainMismatch(format!("{} vs {}", f.cod(), g.cod())));
    }
    let mut idx = Vec::new();
    for i in 0..f.dom().len() {
        for k in 0..g.dom().len() {
            if f.at(i) == g.at(k) {
                idx.push((i, k));
            }
        }
    }
    // Pairs of sorted components come out lexicographically sorted, which is
    // the canonical order of `Elem::Tuple`.
    let obj = FinObj {
        elems: idx
            .iter()
            .map(|&(i, k)| Elem::pair(f.dom().elem(i).clone(), g.dom().elem(k).clone()))
            .collect(),
    };
    let p1 = FinMap::from_indices_unchecked(obj.clone(), f.dom().clone(), idx.iter().map(|p| p.0).collect());
    let p2 = FinMap::from_indices_unchecked(obj.clone(), g.dom().clone(), idx.iter().map(|p| p.1).collect());
    Ok(Pullback { obj, p1, p2 })
}

impl Pullback {
    /// The unique map `T → P` induced by `h: T → B` and `k: T → C`.
    pub fn factor(&self, h: &FinMap, k: &FinMap) -> Result<FinMap> {
        if h.dom() != k.dom() {
            return Err(Error::Precondition(format!("cone legs have domains {} and {}", h.dom(), k.dom())));
        }
        let table = (0..h.dom().len())
            .map(|t| {
                let e = Elem::pair(h.cod().elem(h.at(t)).clone(), k.cod().elem(k.at(t)).clone());
                self.obj.require(&e).map_err(|_| Error::NotCommuting(format!("cone point {} lands outside", e)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap::from_indices_unchecked(h.dom().clone(), self.obj.clone(), table))
    }
}

pub fn product(x: &FinObj, y: &FinObj) -> Pullback {
    pullback(&FinMap::to_terminal(x), &FinMap::to_terminal(y)).expect("terminal maps share a codomain")
}

/// The diagonal `X → X × X`.
pub fn diagonal(x: &FinObj) -> FinMap {
    let id = FinMap::identity(x);
    product(x, x).factor(&id, &id).expect("diagonal cone commutes")
}

/// Cover-mono factorization through the range of `f`.
pub fn image_factor(f: &FinMap) -> (FinMap, FinMap) {
    let mono = f.range().inclusion();
    let cover_table = f
        .table()
        .iter()
        .map(|&j| mono.table().iter().position(|&m| m == j).expect("value lies in the range"))
        .collect();
    let cover = FinMap::from_indices_unchecked(f.dom().clone(), mono.dom().clone(), cover_table);
    (cover, mono)
}

/// A tagged disjoint union with its injections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sum {
    pub obj: FinObj,
    pub inl: FinMap,
    pub inr: FinMap,
}

pub fn sum(x: &FinObj, y: &FinObj) -> Sum {
    let obj = FinObj::new(
        x.elems()
            .iter()
            .map(|e| Elem::Inj(0, Box::new(e.clone())))
            .chain(y.elems().iter().map(|e| Elem::Inj(1, Box::new(e.clone())))),
    );
    let inl = FinMap::from_indices_unchecked(x.clone(), obj.clone(), (0..x.len()).collect());
    let inr = FinMap::from_indices_unchecked(y.clone(), obj.clone(), (x.len()..x.len() + y.len()).collect());
    Sum { obj, inl, inr }
}

impl Sum {
    /// The copairing `[f, g]: X + Y → Z`.
    pub fn copair(&self, f: &FinMap, g: &FinMap) -> Result<FinMap> {
        if f.cod() != g.cod() {
            return Err(Error::CodomainMismatch(format!("{} vs {}", f.cod(), g.cod())));
        }
        if f.dom() != self.inl.dom() || g.dom() != self.inr.dom() {
            return Err(Error::NotComposable("copairing legs do not match the summands".into()));
        }
        let table = f.table().iter().chain(g.table().iter()).copied().collect();
        Ok(FinMap::from_indices_unchecked(self.obj.clone(), f.cod().clone(), table))
    }
}

/// `f + g: X + X' → Y + Y'`.
pub fn sum_map(f: &FinMap, g: &FinMap) -> FinMap {
    let src = sum(f.dom(), g.dom());
    let tgt = sum(f.cod(), g.cod());
    let l = tgt.inl.after(f).expect("composable");
    let r = tgt.inr.after(g).expect("composable");
    src.copair(&l, &r).expect("legs share the codomain")
}

/// A commuting square
///
/// ```text
///   A --top--> B
///   |          |
/// left       right
///   v          v
///   C -bottom-> D
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Square<M = FinMap> {
    pub top: M,
    pub left: M,
    pub right: M,
    pub bottom: M,
}

impl Square<FinMap> {
    pub fn new(top: FinMap, left: FinMap, right: FinMap, bottom: FinMap) -> Result<Self> {
        let a = right.after(&top)?;
        let b = bottom.after(&left)?;
        if a != b {
            return Err(Error::NotCommuting(format!("{a:?} vs {b:?}")));
        }
        Ok(Square { top, left, right, bottom })
    }
}

/// The outcome of testing a square for being a quasi-pullback / covering square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringVerdict {
    pub quasi_pullback: bool,
    pub bottom_cover: bool,
    /// An element of the pullback of `bottom` and `right` not reached from the corner.
    pub missed: Option<String>,
}

impl CoveringVerdict {
    pub fn is_covering(&self) -> bool {
        self.quasi_pullback && self.bottom_cover
    }
}

pub fn is_covering_square(s: &Square) -> CoveringVerdict {
    let pb = pullback(&s.right, &s.bottom).expect("square commutes");
    let cmp = pb.factor(&s.top, &s.left).expect("square commutes");
    CoveringVerdict {
        quasi_pullback: cmp.is_surjective(),
        bottom_cover: s.bottom.is_surjective(),
        missed: cmp.first_missed().map(|e| e.to_string()),
    }
}

/// Whether the square is a pullback (comparison map bijective).
pub fn is_pullback_square(s: &Square) -> bool {
    let pb = pullback(&s.right, &s.bottom).expect("square commutes");
    pb.factor(&s.top, &s.left).expect("square commutes").is_iso()
}

/// The dependent product of `g: G → Y` along `f: Y → X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepProduct {
    pub obj: FinObj,
    /// `Π_f(g) → X`.
    pub proj: FinMap,
    /// Evaluation `Y ×_X Π_f(g) → G`, a map over `Y` via the first projection.
    pub eval: FinMap,
    pub eval_dom: Pullback,
}

/// `Π_f(g)`: the fiber over `x` is the set of sections of `g` over `f⁻¹(x)`.
///
/// A section is written `(x, (s_1, …, s_n))` listing the chosen point of `G`
/// for each element of the fiber in canonical order.
pub fn pi(f: &FinMap, g: &FinMap) -> Result<DepProduct> {
    if g.cod() != f.dom() {
        return Err(Error::CodomainMismatch(format!("{} is not the domain {}", g.cod(), f.dom())));
    }
    let over_y = g.fibers();
    let mut elems = Vec::new();
    let mut proj = Vec::new();
    for (x, ys) in f.fibers().iter().enumerate() {
        let choices: Vec<&Vec<usize>> = ys.iter().map(|&y| &over_y[y]).collect();
        for pick in product_indices(&choices.iter().map(|c| c.len()).collect::<Vec<_>>()) {
            let sec = pick.iter().zip(&choices).map(|(&k, c)| g.dom().elem(c[k]).clone()).collect();
            elems.push(Elem::pair(f.cod().elem(x).clone(), Elem::Tuple(sec)));
            proj.push(x);
        }
    }
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by(|&a, &b| elems[a].cmp(&elems[b]));
    let obj = FinObj::new(elems.iter().cloned());
    let proj = FinMap::from_indices_unchecked(obj.clone(), f.cod().clone(), order.iter().map(|&i| proj[i]).collect());
    let eval_dom = pullback(f, &proj)?;
    let fibers_x = f.fibers();
    let table = eval_dom
        .obj
        .elems()
        .iter()
        .map(|e| {
            let parts = e.as_tuple().expect("pullback element");
            let y = f.dom().index_of(&parts[0]).expect("in domain");
            let pos = fibers_x[f.at(y)].iter().position(|&z| z == y).expect("y in its fiber");
            let sec = parts[1].as_tuple().expect("section")[1].as_tuple().expect("section tuple");
            g.dom().index_of(&sec[pos]).expect("section value in G")
        })
        .collect();
    let eval = FinMap::from_indices_unchecked(eval_dom.obj.clone(), g.dom().clone(), table);
    Ok(DepProduct { obj, proj, eval, eval_dom })
}

/// `X^A` as `Π` along `A → 1` of the projection `A × X → A`.
pub fn exponential(a: &FinObj, x: &FinObj) -> Result<DepProduct> {
    let ax = product(a, x);
    pi(&FinMap::to_terminal(a), &ax.p1)
}

/// Odometer over `Π_i {0..sizes[i]-1}` in lexicographic order.
pub fn product_indices(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let empty = sizes.contains(&0);
    let mut cur: Option<Vec<usize>> = if empty { None } else { Some(vec![0; sizes.len()]) };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < sizes[i] {
                cur = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    })
}

/// All maps `dom → cod` in lexicographic order of their tables.
pub fn all_maps(dom: &FinObj, cod: &FinObj) -> Vec<FinMap> {
    let sizes = vec![cod.len(); dom.len()];
    product_indices(&sizes)
        .map(|t| FinMap::from_indices_unchecked(dom.clone(), cod.clone(), t))
        .collect()
}

pub fn surjections(dom: &FinObj, cod: &FinObj) -> Vec<FinMap> {
    all_maps(dom, cod).into_iter().filter(FinMap::is_surjective).collect()
}

/// All maps `a → b` commuting with given maps into a common base.
pub fn maps_over(a: &FinMap, b: &FinMap) -> Result<Vec<FinMap>> {
    if a.cod() != b.cod() {
        return Err(Error::CodomainMismatch(format!("{} vs {}", a.cod(), b.cod())));
    }
    let over = b.fibers();
    let choices: Vec<&Vec<usize>> = a.table().iter().map(|&x| &over[x]).collect();
    let sizes: Vec<usize> = choices.iter().map(|c| c.len()).collect();
    Ok(product_indices(&sizes)
        .map(|pick| {
            let t = pick.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
            FinMap::from_indices_unchecked(a.dom().clone(), b.dom().clone(), t)
        })
        .collect())
}

/// The object `Ω_b = ℘s(1)` of bounded truth values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthObj {
    pub obj: FinObj,
    pub top: usize,
    pub bottom: usize,
}

impl TruthObj {
    pub fn new() -> Self {
        let bottom = Elem::Set(vec![]);
        let top = Elem::Set(vec![Elem::Atom(0)]);
        let obj = FinObj::new([bottom.clone(), top.clone()]);
        TruthObj { top: obj.index_of(&top).unwrap(), bottom: obj.index_of(&bottom).unwrap(), obj }
    }

    pub fn top_sub(&self) -> Subobject {
        Subobject::from_indices(&self.obj, [self.top])
    }
}

impl Default for TruthObj {
    fn default() -> Self {
        Self::new()
    }
}

/// The map `X × X → Ω_b` sending `(x, y)` to `[x = y]`.
pub fn eq_classifier(x: &FinObj) -> FinMap {
    let omega = TruthObj::new();
    let xx = product(x, x);
    let table = xx
        .p1
        .table()
        .iter()
        .zip(xx.p2.table())
        .map(|(a, b)| if a == b { omega.top } else { omega.bottom })
        .collect();
    FinMap::from_indices_unchecked(xx.obj, omega.obj, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc_map() -> FinMap {
        // 1,2 ↦ a ; 3 ↦ b
        let dom = FinObj::new([1u32.into(), 2u32.into(), 3u32.into()]);
        let cod = FinObj::syms(&["a", "b"]);
        FinMap::from_pairs(
            dom,
            cod,
            &[(1u32.into(), "a".into()), (2u32.into(), "a".into()), (3u32.into(), "b".into())],
        )
        .unwrap()
    }

    #[test]
    fn pullback_examples() {
        let one = FinObj::one();
        let pb = pullback(&FinMap::identity(&one), &FinMap::identity(&one)).unwrap();
        assert_eq!(pb.obj.len(), 1);

        let f = abc_map();
        let g = FinMap::from_pairs(FinObj::syms(&["x"]), f.cod().clone(), &[("x".into(), "a".into())]).unwrap();
        let pb = pullback(&f, &g).unwrap();
        let expected = FinObj::new([Elem::pair(1u32.into(), "x".into()), Elem::pair(2u32.into(), "x".into())]);
        assert_eq!(pb.obj, expected);

        let bad = FinMap::identity(&FinObj::range(2));
        assert!(matches!(pullback(&f, &bad), Err(Error::CodomainMismatch(_))));
    }

    #[test]
    fn image_examples() {
        let f = abc_map();
        let (e, m) = image_factor(&f);
        assert!(e.is_surjective() && m.is_injective());
        assert_eq!(m.after(&e).unwrap(), f);
        assert_eq!(m.dom(), &FinObj::syms(&["a", "b"]));

        let c = FinMap::from_fn(FinObj::range(2), FinObj::syms(&["a", "b", "c"]), |_| "a".into()).unwrap();
        let (_, m) = image_factor(&c);
        assert_eq!(m.dom(), &FinObj::syms(&["a"]));
    }

    #[test]
    fn forall_example() {
        let f = abc_map();
        let s = Subobject::new(f.dom(), [1u32.into(), 3u32.into()]).unwrap();
        assert_eq!(forall(&f, &s).unwrap(), Subobject::new(f.cod(), ["b".into()]).unwrap());
        assert_eq!(forall(&f, &Subobject::top(f.dom())).unwrap(), Subobject::top(f.cod()));
        assert_eq!(s.implies(&s).unwrap(), Subobject::top(f.dom()));
    }

    #[test]
    fn covering_square_with_empty_corner() {
        let one = FinObj::one();
        let e = FinObj::empty();
        let s = Square::new(
            FinMap::from_initial(&one),
            FinMap::from_initial(&one),
            FinMap::identity(&one),
            FinMap::identity(&one),
        )
        .unwrap();
        let v = is_covering_square(&s);
        assert!(!v.quasi_pullback);
        assert_eq!(v.missed.as_deref(), Some("(0,0)"));
        let id = FinMap::identity(&e);
        assert!(is_covering_square(&Square::new(id.clone(), id.clone(), id.clone(), id).unwrap()).is_covering());
    }

    #[test]
    fn exponential_counts() {
        let x = FinObj::range(2);
        let a = FinObj::range(3);
        assert_eq!(exponential(&a, &x).unwrap().obj.len(), 8);
        assert_eq!(exponential(&FinObj::empty(), &x).unwrap().obj.len(), 1);

        let f = FinMap::from_fn(FinObj::range(2), FinObj::syms(&["a"]), |_| "a".into()).unwrap();
        let g = FinMap::from_indices(FinObj::range(5), FinObj::range(2), vec![0, 0, 1, 1, 1]).unwrap();
        let p = pi(&f, &g).unwrap();
        assert_eq!(p.obj.len(), 6);
    }

    #[test]
    fn eq_classifier_pulls_back_to_diagonal() {
        let x = FinObj::range(3);
        let omega = TruthObj::new();
        let chi = eq_classifier(&x);
        assert_eq!(pull(&chi, &omega.top_sub()).unwrap(), diagonal(&x).range());
    }

    #[test]
    fn sums_behave() {
        let x = FinObj::range(2);
        let y = FinObj::range(3);
        let s = sum(&x, &y);
        assert_eq!(s.obj.len(), 5);
        assert!(s.inl.is_injective() && s.inr.is_injective());
        let z = sum(&x, &FinObj::empty());
        assert!(z.inl.is_iso());
        let bad = s.copair(&FinMap::identity(&x), &FinMap::identity(&y));
        assert!(matches!(bad, Err(Error::CodomainMismatch(_))));
    }

    #[test]
    fn odometer() {
        let v: Vec<_> = product_indices(&[2, 2]).collect();
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(product_indices(&[]).count(), 1);
        assert_eq!(product_indices(&[3, 0]).count(), 0);
    }
}
