//! Classes of maps between finite sets and the axioms they may satisfy.

pub mod axioms;
pub mod fullness;
pub mod power;
pub mod represent;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::cat::slice::{Over, Slice};
use crate::cat::{Category, FinMap, FinObj, FinSet, Square};
use crate::error::{Error, Result};

pub use axioms::{check_axiom_generic, check_axioms, scov, AxiomId, AxiomReport, Diagram, Status};
pub use fullness::{check_fullness, minimal_mvs, mvs_enumerate};
pub use power::{power_class, PowerClass};
pub use represent::{check_representation, check_strict_representation, universal_small_map, Representation};

/// Three-valued membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

impl From<bool> for Decision {
    fn from(b: bool) -> Self {
        if b {
            Decision::Yes
        } else {
            Decision::No
        }
    }
}

/// Membership in a class of morphisms of some instance.
pub trait Class<C: Category>: Sync {
    fn decide(&self, cat: &C, f: &C::Mor) -> Decision;
    fn label(&self) -> String;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassKind {
    AllMaps,
    /// Maps all of whose fibers have at most `k` elements.
    FiberBound(usize),
    Monos,
    Isos,
    /// Product projections `X × F → X` with `|F|` among the given sizes.
    ProjFiber(BTreeSet<usize>),
    /// Maps isomorphic (as arrows) to one of the listed maps.
    Extensional(Vec<FinMap>),
    /// Maps covered by a member of the base class, within the search budget.
    Covered(Box<MapClass>),
}

/// A class of finite-set maps with a witness-search budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapClass {
    pub kind: ClassKind,
    /// Bound on auxiliary object sizes in witness searches; `None` uses
    /// `max(|dom|, |cod|) · k` with `k` the class's fiber hint.
    pub budget: Option<usize>,
    pub deadline: Option<Instant>,
}

impl MapClass {
    pub fn new(kind: ClassKind) -> Self {
        MapClass { kind, budget: None, deadline: None }
    }

    pub fn all() -> Self {
        Self::new(ClassKind::AllMaps)
    }

    pub fn fiber_bound(k: usize) -> Self {
        Self::new(ClassKind::FiberBound(k))
    }

    pub fn monos() -> Self {
        Self::new(ClassKind::Monos)
    }

    pub fn isos() -> Self {
        Self::new(ClassKind::Isos)
    }

    pub fn proj_fiber(sizes: impl IntoIterator<Item = usize>) -> Self {
        Self::new(ClassKind::ProjFiber(sizes.into_iter().collect()))
    }

    pub fn extensional(maps: Vec<FinMap>) -> Self {
        Self::new(ClassKind::Extensional(maps))
    }

    /// The maps covered by members of `base`, without checking display axioms
    /// first (see [`scov`] for the checked version).
    pub fn covered(base: MapClass) -> Self {
        Self::new(ClassKind::Covered(Box::new(base)))
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        if let ClassKind::Covered(b) = &mut self.kind {
            **b = b.as_ref().clone().with_deadline(deadline);
        }
        self
    }

    /// A typical fiber size for the class, used to size search budgets.
    pub fn fiber_hint(&self) -> usize {
        match &self.kind {
            ClassKind::AllMaps => 2,
            ClassKind::FiberBound(k) => (*k).max(1),
            ClassKind::Monos | ClassKind::Isos => 1,
            ClassKind::ProjFiber(s) => s.iter().max().copied().unwrap_or(1).max(1),
            ClassKind::Extensional(l) => l.iter().map(FinMap::max_fiber).max().unwrap_or(1).max(1),
            ClassKind::Covered(b) => b.fiber_hint(),
        }
    }

    /// The largest fiber any member may have, if bounded.
    pub fn fiber_cap(&self) -> Option<usize> {
        match &self.kind {
            ClassKind::AllMaps => None,
            ClassKind::FiberBound(k) => Some(*k),
            ClassKind::Monos | ClassKind::Isos => Some(1),
            ClassKind::ProjFiber(s) => s.iter().max().copied().or(Some(0)),
            ClassKind::Extensional(l) => Some(l.iter().map(FinMap::max_fiber).max().unwrap_or(0)),
            ClassKind::Covered(b) => b.fiber_cap(),
        }
    }

    pub fn aux_bound(&self, f: &FinMap) -> usize {
        self.budget.unwrap_or_else(|| f.dom().len().max(f.cod().len()).max(1) * self.fiber_hint())
    }

    pub fn decide_map(&self, f: &FinMap) -> Decision {
        match &self.kind {
            ClassKind::AllMaps => Decision::Yes,
            ClassKind::FiberBound(k) => (f.max_fiber() <= *k).into(),
            ClassKind::Monos => f.is_injective().into(),
            ClassKind::Isos => f.is_iso().into(),
            ClassKind::ProjFiber(sizes) => {
                let fs = f.fiber_sizes();
                match fs.first() {
                    None => Decision::Yes,
                    Some(&s) => (sizes.contains(&s) && fs.iter().all(|&t| t == s)).into(),
                }
            }
            ClassKind::Extensional(list) => {
                let p = f.profile();
                list.iter().any(|g| g.profile() == p).into()
            }
            ClassKind::Covered(base) => match cover_witness(base, f, self.aux_bound(f), self.deadline) {
                Search::Found(_) => Decision::Yes,
                Search::Exhausted => Decision::No,
                Search::OutOfTime => Decision::Unknown,
            },
        }
    }

    pub fn contains(&self, f: &FinMap) -> bool {
        self.decide_map(f) == Decision::Yes
    }

    /// A covering square exhibiting membership in a `Covered` class.
    pub fn membership_witness(&self, f: &FinMap) -> Option<Square> {
        match &self.kind {
            ClassKind::Covered(base) => match cover_witness(base, f, self.aux_bound(f), self.deadline) {
                Search::Found(s) => Some(s),
                _ => None,
            },
            _ if self.contains(f) => {
                let id = |x: &FinObj| FinMap::identity(x);
                Some(Square { top: id(f.dom()), left: f.clone(), right: f.clone(), bottom: id(f.cod()) })
            }
            _ => None,
        }
    }
}

impl Class<FinSet> for MapClass {
    fn decide(&self, _: &FinSet, f: &FinMap) -> Decision {
        self.decide_map(f)
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

/// `S/X`: a map of the slice is in the class iff its underlying map is.
pub struct SliceClass<'a, K>(pub &'a K);

impl<C: Category, K: Class<C>> Class<Slice<'_, C>> for SliceClass<'_, K> {
    fn decide(&self, cat: &Slice<'_, C>, f: &Over<C::Mor>) -> Decision {
        self.0.decide(cat.base, &f.map)
    }

    fn label(&self) -> String {
        format!("{}/X", self.0.label())
    }
}

pub(crate) enum Search<T> {
    Found(T),
    Exhausted,
    OutOfTime,
}

/// Searches for a covering square with `f` on the right and a member of
/// `base` on the left, with auxiliary objects of size ≤ `bound`.
///
/// The bottom is a surjection `p: C ↠ D`. A top map making the square
/// covering exists iff each fiber `A_c` can be mapped onto `B_{p(c)}`, so it
/// suffices to range over fiber-size vectors of the left leg.
fn cover_witness(base: &MapClass, f: &FinMap, bound: usize, deadline: Option<Instant>) -> Search<Square> {
    let d = f.cod().len();
    let b_sizes = f.fiber_sizes();
    let b_fibers = f.fibers();
    let c_range = if d == 0 { 0..=0 } else { d..=bound.max(d) };
    for c in c_range {
        let cobj = FinObj::range(c);
        // Only the fiber sizes of `p` matter, so one surjection per size
        // vector (a composition of `c` into `d` parts) is enough.
        for counts in compositions(c, d) {
            if deadline.is_some_and(|t| Instant::now() > t) {
                return Search::OutOfTime;
            }
            let table: Vec<usize> = counts.iter().enumerate().flat_map(|(j, &k)| std::iter::repeat_n(j, k)).collect();
            let p = FinMap::from_indices(cobj.clone(), f.cod().clone(), table).expect("valid table");
            let lower: Vec<usize> = p.table().iter().map(|&j| b_sizes[j]).collect();
            let mut found = None;
            fiber_vectors(&lower, bound, &mut |v| {
                let g = FinMap::with_fiber_sizes(v);
                if base.decide_map(&g) != Decision::Yes {
                    return false;
                }
                let mut top = Vec::with_capacity(g.dom().len());
                for (ci, &n) in v.iter().enumerate() {
                    let target = &b_fibers[p.at(ci)];
                    for k in 0..n {
                        top.push(target[k.min(target.len() - 1)]);
                    }
                }
                let top = FinMap::from_indices(g.dom().clone(), f.dom().clone(), top).expect("valid table");
                found = Some(Square::new(top, g, f.clone(), p.clone()).expect("fiberwise construction commutes"));
                true
            });
            if let Some(s) = found {
                return Search::Found(s);
            }
        }
    }
    Search::Exhausted
}

/// Vectors of `parts` positive integers summing to `total`, lexicographically.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 1..=left.saturating_sub(parts - 1) {
            cur.push(k);
            go(left - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Calls `visit` on each vector `v` with `v_i = 0` where `lower_i = 0`,
/// `v_i ≥ lower_i` elsewhere and `Σ v ≤ total`, in lexicographic order,
/// stopping when `visit` returns true.
fn fiber_vectors(lower: &[usize], total: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(i: usize, lower: &[usize], left: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if i == lower.len() {
            return visit(cur);
        }
        let rest: usize = lower[i + 1..].iter().sum();
        if lower[i] == 0 {
            cur.push(0);
            let stop = go(i + 1, lower, left, cur, visit);
            cur.pop();
            return stop;
        }
        let mut n = lower[i];
        while n + rest <= left {
            cur.push(n);
            if go(i + 1, lower, left - n, cur, visit) {
                cur.pop();
                return true;
            }
            cur.pop();
            n += 1;
        }
        false
    }
    go(0, lower, total, &mut Vec::new(), visit)
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ClassKind::AllMaps => f.write_str("all"),
            ClassKind::FiberBound(k) => write!(f, "fiber:{k}"),
            ClassKind::Monos => f.write_str("monos"),
            ClassKind::Isos => f.write_str("isos"),
            ClassKind::ProjFiber(s) => {
                let parts: Vec<String> = s.iter().map(usize::to_string).collect();
                write!(f, "projfiber:{}", parts.join(","))
            }
            ClassKind::Extensional(l) => write!(f, "extensional({} maps)", l.len()),
            ClassKind::Covered(b) => write!(f, "covered({b})"),
        }
    }
}

impl FromStr for MapClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg} in class `{s}`") };
        if let Some(inner) = s.strip_prefix("covered(").and_then(|r| r.strip_suffix(')')) {
            return Ok(MapClass::covered(inner.parse()?));
        }
        if let Some(k) = s.strip_prefix("fiber:") {
            return Ok(MapClass::fiber_bound(k.trim().parse().map_err(|_| bad("bad fiber bound"))?));
        }
        if let Some(list) = s.strip_prefix("projfiber:") {
            let sizes = list
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<BTreeSet<_>, _>>()
                .map_err(|_| bad("bad size list"))?;
            return Ok(MapClass::new(ClassKind::ProjFiber(sizes)));
        }
        match s {
            "all" => Ok(MapClass::all()),
            "monos" => Ok(MapClass::monos()),
            "isos" => Ok(MapClass::isos()),
            _ => Err(bad("unknown class")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{is_covering_square, Scope};

    #[test]
    fn parse_round_trip() {
        for s in ["all", "fiber:2", "monos", "isos", "projfiber:1,2", "covered(fiber:1)", "covered(covered(isos))"] {
            assert_eq!(s.parse::<MapClass>().unwrap().to_string(), s);
        }
        assert!("fibre:2".parse::<MapClass>().is_err());
        assert!("covered(fiber:x)".parse::<MapClass>().is_err());
    }

    #[test]
    fn covered_membership_has_covering_witness() {
        let cls = MapClass::covered(MapClass::proj_fiber([2]));
        for f in FinSet.all_homs(&Scope::new(3)) {
            let sizes = f.fiber_sizes();
            let expected = sizes.iter().all(|&s| s == 1 || s == 2);
            assert_eq!(cls.contains(&f), expected, "{f:?}");
            if let Some(sq) = cls.membership_witness(&f) {
                assert!(is_covering_square(&sq).is_covering());
                assert_eq!(sq.right, f);
                assert!(MapClass::proj_fiber([2]).contains(&sq.left));
            }
        }
    }

    #[test]
    fn composition_triangle_lemma() {
        // g∘f ∈ FiberBound(k) implies f ∈ FiberBound(k).
        let maps = FinSet.all_homs(&Scope::new(3));
        for k in 0..=3 {
            let cls = MapClass::fiber_bound(k);
            for f in &maps {
                for g in maps.iter().filter(|g| g.dom() == f.cod()) {
                    if cls.contains(&g.after(f).unwrap()) {
                        assert!(cls.contains(f));
                    }
                }
            }
        }
    }

    #[test]
    fn fiber_vectors_respect_bounds() {
        let mut seen = Vec::new();
        fiber_vectors(&[1, 0, 2], 4, &mut |v| {
            seen.push(v.to_vec());
            false
        });
        assert_eq!(seen, vec![vec![1, 0, 2], vec![1, 0, 3], vec![2, 0, 2]]);
    }
}
