//! Polynomial functors over finite signatures and their W-types, truncated
//! at an explicit height.

mod bisim;
mod span;
mod tree;

use std::collections::{BTreeMap, HashMap, HashSet};

pub use bisim::{bisim_test, bisimilar, BisimMode, BisimTable};
pub use span::{check_collection_span, collection_span, p_pi_quotient, wtype_via_span, PPiQuotient, SpanQuotient};
pub use tree::{transitive_closure, WTree};

use crate::cat::{product_indices, sum, Elem, FinMap, FinObj};
use crate::error::{Error, Result};

/// A branching signature `f: B → A`: labels are elements of `A`, and a node
/// labelled `a` has one child per element of the fiber `B_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySig {
    f: FinMap,
    fibers: Vec<Vec<usize>>,
}

impl PolySig {
    pub fn new(f: FinMap) -> Self {
        let fibers = f.fibers();
        PolySig { f, fibers }
    }

    pub fn from_fiber_sizes(sizes: &[usize]) -> Self {
        PolySig::new(FinMap::with_fiber_sizes(sizes))
    }

    /// The left sum inclusion `1 → 1 + 1`: label `in0` is successor, `in1` is zero.
    pub fn nno() -> Self {
        let one = FinObj::one();
        PolySig::new(sum(&one, &one).inl)
    }

    pub fn map(&self) -> &FinMap {
        &self.f
    }

    pub fn labels(&self) -> usize {
        self.f.cod().len()
    }

    pub fn arity(&self, a: usize) -> usize {
        self.fibers[a].len()
    }

    /// `B_a` as indices into `B`, in fiber order.
    pub fn fiber(&self, a: usize) -> &[usize] {
        &self.fibers[a]
    }

    pub fn describe(&self) -> String {
        format!("fibers {:?}", self.f.fiber_sizes())
    }

    /// Whether `w` is a tree over this signature.
    pub fn admits(&self, w: &WTree) -> bool {
        w.label() < self.labels()
            && w.children().len() == self.arity(w.label())
            && w.children().iter().all(|c| self.admits(c))
    }

    /// `P_f(X) = Σ_a X^{B_a}`, elements `(a, (x_b)_b)`.
    pub fn poly_apply(&self, x: &FinObj) -> FinObj {
        let mut out = Vec::new();
        for a in 0..self.labels() {
            let sizes = vec![x.len(); self.arity(a)];
            for choice in product_indices(&sizes) {
                let vals = Elem::Tuple(choice.iter().map(|&i| x.elem(i).clone()).collect());
                out.push(Elem::pair(self.f.cod().elem(a).clone(), vals));
            }
        }
        FinObj::new(out)
    }

    /// `sup_a` applied to every choice of children from `pool`.
    fn sups_over(&self, pool: &[WTree]) -> Vec<WTree> {
        let mut out = Vec::new();
        for a in 0..self.labels() {
            let sizes = vec![pool.len(); self.arity(a)];
            for choice in product_indices(&sizes) {
                out.push(WTree::sup(a, choice.iter().map(|&i| pool[i].clone()).collect()));
            }
        }
        out
    }

    /// All trees of height at most `d`, sorted.
    pub fn enumerate(&self, d: usize) -> Vec<WTree> {
        let mut level: Vec<WTree> = (0..self.labels()).filter(|&a| self.arity(a) == 0).map(WTree::leaf).collect();
        for _ in 0..d {
            level = self.sups_over(&level);
        }
        level.sort();
        level
    }

    /// `t(0) = #leaves`, `t(d+1) = Σ_a t(d)^{|B_a|}`.
    pub fn count(&self, d: usize) -> u128 {
        let mut t = (0..self.labels()).filter(|&a| self.arity(a) == 0).count() as u128;
        for _ in 0..d {
            t = (0..self.labels()).map(|a| t.pow(self.arity(a) as u32)).sum();
        }
        t
    }

    /// Every tree of height `≤ d + 1` is `sup_a(t)` for exactly one `(a, t)`
    /// with `t` valued in trees of height `≤ d`.
    pub fn check_lambek(&self, d: usize) -> Result<()> {
        let below = self.enumerate(d);
        let above = self.enumerate(d + 1);
        let sups = self.sups_over(&below);
        let distinct: HashSet<&WTree> = sups.iter().collect();
        if distinct.len() != sups.len() {
            return Err(Error::Precondition(format!("sup is not injective at height {d}")));
        }
        let target: HashSet<&WTree> = above.iter().collect();
        if distinct != target {
            return Err(Error::Precondition(format!("sup does not reach every tree of height ≤ {}", d + 1)));
        }
        Ok(())
    }

    /// The least set of trees of height `≤ d` closed under `sup`.
    pub fn least_subalgebra(&self, d: usize) -> Vec<WTree> {
        let mut set: Vec<WTree> = Vec::new();
        loop {
            let mut next: Vec<WTree> = self.sups_over(&set).into_iter().filter(|t| t.height() <= d).collect();
            next.sort();
            next.dedup();
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }
}

/// A `P_f`-algebra `P_f(X) → X`.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub carrier: FinObj,
    pub structure: FinMap,
}

impl Algebra {
    pub fn new(sig: &PolySig, carrier: FinObj, m: impl Fn(usize, &[usize]) -> usize) -> Result<Self> {
        let dom = sig.poly_apply(&carrier);
        let table = dom
            .elems()
            .iter()
            .map(|e| {
                let (a, xs) = Self::split(sig, &carrier, e);
                m(a, &xs)
            })
            .collect();
        let structure = FinMap::from_indices(dom, carrier.clone(), table)?;
        Ok(Algebra { carrier, structure })
    }

    fn split(sig: &PolySig, carrier: &FinObj, e: &Elem) -> (usize, Vec<usize>) {
        let t = e.as_tuple().expect("pair");
        let a = sig.f.cod().index_of(&t[0]).expect("label");
        let xs = t[1].as_tuple().expect("tuple").iter().map(|x| carrier.index_of(x).expect("carrier element")).collect();
        (a, xs)
    }

    pub(crate) fn apply(&self, sig: &PolySig, a: usize, xs: &[usize]) -> Result<usize> {
        let e = Elem::pair(
            sig.f.cod().elem(a).clone(),
            Elem::Tuple(xs.iter().map(|&i| self.carrier.elem(i).clone()).collect()),
        );
        let i = self
            .structure
            .dom()
            .index_of(&e)
            .ok_or_else(|| Error::NotAnElement(format!("{e} is not in P_f(X)")))?;
        Ok(self.structure.at(i))
    }
}

/// Structural recursion with an arbitrary step, memoized on shared subtrees.
pub fn fold_with<T: Clone>(w: &WTree, step: &mut impl FnMut(usize, &[T]) -> T) -> T {
    fn go<T: Clone>(w: &WTree, step: &mut impl FnMut(usize, &[T]) -> T, memo: &mut HashMap<WTree, T>) -> T {
        if let Some(v) = memo.get(w) {
            return v.clone();
        }
        let xs: Vec<T> = w.children().iter().map(|c| go(c, step, memo)).collect();
        let v = step(w.label(), &xs);
        memo.insert(w.clone(), v.clone());
        v
    }
    go(w, step, &mut HashMap::new())
}

/// The value of the unique algebra map out of the W-type at `w`.
pub fn fold(sig: &PolySig, alg: &Algebra, w: &WTree) -> Result<usize> {
    attempt(sig, alg, w).map(|m| m[w])
}

/// The local solution of the recursion on `tc(w)`: `g(sup_a t) = m(a, g∘t)`.
pub fn attempt(sig: &PolySig, alg: &Algebra, w: &WTree) -> Result<BTreeMap<WTree, usize>> {
    if !sig.admits(w) {
        return Err(Error::IllTyped(format!("{w} is not a tree over {}", sig.describe())));
    }
    let (tc, _) = transitive_closure(w);
    let mut g = BTreeMap::new();
    // tc is sorted by height, so children are solved first.
    for v in tc {
        let xs: Vec<usize> = v.children().iter().map(|c| g[c]).collect();
        let val = alg.apply(sig, v.label(), &xs)?;
        g.insert(v, val);
    }
    Ok(g)
}


#[cfg(test)]
mod tests;
