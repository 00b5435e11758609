//! Bisimulation tests: truth tables on `tc(w) × tc(w')` solving the recursive
//! equation of bisimilarity.

use std::collections::HashMap;

use super::{transitive_closure, PolySig, WTree};
use crate::cat::FinMap;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum BisimMode {
    /// Every child of one side matches some child of the other, both ways.
    Plain,
    /// Roots agree under `p: A → X`, and children at `b`, `b'` with
    /// `q b = q b'` are related.
    Labeled { p: FinMap, q: FinMap },
}

impl BisimMode {
    fn validate(&self, sig: &PolySig) -> Result<()> {
        if let BisimMode::Labeled { p, q } = self {
            if p.dom() != sig.map().cod() {
                return Err(Error::AmbientMismatch(format!("label map is defined on {}, not on the labels", p.dom())));
            }
            if q.dom() != sig.map().dom() {
                return Err(Error::AmbientMismatch(format!("fiber map is defined on {}, not on the fibers", q.dom())));
            }
        }
        Ok(())
    }

    /// One instance of the defining equation, given the values on children.
    fn step(&self, sig: &PolySig, v: &WTree, u: &WTree, rel: &mut impl FnMut(&WTree, &WTree) -> bool) -> bool {
        let (vs, us) = (v.children(), u.children());
        match self {
            BisimMode::Plain => {
                vs.iter().all(|c| us.iter().any(|d| rel(c, d))) && us.iter().all(|d| vs.iter().any(|c| rel(c, d)))
            }
            BisimMode::Labeled { p, q } => {
                if p.at(v.label()) != p.at(u.label()) {
                    return false;
                }
                let (fv, fu) = (sig.fiber(v.label()), sig.fiber(u.label()));
                for (i, c) in vs.iter().enumerate() {
                    for (j, d) in us.iter().enumerate() {
                        if q.at(fv[i]) == q.at(fu[j]) && !rel(c, d) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }
}

/// The unique solution on `tc(w) × tc(w')`.
#[derive(Clone, Debug)]
pub struct BisimTable {
    pub rows: Vec<WTree>,
    pub cols: Vec<WTree>,
    values: Vec<bool>,
}

impl BisimTable {
    fn index(&self, v: &WTree, u: &WTree) -> Option<usize> {
        let i = self.rows.binary_search(v).ok()?;
        let j = self.cols.binary_search(u).ok()?;
        Some(i * self.cols.len() + j)
    }

    pub fn get(&self, v: &WTree, u: &WTree) -> Option<bool> {
        self.index(v, u).map(|k| self.values[k])
    }

    /// The entry at the two roots.
    pub fn top(&self) -> bool {
        let v = self.rows.last().expect("tc is nonempty");
        let u = self.cols.last().expect("tc is nonempty");
        self.values[self.index(v, u).expect("root entry")]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Re-checks the defining equation at every entry.
    pub fn verify(&self, sig: &PolySig, mode: &BisimMode) -> Result<()> {
        for v in &self.rows {
            for u in &self.cols {
                let expected = mode.step(sig, v, u, &mut |c, d| self.get(c, d).expect("children lie in tc"));
                if Some(expected) != self.get(v, u) {
                    return Err(Error::Precondition(format!("table violates the recursion at ({v}, {u})")));
                }
            }
        }
        Ok(())
    }
}

pub fn bisim_test(sig: &PolySig, w: &WTree, w2: &WTree, mode: &BisimMode) -> Result<BisimTable> {
    mode.validate(sig)?;
    for t in [w, w2] {
        if !sig.admits(t) {
            return Err(Error::IllTyped(format!("{t} is not a tree over {}", sig.describe())));
        }
    }
    let (rows, _) = transitive_closure(w);
    let (cols, _) = transitive_closure(w2);
    let mut table = BisimTable { values: vec![false; rows.len() * cols.len()], rows, cols };
    // Both closures are sorted by height, so row-major order fills every
    // children pair before its parents.
    for i in 0..table.rows.len() {
        for j in 0..table.cols.len() {
            let (v, u) = (&table.rows[i], &table.cols[j]);
            let val = mode.step(sig, v, u, &mut |c, d| table.get(c, d).expect("children lie in tc"));
            let k = i * table.cols.len() + j;
            table.values[k] = val;
        }
    }
    Ok(table)
}

/// The root entry alone, evaluated top-down with memoization.
pub fn bisimilar(sig: &PolySig, w: &WTree, w2: &WTree, mode: &BisimMode) -> bool {
    fn go(
        sig: &PolySig,
        mode: &BisimMode,
        v: &WTree,
        u: &WTree,
        memo: &mut HashMap<(WTree, WTree), bool>,
    ) -> bool {
        if let Some(&b) = memo.get(&(v.clone(), u.clone())) {
            return b;
        }
        let b = mode.step(sig, v, u, &mut |c, d| go(sig, mode, c, d, memo));
        memo.insert((v.clone(), u.clone()), b);
        b
    }
    go(sig, mode, w, w2, &mut HashMap::new())
}
