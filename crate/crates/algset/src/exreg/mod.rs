//! The exact completion of finite sets.
//!
//! An object is a finite set with an equivalence relation, a morphism is a
//! functional relation between them. Everything is decided on the underlying
//! elements; block-level shortcuts appear only in oracles and search pruning.

mod category;
mod quotient;
mod report;
mod sbar;

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::cat::{Elem, FinMap, FinObj};
use crate::error::{Error, Result};

pub use category::ExReg;
pub use quotient::{check_stably_exact, equivalence_mono, mono_relation, quotient, Quotient};
pub use report::{completion_report, CompletionReport};
pub use sbar::{heyting_forall_ex, is_separated, sbar_member, ForallEx, SBar, SbarVerdict};

/// A finite set with a partition, in normal form: block ids are assigned in
/// order of least element, so equal partitions have equal `class` vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExObj {
    base: FinObj,
    class: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl ExObj {
    /// Normalizes an arbitrary labelling: equal labels share a block.
    pub fn from_labels<T: PartialEq>(base: FinObj, labels: &[T]) -> Result<Self> {
        if labels.len() != base.len() {
            return Err(Error::IllTyped(format!("{} labels for {} elements", labels.len(), base.len())));
        }
        let mut class: Vec<usize> = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            match (0..i).find(|&j| labels[j] == *l) {
                Some(j) => {
                    let b = class[j];
                    class.push(b);
                    blocks[b].push(i);
                }
                None => {
                    class.push(blocks.len());
                    blocks.push(vec![i]);
                }
            }
        }
        Ok(ExObj { base, class, blocks })
    }

    /// The equivalence relation generated by `pairs` (indices into `base`).
    pub fn generated(base: FinObj, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = base.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::NotAnElement(format!("index {} in a set of {n}", a.max(b))));
            }
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            // Keep the smaller index as root so roots are least elements.
            parent[ra.max(rb)] = ra.min(rb);
        }
        let labels: Vec<usize> = (0..n).map(|i| root(&mut parent, i)).collect();
        Self::from_labels(base, &labels)
    }

    pub fn discrete(base: &FinObj) -> Self {
        let n = base.len();
        ExObj { base: base.clone(), class: (0..n).collect(), blocks: (0..n).map(|i| vec![i]).collect() }
    }

    /// Every partition of `base`, by restricted growth strings.
    pub fn partitions(base: &FinObj) -> Vec<ExObj> {
        fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            let next = cur.iter().max().map_or(0, |m| m + 1);
            for b in 0..=next {
                cur.push(b);
                go(n, cur, out);
                cur.pop();
            }
        }
        let mut strings = Vec::new();
        go(base.len(), &mut Vec::new(), &mut strings);
        strings.iter().map(|s| Self::from_labels(base.clone(), s).expect("lengths match")).collect()
    }

    pub fn base(&self) -> &FinObj {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.class[i]
    }

    /// The least element of a block.
    pub fn rep(&self, b: usize) -> usize {
        self.blocks[b][0]
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        self.class[i] == self.class[j]
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.base.len()
    }

    /// The canonical cover `y(X) → (X, R)`, whose relation is `R` itself.
    pub fn cover(&self) -> ExMor {
        let src = ExObj::discrete(&self.base);
        ExMor::from_elem_fn(&src, self, |i| i).expect("identity respects the discrete partition")
    }
}

impl fmt::Display for ExObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            for (i, &e) in b.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.base.elem(e))?;
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ExObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ExObj {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks: Vec<Vec<&Elem>> =
            self.blocks.iter().map(|b| b.iter().map(|&i| self.base.elem(i)).collect()).collect();
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("elems", &self.base)?;
        m.serialize_entry("blocks", &blocks)?;
        m.end()
    }
}

/// Which defining condition of a functional relation fails first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    Totality,
    Saturation,
    Functionality,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Totality => "totality",
            Clause::Saturation => "saturation",
            Clause::Functionality => "functionality",
        })
    }
}

/// The result of [`check_functional_relation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionalVerdict {
    pub holds: bool,
    pub clause: Option<Clause>,
    /// Elements witnessing the violated clause: `(x)` for totality,
    /// `(x, x', y)` or `(x, y, y')` for saturation, `(x, y, y')` for functionality.
    pub witness: Vec<Elem>,
}

impl FunctionalVerdict {
    fn ok() -> Self {
        FunctionalVerdict { holds: true, clause: None, witness: Vec::new() }
    }

    fn violated(clause: Clause, witness: Vec<Elem>) -> Self {
        FunctionalVerdict { holds: false, clause: Some(clause), witness }
    }
}

/// Checks totality, saturation and functionality up to the target relation,
/// in that order, for a relation given by index pairs.
pub fn check_functional_relation(pairs: &[(usize, usize)], src: &ExObj, tgt: &ExObj) -> Result<FunctionalVerdict> {
    let rel = dense(pairs, src.len(), tgt.len())?;
    Ok(check_dense(&rel, src, tgt))
}

fn dense(pairs: &[(usize, usize)], n: usize, m: usize) -> Result<Vec<bool>> {
    let mut rel = vec![false; n * m];
    for &(x, y) in pairs {
        if x >= n || y >= m {
            return Err(Error::NotAnElement(format!("pair ({x}, {y}) outside {n} × {m}")));
        }
        rel[x * m + y] = true;
    }
    Ok(rel)
}

fn check_dense(rel: &[bool], src: &ExObj, tgt: &ExObj) -> FunctionalVerdict {
    let (n, m) = (src.len(), tgt.len());
    let at = |x: usize, y: usize| rel[x * m + y];
    let xe = |i: usize| src.base.elem(i).clone();
    let ye = |j: usize| tgt.base.elem(j).clone();
    if let Some(x) = (0..n).find(|&x| !(0..m).any(|y| at(x, y))) {
        return FunctionalVerdict::violated(Clause::Totality, vec![xe(x)]);
    }
    for x in 0..n {
        for y in (0..m).filter(|&y| at(x, y)) {
            if let Some(x2) = (0..n).find(|&x2| src.related(x, x2) && !at(x2, y)) {
                return FunctionalVerdict::violated(Clause::Saturation, vec![xe(x), xe(x2), ye(y)]);
            }
            if let Some(y2) = (0..m).find(|&y2| tgt.related(y, y2) && !at(x, y2)) {
                return FunctionalVerdict::violated(Clause::Saturation, vec![xe(x), ye(y), ye(y2)]);
            }
        }
    }
    for x in 0..n {
        for y in (0..m).filter(|&y| at(x, y)) {
            if let Some(y2) = (0..m).find(|&y2| at(x, y2) && !tgt.related(y, y2)) {
                return FunctionalVerdict::violated(Clause::Functionality, vec![xe(x), ye(y), ye(y2)]);
            }
        }
    }
    FunctionalVerdict::ok()
}

/// A functional relation `F ⊆ X × Y`, stored densely and always saturated.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExMor {
    src: ExObj,
    tgt: ExObj,
    rel: Vec<bool>,
}

impl ExMor {
    /// Saturates `pairs` under both partitions, then checks the remaining
    /// clauses.
    pub fn from_relation(src: &ExObj, tgt: &ExObj, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rel = dense(pairs, src.len(), tgt.len())?;
        let m = tgt.len();
        let hit: Vec<(usize, usize)> = pairs.iter().map(|&(x, y)| (src.class[x], tgt.class[y])).collect();
        for (bx, by) in hit {
            for &x in &src.blocks[bx] {
                for &y in &tgt.blocks[by] {
                    rel[x * m + y] = true;
                }
            }
        }
        let v = check_dense(&rel, src, tgt);
        if let Some(c) = v.clause {
            let w: Vec<String> = v.witness.iter().map(Elem::to_string).collect();
            return Err(Error::NotFunction(format!("{c} fails at ({})", w.join(", "))));
        }
        Ok(ExMor { src: src.clone(), tgt: tgt.clone(), rel })
    }

    /// The relation whose blocks are related according to `table`, a map from
    /// source blocks to target blocks.
    pub fn from_block_map(src: &ExObj, tgt: &ExObj, table: &[usize]) -> Result<Self> {
        if table.len() != src.num_blocks() || table.iter().any(|&b| b >= tgt.num_blocks()) {
            return Err(Error::IllTyped(format!("block table {table:?} for {src} → {tgt}")));
        }
        let m = tgt.len();
        let mut rel = vec![false; src.len() * m];
        for x in 0..src.len() {
            for &y in &tgt.blocks[table[src.class[x]]] {
                rel[x * m + y] = true;
            }
        }
        Ok(ExMor { src: src.clone(), tgt: tgt.clone(), rel })
    }

    /// The saturated graph of an element-level function, which must respect
    /// the partitions.
    pub fn from_elem_fn(src: &ExObj, tgt: &ExObj, h: impl Fn(usize) -> usize) -> Result<Self> {
        let mut table = vec![usize::MAX; src.num_blocks()];
        for x in 0..src.len() {
            let y = h(x);
            if y >= tgt.len() {
                return Err(Error::NotAnElement(format!("index {y} in {tgt}")));
            }
            let (bx, by) = (src.class[x], tgt.class[y]);
            if table[bx] == usize::MAX {
                table[bx] = by;
            } else if table[bx] != by {
                return Err(Error::NotFunction(format!(
                    "{} and {} are related in {src} but not their images",
                    src.base.elem(src.rep(bx)),
                    src.base.elem(x)
                )));
            }
        }
        Self::from_block_map(src, tgt, &table)
    }

    pub(crate) fn from_dense_unchecked(src: ExObj, tgt: ExObj, rel: Vec<bool>) -> Self {
        debug_assert!(check_dense(&rel, &src, &tgt).holds);
        ExMor { src, tgt, rel }
    }

    pub fn src(&self) -> &ExObj {
        &self.src
    }

    pub fn tgt(&self) -> &ExObj {
        &self.tgt
    }

    pub fn holds(&self, x: usize, y: usize) -> bool {
        self.rel[x * self.tgt.len() + y]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let m = self.tgt.len();
        (0..self.src.len()).flat_map(|x| (0..m).filter(move |&y| self.holds(x, y)).map(move |y| (x, y))).collect()
    }

    /// The induced map on blocks.
    pub fn block_map(&self) -> Vec<usize> {
        (0..self.src.num_blocks())
            .map(|b| {
                let x = self.src.rep(b);
                let y = (0..self.tgt.len()).find(|&y| self.holds(x, y)).expect("total");
                self.tgt.class[y]
            })
            .collect()
    }

    /// Sizes of the block-level fibers, indexed by target block.
    pub fn block_fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.tgt.num_blocks()];
        for b in self.block_map() {
            sizes[b] += 1;
        }
        sizes
    }
}

impl fmt::Debug for ExMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {} [", self.src, self.tgt)?;
        for (k, (x, y)) in self.pairs().into_iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}↦{}", self.src.base.elem(x), self.tgt.base.elem(y))?;
        }
        f.write_str("]")
    }
}

impl Serialize for ExMor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let graph: Vec<(&Elem, &Elem)> =
            self.pairs().into_iter().map(|(x, y)| (self.src.base.elem(x), self.tgt.base.elem(y))).collect();
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("src", &self.src)?;
        m.serialize_entry("tgt", &self.tgt)?;
        m.serialize_entry("graph", &graph)?;
        m.end()
    }
}

/// `y` on objects: the discrete partition.
pub fn embed_y(x: &FinObj) -> ExObj {
    ExObj::discrete(x)
}

/// `y` on maps: the graph, already saturated since both sides are discrete.
pub fn embed_y_map(f: &FinMap) -> ExMor {
    let (src, tgt) = (embed_y(f.dom()), embed_y(f.cod()));
    ExMor::from_elem_fn(&src, &tgt, |i| f.at(i)).expect("discrete partitions")
}
