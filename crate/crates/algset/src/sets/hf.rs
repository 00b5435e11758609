//! Hash-consed hereditarily finite sets.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, LazyLock, Mutex};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

struct Node {
    rank: u32,
    children: Vec<HFSet>,
}

/// A hereditarily finite set. Children are sorted and duplicate-free, and
/// equal sets share one allocation.
///
/// The order is by rank, then number of elements, then lexicographic on the
/// sorted elements.
#[derive(Clone)]
pub struct HFSet(Arc<Node>);

static STORE: LazyLock<Mutex<HashMap<Vec<usize>, HFSet>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

impl HFSet {
    /// `Int`: the set with exactly these elements.
    pub fn new(elems: impl IntoIterator<Item = HFSet>) -> HFSet {
        let mut children: Vec<HFSet> = elems.into_iter().collect();
        children.sort();
        children.dedup();
        Self::from_sorted(children)
    }

    /// Interns an already sorted, duplicate-free list.
    pub(crate) fn from_sorted(children: Vec<HFSet>) -> HFSet {
        debug_assert!(children.windows(2).all(|w| w[0] < w[1]));
        let key: Vec<usize> = children.iter().map(HFSet::addr).collect();
        let mut store = STORE.lock().expect("set store poisoned");
        store
            .entry(key)
            .or_insert_with(|| {
                let rank = children.iter().map(|c| c.0.rank + 1).max().unwrap_or(0);
                HFSet(Arc::new(Node { rank, children }))
            })
            .clone()
    }

    fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn empty() -> HFSet {
        Self::from_sorted(Vec::new())
    }

    pub fn singleton(x: &HFSet) -> HFSet {
        Self::from_sorted(vec![x.clone()])
    }

    pub fn pair(x: &HFSet, y: &HFSet) -> HFSet {
        Self::new([x.clone(), y.clone()])
    }

    /// `⋃x`: elements of elements.
    pub fn union_of(x: &HFSet) -> HFSet {
        Self::new(x.elems().iter().flat_map(|y| y.elems().iter().cloned()))
    }

    pub fn union(x: &HFSet, y: &HFSet) -> HFSet {
        Self::new(x.elems().iter().chain(y.elems()).cloned())
    }

    /// `x ∪ {x}`.
    pub fn succ(x: &HFSet) -> HFSet {
        Self::new(x.elems().iter().cloned().chain([x.clone()]))
    }

    /// The von Neumann numeral `k`.
    pub fn nat(k: usize) -> HFSet {
        (0..k).fold(Self::empty(), |x, _| Self::succ(&x))
    }

    /// The Kuratowski pair `{{x}, {x, y}}`.
    pub fn kpair(x: &HFSet, y: &HFSet) -> HFSet {
        Self::pair(&Self::singleton(x), &Self::pair(x, y))
    }

    /// Inverse of [`HFSet::kpair`].
    pub fn unpair(&self) -> Option<(HFSet, HFSet)> {
        match self.elems() {
            [s] if s.len() == 1 => Some((s.elems()[0].clone(), s.elems()[0].clone())),
            [s, t] if s.len() == 1 && t.len() == 2 && t.contains(&s.elems()[0]) => {
                let x = s.elems()[0].clone();
                let y = t.elems().iter().find(|e| **e != x).expect("two elements").clone();
                Some((x, y))
            }
            _ => None,
        }
    }

    /// `Ext`: the sorted elements.
    pub fn elems(&self) -> &[HFSet] {
        &self.0.children
    }

    pub fn len(&self) -> usize {
        self.0.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.children.is_empty()
    }

    /// `rank(∅) = 0`, otherwise one more than the largest rank of an element.
    pub fn rank(&self) -> usize {
        self.0.rank as usize
    }

    /// `x ε self`.
    pub fn contains(&self, x: &HFSet) -> bool {
        self.elems().binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &HFSet) -> bool {
        self.elems().iter().all(|e| other.contains(e))
    }

    /// Every subset, in the canonical order of their encodings.
    pub fn subsets(&self) -> Vec<HFSet> {
        let n = self.len();
        assert!(n < 32, "subsets of a {n}-element set");
        let mut out: Vec<HFSet> = (0u32..1 << n)
            .map(|mask| {
                Self::from_sorted(
                    self.elems().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone()).collect(),
                )
            })
            .collect();
        out.sort();
        out
    }
}

impl PartialEq for HFSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for HFSet {}

impl Hash for HFSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.addr().hash(state);
    }
}

impl Ord for HFSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.rank()
            .cmp(&other.rank())
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.elems().cmp(other.elems()))
    }
}

impl PartialOrd for HFSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.elems().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for HFSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses a braces literal starting at byte `pos`; returns the set and the
/// position after it.
pub(crate) fn parse_literal(src: &str, mut pos: usize) -> Result<(HFSet, usize)> {
    let bytes = src.as_bytes();
    let skip = |p: &mut usize| {
        while *p < bytes.len() && bytes[*p].is_ascii_whitespace() {
            *p += 1;
        }
    };
    skip(&mut pos);
    if bytes.get(pos) != Some(&b'{') {
        return Err(Error::Parse { pos, msg: "expected `{`".into() });
    }
    pos += 1;
    let mut elems = Vec::new();
    skip(&mut pos);
    if bytes.get(pos) == Some(&b'}') {
        return Ok((HFSet::empty(), pos + 1));
    }
    loop {
        let (e, next) = parse_literal(src, pos)?;
        elems.push(e);
        pos = next;
        skip(&mut pos);
        match bytes.get(pos) {
            Some(b',') => pos += 1,
            Some(b'}') => return Ok((HFSet::new(elems), pos + 1)),
            _ => return Err(Error::Parse { pos, msg: "expected `,` or `}`".into() }),
        }
    }
}

impl FromStr for HFSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (x, mut end) = parse_literal(s, 0)?;
        while end < s.len() && s.as_bytes()[end].is_ascii_whitespace() {
            end += 1;
        }
        if end != s.len() {
            return Err(Error::Parse { pos: end, msg: "trailing input after set literal".into() });
        }
        Ok(x)
    }
}
