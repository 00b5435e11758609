//! Hash-consed well-founded trees.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex};

struct Node {
    label: u32,
    height: u32,
    children: Vec<WTree>,
}

/// A tree `sup_a(t)`: a label and one child per element of the label's fiber,
/// in fiber order.
///
/// Structurally equal trees share one allocation, so equality and hashing go
/// by address.
#[derive(Clone)]
pub struct WTree(Arc<Node>);

type Key = (u32, Vec<usize>);

static STORE: LazyLock<Mutex<HashMap<Key, WTree>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

impl WTree {
    pub fn sup(label: usize, children: Vec<WTree>) -> WTree {
        let label = u32::try_from(label).expect("label fits in u32");
        let key = (label, children.iter().map(WTree::addr).collect());
        let mut store = STORE.lock().expect("tree store poisoned");
        store
            .entry(key)
            .or_insert_with(|| {
                let height = children.iter().map(|c| c.height() + 1).max().unwrap_or(0) as u32;
                WTree(Arc::new(Node { label, height, children }))
            })
            .clone()
    }

    pub fn leaf(label: usize) -> WTree {
        WTree::sup(label, Vec::new())
    }

    fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn label(&self) -> usize {
        self.0.label as usize
    }

    pub fn children(&self) -> &[WTree] {
        &self.0.children
    }

    /// Leaves have height 0.
    pub fn height(&self) -> usize {
        self.0.height as usize
    }

    /// Number of nodes, counting shared subtrees once per occurrence.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(WTree::size).sum::<usize>()
    }
}

impl PartialEq for WTree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for WTree {}

impl Hash for WTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.addr().hash(state);
    }
}

impl Ord for WTree {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.height()
            .cmp(&other.height())
            .then(self.label().cmp(&other.label()))
            .then_with(|| self.children().cmp(other.children()))
    }
}

impl PartialOrd for WTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())?;
        if !self.children().is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children().iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for WTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for WTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `tc(w)`: `w` with all its subtrees, sorted; and `st(w)`, the same without `w`.
pub fn transitive_closure(w: &WTree) -> (Vec<WTree>, Vec<WTree>) {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![w.clone()];
    while let Some(t) = stack.pop() {
        if seen.insert(t.clone()) {
            stack.extend(t.children().iter().cloned());
        }
    }
    let mut tc: Vec<WTree> = seen.into_iter().collect();
    tc.sort();
    let st = tc.iter().filter(|t| *t != w).cloned().collect();
    (tc, st)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sharing() {
        let a = WTree::sup(1, vec![WTree::leaf(0), WTree::leaf(0)]);
        let b = WTree::sup(1, vec![WTree::leaf(0), WTree::leaf(0)]);
        assert_eq!(a, b);
        assert!(Arc::ptr_eq(&a.0, &b.0));
        assert_eq!(a.height(), 1);
        assert_eq!(a.to_string(), "1(0,0)");
    }

    #[test]
    fn closure_examples() {
        let leaf = WTree::leaf(0);
        assert_eq!(transitive_closure(&leaf), (vec![leaf.clone()], vec![]));
        let chain = WTree::sup(1, vec![WTree::sup(1, vec![leaf.clone()])]);
        assert_eq!(transitive_closure(&chain).0.len(), 3);
        let twins = WTree::sup(2, vec![leaf.clone(), leaf.clone()]);
        assert_eq!(transitive_closure(&twins).0.len(), 2);
    }

    #[test]
    fn concurrent_interning_is_consistent() {
        use rayon::prelude::*;
        let trees: Vec<WTree> = (0..64)
            .into_par_iter()
            .map(|i| WTree::sup(7, vec![WTree::leaf(i % 4), WTree::leaf(3)]))
            .collect();
        for (i, t) in trees.iter().enumerate() {
            assert_eq!(*t, trees[i % 4]);
        }
    }
}
