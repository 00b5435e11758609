//! Hereditarily finite sets as the initial algebra for the finite power
//! class, a formula language over `ε`, and axiom checks in rank-bounded
//! truncations `V_n`.

mod axioms;
mod formula;
mod hf;

use std::collections::HashSet;
use std::sync::OnceLock;

pub use axioms::{check_axiom, fullness_set, mvss_by_subsets, AxiomInstanceReport, SetAxiom, Witness};
pub use formula::{eval, parse_formula, Env, Formula, Quant, Term};
pub use hf::HFSet;

use crate::classes::Representation;
use crate::error::{Error, Result};
use crate::wtypes::{fold_with, PolySig, WTree};

/// Largest `n` for which `V_n` is materialized; `|V_6| = 2^65536`.
pub const MAX_UNIVERSE: usize = 5;

static UNIVERSES: [OnceLock<Vec<HFSet>>; MAX_UNIVERSE + 1] = [const { OnceLock::new() }; MAX_UNIVERSE + 1];

/// `V_n`, the sets of rank below `n`, in canonical order. `V_0` is empty and
/// `V_{i+1}` is every subset of `V_i`.
pub fn universe(n: usize) -> Result<&'static [HFSet]> {
    if n > MAX_UNIVERSE {
        return Err(Error::Precondition(format!("V_{n} is too large to enumerate (limit V_{MAX_UNIVERSE})")));
    }
    Ok(UNIVERSES[n].get_or_init(|| {
        if n == 0 {
            return Vec::new();
        }
        let below = universe(n - 1).expect("smaller bound");
        powerset_sorted(below)
    }))
}

/// All subsets of a canonically sorted list, each as a set, sorted.
fn powerset_sorted(elems: &[HFSet]) -> Vec<HFSet> {
    let k = elems.len();
    assert!(k < 32, "power set of {k} elements");
    let mut out: Vec<HFSet> = (0u64..1 << k)
        .map(|mask| HFSet::from_sorted((0..k).filter(|i| mask >> i & 1 == 1).map(|i| elems[i].clone()).collect()))
        .collect();
    out.sort();
    out
}

/// The set a tree denotes: children become elements, so bisimilar trees land
/// on the same set.
pub fn canonical_hf(w: &WTree) -> HFSet {
    fold_with(w, &mut |_, children: &[HFSet]| HFSet::new(children.iter().cloned()))
}

/// Below this many trees `build_v` enumerates them literally.
const LITERAL_LIMIT: u128 = 200_000;

/// Canonical forms of all `W_π` trees of height at most `depth`, sorted.
pub fn build_v(rep: &Representation, depth: usize) -> Vec<HFSet> {
    let sig = PolySig::new(rep.pi.clone());
    if sig.count(depth) <= LITERAL_LIMIT {
        build_v_literal(&sig, depth)
    } else {
        build_v_levelwise(&sig, depth)
    }
}

/// Enumerates the trees and collapses them through [`canonical_hf`].
pub fn build_v_literal(sig: &PolySig, depth: usize) -> Vec<HFSet> {
    let mut out: Vec<HFSet> = sig.enumerate(depth).iter().map(canonical_hf).collect::<HashSet<_>>().into_iter().collect();
    out.sort();
    out
}

/// Same result computed on sets: a node of arity `m` denotes a set with
/// between one and `m` elements (or `∅` when `m = 0`), so each level is the
/// subsets of the previous one of an admissible size.
pub fn build_v_levelwise(sig: &PolySig, depth: usize) -> Vec<HFSet> {
    let arities: Vec<usize> = (0..sig.labels()).map(|a| sig.arity(a)).collect();
    let has_leaf = arities.contains(&0);
    let widest = arities.iter().copied().max().unwrap_or(0);
    let admissible = |s: usize| if s == 0 { has_leaf } else { s <= widest };
    let mut level: Vec<HFSet> = if has_leaf { vec![HFSet::empty()] } else { Vec::new() };
    for _ in 0..depth {
        let mut next = Vec::new();
        subsets_by_size(&level, &admissible, &mut Vec::new(), 0, &mut next);
        next.sort();
        level = next;
    }
    level
}

fn subsets_by_size(
    pool: &[HFSet],
    ok: &impl Fn(usize) -> bool,
    chosen: &mut Vec<HFSet>,
    from: usize,
    out: &mut Vec<HFSet>,
) {
    if ok(chosen.len()) {
        out.push(HFSet::from_sorted(chosen.clone()));
    }
    for i in from..pool.len() {
        chosen.push(pool[i].clone());
        if (chosen.len()..=pool.len()).any(ok) {
            subsets_by_size(pool, ok, chosen, i + 1, out);
        }
        chosen.pop();
    }
}

#[cfg(test)]
mod tests;
