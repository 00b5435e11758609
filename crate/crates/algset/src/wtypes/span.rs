//! W-types obtained from a collection span, and the `P_π` presentation of
//! power classes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::bisim::{bisim_test, BisimMode};
use super::{fold_with, PolySig, WTree};
use crate::cat::{all_maps, is_covering_square, surjections, Elem, FinMap, FinObj, Scope, Square};
use crate::classes::represent::two_squares;
use crate::classes::{power_class, MapClass, PowerClass, Representation};
use crate::error::{Error, Result};

/// The covering square built from a representation: `A = Σ_{x,u} {h: E_u ↠ Y_x}`,
/// `g` with fiber `E_u` over `(x,u,h)`, `q(x,u,h,e) = h(e)`.
///
/// In the returned square `top` is `q`, `left` is `g`, `right` is `f` and
/// `bottom` the projection `A ↠ X`.
pub fn collection_span(f: &FinMap, rep: &Representation) -> Result<Square> {
    two_squares(rep, f, surjections)?
        .map(|sq| sq.left)
        .ok_or_else(|| Error::NoCoveringSquare(format!("{f:?} is not covered by pullbacks of the representation")))
}

/// Checks the span condition: every cover `s: F ↠ B_a` (with `|F|` in scope)
/// is refined by some fiber `B_{a'}` over the same point, through a cover
/// `B_{a'} ↠ B_a` over `Y` that factors through `s`.
pub fn check_collection_span(span: &Square, scope: &Scope) -> Result<()> {
    let (g, q, p) = (&span.left, &span.top, &span.bottom);
    let fibers = g.fibers();
    let fiber_obj =
        |a: usize| FinObj::new(fibers[a].iter().map(|&b| g.dom().elem(b).clone()));
    for a in 0..g.cod().len() {
        let ba = fiber_obj(a);
        for n in 0..=scope.max_size {
            let f_obj = FinObj::range(n);
            for s in surjections(&f_obj, &ba) {
                let refined = (0..g.cod().len()).filter(|&a2| p.at(a2) == p.at(a)).any(|a2| {
                    let ba2 = fiber_obj(a2);
                    all_maps(&ba2, &f_obj).into_iter().any(|r| {
                        let t = s.after(&r).expect("composable");
                        t.is_surjective()
                            && (0..ba2.len()).all(|i| q.at(fibers[a2][i]) == q.at(fibers[a][t.at(i)]))
                    })
                });
                if !refined {
                    return Err(Error::Precondition(format!(
                        "span condition fails at {} for the cover {s:?}",
                        g.cod().elem(a)
                    )));
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SpanQuotient {
    /// Trees of `W_g` up to the height bound.
    pub total: usize,
    /// Those related to themselves.
    pub reflexive: usize,
    /// One representative per bisimulation class, with its tree in `W_f`.
    pub classes: Vec<(WTree, WTree)>,
    /// `W_f` enumerated directly.
    pub direct: Vec<WTree>,
    /// Whether the classes correspond exactly to the direct enumeration.
    pub bijective: bool,
}

/// `W_f` at height `≤ depth` as reflexive trees of `W_g` modulo the labeled
/// bisimulation.
///
/// Classes are formed by collapsing each reflexive tree to a tree over `f`;
/// the grouping is then confirmed against the bisimulation tests themselves,
/// members against their representative and representatives pairwise.
pub fn wtype_via_span(f_sig: &PolySig, span: &Square, depth: usize) -> Result<SpanQuotient> {
    if span.right != *f_sig.map() {
        return Err(Error::Precondition("the square's right leg must be the target signature".into()));
    }
    if !is_covering_square(span).is_covering() {
        return Err(Error::NoCoveringSquare("the span square is not covering".into()));
    }
    check_collection_span(span, &Scope::new(2))?;
    let g_sig = PolySig::new(span.left.clone());
    let mode = BisimMode::Labeled { p: span.bottom.clone(), q: span.top.clone() };
    let trees = g_sig.enumerate(depth);

    let reflexive: Vec<WTree> = trees
        .par_iter()
        .map(|w| bisim_test(&g_sig, w, w, &mode).map(|t| t.top().then(|| w.clone())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let (p, q) = (&span.bottom, &span.top);
    let collapse = |w: &WTree| {
        fold_with(w, &mut |a, xs: &[WTree]| {
            let x = p.at(a);
            let kids = f_sig
                .fiber(x)
                .iter()
                .map(|&y| {
                    let i = g_sig.fiber(a).iter().position(|&b| q.at(b) == y).expect("fibers of a covering square");
                    xs[i].clone()
                })
                .collect();
            WTree::sup(x, kids)
        })
    };
    let mut groups: BTreeMap<WTree, Vec<WTree>> = BTreeMap::new();
    for w in &reflexive {
        groups.entry(collapse(w)).or_default().push(w.clone());
    }

    let classes: Vec<(WTree, WTree)> = groups.iter().map(|(ft, ws)| (ws[0].clone(), ft.clone())).collect();
    let members_ok = groups
        .par_iter()
        .map(|(_, ws)| -> Result<bool> {
            for w in &ws[1..] {
                if !bisim_test(&g_sig, &ws[0], w, &mode)?.top() {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    let reps_ok = (0..classes.len())
        .into_par_iter()
        .map(|i| -> Result<bool> {
            for j in i + 1..classes.len() {
                if bisim_test(&g_sig, &classes[i].0, &classes[j].0, &mode)?.top() {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    if !members_ok || !reps_ok {
        return Err(Error::Precondition("bisimulation classes disagree with the collapse to W_f".into()));
    }

    let direct = f_sig.enumerate(depth);
    let bijective = direct.len() == classes.len() && direct.iter().zip(groups.keys()).all(|(a, b)| a == b);
    Ok(SpanQuotient { total: trees.len(), reflexive: reflexive.len(), classes, direct, bijective })
}

/// `P_π(X) = Σ_u X^{E_u}` with the image map onto `℘s(X)`.
#[derive(Clone, Debug)]
pub struct PPiQuotient {
    pub p_pi: FinObj,
    /// `τ_X: (u, t) ↦ Im t`.
    pub tau: FinMap,
    /// Classes of `P_π(X)` under image equality.
    pub classes: Vec<Vec<usize>>,
    pub power: PowerClass,
}

impl PPiQuotient {
    /// Whether the quotient is exactly `℘s(X)` via `τ_X`.
    pub fn coincides(&self) -> bool {
        self.tau.cod() == &self.power.obj && self.tau.is_surjective() && self.classes.len() == self.power.obj.len()
    }
}

pub fn p_pi_quotient(x: &FinObj, rep: &Representation) -> Result<PPiQuotient> {
    let sig = PolySig::new(rep.pi.clone());
    let p_pi = sig.poly_apply(x);
    let power = power_class(x, &MapClass::fiber_bound(rep.pi.max_fiber()))?;
    let tau = FinMap::from_fn(p_pi.clone(), power.obj.clone(), |e| {
        let vals = e.as_tuple().expect("pair")[1].as_tuple().expect("tuple");
        Elem::set(vals.iter().cloned())
    })?;
    let mut by_image: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..p_pi.len() {
        by_image.entry(tau.at(i)).or_default().push(i);
    }
    Ok(PPiQuotient { p_pi, tau, classes: by_image.into_values().collect(), power })
}
