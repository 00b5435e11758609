use serde::Serialize;

use super::{embed_y, embed_y_map, ExMor, ExObj, ExReg};
use crate::cat::{all_maps, product_indices, Category, Elem, FinMap, FinObj, Scope, Square};
use crate::classes::{Class, Decision, MapClass, Status};
use crate::error::{Error, Result};

/// The maps of the completion covered by `y(f)` for some `f` in the base class.
#[derive(Clone, Debug)]
pub struct SBar {
    pub base_class: MapClass,
    /// Bound on the sizes of `A` and `B` when searching for a covering square.
    pub search: Scope,
    pub budget: usize,
}

impl SBar {
    pub fn new(base_class: MapClass) -> Self {
        SBar { base_class, search: Scope::new(3), budget: 200_000 }
    }

    pub fn with_search(mut self, scope: Scope) -> Self {
        self.search = scope;
        self
    }

    /// The block map of `m` as a map of finite sets.
    fn block_fin_map(m: &ExMor) -> FinMap {
        let dom = FinObj::range(m.src().num_blocks());
        let cod = FinObj::range(m.tgt().num_blocks());
        FinMap::from_indices(dom, cod, m.block_map()).expect("block indices in range")
    }

    /// `q: y(blocks of X) → X`, `y(m̂)`, `m`, `p: y(blocks of Y) → Y`.
    fn canonical_square(m: &ExMor) -> Square<ExMor> {
        let f = Self::block_fin_map(m);
        let reps = |x: &ExObj, fx: &FinObj| {
            let yx = embed_y(fx);
            ExMor::from_elem_fn(&yx, x, |b| x.rep(b)).expect("discrete source")
        };
        Square {
            top: reps(m.src(), f.dom()),
            left: embed_y_map(&f),
            right: m.clone(),
            bottom: reps(m.tgt(), f.cod()),
        }
    }

    /// Every left leg has a fiber at least as large as the largest block
    /// fiber of `m`, so a class with a smaller cap cannot cover it.
    fn obstruction(&self, m: &ExMor) -> Option<String> {
        let cap = self.base_class.fiber_cap()?;
        let worst = m.block_fiber_sizes().into_iter().max().unwrap_or(0);
        (worst > cap).then(|| format!("a block fiber has {worst} elements but left legs have fibers of at most {cap}"))
    }
}

impl Class<ExReg> for SBar {
    fn decide(&self, _: &ExReg, m: &ExMor) -> Decision {
        if self.base_class.decide_map(&Self::block_fin_map(m)) == Decision::Yes {
            return Decision::Yes;
        }
        if self.obstruction(m).is_some() {
            return Decision::No;
        }
        match search(self, m, self.search) {
            (Some(_), _) => Decision::Yes,
            _ => Decision::Unknown,
        }
    }

    fn label(&self) -> String {
        format!("bar({})", self.base_class)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SbarVerdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Square<ExMor>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Candidate squares examined by the exhaustive search.
    pub candidates: usize,
}

/// Searches for a covering square `(q, y f, m, p)` with `f` in the base class
/// and `|A|, |B|` within `scope`.
pub fn sbar_member(m: &ExMor, sbar: &SBar, scope: &Scope) -> SbarVerdict {
    let canon = SBar::canonical_square(m);
    let f = SBar::block_fin_map(m);
    if sbar.base_class.contains(&f) && f.dom().len() <= scope.max_size && f.cod().len() <= scope.max_size {
        debug_assert!(ExReg.covering_verdict(&canon).is_ok_and(|v| v.is_covering()));
        return SbarVerdict { status: Status::Pass, witness: Some(canon), note: None, candidates: 1 };
    }
    let (found, candidates) = search(sbar, m, *scope);
    match found {
        Some(sq) => SbarVerdict { status: Status::Pass, witness: Some(sq), note: None, candidates },
        None if candidates > sbar.budget => SbarVerdict {
            status: Status::Inconclusive,
            witness: None,
            note: Some(format!("search budget of {} candidates exhausted", sbar.budget)),
            candidates,
        },
        None => {
            let why = sbar.obstruction(m).unwrap_or_else(|| format!("no covering square with |A|, |B| ≤ {}", scope.max_size));
            SbarVerdict { status: Status::Fail, witness: None, note: Some(why), candidates }
        }
    }
}

/// Exhaustive search, pruned so that only commuting tops are generated.
fn search(sbar: &SBar, m: &ExMor, scope: Scope) -> (Option<Square<ExMor>>, usize) {
    let (x, y) = (m.src(), m.tgt());
    let mb = m.block_map();
    let over: Vec<Vec<usize>> =
        (0..y.num_blocks()).map(|t| (0..x.num_blocks()).filter(|&b| mb[b] == t).collect()).collect();
    let mut candidates = 0;
    for nb in 0..=scope.max_size {
        let bobj = FinObj::range(nb);
        let yb = embed_y(&bobj);
        for p in ExReg.homs(&yb, y).into_iter().filter(|p| ExReg.is_cover(p)) {
            let pb = p.block_map();
            for na in 0..=scope.max_size {
                let aobj = FinObj::range(na);
                for f in all_maps(&aobj, &bobj).into_iter().filter(|f| sbar.base_class.contains(f)) {
                    // Each b needs its fiber to reach every block over p(b).
                    if (0..nb).any(|b| f.fiber(b).len() < over[pb[b]].len()) {
                        continue;
                    }
                    let choices: Vec<&Vec<usize>> = (0..na).map(|a| &over[pb[f.at(a)]]).collect();
                    let sizes: Vec<usize> = choices.iter().map(|c| c.len()).collect();
                    for pick in product_indices(&sizes) {
                        candidates += 1;
                        if candidates > sbar.budget {
                            return (None, candidates);
                        }
                        let q: Vec<usize> = pick.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
                        let covers = (0..nb).all(|b| {
                            let fib = f.fiber(b);
                            over[pb[b]].iter().all(|xb| fib.iter().any(|&a| q[a] == *xb))
                        });
                        if !covers {
                            continue;
                        }
                        let ya = embed_y(&aobj);
                        let top = ExMor::from_block_map(&ya, x, &q).expect("block indices");
                        let sq = Square { top, left: embed_y_map(&f), right: m.clone(), bottom: p.clone() };
                        if ExReg.covering_verdict(&sq).is_ok_and(|v| v.is_covering()) {
                            return (Some(sq), candidates);
                        }
                    }
                }
            }
        }
    }
    (None, candidates)
}

/// `∀_g(sub)` computed through a covering square with left leg `y f`.
#[derive(Clone, Debug)]
pub struct ForallEx {
    pub result: ExMor,
    pub square: Square<ExMor>,
}

/// Builds the square over the graph of `g`: `A = {(x, y) : g(x, y)}`, `f` the
/// second projection, `q` the first, and `p` the canonical cover of the
/// target. Then `∀_g(sub) = ∃_p ∀_{y f} q*(sub)`, checked against the
/// block-level universal image and the adjunction with pullback.
pub fn heyting_forall_ex(g: &ExMor, sub: &ExMor) -> Result<ForallEx> {
    let cat = ExReg;
    if sub.tgt() != g.src() || !cat.is_mono(sub) {
        return Err(Error::AmbientMismatch("expected a subobject of the domain".into()));
    }
    let (x, y) = (g.src(), g.tgt());
    let graph = g.pairs();
    let a = FinObj::new(graph.iter().map(|&(i, j)| Elem::pair(x.base().elem(i).clone(), y.base().elem(j).clone())));
    let f = FinMap::from_indices(a.clone(), y.base().clone(), graph.iter().map(|&(_, j)| j).collect())?;
    let top = ExMor::from_elem_fn(&embed_y(&a), x, |k| graph[k].0)?;
    let square = Square { top, left: embed_y_map(&f), right: g.clone(), bottom: y.cover() };
    let verdict = cat.covering_verdict(&square)?;
    if !verdict.is_covering() {
        return Err(Error::NoCoveringSquare(format!("graph square misses {:?}", verdict.missed)));
    }
    let pulled = cat.pullback(sub, &square.top)?.p2;
    let inner = cat.forall_along(&square.left, &pulled)?;
    let result = cat.image(&cat.compose(&square.bottom, &inner)?).1;

    let direct = cat.forall_along(g, sub)?;
    if !cat.same_sub(&result, &direct) {
        return Err(Error::Precondition(format!("∃∀q* gives {result:?}, direct computation {direct:?}")));
    }
    for v in cat.subobjects(y) {
        let back = cat.pullback(&v, g)?.p2;
        if cat.sub_le(&back, sub) != cat.sub_le(&v, &result) {
            return Err(Error::Precondition(format!("adjunction fails at {v:?}")));
        }
    }
    Ok(ForallEx { result, square })
}

/// Whether the diagonal of `x` lies in `S̄`.
pub fn is_separated(x: &ExObj, sbar: &SBar) -> bool {
    sbar.decide(&ExReg, &ExReg.diagonal(x)) == Decision::Yes
}
