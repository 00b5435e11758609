use serde_json::Value;

use super::{ExMor, ExObj};
use crate::cat::{finset, product_indices, Category, Cocone, Cone, Elem, FinObj, Scope};
use crate::error::{Error, Result};

/// The exact completion of finite sets as a positive Heyting category.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExReg;

impl ExReg {
    /// Blocks of the codomain reached by `f`.
    fn hit(f: &ExMor) -> Vec<bool> {
        let mut hit = vec![false; f.tgt().num_blocks()];
        for b in f.block_map() {
            hit[b] = true;
        }
        hit
    }

    /// The subobject of `x` spanned by the chosen blocks, as an inclusion.
    pub fn block_subobject(x: &ExObj, keep: &[bool]) -> ExMor {
        let idx: Vec<usize> = (0..x.len()).filter(|&i| keep[x.block_of(i)]).collect();
        let carrier = FinObj::new(idx.iter().map(|&i| x.base().elem(i).clone()));
        let labels: Vec<usize> = idx.iter().map(|&i| x.block_of(i)).collect();
        let sub = ExObj::from_labels(carrier, &labels).expect("lengths match");
        ExMor::from_elem_fn(&sub, x, |k| idx[k]).expect("inclusion respects blocks")
    }

    /// Blocks of the codomain in the range of a mono.
    pub fn range_blocks(m: &ExMor) -> Vec<bool> {
        Self::hit(m)
    }
}

impl Category for ExReg {
    type Obj = ExObj;
    type Mor = ExMor;

    fn dom(&self, f: &ExMor) -> ExObj {
        f.src().clone()
    }

    fn cod(&self, f: &ExMor) -> ExObj {
        f.tgt().clone()
    }

    fn size(&self, x: &ExObj) -> usize {
        x.len()
    }

    fn id(&self, x: &ExObj) -> ExMor {
        ExMor::from_elem_fn(x, x, |i| i).expect("identity")
    }

    /// The relational composite; saturation is inherited from the factors.
    fn compose(&self, g: &ExMor, f: &ExMor) -> Result<ExMor> {
        if f.tgt() != g.src() {
            return Err(Error::NotComposable(format!("{} vs {}", f.tgt(), g.src())));
        }
        let (n, mid, m) = (f.src().len(), f.tgt().len(), g.tgt().len());
        let mut rel = vec![false; n * m];
        for x in 0..n {
            for y in (0..mid).filter(|&y| f.holds(x, y)) {
                for z in 0..m {
                    rel[x * m + z] |= g.holds(y, z);
                }
            }
        }
        Ok(ExMor::from_dense_unchecked(f.src().clone(), g.tgt().clone(), rel))
    }

    fn terminal(&self) -> ExObj {
        ExObj::discrete(&FinObj::one())
    }

    fn initial(&self) -> ExObj {
        ExObj::discrete(&FinObj::empty())
    }

    fn to_terminal(&self, x: &ExObj) -> ExMor {
        ExMor::from_block_map(x, &self.terminal(), &vec![0; x.num_blocks()]).expect("constant")
    }

    fn from_initial(&self, x: &ExObj) -> ExMor {
        ExMor::from_block_map(&self.initial(), x, &[]).expect("empty")
    }

    /// Carrier: pairs `(x, y)` with `F(x, z)` and `G(y, z)` for a common `z`;
    /// related when both coordinates are.
    fn pullback(&self, f: &ExMor, g: &ExMor) -> Result<Cone<ExObj, ExMor>> {
        if f.tgt() != g.tgt() {
            return Err(Error::CodomainMismatch(format!("{} vs {}", f.tgt(), g.tgt())));
        }
        let (fx, gy) = (f.block_map(), g.block_map());
        let (x, y) = (f.src(), g.src());
        let mut pairs = Vec::new();
        for i in 0..x.len() {
            for j in 0..y.len() {
                if fx[x.block_of(i)] == gy[y.block_of(j)] {
                    pairs.push((i, j));
                }
            }
        }
        let carrier = FinObj::new(pairs.iter().map(|&(i, j)| Elem::pair(x.base().elem(i).clone(), y.base().elem(j).clone())));
        // FinObj sorts pairs lexicographically, which is the order built above.
        let labels: Vec<(usize, usize)> = pairs.iter().map(|&(i, j)| (x.block_of(i), y.block_of(j))).collect();
        let obj = ExObj::from_labels(carrier, &labels)?;
        let p1 = ExMor::from_elem_fn(&obj, x, |k| pairs[k].0)?;
        let p2 = ExMor::from_elem_fn(&obj, y, |k| pairs[k].1)?;
        Ok(Cone { obj, p1, p2 })
    }

    fn factor(&self, pb: &Cone<ExObj, ExMor>, h: &ExMor, k: &ExMor) -> Result<ExMor> {
        if h.src() != k.src() || h.tgt() != pb.p1.tgt() || k.tgt() != pb.p2.tgt() {
            return Err(Error::AmbientMismatch("cone legs do not match the pullback".into()));
        }
        let (x, y) = (h.tgt(), k.tgt());
        let (hb, kb) = (h.block_map(), k.block_map());
        let w = h.src();
        let table = (0..w.num_blocks())
            .map(|b| {
                let e = Elem::pair(x.base().elem(x.rep(hb[b])).clone(), y.base().elem(y.rep(kb[b])).clone());
                pb.obj
                    .base()
                    .index_of(&e)
                    .map(|i| pb.obj.block_of(i))
                    .ok_or_else(|| Error::NotCommuting(format!("({e}) is not in the pullback")))
            })
            .collect::<Result<Vec<usize>>>()?;
        ExMor::from_block_map(w, &pb.obj, &table)
    }

    fn coproduct(&self, x: &ExObj, y: &ExObj) -> Cocone<ExObj, ExMor> {
        let s = finset::sum(x.base(), y.base());
        let mut labels = vec![0; s.obj.len()];
        for i in 0..x.len() {
            labels[s.inl.at(i)] = x.block_of(i);
        }
        for j in 0..y.len() {
            labels[s.inr.at(j)] = x.num_blocks() + y.block_of(j);
        }
        let obj = ExObj::from_labels(s.obj.clone(), &labels).expect("lengths match");
        let inl = ExMor::from_elem_fn(x, &obj, |i| s.inl.at(i)).expect("tagging respects blocks");
        let inr = ExMor::from_elem_fn(y, &obj, |j| s.inr.at(j)).expect("tagging respects blocks");
        Cocone { obj, inl, inr }
    }

    fn copair(&self, s: &Cocone<ExObj, ExMor>, f: &ExMor, g: &ExMor) -> Result<ExMor> {
        if f.src() != s.inl.src() || g.src() != s.inr.src() || f.tgt() != g.tgt() {
            return Err(Error::AmbientMismatch("copair legs do not match the sum".into()));
        }
        let mut table = vec![usize::MAX; s.obj.num_blocks()];
        for (leg, inj) in [(f, &s.inl), (g, &s.inr)] {
            let (lb, ib) = (leg.block_map(), inj.block_map());
            for (b, &t) in ib.iter().enumerate() {
                table[t] = lb[b];
            }
        }
        ExMor::from_block_map(&s.obj, f.tgt(), &table)
    }

    fn cover_defect(&self, f: &ExMor) -> Option<String> {
        let hit = Self::hit(f);
        let y = f.tgt();
        hit.iter().position(|h| !h).map(|b| y.base().elem(y.rep(b)).to_string())
    }

    fn is_mono(&self, f: &ExMor) -> bool {
        f.block_fiber_sizes().iter().all(|&s| s <= 1)
    }

    /// Factors through the blocks of the codomain that `f` reaches.
    fn image(&self, f: &ExMor) -> (ExMor, ExMor) {
        let m = Self::block_subobject(f.tgt(), &Self::hit(f));
        let y = f.tgt();
        let img = m.src().clone();
        let fb = f.block_map();
        let e = ExMor::from_elem_fn(f.src(), &img, |i| {
            let rep = y.base().elem(y.rep(fb[f.src().block_of(i)]));
            img.base().index_of(rep).expect("reached block is in the image")
        })
        .expect("image factor respects blocks");
        (e, m)
    }

    fn subobjects(&self, x: &ExObj) -> Vec<ExMor> {
        let nb = x.num_blocks();
        (0..1usize << nb)
            .map(|mask| {
                let keep: Vec<bool> = (0..nb).map(|b| mask >> b & 1 == 1).collect();
                Self::block_subobject(x, &keep)
            })
            .collect()
    }

    fn sub_le(&self, m: &ExMor, n: &ExMor) -> bool {
        m.tgt() == n.tgt() && Self::hit(m).iter().zip(Self::hit(n)).all(|(a, b)| !a || b)
    }

    /// Blocks of the codomain whose whole preimage lies in `m`.
    fn forall_along(&self, f: &ExMor, m: &ExMor) -> Result<ExMor> {
        if m.tgt() != f.src() {
            return Err(Error::AmbientMismatch("subobject is not of the domain".into()));
        }
        let inside = Self::hit(m);
        let fb = f.block_map();
        let mut keep = vec![true; f.tgt().num_blocks()];
        for (b, &t) in fb.iter().enumerate() {
            if !inside[b] {
                keep[t] = false;
            }
        }
        Ok(Self::block_subobject(f.tgt(), &keep))
    }

    fn objects(&self, scope: &Scope) -> Vec<ExObj> {
        (0..=scope.max_size).flat_map(|n| ExObj::partitions(&FinObj::range(n))).collect()
    }

    fn homs(&self, x: &ExObj, y: &ExObj) -> Vec<ExMor> {
        let sizes = vec![y.num_blocks(); x.num_blocks()];
        product_indices(&sizes).map(|t| ExMor::from_block_map(x, y, &t).expect("in range")).collect()
    }

    fn render(&self, f: &ExMor) -> Value {
        serde_json::to_value(f).expect("relations serialize")
    }
}
