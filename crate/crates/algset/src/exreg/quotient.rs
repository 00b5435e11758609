use super::{ExMor, ExObj, ExReg, SBar};
use crate::cat::{Category, Scope};
use crate::classes::{Class, Decision};
use crate::error::{Error, Result};

/// The subobject of `x × x` generated by `pairs`, closed under the partition
/// of `x` on both sides.
pub fn equivalence_mono(x: &ExObj, pairs: &[(usize, usize)]) -> Result<ExMor> {
    let prod = ExReg.product(x, x);
    let mut keep = vec![false; prod.obj.num_blocks()];
    for &(i, j) in pairs {
        let e = crate::cat::Elem::pair(x.base().elem(i).clone(), x.base().elem(j).clone());
        let k = prod.obj.base().index_of(&e).ok_or_else(|| Error::NotAnElement(e.to_string()))?;
        keep[prod.obj.block_of(k)] = true;
    }
    Ok(ExReg::block_subobject(&prod.obj, &keep))
}

/// The relation on blocks of `x` carried by a subobject of `x × x`.
pub fn mono_relation(x: &ExObj, eq: &ExMor) -> Result<Vec<Vec<bool>>> {
    let prod = ExReg.product(x, x);
    if eq.tgt() != &prod.obj || !ExReg.is_mono(eq) {
        return Err(Error::AmbientMismatch(format!("expected a subobject of {x} × {x}")));
    }
    let (b1, b2) = (prod.p1.block_map(), prod.p2.block_map());
    let nb = x.num_blocks();
    let mut rel = vec![vec![false; nb]; nb];
    for (k, hit) in ExReg::range_blocks(eq).into_iter().enumerate() {
        if hit {
            rel[b1[k]][b2[k]] = true;
        }
    }
    Ok(rel)
}

/// A quotient object and its cover.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub obj: ExObj,
    pub cover: ExMor,
}

/// The quotient of a bounded equivalence relation, checked to be stably exact
/// against maps from objects of size at most 2.
pub fn quotient(x: &ExObj, eq: &ExMor, sbar: &SBar) -> Result<Quotient> {
    let rel = mono_relation(x, eq)?;
    let nb = rel.len();
    let name = |b: usize| x.base().elem(x.rep(b)).to_string();
    if let Some(b) = (0..nb).find(|&b| !rel[b][b]) {
        return Err(Error::NotEquivalence(format!("not reflexive at {}", name(b))));
    }
    for a in 0..nb {
        for b in 0..nb {
            if rel[a][b] && !rel[b][a] {
                return Err(Error::NotEquivalence(format!("not symmetric at ({}, {})", name(a), name(b))));
            }
            for c in 0..nb {
                if rel[a][b] && rel[b][c] && !rel[a][c] {
                    return Err(Error::NotEquivalence(format!(
                        "not transitive at ({}, {}, {})",
                        name(a),
                        name(b),
                        name(c)
                    )));
                }
            }
        }
    }
    match sbar.decide(&ExReg, eq) {
        Decision::Yes => {}
        Decision::No => return Err(Error::NotBounded(format!("{} excludes the inclusion", sbar.label()))),
        Decision::Unknown => return Err(Error::NotBounded("membership undecided within budget".into())),
    }
    let labels: Vec<usize> = (0..x.len())
        .map(|i| {
            let b = x.block_of(i);
            (0..nb).find(|&c| rel[b][c]).expect("reflexive")
        })
        .collect();
    let obj = ExObj::from_labels(x.base().clone(), &labels)?;
    let cover = ExMor::from_elem_fn(x, &obj, |i| i)?;
    let q = Quotient { obj, cover };
    check_stably_exact(x, eq, &q, &Scope::new(2))?;
    Ok(q)
}

/// The cover is the coequalizer of `eq` and `eq` is its kernel pair; pulling
/// back along every map into the quotient from `scope` gives again a cover
/// that coequalizes its kernel pair.
pub fn check_stably_exact(x: &ExObj, eq: &ExMor, q: &Quotient, scope: &Scope) -> Result<()> {
    let cat = ExReg;
    if !cat.same_sub(&kernel_pair(&q.cover)?, eq) {
        return Err(Error::Precondition("kernel pair differs from the relation".into()));
    }
    is_coequalizer(x, eq, &q.cover, scope)?;
    for h in cat.maps_into(&q.obj, scope) {
        let p2 = cat.pullback(&q.cover, &h)?.p2;
        let ker = kernel_pair(&p2)?;
        is_coequalizer(p2.src(), &ker, &p2, scope)
            .map_err(|e| Error::Precondition(format!("along {h:?}: {e}")))?;
    }
    Ok(())
}

/// `cover` is a cover through which exactly the maps equalizing the two legs
/// of `rel` factor, each uniquely, among maps into objects of `scope`.
fn is_coequalizer(x: &ExObj, rel: &ExMor, cover: &ExMor, scope: &Scope) -> Result<()> {
    let cat = ExReg;
    if !cat.is_cover(cover) {
        return Err(Error::Precondition("quotient map is not a cover".into()));
    }
    let prod = cat.product(x, x);
    let e1 = cat.compose(&prod.p1, rel)?;
    let e2 = cat.compose(&prod.p2, rel)?;
    for z in cat.objects(scope) {
        let through: Vec<ExMor> =
            cat.homs(cover.tgt(), &z).iter().map(|k| cat.compose(k, cover)).collect::<Result<_>>()?;
        for h in cat.homs(x, &z) {
            let equalizes = cat.compose(&h, &e1)? == cat.compose(&h, &e2)?;
            let n = through.iter().filter(|t| **t == h).count();
            if n != usize::from(equalizes) {
                return Err(Error::Precondition(format!("{h:?} factors {n} times through the quotient")));
            }
        }
    }
    Ok(())
}

/// The kernel pair of `f` as a subobject of `dom f × dom f`.
fn kernel_pair(f: &ExMor) -> Result<ExMor> {
    let cat = ExReg;
    let pb = cat.pullback(f, f)?;
    let prod = cat.product(f.src(), f.src());
    Ok(cat.image(&cat.factor(&prod, &pb.p1, &pb.p2)?).1)
}
