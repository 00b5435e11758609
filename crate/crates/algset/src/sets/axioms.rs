//! Axiom instances decided in a truncation `V_n`.
//!
//! Conventions shared by every check: set parameters that are not supplied
//! range over `V_{n-1}` when the axiom asks for a witness (so that the
//! witness has a chance to lie in `V_n`), and over `V_n` otherwise. Free
//! variables of a scheme formula that are neither the scheme's own variables
//! nor supplied in the environment are treated the same way.

use std::collections::BTreeMap;

use serde::Serialize;

use super::formula::{eval, parse_formula, Env, Formula, Quant, Term};
use super::hf::HFSet;
use super::universe;
use crate::classes::Status;
use crate::error::{Error, Result};

/// Schemes use `x` for the separated or inducted variable and `x`, `y` for
/// the collected relation; a supplied `a` is the bounding set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetAxiom {
    Extensionality,
    Empty,
    Pairing,
    Union,
    Infinity,
    SetInduction(Formula),
    BoundedSeparation { phi: Formula, a: Option<HFSet> },
    FullSeparation { phi: Formula, a: Option<HFSet> },
    StrongCollection { phi: Formula, a: Option<HFSet> },
    PowerSet { x: Option<HFSet> },
    /// `f` is a set of Kuratowski pairs encoding a function into `a`.
    Fullness { f: HFSet, a: HFSet },
}

impl SetAxiom {
    pub fn name(&self) -> &'static str {
        match self {
            SetAxiom::Extensionality => "extensionality",
            SetAxiom::Empty => "empty",
            SetAxiom::Pairing => "pairing",
            SetAxiom::Union => "union",
            SetAxiom::Infinity => "infinity",
            SetAxiom::SetInduction(_) => "set-induction",
            SetAxiom::BoundedSeparation { .. } => "bounded-separation",
            SetAxiom::FullSeparation { .. } => "full-separation",
            SetAxiom::StrongCollection { .. } => "strong-collection",
            SetAxiom::PowerSet { .. } => "power-set",
            SetAxiom::Fullness { .. } => "fullness",
        }
    }

    /// The axioms that take no formula.
    pub fn closed_axioms() -> Vec<SetAxiom> {
        vec![SetAxiom::Extensionality, SetAxiom::Empty, SetAxiom::Pairing, SetAxiom::Union, SetAxiom::Infinity]
    }
}

/// A parameter assignment and the set it produced or refuted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub params: BTreeMap<String, HFSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<HFSet>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomInstanceReport {
    pub axiom: String,
    pub rank_bound: usize,
    /// Formula text and supplied sets, printed.
    pub parameters: BTreeMap<String, String>,
    pub status: Status,
    pub instances: usize,
    /// The first few witnesses, in enumeration order.
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

const KEPT_WITNESSES: usize = 16;

impl AxiomInstanceReport {
    fn new(axiom: &SetAxiom, n: usize) -> Self {
        let mut parameters = BTreeMap::new();
        match axiom {
            SetAxiom::SetInduction(phi) => {
                parameters.insert("phi".into(), phi.to_string());
            }
            SetAxiom::BoundedSeparation { phi, a }
            | SetAxiom::FullSeparation { phi, a }
            | SetAxiom::StrongCollection { phi, a } => {
                parameters.insert("phi".into(), phi.to_string());
                if let Some(a) = a {
                    parameters.insert("a".into(), a.to_string());
                }
            }
            SetAxiom::PowerSet { x: Some(x) } => {
                parameters.insert("x".into(), x.to_string());
            }
            SetAxiom::Fullness { f, a } => {
                parameters.insert("f".into(), f.to_string());
                parameters.insert("a".into(), a.to_string());
            }
            _ => {}
        }
        AxiomInstanceReport {
            axiom: axiom.name().into(),
            rank_bound: n,
            parameters,
            status: Status::Pass,
            instances: 0,
            witnesses: Vec::new(),
            counterexample: None,
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn witness(&mut self, env: &Env, set: HFSet) {
        self.instances += 1;
        if self.witnesses.len() < KEPT_WITNESSES {
            self.witnesses.push(Witness { params: env.clone(), set: Some(set) });
        }
    }

    fn refute(&mut self, env: &Env, set: Option<HFSet>, note: impl Into<String>) {
        self.instances += 1;
        if self.counterexample.is_none() {
            self.status = Status::Fail;
            self.counterexample = Some(Witness { params: env.clone(), set });
            self.note = Some(note.into());
        }
    }
}

/// Decides one axiom (or scheme instance) in `V_n`. `env` fixes free
/// variables of the formula and is extended by enumeration where it is
/// silent.
pub fn check_axiom(axiom: &SetAxiom, n: usize, env: &Env) -> Result<AxiomInstanceReport> {
    let vn = universe(n)?;
    let below = universe(n.saturating_sub(1))?;
    for (k, v) in env {
        in_bound(k, v, n)?;
    }
    let mut report = AxiomInstanceReport::new(axiom, n);
    match axiom {
        SetAxiom::Extensionality => {
            let phi = fixed("forall a . forall b . ((forall z in a . eps(z,b)) and (forall z in b . eps(z,a)) -> a = b)");
            report.instances = vn.len() * vn.len();
            if !eval(&phi, env, n)? {
                report.refute(env, None, "two distinct sets have the same elements");
            }
        }
        SetAxiom::Empty => least_witness(&mut report, "forall x . not eps(x,z)", &[], below, vn, n)?,
        SetAxiom::Pairing => least_witness(&mut report, "eps(x,z) and eps(y,z)", &["x", "y"], below, vn, n)?,
        SetAxiom::Union => {
            least_witness(&mut report, "forall y in x . forall w in y . eps(w,z)", &["x"], below, vn, n)?
        }
        SetAxiom::Infinity => infinity(&mut report, vn, n)?,
        SetAxiom::PowerSet { x } => {
            let xs = match x {
                Some(x) => {
                    in_bound("x", x, n)?;
                    vec![x.clone()]
                }
                None => below.to_vec(),
            };
            let phi = fixed("forall w . ((forall v in w . eps(v,x)) -> eps(w,z))");
            for x in xs {
                let z = HFSet::new(x.subsets());
                let mut e = env.clone();
                e.insert("x".into(), x);
                if z.rank() >= n {
                    report.refute(&e, Some(z), "the power set lies outside the truncation");
                    continue;
                }
                e.insert("z".into(), z.clone());
                if eval(&phi, &e, n)? {
                    e.remove("z");
                    report.witness(&e, z);
                } else {
                    report.refute(&e, Some(z), "a subset is missing from the power set");
                }
            }
        }
        SetAxiom::SetInduction(phi) => {
            if !phi.is_bounded() {
                return Err(Error::IllTyped(format!("set-induction is checked for bounded formulas, got `{phi}`")));
            }
            for e in assignments(phi, &["x"], env, vn) {
                let holds: Vec<bool> = vn
                    .iter()
                    .map(|x| eval(phi, &with(&e, "x", x), n))
                    .collect::<Result<_>>()?;
                let truth = |s: &HFSet| holds[vn.binary_search(s).expect("V_n is transitive")];
                let progressive = vn.iter().all(|x| !x.elems().iter().all(truth) || truth(x));
                match vn.iter().position(|x| !truth(x)) {
                    Some(i) if progressive => {
                        report.refute(&e, Some(vn[i].clone()), "progressive but fails at this set");
                    }
                    _ => report.instances += 1,
                }
            }
        }
        SetAxiom::BoundedSeparation { phi, a } | SetAxiom::FullSeparation { phi, a } => {
            if matches!(axiom, SetAxiom::BoundedSeparation { .. }) && !phi.is_bounded() {
                return Err(Error::IllTyped(format!("bounded-separation needs a bounded formula, got `{phi}`")));
            }
            separation(&mut report, phi, a.as_ref(), env, vn, n)?;
        }
        SetAxiom::StrongCollection { phi, a } => collection(&mut report, phi, a.as_ref(), env, vn, below, n)?,
        SetAxiom::Fullness { f, a } => {
            in_bound("f", f, n)?;
            in_bound("a", a, n)?;
            let z = fullness_set(f, a)?;
            let mvss = mvss_by_subsets(f, a)?;
            report.instances = mvss.len();
            let e = with(&with(env, "f", f), "a", a);
            if z.rank() >= n {
                report.refute(&e, Some(z), "the full set lies outside the truncation");
            } else if let Some(bad) = z.elems().iter().find(|c| !mvss.contains(c)) {
                report.refute(&e, Some(bad.clone()), "a member of the full set is not a multi-valued section");
            } else if let Some(m) = mvss.iter().find(|m| !z.elems().iter().any(|c| c.is_subset(m))) {
                report.refute(&e, Some(m.clone()), "a multi-valued section contains no member of the full set");
            } else {
                report.witnesses.push(Witness { params: e, set: Some(z) });
            }
        }
    }
    Ok(report)
}

fn fixed(src: &str) -> Formula {
    parse_formula(src).expect("built-in formula parses")
}

fn in_bound(what: &str, x: &HFSet, n: usize) -> Result<()> {
    if x.rank() >= n {
        return Err(Error::RankExceeded { what: what.into(), rank: x.rank(), bound: n });
    }
    Ok(())
}

fn with(env: &Env, k: &str, v: &HFSet) -> Env {
    let mut e = env.clone();
    e.insert(k.into(), v.clone());
    e
}

/// Every extension of `env` to the free variables of `phi` outside `roles`,
/// each ranging over `range`.
fn assignments(phi: &Formula, roles: &[&str], env: &Env, range: &[HFSet]) -> Vec<Env> {
    let open: Vec<String> =
        phi.free_vars().into_iter().filter(|v| !roles.contains(&v.as_str()) && !env.contains_key(v)).collect();
    extend(env, &open, range)
}

fn extend(env: &Env, vars: &[String], range: &[HFSet]) -> Vec<Env> {
    let mut out = vec![env.clone()];
    for v in vars {
        out = out.into_iter().flat_map(|e| range.iter().map(move |x| with(&e, v, x))).collect();
    }
    out
}

/// For each assignment of `params` over `range`, the least `z` in `V_n` with
/// `phi`.
fn least_witness(
    report: &mut AxiomInstanceReport,
    src: &str,
    params: &[&str],
    range: &[HFSet],
    vn: &[HFSet],
    n: usize,
) -> Result<()> {
    let phi = fixed(src);
    let vars: Vec<String> = params.iter().map(|s| s.to_string()).collect();
    for e in extend(&Env::new(), &vars, range) {
        let mut found = None;
        for z in vn {
            if eval(&phi, &with(&e, "z", z), n)? {
                found = Some(z.clone());
                break;
            }
        }
        match found {
            Some(z) => report.witness(&e, z),
            None => report.refute(&e, None, format!("no witness in V_{n}")),
        }
    }
    Ok(())
}

fn infinity(report: &mut AxiomInstanceReport, vn: &[HFSet], n: usize) -> Result<()> {
    let phi = fixed(
        "eps({},z) and (forall x in z . exists y in z . \
         ((forall w in y . (eps(w,x) or w = x)) and (forall w in x . eps(w,y)) and eps(x,y)))",
    );
    let mut chain = 0;
    while HFSet::nat(chain).rank() < n {
        chain += 1;
    }
    let inductive = if n == 0 {
        None
    } else {
        let mut hit = None;
        for z in vn {
            if eval(&phi, &with(&Env::new(), "z", z), n)? {
                hit = Some(z.clone());
                break;
            }
        }
        hit
    };
    report.instances = vn.len();
    match inductive {
        Some(z) => report.witness(&Env::new(), z),
        None => {
            report.status = Status::Fail;
            report.counterexample = chain.checked_sub(1).map(|k| Witness { params: Env::new(), set: Some(HFSet::nat(k)) });
            report.note = Some(format!(
                "holds in no finite truncation: no set in V_{n} contains ∅ and is closed under successor; \
                 the numerals below {chain} lie in V_{n} and the successor of the last does not"
            ));
        }
    }
    Ok(())
}

fn separation(
    report: &mut AxiomInstanceReport,
    phi: &Formula,
    a: Option<&HFSet>,
    env: &Env,
    vn: &[HFSet],
    n: usize,
) -> Result<()> {
    let bases = match a {
        Some(a) => {
            in_bound("a", a, n)?;
            vec![a.clone()]
        }
        None => vn.to_vec(),
    };
    // ∀x. x ε z ↔ x ε a ∧ φ, with the witness under a name no formula can use.
    let x = || Term::Var("x".into());
    let inside = Formula::Eps(x(), Term::Var("#z".into()));
    let cond = Formula::And(Box::new(Formula::Eps(x(), Term::Var("a".into()))), Box::new(phi.clone()));
    let spec = Formula::Quant {
        q: Quant::Forall,
        var: "x".into(),
        bound: None,
        body: Box::new(Formula::And(
            Box::new(Formula::Implies(Box::new(inside.clone()), Box::new(cond.clone()))),
            Box::new(Formula::Implies(Box::new(cond), Box::new(inside))),
        )),
    };
    for a in bases {
        for e in assignments(phi, &["x", "a"], &with(env, "a", &a), vn) {
            let mut kept = Vec::new();
            for x in a.elems() {
                if eval(phi, &with(&e, "x", x), n)? {
                    kept.push(x.clone());
                }
            }
            let z = HFSet::new(kept);
            if eval(&spec, &with(&e, "#z", &z), n)? {
                report.witness(&e, z);
            } else {
                report.refute(&e, Some(z), "the separated set does not satisfy the comprehension");
            }
        }
    }
    Ok(())
}

fn collection(
    report: &mut AxiomInstanceReport,
    phi: &Formula,
    a: Option<&HFSet>,
    env: &Env,
    vn: &[HFSet],
    below: &[HFSet],
    n: usize,
) -> Result<()> {
    let bases = match a {
        Some(a) => {
            in_bound("a", a, n)?;
            vec![a.clone()]
        }
        None => below.to_vec(),
    };
    let quant = |q, var: &str, bound: &str, body: Formula| Formula::Quant {
        q,
        var: var.into(),
        bound: Some(Term::Var(bound.into())),
        body: Box::new(body),
    };
    let both_ways = Formula::And(
        Box::new(quant(Quant::Forall, "x", "a", quant(Quant::Exists, "y", "#b", phi.clone()))),
        Box::new(quant(Quant::Forall, "y", "#b", quant(Quant::Exists, "x", "a", phi.clone()))),
    );
    let mut vacuous = 0;
    for a in bases {
        for e in assignments(phi, &["x", "y", "a"], &with(env, "a", &a), below) {
            let mut chosen = Vec::new();
            for x in a.elems() {
                let ex = with(&e, "x", x);
                let mut least = None;
                for y in vn {
                    if eval(phi, &with(&ex, "y", y), n)? {
                        least = Some(y.clone());
                        break;
                    }
                }
                match least {
                    Some(y) => chosen.push(y),
                    None => break,
                }
            }
            if chosen.len() < a.len() {
                vacuous += 1;
                report.instances += 1;
                continue;
            }
            let b = HFSet::new(chosen);
            if b.rank() >= n {
                report.refute(&e, Some(b), "the collecting set lies outside the truncation");
            } else if eval(&both_ways, &with(&e, "#b", &b), n)? {
                report.witness(&e, b);
            } else {
                report.refute(&e, Some(b), "the collecting set misses a related pair");
            }
        }
    }
    if vacuous > 0 && report.note.is_none() {
        report.note = Some(format!("{vacuous} instances hold because some x in a has no related y in V_{n}"));
    }
    Ok(())
}

/// Decodes a set of Kuratowski pairs as a total function into `a`; returns
/// the domain with each point's value.
fn decode_function(f: &HFSet, a: &HFSet) -> Result<Vec<(HFSet, HFSet)>> {
    let mut graph: Vec<(HFSet, HFSet)> = Vec::new();
    for p in f.elems() {
        let (x, y) = p.unpair().ok_or_else(|| Error::NotFunction(format!("{p} is not an ordered pair")))?;
        if !a.contains(&y) {
            return Err(Error::NotFunction(format!("value {y} of {x} is not in {a}")));
        }
        if graph.iter().any(|(x2, _)| *x2 == x) {
            return Err(Error::NotFunction(format!("{x} has two values")));
        }
        graph.push((x, y));
    }
    graph.sort_by(|p, q| p.0.cmp(&q.0));
    Ok(graph)
}

/// The inclusion-minimal multi-valued sections of `f: b → a`: subsets of
/// the domain meeting every fiber in exactly one point. Every section
/// contains one, so the set of them is full.
pub fn fullness_set(f: &HFSet, a: &HFSet) -> Result<HFSet> {
    let graph = decode_function(f, a)?;
    let mut sections = vec![Vec::new()];
    for y in a.elems() {
        let fiber: Vec<&HFSet> = graph.iter().filter(|(_, v)| v == y).map(|(x, _)| x).collect();
        sections = sections
            .into_iter()
            .flat_map(|s: Vec<HFSet>| {
                fiber.iter().map(move |&x| {
                    let mut t = s.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    Ok(HFSet::new(sections.into_iter().map(HFSet::new)))
}

/// Every multi-valued section of `f: b → a`, by scanning all subsets of the
/// domain.
pub fn mvss_by_subsets(f: &HFSet, a: &HFSet) -> Result<Vec<HFSet>> {
    let graph = decode_function(f, a)?;
    let domain = HFSet::new(graph.iter().map(|(x, _)| x.clone()));
    Ok(domain
        .subsets()
        .into_iter()
        .filter(|p| a.elems().iter().all(|y| graph.iter().any(|(x, v)| v == y && p.contains(x))))
        .collect())
}
