use std::time::{Duration, Instant};

use algset::cat::{Category, FinMap, FinSet, Scope};
use algset::classes::{
    check_axioms, check_representation, check_strict_representation, AxiomId, Decision, MapClass,
    Representation, Status,
};
use algset::exreg::completion_report;
use algset::sets::{
    build_v, build_v_levelwise, build_v_literal, canonical_hf, check_axiom, eval, fullness_set, mvss_by_subsets,
    parse_formula, universe, Env, Formula, HFSet, SetAxiom,
};
use algset::wtypes::{bisimilar, BisimMode, PolySig};
use rayon::prelude::*;
use serde_json::json;

use crate::report::{timed, Check};
use crate::spec::WorkbenchSpec;
use crate::{Cli, CliError, Command};

type Outcome = (Vec<Check>, Vec<String>);

/// Largest tree count for which every pair is tested for bisimilarity.
const MAX_PAIRWISE: usize = 500;

/// Flags, then the spec file, then a default.
fn pick<T: Clone>(flag: Option<T>, file: &Option<T>, default: Option<T>, what: &str) -> Result<T, CliError> {
    flag.or_else(|| file.clone()).or(default).ok_or_else(|| CliError::Usage(format!("missing --{what}")))
}

fn pick_list<T: Clone>(flag: &[T], file: &Option<Vec<T>>) -> Vec<T> {
    if flag.is_empty() {
        file.clone().unwrap_or_default()
    } else {
        flag.to_vec()
    }
}

struct Ctx<'a> {
    spec: &'a WorkbenchSpec,
    timeout: Option<f64>,
}

impl Ctx<'_> {
    fn class(&self, flag: &Option<String>) -> Result<MapClass, CliError> {
        let text = pick(flag.clone(), &self.spec.class, None, "class")?;
        let class: MapClass = text.parse()?;
        Ok(match self.deadline() {
            Some(d) => class.with_deadline(d),
            None => class,
        })
    }

    fn scope(&self, flag: Option<usize>) -> Result<Scope, CliError> {
        pick(flag, &self.spec.scope, Some(3), "scope").map(Scope::new)
    }

    fn deadline(&self) -> Option<Instant> {
        self.timeout.map(|s| Instant::now() + Duration::from_secs_f64(s))
    }
}

pub fn dispatch(cli: &Cli, spec: &WorkbenchSpec) -> Result<Outcome, CliError> {
    let timeout = cli.global.timeout.or(spec.timeout);
    if timeout.is_some_and(|t| t.is_nan() || t <= 0.0) {
        return Err(CliError::Usage("--timeout must be positive".into()));
    }
    let ctx = Ctx { spec, timeout };
    match &cli.command {
        Command::CheckAxioms { class, scope, axioms, rank, formula } => {
            let rank = rank.or(if class.is_none() && spec.class.is_none() { spec.rank } else { None });
            match rank {
                Some(n) => set_axioms(&ctx, n, axioms, formula),
                None => class_axioms(&ctx, class, *scope, axioms),
            }
        }
        Command::Scov { class, scope } => scov(&ctx, class, *scope),
        Command::Represent { rep, class, scope, strict } => represent(&ctx, rep, class, *scope, *strict),
        Command::Complete { class, scope } => complete(&ctx, class, *scope),
        Command::Wtypes { sig, depth } => wtypes(&ctx, sig, *depth),
        Command::BuildV { rank, rep, depth, stats } => build(&ctx, *rank, rep, *depth, *stats),
        Command::Eval { rank, formula, bindings } => evaluate(&ctx, *rank, formula, bindings),
        Command::Fullness { f, a, table, codomain } => fullness(f, a, table, *codomain),
    }
}

fn class_axioms(ctx: &Ctx, class: &Option<String>, scope: Option<usize>, axioms: &[String]) -> Result<Outcome, CliError> {
    let class = ctx.class(class)?;
    let scope = ctx.scope(scope)?;
    let ids: Vec<AxiomId> = match pick_list(axioms, &ctx.spec.axioms) {
        names if names.is_empty() => AxiomId::SMALL.to_vec(),
        names => names.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
    };
    let checks = ids
        .par_iter()
        .map(|&id| timed(|| check_axioms(&class, &scope, &[id]).iter().map(Check::from_axiom).collect()))
        .flatten()
        .collect();
    Ok((checks, vec![format!("class {class}, scope {}", scope.max_size)]))
}

const RST: [&str; 7] =
    ["extensionality", "empty", "pairing", "union", "bounded-separation", "strong-collection", "set-induction"];

fn set_axioms(ctx: &Ctx, n: usize, names: &[String], formulas: &[String]) -> Result<Outcome, CliError> {
    let names = match pick_list(names, &ctx.spec.axioms) {
        v if v.is_empty() => RST.iter().map(|s| s.to_string()).collect(),
        v => v,
    };
    let formulas: Vec<Formula> =
        pick_list(formulas, &ctx.spec.formulas).iter().map(|s| parse_formula(s)).collect::<Result<_, _>>()?;
    let env = spec_env(ctx.spec)?;
    let mut jobs: Vec<(String, SetAxiom)> = Vec::new();
    for name in &names {
        let scheme = |make: fn(Formula) -> SetAxiom| -> Vec<(String, SetAxiom)> {
            formulas.iter().enumerate().map(|(i, phi)| (format!("{name}[{i}]"), make(phi.clone()))).collect()
        };
        match name.as_str() {
            "extensionality" => jobs.push((name.clone(), SetAxiom::Extensionality)),
            "empty" => jobs.push((name.clone(), SetAxiom::Empty)),
            "pairing" => jobs.push((name.clone(), SetAxiom::Pairing)),
            "union" => jobs.push((name.clone(), SetAxiom::Union)),
            "infinity" => jobs.push((name.clone(), SetAxiom::Infinity)),
            "power-set" => jobs.push((name.clone(), SetAxiom::PowerSet { x: None })),
            "set-induction" => jobs.extend(scheme(SetAxiom::SetInduction)),
            "bounded-separation" => jobs.extend(scheme(|phi| SetAxiom::BoundedSeparation { phi, a: None })),
            "full-separation" => jobs.extend(scheme(|phi| SetAxiom::FullSeparation { phi, a: None })),
            "strong-collection" => jobs.extend(scheme(|phi| SetAxiom::StrongCollection { phi, a: None })),
            other => return Err(CliError::Usage(format!("unknown set axiom `{other}`"))),
        }
    }
    let checks = jobs
        .par_iter()
        .map(|(id, ax)| {
            timed(|| {
                let check = match check_axiom(ax, n, &env) {
                    Ok(r) => {
                        let summary = format!("{} instances{}", r.instances, r.note.as_ref().map(|s| format!("; {s}")).unwrap_or_default());
                        Check::new(id.clone(), r.status, &r).summary(summary)
                    }
                    // A scheme that does not apply to this formula.
                    Err(algset::Error::IllTyped(msg)) => {
                        Check::new(id.clone(), Status::OutOfScope, json!({ "note": msg })).summary(msg)
                    }
                    Err(e) => Check::new(id.clone(), Status::Inconclusive, json!({ "error": e.to_string() }))
                        .summary(e.to_string()),
                };
                vec![check]
            })
        })
        .flatten()
        .collect();
    Ok((checks, vec![format!("V_{n}: unbounded quantifiers range over the {} sets of rank below {n}", universe(n)?.len())]))
}

fn spec_env(spec: &WorkbenchSpec) -> Result<Env, CliError> {
    let mut env = Env::new();
    for (k, v) in spec.env.iter().flatten() {
        env.insert(k.clone(), v.parse()?);
    }
    Ok(env)
}

fn scov(ctx: &Ctx, class: &Option<String>, scope: Option<usize>) -> Result<Outcome, CliError> {
    let base = ctx.class(class)?;
    let scope = ctx.scope(scope)?;
    let mut checks = timed(|| {
        let reports = check_axioms(&base, &scope, &AxiomId::DISPLAY);
        let status = worst(reports.iter().map(|r| r.status));
        let failed: Vec<&str> = reports.iter().filter(|r| r.status == Status::Fail).map(|r| r.id.as_str()).collect();
        let summary = if failed.is_empty() { "precondition holds".into() } else { format!("fails {}", failed.join(", ")) };
        vec![Check::new("display-axioms", status, &reports).summary(summary)]
    });
    let covered = match ctx.deadline() {
        Some(d) => MapClass::covered(base.clone()).with_deadline(d),
        None => MapClass::covered(base.clone()),
    };
    checks.extend(timed(|| {
        let maps = FinSet.all_homs(&scope);
        let (mut gained, mut lost, mut unknown) = (Vec::new(), Vec::new(), 0);
        for f in &maps {
            let inside = base.decide_map(f);
            match covered.decide_map(f) {
                Decision::Yes if inside != Decision::Yes => {
                    gained.push(json!({ "map": f, "square": covered.membership_witness(f) }))
                }
                Decision::No if inside == Decision::Yes => lost.push(json!(f)),
                Decision::Unknown => unknown += 1,
                _ => {}
            }
        }
        let status = if !lost.is_empty() {
            Status::Fail
        } else if unknown > 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        let summary = format!("{} maps, {} gained, {} undecided", maps.len(), gained.len(), unknown);
        let detail = json!({ "class": covered.to_string(), "maps": maps.len(), "gained": gained, "lost": lost, "undecided": unknown });
        vec![Check::new("closure", status, detail).summary(summary)]
    }));
    Ok((checks, vec![format!("closing {base} under covered maps, scope {}", scope.max_size)]))
}

fn worst(statuses: impl Iterator<Item = Status>) -> Status {
    let all: Vec<Status> = statuses.collect();
    if all.contains(&Status::Fail) {
        Status::Fail
    } else if all.contains(&Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

fn representation(ctx: &Ctx, rep: &[usize]) -> Result<Representation, CliError> {
    let sizes = pick_list(rep, &ctx.spec.representation);
    if sizes.is_empty() {
        return Err(CliError::Usage("missing --rep".into()));
    }
    Ok(Representation::new(FinMap::with_fiber_sizes(&sizes)))
}

fn represent(ctx: &Ctx, rep: &[usize], class: &Option<String>, scope: Option<usize>, strict: bool) -> Result<Outcome, CliError> {
    let rep = representation(ctx, rep)?;
    let class = ctx.class(class)?;
    let scope = ctx.scope(scope)?;
    let mut err = None;
    let checks = timed(|| {
        let r = if strict { check_strict_representation(&rep, &class, &scope) } else { check_representation(&rep, &class, &scope) };
        match r {
            Ok(r) => vec![Check::from_axiom(&r)],
            Err(e) => {
                err = Some(e);
                vec![]
            }
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok((checks, vec![format!("π with fibers {:?} against {class}", rep.pi.fiber_sizes())]))
}

fn complete(ctx: &Ctx, class: &Option<String>, scope: Option<usize>) -> Result<Outcome, CliError> {
    let class = ctx.class(class)?;
    let scope = ctx.scope(scope)?;
    let start = Instant::now();
    let report = completion_report(&scope, &class)?;
    let ms = start.elapsed().as_millis() as u64;
    let mut checks: Vec<Check> = report.clauses.iter().chain([&report.membership]).map(Check::from_axiom).collect();
    for c in &mut checks {
        c.wall_ms = ms;
    }
    let mut output = vec![format!("completion over {class}, scope {}", scope.max_size)];
    output.extend(report.notes.iter().cloned());
    Ok((checks, output))
}

fn wtypes(ctx: &Ctx, sig: &[usize], depth: Option<usize>) -> Result<Outcome, CliError> {
    let sizes = pick_list(sig, &ctx.spec.sig);
    if sizes.is_empty() {
        return Err(CliError::Usage("missing --sig".into()));
    }
    let d = pick(depth, &ctx.spec.depth, Some(2), "depth")?;
    let sig = PolySig::from_fiber_sizes(&sizes);
    let expected = sig.count(d);
    if expected > 1_000_000 {
        return Err(CliError::Usage(format!("{expected} trees at depth {d}; choose a smaller depth")));
    }
    let trees = sig.enumerate(d);
    let mut checks = timed(|| {
        let ok = trees.len() as u128 == expected;
        let status = if ok { Status::Pass } else { Status::Fail };
        vec![Check::new("count", status, json!({ "enumerated": trees.len(), "recurrence": expected.to_string() }))
            .summary(format!("{} trees of height ≤ {d}", trees.len()))]
    });
    checks.extend(timed(|| {
        let r = if d == 0 { Ok(()) } else { sig.check_lambek(d - 1) };
        let check = match r {
            Ok(()) => Check::new("lambek", Status::Pass, json!({ "depth": d })).summary("sup is a bijection onto the next height"),
            Err(e) => Check::new("lambek", Status::Fail, json!({ "error": e.to_string() })).summary(e.to_string()),
        };
        vec![check]
    }));
    checks.extend(timed(|| {
        if trees.len() > MAX_PAIRWISE {
            let note = format!("{} trees exceed the pairwise limit {MAX_PAIRWISE}", trees.len());
            return vec![Check::new("bisimulation", Status::OutOfScope, json!({ "note": note })).summary(note)];
        }
        let forms: Vec<HFSet> = trees.iter().map(canonical_hf).collect();
        let mismatch = (0..trees.len()).into_par_iter().find_map_first(|i| {
            (0..trees.len()).find_map(|j| {
                let same = bisimilar(&sig, &trees[i], &trees[j], &BisimMode::Plain);
                (same != (forms[i] == forms[j])).then(|| json!({ "left": trees[i].to_string(), "right": trees[j].to_string() }))
            })
        });
        let pairs = trees.len() * trees.len();
        let classes = {
            let mut f = forms.clone();
            f.sort();
            f.dedup();
            f.len()
        };
        vec![match mismatch {
            None => Check::new("bisimulation", Status::Pass, json!({ "pairs": pairs, "classes": classes }))
                .summary(format!("{pairs} pairs, {classes} classes")),
            Some(m) => Check::new("bisimulation", Status::Fail, m).summary("canonical forms disagree with bisimilarity"),
        }]
    }));
    Ok((checks, vec![format!("|W| = {} at depth {d}", trees.len())]))
}

fn build(ctx: &Ctx, rank: Option<usize>, rep: &[usize], depth: Option<usize>, stats: bool) -> Result<Outcome, CliError> {
    let from_rep = !rep.is_empty() || (rank.is_none() && ctx.spec.rank.is_none() && ctx.spec.representation.is_some());
    if from_rep {
        let rep = representation(ctx, rep)?;
        let d = pick(depth, &ctx.spec.depth, None, "depth")?;
        let start = Instant::now();
        let sets = build_v(&rep, d);
        let ms = start.elapsed().as_millis() as u64;
        let sig = PolySig::new(rep.pi.clone());
        let mut checks = vec![];
        if sig.count(d) <= 50_000 {
            let agree = build_v_literal(&sig, d) == build_v_levelwise(&sig, d);
            let status = if agree { Status::Pass } else { Status::Fail };
            checks.push(Check::new("trees-vs-levels", status, json!({ "sets": sets.len() })).summary("tree quotient matches level-wise construction"));
        }
        let transitive = sets.iter().all(|x| x.elems().iter().all(|c| sets.binary_search(c).is_ok()));
        let status = if transitive { Status::Pass } else { Status::Fail };
        checks.push(Check::new("transitive", status, json!({ "sets": sets.len() })).summary("closed under elements"));
        for c in &mut checks {
            c.wall_ms = ms;
        }
        let mut output = vec![format!("|build_v| = {}", sets.len())];
        if !stats {
            output.extend(sets.iter().map(HFSet::to_string));
        }
        return Ok((checks, output));
    }
    let n = pick(rank, &ctx.spec.rank, None, "rank")?;
    let start = Instant::now();
    let v = universe(n)?;
    let ms = start.elapsed().as_millis() as u64;
    let expected = if n == 0 { 0 } else { 1u128 << universe(n - 1)?.len() };
    let ok = v.len() as u128 == expected && v.iter().all(|x| x.rank() < n && x.elems().iter().all(|c| v.binary_search(c).is_ok()));
    let mut check = Check::new("universe", if ok { Status::Pass } else { Status::Fail }, json!({ "rank": n, "size": v.len() }))
        .summary(format!("size 2^|V_{}|, transitive", n.saturating_sub(1)));
    check.wall_ms = ms;
    let mut output = vec![format!("|V_{n}| = {}", v.len())];
    if !stats {
        output.extend(v.iter().map(HFSet::to_string));
    }
    Ok((vec![check], output))
}

fn evaluate(ctx: &Ctx, rank: Option<usize>, formula: &Option<String>, bindings: &[String]) -> Result<Outcome, CliError> {
    let n = pick(rank, &ctx.spec.rank, None, "rank")?;
    let text = match formula {
        Some(f) => f.clone(),
        None => ctx.spec.formulas.as_ref().and_then(|v| v.first().cloned()).ok_or_else(|| CliError::Usage("missing --formula".into()))?,
    };
    let phi = parse_formula(&text)?;
    let mut env = spec_env(ctx.spec)?;
    for b in bindings {
        let (k, v) = b.split_once('=').ok_or_else(|| CliError::Usage(format!("binding `{b}` is not NAME=SET")))?;
        env.insert(k.trim().to_string(), v.parse()?);
    }
    let start = Instant::now();
    let value = eval(&phi, &env, n)?;
    let mut check = Check::new(
        "eval",
        if value { Status::Pass } else { Status::Fail },
        json!({ "formula": phi.to_string(), "rank": n, "bounded": phi.is_bounded(), "value": value }),
    )
    .summary(if phi.is_bounded() { "bounded" } else { "unbounded quantifiers relativized to V_n" });
    check.wall_ms = start.elapsed().as_millis() as u64;
    Ok((vec![check], vec![value.to_string()]))
}

fn fullness(f: &Option<String>, a: &Option<String>, table: &[usize], codomain: Option<usize>) -> Result<Outcome, CliError> {
    let (f, a) = match (f, a) {
        (Some(f), Some(a)) => (f.parse::<HFSet>()?, a.parse::<HFSet>()?),
        (None, None) => {
            let m = codomain.ok_or_else(|| CliError::Usage("--table needs --codomain".into()))?;
            if let Some(&bad) = table.iter().find(|&&y| y >= m) {
                return Err(CliError::Usage(format!("table value {bad} is outside the codomain of size {m}")));
            }
            let pairs = table.iter().enumerate().map(|(x, &y)| HFSet::kpair(&HFSet::nat(x), &HFSet::nat(y)));
            (HFSet::new(pairs), HFSet::new((0..m).map(HFSet::nat)))
        }
        _ => return Err(CliError::Usage("give both --f and --a, or --table with --codomain".into())),
    };
    let start = Instant::now();
    let z = fullness_set(&f, &a)?;
    let all = mvss_by_subsets(&f, &a)?;
    let minimal: Vec<HFSet> = all.iter().filter(|m| !all.iter().any(|c| c != *m && c.is_subset(m))).cloned().collect();
    let ok = z == HFSet::new(minimal);
    let mut check = Check::new(
        "fullness",
        if ok { Status::Pass } else { Status::Fail },
        json!({ "z": z, "sections": all.len(), "minimal": z.len() }),
    )
    .summary(format!("{} sections, {} minimal", all.len(), z.len()));
    check.wall_ms = start.elapsed().as_millis() as u64;
    Ok((vec![check], vec![format!("z = {z}")]))
}
