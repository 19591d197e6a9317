//! Name resolution and task execution.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use monsch::abelian::AbGroup;
use monsch::invariants::{self, InvariantError};
use monsch::monoid::{Bounded, CancelWitness, MonoidError, Presentation, Word};
use monsch::scheme::{projective_space, Overlap, Scheme};
use monsch::sheaf::{CohomologyModel, Flasqueness};
use monsch::Int;
use serde_json::{json, Value};

use crate::manifest::*;

#[derive(Clone, Debug)]
pub struct Options {
    pub bound: usize,
    pub degree: Option<usize>,
    pub check_oracles: bool,
    pub parallel: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { bound: 8, degree: None, check_oracles: false, parallel: false }
    }
}

/// Problems with the input itself, as opposed to mathematical failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

const PREDICATES: [&str; 8] =
    ["cancellative", "s-cancellative", "smooth", "s-smooth", "torsion-free", "seminormal", "separated", "connected"];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Scheme,
    Monoid,
    Either,
}

fn signature(task: &str) -> Option<(usize, usize, Kind)> {
    Some(match task {
        "spec" | "stalks" | "dimension" | "units" | "squotient" | "pic" | "scl" | "cacl" | "vanishing" => (1, 1, Kind::Scheme),
        "cohomology" => (1, 2, Kind::Scheme),
        "check" => (2, 2, Kind::Either),
        "grothendieck" => (1, 1, Kind::Either),
        "export" => (1, 1, Kind::Monoid),
        _ => return None,
    })
}

fn builtin_projective(name: &str) -> Option<usize> {
    let n = name.strip_prefix('P')?;
    if n.is_empty() || !n.chars().all(|c| c.is_ascii_digit()) || (n.len() > 1 && n.starts_with('0')) {
        return None;
    }
    n.parse().ok()
}

fn word_of(p: &Presentation, w: &WordAst, what: &str) -> Result<Word, UsageError> {
    let mut out = vec![0; p.ngens()];
    for (g, e) in w {
        let i = p.index_of(g).ok_or_else(|| UsageError(format!("{what}: unknown generator `{g}`")))?;
        out[i] += e;
    }
    Ok(out)
}

fn presentation(def: &MonoidDef) -> Result<Presentation, UsageError> {
    let err = |e: monsch::monoid::MonoidError| UsageError(format!("monoid {}: {e}", def.name));
    let mut seen = HashSet::new();
    if let Some(g) = def.gens.iter().find(|g| !seen.insert(g.as_str())) {
        return Err(UsageError(format!("monoid {}: generator `{g}` listed twice", def.name)));
    }
    let mut p = Presentation::free(&def.gens).with_inverted(&def.inv).map_err(err)?;
    for (l, r) in &def.rels {
        let (l, r) = (word_of(&p, l, &def.name)?, word_of(&p, r, &def.name)?);
        p.push_relation(l, r).map_err(err)?;
    }
    Ok(p)
}

/// Resolved definitions; schemes are built on first use.
pub struct Env {
    monoids: HashMap<String, Presentation>,
    schemes: HashMap<String, SchemeExpr>,
    built: HashMap<String, OnceLock<Result<Scheme, String>>>,
}

impl Env {
    /// Checks names, references, arities and acyclicity.
    pub fn new(m: &Manifest) -> Result<Env, UsageError> {
        let mut monoids = HashMap::new();
        for d in m.monoids() {
            if monoids.insert(d.name.clone(), presentation(d)?).is_some() {
                return Err(UsageError(format!("monoid `{}` defined twice", d.name)));
            }
        }
        let mut schemes = HashMap::new();
        for s in m.schemes() {
            if monoids.contains_key(&s.name) || schemes.insert(s.name.clone(), s.expr.clone()).is_some() {
                return Err(UsageError(format!("name `{}` defined twice", s.name)));
            }
        }
        let mut built = HashMap::new();
        for name in schemes.keys() {
            built.insert(name.clone(), OnceLock::new());
        }
        let env = Env { monoids, schemes, built };
        for s in m.schemes() {
            env.check_scheme(&s.name, &s.expr)?;
        }
        env.check_cycles()?;
        for t in m.tasks() {
            env.check_task(t)?;
        }
        Ok(env)
    }

    fn monoid(&self, name: &str) -> Result<&Presentation, UsageError> {
        self.monoids.get(name).ok_or_else(|| UsageError(format!("unknown monoid `{name}`")))
    }

    fn has_scheme(&self, name: &str) -> bool {
        self.schemes.contains_key(name) || self.monoids.contains_key(name) || builtin_projective(name).is_some()
    }

    fn check_scheme(&self, name: &str, e: &SchemeExpr) -> Result<(), UsageError> {
        match e {
            SchemeExpr::Spec(m) => {
                self.monoid(m)?;
            }
            SchemeExpr::Projective(_) => {}
            SchemeExpr::Product(a, b) => {
                for x in [a, b] {
                    if !self.has_scheme(x) {
                        return Err(UsageError(format!("scheme {name}: unknown scheme `{x}`")));
                    }
                }
            }
            SchemeExpr::Glue { charts, overlaps } => {
                let mut seen = HashSet::new();
                for c in charts {
                    self.monoid(&c.monoid)?;
                    if !seen.insert(c.name.as_str()) {
                        return Err(UsageError(format!("scheme {name}: chart `{}` defined twice", c.name)));
                    }
                }
                for o in overlaps {
                    let nm = self.monoid(&o.monoid)?;
                    for c in [&o.left, &o.right] {
                        if !seen.contains(c.as_str()) {
                            return Err(UsageError(format!("scheme {name}: unknown chart `{c}`")));
                        }
                    }
                    let via: HashSet<&str> = o.maps.iter().map(|(c, _)| c.as_str()).collect();
                    let ends: HashSet<&str> = [o.left.as_str(), o.right.as_str()].into();
                    if via != ends || o.left == o.right {
                        return Err(UsageError(format!("scheme {name}: overlap {} {} needs one map from each chart", o.left, o.right)));
                    }
                    for (c, list) in &o.maps {
                        let chart = charts.iter().find(|d| &d.name == c).expect("checked");
                        let cm = self.monoid(&chart.monoid)?;
                        for (g, w) in list {
                            if cm.index_of(g).is_none() {
                                return Err(UsageError(format!("scheme {name}: `{g}` is not a generator of {}", chart.monoid)));
                            }
                            word_of(nm, w, name)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_cycles(&self) -> Result<(), UsageError> {
        fn visit<'a>(env: &'a Env, n: &'a str, stack: &mut Vec<&'a str>, done: &mut HashSet<&'a str>) -> Result<(), UsageError> {
            if done.contains(n) {
                return Ok(());
            }
            if stack.contains(&n) {
                return Err(UsageError(format!("cyclic definition through `{n}`")));
            }
            stack.push(n);
            if let Some(SchemeExpr::Product(a, b)) = env.schemes.get(n) {
                for x in [a, b] {
                    if env.schemes.contains_key(x.as_str()) {
                        visit(env, x, stack, done)?;
                    }
                }
            }
            stack.pop();
            done.insert(n);
            Ok(())
        }
        let mut done = HashSet::new();
        let mut names: Vec<&String> = self.schemes.keys().collect();
        names.sort();
        for n in names {
            visit(self, n, &mut Vec::new(), &mut done)?;
        }
        Ok(())
    }

    fn check_task(&self, t: &Task) -> Result<(), UsageError> {
        let (lo, hi, kind) = signature(&t.name).ok_or_else(|| UsageError(format!("unknown task `{}`", t.name)))?;
        if t.args.len() < lo || t.args.len() > hi {
            return Err(UsageError(format!("{t}: expected {lo}..={hi} arguments")));
        }
        let target = if t.name == "check" {
            match &t.args[0] {
                Arg::Name(p) if PREDICATES.contains(&p.as_str()) => {}
                a => return Err(UsageError(format!("{t}: unknown predicate `{a}`"))),
            }
            &t.args[1]
        } else {
            &t.args[0]
        };
        let Arg::Name(x) = target else { return Err(UsageError(format!("{t}: expected a name"))) };
        let ok = match kind {
            Kind::Monoid => self.monoids.contains_key(x),
            Kind::Scheme | Kind::Either => self.has_scheme(x),
        };
        if !ok {
            return Err(UsageError(format!("{t}: unknown name `{x}`")));
        }
        if let Some(a) = t.args.get(1).filter(|_| t.name == "cohomology") {
            if !matches!(a, Arg::Int(i) if *i >= 0) {
                return Err(UsageError(format!("{t}: degree must be a nonnegative integer")));
            }
        }
        Ok(())
    }

    fn build(&self, e: &SchemeExpr) -> Result<Scheme, String> {
        match e {
            SchemeExpr::Spec(m) => Scheme::spec(&self.monoids[m]).map_err(|e| e.to_string()),
            SchemeExpr::Projective(n) => projective_space(*n).map_err(|e| e.to_string()),
            SchemeExpr::Product(a, b) => self.scheme(a)?.product(&self.scheme(b)?).map_err(|e| e.to_string()),
            SchemeExpr::Glue { charts, overlaps } => {
                let pos = |n: &str| charts.iter().position(|c| c.name == n).expect("checked");
                let cs: Vec<(String, Presentation)> =
                    charts.iter().map(|c| (c.name.clone(), self.monoids[&c.monoid].clone())).collect();
                let mut os = Vec::new();
                for o in overlaps {
                    let nm = &self.monoids[&o.monoid];
                    let map_for = |chart: &str| -> Result<Vec<Word>, String> {
                        let (_, list) = o.maps.iter().find(|(c, _)| c == chart).expect("checked");
                        let cm = &cs[pos(chart)].1;
                        let mut images = vec![None; cm.ngens()];
                        for (g, w) in list {
                            let i = cm.index_of(g).expect("checked");
                            if images[i].replace(word_of(nm, w, "overlap").map_err(|e| e.0)?).is_some() {
                                return Err(format!("overlap {} {}: `{g}` mapped twice", o.left, o.right));
                            }
                        }
                        images
                            .into_iter()
                            .enumerate()
                            .map(|(i, w)| w.ok_or_else(|| format!("overlap {} {}: no image for `{}`", o.left, o.right, cm.name(i))))
                            .collect()
                    };
                    os.push(Overlap {
                        left: pos(&o.left),
                        right: pos(&o.right),
                        monoid: nm.clone(),
                        left_map: map_for(&o.left)?,
                        right_map: map_for(&o.right)?,
                    });
                }
                Scheme::glue(&cs, &os).map_err(|e| e.to_string())
            }
        }
    }

    /// The scheme behind a name: a definition, `Spec` of a monoid, or `P<n>`.
    pub fn scheme(&self, name: &str) -> Result<Scheme, String> {
        if let Some(cell) = self.built.get(name) {
            return cell.get_or_init(|| self.build(&self.schemes[name])).clone();
        }
        if let Some(m) = self.monoids.get(name) {
            return Scheme::spec(m).map_err(|e| e.to_string());
        }
        match builtin_projective(name) {
            Some(n) => projective_space(n).map_err(|e| e.to_string()),
            None => Err(format!("unknown scheme `{name}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskReport {
    pub title: String,
    pub lines: Vec<String>,
    pub json: Value,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub bound: usize,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.tasks.iter().any(|t| t.error.is_some()))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for t in &self.tasks {
            out.push_str(&format!("== {} ==\n", t.title));
            for l in &t.lines {
                out.push_str(l);
                out.push('\n');
            }
            if let Some(e) = &t.error {
                out.push_str(&format!("error: {e}\n"));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let tasks: Vec<Value> = self
            .tasks
            .iter()
            .map(|t| json!({ "task": t.title, "result": t.json, "error": t.error }))
            .collect();
        json!({ "bound": self.bound, "tasks": tasks })
    }
}

fn group_json(g: &AbGroup<Int>) -> Value {
    let torsion: Vec<String> = g.torsion().iter().map(|d| d.to_string()).collect();
    json!({ "group": g.to_string(), "rank": g.rank(), "torsion": torsion })
}

/// `Z` for the infinite cyclic group, otherwise the usual rendering.
fn short(g: &AbGroup<Int>) -> String {
    let s = g.to_string();
    if s == "Z^1" {
        "Z".into()
    } else {
        s
    }
}

fn bounded<W>(v: &Bounded<W>, show: impl Fn(&W) -> String) -> (String, Value) {
    match v {
        Bounded::Verified { bound } => (format!("true (no counterexample up to bound {bound})"), json!({ "verdict": true, "bound": bound })),
        Bounded::Counterexample(w) => {
            let text = show(w);
            (format!("false; {text}"), json!({ "verdict": false, "witness": text }))
        }
        Bounded::Inconclusive { reason } => (format!("inconclusive: {reason}"), json!({ "verdict": null, "reason": reason })),
    }
}

fn cancel_text(p: &Presentation, w: &CancelWitness) -> String {
    let (a, x, y) = (p.format_word(&w.a), p.format_word(&w.x), p.format_word(&w.y));
    format!("({a})({x}) = ({a})({y}) but {x} ≠ {y}")
}

fn seminormal_text(p: &Presentation, w: &(Word, Word)) -> String {
    format!("x = ({})/({}) has x², x³ in M but x is not in M", p.format_word(&w.0), p.format_word(&w.1))
}

/// Verdicts of predicates that only apply to cancellative monoids.
fn not_applicable(e: MonoidError) -> Result<Out, String> {
    match e {
        MonoidError::RequiresCancellative => out(
            vec!["not applicable: cancellativity is not verified".into()],
            json!({ "verdict": null, "reason": e.to_string() }),
        ),
        e => Err(e.to_string()),
    }
}

struct Out {
    lines: Vec<String>,
    json: Value,
}

fn out(lines: Vec<String>, json: Value) -> Result<Out, String> {
    Ok(Out { lines, json })
}

fn s_smooth(x: &Scheme) -> Result<Out, String> {
    if let Err(e) = x.is_s_cancellative() {
        return out(vec![format!("false; not s-cancellative: {e}")], json!({ "verdict": false, "reason": e.to_string() }));
    }
    match invariants::is_s_smooth::<Int>(x).map_err(|e| e.to_string())? {
        Flasqueness::SFlasque(c) => {
            let parts: Vec<(String, String)> = (0..x.len())
                .filter(|&p| !c.group(p).is_trivial())
                .map(|p| (short(c.group(p)), x.space().label(p).to_string()))
                .collect();
            let text: Vec<String> = parts.iter().map(|(g, l)| format!("{g} at {l}")).collect();
            let line = if text.is_empty() { "true; collection: 0".to_string() } else { format!("true; collection: {}", text.join(", ")) };
            let coll: Vec<Value> = parts.iter().map(|(g, l)| json!({ "point": l, "group": g })).collect();
            out(vec![line], json!({ "verdict": true, "collection": coll }))
        }
        Flasqueness::NotSFlasque { point, verdict, .. } => {
            let l = x.space().label(point).to_string();
            out(vec![format!("false; restriction at {l} has no section: {verdict:?}")], json!({ "verdict": false, "point": l }))
        }
    }
}

fn check(pred: &str, name: &str, env: &Env, opts: &Options) -> Result<Out, String> {
    let monoid = env.monoids.get(name);
    let b = opts.bound;
    let flag = |v: bool, note: &str| {
        let line = if note.is_empty() { v.to_string() } else { format!("{v} ({note})") };
        out(vec![line], json!({ "verdict": v }))
    };
    match (pred, monoid) {
        ("cancellative", Some(m)) => {
            let (l, j) = bounded(&m.is_cancellative(b).map_err(|e| e.to_string())?, |w| cancel_text(m, w));
            out(vec![l], j)
        }
        ("s-cancellative", Some(m)) => match m.s_cancellative_exact() {
            Ok(()) => flag(true, "exact"),
            Err(w) => out(
                vec![format!(
                    "false; unit {} of the stalk at {} dies at {}",
                    m.format_word(&w.element),
                    w.p.display(m),
                    w.q.display(m)
                )],
                json!({ "verdict": false }),
            ),
        },
        ("smooth", Some(m)) => flag(m.is_smooth_monoid().map_err(|e| e.to_string())?, ""),
        ("torsion-free", Some(m)) => match m.is_torsion_free(b) {
            Ok(v) => flag(v, &format!("bound {b}")),
            Err(e) => not_applicable(e),
        },
        ("seminormal", Some(m)) => match m.is_seminormal(b) {
            Ok(v) => {
                let (l, j) = bounded(&v, |w| seminormal_text(m, w));
                out(vec![l], j)
            }
            Err(e) => not_applicable(e),
        },
        ("seminormal", None) => {
            let x = env.scheme(name)?;
            for (p, m) in x.charts() {
                match m.is_seminormal(b) {
                    Ok(Bounded::Verified { .. }) => {}
                    Ok(v) => {
                        let (l, j) = bounded(&v, |w| seminormal_text(m, w));
                        return out(vec![format!("{l} (chart {})", x.space().label(p))], j);
                    }
                    Err(e) => return not_applicable(e),
                }
            }
            let (l, j) = bounded(&Bounded::<()>::Verified { bound: b }, |_| String::new());
            out(vec![l], j)
        }
        _ => {
            let x = env.scheme(name)?;
            match pred {
                "cancellative" => {
                    let v = x.is_cancellative(b).map_err(|e| e.to_string())?;
                    let (l, j) = bounded(&v, |(p, w)| format!("at {}: {}", x.space().label(*p), cancel_text(x.stalk(*p), w)));
                    out(vec![l], j)
                }
                "s-cancellative" => match x.is_s_cancellative() {
                    Ok(()) => flag(true, "exact"),
                    Err(e) => out(vec![format!("false; {e}")], json!({ "verdict": false })),
                },
                "smooth" => flag(x.is_smooth().map_err(|e| e.to_string())?, ""),
                "torsion-free" => match x.is_torsion_free(b) {
                    Ok(v) => flag(v, &format!("bound {b}")),
                    Err(e) => not_applicable(e),
                },
                "separated" => match x.separated_certificate() {
                    Ok(_) => flag(true, ""),
                    Err(e) => out(vec![format!("false; {e}")], json!({ "verdict": false })),
                },
                "connected" => flag(x.is_connected(), ""),
                "s-smooth" => s_smooth(&x),
                _ => unreachable!("predicates are checked before running"),
            }
        }
    }
}

fn stalk_table(x: &Scheme, groups: &[AbGroup<Int>], with_maps: impl Fn(usize, usize) -> bool) -> Out {
    let mut lines = Vec::new();
    let mut pts = Vec::new();
    for (p, g) in groups.iter().enumerate() {
        lines.push(format!("  {}: {g}", x.space().label(p)));
        pts.push(json!({ "point": x.space().label(p), "group": group_json(g) }));
    }
    let mut edges = Vec::new();
    for &(a, b) in x.space().covers() {
        let inj = with_maps(a, b);
        lines.push(format!("  {} -> {}: {}", x.space().label(b), x.space().label(a), if inj { "injective" } else { "not injective" }));
        edges.push(json!({ "from": x.space().label(b), "to": x.space().label(a), "injective": inj }));
    }
    Out { lines, json: json!({ "stalks": pts, "maps": edges }) }
}

fn cohomology_lines(x: &Scheme, degree: Option<usize>) -> Result<Out, String> {
    let groups = x.units_sheaf::<Int>().cohomology_groups(CohomologyModel::OrderCochain).map_err(|e| e.to_string())?;
    let pick: Vec<usize> = match degree {
        Some(i) => vec![i],
        None => (0..groups.len()).collect(),
    };
    let zero = AbGroup::zero();
    let mut lines = Vec::new();
    let mut js = serde_json::Map::new();
    for i in pick {
        let g = groups.get(i).unwrap_or(&zero);
        lines.push(format!("H^{i} = {g}"));
        js.insert(i.to_string(), group_json(g));
    }
    out(lines, Value::Object(js))
}

fn oracle(x: &Scheme) -> Result<String, String> {
    let sheaf = x.units_sheaf::<Int>();
    if x.separated_certificate().is_err() {
        return Ok("oracle: skipped (not separated)".into());
    }
    let a = sheaf.cohomology_groups(CohomologyModel::OrderCochain).map_err(|e| e.to_string())?;
    let b = sheaf.cohomology_groups(CohomologyModel::ReducedCech).map_err(|e| e.to_string())?;
    if a.iter().zip(&b).all(|(g, h)| g.is_isomorphic(h)) && a.len() == b.len() {
        Ok("oracle: order-cochain and reduced Čech cohomology agree".into())
    } else {
        Err(format!("oracle mismatch: {a:?} vs {b:?}"))
    }
}

fn run_task(t: &Task, env: &Env, opts: &Options) -> TaskReport {
    let name = |k: usize| match &t.args[k] {
        Arg::Name(s) => s.clone(),
        Arg::Int(i) => i.to_string(),
    };
    let result = (|| -> Result<Out, String> {
        match t.name.as_str() {
            "export" => {
                let text = invariants::export_algebra(&env.monoids[&name(0)]);
                let lines: Vec<String> = text.lines().map(String::from).collect();
                let js = json!(lines);
                out(lines, js)
            }
            "grothendieck" if env.monoids.contains_key(&name(0)) => {
                let g = env.monoids[&name(0)].grothendieck::<Int>();
                out(vec![g.to_string()], group_json(&g))
            }
            "check" => check(&name(0), &name(1), env, opts),
            task => {
                let x = env.scheme(&name(0))?;
                let mut o = match task {
                    "spec" | "stalks" => {
                        let mut lines = vec![format!("{} points, dimension {}", x.len(), x.dimension())];
                        let mut pts = Vec::new();
                        for p in 0..x.len() {
                            let (l, h, s) = (x.space().label(p), x.space().height(p), x.stalk(p).to_string());
                            lines.push(format!("  {l}  height {h}  stalk {s}"));
                            pts.push(json!({ "point": l, "height": h, "stalk": s }));
                        }
                        let mut edges = Vec::new();
                        if task == "spec" {
                            lines.push("hasse:".into());
                            for &(a, b) in x.space().covers() {
                                lines.push(format!("  {} < {}", x.space().label(a), x.space().label(b)));
                                edges.push(json!([x.space().label(a), x.space().label(b)]));
                            }
                        }
                        Out { lines, json: json!({ "points": pts, "hasse": edges }) }
                    }
                    "dimension" => Out { lines: vec![x.dimension().to_string()], json: json!(x.dimension()) },
                    "units" => {
                        let o = x.units_sheaf::<Int>();
                        stalk_table(&x, o.stalks(), |a, b| o.restriction(a, b).is_injective())
                    }
                    "squotient" => {
                        let q = invariants::s_quotient_sheaf::<Int>(&x).map_err(|e| e.to_string())?;
                        stalk_table(&x, q.stalks(), |a, b| q.restriction(a, b).is_injective())
                    }
                    "grothendieck" => {
                        let gens: Vec<usize> = x.space().minimal();
                        let gs: Vec<AbGroup<Int>> = gens.iter().map(|&p| x.stalk(p).grothendieck::<Int>()).collect();
                        let lines = gens.iter().zip(&gs).map(|(&p, g)| format!("  {}: {g}", x.space().label(p))).collect();
                        Out { lines, json: json!(gs.iter().map(group_json).collect::<Vec<_>>()) }
                    }
                    "pic" => {
                        let g = invariants::pic::<Int>(&x);
                        Out { lines: vec![g.to_string()], json: group_json(&g) }
                    }
                    "cohomology" => {
                        let degree = match t.args.get(1) {
                            Some(Arg::Int(i)) => Some(*i as usize),
                            _ => opts.degree,
                        };
                        cohomology_lines(&x, degree)?
                    }
                    "scl" | "cacl" => {
                        let cl = if task == "scl" {
                            invariants::s_class_group::<Int>(&x)
                        } else {
                            invariants::cartier_class_group::<Int>(&x, opts.bound)
                        }
                        .map_err(|e: InvariantError| e.to_string())?;
                        let mut lines = vec![cl.group.to_string(), format!("divisors: {}", cl.divisors.group)];
                        lines.push(format!("matches pic: {}", cl.matches_pic));
                        if let Some(b) = cl.bound {
                            lines.push(format!("cancellativity verified up to bound {b}"));
                        }
                        if !cl.matches_pic {
                            return Err(format!("class group {} differs from pic {}", cl.group, cl.pic));
                        }
                        let js = json!({ "group": group_json(&cl.group), "divisors": group_json(&cl.divisors.group), "matches_pic": cl.matches_pic, "bound": cl.bound });
                        Out { lines, json: js }
                    }
                    "vanishing" => {
                        let r = invariants::vanishing_check::<Int>(&x);
                        let mut lines: Vec<String> = r.degrees.iter().map(|(i, g)| format!("H^{i} = {g}")).collect();
                        lines.push(match r.s_smooth {
                            Some(b) => format!("s-smooth: {b}"),
                            None => "s-smooth: not applicable (not s-cancellative)".into(),
                        });
                        if r.violation() {
                            return Err("nonzero higher unit cohomology on an s-smooth scheme".into());
                        }
                        let degrees: serde_json::Map<String, Value> = r.degrees.iter().map(|(i, g)| (i.to_string(), group_json(g))).collect();
                        Out { lines, json: json!({ "degrees": degrees, "s_smooth": r.s_smooth }) }
                    }
                    _ => unreachable!("tasks are checked before running"),
                };
                if opts.check_oracles {
                    o.lines.push(oracle(&x)?);
                }
                Ok(o)
            }
        }
    })();
    match result {
        Ok(o) => TaskReport { title: t.to_string(), lines: o.lines, json: o.json, error: None },
        Err(e) => TaskReport { title: t.to_string(), lines: Vec::new(), json: Value::Null, error: Some(e) },
    }
}

pub fn run(m: &Manifest, opts: &Options) -> Result<Report, UsageError> {
    let env = Env::new(m)?;
    let tasks: Vec<&Task> = m.tasks().collect();
    let reports = if opts.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = tasks.iter().map(|t| s.spawn(|| run_task(t, &env, opts))).collect();
            handles.into_iter().map(|h| h.join().expect("task thread panicked")).collect()
        })
    } else {
        tasks.iter().map(|t| run_task(t, &env, opts)).collect()
    };
    Ok(Report { bound: opts.bound, tasks: reports })
}
