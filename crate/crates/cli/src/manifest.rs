//! Parsed input: monoid and scheme definitions plus requested computations.

use std::fmt;

/// Juxtaposed generator powers; empty for `1`.
pub type WordAst = Vec<(String, i64)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidDef {
    pub name: String,
    pub gens: Vec<String>,
    pub inv: Vec<String>,
    pub rels: Vec<(WordAst, WordAst)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartDef {
    pub name: String,
    pub monoid: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapDef {
    pub left: String,
    pub right: String,
    pub monoid: String,
    /// `via A: maplist, B: maplist`, images of chart generators in the overlap.
    pub maps: Vec<(String, Vec<(String, WordAst)>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeExpr {
    Spec(String),
    Projective(usize),
    Product(String, String),
    Glue { charts: Vec<ChartDef>, overlaps: Vec<OverlapDef> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeDef {
    pub name: String,
    pub expr: SchemeExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Name(String),
    Int(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub name: String,
    pub args: Vec<Arg>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Monoid(MonoidDef),
    Scheme(SchemeDef),
    Compute(Task),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    pub items: Vec<Item>,
}

impl Manifest {
    pub fn monoids(&self) -> impl Iterator<Item = &MonoidDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Monoid(m) => Some(m),
            _ => None,
        })
    }

    pub fn schemes(&self) -> impl Iterator<Item = &SchemeDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Scheme(s) => Some(s),
            _ => None,
        })
    }

    pub fn tasks(&self) -> impl Iterator<Item = &Task> {
        self.items.iter().filter_map(|i| match i {
            Item::Compute(t) => Some(t),
            _ => None,
        })
    }
}

pub fn format_word(w: &WordAst) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let parts: Vec<String> = w.iter().map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}^{e}") }).collect();
    parts.join(" ")
}

fn format_maplist(m: &[(String, WordAst)]) -> String {
    m.iter().map(|(g, w)| format!("{g} -> {}", format_word(w))).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Name(s) => write!(f, "{s}"),
            Arg::Int(i) => write!(f, "{i}"),
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
        write!(f, "{}({})", self.name, args.join(", "))
    }
}

impl fmt::Display for SchemeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeExpr::Spec(m) => write!(f, "spec({m})"),
            SchemeExpr::Projective(n) => write!(f, "P({n})"),
            SchemeExpr::Product(a, b) => write!(f, "product({a}, {b})"),
            SchemeExpr::Glue { charts, overlaps } => {
                write!(f, "glue {{")?;
                for c in charts {
                    write!(f, " chart {} = spec({});", c.name, c.monoid)?;
                }
                for o in overlaps {
                    let maps: Vec<String> = o.maps.iter().map(|(c, m)| format!("{c}: {}", format_maplist(m))).collect();
                    write!(f, " overlap {} {} = spec({}) via {};", o.left, o.right, o.monoid, maps.join(", "))?;
                }
                write!(f, " }}")
            }
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Monoid(m) => {
                write!(f, "monoid {} {{ gens: {};", m.name, m.gens.join(" "))?;
                if !m.inv.is_empty() {
                    write!(f, " inv: {};", m.inv.join(" "))?;
                }
                for (l, r) in &m.rels {
                    write!(f, " rel: {} = {};", format_word(l), format_word(r))?;
                }
                write!(f, " }}")
            }
            Item::Scheme(s) => write!(f, "scheme {} = {};", s.name, s.expr),
            Item::Compute(t) => write!(f, "compute {t};"),
        }
    }
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}
