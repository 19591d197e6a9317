use std::collections::BTreeSet;

use super::rewrite::{Mono, RewriteSystem};
use super::{MonoidError, Presentation, Word};

/// Default number of critical pairs a completion may examine.
pub const DEFAULT_EFFORT: usize = 20_000;

/// Element in normal form, stored over the rewriting variables: the
/// generators followed by one formal inverse per inverted generator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub Mono);

/// A presentation together with its completed rewriting system.
#[derive(Clone, Debug)]
pub struct Monoid {
    pres: Presentation,
    system: RewriteSystem,
    /// For each rewriting variable past the generators, the generator it inverts.
    inverse_of: Vec<usize>,
}

impl Monoid {
    pub fn new(pres: &Presentation, effort: usize) -> Result<Self, MonoidError> {
        let n = pres.ngens();
        let inverse_of = pres.inverted_indices();
        let nvars = n + inverse_of.len();
        let to_ext = |w: &Word| ext_word(n, &inverse_of, w);
        let mut rels: Vec<(Mono, Mono)> = pres.relations().iter().map(|r| (to_ext(&r.lhs), to_ext(&r.rhs))).collect();
        for (k, &g) in inverse_of.iter().enumerate() {
            let mut l = vec![0; nvars];
            l[g] = 1;
            l[n + k] = 1;
            rels.push((l, vec![0; nvars]));
        }
        let system = RewriteSystem::complete(nvars, &rels, effort)?;
        Ok(Monoid { pres: pres.clone(), system, inverse_of })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn nvars(&self) -> usize {
        self.system.nvars()
    }

    /// Names of the rewriting variables (`g_inv` for formal inverses).
    pub fn var_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.pres.names().to_vec();
        names.extend(self.inverse_of.iter().map(|&g| format!("{}_inv", self.pres.name(g))));
        names
    }

    pub fn to_ext(&self, w: &[i64]) -> Mono {
        ext_word(self.pres.ngens(), &self.inverse_of, w)
    }

    /// Collapses formal inverses back into signed exponents.
    pub fn to_word(&self, e: &Element) -> Word {
        let n = self.pres.ngens();
        let mut w = e.0[..n].to_vec();
        for (k, &g) in self.inverse_of.iter().enumerate() {
            w[g] -= e.0[n + k];
        }
        w
    }

    pub fn nf(&self, w: &[i64]) -> Element {
        Element(self.system.reduce(&self.to_ext(w)))
    }

    pub fn nf_mono(&self, m: &[i64]) -> Element {
        Element(self.system.reduce(m))
    }

    pub fn equal(&self, a: &[i64], b: &[i64]) -> bool {
        self.nf(a) == self.nf(b)
    }

    pub fn one(&self) -> Element {
        Element(vec![0; self.nvars()])
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let m: Mono = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        self.nf_mono(&m)
    }

    pub fn pow(&self, a: &Element, k: u32) -> Element {
        let m: Mono = a.0.iter().map(|x| x * k as i64).collect();
        self.nf_mono(&m)
    }

    /// Distinct normal forms of all monomials of total degree at most `degree`
    /// in the rewriting variables, sorted.
    pub fn ball(&self, degree: usize) -> Vec<Element> {
        let mut out = BTreeSet::new();
        for m in monomials(self.nvars(), degree) {
            out.insert(self.nf_mono(&m));
        }
        out.into_iter().collect()
    }

    pub fn format(&self, e: &Element) -> String {
        self.pres.format_word(&self.to_word(e))
    }
}

fn ext_word(n: usize, inverse_of: &[usize], w: &[i64]) -> Mono {
    let mut m = vec![0; n + inverse_of.len()];
    for i in 0..n {
        m[i] = w[i].max(0);
    }
    for (k, &g) in inverse_of.iter().enumerate() {
        m[n + k] = (-w[g]).max(0);
    }
    m
}

/// All exponent vectors with `nvars` entries and total degree at most `degree`.
pub fn monomials(nvars: usize, degree: usize) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; nvars];
    fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Mono>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, degree as i64, &mut cur, &mut out);
    out
}
