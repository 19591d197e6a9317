use std::collections::HashSet;
use std::fmt;

use super::MonoidError;

/// Exponent vector over the generators of a presentation. Entries are
/// non-negative except on inverted generators.
pub type Word = Vec<i64>;

/// One defining relation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

/// Finitely presented commutative monoid with optionally inverted generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    names: Vec<String>,
    inverted: Vec<bool>,
    relations: Vec<Relation>,
}

impl Presentation {
    /// Free commutative monoid on the given generators.
    pub fn free<S: AsRef<str>>(names: &[S]) -> Self {
        let mut seen = HashSet::new();
        assert!(names.iter().all(|n| seen.insert(n.as_ref())), "duplicate generator name");
        Presentation {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            inverted: vec![false; names.len()],
            relations: Vec::new(),
        }
    }

    pub fn trivial() -> Self {
        Presentation { names: Vec::new(), inverted: Vec::new(), relations: Vec::new() }
    }

    /// Validating constructor. Relations are stored canonically: on inverted
    /// generators the common part of both sides is cancelled.
    pub fn new(names: Vec<String>, inverted: Vec<bool>, relations: Vec<Relation>) -> Result<Self, MonoidError> {
        let n = names.len();
        if inverted.len() != n {
            return Err(MonoidError::Invalid("inverted flags do not match generators".into()));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(MonoidError::Invalid(format!("duplicate generator {name}")));
            }
        }
        let mut p = Presentation { names, inverted, relations: Vec::new() };
        for r in relations {
            p.push_relation(r.lhs, r.rhs)?;
        }
        Ok(p)
    }

    /// Marks the named generators as inverted.
    pub fn with_inverted<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self, MonoidError> {
        for s in names {
            let i = self.index_of(s.as_ref()).ok_or_else(|| MonoidError::UnknownGenerator(s.as_ref().to_string()))?;
            self.inverted[i] = true;
        }
        let rels = std::mem::take(&mut self.relations);
        for r in rels {
            self.push_relation(r.lhs, r.rhs)?;
        }
        Ok(self)
    }

    /// Adds the relation `lhs = rhs`, both given as words in generator names.
    pub fn relation(mut self, lhs: &str, rhs: &str) -> Result<Self, MonoidError> {
        let l = self.parse_word(lhs)?;
        let r = self.parse_word(rhs)?;
        self.push_relation(l, r)?;
        Ok(self)
    }

    pub fn push_relation(&mut self, mut lhs: Word, mut rhs: Word) -> Result<(), MonoidError> {
        let n = self.ngens();
        if lhs.len() != n || rhs.len() != n {
            return Err(MonoidError::Invalid("relation has the wrong length".into()));
        }
        for i in 0..n {
            if self.inverted[i] {
                let d = lhs[i] - rhs[i];
                lhs[i] = d.max(0);
                rhs[i] = (-d).max(0);
            } else if lhs[i] < 0 || rhs[i] < 0 {
                return Err(MonoidError::NegativeExponent(self.names[i].clone()));
            }
        }
        self.relations.push(Relation { lhs, rhs });
        Ok(())
    }

    /// Parses `a b^2 c^-1` (juxtaposed generator powers) or `1`.
    pub fn parse_word(&self, s: &str) -> Result<Word, MonoidError> {
        let mut w = vec![0; self.ngens()];
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| MonoidError::Invalid(format!("bad exponent in {tok}")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let i = self.index_of(name).ok_or_else(|| MonoidError::UnknownGenerator(name.to_string()))?;
            w[i] += exp;
        }
        for (i, &e) in w.iter().enumerate() {
            if e < 0 && !self.inverted[i] {
                return Err(MonoidError::NegativeExponent(self.names[i].clone()));
            }
        }
        Ok(w)
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_inverted(&self, i: usize) -> bool {
        self.inverted[i]
    }

    pub fn inverted(&self) -> &[bool] {
        &self.inverted
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Indices of inverted generators, in order.
    pub fn inverted_indices(&self) -> Vec<usize> {
        (0..self.ngens()).filter(|&i| self.inverted[i]).collect()
    }

    /// Every generator is inverted (the monoid is a group).
    pub fn is_group(&self) -> bool {
        self.inverted.iter().all(|&b| b)
    }

    pub fn unit(&self, i: usize) -> Word {
        let mut w = vec![0; self.ngens()];
        w[i] = 1;
        w
    }

    pub fn one(&self) -> Word {
        vec![0; self.ngens()]
    }

    /// Renders a word as sorted generator powers, `1` for the identity.
    pub fn format_word(&self, w: &[i64]) -> String {
        let parts: Vec<String> = w
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{e}", self.names[i]) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }

    /// Direct product: disjoint generators (clashing names of `other` get a
    /// trailing `'`), union of relations.
    pub fn product(&self, other: &Presentation) -> Presentation {
        let mut names = self.names.clone();
        for n in &other.names {
            let mut m = n.clone();
            while names.contains(&m) || self.names.contains(&m) {
                m.push('\'');
            }
            names.push(m);
        }
        let n1 = self.ngens();
        let n2 = other.ngens();
        let mut inverted = self.inverted.clone();
        inverted.extend_from_slice(&other.inverted);
        let pad = |w: &Word, first: bool| -> Word {
            let mut v = vec![0; n1 + n2];
            let off = if first { 0 } else { n1 };
            v[off..off + w.len()].copy_from_slice(w);
            v
        };
        let mut relations: Vec<Relation> =
            self.relations.iter().map(|r| Relation { lhs: pad(&r.lhs, true), rhs: pad(&r.rhs, true) }).collect();
        relations.extend(other.relations.iter().map(|r| Relation { lhs: pad(&r.lhs, false), rhs: pad(&r.rhs, false) }));
        Presentation { names, inverted, relations }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .names
            .iter()
            .zip(&self.inverted)
            .map(|(n, &inv)| if inv { format!("{n}^±") } else { n.clone() })
            .collect();
        write!(f, "<{}", gens.join(", "))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self
                .relations
                .iter()
                .map(|r| format!("{} = {}", self.format_word(&r.lhs), self.format_word(&r.rhs)))
                .collect();
            write!(f, " | {}", rels.join(", "))?;
        }
        write!(f, ">")
    }
}
