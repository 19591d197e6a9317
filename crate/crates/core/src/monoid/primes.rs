use std::fmt;

use super::{Presentation, Word};

/// Prime ideal given by its `{0,1}`-character: `chi[i] == false` means
/// generator `i` lies in the ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime {
    chi: Vec<bool>,
}

impl Prime {
    pub fn from_character(chi: Vec<bool>) -> Self {
        Prime { chi }
    }

    /// The empty ideal.
    pub fn empty(ngens: usize) -> Self {
        Prime { chi: vec![true; ngens] }
    }

    pub fn character(&self) -> &[bool] {
        &self.chi
    }

    pub fn contains_gen(&self, i: usize) -> bool {
        !self.chi[i]
    }

    /// An element lies in the prime iff some generator in its support does.
    pub fn contains(&self, w: &[i64]) -> bool {
        w.iter().zip(&self.chi).any(|(&e, &c)| e != 0 && !c)
    }

    /// Generators in the ideal.
    pub fn generators(&self) -> Vec<usize> {
        (0..self.chi.len()).filter(|&i| !self.chi[i]).collect()
    }

    /// Generators of the face (complement).
    pub fn face(&self) -> Vec<bool> {
        self.chi.clone()
    }

    pub fn height_hint(&self) -> usize {
        self.chi.iter().filter(|c| !**c).count()
    }

    /// Inclusion of ideals.
    pub fn is_subset(&self, other: &Prime) -> bool {
        self.chi.iter().zip(&other.chi).all(|(a, b)| *a || !*b)
    }

    /// Union of two primes (character-wise minimum).
    pub fn union(&self, other: &Prime) -> Prime {
        Prime { chi: self.chi.iter().zip(&other.chi).map(|(a, b)| *a && *b).collect() }
    }

    pub fn display<'a>(&'a self, pres: &'a Presentation) -> impl fmt::Display + 'a {
        PrimeDisplay { prime: self, pres }
    }
}

struct PrimeDisplay<'a> {
    prime: &'a Prime,
    pres: &'a Presentation,
}

impl fmt::Display for PrimeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<&str> = self.prime.generators().into_iter().map(|i| self.pres.name(i)).collect();
        if gens.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "({})", gens.join(","))
        }
    }
}

fn side_value(chi: &[bool], w: &Word) -> bool {
    w.iter().zip(chi).all(|(&e, &c)| e == 0 || c)
}

impl Presentation {
    /// Whether a character respects every relation.
    pub fn is_character(&self, chi: &[bool]) -> bool {
        (0..self.ngens()).all(|i| chi[i] || !self.is_inverted(i))
            && self.relations().iter().all(|r| side_value(chi, &r.lhs) == side_value(chi, &r.rhs))
    }

    /// All prime ideals, sorted by size and then by generator set.
    pub fn primes(&self) -> Vec<Prime> {
        let n = self.ngens();
        let free: Vec<usize> = (0..n).filter(|&i| !self.is_inverted(i)).collect();
        assert!(free.len() < 31, "too many generators to enumerate primes");
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << free.len()) {
            let mut chi = vec![true; n];
            for (k, &g) in free.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    chi[g] = false;
                }
            }
            if self.is_character(&chi) {
                out.push(Prime { chi });
            }
        }
        out.sort_by(|a, b| a.height_hint().cmp(&b.height_hint()).then_with(|| a.generators().cmp(&b.generators())));
        out
    }

    /// Ideal of all non-invertible elements (the closed point).
    pub fn maximal_prime(&self) -> Prime {
        self.primes().pop().expect("the empty prime always exists")
    }
}
