use super::{Presentation, Prime, Relation, Word};

/// A localized presentation with the images of the original generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localization {
    pub presentation: Presentation,
    /// `gen_images[i]`: image of original generator `i`, as a word in the new
    /// generators.
    pub gen_images: Vec<Word>,
    /// Original index of each new generator.
    pub origin: Vec<usize>,
}

impl Localization {
    /// Image of a word over the original generators.
    pub fn map_word(&self, w: &[i64]) -> Word {
        let mut out = vec![0; self.presentation.ngens()];
        for (i, &e) in w.iter().enumerate() {
            if e != 0 {
                for (o, x) in out.iter_mut().zip(&self.gen_images[i]) {
                    *o += e * x;
                }
            }
        }
        out
    }
}

impl Presentation {
    /// Localization at a prime: every generator outside the prime is inverted.
    pub fn localize(&self, at: &Prime) -> Localization {
        self.invert(&at.face())
    }

    /// Inverts the flagged generators and simplifies: trivial relations are
    /// dropped, and an inverted generator occurring with net exponent ±1 in a
    /// relation all of whose generators are inverted is solved for and
    /// eliminated (this collapses invertible idempotents to 1).
    pub fn invert(&self, which: &[bool]) -> Localization {
        let n = self.ngens();
        let inverted: Vec<bool> = (0..n).map(|i| self.is_inverted(i) || which[i]).collect();
        // net relations over the original generators
        let mut rels: Vec<(Word, Word)> = self.relations().iter().map(|r| (r.lhs.clone(), r.rhs.clone())).collect();
        let mut alive = vec![true; n];
        let mut images: Vec<Word> = (0..n).map(|i| self.unit(i)).collect();
        loop {
            canonicalize(&mut rels, &inverted);
            rels.retain(|(l, r)| l != r);
            let mut found = None;
            'search: for (k, (l, r)) in rels.iter().enumerate() {
                let all_inv = (0..n).all(|i| (l[i] == 0 && r[i] == 0) || inverted[i]);
                if !all_inv {
                    continue;
                }
                for g in (0..n).rev() {
                    if l[g] - r[g] == 1 || r[g] - l[g] == 1 {
                        found = Some((k, g));
                        break 'search;
                    }
                }
            }
            let Some((k, g)) = found else { break };
            let (l, r) = rels.remove(k);
            // g = value, with value over the other generators
            let sign = l[g] - r[g];
            let value: Word = (0..n).map(|i| if i == g { 0 } else { -(l[i] - r[i]) * sign }).collect();
            let subst = |w: &mut Word| {
                let e = w[g];
                if e != 0 {
                    w[g] = 0;
                    for i in 0..n {
                        w[i] += e * value[i];
                    }
                }
            };
            for (a, b) in rels.iter_mut() {
                subst(a);
                subst(b);
            }
            for im in images.iter_mut() {
                subst(im);
            }
            alive[g] = false;
        }
        let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        let restrict = |w: &Word| -> Word { kept.iter().map(|&i| w[i]).collect() };
        let names = kept.iter().map(|&i| self.name(i).to_string()).collect();
        let inv = kept.iter().map(|&i| inverted[i]).collect();
        let relations = rels.iter().map(|(l, r)| Relation { lhs: restrict(l), rhs: restrict(r) }).collect();
        let presentation = Presentation::new(names, inv, relations).expect("localized presentation is valid");
        let gen_images = images.iter().map(restrict).collect();
        Localization { presentation, gen_images, origin: kept }
    }
}

/// Moves the net exponent of each inverted generator to one side.
fn canonicalize(rels: &mut [(Word, Word)], inverted: &[bool]) {
    for (l, r) in rels.iter_mut() {
        for i in 0..inverted.len() {
            if inverted[i] {
                let d = l[i] - r[i];
                l[i] = d.max(0);
                r[i] = (-d).max(0);
            }
        }
    }
}
