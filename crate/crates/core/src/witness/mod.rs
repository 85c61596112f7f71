//! Witness sequences `a_0, a_1, ..` and bounded checks of the word-level
//! facts behind them.
//!
//! Every family starts at `a_0 = e3` and multiplies by one block per step:
//! `k` commutators of fresh generator pairs (orientable) or `k` squares of
//! fresh generators (non-orientable). The main family is the orientable one
//! with `k = 1`.

mod checks;

pub use checks::{
    check_appendix_coset_fix, check_appendix_conjugation, check_d1_obstruction, check_d2_factorization,
    check_d3_intersection, check_d3_sampled, check_d4_real_intersection, check_orbit_escape,
    check_root_closed, check_root_closed_a, check_root_closed_b, run_all, run_all_with, Bounds, CheckReport,
    Verdict,
};

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::Error;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Main,
    OrientableK(usize),
    NonOrientable(usize),
}

impl Family {
    fn validate(self) -> Result<(), Error> {
        match self {
            Family::OrientableK(0) => Err(Error::InvalidArgument("orientable family needs k >= 1".into())),
            Family::NonOrientable(k) if k < 3 => {
                Err(Error::InvalidArgument(format!("non-orientable family needs k >= 3, got {k}")))
            }
            _ => Ok(()),
        }
    }

    /// Generators introduced by step `i`, i.e. those in `a_i^-1 a_{i+1}`.
    pub fn block(self, i: usize) -> RangeInclusive<u32> {
        let (start, width) = match self {
            Family::Main => (2 * i + 4, 2),
            Family::OrientableK(k) => (2 * k * i + 4, 2 * k),
            Family::NonOrientable(k) => (k * i + 4, k),
        };
        start as u32..=(start + width - 1) as u32
    }

    /// `a_i^-1 a_{i+1}`.
    pub fn increment(self, i: usize) -> Word {
        let gens: Vec<u32> = self.block(i).collect();
        let mut out = Word::identity();
        match self {
            Family::NonOrientable(_) => {
                for g in gens {
                    out.mul_assign(&Word::generator(g).pow(2));
                }
            }
            _ => {
                for pair in gens.chunks(2) {
                    out.mul_assign(&Word::commutator(&Word::generator(pair[0]), &Word::generator(pair[1])));
                }
            }
        }
        out
    }

    /// Rank of the smallest free group containing `a_0..a_n`.
    pub fn rank_after(self, n: usize) -> usize {
        if n == 0 {
            3
        } else {
            *self.block(n - 1).end() as usize
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessSequence {
    family: Family,
    terms: Vec<Word>,
    ambient_rank: usize,
}

/// `a_0..a_n` of `family`.
pub fn witness_sequence(family: Family, n: usize) -> Result<WitnessSequence, Error> {
    family.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument("witness sequences need n >= 1".into()));
    }
    let mut terms = vec![Word::generator(3)];
    for i in 0..n {
        let next = terms[i].multiply(&family.increment(i));
        terms.push(next);
    }
    Ok(WitnessSequence { family, terms, ambient_rank: family.rank_after(n) })
}

impl WitnessSequence {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn terms(&self) -> &[Word] {
        &self.terms
    }

    pub fn term(&self, i: usize) -> Result<&Word, Error> {
        self.terms
            .get(i)
            .ok_or_else(|| Error::InvalidArgument(format!("sequence stops at a_{}, no a_{i}", self.terms.len() - 1)))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Index of the last term.
    pub fn n(&self) -> usize {
        self.terms.len() - 1
    }

    /// A copy with `a_i` replaced; the checks then run against the altered terms.
    pub fn with_term(&self, i: usize, w: Word) -> Result<WitnessSequence, Error> {
        self.term(i)?;
        let mut out = self.clone();
        out.ambient_rank = out.ambient_rank.max(w.max_generator() as usize);
        out.terms[i] = w;
        Ok(out)
    }

    /// Main sequence up to `a_n` (`n >= 2`) with `a_2 = a_1 [e5, e7]`.
    pub fn mutant_main(n: usize) -> Result<WitnessSequence, Error> {
        let seq = witness_sequence(Family::Main, n.max(2))?;
        let bad = seq.terms[1].multiply(&Word::commutator(&Word::generator(5), &Word::generator(7)));
        seq.with_term(2, bad)
    }

    /// `<e1, e2, e3, d_0, .., d_{i-1}>` with `d_j = a_j^-1 a_{j+1}` as the
    /// family defines it; `extra` is appended.
    fn displayed(&self, i: usize, extra: Option<Word>) -> Vec<Word> {
        let mut gens: Vec<Word> = (1..=3).map(Word::generator).collect();
        gens.extend((0..i).map(|j| self.family.increment(j)));
        gens.extend(extra);
        gens
    }

    /// `<e1, e2, a_0, .., a_i>`, read off the terms.
    fn generated(&self, idx: impl IntoIterator<Item = usize>) -> Result<Vec<Word>, Error> {
        let mut gens = vec![Word::generator(1), Word::generator(2)];
        for j in idx {
            gens.push(self.term(j)?.clone());
        }
        Ok(gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{Tower, TowerVariant};
    use crate::stallings::SubgroupAutomaton;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn main_family() {
        let s = witness_sequence(Family::Main, 1).unwrap();
        assert_eq!(s.terms(), &[w("e3"), w("e3 [e4,e5]")]);
        assert_eq!(s.ambient_rank(), 5);
        let s = witness_sequence(Family::Main, 2).unwrap();
        assert_eq!(s.terms()[2], w("e3 [e4,e5] [e6,e7]"));
        assert_eq!(s.ambient_rank(), 7);
        for i in 0..2 {
            let step = Word::commutator(&Word::generator(2 * i as u32 + 4), &Word::generator(2 * i as u32 + 5));
            assert_eq!(s.terms()[i + 1], s.terms()[i].multiply(&step));
        }
        assert_eq!(witness_sequence(Family::OrientableK(1), 4).unwrap().terms(), witness_sequence(Family::Main, 4).unwrap().terms());
    }

    #[test]
    fn other_families() {
        let s = witness_sequence(Family::OrientableK(2), 2).unwrap();
        assert_eq!(s.terms()[1], w("e3 [e4,e5] [e6,e7]"));
        assert_eq!(s.terms()[2], w("e3 [e4,e5] [e6,e7] [e8,e9] [e10,e11]"));
        assert_eq!(s.ambient_rank(), 11);
        let s = witness_sequence(Family::NonOrientable(3), 2).unwrap();
        assert_eq!(s.terms()[1], w("e3 e4^2 e5^2 e6^2"));
        assert_eq!(s.terms()[2], w("e3 e4^2 e5^2 e6^2 e7^2 e8^2 e9^2"));
        assert_eq!(s.ambient_rank(), 9);
        assert!(witness_sequence(Family::NonOrientable(2), 1).is_err());
        assert!(witness_sequence(Family::OrientableK(0), 1).is_err());
        assert!(witness_sequence(Family::Main, 0).is_err());
    }

    #[test]
    fn displayed_subgroups_match_towers() {
        let s = witness_sequence(Family::Main, 4).unwrap();
        for i in 0..3 {
            let fig1 = Tower::build(i, TowerVariant::Fig1);
            let a = SubgroupAutomaton::build_in(&s.displayed(i + 1, None), fig1.ambient_rank());
            assert!(a.same_subgroup(fig1.base()), "i={i}");
            let fig2 = Tower::build(i, TowerVariant::Fig2);
            let joined = s.family.increment(i).multiply(&s.family.increment(i + 1));
            let b = SubgroupAutomaton::build_in(&s.displayed(i, Some(joined)), fig2.ambient_rank());
            assert!(b.same_subgroup(fig2.base()), "i={i}");
        }
    }

    #[test]
    fn mutant_differs_only_at_two() {
        let good = witness_sequence(Family::Main, 3).unwrap();
        let bad = WitnessSequence::mutant_main(3).unwrap();
        assert_eq!(bad.terms()[2], w("e3 [e4,e5] [e5,e7]"));
        for i in [0, 1, 3] {
            assert_eq!(good.terms()[i], bad.terms()[i]);
        }
    }
}
