//! Endomorphisms of free groups given by generator images.
//!
//! Text format: `endo rank=<n>; e<i> -> <word>; ...` with an optional
//! `inv: e<i> -> <word>; ...` block. Generators without an image map to
//! themselves.

use std::fmt;

use crate::error::Error;
use crate::word::Word;

#[derive(Clone, PartialEq, Eq)]
pub struct Endo {
    rank: usize,
    images: Vec<Word>,
    inverse_images: Option<Vec<Word>>,
}

impl Endo {
    pub fn identity(rank: usize) -> Endo {
        let images: Vec<Word> = (1..=rank as u32).map(Word::generator).collect();
        Endo { rank, inverse_images: Some(images.clone()), images }
    }

    /// Endomorphism with `e_i -> images[i-1]`. Images may only use `e1..e_rank`.
    pub fn new(images: Vec<Word>) -> Result<Endo, Error> {
        let rank = images.len();
        check_images(rank, &images)?;
        Ok(Endo { rank, images, inverse_images: None })
    }

    /// Automorphism with explicit inverse images, checked in both directions.
    pub fn with_inverse(images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Endo, Error> {
        let rank = images.len();
        if inverse_images.len() != rank {
            return Err(Error::RankMismatch { left: rank, right: inverse_images.len() });
        }
        check_images(rank, &images)?;
        check_images(rank, &inverse_images)?;
        for i in 1..=rank as u32 {
            let g = Word::generator(i);
            let there_and_back = g.substitute(&inverse_images)?.substitute(&images)?;
            let back_and_there = g.substitute(&images)?.substitute(&inverse_images)?;
            if there_and_back != g || back_and_there != g {
                return Err(Error::BadInverse { generator: i });
            }
        }
        Ok(Endo { rank, images, inverse_images: Some(inverse_images) })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, generator: u32) -> Option<&Word> {
        self.images.get(generator as usize - 1)
    }

    pub fn inverse_images(&self) -> Option<&[Word]> {
        self.inverse_images.as_deref()
    }

    pub fn inverse(&self) -> Option<Endo> {
        self.inverse_images
            .as_ref()
            .map(|inv| Endo { rank: self.rank, images: inv.clone(), inverse_images: Some(self.images.clone()) })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| *w == Word::generator(i as u32 + 1))
    }

    /// Homomorphic image of `w`.
    pub fn apply(&self, w: &Word) -> Result<Word, Error> {
        w.substitute(&self.images)
    }

    /// `self ∘ other`, i.e. `x -> self(other(x))`.
    pub fn compose(&self, other: &Endo) -> Result<Endo, Error> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect::<Result<Vec<_>, _>>()?;
        let inverse_images = match (&self.inverse_images, &other.inverse_images) {
            (Some(fi), Some(gi)) => {
                Some(fi.iter().map(|w| w.substitute(gi)).collect::<Result<Vec<_>, _>>()?)
            }
            _ => None,
        };
        Ok(Endo { rank: self.rank, images, inverse_images })
    }

    /// `self^k` for `k >= 0`, or a power of the inverse for `k < 0`.
    pub fn power(&self, k: i64) -> Result<Endo, Error> {
        let base = if k < 0 {
            self.inverse().ok_or_else(|| Error::InvalidArgument("negative power of a non-invertible endo".into()))?
        } else {
            self.clone()
        };
        let mut acc = Endo::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Same images on a larger alphabet; new generators are fixed.
    pub fn widen(&self, rank: usize) -> Endo {
        assert!(rank >= self.rank);
        let mut images = self.images.clone();
        images.extend((self.rank as u32 + 1..=rank as u32).map(Word::generator));
        let inverse_images = self.inverse_images.as_ref().map(|inv| {
            let mut inv = inv.clone();
            inv.extend((self.rank as u32 + 1..=rank as u32).map(Word::generator));
            inv
        });
        Endo { rank, images, inverse_images }
    }

    /// Exponent-sum matrix; column `j` is the abelianized image of `e_{j+1}`.
    pub fn abelianization_matrix(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.rank]; self.rank];
        for (j, img) in self.images.iter().enumerate() {
            let v = img.abelianize(self.rank).expect("images checked on construction");
            for (i, x) in v.exponents().iter().enumerate() {
                m[i][j] = *x;
            }
        }
        m
    }

    pub fn parse(text: &str) -> Result<Endo, Error> {
        let text = text.trim();
        let body = text
            .strip_prefix("endo")
            .ok_or_else(|| Error::InvalidArgument("endo description must start with 'endo'".into()))?;
        let mut rank: Option<usize> = None;
        let mut images: Vec<(u32, Word)> = Vec::new();
        let mut inverse: Vec<(u32, Word)> = Vec::new();
        let mut in_inverse = false;
        for raw in body.split(';') {
            let mut item = raw.trim();
            if item.is_empty() {
                continue;
            }
            if let Some(rest) = item.strip_prefix("inv:") {
                in_inverse = true;
                item = rest.trim();
                if item.is_empty() {
                    continue;
                }
            }
            if let Some(r) = item.strip_prefix("rank=") {
                let r: usize =
                    r.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad rank '{r}'")))?;
                rank = Some(r);
                continue;
            }
            let (lhs, rhs) = item
                .split_once("->")
                .ok_or_else(|| Error::InvalidArgument(format!("expected 'e<i> -> <word>', got '{item}'")))?;
            let lhs = Word::parse(lhs)?;
            if lhs.len() != 1 || lhs.letters()[0].is_inverse() {
                return Err(Error::InvalidArgument(format!("left side must be a generator, got '{lhs}'")));
            }
            let entry = (lhs.letters()[0].index(), Word::parse(rhs)?);
            if in_inverse {
                inverse.push(entry);
            } else {
                images.push(entry);
            }
        }
        let rank = rank.ok_or_else(|| Error::InvalidArgument("missing rank=<n>".into()))?;
        let fill = |pairs: &[(u32, Word)]| -> Result<Vec<Word>, Error> {
            let mut out: Vec<Word> = (1..=rank as u32).map(Word::generator).collect();
            for (g, w) in pairs {
                if *g as usize > rank {
                    return Err(Error::RankTooSmall { needed: *g as usize, rank });
                }
                out[*g as usize - 1] = w.clone();
            }
            Ok(out)
        };
        let images = fill(&images)?;
        if inverse.is_empty() {
            Endo::new(images)
        } else {
            Endo::with_inverse(images, fill(&inverse)?)
        }
    }
}

fn check_images(rank: usize, images: &[Word]) -> Result<(), Error> {
    for w in images {
        let m = w.max_generator() as usize;
        if m > rank {
            return Err(Error::RankTooSmall { needed: m, rank });
        }
    }
    Ok(())
}

impl fmt::Display for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "endo rank={}", self.rank)?;
        for (i, w) in self.images.iter().enumerate() {
            write!(f, "; e{} -> {}", i + 1, w)?;
        }
        if let Some(inv) = &self.inverse_images {
            write!(f, "; inv:")?;
            for (i, w) in inv.iter().enumerate() {
                if i > 0 {
                    write!(f, ";")?;
                }
                write!(f, " e{} -> {}", i + 1, w)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn apply_examples() {
        let id = Endo::identity(3);
        assert_eq!(id.apply(&w("e1 e3^-2 e2")).unwrap(), w("e1 e3^-2 e2"));
        let twist = Endo::new(vec![w("e1 e2"), w("e2")]).unwrap();
        assert_eq!(twist.apply(&w("[e1,e2]")).unwrap(), w("[e1,e2]"));
        assert_eq!(twist.apply(&w("e1")).unwrap(), w("e1 e2"));
        assert_eq!(twist.apply(&w("e3")), Err(Error::MissingImage { generator: 3 }));
    }

    #[test]
    fn bad_inverse_rejected() {
        let r = Endo::with_inverse(vec![w("e1 e2"), w("e2")], vec![w("e1 e2"), w("e2")]);
        assert_eq!(r, Err(Error::BadInverse { generator: 1 }));
    }

    #[test]
    fn text_round_trip() {
        let f = Endo::with_inverse(vec![w("e1 e2"), w("e2")], vec![w("e1 e2^-1"), w("e2")]).unwrap();
        let g = Endo::parse(&f.to_string()).unwrap();
        assert_eq!(f, g);
        let h = Endo::parse("endo rank=3; e2 -> e2 e1").unwrap();
        assert_eq!(h.images(), &[w("e1"), w("e2 e1"), w("e3")]);
        assert!(h.inverse_images().is_none());
        assert!(Endo::parse("endo; e1 -> e2").is_err());
        assert!(Endo::parse("endo rank=1; e2 -> e1").is_err());
    }

    #[test]
    fn power_and_inverse() {
        let f = Endo::with_inverse(vec![w("e1 e2"), w("e2")], vec![w("e1 e2^-1"), w("e2")]).unwrap();
        assert_eq!(f.power(3).unwrap().images()[0], w("e1 e2^3"));
        assert_eq!(f.power(-2).unwrap().images()[0], w("e1 e2^-2"));
        assert!(f.compose(&f.inverse().unwrap()).unwrap().is_identity());
    }
}
