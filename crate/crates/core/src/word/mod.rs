//! Reduced words in free groups of arbitrary finite rank.
//!
//! A [`Word`] is always freely reduced. Generators are numbered from 1
//! (`e1, e2, ...`); the rank of the ambient free group is never stored in a
//! word and is passed explicitly to operations that need it.

mod enumerate;
mod parse;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use enumerate::{for_each_reduced_word, reduced_word_count, ReducedWords};
pub use parse::ParseError;

/// Index of a basis element `e_i` of the ambient free group, `i >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorId(u32);

impl GeneratorId {
    pub fn new(index: u32) -> Result<Self, Error> {
        if index == 0 {
            return Err(Error::ZeroGenerator);
        }
        Ok(GeneratorId(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

/// A generator or its inverse, stored as a signed generator index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter(i32);

impl Letter {
    /// `e_index` (positive) or `e_index^-1` (negative). Panics on 0.
    pub fn new(signed: i32) -> Letter {
        assert!(signed != 0, "generator index 0 is not a letter");
        Letter(signed)
    }

    pub fn pos(index: u32) -> Letter {
        Letter::new(index as i32)
    }

    pub fn neg(index: u32) -> Letter {
        Letter::new(-(index as i32))
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn generator(self) -> GeneratorId {
        GeneratorId(self.0.unsigned_abs())
    }

    pub fn index(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Dense position of the letter in the order `e1 < e1^-1 < e2 < e2^-1 < ...`.
    pub fn key(self) -> usize {
        2 * (self.index() as usize - 1) + usize::from(self.is_inverse())
    }

    pub fn from_key(key: usize) -> Letter {
        let index = (key / 2 + 1) as i32;
        if key % 2 == 0 {
            Letter(index)
        } else {
            Letter(-index)
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "e{}^-1", self.index())
        } else {
            write!(f, "e{}", self.index())
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word {
    letters: Vec<Letter>,
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Word, ParseError> {
        Word::parse(&s)
    }
}

/// Exponent-sum vector of a word in `Z^rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianVector {
    exponents: Vec<i64>,
}

impl AbelianVector {
    pub fn zero(rank: usize) -> Self {
        AbelianVector { exponents: vec![0; rank] }
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.iter().all(|&x| x == 0)
    }

    /// Componentwise sum. Panics if the ranks differ.
    pub fn add(&self, other: &AbelianVector) -> AbelianVector {
        assert_eq!(self.rank(), other.rank());
        AbelianVector {
            exponents: self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Word {
    pub fn identity() -> Word {
        Word { letters: Vec::new() }
    }

    /// The word `e_index`.
    pub fn generator(index: u32) -> Word {
        Word { letters: vec![Letter::pos(index)] }
    }

    /// Freely reduces an arbitrary letter sequence with a single stack pass.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word { letters: out }
    }

    /// Builds a word from signed generator indices, e.g. `[1, 2, -1]` for `e1 e2 e1^-1`.
    pub fn from_signed(signed: &[i32]) -> Word {
        Word::from_letters(signed.iter().map(|&s| Letter::new(s)))
    }

    /// Builds a word from letters already known to be reduced.
    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        Word { letters }
    }

    pub fn parse(text: &str) -> Result<Word, ParseError> {
        parse::parse_word(text)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Largest generator index occurring in the word (0 for the identity).
    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        out.reserve(other.len());
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Word { letters: out }
    }

    /// In-place right multiplication.
    pub fn mul_assign(&mut self, other: &Word) {
        for &l in &other.letters {
            push_reduced(&mut self.letters, l);
        }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// `self^exp` for any integer exponent.
    pub fn pow(&self, exp: i64) -> Word {
        if exp == 0 || self.is_identity() {
            return Word::identity();
        }
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let (core, conj) = base.cyclic_reduce();
        let n = exp.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(2 * conj.len() + n * core.len());
        letters.extend_from_slice(&conj.letters);
        for _ in 0..n {
            letters.extend_from_slice(&core.letters);
        }
        letters.extend(conj.letters.iter().rev().map(|l| l.inverse()));
        Word::from_reduced_unchecked(letters)
    }

    /// `g^-1 self g`; the toolkit's single conjugation convention.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.inverse().multiply(self).multiply(g)
    }

    /// Commutator `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.multiply(b).multiply(&a.inverse()).multiply(&b.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self = conjugator · core · conjugator^-1` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        let core = Word { letters: self.letters[k..n - k].to_vec() };
        let conj = Word { letters: self.letters[..k].to_vec() };
        (core, conj)
    }

    /// Length of the cyclically reduced core.
    pub fn cyclic_length(&self) -> usize {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        n - 2 * k
    }

    /// The unique non-power `root` and `exponent >= 1` with `self = root^exponent`.
    ///
    /// Uses the smallest period of the cyclic core (failure function), then
    /// conjugates back.
    pub fn primitive_root(&self) -> Result<(Word, u64), Error> {
        if self.is_identity() {
            return Err(Error::IdentityHasNoRoot);
        }
        let (core, conj) = self.cyclic_reduce();
        let period = smallest_period(&core.letters);
        let n = core.len();
        if n % period != 0 {
            return Ok((self.clone(), 1));
        }
        let root_core = Word::from_reduced_unchecked(core.letters[..period].to_vec());
        let root = conj.multiply(&root_core).multiply(&conj.inverse());
        Ok((root, (n / period) as u64))
    }

    /// Generator of the (cyclic) centralizer of a non-trivial element.
    pub fn centralizer_generator(&self) -> Result<Word, Error> {
        self.primitive_root().map(|(r, _)| r)
    }

    /// Root oriented canonically: the smaller of `root` and `root^-1` in word order.
    pub fn oriented_root(&self) -> Result<Word, Error> {
        let root = self.centralizer_generator()?;
        let inv = root.inverse();
        Ok(if inv < root { inv } else { root })
    }

    /// Returns `t` with `self = b^t`, if it exists. `b` must be non-trivial.
    pub fn power_exponent_of(&self, b: &Word) -> Result<Option<i64>, Error> {
        let (root, e) = b.primitive_root()?;
        let s = match exponent_over_root(self, &root) {
            Some(s) => s,
            None => return Ok(None),
        };
        let e = e as i64;
        Ok(if s % e == 0 { Some(s / e) } else { None })
    }

    pub fn abelianize(&self, rank: usize) -> Result<AbelianVector, Error> {
        let mut v = AbelianVector::zero(rank);
        for l in &self.letters {
            let i = l.index() as usize;
            if i > rank {
                return Err(Error::RankTooSmall { needed: i, rank });
            }
            v.exponents[i - 1] += if l.is_inverse() { -1 } else { 1 };
        }
        Ok(v)
    }

    /// Cyclic rotation of a cyclically reduced word: letters `k..` then `..k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::identity();
        }
        let k = k % self.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word::from_letters(letters)
    }

    /// Substitutes `images[i-1]` for `e_i`.
    pub fn substitute(&self, images: &[Word]) -> Result<Word, Error> {
        let mut out = Word::identity();
        for &l in &self.letters {
            let img = images
                .get(l.index() as usize - 1)
                .ok_or(Error::MissingImage { generator: l.index() })?;
            if l.is_inverse() {
                for &x in img.letters.iter().rev() {
                    push_reduced(&mut out.letters, x.inverse());
                }
            } else {
                for &x in &img.letters {
                    push_reduced(&mut out.letters, x);
                }
            }
        }
        Ok(out)
    }
}

/// Exponent `s` with `w = root^s`, where `root` is not a proper power.
fn exponent_over_root(w: &Word, root: &Word) -> Option<i64> {
    if w.is_identity() {
        return Some(0);
    }
    let (core, conj) = root.cyclic_reduce();
    let inner = conj.inverse().multiply(w).multiply(&conj);
    if inner.len() % core.len() != 0 {
        return None;
    }
    let s = (inner.len() / core.len()) as i64;
    if inner == core.pow(s) {
        Some(s)
    } else if inner == core.pow(-s) {
        Some(-s)
    } else {
        None
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Smallest `p` such that `s[i] == s[i+p]` for all valid `i` (KMP failure function).
fn smallest_period<T: PartialEq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

/// Index of the lexicographically least rotation (two-pointer minimum expression).
pub(crate) fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        match a.cmp(b) {
            Ordering::Equal => k += 1,
            Ordering::Greater => {
                i += k + 1;
                if i == j {
                    i += 1;
                }
                k = 0;
            }
            Ordering::Less => {
                j += k + 1;
                if i == j {
                    j += 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex: by length, then letterwise with `e1 < e1^-1 < e2 < e2^-1 < ...`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let exp = if l.is_inverse() { -(run as i64) } else { run as i64 };
            if exp == 1 {
                write!(f, "e{}", l.index())?;
            } else {
                write!(f, "e{}^{}", l.index(), exp)?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl std::str::FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}
