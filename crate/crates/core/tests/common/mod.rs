//! Slow, obviously-correct reference implementations used as oracles.
#![allow(dead_code)]

use ampleforge::word::{Letter, ReducedWords};
use ampleforge::Word;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

pub fn ball(rank: usize, max_len: usize) -> Vec<Word> {
    ReducedWords::new(rank, max_len).collect()
}

pub fn random_word(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::from_key(rng.gen_range(0..2 * rank));
        if letters.last() != Some(&l.inverse()) {
            letters.push(l);
        }
    }
    Word::from_letters(letters)
}

/// Root by peeling matching end letters, then trying every period of the core.
pub fn naive_root(x: &Word) -> (Word, u64) {
    let mut s: Vec<Letter> = x.letters().to_vec();
    let mut peeled = Vec::new();
    while s.len() >= 2 && s[0] == s[s.len() - 1].inverse() {
        peeled.push(s.remove(0));
        s.pop();
    }
    let n = s.len();
    for d in 1..=n {
        if n % d == 0 && (0..n).all(|k| s[k] == s[k % d]) {
            let c = Word::from_letters(peeled.iter().copied());
            let root = c.multiply(&Word::from_letters(s[..d].iter().copied())).multiply(&c.inverse());
            return (root, (n / d) as u64);
        }
    }
    panic!("identity has no root")
}

pub fn commute(a: &Word, b: &Word) -> bool {
    a.multiply(b) == b.multiply(a)
}

/// The root generating the centralizer, up to orientation.
pub fn naive_centralizer(b: &Word) -> Word {
    naive_root(b).0
}

/// `E2m` with `|i| <= bound` for the coset exponent.
pub fn brute_left_coset(p1: (&Word, &Word), p2: (&Word, &Word), m: u32, bound: i64) -> bool {
    let ((a1, b1), (a2, b2)) = (p1, p2);
    if b1.is_identity() && b2.is_identity() {
        return true;
    }
    if b1.is_identity() || b2.is_identity() || !commute(b1, b2) {
        return false;
    }
    let step = naive_centralizer(b1).pow(m.into());
    let diff = a1.inverse().multiply(a2);
    (-bound..=bound).any(|i| step.pow(i) == diff)
}

/// `E4mn` with `|i|, |j| <= bound`.
pub fn brute_double_coset(t1: (&Word, &Word, &Word), t2: (&Word, &Word, &Word), m: u32, n: u32, bound: i64) -> bool {
    let ((a1, b1, c1), (a2, b2, c2)) = (t1, t2);
    if a1.is_identity() && a2.is_identity() || c1.is_identity() && c2.is_identity() {
        return true;
    }
    if [a1, a2, c1, c2].iter().any(|x| x.is_identity()) || !commute(a1, a2) || !commute(c1, c2) {
        return false;
    }
    let sa = naive_centralizer(a1).pow(m.into());
    let sc = naive_centralizer(c1).pow(n.into());
    let lefts: Vec<Word> = (-bound..=bound).map(|i| sa.pow(i)).collect();
    let rights: Vec<Word> = (-bound..=bound).map(|j| sc.pow(j)).collect();
    lefts.iter().any(|g| rights.iter().any(|e| g.multiply(b1).multiply(e) == *b2))
}
