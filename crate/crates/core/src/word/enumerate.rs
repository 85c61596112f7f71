//! Enumeration of reduced words. Only non-cancelling letter sequences are
//! generated, so the length-`L` layer has `2n(2n-1)^(L-1)` entries.

use super::{Letter, Word};

/// Number of reduced words of exactly `len` letters over `rank` generators.
pub fn reduced_word_count(rank: usize, len: usize) -> u64 {
    if len == 0 {
        return 1;
    }
    let r = rank as u64;
    2 * r * (2 * r - 1).pow(len as u32 - 1)
}

/// Shortlex iterator over all reduced words of length `<= max_len`, starting
/// with the identity.
pub struct ReducedWords {
    rank: usize,
    max_len: usize,
    keys: Vec<usize>,
    done: bool,
}

impl ReducedWords {
    pub fn new(rank: usize, max_len: usize) -> Self {
        ReducedWords { rank, max_len, keys: Vec::new(), done: rank == 0 && max_len > 0 }
    }

    fn min_key_after(prev: Option<usize>) -> usize {
        match prev {
            Some(1) => 1,
            _ => 0,
        }
    }

    /// Advances `keys` to the next word of the same length; false on overflow.
    fn bump(&mut self) -> bool {
        let width = 2 * self.rank;
        let mut i = self.keys.len();
        while i > 0 {
            i -= 1;
            let prev = if i == 0 { None } else { Some(self.keys[i - 1]) };
            let mut k = self.keys[i] + 1;
            if prev.map(|p| p ^ 1) == Some(k) {
                k += 1;
            }
            if k < width {
                self.keys[i] = k;
                for j in i + 1..self.keys.len() {
                    self.keys[j] = Self::min_key_after(Some(self.keys[j - 1]));
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let out = Word::from_reduced_unchecked(self.keys.iter().map(|&k| Letter::from_key(k)).collect());
        if !self.bump() {
            if self.keys.len() >= self.max_len || self.rank == 0 {
                self.done = true;
            } else {
                let n = self.keys.len() + 1;
                self.keys.clear();
                for j in 0..n {
                    let prev = if j == 0 { None } else { Some(self.keys[j - 1]) };
                    self.keys.push(Self::min_key_after(prev));
                }
            }
        }
        Some(out)
    }
}

/// Depth-first walk over the non-empty reduced words of length `<= max_len`.
///
/// `visit` receives each prefix and returns whether to descend below it, so
/// callers can cut subtrees they have shown to be irrelevant.
pub fn for_each_reduced_word<F>(rank: usize, max_len: usize, mut visit: F)
where
    F: FnMut(&[Letter]) -> bool,
{
    let mut stack: Vec<Letter> = Vec::with_capacity(max_len);
    fn rec<F: FnMut(&[Letter]) -> bool>(rank: usize, max_len: usize, stack: &mut Vec<Letter>, visit: &mut F) {
        if stack.len() == max_len {
            return;
        }
        for key in 0..2 * rank {
            let l = Letter::from_key(key);
            if stack.last() == Some(&l.inverse()) {
                continue;
            }
            stack.push(l);
            if visit(stack) {
                rec(rank, max_len, stack, visit);
            }
            stack.pop();
        }
    }
    rec(rank, max_len, &mut stack, &mut visit);
}
