//! Seeded inputs shared by the benchmarks.

use ampleforge::word::Letter;
use ampleforge::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform reduced word of exactly `len` letters over `e1..e_rank`.
pub fn random_word(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::from_key(rng.gen_range(0..2 * rank));
        if letters.last().map_or(true, |p| *p != l.inverse()) {
            letters.push(l);
        }
    }
    Word::from_letters(letters)
}

pub fn random_words(seed: u64, count: usize, rank: usize, len: usize) -> Vec<Word> {
    let mut r = rng(seed);
    (0..count).map(|_| random_word(&mut r, rank, len)).collect()
}
