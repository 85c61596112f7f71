use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{witness_sequence, Family, WitnessSequence};
use crate::amalgam::{Tower, TowerVariant};
use crate::autos::{anosov_candidate, appendix_fb, extend_over_tower, iterate, orbit_conjugacy, orbit_double_coset, orbit_left_coset};
use crate::endo::Endo;
use crate::error::Error;
use crate::imaginaries::{eq_conjugacy, eq_left_coset};
use crate::stallings::{intersection_agrees_bounded, is_basis, SubgroupAutomaton};
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VerifiedAtBound,
    Refuted,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Value,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

/// Ball radius `l`, largest root exponent `m`, orbit length `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub l: usize,
    pub m: u32,
    pub k: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { l: 6, m: 3, k: 8 }
    }
}

enum Outcome {
    Holds,
    Fails(String),
}

const SURROGATE: &str = "algebraic surrogate";

fn timed(check: &str, params: Value, note: Option<&str>, body: impl FnOnce() -> Result<Outcome, Error>) -> Result<CheckReport, Error> {
    let start = Instant::now();
    let outcome = body()?;
    let (verdict, witness) = match outcome {
        Outcome::Holds => (Verdict::VerifiedAtBound, None),
        Outcome::Fails(w) => (Verdict::Refuted, Some(w)),
    };
    Ok(CheckReport {
        check: check.to_string(),
        params,
        verdict,
        witness,
        elapsed_ms: start.elapsed().as_millis() as u64,
        note: note.map(str::to_string),
    })
}

fn gens(range: std::ops::RangeInclusive<u32>) -> Vec<Word> {
    range.map(Word::generator).collect()
}

/// Refutes with the first term whose generated subgroup differs from the
/// displayed one.
fn same_as_displayed(generated: &[Word], displayed: &[Word], rank: usize) -> Option<String> {
    let g = SubgroupAutomaton::build_in(generated, rank);
    let d = SubgroupAutomaton::build_in(displayed, rank);
    if g.same_subgroup(&d) {
        return None;
    }
    let bad = generated.iter().find(|w| !d.contains(w)).or_else(|| displayed.iter().find(|w| !g.contains(w)));
    Some(format!("subgroup mismatch at {}", bad.map_or_else(|| "?".to_string(), Word::to_string)))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `e3^-1 a_n` abelianizes to a non-primitive vector, so it is not primitive;
/// also `{e1, e2, a_n, e4, ..}` is a basis.
pub fn check_d1_obstruction(seq: &WitnessSequence, n: usize) -> Result<CheckReport, Error> {
    let rank = seq.family().rank_after(n);
    let a_n = seq.term(n)?.clone();
    timed("d1_obstruction", json!({ "n": n, "rank": rank }), Some(SURROGATE), || {
        let tail = Word::generator(3).inverse().multiply(&a_n);
        let v = tail.abelianize(rank)?;
        let g = v.exponents().iter().fold(0, |acc, &x| gcd(acc, x));
        if g == 1 {
            return Ok(Outcome::Fails(format!("abelianization of {tail} is primitive")));
        }
        let mut basis = vec![Word::generator(1), Word::generator(2), a_n.clone()];
        basis.extend(gens(4..=rank as u32));
        if !is_basis(&basis, rank) {
            return Ok(Outcome::Fails(format!("e1, e2, {a_n} does not extend to a basis")));
        }
        Ok(Outcome::Holds)
    })
}

/// `F_rank = <earlier blocks> * <e1, e2, a_i> * <block i>` with
/// `a_0..a_{i-1}` in the first two factors and `a_{i+1}` in the last two.
pub fn check_d2_factorization(seq: &WitnessSequence, i: usize) -> Result<CheckReport, Error> {
    if i == 0 {
        return Err(Error::InvalidArgument("factorization check needs i >= 1".into()));
    }
    let fam = seq.family();
    let rank = fam.rank_after(i + 1);
    let next = seq.term(i + 1)?.clone();
    timed("d2_factorization", json!({ "i": i, "rank": rank }), Some(SURROGATE), || {
        let before = gens(4..=*fam.block(i - 1).end());
        let middle = vec![Word::generator(1), Word::generator(2), seq.term(i)?.clone()];
        let after = gens(fam.block(i));
        let all: Vec<Word> = before.iter().chain(&middle).chain(&after).cloned().collect();
        if !is_basis(&all, rank) {
            return Ok(Outcome::Fails(format!("not a basis of F_{rank}")));
        }
        let left: Vec<Word> = before.iter().chain(&middle).cloned().collect();
        let left = SubgroupAutomaton::build_in(&left, rank);
        for j in 0..i {
            let a = seq.term(j)?;
            if !left.contains(a) {
                return Ok(Outcome::Fails(format!("a_{j} = {a} outside the left factors")));
            }
        }
        let right: Vec<Word> = middle.iter().chain(&after).cloned().collect();
        if !SubgroupAutomaton::build_in(&right, rank).contains(&next) {
            return Ok(Outcome::Fails(format!("a_{} = {next} outside the right factors", i + 1)));
        }
        Ok(Outcome::Holds)
    })
}

/// Bounded root-closedness of `<gens>` in `F_rank`.
pub fn check_root_closed(name: &str, generators: &[Word], rank: usize, l: usize, m: u32) -> Result<CheckReport, Error> {
    let aut = SubgroupAutomaton::build_in(generators, rank);
    let shown: Vec<String> = generators.iter().map(Word::to_string).collect();
    let params = json!({ "subgroup": shown, "rank": rank, "L": l, "M": m });
    timed(name, params, None, || {
        Ok(match aut.is_root_closed_bounded(l, m).0 {
            Ok(()) => Outcome::Holds,
            Err(v) => Outcome::Fails(format!("({}, {})", v.root, v.exponent)),
        })
    })
}

fn root_closed_from(
    name: &str,
    generated: Vec<Word>,
    displayed: Vec<Word>,
    rank: usize,
    i: usize,
    l: usize,
    m: u32,
) -> Result<CheckReport, Error> {
    if let Some(w) = same_as_displayed(&generated, &displayed, rank) {
        return timed(name, json!({ "i": i, "rank": rank, "L": l, "M": m }), None, || Ok(Outcome::Fails(w)));
    }
    let mut r = check_root_closed(name, &displayed, rank, l, m)?;
    r.params = json!({ "i": i, "rank": rank, "L": l, "M": m });
    Ok(r)
}

/// `A = <e1, e2, e3, d_0, .., d_i> = <e1, e2, a_0, .., a_{i+1}>` is root closed on the ball.
pub fn check_root_closed_a(seq: &WitnessSequence, i: usize, l: usize, m: u32) -> Result<CheckReport, Error> {
    let rank = seq.family().rank_after(i + 1);
    let generated = seq.generated(0..=i + 1)?;
    root_closed_from("root_closed_a", generated, seq.displayed(i + 1, None), rank, i, l, m)
}

/// `B = <e1, e2, e3, d_0, .., d_{i-1}, d_i d_{i+1}> = <e1, e2, a_0, .., a_i, a_{i+2}>`.
pub fn check_root_closed_b(seq: &WitnessSequence, i: usize, l: usize, m: u32) -> Result<CheckReport, Error> {
    let fam = seq.family();
    let rank = fam.rank_after(i + 2);
    let generated = seq.generated((0..=i).chain([i + 2]))?;
    let joined = fam.increment(i).multiply(&fam.increment(i + 1));
    root_closed_from("root_closed_b", generated, seq.displayed(i, Some(joined)), rank, i, l, m)
}

/// On the ball of radius `l`: `w ∈ F3 ∩ <e1, e2, a_1>` iff `w ∈ F2`.
pub fn check_d3_intersection(seq: &WitnessSequence, l: usize) -> Result<CheckReport, Error> {
    let rank = seq.family().rank_after(1);
    let a1 = seq.term(1)?.clone();
    timed("d3_intersection", json!({ "rank": rank, "L": l }), None, || {
        let shown = Word::generator(3).multiply(&seq.family().increment(0));
        if a1 != shown {
            return Ok(Outcome::Fails(format!("a_1 = {a1}, expected {shown}")));
        }
        let f3 = SubgroupAutomaton::build_in(&gens(1..=3), rank);
        let a = SubgroupAutomaton::build_in(&[Word::generator(1), Word::generator(2), a1.clone()], rank);
        let f2 = SubgroupAutomaton::build_in(&gens(1..=2), rank);
        Ok(match intersection_agrees_bounded(&[&f3, &a], &f2, rank, l).0 {
            Ok(()) => Outcome::Holds,
            Err(w) => Outcome::Fails(w.to_string()),
        })
    })
}

fn random_reduced(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::from_key(rng.gen_range(0..2 * rank));
        if letters.last().map_or(true, |p| *p != l.inverse()) {
            letters.push(l);
        }
    }
    Word::from_letters(letters)
}

/// Seeded spot check of the same equivalence beyond the ball: half the
/// samples are random reduced words, half random products in `<e1, e2, a_1>`.
pub fn check_d3_sampled(seq: &WitnessSequence, seed: u64, samples: usize, len: usize) -> Result<CheckReport, Error> {
    let rank = seq.family().rank_after(1);
    let a1 = seq.term(1)?.clone();
    let params = json!({ "rank": rank, "seed": seed, "samples": samples, "len": len });
    timed("d3_sampled", params, None, || {
        let pool = [Word::generator(1), Word::generator(2), a1.clone()];
        let f3 = SubgroupAutomaton::build_in(&gens(1..=3), rank);
        let a = SubgroupAutomaton::build_in(&pool, rank);
        let f2 = SubgroupAutomaton::build_in(&gens(1..=2), rank);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in 0..samples {
            let w = if s % 2 == 0 {
                random_reduced(&mut rng, rank, len)
            } else {
                let mut x = Word::identity();
                for _ in 0..len {
                    let g = &pool[rng.gen_range(0..pool.len())];
                    x.mul_assign(&if rng.gen_bool(0.5) { g.clone() } else { g.inverse() });
                }
                x
            };
            if (f3.contains(&w) && a.contains(&w)) != f2.contains(&w) {
                return Ok(Outcome::Fails(w.to_string()));
            }
        }
        Ok(Outcome::Holds)
    })
}

/// On the ball of radius `l` in `F_{rank}`: `w ∈ A ∩ B` iff
/// `w ∈ <e1, e2, a_0, .., a_i>`.
pub fn check_d4_real_intersection(seq: &WitnessSequence, i: usize, l: usize) -> Result<CheckReport, Error> {
    let fam = seq.family();
    let rank = fam.rank_after(i + 2);
    let joined = fam.increment(i).multiply(&fam.increment(i + 1));
    let sets = [
        (seq.generated(0..=i + 1)?, seq.displayed(i + 1, None)),
        (seq.generated((0..=i).chain([i + 2]))?, seq.displayed(i, Some(joined))),
        (seq.generated(0..=i)?, seq.displayed(i, None)),
    ];
    timed("d4_real_intersection", json!({ "i": i, "rank": rank, "L": l }), None, || {
        for (g, d) in &sets {
            if let Some(w) = same_as_displayed(g, d, rank) {
                return Ok(Outcome::Fails(w));
            }
        }
        let [a, b, c] = [&sets[0].1, &sets[1].1, &sets[2].1].map(|x| SubgroupAutomaton::build_in(x, rank));
        Ok(match intersection_agrees_bounded(&[&a, &b], &c, rank, l).0 {
            Ok(()) => Outcome::Holds,
            Err(w) => Outcome::Fails(w.to_string()),
        })
    })
}

/// The torus Anosov map extended over the first layer of the stage-`i`
/// tower moves `e_{2i+4}` through `K+1` distinct conjugacy, left-coset and
/// double-coset classes, while fixing the boundary class and `e1`.
pub fn check_orbit_escape(i: usize, k: usize) -> Result<CheckReport, Error> {
    let tower = Tower::build(i, TowerVariant::Fig1);
    let f = extend_over_tower(&anosov_candidate(), &tower, 0)?;
    let x = Word::generator(2 * i as u32 + 4);
    let bd = Word::commutator(&x, &Word::generator(2 * i as u32 + 5));
    timed("orbit_escape", json!({ "i": i, "K": k }), None, || {
        let conj = orbit_conjugacy(&f, &x, k)?.1;
        let left = orbit_left_coset(&f, &x, &bd, 1, k)?;
        let double = orbit_double_coset(&f, &x, &bd, &bd, 1, 1, k)?;
        if [conj, left, double] != [k + 1; 3] {
            return Ok(Outcome::Fails(format!("counts {conj}, {left}, {double} for {x}")));
        }
        let fixed = [orbit_conjugacy(&f, &bd, k)?.1, orbit_conjugacy(&f, &Word::generator(1), k)?.1];
        if fixed != [1, 1] {
            return Ok(Outcome::Fails(format!("fixed elements moved: counts {fixed:?}")));
        }
        Ok(Outcome::Holds)
    })
}

/// `f_b^l(c)` with every `e_{n+1}`-syllable `t` of `c` replaced by `b^-l t b^l`.
pub fn appendix_expansion(n: usize, b: &Word, c: &Word, l: i64) -> Word {
    let top = n as u32 + 1;
    let bl = b.pow(l);
    let mut out = Word::identity();
    let letters = c.letters();
    let mut p = 0;
    while p < letters.len() {
        let mut q = p;
        let on_top = letters[p].index() == top;
        while q < letters.len() && (letters[q].index() == top) == on_top {
            q += 1;
        }
        let piece = Word::from_letters(letters[p..q].iter().copied());
        out.mul_assign(&if on_top { piece.conjugate_by(&bl) } else { piece });
        p = q;
    }
    out
}

/// `f_b` keeps the conjugacy class of `e_{n+1}` while `c`, which involves
/// `e_{n+1}`, runs through `K+1` distinct words matching the expansion.
pub fn check_appendix_conjugation(n: usize, b: &Word, c: &Word, k: usize) -> Result<CheckReport, Error> {
    let f = appendix_fb(n, b)?;
    let top = Word::generator(n as u32 + 1);
    if c.max_generator() as usize != n + 1 {
        return Err(Error::InvalidArgument(format!("{c} must involve e{} and nothing above it", n + 1)));
    }
    let params = json!({ "n": n, "b": b.to_string(), "c": c.to_string(), "K": k });
    timed("appendix_conjugation", params, None, || {
        for (l, img) in iterate(&f, &top, k)?.iter().enumerate() {
            if !eq_conjugacy(img, &top) {
                return Ok(Outcome::Fails(format!("f_b^{l}(e{}) = {img} left the class", n + 1)));
            }
        }
        let orbit = iterate(&f, c, k)?;
        for (l, img) in orbit.iter().enumerate() {
            let want = appendix_expansion(n, b, c, l as i64);
            if *img != want {
                return Ok(Outcome::Fails(format!("f_b^{l}(c) = {img}, expansion gives {want}")));
            }
        }
        let mut sorted = orbit.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != k + 1 {
            return Ok(Outcome::Fails(format!("only {} distinct images of {c}", sorted.len())));
        }
        Ok(Outcome::Holds)
    })
}

/// The automorphism of `F_{n+2}` inverting `e_{n+2}` and fixing `F_{n+1}`
/// keeps the class of `(e_{n+1}, e_{n+2})` under the `m`-left-coset relation
/// and moves `e_{n+2}`.
pub fn check_appendix_coset_fix(n: usize, m: u32) -> Result<CheckReport, Error> {
    if n < 2 || m == 0 {
        return Err(Error::InvalidArgument("coset check needs n >= 2 and m >= 1".into()));
    }
    let mut images: Vec<Word> = (1..=n as u32 + 2).map(Word::generator).collect();
    images[n + 1] = images[n + 1].inverse();
    let iota = Endo::with_inverse(images.clone(), images)?;
    let (a, b) = (Word::generator(n as u32 + 1), Word::generator(n as u32 + 2));
    timed("appendix_coset_fix", json!({ "n": n, "m": m }), None, || {
        let (ia, ib) = (iota.apply(&a)?, iota.apply(&b)?);
        if ia != a {
            return Ok(Outcome::Fails(format!("moved {a}")));
        }
        if ib == b {
            return Ok(Outcome::Fails(format!("fixed {b}")));
        }
        if !eq_left_coset((&a, &b), (&ia, &ib), m) {
            return Ok(Outcome::Fails(format!("({a}, {b}) and ({ia}, {ib}) differ")));
        }
        Ok(Outcome::Holds)
    })
}

type Job<'a> = Box<dyn Fn() -> Result<CheckReport, Error> + Send + Sync + 'a>;

/// Every check on the main sequence for indices below `n_max`, plus the
/// appendix checks.
pub fn run_all(n_max: usize, bounds: Bounds) -> Result<Vec<CheckReport>, Error> {
    let seq = witness_sequence(Family::Main, n_max.max(1) + 1)?;
    run_all_with(&seq, n_max, bounds, None)
}

/// As [`run_all`] against `seq`, which must reach `a_{n_max+1}`. A seed adds
/// a sampled check. Reports keep a fixed order.
pub fn run_all_with(seq: &WitnessSequence, n_max: usize, bounds: Bounds, seed: Option<u64>) -> Result<Vec<CheckReport>, Error> {
    seq.term(n_max.max(1) + usize::from(n_max > 0))?;
    let Bounds { l, m, k } = bounds;
    let mut jobs: Vec<Job> = Vec::new();
    for n in 1..=n_max.max(1) {
        jobs.push(Box::new(move || check_d1_obstruction(seq, n)));
    }
    for i in 1..n_max {
        jobs.push(Box::new(move || check_d2_factorization(seq, i)));
    }
    for i in 0..n_max {
        jobs.push(Box::new(move || check_root_closed_a(seq, i, l, m)));
        jobs.push(Box::new(move || check_root_closed_b(seq, i, l, m)));
    }
    if n_max >= 1 {
        jobs.push(Box::new(move || check_d3_intersection(seq, l)));
        if let Some(s) = seed {
            jobs.push(Box::new(move || check_d3_sampled(seq, s, 1000, 4 * l)));
        }
    }
    for i in 0..n_max {
        jobs.push(Box::new(move || check_d4_real_intersection(seq, i, l)));
        jobs.push(Box::new(move || check_orbit_escape(i, k)));
    }
    jobs.push(Box::new(move || check_appendix_conjugation(2, &Word::generator(1), &Word::parse("e3 e1 e3").unwrap(), k)));
    for mm in 1..=m {
        jobs.push(Box::new(move || check_appendix_coset_fix(2, mm)));
    }
    jobs.par_iter().map(|j| j()).collect()
}
