//! Fast algorithms against the slow references in `common`.

mod common;

use ampleforge::amalgam::{Conjugacy, Tower, TowerVariant};
use ampleforge::imaginaries::{eq_conjugacy, solve_double_coset, Solve};
use ampleforge::stallings::{intersection_agrees_bounded, SubgroupAutomaton};
use ampleforge::Word;
use common::{ball, random_word, w};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random reduced word with a random length in `lens`.
fn rw(rng: &mut ChaCha8Rng, rank: usize, lens: std::ops::RangeInclusive<usize>) -> Word {
    let len = rng.gen_range(lens);
    random_word(rng, rank, len)
}

fn words(list: &[&str]) -> Vec<Word> {
    list.iter().map(|s| w(s)).collect()
}

/// Membership by enumerating products of generators up to `depth` factors.
fn naive_members(gens: &[Word], depth: usize, max_len: usize) -> Vec<Word> {
    let mut letters: Vec<Word> = gens.to_vec();
    letters.extend(gens.iter().map(Word::inverse));
    let mut layer = vec![Word::identity()];
    let mut all = layer.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &layer {
            for g in &letters {
                let y = x.multiply(g);
                if y.len() <= max_len && !all.contains(&y) {
                    all.push(y.clone());
                    next.push(y);
                }
            }
        }
        layer = next;
    }
    all
}

#[test]
fn membership_matches_products() {
    // Nielsen-reduced sets: products never cancel a whole generator, so the
    // ball of a subgroup is reached by products of bounded length
    let cases = [
        (words(&["e1^2", "e2"]), 2),
        (words(&["e1 e2", "e2 e1^-1"]), 2),
        (words(&["e1^3", "e2 e1 e2^-1"]), 2),
        (words(&["e1 e2 e3", "e3^2", "e2^-1 e1"]), 3),
    ];
    for (gens, rank) in cases {
        let aut = SubgroupAutomaton::build_in(&gens, rank);
        let members = naive_members(&gens, 6, 6);
        for x in ball(rank, 6) {
            assert_eq!(aut.contains(&x), members.contains(&x), "{x} in <{gens:?}>");
        }
    }
}

fn naive_root_scan(gens: &[Word], rank: usize, max_len: usize, max_exp: u32) -> Option<(Word, u32)> {
    let aut = SubgroupAutomaton::build_in(gens, rank);
    let mut best: Option<(Word, u32)> = None;
    for x in ball(rank, max_len) {
        if x.is_identity() || aut.contains(&x) {
            continue;
        }
        if let Some(m) = (2..=max_exp).find(|&m| aut.contains(&x.pow(m.into()))) {
            if best.as_ref().map_or(true, |(b, _)| x < *b) {
                best = Some((x, m));
            }
        }
    }
    best
}

#[test]
fn root_scan_matches_naive() {
    let cases = [
        (words(&["e1^2"]), 2),
        (words(&["e1^2", "e2"]), 2),
        (words(&["e1 e2 e1^-1 e2^-1"]), 2),
        (words(&["e1^2 e2^2"]), 2),
        (words(&["e1^3", "e2 e1 e2^-1"]), 2),
        (words(&["e2 e1^2 e2^-1", "e1 e2^3"]), 2),
        (words(&["e1", "e2"]), 2),
        (words(&["e1^2", "e2^2", "e3"]), 3),
        (words(&["e3 e1 e3 e1"]), 3),
    ];
    for (gens, rank) in cases {
        let aut = SubgroupAutomaton::build_in(&gens, rank);
        let max_len = if rank == 2 { 7 } else { 5 };
        let fast = aut.is_root_closed_bounded(max_len, 4).0.err().map(|v| (v.root, v.exponent));
        assert_eq!(fast, naive_root_scan(&gens, rank, max_len, 4), "<{gens:?}>");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let gens: Vec<Word> = (0..rng.gen_range(1..=2)).map(|_| rw(&mut rng, 2, 1..=4)).collect();
        let aut = SubgroupAutomaton::build_in(&gens, 2);
        let fast = aut.is_root_closed_bounded(6, 3).0.err().map(|v| (v.root, v.exponent));
        assert_eq!(fast, naive_root_scan(&gens, 2, 6, 3), "<{gens:?}>");
    }
}

#[test]
fn intersection_scan_matches_naive() {
    let cases = [
        (words(&["e1", "e2"]), words(&["e1", "e3"]), words(&["e1"])),
        (words(&["e1", "e2"]), words(&["e1", "e3"]), words(&["e1^2"])),
        (words(&["e1^2", "e2"]), words(&["e1^3", "e2"]), words(&["e1^6", "e2"])),
        (words(&["e1 e2", "e3"]), words(&["e2 e3", "e1 e2"]), words(&["e1 e2"])),
        (words(&["e1 e3 e1^-1", "e2"]), words(&["e1", "e2"]), words(&["e2"])),
    ];
    for (p, q, t) in cases {
        let (ap, aq, at) =
            (SubgroupAutomaton::build_in(&p, 3), SubgroupAutomaton::build_in(&q, 3), SubgroupAutomaton::build_in(&t, 3));
        let naive = ball(3, 5)
            .into_iter()
            .filter(|x| (ap.contains(x) && aq.contains(x)) != at.contains(x))
            .min();
        let fast = intersection_agrees_bounded(&[&ap, &aq], &at, 3, 5).0.err();
        assert_eq!(fast, naive, "{p:?} ∩ {q:?} vs {t:?}");
    }
}

#[test]
fn double_coset_solver_matches_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bound = 10i64;
    let (mut found, mut none) = (0, 0);
    for round in 0..400 {
        let a = rw(&mut rng, 2, 1..=3);
        let c = rw(&mut rng, 2, 1..=3);
        let b1 = rw(&mut rng, 2, 0..=4);
        let b2 = if round % 2 == 0 {
            let (i, j) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
            a.pow(i).multiply(&b1).multiply(&c.pow(j))
        } else {
            rw(&mut rng, 2, 0..=6)
        };
        let brute = (-bound..=bound).any(|i| (-bound..=bound).any(|j| a.pow(i).multiply(&b1).multiply(&c.pow(j)) == b2));
        match solve_double_coset(&a, &b1, &c, &b2, None) {
            Solve::Found(i, j) => {
                assert_eq!(a.pow(i).multiply(&b1).multiply(&c.pow(j)), b2);
                found += 1;
            }
            Solve::NoSolution => {
                assert!(!brute, "{a} {b1} {c} {b2}");
                none += 1;
            }
            Solve::Exhausted => panic!("no budget was given"),
        }
        if brute {
            assert!(matches!(solve_double_coset(&a, &b1, &c, &b2, None), Solve::Found(..)));
        }
    }
    assert!(found >= 200 && none > 0, "found {found}, none {none}");
}

#[test]
fn amalgam_conjugacy_matches_free_group() {
    // layer 0 of this tower is an amalgam decomposition of the whole of F5
    let t = Tower::build(0, TowerVariant::Fig1);
    let g = &t.layer(0).unwrap().amalgam;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut decided, mut conj) = (0, 0);
    for round in 0..300 {
        let x = rw(&mut rng, 5, 1..=6);
        let y = if round % 2 == 0 {
            x.conjugate_by(&rw(&mut rng, 5, 0..=4))
        } else {
            random_word(&mut rng, 5, x.len())
        };
        let (nx, ny) = (t.normal_form(0, &x).unwrap(), t.normal_form(0, &y).unwrap());
        let expected = eq_conjugacy(&x, &y);
        match g.conjugate_in_amalgam(&nx, &ny, 64) {
            Conjugacy::Undecided => {}
            got => {
                assert_eq!(got == Conjugacy::Conjugate, expected, "{x} ~ {y}");
                decided += 1;
                conj += usize::from(expected);
            }
        }
    }
    assert!(decided >= 250 && conj >= 100, "decided {decided}, conjugate {conj}");
}
