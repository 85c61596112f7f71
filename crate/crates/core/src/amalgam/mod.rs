//! Amalgamated free products `F_L *_C F_R` of two free groups over an
//! infinite cyclic edge group `C = <u> = <v>`.
//!
//! Coset representatives are the length-then-lex least elements of the
//! right cosets `C g`, which fixes the systems of representatives the normal
//! form needs. Syllables are words in the factor's own alphabet.

mod tower;

use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::imaginaries::{canonical_conjugacy_rep, eq_conjugacy, solve_double_coset, Solve};
use crate::word::Word;

pub use tower::{Tower, TowerLayer, TowerVariant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Amalgam {
    left_rank: usize,
    right_rank: usize,
    u: Word,
    v: Word,
}

/// `u^c_exponent · g_1 ⋯ g_n` with alternating sides and every `g_i` a
/// non-trivial coset representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NormalFormElement {
    pub c_exponent: i64,
    pub syllables: Vec<(Side, Word)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conjugacy {
    Conjugate,
    NotConjugate,
    /// The exponent budget ran out before a decision.
    Undecided,
}

impl NormalFormElement {
    pub fn identity() -> Self {
        NormalFormElement { c_exponent: 0, syllables: Vec::new() }
    }

    pub fn syllable_length(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_identity(&self) -> bool {
        self.c_exponent == 0 && self.syllables.is_empty()
    }

    /// Syllable input denoting the same element, with `u^c` as a left syllable.
    pub fn to_input(&self, g: &Amalgam) -> Vec<(Side, Word)> {
        let mut out = Vec::with_capacity(self.syllables.len() + 1);
        if self.c_exponent != 0 {
            out.push((Side::L, g.u.pow(self.c_exponent)));
        }
        out.extend(self.syllables.iter().cloned());
        out
    }
}

impl fmt::Display for NormalFormElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u^{}", self.c_exponent)?;
        for (side, w) in &self.syllables {
            write!(f, " ({side}, {w})")?;
        }
        Ok(())
    }
}

impl Amalgam {
    pub fn new(left_rank: usize, right_rank: usize, u: Word, v: Word) -> Result<Amalgam, Error> {
        for (name, w, rank) in [("u", &u, left_rank), ("v", &v, right_rank)] {
            if w.is_identity() {
                return Err(Error::InvalidAmalgam(format!("{name} is trivial")));
            }
            if w.max_generator() as usize > rank {
                return Err(Error::InvalidAmalgam(format!("{name} = {w} is not in a free group of rank {rank}")));
            }
            let (_, e) = w.primitive_root()?;
            if e > 1 {
                return Err(Error::InvalidAmalgam(format!("{name} = {w} is a proper power")));
            }
        }
        Ok(Amalgam { left_rank, right_rank, u, v })
    }

    /// Parses `amalgam L=<rank> R=<rank> u=<word> v=<word>`.
    pub fn parse(text: &str) -> Result<Amalgam, Error> {
        let body = text
            .trim()
            .strip_prefix("amalgam")
            .ok_or_else(|| Error::InvalidArgument("amalgam description must start with 'amalgam'".into()))?;
        let fields = split_fields(body, &["L=", "R=", "u=", "v="])?;
        let rank = |s: &str| -> Result<usize, Error> {
            s.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad rank '{}'", s.trim())))
        };
        Amalgam::new(rank(&fields[0])?, rank(&fields[1])?, Word::parse(&fields[2])?, Word::parse(&fields[3])?)
    }

    pub fn left_rank(&self) -> usize {
        self.left_rank
    }

    pub fn right_rank(&self) -> usize {
        self.right_rank
    }

    pub fn u(&self) -> &Word {
        &self.u
    }

    pub fn v(&self) -> &Word {
        &self.v
    }

    pub fn edge(&self, side: Side) -> &Word {
        match side {
            Side::L => &self.u,
            Side::R => &self.v,
        }
    }

    pub fn rank(&self, side: Side) -> usize {
        match side {
            Side::L => self.left_rank,
            Side::R => self.right_rank,
        }
    }

    /// `(c, rep)` with `a = e^c · rep`, `e` the edge word of `side`, and `rep`
    /// the least element of `C a`. Beyond `|c| > 2|a| / |ê|` every `e^-c a` is
    /// longer than `a`, so the scan window is exact.
    pub fn coset_rep(&self, side: Side, a: &Word) -> (i64, Word) {
        let e = self.edge(side);
        let core = e.cyclic_length();
        let span = (2 * a.len() / core + 1) as i64;
        let e_inv = e.inverse();
        let mut best = (0i64, a.clone());
        let mut down = a.clone();
        let mut up = a.clone();
        for c in 1..=span {
            down = e_inv.multiply(&down);
            up = e.multiply(&up);
            if down < best.1 {
                best = (c, down.clone());
            }
            if up < best.1 {
                best = (-c, up.clone());
            }
        }
        best
    }

    pub fn in_edge_group(&self, side: Side, a: &Word) -> Option<i64> {
        a.power_exponent_of(self.edge(side)).expect("edge words are non-trivial")
    }

    /// Unique normal form of a product of factor elements, computed right to
    /// left with the edge-group exponent carried leftwards.
    pub fn normal_form(&self, input: &[(Side, Word)]) -> NormalFormElement {
        let mut rev: Vec<(Side, Word)> = Vec::new();
        let mut carry = 0i64;
        for (side, a) in input.iter().rev() {
            let mut x = a.multiply(&self.edge(*side).pow(carry));
            if let Some((s, _)) = rev.last() {
                if s == side {
                    let (_, front) = rev.pop().unwrap();
                    x.mul_assign(&front);
                }
            }
            let (c, rep) = self.coset_rep(*side, &x);
            if !rep.is_identity() {
                rev.push((*side, rep));
            }
            carry = c;
        }
        rev.reverse();
        NormalFormElement { c_exponent: carry, syllables: rev }
    }

    /// Normal form of `g · a` for `a` in the factor `side`, updating only the
    /// syllables the carried edge-group exponent reaches.
    pub fn mult_right(&self, g: &NormalFormElement, a: &Word, side: Side) -> NormalFormElement {
        if a.is_identity() {
            return g.clone();
        }
        let mut out = g.clone();
        let (c, rep) = match out.syllables.last() {
            None => {
                let x = self.edge(side).pow(out.c_exponent).multiply(a);
                let (c, rep) = self.coset_rep(side, &x);
                if !rep.is_identity() {
                    out.syllables.push((side, rep));
                }
                out.c_exponent = c;
                return out;
            }
            Some((s, last)) if *s == side => {
                let x = last.multiply(a);
                out.syllables.pop();
                self.coset_rep(side, &x)
            }
            Some(_) => self.coset_rep(side, a),
        };
        // the carry enters the syllables before the new one
        let carry = self.absorb_left(&mut out.syllables, c);
        out.c_exponent += carry;
        if !rep.is_identity() {
            out.syllables.push((side, rep));
        }
        out
    }

    /// Pushes `u^carry` from the right end of `syllables` leftwards; returns
    /// what reaches the head.
    fn absorb_left(&self, syllables: &mut [(Side, Word)], mut carry: i64) -> i64 {
        for (side, g) in syllables.iter_mut().rev() {
            if carry == 0 {
                break;
            }
            let x = g.multiply(&self.edge(*side).pow(carry));
            let (c, rep) = self.coset_rep(*side, &x);
            debug_assert!(!rep.is_identity(), "a syllable outside C stays outside C");
            *g = rep;
            carry = c;
        }
        carry
    }

    pub fn multiply(&self, g: &NormalFormElement, h: &NormalFormElement) -> NormalFormElement {
        let mut input = g.to_input(self);
        input.extend(h.to_input(self));
        self.normal_form(&input)
    }

    pub fn inverse(&self, g: &NormalFormElement) -> NormalFormElement {
        let input: Vec<(Side, Word)> = g.to_input(self).into_iter().rev().map(|(s, w)| (s, w.inverse())).collect();
        self.normal_form(&input)
    }

    /// `(core, conj)` with `g = conj · core · conj^-1` and `core` of syllable
    /// length 0, 1 or even.
    pub fn cyclically_reduce(&self, g: &NormalFormElement) -> (NormalFormElement, NormalFormElement) {
        let mut core = g.clone();
        let mut conj = NormalFormElement::identity();
        while core.syllables.len() >= 3 && core.syllables.len() % 2 == 1 {
            let (side, last) = core.syllables.last().cloned().unwrap();
            let mut input = vec![(side, last.multiply(&self.edge(side).pow(core.c_exponent)))];
            input.extend(core.syllables[..core.syllables.len() - 1].iter().cloned());
            core = self.normal_form(&input);
            conj = self.multiply(&conj, &self.normal_form(&[(side, last.inverse())]));
        }
        (core, conj)
    }

    /// Exponent `k` such that `g` (of syllable length at most one) is
    /// conjugate into the edge group as `u^k`, if any.
    fn conjugate_into_edge(&self, g: &NormalFormElement) -> Option<i64> {
        match g.syllables.as_slice() {
            [] => Some(g.c_exponent),
            [(side, s)] => {
                let e = self.edge(*side);
                let x = e.pow(g.c_exponent).multiply(s);
                let ratio = x.cyclic_length() / e.cyclic_length();
                if x.cyclic_length() % e.cyclic_length() != 0 || ratio == 0 {
                    return None;
                }
                let rep = canonical_conjugacy_rep(&x);
                [ratio as i64, -(ratio as i64)].into_iter().find(|&k| canonical_conjugacy_rep(&e.pow(k)) == rep)
            }
            _ => None,
        }
    }

    /// Conjugacy of `g` and `h` in the amalgam. For syllable length above one,
    /// each matching rotation of `g`'s core pins down the only edge-group
    /// conjugator that can fix the last syllable; `exp_bound` caps that
    /// exponent search and yields `Undecided` when it runs out.
    pub fn conjugate_in_amalgam(&self, g: &NormalFormElement, h: &NormalFormElement, exp_bound: u64) -> Conjugacy {
        let (cg, _) = self.cyclically_reduce(g);
        let (ch, _) = self.cyclically_reduce(h);
        let yes_no = |b: bool| if b { Conjugacy::Conjugate } else { Conjugacy::NotConjugate };
        if cg.syllable_length() <= 1 && ch.syllable_length() <= 1 {
            return match (self.conjugate_into_edge(&cg), self.conjugate_into_edge(&ch)) {
                (Some(k), Some(l)) => yes_no(k == l),
                (None, None) => {
                    let (sg, wg) = &cg.syllables[0];
                    let (sh, wh) = &ch.syllables[0];
                    let xg = self.edge(*sg).pow(cg.c_exponent).multiply(wg);
                    let xh = self.edge(*sh).pow(ch.c_exponent).multiply(wh);
                    yes_no(sg == sh && eq_conjugacy(&xg, &xh))
                }
                _ => Conjugacy::NotConjugate,
            };
        }
        let n = cg.syllable_length();
        if n != ch.syllable_length() {
            return Conjugacy::NotConjugate;
        }
        let (h_side, h_last) = ch.syllables.last().unwrap();
        let mut exhausted = false;
        for k in 0..n {
            // rotation g_{k+1} .. g_n c g_1 .. g_k
            let mut input: Vec<(Side, Word)> = cg.syllables[k..].to_vec();
            input.push((Side::L, self.u.pow(cg.c_exponent)));
            input.extend(cg.syllables[..k].iter().cloned());
            let r = self.normal_form(&input);
            let (r_side, r_last) = r.syllables.last().unwrap();
            if r_side != h_side {
                continue;
            }
            let e = self.edge(*r_side);
            let s = match solve_double_coset(e, r_last, e, h_last, Some(exp_bound)) {
                Solve::Found(_, s) => s,
                Solve::NoSolution => continue,
                Solve::Exhausted => {
                    exhausted = true;
                    continue;
                }
            };
            let mut input = vec![(Side::L, self.u.pow(-s))];
            input.extend(r.to_input(self));
            input.push((Side::L, self.u.pow(s)));
            if self.normal_form(&input) == ch {
                return Conjugacy::Conjugate;
            }
        }
        if exhausted {
            Conjugacy::Undecided
        } else {
            Conjugacy::NotConjugate
        }
    }
}

/// Splits `body` into the values following each key, in order.
pub(crate) fn split_fields(body: &str, keys: &[&str]) -> Result<Vec<String>, Error> {
    let mut starts = Vec::new();
    for key in keys {
        let pos = find_key(body, key).ok_or_else(|| Error::InvalidArgument(format!("missing '{key}'")))?;
        starts.push((pos, key.len()));
    }
    let mut out = Vec::new();
    for &(pos, len) in &starts {
        let end = starts.iter().map(|&(p, _)| p).filter(|&p| p > pos).min().unwrap_or(body.len());
        out.push(body[pos + len..end].trim().to_string());
    }
    Ok(out)
}

fn find_key(body: &str, key: &str) -> Option<usize> {
    let bytes = body.as_bytes();
    body.match_indices(key).map(|(i, _)| i).find(|&i| i == 0 || bytes[i - 1].is_ascii_whitespace())
}

/// Parses syllable input such as `(L, e1 e2) (R, e1^-1)`.
pub fn parse_syllables(text: &str) -> Result<Vec<(Side, Word)>, Error> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let inner_end = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')'))
            .ok_or_else(|| Error::InvalidArgument(format!("expected '(side, word)' at '{rest}'")))?;
        let inner = &rest[1..inner_end + 1];
        let (side, word) = inner
            .split_once(',')
            .ok_or_else(|| Error::InvalidArgument(format!("expected ',' in '({inner})'")))?;
        let side = match side.trim() {
            "L" | "l" => Side::L,
            "R" | "r" => Side::R,
            other => return Err(Error::InvalidArgument(format!("unknown side '{other}'"))),
        };
        out.push((side, Word::parse(word)?));
        rest = rest[inner_end + 2..].trim_start();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn torus() -> Amalgam {
        Amalgam::new(3, 2, w("[e1,e2] e3"), w("[e1,e2]")).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Amalgam::new(2, 2, Word::identity(), w("e1")).is_err());
        assert!(Amalgam::new(2, 2, w("e1^2"), w("e1")).is_err());
        assert!(Amalgam::new(2, 2, w("e3"), w("e1")).is_err());
    }

    #[test]
    fn coset_rep_examples() {
        let g = Amalgam::new(2, 2, w("[e1,e2]"), w("e1")).unwrap();
        let u = g.u().clone();
        assert_eq!(g.coset_rep(Side::L, &u), (1, Word::identity()));
        assert_eq!(g.coset_rep(Side::L, &w("e1")), (0, w("e1")));
        assert_eq!(g.coset_rep(Side::L, &u.pow(2).multiply(&w("e1"))), (2, w("e1")));
        let (c, rep) = g.coset_rep(Side::L, &w("e2 e1"));
        assert_eq!(u.pow(c).multiply(&rep), w("e2 e1"));
    }

    #[test]
    fn normal_form_examples() {
        let g = torus();
        assert_eq!(g.normal_form(&[(Side::L, g.u().clone())]), NormalFormElement { c_exponent: 1, syllables: vec![] });
        assert!(g.normal_form(&[(Side::L, w("e1")), (Side::L, w("e1^-1"))]).is_identity());
        let x = g.normal_form(&[(Side::L, w("e3")), (Side::R, g.v().multiply(&w("e2")))]);
        let y = g.normal_form(&[(Side::L, w("e3")), (Side::L, g.u().clone()), (Side::R, w("e2"))]);
        assert_eq!(x, y);
        assert_eq!(x.syllable_length(), 2);
        assert_eq!(NormalFormElement::identity().to_string(), "u^0");
        assert_eq!(g.normal_form(&[(Side::L, g.u().clone())]).to_string(), "u^1");
    }

    #[test]
    fn mult_right_matches_batch() {
        let g = torus();
        let base = vec![(Side::L, w("e3 e1")), (Side::R, w("e2 e1^2")), (Side::L, w("e2"))];
        let nf = g.normal_form(&base);
        for (a, side) in [(w("e1"), Side::L), (g.u().pow(3), Side::L), (w("e1 e2"), Side::R), (g.v().pow(-2), Side::R)] {
            let mut ext = base.clone();
            ext.push((side, a.clone()));
            assert_eq!(g.mult_right(&nf, &a, side), g.normal_form(&ext), "{a} on {side}");
        }
        assert_eq!(g.mult_right(&nf, &Word::identity(), Side::R), nf);
        // merging into the last syllable carries into the one before it
        let base = vec![(Side::L, w("e3 e2")), (Side::R, w("e1 e2"))];
        let nf = g.normal_form(&base);
        let a = w("e1^-1 e2^-2 e1^-1");
        let mut ext = base.clone();
        ext.push((Side::R, a.clone()));
        let want = g.normal_form(&ext);
        assert_eq!(want.syllables.last().unwrap().1, w("e2^-1 e1^-1"));
        assert_eq!(g.mult_right(&nf, &a, Side::R), want);
    }

    #[test]
    fn cyclic_reduction_and_conjugacy() {
        let g = torus();
        let x = g.normal_form(&[(Side::L, w("e3")), (Side::R, w("e2")), (Side::L, w("e1 e3"))]);
        let (core, conj) = g.cyclically_reduce(&x);
        assert!(core.syllable_length() <= 1 || core.syllable_length() % 2 == 0);
        let back = g.multiply(&g.multiply(&conj, &core), &g.inverse(&conj));
        assert_eq!(back, x);

        let y = g.normal_form(&[(Side::L, w("e3")), (Side::R, w("e2"))]);
        let rot = g.normal_form(&[(Side::R, w("e2")), (Side::L, w("e3"))]);
        assert_eq!(g.conjugate_in_amalgam(&y, &rot, 10), Conjugacy::Conjugate);
        let u1 = g.normal_form(&[(Side::L, g.u().clone())]);
        let u2 = g.normal_form(&[(Side::L, g.u().pow(2))]);
        assert_eq!(g.conjugate_in_amalgam(&u1, &u2, 10), Conjugacy::NotConjugate);
        let l = g.normal_form(&[(Side::L, w("e1"))]);
        let r = g.normal_form(&[(Side::R, w("e2"))]);
        assert_eq!(g.conjugate_in_amalgam(&l, &r, 10), Conjugacy::NotConjugate);
        // u is identified with v, and v is conjugate in the right factor to this
        let v_conj = g.normal_form(&[(Side::R, w("e2^-1 [e1,e2] e2"))]);
        assert_eq!(g.conjugate_in_amalgam(&u1, &v_conj, 10), Conjugacy::Conjugate);
    }

    #[test]
    fn parsing() {
        let g = Amalgam::parse("amalgam L=3 R=2 u=[e1,e2] e3 v=[e1,e2]").unwrap();
        assert_eq!(g, torus());
        assert!(Amalgam::parse("amalgam L=3 u=e1 v=e1").is_err());
        let s = parse_syllables("(L, e1 e2) (R,e1^-1)").unwrap();
        assert_eq!(s, vec![(Side::L, w("e1 e2")), (Side::R, w("e1^-1"))]);
        assert!(parse_syllables("(X, e1)").is_err());
        assert!(parse_syllables("(L e1)").is_err());
    }
}
