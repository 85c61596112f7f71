//! Deciders for the basic equivalence relations on tuples of free-group
//! elements: conjugacy, `m`-left and `m`-right cosets of cyclic subgroups and
//! `(m, n)`-double cosets.
//!
//! Centralizers are compared through oriented primitive roots (the smaller of
//! the root and its inverse), so `<b> = <b^-1>` needs no special casing.
//!
//! The degenerate clauses are taken literally: all pairs with trivial second
//! coordinate are left-coset equivalent, and all triples with `a = 1` (or all
//! with `c = 1`) are double-coset equivalent whatever the other entries. The
//! double-coset relation is therefore not transitive on tuples mixing `a = 1`
//! and `c = 1`; see the tests.

use serde::Serialize;

use crate::error::Error;
use crate::word::{least_rotation, Word};

pub fn eq_conjugacy(a: &Word, b: &Word) -> bool {
    let (ca, _) = a.cyclic_reduce();
    let (cb, _) = b.cyclic_reduce();
    if ca.len() != cb.len() {
        return false;
    }
    if ca.is_empty() {
        return true;
    }
    let doubled: Vec<_> = ca.letters().iter().chain(ca.letters()).copied().collect();
    doubled.windows(cb.len()).any(|win| win == cb.letters())
}

/// Least cyclic rotation of the cyclic core; equal exactly on conjugacy classes.
pub fn canonical_conjugacy_rep(a: &Word) -> Word {
    let (core, _) = a.cyclic_reduce();
    if core.is_empty() {
        return core;
    }
    core.rotate(least_rotation(core.letters()))
}

/// Common oriented root of `b1` and `b2` when their centralizers coincide.
fn common_root(b1: &Word, b2: &Word) -> Option<Word> {
    let r1 = b1.oriented_root().ok()?;
    let r2 = b2.oriented_root().ok()?;
    (r1 == r2).then_some(r1)
}

fn divisible_power(w: &Word, root: &Word, m: u32) -> bool {
    match w.power_exponent_of(root) {
        Ok(Some(t)) => t % i64::from(m) == 0,
        _ => false,
    }
}

pub fn eq_left_coset(p1: (&Word, &Word), p2: (&Word, &Word), m: u32) -> bool {
    let ((a1, b1), (a2, b2)) = (p1, p2);
    if b1.is_identity() || b2.is_identity() {
        return b1.is_identity() && b2.is_identity();
    }
    match common_root(b1, b2) {
        Some(b) => divisible_power(&a1.inverse().multiply(a2), &b, m),
        None => false,
    }
}

pub fn eq_right_coset(p1: (&Word, &Word), p2: (&Word, &Word), m: u32) -> bool {
    let ((a1, b1), (a2, b2)) = (p1, p2);
    if b1.is_identity() || b2.is_identity() {
        return b1.is_identity() && b2.is_identity();
    }
    match common_root(b1, b2) {
        Some(b) => divisible_power(&a1.multiply(&a2.inverse()), &b, m),
        None => false,
    }
}

pub fn eq_double_coset(t1: (&Word, &Word, &Word), t2: (&Word, &Word, &Word), m: u32, n: u32) -> bool {
    double_coset_witness(t1, t2, m, n).is_some()
}

/// How two triples are double-coset equivalent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DoubleCosetWitness {
    /// `a1 = a2 = 1`.
    TrivialLeft,
    /// `c1 = c2 = 1`.
    TrivialRight,
    /// `a^(m i) b1 c^(n j) = b2` for the common oriented roots `a`, `c`.
    Exponents { i: i64, j: i64 },
}

pub fn double_coset_witness(
    t1: (&Word, &Word, &Word),
    t2: (&Word, &Word, &Word),
    m: u32,
    n: u32,
) -> Option<DoubleCosetWitness> {
    let ((a1, b1, c1), (a2, b2, c2)) = (t1, t2);
    if a1.is_identity() && a2.is_identity() {
        return Some(DoubleCosetWitness::TrivialLeft);
    }
    if c1.is_identity() && c2.is_identity() {
        return Some(DoubleCosetWitness::TrivialRight);
    }
    let a = common_root(a1, a2)?;
    let c = common_root(c1, c2)?;
    match solve_double_coset(&a.pow(m.into()), b1, &c.pow(n.into()), b2, None) {
        Solve::Found(i, j) => Some(DoubleCosetWitness::Exponents { i, j }),
        _ => None,
    }
}

/// Outcome of [`solve_double_coset`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solve {
    Found(i64, i64),
    NoSolution,
    /// The exponent budget ran out before the exact bound was reached.
    Exhausted,
}

/// Finds `(i, j)` with `a^i b1 c^j = b2`, for non-trivial `a` and `c`.
///
/// With `z = b2 b1^-1` and `d = b1 c b1^-1` the equation reads `a^i d^j = z`.
/// If `a` and `d` commute this is a linear equation on exponents of their
/// common root. Otherwise they form a basis of the subgroup they generate,
/// the solution is unique, and `|i|` is bounded by a length argument: outside
/// a window of `|q| + |â| + |d̂|` letters (Fine and Wilf) no cancellation between
/// the periodic parts is possible. `budget` caps the scan of `i`; the exact
/// bound is used when it is `None`.
pub fn solve_double_coset(a: &Word, b1: &Word, c: &Word, b2: &Word, budget: Option<u64>) -> Solve {
    assert!(!a.is_identity() && !c.is_identity(), "double coset of a trivial subgroup");
    let z = b2.multiply(&b1.inverse());
    let d = b1.multiply(c).multiply(&b1.inverse());
    let (ra, ea) = a.primitive_root().expect("non-trivial");
    let (rd, ed) = d.primitive_root().expect("non-trivial");
    let (ea, ed) = (ea as i64, ed as i64);
    let ed_signed = if rd == ra {
        Some(ed)
    } else if rd == ra.inverse() {
        Some(-ed)
    } else {
        None
    };
    if let Some(ed) = ed_signed {
        let Some(t) = z.power_exponent_of(&ra).expect("non-trivial") else {
            return Solve::NoSolution;
        };
        return match solve_linear(ea, ed, t) {
            Some((i, j)) => Solve::Found(i, j),
            None => Solve::NoSolution,
        };
    }
    let (core_a, pa) = a.cyclic_reduce();
    let (core_d, pd) = d.cyclic_reduce();
    let q = pa.inverse().multiply(&pd);
    let window = z.len() + 2 * (pa.len() + pd.len() + q.len() + core_a.len() + core_d.len());
    let exact = (window / core_a.len() + 2) as u64;
    let bound = budget.map_or(exact, |b| b.min(exact));
    let a_inv = a.inverse();
    let mut left = z.clone();
    let mut right = z.clone();
    for i in 0..=bound as i64 {
        // left = a^-i z, right = a^i z
        if let Some(j) = left.power_exponent_of(&d).expect("non-trivial") {
            return Solve::Found(i, j);
        }
        if i > 0 {
            if let Some(j) = right.power_exponent_of(&d).expect("non-trivial") {
                return Solve::Found(-i, j);
            }
        }
        left = a_inv.multiply(&left);
        right = a.multiply(&right);
    }
    if bound < exact {
        Solve::Exhausted
    } else {
        Solve::NoSolution
    }
}

/// Integer solution of `p i + q j = t` with `i` of least absolute value.
fn solve_linear(p: i64, q: i64, t: i64) -> Option<(i64, i64)> {
    let (g, x, _) = ext_gcd(p, q);
    if t % g != 0 {
        return None;
    }
    let k = t / g;
    let mut i = x * k;
    // the general solution shifts i by q/g and j by -p/g
    let step = (q / g).abs();
    if step != 0 {
        i = i.rem_euclid(step);
        if i > step / 2 {
            i -= step;
        }
    }
    let rest = t - p * i;
    if rest % q != 0 {
        return None;
    }
    Some((i, rest / q))
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        // b x + (a mod b) y = g and a mod b = a - floor(a/b) b
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Which basic relation an [`ImaginaryClass`] is taken under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ImaginaryKind {
    Conjugacy,
    LeftCoset { m: u32 },
    RightCoset { m: u32 },
    DoubleCoset { m: u32, n: u32 },
}

impl ImaginaryKind {
    pub fn arity(self) -> usize {
        match self {
            ImaginaryKind::Conjugacy => 1,
            ImaginaryKind::LeftCoset { .. } | ImaginaryKind::RightCoset { .. } => 2,
            ImaginaryKind::DoubleCoset { .. } => 3,
        }
    }
}

/// A tuple of words viewed as a class of one of the basic relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImaginaryClass {
    kind: ImaginaryKind,
    tuple: Vec<Word>,
}

impl ImaginaryClass {
    pub fn new(kind: ImaginaryKind, tuple: Vec<Word>) -> Result<ImaginaryClass, Error> {
        if tuple.len() != kind.arity() {
            return Err(Error::InvalidArgument(format!(
                "{kind:?} needs {} words, got {}",
                kind.arity(),
                tuple.len()
            )));
        }
        let moduli_ok = match kind {
            ImaginaryKind::Conjugacy => true,
            ImaginaryKind::LeftCoset { m } | ImaginaryKind::RightCoset { m } => m >= 1,
            ImaginaryKind::DoubleCoset { m, n } => m >= 1 && n >= 1,
        };
        if !moduli_ok {
            return Err(Error::InvalidArgument("moduli must be at least 1".into()));
        }
        Ok(ImaginaryClass { kind, tuple })
    }

    pub fn kind(&self) -> ImaginaryKind {
        self.kind
    }

    pub fn tuple(&self) -> &[Word] {
        &self.tuple
    }

    /// Same relation and related tuples. Classes of different kinds are never equal.
    pub fn equivalent(&self, other: &ImaginaryClass) -> bool {
        if self.kind != other.kind {
            return false;
        }
        let (x, y) = (&self.tuple, &other.tuple);
        match self.kind {
            ImaginaryKind::Conjugacy => eq_conjugacy(&x[0], &y[0]),
            ImaginaryKind::LeftCoset { m } => eq_left_coset((&x[0], &x[1]), (&y[0], &y[1]), m),
            ImaginaryKind::RightCoset { m } => eq_right_coset((&x[0], &x[1]), (&y[0], &y[1]), m),
            ImaginaryKind::DoubleCoset { m, n } => {
                eq_double_coset((&x[0], &x[1], &x[2]), (&y[0], &y[1], &y[2]), m, n)
            }
        }
    }

    /// Canonical representative; only defined for conjugacy classes.
    pub fn canonical_rep(&self) -> Option<Word> {
        match self.kind {
            ImaginaryKind::Conjugacy => Some(canonical_conjugacy_rep(&self.tuple[0])),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn conjugacy_examples() {
        assert!(eq_conjugacy(&w("e1 e2"), &w("e2 e1")));
        assert!(!eq_conjugacy(&w("e1"), &w("e2")));
        assert!(!eq_conjugacy(&w("[e1,e2]"), &w("[e2,e1]")));
        assert!(eq_conjugacy(&w("e3 e1 e2 e3^-1"), &w("e2 e1")));
        assert_eq!(canonical_conjugacy_rep(&w("e2 e1")), w("e1 e2"));
        assert_eq!(canonical_conjugacy_rep(&w("e1 e2 e1^-1")), w("e2"));
        assert!(canonical_conjugacy_rep(&Word::identity()).is_identity());
    }

    #[test]
    fn coset_examples() {
        let (e1, e2) = (w("e1"), w("e2"));
        assert!(eq_left_coset((&e1, &e2), (&w("e1 e2^2"), &e2), 2));
        assert!(!eq_left_coset((&e1, &e2), (&w("e1 e2"), &e2), 2));
        assert!(eq_left_coset((&w("e3"), &Word::identity()), (&w("e1 e2"), &Word::identity()), 7));
        assert!(eq_left_coset((&e1, &w("e2^3")), (&w("e1 e2^-4"), &w("e2^-1")), 2));
        assert!(eq_right_coset((&e1, &e2), (&w("e2^2 e1"), &e2), 2));
        assert!(eq_right_coset((&e1, &e2), (&e1, &e2), 5));
        assert!(!eq_right_coset((&e1, &e2), (&w("e1 e2"), &e2), 1));
    }

    #[test]
    fn double_coset_examples() {
        let (a, c) = (w("e1 e2"), w("e3^2"));
        let b = w("e2 e3^-1 e1");
        let moved = a.pow(2).multiply(&b).multiply(&c.pow(-3));
        assert!(eq_double_coset((&a, &b, &c), (&a, &moved, &c), 2, 3));
        assert!(!eq_double_coset((&w("e1"), &w("e2"), &w("e3")), (&w("e1"), &w("e2 e3"), &w("e3")), 1, 2));
        assert!(eq_double_coset((&w("e1"), &w("e2"), &w("e3")), (&w("e1"), &w("e2 e3^2"), &w("e3")), 1, 2));
        let one = Word::identity();
        assert!(eq_double_coset((&one, &w("e1"), &w("e2")), (&one, &w("e3"), &w("e1 e1")), 1, 1));
    }

    #[test]
    fn double_coset_literal_clauses_are_not_transitive() {
        let one = Word::identity();
        let (u, c, a, b) = (w("e1"), w("e2"), w("e3"), w("e1 e3"));
        assert!(eq_double_coset((&one, &u, &c), (&one, &u, &one), 1, 1));
        assert!(eq_double_coset((&one, &u, &one), (&a, &b, &one), 1, 1));
        assert!(!eq_double_coset((&one, &u, &c), (&a, &b, &one), 1, 1));
    }

    #[test]
    fn solver_commuting_case() {
        // a = x^2, d = x^3: a^i d^j = x^5 has (1, 1)
        let x = w("e1");
        let s = solve_double_coset(&x.pow(2), &Word::identity(), &x.pow(3), &x.pow(5), None);
        let Solve::Found(i, j) = s else { panic!("{s:?}") };
        assert_eq!(x.pow(2 * i + 3 * j), x.pow(5));
        assert_eq!(solve_double_coset(&x.pow(2), &Word::identity(), &x.pow(4), &x, None), Solve::NoSolution);
    }

    #[test]
    fn solver_far_exponents() {
        // a = e1, b1 = e1^8, c = e2: e1^-15 e1^8 e2 = e1^-7 e2
        let s = solve_double_coset(&w("e1"), &w("e1^8"), &w("e2"), &w("e1^-7 e2"), None);
        assert_eq!(s, Solve::Found(-15, 1));
        let s = solve_double_coset(&w("e1"), &w("e1^8"), &w("e2"), &w("e1^-7 e2"), Some(10));
        assert_eq!(s, Solve::Exhausted);
    }

    #[test]
    fn linear_solutions() {
        for (p, q, t) in [(2, 3, 5), (4, -6, 2), (3, 3, 9), (5, 7, -1), (-2, 4, 6)] {
            let (i, j) = solve_linear(p, q, t).unwrap();
            assert_eq!(p * i + q * j, t);
        }
        assert_eq!(solve_linear(2, 4, 3), None);
    }

    #[test]
    fn class_wrapper() {
        let k = ImaginaryKind::LeftCoset { m: 2 };
        assert!(ImaginaryClass::new(k, vec![w("e1")]).is_err());
        assert!(ImaginaryClass::new(ImaginaryKind::LeftCoset { m: 0 }, vec![w("e1"), w("e2")]).is_err());
        let x = ImaginaryClass::new(k, vec![w("e1"), w("e2")]).unwrap();
        let y = ImaginaryClass::new(k, vec![w("e1 e2^2"), w("e2")]).unwrap();
        assert!(x.equivalent(&y));
        assert!(x.canonical_rep().is_none());
        let c = ImaginaryClass::new(ImaginaryKind::Conjugacy, vec![w("e2 e1")]).unwrap();
        assert_eq!(c.canonical_rep(), Some(w("e1 e2")));
    }
}
