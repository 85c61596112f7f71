//! Boundary-fixing automorphisms of surface groups, their extensions over
//! amalgam towers, and orbit and growth experiments under iteration.

use serde::Serialize;

use crate::amalgam::{Side, Tower};
use crate::endo::Endo;
use crate::error::Error;
use crate::imaginaries::{canonical_conjugacy_rep, eq_double_coset, eq_left_coset};
use crate::word::Word;

fn w(s: &str) -> Word {
    Word::parse(s).expect("built-in word")
}

fn endo(images: &[&str], inverse: &[&str]) -> Endo {
    Endo::with_inverse(images.iter().map(|s| w(s)).collect(), inverse.iter().map(|s| w(s)).collect())
        .expect("built-in automorphism")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SurfacePreset {
    /// Once-punctured torus, `F_2` with boundary `[e1,e2]`.
    Torus1,
    /// Genus two with one boundary component, `F_4` with boundary `[e1,e2][e3,e4]`.
    Genus2_1,
}

impl SurfacePreset {
    pub fn rank(self) -> usize {
        match self {
            SurfacePreset::Torus1 => 2,
            SurfacePreset::Genus2_1 => 4,
        }
    }

    pub fn boundary(self) -> Word {
        match self {
            SurfacePreset::Torus1 => w("[e1,e2]"),
            SurfacePreset::Genus2_1 => w("[e1,e2][e3,e4]"),
        }
    }

    /// Whether `f` fixes the boundary word letter for letter.
    pub fn fixes_boundary(self, f: &Endo) -> bool {
        f.rank() == self.rank() && f.apply(&self.boundary()).ok() == Some(self.boundary())
    }
}

/// `twist_a: e1 -> e1 e2` and `twist_b: e2 -> e2 e1`; both fix `[e1,e2]`.
pub fn dehn_twists_torus() -> (Endo, Endo) {
    let a = endo(&["e1 e2", "e2"], &["e1 e2^-1", "e2"]);
    let b = endo(&["e1", "e2 e1"], &["e1", "e2 e1^-1"]);
    debug_assert!(SurfacePreset::Torus1.fixes_boundary(&a) && SurfacePreset::Torus1.fixes_boundary(&b));
    (a, b)
}

/// `twist_a ∘ twist_b`: `e1 -> e1 e2`, `e2 -> e2 e1 e2`, abelianization
/// `[[1,1],[1,2]]` of trace 3.
pub fn anosov_candidate() -> Endo {
    let (a, b) = dehn_twists_torus();
    a.compose(&b).expect("equal ranks")
}

/// Abelianization matrix of a rank-two endomorphism and whether `|trace| > 2`.
pub fn trace_criterion(f: &Endo) -> Result<([[i64; 2]; 2], bool), Error> {
    if f.rank() != 2 {
        return Err(Error::RankMismatch { left: f.rank(), right: 2 });
    }
    let m = f.abelianization_matrix();
    let matrix = [[m[0][0], m[0][1]], [m[1][0], m[1][1]]];
    Ok((matrix, (matrix[0][0] + matrix[1][1]).abs() > 2))
}

/// Spectral radius of an integer 2×2 matrix with real eigenvalues.
pub fn spectral_radius_2x2(m: [[i64; 2]; 2]) -> f64 {
    let t = (m[0][0] + m[1][1]) as f64;
    let d = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) as f64;
    let disc = (t * t - 4.0 * d).max(0.0).sqrt();
    ((t + disc) / 2.0).abs().max(((t - disc) / 2.0).abs())
}

/// Twists of `F_4` fixing `[e1,e2][e3,e4]`: the four handle twists followed by
/// a twist linking the two handles. Every entry is checked on construction.
pub fn genus2_twist_generators() -> Vec<Endo> {
    let list = vec![
        endo(&["e1 e2", "e2", "e3", "e4"], &["e1 e2^-1", "e2", "e3", "e4"]),
        endo(&["e1", "e2 e1", "e3", "e4"], &["e1", "e2 e1^-1", "e3", "e4"]),
        endo(&["e1", "e2", "e3 e4", "e4"], &["e1", "e2", "e3 e4^-1", "e4"]),
        endo(&["e1", "e2", "e3", "e4 e3"], &["e1", "e2", "e3", "e4 e3^-1"]),
        endo(
            &["e1 e2^-1 e3", "e3^-1 e2 e3", "e3^-1 e2 e3 e2^-1 e3", "e4 e2^-1 e3"],
            &["e1 e3^-1 e2", "e2^-1 e3 e2 e3^-1 e2", "e2^-1 e3 e2", "e4 e3^-1 e2"],
        ),
    ];
    for f in &list {
        assert!(SurfacePreset::Genus2_1.fixes_boundary(f), "twist {f} moves the boundary");
    }
    list
}

/// The composition used as the genus-two growth example: the linking twist
/// after the inverse of `e2 -> e2 e1` after `e3 -> e3 e4`. Its empirical
/// stretch on every generator is about 3.73.
pub fn genus2_candidate() -> Endo {
    let g = genus2_twist_generators();
    let b1_inv = g[1].inverse().expect("twists carry inverses");
    g[4].compose(&b1_inv).and_then(|x| x.compose(&g[2])).expect("equal ranks")
}

/// Extends `f`, an automorphism of the right factor of `layer` fixing its edge
/// word, to the ambient free group: right-factor letters move by `f` and every
/// other generator is fixed.
pub fn extend_over_tower(f: &Endo, tower: &Tower, layer: usize) -> Result<Endo, Error> {
    let lay = tower.layer(layer)?;
    let v = lay.amalgam.v();
    if f.rank() != lay.amalgam.right_rank() {
        return Err(Error::RankMismatch { left: f.rank(), right: lay.amalgam.right_rank() });
    }
    if f.apply(v)? != *v {
        return Err(Error::BoundaryNotFixed { boundary: v.to_string() });
    }
    let basis = lay.basis(Side::R);
    let n = tower.ambient_rank();
    let lift = |images: &[Word]| -> Result<Vec<Word>, Error> {
        let mut out: Vec<Word> = (1..=n as u32).map(Word::generator).collect();
        for (y, img) in basis.iter().zip(images) {
            let g = y.letters()[0].index() as usize;
            out[g - 1] = img.substitute(basis)?;
        }
        Ok(out)
    };
    let images = lift(f.images())?;
    let ext = match f.inverse_images() {
        Some(inv) => Endo::with_inverse(images, lift(inv)?)?,
        None => Endo::new(images)?,
    };
    for a in tower.base_generators() {
        assert_eq!(ext.apply(a)?, *a, "extension moves a base generator");
    }
    Ok(ext)
}

/// `f_b` on `F_{n+1}`: fixes `e1..e_n` and sends `e_{n+1}` to `b^-1 e_{n+1} b`.
pub fn appendix_fb(n: usize, b: &Word) -> Result<Endo, Error> {
    if b.is_identity() {
        return Err(Error::Degenerate("f_b needs a non-trivial b".into()));
    }
    if b.max_generator() as usize > n {
        return Err(Error::RankTooSmall { needed: b.max_generator() as usize, rank: n });
    }
    let mut images: Vec<Word> = (1..=n as u32 + 1).map(Word::generator).collect();
    let mut inverse = images.clone();
    let top = Word::generator(n as u32 + 1);
    images[n] = top.conjugate_by(b);
    inverse[n] = top.conjugate_by(&b.inverse());
    Endo::with_inverse(images, inverse)
}

/// `f^k(a)` for `k = 0..=K`.
pub fn iterate(f: &Endo, a: &Word, k_max: usize) -> Result<Vec<Word>, Error> {
    let mut out = Vec::with_capacity(k_max + 1);
    let mut cur = a.clone();
    out.push(cur.clone());
    for _ in 0..k_max {
        cur = f.apply(&cur)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Canonical conjugacy representatives of `f^k(a)`, `k = 0..=K`, and how many
/// are distinct.
pub fn orbit_conjugacy(f: &Endo, a: &Word, k_max: usize) -> Result<(Vec<Word>, usize), Error> {
    let reps: Vec<Word> = iterate(f, a, k_max)?.iter().map(canonical_conjugacy_rep).collect();
    let mut sorted = reps.clone();
    sorted.sort();
    sorted.dedup();
    Ok((reps, sorted.len()))
}

/// Number of classes among `x_0..x_K` under `eq`, by comparing each against
/// one representative per class found so far.
fn count_classes<T>(items: &[T], eq: impl Fn(&T, &T) -> bool) -> usize {
    let mut reps: Vec<&T> = Vec::new();
    for x in items {
        if !reps.iter().any(|r| eq(r, x)) {
            reps.push(x);
        }
    }
    reps.len()
}

/// Inequivalent pairs `(f^k(a), b)` under the `m`-left-coset relation.
pub fn orbit_left_coset(f: &Endo, a: &Word, b: &Word, m: u32, k_max: usize) -> Result<usize, Error> {
    if b.is_identity() {
        return Err(Error::Degenerate("left coset orbit needs b != 1".into()));
    }
    let orbit = iterate(f, a, k_max)?;
    Ok(count_classes(&orbit, |x, y| eq_left_coset((x, b), (y, b), m)))
}

/// Inequivalent triples `(left, f^k(a), right)` under the `(m, n)`-double-coset relation.
pub fn orbit_double_coset(
    f: &Endo,
    a: &Word,
    left: &Word,
    right: &Word,
    m: u32,
    n: u32,
    k_max: usize,
) -> Result<usize, Error> {
    if left.is_identity() || right.is_identity() {
        return Err(Error::Degenerate("double coset orbit needs non-trivial sides".into()));
    }
    let orbit = iterate(f, a, k_max)?;
    Ok(count_classes(&orbit, |x, y| eq_double_coset((left, x, right), (left, y, right), m, n)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub lengths: Vec<usize>,
    pub lambda_estimate: f64,
    pub r_squared: f64,
}

/// Fits `log |f^k(a)|_cyc` against `k` over `2 <= k <= K`; `λ = exp(slope)`.
pub fn growth_estimate(f: &Endo, a: &Word, k_max: usize) -> Result<GrowthReport, Error> {
    if k_max < 4 {
        return Err(Error::InvalidArgument("growth fit needs K >= 4".into()));
    }
    let lengths: Vec<usize> = iterate(f, a, k_max)?.iter().map(Word::cyclic_length).collect();
    if lengths.iter().any(|&l| l == 0) {
        return Err(Error::Degenerate("zero cyclic length in the orbit".into()));
    }
    let pts: Vec<(f64, f64)> = (2..=k_max).map(|k| (k as f64, (lengths[k] as f64).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    // a constant series is fitted exactly by a flat line
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(GrowthReport { lengths, lambda_estimate: slope.exp(), r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::TowerVariant;
    use crate::imaginaries::eq_conjugacy;

    #[test]
    fn torus_twists() {
        let (a, b) = dehn_twists_torus();
        let bd = w("[e1,e2]");
        assert_eq!(a.apply(&bd).unwrap(), bd);
        assert_eq!(b.apply(&bd).unwrap(), bd);
        assert!(a.compose(&a.inverse().unwrap()).unwrap().is_identity());
        let (m, anosov) = trace_criterion(&a).unwrap();
        assert_eq!(m[0][0] + m[1][1], 2);
        assert!(!anosov);
        assert!(!trace_criterion(&Endo::identity(2)).unwrap().1);
        assert!(trace_criterion(&Endo::identity(3)).is_err());
    }

    #[test]
    fn anosov_example() {
        let f = anosov_candidate();
        assert_eq!(f.images(), &[w("e1 e2"), w("e2 e1 e2")]);
        assert_eq!(f.apply(&w("[e1,e2]")).unwrap(), w("[e1,e2]"));
        let (m, anosov) = trace_criterion(&f).unwrap();
        assert_eq!(m, [[1, 1], [1, 2]]);
        assert!(anosov);
        assert!((spectral_radius_2x2(m) - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn genus2_list() {
        let g = genus2_twist_generators();
        assert!(g.len() >= 2);
        for f in &g {
            assert!(f.compose(&f.inverse().unwrap()).unwrap().is_identity());
        }
        let c = genus2_candidate();
        assert!(SurfacePreset::Genus2_1.fixes_boundary(&c));
        for x in ["e1", "e2", "e3", "e4"] {
            let report = growth_estimate(&c, &w(x), 10).unwrap();
            assert!(report.lambda_estimate > 3.0 && report.r_squared > 0.99, "{x}: {report:?}");
        }
    }

    #[test]
    fn extension_over_tower() {
        let t = Tower::build(0, TowerVariant::Fig1);
        let ext = extend_over_tower(&anosov_candidate(), &t, 0).unwrap();
        assert_eq!(&ext.images()[3..], &[w("e4 e5"), w("e5 e4 e5")]);
        assert_eq!(ext.apply(&w("e3")).unwrap(), w("e3"));
        assert_eq!(ext.apply(&w("[e4,e5]")).unwrap(), w("[e4,e5]"));
        assert!(extend_over_tower(&Endo::identity(2), &t, 0).unwrap().is_identity());
        let bad = Endo::new(vec![w("e2"), w("e1")]).unwrap();
        assert!(extend_over_tower(&bad, &t, 0).is_err());
        let t2 = Tower::build(0, TowerVariant::Fig2);
        let ext2 = extend_over_tower(&genus2_candidate(), &t2, 0).unwrap();
        assert_eq!(ext2.apply(&w("[e4,e5][e6,e7]")).unwrap(), w("[e4,e5][e6,e7]"));
    }

    #[test]
    fn fb_powers() {
        let b = w("e1");
        let f = appendix_fb(2, &b).unwrap();
        let top = w("e3");
        assert_eq!(f.apply(&w("e1")).unwrap(), w("e1"));
        for (k, img) in iterate(&f, &top, 5).unwrap().iter().enumerate() {
            assert!(eq_conjugacy(img, &top));
            assert_eq!(*img, top.conjugate_by(&b.pow(k as i64)));
        }
        assert!(appendix_fb(2, &Word::identity()).is_err());
    }

    #[test]
    fn orbits() {
        let t = Tower::build(0, TowerVariant::Fig1);
        let f = extend_over_tower(&anosov_candidate(), &t, 0).unwrap();
        let bd = w("[e4,e5]");
        assert_eq!(orbit_conjugacy(&f, &w("e4"), 10).unwrap().1, 11);
        assert_eq!(orbit_conjugacy(&f, &bd, 10).unwrap().1, 1);
        assert_eq!(orbit_conjugacy(&Endo::identity(5), &w("e4"), 10).unwrap().1, 1);
        assert_eq!(orbit_left_coset(&f, &w("e4"), &bd, 1, 8).unwrap(), 9);
        assert_eq!(orbit_left_coset(&f, &w("e4"), &bd, 1, 0).unwrap(), 1);
        assert_eq!(orbit_left_coset(&f, &w("e1"), &bd, 1, 8).unwrap(), 1);
        assert_eq!(orbit_double_coset(&f, &w("e4"), &bd, &bd, 1, 1, 8).unwrap(), 9);
        assert_eq!(orbit_double_coset(&Endo::identity(5), &w("e4"), &bd, &bd, 1, 1, 8).unwrap(), 1);
    }

    #[test]
    fn growth() {
        let r = growth_estimate(&anosov_candidate(), &w("e1"), 12).unwrap();
        let expected = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((r.lambda_estimate - expected).abs() / expected < 0.1, "{r:?}");
        assert!(r.r_squared >= 0.99);
        let id = growth_estimate(&Endo::identity(2), &w("e1"), 6).unwrap();
        assert_eq!(id.lambda_estimate, 1.0);
        let (_, b) = dehn_twists_torus();
        let lin = growth_estimate(&b, &w("e2"), 12).unwrap();
        assert!(lin.lambda_estimate < 1.2, "{lin:?}");
        assert!(growth_estimate(&Endo::identity(2), &Word::identity(), 6).is_err());
    }
}
