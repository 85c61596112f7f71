//! Free groups written as iterated amalgams over commutator edge groups.
//!
//! With `P_j = (e_{2j+2}, e_{2j+3})`, the first variant lives in `F_{2i+5}`
//! and starts from `A = <e1, e2, e3, [P_1], .., [P_{i+1}]>`; layer `k` glues
//! on `<P_{i+1-k}>` along `[P_{i+1-k}]`. The second variant lives in
//! `F_{2i+7}`, starts from
//! `B = <e1, e2, e3, [P_1], .., [P_i], [P_{i+1}][P_{i+2}]>`, glues the genus
//! two piece `<P_{i+1}, P_{i+2}>` first and then `P_i, .., P_1`.

use serde::Serialize;

use super::{Amalgam, NormalFormElement, Side};
use crate::error::Error;
use crate::stallings::SubgroupAutomaton;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TowerVariant {
    Fig1,
    Fig2,
}

/// One amalgam `left *_C right` inside the ambient free group; `left` is the
/// previous stage and `left ∪ right` generates the next one.
#[derive(Clone, Debug)]
pub struct TowerLayer {
    pub amalgam: Amalgam,
    pub left_basis: Vec<Word>,
    pub right_basis: Vec<Word>,
    left: SubgroupAutomaton,
    right: SubgroupAutomaton,
}

#[derive(Clone, Debug)]
pub struct Tower {
    stage: usize,
    variant: TowerVariant,
    ambient_rank: usize,
    base_generators: Vec<Word>,
    base: SubgroupAutomaton,
    layers: Vec<TowerLayer>,
}

fn e(i: usize) -> Word {
    Word::generator(i as u32)
}

/// `[P_j]` as an ambient word.
fn pair_commutator(j: usize) -> Word {
    Word::commutator(&e(2 * j + 2), &e(2 * j + 3))
}

fn pair_letters(j: usize) -> [Word; 2] {
    [e(2 * j + 2), e(2 * j + 3)]
}

impl TowerLayer {
    fn new(left_basis: Vec<Word>, u_index: usize, right_basis: Vec<Word>, v: Word, ambient: usize) -> TowerLayer {
        let amalgam = Amalgam::new(left_basis.len(), right_basis.len(), e(u_index), v)
            .expect("tower edge words are primitive");
        let left = SubgroupAutomaton::build_in(&left_basis, ambient);
        let right = SubgroupAutomaton::build_in(&right_basis, ambient);
        TowerLayer { amalgam, left_basis, right_basis, left, right }
    }

    pub fn basis(&self, side: Side) -> &[Word] {
        match side {
            Side::L => &self.left_basis,
            Side::R => &self.right_basis,
        }
    }

    pub fn factor(&self, side: Side) -> &SubgroupAutomaton {
        match side {
            Side::L => &self.left,
            Side::R => &self.right,
        }
    }

    /// The ambient word of the edge generator, read in the left basis.
    pub fn edge_word(&self) -> Word {
        self.amalgam.u().substitute(&self.left_basis).expect("u is in the left alphabet")
    }
}

impl Tower {
    pub fn build(i: usize, variant: TowerVariant) -> Tower {
        match variant {
            TowerVariant::Fig1 => Self::fig1(i),
            TowerVariant::Fig2 => Self::fig2(i),
        }
    }

    fn fig1(i: usize) -> Tower {
        let ambient = 2 * i + 5;
        let mut base_generators = vec![e(1), e(2), e(3)];
        base_generators.extend((1..=i + 1).map(pair_commutator));
        let mut layers = Vec::new();
        for k in 0..=i {
            let open = i + 1 - k;
            let mut left = vec![e(1), e(2), e(3)];
            left.extend((1..=open).map(pair_commutator));
            left.extend((open + 1..=i + 1).flat_map(pair_letters));
            let right = pair_letters(open).to_vec();
            let v = Word::commutator(&e(1), &e(2));
            layers.push(TowerLayer::new(left, 3 + open, right, v, ambient));
        }
        Self::assemble(i, TowerVariant::Fig1, ambient, base_generators, layers)
    }

    fn fig2(i: usize) -> Tower {
        let ambient = 2 * i + 7;
        let mut base_generators = vec![e(1), e(2), e(3)];
        base_generators.extend((1..=i).map(pair_commutator));
        base_generators.push(pair_commutator(i + 1).multiply(&pair_commutator(i + 2)));
        let mut layers = Vec::new();
        let genus_two: Vec<Word> = pair_letters(i + 1).into_iter().chain(pair_letters(i + 2)).collect();
        let v = Word::commutator(&e(1), &e(2)).multiply(&Word::commutator(&e(3), &e(4)));
        layers.push(TowerLayer::new(base_generators.clone(), base_generators.len(), genus_two, v, ambient));
        for k in 1..=i {
            let open = i + 1 - k;
            let mut left = vec![e(1), e(2), e(3)];
            left.extend((1..=open).map(pair_commutator));
            left.extend((open + 1..=i + 2).flat_map(pair_letters));
            let right = pair_letters(open).to_vec();
            let v = Word::commutator(&e(1), &e(2));
            layers.push(TowerLayer::new(left, 3 + open, right, v, ambient));
        }
        Self::assemble(i, TowerVariant::Fig2, ambient, base_generators, layers)
    }

    fn assemble(
        stage: usize,
        variant: TowerVariant,
        ambient_rank: usize,
        base_generators: Vec<Word>,
        layers: Vec<TowerLayer>,
    ) -> Tower {
        let base = SubgroupAutomaton::build_in(&base_generators, ambient_rank);
        Tower { stage, variant, ambient_rank, base_generators, base, layers }
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn variant(&self) -> TowerVariant {
        self.variant
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn base_generators(&self) -> &[Word] {
        &self.base_generators
    }

    pub fn base(&self) -> &SubgroupAutomaton {
        &self.base
    }

    pub fn layers(&self) -> &[TowerLayer] {
        &self.layers
    }

    pub fn layer(&self, k: usize) -> Result<&TowerLayer, Error> {
        self.layers
            .get(k)
            .ok_or_else(|| Error::InvalidArgument(format!("tower has {} layers, no layer {k}", self.layers.len())))
    }

    /// Splits `w` into subwords lying alternately in the two factors of
    /// `layer`, each written in that factor's basis. Splits are only tried at
    /// letter boundaries of the reduced word; among those the fewest syllables
    /// win. Fails when no split exists within `4|w|` syllables.
    pub fn tower_syllables(&self, layer: usize, w: &Word) -> Result<Vec<(Side, Word)>, Error> {
        let lay = self.layer(layer)?;
        let n = w.len();
        let letters = w.letters();
        // best[q][s]: fewest syllables covering letters[..q], last one on side s
        let mut best: Vec<[Option<(usize, usize)>; 2]> = vec![[None, None]; n + 1];
        let sides = [Side::L, Side::R];
        let reach_from = |p: usize, best: &mut Vec<[Option<(usize, usize)>; 2]>| {
            for (si, side) in sides.iter().enumerate() {
                let before = if p == 0 { Some(0) } else { best[p][1 - si].map(|(c, _)| c) };
                let Some(count) = before else { continue };
                let aut = lay.factor(*side);
                let mut state = 0usize;
                for q in p..n {
                    match aut.step(state, letters[q]) {
                        Some(s) => state = s,
                        None => break,
                    }
                    if state == 0 && best[q + 1][si].map_or(true, |(c, _)| count + 1 < c) {
                        best[q + 1][si] = Some((count + 1, p));
                    }
                }
            }
        };
        for p in 0..n {
            reach_from(p, &mut best);
        }
        let horizon = 4 * n;
        let end = if n == 0 {
            return Ok(Vec::new());
        } else {
            [0, 1].into_iter().filter_map(|si| best[n][si].map(|(c, _)| (c, si))).min()
        };
        let Some((count, mut si)) = end.filter(|(c, _)| *c <= horizon.max(1)) else {
            return Err(Error::NotFactorizable { word: w.to_string(), horizon });
        };
        let mut out = Vec::with_capacity(count);
        let mut q = n;
        while q > 0 {
            let (_, p) = best[q][si].expect("reconstruction follows recorded splits");
            let piece = Word::from_letters(letters[p..q].iter().copied());
            let side = sides[si];
            let expressed = lay.factor(side).express(&piece).expect("piece was accepted by the automaton");
            out.push((side, expressed));
            q = p;
            si = 1 - si;
        }
        out.reverse();
        Ok(out)
    }

    pub fn normal_form(&self, layer: usize, w: &Word) -> Result<NormalFormElement, Error> {
        let input = self.tower_syllables(layer, w)?;
        Ok(self.layer(layer)?.amalgam.normal_form(&input))
    }

    /// Ambient word of a normal form of `layer`.
    pub fn flatten(&self, layer: usize, g: &NormalFormElement) -> Result<Word, Error> {
        let lay = self.layer(layer)?;
        let mut out = lay.edge_word().pow(g.c_exponent);
        for (side, s) in &g.syllables {
            out.mul_assign(&s.substitute(lay.basis(*side))?);
        }
        Ok(out)
    }
}
