//! The Itô Hopf algebra `T(L)`: words over the basis of `L` with the sticky
//! shuffle product, deconcatenation coproduct and counit, plus multi-leg
//! elements of `T(L) (x) ... (x) T(L)`.

use std::collections::BTreeMap;

use itertools::Itertools;
use rustc_hash::FxHashMap;
use smallvec::{smallvec, SmallVec};

use crate::algebra::{AlgebraDef, LegKey, LegTensor, Slot};
use crate::error::{Error, Result};
use crate::linear::{accumulate, accumulate_hash, add_maps, into_sorted, merge_hash, scale_map, LinearSpace};
use crate::par;
use crate::scalar::Scalar;

/// Basis word; the empty word is the unit of `T(L)`.
pub type Word = SmallVec<[u16; 6]>;

/// One word per leg.
pub type MultiKey = SmallVec<[Word; 3]>;

pub fn word(letters: &[usize]) -> Word {
    letters.iter().map(|&i| i as u16).collect()
}

/// Sticky shuffles of two basis words, as a sparse combination of words.
///
/// Dynamic programme over prefixes: the last slot of a shuffle of `u[..i]`
/// and `v[..j]` holds `u_i`, `v_j`, or the merged letter `u_i v_j`.
pub fn sticky_shuffle(alg: &AlgebraDef, u: &[u16], v: &[u16]) -> Vec<(Word, Scalar)> {
    if u.is_empty() {
        return vec![(Word::from_slice(v), Scalar::one())];
    }
    if v.is_empty() {
        return vec![(Word::from_slice(u), Scalar::one())];
    }
    let (m, n) = (u.len(), v.len());
    let mut table: Vec<FxHashMap<Word, Scalar>> = vec![FxHashMap::default(); (m + 1) * (n + 1)];
    let at = |i: usize, j: usize| i * (n + 1) + j;
    table[at(0, 0)].insert(Word::new(), Scalar::one());
    for i in 0..=m {
        for j in 0..=n {
            if i == 0 && j == 0 {
                continue;
            }
            let mut cell: FxHashMap<Word, Scalar> = FxHashMap::default();
            let extend = |src: &FxHashMap<Word, Scalar>, letter: u16, c: &Scalar, cell: &mut FxHashMap<Word, Scalar>| {
                for (w, x) in src {
                    let mut w = w.clone();
                    w.push(letter);
                    accumulate_hash(cell, w, x * c);
                }
            };
            let one = Scalar::one();
            if i > 0 {
                extend(&table[at(i - 1, j)], u[i - 1], &one, &mut cell);
            }
            if j > 0 {
                extend(&table[at(i, j - 1)], v[j - 1], &one, &mut cell);
            }
            if i > 0 && j > 0 {
                for (k, c) in alg.product(u[i - 1] as usize, v[j - 1] as usize) {
                    extend(&table[at(i - 1, j - 1)], *k as u16, c, &mut cell);
                }
            }
            cell.retain(|_, c| !c.is_zero());
            table[at(i, j)] = cell;
        }
    }
    let mut out: Vec<(Word, Scalar)> = std::mem::take(&mut table[at(m, n)]).into_iter().collect();
    out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Memo of sticky shuffles, local to one product computation.
#[derive(Default)]
pub(crate) struct ShuffleCache {
    map: FxHashMap<(Word, Word), Vec<(Word, Scalar)>>,
}

impl ShuffleCache {
    pub(crate) fn get(&mut self, alg: &AlgebraDef, u: &Word, v: &Word) -> &[(Word, Scalar)] {
        self.map
            .entry((u.clone(), v.clone()))
            .or_insert_with(|| sticky_shuffle(alg, u, v))
    }
}

fn check_letters<'a>(alg: &AlgebraDef, words: impl Iterator<Item = &'a Word>) -> Result<()> {
    for w in words {
        if let Some(&i) = w.iter().find(|&&i| i as usize >= alg.dim()) {
            return Err(Error::IndexOutOfRange { index: i as usize, dim: alg.dim() });
        }
    }
    Ok(())
}

/// Element of `T(L)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorElt {
    terms: BTreeMap<Word, Scalar>,
}

impl TensorElt {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty word.
    pub fn unit() -> Self {
        Self::basis_word(Word::new())
    }

    pub fn basis_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, Scalar::one());
        Self { terms }
    }

    /// The one-letter word `e_i`.
    pub fn letter(i: usize) -> Self {
        Self::basis_word(smallvec![i as u16])
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            accumulate(&mut out.terms, w, c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, w: &[u16]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest word length present, 0 for the zero element.
    pub fn max_rank(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// The rank-`n` component.
    pub fn rank_part(&self, n: usize) -> Self {
        Self { terms: self.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Word concatenation, i.e. the tensor product inside `T(L)`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                accumulate(&mut out.terms, w, a * b);
            }
        }
        out
    }
}

impl LinearSpace for TensorElt {
    fn zero_like(&self) -> Self {
        Self::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, other: &Self) {
        add_maps(&mut self.terms, &other.terms);
    }

    fn scale(&self, s: &Scalar) -> Self {
        Self { terms: scale_map(&self.terms, s) }
    }
}

/// Sticky shuffle product on `T(L)`.
pub fn ito_product(alg: &AlgebraDef, a: &TensorElt, b: &TensorElt) -> Result<TensorElt> {
    check_letters(alg, a.terms.keys().chain(b.terms.keys()))?;
    Ok(ito_product_unchecked(alg, a, b))
}

pub(crate) fn ito_product_unchecked(alg: &AlgebraDef, a: &TensorElt, b: &TensorElt) -> TensorElt {
    let mut cache = ShuffleCache::default();
    let mut acc = FxHashMap::default();
    for (u, x) in &a.terms {
        for (v, y) in &b.terms {
            let xy = x * y;
            for (w, c) in cache.get(alg, u, v) {
                accumulate_hash(&mut acc, w.clone(), &xy * c);
            }
        }
    }
    TensorElt { terms: into_sorted(acc) }
}

/// `Δ(w) = sum_j w[..j] (x) w[j..]`.
pub fn coproduct(a: &TensorElt) -> MultiTensorElt {
    iterated_coproduct(a, 2)
}

/// Coefficient of the empty word.
pub fn counit(a: &TensorElt) -> Scalar {
    a.coeff(&[])
}

/// `Δ^(m)`: all splittings of each word into `m` consecutive pieces. For
/// `m = 0` this is the counit, as a 0-leg element.
pub fn iterated_coproduct(a: &TensorElt, m: usize) -> MultiTensorElt {
    let mut out = MultiTensorElt::zero(m);
    for (w, c) in &a.terms {
        if m == 0 {
            if w.is_empty() {
                accumulate(&mut out.terms, MultiKey::new(), c.clone());
            }
            continue;
        }
        // m - 1 cut points 0 <= j_1 <= ... <= j_{m-1} <= len
        for cuts in (0..=w.len()).combinations_with_replacement(m - 1) {
            let mut key = MultiKey::with_capacity(m);
            let mut start = 0;
            for &j in cuts.iter().chain(std::iter::once(&w.len())) {
                key.push(Word::from_slice(&w[start..j]));
                start = j;
            }
            accumulate(&mut out.terms, key, c.clone());
        }
    }
    out
}

/// Average over all letter permutations, rank by rank.
pub fn symmetrize(a: &TensorElt) -> TensorElt {
    let mut out = TensorElt::zero();
    for (w, c) in &a.terms {
        let perms: Vec<Vec<usize>> = (0..w.len()).permutations(w.len()).collect();
        let share = c / &Scalar::from_int(perms.len() as i64);
        for p in perms {
            let pw: Word = p.iter().map(|&i| w[i]).collect();
            accumulate(&mut out.terms, pw, share.clone());
        }
    }
    out
}

/// Membership in the symmetric subspace `S(L)`.
pub fn is_symmetric(a: &TensorElt) -> bool {
    symmetrize(a) == *a
}

/// Element of `T(L)^{(x) p}`; `p = 0` gives scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTensorElt {
    legs: usize,
    terms: BTreeMap<MultiKey, Scalar>,
}

impl MultiTensorElt {
    pub fn zero(legs: usize) -> Self {
        Self { legs, terms: BTreeMap::new() }
    }

    pub fn unit(legs: usize) -> Self {
        Self::pure(std::iter::repeat_n(Word::new(), legs).collect(), Scalar::one())
    }

    pub fn pure(key: MultiKey, c: Scalar) -> Self {
        let mut out = Self::zero(key.len());
        accumulate(&mut out.terms, key, c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiKey, Scalar)>>(legs: usize, terms: I) -> Result<Self> {
        let mut out = Self::zero(legs);
        for (k, c) in terms {
            if k.len() != legs {
                return Err(Error::WrongLegCount { expected: legs, found: k.len() });
            }
            accumulate(&mut out.terms, k, c);
        }
        Ok(out)
    }

    /// One-leg element.
    pub fn from_tensor(a: &TensorElt) -> Self {
        Self { legs: 1, terms: a.terms.iter().map(|(w, c)| (smallvec![w.clone()], c.clone())).collect() }
    }

    /// `a (x) b`.
    pub fn two_leg(a: &TensorElt, b: &TensorElt) -> Self {
        Self::from_tensor(a).tensor(&Self::from_tensor(b))
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn terms(&self) -> &BTreeMap<MultiKey, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[Word]) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Legs concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.legs + other.legs);
        for (k1, a) in &self.terms {
            for (k2, b) in &other.terms {
                let mut key = k1.clone();
                key.extend(k2.iter().cloned());
                accumulate(&mut out.terms, key, a * b);
            }
        }
        out
    }

    /// Distinct joint ranks in the support, sorted.
    pub fn joint_ranks(&self) -> Vec<Vec<usize>> {
        let mut ranks: Vec<Vec<usize>> = self.terms.keys().map(|k| k.iter().map(|w| w.len()).collect()).collect();
        ranks.sort();
        ranks.dedup();
        ranks
    }

    /// Restriction to terms of the given joint rank.
    pub fn rank_project(&self, ranks: &[usize]) -> Result<Self> {
        if ranks.len() != self.legs {
            return Err(Error::WrongLegCount { expected: self.legs, found: ranks.len() });
        }
        Ok(self.filter(|k| k.iter().zip(ranks).all(|(w, &r)| w.len() == r)))
    }

    pub(crate) fn filter<F: Fn(&MultiKey) -> bool>(&self, keep: F) -> Self {
        Self {
            legs: self.legs,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Places `self` on the given 1-based legs of a `legs`-fold tensor, empty
    /// words elsewhere.
    pub fn embed(&self, positions: &[usize], legs: usize) -> Result<Self> {
        check_positions(positions, self.legs, legs)?;
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut key: MultiKey = std::iter::repeat_n(Word::new(), legs).collect();
                for (w, &p) in k.iter().zip(positions) {
                    key[p - 1] = w.clone();
                }
                (key, c.clone())
            })
            .collect();
        Ok(Self { legs, terms })
    }

    /// `Δ^(m)` on one leg (1-based); the result has `legs + m - 1` legs.
    pub fn apply_coproduct_to_leg(&self, leg: usize, m: usize) -> Result<Self> {
        if leg == 0 || leg > self.legs {
            return Err(Error::PositionOutOfRange { position: leg, legs: self.legs });
        }
        if m == 0 {
            return Err(Error::InvalidArgument("coproduct power must be at least 1".into()));
        }
        let mut out = Self::zero(self.legs + m - 1);
        for (k, c) in &self.terms {
            let split = iterated_coproduct(&TensorElt::basis_word(k[leg - 1].clone()), m);
            for (pieces, _) in split.terms {
                let mut key: MultiKey = k[..leg - 1].iter().cloned().collect();
                key.extend(pieces);
                key.extend(k[leg..].iter().cloned());
                accumulate(&mut out.terms, key, c.clone());
            }
        }
        Ok(out)
    }

    /// `ε` on one leg (1-based), removing it.
    pub fn apply_counit_to_leg(&self, leg: usize) -> Result<Self> {
        if leg == 0 || leg > self.legs {
            return Err(Error::PositionOutOfRange { position: leg, legs: self.legs });
        }
        let mut out = Self::zero(self.legs - 1);
        for (k, c) in &self.terms {
            if k[leg - 1].is_empty() {
                let mut key = k.clone();
                key.remove(leg - 1);
                accumulate(&mut out.terms, key, c.clone());
            }
        }
        Ok(out)
    }

    /// Swaps the two legs of a 2-leg element.
    pub fn flip_legs(&self) -> Result<Self> {
        if self.legs != 2 {
            return Err(Error::WrongLegCount { expected: 2, found: self.legs });
        }
        Ok(Self {
            legs: 2,
            terms: self.terms.iter().map(|(k, c)| (smallvec![k[1].clone(), k[0].clone()], c.clone())).collect(),
        })
    }

    /// The image under the projection `T(L) -> L'` on every leg, which keeps
    /// words of length at most one. It is an algebra morphism because words of
    /// length at least two span an ideal.
    pub fn project_to_unital(&self) -> LegTensor {
        let terms = self.terms.iter().filter(|(k, _)| k.iter().all(|w| w.len() <= 1)).map(|(k, c)| {
            let key: LegKey = k.iter().map(|w| w.first().map_or(Slot::UNIT, |&i| Slot::basis(i as usize))).collect();
            (key, c.clone())
        });
        LegTensor::from_terms(self.legs, terms).expect("leg count preserved")
    }

    /// Inclusion `L' -> T(L)` on every leg.
    pub fn from_leg_tensor(x: &LegTensor) -> Self {
        let terms = x
            .terms()
            .iter()
            .map(|(k, c)| {
                let key: MultiKey = k.iter().map(|s| s.index().map_or_else(Word::new, |i| smallvec![i as u16])).collect();
                (key, c.clone())
            })
            .collect();
        Self { legs: x.legs(), terms }
    }

    /// [`symmetrize`] applied to every leg.
    pub fn symmetrize_legs(&self) -> Self {
        let mut out = Self::zero(self.legs);
        for (k, c) in &self.terms {
            let mut partial = vec![(MultiKey::new(), c.clone())];
            for w in k {
                let sym = symmetrize(&TensorElt::basis_word(w.clone()));
                partial = partial
                    .iter()
                    .flat_map(|(key, a)| {
                        sym.terms.iter().map(move |(v, b)| {
                            let mut key = key.clone();
                            key.push(v.clone());
                            (key, a * b)
                        })
                    })
                    .collect();
            }
            for (key, a) in partial {
                accumulate(&mut out.terms, key, a);
            }
        }
        out
    }

    /// Single leg as a `TensorElt`.
    pub fn into_tensor(&self) -> Result<TensorElt> {
        if self.legs != 1 {
            return Err(Error::WrongLegCount { expected: 1, found: self.legs });
        }
        Ok(TensorElt::from_terms(self.terms.iter().map(|(k, c)| (k[0].clone(), c.clone()))))
    }
}

fn check_positions(positions: &[usize], from: usize, legs: usize) -> Result<()> {
    if positions.len() != from {
        return Err(Error::WrongLegCount { expected: from, found: positions.len() });
    }
    for (n, &p) in positions.iter().enumerate() {
        if p == 0 || p > legs {
            return Err(Error::PositionOutOfRange { position: p, legs });
        }
        if positions[..n].contains(&p) {
            return Err(Error::RepeatedPosition(p));
        }
    }
    Ok(())
}

impl LinearSpace for MultiTensorElt {
    fn zero_like(&self) -> Self {
        Self::zero(self.legs)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.legs, other.legs, "leg count mismatch");
        add_maps(&mut self.terms, &other.terms);
    }

    fn scale(&self, s: &Scalar) -> Self {
        Self { legs: self.legs, terms: scale_map(&self.terms, s) }
    }
}

/// Leg-wise sticky shuffle product on `T(L)^{(x) p}`.
pub fn multi_ito_product(alg: &AlgebraDef, x: &MultiTensorElt, y: &MultiTensorElt) -> Result<MultiTensorElt> {
    if x.legs != y.legs {
        return Err(Error::LegMismatch { left: x.legs, right: y.legs });
    }
    check_letters(alg, x.terms.keys().chain(y.terms.keys()).flatten())?;
    Ok(multi_ito_product_unchecked(alg, x, y))
}

pub(crate) fn multi_ito_product_unchecked(alg: &AlgebraDef, x: &MultiTensorElt, y: &MultiTensorElt) -> MultiTensorElt {
    let legs = x.legs;
    let left: Vec<(&MultiKey, &Scalar)> = x.terms.iter().collect();
    let right: Vec<(&MultiKey, &Scalar)> = y.terms.iter().collect();
    let (_, acc) = par::fold_reduce(
        &left,
        || (ShuffleCache::default(), FxHashMap::default()),
        |(mut cache, mut acc), (k1, c1)| {
            for (k2, c2) in &right {
                let mut partial: Vec<(MultiKey, Scalar)> = vec![(MultiKey::new(), *c1 * *c2)];
                for leg in 0..legs {
                    let (u, v) = (&k1[leg], &k2[leg]);
                    if u.is_empty() || v.is_empty() {
                        let w = if u.is_empty() { v } else { u };
                        for (key, _) in partial.iter_mut() {
                            key.push(w.clone());
                        }
                        continue;
                    }
                    let shuffles = cache.get(alg, u, v);
                    if shuffles.is_empty() {
                        partial.clear();
                        break;
                    }
                    let mut next = Vec::with_capacity(partial.len() * shuffles.len());
                    for (key, coeff) in &partial {
                        for (w, c) in shuffles {
                            let mut k = key.clone();
                            k.push(w.clone());
                            next.push((k, coeff * c));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    accumulate_hash(&mut acc, k, c);
                }
            }
            (cache, acc)
        },
        |(cache, a), (_, b)| (cache, merge_hash(a, b)),
    );
    MultiTensorElt { legs, terms: into_sorted(acc) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{lk_algebra, lk_r1, K, L};
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn w(letters: &[usize]) -> Word {
        word(letters)
    }

    fn mk(keys: &[&[&[usize]]], coeffs: &[i64]) -> MultiTensorElt {
        let legs = keys[0].len();
        MultiTensorElt::from_terms(
            legs,
            keys.iter().zip(coeffs).map(|(k, &c)| (k.iter().map(|l| w(l)).collect(), s(c))),
        )
        .unwrap()
    }

    fn t(terms: &[(&[usize], i64)]) -> TensorElt {
        TensorElt::from_terms(terms.iter().map(|(l, c)| (w(l), s(*c))))
    }

    // Brute-force oracle: enumerate pairs of order-preserving injections
    // covering {0..p}, independent of the prefix recursion.
    fn shuffle_oracle(alg: &AlgebraDef, u: &[u16], v: &[u16]) -> TensorElt {
        let (m, n) = (u.len(), v.len());
        let mut out = TensorElt::zero();
        for p in m.max(n)..=m + n {
            for a in (0..p).combinations(m) {
                for b in (0..p).combinations(n) {
                    if (0..p).any(|slot| !a.contains(&slot) && !b.contains(&slot)) {
                        continue;
                    }
                    let mut words: Vec<(Word, Scalar)> = vec![(Word::new(), s(1))];
                    for slot in 0..p {
                        let ia = a.iter().position(|&x| x == slot);
                        let ib = b.iter().position(|&x| x == slot);
                        let letters: Vec<(u16, Scalar)> = match (ia, ib) {
                            (Some(i), None) => vec![(u[i], s(1))],
                            (None, Some(j)) => vec![(v[j], s(1))],
                            (Some(i), Some(j)) => alg
                                .product(u[i] as usize, v[j] as usize)
                                .iter()
                                .map(|(k, c)| (*k as u16, c.clone()))
                                .collect(),
                            (None, None) => unreachable!(),
                        };
                        words = words
                            .iter()
                            .flat_map(|(wd, c)| {
                                letters.iter().map(move |(l, d)| {
                                    let mut wd = wd.clone();
                                    wd.push(*l);
                                    (wd, c * d)
                                })
                            })
                            .collect();
                    }
                    out.add_assign(&TensorElt::from_terms(words));
                }
            }
        }
        out
    }

    #[test]
    fn ito_product_examples() {
        let alg = lk_algebra();
        let x = t(&[(&[L, K], 2), (&[K], -1)]);
        assert_eq!(ito_product(&alg, &TensorElt::unit(), &x).unwrap(), x);
        assert_eq!(ito_product(&alg, &x, &TensorElt::unit()).unwrap(), x);
        let lk = ito_product(&alg, &TensorElt::letter(L), &TensorElt::letter(K)).unwrap();
        assert_eq!(lk, t(&[(&[L, K], 1), (&[K, L], 1), (&[L], 1)]));
        let kk = ito_product(&alg, &TensorElt::letter(K), &TensorElt::letter(K)).unwrap();
        assert_eq!(kk, t(&[(&[K, K], 2), (&[K], 1)]));
        // merged letter uses the left operand first: K.L = 0
        let kl = ito_product(&alg, &TensorElt::letter(K), &TensorElt::letter(L)).unwrap();
        assert_eq!(kl, t(&[(&[L, K], 1), (&[K, L], 1)]));
        assert!(ito_product(&alg, &TensorElt::letter(5), &x).is_err());
    }

    #[test]
    fn sticky_shuffle_matches_oracle_on_all_short_words() {
        let alg = lk_algebra();
        let words: Vec<Word> = (0..=3).flat_map(|n| (0..n).map(|_| 0..2u16).multi_cartesian_product().map(Word::from_vec)).collect();
        for u in &words {
            for v in &words {
                let got = TensorElt::from_terms(sticky_shuffle(&alg, u, v));
                assert_eq!(got, shuffle_oracle(&alg, u, v), "{u:?} * {v:?}");
            }
        }
    }

    #[test]
    fn coproduct_and_counit_examples() {
        let unit = coproduct(&TensorElt::unit());
        assert_eq!(unit, MultiTensorElt::unit(2));
        assert_eq!(coproduct(&TensorElt::letter(L)), mk(&[&[&[L], &[]], &[&[], &[L]]], &[1, 1]));
        let d = coproduct(&t(&[(&[L, K], 1)]));
        assert_eq!(d, mk(&[&[&[L, K], &[]], &[&[L], &[K]], &[&[], &[L, K]]], &[1, 1, 1]));
        assert_eq!(d.rank_project(&[1, 1]).unwrap(), mk(&[&[&[L], &[K]]], &[1]));
        assert!(d.rank_project(&[2, 2]).unwrap().is_zero());
        assert!(d.rank_project(&[1]).is_err());

        assert_eq!(counit(&TensorElt::unit()), s(1));
        assert_eq!(counit(&t(&[(&[L, K], 1)])), s(0));
        assert_eq!(counit(&t(&[(&[], 3), (&[K], 2)])), s(3));

        let x = t(&[(&[L, K], 1), (&[K], 4)]);
        assert_eq!(iterated_coproduct(&x, 1), MultiTensorElt::from_tensor(&x));
        assert_eq!(iterated_coproduct(&x, 2), coproduct(&x));
        let d0 = iterated_coproduct(&t(&[(&[], 3), (&[K], 2)]), 0);
        assert_eq!(d0, MultiTensorElt::pure(MultiKey::new(), s(3)));
        let d3 = iterated_coproduct(&t(&[(&[L, K], 1)]), 3);
        assert_eq!(d3.rank_project(&[1, 1, 0]).unwrap(), mk(&[&[&[L], &[K], &[]]], &[1]));
        assert_eq!(d3.len(), 6);

        let lkl = iterated_coproduct(&t(&[(&[L, K, L], 1)]), 2);
        assert_eq!(lkl.rank_project(&[1, 2]).unwrap(), mk(&[&[&[L], &[K, L]]], &[1]));
    }

    #[test]
    fn multi_product_and_leg_operations() {
        let alg = lk_algebra();
        let x = mk(&[&[&[L], &[K]], &[&[K, K], &[]]], &[2, -1]);
        assert_eq!(multi_ito_product(&alg, &MultiTensorElt::unit(2), &x).unwrap(), x);
        let l1 = mk(&[&[&[L], &[]]], &[1]);
        let k2 = mk(&[&[&[], &[K]]], &[1]);
        assert_eq!(multi_ito_product(&alg, &l1, &k2).unwrap(), mk(&[&[&[L], &[K]]], &[1]));

        let a = mk(&[&[&[L], &[K]]], &[1]);
        let b = mk(&[&[&[K], &[K]]], &[1]);
        let leg1 = ito_product(&alg, &TensorElt::letter(L), &TensorElt::letter(K)).unwrap();
        let leg2 = ito_product(&alg, &TensorElt::letter(K), &TensorElt::letter(K)).unwrap();
        assert_eq!(multi_ito_product(&alg, &a, &b).unwrap(), MultiTensorElt::two_leg(&leg1, &leg2));
        assert!(multi_ito_product(&alg, &a, &MultiTensorElt::unit(3)).is_err());

        let r = MultiTensorElt::from_leg_tensor(&lk_r1());
        let r12 = r.embed(&[1, 2], 3).unwrap();
        assert_eq!(r12.coeff(&[w(&[L]), w(&[K]), w(&[])]), s(1));
        assert!(r.embed(&[1, 1], 3).is_err());
        assert!(r.embed(&[1, 4], 3).is_err());

        assert_eq!(x.apply_coproduct_to_leg(1, 1).unwrap(), x);
        assert_eq!(MultiTensorElt::unit(2).apply_coproduct_to_leg(1, 2).unwrap(), MultiTensorElt::unit(3));
        let expect = r.embed(&[1, 3], 3).unwrap().add(&r.embed(&[2, 3], 3).unwrap());
        assert_eq!(r.apply_coproduct_to_leg(1, 2).unwrap(), expect);
        assert!(r.apply_coproduct_to_leg(3, 2).is_err());

        let prim = mk(&[&[&[L], &[]], &[&[], &[L]]], &[1, 1]);
        assert_eq!(prim.flip_legs().unwrap(), prim);
        assert_eq!(mk(&[&[&[L], &[K, K]]], &[1]).flip_legs().unwrap(), mk(&[&[&[K, K], &[L]]], &[1]));
        assert_eq!(r.flip_legs().unwrap(), r.neg());
        assert!(MultiTensorElt::unit(3).flip_legs().is_err());

        assert_eq!(r.project_to_unital(), lk_r1());
        assert!(mk(&[&[&[L, L], &[]]], &[1]).project_to_unital().is_zero());
    }

    #[test]
    fn symmetric_subspace() {
        let half = Scalar::ratio(1, 2);
        let sym = symmetrize(&t(&[(&[L, K], 1)]));
        assert_eq!(sym, TensorElt::from_terms([(w(&[L, K]), half.clone()), (w(&[K, L]), half)]));
        assert!(is_symmetric(&t(&[(&[L], 3), (&[K], 1), (&[], 2)])));
        assert!(!is_symmetric(&t(&[(&[L, K], 1), (&[K, L], -1)])));
        assert!(is_symmetric(&sym));
    }

    fn arb_tensor(max_rank: usize) -> impl Strategy<Value = TensorElt> {
        proptest::collection::vec((proptest::collection::vec(0u16..2, 0..=max_rank), -3i64..=3), 0..4)
            .prop_map(|ts| TensorElt::from_terms(ts.into_iter().map(|(l, c)| (Word::from_vec(l), s(c)))))
    }

    fn arb_multi(legs: usize, max_rank: usize) -> impl Strategy<Value = MultiTensorElt> {
        proptest::collection::vec(
            (proptest::collection::vec(proptest::collection::vec(0u16..2, 0..=max_rank), legs), -2i64..=2),
            0..4,
        )
        .prop_map(move |ts| {
            MultiTensorElt::from_terms(legs, ts.into_iter().map(|(k, c)| (k.into_iter().map(Word::from_vec).collect(), s(c))))
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn ito_associative(a in arb_tensor(3), b in arb_tensor(3), c in arb_tensor(2)) {
            let alg = lk_algebra();
            let ab_c = ito_product(&alg, &ito_product(&alg, &a, &b).unwrap(), &c).unwrap();
            let a_bc = ito_product(&alg, &a, &ito_product(&alg, &b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }

        #[test]
        fn coproduct_coassociative_counital(a in arb_tensor(4)) {
            let d = coproduct(&a);
            prop_assert_eq!(d.apply_coproduct_to_leg(1, 2).unwrap(), d.apply_coproduct_to_leg(2, 2).unwrap());
            prop_assert_eq!(d.apply_counit_to_leg(1).unwrap(), MultiTensorElt::from_tensor(&a));
            prop_assert_eq!(d.apply_counit_to_leg(2).unwrap(), MultiTensorElt::from_tensor(&a));
        }

        #[test]
        fn coproduct_multiplicative(a in arb_tensor(3), b in arb_tensor(3)) {
            let alg = lk_algebra();
            let lhs = coproduct(&ito_product(&alg, &a, &b).unwrap());
            let rhs = multi_ito_product(&alg, &coproduct(&a), &coproduct(&b)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn projection_formula(a in arb_tensor(4), m in 1usize..=4) {
            let ones = vec![1; m];
            let lhs = iterated_coproduct(&a, m).rank_project(&ones).unwrap();
            let rank_m = a.rank_part(m);
            let concat_legs = TensorElt::from_terms(lhs.terms().iter().map(|(k, c)| {
                (k.iter().flat_map(|x| x.iter().copied()).collect::<Word>(), c.clone())
            }));
            prop_assert_eq!(concat_legs, rank_m);
        }

        #[test]
        fn symmetric_closure(a in arb_tensor(2), b in arb_tensor(2)) {
            let alg = lk_algebra();
            let p = ito_product(&alg, &symmetrize(&a), &symmetrize(&b)).unwrap();
            prop_assert!(is_symmetric(&p));
        }

        #[test]
        fn leg_coproducts_compose(x in arb_multi(2, 3), m in 1usize..=3, m2 in 1usize..=3) {
            // apply m on leg 1, then m2 on the first produced leg
            let once = x.apply_coproduct_to_leg(1, m + m2 - 1).unwrap();
            let twice = x.apply_coproduct_to_leg(1, m).unwrap().apply_coproduct_to_leg(1, m2).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn embed_tensor_coproduct(a in arb_tensor(3), b in arb_tensor(2)) {
            let x = MultiTensorElt::two_leg(&a, &b);
            let lhs = x.apply_coproduct_to_leg(1, 2).unwrap();
            prop_assert_eq!(lhs, coproduct(&a).tensor(&MultiTensorElt::from_tensor(&b)));
        }

        #[test]
        fn projection_is_multiplicative(x in arb_multi(2, 2), y in arb_multi(2, 2)) {
            let alg = lk_algebra();
            let lhs = multi_ito_product(&alg, &x, &y).unwrap().project_to_unital();
            let rhs = alg.mul_leg(&x.project_to_unital(), &y.project_to_unital()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn disjoint_embeddings_commute(x in arb_multi(1, 2), y in arb_multi(1, 2)) {
            let alg = lk_algebra();
            let a = x.embed(&[2], 3).unwrap();
            let b = y.embed(&[3], 3).unwrap();
            prop_assert_eq!(multi_ito_product(&alg, &a, &b).unwrap(), multi_ito_product(&alg, &b, &a).unwrap());
        }
    }
}
