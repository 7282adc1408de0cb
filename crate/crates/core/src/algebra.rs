//! Finite-dimensional associative algebras given by structure constants, their
//! unitalization `L' = span{1} + L`, and multi-leg tensors over `L'`.

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::linear::{accumulate, accumulate_hash, add_maps, into_sorted, merge_hash, scale_map, LinearSpace};
use crate::par;
use crate::scalar::Scalar;

/// Sparse linear combination of basis indices.
pub type Combo = Vec<(usize, Scalar)>;

/// A nonunital associative algebra with basis `e_0 .. e_{dim-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDef {
    names: Vec<String>,
    // table[i][j] = e_i e_j, sorted by basis index, zeros omitted
    table: Vec<Vec<Combo>>,
}

/// Outcome of the exhaustive associativity check.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AssociativityReport {
    /// 0-based triples `(i, j, k)` with `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub failures: Vec<(usize, usize, usize)>,
}

impl AssociativityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

impl AlgebraDef {
    /// Builds an algebra from `(i, j, k, c)` entries meaning `e_i e_j` has
    /// coefficient `c` on `e_k` (0-based). Associativity is not checked; call
    /// [`AlgebraDef::validated`] for that.
    pub fn new<I>(names: Vec<String>, products: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, Scalar)>,
    {
        let dim = names.len();
        if dim == 0 {
            return Err(Error::EmptyAlgebra);
        }
        if dim >= u16::MAX as usize {
            return Err(Error::InvalidArgument(format!("dimension {dim} too large")));
        }
        for (n, name) in names.iter().enumerate() {
            if !valid_name(name) || names[..n].contains(name) {
                return Err(Error::BadBasisName(name.clone()));
            }
        }
        let mut dense: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
        for (i, j, k, c) in products {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            if dense.insert((i, j, k), c).is_some() {
                return Err(Error::DuplicateStructureConstant(i, j, k));
            }
        }
        let mut table = vec![vec![Combo::new(); dim]; dim];
        for ((i, j, k), c) in dense {
            if !c.is_zero() {
                table[i][j].push((k, c));
            }
        }
        Ok(Self { names, table })
    }

    /// Same as [`AlgebraDef::new`] with default basis names `e1, e2, ...`.
    pub fn with_dim<I>(dim: usize, products: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, Scalar)>,
    {
        Self::new((1..=dim).map(|i| format!("e{i}")).collect(), products)
    }

    /// Rejects non-associative structure constants, naming the first bad triple.
    pub fn validated(self) -> Result<Self> {
        match self.check_associativity().failures.first() {
            Some(&(i, j, k)) => Err(Error::NotAssociative(i, j, k)),
            None => Ok(self),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `e_i e_j` as a sparse combination.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i][j]
    }

    /// All nonzero structure constants `(i, j, k, c)`, sorted.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> + '_ {
        self.table.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(j, combo)| combo.iter().map(move |(k, c)| (i, j, *k, c)))
        })
    }

    pub fn basis(&self, i: usize) -> AlgebraElt {
        AlgebraElt::basis(self.dim(), i)
    }

    fn mul_combo(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, s) in &self.table[i][j] {
                    out[*k] += &(&c * s);
                }
            }
        }
        out
    }

    /// Exhaustive check of `(e_i e_j) e_k = e_i (e_j e_k)` over all basis triples.
    pub fn check_associativity(&self) -> AssociativityReport {
        let d = self.dim();
        let mut failures = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (ei, ej, ek) = (self.basis(i), self.basis(j), self.basis(k));
                    let left = self.mul_combo(&self.mul_combo(&ei.0, &ej.0), &ek.0);
                    let right = self.mul_combo(&ei.0, &self.mul_combo(&ej.0, &ek.0));
                    if left != right {
                        failures.push((i, j, k));
                    }
                }
            }
        }
        AssociativityReport { failures }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: n });
        }
        Ok(())
    }

    /// Bilinear product in `L`.
    pub fn mul(&self, a: &AlgebraElt, b: &AlgebraElt) -> Result<AlgebraElt> {
        self.check_dim(a.dim())?;
        self.check_dim(b.dim())?;
        Ok(AlgebraElt(self.mul_combo(&a.0, &b.0)))
    }

    /// Product in the unitalization `L'`.
    pub fn mul_unital(&self, a: &UnitalElt, b: &UnitalElt) -> Result<UnitalElt> {
        let body = self.mul(&a.body, &b.body)?;
        let body = body.add(&b.body.scale(&a.unit)).add(&a.body.scale(&b.unit));
        Ok(UnitalElt { unit: &a.unit * &b.unit, body })
    }

    /// Product of two slots of `L'`, as a combination of slots.
    #[inline]
    pub(crate) fn mul_slots(&self, a: Slot, b: Slot) -> SmallVec<[(Slot, Scalar); 2]> {
        match (a.index(), b.index()) {
            (None, _) => smallvec![(b, Scalar::one())],
            (_, None) => smallvec![(a, Scalar::one())],
            (Some(i), Some(j)) => self.table[i][j].iter().map(|(k, c)| (Slot::basis(*k), c.clone())).collect(),
        }
    }

    fn check_slots(&self, x: &LegTensor) -> Result<()> {
        for key in x.terms.keys() {
            for s in key {
                if let Some(i) = s.index() {
                    if i >= self.dim() {
                        return Err(Error::IndexOutOfRange { index: i, dim: self.dim() });
                    }
                }
            }
        }
        Ok(())
    }

    /// Leg-wise product in `L' (x) ... (x) L'`.
    pub fn mul_leg(&self, x: &LegTensor, y: &LegTensor) -> Result<LegTensor> {
        if x.legs != y.legs {
            return Err(Error::LegMismatch { left: x.legs, right: y.legs });
        }
        self.check_slots(x)?;
        self.check_slots(y)?;
        Ok(self.mul_leg_unchecked(x, y))
    }

    pub(crate) fn mul_leg_unchecked(&self, x: &LegTensor, y: &LegTensor) -> LegTensor {
        let legs = x.legs;
        let left: Vec<(&LegKey, &Scalar)> = x.terms.iter().collect();
        let right: Vec<(&LegKey, &Scalar)> = y.terms.iter().collect();
        let acc = par::fold_reduce(
            &left,
            FxHashMap::default,
            |mut acc, (k1, c1)| {
                for (k2, c2) in &right {
                    let mut partial: Vec<(LegKey, Scalar)> = vec![(LegKey::new(), *c1 * *c2)];
                    for leg in 0..legs {
                        let prods = self.mul_slots(k1[leg], k2[leg]);
                        if prods.is_empty() {
                            partial.clear();
                            break;
                        }
                        if prods.len() == 1 {
                            let (s, c) = &prods[0];
                            for (key, coeff) in partial.iter_mut() {
                                key.push(*s);
                                if !c.is_one() {
                                    *coeff *= c;
                                }
                            }
                        } else {
                            let mut next = Vec::with_capacity(partial.len() * prods.len());
                            for (key, coeff) in &partial {
                                for (s, c) in &prods {
                                    let mut k = key.clone();
                                    k.push(*s);
                                    next.push((k, coeff * c));
                                }
                            }
                            partial = next;
                        }
                    }
                    for (k, c) in partial {
                        accumulate_hash(&mut acc, k, c);
                    }
                }
                acc
            },
            merge_hash,
        );
        LegTensor { legs, terms: into_sorted(acc) }
    }

    /// `ab - ba`.
    pub fn commutator(&self, a: &LegTensor, b: &LegTensor) -> Result<LegTensor> {
        Ok(self.mul_leg(a, b)?.sub(&self.mul_leg(b, a)?))
    }
}

/// Element of `L` as a dense coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElt(pub Vec<Scalar>);

impl AlgebraElt {
    pub fn zero(dim: usize) -> Self {
        Self(vec![Scalar::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![Scalar::zero(); dim];
        v[i] = Scalar::one();
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.0[i]
    }

    /// Nonzero `(index, coefficient)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

impl LinearSpace for AlgebraElt {
    fn zero_like(&self) -> Self {
        Self::zero(self.dim())
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    fn scale(&self, s: &Scalar) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }
}

/// Element `unit * 1 + body` of `L'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitalElt {
    pub unit: Scalar,
    pub body: AlgebraElt,
}

impl UnitalElt {
    pub fn one(dim: usize) -> Self {
        Self { unit: Scalar::one(), body: AlgebraElt::zero(dim) }
    }

    pub fn from_body(body: AlgebraElt) -> Self {
        Self { unit: Scalar::zero(), body }
    }
}

impl LinearSpace for UnitalElt {
    fn zero_like(&self) -> Self {
        Self { unit: Scalar::zero(), body: self.body.zero_like() }
    }

    fn is_zero(&self) -> bool {
        self.unit.is_zero() && self.body.is_zero()
    }

    fn add_assign(&mut self, other: &Self) {
        self.unit += &other.unit;
        self.body.add_assign(&other.body);
    }

    fn scale(&self, s: &Scalar) -> Self {
        Self { unit: &self.unit * s, body: self.body.scale(s) }
    }
}

/// Basis element of `L'`: the unit or some `e_i`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot(u16);

impl Slot {
    pub const UNIT: Slot = Slot(0);

    pub fn basis(i: usize) -> Self {
        Slot(i as u16 + 1)
    }

    #[inline]
    pub fn index(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0 as usize - 1)
    }

    pub fn is_unit(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index() {
            None => write!(f, "1"),
            Some(i) => write!(f, "e{}", i + 1),
        }
    }
}

pub type LegKey = SmallVec<[Slot; 8]>;

/// Element of the `p`-fold tensor power of `L'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegTensor {
    legs: usize,
    terms: BTreeMap<LegKey, Scalar>,
}

impl LegTensor {
    pub fn zero(legs: usize) -> Self {
        Self { legs, terms: BTreeMap::new() }
    }

    /// `1 (x) 1 (x) ... (x) 1`.
    pub fn unit(legs: usize) -> Self {
        Self::pure(std::iter::repeat_n(Slot::UNIT, legs).collect(), Scalar::one())
    }

    pub fn pure(key: LegKey, coeff: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, key.clone(), coeff);
        Self { legs: key.len(), terms }
    }

    pub fn from_terms<I>(legs: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LegKey, Scalar)>,
    {
        let mut out = Self::zero(legs);
        for (k, c) in terms {
            if k.len() != legs {
                return Err(Error::WrongLegCount { expected: legs, found: k.len() });
            }
            accumulate(&mut out.terms, k, c);
        }
        Ok(out)
    }

    /// `a (x) b` for `a, b` in `L`.
    pub fn two_leg(a: &AlgebraElt, b: &AlgebraElt) -> Self {
        let mut out = Self::zero(2);
        for (i, ca) in a.support() {
            for (j, cb) in b.support() {
                accumulate(&mut out.terms, smallvec![Slot::basis(i), Slot::basis(j)], ca * cb);
            }
        }
        out
    }

    /// `x` placed on leg `leg` (1-based) with units elsewhere.
    pub fn on_leg(legs: usize, leg: usize, x: &UnitalElt) -> Result<Self> {
        if leg == 0 || leg > legs {
            return Err(Error::PositionOutOfRange { position: leg, legs });
        }
        let mut out = Self::zero(legs);
        let mut key: LegKey = std::iter::repeat_n(Slot::UNIT, legs).collect();
        accumulate(&mut out.terms, key.clone(), x.unit.clone());
        for (i, c) in x.body.support() {
            key[leg - 1] = Slot::basis(i);
            accumulate(&mut out.terms, key.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn terms(&self) -> &BTreeMap<LegKey, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[Slot]) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Coefficient of the all-unit term.
    pub fn unit_coeff(&self) -> Scalar {
        self.terms
            .iter()
            .find(|(k, _)| k.iter().all(|s| s.is_unit()))
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    /// Restriction to terms with no unit slot, i.e. the part in `L (x) ... (x) L`.
    pub fn body_part(&self) -> Self {
        Self {
            legs: self.legs,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.iter().all(|s| !s.is_unit()))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Restriction to terms whose unit pattern matches `in_l` (`true` = leg in `L`).
    pub fn pattern_part(&self, in_l: &[bool]) -> Self {
        Self {
            legs: self.legs,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.iter().zip(in_l).all(|(s, &b)| s.is_unit() != b))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// True when every term lies in `L (x) ... (x) L`.
    pub fn is_pure_body(&self) -> bool {
        self.terms.keys().all(|k| k.iter().all(|s| !s.is_unit()))
    }

    /// Places `self` on the given 1-based legs of a `legs`-fold tensor.
    pub fn leg_embed(&self, positions: &[usize], legs: usize) -> Result<Self> {
        if positions.len() != self.legs {
            return Err(Error::WrongLegCount { expected: self.legs, found: positions.len() });
        }
        for (n, &p) in positions.iter().enumerate() {
            if p == 0 || p > legs {
                return Err(Error::PositionOutOfRange { position: p, legs });
            }
            if positions[..n].contains(&p) {
                return Err(Error::RepeatedPosition(p));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut key: LegKey = std::iter::repeat_n(Slot::UNIT, legs).collect();
                for (s, &p) in k.iter().zip(positions) {
                    key[p - 1] = *s;
                }
                (key, c.clone())
            })
            .collect();
        Ok(Self { legs, terms })
    }

    /// Exchanges the two legs.
    pub fn flip_21(&self) -> Result<Self> {
        if self.legs != 2 {
            return Err(Error::WrongLegCount { expected: 2, found: self.legs });
        }
        Ok(Self {
            legs: 2,
            terms: self.terms.iter().map(|(k, c)| (smallvec![k[1], k[0]], c.clone())).collect(),
        })
    }

    /// `self (x) other`, legs concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.legs + other.legs);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut key = k1.clone();
                key.extend_from_slice(k2);
                accumulate(&mut out.terms, key, c1 * c2);
            }
        }
        out
    }
}

impl LinearSpace for LegTensor {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{lk_algebra, lk_r1, K, L};
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn key(slots: &[Option<usize>]) -> LegKey {
        slots.iter().map(|s| s.map_or(Slot::UNIT, Slot::basis)).collect()
    }

    #[test]
    fn lk_products() {
        let alg = lk_algebra();
        let (l, k) = (alg.basis(L), alg.basis(K));
        assert_eq!(alg.mul(&l, &k).unwrap(), l);
        assert!(alg.mul(&k, &l).unwrap().is_zero());
        assert_eq!(alg.mul(&k, &k).unwrap(), k);
        assert!(alg.mul(&l, &l).unwrap().is_zero());
        assert!(alg.mul(&AlgebraElt::zero(2), &k).unwrap().is_zero());
        assert!(matches!(
            alg.mul(&AlgebraElt::zero(3), &k),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn associativity_reports() {
        assert!(lk_algebra().check_associativity().passed());
        // e1 e1 = e2, e2 e1 = e1
        let bad = AlgebraDef::with_dim(2, [(0, 0, 1, s(1)), (1, 0, 0, s(1))]).unwrap();
        let report = bad.check_associativity();
        assert_eq!(report.failures.first(), Some(&(0, 0, 0)));
        assert_eq!(bad.validated().unwrap_err(), Error::NotAssociative(0, 0, 0));
        let idem = AlgebraDef::with_dim(1, [(0, 0, 0, s(1))]).unwrap();
        assert!(idem.check_associativity().passed());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(AlgebraDef::with_dim(0, []).unwrap_err(), Error::EmptyAlgebra);
        assert!(matches!(
            AlgebraDef::with_dim(2, [(0, 2, 0, s(1))]),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        ));
        assert_eq!(
            AlgebraDef::with_dim(2, [(0, 1, 0, s(1)), (0, 1, 0, s(2))]).unwrap_err(),
            Error::DuplicateStructureConstant(0, 1, 0)
        );
        assert!(AlgebraDef::new(vec!["a".into(), "a".into()], []).is_err());
        assert!(AlgebraDef::new(vec!["1x".into()], []).is_err());
    }

    #[test]
    fn leg_products_and_embeddings() {
        let alg = lk_algebra();
        let r1 = lk_r1();
        let unit3 = LegTensor::unit(3);
        let x = r1.leg_embed(&[1, 3], 3).unwrap();
        assert_eq!(alg.mul_leg(&unit3, &x).unwrap(), x);

        let r12 = r1.leg_embed(&[1, 2], 3).unwrap();
        let r13 = r1.leg_embed(&[1, 3], 3).unwrap();
        let r23 = r1.leg_embed(&[2, 3], 3).unwrap();
        let expect12 = LegTensor::from_terms(
            3,
            [(key(&[Some(L), Some(K), None]), s(1)), (key(&[Some(K), Some(L), None]), s(-1))],
        )
        .unwrap();
        assert_eq!(r12, expect12);
        let expect13 = LegTensor::from_terms(
            3,
            [(key(&[Some(L), None, Some(K)]), s(1)), (key(&[Some(K), None, Some(L)]), s(-1))],
        )
        .unwrap();
        assert_eq!(r13, expect13);

        let lhs = alg.mul_leg(&alg.mul_leg(&r12, &r13).unwrap(), &r23).unwrap();
        let rhs = alg.mul_leg(&alg.mul_leg(&r23, &r13).unwrap(), &r12).unwrap();
        assert!(lhs.is_zero());
        assert!(rhs.is_zero());

        let lk = |a: usize| LegTensor::pure(key(&[Some(a), None]), s(1));
        assert_eq!(alg.mul_leg(&lk(L), &lk(K)).unwrap(), lk(L));

        assert!(matches!(alg.mul_leg(&r12, &r1), Err(Error::LegMismatch { .. })));
        assert!(matches!(r1.leg_embed(&[1, 4], 3), Err(Error::PositionOutOfRange { .. })));
        assert!(matches!(r1.leg_embed(&[2, 2], 3), Err(Error::RepeatedPosition(2))));
        let u1 = LegTensor::unit(1);
        assert_eq!(u1.leg_embed(&[2], 3).unwrap(), unit3);
    }

    #[test]
    fn commutators_with_r1() {
        let alg = lk_algebra();
        let r1 = lk_r1();
        let on = |leg: usize, i: usize| LegTensor::on_leg(2, leg, &UnitalElt::from_body(alg.basis(i))).unwrap();
        let ll = LegTensor::two_leg(&alg.basis(L), &alg.basis(L));
        let lk = LegTensor::two_leg(&alg.basis(L), &alg.basis(K));
        let kl = LegTensor::two_leg(&alg.basis(K), &alg.basis(L));
        assert_eq!(alg.commutator(&r1, &on(1, L)).unwrap(), ll);
        assert_eq!(alg.commutator(&r1, &on(2, L)).unwrap(), ll.neg());
        assert_eq!(alg.commutator(&r1, &on(1, K)).unwrap(), lk);
        assert_eq!(alg.commutator(&r1, &on(2, K)).unwrap(), kl.neg());
        assert!(alg.commutator(&r1, &r1).unwrap().is_zero());
        // r1 squared vanishes in L (x) L
        assert!(alg.mul_leg(&r1, &r1).unwrap().is_zero());
    }

    #[test]
    fn flips() {
        let alg = lk_algebra();
        let lk = LegTensor::two_leg(&alg.basis(L), &alg.basis(K));
        let kl = LegTensor::two_leg(&alg.basis(K), &alg.basis(L));
        assert_eq!(lk.flip_21().unwrap(), kl);
        let r1 = lk_r1();
        assert_eq!(r1.flip_21().unwrap(), r1.neg());
        assert_eq!(r1.flip_21().unwrap().flip_21().unwrap(), r1);
        assert!(LegTensor::unit(3).flip_21().is_err());
    }

    fn arb_elt(dim: usize) -> impl Strategy<Value = AlgebraElt> {
        proptest::collection::vec(-3i64..=3, dim).prop_map(|v| AlgebraElt(v.into_iter().map(Scalar::from_int).collect()))
    }

    fn arb_leg(legs: usize, dim: usize) -> impl Strategy<Value = LegTensor> {
        proptest::collection::vec((proptest::collection::vec(0..=dim, legs), -2i64..=2), 0..5).prop_map(move |terms| {
            LegTensor::from_terms(
                legs,
                terms.into_iter().map(|(k, c)| {
                    (k.into_iter().map(|i| if i == 0 { Slot::UNIT } else { Slot::basis(i - 1) }).collect(), s(c))
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn mul_algebra_bilinear_associative(a in arb_elt(2), b in arb_elt(2), c in arb_elt(2), t in -3i64..3) {
            let alg = lk_algebra();
            let ab_c = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let lhs = alg.mul(&a.add(&b.scale(&s(t))), &c).unwrap();
            let rhs = alg.mul(&a, &c).unwrap().add(&alg.mul(&b, &c).unwrap().scale(&s(t)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mul_leg_associative_unital(x in arb_leg(3, 2), y in arb_leg(3, 2), z in arb_leg(3, 2)) {
            let alg = lk_algebra();
            let xy_z = alg.mul_leg(&alg.mul_leg(&x, &y).unwrap(), &z).unwrap();
            let x_yz = alg.mul_leg(&x, &alg.mul_leg(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(xy_z, x_yz);
            prop_assert_eq!(alg.mul_leg(&LegTensor::unit(3), &x).unwrap(), x.clone());
            prop_assert_eq!(alg.mul_leg(&x, &LegTensor::unit(3)).unwrap(), x);
        }

        #[test]
        fn embedding_multiplicative_and_disjoint_commute(x in arb_leg(2, 2), y in arb_leg(2, 2)) {
            let alg = lk_algebra();
            let xy = alg.mul_leg(&x, &y).unwrap();
            let ex = x.leg_embed(&[3, 1], 4).unwrap();
            let ey = y.leg_embed(&[3, 1], 4).unwrap();
            prop_assert_eq!(xy.leg_embed(&[3, 1], 4).unwrap(), alg.mul_leg(&ex, &ey).unwrap());
            let fy = y.leg_embed(&[2, 4], 4).unwrap();
            prop_assert_eq!(alg.mul_leg(&ex, &fy).unwrap(), alg.mul_leg(&fy, &ex).unwrap());
        }

        #[test]
        fn flip_is_involutive_and_multiplicative(x in arb_leg(2, 2), y in arb_leg(2, 2)) {
            let alg = lk_algebra();
            prop_assert_eq!(x.flip_21().unwrap().flip_21().unwrap(), x.clone());
            let lhs = alg.mul_leg(&x, &y).unwrap().flip_21().unwrap();
            let rhs = alg.mul_leg(&x.flip_21().unwrap(), &y.flip_21().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn unital_product_agrees_on_body(a in arb_elt(2), b in arb_elt(2)) {
            let alg = lk_algebra();
            let p = alg.mul_unital(&UnitalElt::from_body(a.clone()), &UnitalElt::from_body(b.clone())).unwrap();
            prop_assert!(p.unit.is_zero());
            prop_assert_eq!(p.body, alg.mul(&a, &b).unwrap());
        }
    }
}
