//! Directed product integrals as truncated series.
//!
//! A driving element `l` in `h(A (x) L)[[h]]` is stored per `h`-order as a map
//! from generator letter `x` to its algebra coefficient `l_k[x]` in `A`. The
//! single integral is `1 + sum_n` of the ordered `n`-fold products, whose
//! `T(L)` part is the word of generator letters in slot order.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use smallvec::smallvec;

use crate::algebra::{AlgebraDef, LegTensor};
use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::linear::LinearSpace;
use crate::par;
use crate::tensor::{multi_ito_product_unchecked, ito_product_unchecked, MultiKey, MultiTensorElt, TensorElt, Word};

/// A unital associative algebra used as the coefficient algebra `A`.
pub trait UnitalAlgebra: Sync {
    type Elt: LinearSpace;
    fn one(&self) -> Self::Elt;
    fn zero(&self) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
}

/// `L' (x) ... (x) L'` with `legs` factors.
#[derive(Clone, Copy)]
pub struct UnitalLegs<'a> {
    pub alg: &'a AlgebraDef,
    pub legs: usize,
}

impl UnitalAlgebra for UnitalLegs<'_> {
    type Elt = LegTensor;

    fn one(&self) -> LegTensor {
        LegTensor::unit(self.legs)
    }

    fn zero(&self) -> LegTensor {
        LegTensor::zero(self.legs)
    }

    fn mul(&self, a: &LegTensor, b: &LegTensor) -> LegTensor {
        self.alg.mul_leg_unchecked(a, b)
    }
}

/// `T(L)` with the sticky shuffle product.
#[derive(Clone, Copy)]
pub struct ItoAlgebra<'a> {
    pub alg: &'a AlgebraDef,
}

impl UnitalAlgebra for ItoAlgebra<'_> {
    type Elt = TensorElt;

    fn one(&self) -> TensorElt {
        TensorElt::unit()
    }

    fn zero(&self) -> TensorElt {
        TensorElt::zero()
    }

    fn mul(&self, a: &TensorElt, b: &TensorElt) -> TensorElt {
        ito_product_unchecked(self.alg, a, b)
    }
}

/// `T(L)^{(x) p}` with the leg-wise sticky shuffle product.
#[derive(Clone, Copy)]
pub struct MultiIto<'a> {
    pub alg: &'a AlgebraDef,
    pub legs: usize,
}

impl UnitalAlgebra for MultiIto<'_> {
    type Elt = MultiTensorElt;

    fn one(&self) -> MultiTensorElt {
        MultiTensorElt::unit(self.legs)
    }

    fn zero(&self) -> MultiTensorElt {
        MultiTensorElt::zero(self.legs)
    }

    fn mul(&self, a: &MultiTensorElt, b: &MultiTensorElt) -> MultiTensorElt {
        multi_ito_product_unchecked(self.alg, a, b)
    }
}

/// Which tensor leg carries the algebra `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `A (x) T(L)`.
    AlgebraFirst,
    /// `T(L) (x) A`.
    AlgebraSecond,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `A`-factors multiplied in ascending slot order.
    Forward,
    /// `A`-factors multiplied in descending slot order.
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// Element of `A (x) T(L)` (or `T(L) (x) A`) as a map word -> `A`-coefficient.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedTensor<E> {
    side: Side,
    zero: E,
    terms: BTreeMap<Word, E>,
}

impl<E: LinearSpace> MixedTensor<E> {
    pub fn zero(side: Side, zero: E) -> Self {
        Self { side, zero, terms: BTreeMap::new() }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn terms(&self) -> &BTreeMap<Word, E> {
        &self.terms
    }

    pub fn coeff(&self, w: &[u16]) -> E {
        self.terms.get(w).cloned().unwrap_or_else(|| self.zero.clone())
    }

    /// Adds `a (x) w` (or `w (x) a`).
    pub fn add_term(&mut self, w: Word, a: &E) {
        if a.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                e.add_assign(a);
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, a.clone());
            }
        }
    }
}

impl<E: LinearSpace> LinearSpace for MixedTensor<E> {
    fn zero_like(&self) -> Self {
        Self::zero(self.side, self.zero.clone())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.side, other.side, "side mismatch");
        for (w, a) in &other.terms {
            self.add_term(w.clone(), a);
        }
    }

    fn scale(&self, s: &crate::scalar::Scalar) -> Self {
        let mut out = self.zero_like();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), &a.scale(s));
        }
        out
    }
}

/// Driving element together with its coefficient algebra.
pub type Driver<E> = HSeries<MixedTensor<E>>;

fn check_driver<E: LinearSpace>(l: &Driver<E>) -> Result<()> {
    if !l.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    for c in l.coeffs() {
        if let Some(w) = c.terms.keys().find(|w| w.len() != 1) {
            return Err(Error::InvalidArgument(format!("driving element has a word of length {}", w.len())));
        }
    }
    Ok(())
}

/// The single product integral in direction `dir`, with the unit term.
///
/// `Y_k[w x] = sum_j Y_{k-j}[w] l_j[x]` forward, `l_j[x] Y_{k-j}[w]` backward.
pub fn single<A: UnitalAlgebra>(a: &A, l: &Driver<A::Elt>, dir: Direction) -> Result<Driver<A::Elt>> {
    check_driver(l)?;
    let n_max = l.order();
    let side = l.coeff(0).side;
    let mut out = HSeries::zero(n_max, MixedTensor::zero(side, a.zero()));
    let mut c0 = MixedTensor::zero(side, a.zero());
    c0.add_term(Word::new(), &a.one());
    out.set_coeff(0, c0.clone());

    // drivers flattened to (order, letter, coefficient)
    let drive: Vec<(usize, u16, &A::Elt)> = (1..=n_max)
        .flat_map(|j| l.coeff(j).terms.iter().map(move |(w, e)| (j, w[0], e)))
        .collect();

    let mut level: Vec<((usize, Word), A::Elt)> = vec![((0, Word::new()), a.one())];
    for _ in 0..n_max {
        let next = par::fold_reduce(
            &level,
            FxHashMap::<(usize, Word), A::Elt>::default,
            |mut acc, ((k, w), y)| {
                for &(j, x, e) in &drive {
                    if k + j > n_max {
                        continue;
                    }
                    let p = match dir {
                        Direction::Forward => a.mul(y, e),
                        Direction::Backward => a.mul(e, y),
                    };
                    if p.is_zero() {
                        continue;
                    }
                    let mut wx = w.clone();
                    wx.push(x);
                    match acc.get_mut(&(k + j, wx.clone())) {
                        Some(v) => v.add_assign(&p),
                        None => {
                            acc.insert((k + j, wx), p);
                        }
                    }
                }
                acc
            },
            |mut a1, a2| {
                for (key, v) in a2 {
                    match a1.get_mut(&key) {
                        Some(u) => u.add_assign(&v),
                        None => {
                            a1.insert(key, v);
                        }
                    }
                }
                a1
            },
        );
        let mut next: Vec<((usize, Word), A::Elt)> = next.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if next.is_empty() {
            break;
        }
        next.sort_by(|x, y| x.0.cmp(&y.0));
        for ((k, w), y) in &next {
            let mut c = out.coeff(*k).clone();
            c.add_term(w.clone(), y);
            out.set_coeff(*k, c);
        }
        level = next;
    }
    Ok(out)
}

fn require_side<E: LinearSpace>(l: &Driver<E>, side: Side) -> Result<()> {
    if l.coeff(0).side != side {
        return Err(Error::InvalidArgument(format!("driving element must have side {side:?}")));
    }
    Ok(())
}

/// `A`-valued forward integral over `A (x) L`.
pub fn single_forward<A: UnitalAlgebra>(a: &A, l: &Driver<A::Elt>) -> Result<Driver<A::Elt>> {
    require_side(l, Side::AlgebraFirst)?;
    single(a, l, Direction::Forward)
}

pub fn single_backward<A: UnitalAlgebra>(a: &A, l: &Driver<A::Elt>) -> Result<Driver<A::Elt>> {
    require_side(l, Side::AlgebraFirst)?;
    single(a, l, Direction::Backward)
}

/// Mirror image of [`single_forward`] over `L (x) A`.
pub fn single_forward_right<A: UnitalAlgebra>(a: &A, m: &Driver<A::Elt>) -> Result<Driver<A::Elt>> {
    require_side(m, Side::AlgebraSecond)?;
    single(a, m, Direction::Forward)
}

pub fn single_backward_right<A: UnitalAlgebra>(a: &A, m: &Driver<A::Elt>) -> Result<Driver<A::Elt>> {
    require_side(m, Side::AlgebraSecond)?;
    single(a, m, Direction::Backward)
}

/// Removes the unit term `1_A (x) 1`.
pub fn decapitate<A: UnitalAlgebra>(a: &A, y: &Driver<A::Elt>) -> Driver<A::Elt> {
    let mut out = y.clone();
    let mut c0 = out.coeff(0).clone();
    c0.add_term(Word::new(), &a.one().neg());
    out.set_coeff(0, c0);
    out
}

/// `→←` (the quantum R-matrix) or `←→` (its inverse family).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    ForwardBackward,
    BackwardForward,
}

/// One of the two equal iterated constructions of a double product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Outer integral over `T(L)` carried by the first leg.
    First,
    /// Outer integral over `T(L)` carried by the second leg.
    Second,
}

/// Leg layout and directions for one construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Nesting {
    /// Leg (1 or 2) carrying the outer `T(L)` coefficient algebra; the inner
    /// `L` coefficients live on the other leg.
    pub outer_leg: usize,
    pub outer: Direction,
    pub inner: Direction,
}

impl Nesting {
    /// For `→←` the outer integral runs backward over `T(L)` on the first leg
    /// and the inner one forward; the second construction swaps legs and
    /// directions. `←→` reverses every arrow.
    pub fn of(orientation: Orientation, construction: Construction) -> Self {
        let (outer_leg, outer) = match construction {
            Construction::First => (1, Direction::Backward),
            Construction::Second => (2, Direction::Forward),
        };
        let outer = match orientation {
            Orientation::ForwardBackward => outer,
            Orientation::BackwardForward => outer.reversed(),
        };
        Nesting { outer_leg, outer, inner: outer.reversed() }
    }
}

fn side_of_leg(leg: usize) -> Side {
    if leg == 1 {
        Side::AlgebraFirst
    } else {
        Side::AlgebraSecond
    }
}

fn check_r(r: &HSeries<LegTensor>) -> Result<()> {
    if !r.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    for c in r.coeffs() {
        if c.legs() != 2 {
            return Err(Error::WrongLegCount { expected: 2, found: c.legs() });
        }
        if !c.is_pure_body() {
            return Err(Error::InvalidArgument("r must lie in L (x) L".into()));
        }
    }
    Ok(())
}

/// A double product integral for an explicit nesting.
pub fn double_nested(alg: &AlgebraDef, r: &HSeries<LegTensor>, nest: Nesting) -> Result<HSeries<MultiTensorElt>> {
    check_r(r)?;
    let outer_leg = nest.outer_leg;
    let inner_leg = 3 - outer_leg;
    let order = r.order();

    // inner: coefficients in L on `inner_leg`, generator letters from `outer_leg`
    let l_alg = UnitalLegs { alg, legs: 1 };
    let inner_zero = MixedTensor::zero(side_of_leg(inner_leg), LegTensor::zero(1));
    let mut driver = HSeries::zero(order, inner_zero);
    for k in 1..=order {
        let mut c = driver.coeff(k).clone();
        for (key, s) in r.coeff(k).terms() {
            let x = key[outer_leg - 1].index().expect("body") as u16;
            let a = LegTensor::pure(smallvec![key[inner_leg - 1]], s.clone());
            c.add_term(smallvec![x], &a);
        }
        driver.set_coeff(k, c);
    }
    let inner = decapitate(&l_alg, &single(&l_alg, &driver, nest.inner)?);

    // outer: coefficients in T(L) on `outer_leg`, generator letters are the inner L values
    let t_alg = ItoAlgebra { alg };
    let mut driver = HSeries::zero(order, MixedTensor::zero(side_of_leg(outer_leg), TensorElt::zero()));
    for k in 1..=order {
        let mut c = driver.coeff(k).clone();
        for (w, a) in inner.coeff(k).terms() {
            for (slot, s) in a.terms() {
                let y = slot[0].index().expect("inner integral stays in L") as u16;
                c.add_term(smallvec![y], &TensorElt::basis_word(w.clone()).scale(s));
            }
        }
        driver.set_coeff(k, c);
    }
    let outer = single(&t_alg, &driver, nest.outer)?;

    Ok(outer.map(|c| {
        let terms = c.terms().iter().flat_map(|(v, a)| {
            a.terms().iter().map(move |(aw, s)| {
                let key: MultiKey = if outer_leg == 1 { smallvec![aw.clone(), v.clone()] } else { smallvec![v.clone(), aw.clone()] };
                (key, s.clone())
            })
        });
        MultiTensorElt::from_terms(2, terms).expect("two legs")
    }))
}

/// A double product with its orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleProduct {
    pub orientation: Orientation,
    pub series: HSeries<MultiTensorElt>,
}

/// Both constructions, computed concurrently and required to agree exactly.
pub fn double_product(alg: &AlgebraDef, r: &HSeries<LegTensor>, orientation: Orientation) -> Result<DoubleProduct> {
    let (a, b) = par::join(
        || double_nested(alg, r, Nesting::of(orientation, Construction::First)),
        || double_nested(alg, r, Nesting::of(orientation, Construction::Second)),
    );
    let (a, b) = (a?, b?);
    if let Some(k) = (0..=a.order()).find(|&k| a.coeff(k) != b.coeff(k)) {
        return Err(Error::CrossCheck(format!("{orientation:?} constructions differ at h^{k}")));
    }
    Ok(DoubleProduct { orientation, series: a })
}

/// `∏→←(1 + dr[h])`.
pub fn double_fb(alg: &AlgebraDef, r: &HSeries<LegTensor>) -> Result<DoubleProduct> {
    double_product(alg, r, Orientation::ForwardBackward)
}

/// `∏←→(1 + dr[h])`.
pub fn double_bf(alg: &AlgebraDef, r: &HSeries<LegTensor>) -> Result<DoubleProduct> {
    double_product(alg, r, Orientation::BackwardForward)
}

/// Unit series of `T(L) (x) T(L)`.
pub fn unit_series(order: usize) -> HSeries<MultiTensorElt> {
    HSeries::constant(order, MultiTensorElt::unit(2))
}

/// Product of series in `T(L)^{(x) p}[[h]]`.
pub fn multi_series_mul(
    alg: &AlgebraDef,
    x: &HSeries<MultiTensorElt>,
    y: &HSeries<MultiTensorElt>,
) -> Result<HSeries<MultiTensorElt>> {
    x.mul_with(y, |a, b| multi_ito_product_unchecked(alg, a, b))
}

/// `L (x) L`-valued series lifted into `T(L) (x) T(L)`.
pub fn lift_r(r: &HSeries<LegTensor>) -> HSeries<MultiTensorElt> {
    r.map(MultiTensorElt::from_leg_tensor)
}

/// First `(h-order, joint rank)` where `rr - 1 - r` leaves the allowed shape:
/// support only on ranks `(m, n)` with `m, n >= 1`, `max(m, n) >= 2`, and
/// `m, n <= k` at order `k`.
pub fn expansion_defect(rr: &HSeries<MultiTensorElt>, r: &HSeries<LegTensor>) -> Result<Option<(usize, Vec<usize>)>> {
    let beta = rr.sub(&unit_series(r.order()))?.sub(&lift_r(r))?;
    Ok((0..=r.order()).find_map(|k| {
        beta.coeff(k)
            .joint_ranks()
            .into_iter()
            .find(|ranks| {
                let (m, n) = (ranks[0], ranks[1]);
                !(m >= 1 && n >= 1 && m.max(n) >= 2 && m <= k && n <= k)
            })
            .map(|ranks| (k, ranks))
    }))
}
