//! Yang-Baxter checks: classical, over `L'` (the toy level), on grid
//! products, and over `T(L)`; and the order-by-order hierarchy for `r_N`.

use std::collections::BTreeSet;

use smallvec::smallvec;

use crate::algebra::{AlgebraDef, LegKey, LegTensor, Slot};
use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::linalg;
use crate::linear::LinearSpace;
use crate::par;
use crate::scalar::Scalar;
use crate::tensor::{multi_ito_product_unchecked, MultiTensorElt};

/// Nonzero difference of the two sides, restricted to its witness.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    Unital(LegTensor),
    Ito(MultiTensorElt),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    /// Lowest `h`-order at which the two sides differ.
    pub order: usize,
    /// Smallest joint rank in the support of the difference at that order.
    pub joint_rank: Vec<usize>,
    /// The difference at that order and joint rank; never zero.
    pub residual: Residual,
}

#[derive(Clone, Debug, PartialEq)]
pub struct YbeReport {
    pub failure: Option<Failure>,
}

impl YbeReport {
    pub fn holds() -> Self {
        Self { failure: None }
    }

    pub fn is_holds(&self) -> bool {
        self.failure.is_none()
    }

    pub fn failing_order(&self) -> Option<usize> {
        self.failure.as_ref().map(|f| f.order)
    }
}

fn unital_rank(key: &LegKey) -> Vec<usize> {
    key.iter().map(|s| usize::from(!s.is_unit())).collect()
}

/// Report for a difference series over `L'`.
pub fn report_unital(diff: &HSeries<LegTensor>) -> YbeReport {
    let Some(order) = diff.first_nonzero() else {
        return YbeReport::holds();
    };
    let c = diff.coeff(order);
    let joint_rank = c.terms().keys().map(unital_rank).min().expect("nonzero");
    let pattern: Vec<bool> = joint_rank.iter().map(|&r| r == 1).collect();
    YbeReport { failure: Some(Failure { order, residual: Residual::Unital(c.pattern_part(&pattern)), joint_rank }) }
}

/// Report for a difference series over `T(L)`.
pub fn report_ito(diff: &HSeries<MultiTensorElt>) -> YbeReport {
    let Some(order) = diff.first_nonzero() else {
        return YbeReport::holds();
    };
    let c = diff.coeff(order);
    let joint_rank = c.joint_ranks().into_iter().next().expect("nonzero");
    let residual = c.rank_project(&joint_rank).expect("leg count");
    YbeReport { failure: Some(Failure { order, joint_rank, residual: Residual::Ito(residual) }) }
}

fn check_two_leg(x: &LegTensor) -> Result<()> {
    if x.legs() != 2 {
        return Err(Error::WrongLegCount { expected: 2, found: x.legs() });
    }
    Ok(())
}

/// `[a12, b13] + [a12, b23] + [a13, b23]` in three legs.
fn commutator_triple(alg: &AlgebraDef, a: &LegTensor, b: &LegTensor) -> Result<LegTensor> {
    let emb = |x: &LegTensor, p: [usize; 2]| x.leg_embed(&p, 3);
    let mut out = alg.commutator(&emb(a, [1, 2])?, &emb(b, [1, 3])?)?;
    out.add_assign(&alg.commutator(&emb(a, [1, 2])?, &emb(b, [2, 3])?)?);
    out.add_assign(&alg.commutator(&emb(a, [1, 3])?, &emb(b, [2, 3])?)?);
    Ok(out)
}

/// Left-hand side of the classical Yang-Baxter equation.
pub fn cybe_expression(alg: &AlgebraDef, r1: &LegTensor) -> Result<LegTensor> {
    check_two_leg(r1)?;
    commutator_triple(alg, r1, r1)
}

/// Classical Yang-Baxter equation; a failure is reported at `h`-order 2,
/// where the classical equation sits inside the quantum one.
pub fn cybe_check(alg: &AlgebraDef, r1: &LegTensor) -> Result<YbeReport> {
    let e = cybe_expression(alg, r1)?;
    let mut diff = HSeries::zero(2, LegTensor::zero(3));
    diff.set_coeff(2, e);
    Ok(report_unital(&diff))
}

fn check_r(r: &HSeries<LegTensor>) -> Result<()> {
    if !r.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    r.coeffs().iter().try_for_each(check_two_leg)
}

fn embed_series(r: &HSeries<LegTensor>, pos: [usize; 2], legs: usize) -> Result<HSeries<LegTensor>> {
    r.try_map(|c| c.leg_embed(&pos, legs))
}

fn mul_unital(alg: &AlgebraDef, x: &HSeries<LegTensor>, y: &HSeries<LegTensor>) -> Result<HSeries<LegTensor>> {
    x.mul_with(y, |a, b| alg.mul_leg_unchecked(a, b))
}

fn product_unital(alg: &AlgebraDef, factors: &[HSeries<LegTensor>]) -> Result<HSeries<LegTensor>> {
    let mut it = factors.iter();
    let first = it.next().expect("at least one factor").clone();
    it.try_fold(first, |acc, f| mul_unital(alg, &acc, f))
}

/// `1 + r` over `L' (x) L'`.
pub fn rho_of(r: &HSeries<LegTensor>) -> Result<HSeries<LegTensor>> {
    HSeries::constant(r.order(), LegTensor::unit(2)).add(r)
}

/// `(1+r12)(1+r13)(1+r23) - (1+r23)(1+r13)(1+r12)` in `(L'^{(x)3})[[h]]`.
pub fn toy_residual(alg: &AlgebraDef, r: &HSeries<LegTensor>) -> Result<HSeries<LegTensor>> {
    check_r(r)?;
    let rho = rho_of(r)?;
    let [a, b, c] = [[1, 2], [1, 3], [2, 3]].map(|p| embed_series(&rho, p, 3));
    let (a, b, c) = (a?, b?, c?);
    let (lhs, rhs) = par::join(
        || product_unital(alg, &[a.clone(), b.clone(), c.clone()]),
        || product_unital(alg, &[c.clone(), b.clone(), a.clone()]),
    );
    lhs?.sub(&rhs?)
}

/// Left minus right side of the expanded condition on `r`, with the unit
/// terms cancelled: quadratic commutators plus the two cubic terms.
pub fn condition_residual(alg: &AlgebraDef, r: &HSeries<LegTensor>) -> Result<HSeries<LegTensor>> {
    check_r(r)?;
    let [a, b, c] = [[1, 2], [1, 3], [2, 3]].map(|p| embed_series(r, p, 3));
    let (a, b, c) = (a?, b?, c?);
    let m = |x: &HSeries<LegTensor>, y: &HSeries<LegTensor>| mul_unital(alg, x, y);
    let lhs = m(&a, &b)?.add(&m(&a, &c)?)?.add(&m(&b, &c)?)?.add(&m(&m(&a, &b)?, &c)?)?;
    let rhs = m(&b, &a)?.add(&m(&c, &a)?)?.add(&m(&c, &b)?)?.add(&m(&m(&c, &b)?, &a)?)?;
    lhs.sub(&rhs)
}

/// Quantum Yang-Baxter equation for `1 + r` over `L'`. The expanded condition
/// is computed independently and must agree identically.
pub fn toy_qybe_check(alg: &AlgebraDef, r: &HSeries<LegTensor>) -> Result<YbeReport> {
    let toy = toy_residual(alg, r)?;
    let cond = condition_residual(alg, r)?;
    if toy != cond {
        return Err(Error::CrossCheck("unit-cancelled condition disagrees with the toy equation".into()));
    }
    Ok(report_unital(&toy))
}

/// Factor order in a grid product; both give the same element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prescription {
    /// Row index outer, column index inner.
    RowsOuter,
    /// Column index outer, row index inner.
    ColumnsOuter,
}

/// Ordered product of `rho^{rows[j], cols[k]}` over the grid, in `legs` legs.
pub fn grid_block(
    alg: &AlgebraDef,
    rho: &HSeries<LegTensor>,
    rows: &[usize],
    cols: &[usize],
    legs: usize,
    prescription: Prescription,
) -> Result<HSeries<LegTensor>> {
    let pairs: Vec<(usize, usize)> = match prescription {
        Prescription::RowsOuter => rows.iter().flat_map(|&j| cols.iter().map(move |&k| (j, k))).collect(),
        Prescription::ColumnsOuter => cols.iter().flat_map(|&k| rows.iter().map(move |&j| (j, k))).collect(),
    };
    let mut acc = HSeries::constant(rho.order(), LegTensor::unit(legs));
    for (j, k) in pairs {
        acc = mul_unital(alg, &acc, &embed_series(rho, [j, k], legs)?)?;
    }
    Ok(acc)
}

fn check_rho(rho: &HSeries<LegTensor>) -> Result<()> {
    check_two_leg(rho.coeff(0))?;
    if rho.coeff(0) != &LegTensor::unit(2) {
        return Err(Error::ConstantTermNotUnit);
    }
    Ok(())
}

/// `prod rho^{j, m+n+1-k}` over `1 <= j <= m`, `1 <= k <= n`.
pub fn grid_product(
    alg: &AlgebraDef,
    rho: &HSeries<LegTensor>,
    m: usize,
    n: usize,
    prescription: Prescription,
) -> Result<HSeries<LegTensor>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!("grid needs m, n >= 1, got ({m}, {n})")));
    }
    check_rho(rho)?;
    let rows: Vec<usize> = (1..=m).collect();
    let cols: Vec<usize> = (1..=n).map(|k| m + n + 1 - k).collect();
    grid_block(alg, rho, &rows, &cols, m + n, prescription)
}

/// The three-grid identity in `m + n + p` legs: `G_mn G_mp G_np` against
/// `G_np G_mp G_mn`.
pub fn braces_check(alg: &AlgebraDef, rho: &HSeries<LegTensor>, m: usize, n: usize, p: usize) -> Result<YbeReport> {
    if m == 0 || n == 0 || p == 0 {
        return Err(Error::InvalidArgument(format!("braces need m, n, p >= 1, got ({m}, {n}, {p})")));
    }
    check_rho(rho)?;
    let legs = m + n + p;
    let first: Vec<usize> = (1..=m).collect();
    let second: Vec<usize> = (1..=n).map(|k| m + k).collect();
    let mn_cols: Vec<usize> = (1..=n).map(|k| m + n + 1 - k).collect();
    let p_cols: Vec<usize> = (1..=p).map(|l| m + n + p + 1 - l).collect();
    let g_mn = grid_block(alg, rho, &first, &mn_cols, legs, Prescription::RowsOuter)?;
    let g_mp = grid_block(alg, rho, &first, &p_cols, legs, Prescription::RowsOuter)?;
    let g_np = grid_block(alg, rho, &second, &p_cols, legs, Prescription::RowsOuter)?;
    let lhs = product_unital(alg, &[g_mn.clone(), g_mp.clone(), g_np.clone()])?;
    let rhs = product_unital(alg, &[g_np, g_mp, g_mn])?;
    Ok(report_unital(&lhs.sub(&rhs)?))
}

/// `R12 R13 R23 - R23 R13 R12` in `T(L)^{(x)3}[[h]]`.
pub fn qybe_residual(alg: &AlgebraDef, rr: &HSeries<MultiTensorElt>) -> Result<HSeries<MultiTensorElt>> {
    if rr.coeff(0) != &MultiTensorElt::unit(2) {
        return Err(Error::ConstantTermNotUnit);
    }
    let emb = |p: [usize; 2]| rr.try_map(|c| c.embed(&p, 3));
    let (a, b, c) = (emb([1, 2])?, emb([1, 3])?, emb([2, 3])?);
    let mul = |x: &HSeries<MultiTensorElt>, y: &HSeries<MultiTensorElt>| {
        x.mul_with(y, |u, v| multi_ito_product_unchecked(alg, u, v))
    };
    let (lhs, rhs) = par::join(|| mul(&mul(&a, &b)?, &c), || mul(&mul(&c, &b)?, &a));
    lhs?.sub(&rhs?)
}

/// Quantum Yang-Baxter equation over `T(L)`.
pub fn qybe_check(alg: &AlgebraDef, rr: &HSeries<MultiTensorElt>) -> Result<YbeReport> {
    Ok(report_ito(&qybe_residual(alg, rr)?))
}

/// Left-hand side of the order-`n + 1` hierarchy equation, from
/// `rs = [r_1, r_2, ...]` (at least `n` entries).
pub fn hierarchy_residual(alg: &AlgebraDef, rs: &[LegTensor], n: usize) -> Result<LegTensor> {
    if n == 0 {
        return Err(Error::InvalidArgument("hierarchy order must be at least 1".into()));
    }
    if rs.len() < n {
        return Err(Error::MissingCoefficient(rs.len() + 1));
    }
    rs.iter().try_for_each(check_two_leg)?;
    let r = |k: usize| &rs[k - 1];
    let mut out = LegTensor::zero(3);
    for s in 1..=n {
        out.add_assign(&commutator_triple(alg, r(s), r(n + 1 - s))?);
    }
    for s in 1..=n {
        for t in 1..=n - s {
            let u = n + 1 - s - t;
            if u == 0 {
                continue;
            }
            let (a, b, c) = (r(s).leg_embed(&[1, 2], 3)?, r(t).leg_embed(&[1, 3], 3)?, r(u).leg_embed(&[2, 3], 3)?);
            out.add_assign(&alg.mul_leg(&alg.mul_leg(&a, &b)?, &c)?);
            out.add_assign(&alg.mul_leg(&alg.mul_leg(&c, &b)?, &a)?.neg());
        }
    }
    Ok(out)
}

/// Affine space of admissible `r_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet {
    /// `None` when the linear system is inconsistent.
    pub particular: Option<LegTensor>,
    pub kernel: Vec<LegTensor>,
    /// Basis pair `(a, b)` of the `e_a (x) e_b` coordinate fixed to 1 in each
    /// kernel vector.
    pub free: Vec<(usize, usize)>,
}

impl SolutionSet {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }

    /// Exact membership test.
    pub fn contains(&self, x: &LegTensor) -> bool {
        let Some(p) = &self.particular else {
            return false;
        };
        let mut rest = x.sub(p);
        for (k, &(a, b)) in self.kernel.iter().zip(&self.free) {
            let c = rest.coeff(&[Slot::basis(a), Slot::basis(b)]);
            rest = rest.sub(&k.scale(&c));
        }
        rest.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&LegTensor::zero(2))
    }
}

/// Solves the order-`n` hierarchy equation for `r_n` given
/// `rs = [r_1, ..., r_{n-1}]`.
///
/// Only the commutators pairing `r_n` with `r_1` involve the unknown; the
/// rest is the inhomogeneous part, obtained as the residual at `r_n = 0`.
pub fn hierarchy_solve(alg: &AlgebraDef, rs: &[LegTensor], n: usize) -> Result<SolutionSet> {
    if n < 2 {
        return Err(Error::InvalidArgument("the hierarchy solve starts at order 2".into()));
    }
    if rs.len() < n - 1 {
        return Err(Error::MissingCoefficient(rs.len() + 1));
    }
    let d = alg.dim();
    let unknowns: Vec<(usize, usize)> = (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).collect();
    let basis = |&(a, b): &(usize, usize)| LegTensor::two_leg(&alg.basis(a), &alg.basis(b));

    let mut with_zero: Vec<LegTensor> = rs[..n - 1].to_vec();
    with_zero.push(LegTensor::zero(2));
    let inhom = hierarchy_residual(alg, &with_zero, n)?;
    let r1 = &rs[0];
    let linear = |x: &LegTensor| -> Result<LegTensor> {
        Ok(commutator_triple(alg, x, r1)?.add(&commutator_triple(alg, r1, x)?))
    };
    let columns: Vec<LegTensor> = unknowns.iter().map(|u| linear(&basis(u))).collect::<Result<_>>()?;

    let row_keys: BTreeSet<LegKey> =
        columns.iter().chain(std::iter::once(&inhom)).flat_map(|c| c.terms().keys().cloned()).collect();
    let a: Vec<Vec<Scalar>> = row_keys.iter().map(|k| columns.iter().map(|c| c.coeff(k)).collect()).collect();
    let b: Vec<Scalar> = row_keys.iter().map(|k| -inhom.coeff(k)).collect();

    let combine = |v: &[Scalar]| -> LegTensor {
        let terms = unknowns.iter().zip(v).map(|(&(a, b), c)| -> (LegKey, Scalar) {
            (smallvec![Slot::basis(a), Slot::basis(b)], c.clone())
        });
        LegTensor::from_terms(2, terms).expect("two legs")
    };
    let Some(sol) = linalg::solve(&a, &b, unknowns.len()) else {
        return Ok(SolutionSet { particular: None, kernel: Vec::new(), free: Vec::new() });
    };
    let out = SolutionSet {
        particular: Some(combine(&sol.particular)),
        kernel: sol.kernel.iter().map(|k| combine(k)).collect(),
        free: sol.free_columns.iter().map(|&c| unknowns[c]).collect(),
    };

    // every returned solution must satisfy the full equation
    let verify = |x: &LegTensor| -> Result<()> {
        let mut full = with_zero.clone();
        full[n - 1] = x.clone();
        if !hierarchy_residual(alg, &full, n)?.is_zero() {
            return Err(Error::CrossCheck(format!("hierarchy solution at order {n} does not back-substitute")));
        }
        Ok(())
    };
    let p = out.particular.as_ref().expect("consistent");
    verify(p)?;
    for k in &out.kernel {
        verify(&p.add(k))?;
    }
    Ok(out)
}
