//! The quantisation pipeline: `R`, its inverse, quasitriangularity, the
//! deformed coproduct `Δ[h](α) = R Δ(α) R⁻¹`, coassociativity and the
//! semiclassical cobracket.

use std::collections::BTreeMap;

use smallvec::smallvec;

use crate::algebra::{AlgebraDef, AlgebraElt, LegTensor, UnitalElt};
use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::linear::LinearSpace;
use crate::par;
use crate::prodint::{double_bf, double_fb, multi_series_mul, unit_series};
use crate::tensor::{coproduct, is_symmetric, iterated_coproduct, multi_ito_product_unchecked, MultiKey, MultiTensorElt, TensorElt, Word};
use crate::ybe::{report_ito, Prescription, YbeReport};

/// Projection cross-checks of `Δ[h]` are run for joint ranks `(m, n)` with
/// `m + n` at most this; higher ranks are covered by the direct product only.
pub const PROJECTION_MAX_LEGS: usize = 7;

/// `R = ∏→←(1 + dr)` and `R⁻¹ = ∏←→(1 + dr')` for a fixed `r`.
#[derive(Clone, Debug)]
pub struct QuantisationContext {
    pub alg: AlgebraDef,
    pub r: HSeries<LegTensor>,
    pub r_quasi_inverse: HSeries<LegTensor>,
    pub rr: HSeries<MultiTensorElt>,
    pub rr_inv: HSeries<MultiTensorElt>,
}

impl QuantisationContext {
    pub fn order(&self) -> usize {
        self.r.order()
    }

    fn mul(&self, x: &HSeries<MultiTensorElt>, y: &HSeries<MultiTensorElt>) -> HSeries<MultiTensorElt> {
        multi_series_mul(&self.alg, x, y).expect("orders agree inside a context")
    }
}

/// Builds `R` and `R⁻¹`, checks they are mutually inverse, and checks `R⁻¹`
/// against the order-by-order series inverse of `R`.
pub fn build_context(alg: &AlgebraDef, r: &HSeries<LegTensor>) -> Result<QuantisationContext> {
    let rp = r.quasi_inverse_with(|a, b| alg.mul_leg_unchecked(a, b))?;
    let (rr, rr_inv) = par::join(|| double_fb(alg, r), || double_bf(alg, &rp));
    let (rr, rr_inv) = (rr?.series, rr_inv?.series);
    let one = unit_series(r.order());
    if multi_series_mul(alg, &rr, &rr_inv)? != one || multi_series_mul(alg, &rr_inv, &rr)? != one {
        return Err(Error::CrossCheck("double products of r and its quasi-inverse are not mutually inverse".into()));
    }
    let inverted = rr.invert_with(&MultiTensorElt::unit(2), |a, b| multi_ito_product_unchecked(alg, a, b))?;
    if inverted != rr_inv {
        return Err(Error::CrossCheck("inverse double product differs from the series inverse".into()));
    }
    Ok(QuantisationContext { alg: alg.clone(), r: r.clone(), r_quasi_inverse: rp, rr, rr_inv })
}

/// One named identity and its outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedCheck {
    pub name: String,
    pub report: YbeReport,
}

fn embed(x: &HSeries<MultiTensorElt>, pos: &[usize], legs: usize) -> HSeries<MultiTensorElt> {
    x.try_map(|c| c.embed(pos, legs)).expect("valid positions")
}

fn leg_coproduct(x: &HSeries<MultiTensorElt>, leg: usize, m: usize) -> HSeries<MultiTensorElt> {
    x.try_map(|c| c.apply_coproduct_to_leg(leg, m)).expect("valid leg")
}

/// `∏ R^{j, m+n+1-k}` over the grid, rows outer; `reverse` gives the reversed
/// factor order, which is how the inverse decomposes.
fn ito_grid(ctx: &QuantisationContext, x: &HSeries<MultiTensorElt>, m: usize, n: usize, reverse: bool) -> HSeries<MultiTensorElt> {
    let legs = m + n;
    let mut pairs: Vec<(usize, usize)> = (1..=m).flat_map(|j| (1..=n).map(move |k| (j, legs + 1 - k))).collect();
    if reverse {
        pairs.reverse();
    }
    let mut acc = HSeries::constant(ctx.order(), MultiTensorElt::unit(legs));
    for (a, b) in pairs {
        acc = ctx.mul(&acc, &embed(x, &[a, b], legs));
    }
    acc
}

/// Both quasitriangular identities for `R`, the reversed ones for `R⁻¹`, and
/// the grid form of `(Δ^(m) (x) Δ^(n)) R` for `m, n <= max_mn`.
pub fn quasitriangularity_check(ctx: &QuantisationContext, max_mn: usize) -> Vec<NamedCheck> {
    let (rr, ri) = (&ctx.rr, &ctx.rr_inv);
    let mut jobs: Vec<(String, Box<dyn Fn() -> YbeReport + Sync + '_>)> = vec![
        (
            "(Δ⊗id)R = R13 R23".into(),
            Box::new(|| report_ito(&leg_coproduct(rr, 1, 2).sub(&ctx.mul(&embed(rr, &[1, 3], 3), &embed(rr, &[2, 3], 3))).unwrap())),
        ),
        (
            "(id⊗Δ)R = R13 R12".into(),
            Box::new(|| report_ito(&leg_coproduct(rr, 2, 2).sub(&ctx.mul(&embed(rr, &[1, 3], 3), &embed(rr, &[1, 2], 3))).unwrap())),
        ),
        (
            "(Δ⊗id)R⁻¹ = R23⁻¹ R13⁻¹".into(),
            Box::new(|| report_ito(&leg_coproduct(ri, 1, 2).sub(&ctx.mul(&embed(ri, &[2, 3], 3), &embed(ri, &[1, 3], 3))).unwrap())),
        ),
        (
            "(id⊗Δ)R⁻¹ = R12⁻¹ R13⁻¹".into(),
            Box::new(|| report_ito(&leg_coproduct(ri, 2, 2).sub(&ctx.mul(&embed(ri, &[1, 2], 3), &embed(ri, &[1, 3], 3))).unwrap())),
        ),
    ];
    for m in 1..=max_mn {
        for n in 1..=max_mn {
            jobs.push((
                format!("(Δ^({m})⊗Δ^({n}))R = grid"),
                Box::new(move || {
                    let lhs = leg_coproduct(&leg_coproduct(rr, 2, n), 1, m);
                    report_ito(&lhs.sub(&ito_grid(ctx, rr, m, n, false)).unwrap())
                }),
            ));
        }
    }
    par::map(&jobs, |(name, job)| NamedCheck { name: name.clone(), report: job() })
}

/// `Δ[h](α)` with its components by joint rank.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformedCoproduct {
    pub series: HSeries<MultiTensorElt>,
    /// Set when `α` is outside the symmetric subspace, where the deformation
    /// is not claimed to be a Hopf algebra map.
    pub warning: Option<String>,
    /// Joint ranks whose component was confirmed by the projection method.
    pub cross_checked: Vec<(usize, usize)>,
}

impl DeformedCoproduct {
    /// The `(m, n)` component as a series.
    pub fn component(&self, m: usize, n: usize) -> HSeries<MultiTensorElt> {
        self.series.map(|c| c.rank_project(&[m, n]).expect("two legs"))
    }

    /// Every nonzero component, keyed by joint rank.
    pub fn components(&self) -> BTreeMap<(usize, usize), HSeries<MultiTensorElt>> {
        let mut ranks: Vec<(usize, usize)> =
            self.series.coeffs().iter().flat_map(|c| c.joint_ranks()).map(|r| (r[0], r[1])).collect();
        ranks.sort();
        ranks.dedup();
        ranks.into_iter().map(|(m, n)| ((m, n), self.component(m, n))).collect()
    }
}

/// `R X R⁻¹` for a constant 2-leg `X`.
fn conjugate(ctx: &QuantisationContext, x: &MultiTensorElt) -> HSeries<MultiTensorElt> {
    let xs = HSeries::constant(ctx.order(), x.clone());
    ctx.mul(&ctx.mul(&ctx.rr, &xs), &ctx.rr_inv)
}

/// Grid over `L'` for `ρ = 1 + r` in `legs = m + n`; `reverse` for the inverse.
fn unital_grid(alg: &AlgebraDef, rho: &HSeries<LegTensor>, m: usize, n: usize, reverse: bool) -> Result<HSeries<LegTensor>> {
    let legs = m + n;
    if m == 0 || n == 0 {
        return Ok(HSeries::constant(rho.order(), LegTensor::unit(legs)));
    }
    let mut rows: Vec<usize> = (1..=m).collect();
    let mut cols: Vec<usize> = (1..=n).map(|k| legs + 1 - k).collect();
    if reverse {
        rows.reverse();
        cols.reverse();
    }
    crate::ybe::grid_block(alg, rho, &rows, &cols, legs, Prescription::RowsOuter)
}

/// The `(m, n)` component computed in `(L')^{(x)(m+n)}`: the projection to
/// `L'` on every leg is multiplicative, so the all-`L` part of
/// `G π(Δ^(m+n) α) G⁻¹` is the rank `(1, ..., 1)` part of
/// `(Δ^(m) (x) Δ^(n)) Δ[h](α)`, i.e. the `(m, n)` component with its words cut
/// into letters.
pub fn component_by_projection(ctx: &QuantisationContext, alpha: &TensorElt, m: usize, n: usize) -> Result<HSeries<MultiTensorElt>> {
    let alg = &ctx.alg;
    let order = ctx.order();
    let unit2 = HSeries::constant(order, LegTensor::unit(2));
    let rho = unit2.add(&ctx.r)?;
    let rho_inv = unit2.add(&ctx.r_quasi_inverse)?;
    let g = unital_grid(alg, &rho, m, n, false)?;
    let g_inv = unital_grid(alg, &rho_inv, m, n, true)?;
    let split = HSeries::constant(order, iterated_coproduct(alpha, m + n).project_to_unital());
    let mul = |x: &HSeries<LegTensor>, y: &HSeries<LegTensor>| x.mul_with(y, |a, b| alg.mul_leg_unchecked(a, b));
    let conj = mul(&mul(&g, &split)?, &g_inv)?;
    Ok(conj.map(|c| {
        let body = c.body_part();
        let terms = body.terms().iter().map(|(k, s)| {
            let letters: Vec<u16> = k.iter().map(|slot| slot.index().expect("body") as u16).collect();
            let key: MultiKey = smallvec![Word::from_slice(&letters[..m]), Word::from_slice(&letters[m..])];
            (key, s.clone())
        });
        MultiTensorElt::from_terms(2, terms).expect("two legs")
    }))
}

/// `Δ[h](α) = R Δ(α) R⁻¹`, with the projection method run on every joint rank
/// with at most [`PROJECTION_MAX_LEGS`] legs as an independent cross-check.
pub fn deformed_coproduct(ctx: &QuantisationContext, alpha: &TensorElt) -> Result<DeformedCoproduct> {
    let warning = (!is_symmetric(alpha)).then(|| "argument is not a symmetric tensor".to_string());
    let series = conjugate(ctx, &coproduct(alpha));
    let out = DeformedCoproduct { series, warning, cross_checked: Vec::new() };

    let max_word = alpha.max_rank() + 2 * ctx.order();
    let ranks: Vec<(usize, usize)> = (0..=max_word.min(PROJECTION_MAX_LEGS))
        .flat_map(|m| (0..=PROJECTION_MAX_LEGS - m).map(move |n| (m, n)))
        .collect();
    let results = par::map(&ranks, |&(m, n)| -> Result<Option<(usize, usize)>> {
        let direct = out.component(m, n);
        let projected = component_by_projection(ctx, alpha, m, n)?;
        if direct != projected {
            return Err(Error::CrossCheck(format!("component ({m}, {n}) of the deformed coproduct disagrees with the projection method")));
        }
        Ok((!direct.is_zero()).then_some((m, n)))
    });
    let mut out = out;
    for r in results {
        if let Some(mn) = r? {
            out.cross_checked.push(mn);
        }
    }
    Ok(out)
}

/// `(Δ[h] (x) id) Δ[h](α)` against `(id (x) Δ[h]) Δ[h](α)`, where `Δ[h]` on a
/// leg conjugates by `R` placed on the two legs that leg splits into.
pub fn coassociativity_check(ctx: &QuantisationContext, alpha: &TensorElt) -> YbeReport {
    let d = conjugate(ctx, &coproduct(alpha));
    let (lhs, rhs) = par::join(
        || {
            let r12 = embed(&ctx.rr, &[1, 2], 3);
            let ri12 = embed(&ctx.rr_inv, &[1, 2], 3);
            ctx.mul(&ctx.mul(&r12, &leg_coproduct(&d, 1, 2)), &ri12)
        },
        || {
            let r23 = embed(&ctx.rr, &[2, 3], 3);
            let ri23 = embed(&ctx.rr_inv, &[2, 3], 3);
            ctx.mul(&ctx.mul(&r23, &leg_coproduct(&d, 2, 2)), &ri23)
        },
    );
    report_ito(&lhs.sub(&rhs).expect("equal orders"))
}

/// `[r1 - τ r1, x (x) 1 + 1 (x) x]`.
pub fn cobracket_closed_form(alg: &AlgebraDef, r1: &LegTensor, x: &AlgebraElt) -> Result<LegTensor> {
    let skew = r1.sub(&r1.flip_21()?);
    let ux = UnitalElt::from_body(x.clone());
    let prim = LegTensor::on_leg(2, 1, &ux)?.add(&LegTensor::on_leg(2, 2, &ux)?);
    alg.commutator(&skew, &prim)
}

/// The `h`-linear part of `Δ[h](x) - Δ[h]^opp(x)` at joint rank `(1, 1)`,
/// checked against [`cobracket_closed_form`].
pub fn cobracket(ctx: &QuantisationContext, x: &AlgebraElt) -> Result<LegTensor> {
    if ctx.order() == 0 {
        return Err(Error::InvalidArgument("the cobracket needs truncation order at least 1".into()));
    }
    if x.dim() != ctx.alg.dim() {
        return Err(Error::DimensionMismatch { expected: ctx.alg.dim(), found: x.dim() });
    }
    let alpha = TensorElt::from_terms(x.support().map(|(i, c)| (smallvec![i as u16], c.clone())));
    let d1 = conjugate(ctx, &coproduct(&alpha)).coeff(1).clone();
    let delta = d1.sub(&d1.flip_legs()?).rank_project(&[1, 1])?.project_to_unital();
    let closed = cobracket_closed_form(&ctx.alg, ctx.r.coeff(1), x)?;
    if delta != closed {
        return Err(Error::CrossCheck("cobracket extraction disagrees with the closed form".into()));
    }
    Ok(delta)
}
