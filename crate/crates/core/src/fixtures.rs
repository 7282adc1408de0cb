//! The two-dimensional algebra spanned by `L, K` with `LK = L`, `K^2 = K`,
//! `L^2 = KL = 0`, and its antisymmetric element `r1 = L (x) K - K (x) L`.

use crate::algebra::{AlgebraDef, LegTensor};
use crate::hseries::HSeries;
use crate::scalar::Scalar;

pub const L: usize = 0;
pub const K: usize = 1;

pub fn lk_algebra() -> AlgebraDef {
    AlgebraDef::new(
        vec!["L".into(), "K".into()],
        [(L, K, L, Scalar::one()), (K, K, K, Scalar::one())],
    )
    .and_then(AlgebraDef::validated)
    .expect("fixture algebra is associative")
}

pub fn lk_r1() -> LegTensor {
    let alg = lk_algebra();
    let lk = LegTensor::two_leg(&alg.basis(L), &alg.basis(K));
    let kl = LegTensor::two_leg(&alg.basis(K), &alg.basis(L));
    crate::linear::LinearSpace::sub(&lk, &kl)
}

/// `r[h] = h r1` truncated at `order`.
pub fn lk_r_series(order: usize) -> HSeries<LegTensor> {
    HSeries::monomial(order, 1, lk_r1(), LegTensor::zero(2))
}
