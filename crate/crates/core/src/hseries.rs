//! Truncated formal power series in the deformation parameter `h`.
//!
//! A series of order `N` stores the coefficients of `h^0 .. h^N`. Binary
//! operations require equal orders; there is no silent re-truncation, use
//! [`HSeries::truncate`] or [`HSeries::extend`] explicitly.

use crate::error::{Error, Result};
use crate::linear::LinearSpace;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct HSeries<X> {
    coeffs: Vec<X>,
}

impl<X: LinearSpace> HSeries<X> {
    pub fn new(coeffs: Vec<X>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(order: usize, zero: X) -> Self {
        Self { coeffs: vec![zero.zero_like(); order + 1] }
    }

    /// `c h^0`.
    pub fn constant(order: usize, c: X) -> Self {
        let mut s = Self::zero(order, c.zero_like());
        s.coeffs[0] = c;
        s
    }

    /// `c h^k`; the zero series when `k > order`.
    pub fn monomial(order: usize, k: usize, c: X, zero: X) -> Self {
        let mut s = Self::zero(order, zero);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &X {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[X] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<X> {
        self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: X) {
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LinearSpace::is_zero)
    }

    /// Lowest `k` with a nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::InvalidArgument(format!(
                "cannot truncate order {} series to higher order {order}",
                self.order()
            )));
        }
        Ok(Self { coeffs: self.coeffs[..=order].to_vec() })
    }

    /// Pads with zero coefficients up to `order`.
    pub fn extend(&self, order: usize) -> Result<Self> {
        if order < self.order() {
            return Err(Error::InvalidArgument(format!(
                "cannot extend order {} series to lower order {order}",
                self.order()
            )));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, self.coeffs[0].zero_like());
        Ok(Self { coeffs })
    }

    pub fn map<Y, F: Fn(&X) -> Y>(&self, f: F) -> HSeries<Y> {
        HSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn try_map<Y, F: Fn(&X) -> Result<Y>>(&self, f: F) -> Result<HSeries<Y>> {
        Ok(HSeries { coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()? })
    }

    /// Cauchy product truncated at the common order, with `mul` the product
    /// on coefficients.
    pub fn mul_with<F>(&self, other: &Self, mul: F) -> Result<Self>
    where
        F: Fn(&X, &X) -> X,
    {
        self.check(other)?;
        let n = self.order();
        let mut coeffs: Vec<X> = self.coeffs.iter().map(|c| c.zero_like()).collect();
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let p = mul(&self.coeffs[i], &other.coeffs[j]);
                coeffs[i + j].add_assign(&p);
            }
        }
        Ok(Self { coeffs })
    }

    /// Multiplicative inverse of a series with constant term `unit`:
    /// `y_0 = 1`, `y_k = -sum_{j=1..k} x_j y_{k-j}`.
    pub fn invert_with<F>(&self, unit: &X, mul: F) -> Result<Self>
    where
        F: Fn(&X, &X) -> X,
    {
        if &self.coeffs[0] != unit {
            return Err(Error::ConstantTermNotUnit);
        }
        let mut y: Vec<X> = vec![unit.clone()];
        for k in 1..=self.order() {
            let mut acc = unit.zero_like();
            for j in 1..=k {
                if self.coeffs[j].is_zero() || y[k - j].is_zero() {
                    continue;
                }
                acc.add_assign(&mul(&self.coeffs[j], &y[k - j]));
            }
            y.push(acc.neg());
        }
        Ok(Self { coeffs: y })
    }

    /// The quasi-inverse `r'` of `r` (vanishing constant term), the unique
    /// series with `r + r' + r r' = 0`.
    pub fn quasi_inverse_with<F>(&self, mul: F) -> Result<Self>
    where
        F: Fn(&X, &X) -> X,
    {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut y: Vec<X> = vec![self.coeffs[0].zero_like()];
        for k in 1..=self.order() {
            let mut acc = self.coeffs[k].clone();
            for j in 1..k {
                if self.coeffs[j].is_zero() || y[k - j].is_zero() {
                    continue;
                }
                acc.add_assign(&mul(&self.coeffs[j], &y[k - j]));
            }
            y.push(acc.neg());
        }
        Ok(Self { coeffs: y })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraDef, LegTensor, Slot};
    use crate::fixtures::{lk_algebra, lk_r1};
    use proptest::prelude::*;

    #[test]
    fn add_scale_and_errors() {
        let r1 = lk_r1();
        let x = HSeries::monomial(3, 1, r1.clone(), LegTensor::zero(2));
        let z = HSeries::zero(3, LegTensor::zero(2));
        assert_eq!(x.add(&z).unwrap(), x);
        assert_eq!(x.add(&x).unwrap(), HSeries::monomial(3, 1, r1.scale(&Scalar::from_int(2)), LegTensor::zero(2)));
        assert!(x.scale(&Scalar::zero()).is_zero());
        let y = HSeries::zero(4, LegTensor::zero(2));
        assert_eq!(x.add(&y).unwrap_err(), Error::OrderMismatch(3, 4));
        assert_eq!(x.extend(4).unwrap().truncate(3).unwrap(), x);
        assert!(x.truncate(5).is_err());
        assert!(HSeries::<LegTensor>::new(vec![]).is_err());
    }

    #[test]
    fn products_and_inverses_over_lk() {
        let alg = lk_algebra();
        let mul = |a: &LegTensor, b: &LegTensor| alg.mul_leg(a, b).unwrap();
        let one = LegTensor::unit(2);
        let r1 = lk_r1();
        let unit = HSeries::constant(2, one.clone());
        let plus = unit.add(&HSeries::monomial(2, 1, r1.clone(), LegTensor::zero(2))).unwrap();
        let minus = unit.sub(&HSeries::monomial(2, 1, r1.clone(), LegTensor::zero(2))).unwrap();
        assert_eq!(unit.mul_with(&plus, mul).unwrap(), plus);
        assert_eq!(plus.mul_with(&minus, mul).unwrap(), unit);
        assert_eq!(plus.invert_with(&one, mul).unwrap(), minus);
        assert_eq!(unit.invert_with(&one, mul).unwrap(), unit);
        assert_eq!(minus.invert_with(&LegTensor::zero(2), mul).unwrap_err(), Error::ConstantTermNotUnit);

        // (h a)(h b) vanishes at order 1
        let ha = HSeries::monomial(1, 1, r1.clone(), LegTensor::zero(2));
        assert!(ha.mul_with(&ha, |a, b| a.add(b)).unwrap().is_zero());

        let hr = HSeries::monomial(4, 1, r1.clone(), LegTensor::zero(2));
        assert_eq!(hr.quasi_inverse_with(mul).unwrap(), hr.neg());
        let zero = HSeries::zero(4, LegTensor::zero(2));
        assert_eq!(zero.quasi_inverse_with(mul).unwrap(), zero);
        assert_eq!(plus.quasi_inverse_with(mul).unwrap_err(), Error::NonzeroConstantTerm);
    }

    #[test]
    fn geometric_series_inverse() {
        // generic a in the free-ish 1-dim algebra e e = e: (1 + h a)^{-1} = 1 - h a + h^2 a^2 - h^3 a^3
        let alg = AlgebraDef::with_dim(1, [(0, 0, 0, Scalar::from_int(1))]).unwrap();
        let mul = |a: &LegTensor, b: &LegTensor| alg.mul_leg(a, b).unwrap();
        let a = LegTensor::pure([Slot::basis(0)].into_iter().collect(), Scalar::from_int(3));
        let one = LegTensor::unit(1);
        let x = HSeries::new(vec![one.clone(), a.clone(), LegTensor::zero(1), LegTensor::zero(1)]).unwrap();
        let a2 = mul(&a, &a);
        let a3 = mul(&a2, &a);
        let expect = HSeries::new(vec![one.clone(), a.neg(), a2, a3.neg()]).unwrap();
        assert_eq!(x.invert_with(&one, mul).unwrap(), expect);
    }

    #[test]
    fn quasi_inverse_two_terms_by_back_substitution() {
        let alg = lk_algebra();
        let mul = |a: &LegTensor, b: &LegTensor| alg.mul_leg(a, b).unwrap();
        let a = LegTensor::two_leg(&alg.basis(0).add(&alg.basis(1)), &alg.basis(1));
        let b = LegTensor::two_leg(&alg.basis(1), &alg.basis(0).scale(&Scalar::ratio(1, 2)));
        let r = HSeries::new(vec![LegTensor::zero(2), a.clone(), b.clone(), LegTensor::zero(2)]).unwrap();
        let rp = r.quasi_inverse_with(mul).unwrap();
        assert!(r.add(&rp).unwrap().add(&r.mul_with(&rp, mul).unwrap()).unwrap().is_zero());
        assert!(r.add(&rp).unwrap().add(&rp.mul_with(&r, mul).unwrap()).unwrap().is_zero());
        // closed form through h^2: r'_1 = -a, r'_2 = -(b - a^2)
        assert_eq!(rp.coeff(1), &a.neg());
        assert_eq!(rp.coeff(2), &b.sub(&mul(&a, &a)).neg());
    }

    fn arb_r(order: usize) -> impl Strategy<Value = HSeries<LegTensor>> {
        proptest::collection::vec(proptest::collection::vec(-2i64..=2, 4), order).prop_map(move |cs| {
            let alg = lk_algebra();
            let mut coeffs = vec![LegTensor::zero(2)];
            for c in cs {
                let mut t = LegTensor::zero(2);
                for (n, v) in c.into_iter().enumerate() {
                    t.add_assign(&LegTensor::two_leg(&alg.basis(n / 2), &alg.basis(n % 2)).scale(&Scalar::from_int(v)));
                }
                coeffs.push(t);
            }
            HSeries::new(coeffs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn quasi_inverse_properties(r in arb_r(4)) {
            let alg = lk_algebra();
            let mul = |a: &LegTensor, b: &LegTensor| alg.mul_leg(a, b).unwrap();
            let rp = r.quasi_inverse_with(mul).unwrap();
            prop_assert!(r.add(&rp).unwrap().add(&r.mul_with(&rp, mul).unwrap()).unwrap().is_zero());
            prop_assert!(r.add(&rp).unwrap().add(&rp.mul_with(&r, mul).unwrap()).unwrap().is_zero());
            prop_assert_eq!(rp.quasi_inverse_with(mul).unwrap(), r.clone());
            prop_assert_eq!(rp.coeff(1), &r.coeff(1).neg());
            let one = HSeries::constant(4, LegTensor::unit(2));
            let inv = one.add(&r).unwrap().invert_with(&LegTensor::unit(2), mul).unwrap();
            prop_assert_eq!(inv, one.add(&rp).unwrap());
        }

        #[test]
        fn inverse_is_two_sided_and_mul_associative(r in arb_r(5), s in arb_r(5)) {
            let alg = lk_algebra();
            let mul = |a: &LegTensor, b: &LegTensor| alg.mul_leg(a, b).unwrap();
            let one = HSeries::constant(5, LegTensor::unit(2));
            let x = one.add(&r).unwrap();
            let y = x.invert_with(&LegTensor::unit(2), mul).unwrap();
            prop_assert_eq!(x.mul_with(&y, mul).unwrap(), one.clone());
            prop_assert_eq!(y.mul_with(&x, mul).unwrap(), one.clone());
            let t = one.add(&s).unwrap();
            let lhs = x.mul_with(&t, mul).unwrap().mul_with(&y, mul).unwrap();
            let rhs = x.mul_with(&t.mul_with(&y, mul).unwrap(), mul).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
