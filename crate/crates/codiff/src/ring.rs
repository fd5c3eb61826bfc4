//! A minimal commutative-ring abstraction so cochains and matrices can
//! carry rational scalars, Laurent polynomials or truncated power series
//! through the same code paths.

use crate::scalar::Scalar;

pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn scale_int(&self, k: i64) -> Self {
        let mut acc = Self::zero();
        let pos = k.abs();
        for _ in 0..pos {
            acc = acc.add(self);
        }
        if k < 0 {
            acc.neg()
        } else {
            acc
        }
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale_int(&self, k: i64) -> Self {
        self * &Scalar::from_int(k)
    }
}
