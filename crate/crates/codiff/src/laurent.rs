//! Univariate Laurent polynomials over the scalar field, used to carry
//! contraction curves g_t symbolically and extract t -> 0 limits.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{ContractionError, CoreError};
use crate::linalg::Matrix;
use crate::ring::Ring;
use crate::scalar::Scalar;

/// Sum of c_e * t^e with integer exponents, sparse and canonical.
#[derive(Clone, PartialEq)]
pub struct Laurent {
    terms: BTreeMap<i64, Scalar>,
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})t", c)?,
                _ => write!(f, "({})t^{}", c, e)?,
            }
        }
        Ok(())
    }
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        Laurent { terms }
    }

    pub fn monomial(c: Scalar, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Laurent { terms }
    }

    /// t^1.
    pub fn t() -> Self {
        Self::monomial(Scalar::one(), 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Lowest exponent with nonzero coefficient; `None` for the zero poly.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn coefficient(&self, e: i64) -> Scalar {
        self.terms.get(&e).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Value at t = 0 when the valuation is nonnegative.
    pub fn limit_at_zero(&self) -> Result<Scalar, ContractionError> {
        match self.valuation() {
            None => Ok(Scalar::zero()),
            Some(v) if v < 0 => Err(ContractionError::NegativeValuation),
            Some(_) => Ok(self.coefficient(0)),
        }
    }

    pub fn eval(&self, t: &Scalar) -> Result<Scalar, CoreError> {
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut p = Scalar::one();
            if *e >= 0 {
                for _ in 0..*e {
                    p = &p * t;
                }
            } else {
                let inv = t.inv()?;
                for _ in 0..e.unsigned_abs() {
                    p = &p * &inv;
                }
            }
            acc = &acc + &(c * &p);
        }
        Ok(acc)
    }

    fn insert(&mut self, e: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let updated = match self.terms.get(&e) {
            Some(old) => old + &c,
            None => c,
        };
        if updated.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, updated);
        }
    }

    /// Exact division; `None` when the divisor does not divide evenly.
    pub fn exact_div(&self, divisor: &Laurent) -> Option<Laurent> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        // long division from the top exponent down; an exact quotient has
        // all exponents >= val(self) - val(divisor), which bounds the loop
        let min_qe = self.valuation().unwrap() - divisor.valuation().unwrap();
        let mut rem = self.clone();
        let mut quo = Laurent::zero();
        let (dlead_e, dlead_c) = divisor.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
        let dlead_inv = dlead_c.inv().ok()?;
        while !rem.is_zero() {
            let (rlead_e, rlead_c) = rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
            let qe = rlead_e - dlead_e;
            if qe < min_qe {
                return None;
            }
            let qc = &rlead_c * &dlead_inv;
            quo.insert(qe, qc.clone());
            for (e, c) in &divisor.terms {
                rem.insert(e + qe, -(&qc * c));
            }
        }
        Some(quo)
    }
}

impl Ring for Laurent {
    fn zero() -> Self {
        Laurent::zero()
    }
    fn one() -> Self {
        Laurent::constant(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.insert(e1 + e2, c1 * c2);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        let mut out = Laurent::zero();
        for (e, c) in &self.terms {
            out.terms.insert(*e, -c);
        }
        out
    }
    fn scale_int(&self, k: i64) -> Self {
        let mut out = Laurent::zero();
        if k == 0 {
            return out;
        }
        let s = Scalar::from_int(k);
        for (e, c) in &self.terms {
            out.terms.insert(*e, c * &s);
        }
        out
    }
}

/// Invert a square Laurent matrix via the adjugate, requiring the
/// determinant to divide every adjugate entry exactly (always true when the
/// determinant is a monomial, e.g. for monomial curve matrices).
pub fn laurent_inverse(m: &Matrix<Laurent>) -> Result<Matrix<Laurent>, ContractionError> {
    let det = m.det();
    if det.is_zero() {
        return Err(ContractionError::Core(CoreError::SingularMatrix));
    }
    let adj = m.adjugate();
    let mut out = Matrix::zero(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let q = adj.at(r, c).exact_div(&det).ok_or_else(|| {
                ContractionError::Core(CoreError::Invalid(
                    "matrix inverse leaves the Laurent ring (determinant does not divide)".into(),
                ))
            })?;
            *out.at_mut(r, c) = q;
        }
    }
    Ok(out)
}

/// Entrywise t -> 0 limit of a Laurent matrix.
pub fn laurent_limit(m: &Matrix<Laurent>) -> Result<Matrix<Scalar>, ContractionError> {
    let mut out = Matrix::zero(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            *out.at_mut(r, c) = m.at(r, c).limit_at_zero()?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(c: i64, e: i64) -> Laurent {
        Laurent::monomial(Scalar::from_int(c), e)
    }

    #[test]
    fn arithmetic_and_valuation() {
        let a = mono(2, -1).add(&mono(3, 2));
        assert_eq!(a.valuation(), Some(-1));
        assert!(a.limit_at_zero().is_err());
        let b = a.mul(&mono(1, 1));
        assert_eq!(b.valuation(), Some(0));
        assert_eq!(b.limit_at_zero().unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn exact_division() {
        // (t^2 - 1) / (t - 1) = t + 1
        let num = mono(1, 2).sub(&mono(1, 0));
        let den = mono(1, 1).sub(&mono(1, 0));
        let q = num.exact_div(&den).unwrap();
        assert_eq!(q, mono(1, 1).add(&mono(1, 0)));
        // t / (t - 1) is not a Laurent polynomial
        assert!(mono(1, 1).exact_div(&den).is_none());
        // monomial division always works
        assert_eq!(mono(6, 3).exact_div(&mono(2, 5)).unwrap(), mono(3, -2));
    }

    #[test]
    fn matrix_inverse_with_monomial_det() {
        let m = Matrix::from_rows(vec![
            vec![mono(1, -1), Laurent::zero(), Laurent::zero()],
            vec![mono(1, -1), mono(1, 0), Laurent::zero()],
            vec![Laurent::zero(), Laurent::zero(), mono(1, 0)],
        ]);
        let inv = laurent_inverse(&m).unwrap();
        let prod = m.mul(&inv);
        assert_eq!(prod, Matrix::identity(3));
    }
}
