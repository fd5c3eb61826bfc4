//! Exact ground-field scalars: rationals and Gaussian rationals.
//!
//! Every scalar is stored as a pair of reduced `BigRational`s. A plain
//! rational is a scalar with vanishing imaginary part; the ambient field
//! (`Q` or `Qi`) is tracked by the containers, not by the scalar itself.
//! There is no floating point anywhere in this crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;

/// The ground field: rationals or Gaussian rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Q,
    #[serde(rename = "Qi")]
    Qi,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Qi => write!(f, "Qi"),
        }
    }
}

/// An element of Q or Q(i), always in canonical reduced form.
///
/// `BigRational` keeps numerator/denominator coprime with positive
/// denominator, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rat(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", fmt_rat(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}{}i", fmt_rat(&self.re), fmt_rat(&self.im))
        } else {
            write!(f, "{}+{}i", fmt_rat(&self.re), fmt_rat(&self.im))
        }
    }
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    /// `p/q` as a real rational scalar. Panics if `q == 0`.
    pub fn from_frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True if this scalar lies in the given field.
    pub fn in_field(&self, field: Field) -> bool {
        match field {
            Field::Q => self.is_real(),
            Field::Qi => true,
        }
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// re^2 + im^2, a nonnegative rational.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, CoreError> {
        if self.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Exact square root inside Q(i), if one exists.
    ///
    /// The canonical root has positive real part, or zero real part and
    /// nonnegative imaginary part.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.im.is_zero() {
            if self.re.is_positive() {
                return rational_sqrt(&self.re).map(Scalar::from_rational);
            }
            // negative real: sqrt is purely imaginary
            let m = -self.re.clone();
            return rational_sqrt(&m).map(|r| Scalar::new(BigRational::zero(), r));
        }
        // (x+iy)^2 = a+ib  =>  x^2+y^2 = sqrt(a^2+b^2), x^2-y^2 = a, 2xy = b
        let n = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let x2 = (&self.re + &n) / &two;
        if x2.is_negative() {
            return None;
        }
        let x = rational_sqrt(&x2)?;
        if x.is_zero() {
            return None; // b != 0 here, so x = 0 cannot square to a+ib
        }
        let y = &self.im / (&two * &x);
        Some(Scalar::new(x, y))
    }

    /// Deterministic total order used only for canonical tie-breaking
    /// (lexicographic on the (re, im) pair). Not a field order.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().magnitude().clone();
    let den = r.denom().magnitude().clone();
    let sn = exact_uint_sqrt(&num)?;
    let sd = exact_uint_sqrt(&den)?;
    Some(BigRational::new(BigInt::from(sn), BigInt::from(sd)))
}

fn exact_uint_sqrt(n: &BigUint) -> Option<BigUint> {
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}

/// Parse the JSON wire form of a scalar: a string `"p/q"`, a bare JSON
/// integer, or `{"re": "p/q", "im": "r/s"}`.
pub fn scalar_from_json(v: &serde_json::Value) -> Result<Scalar, CoreError> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::from_int(i))
            } else {
                Err(CoreError::Parse(format!("non-integer numeric scalar `{}`", n)))
            }
        }
        serde_json::Value::String(s) => parse_rational_str(s).map(Scalar::from_rational),
        serde_json::Value::Object(map) => {
            let mut re = BigRational::zero();
            let mut im = BigRational::zero();
            for (k, val) in map {
                let r = match val {
                    serde_json::Value::String(s) => parse_rational_str(s)?,
                    serde_json::Value::Number(n) => n
                        .as_i64()
                        .map(|i| BigRational::from_integer(BigInt::from(i)))
                        .ok_or_else(|| {
                            CoreError::Parse(format!("non-integer numeric scalar `{}`", n))
                        })?,
                    other => {
                        return Err(CoreError::Parse(format!("bad scalar component `{}`", other)))
                    }
                };
                match k.as_str() {
                    "re" => re = r,
                    "im" => im = r,
                    other => {
                        return Err(CoreError::Parse(format!("unknown scalar key `{}`", other)))
                    }
                }
            }
            Ok(Scalar::new(re, im))
        }
        other => Err(CoreError::Parse(format!("bad scalar `{}`", other))),
    }
}

/// Render a scalar in the JSON wire form for the given field.
pub fn scalar_to_json(s: &Scalar, field: Field) -> serde_json::Value {
    match field {
        Field::Q => serde_json::Value::String(fmt_rat(s.re())),
        Field::Qi => {
            let mut map = serde_json::Map::new();
            map.insert("re".into(), serde_json::Value::String(fmt_rat(s.re())));
            map.insert("im".into(), serde_json::Value::String(fmt_rat(s.im())));
            serde_json::Value::Object(map)
        }
    }
}

pub fn parse_rational_str(s: &str) -> Result<BigRational, CoreError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| CoreError::Parse(format!("bad integer `{}` in scalar", num)))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| CoreError::Parse(format!("bad integer `{}` in scalar", den)))?;
    if q.is_zero() {
        return Err(CoreError::Parse(format!("zero denominator in `{}`", s)));
    }
    Ok(BigRational::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_is_reduced() {
        let a = Scalar::from_frac(4, -8);
        assert_eq!(a, Scalar::from_frac(-1, 2));
        assert_eq!(format!("{}", a), "-1/2");
        assert!(Scalar::from_frac(0, 7).is_zero());
    }

    #[test]
    fn complex_arithmetic() {
        let i = Scalar::i();
        assert_eq!(&i * &i, Scalar::from_int(-1));
        let z = Scalar::new(
            BigRational::from_integer(3.into()),
            BigRational::from_integer(4.into()),
        );
        assert_eq!(z.norm(), BigRational::from_integer(25.into()));
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
    }

    #[test]
    fn sqrt_rational_cases() {
        assert_eq!(
            Scalar::from_frac(9, 4).sqrt_exact(),
            Some(Scalar::from_frac(3, 2))
        );
        assert_eq!(Scalar::from_int(2).sqrt_exact(), None);
        // sqrt(-4) = 2i
        let r = Scalar::from_int(-4).sqrt_exact().unwrap();
        assert_eq!(&r * &r, Scalar::from_int(-4));
        assert_eq!(r, Scalar::new(BigRational::zero(), BigRational::from_integer(2.into())));
    }

    #[test]
    fn sqrt_gaussian() {
        // (2+i)^2 = 3+4i
        let z = Scalar::new(
            BigRational::from_integer(3.into()),
            BigRational::from_integer(4.into()),
        );
        let r = z.sqrt_exact().unwrap();
        assert_eq!(&r * &r, z);
        // 2i = (1+i)^2
        let z = Scalar::new(BigRational::zero(), BigRational::from_integer(2.into()));
        let r = z.sqrt_exact().unwrap();
        assert_eq!(&r * &r, z);
        // i itself is not a square in Q(i)
        assert_eq!(Scalar::i().sqrt_exact(), None);
    }

    #[test]
    fn json_round_trip() {
        for (txt, field) in [("\"-7/3\"", Field::Q), ("5", Field::Q)] {
            let v: serde_json::Value = serde_json::from_str(txt).unwrap();
            let s = scalar_from_json(&v).unwrap();
            let back = scalar_to_json(&s, field);
            let s2 = scalar_from_json(&back).unwrap();
            assert_eq!(s, s2);
        }
        let v: serde_json::Value = serde_json::from_str(r#"{"re":"1/2","im":"-3"}"#).unwrap();
        let s = scalar_from_json(&v).unwrap();
        assert_eq!(s, Scalar::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer((-3).into())));
        assert!(!s.in_field(Field::Q));
    }
}
