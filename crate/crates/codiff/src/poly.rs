//! Truncated multivariate polynomials over the scalar field: the
//! coefficient ring for deformation parameters t_1..t_m. Arithmetic
//! silently drops terms above the truncation degree, making this the ring
//! K[[t]]/(t^{N+1}-jet) that the order-by-order solver works in.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::CoreError;
use crate::ring::Ring;
use crate::scalar::{scalar_from_json, scalar_to_json, Field, Scalar};

pub const NO_TRUNCATION: u32 = u32::MAX;

/// Exponent vector, ordered by total degree then lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    trunc: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&default_names(self.nvars)))
    }
}

fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("t{}", i)).collect()
}

impl Polynomial {
    pub fn zero_in(nvars: usize, trunc: u32) -> Self {
        Polynomial { nvars, trunc, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, trunc: u32, c: Scalar) -> Self {
        let mut p = Self::zero_in(nvars, trunc);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; nvars]), c);
        }
        p
    }

    /// The variable t_{i+1}.
    pub fn var(nvars: usize, trunc: u32, i: usize) -> Self {
        assert!(i < nvars);
        let mut exps = vec![0u16; nvars];
        exps[i] = 1;
        let mut p = Self::zero_in(nvars, trunc);
        if trunc >= 1 {
            p.terms.insert(Monomial(exps), Scalar::one());
        }
        p
    }

    pub fn monomial(nvars: usize, trunc: u32, exps: Vec<u16>, c: Scalar) -> Self {
        assert_eq!(exps.len(), nvars);
        let m = Monomial(exps);
        let mut p = Self::zero_in(nvars, trunc);
        if !c.is_zero() && m.total_degree() <= trunc {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Monomial(vec![0; self.nvars]))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    /// Smallest total degree among the terms; `None` when zero.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// The homogeneous part of the given total degree.
    pub fn degree_part(&self, d: u32) -> Polynomial {
        let mut out = Self::zero_in(self.nvars, self.trunc);
        for (m, c) in &self.terms {
            if m.total_degree() == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        if s.is_zero() {
            return Self::zero_in(self.nvars, self.trunc);
        }
        let mut out = Self::zero_in(self.nvars, self.trunc);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * s);
        }
        out
    }

    /// Reinterpret with a lower (or higher) truncation degree, dropping
    /// terms as needed.
    pub fn truncate_to(&self, trunc: u32) -> Polynomial {
        let mut out = Self::zero_in(self.nvars, trunc);
        for (m, c) in &self.terms {
            if m.total_degree() <= trunc {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    fn insert(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() || m.total_degree() > self.trunc {
            return;
        }
        let updated = match self.terms.get(&m) {
            Some(old) => old + &c,
            None => c,
        };
        if updated.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, updated);
        }
    }

    /// Promote context-free constants (nvars = 0) into this context.
    fn unify(&self, other: &Self) -> (Polynomial, Polynomial) {
        let nvars = self.nvars.max(other.nvars);
        let trunc = self.trunc.min(other.trunc);
        let lift = |p: &Polynomial| -> Polynomial {
            let mut out = Polynomial::zero_in(nvars, trunc);
            for (m, c) in &p.terms {
                let mut exps = m.0.clone();
                exps.resize(nvars, 0);
                out.insert(Monomial(exps), c.clone());
            }
            out
        };
        assert!(
            self.nvars == other.nvars || self.is_constant() || other.is_constant(),
            "cannot mix polynomials in different variable sets"
        );
        (lift(self), lift(other))
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars, "evaluation arity mismatch");
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = &term * &point[i];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitute polynomials for the variables. All `args` must share a
    /// variable context; the result lives in that context.
    pub fn substitute(&self, args: &[Polynomial]) -> Polynomial {
        assert_eq!(args.len(), self.nvars, "substitution arity mismatch");
        let (nvars, trunc) = args
            .first()
            .map(|a| (a.nvars, a.trunc))
            .unwrap_or((0, self.trunc));
        let mut acc = Polynomial::zero_in(nvars, trunc);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(nvars, trunc, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&args[i]);
                    if term.is_zero() {
                        break;
                    }
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut factors = Vec::new();
            if m.total_degree() == 0 || !(c.is_one() || (-c).is_one()) {
                factors.push(format!("{}", c));
            } else if (-c).is_one() {
                factors.push("-".into());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            let joined = if factors.first().map(|f| f == "-").unwrap_or(false) {
                format!("-{}", factors[1..].join("*"))
            } else {
                factors.join("*")
            };
            parts.push(joined);
        }
        parts.join(" + ")
    }

    /// Wire form: a list of {"exponents": [...], "coeff": scalar}.
    pub fn to_json(&self, field: Field) -> serde_json::Value {
        let arr: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut map = serde_json::Map::new();
                map.insert(
                    "exponents".into(),
                    serde_json::Value::Array(
                        m.0.iter().map(|&e| serde_json::Value::from(e)).collect(),
                    ),
                );
                map.insert("coeff".into(), scalar_to_json(c, field));
                serde_json::Value::Object(map)
            })
            .collect();
        serde_json::Value::Array(arr)
    }

    pub fn from_json(
        v: &serde_json::Value,
        nvars: usize,
        trunc: u32,
    ) -> Result<Polynomial, CoreError> {
        let arr = v
            .as_array()
            .ok_or_else(|| CoreError::Parse("polynomial must be an array of terms".into()))?;
        let mut p = Polynomial::zero_in(nvars, trunc);
        for term in arr {
            let obj = term
                .as_object()
                .ok_or_else(|| CoreError::Parse("polynomial term must be an object".into()))?;
            let exps = obj
                .get("exponents")
                .and_then(|e| e.as_array())
                .ok_or_else(|| CoreError::Parse("term missing `exponents`".into()))?;
            if exps.len() != nvars {
                return Err(CoreError::Parse(format!(
                    "term has {} exponents, expected {}",
                    exps.len(),
                    nvars
                )));
            }
            let exps: Vec<u16> = exps
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|x| x as u16)
                        .ok_or_else(|| CoreError::Parse("bad exponent".into()))
                })
                .collect::<Result<_, _>>()?;
            let coeff = scalar_from_json(
                obj.get("coeff")
                    .ok_or_else(|| CoreError::Parse("term missing `coeff`".into()))?,
            )?;
            p.insert(Monomial(exps), coeff);
        }
        Ok(p)
    }
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero_in(0, NO_TRUNCATION)
    }
    fn one() -> Self {
        Polynomial::constant(0, NO_TRUNCATION, Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.unify(other);
        for (m, c) in b.terms {
            a.insert(m, c);
        }
        a
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let mut out = Polynomial::zero_in(a.nvars, a.trunc);
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                let exps: Vec<u16> =
                    m1.0.iter().zip(&m2.0).map(|(x, y)| x + y).collect();
                out.insert(Monomial(exps), c1 * c2);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        let mut out = Polynomial::zero_in(self.nvars, self.trunc);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c);
        }
        out
    }
    fn scale_int(&self, k: i64) -> Self {
        self.scale(&Scalar::from_int(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> Polynomial {
        Polynomial::var(2, 4, i)
    }

    #[test]
    fn truncation_drops_high_degrees() {
        let p = t(0).add(&t(1)); // t1 + t2, truncated at 4
        let p2 = p.mul(&p).mul(&p).mul(&p).mul(&p); // degree 5 terms all vanish
        assert!(p2.is_zero());
        let p4 = p.mul(&p).mul(&p).mul(&p);
        assert_eq!(p4.max_degree(), Some(4));
        assert_eq!(p4.num_terms(), 5);
    }

    #[test]
    fn constants_broadcast() {
        let c = Polynomial::one();
        let p = t(0).add(&c);
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.constant_term(), Scalar::one());
    }

    #[test]
    fn eval_and_substitute() {
        // p = t1^2 - 2 t1 t2
        let p = t(0).mul(&t(0)).sub(&t(0).mul(&t(1)).scale_int(2));
        let v = p.eval(&[Scalar::from_int(3), Scalar::from_int(1)]);
        assert_eq!(v, Scalar::from_int(3));
        // substitute t1 = s, t2 = s^2 into p: s^2 - 2 s^3
        let s = Polynomial::var(1, 6, 0);
        let q = p.substitute(&[s.clone(), s.mul(&s)]);
        assert_eq!(q.degree_part(2), s.mul(&s));
        assert_eq!(q.degree_part(3), s.mul(&s).mul(&s).scale_int(-2));
    }

    #[test]
    fn json_round_trip() {
        let p = t(0).mul(&t(1)).scale(&Scalar::from_frac(3, 2)).add(&t(1));
        let j = p.to_json(Field::Q);
        let q = Polynomial::from_json(&j, 2, 4).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn graded_lex_term_order() {
        let p = t(1).add(&t(0).mul(&t(0))).add(&t(0));
        let degs: Vec<u32> = p.terms().map(|(m, _)| m.total_degree()).collect();
        assert_eq!(degs, vec![1, 1, 2]);
    }
}
