//! Cochains on a purely odd space: C^k(W) = Hom(S^k(W), W), the circle
//! product, the graded bracket, and the coboundary operator.
//!
//! With every generator of W odd, an element of C^k(W) is odd exactly when
//! k is even, and the Koszul sign of a letter permutation is the ordinary
//! permutation sign.

use std::collections::BTreeMap;

use crate::error::CoreError;
use crate::multiindex::{binomial, shuffles, MultiIndex};
use crate::ring::Ring;

/// Parity of an element of C^k(W): 1 = odd, 0 = even.
pub fn parity(k: usize) -> u8 {
    ((k + 1) % 2) as u8
}

/// A sparse element of C^k(W) with coefficients in a ring R.
///
/// Zero coefficients are never stored, so equality is structural.
#[derive(Clone, PartialEq, Debug)]
pub struct Cochain<R: Ring> {
    n: u8,
    k: usize,
    coeffs: BTreeMap<(MultiIndex, u8), R>,
}

impl<R: Ring> Cochain<R> {
    pub fn zero(n: u8, k: usize) -> Self {
        Cochain { n, k, coeffs: BTreeMap::new() }
    }

    /// The monomial cochain c * phi^I_i (w_J |-> c delta^I_J w_i).
    pub fn monomial(n: u8, index: MultiIndex, target: u8, coeff: R) -> Self {
        let mut c = Cochain::zero(n, index.degree());
        c.insert(index, target, coeff);
        c
    }

    pub fn dim(&self) -> u8 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn parity(&self) -> u8 {
        parity(self.k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, u8, &R)> {
        self.coeffs.iter().map(|((mi, t), c)| (mi, *t, c))
    }

    pub fn coeff(&self, index: &MultiIndex, target: u8) -> R {
        self.coeffs
            .get(&(index.clone(), target))
            .cloned()
            .unwrap_or_else(R::zero)
    }

    /// Add `coeff` to the (index, target) entry, dropping it if it cancels.
    pub fn insert(&mut self, index: MultiIndex, target: u8, coeff: R) {
        assert_eq!(index.degree(), self.k, "wrong multi-index degree");
        assert!(index.max_index() <= self.n && target >= 1 && target <= self.n);
        if coeff.is_zero() {
            return;
        }
        let key = (index, target);
        let updated = match self.coeffs.get(&key) {
            Some(old) => old.add(&coeff),
            None => coeff,
        };
        if updated.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, updated);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        self.check_compatible(other)?;
        if self.k != other.k {
            return Err(CoreError::DimensionMismatch(format!(
                "cochain degrees {} vs {}",
                self.k, other.k
            )));
        }
        let mut out = self.clone();
        for ((mi, t), c) in &other.coeffs {
            out.insert(mi.clone(), *t, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CoreError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Cochain::zero(self.n, self.k);
        for ((mi, t), c) in &self.coeffs {
            out.coeffs.insert((mi.clone(), *t), c.neg());
        }
        out
    }

    pub fn scale(&self, s: &R) -> Self {
        let mut out = Cochain::zero(self.n, self.k);
        for ((mi, t), c) in &self.coeffs {
            let v = c.mul(s);
            if !v.is_zero() {
                out.coeffs.insert((mi.clone(), *t), v);
            }
        }
        out
    }

    /// Map coefficients into another ring.
    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Cochain<S> {
        let mut out = Cochain::zero(self.n, self.k);
        for ((mi, t), c) in &self.coeffs {
            let v = f(c);
            if !v.is_zero() {
                out.coeffs.insert((mi.clone(), *t), v);
            }
        }
        out
    }

    /// Value on a basis word, as a coefficient vector over targets 1..=n.
    pub fn apply_word(&self, word: &MultiIndex) -> Vec<R> {
        let mut out = vec![R::zero(); self.n as usize];
        if word.degree() != self.k {
            return out;
        }
        for t in 1..=self.n {
            if let Some(c) = self.coeffs.get(&(word.clone(), t)) {
                out[(t - 1) as usize] = c.clone();
            }
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<(), CoreError> {
        if self.n != other.n {
            return Err(CoreError::DimensionMismatch(format!(
                "cochain dims {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Flatten to a coordinate vector over the canonical basis of C^k
    /// (multi-index in colex order outer, target inner).
    pub fn to_vec(&self) -> Vec<R> {
        let words = MultiIndex::enumerate(self.n, self.k);
        let n = self.n as usize;
        let mut v = vec![R::zero(); words.len() * n];
        for ((mi, t), c) in &self.coeffs {
            v[mi.colex_rank() * n + (*t as usize - 1)] = c.clone();
        }
        v
    }

    pub fn from_vec(n: u8, k: usize, v: &[R]) -> Self {
        let words = MultiIndex::enumerate(n, k);
        assert_eq!(v.len(), words.len() * n as usize);
        let mut out = Cochain::zero(n, k);
        for (wi, w) in words.iter().enumerate() {
            for t in 0..n as usize {
                let c = v[wi * n as usize + t].clone();
                if !c.is_zero() {
                    out.coeffs.insert((w.clone(), (t + 1) as u8), c);
                }
            }
        }
        out
    }
}

/// Dimension of C^k(W) for dim W = n.
pub fn cochain_space_dim(n: u8, k: usize) -> usize {
    binomial(n as usize, k) * n as usize
}

/// The circle product phi o psi in C^{k+l-1}(W), the shuffle sum
///   (phi o psi)(w_1...w_m) =
///     sum over Sh(l, k-1) of eps(sigma) phi(psi(first block) rest).
pub fn circle<R: Ring>(phi: &Cochain<R>, psi: &Cochain<R>) -> Result<Cochain<R>, CoreError> {
    phi.check_compatible(psi)?;
    let n = phi.n;
    let (k, l) = (phi.k, psi.k);
    if k == 0 {
        // a constant has no slot to compose into
        return Ok(Cochain::zero(n, l.saturating_sub(1)));
    }
    let m = k + l - 1;
    let mut out = Cochain::zero(n, m);
    if m > n as usize {
        return Ok(out);
    }
    let shuffle_set = shuffles(l, k - 1);
    for word in MultiIndex::enumerate(n, m) {
        let letters = word.indices();
        for (perm, eps) in &shuffle_set {
            let inner: Vec<u8> = perm[..l].iter().map(|&p| letters[p]).collect();
            let rest: Vec<u8> = perm[l..].iter().map(|&p| letters[p]).collect();
            let inner_mi = MultiIndex::new(inner);
            // psi(inner) = sum_j c_j w_j
            for t1 in 1..=n {
                let Some(c1) = psi.coeffs.get(&(inner_mi.clone(), t1)) else {
                    continue;
                };
                let mut outer_word = Vec::with_capacity(k);
                outer_word.push(t1);
                outer_word.extend_from_slice(&rest);
                let Some((outer_mi, s2)) = MultiIndex::from_word(&outer_word) else {
                    continue; // repeated odd letter
                };
                for t2 in 1..=n {
                    let Some(c2) = phi.coeffs.get(&(outer_mi.clone(), t2)) else {
                        continue;
                    };
                    let term = c1.mul(c2).scale_int((*eps * s2) as i64);
                    out.insert(word.clone(), t2, term);
                }
            }
        }
    }
    Ok(out)
}

/// The graded bracket [phi, psi] = phi o psi - (-1)^{|phi||psi|} psi o phi.
pub fn bracket<R: Ring>(phi: &Cochain<R>, psi: &Cochain<R>) -> Result<Cochain<R>, CoreError> {
    let a = circle(phi, psi)?;
    let b = circle(psi, phi)?;
    let sign = if phi.parity() * psi.parity() == 1 { 1 } else { -1 };
    // [phi,psi] = a - (-1)^{pq} b; for two odd cochains this is a + b
    if sign == 1 {
        a.add(&b)
    } else {
        a.sub(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn psi(n: u8, idx: &[u8], t: u8) -> Cochain<Scalar> {
        Cochain::monomial(n, MultiIndex::new(idx.to_vec()), t, Scalar::one())
    }

    #[test]
    fn d1_squares_to_zero() {
        // d1 = psi^{23}_1 on n=3 is a Lie codifferential, so d o d = 0
        let d1 = psi(3, &[2, 3], 1);
        let sq = circle(&d1, &d1).unwrap();
        assert!(sq.is_zero());
        assert!(bracket(&d1, &d1).unwrap().is_zero());
    }

    #[test]
    fn identity_cochain_counts_slots() {
        // with id(w_i) = w_i inner, psi o id hits each of the k slots once
        let n = 3;
        let mut id1 = Cochain::zero(n, 1);
        for i in 1..=n {
            id1.insert(MultiIndex::new(vec![i]), i, Scalar::one());
        }
        for k in 1..=3usize {
            let mut sample = psi(n, &(1..=(k as u8)).collect::<Vec<_>>(), 2);
            sample = sample.add(&psi(n, &((4 - k as u8)..=3).collect::<Vec<_>>(), 1)).unwrap();
            let prod = circle(&sample, &id1).unwrap();
            assert_eq!(prod, sample.scale(&Scalar::from_int(k as i64)));
            // the identity in the outer slot composes to the cochain itself
            assert_eq!(circle(&id1, &sample).unwrap(), sample);
        }
    }

    #[test]
    fn bracket_of_odd_with_itself_is_twice_square() {
        let phi = psi(3, &[1, 3], 1)
            .add(&psi(3, &[2, 3], 2))
            .unwrap()
            .add(&psi(3, &[1, 2], 3))
            .unwrap();
        let sq = circle(&phi, &phi).unwrap();
        let br = bracket(&phi, &phi).unwrap();
        assert_eq!(br, sq.scale(&Scalar::from_int(2)));
    }

    #[test]
    fn graded_antisymmetry() {
        // [phi,psi] = -(-1)^{|phi||psi|} [psi,phi]
        let phi = psi(3, &[1, 2], 3); // degree 2, odd
        let lam = psi(3, &[3], 3); // degree 1, even
        let a = bracket(&phi, &lam).unwrap();
        let b = bracket(&lam, &phi).unwrap();
        // odd*even = 0, so [phi,lam] = -[lam,phi]
        assert_eq!(a, b.neg());
        let other = psi(3, &[1, 3], 2);
        let c = bracket(&phi, &other).unwrap();
        let d = bracket(&other, &phi).unwrap();
        // odd*odd: [phi,other] = +[other,phi]
        assert_eq!(c, d);
    }

    #[test]
    fn degree_zero_constants_compose() {
        // d o c for c in C^0 inserts the constant into one slot of d
        let d2 = psi(3, &[1, 3], 1).add(&psi(3, &[2, 3], 2)).unwrap();
        let c = Cochain::monomial(3, MultiIndex::empty(), 3, Scalar::one());
        let dc = circle(&d2, &c).unwrap();
        assert_eq!(dc.degree(), 1);
        // d2(w3 w_a): d2(w3 w1) = -w1, d2(w3 w2) = -w2
        let mut expect = Cochain::zero(3, 1);
        expect.insert(MultiIndex::new(vec![1]), 1, Scalar::from_int(-1));
        expect.insert(MultiIndex::new(vec![2]), 2, Scalar::from_int(-1));
        assert_eq!(dc, expect);
        assert!(circle(&c, &d2).unwrap().is_zero());
    }
}
