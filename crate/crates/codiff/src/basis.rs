//! Basis changes of W, their induced action on the symmetric powers
//! S^k(W) (with odd-variable signs), and the pullback g^*(phi) = g^{-1} phi g.

use crate::cochain::Cochain;
use crate::codifferential::Codifferential;
use crate::error::CoreError;
use crate::linalg::Matrix;
use crate::multiindex::MultiIndex;
use crate::ring::Ring;
use crate::scalar::{Field, Scalar};

/// Matrix of the automorphism on S^k(W) induced by g on W, over any ring.
///
/// Columns of `g` are images of basis vectors; the induced matrix follows
/// the same convention: column J holds the coordinates of g(w_J), expanded
/// with w_i w_j = -w_j w_i and w_i w_i = 0.
pub fn induced_matrix<R: Ring>(g: &Matrix<R>, k: usize) -> Matrix<R> {
    let n = g.rows();
    assert_eq!(g.cols(), n, "automorphism matrix must be square");
    let words = MultiIndex::enumerate(n as u8, k);
    let mut out: Matrix<R> = Matrix::zero(words.len(), words.len());
    let total: usize = n.pow(k as u32);
    for (col, word) in words.iter().enumerate() {
        let letters = word.indices();
        for code in 0..total {
            // base-n digits pick one target index per letter of the word
            let mut rem = code;
            let mut coeff = R::one();
            let mut picked = Vec::with_capacity(k);
            let mut nonzero = true;
            for &li in letters {
                let i = rem % n;
                rem /= n;
                let e = g.at(i, (li - 1) as usize);
                if e.is_zero() {
                    nonzero = false;
                    break;
                }
                coeff = coeff.mul(e);
                picked.push((i + 1) as u8);
            }
            if !nonzero {
                continue;
            }
            if let Some((mi, sign)) = MultiIndex::from_word(&picked) {
                let row = mi.colex_rank();
                let signed = coeff.scale_int(sign as i64);
                *out.at_mut(row, col) = out.at(row, col).add(&signed);
            }
        }
    }
    out
}

/// An invertible change of basis of W over a declared field.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange {
    g: Matrix<Scalar>,
}

impl BasisChange {
    pub fn new(g: Matrix<Scalar>) -> Result<Self, CoreError> {
        if g.rows() != g.cols() {
            return Err(CoreError::DimensionMismatch(
                "basis change must be square".into(),
            ));
        }
        if g.det().is_zero() {
            return Err(CoreError::SingularMatrix);
        }
        Ok(BasisChange { g })
    }

    pub fn identity(n: usize) -> Self {
        BasisChange { g: Matrix::identity(n) }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let m = Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        );
        BasisChange::new(m).expect("static basis change is invertible")
    }

    pub fn matrix(&self) -> &Matrix<Scalar> {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn inverse(&self) -> BasisChange {
        BasisChange { g: self.g.inverse().expect("invertible by construction") }
    }

    /// Composition g then h as maps: the matrix product g * h acts on
    /// cochains by (g h)^* = h^* o g^*.
    pub fn compose(&self, other: &BasisChange) -> BasisChange {
        BasisChange { g: self.g.mul(&other.g) }
    }

    pub fn in_field(&self, field: Field) -> bool {
        match field {
            Field::Qi => true,
            Field::Q => {
                (0..self.g.rows()).all(|r| (0..self.g.cols()).all(|c| self.g.at(r, c).is_real()))
            }
        }
    }

    /// Matrix of the induced map on S^k(W).
    pub fn induced(&self, k: usize) -> Matrix<Scalar> {
        induced_matrix(&self.g, k)
    }

    /// The C(n,2) x C(n,2) matrix of g on S^2(W).
    pub fn pair_matrix(&self) -> Matrix<Scalar> {
        self.induced(2)
    }

    /// g^*(phi) = g^{-1} phi g for a cochain of any degree.
    pub fn pullback(&self, phi: &Cochain<Scalar>) -> Result<Cochain<Scalar>, CoreError> {
        if self.dim() != phi.dim() as usize {
            return Err(CoreError::DimensionMismatch(format!(
                "basis change dim {} vs cochain dim {}",
                self.dim(),
                phi.dim()
            )));
        }
        let k = phi.degree();
        let n = self.dim();
        let words = MultiIndex::enumerate(n as u8, k);
        // A: n x dim(S^k) matrix of phi
        let a = Matrix::from_fn(n, words.len(), |r, c| phi.coeff(&words[c], (r + 1) as u8));
        let q = self.induced(k);
        let ginv = self.g.inverse()?;
        let result = ginv.mul(&a).mul(&q);
        let mut out = Cochain::zero(n as u8, k);
        for (c, w) in words.iter().enumerate() {
            for r in 0..n {
                let v = result.at(r, c);
                if !v.is_zero() {
                    out.insert(w.clone(), (r + 1) as u8, v.clone());
                }
            }
        }
        Ok(out)
    }

    /// Pullback of a codifferential; the witness must live in its field.
    pub fn pullback_codiff(&self, d: &Codifferential) -> Result<Codifferential, CoreError> {
        if !self.in_field(d.field()) {
            return Err(CoreError::FieldMismatch(
                "basis change has entries outside the algebra's field".into(),
            ));
        }
        let c = self.pullback(d.cochain())?;
        Codifferential::new(c, d.field())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_identity_and_multiplicativity() {
        let id = BasisChange::identity(3);
        assert_eq!(id.pair_matrix(), Matrix::identity(3));
        let g = BasisChange::from_int_rows(&[&[0, 1, 1], &[1, 0, 1], &[0, 0, 1]]);
        let h = BasisChange::from_int_rows(&[&[1, 2, 0], &[0, 1, 0], &[1, 0, 3]]);
        let gh = g.compose(&h);
        assert_eq!(gh.pair_matrix(), g.pair_matrix().mul(&h.pair_matrix()));
    }

    #[test]
    fn paper_qt_fixture() {
        // g(w1) = t w2, g(w2) = w1, g(w3) = w1+w2+w3 at t = 7:
        // Q = [[-t,-t,1],[0,0,1],[0,t,0]]
        let t = 7i64;
        let g = BasisChange::from_int_rows(&[&[0, 1, 1], &[t, 0, 1], &[0, 0, 1]]);
        let q = g.pair_matrix();
        let expect = Matrix::from_rows(vec![
            vec![Scalar::from_int(-t), Scalar::from_int(-t), Scalar::from_int(1)],
            vec![Scalar::zero(), Scalar::zero(), Scalar::from_int(1)],
            vec![Scalar::zero(), Scalar::from_int(t), Scalar::zero()],
        ]);
        assert_eq!(q, expect);
    }

    #[test]
    fn pullback_round_trip() {
        let g = BasisChange::from_int_rows(&[&[2, 1, 0], &[1, 1, 0], &[3, 0, 1]]);
        let d = Codifferential::from_int_rows(
            3,
            Field::Q,
            &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]],
        );
        let fwd = g.pullback_codiff(&d).unwrap();
        let back = g.inverse().pullback_codiff(&fwd).unwrap();
        assert_eq!(back, d);
        // right action: (gh)^* = h^*(g^*)
        let h = BasisChange::from_int_rows(&[&[1, 0, 1], &[0, 1, 0], &[0, 0, 2]]);
        let gh = g.compose(&h);
        let lhs = gh.pullback_codiff(&d).unwrap();
        let rhs = h.pullback_codiff(&g.pullback_codiff(&d).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_preserves_lie() {
        let g = BasisChange::from_int_rows(&[&[1, 2, 3], &[0, 1, 4], &[5, 0, 1]]);
        let d3 = Codifferential::from_int_rows(
            3,
            Field::Q,
            &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]],
        );
        assert!(d3.is_lie());
        assert!(g.pullback_codiff(&d3).unwrap().is_lie());
    }
}
