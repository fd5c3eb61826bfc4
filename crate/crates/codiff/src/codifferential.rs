//! Degree-2 codifferentials: Lie algebra structures on a purely odd space,
//! encoded as n x C(n,2) matrices over the ground field.

use crate::cochain::{bracket, Cochain};
use crate::error::CoreError;
use crate::linalg::{Matrix, SpanTracker};
use crate::multiindex::MultiIndex;
use crate::scalar::{scalar_from_json, scalar_to_json, Field, Scalar};

/// A degree-2 cochain over a declared ground field. Whether it is a *Lie*
/// codifferential ([d,d] = 0) is computed on demand, never assumed.
#[derive(Clone, PartialEq, Debug)]
pub struct Codifferential {
    cochain: Cochain<Scalar>,
    field: Field,
}

impl Codifferential {
    pub fn new(cochain: Cochain<Scalar>, field: Field) -> Result<Self, CoreError> {
        if cochain.degree() != 2 {
            return Err(CoreError::Invalid(format!(
                "codifferential must have degree 2, got {}",
                cochain.degree()
            )));
        }
        if field == Field::Q {
            for (_, _, c) in cochain.entries() {
                if !c.is_real() {
                    return Err(CoreError::FieldMismatch(format!(
                        "coefficient {} is not rational",
                        c
                    )));
                }
            }
        }
        Ok(Codifferential { cochain, field })
    }

    pub fn zero(n: u8, field: Field) -> Self {
        Codifferential { cochain: Cochain::zero(n, 2), field }
    }

    /// Build from the matrix encoding: rows indexed by the target, columns
    /// by pairs in canonical order, entry a_{i,J} = coefficient of w_i in
    /// d(w_J).
    pub fn from_matrix_rows(
        n: u8,
        field: Field,
        rows: &[Vec<Scalar>],
    ) -> Result<Self, CoreError> {
        let pairs = MultiIndex::enumerate(n, 2);
        if rows.len() != n as usize || rows.iter().any(|r| r.len() != pairs.len()) {
            return Err(CoreError::DimensionMismatch(format!(
                "expected {} x {} matrix",
                n,
                pairs.len()
            )));
        }
        let mut c = Cochain::zero(n, 2);
        for (i, row) in rows.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if !entry.is_zero() {
                    c.insert(pairs[j].clone(), (i + 1) as u8, entry.clone());
                }
            }
        }
        Codifferential::new(c, field)
    }

    /// Convenience constructor from integer entries.
    pub fn from_int_rows(n: u8, field: Field, rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        Self::from_matrix_rows(n, field, &rows).expect("static matrix data is well formed")
    }

    pub fn to_matrix(&self) -> Matrix<Scalar> {
        let n = self.dim();
        let pairs = MultiIndex::enumerate(n, 2);
        Matrix::from_fn(n as usize, pairs.len(), |r, c| {
            self.cochain.coeff(&pairs[c], (r + 1) as u8)
        })
    }

    pub fn from_matrix(m: &Matrix<Scalar>, field: Field) -> Result<Self, CoreError> {
        let rows: Vec<Vec<Scalar>> = (0..m.rows()).map(|r| m.row(r)).collect();
        Self::from_matrix_rows(m.rows() as u8, field, &rows)
    }

    pub fn cochain(&self) -> &Cochain<Scalar> {
        &self.cochain
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Reinterpret over another field. Widening Q -> Qi always succeeds;
    /// narrowing checks that every coefficient is real.
    pub fn with_field(&self, field: Field) -> Result<Self, CoreError> {
        Codifferential::new(self.cochain.clone(), field)
    }

    pub fn dim(&self) -> u8 {
        self.cochain.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.cochain.is_zero()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Codifferential { cochain: self.cochain.scale(s), field: self.field }
    }

    /// [d,d], a degree-3 cochain; zero exactly when d defines a Lie algebra.
    pub fn jacobi_defect(&self) -> Cochain<Scalar> {
        bracket(&self.cochain, &self.cochain).expect("self-bracket is compatible")
    }

    pub fn is_lie(&self) -> bool {
        self.jacobi_defect().is_zero()
    }

    /// The coboundary D(phi) = [d, phi]. Rejects non-Lie d, since D fails
    /// to square to zero otherwise.
    pub fn coboundary(&self, phi: &Cochain<Scalar>) -> Result<Cochain<Scalar>, CoreError> {
        if !self.is_lie() {
            return Err(CoreError::NotLie);
        }
        bracket(&self.cochain, phi)
    }

    /// d(u v) for arbitrary vectors u, v in W, by bilinear extension with
    /// odd-letter signs. Returns coordinates over w_1..w_n.
    pub fn apply_pair(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim() as usize;
        assert!(u.len() == n && v.len() == n);
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || v[j].is_zero() {
                    continue;
                }
                let coeff = &u[i] * &v[j];
                let (a, b, sign) = if i < j {
                    (i, j, 1i64)
                } else {
                    (j, i, -1i64)
                };
                let pair = MultiIndex::pair((a + 1) as u8, (b + 1) as u8);
                for t in 1..=self.dim() {
                    let c = self.cochain.coeff(&pair, t);
                    if !c.is_zero() {
                        let term = &(&coeff * &c) * &Scalar::from_int(sign);
                        out[(t - 1) as usize] = &out[(t - 1) as usize] + &term;
                    }
                }
            }
        }
        out
    }

    /// Matrix of ad_x = [x, .] acting on W (columns are images of w_j).
    pub fn ad_matrix(&self, x: &[Scalar]) -> Matrix<Scalar> {
        let n = self.dim() as usize;
        let mut basis_vec = vec![Scalar::zero(); n];
        Matrix::from_fn(n, n, |r, c| {
            basis_vec.iter_mut().for_each(|s| *s = Scalar::zero());
            basis_vec[c] = Scalar::one();
            let img = self.apply_pair(x, &basis_vec);
            img[r].clone()
        })
    }

    /// Echelon basis of the derived algebra [g, g] = image of d.
    pub fn derived_subspace(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut span = SpanTracker::new(n as usize);
        for pair in MultiIndex::enumerate(n, 2) {
            let col: Vec<Scalar> = (1..=n).map(|t| self.cochain.coeff(&pair, t)).collect();
            if col.iter().any(|c| !c.is_zero()) {
                span.insert(&col);
            }
        }
        span.basis().to_vec()
    }

    /// Killing form K(x,y) = tr(ad_x ad_y) on the standard basis.
    pub fn killing_form(&self) -> Matrix<Scalar> {
        let n = self.dim() as usize;
        let ads: Vec<Matrix<Scalar>> = (0..n)
            .map(|i| {
                let mut x = vec![Scalar::zero(); n];
                x[i] = Scalar::one();
                self.ad_matrix(&x)
            })
            .collect();
        Matrix::from_fn(n, n, |i, j| ads[i].mul(&ads[j]).trace())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m = self.to_matrix();
        let rows: Vec<serde_json::Value> = (0..m.rows())
            .map(|r| {
                serde_json::Value::Array(
                    (0..m.cols())
                        .map(|c| scalar_to_json(m.at(r, c), self.field))
                        .collect(),
                )
            })
            .collect();
        let mut map = serde_json::Map::new();
        map.insert("dim".into(), serde_json::Value::from(self.dim()));
        map.insert(
            "field".into(),
            serde_json::Value::String(self.field.to_string()),
        );
        map.insert("matrix".into(), serde_json::Value::Array(rows));
        serde_json::Value::Object(map)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, CoreError> {
        let obj = v
            .as_object()
            .ok_or_else(|| CoreError::Parse("algebra JSON must be an object".into()))?;
        let dim = obj
            .get("dim")
            .and_then(|d| d.as_u64())
            .ok_or_else(|| CoreError::Parse("missing or bad `dim`".into()))?;
        if dim == 0 || dim > 8 {
            return Err(CoreError::Parse(format!("unsupported dim {}", dim)));
        }
        let field = match obj.get("field").and_then(|f| f.as_str()) {
            Some("Q") => Field::Q,
            Some("Qi") => Field::Qi,
            Some(other) => {
                return Err(CoreError::Parse(format!("unknown field `{}`", other)))
            }
            None => return Err(CoreError::Parse("missing `field`".into())),
        };
        let matrix = obj
            .get("matrix")
            .and_then(|m| m.as_array())
            .ok_or_else(|| CoreError::Parse("missing or bad `matrix`".into()))?;
        let mut rows = Vec::with_capacity(matrix.len());
        for row in matrix {
            let row = row
                .as_array()
                .ok_or_else(|| CoreError::Parse("matrix rows must be arrays".into()))?;
            let mut out = Vec::with_capacity(row.len());
            for entry in row {
                out.push(scalar_from_json(entry)?);
            }
            rows.push(out);
        }
        Self::from_matrix_rows(dim as u8, field, &rows)
    }

    pub fn parse_str(s: &str) -> Result<Self, CoreError> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| CoreError::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2_3d() -> Codifferential {
        Codifferential::from_int_rows(3, Field::Qi, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])
    }

    #[test]
    fn matrix_cochain_round_trip() {
        let d = d2_3d();
        // row 1, column (1,3) is the psi^{13}_1 coefficient
        assert_eq!(
            d.cochain().coeff(&MultiIndex::pair(1, 3), 1),
            Scalar::one()
        );
        let m = d.to_matrix();
        let d2 = Codifferential::from_matrix(&m, Field::Qi).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn lie_checks() {
        assert!(d2_3d().is_lie());
        assert!(Codifferential::zero(3, Field::Q).is_lie());
        // psi^{12}_1 + psi^{13}_2 + psi^{23}_3 satisfies Jacobi (the cyclic
        // terms cancel; it is sl2 in a non-standard basis)
        let disguised = Codifferential::from_int_rows(
            3,
            Field::Qi,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
        );
        assert!(disguised.is_lie());
        // psi^{12}_1 + psi^{13}_1 + psi^{23}_2 does not
        let bad = Codifferential::from_int_rows(
            3,
            Field::Qi,
            &[&[1, 1, 0], &[0, 0, 1], &[0, 0, 0]],
        );
        assert!(!bad.is_lie());
        assert!(bad.coboundary(bad.cochain()).is_err());
    }

    #[test]
    fn coboundary_of_d_is_zero() {
        let d = d2_3d();
        let dd = d.coboundary(d.cochain()).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let d = d2_3d();
        let j = d.to_json();
        let d2 = Codifferential::from_json(&j).unwrap();
        assert_eq!(d, d2);
        let err = Codifferential::parse_str("{\"dim\": 3}").unwrap_err();
        assert!(matches!(err, CoreError::Parse(_)));
    }

    #[test]
    fn field_narrowing_checks_reality() {
        let mut c = Cochain::zero(3, 2);
        c.insert(MultiIndex::pair(1, 2), 3, Scalar::i());
        let d = Codifferential::new(c, Field::Qi).unwrap();
        assert!(d.with_field(Field::Q).is_err());
    }

    #[test]
    fn ad_and_derived() {
        let d = d2_3d();
        let derived = d.derived_subspace();
        assert_eq!(derived.len(), 2);
        // ad_{w3} acts as -identity on span(w1, w2)
        let mut x = vec![Scalar::zero(); 3];
        x[2] = Scalar::one();
        let ad = d.ad_matrix(&x);
        assert_eq!(*ad.at(0, 0), Scalar::from_int(-1));
        assert_eq!(*ad.at(1, 1), Scalar::from_int(-1));
        assert!(ad.at(2, 2).is_zero());
    }
}
