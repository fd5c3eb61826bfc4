//! Cohomology of a codifferential: exact dimensions of cocycles,
//! coboundaries and H^k, with deterministic representative cocycles and a
//! pre-basis of the next coboundary space.

use crate::cochain::{bracket, cochain_space_dim, Cochain};
use crate::codifferential::Codifferential;
use crate::error::CoreError;
use crate::linalg::{Matrix, SpanTracker};
use crate::multiindex::MultiIndex;
use crate::scalar::{scalar_to_json, Scalar};

/// The degree-k cohomology data of a Lie codifferential.
#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub degree: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
    /// Cocycles whose classes form a basis of H^k.
    pub representatives: Vec<Cochain<Scalar>>,
    /// Monomial cochains gamma^j in C^k whose images D(gamma^j) form a
    /// basis of B^{k+1}.
    pub cobasis: Vec<Cochain<Scalar>>,
}

/// Monomial basis of C^k in canonical order (multi-index colex, then target).
pub fn monomial_basis(n: u8, k: usize) -> Vec<(MultiIndex, u8)> {
    let mut out = Vec::new();
    for mi in MultiIndex::enumerate(n, k) {
        for t in 1..=n {
            out.push((mi.clone(), t));
        }
    }
    out
}

/// Matrix of D = [d, .] : C^k -> C^{k+1}, columns over the monomial basis.
pub fn coboundary_matrix(d: &Codifferential, k: usize) -> Matrix<Scalar> {
    let n = d.dim();
    let rows = cochain_space_dim(n, k + 1);
    let basis = monomial_basis(n, k);
    let mut m = Matrix::zero(rows, basis.len());
    for (j, (mi, t)) in basis.iter().enumerate() {
        let phi = Cochain::monomial(n, mi.clone(), *t, Scalar::one());
        let image = bracket(d.cochain(), &phi).expect("same dimension");
        for (r, c) in image.to_vec().into_iter().enumerate() {
            if !c.is_zero() {
                *m.at_mut(r, j) = c;
            }
        }
    }
    m
}

/// Cohomology of d at degree k (0 <= k <= n). Rejects non-Lie input.
pub fn cohomology(d: &Codifferential, k: usize) -> Result<CohomologyReport, CoreError> {
    if !d.is_lie() {
        return Err(CoreError::NotLie);
    }
    let n = d.dim();
    if k > n as usize {
        return Err(CoreError::Invalid(format!(
            "degree {} out of range for dim {}",
            k, n
        )));
    }
    let dk = coboundary_matrix(d, k);
    let dim_ck = cochain_space_dim(n, k);

    // cocycles: kernel of D_k
    let kernel = dk.kernel_basis();
    let dim_z = kernel.len();

    // coboundaries: image of D_{k-1}
    let (b_basis, dim_b) = if k == 0 {
        (Vec::new(), 0)
    } else {
        let dprev = coboundary_matrix(d, k - 1);
        let pivots = dprev.rref().pivots;
        let img: Vec<Vec<Scalar>> = pivots.iter().map(|&c| dprev.col(c)).collect();
        let r = img.len();
        (img, r)
    };

    // rank-nullity at degree k: rank(D_k) + dim Z^k = dim C^k
    let rank_dk = dk.rank();
    assert_eq!(rank_dk + dim_z, dim_ck, "rank-nullity violated");

    let dim_h = dim_z
        .checked_sub(dim_b)
        .expect("B^k is contained in Z^k for a Lie codifferential");

    // representatives: cocycles independent modulo B^k, greedily in the
    // canonical kernel order
    let mut span = SpanTracker::new(dim_ck);
    for b in &b_basis {
        span.insert(b);
    }
    let mut representatives = Vec::new();
    for z in &kernel {
        if representatives.len() == dim_h {
            break;
        }
        if span.insert(z) {
            representatives.push(Cochain::from_vec(n, k, z));
        }
    }
    assert_eq!(representatives.len(), dim_h);

    // cobasis: monomials whose D-images are pivot columns of D_k
    let basis = monomial_basis(n, k);
    let cobasis: Vec<Cochain<Scalar>> = dk
        .rref()
        .pivots
        .iter()
        .map(|&j| {
            let (mi, t) = &basis[j];
            Cochain::monomial(n, mi.clone(), *t, Scalar::one())
        })
        .collect();

    Ok(CohomologyReport {
        degree: k,
        dim_z,
        dim_b,
        dim_h,
        representatives,
        cobasis,
    })
}

pub fn cochain_to_json(c: &Cochain<Scalar>, field: crate::scalar::Field) -> serde_json::Value {
    let arr: Vec<serde_json::Value> = c
        .entries()
        .map(|(mi, t, coeff)| {
            let mut map = serde_json::Map::new();
            map.insert(
                "index".into(),
                serde_json::Value::Array(
                    mi.indices().iter().map(|&i| serde_json::Value::from(i)).collect(),
                ),
            );
            map.insert("target".into(), serde_json::Value::from(t));
            map.insert("coeff".into(), scalar_to_json(coeff, field));
            serde_json::Value::Object(map)
        })
        .collect();
    serde_json::Value::Array(arr)
}

impl CohomologyReport {
    pub fn to_json(&self, field: crate::scalar::Field) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("degree".into(), serde_json::Value::from(self.degree));
        map.insert("dim_Z".into(), serde_json::Value::from(self.dim_z));
        map.insert("dim_B".into(), serde_json::Value::from(self.dim_b));
        map.insert("dim_H".into(), serde_json::Value::from(self.dim_h));
        map.insert(
            "representatives".into(),
            serde_json::Value::Array(
                self.representatives
                    .iter()
                    .map(|r| cochain_to_json(r, field))
                    .collect(),
            ),
        );
        serde_json::Value::Object(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn d(n: u8, rows: &[&[i64]]) -> Codifferential {
        Codifferential::from_int_rows(n, Field::Qi, rows)
    }

    #[test]
    fn paper_3d_h2_dimensions() {
        let d1 = d(3, &[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]);
        let d2 = d(3, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let d3 = d(3, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let d1m1 = d(3, &[&[0, 1, 1], &[0, 0, -1], &[0, 0, 0]]);
        assert_eq!(cohomology(&d1, 2).unwrap().dim_h, 5);
        assert_eq!(cohomology(&d2, 2).unwrap().dim_h, 3);
        assert_eq!(cohomology(&d3, 2).unwrap().dim_h, 0);
        assert_eq!(cohomology(&d1m1, 2).unwrap().dim_h, 2);
    }

    #[test]
    fn four_dim_psi24_dimensions() {
        // d = psi^{24}_1: H^2 is 13-dimensional and H^3 is 10-dimensional
        let d1 = d(4, &[
            &[0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0, 0],
            &[0, 0, 0, 0, 0, 0],
            &[0, 0, 0, 0, 0, 0],
        ]);
        assert_eq!(cohomology(&d1, 2).unwrap().dim_h, 13);
        assert_eq!(cohomology(&d1, 3).unwrap().dim_h, 10);
    }

    #[test]
    fn abelian_has_no_coboundaries() {
        let zero = Codifferential::zero(3, Field::Q);
        for k in 0..=3usize {
            let rep = cohomology(&zero, k).unwrap();
            assert_eq!(rep.dim_b, 0);
            assert_eq!(rep.dim_z, cochain_space_dim(3, k));
        }
    }

    #[test]
    fn representatives_are_cocycles() {
        let d2 = d(3, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let rep = cohomology(&d2, 2).unwrap();
        assert_eq!(rep.representatives.len(), 3);
        for r in &rep.representatives {
            assert!(d2.coboundary(r).unwrap().is_zero());
        }
        // cobasis images really span B^3 independently
        let d3mat = coboundary_matrix(&d2, 2);
        let mut span = SpanTracker::new(d3mat.rows());
        for g in &rep.cobasis {
            let img = d2.coboundary(g).unwrap().to_vec();
            assert!(span.insert(&img));
        }
    }

    #[test]
    fn non_lie_rejected() {
        let bad = d(3, &[&[1, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert!(cohomology(&bad, 2).is_err());
    }
}
