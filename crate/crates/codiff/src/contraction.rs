//! Contractions by diagonal one-parameter automorphism families
//! diag(t^a1, ..., t^an), plus a symbolic mode for non-diagonal monomial
//! curves g_t. Limits are taken exactly by zeroing the entries that scale
//! by positive powers of t.

use crate::basis::induced_matrix;
use crate::codifferential::Codifferential;
use crate::error::{ContractionError, CoreError};
use crate::laurent::{laurent_inverse, laurent_limit, Laurent};
use crate::linalg::Matrix;
use crate::multiindex::MultiIndex;
use crate::scalar::{scalar_from_json, Scalar};

/// Integer diagonal exponents a_1..a_n, normalized so the minimum is 0
/// (adding a constant to all exponents only rescales d, and a d ~ d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(v: Vec<i64>) -> Self {
        let min = v.iter().copied().min().unwrap_or(0);
        ExponentVector(v.into_iter().map(|x| x - min).collect())
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// Per nonzero entry (i, {a,b}) of the matrix, the scaling exponent
/// lambda_a + lambda_b - lambda_i of t in G^{-1} A Q.
pub fn entry_exponents(
    d: &Codifferential,
    lambda: &ExponentVector,
) -> Vec<(MultiIndex, u8, i64)> {
    assert_eq!(lambda.len(), d.dim() as usize, "exponent vector length");
    let ex = lambda.exponents();
    d.cochain()
        .entries()
        .map(|(mi, t, _)| {
            let idx = mi.indices();
            let e = ex[(idx[0] - 1) as usize] + ex[(idx[1] - 1) as usize]
                - ex[(t - 1) as usize];
            (mi.clone(), t, e)
        })
        .collect()
}

/// Outcome of one diagonal degeneration.
#[derive(Clone, Debug)]
pub struct DegenerationRecord {
    pub source: Codifferential,
    pub exponents: ExponentVector,
    pub limit: Codifferential,
    /// Catalog label and canonical parameters, when identification succeeds.
    pub classification: Option<(String, Vec<Scalar>)>,
}

/// Limit of g_t^*(d) for the diagonal family with the given exponents,
/// after an optional rational change of basis applied first.
pub fn degenerate(
    d: &Codifferential,
    lambda: &ExponentVector,
    pre: Option<&crate::basis::BasisChange>,
) -> Result<Codifferential, ContractionError> {
    let base = match pre {
        Some(g) => g.pullback_codiff(d).map_err(ContractionError::Core)?,
        None => d.clone(),
    };
    let exps = entry_exponents(&base, lambda);
    if exps.iter().any(|(_, _, e)| *e < 0) {
        return Err(ContractionError::NegativeExponent);
    }
    if exps.iter().all(|(_, _, e)| *e == 0) {
        return Err(ContractionError::NotAContraction(
            "no entry is zeroed; the codifferential is unchanged".into(),
        ));
    }
    let mut kept = crate::cochain::Cochain::zero(base.dim(), 2);
    for (mi, t, e) in &exps {
        if *e == 0 {
            kept.insert(mi.clone(), *t, base.cochain().coeff(mi, *t));
        }
    }
    let limit =
        Codifferential::new(kept, base.field()).map_err(ContractionError::Core)?;
    // a limit of Lie structures is Lie; if the source was Lie this must hold
    if d.is_lie() && !limit.is_lie() {
        return Err(ContractionError::Core(CoreError::Invalid(
            "limit of a Lie codifferential failed the Jacobi check".into(),
        )));
    }
    Ok(limit)
}

/// Equivalence test used for deduplication: identification against the
/// catalog when available, else cheap invariants.
fn same_class(a: &Codifferential, b: &Codifferential) -> bool {
    use crate::catalog;
    match (catalog::identify(a), catalog::identify(b)) {
        (Ok(ia), Ok(ib)) => ia.label == ib.label && ia.params == ib.params,
        _ => {
            // fall back to invariant comparison: support pattern sizes,
            // derived dimension, center dimension, Killing rank
            invariant_key(a) == invariant_key(b) && {
                // refuse to merge distinct unidentified classes
                a.to_matrix() == b.to_matrix()
            }
        }
    }
}

fn invariant_key(d: &Codifferential) -> (usize, usize, usize) {
    let derived = d.derived_subspace().len();
    let killing = d.killing_form().rank();
    let entries = d.cochain().entries().count();
    (derived, killing, entries)
}

/// All nontrivial diagonal contractions with exponents in [0, bound],
/// deduplicated up to equivalence. The abelian limit is excluded unless
/// `include_abelian` is set. Candidates are scanned in lexicographic
/// order of the exponent vector, so output is reproducible.
pub fn enumerate_contractions(
    d: &Codifferential,
    bound: i64,
    include_abelian: bool,
) -> Result<Vec<DegenerationRecord>, ContractionError> {
    if !d.is_lie() {
        return Err(ContractionError::Core(CoreError::NotLie));
    }
    if bound < 1 {
        return Err(ContractionError::Core(CoreError::Invalid(
            "bound must be at least 1".into(),
        )));
    }
    let n = d.dim() as usize;
    let mut out: Vec<DegenerationRecord> = Vec::new();
    let total = ((bound + 1) as usize).pow(n as u32);
    for code in 0..total {
        let mut rem = code;
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push((rem % (bound as usize + 1)) as i64);
            rem /= bound as usize + 1;
        }
        v.reverse(); // lexicographic in the natural reading order
        if v.iter().min() != Some(&0) {
            continue; // normalized representatives only
        }
        let lambda = ExponentVector::new(v);
        if lambda.is_trivial() {
            continue;
        }
        let Ok(limit) = degenerate(d, &lambda, None) else {
            continue;
        };
        if limit.is_zero() && !include_abelian {
            continue;
        }
        // a contraction must leave the equivalence class
        if same_class(&limit, d) {
            continue;
        }
        if out.iter().any(|r| same_class(&r.limit, &limit)) {
            continue;
        }
        let classification = crate::catalog::identify(&limit)
            .ok()
            .map(|id| (id.label, id.params));
        out.push(DegenerationRecord {
            source: d.clone(),
            exponents: lambda,
            limit,
            classification,
        });
    }
    Ok(out)
}

/// Symbolic contraction along a monomial curve G(t): computes
/// G^{-1} A Q(G) over Laurent polynomials, checks all valuations are
/// nonnegative and returns the t -> 0 limit.
pub fn contract_with_curve(
    d: &Codifferential,
    g_of_t: &Matrix<Laurent>,
) -> Result<Codifferential, ContractionError> {
    let n = d.dim() as usize;
    if g_of_t.rows() != n || g_of_t.cols() != n {
        return Err(ContractionError::Core(CoreError::DimensionMismatch(
            "curve matrix must be n x n".into(),
        )));
    }
    let a = d.to_matrix();
    let a_l = Matrix::from_fn(a.rows(), a.cols(), |r, c| {
        Laurent::constant(a.at(r, c).clone())
    });
    let ginv = laurent_inverse(g_of_t)?;
    let q = induced_matrix(g_of_t, 2);
    let conj = ginv.mul(&a_l).mul(&q);
    let limit_matrix = laurent_limit(&conj)?;
    let limit = Codifferential::from_matrix(&limit_matrix, d.field())
        .map_err(ContractionError::Core)?;
    if limit.to_matrix() == d.to_matrix() {
        return Err(ContractionError::NotAContraction(
            "the curve does not change the codifferential".into(),
        ));
    }
    if d.is_lie() && !limit.is_lie() {
        return Err(ContractionError::Core(CoreError::Invalid(
            "limit of a Lie codifferential failed the Jacobi check".into(),
        )));
    }
    Ok(limit)
}

/// Parse a curve matrix from JSON: entries are 0, an integer, a scalar
/// string, or {"coeff": scalar, "exp": e} monomials.
pub fn curve_from_json(v: &serde_json::Value) -> Result<Matrix<Laurent>, CoreError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CoreError::Parse("curve JSON must be an object".into()))?;
    let rows = obj
        .get("matrix")
        .and_then(|m| m.as_array())
        .ok_or_else(|| CoreError::Parse("curve missing `matrix`".into()))?;
    let n = rows.len();
    let mut out = Matrix::zero(n, n);
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| CoreError::Parse("curve rows must be arrays".into()))?;
        if row.len() != n {
            return Err(CoreError::Parse("curve matrix must be square".into()));
        }
        for (c, entry) in row.iter().enumerate() {
            let lau = match entry {
                serde_json::Value::Object(m) if m.contains_key("coeff") => {
                    let coeff = scalar_from_json(
                        m.get("coeff")
                            .ok_or_else(|| CoreError::Parse("monomial missing coeff".into()))?,
                    )?;
                    let e = m
                        .get("exp")
                        .and_then(|e| e.as_i64())
                        .ok_or_else(|| CoreError::Parse("monomial missing integer exp".into()))?;
                    Laurent::monomial(coeff, e)
                }
                other => Laurent::constant(scalar_from_json(other)?),
            };
            *out.at_mut(r, c) = lau;
        }
    }
    Ok(out)
}

impl DegenerationRecord {
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("source".into(), self.source.to_json());
        map.insert(
            "exponents".into(),
            serde_json::Value::Array(
                self.exponents
                    .exponents()
                    .iter()
                    .map(|&e| serde_json::Value::from(e))
                    .collect(),
            ),
        );
        map.insert("limit".into(), self.limit.to_json());
        match &self.classification {
            Some((label, params)) => {
                let mut c = serde_json::Map::new();
                c.insert("label".into(), serde_json::Value::String(label.clone()));
                c.insert(
                    "params".into(),
                    serde_json::Value::Array(
                        params
                            .iter()
                            .map(|p| crate::scalar::scalar_to_json(p, self.limit.field()))
                            .collect(),
                    ),
                );
                map.insert("classification".into(), serde_json::Value::Object(c));
            }
            None => {
                map.insert("classification".into(), serde_json::Value::Null);
            }
        }
        serde_json::Value::Object(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn d11() -> Codifferential {
        // d(1:1) with matrix [[0,1,1],[0,0,1],[0,0,0]]
        Codifferential::from_int_rows(3, Field::Qi, &[&[0, 1, 1], &[0, 0, 1], &[0, 0, 0]])
    }

    #[test]
    fn exponent_formula_matches_contract_form() {
        // entries of d(1:1): (1,(13)) -> c, (1,(23)) -> b+c-a, (2,(23)) -> c
        let (a, b, c) = (5i64, 7, 11);
        let exps = entry_exponents(&d11(), &ExponentVector::new(vec![a, b, c]));
        let min = [a, b, c].into_iter().min().unwrap();
        let (a, b, c) = (a - min, b - min, c - min);
        let mut seen: Vec<i64> = exps.iter().map(|(_, _, e)| *e).collect();
        seen.sort();
        let mut expect = vec![c, b + c - a, c];
        expect.sort();
        assert_eq!(seen, expect);
    }

    #[test]
    fn zero_vector_gives_all_zero_exponents() {
        let exps = entry_exponents(&d11(), &ExponentVector::new(vec![0, 0, 0]));
        assert!(exps.iter().all(|(_, _, e)| *e == 0));
    }

    #[test]
    fn paper_limits_of_d11() {
        // (0,1,0): zero out the (1,(23)) entry -> d2
        let lim = degenerate(&d11(), &ExponentVector::new(vec![0, 1, 0]), None).unwrap();
        let d2 = Codifferential::from_int_rows(
            3,
            Field::Qi,
            &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]],
        );
        assert_eq!(lim.to_matrix(), d2.to_matrix());
        // (1,0,1): only the (1,(23)) entry survives -> d1
        let lim = degenerate(&d11(), &ExponentVector::new(vec![1, 0, 1]), None).unwrap();
        let d1 = Codifferential::from_int_rows(
            3,
            Field::Qi,
            &[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]],
        );
        assert_eq!(lim.to_matrix(), d1.to_matrix());
        // the trivial vector is not a contraction
        assert!(matches!(
            degenerate(&d11(), &ExponentVector::new(vec![0, 0, 0]), None),
            Err(ContractionError::NotAContraction(_))
        ));
    }

    #[test]
    fn diagonal_curve_matches_degenerate() {
        let lambda = ExponentVector::new(vec![0, 1, 0]);
        let g = Matrix::from_fn(3, 3, |r, c| {
            if r == c {
                Laurent::monomial(Scalar::one(), lambda.exponents()[r])
            } else {
                Laurent::zero()
            }
        });
        let via_curve = contract_with_curve(&d11(), &g).unwrap();
        let via_diag = degenerate(&d11(), &lambda, None).unwrap();
        assert_eq!(via_curve.to_matrix(), via_diag.to_matrix());
    }
}
