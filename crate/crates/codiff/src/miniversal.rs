//! Miniversal deformations, order by order: d_inf = d + t_i delta^i +
//! x_j gamma^j with the x_j solved as truncated power series so that the
//! 3-coboundary component of [d_inf, d_inf] vanishes, leaving the base
//! relations r_i on the H^3 components.

use crate::cochain::{bracket, Cochain};
use crate::codifferential::Codifferential;
use crate::cohomology::{cohomology, CohomologyReport};
use crate::error::{CoreError, MiniversalError};
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::{Field, Scalar};

/// The frame used to decompose [d_inf, d_inf] in C^3.
pub struct MiniversalSetup {
    /// Pre-basis of H^2: the deformation directions delta^i.
    pub deltas: Vec<Cochain<Scalar>>,
    /// Degree-2 cochains gamma^j whose coboundaries span B^3.
    pub gammas: Vec<Cochain<Scalar>>,
    /// H^3 representatives alpha^i (one relation per representative).
    pub alphas: Vec<Cochain<Scalar>>,
    /// Degree-3 cochains tau^i whose coboundaries span B^4.
    pub taus: Vec<Cochain<Scalar>>,
    pub h2: CohomologyReport,
    pub h3: CohomologyReport,
}

pub fn setup(d: &Codifferential) -> Result<MiniversalSetup, MiniversalError> {
    let h2 = cohomology(d, 2).map_err(MiniversalError::Core)?;
    let h3 = cohomology(d, 3).map_err(MiniversalError::Core)?;
    Ok(MiniversalSetup {
        deltas: h2.representatives.clone(),
        gammas: h2.cobasis.clone(),
        alphas: h3.representatives.clone(),
        taus: h3.cobasis.clone(),
        h2,
        h3,
    })
}

pub struct MiniversalResult {
    pub base: Codifferential,
    /// d + t_i delta^i + x_j(t) gamma^j with the solved x substituted.
    pub d_infinity: Cochain<Polynomial>,
    /// Number of deformation parameters m = dim H^2.
    pub parameters: usize,
    pub solved_x: Vec<Polynomial>,
    /// Relations on the base, one per H^3 representative.
    pub relations: Vec<Polynomial>,
    /// Residual coefficients on the B^4 pre-basis.
    pub residual_b4: Vec<Polynomial>,
    pub truncation: u32,
}

fn promote(c: &Cochain<Scalar>, nvars: usize, trunc: u32) -> Cochain<Polynomial> {
    c.map(|s| Polynomial::constant(nvars, trunc, s.clone()))
}

fn apply_scalar_matrix(m: &Matrix<Scalar>, v: &[Polynomial]) -> Vec<Polynomial> {
    (0..m.rows())
        .map(|r| {
            let mut acc = Polynomial::zero();
            for (c, p) in v.iter().enumerate() {
                if !m.at(r, c).is_zero() && !p.is_zero() {
                    acc = acc.add(&p.scale(m.at(r, c)));
                }
            }
            acc
        })
        .collect()
}

/// Solve the miniversal deformation up to total degree `max_degree`.
pub fn solve(d: &Codifferential, max_degree: u32) -> Result<MiniversalResult, MiniversalError> {
    if max_degree < 2 {
        return Err(MiniversalError::Core(CoreError::Invalid(
            "truncation degree must be at least 2".into(),
        )));
    }
    let frame = setup(d)?;
    let n = d.dim();
    let m = frame.deltas.len();
    let nx = frame.gammas.len();
    let na = frame.alphas.len();
    let nt = frame.taus.len();
    let trunc = max_degree;

    // the projection frame in C^3: columns [alpha | D(gamma) | tau]
    let betas: Vec<Cochain<Scalar>> = frame
        .gammas
        .iter()
        .map(|g| d.coboundary(g).expect("d is Lie by setup"))
        .collect();
    let c3dim = crate::cochain::cochain_space_dim(n, 3);
    if na + nx + nt != c3dim {
        return Err(MiniversalError::ProjectionFailure(format!(
            "frame size {} + {} + {} does not fill C^3 of dim {}",
            na, nx, nt, c3dim
        )));
    }
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(c3dim);
    for a in &frame.alphas {
        cols.push(a.to_vec());
    }
    for b in &betas {
        cols.push(b.to_vec());
    }
    for t in &frame.taus {
        cols.push(t.to_vec());
    }
    let p = Matrix::from_fn(c3dim, c3dim, |r, c| cols[c][r].clone());
    let p_inv = p
        .inverse()
        .map_err(|_| MiniversalError::ProjectionFailure("frame is singular".into()))?;

    // theta(x) = t_i delta^i + x_j gamma^j
    let build_theta = |xs: &[Polynomial]| -> Cochain<Polynomial> {
        let mut theta: Cochain<Polynomial> = Cochain::zero(n, 2);
        for (i, delta) in frame.deltas.iter().enumerate() {
            let ti = Polynomial::var(m, trunc, i);
            for (mi, t, c) in delta.entries() {
                theta.insert(mi.clone(), t, ti.scale(c));
            }
        }
        for (j, gamma) in frame.gammas.iter().enumerate() {
            if xs[j].is_zero() {
                continue;
            }
            for (mi, t, c) in gamma.entries() {
                theta.insert(mi.clone(), t, xs[j].scale(c));
            }
        }
        theta
    };

    // fixed point: x = -(beta-component of [theta, theta]) / 2
    let mut xs = vec![Polynomial::zero_in(m, trunc); nx];
    for _round in 0..max_degree {
        let theta = build_theta(&xs);
        let sq = bracket(&theta, &theta).map_err(MiniversalError::Core)?;
        let coords = apply_scalar_matrix(&p_inv, &sq.to_vec());
        let mut next = Vec::with_capacity(nx);
        let half = Scalar::from_frac(-1, 2);
        for j in 0..nx {
            next.push(coords[na + j].scale(&half).truncate_to(trunc));
        }
        if next == xs {
            break;
        }
        xs = next;
    }

    // full decomposition of [d_inf, d_inf]
    let theta = build_theta(&xs);
    let d_poly = promote(d.cochain(), m, trunc);
    let d_inf = d_poly.add(&theta).map_err(MiniversalError::Core)?;
    let full = bracket(&d_inf, &d_inf).map_err(MiniversalError::Core)?;
    let coords = apply_scalar_matrix(&p_inv, &full.to_vec());
    let relations: Vec<Polynomial> = coords[..na].to_vec();
    let s_part = &coords[na..na + nx];
    let residual: Vec<Polynomial> = coords[na + nx..].to_vec();
    for (j, s) in s_part.iter().enumerate() {
        if !s.is_zero() {
            return Err(MiniversalError::ProjectionFailure(format!(
                "beta-component {} of [d_inf, d_inf] did not vanish: {:?}",
                j, s
            )));
        }
    }
    for x in &xs {
        if let Some(low) = x.lowest_degree() {
            if low < 2 {
                return Err(MiniversalError::ProjectionFailure(
                    "a solved x_j has degree < 2".into(),
                ));
            }
        }
    }
    for r in &relations {
        if let Some(low) = r.lowest_degree() {
            if low < 2 {
                return Err(MiniversalError::ProjectionFailure(
                    "a relation has degree < 2".into(),
                ));
            }
        }
    }
    Ok(MiniversalResult {
        base: d.clone(),
        d_infinity: d_inf,
        parameters: m,
        solved_x: xs,
        relations,
        residual_b4: residual,
        truncation: trunc,
    })
}

/// The result of substituting a concrete parameter point into d_inf.
pub struct EvaluatedPoint {
    pub codifferential: Codifferential,
    pub relation_values: Vec<Scalar>,
    pub defect: Cochain<Scalar>,
    pub is_lie: bool,
}

pub fn evaluate(
    res: &MiniversalResult,
    point: &[Scalar],
) -> Result<EvaluatedPoint, MiniversalError> {
    if point.len() != res.parameters {
        return Err(MiniversalError::ArityMismatch {
            expected: res.parameters,
            got: point.len(),
        });
    }
    if res.base.field() == Field::Q {
        for p in point {
            if !p.is_real() {
                return Err(MiniversalError::Core(CoreError::FieldMismatch(
                    "evaluation point has non-rational coordinates".into(),
                )));
            }
        }
    }
    let scalar_cochain = res.d_infinity.map(|poly| poly.eval(point));
    let codifferential = Codifferential::new(scalar_cochain, res.base.field())
        .map_err(MiniversalError::Core)?;
    let relation_values: Vec<Scalar> =
        res.relations.iter().map(|r| r.eval(point)).collect();
    let defect = codifferential.jacobi_defect();
    let is_lie = defect.is_zero();
    Ok(EvaluatedPoint { codifferential, relation_values, defect, is_lie })
}

/// Substitute a formal curve t_i = c_i(s) (one-variable power series with
/// no constant term) into d_inf, checking the base relations vanish along
/// the curve up to the truncation degree.
pub fn specialize_curve(
    res: &MiniversalResult,
    curve: &[Polynomial],
) -> Result<Cochain<Polynomial>, MiniversalError> {
    if curve.len() != res.parameters {
        return Err(MiniversalError::ArityMismatch {
            expected: res.parameters,
            got: curve.len(),
        });
    }
    for c in curve {
        if !c.constant_term().is_zero() {
            return Err(MiniversalError::Core(CoreError::Invalid(
                "curve components must vanish at s = 0".into(),
            )));
        }
    }
    for (i, r) in res.relations.iter().enumerate() {
        let along = r.substitute(curve);
        if !along.is_zero() {
            return Err(MiniversalError::RelationViolated(format!(
                "relation {} is nonzero along the curve: {:?}",
                i, along
            )));
        }
    }
    Ok(res.d_infinity.map(|poly| poly.substitute(curve)))
}

impl MiniversalResult {
    pub fn to_json(&self) -> serde_json::Value {
        let field = self.base.field();
        let mut map = serde_json::Map::new();
        map.insert("parameters".into(), serde_json::Value::from(self.parameters));
        map.insert(
            "x".into(),
            serde_json::Value::Array(
                self.solved_x.iter().map(|p| p.to_json(field)).collect(),
            ),
        );
        map.insert(
            "relations".into(),
            serde_json::Value::Array(
                self.relations.iter().map(|p| p.to_json(field)).collect(),
            ),
        );
        let d_inf: Vec<serde_json::Value> = self
            .d_infinity
            .entries()
            .map(|(mi, t, poly)| {
                let mut e = serde_json::Map::new();
                e.insert(
                    "index".into(),
                    serde_json::Value::Array(
                        mi.indices().iter().map(|&i| serde_json::Value::from(i)).collect(),
                    ),
                );
                e.insert("target".into(), serde_json::Value::from(t));
                e.insert("coeff".into(), poly.to_json(field));
                serde_json::Value::Object(e)
            })
            .collect();
        map.insert("d_infinity".into(), serde_json::Value::Array(d_inf));
        serde_json::Value::Object(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    fn d(nn: u8, rows: &[&[i64]]) -> Codifferential {
        Codifferential::from_int_rows(nn, Field::Qi, rows)
    }

    #[test]
    fn d2_has_three_parameters_and_no_relations() {
        let d2 = d(3, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let res = solve(&d2, 6).unwrap();
        assert_eq!(res.parameters, 3);
        assert!(res.relations.is_empty());
        assert!(res.solved_x.iter().all(|x| x.is_zero()));
        // at t = 0 the deformation is d itself
        let at0 = evaluate(&res, &[s(0), s(0), s(0)]).unwrap();
        assert_eq!(at0.codifferential.to_matrix(), d2.to_matrix());
        assert!(at0.is_lie);
    }

    #[test]
    fn sl2_is_rigid() {
        let d3 = d(3, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let res = solve(&d3, 4).unwrap();
        assert_eq!(res.parameters, 0);
        assert!(res.relations.is_empty());
        let at = evaluate(&res, &[]).unwrap();
        assert_eq!(at.codifferential.to_matrix(), d3.to_matrix());
    }

    #[test]
    fn d1m1_has_one_quadratic_relation() {
        let dm = d(3, &[&[0, 1, 1], &[0, 0, -1], &[0, 0, 0]]);
        let res = solve(&dm, 6).unwrap();
        assert_eq!(res.parameters, 2);
        assert_eq!(res.relations.len(), 1);
        let rel = &res.relations[0];
        assert_eq!(rel.lowest_degree(), Some(2));
        // the quadratic part is a multiple of t1 t2
        let quad = rel.degree_part(2);
        assert_eq!(quad.num_terms(), 1);
        let (mono, _) = quad.terms().next().unwrap();
        assert_eq!(mono.exponents(), &[1, 1]);
    }

    #[test]
    fn solver_is_degree_monotone() {
        let dm = d(3, &[&[0, 1, 1], &[0, 0, -1], &[0, 0, 0]]);
        let r4 = solve(&dm, 4).unwrap();
        let r6 = solve(&dm, 6).unwrap();
        for (a, b) in r4.solved_x.iter().zip(&r6.solved_x) {
            assert_eq!(*a, b.truncate_to(4));
        }
        for (a, b) in r4.relations.iter().zip(&r6.relations) {
            assert_eq!(*a, b.truncate_to(4));
        }
    }

    #[test]
    fn curve_specialization_respects_relations() {
        let dm = d(3, &[&[0, 1, 1], &[0, 0, -1], &[0, 0, 0]]);
        let res = solve(&dm, 6).unwrap();
        let svar = Polynomial::var(1, 6, 0);
        let zero = Polynomial::zero_in(1, 6);
        // moving along a single parameter annihilates t1 t2
        let fam = specialize_curve(&res, &[svar.clone(), zero.clone()]).unwrap();
        assert_eq!(fam.degree(), 2);
        // the diagonal curve violates the relation
        let err = specialize_curve(&res, &[svar.clone(), svar]).unwrap_err();
        assert!(matches!(err, MiniversalError::RelationViolated(_)));
    }

    #[test]
    fn evaluated_points_obey_jacobi_iff_relations_vanish() {
        let dm = d(3, &[&[0, 1, 1], &[0, 0, -1], &[0, 0, 0]]);
        let res = solve(&dm, 6).unwrap();
        let good = evaluate(&res, &[s(3), s(0)]).unwrap();
        assert!(good.relation_values.iter().all(|v| v.is_zero()));
        assert!(good.is_lie);
        let bad = evaluate(&res, &[s(1), s(1)]).unwrap();
        assert!(!bad.relation_values.iter().all(|v| v.is_zero()));
        assert!(!bad.is_lie);
        // the defect is exactly the nonzero obstruction on the top word
        assert!(!bad.defect.coeff(&MultiIndex::new(vec![1, 2, 3]), 3).is_zero()
            || !bad.defect.is_zero());
    }
}
