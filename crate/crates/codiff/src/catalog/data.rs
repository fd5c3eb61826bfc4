//! Catalog entries: the families and special points of the 3D complex,
//! 3D real and 4D complex moduli spaces, with their matrices, symmetry
//! groups and classical names.

use num_traits::{Signed, Zero};

use crate::codifferential::Codifferential;
use crate::error::CatalogError;
use crate::ring::Ring;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CatalogId {
    C3,
    R3,
    C4,
}

impl CatalogId {
    pub fn parse(s: &str) -> Option<CatalogId> {
        match s.to_ascii_lowercase().as_str() {
            "3c" => Some(CatalogId::C3),
            "3r" => Some(CatalogId::R3),
            "4c" => Some(CatalogId::C4),
            _ => None,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            CatalogId::R3 => Field::Q,
            _ => Field::Qi,
        }
    }

    pub fn dim(&self) -> u8 {
        match self {
            CatalogId::C3 | CatalogId::R3 => 3,
            CatalogId::C4 => 4,
        }
    }
}

/// Finite symmetry acting on the projective parameters of a family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Symmetry {
    Trivial,
    /// Swap of the two projective coordinates.
    Sigma2,
    /// Full permutation group on three projective coordinates.
    Sigma3,
    /// Real family: positive rescaling plus the sign flip of mu.
    RealScaleFlip,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub label: &'static str,
    pub catalog: CatalogId,
    pub parameter_slots: usize,
    pub symmetry: Symmetry,
    pub classical_name: &'static str,
    /// Human-readable matrix template rows, for listing only.
    pub template_rows: &'static [&'static str],
}

pub fn catalog_entries(id: CatalogId) -> Vec<CatalogEntry> {
    let all = [
        CatalogEntry {
            label: "3C:d1",
            catalog: CatalogId::C3,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "n3(C)",
            template_rows: &["[0, 0, 1]", "[0, 0, 0]", "[0, 0, 0]"],
        },
        CatalogEntry {
            label: "3C:d2",
            catalog: CatalogId::C3,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "r_{3,1}(C)",
            template_rows: &["[0, 1, 0]", "[0, 0, 1]", "[0, 0, 0]"],
        },
        CatalogEntry {
            label: "3C:d3",
            catalog: CatalogId::C3,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "sl2(C)",
            template_rows: &["[0, 0, 1]", "[0, 1, 0]", "[1, 0, 0]"],
        },
        CatalogEntry {
            label: "3C:d2(λ:μ)",
            catalog: CatalogId::C3,
            parameter_slots: 2,
            symmetry: Symmetry::Sigma2,
            classical_name: "r_{3,μ/λ}(C); r2(C)+C at λ=0; r3(C) at λ=μ",
            template_rows: &["[0, λ, 1]", "[0, 0, μ]", "[0, 0, 0]"],
        },
        CatalogEntry {
            label: "3R:d1",
            catalog: CatalogId::R3,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "n3(R)",
            template_rows: &["[0, 0, 1]", "[0, 0, 0]", "[0, 0, 0]"],
        },
        CatalogEntry {
            label: "3R:d2",
            catalog: CatalogId::R3,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "r_{3,1}(R)",
            template_rows: &["[0, 1, 0]", "[0, 0, 1]", "[0, 0, 0]"],
        },
        CatalogEntry {
            label: "3R:sl2R",
            catalog: CatalogId::R3,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "sl2(R)",
            template_rows: &["[0, 0, 1]", "[0, 1, 0]", "[1, 0, 0]"],
        },
        CatalogEntry {
            label: "3R:su2",
            catalog: CatalogId::R3,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "su2",
            template_rows: &["[0, 0, 1]", "[0, -1, 0]", "[1, 0, 0]"],
        },
        CatalogEntry {
            label: "3R:d(λ:μ)",
            catalog: CatalogId::R3,
            parameter_slots: 2,
            symmetry: Symmetry::RealScaleFlip,
            classical_name: "rational-canonical-form family; glued at d(0:1)",
            template_rows: &[
                "[0, 0, λ] / [0, λ, 2μ] / [0, 0, 0]   (λ >= 0)",
                "[0, 0, λ] / [0, -λ, 2μ] / [0, 0, 0]  (λ < 0)",
            ],
        },
        CatalogEntry {
            label: "4C:d3(λ:μ:ν)",
            catalog: CatalogId::C4,
            parameter_slots: 3,
            symmetry: Symmetry::Sigma3,
            classical_name: "C^3 x| C with regular action",
            template_rows: &[
                "[0, 0, 0, λ, 1, 0]",
                "[0, 0, 0, 0, μ, 1]",
                "[0, 0, 0, 0, 0, ν]",
                "[0, 0, 0, 0, 0, 0]",
            ],
        },
        CatalogEntry {
            label: "4C:d1(λ:μ)",
            catalog: CatalogId::C4,
            parameter_slots: 2,
            symmetry: Symmetry::Sigma2,
            classical_name: "n3(C) extension family",
            template_rows: &[
                "[0, 0, 1, μ+λ, 0, 0]",
                "[0, 0, 0, 0, λ, 1]",
                "[0, 0, 0, 0, 0, μ]",
                "[0, 0, 0, 0, 0, 0]",
            ],
        },
        CatalogEntry {
            label: "4C:d3(λ:μ)",
            catalog: CatalogId::C4,
            parameter_slots: 2,
            symmetry: Symmetry::Trivial,
            classical_name: "C^3 x| C with non-regular action",
            template_rows: &[
                "[0, 0, 0, λ, 0, 0]",
                "[0, 0, 0, 0, λ, 1]",
                "[0, 0, 0, 0, 0, μ]",
                "[0, 0, 0, 0, 0, 0]",
            ],
        },
        CatalogEntry {
            label: "4C:d1",
            catalog: CatalogId::C4,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "n3(C)+C",
            template_rows: &[
                "[0, 0, 0, 0, 1, 0]",
                "[0, 0, 0, 0, 0, 0]",
                "[0, 0, 0, 0, 0, 0]",
                "[0, 0, 0, 0, 0, 0]",
            ],
        },
        CatalogEntry {
            label: "4C:d1#",
            catalog: CatalogId::C4,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "solvable with Heisenberg nilradical",
            template_rows: &[
                "[0, 0, 1, 2, 0, 0]",
                "[0, 0, 0, 0, 1, 0]",
                "[0, 0, 0, 0, 0, 1]",
                "[0, 0, 0, 0, 0, 0]",
            ],
        },
        CatalogEntry {
            label: "4C:d2*",
            catalog: CatalogId::C4,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "n4(C)",
            template_rows: &[
                "[0, 0, 0, 0, 1, 0]",
                "[0, 0, 0, 0, 0, 1]",
                "[0, 0, 0, 0, 0, 0]",
                "[0, 0, 0, 0, 0, 0]",
            ],
        },
        CatalogEntry {
            label: "4C:d2#",
            catalog: CatalogId::C4,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "r2(C)+r2(C)",
            template_rows: &[
                "[1, 0, 0, 0, 0, 0]",
                "[0, 0, 0, 0, 0, 0]",
                "[0, 0, 0, 0, 0, 1]",
                "[0, 0, 0, 0, 0, 0]",
            ],
        },
        CatalogEntry {
            label: "4C:d3",
            catalog: CatalogId::C4,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "sl2(C)+C",
            template_rows: &[
                "[0, 0, 1, 0, 0, 0]",
                "[0, 1, 0, 0, 0, 0]",
                "[1, 0, 0, 0, 0, 0]",
                "[0, 0, 0, 0, 0, 0]",
            ],
        },
        CatalogEntry {
            label: "4C:d3*",
            catalog: CatalogId::C4,
            parameter_slots: 0,
            symmetry: Symmetry::Trivial,
            classical_name: "C^3 x| C with scalar action",
            template_rows: &[
                "[0, 0, 0, 1, 0, 0]",
                "[0, 0, 0, 0, 1, 0]",
                "[0, 0, 0, 0, 0, 1]",
                "[0, 0, 0, 0, 0, 0]",
            ],
        },
    ];
    all.into_iter().filter(|e| e.catalog == id).collect()
}

pub fn entry_for(label: &str) -> Option<CatalogEntry> {
    for id in [CatalogId::C3, CatalogId::R3, CatalogId::C4] {
        if let Some(e) = catalog_entries(id).into_iter().find(|e| e.label == label) {
            return Some(e);
        }
    }
    None
}

/// Generic matrix template over any coefficient ring; the real family
/// needs an explicit branch choice since signs are not ring operations.
pub fn instantiate_generic<R: Ring>(
    label: &str,
    p: &[R],
    real_negative_branch: bool,
) -> Option<Vec<Vec<R>>> {
    let z = R::zero;
    let o = R::one;
    let two = || R::one().scale_int(2);
    let rows: Vec<Vec<R>> = match label {
        "3C:d1" | "3R:d1" => vec![
            vec![z(), z(), o()],
            vec![z(), z(), z()],
            vec![z(), z(), z()],
        ],
        "3C:d2" | "3R:d2" => vec![
            vec![z(), o(), z()],
            vec![z(), z(), o()],
            vec![z(), z(), z()],
        ],
        "3C:d3" | "3R:sl2R" => vec![
            vec![z(), z(), o()],
            vec![z(), o(), z()],
            vec![o(), z(), z()],
        ],
        "3R:su2" => vec![
            vec![z(), z(), o()],
            vec![z(), o().neg(), z()],
            vec![o(), z(), z()],
        ],
        "3C:d2(λ:μ)" => vec![
            vec![z(), p[0].clone(), o()],
            vec![z(), z(), p[1].clone()],
            vec![z(), z(), z()],
        ],
        "3R:d(λ:μ)" => {
            let mid = if real_negative_branch {
                p[0].neg()
            } else {
                p[0].clone()
            };
            vec![
                vec![z(), z(), p[0].clone()],
                vec![z(), mid, p[1].mul(&two())],
                vec![z(), z(), z()],
            ]
        }
        "4C:d3(λ:μ:ν)" => vec![
            vec![z(), z(), z(), p[0].clone(), o(), z()],
            vec![z(), z(), z(), z(), p[1].clone(), o()],
            vec![z(), z(), z(), z(), z(), p[2].clone()],
            vec![z(), z(), z(), z(), z(), z()],
        ],
        "4C:d1(λ:μ)" => vec![
            vec![z(), z(), o(), p[0].add(&p[1]), z(), z()],
            vec![z(), z(), z(), z(), p[0].clone(), o()],
            vec![z(), z(), z(), z(), z(), p[1].clone()],
            vec![z(), z(), z(), z(), z(), z()],
        ],
        "4C:d3(λ:μ)" => vec![
            vec![z(), z(), z(), p[0].clone(), z(), z()],
            vec![z(), z(), z(), z(), p[0].clone(), o()],
            vec![z(), z(), z(), z(), z(), p[1].clone()],
            vec![z(), z(), z(), z(), z(), z()],
        ],
        "4C:d1" => vec![
            vec![z(), z(), z(), z(), o(), z()],
            vec![z(), z(), z(), z(), z(), z()],
            vec![z(), z(), z(), z(), z(), z()],
            vec![z(), z(), z(), z(), z(), z()],
        ],
        "4C:d1#" => vec![
            vec![z(), z(), o(), two(), z(), z()],
            vec![z(), z(), z(), z(), o(), z()],
            vec![z(), z(), z(), z(), z(), o()],
            vec![z(), z(), z(), z(), z(), z()],
        ],
        "4C:d2*" => vec![
            vec![z(), z(), z(), z(), o(), z()],
            vec![z(), z(), z(), z(), z(), o()],
            vec![z(), z(), z(), z(), z(), z()],
            vec![z(), z(), z(), z(), z(), z()],
        ],
        "4C:d2#" => vec![
            vec![o(), z(), z(), z(), z(), z()],
            vec![z(), z(), z(), z(), z(), z()],
            vec![z(), z(), z(), z(), z(), o()],
            vec![z(), z(), z(), z(), z(), z()],
        ],
        "4C:d3" => vec![
            vec![z(), z(), o(), z(), z(), z()],
            vec![z(), o(), z(), z(), z(), z()],
            vec![o(), z(), z(), z(), z(), z()],
            vec![z(), z(), z(), z(), z(), z()],
        ],
        "4C:d3*" => vec![
            vec![z(), z(), z(), o(), z(), z()],
            vec![z(), z(), z(), z(), o(), z()],
            vec![z(), z(), z(), z(), z(), o()],
            vec![z(), z(), z(), z(), z(), z()],
        ],
        _ => return None,
    };
    Some(rows)
}

/// Instantiate a catalog label at concrete parameters.
pub fn instantiate(label: &str, params: &[Scalar]) -> Result<Codifferential, CatalogError> {
    let entry = entry_for(label).ok_or_else(|| CatalogError::UnknownLabel(label.into()))?;
    if params.len() != entry.parameter_slots {
        return Err(CatalogError::BadArity {
            label: label.into(),
            expected: entry.parameter_slots,
            got: params.len(),
        });
    }
    if entry.parameter_slots > 0 && params.iter().all(|p| p.is_zero()) {
        return Err(CatalogError::AllZeroParams);
    }
    let field = entry.catalog.field();
    if field == Field::Q {
        for p in params {
            if !p.is_real() {
                return Err(CatalogError::Core(crate::error::CoreError::FieldMismatch(
                    "real catalog requires rational parameters".into(),
                )));
            }
        }
    }
    let neg_branch = label == "3R:d(λ:μ)" && params[0].re().is_negative();
    let rows = instantiate_generic(label, params, neg_branch)
        .ok_or_else(|| CatalogError::UnknownLabel(label.into()))?;
    Codifferential::from_matrix_rows(entry.catalog.dim(), field, &rows)
        .map_err(CatalogError::Core)
}

fn scale_first_nonzero_to_one(p: &[Scalar]) -> Option<Vec<Scalar>> {
    let lead = p.iter().find(|x| !x.is_zero())?;
    let inv = lead.inv().ok()?;
    Some(p.iter().map(|x| x * &inv).collect())
}

fn lex_less(a: &[Scalar], b: &[Scalar]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.canonical_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    match k {
        2 => vec![vec![0, 1], vec![1, 0]],
        3 => vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ],
        _ => vec![(0..k).collect()],
    }
}

/// Canonical parameter tuple: scale the first nonzero coordinate to 1 in
/// every orbit element under the symmetry group, then take the
/// lexicographically least. The real family instead normalizes by
/// positive scaling and the mu sign flip.
pub fn normalize_params(label: &str, params: &[Scalar]) -> Result<Vec<Scalar>, CatalogError> {
    let entry = entry_for(label).ok_or_else(|| CatalogError::UnknownLabel(label.into()))?;
    if params.len() != entry.parameter_slots {
        return Err(CatalogError::BadArity {
            label: label.into(),
            expected: entry.parameter_slots,
            got: params.len(),
        });
    }
    if entry.parameter_slots == 0 {
        return Ok(Vec::new());
    }
    if params.iter().all(|p| p.is_zero()) {
        return Err(CatalogError::AllZeroParams);
    }
    match entry.symmetry {
        Symmetry::RealScaleFlip => {
            let (lam, mu) = (params[0].re().clone(), params[1].re().clone());
            let (clam, cmu) = if lam.is_zero() {
                (num_rational::BigRational::from_integer(0.into()), num_rational::BigRational::from_integer(1.into()))
            } else {
                let scale = lam.abs();
                let sign = if lam.is_negative() { -1 } else { 1 };
                (
                    num_rational::BigRational::from_integer(sign.into()),
                    (mu / scale).abs(),
                )
            };
            Ok(vec![Scalar::from_rational(clam), Scalar::from_rational(cmu)])
        }
        Symmetry::Trivial => scale_first_nonzero_to_one(params)
            .ok_or(CatalogError::AllZeroParams),
        Symmetry::Sigma2 | Symmetry::Sigma3 => {
            let mut best: Option<Vec<Scalar>> = None;
            for perm in permutations(entry.parameter_slots) {
                let arranged: Vec<Scalar> =
                    perm.iter().map(|&i| params[i].clone()).collect();
                let Some(scaled) = scale_first_nonzero_to_one(&arranged) else {
                    continue;
                };
                match &best {
                    None => best = Some(scaled),
                    Some(b) if lex_less(&scaled, b) => best = Some(scaled),
                    _ => {}
                }
            }
            best.ok_or(CatalogError::AllZeroParams)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    #[test]
    fn instantiation_fixtures() {
        // d(1:-1) = psi^{13}_1 + psi^{23}_1 - psi^{23}_2
        let d = instantiate("3C:d2(λ:μ)", &[s(1), s(-1)]).unwrap();
        let expect = Codifferential::from_int_rows(
            3,
            Field::Qi,
            &[&[0, 1, 1], &[0, 0, -1], &[0, 0, 0]],
        );
        assert_eq!(d.to_matrix(), expect.to_matrix());
        // real family applies the λ<0 branch
        let d = instantiate("3R:d(λ:μ)", &[s(-1), s(1)]).unwrap();
        let expect = Codifferential::from_int_rows(
            3,
            Field::Q,
            &[&[0, 0, -1], &[0, 1, 2], &[0, 0, 0]],
        );
        assert_eq!(d.to_matrix(), expect.to_matrix());
        // sl2(C) + C
        let d = instantiate("4C:d3", &[]).unwrap();
        assert_eq!(d.dim(), 4);
        assert!(d.is_lie());
    }

    #[test]
    fn every_entry_is_lie_symbolically() {
        // instantiate each family with formal parameters and check Jacobi
        use crate::cochain::{bracket, Cochain};
        use crate::poly::Polynomial;
        for id in [CatalogId::C3, CatalogId::R3, CatalogId::C4] {
            for entry in catalog_entries(id) {
                let nv = entry.parameter_slots;
                let params: Vec<Polynomial> =
                    (0..nv).map(|i| Polynomial::var(nv, 8, i)).collect();
                let branches: &[bool] = if entry.symmetry == Symmetry::RealScaleFlip {
                    &[false, true]
                } else {
                    &[false]
                };
                for &neg in branches {
                    let rows =
                        instantiate_generic(entry.label, &params, neg).unwrap();
                    let n = entry.catalog.dim();
                    let pairs = crate::multiindex::MultiIndex::enumerate(n, 2);
                    let mut c: Cochain<Polynomial> = Cochain::zero(n, 2);
                    for (i, row) in rows.iter().enumerate() {
                        for (j, e) in row.iter().enumerate() {
                            if !e.is_zero() {
                                c.insert(pairs[j].clone(), (i + 1) as u8, e.clone());
                            }
                        }
                    }
                    let defect = bracket(&c, &c).unwrap();
                    assert!(
                        defect.is_zero(),
                        "{} fails Jacobi symbolically",
                        entry.label
                    );
                }
            }
        }
    }

    #[test]
    fn normalization_rules() {
        // swap symmetry
        let a = normalize_params("3C:d2(λ:μ)", &[s(2), s(6)]).unwrap();
        let b = normalize_params("3C:d2(λ:μ)", &[s(6), s(2)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(normalize_params("3C:d2(λ:μ)", &[s(2), s(2)]).unwrap(), vec![s(1), s(1)]);
        // real scaling is positive-only with a mu flip
        assert_eq!(
            normalize_params("3R:d(λ:μ)", &[s(1), s(-3)]).unwrap(),
            vec![s(1), s(3)]
        );
        assert_eq!(
            normalize_params("3R:d(λ:μ)", &[s(-2), s(4)]).unwrap(),
            vec![s(-1), s(2)]
        );
        // Sigma3 canonicalization is stable across the orbit
        let p = [s(1), s(-1), s(0)];
        let canon = normalize_params("4C:d3(λ:μ:ν)", &p).unwrap();
        for perm in [[1usize, 0, 2], [2, 1, 0], [0, 2, 1]] {
            let q: Vec<Scalar> = perm.iter().map(|&i| p[i].clone()).collect();
            assert_eq!(normalize_params("4C:d3(λ:μ:ν)", &q).unwrap(), canon);
        }
        // scaling the whole tuple does not change the canonical form
        let q: Vec<Scalar> = p.iter().map(|x| x * &s(-7)).collect();
        assert_eq!(normalize_params("4C:d3(λ:μ:ν)", &q).unwrap(), canon);
    }
}
