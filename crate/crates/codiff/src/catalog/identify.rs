//! Identification of a codifferential against the catalog: a decision
//! tree on exact invariants (derived algebra, center, nilpotency, Killing
//! form, and the action block of an outside element), ending in canonical
//! family parameters. Inputs that the implemented invariants cannot place
//! are reported as `Unclassified`, never guessed.

use num_traits::{Signed, Zero};

use super::data::normalize_params;
use crate::codifferential::Codifferential;
use crate::error::{CatalogError, CoreError};
use crate::linalg::{Matrix, SpanTracker};
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::roots::{cubic_roots, quadratic_roots};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Identification {
    pub label: String,
    pub params: Vec<Scalar>,
}

pub fn identify(d: &Codifferential) -> Result<Identification, CatalogError> {
    if !d.is_lie() {
        return Err(CatalogError::Core(CoreError::NotLie));
    }
    match (d.dim(), d.field()) {
        (3, Field::Qi) => identify_3c(d),
        (3, Field::Q) => identify_3r(d),
        // 4-dimensional identification is against the complex catalog;
        // rational input is widened to Q(i)
        (4, _) => identify_4c(&d.with_field(Field::Qi).map_err(CatalogError::Core)?),
        _ => Err(CatalogError::Unclassified),
    }
}

fn ident(label: &str, params: Vec<Scalar>) -> Result<Identification, CatalogError> {
    let params = if params.is_empty() {
        params
    } else {
        normalize_params(label, &params)?
    };
    Ok(Identification { label: label.into(), params })
}

pub(super) fn std_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// First standard basis vector independent of the given span.
pub(super) fn first_outside(basis: &[Vec<Scalar>], n: usize) -> Option<Vec<Scalar>> {
    let mut span = SpanTracker::new(n);
    for b in basis {
        span.insert(b);
    }
    (0..n).map(|i| std_vector(n, i)).find(|v| !span.contains(v))
}

/// Coordinates of v in the given basis, if v lies in its span.
pub(super) fn coords_in(basis: &[Vec<Scalar>], v: &[Scalar]) -> Option<Vec<Scalar>> {
    if basis.is_empty() {
        return if v.iter().all(|x| x.is_zero()) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let m = Matrix::from_fn(v.len(), basis.len(), |r, c| basis[c][r].clone());
    let x = m.solve(v)?;
    // solve() ignores inconsistency only when rank allows; verify
    let back = m.mul_vec(&x);
    if back == v.to_vec() {
        Some(x)
    } else {
        None
    }
}

/// Matrix of u |-> [u, x] restricted to the span of `basis`.
pub(super) fn action_on(
    d: &Codifferential,
    x: &[Scalar],
    basis: &[Vec<Scalar>],
) -> Option<Matrix<Scalar>> {
    let k = basis.len();
    let mut cols = Vec::with_capacity(k);
    for u in basis {
        let img = d.apply_pair(u, x);
        cols.push(coords_in(basis, &img)?);
    }
    Some(Matrix::from_fn(k, k, |r, c| cols[c][r].clone()))
}

/// Span of all brackets [a_i, b_j].
pub(super) fn bracket_span(
    d: &Codifferential,
    a: &[Vec<Scalar>],
    b: &[Vec<Scalar>],
) -> Vec<Vec<Scalar>> {
    let n = d.dim() as usize;
    let mut span = SpanTracker::new(n);
    for u in a {
        for v in b {
            let w = d.apply_pair(u, v);
            if w.iter().any(|x| !x.is_zero()) {
                span.insert(&w);
            }
        }
    }
    span.basis().to_vec()
}

fn full_basis(n: usize) -> Vec<Vec<Scalar>> {
    (0..n).map(|i| std_vector(n, i)).collect()
}

pub(super) fn is_nilpotent(d: &Codifferential) -> bool {
    let n = d.dim() as usize;
    let g = full_basis(n);
    let mut layer = d.derived_subspace();
    for _ in 0..=n {
        if layer.is_empty() {
            return true;
        }
        let next = bracket_span(d, &g, &layer);
        if next.len() == layer.len() {
            return false; // stabilized at a nonzero term
        }
        layer = next;
    }
    layer.is_empty()
}

pub(super) fn is_solvable(d: &Codifferential) -> bool {
    let n = d.dim() as usize;
    let mut layer = d.derived_subspace();
    for _ in 0..=n {
        if layer.is_empty() {
            return true;
        }
        let next = bracket_span(d, &layer, &layer);
        if next.len() == layer.len() {
            return false;
        }
        layer = next;
    }
    layer.is_empty()
}

pub(super) fn center(d: &Codifferential) -> Vec<Vec<Scalar>> {
    let n = d.dim() as usize;
    let mut stacked = Matrix::zero(n * n, n);
    for j in 0..n {
        let ad = d.ad_matrix(&std_vector(n, j));
        for r in 0..n {
            for c in 0..n {
                *stacked.at_mut(j * n + r, c) = ad.at(r, c).clone();
            }
        }
    }
    stacked.kernel_basis()
}

fn is_scalar_matrix(m: &Matrix<Scalar>) -> Option<Scalar> {
    let n = m.rows();
    let c = m.at(0, 0).clone();
    for r in 0..n {
        for col in 0..n {
            let expect = if r == col { c.clone() } else { Scalar::zero() };
            if *m.at(r, col) != expect {
                return None;
            }
        }
    }
    Some(c)
}

/// Eigenvalues of a 2x2 matrix inside the field, if the discriminant has
/// an exact square root.
fn eigenvalues_2x2(m: &Matrix<Scalar>) -> Option<(Scalar, Scalar)> {
    let tr = m.trace();
    let det = m.det();
    quadratic_roots(&-tr, &det)
}

fn identify_3c(d: &Codifferential) -> Result<Identification, CatalogError> {
    let derived = d.derived_subspace();
    match derived.len() {
        0 => ident("0", vec![]),
        3 => ident("3C:d3", vec![]),
        1 => {
            let u = &derived[0];
            let central = (0..3).all(|j| {
                d.apply_pair(u, &std_vector(3, j)).iter().all(|x| x.is_zero())
            });
            if central {
                ident("3C:d1", vec![])
            } else {
                ident("3C:d2(λ:μ)", vec![Scalar::zero(), Scalar::one()])
            }
        }
        2 => {
            let x = first_outside(&derived, 3).ok_or(CatalogError::Unclassified)?;
            let m = action_on(d, &x, &derived).ok_or(CatalogError::Unclassified)?;
            if m.det().is_zero() {
                return Err(CatalogError::Unclassified);
            }
            if is_scalar_matrix(&m).is_some() {
                return ident("3C:d2", vec![]);
            }
            match eigenvalues_2x2(&m) {
                Some((a, b)) => ident("3C:d2(λ:μ)", vec![a, b]),
                None => Err(CatalogError::Unclassified),
            }
        }
        _ => Err(CatalogError::Unclassified),
    }
}

/// Negative definiteness of a symmetric rational matrix, by Sylvester's
/// criterion on leading principal minors.
fn negative_definite(k: &Matrix<Scalar>) -> bool {
    let n = k.rows();
    for size in 1..=n {
        let minor = Matrix::from_fn(size, size, |r, c| k.at(r, c).clone());
        let det = minor.det();
        if !det.is_real() {
            return false;
        }
        let want_negative = size % 2 == 1;
        if det.re().is_zero() || det.re().is_negative() != want_negative {
            return false;
        }
    }
    true
}

fn identify_3r(d: &Codifferential) -> Result<Identification, CatalogError> {
    let derived = d.derived_subspace();
    match derived.len() {
        0 => ident("0", vec![]),
        3 => {
            if negative_definite(&d.killing_form()) {
                ident("3R:su2", vec![])
            } else {
                ident("3R:sl2R", vec![])
            }
        }
        1 => {
            let u = &derived[0];
            let central = (0..3).all(|j| {
                d.apply_pair(u, &std_vector(3, j)).iter().all(|x| x.is_zero())
            });
            if central {
                ident("3R:d1", vec![])
            } else {
                ident("3R:d(λ:μ)", vec![Scalar::zero(), Scalar::one()])
            }
        }
        2 => {
            let x = first_outside(&derived, 3).ok_or(CatalogError::Unclassified)?;
            let m = action_on(d, &x, &derived).ok_or(CatalogError::Unclassified)?;
            let det = m.det();
            if det.is_zero() {
                return Err(CatalogError::Unclassified);
            }
            if is_scalar_matrix(&m).is_some() {
                return ident("3R:d2", vec![]);
            }
            let tr = m.trace();
            // the family block [[0,λ],[±λ,2μ]] has det = -sgn(λ) λ^2 and
            // trace 2μ; the sign of det picks the branch and |tr|/2√|det|
            // recovers μ after the flip
            let lam_sign = if det.re().is_negative() { 1i64 } else { -1 };
            let root = Scalar::from_rational(det.re().abs())
                .sqrt_exact()
                .ok_or(CatalogError::Unclassified)?;
            let mu = Scalar::from_rational(tr.re().abs())
                * root.inv().map_err(CatalogError::Core)?
                * Scalar::from_frac(1, 2);
            ident("3R:d(λ:μ)", vec![Scalar::from_int(lam_sign), mu])
        }
        _ => Err(CatalogError::Unclassified),
    }
}

fn identify_4c(d: &Codifferential) -> Result<Identification, CatalogError> {
    let n = 4usize;
    let derived = d.derived_subspace();
    let r = derived.len();
    if r == 0 {
        return ident("0", vec![]);
    }
    if is_nilpotent(d) {
        return match r {
            1 => ident("4C:d1", vec![]),
            2 => ident("4C:d2*", vec![]),
            _ => Err(CatalogError::Unclassified),
        };
    }
    if !is_solvable(d) {
        return ident("4C:d3", vec![]);
    }
    match r {
        3 => {
            let second = bracket_span(d, &derived, &derived);
            let x = first_outside(&derived, n).ok_or(CatalogError::Unclassified)?;
            if second.len() == 1 {
                // derived algebra is Heisenberg; classify the action on
                // the 2-dimensional quotient derived/[derived,derived]
                let mbar = quotient_action(d, &x, &derived, &second)
                    .ok_or(CatalogError::Unclassified)?;
                if is_scalar_matrix(&mbar).is_some() {
                    return ident("4C:d1#", vec![]);
                }
                match eigenvalues_2x2(&mbar) {
                    Some((a, b)) => ident("4C:d1(λ:μ)", vec![a, b]),
                    None => Err(CatalogError::Unclassified),
                }
            } else if second.is_empty() {
                let b = action_on(d, &x, &derived).ok_or(CatalogError::Unclassified)?;
                if b.det().is_zero() {
                    return Err(CatalogError::Unclassified);
                }
                if is_scalar_matrix(&b).is_some() {
                    return ident("4C:d3*", vec![]);
                }
                let minp = b.min_poly();
                match minp.len() {
                    4 => {
                        // cyclic: eigenvalues from the characteristic cubic
                        let ch = b.char_poly();
                        let roots = cubic_roots(&ch[0], &ch[1], &ch[2])
                            .ok_or(CatalogError::Unclassified)?;
                        ident("4C:d3(λ:μ:ν)", roots)
                    }
                    3 => {
                        // minimal polynomial x^2 + p x + q, non-cyclic
                        let (a, bb) = quadratic_roots(&minp[1], &minp[0])
                            .ok_or(CatalogError::Unclassified)?;
                        if a == bb {
                            // J2(a) + J1(a)
                            ident("4C:d3(λ:μ)", vec![a.clone(), a])
                        } else {
                            // diagonalizable with a doubled eigenvalue
                            let doubled = &b.trace() - &(&a + &bb);
                            let other = if doubled == a { bb } else { a };
                            ident("4C:d3(λ:μ)", vec![doubled, other])
                        }
                    }
                    _ => Err(CatalogError::Unclassified),
                }
            } else {
                Err(CatalogError::Unclassified)
            }
        }
        2 => {
            if d.killing_form().rank() == 2 {
                return ident("4C:d2#", vec![]);
            }
            let z_dim = center(d).len();
            match z_dim {
                1 => {
                    let m = principal_action_r2(d, &derived)?;
                    if let Some(c) = is_scalar_matrix(&m) {
                        if c.is_zero() {
                            return Err(CatalogError::Unclassified);
                        }
                        return ident("4C:d3(λ:μ)", vec![Scalar::one(), Scalar::zero()]);
                    }
                    let (a, b) =
                        eigenvalues_2x2(&m).ok_or(CatalogError::Unclassified)?;
                    if a == b {
                        if a.is_zero() {
                            return Err(CatalogError::Unclassified);
                        }
                        ident("4C:d3(λ:μ:ν)", vec![a.clone(), a, Scalar::zero()])
                    } else {
                        ident("4C:d3(λ:μ:ν)", vec![a, b, Scalar::zero()])
                    }
                }
                0 => {
                    if !pencil_disc_vanishes(d, &derived) {
                        return Err(CatalogError::Unclassified);
                    }
                    ident("4C:d1(λ:μ)", vec![Scalar::zero(), Scalar::one()])
                }
                _ => Err(CatalogError::Unclassified),
            }
        }
        1 => {
            // non-nilpotent with a line as derived algebra: r2(C) + C^2
            ident("4C:d3(λ:μ)", vec![Scalar::zero(), Scalar::one()])
        }
        _ => Err(CatalogError::Unclassified),
    }
}

/// Action of x on derived/second for a 3-dimensional derived algebra with
/// 1-dimensional second derived.
fn quotient_action(
    d: &Codifferential,
    x: &[Scalar],
    derived: &[Vec<Scalar>],
    second: &[Vec<Scalar>],
) -> Option<Matrix<Scalar>> {
    let n = d.dim() as usize;
    // adapted basis of derived: second-basis first, then lifts
    let mut adapted: Vec<Vec<Scalar>> = second.to_vec();
    let mut span = SpanTracker::new(n);
    for s in second {
        span.insert(s);
    }
    let mut lifts = Vec::new();
    for u in derived {
        if span.insert(u) {
            adapted.push(u.clone());
            lifts.push(u.clone());
        }
    }
    if lifts.len() != 2 {
        return None;
    }
    let mut cols = Vec::new();
    for u in &lifts {
        let img = d.apply_pair(u, x);
        let coords = coords_in(&adapted, &img)?;
        // drop the second-derived components: quotient coordinates
        cols.push(vec![coords[second.len()].clone(), coords[second.len() + 1].clone()]);
    }
    Some(Matrix::from_fn(2, 2, |r, c| cols[c][r].clone()))
}

/// For a 2-dimensional derived algebra with 1-dimensional center: the
/// action of the unique (up to scalar) outside direction that acts
/// nontrivially, the other complement direction acting by zero.
fn principal_action_r2(
    d: &Codifferential,
    derived: &[Vec<Scalar>],
) -> Result<Matrix<Scalar>, CatalogError> {
    let n = d.dim() as usize;
    let (c1, c2) = complement_pair(derived, n).ok_or(CatalogError::Unclassified)?;
    let m1 = action_on(d, &c1, derived).ok_or(CatalogError::Unclassified)?;
    let m2 = action_on(d, &c2, derived).ok_or(CatalogError::Unclassified)?;
    // kernel of the pencil a M1 + b M2 = 0
    let stacked = Matrix::from_fn(4, 2, |r, c| {
        let m = if c == 0 { &m1 } else { &m2 };
        m.at(r / 2, r % 2).clone()
    });
    let kernel = stacked.kernel_basis();
    if kernel.len() != 1 {
        return Err(CatalogError::Unclassified);
    }
    // y: a complement direction independent of the trivially-acting one
    let k = &kernel[0];
    let y = if k[1].is_zero() { c2 } else { c1 };
    action_on(d, &y, derived).ok_or(CatalogError::Unclassified)
}

pub(super) fn complement_pair(
    basis: &[Vec<Scalar>],
    n: usize,
) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    let mut span = SpanTracker::new(n);
    for b in basis {
        span.insert(b);
    }
    let mut found = Vec::new();
    for i in 0..n {
        let v = std_vector(n, i);
        if span.insert(&v) {
            found.push(v);
        }
    }
    if found.len() == 2 {
        Some((found[0].clone(), found[1].clone()))
    } else {
        None
    }
}

/// Whether the discriminant of the characteristic polynomial vanishes
/// identically on the pencil of actions of g/derived on the derived
/// algebra (checked symbolically in two formal variables).
fn pencil_disc_vanishes(d: &Codifferential, derived: &[Vec<Scalar>]) -> bool {
    let n = d.dim() as usize;
    let Some((c1, c2)) = complement_pair(derived, n) else {
        return false;
    };
    let Some(m1) = action_on(d, &c1, derived) else {
        return false;
    };
    let Some(m2) = action_on(d, &c2, derived) else {
        return false;
    };
    let a = Polynomial::var(2, 4, 0);
    let b = Polynomial::var(2, 4, 1);
    let entry = |r: usize, c: usize| -> Polynomial {
        let p1 = Polynomial::constant(2, 4, m1.at(r, c).clone());
        let p2 = Polynomial::constant(2, 4, m2.at(r, c).clone());
        p1.mul(&a).add(&p2.mul(&b))
    };
    let tr = entry(0, 0).add(&entry(1, 1));
    let det = entry(0, 0).mul(&entry(1, 1)).sub(&entry(0, 1).mul(&entry(1, 0)));
    let disc = tr.mul(&tr).sub(&det.scale_int(4));
    disc.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::data::instantiate;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    #[test]
    fn identifies_3c_points() {
        for (label, params) in [
            ("3C:d1", vec![]),
            ("3C:d2", vec![]),
            ("3C:d3", vec![]),
        ] {
            let d = instantiate(label, &params).unwrap();
            let id = identify(&d).unwrap();
            assert_eq!(id.label, label);
        }
        let d = instantiate("3C:d2(λ:μ)", &[s(1), s(1)]).unwrap();
        let id = identify(&d).unwrap();
        assert_eq!(id.label, "3C:d2(λ:μ)");
        assert_eq!(id.params, vec![s(1), s(1)]);
        assert_eq!(identify(&Codifferential::zero(3, Field::Qi)).unwrap().label, "0");
    }

    #[test]
    fn sl2_contraction_matrices_all_identify_as_d2_1_m1() {
        for rows in [
            [&[0i64, 0, 0][..], &[0, 1, 0][..], &[1, 0, 0][..]],
            [&[0, 0, 1][..], &[0, 0, 0][..], &[1, 0, 0][..]],
            [&[0, 0, 1][..], &[0, 1, 0][..], &[0, 0, 0][..]],
        ] {
            let d = Codifferential::from_int_rows(3, Field::Qi, &rows);
            let id = identify(&d).unwrap();
            assert_eq!(id.label, "3C:d2(λ:μ)");
            assert_eq!(
                id.params,
                normalize_params("3C:d2(λ:μ)", &[s(1), s(-1)]).unwrap()
            );
        }
    }

    #[test]
    fn real_identification_separates_forms() {
        let sl2 = instantiate("3R:sl2R", &[]).unwrap();
        let su2 = instantiate("3R:su2", &[]).unwrap();
        assert_eq!(identify(&sl2).unwrap().label, "3R:sl2R");
        assert_eq!(identify(&su2).unwrap().label, "3R:su2");
        // complexified, both are sl2(C)
        let su2c = su2.with_field(Field::Qi).unwrap();
        assert_eq!(identify(&su2c).unwrap().label, "3C:d3");
        // the real Jordan point d(-1:1)
        let d = instantiate("3R:d(λ:μ)", &[s(-1), s(1)]).unwrap();
        let id = identify(&d).unwrap();
        assert_eq!(id.label, "3R:d(λ:μ)");
        assert_eq!(id.params, vec![s(-1), s(1)]);
    }

    #[test]
    fn identifies_4c_points_and_families() {
        for (label, params) in [
            ("4C:d1", vec![]),
            ("4C:d1#", vec![]),
            ("4C:d2*", vec![]),
            ("4C:d2#", vec![]),
            ("4C:d3", vec![]),
            ("4C:d3*", vec![]),
        ] {
            let d = instantiate(label, &params).unwrap();
            let id = identify(&d).unwrap();
            assert_eq!(id.label, label, "point {}", label);
        }
        for params in [vec![s(1), s(2), s(5)], vec![s(1), s(-1), s(0)], vec![s(1), s(1), s(2)]] {
            let d = instantiate("4C:d3(λ:μ:ν)", &params).unwrap();
            let id = identify(&d).unwrap();
            assert_eq!(id.label, "4C:d3(λ:μ:ν)");
            assert_eq!(id.params, normalize_params("4C:d3(λ:μ:ν)", &params).unwrap());
        }
        for params in [vec![s(1), s(2)], vec![s(1), s(1)], vec![s(0), s(1)], vec![s(1), s(0)]] {
            let d = instantiate("4C:d3(λ:μ)", &params).unwrap();
            let id = identify(&d).unwrap();
            assert_eq!(id.label, "4C:d3(λ:μ)", "at {:?}", params);
            assert_eq!(id.params, normalize_params("4C:d3(λ:μ)", &params).unwrap());
        }
        for params in [vec![s(1), s(2)], vec![s(1), s(1)], vec![s(1), s(-1)], vec![s(0), s(1)]] {
            let d = instantiate("4C:d1(λ:μ)", &params).unwrap();
            let id = identify(&d).unwrap();
            assert_eq!(id.label, "4C:d1(λ:μ)", "at {:?}", params);
            assert_eq!(id.params, normalize_params("4C:d1(λ:μ)", &params).unwrap());
        }
    }

    #[test]
    fn conjugation_invariance() {
        use crate::basis::BasisChange;
        let g = BasisChange::from_int_rows(&[
            &[1, 2, 0, 1],
            &[0, 1, 1, 0],
            &[3, 0, 1, 0],
            &[0, 1, 0, 1],
        ]);
        for (label, params) in [
            ("4C:d3(λ:μ:ν)", vec![s(1), s(-1), s(0)]),
            ("4C:d1(λ:μ)", vec![s(1), s(-1)]),
            ("4C:d2#", vec![]),
        ] {
            let d = instantiate(label, &params).unwrap();
            let moved = g.pullback_codiff(&d).unwrap();
            let id = identify(&moved).unwrap();
            assert_eq!(id.label, label);
            if !params.is_empty() {
                assert_eq!(id.params, normalize_params(label, &params).unwrap());
            }
        }
    }

    #[test]
    fn unclassified_for_irrational_ratio() {
        // block eigenvalue ratio sqrt(2): outside Q(i), honestly refused
        let d = Codifferential::from_int_rows(
            3,
            Field::Qi,
            &[&[0, 0, 1], &[0, 2, 0], &[0, 0, 0]],
        );
        // block [[0,1],[2,0]]: eigenvalues ±sqrt(2)
        assert!(matches!(identify(&d), Err(CatalogError::Unclassified)));
    }
}
