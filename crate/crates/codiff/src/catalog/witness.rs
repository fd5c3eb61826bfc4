//! Constructive equivalence: normalize a codifferential to a concrete
//! representative of its catalog class with an explicit basis change, and
//! decide equivalence of two codifferentials with a witness g satisfying
//! pullback(g, d) = a d'.
//!
//! The normal form used here is a deterministic template instance computed
//! from class invariants (eigenvalues in a fixed order); it need not be
//! the same parameter tuple that `identify` reports publicly.

use num_traits::Signed;

use super::data::instantiate;
use super::identify::{
    action_on, bracket_span, center, complement_pair, coords_in, first_outside,
    identify as identify_class, std_vector,
};
use crate::basis::BasisChange;
use crate::codifferential::Codifferential;
use crate::error::CatalogError;
use crate::linalg::{similarity_witness, Matrix, SpanTracker};
use crate::roots::quadratic_roots;
use crate::scalar::{Field, Scalar};

/// A normalization witness: pullback(g, d) = scale * form.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub label: String,
    pub form_params: Vec<Scalar>,
    pub form: Codifferential,
    pub g: BasisChange,
    pub scale: Scalar,
}

/// Three-valued equivalence verdict.
#[derive(Clone, Debug)]
pub enum Equivalence {
    /// pullback(witness, lhs) = scale * rhs, verified exactly.
    Equivalent { witness: BasisChange, scale: Scalar },
    Different { reason: String },
    Unknown,
}

pub fn equivalent(a: &Codifferential, b: &Codifferential) -> Equivalence {
    if a.dim() != b.dim() {
        return Equivalence::Different { reason: "different dimensions".into() };
    }
    if a.field() != b.field() {
        return Equivalence::Different { reason: "different ground fields".into() };
    }
    // scalar multiples: a d ~ d with witness c * identity
    if let Some(c) = proportionality(a, b) {
        if a.is_zero() {
            return Equivalence::Equivalent {
                witness: BasisChange::identity(a.dim() as usize),
                scale: Scalar::one(),
            };
        }
        let g = BasisChange::new(Matrix::identity(a.dim() as usize).scale(&c))
            .expect("nonzero scalar times identity is invertible");
        return verify(a, b, g);
    }
    let ia = identify_class(a);
    let ib = identify_class(b);
    match (&ia, &ib) {
        (Ok(x), Ok(y)) => {
            if x.label != y.label || x.params != y.params {
                return Equivalence::Different {
                    reason: format!(
                        "distinct classes: {}{:?} vs {}{:?}",
                        x.label, x.params, y.label, y.params
                    ),
                };
            }
        }
        _ => return Equivalence::Unknown,
    }
    let (Ok(na), Ok(nb)) = (normalize_with_witness(a), normalize_with_witness(b)) else {
        return Equivalence::Unknown;
    };
    if na.form.to_matrix() != nb.form.to_matrix() {
        // same class but the deterministic forms disagree: give up honestly
        return Equivalence::Unknown;
    }
    // pullback(ga, a) = sa * F and pullback(gb, b) = sb * F, so
    // w = ga gb^{-1} pulls a back to (sa/sb) b
    let w = na.g.compose(&nb.g.inverse());
    verify(a, b, w)
}

/// b = c * a entrywise for one nonzero c.
fn proportionality(a: &Codifferential, b: &Codifferential) -> Option<Scalar> {
    let ma = a.to_matrix();
    let mb = b.to_matrix();
    if a.is_zero() != b.is_zero() {
        return None;
    }
    if a.is_zero() {
        return Some(Scalar::one());
    }
    let mut ratio: Option<Scalar> = None;
    for r in 0..ma.rows() {
        for c in 0..ma.cols() {
            let (x, y) = (ma.at(r, c), mb.at(r, c));
            match (x.is_zero(), y.is_zero()) {
                (true, true) => {}
                (false, false) => {
                    let q = y / x;
                    match &ratio {
                        None => ratio = Some(q),
                        Some(r0) if *r0 == q => {}
                        _ => return None,
                    }
                }
                _ => return None,
            }
        }
    }
    ratio
}

fn verify(a: &Codifferential, b: &Codifferential, g: BasisChange) -> Equivalence {
    let Ok(moved) = g.pullback_codiff(a) else {
        return Equivalence::Unknown;
    };
    match proportionality(b, &moved) {
        Some(c) if !c.is_zero() => Equivalence::Equivalent { witness: g, scale: c },
        _ => Equivalence::Unknown,
    }
}

/// Normalize d inside its identified class, returning the witness. Fails
/// with `Unclassified` when identification fails or when a witness cannot
/// be constructed inside the ground field (e.g. rational forms of the
/// compact real algebra).
pub fn normalize_with_witness(d: &Codifferential) -> Result<NormalForm, CatalogError> {
    let id = identify_class(d)?;
    let n = d.dim() as usize;
    if id.label == "0" {
        return finish(d, "0", Vec::new(), d.clone(), BasisChange::identity(n));
    }
    let built = match id.label.as_str() {
        "3C:d1" | "3R:d1" => heisenberg_3d(d),
        "3C:d2" | "3R:d2" => scalar_block_3d(d),
        "3C:d2(λ:μ)" => family_3c(d),
        "3R:d(λ:μ)" => family_3r(d, &id.params),
        "3C:d3" | "3R:sl2R" => simple_3d(d, false),
        "3R:su2" => simple_3d(d, true),
        "4C:d1" => n3_plus_line(d),
        "4C:d2*" => n4_chain(d),
        "4C:d2#" => two_r2_blocks(d),
        "4C:d3" => sl2_plus_line(d),
        "4C:d3*" => scalar_block_4d(d),
        "4C:d1(λ:μ)" if id.params == vec![Scalar::zero(), Scalar::one()] => {
            d1_zero_one_basis(d)
        }
        "4C:d1#" | "4C:d1(λ:μ)" => d1_family_4d(d),
        "4C:d3(λ:μ)" | "4C:d3(λ:μ:ν)" => d3_family_4d(d),
        other => {
            return Err(CatalogError::UnknownLabel(other.into()));
        }
    };
    let (label, params, basis) = built.ok_or(CatalogError::Unclassified)?;
    let g_matrix = Matrix::from_fn(n, n, |r, c| basis[c][r].clone());
    let g = BasisChange::new(g_matrix).map_err(|_| CatalogError::Unclassified)?;
    let form = instantiate(&label, &params)?;
    let form = form.with_field(d.field()).map_err(|_| CatalogError::Unclassified)?;
    finish(d, &label, params, form, g)
}

fn finish(
    d: &Codifferential,
    label: &str,
    params: Vec<Scalar>,
    form: Codifferential,
    g: BasisChange,
) -> Result<NormalForm, CatalogError> {
    // pullback(g, d) must equal scale * form exactly
    let moved = g.pullback_codiff(d).map_err(|_| CatalogError::Unclassified)?;
    let scale = proportionality(&form, &moved).ok_or(CatalogError::Unclassified)?;
    if scale.is_zero() && !form.is_zero() {
        return Err(CatalogError::Unclassified);
    }
    Ok(NormalForm { label: label.into(), form_params: params, form, g, scale })
}

type Built = Option<(String, Vec<Scalar>, Vec<Vec<Scalar>>)>;

fn scale_vec(v: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    v.iter().map(|x| x * c).collect()
}

fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn neg_vec(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x).collect()
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Deterministic ordering and projective scaling of an eigenvalue tuple:
/// sort by the canonical scalar order, then scale the first nonzero
/// entry to 1. Returns the sorted-scaled tuple and the scale factor s so
/// that sorted/s = tuple.
fn my_param_order(eigs: &[Scalar]) -> Option<(Vec<Scalar>, Scalar)> {
    let mut sorted = eigs.to_vec();
    sorted.sort_by(|a, b| a.canonical_cmp(b));
    let lead = sorted.iter().find(|x| !x.is_zero())?.clone();
    let inv = lead.inv().ok()?;
    Some((sorted.iter().map(|x| x * &inv).collect(), lead))
}

/// n3: derived algebra is a central line; basis (c u, v, w) with [v,w] = c u.
fn heisenberg_3d(d: &Codifferential) -> Built {
    let n = d.dim() as usize;
    let derived = d.derived_subspace();
    let (v, w) = complement_pair(&derived, n)?;
    let cu = d.apply_pair(&v, &w);
    if is_zero_vec(&cu) {
        return None;
    }
    Some((label_for_field(d, "3C:d1", "3R:d1"), vec![], vec![cu, v, w]))
}

fn label_for_field(d: &Codifferential, qi: &str, q: &str) -> String {
    if d.field() == Field::Q {
        q.into()
    } else {
        qi.into()
    }
}

/// r_{3,1}: two-dimensional abelian derived algebra with a scalar action.
fn scalar_block_3d(d: &Codifferential) -> Built {
    let derived = d.derived_subspace();
    let x = first_outside(&derived, 3)?;
    let m = action_on(d, &x, &derived)?;
    let c = m.at(0, 0).clone();
    let xc = scale_vec(&x, &c.inv().ok()?);
    Some((
        label_for_field(d, "3C:d2", "3R:d2"),
        vec![],
        vec![derived[0].clone(), derived[1].clone(), xc],
    ))
}

/// The 3C family d2(λ:μ), including the (0:1) and Jordan points.
fn family_3c(d: &Codifferential) -> Built {
    let derived = d.derived_subspace();
    if derived.len() == 1 {
        // (0:1): one-dimensional non-central derived algebra
        let u = derived[0].clone();
        let basis = r2_line_basis_3d(d, &u)?;
        return Some(("3C:d2(λ:μ)".into(), vec![Scalar::zero(), Scalar::one()], basis));
    }
    let x = first_outside(&derived, 3)?;
    let p = action_on(d, &x, &derived)?;
    let (a, b) = quadratic_roots(&-p.trace(), &p.det())?;
    let (params, s) = my_param_order(&[a, b])?;
    let pscaled = p.scale(&s.inv().ok()?);
    let target = Matrix::from_rows(vec![
        vec![params[0].clone(), Scalar::one()],
        vec![Scalar::zero(), params[1].clone()],
    ]);
    let v = similarity_witness(&pscaled, &target)?;
    let v1 = combine(&derived, &v.col(0));
    let v2 = combine(&derived, &v.col(1));
    let xs = scale_vec(&x, &s.inv().ok()?);
    Some(("3C:d2(λ:μ)".into(), params, vec![v1, v2, xs]))
}

/// Joint centralizer: vectors commuting with every one of the given
/// elements.
fn joint_centralizer(d: &Codifferential, with: &[&[Scalar]]) -> Vec<Vec<Scalar>> {
    let n = d.dim() as usize;
    let mut stacked = Matrix::zero(n * with.len(), n);
    for (k, w) in with.iter().enumerate() {
        for c in 0..n {
            let img = d.apply_pair(&std_vector(n, c), w);
            for r in 0..n {
                *stacked.at_mut(k * n + r, c) = img[r].clone();
            }
        }
    }
    stacked.kernel_basis()
}

/// Basis for the r2 + line class: [w2,w3] = w1 + w2, all else zero.
fn r2_line_basis_3d(d: &Codifferential, u: &[Scalar]) -> Option<Vec<Vec<Scalar>>> {
    let n = 3usize;
    // x with [u, x] = u
    let mut x = None;
    for j in 0..n {
        let img = d.apply_pair(u, &std_vector(n, j));
        if let Some(c) = ratio_to(&img, u) {
            if !c.is_zero() {
                x = Some(scale_vec(&std_vector(n, j), &c.inv().ok()?));
                break;
            }
        }
    }
    let x = x?;
    // central direction: commutes with both x and u
    let k2 = joint_centralizer(d, &[&x, u]).into_iter().next()?;
    let w1 = neg_vec(&k2);
    let w2 = add_vec(u, &k2);
    Some(vec![w1, w2, x])
}

/// img = c * u for some scalar c.
fn ratio_to(img: &[Scalar], u: &[Scalar]) -> Option<Scalar> {
    let mut ratio = None;
    for (x, y) in img.iter().zip(u) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => {}
            (false, false) => {
                let q = x / y;
                match &ratio {
                    None => ratio = Some(q),
                    Some(r) if *r == q => {}
                    _ => return None,
                }
            }
            (true, false) => {
                if ratio.is_some() && ratio != Some(Scalar::zero()) {
                    return None;
                }
                ratio = Some(Scalar::zero());
            }
            (false, true) => return None,
        }
    }
    ratio
}

/// Real family d(λ:μ): block [[0,λ],[±λ,2μ]] on the derived pair.
fn family_3r(d: &Codifferential, canon: &[Scalar]) -> Built {
    let derived = d.derived_subspace();
    if derived.len() == 1 {
        let u = derived[0].clone();
        let basis = real_line_basis(d, &u)?;
        return Some(("3R:d(λ:μ)".into(), vec![Scalar::zero(), Scalar::one()], basis));
    }
    let x = first_outside(&derived, 3)?;
    let p = action_on(d, &x, &derived)?;
    let det = p.det();
    let s2 = if canon[0].re().is_negative() {
        det.clone()
    } else {
        -det.clone()
    };
    let s0 = s2.sqrt_exact()?;
    if !s0.is_real() {
        return None;
    }
    // choose the sign of s so that tr(P)/s matches 2μ >= 0
    let tr = p.trace();
    let s = if tr.re().is_negative() { -&s0 } else { s0 };
    let lam = canon[0].clone();
    let mu = canon[1].clone();
    let target = Matrix::from_rows(vec![
        vec![Scalar::zero(), lam.clone()],
        vec![
            if lam.re().is_negative() { -&lam } else { lam.clone() },
            &mu * &Scalar::from_int(2),
        ],
    ]);
    let pscaled = p.scale(&s.inv().ok()?);
    let v = similarity_witness(&pscaled, &target)?;
    let v1 = combine(&derived, &v.col(0));
    let v2 = combine(&derived, &v.col(1));
    let xs = scale_vec(&x, &s.inv().ok()?);
    Some(("3R:d(λ:μ)".into(), vec![canon[0].clone(), canon[1].clone()], vec![v1, v2, xs]))
}

/// Real (0:1) point: template [w2,w3] = 2 w2 (matrix [[0,0,0],[0,0,2],[0,0,0]]).
fn real_line_basis(d: &Codifferential, u: &[Scalar]) -> Option<Vec<Vec<Scalar>>> {
    let n = 3usize;
    let mut x = None;
    for j in 0..n {
        let img = d.apply_pair(u, &std_vector(n, j));
        if let Some(c) = ratio_to(&img, u) {
            if !c.is_zero() {
                // template wants [w2, w3] = 2 w2
                let half_c = &c * &Scalar::from_frac(1, 2);
                x = Some(scale_vec(&std_vector(n, j), &half_c.inv().ok()?));
                break;
            }
        }
    }
    let x = x?;
    let k2 = joint_centralizer(d, &[&x, u]).into_iter().next()?;
    Some(vec![k2, u.to_vec(), x])
}

fn combine(basis: &[Vec<Scalar>], coords: &[Scalar]) -> Vec<Scalar> {
    let n = basis[0].len();
    let mut out = vec![Scalar::zero(); n];
    for (b, c) in basis.iter().zip(coords) {
        for i in 0..n {
            out[i] = &out[i] + &(&b[i] * c);
        }
    }
    out
}

/// Standard triple normalization for split simple 3D algebras; for the
/// compact form a bounded search for a compatible frame.
fn simple_3d(d: &Codifferential, compact: bool) -> Built {
    if compact {
        return su2_frame(d).map(|basis| ("3R:su2".into(), vec![], basis));
    }
    let (e, h, f) = sl2_triple(d)?;
    // template triple for d3 = psi^{12}_3 + psi^{13}_2 + psi^{23}_1:
    // e0 = w2+w3, h0 = 2 w1, f0 = w3-w2
    let t = Matrix::from_rows(vec![
        vec![Scalar::zero(), Scalar::from_int(2), Scalar::zero()],
        vec![Scalar::one(), Scalar::zero(), Scalar::from_int(-1)],
        vec![Scalar::one(), Scalar::zero(), Scalar::one()],
    ]); // columns e0, h0, f0
    let u = Matrix::from_fn(3, 3, |r, c| [&e, &h, &f][c][r].clone());
    let g = u.mul(&t.inverse().ok()?);
    let basis = (0..3).map(|c| g.col(c)).collect();
    Some((label_for_field(d, "3C:d3", "3R:sl2R"), vec![], basis))
}

/// Find a nilpotent element (isotropic for the Killing form), then close
/// it to a standard sl2 triple.
fn sl2_triple(d: &Codifferential) -> Option<(Vec<Scalar>, Vec<Scalar>, Vec<Scalar>)> {
    let n = d.dim() as usize;
    let k = d.killing_form();
    let e = isotropic_vector(&k, d.field())?;
    // h with [h, e] = 2e: solve the linear system over h
    let sys = Matrix::from_fn(n, n, |r, c| {
        d.apply_pair(&std_vector(n, c), &e)[r].clone()
    });
    // [h, e] = sum h_c [e_c, e]: columns are [e_c, e]
    let rhs = scale_vec(&e, &Scalar::from_int(2));
    let h = sys.solve(&rhs)?;
    // f in the -2 eigenspace of ad_h
    let adh = d.ad_matrix(&h);
    let shifted = Matrix::from_fn(n, n, |r, c| {
        let mut v = adh.at(r, c).clone();
        if r == c {
            v = &v + &Scalar::from_int(2);
        }
        v
    });
    let kernel = shifted.kernel_basis();
    let f0 = kernel.first()?;
    // [e, f0] = c h with c != 0, rescale
    let ef = d.apply_pair(&e, f0);
    let c = ratio_to(&ef, &h)?;
    if c.is_zero() {
        return None;
    }
    let f = scale_vec(f0, &c.inv().ok()?);
    if d.apply_pair(&e, &f) != h {
        return None;
    }
    Some((e, h, f))
}

/// Small deterministic search for an isotropic vector of a symmetric form.
fn isotropic_vector(k: &Matrix<Scalar>, field: Field) -> Option<Vec<Scalar>> {
    let n = k.rows();
    let value = |v: &[Scalar]| -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..n {
            for j in 0..n {
                acc = &acc + &(&(&v[i] * &v[j]) * k.at(i, j));
            }
        }
        acc
    };
    let range: Vec<i64> = vec![0, 1, -1, 2, -2, 3, -3];
    let units: Vec<Scalar> = match field {
        Field::Q => vec![Scalar::one()],
        Field::Qi => vec![Scalar::one(), Scalar::i()],
    };
    let mut counter = vec![0usize; n * units.len()];
    let digits = range.len();
    let total = digits.pow((n * units.len()) as u32).min(1_000_000);
    for _ in 0..total {
        // advance odometer
        let mut i = 0;
        loop {
            counter[i] += 1;
            if counter[i] < digits {
                break;
            }
            counter[i] = 0;
            i += 1;
            if i == counter.len() {
                return None;
            }
        }
        let mut v = vec![Scalar::zero(); n];
        for slot in 0..n {
            for (ui, unit) in units.iter().enumerate() {
                let c = range[counter[slot * units.len() + ui]];
                if c != 0 {
                    v[slot] = &v[slot] + &(unit * &Scalar::from_int(c));
                }
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        if value(&v).is_zero() {
            return Some(v);
        }
    }
    None
}

/// su2-style frame: [u1,u2] = u3, [u1,u3] = -u2, [u2,u3] = u1.
fn su2_frame(d: &Codifferential) -> Option<Vec<Vec<Scalar>>> {
    let n = 3usize;
    // u1 candidates: ad_{u1} has eigenvalues {0, ±i a} with a rational
    let range: Vec<i64> = vec![0, 1, -1, 2, -2];
    let digits = range.len();
    let mut counter = vec![0usize; n];
    let total = digits.pow(n as u32);
    for _ in 0..total {
        let mut i = 0;
        loop {
            counter[i] += 1;
            if counter[i] < digits {
                break;
            }
            counter[i] = 0;
            i += 1;
            if i == n {
                return None;
            }
        }
        let u1: Vec<Scalar> = counter
            .iter()
            .map(|&c| Scalar::from_int(range[c]))
            .collect();
        if u1.iter().all(|x| x.is_zero()) {
            continue;
        }
        let ad = d.ad_matrix(&u1);
        // characteristic polynomial x (x^2 + s): need s = a^2 rational square
        let ch = ad.char_poly();
        if !ch[0].is_zero() || !ch[2].is_zero() {
            continue;
        }
        let s = ch[1].clone(); // x^3 + s x
        let Some(a) = s.sqrt_exact() else { continue };
        if a.is_zero() || !a.is_real() {
            continue;
        }
        let u1n = scale_vec(&u1, &a.inv().ok()?);
        // u2: any vector not in the kernel of ad_{u1}
        let adn = d.ad_matrix(&u1n);
        for j in 0..n {
            let v = std_vector(n, j);
            let u3 = adn.mul_vec(&v);
            if is_zero_vec(&u3) {
                continue;
            }
            // check [u1,u3] = -u2 (it is, by the eigenvalue normalization,
            // possibly off by the component of u2 along u1's kernel)
            let back = adn.mul_vec(&u3);
            let fixed_u2 = neg_vec(&back);
            // now require [u2', u3] = beta u1n with beta a positive square
            let cross = d.apply_pair(&fixed_u2, &u3);
            let Some(beta) = ratio_to(&cross, &u1n) else { continue };
            if beta.is_zero() || !beta.is_real() || beta.re().is_negative() {
                continue;
            }
            let Some(root) = beta.sqrt_exact() else { continue };
            let inv = root.inv().ok()?;
            let w2 = scale_vec(&fixed_u2, &inv);
            let w3 = scale_vec(&u3, &inv);
            // final frame check against the su2 template relations
            if d.apply_pair(&u1n, &w2) == w3
                && d.apply_pair(&u1n, &w3) == neg_vec(&w2)
                && d.apply_pair(&w2, &w3) == u1n
            {
                // template su2: [w1,w2]=w3, [w1,w3]=-w2, [w2,w3]=w1
                return Some(vec![u1n, w2, w3]);
            }
        }
    }
    None
}

/// 4D n3 + C: basis (c u, v, z, w) with [v,w] = c u and z central.
fn n3_plus_line(d: &Codifferential) -> Built {
    let n = 4usize;
    let derived = d.derived_subspace();
    let u = derived[0].clone();
    let z_basis = center(d);
    // central vector independent of u
    let mut span = SpanTracker::new(n);
    span.insert(&u);
    let z = z_basis.iter().find(|z| {
        let mut s = SpanTracker::new(n);
        s.insert(&u);
        s.insert(z)
    })?;
    // complement pair of the center
    let (v, w) = complement_pair(&z_basis, n)?;
    let cu = d.apply_pair(&v, &w);
    if is_zero_vec(&cu) {
        return None;
    }
    Some(("4C:d1".into(), vec![], vec![cu, v, z.clone(), w]))
}

/// n4: chain w3 -> w2 -> w1 under the bracket with w4.
fn n4_chain(d: &Codifferential) -> Built {
    let n = 4usize;
    let derived = d.derived_subspace();
    let (c1, c2) = complement_pair(&derived, n)?;
    let candidates = [
        c1.clone(),
        c2.clone(),
        add_vec(&c1, &c2),
        sub_vec(&c1, &c2),
    ];
    for y in &candidates {
        for v in &candidates {
            let w2 = d.apply_pair(v, y);
            if is_zero_vec(&w2) {
                continue;
            }
            let w1 = d.apply_pair(&w2, y);
            if is_zero_vec(&w1) {
                continue;
            }
            let basis = vec![w1.clone(), w2.clone(), v.clone(), y.clone()];
            let m = Matrix::from_fn(n, n, |r, c| basis[c][r].clone());
            if m.det().is_zero() {
                continue;
            }
            // template relations: [w2,w3] must vanish and the chain ends
            if is_zero_vec(&d.apply_pair(&w2, v)) && is_zero_vec(&d.apply_pair(&w1, y)) {
                return Some(("4C:d2*".into(), vec![], basis));
            }
        }
    }
    None
}

/// r2 + r2: weight vectors and the dual pair of outside directions.
fn two_r2_blocks(d: &Codifferential) -> Built {
    let n = 4usize;
    let derived = d.derived_subspace();
    let (c1, c2) = complement_pair(&derived, n)?;
    let m1 = action_on(d, &c1, &derived)?;
    let m2 = action_on(d, &c2, &derived)?;
    // generic pencil element with distinct eigenvalues
    let mut eigvecs = None;
    for c in 0..5i64 {
        let m = m1.add(&m2.scale(&Scalar::from_int(c)));
        let tr = m.trace();
        let det = m.det();
        let Some((a, b)) = quadratic_roots(&-tr, &det) else { continue };
        if a == b {
            continue;
        }
        let ev = |lam: &Scalar| -> Option<Vec<Scalar>> {
            let shifted = Matrix::from_fn(2, 2, |r, cc| {
                let mut v = m.at(r, cc).clone();
                if r == cc {
                    v = &v - lam;
                }
                v
            });
            shifted.kernel_basis().into_iter().next()
        };
        let va = ev(&a)?;
        let vb = ev(&b)?;
        eigvecs = Some((combine(&derived, &va), combine(&derived, &vb)));
        break;
    }
    let (u1, u2) = eigvecs?;
    // weights: [u_i, c_j] = alpha_{ij} u_i
    let mut alpha = [[Scalar::zero(), Scalar::zero()], [Scalar::zero(), Scalar::zero()]];
    for (i, u) in [&u1, &u2].into_iter().enumerate() {
        for (j, x) in [&c1, &c2].into_iter().enumerate() {
            alpha[i][j] = ratio_to(&d.apply_pair(u, x), u)?;
        }
    }
    let amat = Matrix::from_fn(2, 2, |r, c| alpha[r][c].clone());
    let ainv = amat.inverse().ok()?;
    // x1 = dual direction to weight 1, x2 to weight 2
    let xs: Vec<Vec<Scalar>> = (0..2)
        .map(|k| {
            let coeffs = ainv.col(k);
            add_vec(&scale_vec(&c1, &coeffs[0]), &scale_vec(&c2, &coeffs[1]))
        })
        .collect();
    let (mut x1, mut x2) = (xs[0].clone(), xs[1].clone());
    // kill the cross bracket [x1, x2] = q1 u1 + q2 u2
    let q = d.apply_pair(&x1, &x2);
    let coords = coords_in(&[u1.clone(), u2.clone()], &q)?;
    x2 = add_vec(&x2, &scale_vec(&u1, &coords[0]));
    x1 = sub_vec(&x1, &scale_vec(&u2, &coords[1]));
    if !is_zero_vec(&d.apply_pair(&x1, &x2)) {
        return None;
    }
    Some(("4C:d2#".into(), vec![], vec![u1, x1, u2, x2]))
}

/// sl2 + C: normalize the Levi part, keep the center as the fourth slot.
fn sl2_plus_line(d: &Codifferential) -> Built {
    let n = 4usize;
    let z = center(d).into_iter().next()?;
    let (e, h, f) = sl2_triple(d)?;
    let t = Matrix::from_rows(vec![
        vec![Scalar::zero(), Scalar::from_int(2), Scalar::zero(), Scalar::zero()],
        vec![Scalar::one(), Scalar::zero(), Scalar::from_int(-1), Scalar::zero()],
        vec![Scalar::one(), Scalar::zero(), Scalar::one(), Scalar::zero()],
        vec![Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::one()],
    ]);
    let u = Matrix::from_fn(n, n, |r, c| {
        [&e, &h, &f, &z][c][r].clone()
    });
    let g = u.mul(&t.inverse().ok()?);
    Some(("4C:d3".into(), vec![], (0..n).map(|c| g.col(c)).collect()))
}

/// C^3 with a scalar action: rescale the acting direction.
fn scalar_block_4d(d: &Codifferential) -> Built {
    let derived = d.derived_subspace();
    let x = first_outside(&derived, 4)?;
    let b = action_on(d, &x, &derived)?;
    let c = b.at(0, 0).clone();
    let xc = scale_vec(&x, &c.inv().ok()?);
    Some((
        "4C:d3*".into(),
        vec![],
        vec![derived[0].clone(), derived[1].clone(), derived[2].clone(), xc],
    ))
}

/// The d1 family (Heisenberg nilradical): quotient 2x2 normalization plus
/// central corrections.
fn d1_family_4d(d: &Codifferential) -> Built {
    let n = 4usize;
    let derived = d.derived_subspace();
    let second = bracket_span(d, &derived, &derived);
    if second.len() != 1 {
        return None;
    }
    let x = first_outside(&derived, n)?;
    // adapted basis of derived: second + lifts
    let mut adapted: Vec<Vec<Scalar>> = second.clone();
    {
        let mut span = SpanTracker::new(n);
        span.insert(&second[0]);
        for u in &derived {
            if span.insert(u) {
                adapted.push(u.clone());
            }
        }
    }
    let lifts = [adapted[1].clone(), adapted[2].clone()];
    // quotient action of x
    let mut cols = Vec::new();
    for u in &lifts {
        let img = d.apply_pair(u, &x);
        let co = coords_in(&adapted, &img)?;
        cols.push(vec![co[1].clone(), co[2].clone()]);
    }
    let mbar = Matrix::from_fn(2, 2, |r, c| cols[c][r].clone());
    let scalar_class = {
        let c = mbar.at(0, 0);
        *mbar.at(0, 1) == Scalar::zero()
            && *mbar.at(1, 0) == Scalar::zero()
            && mbar.at(1, 1) == c
    };
    let (label, params, v1, v2, s) = if scalar_class {
        let c = mbar.at(0, 0).clone();
        (
            "4C:d1#".to_string(),
            vec![],
            lifts[0].clone(),
            lifts[1].clone(),
            c,
        )
    } else {
        let (a, b) = quadratic_roots(&-mbar.trace(), &mbar.det())?;
        let (params, s) = my_param_order(&[a, b])?;
        let target = Matrix::from_rows(vec![
            vec![params[0].clone(), Scalar::one()],
            vec![Scalar::zero(), params[1].clone()],
        ]);
        let v = similarity_witness(&mbar.scale(&s.inv().ok()?), &target)?;
        let v1 = add_vec(
            &scale_vec(&lifts[0], v.at(0, 0)),
            &scale_vec(&lifts[1], v.at(1, 0)),
        );
        let v2 = add_vec(
            &scale_vec(&lifts[0], v.at(0, 1)),
            &scale_vec(&lifts[1], v.at(1, 1)),
        );
        ("4C:d1(λ:μ)".to_string(), params, v1, v2, s)
    };
    let xs = scale_vec(&x, &s.inv().ok()?);
    let (p, q) = if label == "4C:d1#" {
        (Scalar::one(), Scalar::one())
    } else {
        (params[0].clone(), params[1].clone())
    };
    // w1 = [v1, v2] spans the second derived algebra
    let mut v1 = v1;
    let mut v2 = v2;
    let w1 = d.apply_pair(&v1, &v2);
    if is_zero_vec(&w1) {
        return None;
    }
    // corrections: make [v1, x] = p v1 and [v2, x] = v1 + q v2 exactly
    // (d1# wants [v1,x] = v1, [v2,x] = v2 instead)
    let against = |img: &[Scalar], expect: &[Scalar]| -> Option<Scalar> {
        let diff = sub_vec(img, expect);
        ratio_to(&diff, &w1)
    };
    if label == "4C:d1#" {
        let alpha = against(&d.apply_pair(&v1, &xs), &v1)?;
        v1 = sub_vec(&v1, &scale_vec(&w1, &alpha));
        let beta = against(&d.apply_pair(&v2, &xs), &v2)?;
        v2 = sub_vec(&v2, &scale_vec(&w1, &beta));
    } else {
        let alpha = against(&d.apply_pair(&v1, &xs), &scale_vec(&v1, &p))?;
        // v1 += c w1 with c = -alpha / q
        let c = &-alpha / &q;
        v1 = add_vec(&v1, &scale_vec(&w1, &c));
        let expect = add_vec(&v1, &scale_vec(&v2, &q));
        let beta = against(&d.apply_pair(&v2, &xs), &expect)?;
        let e = &-beta / &p;
        v2 = add_vec(&v2, &scale_vec(&w1, &e));
    }
    let w1 = d.apply_pair(&v1, &v2);
    Some((label, params, vec![w1, v1, v2, xs]))
}

/// The d3 family on an abelian derived algebra, in all ranks: cyclic and
/// non-cyclic 3x3 actions (rank 3), singular actions (rank 2), and the
/// line case (rank 1).
fn d3_family_4d(d: &Codifferential) -> Built {
    let n = 4usize;
    let derived = d.derived_subspace();
    match derived.len() {
        3 => {
            let x = first_outside(&derived, n)?;
            let b = action_on(d, &x, &derived)?;
            let minp = b.min_poly();
            if minp.len() == 4 {
                // cyclic: normal form is the chain template at my ordering
                let ch = b.char_poly();
                let roots = crate::roots::cubic_roots(&ch[0], &ch[1], &ch[2])?;
                let (params, s) = my_param_order(&roots)?;
                let target = Matrix::from_rows(vec![
                    vec![params[0].clone(), Scalar::one(), Scalar::zero()],
                    vec![Scalar::zero(), params[1].clone(), Scalar::one()],
                    vec![Scalar::zero(), Scalar::zero(), params[2].clone()],
                ]);
                let v = similarity_witness(&b.scale(&s.inv().ok()?), &target)?;
                let vs: Vec<Vec<Scalar>> = (0..3).map(|c| combine(&derived, &v.col(c))).collect();
                let xs = scale_vec(&x, &s.inv().ok()?);
                Some((
                    "4C:d3(λ:μ:ν)".into(),
                    params,
                    vec![vs[0].clone(), vs[1].clone(), vs[2].clone(), xs],
                ))
            } else {
                // non-cyclic: diag(λ,λ,μ)-type; template [[λ,0,0],[0,λ,1],[0,0,μ]]
                let (a, bb) = quadratic_roots(&minp[1], &minp[0])?;
                let (doubled, other) = if a == bb {
                    (a.clone(), a)
                } else {
                    let doubled = &b.trace() - &(&a + &bb);
                    let other = if doubled == a { bb } else { a };
                    (doubled, other)
                };
                let s = doubled.clone();
                let params = vec![Scalar::one(), &other / &doubled];
                let target = Matrix::from_rows(vec![
                    vec![Scalar::one(), Scalar::zero(), Scalar::zero()],
                    vec![Scalar::zero(), Scalar::one(), Scalar::one()],
                    vec![Scalar::zero(), Scalar::zero(), params[1].clone()],
                ]);
                let v = similarity_witness(&b.scale(&s.inv().ok()?), &target)?;
                let vs: Vec<Vec<Scalar>> = (0..3).map(|c| combine(&derived, &v.col(c))).collect();
                let xs = scale_vec(&x, &s.inv().ok()?);
                Some((
                    "4C:d3(λ:μ)".into(),
                    params,
                    vec![vs[0].clone(), vs[1].clone(), vs[2].clone(), xs],
                ))
            }
        }
        2 => d3_family_rank2(d, &derived),
        1 => d3_family_rank1(d, &derived),
        _ => None,
    }
}

/// Rank-2 d3-family degenerations: one outside direction acts trivially.
fn d3_family_rank2(d: &Codifferential, derived: &[Vec<Scalar>]) -> Built {
    let n = 4usize;
    let (c1, c2) = complement_pair(derived, n)?;
    let m1 = action_on(d, &c1, derived)?;
    let m2 = action_on(d, &c2, derived)?;
    let stacked = Matrix::from_fn(4, 2, |r, c| {
        let m = if c == 0 { &m1 } else { &m2 };
        m.at(r / 2, r % 2).clone()
    });
    let kernel = stacked.kernel_basis();
    if kernel.len() != 1 {
        return None;
    }
    let k = &kernel[0];
    let z = add_vec(&scale_vec(&c1, &k[0]), &scale_vec(&c2, &k[1]));
    let y = if k[1].is_zero() { c2 } else { c1 };
    let m = action_on(d, &y, derived)?;
    if let Some(c) = scalar_of(&m) {
        // d2 + C class: template d3(λ:μ) at (1:0)
        let ys = scale_vec(&y, &c.inv().ok()?);
        let q = d.apply_pair(&z, &ys);
        // adjust z so that [z, y] = u2 exactly: z' = z + h, M = identity
        let co = coords_in(derived, &q)?;
        let h = sub_vec(
            &derived[1],
            &combine(derived, &co),
        );
        let z2 = add_vec(&z, &h);
        return Some((
            "4C:d3(λ:μ)".into(),
            vec![Scalar::one(), Scalar::zero()],
            vec![derived[0].clone(), derived[1].clone(), z2, ys],
        ));
    }
    let (a, b) = quadratic_roots(&-m.trace(), &m.det())?;
    let (params2, s) = my_param_order(&[a, b])?;
    let (p1, p2) = (params2[0].clone(), params2[1].clone());
    let target = Matrix::from_rows(vec![
        vec![p1.clone(), Scalar::one()],
        vec![Scalar::zero(), p2.clone()],
    ]);
    let ms = m.scale(&s.inv().ok()?);
    let v = similarity_witness(&ms, &target)?;
    let v1 = combine(derived, &v.col(0));
    let v2 = combine(derived, &v.col(1));
    let ys = scale_vec(&y, &s.inv().ok()?);
    // want [z', y] = c v2 with c != 0: solve q + M h = c v2, then rescale
    // the pair (v1, v2) by c
    let q = d.apply_pair(&z, &ys);
    let qc = coords_in(&[v1.clone(), v2.clone()], &q)?;
    let msys = Matrix::from_fn(2, 3, |r, c| match c {
        // columns of M in the (v1, v2) basis, which is the target form
        0 | 1 => target.at(r, c).clone(),
        _ => {
            if r == 1 {
                -Scalar::one()
            } else {
                Scalar::zero()
            }
        }
    });
    // [q1 q2]^T + T [h1 h2]^T - c [0 1]^T = 0
    let sol = msys.solve(&neg_vec(&qc))?;
    let (mut h1, mut h2, mut c) = (sol[0].clone(), sol[1].clone(), sol[2].clone());
    if c.is_zero() {
        let kv = msys.kernel_basis().into_iter().find(|kv| !kv[2].is_zero())?;
        h1 = &h1 + &kv[0];
        h2 = &h2 + &kv[1];
        c = &c + &kv[2];
    }
    finish_rank2(d, v1, v2, z, ys, h1, h2, c, p1, p2)
}

#[allow(clippy::too_many_arguments)]
fn finish_rank2(
    d: &Codifferential,
    v1: Vec<Scalar>,
    v2: Vec<Scalar>,
    z: Vec<Scalar>,
    ys: Vec<Scalar>,
    h1: Scalar,
    h2: Scalar,
    c: Scalar,
    p1: Scalar,
    p2: Scalar,
) -> Built {
    if c.is_zero() {
        return None;
    }
    // rescale the pair so the reached vector is exactly the new v2
    let cinv = c.inv().ok()?;
    let v1 = scale_vec(&v1, &c);
    let v2 = scale_vec(&v2, &c);
    let z2 = add_vec(&z, &add_vec(&scale_vec(&v1, &(&h1 * &cinv)), &scale_vec(&v2, &(&h2 * &cinv))));
    // verify [z2, ys] = v2
    if d.apply_pair(&z2, &ys) != v2 {
        return None;
    }
    Some((
        "4C:d3(λ:μ:ν)".into(),
        vec![p1, p2, Scalar::zero()],
        vec![v1, v2, z2, ys],
    ))
}

fn scalar_of(m: &Matrix<Scalar>) -> Option<Scalar> {
    let c = m.at(0, 0).clone();
    for r in 0..m.rows() {
        for cc in 0..m.cols() {
            let expect = if r == cc { c.clone() } else { Scalar::zero() };
            if *m.at(r, cc) != expect {
                return None;
            }
        }
    }
    Some(c)
}

/// Rank-1 classes: r2 + C^2 (non-central line) and the d1(0:1) class is
/// handled by `d1_family_4d`... the non-central line class only.
fn d3_family_rank1(d: &Codifferential, derived: &[Vec<Scalar>]) -> Built {
    let n = 4usize;
    let u = derived[0].clone();
    // x with [u, x] = u
    let mut x = None;
    for j in 0..n {
        let img = d.apply_pair(&u, &std_vector(n, j));
        if let Some(c) = ratio_to(&img, &u) {
            if !c.is_zero() {
                x = Some(scale_vec(&std_vector(n, j), &c.inv().ok()?));
                break;
            }
        }
    }
    let x = x?;
    // the two central directions
    let zs = joint_centralizer(d, &[&x, &u]);
    if zs.len() != 2 {
        return None;
    }
    // template d3(λ:μ) at (0:1): [w3, w4] = w2 + w3, others zero;
    // basis (z1, -z2, u + z2, x)
    let w1 = zs[0].clone();
    let w2 = neg_vec(&zs[1]);
    let w3 = add_vec(&u, &zs[1]);
    Some((
        "4C:d3(λ:μ)".into(),
        vec![Scalar::zero(), Scalar::one()],
        vec![w1, w2, w3, x],
    ))
}

/// d1(0:1) class: rank-2 derived, trivial center.
pub(super) fn d1_zero_one_basis(d: &Codifferential) -> Built {
    let n = 4usize;
    let derived = d.derived_subspace();
    let (c1, c2) = complement_pair(&derived, n)?;
    let m1 = action_on(d, &c1, &derived)?;
    let m2 = action_on(d, &c2, &derived)?;
    // nilpotent pencil direction: trace and det both zero
    // solve tr(a M1 + b M2) = 0 and det(a M1 + b M2) = 0 over small combos
    let mut found = None;
    'outer: for a in -4i64..=4 {
        for b in -4i64..=4 {
            if a == 0 && b == 0 {
                continue;
            }
            let m = m1
                .scale(&Scalar::from_int(a))
                .add(&m2.scale(&Scalar::from_int(b)));
            if m.trace().is_zero() && m.det().is_zero() && !m.is_zero_matrix() {
                found = Some((Scalar::from_int(a), Scalar::from_int(b), m));
                break 'outer;
            }
        }
    }
    let (za, zb, mz) = found?;
    let z = add_vec(&scale_vec(&c1, &za), &scale_vec(&c2, &zb));
    // y with identity action: solve a M1 + b M2 = I
    let sys = Matrix::from_fn(4, 2, |r, c| {
        let m = if c == 0 { &m1 } else { &m2 };
        m.at(r / 2, r % 2).clone()
    });
    let idvec = vec![Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one()];
    let sol = sys.solve(&idvec)?;
    let y = add_vec(&scale_vec(&c1, &sol[0]), &scale_vec(&c2, &sol[1]));
    // u2: a derived vector with M_z u2 != 0; u1 = M_z u2
    let mz_cols: Vec<Vec<Scalar>> = (0..2).map(|c| mz.col(c)).collect();
    let u2coords = if !mz_cols[0].iter().all(|x| x.is_zero()) {
        vec![Scalar::one(), Scalar::zero()]
    } else {
        vec![Scalar::zero(), Scalar::one()]
    };
    let u2 = combine(&derived, &u2coords);
    let u1 = d.apply_pair(&u2, &z);
    if is_zero_vec(&u1) {
        return None;
    }
    // adjust z so [z, y] = u2
    let q = d.apply_pair(&z, &y);
    let fix = sub_vec(&u2, &q);
    let z2 = add_vec(&z, &fix);
    if d.apply_pair(&z2, &y) != u2 {
        return None;
    }
    // basis (u1, u2 - z2, z2, y): template d1(0:1)
    let w2 = sub_vec(&u2, &z2);
    Some((
        "4C:d1(λ:μ)".into(),
        vec![Scalar::zero(), Scalar::one()],
        vec![u1, w2, z2, y],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::data::instantiate;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    #[test]
    fn scaling_witness() {
        let d = instantiate("3C:d2", &[]).unwrap();
        let five = d.scale(&s(5));
        match equivalent(&d, &five) {
            Equivalence::Equivalent { witness, scale } => {
                let moved = witness.pullback_codiff(&d).unwrap();
                assert_eq!(moved.to_matrix(), five.scale(&scale.inv().unwrap()).to_matrix());
            }
            other => panic!("expected equivalence, got {:?}", other),
        }
    }

    #[test]
    fn refutation_by_class() {
        let d2 = instantiate("3C:d2", &[]).unwrap();
        let d211 = instantiate("3C:d2(λ:μ)", &[s(1), s(1)]).unwrap();
        assert!(matches!(
            equivalent(&d2, &d211),
            Equivalence::Different { .. }
        ));
    }

    #[test]
    fn sl2_contraction_trio_pairwise_equivalent() {
        let mats: Vec<Codifferential> = [
            [&[0i64, 0, 0][..], &[0, 1, 0][..], &[1, 0, 0][..]],
            [&[0, 0, 1][..], &[0, 0, 0][..], &[1, 0, 0][..]],
            [&[0, 0, 1][..], &[0, 1, 0][..], &[0, 0, 0][..]],
        ]
        .iter()
        .map(|rows| Codifferential::from_int_rows(3, Field::Qi, rows))
        .collect();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                match equivalent(&mats[i], &mats[j]) {
                    Equivalence::Equivalent { witness, scale } => {
                        let moved = witness.pullback_codiff(&mats[i]).unwrap();
                        assert_eq!(
                            moved.to_matrix(),
                            mats[j].scale(&scale).to_matrix()
                        );
                    }
                    other => panic!("{} vs {}: {:?}", i, j, other),
                }
            }
        }
    }

    #[test]
    fn normalization_round_trips_on_catalog_conjugates() {
        let g = BasisChange::from_int_rows(&[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]);
        for (label, params) in [
            ("3C:d1", vec![]),
            ("3C:d2", vec![]),
            ("3C:d2(λ:μ)", vec![s(1), s(3)]),
            ("3C:d2(λ:μ)", vec![s(0), s(1)]),
            ("3C:d2(λ:μ)", vec![s(1), s(1)]),
            ("3C:d3", vec![]),
        ] {
            let d = instantiate(label, &params).unwrap();
            let moved = g.pullback_codiff(&d).unwrap();
            let nf = normalize_with_witness(&moved).unwrap_or_else(|e| {
                panic!("normalize {} failed: {:?}", label, e)
            });
            let pulled = nf.g.pullback_codiff(&moved).unwrap();
            assert_eq!(
                pulled.to_matrix(),
                nf.form.scale(&nf.scale).to_matrix(),
                "witness mismatch for {}",
                label
            );
            match equivalent(&moved, &d) {
                Equivalence::Equivalent { witness, scale } => {
                    let w = witness.pullback_codiff(&moved).unwrap();
                    assert_eq!(w.to_matrix(), d.scale(&scale).to_matrix());
                }
                other => panic!("equivalent failed for {}: {:?}", label, other),
            }
        }
    }
}
