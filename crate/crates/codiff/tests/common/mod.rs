//! Shared test oracles, independent of the library's composition code
//! paths: a brute-force coderivation-extension evaluator for the circle
//! bracket, and a triple-loop Jacobi checker working directly on matrix
//! entries.

use std::collections::BTreeMap;

use codiff::cochain::Cochain;
use codiff::codifferential::Codifferential;
use codiff::linalg::Matrix;
use codiff::multiindex::{perm_sign, MultiIndex};
use codiff::scalar::Scalar;

use rand::Rng;

/// Formal sum of basis words with scalar coefficients.
pub type WordSum = BTreeMap<MultiIndex, Scalar>;

fn add_term(sum: &mut WordSum, word: MultiIndex, coeff: Scalar) {
    if coeff.is_zero() {
        return;
    }
    let updated = match sum.get(&word) {
        Some(old) => old + &coeff,
        None => coeff,
    };
    if updated.is_zero() {
        sum.remove(&word);
    } else {
        sum.insert(word, updated);
    }
}

/// All k-subsets of 0..n as (subset, complement) in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        let rest: Vec<usize> = (0..n).filter(|i| !idx.contains(i)).collect();
        out.push((idx.clone(), rest));
        if k == 0 {
            break;
        }
        let mut i = k as isize - 1;
        while i >= 0 && idx[i as usize] == n - k + i as usize {
            i -= 1;
        }
        if i < 0 {
            break;
        }
        let i = i as usize;
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Apply the coderivation extension of phi to one basis word, by the
/// Sh(k, n-k) formula: pick k letters for phi, keep the rest.
pub fn coderivation_apply(phi: &Cochain<Scalar>, word: &MultiIndex) -> WordSum {
    let mut out = WordSum::new();
    let letters = word.indices();
    let n = letters.len();
    let k = phi.degree();
    for (chosen, rest) in subsets(n, k) {
        // sign of the shuffle moving the chosen letters to the front
        let mut perm: Vec<usize> = chosen.clone();
        perm.extend(rest.iter().copied());
        let eps = perm_sign(&perm);
        let sub = MultiIndex::new(chosen.iter().map(|&i| letters[i]).collect());
        let vals = phi.apply_word(&sub);
        for (t, coeff) in vals.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            // multiply w_{t+1} into the remaining letters
            let mut new_word: Vec<u8> = Vec::with_capacity(n - k + 1);
            new_word.push((t + 1) as u8);
            new_word.extend(rest.iter().map(|&i| letters[i]));
            if let Some((mi, s2)) = MultiIndex::from_word(&new_word) {
                let total = coeff * &Scalar::from_int((eps * s2) as i64);
                add_term(&mut out, mi, total);
            }
        }
    }
    out
}

/// Apply the coderivation extension to a formal sum of words.
fn coderivation_apply_sum(phi: &Cochain<Scalar>, sum: &WordSum) -> WordSum {
    let mut out = WordSum::new();
    for (word, c) in sum {
        for (w2, c2) in coderivation_apply(phi, word) {
            add_term(&mut out, w2, &c2 * c);
        }
    }
    out
}

/// The bracket of coderivations evaluated on all basis words of the
/// appropriate degree, assembled back into a cochain. Independent of the
/// library's shuffle-composition implementation.
pub fn bracket_oracle(phi: &Cochain<Scalar>, psi: &Cochain<Scalar>) -> Cochain<Scalar> {
    let n = phi.dim();
    let degree = phi.degree() + psi.degree() - 1;
    // [phi,psi] = phi o psi - (-1)^{|phi||psi|} psi o phi
    let koszul: i64 = if phi.parity() * psi.parity() == 1 { -1 } else { 1 };
    let mut out = Cochain::zero(n, degree);
    for word in MultiIndex::enumerate(n, degree) {
        let ab = coderivation_apply_sum(phi, &coderivation_apply(psi, &word));
        let ba = coderivation_apply_sum(psi, &coderivation_apply(phi, &word));
        for (w, c) in ab {
            assert_eq!(w.degree(), 1);
            out.insert(word.clone(), w.indices()[0], c);
        }
        for (w, c) in ba {
            assert_eq!(w.degree(), 1);
            let signed = &c * &Scalar::from_int(-koszul);
            out.insert(word.clone(), w.indices()[0], signed);
        }
    }
    out
}

/// Triple-loop Jacobi oracle straight off the matrix: the cochain
/// d(d(a,b),c) - d(d(a,c),b) + d(d(b,c),a) over all basis triples.
pub fn jacobi_oracle(d: &Codifferential) -> Cochain<Scalar> {
    let n = d.dim();
    let m = d.to_matrix();
    // d(w_i w_j) as a coefficient vector, with antisymmetry
    let image = |i: u8, j: u8| -> Vec<Scalar> {
        if i == j {
            return vec![Scalar::zero(); n as usize];
        }
        let (a, b, sgn) = if i < j { (i, j, 1i64) } else { (j, i, -1) };
        let col = MultiIndex::pair(a, b).colex_rank();
        (0..n as usize)
            .map(|r| m.at(r, col) * &Scalar::from_int(sgn))
            .collect()
    };
    let image_vec = |v: &[Scalar], c: u8| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n as usize];
        for (i, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let img = image((i + 1) as u8, c);
            for r in 0..n as usize {
                out[r] = &out[r] + &(&img[r] * coeff);
            }
        }
        out
    };
    let mut out = Cochain::zero(n, 3);
    for triple in MultiIndex::enumerate(n, 3) {
        let [a, b, c]: [u8; 3] = triple.indices().try_into().unwrap();
        let t1 = image_vec(&image(a, b), c);
        let t2 = image_vec(&image(a, c), b);
        let t3 = image_vec(&image(b, c), a);
        for r in 0..n as usize {
            let total = &(&t1[r] - &t2[r]) + &t3[r];
            out.insert(triple.clone(), (r + 1) as u8, total);
        }
    }
    out
}

/// Random sparse cochain with small integer coefficients.
pub fn random_sparse_cochain<R: Rng>(
    rng: &mut R,
    n: u8,
    degree: usize,
    terms: usize,
) -> Cochain<Scalar> {
    let words = MultiIndex::enumerate(n, degree);
    let mut out = Cochain::zero(n, degree);
    for _ in 0..terms {
        let w = words[rng.gen_range(0..words.len())].clone();
        let t = rng.gen_range(1..=n);
        let c = rng.gen_range(-3i64..=3);
        out.insert(w, t, Scalar::from_int(c));
    }
    out
}

/// Random invertible rational basis change with small integer entries.
pub fn random_basis_change<R: Rng>(rng: &mut R, n: usize) -> codiff::basis::BasisChange {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| Scalar::from_int(rng.gen_range(-2i64..=2)));
        if !m.det().is_zero() {
            return codiff::basis::BasisChange::new(m).unwrap();
        }
    }
}
