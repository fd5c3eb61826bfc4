//! Exact root extraction for the small characteristic polynomials that
//! drive catalog identification: quadratics via exact square roots, cubics
//! via divisor search over Z or Z[i]. Failure to find roots inside the
//! field is reported as `None` and surfaces as an honest `Unclassified`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Roots of x^2 + b x + c inside Q(i), if the discriminant is a square.
pub fn quadratic_roots(b: &Scalar, c: &Scalar) -> Option<(Scalar, Scalar)> {
    let four = Scalar::from_int(4);
    let disc = &(b * b) - &(&four * c);
    let s = disc.sqrt_exact()?;
    let half = Scalar::from_frac(1, 2);
    let r1 = &(&-b.clone() + &s) * &half;
    let r2 = &(&-b.clone() - &s) * &half;
    Some((r1, r2))
}

/// Evaluate a monic polynomial with coefficients low-first (c[0] + c[1] x +
/// ... + x^deg, where c.len() == deg and the leading 1 is implicit).
fn eval_monic(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::one();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// All roots (with multiplicity) of x^3 + c2 x^2 + c1 x + c0 in Q(i);
/// `None` if some root lies outside the field or the search gives up.
pub fn cubic_roots(c0: &Scalar, c1: &Scalar, c2: &Scalar) -> Option<Vec<Scalar>> {
    // zero roots first
    if c0.is_zero() {
        let (r1, r2) = quadratic_roots(c2, c1)?;
        return Some(vec![Scalar::zero(), r1, r2]);
    }
    // repeated roots: a double root is a common root with the derivative
    // 3x^2 + 2 c2 x + c1; test the two candidate points directly
    let three_inv = Scalar::from_frac(1, 3);
    if let Some((d1, d2)) = quadratic_roots(
        &(&(&Scalar::from_int(2) * c2) * &three_inv),
        &(c1 * &three_inv),
    ) {
        for r in [d1, d2] {
            if eval_monic(&[c0.clone(), c1.clone(), c2.clone()], &r).is_zero() {
                // Vieta: remaining roots satisfy x^2 + (c2+r) x - c0/r
                let b = c2 + &r;
                let prod = &-c0.clone() / &r;
                let (r1, r2) = quadratic_roots(&b, &prod)?;
                return Some(vec![r, r1, r2]);
            }
        }
    }
    // squarefree search: one root by divisor enumeration, then deflate
    let root = find_linear_root_deg3(c0, c1, c2)?;
    let b = c2 + &root;
    let prod = &-c0.clone() / &root;
    let (r1, r2) = quadratic_roots(&b, &prod)?;
    Some(vec![root, r1, r2])
}

/// Search for a root of the monic cubic in Q(i) by clearing denominators
/// and enumerating divisors of the constant term.
fn find_linear_root_deg3(c0: &Scalar, c1: &Scalar, c2: &Scalar) -> Option<Scalar> {
    // common denominator D: substitute x = y / D, multiply by D^3:
    // y^3 + c2 D y^2 + c1 D^2 y + c0 D^3 with algebraic-integer roots
    let mut den = c2.re().denom().clone();
    for r in [c2.im(), c1.re(), c1.im(), c0.re(), c0.im()] {
        den = num_integer::Integer::lcm(&den, r.denom());
    }
    let d = Scalar::from_rational(BigRational::from_integer(den));
    let cc2 = c2 * &d;
    let cc1 = &(c1 * &d) * &d;
    let cc0 = &(&(c0 * &d) * &d) * &d;
    let coeffs = [cc0.clone(), cc1, cc2];
    let all_real = coeffs.iter().all(|c| c.is_real());
    let candidates: Vec<Scalar> = if all_real {
        integer_divisors(cc0.re().numer())?
            .into_iter()
            .flat_map(|p| {
                let s = Scalar::from_rational(BigRational::from_integer(p));
                [s.clone(), -&s]
            })
            .collect()
    } else {
        gaussian_divisors(&gaussian_from_scalar(&cc0)?)?
            .into_iter()
            .map(|(a, b)| {
                Scalar::new(
                    BigRational::from_integer(a),
                    BigRational::from_integer(b),
                )
            })
            .collect()
    };
    for y in candidates {
        if eval_monic(&coeffs, &y).is_zero() {
            return Some(&y / &d);
        }
    }
    None
}

fn gaussian_from_scalar(s: &Scalar) -> Option<(BigInt, BigInt)> {
    if !s.re().denom().is_one() || !s.im().denom().is_one() {
        return None;
    }
    Some((s.re().numer().clone(), s.im().numer().clone()))
}

/// Positive divisors of |n|, or `None` when factoring is infeasible.
fn integer_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return None;
    }
    let factors = factor_bigint(&n)?;
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
        if divs.len() > 4096 {
            return None;
        }
    }
    divs.sort();
    divs.dedup();
    Some(divs)
}

/// Trial-division factorization with a give-up bound.
fn factor_bigint(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    let bound = BigInt::from(1_000_000u64);
    while &p * &p <= n && p <= bound {
        let mut e = 0u32;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { BigInt::one() } else { BigInt::from(2) };
    }
    if n > BigInt::one() {
        // leftover cofactor: accept it as prime only if it is small enough
        // that a missed factorization cannot hide divisors we would need
        if n > BigInt::from(10_000_000_000_000u64) {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

/// All divisors of a nonzero Gaussian integer up to units — returned with
/// all four unit multiples included.
fn gaussian_divisors(z: &(BigInt, BigInt)) -> Option<Vec<(BigInt, BigInt)>> {
    let norm = &z.0 * &z.0 + &z.1 * &z.1;
    if norm.is_zero() {
        return None;
    }
    let factors = factor_bigint(&norm)?;
    // Gaussian primes that can divide z: lifted from rational primes of
    // the norm
    let mut gprimes: Vec<(BigInt, BigInt)> = Vec::new();
    for (p, _) in &factors {
        if *p == BigInt::from(2) {
            gprimes.push((BigInt::one(), BigInt::one()));
        } else if (p % BigInt::from(4u8)) == BigInt::from(1u8) {
            let (a, b) = two_squares(p)?;
            gprimes.push((a.clone(), b.clone()));
            gprimes.push((a, -b));
        } else {
            gprimes.push((p.clone(), BigInt::zero()));
        }
    }
    // peel off prime factors of z itself
    let mut rest = z.clone();
    let mut fact: Vec<((BigInt, BigInt), u32)> = Vec::new();
    for gp in gprimes {
        let mut e = 0u32;
        while let Some(q) = gaussian_exact_div(&rest, &gp) {
            rest = q;
            e += 1;
        }
        if e > 0 {
            fact.push((gp, e));
        }
    }
    // rest is now a unit
    let mut divs: Vec<(BigInt, BigInt)> = vec![(BigInt::one(), BigInt::zero())];
    for (gp, e) in fact {
        let mut next = Vec::new();
        for d in &divs {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..e {
                acc = gaussian_mul(&acc, &gp);
                next.push(acc.clone());
            }
        }
        divs = next;
        if divs.len() > 4096 {
            return None;
        }
    }
    let mut out = Vec::with_capacity(divs.len() * 4);
    for d in divs {
        let i_mul = (-d.1.clone(), d.0.clone());
        out.push(d.clone());
        out.push((-d.0.clone(), -d.1.clone()));
        out.push(i_mul.clone());
        out.push((-i_mul.0.clone(), -i_mul.1.clone()));
    }
    Some(out)
}

fn gaussian_mul(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn gaussian_exact_div(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> Option<(BigInt, BigInt)> {
    let nb = &b.0 * &b.0 + &b.1 * &b.1;
    if nb.is_zero() {
        return None;
    }
    let re = &a.0 * &b.0 + &a.1 * &b.1;
    let im = &a.1 * &b.0 - &a.0 * &b.1;
    if (&re % &nb).is_zero() && (&im % &nb).is_zero() {
        Some((re / &nb, im / nb))
    } else {
        None
    }
}

/// x^2 + y^2 = p for a prime p = 1 mod 4, by brute-force search.
fn two_squares(p: &BigInt) -> Option<(BigInt, BigInt)> {
    if *p > BigInt::from(100_000_000u64) {
        return None;
    }
    let mut a = BigInt::one();
    while &a * &a * 2 <= *p {
        let rem = p - &a * &a;
        let b = rem.sqrt();
        if &b * &b == rem {
            return Some((b, a));
        }
        a += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    #[test]
    fn quadratic_cases() {
        // x^2 - 3x + 2 = (x-1)(x-2)
        let (a, b) = quadratic_roots(&s(-3), &s(2)).unwrap();
        let mut got = vec![a, b];
        got.sort_by(|x, y| x.canonical_cmp(y));
        assert_eq!(got, vec![s(1), s(2)]);
        // x^2 + 1 = (x-i)(x+i)
        let (a, b) = quadratic_roots(&s(0), &s(1)).unwrap();
        assert_eq!(&a * &b, s(1));
        assert!(!a.is_real());
        // x^2 - 2 has no roots in Q(i)
        assert!(quadratic_roots(&s(0), &s(-2)).is_none());
    }

    #[test]
    fn cubic_distinct_rational() {
        // (x-1)(x-2)(x-5) = x^3 - 8x^2 + 17x - 10
        let roots = cubic_roots(&s(-10), &s(17), &s(-8)).unwrap();
        let mut got = roots;
        got.sort_by(|x, y| x.canonical_cmp(y));
        assert_eq!(got, vec![s(1), s(2), s(5)]);
    }

    #[test]
    fn cubic_with_fractions_and_repeats() {
        // (x-1/2)^2 (x-3) = x^3 - 4x^2 + 13/4 x - 3/4
        let roots = cubic_roots(
            &Scalar::from_frac(-3, 4),
            &Scalar::from_frac(13, 4),
            &s(-4),
        )
        .unwrap();
        let mut got = roots;
        got.sort_by(|x, y| x.canonical_cmp(y));
        assert_eq!(got, vec![Scalar::from_frac(1, 2), Scalar::from_frac(1, 2), s(3)]);
        // triple root (x-2)^3
        let roots = cubic_roots(&s(-8), &s(12), &s(-6)).unwrap();
        assert!(roots.iter().all(|r| *r == s(2)));
    }

    #[test]
    fn cubic_gaussian() {
        // (x-i)(x+i)(x-3) = x^3 - 3x^2 + x - 3
        let roots = cubic_roots(&s(-3), &s(1), &s(-3)).unwrap();
        assert!(roots.contains(&s(3)));
        assert!(roots.contains(&Scalar::i()));
        // (x-(1+i))(x-2)(x-5): genuinely complex constant term
        let one_i = Scalar::new(BigRational::one(), BigRational::one());
        let c2 = -(&(&one_i + &s(2)) + &s(5));
        let c1 = &(&one_i * &s(2)) + &(&(&one_i + &s(2)) * &s(5));
        let c0 = -&(&(&one_i * &s(2)) * &s(5));
        let roots = cubic_roots(&c0, &c1, &c2).unwrap();
        assert!(roots.contains(&one_i));
        assert!(roots.contains(&s(2)));
        assert!(roots.contains(&s(5)));
    }

    #[test]
    fn cubic_irrational_gives_none() {
        // x^3 - 2 has no roots in Q(i)
        assert!(cubic_roots(&s(-2), &s(0), &s(0)).is_none());
    }
}
