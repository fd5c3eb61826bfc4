//! Dense matrices over a ring, with exact Gaussian elimination over the
//! field of scalars. Everything here is deterministic: pivots are always
//! the first nonzero candidate in row/column order.

use crate::error::CoreError;
use crate::ring::Ring;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>, // row-major
}

impl<T: Ring> std::fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).add(other.at(r, c)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).sub(other.at(r, c)))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Self::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.at(r, k).mul(other.at(k, c)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.at(r, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).mul(s))
    }

    /// Cofactor-expansion determinant; fine for the small square matrices
    /// used here and valid over any commutative ring.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        match n {
            0 => T::one(),
            1 => self.at(0, 0).clone(),
            _ => {
                let mut acc = T::zero();
                for c in 0..n {
                    if self.at(0, c).is_zero() {
                        continue;
                    }
                    let minor = Self::from_fn(n - 1, n - 1, |r2, c2| {
                        self.at(r2 + 1, if c2 < c { c2 } else { c2 + 1 }).clone()
                    });
                    let term = self.at(0, c).mul(&minor.det());
                    acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }

    /// Adjugate matrix (transpose of cofactors), any commutative ring.
    pub fn adjugate(&self) -> Self {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return self.clone();
        }
        if n == 1 {
            let mut m = Self::zero(1, 1);
            *m.at_mut(0, 0) = T::one();
            return m;
        }
        Self::from_fn(n, n, |r, c| {
            // cofactor C_{c,r}
            let minor = Self::from_fn(n - 1, n - 1, |r2, c2| {
                self.at(if r2 < c { r2 } else { r2 + 1 }, if c2 < r { c2 } else { c2 + 1 })
                    .clone()
            });
            let d = minor.det();
            if (r + c) % 2 == 0 {
                d
            } else {
                d.neg()
            }
        })
    }
}

/// Reduced row echelon form together with the pivot columns.
pub struct Echelon {
    pub rref: Matrix<Scalar>,
    pub pivots: Vec<usize>,
}

impl Matrix<Scalar> {
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let mut pivot_row = None;
            for r in row..m.rows {
                if !m.at(r, col).is_zero() {
                    pivot_row = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot_row else { continue };
            if pr != row {
                for c in 0..m.cols {
                    let a = m.at(pr, c).clone();
                    let b = m.at(row, c).clone();
                    *m.at_mut(pr, c) = b;
                    *m.at_mut(row, c) = a;
                }
            }
            let inv = m.at(row, col).inv().expect("pivot is nonzero");
            for c in col..m.cols {
                *m.at_mut(row, c) = m.at(row, c) * &inv;
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in col..m.cols {
                        *m.at_mut(r, c) = m.at(r, c) - &(&factor * m.at(row, c));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { rref: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel, one vector per free column, in canonical
    /// column order (each vector has a 1 in its free column).
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let ech = self.rref();
        let pivot_set: Vec<usize> = ech.pivots.clone();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (prow, &pcol) in pivot_set.iter().enumerate() {
                v[pcol] = -ech.rref.at(prow, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve A x = b; `None` if inconsistent. Free variables are set to 0.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, b.len());
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let ech = aug.rref();
        if ech.pivots.contains(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (prow, &pcol) in ech.pivots.iter().enumerate() {
            x[pcol] = ech.rref.at(prow, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Matrix<Scalar>, CoreError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.at(r, c).clone()
            } else if c - n == r {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let ech = aug.rref();
        if ech.pivots.len() != n || ech.pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(CoreError::SingularMatrix);
        }
        Ok(Matrix::from_fn(n, n, |r, c| ech.rref.at(r, n + c).clone()))
    }

    /// Monic characteristic polynomial, low degree first: det(xI - A).
    pub fn char_poly(&self) -> Vec<Scalar> {
        assert_eq!(self.rows, self.cols);
        // Faddeev-LeVerrier: exact over Q(i), no elimination needed.
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = Matrix::<Scalar>::zero(n, n);
        for k in 1..=n {
            // M_k = A * M_{k-1} + c_{n-k+1} I
            let am = self.mul(&m);
            let mut mk = am.clone();
            for i in 0..n {
                *mk.at_mut(i, i) = mk.at(i, i).add(&coeffs[n - k + 1]);
            }
            let amk = self.mul(&mk);
            let mut trace = Scalar::zero();
            for i in 0..n {
                trace = &trace + amk.at(i, i);
            }
            coeffs[n - k] = &trace * &Scalar::from_frac(-1, k as i64);
            m = mk;
        }
        coeffs
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.at(i, i);
        }
        t
    }

    /// Minimal polynomial (monic, low degree first) via the first linear
    /// dependency among vec(I), vec(A), vec(A^2), ...
    pub fn min_poly(&self) -> Vec<Scalar> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut powers: Vec<Matrix<Scalar>> = vec![Matrix::identity(n)];
        for d in 1..=n {
            let next = self.mul(&powers[d - 1]);
            powers.push(next);
            // columns: vec(A^0) .. vec(A^d); look for a kernel vector with a
            // nonzero last coordinate
            let cols = d + 1;
            let flat = Matrix::from_fn(n * n, cols, |r, c| {
                powers[c].data[r].clone()
            });
            for k in flat.kernel_basis() {
                if !k[d].is_zero() {
                    let lead = k[d].inv().unwrap();
                    return k.iter().map(|c| c * &lead).collect();
                }
            }
        }
        unreachable!("a square matrix satisfies its characteristic polynomial")
    }
}

/// An invertible V with P V = V B, for square matrices over the field that
/// are known (or suspected) to be similar. Returns `None` if no invertible
/// solution is found in the Sylvester solution space.
///
/// The search over kernel combinations is deterministic; for similar
/// matrices an invertible point exists and small integer combinations of
/// the kernel basis find one quickly in the sizes used here (n <= 4).
pub fn similarity_witness(p: &Matrix<Scalar>, b: &Matrix<Scalar>) -> Option<Matrix<Scalar>> {
    assert_eq!(p.rows(), p.cols());
    assert_eq!(b.rows(), b.cols());
    if p.rows() != b.rows() {
        return None;
    }
    let n = p.rows();
    if n == 0 {
        return Some(Matrix::identity(0));
    }
    // Linear operator on vec(V): L(V) = P V - V B, as an n^2 x n^2 matrix.
    let l = Matrix::from_fn(n * n, n * n, |rc, uv| {
        let (r, c) = (rc / n, rc % n);
        let (u, v) = (uv / n, uv % n);
        let mut entry = Scalar::zero();
        if v == c {
            entry = &entry + p.at(r, u);
        }
        if u == r {
            entry = &entry - b.at(v, c);
        }
        entry
    });
    let kernel = l.kernel_basis();
    if kernel.is_empty() {
        return None;
    }
    let to_matrix = |coords: &[i64], kernel: &[Vec<Scalar>]| -> Matrix<Scalar> {
        let mut flat = vec![Scalar::zero(); n * n];
        for (k, &c) in kernel.iter().zip(coords) {
            if c == 0 {
                continue;
            }
            let cs = Scalar::from_int(c);
            for (f, kv) in flat.iter_mut().zip(k) {
                *f = &*f + &(kv * &cs);
            }
        }
        Matrix::from_fn(n, n, |r, c| flat[r * n + c].clone())
    };
    // single basis vectors first, then small odometer combinations
    for (i, _) in kernel.iter().enumerate() {
        let mut coords = vec![0i64; kernel.len()];
        coords[i] = 1;
        let v = to_matrix(&coords, &kernel);
        if !v.det().is_zero() {
            return Some(v);
        }
    }
    let digits: [i64; 5] = [0, 1, -1, 2, -2];
    let dim = kernel.len();
    let mut counter = vec![0usize; dim];
    let limit = 5usize.pow(dim.min(8) as u32);
    for _ in 0..limit.min(200_000) {
        let mut i = 0;
        loop {
            counter[i] += 1;
            if counter[i] < digits.len() {
                break;
            }
            counter[i] = 0;
            i += 1;
            if i == dim {
                return None;
            }
        }
        let coords: Vec<i64> = counter.iter().map(|&c| digits[c]).collect();
        let v = to_matrix(&coords, &kernel);
        if !v.det().is_zero() {
            return Some(v);
        }
    }
    None
}

/// Incrementally maintained row space for deterministic independence tests.
pub struct SpanTracker {
    dim: usize,
    rows: Vec<Vec<Scalar>>, // in reduced echelon form
}

impl SpanTracker {
    pub fn new(dim: usize) -> Self {
        SpanTracker { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the span; returns the residual.
    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for row in &self.rows {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f = v[lead].clone();
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi = &*vi - &(&f * ri);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Add `v` if independent; returns true when the span grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(v);
        let Some(lead) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[lead].inv().unwrap();
        for x in r.iter_mut() {
            *x = &*x * &inv;
        }
        // back-substitute into existing rows to keep reduced form
        for row in self.rows.iter_mut() {
            if !row[lead].is_zero() {
                let f = row[lead].clone();
                for (ri, xi) in row.iter_mut().zip(&r) {
                    *ri = &*ri - &(&f * xi);
                }
            }
        }
        self.rows.push(r);
        self.rows.sort_by_key(|row| row.iter().position(|x| !x.is_zero()).unwrap());
        true
    }

    /// Echelon basis of the current span.
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    #[test]
    fn rref_rank_kernel() {
        let m = Matrix::from_rows(vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
            vec![s(1), s(0), s(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for v in &k {
            let img = m.mul_vec(v);
            assert!(img.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(vec![
            vec![s(0), s(1), s(1)],
            vec![s(2), s(0), s(1)],
            vec![s(0), s(0), s(1)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        let sing = Matrix::from_rows(vec![vec![s(1), s(2)], vec![s(2), s(4)]]);
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn det_and_adjugate() {
        let m = Matrix::from_rows(vec![
            vec![s(1), s(2), s(0)],
            vec![s(3), s(4), s(1)],
            vec![s(0), s(1), s(1)],
        ]);
        let d = m.det();
        let adj = m.adjugate();
        let prod = m.mul(&adj);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { d.clone() } else { Scalar::zero() };
                assert_eq!(*prod.at(i, j), expect);
            }
        }
    }

    #[test]
    fn char_and_min_poly() {
        let m = Matrix::from_rows(vec![vec![s(1), s(1)], vec![s(0), s(1)]]);
        // char = (x-1)^2 = 1 - 2x + x^2
        assert_eq!(m.char_poly(), vec![s(1), s(-2), s(1)]);
        assert_eq!(m.min_poly(), vec![s(1), s(-2), s(1)]);
        let id = Matrix::<Scalar>::identity(3);
        assert_eq!(id.min_poly(), vec![s(-1), s(1)]);
    }

    #[test]
    fn sylvester_similarity() {
        // companion of (x-1)(x-2) vs diag(1,2)
        let p = Matrix::from_rows(vec![vec![s(0), s(-2)], vec![s(1), s(3)]]);
        let b = Matrix::from_rows(vec![vec![s(1), s(0)], vec![s(0), s(2)]]);
        let v = similarity_witness(&p, &b).unwrap();
        assert_eq!(p.mul(&v), v.mul(&b));
        assert!(!v.det().is_zero());
        // dissimilar matrices have no invertible intertwiner
        let j = Matrix::from_rows(vec![vec![s(1), s(1)], vec![s(0), s(1)]]);
        let d = Matrix::from_rows(vec![vec![s(1), s(0)], vec![s(0), s(1)]]);
        assert!(similarity_witness(&j, &d).is_none());
    }

    #[test]
    fn span_tracker() {
        let mut sp = SpanTracker::new(3);
        assert!(sp.insert(&[s(1), s(1), s(0)]));
        assert!(sp.insert(&[s(0), s(1), s(1)]));
        assert!(!sp.insert(&[s(1), s(2), s(1)]));
        assert!(sp.contains(&[s(2), s(3), s(1)]));
        assert!(!sp.contains(&[s(0), s(0), s(1)]));
    }
}
