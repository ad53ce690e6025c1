//! Small dense linear algebra over `f64` and `Complex64`: LU with partial
//! pivoting, reduced row echelon form, nullspaces, Householder least squares
//! and characteristic polynomial coefficients.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Field operations needed by the dense routines.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn modulus(self) -> f64;
    fn from_f64(v: f64) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn from_f64(v: f64) -> Self {
        v
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RealMatrix = Dense<f64>;
pub type CMatrix = Dense<Complex64>;

impl<T: Scalar> Dense<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Dense { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Dense { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "matvec dimension");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a * b)).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Dense { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: T) -> Self {
        Dense { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * s).collect() }
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.modulus().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.modulus()).fold(0.0, f64::max)
    }

    /// Largest Euclidean row norm.
    pub fn max_row_norm(&self) -> f64 {
        (0..self.rows).map(|i| self.row(i).iter().map(|a| a.modulus().powi(2)).sum::<f64>().sqrt()).fold(0.0, f64::max)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (other.rows, other.cols);
        Self::from_fn(self.rows * r, self.cols * c, |i, j| self[(i / r, j / c)] * other[(i % r, j % c)])
    }
}

impl<T> std::ops::Index<(usize, usize)> for Dense<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Dense<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl CMatrix {
    pub fn conj(&self) -> Self {
        Dense { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.conj()).collect() }
    }
}

/// LU factorization `P·A = L·U` with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    n: usize,
    lu: Dense<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    /// Fails with [`Error::SingularMatrix`] when a pivot falls to
    /// `tol·(1 + largest row norm)` or below.
    pub fn factor(a: &Dense<T>, tol: f64) -> Result<Self> {
        if a.rows != a.cols {
            return Err(Error::DimensionMismatch(format!("LU of a {}x{} matrix", a.rows, a.cols)));
        }
        let n = a.rows;
        let threshold = tol * (1.0 + a.max_row_norm());
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let p = (col..n)
                .max_by(|&i, &j| lu[(i, col)].modulus().total_cmp(&lu[(j, col)].modulus()))
                .expect("non-empty pivot range");
            let pivot = lu[(p, col)].modulus();
            if pivot.is_nan() || pivot <= threshold {
                return Err(Error::SingularMatrix);
            }
            if p != col {
                perm.swap(p, col);
                for j in 0..n {
                    let t = lu[(p, j)];
                    lu[(p, j)] = lu[(col, j)];
                    lu[(col, j)] = t;
                }
            }
            let pivot = lu[(col, col)];
            for i in col + 1..n {
                let f = lu[(i, col)] / pivot;
                lu[(i, col)] = f;
                if f == T::zero() {
                    continue;
                }
                for j in col + 1..n {
                    lu[(i, j)] = lu[(i, j)] - f * lu[(col, j)];
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        assert_eq!(b.len(), self.n, "LU solve dimension");
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] = x[i] - self.lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] = x[i] - self.lu[(i, k)] * x[k];
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A·X = B` column by column.
    pub fn solve_matrix(&self, b: &Dense<T>) -> Dense<T> {
        let mut out = Dense::zeros(b.rows, b.cols);
        for j in 0..b.cols {
            let col: Vec<T> = (0..b.rows).map(|i| b[(i, j)]).collect();
            for (i, v) in self.solve(&col).into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    pub fn inverse(&self) -> Dense<T> {
        self.solve_matrix(&Dense::identity(self.n))
    }
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: RealMatrix,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination with partial pivoting. Entries at or below
/// `tol·(1 + largest initial row norm)` are treated as zero.
pub fn rref(a: &RealMatrix, tol: f64) -> Rref {
    let threshold = tol * (1.0 + a.max_row_norm());
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let p = (row..m.rows)
            .max_by(|&i, &j| m[(i, col)].abs().total_cmp(&m[(j, col)].abs()))
            .expect("non-empty pivot range");
        if m[(p, col)].abs() <= threshold {
            for i in row..m.rows {
                m[(i, col)] = 0.0;
            }
            continue;
        }
        if p != row {
            for j in 0..m.cols {
                let t = m[(p, j)];
                m[(p, j)] = m[(row, j)];
                m[(row, j)] = t;
            }
        }
        let pivot = m[(row, col)];
        for j in col..m.cols {
            m[(row, j)] /= pivot;
        }
        for i in 0..m.rows {
            if i == row {
                continue;
            }
            let f = m[(i, col)];
            if f == 0.0 {
                continue;
            }
            for j in col..m.cols {
                m[(i, j)] -= f * m[(row, j)];
            }
            m[(i, col)] = 0.0;
        }
        pivots.push(col);
        row += 1;
    }
    Rref { reduced: m, pivots }
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Nullspace basis of the first `n` columns, one vector per free column.
    pub fn nullspace(&self, n: usize) -> Vec<Vec<f64>> {
        let pivots: Vec<usize> = self.pivots.iter().copied().filter(|&p| p < n).collect();
        (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0.0; n];
                v[free] = 1.0;
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -self.reduced[(r, free)];
                }
                v
            })
            .collect()
    }
}

/// Orthonormal basis of the span of `vectors` by modified Gram–Schmidt with
/// reorthogonalization; vectors that fall below `tol` relative to their
/// original length are dropped.
pub fn orthonormalize(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let original = norm(v);
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let d = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= d * qi;
                }
            }
        }
        let len = norm(&w);
        if len > tol * original.max(f64::MIN_POSITIVE) {
            out.push(w.into_iter().map(|x| x / len).collect());
        }
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Least-squares solution of `A x ≈ b` by Householder QR. Columns whose
/// diagonal entry in `R` is negligible get a zero coefficient. Returns the
/// solution and the residual norm `‖A x − b‖`.
pub fn least_squares(a: &RealMatrix, b: &[f64]) -> (Vec<f64>, f64) {
    assert_eq!(a.rows, b.len(), "least squares dimension");
    let (rows, cols) = (a.rows, a.cols);
    let mut r = a.clone();
    let mut y = b.to_vec();
    let steps = cols.min(rows);
    for k in 0..steps {
        let alpha_sq: f64 = (k..rows).map(|i| r[(i, k)].powi(2)).sum();
        let alpha = alpha_sq.sqrt();
        if alpha == 0.0 {
            continue;
        }
        let sign = if r[(k, k)] >= 0.0 { 1.0 } else { -1.0 };
        let mut v: Vec<f64> = (k..rows).map(|i| r[(i, k)]).collect();
        v[0] += sign * alpha;
        let vnorm_sq = dot(&v, &v);
        if vnorm_sq == 0.0 {
            continue;
        }
        for j in k..cols {
            let s: f64 = (k..rows).map(|i| v[i - k] * r[(i, j)]).sum::<f64>() * 2.0 / vnorm_sq;
            for i in k..rows {
                r[(i, j)] -= s * v[i - k];
            }
        }
        let s: f64 = (k..rows).map(|i| v[i - k] * y[i]).sum::<f64>() * 2.0 / vnorm_sq;
        for i in k..rows {
            y[i] -= s * v[i - k];
        }
    }
    let diag_max = (0..steps).map(|k| r[(k, k)].abs()).fold(0.0, f64::max);
    let mut x = vec![0.0; cols];
    for k in (0..steps).rev() {
        if r[(k, k)].abs() <= 1e-13 * diag_max {
            continue;
        }
        let s: f64 = (k + 1..cols).map(|j| r[(k, j)] * x[j]).sum();
        x[k] = (y[k] - s) / r[(k, k)];
    }
    let fitted = a.matvec(&x);
    let residual = fitted.iter().zip(b).map(|(f, t)| (f - t).powi(2)).sum::<f64>().sqrt();
    (x, residual)
}

/// Coefficients `c_0, …, c_n` (lowest degree first, `c_n = 1`) of
/// `det(λI − A)` by the Faddeev–LeVerrier recurrence.
pub fn char_poly_coefficients<T: Scalar>(a: &Dense<T>) -> Vec<T> {
    assert_eq!(a.rows, a.cols, "characteristic polynomial of a non-square matrix");
    let n = a.rows;
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut m = Dense::zeros(n, n);
    let id = Dense::identity(n);
    for k in 1..=n {
        m = a.matmul(&m).expect("square").add(&id.scale(coeffs[n + 1 - k])).expect("square");
        let am = a.matmul(&m).expect("square");
        coeffs[n - k] = -am.trace() / T::from_f64(k as f64);
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::rng;
    use rand::rngs::StdRng;
    use rand::Rng;

    fn random(rng: &mut StdRng, r: usize, c: usize) -> RealMatrix {
        RealMatrix::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn lu_solves_random_systems() {
        let mut rng = rng(3);
        for n in 1..12 {
            let a = random(&mut rng, n, n);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let b = a.matvec(&x);
            let got = Lu::factor(&a, 1e-14).unwrap().solve(&b);
            for (g, w) in got.iter().zip(&x) {
                assert!((g - w).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn lu_rejects_singular() {
        let a = RealMatrix::from_vec(2, 2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert_eq!(Lu::factor(&a, 1e-12).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn complex_inverse() {
        let a = CMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new(1.0, 1.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(3.0, 0.0),
                Complex64::new(1.0, -1.0),
            ],
        )
        .unwrap();
        let inv = Lu::factor(&a, 1e-14).unwrap().inverse();
        let id = a.matmul(&inv).unwrap();
        assert!(id.sub(&CMatrix::identity(2)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn rref_rank_and_nullspace() {
        let mut rng = rng(5);
        let u = random(&mut rng, 7, 3);
        let v = random(&mut rng, 3, 6);
        let a = u.matmul(&v).unwrap();
        let r = rref(&a, 1e-10);
        assert_eq!(r.rank(), 3);
        let ns = r.nullspace(6);
        assert_eq!(ns.len(), 3);
        for z in ns {
            assert!(a.matvec(&z).iter().all(|x| x.abs() < 1e-10));
        }
    }

    #[test]
    fn least_squares_matches_normal_equations() {
        let mut rng = rng(8);
        let a = random(&mut rng, 9, 4);
        let b: Vec<f64> = (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (x, res) = least_squares(&a, &b);
        let at = a.transpose();
        let ata = at.matmul(&a).unwrap();
        let atb = at.matvec(&b);
        let want = Lu::factor(&ata, 1e-14).unwrap().solve(&atb);
        for (g, w) in x.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10);
        }
        let r: Vec<f64> = a.matvec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
        assert!((norm(&r) - res).abs() < 1e-12);
    }

    #[test]
    fn char_poly_of_companion() {
        // λ³ − 6λ² + 11λ − 6 = (λ−1)(λ−2)(λ−3)
        let a = RealMatrix::from_vec(3, 3, vec![1.0, 5.0, -2.0, 0.0, 2.0, 7.0, 0.0, 0.0, 3.0]).unwrap();
        let c = char_poly_coefficients(&a);
        let want = [-6.0, 11.0, -6.0, 1.0];
        for (g, w) in c.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn orthonormalize_drops_dependent() {
        let v = vec![vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0], vec![0.0, 1.0, 1.0]];
        let q = orthonormalize(&v, 1e-10);
        assert_eq!(q.len(), 2);
        assert!(dot(&q[0], &q[1]).abs() < 1e-15);
    }
}
