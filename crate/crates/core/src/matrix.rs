//! Dense quaternion matrices, the complex representation `φ` and its left
//! inverse `ψ`, structured builders and the regular/singular classification
//! of a pair `(A, B)`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{rref, CMatrix};
use crate::oracle::build_lift;
use crate::poly::SphericalChain;
use crate::quaternion::{similar, Quaternion};

/// Row-major `rows × cols` quaternion matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

/// Which triangle a chain matrix occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Chain on the diagonal, ones on the subdiagonal.
    Lower,
    /// Transpose of [`Orientation::Lower`].
    Upper,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Quaternion::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Quaternion::ONE; n])
    }

    pub fn diagonal(diag: &[Quaternion]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(QMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMatrix { rows, cols, data }
    }

    /// `1 × 1` matrix.
    pub fn scalar(q: Quaternion) -> Self {
        QMatrix { rows: 1, cols: 1, data: vec![q] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    /// Entry `(i, j)`, or zero outside the matrix (signed indices allowed).
    pub fn get_or_zero(&self, i: isize, j: isize) -> Quaternion {
        if i < 0 || j < 0 || i as usize >= self.rows || j as usize >= self.cols {
            Quaternion::ZERO
        } else {
            self[(i as usize, j as usize)]
        }
    }

    pub fn row(&self, i: usize) -> QMatrix {
        QMatrix { rows: 1, cols: self.cols, data: self.data[i * self.cols..(i + 1) * self.cols].to_vec() }
    }

    pub fn col(&self, j: usize) -> QMatrix {
        QMatrix::from_fn(self.rows, 1, |i, _| self[(i, j)])
    }

    pub fn set_row(&mut self, i: usize, row: &QMatrix) {
        assert_eq!(row.shape(), (1, self.cols), "row shape");
        self.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(&row.data);
    }

    pub fn set_col(&mut self, j: usize, col: &QMatrix) {
        assert_eq!(col.shape(), (self.rows, 1), "column shape");
        for i in 0..self.rows {
            self[(i, j)] = col.data[i];
        }
    }

    pub fn matmul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Quaternion::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matadd(&self, other: &QMatrix) -> Result<QMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn matsub(&self, other: &QMatrix) -> Result<QMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &QMatrix, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> Result<QMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(QMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f(a)).collect() }
    }

    /// `q·M`.
    pub fn left_scale(&self, q: Quaternion) -> QMatrix {
        self.map(|a| q * a)
    }

    /// `M·q`.
    pub fn right_scale(&self, q: Quaternion) -> QMatrix {
        self.map(|a| a * q)
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }

    pub fn powi(&self, k: u32) -> QMatrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = QMatrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Moves every entry `down` rows and `right` columns, filling with zeros.
    /// Equals `F^down · M · (Fᵀ)^right` with `F` the subdiagonal shift.
    pub fn shifted(&self, down: usize, right: usize) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| {
            if i >= down && j >= right {
                self[(i - down, j - right)]
            } else {
                Quaternion::ZERO
            }
        })
    }

    /// Inverse by Gauss–Jordan elimination with row operations applied from
    /// the left.
    pub fn inverse(&self, tol: f64) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("inverse of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let threshold = tol * (1.0 + self.max_abs());
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let p = (col..n)
                .max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))
                .expect("non-empty pivot range");
            let pivot = a[(p, col)].abs();
            if pivot.is_nan() || pivot <= threshold {
                return Err(Error::SingularMatrix);
            }
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pinv = a[(col, col)].inv()?;
            for j in 0..n {
                a[(col, j)] = pinv * a[(col, j)];
                inv[(col, j)] = pinv * inv[(col, j)];
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == Quaternion::ZERO {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= f * ac;
                    inv[(r, j)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Entries flattened to reals, four per entry, row-major.
    pub fn to_real_vec(&self) -> Vec<f64> {
        self.data.iter().flat_map(|q| q.to_array()).collect()
    }

    pub fn from_real_vec(rows: usize, cols: usize, v: &[f64]) -> Result<QMatrix> {
        if v.len() != 4 * rows * cols {
            return Err(Error::DimensionMismatch(format!("{} reals for a {rows}x{cols} matrix", v.len())));
        }
        Ok(QMatrix { rows, cols, data: v.chunks_exact(4).map(|c| Quaternion::new(c[0], c[1], c[2], c[3])).collect() })
    }

    pub fn is_lower_triangular(&self, tol: f64) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].abs() <= tol))
    }

    pub fn is_upper_triangular(&self, tol: f64) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)].abs() <= tol))
    }

    pub fn diag(&self) -> Vec<Quaternion> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// The diagonal when `self` is lower two-diagonal with unit subdiagonal
    /// (the shape `𝒥_𝛂` of a chain matrix), within `tol`.
    pub fn lower_chain_diagonal(&self, tol: f64) -> Option<Vec<Quaternion>> {
        if !self.is_square() {
            return None;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expected = if i == j + 1 {
                    Some(Quaternion::ONE)
                } else if i == j {
                    None
                } else {
                    Some(Quaternion::ZERO)
                };
                if let Some(e) = expected {
                    if (self[(i, j)] - e).abs() > tol {
                        return None;
                    }
                }
            }
        }
        Some(self.diag())
    }

    /// Like [`QMatrix::lower_chain_diagonal`] for the transposed shape.
    pub fn upper_chain_diagonal(&self, tol: f64) -> Option<Vec<Quaternion>> {
        self.transpose().lower_chain_diagonal(tol)
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Panics on non-conforming shapes; use [`QMatrix::matmul`] for a checked
/// product.
impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        self.matmul(o).expect("conforming shapes")
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, o: &QMatrix) -> QMatrix {
        self.matadd(o).expect("equal shapes")
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, o: &QMatrix) -> QMatrix {
        self.matsub(o).expect("equal shapes")
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.map(|a| -a)
    }
}

/// `‖A X − X B − C‖_F`.
pub fn sylvester_residual(a: &QMatrix, b: &QMatrix, c: &QMatrix, x: &QMatrix) -> f64 {
    (&(&(a * x) - &(x * b)) - c).frobenius_norm()
}

/// Scale for judging a residual of `A X − X B = C`:
/// `1 + ‖C‖_F + (‖A‖_F + ‖B‖_F)·‖X‖_F`.
pub fn residual_scale(a: &QMatrix, b: &QMatrix, c: &QMatrix, x: &QMatrix) -> f64 {
    1.0 + c.frobenius_norm() + (a.frobenius_norm() + b.frobenius_norm()) * x.frobenius_norm()
}

/// Complex representation: writing `M = M₁ + M₂·j` with complex `M₁, M₂`,
/// returns `[[M₁, M₂], [−conj(M₂), conj(M₁)]]`.
pub fn phi(m: &QMatrix) -> CMatrix {
    let (n, k) = m.shape();
    CMatrix::from_fn(2 * n, 2 * k, |i, j| {
        let q = m[(i % n, j % k)];
        let a1 = Complex64::new(q.w, q.x);
        let a2 = Complex64::new(q.y, q.z);
        match (i < n, j < k) {
            (true, true) => a1,
            (true, false) => a2,
            (false, true) => -a2.conj(),
            (false, false) => a1.conj(),
        }
    })
}

/// Left inverse of [`phi`]: `(Y₁₁ + conj Y₂₂)/2 + ((Y₁₂ − conj Y₂₁)/2)·j`.
pub fn psi(y: &CMatrix) -> Result<QMatrix> {
    if !y.rows().is_multiple_of(2) || !y.cols().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!("psi of a {}x{} matrix", y.rows(), y.cols())));
    }
    let (n, k) = (y.rows() / 2, y.cols() / 2);
    Ok(QMatrix::from_fn(n, k, |i, j| {
        let q1 = (y[(i, j)] + y[(i + n, j + k)].conj()) / 2.0;
        let q2 = (y[(i, j + k)] - y[(i + n, j)].conj()) / 2.0;
        Quaternion::new(q1.re, q1.im, q2.re, q2.im)
    }))
}

/// `𝒥_n(α) = αI + F_n`, with `F_n` the subdiagonal shift.
pub fn jordan_block(n: usize, alpha: Quaternion) -> QMatrix {
    two_diagonal(&vec![alpha; n], Orientation::Lower)
}

/// Diagonal `diag` with ones just below (lower) or above (upper) it.
pub fn two_diagonal(diag: &[Quaternion], orientation: Orientation) -> QMatrix {
    let mut m = QMatrix::diagonal(diag);
    for i in 1..diag.len() {
        match orientation {
            Orientation::Lower => m[(i, i - 1)] = Quaternion::ONE,
            Orientation::Upper => m[(i - 1, i)] = Quaternion::ONE,
        }
    }
    m
}

/// `𝒥_𝛂` (lower) or `𝒥_𝛂ᵀ` (upper) for a spherical chain.
pub fn chain_matrix(chain: &SphericalChain, orientation: Orientation) -> QMatrix {
    two_diagonal(chain.elems(), orientation)
}

/// True iff `X ↦ AX − XB` is invertible, decided by the rank of its real
/// `4nm × 4nm` representation.
pub fn uniqueness_check(a: &QMatrix, b: &QMatrix, tol: f64) -> Result<bool> {
    let lift = build_lift(a, b)?;
    let r = rref(lift.matrix(), tol);
    Ok(r.rank() == lift.matrix().cols())
}

/// Distinct conjugacy classes of the diagonal of a triangular matrix, each as
/// `Re + |Im|·i`.
pub fn right_spectrum_triangular(a: &QMatrix, tol: f64) -> Result<Vec<Quaternion>> {
    let off = tol * (1.0 + a.max_abs());
    if !(a.is_lower_triangular(off) || a.is_upper_triangular(off)) {
        return Err(Error::UnsupportedShape("matrix is not triangular".into()));
    }
    let mut classes: Vec<Quaternion> = Vec::new();
    for d in a.diag() {
        let rep = d.class_representative();
        let t = tol * (1.0 + rep.abs());
        if !classes.iter().any(|&c| similar(c, rep, t)) {
            classes.push(rep);
        }
    }
    Ok(classes)
}
