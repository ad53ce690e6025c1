//! Polynomials over ℍ in a central variable `z`, their left and right
//! evaluations, division on either side, and spherical chains.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::quaternion::{class_tol, similar, Quaternion};

/// Relative guard on `|α_{j+1} − conj(α_j)|` for chain validation.
pub const CHAIN_GUARD: f64 = 1e-8;

/// `Σ f_j z^j`, coefficients lowest degree first with trailing zeros removed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QPoly {
    coeffs: Vec<Quaternion>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Quaternion>) -> Self {
        while coeffs.last() == Some(&Quaternion::ZERO) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Quaternion) -> Self {
        QPoly::new(vec![c])
    }

    /// `ρ_α = z − α`.
    pub fn rho(alpha: Quaternion) -> Self {
        QPoly { coeffs: vec![-alpha, Quaternion::ONE] }
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Quaternion {
        self.coeffs.get(k).copied().unwrap_or(Quaternion::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn left_scale(&self, q: Quaternion) -> Self {
        QPoly::new(self.coeffs.iter().map(|&c| q * c).collect())
    }

    pub fn right_scale(&self, q: Quaternion) -> Self {
        QPoly::new(self.coeffs.iter().map(|&c| c * q).collect())
    }

    /// `f^{e_ℓ}(α) = Σ α^j f_j`.
    pub fn eval_left(&self, alpha: Quaternion) -> Quaternion {
        self.coeffs.iter().rev().fold(Quaternion::ZERO, |acc, &c| alpha * acc + c)
    }

    /// `f^{e_r}(α) = Σ f_j α^j`.
    pub fn eval_right(&self, alpha: Quaternion) -> Quaternion {
        self.coeffs.iter().rev().fold(Quaternion::ZERO, |acc, &c| acc * alpha + c)
    }

    /// `Σ A^j f_j` for square `A`.
    pub fn eval_left_matrix(&self, a: &QMatrix) -> Result<QMatrix> {
        self.apply_left(&QMatrix::identity(a.rows()), a)
    }

    /// `Σ f_j B^j` for square `B`.
    pub fn eval_right_matrix(&self, b: &QMatrix) -> Result<QMatrix> {
        self.apply_right(&QMatrix::identity(b.rows()), b)
    }

    /// `(f·R)^{e_r}(B) = Σ f_j R B^j`.
    pub fn apply_right(&self, r: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
        check_square(b)?;
        if r.cols() != b.rows() {
            return Err(Error::DimensionMismatch(format!(
                "R has {} columns, B is {}x{}",
                r.cols(),
                b.rows(),
                b.cols()
            )));
        }
        let mut acc = QMatrix::zeros(r.rows(), r.cols());
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * b) + &r.left_scale(c);
        }
        Ok(acc)
    }

    /// `(R·f)^{e_ℓ}(A) = Σ A^j R f_j`.
    pub fn apply_left(&self, r: &QMatrix, a: &QMatrix) -> Result<QMatrix> {
        check_square(a)?;
        if r.rows() != a.cols() {
            return Err(Error::DimensionMismatch(format!("R has {} rows, A is {}x{}", r.rows(), a.rows(), a.cols())));
        }
        let mut acc = QMatrix::zeros(r.rows(), r.cols());
        for &c in self.coeffs.iter().rev() {
            acc = &(a * &acc) + &r.right_scale(c);
        }
        Ok(acc)
    }

    /// `f = q·d + r` with `deg r < deg d`.
    pub fn divmod_right(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        self.divmod(d, false)
    }

    /// `f = d·q + r` with `deg r < deg d`.
    pub fn divmod_left(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        self.divmod(d, true)
    }

    fn divmod(&self, d: &QPoly, divisor_on_left: bool) -> Result<(QPoly, QPoly)> {
        let dd = d.degree().ok_or(Error::ZeroDivisor)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Quaternion::ZERO; rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = *rem.last().expect("non-empty remainder");
            let shift = rem.len() - 1 - dd;
            let t = if divisor_on_left { lead_inv * top } else { top * lead_inv };
            quot[shift] = t;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                let prod = if divisor_on_left { dc * t } else { t * dc };
                rem[i + shift] -= prod;
            }
            rem.pop();
        }
        Ok((QPoly::new(quot), QPoly::new(rem)))
    }
}

fn check_square(m: &QMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())))
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..len).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..len).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

/// `(fg)_i = Σ_{k+j=i} f_k g_j`.
impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Quaternion::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[k + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

/// `z² − 2Re(α)·z + |α|²`; vanishes exactly on the class of `α`.
pub fn class_poly(alpha: Quaternion) -> QPoly {
    QPoly::new(vec![Quaternion::real(alpha.norm_sqr()), Quaternion::real(-2.0 * alpha.re()), Quaternion::ONE])
}

/// Characteristic polynomial of the non-real class `[α]`.
pub fn char_poly(alpha: Quaternion, tol: f64) -> Result<QPoly> {
    if alpha.is_real(tol * (1.0 + alpha.abs())) {
        return Err(Error::RealClass(alpha));
    }
    Ok(class_poly(alpha))
}

/// Polynomial with `rows × cols` quaternion matrix coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatPoly {
    rows: usize,
    cols: usize,
    coeffs: Vec<QMatrix>,
}

impl QMatPoly {
    pub fn new(rows: usize, cols: usize, coeffs: Vec<QMatrix>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| c.shape() != (rows, cols)) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient {}x{} in a {rows}x{cols} polynomial",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(QMatPoly { rows, cols, coeffs })
    }

    pub fn coeffs(&self) -> &[QMatrix] {
        &self.coeffs
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn mul(&self, o: &QMatPoly) -> Result<QMatPoly> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} polynomial times {}x{} polynomial",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let len = (self.coeffs.len() + o.coeffs.len()).saturating_sub(1);
        let mut out = vec![QMatrix::zeros(self.rows, o.cols); len];
        for (k, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[k + j] = &out[k + j] + &(a * b);
            }
        }
        QMatPoly::new(self.rows, o.cols, out)
    }

    /// `f·M` for a constant matrix `M`.
    pub fn mul_const_right(&self, m: &QMatrix) -> Result<QMatPoly> {
        let coeffs = self.coeffs.iter().map(|c| c.matmul(m)).collect::<Result<Vec<_>>>()?;
        QMatPoly::new(self.rows, m.cols(), coeffs)
    }

    /// `Σ F_j B^j`.
    pub fn eval_right(&self, b: &QMatrix) -> Result<QMatrix> {
        check_square(b)?;
        if b.rows() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "B is {}x{}, polynomial has {} columns",
                b.rows(),
                b.cols(),
                self.cols
            )));
        }
        let mut acc = QMatrix::zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * b) + c;
        }
        Ok(acc)
    }

    /// `Σ A^j F_j`.
    pub fn eval_left(&self, a: &QMatrix) -> Result<QMatrix> {
        check_square(a)?;
        if a.cols() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{}, polynomial has {} rows",
                a.rows(),
                a.cols(),
                self.rows
            )));
        }
        let mut acc = QMatrix::zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = &(a * &acc) + c;
        }
        Ok(acc)
    }
}

/// `‖(fg)^{e_r}(B) − (f·g^{e_r}(B))^{e_r}(B)‖_F`, which vanishes identically.
pub fn compose_eval_identity_check(f: &QMatPoly, g: &QMatPoly, b: &QMatrix) -> Result<f64> {
    let lhs = f.mul(g)?.eval_right(b)?;
    let rhs = f.mul_const_right(&g.eval_right(b)?)?.eval_right(b)?;
    Ok((&lhs - &rhs).frobenius_norm())
}

/// The row `D` with `(ρ_α D)^{e_r}(B) = D B − α D = M`, computed as
/// `(M B − ᾱ M)·𝒳_{[α]}(B)⁻¹`.
pub fn solve_linear_row(alpha: Quaternion, m: &QMatrix, b: &QMatrix, tol: f64) -> Result<QMatrix> {
    let w = class_poly(alpha)
        .eval_right_matrix(b)?
        .inverse(tol)
        .map_err(|_| Error::SpectraOverlap(format!("class of {alpha} meets the right spectrum of B")))?;
    let lhs = QPoly::rho(alpha.conj()).apply_right(m, b)?;
    lhs.matmul(&w)
}

/// Spherical chain `(α₁, …, αₙ)`: non-real, pairwise similar, and
/// `α_{j+1} ≠ conj(α_j)` for consecutive entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalChain {
    elems: Vec<Quaternion>,
}

impl SphericalChain {
    pub fn new(elems: Vec<Quaternion>, tol: f64) -> Result<Self> {
        let first = *elems.first().ok_or_else(|| Error::InvalidChain { index: 0, reason: "empty chain".into() })?;
        let scale = 1.0 + first.abs();
        for (index, &e) in elems.iter().enumerate() {
            if !e.is_finite() {
                return Err(Error::InvalidChain { index, reason: "non-finite entry".into() });
            }
            if e.is_real(tol * scale) {
                return Err(Error::InvalidChain { index, reason: format!("{e} is real") });
            }
            if !similar(first, e, class_tol(tol, first, e)) {
                return Err(Error::InvalidChain { index, reason: format!("{e} is not similar to {first}") });
            }
        }
        for index in 0..elems.len().saturating_sub(1) {
            let gap = (elems[index + 1] - elems[index].conj()).abs();
            if gap <= CHAIN_GUARD * scale {
                return Err(Error::DegenerateChain { index, gap });
            }
        }
        Ok(SphericalChain { elems })
    }

    pub fn constant(alpha: Quaternion, n: usize, tol: f64) -> Result<Self> {
        Self::new(vec![alpha; n], tol)
    }

    pub fn elems(&self) -> &[Quaternion] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn first(&self) -> Quaternion {
        self.elems[0]
    }

    pub fn last(&self) -> Quaternion {
        self.elems[self.elems.len() - 1]
    }

    /// `Re + |Im|·i` of the common class.
    pub fn class_representative(&self) -> Quaternion {
        self.elems[0].class_representative()
    }

    /// True when every entry is the same quaternion.
    pub fn is_constant(&self) -> bool {
        self.elems.iter().all(|&e| e == self.elems[0])
    }

    /// Smallest `|α_{j+1} − conj(α_j)|`, or infinity for a single element.
    pub fn min_gap(&self) -> f64 {
        self.elems.windows(2).map(|w| (w[1] - w[0].conj()).abs()).fold(f64::INFINITY, f64::min)
    }
}
