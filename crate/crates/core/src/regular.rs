//! Solvers for `A X − X B = C` when the solution is unique: the complex
//! Kronecker lift, the characteristic-polynomial formula, closed forms for
//! Jordan blocks and two-diagonal chain matrices, row/column recursions for
//! triangular factors, and a dispatcher.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{char_poly_coefficients, CMatrix, Lu};
use crate::matrix::{phi, psi, sylvester_residual, uniqueness_check, QMatrix};
use crate::poly::{class_poly, QPoly, SphericalChain};
use crate::quaternion::{class_tol, hamilton_p, similar, Quaternion};
use crate::singular;

/// Solver selection for [`solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Lift,
    PolyFormula,
    Jordan,
    TwoDiagonal,
    /// Row recursion: the two-diagonal closed form when `A` has chain shape,
    /// the lower-triangular recursion otherwise.
    Rows,
    /// Column recursion for upper-triangular `B`.
    Cols,
}

/// The solver that produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Lift,
    PolyFormula,
    Jordan,
    TwoDiagonal,
    RowsTwoDiagonal,
    RowsLowerTriangular,
    ColsUpperTriangular,
    /// Particular solution of a solvable singular chain instance.
    Singular,
}

impl fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolveMethod::Lift => "lift",
            SolveMethod::PolyFormula => "poly_formula",
            SolveMethod::Jordan => "jordan",
            SolveMethod::TwoDiagonal => "two_diagonal",
            SolveMethod::RowsTwoDiagonal => "rows_two_diagonal",
            SolveMethod::RowsLowerTriangular => "rows_lower_tri",
            SolveMethod::ColsUpperTriangular => "cols_upper_tri",
            SolveMethod::Singular => "singular",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct RegularSolveReport {
    pub x: QMatrix,
    pub method: SolveMethod,
    /// `‖A X − X B − C‖_F`.
    pub residual: f64,
}

fn check_shapes(a: &QMatrix, b: &QMatrix, c: &QMatrix) -> Result<()> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "A and B must be square, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if c.shape() != (a.rows(), b.rows()) {
        return Err(Error::DimensionMismatch(format!(
            "C is {}x{}, expected {}x{}",
            c.rows(),
            c.cols(),
            a.rows(),
            b.rows()
        )));
    }
    Ok(())
}

fn vec_rows(m: &CMatrix) -> Vec<Complex64> {
    m.data().to_vec()
}

/// Solves `φ(A) Y − Y φ(B) = φ(C)` as the dense complex system
/// `(φ(A) ⊗ I − I ⊗ φ(B)ᵀ)·vec(Y) = vec(φ(C))` (row-major `vec`), then
/// returns `ψ(Y)`.
pub fn solve_lift(a: &QMatrix, b: &QMatrix, c: &QMatrix, tol: f64) -> Result<QMatrix> {
    check_shapes(a, b, c)?;
    let (pa, pb) = (phi(a), phi(b));
    let k = pa.kron(&CMatrix::identity(pb.rows())).sub(&CMatrix::identity(pa.rows()).kron(&pb.transpose()))?;
    let lu = Lu::factor(&k, tol).map_err(|_| Error::SpectraOverlap("lifted operator is singular".into()))?;
    let y = lu.solve(&vec_rows(&phi(c)));
    psi(&CMatrix::from_vec(pa.rows(), pb.rows(), y)?)
}

/// Real coefficients `a_0, …, a_{2n}` of `det(λI − φ(A))`.
pub fn lift_char_coefficients(a: &QMatrix) -> Vec<f64> {
    char_poly_coefficients(&phi(a)).into_iter().map(|z| z.re).collect()
}

/// `X = −(Σ_k a_k Σ_{j<k} A^j C B^{k−1−j})·p(B)⁻¹` with `p(λ) = Σ a_k λ^k`
/// the characteristic polynomial of `φ(A)`; follows from `p(A) = 0`.
pub fn solve_poly_formula(a: &QMatrix, b: &QMatrix, c: &QMatrix, tol: f64) -> Result<QMatrix> {
    check_shapes(a, b, c)?;
    let coeffs = lift_char_coefficients(a);
    let m = b.rows();
    let mut t = c.clone();
    let mut c_bk = c.clone();
    let mut numerator = QMatrix::zeros(c.rows(), c.cols());
    let mut b_pow = QMatrix::identity(m);
    let mut p_b = QMatrix::identity(m).right_scale(Quaternion::real(coeffs[0]));
    for (k, &ak) in coeffs.iter().enumerate().skip(1) {
        numerator = &numerator + &t.right_scale(Quaternion::real(ak));
        b_pow = &b_pow * b;
        p_b = &p_b + &b_pow.right_scale(Quaternion::real(ak));
        if k + 1 < coeffs.len() {
            c_bk = &c_bk * b;
            t = &(a * &t) + &c_bk;
        }
    }
    let p_inv = p_b
        .inverse(tol)
        .map_err(|_| Error::SpectraOverlap("characteristic polynomial of A is singular at B".into()))?;
    Ok(-&(&numerator * &p_inv))
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as f64
}

/// Closed form for `𝒥_n(α) X − X 𝒥_m(β)ᵀ = C` with `α ≁ β`:
///
/// `X = Σ_k Σ_i (−1)^{k+i} C(k+1, i) ᾱ^{k−i+1} M_k β^i P^{−k−1}`,
/// `M_k = Σ_ℓ (−1)^ℓ C(k, ℓ) F^{k−ℓ} C (Fᵀ)^ℓ`, `P = P_{α,β}`.
///
/// At `n = m = 1` the arithmetic reduces exactly to `(ᾱc − cβ)·P⁻¹`.
pub fn solve_jordan(alpha: Quaternion, n: usize, beta: Quaternion, m: usize, c: &QMatrix, tol: f64) -> Result<QMatrix> {
    if c.shape() != (n, m) {
        return Err(Error::DimensionMismatch(format!("C is {}x{}, expected {n}x{m}", c.rows(), c.cols())));
    }
    if similar(alpha, beta, class_tol(tol, alpha, beta)) {
        return Err(Error::SpectraOverlap(format!("{alpha} and {beta} are similar")));
    }
    let p_inv = hamilton_p(alpha, beta).inv()?;
    let alpha_bar = alpha.conj();
    let mut x = QMatrix::zeros(n, m);
    let mut p_pow = Quaternion::ONE;
    for k in 0..(n + m - 1) {
        p_pow *= p_inv;
        let mut mk = QMatrix::zeros(n, m);
        for l in 0..=k {
            if k - l >= n || l >= m {
                continue;
            }
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            let coeff = Quaternion::real(sign * binomial(k, l));
            mk = &mk + &c.shifted(k - l, l).right_scale(coeff);
        }
        let mut sum = QMatrix::zeros(n, m);
        for i in 0..=k + 1 {
            let sign = if (k + i) % 2 == 0 { 1.0 } else { -1.0 };
            let coeff = sign * binomial(k + 1, i);
            let left = alpha_bar.powi((k + 1 - i) as u32);
            let right = beta.powi(i as u32);
            sum = &sum + &mk.map(|e| (left * e * right) * coeff);
        }
        x = &x + &sum.right_scale(p_pow);
    }
    Ok(x)
}

/// `𝒳_{[α]}(B)⁻¹`, or a spectra-overlap error when `[α]` meets `σ_r(B)`.
fn class_inverse(alpha: Quaternion, b: &QMatrix, tol: f64) -> Result<QMatrix> {
    class_poly(alpha)
        .eval_right_matrix(b)?
        .inverse(tol)
        .map_err(|_| Error::SpectraOverlap(format!("class of {alpha} meets the right spectrum of B")))
}

/// `𝒥_𝛂 X − X B = C` for a chain in one class `V`:
/// `X = Σ_{k<n} Ã^k (A′C − CB) 𝒳_V(B)^{−k−1}` with `A′ = diag(ᾱ) − F` and
/// `Ã` carrying `α_i − ᾱ_{i+1}` on the subdiagonal and ones below it.
pub fn solve_two_diagonal(chain: &SphericalChain, b: &QMatrix, c: &QMatrix, tol: f64) -> Result<QMatrix> {
    let alphas = chain.elems();
    let n = alphas.len();
    if !b.is_square() || c.shape() != (n, b.rows()) {
        return Err(Error::DimensionMismatch(format!("C is {}x{}, expected {n}x{}", c.rows(), c.cols(), b.rows())));
    }
    let w = class_inverse(alphas[0], b, tol)?;
    let mut a_prime = QMatrix::diagonal(&alphas.iter().map(|a| a.conj()).collect::<Vec<_>>());
    let mut a_tilde = QMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        a_prime[(i + 1, i)] = -Quaternion::ONE;
        a_tilde[(i + 1, i)] = alphas[i] - alphas[i + 1].conj();
        if i + 2 < n {
            a_tilde[(i + 2, i)] = Quaternion::ONE;
        }
    }
    let mut term = &(&(&a_prime * c) - &(c * b)) * &w;
    let mut x = term.clone();
    for _ in 1..n {
        term = &(&a_tilde * &term) * &w;
        x = &x + &term;
    }
    Ok(x)
}

/// Per-row class inverses `𝒳_{[α_i]}(B)⁻¹`, computed once per distinct class.
fn class_inverses(diag: &[Quaternion], b: &QMatrix, tol: f64) -> Result<Vec<QMatrix>> {
    let mut cache: Vec<(Quaternion, QMatrix)> = Vec::new();
    let mut out = Vec::with_capacity(diag.len());
    for &a in diag {
        let hit = cache.iter().find(|(r, _)| similar(*r, a, class_tol(tol, *r, a))).map(|(_, w)| w.clone());
        let w = match hit {
            Some(w) => w,
            None => {
                let w = class_inverse(a, b, tol)?;
                cache.push((a, w.clone()));
                w
            }
        };
        out.push(w);
    }
    Ok(out)
}

/// Rows of the solution of `𝒥_𝛂 X − X B = C` for a two-diagonal `𝒥_𝛂`
/// whose entries may lie in different classes:
/// `X_k = −Σ_{j≤k} (ρ_{ᾱ_k}⋯ρ_{ᾱ_j} C_j)^{e_r}(B) · W_j ⋯ W_k`,
/// `W_i = 𝒳_{[α_i]}(B)⁻¹`.
pub fn solve_rows_two_diagonal(alphas: &[Quaternion], b: &QMatrix, c: &QMatrix, tol: f64) -> Result<QMatrix> {
    let n = alphas.len();
    if !b.is_square() || c.shape() != (n, b.rows()) {
        return Err(Error::DimensionMismatch(format!("C is {}x{}, expected {n}x{}", c.rows(), c.cols(), b.rows())));
    }
    let w = class_inverses(alphas, b, tol)?;
    let mut x = QMatrix::zeros(n, b.rows());
    for k in 0..n {
        let mut row = QMatrix::zeros(1, b.rows());
        // Walk j downward so the polynomial and the W product grow by one
        // factor per step.
        let mut poly = QPoly::constant(Quaternion::ONE);
        let mut w_prod = QMatrix::identity(b.rows());
        for j in (0..=k).rev() {
            poly = &poly * &QPoly::rho(alphas[j].conj());
            w_prod = &w[j] * &w_prod;
            let term = &poly.apply_right(&c.row(j), b)? * &w_prod;
            row = &row - &term;
        }
        x.set_row(k, &row);
    }
    Ok(x)
}

/// Row recursion for lower-triangular `A`:
/// `X_k = (ρ_{ᾱ_kk}(−C_k + Σ_{j<k} a_kj X_j))^{e_r}(B)·𝒳_{[a_kk]}(B)⁻¹`.
pub fn solve_lower_triangular(a: &QMatrix, b: &QMatrix, c: &QMatrix, tol: f64) -> Result<QMatrix> {
    check_shapes(a, b, c)?;
    if !a.is_lower_triangular(tol * (1.0 + a.max_abs())) {
        return Err(Error::MethodNotApplicable { method: "rows".into(), reason: "A is not lower triangular".into() });
    }
    let n = a.rows();
    let w = class_inverses(&a.diag(), b, tol)?;
    let mut x = QMatrix::zeros(n, b.rows());
    for k in 0..n {
        let mut r = -&c.row(k);
        for j in 0..k {
            r = &r + &x.row(j).left_scale(a[(k, j)]);
        }
        let row = &QPoly::rho(a[(k, k)].conj()).apply_right(&r, b)? * &w[k];
        x.set_row(k, &row);
    }
    Ok(x)
}

/// Column recursion for upper-triangular `B`, via the row recursion on the
/// adjoint equation `B* X* − X* A* = −C*`.
pub fn solve_upper_triangular_cols(a: &QMatrix, b: &QMatrix, c: &QMatrix, tol: f64) -> Result<QMatrix> {
    check_shapes(a, b, c)?;
    if !b.is_upper_triangular(tol * (1.0 + b.max_abs())) {
        return Err(Error::MethodNotApplicable { method: "cols".into(), reason: "B is not upper triangular".into() });
    }
    let y = solve_lower_triangular(&b.adjoint(), &a.adjoint(), &(-&c.adjoint()), tol)?;
    Ok(y.adjoint())
}

/// Columns of the solution of `A X − X 𝒥_𝛃ᵀ = C` in closed form:
/// `X_k = Σ_{j≤k} W_k⋯W_j (C_j ρ_{β̄_j}⋯ρ_{β̄_k})^{e_ℓ}(A)`,
/// `W_i = 𝒳_{[β_i]}(A)⁻¹`.
pub fn solve_cols_two_diagonal(a: &QMatrix, betas: &[Quaternion], c: &QMatrix, tol: f64) -> Result<QMatrix> {
    let m = betas.len();
    if !a.is_square() || c.shape() != (a.rows(), m) {
        return Err(Error::DimensionMismatch(format!("C is {}x{}, expected {}x{m}", c.rows(), c.cols(), a.rows())));
    }
    let w = class_inverses(betas, a, tol)?;
    let mut x = QMatrix::zeros(a.rows(), m);
    for k in 0..m {
        let mut col = QMatrix::zeros(a.rows(), 1);
        let mut poly = QPoly::constant(Quaternion::ONE);
        let mut w_prod = QMatrix::identity(a.rows());
        for j in (0..=k).rev() {
            poly = &QPoly::rho(betas[j].conj()) * &poly;
            w_prod = &w_prod * &w[j];
            col = &col + &(&w_prod * &poly.apply_left(&c.col(j), a)?);
        }
        x.set_col(k, &col);
    }
    Ok(x)
}

/// Constant diagonal of a Jordan-shaped matrix.
fn jordan_eigenvalue(diag: &[Quaternion], tol: f64) -> Option<Quaternion> {
    let first = *diag.first()?;
    diag.iter().all(|&d| (d - first).abs() <= tol).then_some(first)
}

fn single_class_chain(diag: &[Quaternion], tol: f64) -> Option<SphericalChain> {
    SphericalChain::new(diag.to_vec(), tol).ok()
}

/// Picks a solver, runs it and reports the residual. When `X ↦ AX − XB` is
/// singular and `A = 𝒥_𝛂`, `B = 𝒥_𝛃ᵀ` for chains in one class, returns the
/// particular solution of the singular case or [`Error::NoSolution`].
pub fn solve(a: &QMatrix, b: &QMatrix, c: &QMatrix, method: Method, tol: f64) -> Result<RegularSolveReport> {
    check_shapes(a, b, c)?;
    if !uniqueness_check(a, b, tol)? {
        return solve_singular_route(a, b, c, tol);
    }
    let shape_tol = tol * (1.0 + a.max_abs().max(b.max_abs()));
    let a_chain = a.lower_chain_diagonal(shape_tol);
    let b_chain = b.upper_chain_diagonal(shape_tol);
    let not_applicable = |m: &str, reason: &str| Error::MethodNotApplicable { method: m.into(), reason: reason.into() };

    let jordan = || -> Result<QMatrix> {
        let alpha = a_chain.as_deref().and_then(|d| jordan_eigenvalue(d, shape_tol));
        let beta = b_chain.as_deref().and_then(|d| jordan_eigenvalue(d, shape_tol));
        match (alpha, beta) {
            (Some(al), Some(be)) => solve_jordan(al, a.rows(), be, b.rows(), c, tol),
            _ => Err(not_applicable("jordan", "A and Bᵀ must be Jordan blocks")),
        }
    };
    let two_diag = || -> Result<QMatrix> {
        match a_chain.as_deref().and_then(|d| single_class_chain(d, tol)) {
            Some(chain) => solve_two_diagonal(&chain, b, c, tol),
            None => Err(not_applicable("tridiag", "A must be a chain matrix in one conjugacy class")),
        }
    };
    let rows = || -> Result<(QMatrix, SolveMethod)> {
        match a_chain.as_deref() {
            Some(d) => Ok((solve_rows_two_diagonal(d, b, c, tol)?, SolveMethod::RowsTwoDiagonal)),
            None => Ok((solve_lower_triangular(a, b, c, tol)?, SolveMethod::RowsLowerTriangular)),
        }
    };

    let (x, used) = match method {
        Method::Lift => (solve_lift(a, b, c, tol)?, SolveMethod::Lift),
        Method::PolyFormula => (solve_poly_formula(a, b, c, tol)?, SolveMethod::PolyFormula),
        Method::Jordan => (jordan()?, SolveMethod::Jordan),
        Method::TwoDiagonal => (two_diag()?, SolveMethod::TwoDiagonal),
        Method::Rows => rows()?,
        Method::Cols => (solve_upper_triangular_cols(a, b, c, tol)?, SolveMethod::ColsUpperTriangular),
        Method::Auto => {
            let lower = a.is_lower_triangular(shape_tol);
            let upper = b.is_upper_triangular(shape_tol);
            let attempts: [Attempt; 4] = [
                (a_chain.is_some() && b_chain.is_some(), &|| Ok((jordan()?, SolveMethod::Jordan))),
                (a_chain.is_some(), &|| Ok((two_diag()?, SolveMethod::TwoDiagonal))),
                (lower, &rows),
                (upper, &|| Ok((solve_upper_triangular_cols(a, b, c, tol)?, SolveMethod::ColsUpperTriangular))),
            ];
            attempts
                .iter()
                .filter(|(applies, _)| *applies)
                .find_map(|(_, run)| run().ok().filter(|(x, _)| x.is_finite()))
                .map_or_else(|| solve_lift(a, b, c, tol).map(|x| (x, SolveMethod::Lift)), Ok)?
        }
    };
    let residual = sylvester_residual(a, b, c, &x);
    Ok(RegularSolveReport { x, method: used, residual })
}

type Attempt<'a> = (bool, &'a dyn Fn() -> Result<(QMatrix, SolveMethod)>);

fn solve_singular_route(a: &QMatrix, b: &QMatrix, c: &QMatrix, tol: f64) -> Result<RegularSolveReport> {
    let shape_tol = tol * (1.0 + a.max_abs().max(b.max_abs()));
    let (Some(da), Some(db)) = (a.lower_chain_diagonal(shape_tol), b.upper_chain_diagonal(shape_tol)) else {
        return Err(Error::UnsupportedSingularShape);
    };
    let inst = singular::SingularInstance::new(da, db, c.clone(), tol).map_err(|_| Error::UnsupportedSingularShape)?;
    let x = singular::particular_solution(&inst)?;
    let residual = sylvester_residual(a, b, c, &x);
    Ok(RegularSolveReport { x, method: SolveMethod::Singular, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{jordan_block, two_diagonal, Orientation};
    use crate::oracle::oracle_solve;
    use crate::quaternion::scalar_sylvester;
    use crate::sample::{random_chain_pair_distinct, random_dissimilar_pair, random_matrix, random_quaternion, rng};

    const TOL: f64 = 1e-9;

    fn rel(a: &QMatrix, b: &QMatrix) -> f64 {
        (a - b).frobenius_norm() / (1.0 + b.frobenius_norm())
    }

    fn scale(c: &QMatrix) -> f64 {
        1.0 + c.frobenius_norm()
    }

    #[test]
    fn scalar_examples() {
        let s = |v: f64| QMatrix::scalar(Quaternion::real(v));
        let c = QMatrix::scalar(Quaternion::new(1.0, 2.0, -3.0, 0.5));
        assert_eq!(solve_lift(&s(2.0), &s(1.0), &c, TOL).unwrap(), c);
        let x = solve_poly_formula(&s(3.0), &s(1.0), &s(4.0), TOL).unwrap();
        assert!((x[(0, 0)] - Quaternion::real(2.0)).abs() < 1e-15);
        let z = QMatrix::zeros(1, 1);
        assert_eq!(solve_poly_formula(&s(3.0), &s(1.0), &z, TOL).unwrap().max_abs(), 0.0);
        assert_eq!(solve_lift(&s(3.0), &s(1.0), &z, TOL).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn lift_on_jordan_pair_matches_oracle() {
        let mut r = rng(41);
        let a = jordan_block(2, Quaternion::I);
        let b = jordan_block(2, Quaternion::new(1.0, 0.0, 1.0, 0.0)).transpose();
        let c = random_matrix(&mut r, 2, 2);
        let x = solve_lift(&a, &b, &c, TOL).unwrap();
        assert!(sylvester_residual(&a, &b, &c, &x) < 1e-10);
        let o = oracle_solve(&a, &b, &c, TOL).unwrap().x0.unwrap();
        assert!(rel(&x, &o) < 1e-10);
    }

    #[test]
    fn jordan_scalar_case_is_the_scalar_formula() {
        let mut r = rng(42);
        for _ in 0..100 {
            let (al, be) = random_dissimilar_pair(&mut r);
            let c = random_quaternion(&mut r);
            let x = solve_jordan(al, 1, be, 1, &QMatrix::scalar(c), TOL).unwrap();
            let want = (al.conj() * c - c * be) * hamilton_p(al, be).inv().unwrap();
            assert_eq!(x[(0, 0)], want);
            assert_eq!(scalar_sylvester(al, be, c, TOL), crate::quaternion::SolutionSet::Unique(want));
        }
    }

    #[test]
    fn jordan_matches_lift() {
        let mut r = rng(43);
        for n in 1..=5 {
            for m in 1..=5 {
                let (al, be) = random_dissimilar_pair(&mut r);
                let a = jordan_block(n, al);
                let b = jordan_block(m, be).transpose();
                let c = random_matrix(&mut r, n, m);
                let x = solve_jordan(al, n, be, m, &c, TOL).unwrap();
                let y = solve_lift(&a, &b, &c, TOL).unwrap();
                assert!(rel(&x, &y) < 1e-9, "n={n} m={m}: {}", rel(&x, &y));
                assert!(sylvester_residual(&a, &b, &c, &x) <= TOL * scale(&c));
            }
        }
        let z = QMatrix::zeros(3, 2);
        assert_eq!(solve_jordan(Quaternion::I, 3, Quaternion::ONE, 2, &z, TOL).unwrap().max_abs(), 0.0);
        assert!(solve_jordan(Quaternion::I, 1, Quaternion::J, 1, &QMatrix::scalar(Quaternion::ONE), TOL).is_err());
    }

    #[test]
    fn two_diagonal_solvers() {
        let mut r = rng(44);
        for n in 1..=5 {
            let (chain, beta_chain) = random_chain_pair_distinct(&mut r, n, 4);
            let a = crate::matrix::chain_matrix(&chain, Orientation::Lower);
            // B: a dense 4x4 with spectrum in the other class.
            let h = random_matrix(&mut r, 4, 4);
            let b0 = crate::matrix::chain_matrix(&beta_chain, Orientation::Upper);
            let b = &(&h.inverse(1e-12).unwrap() * &b0) * &h;
            let c = random_matrix(&mut r, n, 4);
            let x = solve_two_diagonal(&chain, &b, &c, TOL).unwrap();
            assert!(sylvester_residual(&a, &b, &c, &x) <= 1e-10 * scale(&c) * (1.0 + x.frobenius_norm()));
            let rows = solve_rows_two_diagonal(chain.elems(), &b, &c, TOL).unwrap();
            assert!(rel(&rows, &x) < 1e-9);
            let tri = solve_lower_triangular(&a, &b, &c, TOL).unwrap();
            assert!(rel(&tri, &x) < 1e-9);
            let lift = solve_lift(&a, &b, &c, TOL).unwrap();
            assert!(rel(&lift, &x) < 1e-9);
        }
    }

    #[test]
    fn two_diagonal_equals_jordan_for_constant_chains() {
        let mut r = rng(45);
        let (al, be) = random_dissimilar_pair(&mut r);
        let chain = SphericalChain::constant(al, 4, TOL).unwrap();
        let b = jordan_block(3, be).transpose();
        let c = random_matrix(&mut r, 4, 3);
        let x = solve_two_diagonal(&chain, &b, &c, TOL).unwrap();
        let y = solve_jordan(al, 4, be, 3, &c, TOL).unwrap();
        assert!(rel(&x, &y) < 1e-10);
        let single = SphericalChain::constant(al, 1, TOL).unwrap();
        let c1 = random_matrix(&mut r, 1, 3);
        let w = class_poly(al).eval_right_matrix(&b).unwrap().inverse(1e-12).unwrap();
        let want = &(&c1.left_scale(al.conj()) - &(&c1 * &b)) * &w;
        assert!(rel(&solve_two_diagonal(&single, &b, &c1, TOL).unwrap(), &want) < 1e-14);
    }

    #[test]
    fn mixed_class_rows() {
        let mut r = rng(46);
        let alphas: Vec<Quaternion> = (0..4).map(|_| random_quaternion(&mut r) + Quaternion::real(2.0)).collect();
        let a = two_diagonal(&alphas, Orientation::Lower);
        let b = random_matrix(&mut r, 3, 3);
        let c = random_matrix(&mut r, 4, 3);
        let x = solve_rows_two_diagonal(&alphas, &b, &c, TOL).unwrap();
        let y = solve_lift(&a, &b, &c, TOL).unwrap();
        assert!(rel(&x, &y) < 1e-9);
    }

    #[test]
    fn triangular_solvers() {
        let mut r = rng(47);
        // Diagonal A decouples into scalar row solves.
        let d: Vec<Quaternion> = (0..3).map(|_| random_quaternion(&mut r) + Quaternion::real(3.0)).collect();
        let a = QMatrix::diagonal(&d);
        let b = random_matrix(&mut r, 2, 2);
        let c = random_matrix(&mut r, 3, 2);
        let x = solve_lower_triangular(&a, &b, &c, TOL).unwrap();
        for (k, &dk) in d.iter().enumerate() {
            let row = crate::poly::solve_linear_row(dk, &(-&c.row(k)), &b, TOL).unwrap();
            assert!(rel(&x.row(k), &row) < 1e-12);
        }
        // Dense lower-triangular A and upper-triangular B.
        let mut a = random_matrix(&mut r, 4, 4);
        let mut b = random_matrix(&mut r, 3, 3);
        for i in 0..4 {
            for j in i + 1..4 {
                a[(i, j)] = Quaternion::ZERO;
            }
            a[(i, i)] += Quaternion::real(3.0);
        }
        for i in 0..3 {
            for j in 0..i {
                b[(i, j)] = Quaternion::ZERO;
            }
        }
        let c = random_matrix(&mut r, 4, 3);
        let lift = solve_lift(&a, &b, &c, TOL).unwrap();
        assert!(rel(&solve_lower_triangular(&a, &b, &c, TOL).unwrap(), &lift) < 1e-9);
        assert!(rel(&solve_upper_triangular_cols(&a, &b, &c, TOL).unwrap(), &lift) < 1e-9);
        assert!(matches!(
            solve_upper_triangular_cols(&a, &a, &random_matrix(&mut r, 4, 4), TOL),
            Err(Error::MethodNotApplicable { .. })
        ));
    }

    #[test]
    fn column_closed_form_matches_recursion() {
        let mut r = rng(48);
        for m in 1..=4 {
            let (_, beta_chain) = random_chain_pair_distinct(&mut r, 1, m);
            let a = &random_matrix(&mut r, 3, 3) + &QMatrix::identity(3).right_scale(Quaternion::real(4.0));
            let b = crate::matrix::chain_matrix(&beta_chain, Orientation::Upper);
            let c = random_matrix(&mut r, 3, m);
            let rec = solve_upper_triangular_cols(&a, &b, &c, TOL).unwrap();
            let closed = solve_cols_two_diagonal(&a, beta_chain.elems(), &c, TOL).unwrap();
            assert!(rel(&closed, &rec) < 1e-9, "m={m}: {}", rel(&closed, &rec));
        }
    }

    #[test]
    fn poly_formula_matches_lift() {
        let mut r = rng(49);
        for _ in 0..20 {
            let a = random_matrix(&mut r, 2, 2);
            let b = &random_matrix(&mut r, 2, 2) + &QMatrix::identity(2).right_scale(Quaternion::real(3.0));
            let c = random_matrix(&mut r, 2, 2);
            let x = solve_poly_formula(&a, &b, &c, TOL).unwrap();
            let y = solve_lift(&a, &b, &c, TOL).unwrap();
            assert!(rel(&x, &y) < 1e-8);
        }
    }

    #[test]
    fn dispatch_rules() {
        let mut r = rng(50);
        let (al, be) = random_dissimilar_pair(&mut r);
        let a = jordan_block(3, al);
        let b = jordan_block(2, be).transpose();
        let c = random_matrix(&mut r, 3, 2);
        let rep = solve(&a, &b, &c, Method::Auto, TOL).unwrap();
        assert_eq!(rep.method, SolveMethod::Jordan);
        assert!(rep.residual <= TOL * scale(&c));

        let a = &random_matrix(&mut r, 3, 3) + &QMatrix::identity(3).right_scale(Quaternion::real(3.0));
        let b = random_matrix(&mut r, 2, 2);
        let rep = solve(&a, &b, &c, Method::Auto, TOL).unwrap();
        assert_eq!(rep.method, SolveMethod::Lift);

        let (ca, cb) = crate::sample::random_chain_pair(&mut r, 3, 2);
        let a = crate::matrix::chain_matrix(&ca, Orientation::Lower);
        let b = crate::matrix::chain_matrix(&cb, Orientation::Upper);
        let x0 = random_matrix(&mut r, 3, 2);
        let c = &(&a * &x0) - &(&x0 * &b);
        let rep = solve(&a, &b, &c, Method::Auto, TOL).unwrap();
        assert_eq!(rep.method, SolveMethod::Singular);
        assert!(rep.residual <= TOL * scale(&c));
        let c = random_matrix(&mut r, 3, 2);
        assert!(matches!(solve(&a, &b, &c, Method::Auto, TOL), Err(Error::NoSolution { .. })));

        let a = QMatrix::scalar(Quaternion::I);
        let b = QMatrix::from_rows(vec![vec![Quaternion::J]]).unwrap();
        let dense = random_matrix(&mut r, 2, 2);
        assert!(matches!(
            solve(&QMatrix::identity(2), &QMatrix::identity(2), &dense, Method::Auto, TOL),
            Err(Error::UnsupportedSingularShape)
        ));
        assert!(solve(&a, &b, &QMatrix::scalar(Quaternion::ONE), Method::Auto, TOL).is_err());
        assert!(matches!(
            solve(
                &random_matrix(&mut r, 2, 2),
                &QMatrix::identity(2).right_scale(Quaternion::real(9.0)),
                &dense,
                Method::Jordan,
                TOL
            ),
            Err(Error::MethodNotApplicable { .. })
        ));
    }

    #[test]
    fn linearity() {
        let mut r = rng(51);
        let a = random_matrix(&mut r, 3, 3);
        let b = &random_matrix(&mut r, 2, 2) + &QMatrix::identity(2).right_scale(Quaternion::real(3.0));
        let c1 = random_matrix(&mut r, 3, 2);
        let c2 = random_matrix(&mut r, 3, 2);
        let x1 = solve(&a, &b, &c1, Method::Auto, TOL).unwrap().x;
        let x2 = solve(&a, &b, &c2, Method::Auto, TOL).unwrap().x;
        let x = solve(&a, &b, &(&c1 + &c2), Method::Auto, TOL).unwrap().x;
        assert!(rel(&x, &(&x1 + &x2)) < 1e-12);
    }
}
