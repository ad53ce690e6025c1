//! Two-sided polynomial interpolation: find `f ∈ ℍ[z]` with
//! `f − g ∈ p·ℍ[z]` and `f − g̃ ∈ ℍ[z]·q` for `p = ρ_{α₁}⋯ρ_{αₙ}` and
//! `q = ρ_{β_m}⋯ρ_{β₁}`, via the Sylvester equation `𝒥_𝛂 X − X 𝒥_𝛃ᵀ = C`.

use crate::error::{Error, Result};
use crate::matrix::{two_diagonal, Orientation, QMatrix};
use crate::poly::{QPoly, SphericalChain};
use crate::quaternion::{class_tol, scalar_sylvester, similar, Quaternion, SolutionSet};
use crate::regular::{self, Method, SolveMethod};
use crate::singular::{self, SingularInstance};

/// Direction of a chain product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductOrder {
    /// `ρ_{α₁}ρ_{α₂}⋯ρ_{αₙ}`.
    Forward,
    /// `ρ_{αₙ}⋯ρ_{α₂}ρ_{α₁}`.
    Reverse,
}

pub fn chain_product(elems: &[Quaternion], order: ProductOrder) -> QPoly {
    let factors = elems.iter().map(|&a| QPoly::rho(a));
    match order {
        ProductOrder::Forward => factors.fold(QPoly::constant(Quaternion::ONE), |acc, r| &acc * &r),
        ProductOrder::Reverse => factors.fold(QPoly::constant(Quaternion::ONE), |acc, r| &r * &acc),
    }
}

/// Interpolation nodes: a spherical chain, or a single (possibly real) point.
fn validate_nodes(elems: Vec<Quaternion>, tol: f64) -> Result<Vec<Quaternion>> {
    match elems.as_slice() {
        [] => Err(Error::InvalidChain { index: 0, reason: "empty chain".into() }),
        [a] if a.is_finite() => Ok(elems),
        _ => Ok(SphericalChain::new(elems, tol)?.elems().to_vec()),
    }
}

#[derive(Clone, Debug)]
pub struct InterpProblem {
    alpha: Vec<Quaternion>,
    beta: Vec<Quaternion>,
    g: QPoly,
    g_tilde: QPoly,
    tol: f64,
}

impl InterpProblem {
    /// Requires `deg g < n` and `deg g̃ < m`.
    pub fn new(alpha: Vec<Quaternion>, beta: Vec<Quaternion>, g: QPoly, g_tilde: QPoly, tol: f64) -> Result<Self> {
        let alpha = validate_nodes(alpha, tol)?;
        let beta = validate_nodes(beta, tol)?;
        if g.coeffs().len() > alpha.len() {
            return Err(Error::DegreeBound(format!("deg g = {} but n = {}", g.coeffs().len() - 1, alpha.len())));
        }
        if g_tilde.coeffs().len() > beta.len() {
            return Err(Error::DegreeBound(format!("deg g̃ = {} but m = {}", g_tilde.coeffs().len() - 1, beta.len())));
        }
        Ok(InterpProblem { alpha, beta, g, g_tilde, tol })
    }

    pub fn from_chains(
        alpha: &SphericalChain,
        beta: &SphericalChain,
        g: QPoly,
        g_tilde: QPoly,
        tol: f64,
    ) -> Result<Self> {
        Self::new(alpha.elems().to_vec(), beta.elems().to_vec(), g, g_tilde, tol)
    }

    pub fn alpha(&self) -> &[Quaternion] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Quaternion] {
        &self.beta
    }

    pub fn g(&self) -> &QPoly {
        &self.g
    }

    pub fn g_tilde(&self) -> &QPoly {
        &self.g_tilde
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn m(&self) -> usize {
        self.beta.len()
    }

    /// `p = ρ_{α₁}⋯ρ_{αₙ}`.
    pub fn p(&self) -> QPoly {
        chain_product(&self.alpha, ProductOrder::Forward)
    }

    /// `q = ρ_{β_m}⋯ρ_{β₁}`.
    pub fn q(&self) -> QPoly {
        chain_product(&self.beta, ProductOrder::Reverse)
    }

    pub fn a_matrix(&self) -> QMatrix {
        two_diagonal(&self.alpha, Orientation::Lower)
    }

    pub fn b_matrix(&self) -> QMatrix {
        two_diagonal(&self.beta, Orientation::Upper)
    }

    /// `C = Σ_j 𝒥_𝛂ʲ E_n g_j E_mᵀ − Σ_k E_n g̃_k E_mᵀ (𝒥_𝛃ᵀ)ᵏ` with `E` the
    /// first unit column, by matrix powers and products.
    pub fn build_c(&self) -> QMatrix {
        let (n, m) = (self.n(), self.m());
        let (a, b) = (self.a_matrix(), self.b_matrix());
        let e_n = QMatrix::from_fn(n, 1, |i, _| if i == 0 { Quaternion::ONE } else { Quaternion::ZERO });
        let e_m = QMatrix::from_fn(1, m, |_, j| if j == 0 { Quaternion::ONE } else { Quaternion::ZERO });
        let mut c = QMatrix::zeros(n, m);
        for (j, &gj) in self.g.coeffs().iter().enumerate() {
            c = &c + &(&(&a.powi(j as u32) * &e_n.right_scale(gj)) * &e_m);
        }
        for (k, &gk) in self.g_tilde.coeffs().iter().enumerate() {
            c = &c - &(&(&e_n * &e_m.left_scale(gk)) * &b.powi(k as u32));
        }
        c
    }

    /// [`Self::build_c`] entrywise: only the first column and first row are
    /// non-zero, filled by the recursions `v ← 𝒥_𝛂 v` and `w ← w 𝒥_𝛃ᵀ`.
    pub fn build_c_entrywise(&self) -> QMatrix {
        let (n, m) = (self.n(), self.m());
        let mut c = QMatrix::zeros(n, m);
        let mut v: Vec<Quaternion> = (0..n).map(|i| if i == 0 { Quaternion::ONE } else { Quaternion::ZERO }).collect();
        for &gj in self.g.coeffs() {
            for i in 0..n {
                c[(i, 0)] += v[i] * gj;
            }
            for i in (0..n).rev() {
                v[i] = self.alpha[i] * v[i] + if i > 0 { v[i - 1] } else { Quaternion::ZERO };
            }
        }
        let mut w: Vec<Quaternion> = (0..m).map(|j| if j == 0 { Quaternion::ONE } else { Quaternion::ZERO }).collect();
        for &gk in self.g_tilde.coeffs() {
            for j in 0..m {
                c[(0, j)] -= gk * w[j];
            }
            for j in (0..m).rev() {
                w[j] = w[j] * self.beta[j] + if j > 0 { w[j - 1] } else { Quaternion::ZERO };
            }
        }
        c
    }

    fn same_class(&self) -> bool {
        let (a, b) = (self.alpha[0], self.beta[0]);
        similar(a, b, class_tol(self.tol, a, b))
    }

    /// A solution of `𝒥_𝛂 X − X 𝒥_𝛃ᵀ = C`: the unique one when the classes
    /// differ, the particular solution of the singular case otherwise.
    pub fn solve_sylvester(&self) -> Result<(QMatrix, SolveMethod)> {
        let c = self.build_c();
        if !self.same_class() {
            let report = regular::solve(&self.a_matrix(), &self.b_matrix(), &c, Method::Auto, self.tol)?;
            return Ok((report.x, report.method));
        }
        if self.alpha[0].is_real(class_tol(self.tol, self.alpha[0], self.beta[0])) {
            return match scalar_sylvester(self.alpha[0], self.beta[0], c[(0, 0)], self.tol) {
                SolutionSet::None => Err(Error::NoSolution { obstructions: vec![c[(0, 0)].abs()] }),
                set => Ok((QMatrix::scalar(set.representative().unwrap_or(Quaternion::ZERO)), SolveMethod::Singular)),
            };
        }
        let inst = SingularInstance::new(self.alpha.clone(), self.beta.clone(), c, self.tol)?;
        Ok((singular::particular_solution(&inst)?, SolveMethod::Singular))
    }

    /// `g + Σ_j p·x_{n,j}·ρ_{β_{j−1}}⋯ρ_{β₁}` from the bottom row of `X`.
    pub fn from_bottom_row(&self, x: &QMatrix) -> QPoly {
        let p = self.p();
        let mut f = self.g.clone();
        let mut tail = QPoly::constant(Quaternion::ONE);
        for j in 0..self.m() {
            f = &f + &(&p.right_scale(x[(self.n() - 1, j)]) * &tail);
            tail = &QPoly::rho(self.beta[j]) * &tail;
        }
        f
    }

    /// `g̃ + Σ_k ρ_{α₁}⋯ρ_{α_{k−1}}·x_{k,m}·q` from the last column of `X`.
    pub fn from_last_column(&self, x: &QMatrix) -> QPoly {
        let q = self.q();
        let mut f = self.g_tilde.clone();
        let mut head = QPoly::constant(Quaternion::ONE);
        for k in 0..self.n() {
            f = &f + &(&head.right_scale(x[(k, self.m() - 1)]) * &q);
            head = &head * &QPoly::rho(self.alpha[k]);
        }
        f
    }

    /// Remainder norms of the two membership tests: `f − g = p·d + r` and
    /// `f − g̃ = d·q + r`.
    pub fn membership_residuals(&self, f: &QPoly) -> Result<(f64, f64)> {
        let (_, r_left) = (f - &self.g).divmod_left(&self.p())?;
        let (_, r_right) = (f - &self.g_tilde).divmod_right(&self.q())?;
        Ok((r_left.max_abs(), r_right.max_abs()))
    }

    pub fn interpolate(&self) -> Result<InterpResult> {
        let (x, method) = self.solve_sylvester()?;
        let f = self.from_bottom_row(&x);
        let alternative = self.from_last_column(&x);
        let forms_gap = (&f - &alternative).max_abs();
        let (p_residual, q_residual) = self.membership_residuals(&f)?;
        let bottom_row = (0..self.m()).map(|j| x[(self.n() - 1, j)]).collect();
        Ok(InterpResult { f, alternative, x, bottom_row, method, forms_gap, p_residual, q_residual })
    }

    /// `f₀ + p·h·q`; every such polynomial interpolates the same data.
    pub fn with_h(&self, f0: &QPoly, h: &QPoly) -> QPoly {
        f0 + &(&(&self.p() * h) * &self.q())
    }

    /// Polynomials `Σ_j p·y_{n,j}·ρ_{β_{j−1}}⋯ρ_{β₁}` from the bottom rows of a
    /// basis of homogeneous solutions. They lie in `p·ℍ[z] ∩ ℍ[z]·q` and,
    /// added to `f₀` with real weights, give every interpolant of degree
    /// below `n + m`. Empty when the classes differ.
    pub fn homogeneous_interpolants(&self) -> Result<Vec<QPoly>> {
        if !self.same_class() {
            return Ok(Vec::new());
        }
        let zero = InterpProblem { g: QPoly::zero(), g_tilde: QPoly::zero(), ..self.clone() };
        if self.alpha[0].is_real(class_tol(self.tol, self.alpha[0], self.beta[0])) {
            return Ok((0..4)
                .map(|i| {
                    let mut e = [0.0; 4];
                    e[i] = 1.0;
                    zero.from_bottom_row(&QMatrix::scalar(Quaternion::from_array(e)))
                })
                .collect());
        }
        let alpha = SphericalChain::new(self.alpha.clone(), self.tol)?;
        let beta = SphericalChain::new(self.beta.clone(), self.tol)?;
        Ok(singular::null_basis(&alpha, &beta, self.tol)?.iter().map(|e| zero.from_bottom_row(&e.y)).collect())
    }
}

/// An interpolant and the data certifying it.
#[derive(Clone, Debug)]
pub struct InterpResult {
    /// The interpolant built from the bottom row of `X`.
    pub f: QPoly,
    /// The same polynomial built from the last column of `X`.
    pub alternative: QPoly,
    pub x: QMatrix,
    pub bottom_row: Vec<Quaternion>,
    pub method: SolveMethod,
    /// Largest coefficient of `f − alternative`.
    pub forms_gap: f64,
    /// Remainder norm of `f − g` divided by `p`.
    pub p_residual: f64,
    /// Remainder norm of `f − g̃` divided by `q`.
    pub q_residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_chain_pair, random_chain_pair_distinct, random_quaternion, rng};

    const TOL: f64 = 1e-9;
    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;

    fn random_poly(r: &mut rand::rngs::StdRng, len: usize) -> QPoly {
        QPoly::new((0..len).map(|_| random_quaternion(r)).collect())
    }

    #[test]
    fn chain_products() {
        let a = Quaternion::new(0.5, 1.0, -2.0, 0.3);
        assert_eq!(chain_product(&[a], ProductOrder::Forward), QPoly::rho(a));
        let sq = chain_product(&[I, I], ProductOrder::Forward);
        assert_eq!(sq, QPoly::new(vec![-Quaternion::ONE, I * -2.0, Quaternion::ONE]));
        let ij = chain_product(&[I, J], ProductOrder::Forward);
        assert_eq!(ij, QPoly::new(vec![I * J, -(I + J), Quaternion::ONE]));
        let ji = chain_product(&[I, J], ProductOrder::Reverse);
        assert_eq!(ji, QPoly::new(vec![J * I, -(I + J), Quaternion::ONE]));
    }

    #[test]
    fn build_c_examples() {
        let mut r = rng(80);
        let (a, b) = random_chain_pair(&mut r, 3, 2);
        let zero = InterpProblem::from_chains(&a, &b, QPoly::zero(), QPoly::zero(), TOL).unwrap();
        assert_eq!(zero.build_c(), QMatrix::zeros(3, 2));
        let (g, d) = (random_quaternion(&mut r), random_quaternion(&mut r));
        let scalar = InterpProblem::new(vec![I], vec![J * 2.0], QPoly::constant(g), QPoly::constant(d), TOL).unwrap();
        assert_eq!(scalar.build_c(), QMatrix::scalar(g - d));
        for (n, m) in [(3, 2), (4, 4), (2, 5)] {
            let (a, b) = random_chain_pair_distinct(&mut r, n, m);
            let pr = InterpProblem::from_chains(&a, &b, random_poly(&mut r, n), random_poly(&mut r, m), TOL).unwrap();
            assert!((&pr.build_c() - &pr.build_c_entrywise()).max_abs() < 1e-13);
        }
        let err = InterpProblem::new(vec![I], vec![J], random_poly(&mut r, 2), QPoly::zero(), TOL);
        assert!(matches!(err, Err(Error::DegreeBound(_))));
    }

    #[test]
    fn real_scalar_case() {
        let (g, d) = (Quaternion::new(1.0, 2.0, 0.0, -1.0), Quaternion::new(0.0, 0.5, 3.0, 1.0));
        let pr = InterpProblem::new(
            vec![Quaternion::ONE],
            vec![Quaternion::real(2.0)],
            QPoly::constant(g),
            QPoly::constant(d),
            TOL,
        )
        .unwrap();
        let res = pr.interpolate().unwrap();
        let x = (g - d) / (1.0 - 2.0);
        let want = QPoly::new(vec![g - x, x]);
        assert!((&res.f - &want).max_abs() < 1e-15);
        assert!(res.p_residual < 1e-15 && res.q_residual < 1e-15);
        assert!((res.f.eval_left(Quaternion::ONE) - g).abs() < 1e-15);
        assert!((res.f.eval_right(Quaternion::real(2.0)) - d).abs() < 1e-15);
    }

    #[test]
    fn random_instances_interpolate() {
        let mut r = rng(81);
        for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (2, 3), (4, 2)] {
            let (a, b) = random_chain_pair_distinct(&mut r, n, m);
            let pr = InterpProblem::from_chains(&a, &b, random_poly(&mut r, n), random_poly(&mut r, m), TOL).unwrap();
            let res = pr.interpolate().unwrap();
            assert!(res.p_residual < 1e-9 && res.q_residual < 1e-9, "{n}x{m}");
            assert!(res.forms_gap < 1e-9);
            assert!(res.f.degree().is_none_or(|d| d < n + m));
            let h = random_poly(&mut r, 2);
            let (p1, q1) = pr.membership_residuals(&pr.with_h(&res.f, &h)).unwrap();
            assert!(p1 < 1e-9 && q1 < 1e-9);
        }
    }

    #[test]
    fn maximal_ideal_evaluations() {
        let mut r = rng(82);
        let (a, b) = random_chain_pair_distinct(&mut r, 1, 1);
        let (g, d) = (random_quaternion(&mut r), random_quaternion(&mut r));
        let pr = InterpProblem::from_chains(&a, &b, QPoly::constant(g), QPoly::constant(d), TOL).unwrap();
        let f = pr.interpolate().unwrap().f;
        assert!((f.eval_left(a.first()) - g).abs() < 1e-12);
        assert!((f.eval_right(b.first()) - d).abs() < 1e-12);
    }

    #[test]
    fn intersection_elements() {
        let mut r = rng(83);
        for (n, m) in [(2, 2), (3, 2), (2, 3)] {
            let (a, b) = random_chain_pair(&mut r, n, m);
            let pr = InterpProblem::from_chains(&a, &b, QPoly::zero(), QPoly::zero(), TOL).unwrap();
            let res = pr.interpolate().unwrap();
            assert!(res.p_residual < 1e-9 && res.q_residual < 1e-9);
            let hom = pr.homogeneous_interpolants().unwrap();
            assert_eq!(hom.len(), 2 * n.min(m));
            for f in &hom {
                assert!(!f.is_zero());
                let (pl, ql) = pr.membership_residuals(f).unwrap();
                assert!(pl < 1e-9 && ql < 1e-9);
                assert!(f.degree().unwrap() < n + m);
            }
        }
    }

    #[test]
    fn unsolvable_same_class_instance() {
        let pr = InterpProblem::new(vec![I], vec![J], QPoly::constant(Quaternion::ONE), QPoly::zero(), TOL).unwrap();
        assert!(matches!(pr.interpolate(), Err(Error::NoSolution { .. })));
        let real =
            InterpProblem::new(vec![Quaternion::ONE], vec![Quaternion::ONE], QPoly::constant(I), QPoly::zero(), TOL)
                .unwrap();
        assert!(matches!(real.interpolate(), Err(Error::NoSolution { .. })));
    }
}
