//! Ground truth for `A X − X B = C` by plain real linear algebra on the
//! `4nm × 4nm` representation of `X ↦ A X − X B`. Independent of the complex
//! representation used by the regular solvers.

use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, rref, RealMatrix};
use crate::matrix::QMatrix;

/// Real matrix `L` with `L·vec(X) = vec(A X − X B)`, where `vec` lists each
/// entry's four components, entries row-major.
#[derive(Clone, Debug)]
pub struct RealLift {
    n: usize,
    m: usize,
    l: RealMatrix,
}

impl RealLift {
    pub fn matrix(&self) -> &RealMatrix {
        &self.l
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn apply(&self, x: &QMatrix) -> QMatrix {
        QMatrix::from_real_vec(self.n, self.m, &self.l.matvec(&x.to_real_vec())).expect("lift shape")
    }
}

pub fn build_lift(a: &QMatrix, b: &QMatrix) -> Result<RealLift> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "lift needs square A and B, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let (n, m) = (a.rows(), b.rows());
    let size = 4 * n * m;
    let mut l = RealMatrix::zeros(size, size);
    let block = |r: usize, c: usize| 4 * (r * m + c);
    for r in 0..n {
        for c in 0..m {
            let row = block(r, c);
            for k in 0..n {
                let lm = a[(r, k)].left_matrix();
                let col = block(k, c);
                for (s, lrow) in lm.iter().enumerate() {
                    for (t, v) in lrow.iter().enumerate() {
                        l[(row + s, col + t)] += v;
                    }
                }
            }
            for k in 0..m {
                let rm = b[(k, c)].right_matrix();
                let col = block(r, k);
                for (s, rrow) in rm.iter().enumerate() {
                    for (t, v) in rrow.iter().enumerate() {
                        l[(row + s, col + t)] -= v;
                    }
                }
            }
        }
    }
    Ok(RealLift { n, m, l })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Unique,
    Affine,
    None,
}

#[derive(Clone, Debug)]
pub struct OracleSolution {
    pub verdict: Verdict,
    /// Minimum-norm solution when one exists.
    pub x0: Option<QMatrix>,
    /// Nullspace basis by back-substitution, one matrix per free column.
    pub nullspace: Vec<QMatrix>,
    pub rank: usize,
}

impl OracleSolution {
    pub fn nullity(&self) -> usize {
        self.nullspace.len()
    }
}

/// Gauss–Jordan elimination on `[L | vec C]` with pivot threshold
/// `tol·(1 + largest row norm)`.
pub fn oracle_solve(a: &QMatrix, b: &QMatrix, c: &QMatrix, tol: f64) -> Result<OracleSolution> {
    let lift = build_lift(a, b)?;
    let (n, m) = lift.shape();
    if c.shape() != (n, m) {
        return Err(Error::DimensionMismatch(format!("C is {}x{}, expected {n}x{m}", c.rows(), c.cols())));
    }
    let size = 4 * n * m;
    let rhs = c.to_real_vec();
    let aug = RealMatrix::from_fn(size, size + 1, |i, j| if j < size { lift.l[(i, j)] } else { rhs[i] });
    let r = rref(&aug, tol);
    let consistent = !r.pivots.contains(&size);
    let rank = r.pivots.iter().filter(|&&p| p < size).count();
    let null_vectors = r.nullspace(size);
    let nullspace = null_vectors.iter().map(|v| QMatrix::from_real_vec(n, m, v).expect("nullspace shape")).collect();

    if !consistent {
        return Ok(OracleSolution { verdict: Verdict::None, x0: None, nullspace, rank });
    }
    let mut x = vec![0.0; size];
    for (row, &p) in r.pivots.iter().enumerate() {
        x[p] = r.reduced[(row, size)];
    }
    // Minimum norm: remove the component in the nullspace.
    for q in orthonormalize(&null_vectors, 1e-12) {
        let d: f64 = q.iter().zip(&x).map(|(a, b)| a * b).sum();
        for (xi, qi) in x.iter_mut().zip(&q) {
            *xi -= d * qi;
        }
    }
    let verdict = if rank == size { Verdict::Unique } else { Verdict::Affine };
    Ok(OracleSolution { verdict, x0: Some(QMatrix::from_real_vec(n, m, &x)?), nullspace, rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{sylvester_residual, QMatrix};
    use crate::quaternion::Quaternion;
    use crate::sample::{random_matrix, rng};

    #[test]
    fn small_lifts() {
        let z = QMatrix::scalar(Quaternion::ZERO);
        let one = QMatrix::scalar(Quaternion::ONE);
        assert_eq!(build_lift(&z, &z).unwrap().matrix(), &RealMatrix::zeros(4, 4));
        assert_eq!(build_lift(&one, &z).unwrap().matrix(), &RealMatrix::identity(4));
    }

    #[test]
    fn lift_matches_direct_evaluation() {
        let mut r = rng(21);
        for (n, m) in [(1, 1), (2, 3), (3, 2), (4, 4)] {
            let a = random_matrix(&mut r, n, n);
            let b = random_matrix(&mut r, m, m);
            let x = random_matrix(&mut r, n, m);
            let direct = &(&a * &x) - &(&x * &b);
            let lifted = build_lift(&a, &b).unwrap().apply(&x);
            assert!((&direct - &lifted).frobenius_norm() < 1e-13);
        }
    }

    #[test]
    fn regular_pair_is_unique() {
        let mut r = rng(22);
        let a = random_matrix(&mut r, 3, 3);
        let b = random_matrix(&mut r, 2, 2);
        let c = random_matrix(&mut r, 3, 2);
        let sol = oracle_solve(&a, &b, &c, 1e-9).unwrap();
        assert_eq!(sol.verdict, Verdict::Unique);
        assert_eq!(sol.rank + sol.nullity(), 24);
        assert!(sylvester_residual(&a, &b, &c, sol.x0.as_ref().unwrap()) < 1e-10);
    }

    #[test]
    fn singular_scalar_pair() {
        let a = QMatrix::scalar(Quaternion::I);
        let b = QMatrix::scalar(Quaternion::J);
        let sol = oracle_solve(&a, &b, &QMatrix::scalar(Quaternion::ONE), 1e-9).unwrap();
        assert_eq!(sol.verdict, Verdict::None);
        assert_eq!(sol.nullity(), 2);
        let x0 = QMatrix::scalar(Quaternion::new(0.3, 1.0, -0.5, 2.0));
        let c = &(&a * &x0) - &(&x0 * &b);
        let sol = oracle_solve(&a, &b, &c, 1e-9).unwrap();
        assert_eq!(sol.verdict, Verdict::Affine);
        let x = sol.x0.unwrap();
        assert!(sylvester_residual(&a, &b, &c, &x) < 1e-12);
        // Minimum norm: orthogonal to the nullspace.
        for y in &sol.nullspace {
            let d: f64 = x.to_real_vec().iter().zip(y.to_real_vec()).map(|(p, q)| p * q).sum();
            assert!(d.abs() < 1e-12);
        }
    }
}
