//! The singular case `𝒥_𝛂 X − X 𝒥_𝛃ᵀ = C` with both spherical chains in one
//! conjugacy class: solvability conditions, a particular solution, and an
//! explicit basis of the homogeneous solutions.
//!
//! Indices in the formulas below are 1-based, as in the usual statement of
//! the recursions; code converts at the boundaries.

use crate::error::{Error, Result};
use crate::matrix::{chain_matrix, Orientation, QMatrix};
use crate::poly::{SphericalChain, CHAIN_GUARD};
use crate::quaternion::{class_tol, plane_of, similar, Plane, Quaternion};

/// `𝒥_𝛂 X − X 𝒥_𝛃ᵀ = C` with `𝛂`, `𝛃` in one non-real class.
#[derive(Clone, Debug)]
pub struct SingularInstance {
    alpha: SphericalChain,
    beta: SphericalChain,
    c: QMatrix,
    tol: f64,
}

impl SingularInstance {
    pub fn new(alphas: Vec<Quaternion>, betas: Vec<Quaternion>, c: QMatrix, tol: f64) -> Result<Self> {
        let alpha = SphericalChain::new(alphas, tol)?;
        let beta = SphericalChain::new(betas, tol)?;
        Self::from_chains(alpha, beta, c, tol)
    }

    pub fn from_chains(alpha: SphericalChain, beta: SphericalChain, c: QMatrix, tol: f64) -> Result<Self> {
        let (a0, b0) = (alpha.first(), beta.first());
        if !similar(a0, b0, class_tol(tol, a0, b0)) {
            return Err(Error::NotSimilar(a0, b0));
        }
        if c.shape() != (alpha.len(), beta.len()) {
            return Err(Error::DimensionMismatch(format!(
                "C is {}x{}, chains have lengths {} and {}",
                c.rows(),
                c.cols(),
                alpha.len(),
                beta.len()
            )));
        }
        Ok(SingularInstance { alpha, beta, c, tol })
    }

    pub fn alpha(&self) -> &SphericalChain {
        &self.alpha
    }

    pub fn beta(&self) -> &SphericalChain {
        &self.beta
    }

    pub fn c(&self) -> &QMatrix {
        &self.c
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn m(&self) -> usize {
        self.beta.len()
    }

    /// `A = 𝒥_𝛂`.
    pub fn a_matrix(&self) -> QMatrix {
        chain_matrix(&self.alpha, Orientation::Lower)
    }

    /// `B = 𝒥_𝛃ᵀ`.
    pub fn b_matrix(&self) -> QMatrix {
        chain_matrix(&self.beta, Orientation::Upper)
    }

    /// The adjoint equation `𝒥_{𝛃̄} X* − X* 𝒥_{𝛂̄}ᵀ = −C*`.
    pub fn adjoint(&self) -> SingularInstance {
        let conj = |ch: &SphericalChain| SphericalChain::new(ch.elems().iter().map(|q| q.conj()).collect(), self.tol);
        SingularInstance {
            alpha: conj(&self.beta).expect("conjugate of a chain is a chain"),
            beta: conj(&self.alpha).expect("conjugate of a chain is a chain"),
            c: -&self.c.adjoint(),
            tol: self.tol,
        }
    }

    /// Obstruction threshold `tol·(1 + ‖C‖_F)`.
    pub fn obstruction_tol(&self) -> f64 {
        self.tol * (1.0 + self.c.frobenius_norm())
    }
}

/// `D = C B − A′ C` entrywise: `d_ij = c_ij β_j − ᾱ_i c_ij + c_{i,j−1} + c_{i−1,j}`.
pub fn build_d(alphas: &[Quaternion], betas: &[Quaternion], c: &QMatrix) -> QMatrix {
    QMatrix::from_fn(c.rows(), c.cols(), |i, j| {
        let (ii, jj) = (i as isize, j as isize);
        c[(i, j)] * betas[j] - alphas[i].conj() * c[(i, j)] + c.get_or_zero(ii, jj - 1) + c.get_or_zero(ii - 1, jj)
    })
}

/// `Γ_{k,j}` on the counter-diagonals `k + j ≤ extent` (1-based); all other
/// entries, including `Γ_{0,j}`, `Γ_{−1,j}` and `Γ_{k,0}`, read as zero.
#[derive(Clone, Debug)]
pub struct GammaTable {
    rows: usize,
    cols: usize,
    extent: usize,
    values: Vec<Quaternion>,
}

impl GammaTable {
    pub fn extent(&self) -> usize {
        self.extent
    }

    /// 1-based lookup.
    pub fn get(&self, k: isize, j: isize) -> Quaternion {
        if k < 1 || j < 1 || k as usize > self.rows || j as usize > self.cols || (k + j) as usize > self.extent {
            return Quaternion::ZERO;
        }
        self.values[(k as usize - 1) * self.cols + (j as usize - 1)]
    }

    fn set(&mut self, k: usize, j: usize, v: Quaternion) {
        self.values[(k - 1) * self.cols + (j - 1)] = v;
    }

    /// Rows `1..=rows` as a matrix, zero outside the extent.
    pub fn to_matrix(&self, rows: usize) -> QMatrix {
        QMatrix::from_fn(rows, self.cols, |i, j| self.get(i as isize + 1, j as isize + 1))
    }
}

/// Fills `Γ` by the double recursion
/// `Γ_kj = (α_k − ᾱ_{k+1})⁻¹ [d_{k+1,j} + Γ_{k+1,j−2} − Γ_{k−1,j} − Γ_{k+1,j−1}(β̄_j − β_{j−1})]`
/// over counter-diagonals `s = k + j = 2, …, extent`, for `k < len(alphas)`.
pub fn gamma_table(alphas: &[Quaternion], betas: &[Quaternion], d: &QMatrix, extent: usize) -> Result<GammaTable> {
    let rows = alphas.len().saturating_sub(1);
    let cols = betas.len();
    let mut g = GammaTable { rows, cols, extent, values: vec![Quaternion::ZERO; rows * cols] };
    let scale = 1.0 + alphas.first().map_or(0.0, |a| a.abs());
    let mut pivots = Vec::with_capacity(rows);
    for k in 1..=rows {
        let gap = alphas[k - 1] - alphas[k].conj();
        if gap.abs() <= CHAIN_GUARD * scale {
            return Err(Error::DegenerateChain { index: k - 1, gap: gap.abs() });
        }
        pivots.push(gap.inv()?);
    }
    let dk = |i: usize, j: usize| d.get_or_zero(i as isize - 1, j as isize - 1);
    for s in 2..=extent {
        for j in 1..=cols.min(s - 1) {
            let k = s - j;
            if k > rows {
                continue;
            }
            let (ki, ji) = (k as isize, j as isize);
            let mut t = dk(k + 1, j) + g.get(ki + 1, ji - 2) - g.get(ki - 1, ji);
            if j >= 2 {
                t -= g.get(ki + 1, ji - 1) * (betas[j - 1].conj() - betas[j - 2]);
            }
            g.set(k, j, pivots[k - 1] * t);
        }
    }
    Ok(g)
}

/// `S_j = d_{1,j} + Γ_{1,j−1}(β_{j−1} − β̄_j) + Γ_{1,j−2}` for `j = 1..=m`.
pub fn obstructions(betas: &[Quaternion], d: &QMatrix, g: &GammaTable) -> Vec<Quaternion> {
    (1..=betas.len())
        .map(|j| {
            let ji = j as isize;
            let mut s = d[(0, j - 1)] + g.get(1, ji - 2);
            if j >= 2 {
                s += g.get(1, ji - 1) * (betas[j - 2] - betas[j - 1].conj());
            }
            s
        })
        .collect()
}

/// Result of [`analyze`]. When the input had `m > n` the analysis is of the
/// adjoint instance and `adjoint` is set.
#[derive(Clone, Debug)]
pub struct SingularAnalysis {
    pub d: QMatrix,
    pub gamma: GammaTable,
    pub s: Vec<Quaternion>,
    pub solvable: bool,
    pub max_obstruction: f64,
    pub threshold: f64,
    pub adjoint: bool,
}

impl SingularAnalysis {
    pub fn obstruction_norms(&self) -> Vec<f64> {
        self.s.iter().map(|q| q.abs()).collect()
    }
}

fn normalized(inst: &SingularInstance) -> (SingularInstance, bool) {
    if inst.m() > inst.n() {
        (inst.adjoint(), true)
    } else {
        (inst.clone(), false)
    }
}

/// Solvability: the equation has a solution iff every `S_j` vanishes; here
/// `‖S_j‖ ≤ tol·(1 + ‖C‖_F)`.
pub fn analyze(inst: &SingularInstance) -> Result<SingularAnalysis> {
    let (work, adjoint) = normalized(inst);
    let (alphas, betas) = (work.alpha.elems(), work.beta.elems());
    let d = build_d(alphas, betas, &work.c);
    let gamma = gamma_table(alphas, betas, &d, work.n())?;
    let s = obstructions(betas, &d, &gamma);
    let max_obstruction = s.iter().map(|q| q.abs()).fold(0.0, f64::max);
    let threshold = work.obstruction_tol();
    Ok(SingularAnalysis { d, gamma, s, solvable: max_obstruction <= threshold, max_obstruction, threshold, adjoint })
}

/// A particular solution: extend the chain by `m` copies of `α_n` and `C` by
/// zero rows, run the `Γ` recursion to `k + j ≤ n + m`, keep rows `1..=n`.
pub fn particular_solution(inst: &SingularInstance) -> Result<QMatrix> {
    let analysis = analyze(inst)?;
    if !analysis.solvable {
        return Err(Error::NoSolution { obstructions: analysis.obstruction_norms() });
    }
    let (work, adjoint) = normalized(inst);
    let (n, m) = (work.n(), work.m());
    let mut alphas = work.alpha.elems().to_vec();
    alphas.extend(std::iter::repeat_n(work.alpha.last(), m));
    let c_ext = QMatrix::from_fn(n + m, m, |i, j| if i < n { work.c[(i, j)] } else { Quaternion::ZERO });
    let d = build_d(&alphas, work.beta.elems(), &c_ext);
    let gamma = gamma_table(&alphas, work.beta.elems(), &d, n + m)?;
    let x = gamma.to_matrix(n);
    Ok(if adjoint { x.adjoint() } else { x })
}

/// Verdict of the Jordan-block criterion.
#[derive(Clone, Debug)]
pub struct JordanSolvability {
    pub solvable: bool,
    pub values: Vec<Quaternion>,
    pub max_value: f64,
    pub threshold: f64,
}

/// Solvability of `𝒥_n(α) X − X 𝒥_m(β)ᵀ = C` for `α ∼ β` from the
/// conditions
/// `Im(α)·Σ_{ℓ≥0} d_{2ℓ+1, j−2ℓ} + Σ_{ℓ≥1} d_{2ℓ, j−2ℓ+1}·Im(β) = 0`,
/// `j = 1..=m` (for `m > n`, applied to the adjoint equation).
pub fn jordan_solvability(alpha: Quaternion, beta: Quaternion, c: &QMatrix, tol: f64) -> Result<JordanSolvability> {
    if !similar(alpha, beta, class_tol(tol, alpha, beta)) {
        return Err(Error::NotSimilar(alpha, beta));
    }
    if alpha.is_real(class_tol(tol, alpha, beta)) {
        return Err(Error::RealClass(alpha));
    }
    let (alpha, beta, c) =
        if c.cols() > c.rows() { (beta.conj(), alpha.conj(), -&c.adjoint()) } else { (alpha, beta, c.clone()) };
    let (n, m) = c.shape();
    let d = build_d(&vec![alpha; n], &vec![beta; m], &c);
    let dk =
        |i: usize, j: isize| if i >= 1 && j >= 1 { d.get_or_zero(i as isize - 1, j - 1) } else { Quaternion::ZERO };
    let (ia, ib) = (alpha.im(), beta.im());
    let values: Vec<Quaternion> = (1..=m as isize)
        .map(|j| {
            let mut v = Quaternion::ZERO;
            let mut l = 0isize;
            while 2 * l <= j {
                v += ia * dk((2 * l + 1) as usize, j - 2 * l);
                if l >= 1 {
                    v += dk((2 * l) as usize, j - 2 * l + 1) * ib;
                }
                l += 1;
            }
            v
        })
        .collect();
    let max_value = values.iter().map(|q| q.abs()).fold(0.0, f64::max);
    let threshold = tol * (1.0 + c.frobenius_norm()) * alpha.im_abs();
    Ok(JordanSolvability { solvable: max_value <= threshold, values, max_value, threshold })
}

/// `Δ_kj = α_k Γ_kj − Γ_kj β_j − c_kj + Γ_{k−1,j} − Γ_{k,j−1}` (1-based),
/// the defect of `Γ` as a solution at entry `(k, j)`.
pub fn delta(
    alphas: &[Quaternion],
    betas: &[Quaternion],
    c: &QMatrix,
    g: &GammaTable,
    k: usize,
    j: usize,
) -> Quaternion {
    let (ki, ji) = (k as isize, j as isize);
    let gkj = g.get(ki, ji);
    alphas[k - 1] * gkj - gkj * betas[j - 1] - c.get_or_zero(ki - 1, ji - 1) + g.get(ki - 1, ji) - g.get(ki, ji - 1)
}

fn checked_params(alphas: &[Quaternion], betas: &[Quaternion], mu: &[Quaternion], tol: f64) -> Result<Vec<Quaternion>> {
    if mu.len() != betas.len() {
        return Err(Error::DimensionMismatch(format!("{} parameters for {} columns", mu.len(), betas.len())));
    }
    let alpha_n = *alphas.last().expect("non-empty chain");
    mu.iter()
        .zip(betas)
        .enumerate()
        .map(|(index, (&q, &b))| {
            let plane = plane_of(alpha_n, b, tol)?;
            let distance = plane.distance(q);
            if distance > tol * (1.0 + q.abs()) * (1.0 + alpha_n.abs()) {
                return Err(Error::InvalidParameter { index, distance });
            }
            Ok(plane.project(q))
        })
        .collect()
}

/// Homogeneous solution `Y` (`𝒥_𝛂 Y = Y 𝒥_𝛃ᵀ`, `n ≥ m`) with parameters
/// `μ_j ∈ Π_{α_n, β_j}`, built by counter-diagonals: `Y_kj = 0` for
/// `k + j ≤ n`; on each later counter-diagonal the bottom entry is
/// `μ_{j+1} − Σ_{ℓ=1..j} f_1⋯f_ℓ · Y_{n−ℓ+1, j}` with
/// `f_i = (ᾱ_{n−i+1} − α_{n−i})⁻¹` (just `μ_1` for the first), and the
/// entries above follow from
/// `Y_kj = (ᾱ_{k+1} − α_k)⁻¹ [Y_{k+1,j−1}(β̄_j − β_{j−1}) − Y_{k+1,j−2} + Y_{k−1,j}]`.
pub fn homogeneous_from_params(
    alpha: &SphericalChain,
    beta: &SphericalChain,
    mu: &[Quaternion],
    tol: f64,
) -> Result<QMatrix> {
    let (al, be) = (alpha.elems(), beta.elems());
    let (n, m) = (al.len(), be.len());
    if m > n {
        return Err(Error::UnsupportedShape(format!("parametrization needs n >= m, got n={n}, m={m}")));
    }
    let mu = checked_params(al, be, mu, tol)?;
    let mut y = QMatrix::zeros(n, m);
    let get = |y: &QMatrix, k: isize, j: isize| y.get_or_zero(k - 1, j - 1);
    // w[k-1] = (ᾱ_{k+1} − α_k)⁻¹ for k = 1..n−1.
    let w: Vec<Quaternion> = (1..n).map(|k| (al[k].conj() - al[k - 1]).inv()).collect::<Result<_>>()?;
    for s in n + 1..=n + m {
        let jb = s - n;
        let bottom = if jb == 1 {
            mu[0]
        } else {
            let j = jb - 1;
            let mut t = mu[jb - 1];
            let mut prod = Quaternion::ONE;
            for l in 1..=j {
                prod *= w[n - l - 1];
                t -= prod * get(&y, (n - l + 1) as isize, j as isize);
            }
            t
        };
        y[(n - 1, jb - 1)] = bottom;
        for k in (1..n).rev() {
            let j = s - k;
            if j > m {
                break;
            }
            let (ki, ji) = (k as isize, j as isize);
            let t = get(&y, ki + 1, ji - 1) * (be[j - 1].conj() - be[j - 2]) - get(&y, ki + 1, ji - 2)
                + get(&y, ki - 1, ji);
            y[(k - 1, j - 1)] = w[k - 1] * t;
        }
    }
    Ok(y)
}

/// Triangular Hankel solution for Jordan blocks: `Y_kj = μ_{k+j−n}` when
/// `k + j > n`, zero otherwise. Solves `𝒥_n(α) Y = Y 𝒥_m(β)ᵀ` whenever every
/// `μ_j ∈ Π_{α,β}`.
pub fn hankel_from_params(
    alpha: Quaternion,
    beta: Quaternion,
    n: usize,
    mu: &[Quaternion],
    tol: f64,
) -> Result<QMatrix> {
    let m = mu.len();
    if m > n {
        return Err(Error::UnsupportedShape(format!("parametrization needs n >= m, got n={n}, m={m}")));
    }
    let mu = checked_params(&[alpha], &vec![beta; m], mu, tol)?;
    Ok(QMatrix::from_fn(n, m, |k, j| if k + j + 2 > n { mu[k + j + 1 - n] } else { Quaternion::ZERO }))
}

/// One element of [`null_basis`].
#[derive(Clone, Debug)]
pub struct NullBasisElement {
    /// Parameter slot `j` (1-based) that is active.
    pub j: usize,
    /// Which orthonormal vector of the plane was used (0 or 1).
    pub plane_index: usize,
    pub y: QMatrix,
}

/// A real basis of `{ Y : 𝒥_𝛂 Y = Y 𝒥_𝛃ᵀ }`, `2·min(n, m)` elements: for each
/// parameter slot `j` and each orthonormal basis vector of its plane, the
/// solution with only that parameter active. Constant chains use the Hankel
/// form; for `m > n` the basis of the adjoint problem is adjointed back.
pub fn null_basis(alpha: &SphericalChain, beta: &SphericalChain, tol: f64) -> Result<Vec<NullBasisElement>> {
    let (a0, b0) = (alpha.first(), beta.first());
    if !similar(a0, b0, class_tol(tol, a0, b0)) {
        return Err(Error::NotSimilar(a0, b0));
    }
    if beta.len() > alpha.len() {
        let conj = |ch: &SphericalChain| SphericalChain::new(ch.elems().iter().map(|q| q.conj()).collect(), tol);
        return Ok(null_basis(&conj(beta)?, &conj(alpha)?, tol)?
            .into_iter()
            .map(|e| NullBasisElement { y: e.y.adjoint(), ..e })
            .collect());
    }
    let (n, m) = (alpha.len(), beta.len());
    let hankel = alpha.is_constant() && beta.is_constant();
    let mut out = Vec::with_capacity(2 * m);
    for j in 0..m {
        let plane: Plane = plane_of(alpha.last(), beta.elems()[j], tol)?;
        for (plane_index, v) in plane.basis().into_iter().enumerate() {
            let mut mu = vec![Quaternion::ZERO; m];
            mu[j] = v;
            let y = if hankel {
                hankel_from_params(a0, b0, n, &mu, tol)?
            } else {
                homogeneous_from_params(alpha, beta, &mu, tol)?
            };
            out.push(NullBasisElement { j: j + 1, plane_index, y });
        }
    }
    Ok(out)
}

/// Every solution is `particular + Σ t_i·basis_i` with real `t_i`.
#[derive(Clone, Debug)]
pub struct SolutionFamily {
    pub particular: QMatrix,
    pub basis: Vec<QMatrix>,
}

pub fn solve_all(inst: &SingularInstance) -> Result<SolutionFamily> {
    let particular = particular_solution(inst)?;
    let basis = null_basis(&inst.alpha, &inst.beta, inst.tol)?.into_iter().map(|e| e.y).collect();
    Ok(SolutionFamily { particular, basis })
}
