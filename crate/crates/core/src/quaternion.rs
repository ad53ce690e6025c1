//! Quaternion scalars, conjugacy classes, and the scalar Sylvester equation
//! `a x - x b = c`.
//!
//! Two quaternions are similar (`a = h⁻¹ b h` for some `h ≠ 0`) exactly when
//! they share the real part and the modulus, so every non-real class is a
//! 2-sphere centred on the real axis.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// `w + x·i + y·j + z·k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Quaternion::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part `α - Re(α)`.
    pub fn im(self) -> Self {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `|Im(α)|`, the radius of the conjugacy class of `α`.
    pub fn im_abs(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Euclidean inner product on ℝ⁴.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn inv(self) -> Result<Self> {
        let n = self.norm_sqr();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj() / n)
    }

    pub fn is_real(self, tol: f64) -> bool {
        self.im_abs() <= tol
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn powi(self, exp: u32) -> Self {
        let mut acc = Quaternion::ONE;
        for _ in 0..exp {
            acc *= self;
        }
        acc
    }

    /// Canonical representative `Re(α) + |Im(α)|·i` of the class `[α]`.
    pub fn class_representative(self) -> Self {
        Quaternion::new(self.w, self.im_abs(), 0.0, 0.0)
    }

    /// Real 4×4 matrix of `x ↦ self·x` acting on `(w, x, y, z)`.
    pub fn left_matrix(self) -> [[f64; 4]; 4] {
        let Quaternion { w, x, y, z } = self;
        [[w, -x, -y, -z], [x, w, -z, y], [y, z, w, -x], [z, -y, x, w]]
    }

    /// Real 4×4 matrix of `x ↦ x·self`.
    pub fn right_matrix(self) -> [[f64; 4]; 4] {
        let Quaternion { w, x, y, z } = self;
        [[w, -x, -y, -z], [x, w, z, -y], [y, -z, w, x], [z, y, -x, w]]
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (o.w, o.x, o.y, o.z);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, o: Quaternion) {
        *self = *self * o;
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

/// True iff `|Re a - Re b| ≤ tol` and `||a| - |b|| ≤ tol`.
pub fn similar(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    (a.re() - b.re()).abs() <= tol && (a.abs() - b.abs()).abs() <= tol
}

/// Absolute similarity tolerance for a pair: `tol·(1 + max(|a|, |b|))`.
pub fn class_tol(tol: f64, a: Quaternion, b: Quaternion) -> f64 {
    tol * (1.0 + a.abs().max(b.abs()))
}

/// `P_{a,b} = |a|² - (a + ā)·b + b²`, the value of the class polynomial of
/// `[a]` at `b`. Nonzero exactly when `a ≁ b`.
pub fn hamilton_p(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::real(a.norm_sqr()) - (a + a.conj()) * b + b * b
}

/// Which shape of `Π_{a,b}` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneCase {
    /// `b = a`: the plane is `span{1, I}`.
    Equal,
    /// `b = ā`: the orthogonal complement of `span{1, I}`.
    Conjugate,
    /// Otherwise `span{I + Ĩ, 1 - IĨ}`.
    Generic,
}

/// A two-dimensional real subspace of ℍ with an orthonormal basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane {
    basis: [Quaternion; 2],
    case: PlaneCase,
}

impl Plane {
    pub fn basis(&self) -> [Quaternion; 2] {
        self.basis
    }

    pub fn case(&self) -> PlaneCase {
        self.case
    }

    pub fn point(&self, u: f64, v: f64) -> Quaternion {
        self.basis[0] * u + self.basis[1] * v
    }

    /// Coordinates of the orthogonal projection of `q`.
    pub fn coordinates(&self, q: Quaternion) -> (f64, f64) {
        (self.basis[0].dot(q), self.basis[1].dot(q))
    }

    pub fn project(&self, q: Quaternion) -> Quaternion {
        let (u, v) = self.coordinates(q);
        self.point(u, v)
    }

    pub fn distance(&self, q: Quaternion) -> f64 {
        (q - self.project(q)).abs()
    }

    pub fn contains(&self, q: Quaternion, tol: f64) -> bool {
        self.distance(q) <= tol * (1.0 + q.abs())
    }
}

/// The plane `Π_{a,b} = { μ : a·μ = μ·b }` for similar non-real `a`, `b`.
///
/// Writing `a = x + yI`, `b = x + yĨ`, the plane is the image of the real
/// linear map `q ↦ q - I·q·Ĩ` (rank two); the basis is extracted from the
/// images of `1, i, j, k` by pivoted Gram–Schmidt, which stays well
/// conditioned as `b` approaches `ā`.
pub fn plane_of(a: Quaternion, b: Quaternion, tol: f64) -> Result<Plane> {
    let t = class_tol(tol, a, b);
    if a.is_real(t) {
        return Err(Error::RealClass(a));
    }
    if !similar(a, b, t) || b.is_real(t) {
        return Err(Error::NotSimilar(a, b));
    }
    let ia = a.im() / a.im_abs();
    let ib = b.im() / b.im_abs();
    let case = if (ia - ib).abs() <= tol {
        PlaneCase::Equal
    } else if (ia + ib).abs() <= tol {
        PlaneCase::Conjugate
    } else {
        PlaneCase::Generic
    };

    let mut gens: Vec<Quaternion> =
        [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K].iter().map(|&q| q - ia * q * ib).collect();
    let mut basis = [Quaternion::ZERO; 2];
    for slot in basis.iter_mut() {
        let (idx, _) = gens
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.norm_sqr().total_cmp(&q.norm_sqr()))
            .expect("four generators");
        let v = gens.swap_remove(idx);
        let u = v / v.abs();
        for g in gens.iter_mut() {
            *g = *g - u * u.dot(*g);
        }
        *slot = u;
    }
    Ok(Plane { basis, case })
}

/// Outcome of `a x - x b = c`.
#[derive(Clone, Debug, PartialEq)]
pub enum SolutionSet {
    Unique(Quaternion),
    None,
    /// `point + plane`.
    AffinePlane {
        point: Quaternion,
        plane: Plane,
    },
    /// Real `a = b` and `c = 0`: every quaternion solves the equation.
    Everything,
}

impl SolutionSet {
    /// Some solution, when one exists.
    pub fn representative(&self) -> Option<Quaternion> {
        match self {
            SolutionSet::Unique(x) => Some(*x),
            SolutionSet::AffinePlane { point, .. } => Some(*point),
            SolutionSet::Everything => Some(Quaternion::ZERO),
            SolutionSet::None => None,
        }
    }
}

/// Solves `a x - x b = c`.
///
/// For `a ≁ b` the unique solution is `x = (ā c - c b)·P_{a,b}⁻¹`. For
/// `a ∼ b` non-real, a solution exists iff `ā c = c b`, and then the solution
/// set is `(2 Im a)⁻¹ c + Π_{a,b}`.
pub fn scalar_sylvester(a: Quaternion, b: Quaternion, c: Quaternion, tol: f64) -> SolutionSet {
    let t = class_tol(tol, a, b);
    if !similar(a, b, t) {
        let p = hamilton_p(a, b);
        return match p.inv() {
            Ok(pinv) => SolutionSet::Unique((a.conj() * c - c * b) * pinv),
            Err(_) => SolutionSet::None,
        };
    }
    if a.is_real(t) || b.is_real(t) {
        return if c.abs() <= t { SolutionSet::Everything } else { SolutionSet::None };
    }
    let (Ok(cond), Ok(plane)) = (plane_of(a.conj(), b, tol), plane_of(a, b, tol)) else {
        return SolutionSet::None;
    };
    if cond.distance(c) > t * (1.0 + c.abs()) {
        return SolutionSet::None;
    }
    let c = cond.project(c);
    let two_im = a.im() * 2.0;
    // two_im is nonzero: a is non-real here.
    let point = two_im.inv().map(|w| w * c).unwrap_or(Quaternion::ZERO);
    SolutionSet::AffinePlane { point, plane }
}
