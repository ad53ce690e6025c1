//! Seeded random instances for tests, benchmarks and demos.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::matrix::QMatrix;
use crate::poly::SphericalChain;
use crate::quaternion::Quaternion;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Components uniform in `[-1, 1]`.
pub fn random_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
    )
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> QMatrix {
    let data = (0..rows * cols).map(|_| random_quaternion(rng)).collect();
    QMatrix::from_vec(rows, cols, data).expect("shape")
}

/// Uniform random unit vector in the imaginary 3-space.
pub fn random_unit_imaginary<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let v = Quaternion::new(0.0, rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let n = v.abs();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// A random non-real class, as `(real part, imaginary radius)`.
pub fn random_class<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    (rng.gen_range(-1.0..=1.0), rng.gen_range(0.5..=1.5))
}

/// Uniform random element of the class `re + radius·S²`.
pub fn random_in_class<R: Rng + ?Sized>(rng: &mut R, re: f64, radius: f64) -> Quaternion {
    Quaternion::real(re) + random_unit_imaginary(rng) * radius
}

/// Random chain of length `n` in one class, keeping consecutive entries at
/// least `0.2·radius` away from conjugate pairs so that the singular
/// recursions stay well conditioned.
pub fn random_chain_in_class<R: Rng + ?Sized>(rng: &mut R, re: f64, radius: f64, n: usize) -> SphericalChain {
    let mut elems: Vec<Quaternion> = Vec::with_capacity(n);
    while elems.len() < n {
        let e = random_in_class(rng, re, radius);
        if let Some(&prev) = elems.last() {
            if (e - prev.conj()).abs() < 0.2 * radius {
                continue;
            }
        }
        elems.push(e);
    }
    SphericalChain::new(elems, 1e-9).expect("well separated chain")
}

/// Two chains of lengths `n`, `m` sharing one random class.
pub fn random_chain_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> (SphericalChain, SphericalChain) {
    let (re, radius) = random_class(rng);
    (random_chain_in_class(rng, re, radius, n), random_chain_in_class(rng, re, radius, m))
}

/// Two chains in distinct classes, with real parts at least 0.5 apart.
pub fn random_chain_pair_distinct<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
) -> (SphericalChain, SphericalChain) {
    let (re, radius) = random_class(rng);
    let (mut re2, radius2) = random_class(rng);
    while (re2 - re).abs() < 0.5 {
        re2 = random_class(rng).0;
    }
    (random_chain_in_class(rng, re, radius, n), random_chain_in_class(rng, re2, radius2, m))
}

/// Quaternion pair in distinct classes, with real parts at least 0.5 apart.
pub fn random_dissimilar_pair<R: Rng + ?Sized>(rng: &mut R) -> (Quaternion, Quaternion) {
    let (a, b) = random_chain_pair_distinct(rng, 1, 1);
    (a.first(), b.first())
}
