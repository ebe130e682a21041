//! Small complex-vector helpers. Channel vectors are short (n_T antennas), so
//! plain `Vec<Complex64>` is all that is needed.

use num_complex::Complex64;

pub type CVector = Vec<Complex64>;

/// Hermitian inner product `x^H y`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum()
}

pub fn norm(x: &[Complex64]) -> f64 {
    norm_sqr(x).sqrt()
}

pub fn scale(x: &[Complex64], s: Complex64) -> CVector {
    x.iter().map(|a| a * s).collect()
}

pub fn add(x: &[Complex64], y: &[Complex64]) -> CVector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub(x: &[Complex64], y: &[Complex64]) -> CVector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Orthogonal projection of `y` onto span(x): `x x^H y / ||x||^2`.
pub fn project(x: &[Complex64], y: &[Complex64]) -> CVector {
    let coef = inner(x, y) / norm_sqr(x);
    scale(x, coef)
}

/// Projection of `y` onto the orthogonal complement of span(x).
pub fn project_perp(x: &[Complex64], y: &[Complex64]) -> CVector {
    sub(y, &project(x, y))
}

pub fn normalized(x: &[Complex64]) -> CVector {
    let n = norm(x);
    scale(x, Complex64::new(1.0 / n, 0.0))
}
