//! Closed-form real roots of cubic equations with real coefficients.
//!
//! The three-real-root case uses the trigonometric form, the one-real-root
//! case Cardano's formula; each root then receives one Newton step on the
//! original polynomial. Leading coefficients that are negligible relative to
//! the others drop the degree (quadratic, then linear).

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Relative size below which a leading coefficient is treated as zero.
const DEGENERATE_LEADING: f64 = 1e-14;
/// Slack on [0, 1] membership in [`roots_in_unit_interval`].
pub const UNIT_INTERVAL_SLACK: f64 = 1e-9;
/// Roots closer than this (relative) are reported once.
const MERGE_TOL: f64 = 1e-9;
/// Relative discriminant magnitude treated as a repeated root.
const REPEATED_ROOT_TOL: f64 = 1e-14;

/// `c3 λ³ + c2 λ² + c1 λ + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl CubicCoefficients {
    pub fn new(c3: f64, c2: f64, c1: f64, c0: f64) -> Self {
        Self { c3, c2, c1, c0 }
    }

    /// Monic cubic with the given roots.
    pub fn from_roots(r: [f64; 3]) -> Self {
        Self {
            c3: 1.0,
            c2: -(r[0] + r[1] + r[2]),
            c1: r[0] * r[1] + r[0] * r[2] + r[1] * r[2],
            c0: -r[0] * r[1] * r[2],
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (3.0 * self.c3 * x + 2.0 * self.c2) * x + self.c1
    }

    pub fn max_abs(&self) -> f64 {
        self.c3.abs().max(self.c2.abs()).max(self.c1.abs()).max(self.c0.abs())
    }

    fn is_finite(&self) -> bool {
        self.c3.is_finite() && self.c2.is_finite() && self.c1.is_finite() && self.c0.is_finite()
    }
}

/// All real roots in ascending order, repeated roots reported once.
pub fn real_roots(c: &CubicCoefficients) -> Result<Vec<f64>> {
    if !c.is_finite() {
        return Err(Error::Domain(format!("non-finite cubic coefficients {c:?}")));
    }
    let scale = c.max_abs();
    if scale == 0.0 {
        return Err(Error::AllZeroCoefficients);
    }
    let mut roots = if c.c3.abs() <= DEGENERATE_LEADING * scale {
        quadratic_roots(c.c2, c.c1, c.c0, scale)
    } else {
        monic_cubic_roots(c.c2 / c.c3, c.c1 / c.c3, c.c0 / c.c3)
    };
    for r in roots.iter_mut() {
        let d = c.derivative(*r);
        if d != 0.0 {
            let polished = *r - c.eval(*r) / d;
            if polished.is_finite() && c.eval(polished).abs() <= c.eval(*r).abs() {
                *r = polished;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() <= MERGE_TOL * a.abs().max(1.0));
    Ok(roots)
}

/// Real roots in [0, 1] (with [`UNIT_INTERVAL_SLACK`]), clamped into the interval.
pub fn roots_in_unit_interval(c: &CubicCoefficients) -> Result<Vec<f64>> {
    let mut r: Vec<f64> = real_roots(c)?
        .into_iter()
        .filter(|&x| (-UNIT_INTERVAL_SLACK..=1.0 + UNIT_INTERVAL_SLACK).contains(&x))
        .map(|x| x.clamp(0.0, 1.0))
        .collect();
    r.dedup();
    Ok(r)
}

fn quadratic_roots(a: f64, b: f64, c: f64, scale: f64) -> Vec<f64> {
    if a.abs() <= DEGENERATE_LEADING * scale {
        if b.abs() <= DEGENERATE_LEADING * scale {
            // Nonzero constant: no roots.
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc.abs() <= REPEATED_ROOT_TOL * (b * b).max((4.0 * a * c).abs()) {
        return vec![-b / (2.0 * a)];
    }
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        // b = 0 and c = 0.
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// Roots of `x³ + a x² + b x + c`.
fn monic_cubic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let shift = a / 3.0;
    // Depressed cubic t³ + p t + q with x = t - a/3.
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let half_q = q / 2.0;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;
    let disc_scale = (half_q * half_q).max(third_p.abs().powi(3));

    if disc.abs() <= REPEATED_ROOT_TOL * disc_scale || disc_scale == 0.0 {
        if third_p.abs() <= f64::EPSILON * (1.0 + shift * shift) {
            return vec![-shift];
        }
        // Simple root 3q/p and double root -3q/(2p).
        return vec![3.0 * q / p - shift, -1.5 * q / p - shift];
    }
    if disc > 0.0 {
        let s = disc.sqrt();
        let t = (-half_q + s).cbrt() + (-half_q - s).cbrt();
        return vec![t - shift];
    }
    // Three distinct real roots; p < 0 here.
    let m = 2.0 * (-third_p).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    (0..3).map(|k| m * (theta - 2.0 * PI * k as f64 / 3.0).cos() - shift).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn approx(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn factored_cubic() {
        let r = real_roots(&CubicCoefficients::new(1.0, 0.0, -1.0, 0.0)).unwrap();
        assert!(approx(&r, &[-1.0, 0.0, 1.0], 1e-14), "{r:?}");
    }

    #[test]
    fn quadratic_fallback() {
        let r = real_roots(&CubicCoefficients::new(0.0, 1.0, -3.0, 2.0)).unwrap();
        assert!(approx(&r, &[1.0, 2.0], 1e-14), "{r:?}");
    }

    #[test]
    fn linear_fallback_and_constant() {
        let r = real_roots(&CubicCoefficients::new(0.0, 0.0, 1.0, -2.0)).unwrap();
        assert!(approx(&r, &[2.0], 1e-15));
        assert!(real_roots(&CubicCoefficients::new(0.0, 0.0, 0.0, 3.0)).unwrap().is_empty());
    }

    #[test]
    fn triple_root() {
        let r = real_roots(&CubicCoefficients::new(1.0, -3.0, 3.0, -1.0)).unwrap();
        assert!(approx(&r, &[1.0], 1e-12), "{r:?}");
    }

    #[test]
    fn double_root_is_reported_once() {
        let r = real_roots(&CubicCoefficients::from_roots([2.0, 2.0, -1.0])).unwrap();
        assert!(approx(&r, &[-1.0, 2.0], 1e-7), "{r:?}");
    }

    #[test]
    fn single_real_root() {
        // (x - 1)(x² + 1)
        let r = real_roots(&CubicCoefficients::new(1.0, -1.0, 1.0, -1.0)).unwrap();
        assert!(approx(&r, &[1.0], 1e-14), "{r:?}");
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(matches!(
            real_roots(&CubicCoefficients::new(0.0, 0.0, 0.0, 0.0)),
            Err(Error::AllZeroCoefficients)
        ));
    }

    #[test]
    fn unit_interval_filtering() {
        let r = roots_in_unit_interval(&CubicCoefficients::new(1.0, 0.0, -1.0, 0.0)).unwrap();
        assert!(approx(&r, &[0.0, 1.0], 1e-14));
        assert!(roots_in_unit_interval(&CubicCoefficients::new(0.0, 0.0, 1.0, -2.0))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn root_count_follows_discriminant_sign() {
        // Discriminant of a x³ + b x² + c x + d; positive <=> three distinct real roots.
        let cases = [
            CubicCoefficients::from_roots([-3.0, 0.5, 4.0]),
            CubicCoefficients::new(1.0, 0.0, 1.0, 1.0),
            CubicCoefficients::new(2.0, -1.0, 3.0, 5.0),
            CubicCoefficients::from_roots([-0.1, 0.2, 0.3]),
        ];
        for c in cases {
            let (a, b, cc, d) = (c.c3, c.c2, c.c1, c.c0);
            let delta = 18.0 * a * b * cc * d - 4.0 * b.powi(3) * d + b * b * cc * cc
                - 4.0 * a * cc.powi(3)
                - 27.0 * a * a * d * d;
            let n = real_roots(&c).unwrap().len();
            assert_eq!(n, if delta > 0.0 { 3 } else { 1 }, "{c:?}");
        }
    }

    proptest! {
        #[test]
        fn residual_is_small(c3 in -5.0..5.0f64, c2 in -5.0..5.0f64, c1 in -5.0..5.0f64, c0 in -5.0..5.0f64) {
            let c = CubicCoefficients::new(c3, c2, c1, c0);
            prop_assume!(c.max_abs() > 0.0);
            for r in real_roots(&c).unwrap() {
                // Bound relative to the magnitude of the evaluated terms.
                let terms = ((c.c3.abs() * r.abs() + c.c2.abs()) * r.abs() + c.c1.abs()) * r.abs() + c.c0.abs();
                prop_assert!(c.eval(r).abs() <= 1e-12 * terms.max(1e-300), "p({r}) = {}", c.eval(r));
            }
        }

        #[test]
        fn recovers_constructed_roots(a in -10.0..10.0f64, b in -10.0..10.0f64, d in -10.0..10.0f64) {
            let mut roots = [a, b, d];
            roots.sort_by(f64::total_cmp);
            prop_assume!(roots[1] - roots[0] > 1e-3 && roots[2] - roots[1] > 1e-3);
            let got = real_roots(&CubicCoefficients::from_roots(roots)).unwrap();
            prop_assert!(approx(&got, &roots, 1e-8), "{got:?} vs {roots:?}");
        }
    }
}
