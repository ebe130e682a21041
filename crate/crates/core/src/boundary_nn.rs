//! Boundary of the region where both receivers treat interference as noise.
//!
//! Two methods are provided. The numerical one fixes the rate of link 1 and
//! maximizes a quasi-concave scalar function of TX1's parameter; the
//! closed-form one sweeps TX1 along the MR/ZF combination and recovers TX2's
//! partner from the real roots of a cubic.

use rayon::prelude::*;

use crate::ascent::{maximize, AscentConfig, SweepMode};
use crate::channel::{ChannelConstants, ChannelRealization};
use crate::cubic::{roots_in_unit_interval, CubicCoefficients};
use crate::error::{domain, Error, Result};
use crate::pareto::{Boundary, BoundaryMeta};
use crate::rates::{
    rate, rates_from_powers, sinr_for_rate, split_beamformer, Beamformer, DecodingScenario,
    Powers, RateParams, RatePoint,
};

/// Relative slack on SINR targets at the single-user limit.
const TARGET_SLACK: f64 = 1e-12;
/// `f` is reported singular for `x1` at or below this.
pub const SINGULAR_X: f64 = 1e-12;

/// `alpha x + alpha_tilde sqrt(1 - x^2)`.
pub(crate) fn mix(a: f64, at: f64, x: f64) -> f64 {
    a * x + at * (1.0 - x * x).max(0.0).sqrt()
}

pub(crate) fn mix_deriv(a: f64, at: f64, x: f64) -> f64 {
    a - at * x / (1.0 - x * x).sqrt()
}

fn u1(k: &ChannelConstants, x: f64) -> f64 {
    mix(k.alpha1, k.alpha1_tilde, x)
}

fn u2(k: &ChannelConstants, x: f64) -> f64 {
    mix(k.alpha2, k.alpha2_tilde, x)
}

/// Received powers for TX parameters `x1`, `x2` (full power, MR/ZF plane).
pub fn powers_nn(x1: f64, x2: f64, k: &ChannelConstants) -> Powers {
    Powers {
        p1: u1(k, x1).powi(2),
        q1: k.g21 * k.g21 * x2 * x2,
        p2: u2(k, x2).powi(2),
        q2: k.g12 * k.g12 * x1 * x1,
    }
}

/// Unit-norm beamformer of TX `i` whose crosstalk component has weight `x`.
/// `x = kappa_i` gives the MR and `x = 0` the ZF beamformer.
pub fn param_beamformer_nn(x: f64, i: usize, ch: &ChannelRealization) -> Result<Beamformer> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("parameter {x} outside [0, 1]")));
    }
    split_beamformer(x, (1.0 - x * x).sqrt(), ch.crosstalk(i), ch.direct(i))
}

/// Corner rates of the strongly Pareto-optimal part of the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnEndpoints {
    /// Rate 1 with TX1 at ZF and TX2 at MR.
    pub r1_low: f64,
    /// Single-user rate of link 1.
    pub r1_high: f64,
    /// Rate 2 with TX1 at MR and TX2 at ZF.
    pub r2_low: f64,
    pub r2_high: f64,
}

pub fn nn_endpoints(k: &ChannelConstants) -> NnEndpoints {
    NnEndpoints {
        r1_low: rate(k.alpha1_tilde.powi(2) / (k.beta2.powi(2) + k.sigma1_sq)),
        r1_high: rate(k.g11 * k.g11 / k.sigma1_sq),
        r2_low: rate(k.alpha2_tilde.powi(2) / (k.beta1.powi(2) + k.sigma2_sq)),
        r2_high: rate(k.g22 * k.g22 / k.sigma2_sq),
    }
}

/// SINR of link 1 when both transmitters use MR.
pub fn gamma1_mr(k: &ChannelConstants) -> f64 {
    k.g11 * k.g11 / (k.g21 * k.g21 * k.kappa2 * k.kappa2 + k.sigma1_sq)
}

/// Largest `x <= kappa` with `kappa x + sqrt(1-kappa^2) sqrt(1-x^2) = t`,
/// clamped at zero.
pub(crate) fn cos_difference_root(kappa: f64, t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    (kappa * t - (1.0 - kappa * kappa).sqrt() * (1.0 - t * t).sqrt()).max(0.0)
}

/// Interval of TX1 parameters compatible with SINR target `gamma1` and a
/// strongly Pareto-optimal TX2.
pub fn x1_bounds(gamma1: f64, k: &ChannelConstants) -> Result<(f64, f64)> {
    let gmax = k.gamma1_max();
    if !(gamma1 >= 0.0) || gamma1 > gmax * (1.0 + TARGET_SLACK) {
        return Err(Error::InfeasibleTarget { gamma: gamma1, max: gmax });
    }
    let lower = cos_difference_root(k.kappa1, (gamma1 / gmax).sqrt());
    let gmr = gamma1_mr(k);
    let upper = if gamma1 > gmr {
        k.kappa1
    } else {
        cos_difference_root(k.kappa1, (gamma1 / gmr).sqrt())
    };
    Ok((lower, upper.max(lower)))
}

/// TX2 parameter that makes link 1 meet `gamma1` exactly.
pub fn x2_given_x1(x1: f64, gamma1: f64, k: &ChannelConstants) -> Result<f64> {
    if gamma1 == 0.0 {
        return Err(Error::DivisionByZero("x2 is unconstrained for a zero SINR target"));
    }
    let rad = u1(k, x1).powi(2) - gamma1 * k.sigma1_sq;
    if rad < -1e-12 * gamma1 * k.sigma1_sq {
        return Err(Error::InfeasibleRadicand(rad));
    }
    Ok((rad.max(0.0) / (k.g21 * k.g21 * gamma1)).sqrt())
}

/// Scalar problem for one SINR target of link 1: maximize `s(x1)`, the
/// square root of link 2's SINR, over `[x_lower, x_upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnScalarProblem {
    pub gamma1_star: f64,
    pub constants: ChannelConstants,
    pub x_lower: f64,
    pub x_upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnSolution {
    pub gamma2_star: f64,
    pub x1: f64,
    pub x2: f64,
    pub iterations: usize,
}

impl NnScalarProblem {
    pub fn new(gamma1_star: f64, constants: &ChannelConstants) -> Result<Self> {
        if !(gamma1_star > 0.0) {
            return Err(domain(format!("SINR target must be positive, got {gamma1_star}")));
        }
        let (x_lower, x_upper) = x1_bounds(gamma1_star, constants)?;
        Ok(Self { gamma1_star: gamma1_star.min(constants.gamma1_max()), constants: *constants, x_lower, x_upper })
    }

    /// `w(x1)`: TX2's parameter, clamped into `[0, 1]`.
    pub fn partner(&self, x1: f64) -> f64 {
        let k = &self.constants;
        let rad = u1(k, x1).powi(2) - self.gamma1_star * k.sigma1_sq;
        (rad.max(0.0) / (k.g21 * k.g21 * self.gamma1_star)).sqrt().min(1.0)
    }

    pub fn objective(&self, x1: f64) -> f64 {
        let k = &self.constants;
        u2(k, self.partner(x1)) / (k.g12 * k.g12 * x1 * x1 + k.sigma2_sq).sqrt()
    }

    /// `s(x1)` and `s'(x1)`; the derivative is infinite where `w(x1) = 0`.
    pub fn objective_with_derivative(&self, x1: f64) -> (f64, f64) {
        let k = &self.constants;
        let w = self.partner(x1);
        let v2 = (k.g12 * k.g12 * x1 * x1 + k.sigma2_sq).sqrt();
        let dv2 = k.g12 * k.g12 * x1 / v2;
        let uw = u2(k, w);
        let dw = u1(k, x1) * mix_deriv(k.alpha1, k.alpha1_tilde, x1)
            / (k.g21 * k.g21 * self.gamma1_star * w);
        let d = (dw * mix_deriv(k.alpha2, k.alpha2_tilde, w) * v2 - uw * dv2) / (v2 * v2);
        (uw / v2, d)
    }

    pub fn solve(&self, x0: f64, cfg: &AscentConfig) -> NnSolution {
        let r = maximize(
            |x| self.objective_with_derivative(x),
            self.x_lower,
            self.x_upper,
            x0,
            cfg,
        );
        NnSolution {
            gamma2_star: r.value * r.value,
            x1: r.x,
            x2: self.partner(r.x),
            iterations: r.iterations,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.x_lower + self.x_upper)
    }
}

/// Largest SINR of link 2 given SINR `gamma1` of link 1.
pub fn max_r2_given_r1_nn(
    gamma1: f64,
    k: &ChannelConstants,
    epsilon: f64,
) -> Result<NnSolution> {
    let p = NnScalarProblem::new(gamma1, k)?;
    Ok(p.solve(p.midpoint(), &AscentConfig::with_epsilon(epsilon)))
}

fn nn_point(x1: f64, x2: f64, k: &ChannelConstants) -> RatePoint {
    rates_from_powers(DecodingScenario::NN, &powers_nn(x1, x2, k), k.sigma1_sq, k.sigma2_sq)
}

fn check_grid(m: usize) -> Result<()> {
    if m < 2 {
        return Err(domain(format!("need at least 2 grid points, got {m}")));
    }
    Ok(())
}

/// Numerical boundary: `m` uniformly spaced rates of link 1 between the
/// strongly Pareto-optimal corners, each solved by gradient ascent.
pub fn boundary_nn_numerical(
    k: &ChannelConstants,
    m: usize,
    epsilon: f64,
    mode: SweepMode,
) -> Result<Boundary> {
    check_grid(m)?;
    let e = nn_endpoints(k);
    let grid: Vec<f64> =
        (0..m).map(|j| e.r1_low + (e.r1_high - e.r1_low) * j as f64 / (m - 1) as f64).collect();
    boundary_nn_numerical_on(k, &grid, epsilon, mode)
}

/// Numerical boundary sampled at the given rates of link 1. Rates at or
/// outside the strongly Pareto-optimal range map to the corner points.
pub fn boundary_nn_numerical_on(
    k: &ChannelConstants,
    r1_grid: &[f64],
    epsilon: f64,
    mode: SweepMode,
) -> Result<Boundary> {
    let started = std::time::Instant::now();
    let e = nn_endpoints(k);
    let cfg = AscentConfig::with_epsilon(epsilon);
    let low = || RatePoint::new(e.r1_low, e.r2_high, DecodingScenario::NN)
        .with_params(RateParams::x(0.0, k.kappa2));
    let high = || RatePoint::new(e.r1_high, e.r2_low, DecodingScenario::NN)
        .with_params(RateParams::x(k.kappa1, 0.0));
    let solve_at = |r1: f64, x0: Option<f64>| -> Result<RatePoint> {
        if r1 <= e.r1_low {
            return Ok(low());
        }
        if r1 >= e.r1_high {
            return Ok(high());
        }
        let p = NnScalarProblem::new(sinr_for_rate(r1), k)?;
        let s = p.solve(x0.unwrap_or_else(|| p.midpoint()), &cfg);
        Ok(nn_point(s.x1, s.x2, k).with_params(RateParams::x(s.x1, s.x2)))
    };
    let points: Vec<RatePoint> = match mode {
        SweepMode::Sequential => {
            let mut out = Vec::with_capacity(r1_grid.len());
            let mut x0 = 0.0;
            for &r1 in r1_grid {
                let p = solve_at(r1, Some(x0))?;
                x0 = p.params.x1.unwrap_or(x0);
                out.push(p);
            }
            out
        }
        SweepMode::Parallel => {
            r1_grid.par_iter().map(|&r1| solve_at(r1, None)).collect::<Result<_>>()?
        }
    };
    let mut meta = BoundaryMeta::new("nn-numerical", r1_grid.len());
    meta.epsilon = Some(epsilon);
    meta.wall_time = started.elapsed();
    Boundary::from_points(points, DecodingScenario::NN, meta)
}

/// Parameter of the normalized combination `lambda MR + (1 - lambda) ZF`.
pub fn lambda_to_x(lambda: f64, kappa: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(domain(format!("lambda {lambda} outside [0, 1]")));
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(domain(format!("kappa {kappa} outside (0, 1)")));
    }
    let rho = 1.0 - (1.0 - kappa * kappa).sqrt();
    Ok(kappa * lambda / (2.0 * rho * lambda * lambda - 2.0 * rho * lambda + 1.0).sqrt())
}

/// TX1 side of the stationarity condition; zero at `x1 = kappa1`.
pub fn f_value(x1: f64, k: &ChannelConstants) -> Result<f64> {
    if x1 <= SINGULAR_X {
        return Err(Error::SingularAtZero(x1));
    }
    let v2_sq = k.g12 * k.g12 * x1 * x1 + k.sigma2_sq;
    Ok(mix_deriv(k.alpha1, k.alpha1_tilde, x1) * v2_sq / (k.g12 * k.g12 * x1 * u1(k, x1)))
}

/// TX2 side of the stationarity condition; infinite at `x2 = kappa2`.
pub fn g_value(x2: f64, k: &ChannelConstants) -> f64 {
    let v1_sq = k.g21 * k.g21 * x2 * x2 + k.sigma1_sq;
    k.g21 * k.g21 * x2 * u2(k, x2) / (mix_deriv(k.alpha2, k.alpha2_tilde, x2) * v1_sq)
}

/// Relative mismatch `|f(x1) - g(x2)| / max(1, f(x1))` of the stationarity condition.
pub fn kkt_residual_nn(x1: f64, x2: f64, k: &ChannelConstants) -> Result<f64> {
    let f = f_value(x1, k)?;
    Ok((f - g_value(x2, k)).abs() / f.max(1.0))
}

/// Cubic in TX2's combination weight whose roots in `[0, 1]` pair with a
/// TX1 point whose `f` value is `f_val`.
pub fn cubic_coefficients_nn(f_val: f64, rho2: f64, zeta2: f64) -> CubicCoefficients {
    CubicCoefficients {
        c0: -zeta2 * f_val,
        c1: (1.0 + 2.0 * rho2) * zeta2 * f_val + (1.0 - rho2),
        c2: -rho2 * (2.0 - rho2 + 4.0 * zeta2) * f_val + rho2 * rho2,
        c3: rho2 * (2.0 - rho2 + 2.0 * zeta2) * f_val - rho2 * rho2,
    }
}

/// Closed-form boundary: `m` uniform TX1 combination weights, each paired
/// with every admissible cubic root. Samples without a root in `[0, 1]` are
/// skipped and counted in the metadata.
pub fn boundary_nn_closed_form(k: &ChannelConstants, m: usize) -> Result<Boundary> {
    check_grid(m)?;
    let started = std::time::Instant::now();
    let e = nn_endpoints(k);
    let with_lambdas = |x1, x2, l1, l2| RateParams {
        lambda1: Some(l1),
        lambda2: Some(l2),
        ..RateParams::x(x1, x2)
    };
    let mut points = Vec::with_capacity(m);
    points.push(
        RatePoint::new(e.r1_low, e.r2_high, DecodingScenario::NN)
            .with_params(with_lambdas(0.0, k.kappa2, 0.0, 1.0)),
    );
    let mut skipped = 0;
    for j in 1..m - 1 {
        let l1 = j as f64 / (m - 1) as f64;
        let x1 = lambda_to_x(l1, k.kappa1)?;
        let f = f_value(x1, k)?;
        let roots = roots_in_unit_interval(&cubic_coefficients_nn(f, k.rho2, k.zeta2))?;
        if roots.is_empty() {
            skipped += 1;
            continue;
        }
        for l2 in roots {
            let x2 = lambda_to_x(l2, k.kappa2)?;
            points.push(nn_point(x1, x2, k).with_params(with_lambdas(x1, x2, l1, l2)));
        }
    }
    points.push(
        RatePoint::new(e.r1_high, e.r2_low, DecodingScenario::NN)
            .with_params(with_lambdas(k.kappa1, 0.0, 1.0, 0.0)),
    );
    let mut meta = BoundaryMeta::new("nn-closed-form", m);
    meta.skipped_samples = skipped;
    meta.wall_time = started.elapsed();
    Boundary::from_points(points, DecodingScenario::NN, meta)
}

/// Weakly Pareto-optimal segments obtained by scaling a ZF transmitter's power.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakSegments {
    /// TX2 at MR, TX1 at ZF with power `t`: from `(0, r2_high)` to `(r1_low, r2_high)`.
    pub horizontal: Vec<RatePoint>,
    /// TX1 at MR, TX2 at ZF with power `t`: from `(r1_high, 0)` to `(r1_high, r2_low)`.
    pub vertical: Vec<RatePoint>,
}

pub fn weak_segments_nn(k: &ChannelConstants, m: usize) -> Result<WeakSegments> {
    check_grid(m)?;
    let t = |j: usize| j as f64 / (m - 1) as f64;
    let point = |pw: Powers| rates_from_powers(DecodingScenario::NN, &pw, k.sigma1_sq, k.sigma2_sq);
    let horizontal = (0..m)
        .map(|j| {
            point(Powers {
                p1: t(j) * k.alpha1_tilde.powi(2),
                q1: (k.g21 * k.kappa2).powi(2),
                p2: k.g22 * k.g22,
                q2: 0.0,
            })
        })
        .collect();
    let vertical = (0..m)
        .map(|j| {
            point(Powers {
                p1: k.g11 * k.g11,
                q1: 0.0,
                p2: t(j) * k.alpha2_tilde.powi(2),
                q2: (k.g12 * k.kappa1).powi(2),
            })
        })
        .collect();
    Ok(WeakSegments { horizontal, vertical })
}
