//! Boundary of the region where both receivers cancel the interfering
//! signal before decoding their own.
//!
//! Both transmitters use full power. For a fixed SINR target of link 1 one of
//! the two constraints on link 1 is tight at the optimum: either its own
//! receiver (then TX1's parameter is fixed and TX2's follows from the
//! line/arc problem) or the cancelling receiver RX2 (then TX2's parameter is
//! a function of TX1's and a scalar quasi-concave problem remains). Both are
//! solved and the better one is kept.

use std::fmt;

use rayon::prelude::*;

use crate::ascent::{maximize, AscentConfig, SweepMode};
use crate::boundary_dn::max_min_line_arc;
use crate::boundary_nn::{cos_difference_root, mix, mix_deriv};
use crate::channel::{ChannelConstants, ChannelRealization};
use crate::error::{domain, Error, Result};
use crate::pareto::{Boundary, BoundaryMeta};
use crate::rates::{
    rate, rates_from_powers, sinr_for_rate, split_beamformer, Beamformer, DecodingScenario,
    Powers, RateParams, RatePoint,
};

const TARGET_SLACK: f64 = 1e-12;

/// Which subproblem produced a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdWinner {
    /// RX1's own constraint tight.
    Sub1,
    /// RX2's cancellation constraint tight.
    Sub2,
    /// Neither subproblem is feasible.
    None,
}

impl DdWinner {
    pub fn as_str(self) -> &'static str {
        match self {
            DdWinner::Sub1 => "SUB1",
            DdWinner::Sub2 => "SUB2",
            DdWinner::None => "NONE",
        }
    }
}

impl fmt::Display for DdWinner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdSubSolution {
    pub x1: f64,
    pub x2: f64,
    pub gamma2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdSolveResult {
    pub gamma2_star: f64,
    pub x1_star: f64,
    pub x2_star: f64,
    pub winner: DdWinner,
    pub sub1: Option<DdSubSolution>,
    pub sub2: Option<DdSubSolution>,
}

/// `beta_i x + beta_i_tilde sqrt(1 - x^2)`: amplitude of TX_i's signal at the
/// other receiver.
fn leak1(k: &ChannelConstants, x: f64) -> f64 {
    mix(k.beta1, k.beta1_tilde, x)
}

fn leak2(k: &ChannelConstants, x: f64) -> f64 {
    mix(k.beta2, k.beta2_tilde, x)
}

/// Full-power beamformer of TX `i` whose component along `h_ii` has weight `x`.
pub fn param_beamformer_dd(x: f64, i: usize, ch: &ChannelRealization) -> Result<Beamformer> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("parameter {x} outside [0, 1]")));
    }
    split_beamformer(x, (1.0 - x * x).sqrt(), ch.direct(i), ch.crosstalk(i))
}

pub fn powers_dd(x1: f64, x2: f64, k: &ChannelConstants) -> Powers {
    Powers {
        p1: k.g11 * k.g11 * x1 * x1,
        q1: leak2(k, x2).powi(2),
        p2: k.g22 * k.g22 * x2 * x2,
        q2: leak1(k, x1).powi(2),
    }
}

/// Largest SINR of link 1 that both receivers can decode, TX2 silent.
pub fn gamma1bar_dd(k: &ChannelConstants) -> f64 {
    let s1 = k.sigma1_sq.sqrt();
    let s2 = k.sigma2_sq.sqrt();
    max_min_line_arc(k.g11 / s1, k.beta1 / s2, k.beta1_tilde / s2).value.powi(2)
}

pub fn gamma2bar_dd(k: &ChannelConstants) -> f64 {
    gamma1bar_dd(&k.swapped())
}

/// Largest TX2 parameter for which RX2 still decodes link 1 at `gamma1`
/// given TX1's parameter `x1`; `Ok(None)` when unconstrained (`gamma1 = 0`).
fn rx2_cap(gamma1: f64, x1: f64, k: &ChannelConstants) -> Result<Option<f64>> {
    if gamma1 <= 0.0 {
        return Ok(None);
    }
    let rad = leak1(k, x1).powi(2) - gamma1 * k.sigma2_sq;
    if rad < -1e-12 * gamma1 * k.sigma2_sq {
        return Err(Error::InfeasibleRadicand(rad));
    }
    Ok(Some((rad.max(0.0) / (k.g22 * k.g22 * gamma1)).sqrt()))
}

/// Subproblem with RX1's own constraint tight: TX1 uses exactly the power
/// needed along `h11`, TX2 solves the line/arc problem below RX2's cap.
///
/// Fails with [`Error::InfeasibleRadicand`] when RX2 cannot decode link 1
/// even with TX2 silent. This happens below the single-link limit when that
/// limit is set by the crosstalk peak rather than by RX1.
pub fn solve_dd_sub1(gamma1: f64, k: &ChannelConstants) -> Result<DdSubSolution> {
    let gbar = gamma1bar_dd(k);
    if !(gamma1 >= 0.0) || gamma1 > gbar * (1.0 + TARGET_SLACK) {
        return Err(Error::InfeasibleTarget { gamma: gamma1, max: gbar });
    }
    let gamma1 = gamma1.min(gbar);
    let x1 = ((gamma1 * k.sigma1_sq).sqrt() / k.g11).min(1.0);
    let cap = rx2_cap(gamma1, x1, k)?;
    let a = k.g22 / k.sigma2_sq.sqrt();
    let scale = (k.sigma1_sq * (gamma1 + 1.0)).sqrt();
    let (b, c) = (k.beta2 / scale, k.beta2_tilde / scale);
    let sol = max_min_line_arc(a, b, c);
    let x2 = cap.map_or(sol.x, |cap| sol.x.min(cap)).min(1.0);
    let value = (a * x2).min(b * x2 + c * (1.0 - x2 * x2).max(0.0).sqrt());
    Ok(DdSubSolution { x1, x2, gamma2: value * value })
}

/// Scalar problem with RX2's cancellation constraint tight: TX2's parameter
/// is `partner(x1)` and `min{s1, s2}` is maximized over `[x_lower, x_upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdSub2Problem {
    pub gamma1_star: f64,
    pub constants: ChannelConstants,
    pub x_lower: f64,
    pub x_upper: f64,
}

/// `s1`, `s2` and their derivatives at one TX1 parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdSub2Eval {
    pub s1: f64,
    pub s2: f64,
    pub ds1: f64,
    pub ds2: f64,
}

impl DdSub2Eval {
    /// `min{s1, s2}` and the derivative of the smaller branch (`s1` on ties).
    pub fn min_branch(&self) -> (f64, f64) {
        if self.s1 <= self.s2 {
            (self.s1, self.ds1)
        } else {
            (self.s2, self.ds2)
        }
    }
}

/// SINR targets of link 1 for which the second subproblem is worth solving.
pub fn sub2_window(k: &ChannelConstants) -> (f64, f64) {
    let lo = (1.0 - k.kappa1 * k.kappa1) * k.g12 * k.g12 / (k.g22 * k.g22 + k.sigma2_sq);
    let hi = (k.g11 * k.g11 * k.kappa1 * k.kappa1 / k.sigma1_sq)
        .min(k.g12 * k.g12 / k.sigma2_sq);
    (lo, hi)
}

impl DdSub2Problem {
    /// `None` when `gamma1` lies outside [`sub2_window`] or the parameter
    /// interval is empty.
    pub fn new(gamma1: f64, k: &ChannelConstants) -> Option<Self> {
        let (lo, hi) = sub2_window(k);
        if !(gamma1 >= lo * (1.0 - TARGET_SLACK) && gamma1 <= hi * (1.0 + TARGET_SLACK)) {
            return None;
        }
        let gamma1 = gamma1.clamp(lo, hi);
        if gamma1 <= 0.0 {
            return None;
        }
        let g_mr = k.g12 * k.g12 / (k.g22 * k.g22 + k.sigma2_sq);
        let x_upper = if gamma1 > g_mr {
            k.kappa1
        } else {
            cos_difference_root(k.kappa1, (gamma1 / g_mr).sqrt())
        };
        let x_lower = ((gamma1 * k.sigma1_sq).sqrt() / k.g11).max(cos_difference_root(
            k.kappa1,
            (k.sigma2_sq * gamma1).sqrt() / k.g12,
        ));
        if x_lower > x_upper + 1e-12 {
            return None;
        }
        Some(Self { gamma1_star: gamma1, constants: *k, x_lower, x_upper: x_upper.max(x_lower) })
    }

    /// TX2's parameter making RX2's constraint tight, clamped into `[0, 1]`.
    pub fn partner(&self, x1: f64) -> f64 {
        let k = &self.constants;
        let rad = leak1(k, x1).powi(2) - self.gamma1_star * k.sigma2_sq;
        (rad.max(0.0) / (k.g22 * k.g22 * self.gamma1_star)).sqrt().min(1.0)
    }

    pub fn eval(&self, x1: f64) -> DdSub2Eval {
        let k = &self.constants;
        let w = self.partner(x1);
        let dw = leak1(k, x1) * mix_deriv(k.beta1, k.beta1_tilde, x1)
            / (k.g22 * k.g22 * self.gamma1_star * w);
        let s = k.sigma2_sq.sqrt();
        let v1 = (k.g11 * k.g11 * x1 * x1 + k.sigma1_sq).sqrt();
        let dv1 = k.g11 * k.g11 * x1 / v1;
        let u = leak2(k, w);
        let du = mix_deriv(k.beta2, k.beta2_tilde, w);
        DdSub2Eval {
            s1: k.g22 * w / s,
            s2: u / v1,
            ds1: k.g22 * dw / s,
            ds2: (du * dw * v1 - u * dv1) / (v1 * v1),
        }
    }

    pub fn objective(&self, x1: f64) -> f64 {
        let e = self.eval(x1);
        e.s1.min(e.s2)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.x_lower + self.x_upper)
    }

    pub fn solve(&self, x0: f64, cfg: &AscentConfig) -> DdSubSolution {
        let r = maximize(|x| self.eval(x).min_branch(), self.x_lower, self.x_upper, x0, cfg);
        DdSubSolution { x1: r.x, x2: self.partner(r.x), gamma2: r.value * r.value }
    }
}

/// Second subproblem for target `gamma1`, started from `x0` (clamped into
/// the parameter interval by the ascent).
pub fn solve_dd_sub2(
    gamma1: f64,
    k: &ChannelConstants,
    x0: Option<f64>,
    cfg: &AscentConfig,
) -> Option<DdSubSolution> {
    let p = DdSub2Problem::new(gamma1, k)?;
    Some(p.solve(x0.unwrap_or_else(|| p.midpoint()), cfg))
}

/// Largest SINR of link 2 given SINR `gamma1` of link 1. Ties go to the
/// first subproblem.
pub fn solve_dd(
    gamma1: f64,
    k: &ChannelConstants,
    x0: Option<f64>,
    cfg: &AscentConfig,
) -> Result<DdSolveResult> {
    if !(gamma1 >= 0.0) {
        return Err(domain(format!("SINR target must be nonnegative, got {gamma1}")));
    }
    let sub1 = match solve_dd_sub1(gamma1, k) {
        Ok(s) => Some(s),
        Err(Error::InfeasibleTarget { .. } | Error::InfeasibleRadicand(_)) => None,
        Err(e) => return Err(e),
    };
    let sub2 = solve_dd_sub2(gamma1, k, x0, cfg);
    let (winner, best) = match (sub1, sub2) {
        (Some(a), Some(b)) if b.gamma2 > a.gamma2 => (DdWinner::Sub2, Some(b)),
        (Some(a), _) => (DdWinner::Sub1, Some(a)),
        (None, Some(b)) => (DdWinner::Sub2, Some(b)),
        (None, None) => (DdWinner::None, None),
    };
    let best = best.unwrap_or(DdSubSolution { x1: 0.0, x2: 0.0, gamma2: 0.0 });
    Ok(DdSolveResult {
        gamma2_star: best.gamma2,
        x1_star: best.x1,
        x2_star: best.x2,
        winner,
        sub1,
        sub2,
    })
}

fn check_grid(m: usize) -> Result<()> {
    if m < 2 {
        return Err(domain(format!("need at least 2 grid points, got {m}")));
    }
    Ok(())
}

/// Boundary on `m` uniformly spaced rates of link 1 from zero to the largest
/// rate both receivers can decode.
pub fn boundary_dd(
    k: &ChannelConstants,
    m: usize,
    epsilon: f64,
    mode: SweepMode,
) -> Result<Boundary> {
    check_grid(m)?;
    let started = std::time::Instant::now();
    let cfg = AscentConfig::with_epsilon(epsilon);
    let gbar = gamma1bar_dd(k);
    let r1_max = rate(gbar);
    let target = |j: usize| {
        if j + 1 == m {
            gbar
        } else {
            sinr_for_rate(r1_max * j as f64 / (m - 1) as f64)
        }
    };
    let point = |s: &DdSolveResult| -> Option<RatePoint> {
        if s.winner == DdWinner::None {
            return None;
        }
        let pw = powers_dd(s.x1_star, s.x2_star, k);
        let params = RateParams { case: Some(s.winner.as_str()), ..RateParams::x(s.x1_star, s.x2_star) };
        Some(rates_from_powers(DecodingScenario::DD, &pw, k.sigma1_sq, k.sigma2_sq).with_params(params))
    };
    let solved: Vec<DdSolveResult> = match mode {
        SweepMode::Sequential => {
            let mut out = Vec::with_capacity(m);
            let mut x0 = 0.0;
            for j in 0..m {
                let s = solve_dd(target(j), k, Some(x0), &cfg)?;
                x0 = s.x1_star;
                out.push(s);
            }
            out
        }
        SweepMode::Parallel => (0..m)
            .into_par_iter()
            .map(|j| solve_dd(target(j), k, None, &cfg))
            .collect::<Result<_>>()?,
    };
    let mut points = Vec::with_capacity(m);
    let mut skipped = 0;
    for s in &solved {
        match point(s) {
            Some(p) => points.push(p),
            None => skipped += 1,
        }
    }
    let mut meta = BoundaryMeta::new("dd-numerical", m);
    meta.epsilon = Some(epsilon);
    meta.skipped_samples = skipped;
    meta.wall_time = started.elapsed();
    Boundary::from_points(points, DecodingScenario::DD, meta)
}
