//! Boundary of the region where RX1 cancels TX2's signal first and RX2
//! treats interference as noise; the mirrored scenario follows by swapping
//! link indices.

use std::fmt;

use rayon::prelude::*;

use crate::ascent::SweepMode;
use crate::channel::{ChannelConstants, ChannelRealization};
use crate::error::{domain, Error, Result};
use crate::pareto::{Boundary, BoundaryMeta};
use crate::rates::{
    rate, rates_from_powers, split_beamformer, Beamformer, DecodingScenario, Powers, RateParams,
};

const TARGET_SLACK: f64 = 1e-12;

/// Which regime of `max_x min{b x + c sqrt(1 - x^2), a x}` is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineArcCase {
    /// The line stays below the arc: `x = 1`.
    Mr,
    /// The optimum is where line and arc cross.
    Intersect,
    /// The arc's peak lies under the line: `x = b / sqrt(b^2 + c^2)`.
    Crosstalk,
}

impl LineArcCase {
    pub fn as_str(self) -> &'static str {
        match self {
            LineArcCase::Mr => "MR",
            LineArcCase::Intersect => "INTERSECT",
            LineArcCase::Crosstalk => "CROSSTALK",
        }
    }
}

impl fmt::Display for LineArcCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineArcSolution {
    pub x: f64,
    /// `min{b x + c sqrt(1 - x^2), a x}` at `x`.
    pub value: f64,
    pub case: LineArcCase,
}

/// Maximizes `min{b x + c sqrt(1 - x^2), a x}` over `x` in `[0, 1]` for
/// nonnegative `a`, `b`, `c`.
pub fn max_min_line_arc(a: f64, b: f64, c: f64) -> LineArcSolution {
    if a <= b {
        return LineArcSolution { x: 1.0, value: a, case: LineArcCase::Mr };
    }
    if a * b <= b * b + c * c {
        let x = c / (c * c + (a - b) * (a - b)).sqrt();
        return LineArcSolution { x, value: a * x, case: LineArcCase::Intersect };
    }
    let norm = (b * b + c * c).sqrt();
    LineArcSolution { x: b / norm, value: norm, case: LineArcCase::Crosstalk }
}

/// TX1 with power `x1^2 + y1^2` in the MR/ZF plane, TX2 at full power in the
/// plane spanned by its direct and crosstalk channels.
pub fn param_beamformers_dn(
    x1: f64,
    y1: f64,
    x2: f64,
    ch: &ChannelRealization,
) -> Result<(Beamformer, Beamformer)> {
    if !(0.0..=1.0).contains(&x2) {
        return Err(domain(format!("x2 = {x2} outside [0, 1]")));
    }
    let w1 = split_beamformer(x1, y1, &ch.h12, &ch.h11)?;
    let w2 = split_beamformer(x2, (1.0 - x2 * x2).sqrt(), &ch.h22, &ch.h21)?;
    Ok((w1, w2))
}

pub fn powers_dn(x1: f64, y1: f64, x2: f64, k: &ChannelConstants) -> Powers {
    Powers {
        p1: (k.alpha1 * x1 + k.alpha1_tilde * y1).powi(2),
        q1: (k.beta2 * x2 + k.beta2_tilde * (1.0 - x2 * x2).max(0.0).sqrt()).powi(2),
        p2: k.g22 * k.g22 * x2 * x2,
        q2: k.g12 * k.g12 * x1 * x1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DnSolveResult {
    pub x1_star: f64,
    pub y1_star: f64,
    pub x2_star: f64,
    pub gamma2_star: f64,
    pub case: LineArcCase,
}

/// Largest SINR of link 2 when link 1 must reach SINR `gamma1`.
pub fn solve_dn(gamma1: f64, k: &ChannelConstants) -> Result<DnSolveResult> {
    let gmax = k.gamma1_max();
    if !(gamma1 >= 0.0) || gamma1 > gmax * (1.0 + TARGET_SLACK) {
        return Err(Error::InfeasibleTarget { gamma: gamma1, max: gmax });
    }
    let gamma1 = gamma1.min(gmax);
    let amp = (gamma1 * k.sigma1_sq).sqrt();
    let g11_sq = k.g11 * k.g11;
    // Left end of the constraint line alpha1 x + alpha1_tilde y = amp inside
    // the quarter disc.
    let x1 = ((k.alpha1 * amp - k.alpha1_tilde * (g11_sq - amp * amp).max(0.0).sqrt()) / g11_sq)
        .max(0.0);
    let y1 = if gamma1 == 0.0 {
        0.0
    } else {
        ((amp - k.alpha1 * x1) / k.alpha1_tilde).clamp(0.0, (1.0 - x1 * x1).max(0.0).sqrt())
    };
    let scale = (k.sigma1_sq * (gamma1 + 1.0)).sqrt();
    let a = k.g22 / (x1 * x1 * k.g12 * k.g12 + k.sigma2_sq).sqrt();
    let sol = max_min_line_arc(a, k.beta2 / scale, k.beta2_tilde / scale);
    Ok(DnSolveResult {
        x1_star: x1,
        y1_star: y1,
        x2_star: sol.x,
        gamma2_star: sol.value * sol.value,
        case: sol.case,
    })
}

/// Largest SINR of link 2 with TX1 silent.
pub fn gamma2bar_dn(k: &ChannelConstants) -> (f64, LineArcCase) {
    let s = solve_dn(0.0, k).expect("a zero target is always feasible");
    (s.gamma2_star, s.case)
}

fn check_grid(m: usize) -> Result<()> {
    if m < 2 {
        return Err(domain(format!("need at least 2 grid points, got {m}")));
    }
    Ok(())
}

/// Closed-form boundary on `m` uniformly spaced rates of link 1 from zero to
/// the single-user rate.
pub fn boundary_dn(k: &ChannelConstants, m: usize) -> Result<Boundary> {
    boundary_dn_with(k, m, SweepMode::Sequential)
}

pub fn boundary_dn_with(k: &ChannelConstants, m: usize, mode: SweepMode) -> Result<Boundary> {
    check_grid(m)?;
    let started = std::time::Instant::now();
    let r1_max = rate(k.gamma1_max());
    let point = |j: usize| -> Result<_> {
        let r1 = r1_max * j as f64 / (m - 1) as f64;
        let gamma1 = if j + 1 == m { k.gamma1_max() } else { crate::rates::sinr_for_rate(r1) };
        let s = solve_dn(gamma1, k)?;
        let pw = powers_dn(s.x1_star, s.y1_star, s.x2_star, k);
        let params = RateParams {
            x1: Some(s.x1_star),
            y1: Some(s.y1_star),
            x2: Some(s.x2_star),
            case: Some(s.case.as_str()),
            ..RateParams::default()
        };
        Ok(rates_from_powers(DecodingScenario::DN, &pw, k.sigma1_sq, k.sigma2_sq)
            .with_params(params))
    };
    let points = match mode {
        SweepMode::Sequential => (0..m).map(point).collect::<Result<Vec<_>>>()?,
        SweepMode::Parallel => (0..m).into_par_iter().map(point).collect::<Result<Vec<_>>>()?,
    };
    let mut meta = BoundaryMeta::new("dn-closed-form", m);
    meta.wall_time = started.elapsed();
    Boundary::from_points(points, DecodingScenario::DN, meta)
}

/// Mirror of [`boundary_dn`]: RX2 cancels TX1's signal first.
pub fn boundary_nd(k: &ChannelConstants, m: usize) -> Result<Boundary> {
    boundary_nd_with(k, m, SweepMode::Sequential)
}

pub fn boundary_nd_with(k: &ChannelConstants, m: usize, mode: SweepMode) -> Result<Boundary> {
    let mut b = boundary_dn_with(&k.swapped(), m, mode)?.swapped()?;
    b.meta.method = "nd-closed-form".into();
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{derive_constants, random_rayleigh, synth_from_constants, Preset};
    use crate::rates::{received_powers, sinr_pair};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line_arc_scan(a: f64, b: f64, c: f64, n: usize) -> f64 {
        (0..=n)
            .map(|j| {
                let x = j as f64 / n as f64;
                (b * x + c * (1.0 - x * x).sqrt()).min(a * x)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn line_arc_cases_match_scan() {
        for (a, b, c, case) in [
            (1.0, 2.0, 0.5, LineArcCase::Mr),
            (2.0, 1.0, 3.0, LineArcCase::Intersect),
            (5.0, 2.0, 0.5, LineArcCase::Crosstalk),
        ] {
            let s = max_min_line_arc(a, b, c);
            assert_eq!(s.case, case);
            assert!((s.value - line_arc_scan(a, b, c, 200_000)).abs() < 1e-4, "{a} {b} {c}");
        }
    }

    #[test]
    fn line_arc_branches_agree_at_guards() {
        // a = b: MR and INTERSECT coincide.
        let (b, c) = (0.7, 0.4);
        let mr = max_min_line_arc(b, b, c);
        let inter = max_min_line_arc(b * (1.0 + 1e-12), b, c);
        assert!((mr.value - inter.value).abs() < 1e-10);
        // a b = b^2 + c^2 exactly: INTERSECT and CROSSTALK coincide.
        let (a, b, c) = (1.0, 0.5, 0.5);
        let at = max_min_line_arc(a, b, c);
        let past = max_min_line_arc(a * (1.0 + 1e-12), b, c);
        assert_eq!(at.case, LineArcCase::Intersect);
        assert_eq!(past.case, LineArcCase::Crosstalk);
        assert!((at.value - past.value).abs() < 1e-10);
        assert!((at.x - past.x).abs() < 1e-5);
    }

    #[test]
    fn parameterized_powers_match_explicit_vectors() {
        let ch = random_rayleigh(3, 21).unwrap();
        let k = derive_constants(&ch).unwrap();
        for (x1, y1, x2) in [(0.0, 1.0, 0.3), (0.4, 0.5, 1.0), (0.2, 0.1, 0.0)] {
            let (w1, w2) = param_beamformers_dn(x1, y1, x2, &ch).unwrap();
            let pw = received_powers(&w1, &w2, &ch).unwrap();
            let c = powers_dn(x1, y1, x2, &k);
            for (u, v) in [(pw.p1, c.p1), (pw.q1, c.q1), (pw.p2, c.p2), (pw.q2, c.q2)] {
                assert!((u - v).abs() < 1e-12 * (1.0 + v), "{pw:?} vs {c:?}");
            }
        }
        let c = powers_dn(0.0, 1.0, 1.0, &k);
        assert!((c.p1 - k.alpha1_tilde.powi(2)).abs() < 1e-12);
        assert!((c.p2 - k.g22 * k.g22).abs() < 1e-12);
        assert!(param_beamformers_dn(0.9, 0.9, 0.5, &ch).is_err());
    }

    #[test]
    fn zero_target_silences_tx1() {
        let k = Preset::Fig4.constants();
        let s = solve_dn(0.0, &k).unwrap();
        assert_eq!((s.x1_star, s.y1_star), (0.0, 0.0));
        let (g, _) = gamma2bar_dn(&k);
        assert_eq!(g, s.gamma2_star);
    }

    #[test]
    fn gamma2bar_branches() {
        // Weak direct link of RX2 relative to the crosstalk it must decode.
        let k = ChannelConstants::new(1.0, 1.0, 3.0, 0.5, 0.5, 0.9, 1.0, 1.0).unwrap();
        let (g, case) = gamma2bar_dn(&k);
        assert_eq!(case, LineArcCase::Mr);
        assert!((g - k.g22 * k.g22 / k.sigma2_sq).abs() < 1e-12);
        // Strong direct link: decoding at RX1 limits.
        let k = ChannelConstants::new(1.0, 1.0, 0.5, 3.0, 0.5, 0.9, 1.0, 1.0).unwrap();
        let (g, case) = gamma2bar_dn(&k);
        assert_eq!(case, LineArcCase::Crosstalk);
        assert!((g - k.g21 * k.g21 / k.sigma1_sq).abs() < 1e-12);
    }

    #[test]
    fn single_user_target_uses_full_power_mr() {
        let k = Preset::Fig3.constants();
        let s = solve_dn(k.gamma1_max(), &k).unwrap();
        assert!((s.x1_star.powi(2) + s.y1_star.powi(2) - 1.0).abs() < 1e-10);
        assert!((s.y1_star / s.x1_star - k.alpha1_tilde / k.alpha1).abs() < 1e-6);
        assert!(matches!(solve_dn(1.1 * k.gamma1_max(), &k), Err(Error::InfeasibleTarget { .. })));
    }

    #[test]
    fn constraint_and_power_dichotomy_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for seed in 0..50 {
            let k = derive_constants(&random_rayleigh(4, seed).unwrap()).unwrap();
            let gamma1 = rng.random::<f64>() * k.gamma1_max();
            let s = solve_dn(gamma1, &k).unwrap();
            let pw = powers_dn(s.x1_star, s.y1_star, s.x2_star, &k);
            assert!((pw.p1 / k.sigma1_sq - gamma1).abs() <= 1e-10 * gamma1.max(1e-300));
            let on_circle = (s.x1_star.powi(2) + s.y1_star.powi(2) - 1.0).abs() < 1e-10;
            assert!(on_circle || s.x1_star == 0.0, "{s:?}");
            let (_, g2) = sinr_pair(DecodingScenario::DN, &pw, k.sigma1_sq, k.sigma2_sq);
            assert!((g2 - s.gamma2_star).abs() <= 1e-10 * g2.max(1.0));
        }
    }

    #[test]
    fn x1_is_the_left_end_of_the_constraint_segment() {
        let k = Preset::Fig2.constants();
        for gamma1 in [0.1, 0.5, 0.9] {
            let s = solve_dn(gamma1, &k).unwrap();
            let amp = (gamma1 * k.sigma1_sq).sqrt();
            // Feasible points of the segment satisfy x^2 + y^2 <= 1 with y = (amp - alpha1 x)/alpha1_tilde.
            let x = s.x1_star - 1e-6;
            if x >= 0.0 {
                let y = (amp - k.alpha1 * x) / k.alpha1_tilde;
                assert!(x * x + y * y > 1.0, "gamma1 {gamma1}");
            }
        }
    }

    #[test]
    fn boundary_starts_at_gamma2bar_and_is_monotone() {
        let k = Preset::Fig4.constants();
        let b = boundary_dn(&k, 101).unwrap();
        assert!(b.is_monotone());
        assert_eq!(b.points[0].r1, 0.0);
        assert!((b.points[0].r2 - rate(gamma2bar_dn(&k).0)).abs() < 1e-12);
        assert!((b.max_r1() - rate(k.gamma1_max())).abs() < 1e-12);
    }

    #[test]
    fn nd_is_mirrored_dn_of_swapped_channel() {
        let k = Preset::Fig4.constants();
        let nd = boundary_nd(&k, 50).unwrap();
        let dn = boundary_dn(&k.swapped(), 50).unwrap();
        // Mirroring turns DN's horizontal run into a vertical one, of which
        // only the top point survives.
        let mirrored: Vec<(f64, f64)> = dn.points.iter().rev().map(|p| (p.r2, p.r1)).collect();
        for p in &nd.points {
            assert!(mirrored.contains(&(p.r1, p.r2)));
        }
        assert_eq!(nd.points, dn.swapped().unwrap().points);
        assert!(nd.points.iter().all(|p| p.scenario == DecodingScenario::ND));
    }

    #[test]
    fn explicit_vectors_reproduce_boundary_points() {
        let k = Preset::Fig2.constants();
        let ch = synth_from_constants(&k);
        for p in boundary_dn(&k, 20).unwrap().points {
            let q = &p.params;
            let (w1, w2) = param_beamformers_dn(q.x1.unwrap(), q.y1.unwrap(), q.x2.unwrap(), &ch).unwrap();
            let r = crate::rates::rate_pair(DecodingScenario::DN, &w1, &w2, &ch).unwrap();
            assert!((r.r1 - p.r1).abs() < 1e-10 && (r.r2 - p.r2).abs() < 1e-10);
        }
    }

    #[test]
    fn parallel_matches_sequential_exactly() {
        let k = Preset::Fig3.constants();
        let a = boundary_dn_with(&k, 80, SweepMode::Sequential).unwrap();
        let b = boundary_dn_with(&k, 80, SweepMode::Parallel).unwrap();
        assert_eq!(a.points, b.points);
    }
}
