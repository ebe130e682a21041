//! Brute-force boundaries: every point of a uniform grid over a scenario's
//! beamforming parameters is evaluated and the cloud is Pareto-filtered.
//!
//! NN and DD use the two full-power parameters `(x1, x2)` on `[0, 1]^2`. DN
//! uses TX1's point `(x1, y1)` in the quarter disc (cells outside it are
//! skipped) and TX2's full-power parameter `x2`. ND is DN with link indices
//! interchanged.
//!
//! Rates come from the closed-form received powers. For DN the rate of link 1
//! does not depend on `x2`, so each `(x1, y1)` cell reduces to the largest
//! rate of link 2 over the `x2` axis before filtering; this is the inner loop
//! of the whole oracle and is written to vectorize.

use rayon::prelude::*;

use crate::ascent::SweepMode;
use crate::boundary_dd::{param_beamformer_dd, powers_dd};
use crate::boundary_dn::{param_beamformers_dn, powers_dn};
use crate::boundary_nn::{param_beamformer_nn, powers_nn};
use crate::channel::{ChannelConstants, ChannelRealization};
use crate::error::{domain, Result};
use crate::pareto::{pareto_indices, Boundary, BoundaryMeta, Dominance};
use crate::rates::{rate, received_powers, sinr_pair, DecodingScenario, RateParams, RatePoint};

pub const MIN_GRID: usize = 10;

/// Cells with `x1^2 + y1^2` above `1 + DISC_SLACK` lie outside the quarter disc.
const DISC_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub scenario: DecodingScenario,
    /// Grid points per parameter axis.
    pub m: usize,
    pub constants: ChannelConstants,
}

impl OracleConfig {
    pub fn new(scenario: DecodingScenario, m: usize, constants: ChannelConstants) -> Result<Self> {
        let cfg = Self { scenario, m, constants };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.m < MIN_GRID {
            return Err(domain(format!("oracle needs at least {MIN_GRID} grid points, got {}", self.m)));
        }
        Ok(())
    }
}

/// Number of beamforming parameters the oracle enumerates.
pub fn parameter_count(scenario: DecodingScenario) -> usize {
    match scenario {
        DecodingScenario::NN | DecodingScenario::DD => 2,
        DecodingScenario::DN | DecodingScenario::ND => 3,
    }
}

/// A grid point in SINR space with the parameters that produced it.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    g1: f64,
    g2: f64,
    x1: f64,
    y1: Option<f64>,
    x2: f64,
}

fn axis(m: usize) -> Vec<f64> {
    (0..m).map(|i| i as f64 / (m - 1) as f64).collect()
}

fn keep_front(c: Vec<Candidate>) -> Vec<Candidate> {
    let pairs: Vec<(f64, f64)> = c.iter().map(|c| (c.g1, c.g2)).collect();
    pareto_indices(&pairs, Dominance::Weak).into_iter().map(|i| c[i]).collect()
}

/// Runs `row` for every first-axis index, filters each row, then the union.
fn collect_rows<F>(m: usize, mode: SweepMode, row: F) -> Vec<Candidate>
where
    F: Fn(usize) -> Vec<Candidate> + Sync,
{
    let rows: Vec<Vec<Candidate>> = match mode {
        SweepMode::Sequential => (0..m).map(|i| keep_front(row(i))).collect(),
        SweepMode::Parallel => (0..m).into_par_iter().map(|i| keep_front(row(i))).collect(),
    };
    keep_front(rows.into_iter().flatten().collect())
}

fn to_boundary(front: Vec<Candidate>, scenario: DecodingScenario, method: &str, m: usize) -> Result<Boundary> {
    let points = front
        .into_iter()
        .map(|c| {
            let params = RateParams { y1: c.y1, ..RateParams::x(c.x1, c.x2) };
            RatePoint::new(rate(c.g1), rate(c.g2), scenario).with_params(params)
        })
        .collect();
    Boundary::from_points(points, scenario, BoundaryMeta::new(method, m))
}

pub fn brute_force_boundary(cfg: OracleConfig) -> Result<Boundary> {
    brute_force_boundary_with(cfg, SweepMode::Sequential)
}

pub fn brute_force_boundary_with(cfg: OracleConfig, mode: SweepMode) -> Result<Boundary> {
    cfg.validate()?;
    let started = std::time::Instant::now();
    let k = &cfg.constants;
    let m = cfg.m;
    let mut b = match cfg.scenario {
        DecodingScenario::NN => to_boundary(grid_nn(k, m, mode), DecodingScenario::NN, "oracle-nn", m)?,
        DecodingScenario::DD => to_boundary(grid_dd(k, m, mode), DecodingScenario::DD, "oracle-dd", m)?,
        DecodingScenario::DN => to_boundary(grid_dn(k, m, mode), DecodingScenario::DN, "oracle-dn", m)?,
        DecodingScenario::ND => {
            let mut b = to_boundary(grid_dn(&k.swapped(), m, mode), DecodingScenario::DN, "oracle-nd", m)?
                .swapped()?;
            b.meta = BoundaryMeta::new("oracle-nd", m);
            b
        }
    };
    b.meta.wall_time = started.elapsed();
    Ok(b)
}

fn grid_nn(k: &ChannelConstants, m: usize, mode: SweepMode) -> Vec<Candidate> {
    let t = axis(m);
    let pw: Vec<_> = t.iter().map(|&x| powers_nn(x, x, k)).collect();
    collect_rows(m, mode, |i| {
        let (p1, q2) = (pw[i].p1, pw[i].q2);
        (0..m)
            .map(|j| Candidate {
                g1: p1 / (pw[j].q1 + k.sigma1_sq),
                g2: pw[j].p2 / (q2 + k.sigma2_sq),
                x1: t[i],
                y1: None,
                x2: t[j],
            })
            .collect()
    })
}

fn grid_dd(k: &ChannelConstants, m: usize, mode: SweepMode) -> Vec<Candidate> {
    let t = axis(m);
    let pw: Vec<_> = t.iter().map(|&x| powers_dd(x, x, k)).collect();
    collect_rows(m, mode, |i| {
        let (p1, q2) = (pw[i].p1, pw[i].q2);
        (0..m)
            .map(|j| {
                let (p2, q1) = (pw[j].p2, pw[j].q1);
                Candidate {
                    g1: (p1 / k.sigma1_sq).min(q2 / (p2 + k.sigma2_sq)),
                    g2: (p2 / k.sigma2_sq).min(q1 / (p1 + k.sigma1_sq)),
                    x1: t[i],
                    y1: None,
                    x2: t[j],
                }
            })
            .collect()
    })
}

/// `max_j min(r q[j], p[j])` with eight independent lanes.
#[inline(always)]
fn max_min_lanes(r: f64, q: &[f64], p: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let qc = q.chunks_exact(8);
    let pc = p.chunks_exact(8);
    let (qt, pt) = (qc.remainder(), pc.remainder());
    for (qs, ps) in qc.zip(pc) {
        for l in 0..8 {
            let a = r * qs[l];
            let v = if a < ps[l] { a } else { ps[l] };
            acc[l] = if v > acc[l] { v } else { acc[l] };
        }
    }
    let mut best = acc.iter().fold(0.0f64, |b, &v| b.max(v));
    for (&qv, &pv) in qt.iter().zip(pt) {
        best = best.max((r * qv).min(pv));
    }
    best
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn max_min_avx2(r: f64, q: &[f64], p: &[f64]) -> f64 {
    max_min_lanes(r, q, p)
}

fn max_min_portable(r: f64, q: &[f64], p: &[f64]) -> f64 {
    max_min_lanes(r, q, p)
}

type MaxMinKernel = fn(f64, &[f64], &[f64]) -> f64;

fn max_min_kernel() -> MaxMinKernel {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports AVX2, checked just above.
            return |r, q, p| unsafe { max_min_avx2(r, q, p) };
        }
    }
    max_min_portable
}

fn grid_dn(k: &ChannelConstants, m: usize, mode: SweepMode) -> Vec<Candidate> {
    let t = axis(m);
    // Along the x2 axis: TX2's interference at RX1 and its desired power.
    let (q1, p2): (Vec<f64>, Vec<f64>) = t
        .iter()
        .map(|&x2| {
            let pw = powers_dn(0.0, 0.0, x2, k);
            (pw.q1, pw.p2)
        })
        .unzip();
    let kernel = max_min_kernel();
    let front = collect_rows(m, mode, |i| {
        let x1 = t[i];
        let q2 = k.g12 * k.g12 * x1 * x1;
        let c2 = 1.0 / (q2 + k.sigma2_sq);
        t.iter()
            .take_while(|&&y1| x1 * x1 + y1 * y1 <= 1.0 + DISC_SLACK)
            .map(|&y1| {
                let p1 = (k.alpha1 * x1 + k.alpha1_tilde * y1).powi(2);
                let c1 = 1.0 / (p1 + k.sigma1_sq);
                // min(c1 q1, c2 p2) = c2 min((c1 / c2) q1, p2)
                let g2 = c2 * kernel(c1 / c2, &q1, &p2);
                Candidate { g1: p1 / k.sigma1_sq, g2, x1, y1: Some(y1), x2: f64::NAN }
            })
            .collect()
    });
    // Recover TX2's parameter for the survivors only.
    front
        .into_iter()
        .map(|mut c| {
            let pw = powers_dn(c.x1, c.y1.unwrap_or(0.0), 0.0, k);
            let c1 = 1.0 / (pw.p1 + k.sigma1_sq);
            let c2 = 1.0 / (pw.q2 + k.sigma2_sq);
            let j = (0..m)
                .max_by(|&a, &b| {
                    let va = (c1 * q1[a]).min(c2 * p2[a]);
                    let vb = (c1 * q1[b]).min(c2 * p2[b]);
                    va.total_cmp(&vb).then(b.cmp(&a))
                })
                .expect("grid is not empty");
            c.x2 = t[j];
            c
        })
        .collect()
}

/// Cross-check mode: the same grids evaluated through explicit beamforming
/// vectors and received powers. Cost grows with `n_T`; meant for small `m`.
pub fn brute_force_boundary_explicit(cfg: OracleConfig, ch: &ChannelRealization) -> Result<Boundary> {
    cfg.validate()?;
    let m = cfg.m;
    let t = axis(m);
    let s = cfg.scenario;
    let sinr = |w1, w2| -> Result<(f64, f64)> {
        let pw = received_powers(w1, w2, ch)?;
        Ok(sinr_pair(s, &pw, ch.sigma1_sq, ch.sigma2_sq))
    };
    let mut cands = Vec::new();
    match s {
        DecodingScenario::NN | DecodingScenario::DD => {
            let make = |x: f64, i: usize| {
                if s == DecodingScenario::NN {
                    param_beamformer_nn(x, i, ch)
                } else {
                    param_beamformer_dd(x, i, ch)
                }
            };
            let w1s = t.iter().map(|&x| make(x, 1)).collect::<Result<Vec<_>>>()?;
            let w2s = t.iter().map(|&x| make(x, 2)).collect::<Result<Vec<_>>>()?;
            for (i, w1) in w1s.iter().enumerate() {
                for (j, w2) in w2s.iter().enumerate() {
                    let (g1, g2) = sinr(w1, w2)?;
                    cands.push(Candidate { g1, g2, x1: t[i], y1: None, x2: t[j] });
                }
            }
        }
        DecodingScenario::DN | DecodingScenario::ND => {
            let (ch, s_eval) = if s == DecodingScenario::ND {
                (swap_realization(ch), DecodingScenario::DN)
            } else {
                (ch.clone(), s)
            };
            for &x1 in &t {
                for &y1 in t.iter().take_while(|&&y1| x1 * x1 + y1 * y1 <= 1.0 + DISC_SLACK) {
                    for &x2 in &t {
                        let (w1, w2) = param_beamformers_dn(x1, y1.min((1.0 - x1 * x1).max(0.0).sqrt()), x2, &ch)?;
                        let pw = received_powers(&w1, &w2, &ch)?;
                        let (g1, g2) = sinr_pair(s_eval, &pw, ch.sigma1_sq, ch.sigma2_sq);
                        cands.push(Candidate { g1, g2, x1, y1: Some(y1), x2 });
                    }
                }
            }
            if s == DecodingScenario::ND {
                let b = to_boundary(keep_front(cands), DecodingScenario::DN, "oracle-explicit", m)?;
                let mut b = b.swapped()?;
                b.meta = BoundaryMeta::new("oracle-explicit", m);
                return Ok(b);
            }
        }
    }
    to_boundary(keep_front(cands), s, "oracle-explicit", m)
}

fn swap_realization(ch: &ChannelRealization) -> ChannelRealization {
    ChannelRealization {
        h11: ch.h22.clone(),
        h12: ch.h21.clone(),
        h21: ch.h12.clone(),
        h22: ch.h11.clone(),
        sigma1_sq: ch.sigma2_sq,
        sigma2_sq: ch.sigma1_sq,
    }
}
