//! Wall-clock scaling measurements: per-call timings over a range of grid
//! sizes and the fitted exponent of `time ~ M^p`.

use std::time::{Duration, Instant};

use serde::Serialize;

/// Grid sizes of the scaling sweep.
pub const SCALING_GRID: [usize; 4] = [125, 250, 500, 1000];

/// Seconds per call of `f`: calls are batched until a batch lasts at least
/// `min_batch`, and the fastest of `batches` batches is reported.
pub fn seconds_per_call<F: FnMut()>(mut f: F, min_batch: Duration, batches: usize) -> f64 {
    let mut reps = 1usize;
    loop {
        let t = Instant::now();
        for _ in 0..reps {
            f();
        }
        if t.elapsed() >= min_batch || reps >= 1 << 20 {
            break;
        }
        reps *= 2;
    }
    let mut best = f64::INFINITY;
    for _ in 0..batches.max(1) {
        let t = Instant::now();
        for _ in 0..reps {
            f();
        }
        best = best.min(t.elapsed().as_secs_f64() / reps as f64);
    }
    best
}

/// Least-squares slope of `ln t` against `ln m`.
pub fn fit_exponent(samples: &[(usize, f64)]) -> f64 {
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|&(m, _)| (m as f64).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, t)| t.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub name: String,
    /// `(M, seconds per call)`.
    pub timings: Vec<(usize, f64)>,
    pub exponent: f64,
}

/// Times `run(M)` for every `M` in `grid` and fits the growth exponent.
pub fn measure_scaling<F: FnMut(usize)>(
    name: &str,
    grid: &[usize],
    min_batch: Duration,
    mut run: F,
) -> ScalingReport {
    let timings: Vec<(usize, f64)> =
        grid.iter().map(|&m| (m, seconds_per_call(|| run(m), min_batch, 5))).collect();
    ScalingReport { name: name.to_string(), exponent: fit_exponent(&timings), timings }
}
