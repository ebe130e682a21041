//! Projected gradient ascent with backtracking for scalar quasi-concave
//! objectives on a closed interval.

/// Tuning of [`maximize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentConfig {
    /// Stop once an accepted step changes the objective by less than this.
    pub epsilon: f64,
    /// First trial displacement as a fraction of the interval width.
    pub initial_step: f64,
    pub shrink: f64,
    /// Armijo sufficient-increase factor.
    pub sufficient_increase: f64,
    pub max_iter: usize,
}

pub const DEFAULT_EPSILON: f64 = 5e-5;

/// Distance an iterate is moved off a point where the derivative blows up.
pub const NUDGE: f64 = 1e-12;

impl Default for AscentConfig {
    fn default() -> Self {
        Self::with_epsilon(DEFAULT_EPSILON)
    }
}

impl AscentConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self { epsilon, initial_step: 0.1, shrink: 0.5, sufficient_increase: 0.3, max_iter: 10_000 }
    }
}

/// How a sweep over SINR targets schedules its scalar solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// In order, each solve starting from the previous optimum.
    #[default]
    Sequential,
    /// Independent solves on the rayon pool, each starting mid-interval.
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentResult {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Maximizes `f` over `[lo, hi]` starting from `x0`. `f` returns the value and
/// the derivative; a non-finite derivative moves the iterate by [`NUDGE`]
/// towards the middle of the interval. A start on or outside the interval's
/// ends is replaced by the midpoint, since a backtracking search from an
/// infinite slope only creeps away from the edge.
pub fn maximize<F>(f: F, lo: f64, hi: f64, x0: f64, cfg: &AscentConfig) -> AscentResult
where
    F: Fn(f64) -> (f64, f64),
{
    let width = hi - lo;
    if width <= 0.0 {
        let x = x0.clamp(lo, hi);
        return AscentResult { x, value: f(x).0, iterations: 0 };
    }
    let mid = 0.5 * (lo + hi);
    let mut x = if x0 > lo && x0 < hi { x0 } else { mid };
    let eval = |x: f64| {
        let (v, d) = f(x);
        if d.is_finite() {
            return (x, v, d);
        }
        let xn = if x < mid { (x + NUDGE).min(hi) } else { (x - NUDGE).max(lo) };
        let (vn, dn) = f(xn);
        // Keep the original point when the nudge lands somewhere worse.
        if vn >= v || !v.is_finite() {
            (xn, vn, if dn.is_finite() { dn } else { 0.0 })
        } else {
            (x, v, 0.0)
        }
    };
    let (x1, mut v, mut d) = eval(x);
    x = x1;
    let mut iterations = 0;
    // Largest displacement allowed for the next step. Halved around a step
    // that crossed the peak, since the peak is then bracketed by that step.
    let mut reach = cfg.initial_step * width;
    while iterations < cfg.max_iter {
        iterations += 1;
        if d == 0.0 {
            break;
        }
        let mut t = reach / d.abs();
        let mut accepted = None;
        // Longest trial step that increased the objective at all. Next to a
        // near-vertical tangent the linear model overstates the gain of every
        // step, so the sufficient-increase test passes only for vanishing
        // steps or not at all; the better of the two candidates is taken.
        let mut fallback = None;
        loop {
            let xt = (x + t * d).clamp(lo, hi);
            if xt == x {
                break;
            }
            let trial = eval(xt);
            let (xt, vt, _) = trial;
            if vt > v {
                if vt >= v + cfg.sufficient_increase * d * (xt - x) {
                    accepted = Some(trial);
                    break;
                }
                fallback.get_or_insert(trial);
            }
            t *= cfg.shrink;
        }
        let best = match (accepted, fallback) {
            (Some(a), Some(b)) if b.1 > a.1 => Some(b),
            (a, b) => a.or(b),
        };
        let Some((xn, vn, dn)) = best else { break };
        let change = vn - v;
        let crossed = dn * d < 0.0;
        if crossed {
            reach = reach.min(0.5 * (xn - x).abs());
        }
        (x, v, d) = (xn, vn, dn);
        if change < cfg.epsilon && !crossed {
            break;
        }
    }
    AscentResult { x, value: v, iterations }
}
