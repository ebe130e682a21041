//! Pareto filtering of rate-point clouds and boundary representation.
//!
//! Rate regions here are compact and normal (downward closed), so a boundary
//! is fully described by its north-east frontier. Between samples a boundary
//! is interpolated linearly; left of its first sample it extends
//! horizontally to `r1 = 0`, and right of its last sample the region ends.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rates::{DecodingScenario, RatePoint};

/// Scenario tag of a boundary: one decoding scenario or the union region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryTag {
    Scenario(DecodingScenario),
    Union,
}

impl BoundaryTag {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryTag::Scenario(s) => s.as_str(),
            BoundaryTag::Union => "union",
        }
    }
}

impl From<DecodingScenario> for BoundaryTag {
    fn from(s: DecodingScenario) -> Self {
        BoundaryTag::Scenario(s)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundaryMeta {
    pub method: String,
    pub grid_points: usize,
    pub epsilon: Option<f64>,
    #[serde(skip)]
    pub wall_time: Duration,
    /// Grid samples that produced no point (e.g. a cubic with no root in [0, 1]).
    pub skipped_samples: usize,
}

impl BoundaryMeta {
    pub fn new(method: &str, grid_points: usize) -> Self {
        Self { method: method.to_string(), grid_points, ..Self::default() }
    }
}

/// Ordered frontier: `r1` strictly increasing, `r2` non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Boundary {
    pub points: Vec<RatePoint>,
    pub tag: BoundaryTag,
    pub meta: BoundaryMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// Drop a point only if another point beats it strictly in both rates.
    Weak,
    /// Drop a point if another point is at least as good in both rates.
    Strict,
}

fn by_r1_desc_then_r2_desc(a: (f64, f64), b: (f64, f64)) -> Ordering {
    b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1))
}

/// Indices of the non-dominated pairs, ordered by ascending first coordinate.
///
/// Pairs sharing a first coordinate collapse to the one with the largest
/// second coordinate. Sort-and-sweep, O(L log L).
pub fn pareto_indices(pairs: &[(f64, f64)], mode: Dominance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by(|&a, &b| by_r1_desc_then_r2_desc(pairs[a], pairs[b]).then(a.cmp(&b)));
    let mut kept = Vec::new();
    let mut best_right = f64::NEG_INFINITY;
    let mut i = 0;
    while i < order.len() {
        let head = order[i];
        let r1 = pairs[head].0;
        let r2 = pairs[head].1;
        let keep = match mode {
            Dominance::Weak => r2 >= best_right,
            Dominance::Strict => r2 > best_right,
        };
        if keep {
            kept.push(head);
        }
        // Skip the rest of the equal-r1 group: the head carries its max r2.
        while i < order.len() && pairs[order[i]].0 == r1 {
            i += 1;
        }
        best_right = best_right.max(r2);
    }
    kept.reverse();
    kept
}

/// Retains the points not strictly dominated in both rates (weak Pareto optimality).
pub fn pareto_filter(points: Vec<RatePoint>) -> Result<Boundary> {
    pareto_filter_with(points, Dominance::Weak)
}

pub fn pareto_filter_with(points: Vec<RatePoint>, mode: Dominance) -> Result<Boundary> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    if points.iter().any(|p| !(p.r1.is_finite() && p.r2.is_finite())) {
        return Err(Error::Domain("rate points must be finite".into()));
    }
    let tag = BoundaryTag::Scenario(first.scenario);
    let pairs: Vec<(f64, f64)> = points.iter().map(|p| (p.r1, p.r2)).collect();
    let idx = pareto_indices(&pairs, mode);
    let mut slots: Vec<Option<RatePoint>> = points.into_iter().map(Some).collect();
    let points = idx.into_iter().map(|i| slots[i].take().expect("unique index")).collect();
    Ok(Boundary { points, tag, meta: BoundaryMeta::default() })
}

impl Boundary {
    /// Pareto-filters `points` and tags the result.
    pub fn from_points(
        points: Vec<RatePoint>,
        tag: impl Into<BoundaryTag>,
        meta: BoundaryMeta,
    ) -> Result<Self> {
        let mut b = pareto_filter(points)?;
        b.tag = tag.into();
        b.meta = meta;
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_r1(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.r1)
    }

    pub fn max_r2(&self) -> f64 {
        self.points.first().map_or(0.0, |p| p.r2)
    }

    /// Checks the ordering invariants.
    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[1].r1 > w[0].r1 && w[1].r2 <= w[0].r2)
    }

    /// Largest `r2` achievable together with `r1`, treating the region as normal.
    /// `None` when `r1` lies beyond the boundary's last point.
    pub fn r2_at(&self, r1: f64) -> Option<f64> {
        let pts = &self.points;
        let first = pts.first()?;
        if r1 <= first.r1 {
            return Some(first.r2);
        }
        let last = pts.last()?;
        if r1 > last.r1 {
            return None;
        }
        // First index with pts[k].r1 >= r1; k >= 1 here.
        let k = pts.partition_point(|p| p.r1 < r1);
        let (a, b) = (&pts[k - 1], &pts[k]);
        let t = (r1 - a.r1) / (b.r1 - a.r1);
        Some(a.r2 + t * (b.r2 - a.r2))
    }

    /// Mirrors every point across the diagonal (link indices interchanged).
    pub fn swapped(&self) -> Result<Self> {
        let pts = self.points.iter().map(RatePoint::swapped).collect();
        let tag = match self.tag {
            BoundaryTag::Scenario(s) => BoundaryTag::Scenario(s.swapped()),
            BoundaryTag::Union => BoundaryTag::Union,
        };
        Boundary::from_points(pts, tag, self.meta.clone())
    }

    /// Writes the boundary in the CSV schema
    /// `scenario,r1_bpcu,r2_bpcu,x1,y1,x2,y2,lambda1,lambda2[,case]`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let with_case = self.points.iter().any(|p| p.params.case.is_some());
        let mut s = String::from("scenario,r1_bpcu,r2_bpcu,x1,y1,x2,y2,lambda1,lambda2");
        if with_case {
            s.push_str(",case");
        }
        s.push('\n');
        for p in &self.points {
            let opt = |v: Option<f64>| v.map(format_sig12).unwrap_or_default();
            let q = &p.params;
            let _ = write!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                self.tag.as_str(),
                format_sig12(p.r1),
                format_sig12(p.r2),
                opt(q.x1),
                opt(q.y1),
                opt(q.x2),
                opt(q.y2),
                opt(q.lambda1),
                opt(q.lambda2)
            );
            if with_case {
                s.push(',');
                s.push_str(q.case.unwrap_or(""));
            }
            s.push('\n');
        }
        out.write_all(s.as_bytes())?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Fixed-point decimal with 12 significant digits.
pub fn format_sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0.00000000000".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).clamp(0, 340) as usize;
    let s = format!("{v:.decimals$}");
    // Rounding can carry into a new leading digit (9.99.. -> 10.0..).
    let carried = s.trim_start_matches('-').parse::<f64>().is_ok_and(|r| {
        r >= 10f64.powi(exp + 1)
    });
    if carried && decimals > 0 {
        format!("{v:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

/// Boundary of the union of several normal regions on a common `r1` grid.
///
/// Each input is resampled at `m` uniformly spaced `r1` values on
/// `[0, max r1]` and the pointwise maximum of `r2` is kept. The vertical drop
/// at the largest `r1` is implicit in the last point.
pub fn union_boundary(boundaries: &[Boundary], m: usize) -> Result<Boundary> {
    if boundaries.is_empty() || boundaries.iter().all(|b| b.is_empty()) {
        return Err(Error::EmptyInput);
    }
    let m = m.max(2);
    let r1_max = boundaries.iter().map(Boundary::max_r1).fold(0.0, f64::max);
    let mut points = Vec::with_capacity(m);
    for k in 0..m {
        let r1 = if k + 1 == m { r1_max } else { r1_max * k as f64 / (m - 1) as f64 };
        let mut best: Option<(f64, DecodingScenario)> = None;
        for b in boundaries.iter().filter(|b| !b.is_empty()) {
            if let Some(r2) = b.r2_at(r1) {
                if best.is_none_or(|(v, _)| r2 > v) {
                    best = Some((r2, b.points[0].scenario));
                }
            }
        }
        if let Some((r2, s)) = best {
            points.push(RatePoint::new(r1, r2, s));
        }
    }
    let mut out = pareto_filter(points)?;
    out.tag = BoundaryTag::Union;
    out.meta = BoundaryMeta::new("union", m);
    Ok(out)
}

/// Largest shortfall of `outer` below `inner`: the maximum over points of
/// `inner` of how far `r2` exceeds `outer`'s envelope at `r1 - slack_r1`.
/// Points beyond `outer`'s `r1` range count with their full `r2`.
pub fn max_excess(inner: &Boundary, outer: &[&Boundary], slack_r1: f64) -> f64 {
    inner
        .points
        .iter()
        .map(|p| {
            let q = (p.r1 - slack_r1).max(0.0);
            let env = outer.iter().filter_map(|b| b.r2_at(q)).fold(f64::NEG_INFINITY, f64::max);
            if env.is_finite() {
                p.r2 - env
            } else {
                p.r2
            }
        })
        .fold(0.0, f64::max)
}

/// Maximum `|r2|` discrepancy of two boundaries on a common grid of `m`
/// `r1` values spanning the overlap of their `r1` ranges.
pub fn r2_discrepancy(a: &Boundary, b: &Boundary, m: usize) -> f64 {
    let lo = a.points[0].r1.max(b.points[0].r1);
    let hi = a.max_r1().min(b.max_r1());
    if hi < lo {
        return f64::INFINITY;
    }
    (0..m)
        .map(|k| {
            let r1 = lo + (hi - lo) * k as f64 / (m - 1).max(1) as f64;
            match (a.r2_at(r1), b.r2_at(r1)) {
                (Some(x), Some(y)) => (x - y).abs(),
                _ => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max)
}
