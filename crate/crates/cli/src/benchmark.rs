//! Wall-clock comparison of the fast methods with their brute-force oracles.

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use miso_pareto::complexity::{measure_scaling, ScalingReport, SCALING_GRID};
use miso_pareto::oracle::parameter_count;
use miso_pareto::{ChannelConstants, DecodingScenario, SweepMode};

use crate::{compute, Target};

const FAST_BATCH: Duration = Duration::from_millis(20);
const ORACLE_BATCH: Duration = Duration::from_millis(50);
const REFERENCE_M: usize = 500;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: String,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct BenchmarkReport {
    pub grid: Vec<usize>,
    pub fast: Vec<ScalingReport>,
    pub oracles: Vec<ScalingReport>,
    pub checks: Vec<Check>,
}

impl BenchmarkReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut s = String::from("\nbenchmark (seconds per call)\n");
        let _ = write!(s, "{:<12}", "method");
        for m in &self.grid {
            let _ = write!(s, " {:>11}", format!("M={m}"));
        }
        let _ = writeln!(s, " {:>9}", "exponent");
        for r in self.fast.iter().chain(&self.oracles) {
            let _ = write!(s, "{:<12}", r.name);
            for (_, t) in &r.timings {
                let _ = write!(s, " {t:>11.3e}");
            }
            let _ = writeln!(s, " {:>9.3}", r.exponent);
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "check {:<40} {:>10.3} {:<8} {}",
                c.name,
                c.value,
                c.bound,
                if c.pass { "ok" } else { "FAILED" }
            );
        }
        s
    }
}

fn at(r: &ScalingReport, m: usize) -> f64 {
    r.timings.iter().find(|&&(g, _)| g == m).map_or(f64::NAN, |&(_, t)| t)
}

pub fn run(fast: &[Target], k: &ChannelConstants, epsilon: f64, mode: SweepMode) -> BenchmarkReport {
    let mut scenarios: Vec<DecodingScenario> = Vec::new();
    let fast_reports: Vec<(Target, ScalingReport)> = fast
        .iter()
        .map(|&t| {
            let s = t.scenario().expect("fast methods have a scenario");
            if !scenarios.contains(&s) {
                scenarios.push(s);
            }
            let r = measure_scaling(&t.name(), &SCALING_GRID, FAST_BATCH, |m| {
                compute(t, k, m, epsilon, mode).expect("fast method failed during benchmark");
            });
            (t, r)
        })
        .collect();
    let oracles: Vec<(DecodingScenario, ScalingReport)> = scenarios
        .iter()
        .map(|&s| {
            let t = Target::Oracle(s);
            let r = measure_scaling(&t.name(), &SCALING_GRID, ORACLE_BATCH, |m| {
                compute(t, k, m, epsilon, mode).expect("oracle failed during benchmark");
            });
            (s, r)
        })
        .collect();

    let mut checks = Vec::new();
    for (t, r) in &fast_reports {
        checks.push(Check {
            name: format!("{} growth exponent", r.name),
            value: r.exponent,
            bound: "< 1.3".into(),
            pass: r.exponent < 1.3,
        });
        let s = t.scenario().unwrap();
        let (_, o) = oracles.iter().find(|(os, _)| *os == s).unwrap();
        let speedup = at(o, REFERENCE_M) / at(r, REFERENCE_M);
        let need = if parameter_count(s) >= 3 { 100.0 } else { 10.0 };
        checks.push(Check {
            name: format!("{} speedup at M={REFERENCE_M}", r.name),
            value: speedup,
            bound: format!(">= {need}"),
            pass: speedup >= need,
        });
    }
    for (s, o) in &oracles {
        if parameter_count(*s) == 2 {
            checks.push(Check {
                name: format!("{} growth exponent", o.name),
                value: o.exponent,
                bound: "> 1.7".into(),
                pass: o.exponent > 1.7,
            });
        }
    }
    BenchmarkReport {
        grid: SCALING_GRID.to_vec(),
        fast: fast_reports.into_iter().map(|(_, r)| r).collect(),
        oracles: oracles.into_iter().map(|(_, r)| r).collect(),
        checks,
    }
}
