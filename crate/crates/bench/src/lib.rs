//! Criterion benchmarks for `miso-pareto` live in `benches/`.
