//! Criterion benchmarks for the symbolic engine live under `benches/`.
