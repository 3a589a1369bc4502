//! Criterion benchmarks for the solver engines; see `benches/engines.rs`.
