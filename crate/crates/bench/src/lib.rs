//! Criterion benchmarks for the learning pipeline; see `benches/pipeline.rs`.
