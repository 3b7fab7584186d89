//! Benchmarks for the gitenergy pipeline; see `benches/pipeline.rs`.
