//! Criterion benchmarks for `circlefix`; see `benches/circlefix.rs`.
//!
//! Run with `cargo bench -p circlefix-bench`.
