//! Criterion benchmarks for `bvcalc-core`; run with `cargo bench -p bvcalc-bench`.
