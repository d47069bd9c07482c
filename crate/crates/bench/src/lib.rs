//! Criterion benchmarks for `qgrass`; run with `cargo bench -p qgrass-bench`.
