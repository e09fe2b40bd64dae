//! Criterion benchmarks for the numerical kernels of `morita-core`; see `benches/`.
