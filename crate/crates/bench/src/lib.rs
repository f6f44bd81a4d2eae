//! Benchmarks for the builders, verifiers and finite sweeps; see `benches/`.
