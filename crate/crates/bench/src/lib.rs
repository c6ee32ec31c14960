//! Benchmarks for `pssmp-core`; see `benches/`.
