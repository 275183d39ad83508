//! Criterion benchmarks for resonance-core live in `benches/`.
