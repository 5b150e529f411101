//! Benchmarks for the search engine; see `benches/`.
