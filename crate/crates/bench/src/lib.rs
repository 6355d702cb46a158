//! Benchmark-only crate; see `benches/link_budget.rs`.
