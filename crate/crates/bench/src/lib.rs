//! Shared builders for the benchmark targets.
