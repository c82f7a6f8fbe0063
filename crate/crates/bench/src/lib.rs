//! Criterion benches for the core kernels live in `benches/`.
