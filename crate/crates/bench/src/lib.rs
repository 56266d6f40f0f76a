//! Shared inputs for the criterion benchmarks.

/// Genera used by the volume and graph benchmarks.
pub const GENERA: &[u32] = &[2, 3, 4];

/// Permutation sizes used by the harmonic sum benchmarks.
pub const PERM_SIZES: &[usize] = &[50, 100, 200];
