//! Benchmark fixtures shared by the criterion targets.

use jsr_core::{Matrix, MatrixSet};

/// The 3×3 pair used across benchmarks: reducible, mixed magnitudes.
pub fn mixed_pair() -> MatrixSet {
    MatrixSet::new(vec![
        Matrix::from_ratios(&[
            &[(1, 1), (1, 2), (0, 1)],
            &[(0, 1), (1, 1), (3, 2)],
            &[(1, 3), (0, 1), (1, 1)],
        ])
        .expect("square"),
        Matrix::from_ratios(&[
            &[(1, 1), (0, 1), (1, 1)],
            &[(2, 1), (1, 2), (0, 1)],
            &[(0, 1), (1, 4), (1, 1)],
        ])
        .expect("square"),
    ])
    .expect("same dimension")
}

pub fn skewed() -> MatrixSet {
    MatrixSet::singleton(Matrix::from_ratios(&[&[(1, 1), (1, 10)], &[(10, 1), (1, 1)]]).expect("square"))
}
