#![allow(dead_code)]

use jsr_core::{Matrix, MatrixSet, Scalar};
use proptest::prelude::*;

/// Zero with probability ~`zero_pct`%, otherwise p/q with p ∈ 1..=6, q ∈ 1..=3.
pub fn entry(zero_pct: u32) -> impl Strategy<Value = Scalar> {
    (0u32..100, 1u64..=6, 1u64..=3).prop_map(move |(z, p, q)| {
        if z < zero_pct {
            Scalar::zero()
        } else {
            Scalar::ratio(p, q)
        }
    })
}

pub fn matrix(dim: usize, zero_pct: u32) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(entry(zero_pct), dim), dim)
        .prop_map(|rows| Matrix::from_rows(rows).expect("square"))
}

pub fn matrix_set(
    dims: std::ops::RangeInclusive<usize>,
    max_len: usize,
    zero_pct: u32,
) -> impl Strategy<Value = MatrixSet> {
    dims.prop_flat_map(move |d| prop::collection::vec(matrix(d, zero_pct), 1..=max_len))
        .prop_map(|ms| MatrixSet::new(ms).expect("same dimension"))
}

/// Sets whose dependency graph contains the cycle 0→1→…→D−1→0, hence strongly connected.
pub fn connected_set(dims: std::ops::RangeInclusive<usize>, max_len: usize) -> impl Strategy<Value = MatrixSet> {
    (matrix_set(dims, max_len, 50), 1u64..=4).prop_map(|(s, w)| {
        let d = s.dim();
        let mut ms = s.matrices().to_vec();
        let first = &ms[0];
        let rows: Vec<Vec<Scalar>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if j == (i + 1) % d && first.get(i, j).is_zero() {
                            Scalar::from(w)
                        } else {
                            first.get(i, j).clone()
                        }
                    })
                    .collect()
            })
            .collect();
        ms[0] = Matrix::from_rows(rows).expect("square");
        MatrixSet::new(ms).expect("same dimension")
    })
}

/// Every product of length n, by brute force (no dedup, no pruning).
pub fn all_products(s: &MatrixSet, n: usize) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = s.matrices().to_vec();
    for _ in 1..n {
        out = out
            .iter()
            .flat_map(|p| s.matrices().iter().map(move |a| p.multiply(a).expect("dims")))
            .collect();
    }
    out
}

/// Reachability by Floyd–Warshall on the union support.
pub fn reachability(s: &MatrixSet) -> Vec<Vec<bool>> {
    let d = s.dim();
    let mut r = vec![vec![false; d]; d];
    for m in s.matrices() {
        for i in 0..d {
            for j in 0..d {
                r[i][j] |= !m.get(i, j).is_zero();
            }
        }
    }
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}
