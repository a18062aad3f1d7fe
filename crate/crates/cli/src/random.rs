//! Seeded random matrix sets for self-checks and experiments.

use jsr_core::{Matrix, MatrixSet, Scalar};
use rand::Rng;

/// `p/q` with `q ∈ 1..=4` and `p/q ∈ [0, max]`; zero with probability `zero_prob`.
pub fn random_entry<R: Rng>(rng: &mut R, max: u64, zero_prob: f64) -> Scalar {
    if rng.gen_bool(zero_prob) {
        return Scalar::zero();
    }
    let q = rng.gen_range(1..=4u64);
    Scalar::ratio(rng.gen_range(0..=max * q), q)
}

pub fn random_matrix<R: Rng>(rng: &mut R, dim: usize, zero_prob: f64) -> Matrix {
    let rows = (0..dim)
        .map(|_| (0..dim).map(|_| random_entry(rng, 3, zero_prob)).collect())
        .collect();
    Matrix::from_rows(rows).expect("square")
}

pub fn random_set<R: Rng>(rng: &mut R, dim: usize, count: usize, zero_prob: f64) -> MatrixSet {
    MatrixSet::new((0..count).map(|_| random_matrix(rng, dim, zero_prob)).collect()).expect("same dimension")
}

/// Like [`random_set`], with the cycle `1 → 2 → … → D → 1` forced into the
/// first matrix so the dependency graph is strongly connected.
pub fn random_connected_set<R: Rng>(rng: &mut R, dim: usize, count: usize, zero_prob: f64) -> MatrixSet {
    let mut ms: Vec<Matrix> = (0..count).map(|_| random_matrix(rng, dim, zero_prob)).collect();
    let first = &ms[0];
    let rows = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let x = first.get(i, j);
                    if j == (i + 1) % dim && x.is_zero() {
                        Scalar::ratio(rng.gen_range(1..=12u64), 4)
                    } else {
                        x.clone()
                    }
                })
                .collect()
        })
        .collect();
    ms[0] = Matrix::from_rows(rows).expect("square");
    MatrixSet::new(ms).expect("same dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use jsr_core::{build_graph, scc};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_and_connected() {
        let a = random_set(&mut ChaCha8Rng::seed_from_u64(7), 3, 2, 0.3);
        let b = random_set(&mut ChaCha8Rng::seed_from_u64(7), 3, 2, 0.3);
        assert_eq!(a.matrices(), b.matrices());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..=5 {
            let s = random_connected_set(&mut rng, d, 2, 0.9);
            assert!(scc(&build_graph(&s)).is_strongly_connected());
            assert!(s
                .matrices()
                .iter()
                .flat_map(|m| m.entries())
                .all(|x| *x <= Scalar::from(3)));
        }
    }
}
