//! Certified Perron-root enclosures for single nonnegative matrices.
//!
//! The matrix is split into its strongly connected diagonal blocks; the
//! spectral radius is the maximum over blocks. Each irreducible block is
//! bracketed with Collatz–Wielandt bounds
//! `min_i (Bx)_i/x_i ≤ ρ(B) ≤ max_i (Bx)_i/x_i`, valid for every positive
//! `x`. The vector comes from a shifted power iteration in `f64`
//! (`B + I` is primitive, so it converges even for periodic blocks) and the
//! ratios are then evaluated in the matrix's own arithmetic, so with exact
//! entries the bounds are exact rationals.

use crate::graph::{build_graph, scc};
use crate::interval::Enclosure;
use crate::matrix::{Matrix, MatrixSet};
use crate::scalar::{Entry, Scalar};

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct PerronEnclosure {
    pub enclosure: Enclosure,
    /// Iteration cap hit before `rel_tol` was reached; the interval is still valid.
    pub loose: bool,
    pub iterations: usize,
}

pub fn spectral_radius<T: Entry>(m: &Matrix<T>, rel_tol: f64) -> PerronEnclosure {
    assert!(rel_tol > 0.0, "rel_tol must be positive");
    let set = MatrixSet::singleton(m.clone());
    let cond = scc(&build_graph(&set));
    let mut out = PerronEnclosure {
        enclosure: Enclosure::zero(),
        loose: false,
        iterations: 0,
    };
    for (c, comp) in cond.components.iter().enumerate() {
        if cond.trivial[c] {
            continue;
        }
        let block = m.restrict(comp);
        let b = block_radius(&block, rel_tol);
        out.enclosure = out.enclosure.max(&b.enclosure);
        out.loose |= b.loose;
        out.iterations += b.iterations;
    }
    out
}

fn block_radius<T: Entry>(block: &Matrix<T>, rel_tol: f64) -> PerronEnclosure {
    let d = block.dim();
    if d == 1 {
        return PerronEnclosure {
            enclosure: Enclosure::point(block.get(0, 0).to_scalar()),
            loose: false,
            iterations: 0,
        };
    }

    let scale = block.max_norm().to_f64();
    let bf: Vec<f64> = block.entries().iter().map(|x| x.to_f64() / scale).collect();
    let apply = |x: &[f64]| -> Vec<f64> { (0..d).map(|i| (0..d).map(|j| bf[i * d + j] * x[j]).sum()).collect() };

    let mut x = vec![1.0; d];
    let mut best: Option<Enclosure> = None;
    let mut iterations = 0;
    let mut next_check = 8;
    loop {
        let bx = apply(&x);
        let (mut rmin, mut rmax) = (f64::INFINITY, 0.0f64);
        for i in 0..d {
            let r = bx[i] / x[i];
            rmin = rmin.min(r);
            rmax = rmax.max(r);
        }
        let converged = rmax > 0.0 && (rmax - rmin) <= 0.25 * rel_tol * rmax;
        let capped = iterations >= MAX_ITERATIONS;
        if converged || capped || iterations >= next_check {
            let mut e = certify(block, &x.iter().map(|&v| T::from_f64(v)).collect::<Vec<_>>());
            if T::CERTIFIED {
                // rational Perron vectors with small denominators certify exactly
                let snapped: Vec<T> = x.iter().map(|&v| T::from_scalar(&small_rational(v))).collect();
                e = e.intersect(&certify(block, &snapped)).unwrap_or(e);
            }
            best = Some(match best {
                None => e,
                Some(b) => b.intersect(&e).unwrap_or(e),
            });
            let b = best.as_ref().expect("set above");
            if b.rel_width() <= rel_tol || capped {
                let loose = b.rel_width() > rel_tol;
                return PerronEnclosure {
                    enclosure: b.clone(),
                    loose,
                    iterations,
                };
            }
            next_check = (iterations * 2).max(8);
        }

        // shifted step: x ← (B + I) x, normalized to max 1
        let mut y: Vec<f64> = bx.iter().zip(&x).map(|(a, b)| a + b).collect();
        let ymax = y.iter().cloned().fold(0.0, f64::max);
        for v in &mut y {
            *v = (*v / ymax).max(f64::MIN_POSITIVE);
        }
        x = y;
        iterations += 1;
    }
}

/// Closest fraction to `x ∈ (0, 1]` with denominator at most 2²⁰, by continued fractions.
fn small_rational(x: f64) -> Scalar {
    const MAX_DEN: u64 = 1 << 20;
    let (mut h0, mut h1, mut k0, mut k1) = (0u64, 1u64, 1u64, 0u64);
    let mut v = x;
    loop {
        let a = v.floor();
        if a > 1e12 {
            break;
        }
        let a = a as u64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > MAX_DEN {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a as f64;
        if frac < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if h1 == 0 || k1 == 0 {
        return Scalar::from_f64(x).expect("positive");
    }
    Scalar::ratio(h1, k1)
}

/// Collatz–Wielandt bounds for the given positive vector, in `T` arithmetic.
fn certify<T: Entry>(block: &Matrix<T>, xt: &[T]) -> Enclosure {
    let d = block.dim();
    let mut lo: Option<T> = None;
    let mut hi: Option<T> = None;
    for i in 0..d {
        let mut acc = T::zero();
        for j in 0..d {
            let a = block.get(i, j);
            if !a.is_zero() {
                acc = acc.add(&a.mul(&xt[j]));
            }
        }
        let r = acc.div(&xt[i]);
        if lo.as_ref().is_none_or(|l| r.total_cmp(l).is_lt()) {
            lo = Some(r.clone());
        }
        if hi.as_ref().is_none_or(|h| r.total_cmp(h).is_gt()) {
            hi = Some(r);
        }
    }
    let (lo, hi) = (lo.expect("d ≥ 2").to_scalar(), hi.expect("d ≥ 2").to_scalar());
    if lo <= hi {
        Enclosure::new(lo, hi)
    } else {
        Enclosure::new(hi, lo)
    }
}

/// Convenience: enclosure of ρ for an exact matrix at the default tolerance.
pub fn perron_root(m: &Matrix<Scalar>) -> Enclosure {
    spectral_radius(m, DEFAULT_REL_TOL).enclosure
}
