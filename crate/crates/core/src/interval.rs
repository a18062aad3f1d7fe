//! Certified enclosures with exact dyadic endpoints, and n-th roots.

use serde::{Deserialize, Serialize};

use crate::scalar::{scalar_from_biguint, Scalar};

/// Closed interval `[lo, hi]` of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl Enclosure {
    pub fn new(lo: Scalar, hi: Scalar) -> Self {
        debug_assert!(lo <= hi, "empty enclosure [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn point(x: Scalar) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Scalar::zero())
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// `other ⊆ self`.
    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn width(&self) -> Scalar {
        self.hi.abs_diff(&self.lo)
    }

    /// `(hi - lo) / hi`, zero for the degenerate interval at 0.
    pub fn rel_width(&self) -> f64 {
        if self.hi.is_zero() {
            return 0.0;
        }
        (&self.width() / &self.hi).to_f64()
    }

    pub fn midpoint(&self) -> Scalar {
        self.lo.midpoint(&self.hi)
    }

    /// Endpoint-wise maximum: encloses `max(x, y)` for `x ∈ self`, `y ∈ other`.
    pub fn max(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    /// Outward-rounded `f64` endpoints.
    pub fn to_f64_outward(&self) -> (f64, f64) {
        (self.lo.to_f64_down(), self.hi.to_f64_up())
    }
}

/// Relative tolerance met by [`nth_root_enclosure`].
pub const ROOT_REL_TOL: f64 = 1e-12;

fn exact_nth_root(x: &Scalar, n: u32) -> Option<Scalar> {
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let rn = num.nth_root(n);
    if num_traits::Pow::pow(&rn, n) != *num {
        return None;
    }
    let rd = den.nth_root(n);
    if num_traits::Pow::pow(&rd, n) != *den {
        return None;
    }
    Some(&scalar_from_biguint(rn) / &scalar_from_biguint(rd))
}

fn pow2(e: i64) -> Scalar {
    let two = Scalar::from_integer(2);
    if e >= 0 {
        two.pow(e as u32)
    } else {
        two.pow((-e) as u32).recip()
    }
}

/// Enclosure `[lo, hi]` of `x^(1/n)` with dyadic endpoints verified by
/// `loⁿ ≤ x ≤ hiⁿ` in exact arithmetic, and
/// `(hi − lo) / max(hi, 1) ≤ 1e-12`. Exact when `x` is a perfect n-th power.
pub fn nth_root_enclosure(x: &Scalar, n: u32) -> Enclosure {
    assert!(n >= 1, "root index must be positive");
    if x.is_zero() || n == 1 {
        return Enclosure::point(x.clone());
    }
    if let Some(r) = exact_nth_root(x, n) {
        return Enclosure::point(r);
    }

    // f64 estimate on the log scale: est = 2^q · f with f ∈ [1, 2)
    let l = x.log2() / n as f64;
    let q = l.floor();
    let est = &pow2(q as i64) * &Scalar::from_f64((l - q).exp2()).expect("finite");

    let below = |y: &Scalar| y.pow(n) <= *x;
    let mut offset = pow2(-44);
    let one = Scalar::one();
    let (mut lo, mut hi) = loop {
        let lo_factor = one.checked_sub(&offset).unwrap_or_else(Scalar::zero);
        let lo = &est * &lo_factor;
        let hi = &est * &(&one + &offset);
        if below(&lo) && !below(&hi) {
            break (lo, hi);
        }
        offset = &offset * &Scalar::from_integer(16);
    };

    // bisect well past the advertised tolerance so f64 rounding of the
    // endpoints costs at most an ulp
    let tol = pow2(-62);
    while hi.abs_diff(&lo) > &tol * &hi {
        let mid = lo.midpoint(&hi);
        if below(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Enclosure { lo, hi }
}
