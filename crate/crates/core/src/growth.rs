//! Polynomial growth order of `‖Σⁿ‖`.
//!
//! Each component C gets an enclosure of its rate λ_C from the connected
//! bound applied to Σ restricted to C. Components whose enclosure cannot be
//! separated from the maximum are *critical*; `r` is one less than the
//! largest number of critical components along a path of the condensation
//! DAG, and `‖Σⁿ‖` then grows like `nʳ λⁿ`.

use serde::{Deserialize, Serialize};

use crate::bounds::{connected_bounds, BestBounds};
use crate::error::{JsrError, Result};
use crate::graph::Condensation;
use crate::interval::Enclosure;
use crate::matrix::MatrixSet;
use crate::norms::{norm_table_partial, EnumOptions, NormTable};
use crate::scalar::Scalar;

/// Minimum classification depth when it is chosen automatically.
pub const MIN_DEPTH: usize = 6;
/// Largest depth tried when choosing automatically.
pub const MAX_AUTO_DEPTH: usize = 24;
/// Largest relative width of the λ enclosure accepted by [`verify_growth`].
pub const DEFAULT_MAX_REL_WIDTH: f64 = 0.05;

fn enclosure_from_f64(lo: f64, hi: f64) -> Enclosure {
    let to = |x: f64| {
        if x.is_finite() {
            Scalar::from_f64(x).expect("nonnegative")
        } else {
            Scalar::from_f64(f64::MAX).expect("finite")
        }
    };
    Enclosure::new(to(lo), to(hi))
}

fn restricted_table(
    s: &MatrixSet,
    cond: &Condensation,
    c: usize,
    n_max: usize,
    options: EnumOptions,
) -> Option<(MatrixSet, NormTable, Option<JsrError>)> {
    if cond.trivial[c] {
        return None;
    }
    let sub = s.restrict(&cond.components[c]);
    if sub.all_zero() {
        return None;
    }
    let (t, err) = norm_table_partial(&sub, n_max, options);
    Some((sub, t, err))
}

/// Enclosure of λ_C at depth `n_cls`; `[0, 0]` for trivial components.
pub fn component_lambda_bounds(
    s: &MatrixSet,
    cond: &Condensation,
    c: usize,
    n_cls: usize,
    options: EnumOptions,
) -> Result<Enclosure> {
    if n_cls == 0 {
        return Err(JsrError::OutOfRange { n: 0, max: usize::MAX });
    }
    match restricted_table(s, cond, c, n_cls, options) {
        None => Ok(Enclosure::zero()),
        Some((_, _, Some(e))) => Err(e),
        Some((sub, t, None)) => {
            let b = connected_bounds(&sub, &t, n_cls)?;
            Ok(enclosure_from_f64(b.lower, b.upper))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentClassification {
    pub depth: usize,
    pub lambda: Vec<Enclosure>,
    pub critical: Vec<bool>,
}

impl ComponentClassification {
    fn from_lambdas(depth: usize, lambda: Vec<Enclosure>) -> Self {
        let top = lambda.iter().map(|e| e.lo.clone()).max().unwrap_or_else(Scalar::zero);
        let critical = lambda.iter().map(|e| e.hi >= top).collect();
        ComponentClassification {
            depth,
            lambda,
            critical,
        }
    }

    /// Endpoint-wise maximum of the component enclosures: encloses λ.
    pub fn lambda_max(&self) -> Enclosure {
        self.lambda.iter().fold(Enclosure::zero(), |acc, e| acc.max(e))
    }
}

/// Classifies components at depth `n_cls`, or at the deepest length
/// (between [`MIN_DEPTH`] and [`MAX_AUTO_DEPTH`]) whose restricted frontiers
/// fit the budget when `n_cls` is `None`.
pub fn classify(
    s: &MatrixSet,
    cond: &Condensation,
    n_cls: Option<usize>,
    options: EnumOptions,
) -> Result<ComponentClassification> {
    let target = n_cls.unwrap_or(MAX_AUTO_DEPTH);
    if target == 0 {
        return Err(JsrError::OutOfRange { n: 0, max: usize::MAX });
    }
    let tables: Vec<_> = (0..cond.len())
        .map(|c| restricted_table(s, cond, c, target, options))
        .collect();

    let depth = match n_cls {
        Some(n) => {
            if let Some(e) = tables.iter().flatten().find_map(|(_, _, e)| e.clone()) {
                return Err(e);
            }
            n
        }
        None => {
            let reached = tables
                .iter()
                .flatten()
                .map(|(_, t, _)| t.n_max)
                .min()
                .unwrap_or(MIN_DEPTH);
            if reached < MIN_DEPTH {
                return Err(tables.iter().flatten().find_map(|(_, _, e)| e.clone()).unwrap_or(
                    JsrError::BudgetExceeded {
                        limit: options.budget,
                        length: reached + 1,
                    },
                ));
            }
            reached
        }
    };

    let mut lambda = Vec::with_capacity(cond.len());
    for entry in &tables {
        lambda.push(match entry {
            None => Enclosure::zero(),
            Some((sub, t, _)) => {
                let b = connected_bounds(sub, t, depth)?;
                enclosure_from_f64(b.lower, b.upper)
            }
        });
    }
    Ok(ComponentClassification::from_lambdas(depth, lambda))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthOrder {
    pub lambda: Enclosure,
    pub r: usize,
    /// Path in the condensation DAG, from a critical component to a critical component.
    pub path: Vec<usize>,
    /// The critical components on `path`; `r + 1` of them.
    pub witness_chain: Vec<usize>,
    pub depth: usize,
}

pub fn growth_exponent(cond: &Condensation, cls: &ComponentClassification) -> Result<GrowthOrder> {
    let k = cond.len();
    if cond.dag_edges.is_empty() && cond.trivial.iter().all(|&t| t) {
        return Err(JsrError::ConstantsUndefined);
    }
    if cls.lambda_max().hi.is_zero() {
        // nilpotent: every component is trivial and ‖Σⁿ‖ vanishes for n ≥ D
        return Err(JsrError::LambdaZero);
    }
    // dag edges go from lower to higher index, so a reverse sweep is a valid DP order.
    // best[c]: heaviest path starting at c that only extends when it gains weight
    let mut best: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new()); k];
    for c in (0..k).rev() {
        let own = usize::from(cls.critical[c]);
        let mut choice: (usize, Vec<usize>) = (own, vec![c]);
        let mut succ: Vec<usize> = cond.dag_successors(c).collect();
        succ.sort_unstable();
        for s in succ {
            let (w, ref tail) = best[s];
            if w == 0 {
                continue;
            }
            let cand = own + w;
            let mut path = Vec::with_capacity(tail.len() + 1);
            path.push(c);
            path.extend_from_slice(tail);
            if cand > choice.0 || (cand == choice.0 && choice.1.len() > 1 && path < choice.1) {
                choice = (cand, path);
            }
        }
        best[c] = choice;
    }

    let (weight, path) = (0..k)
        .filter(|&c| cls.critical[c])
        .map(|c| best[c].clone())
        .fold(None::<(usize, Vec<usize>)>, |acc, cand| match acc {
            None => Some(cand),
            Some(a) if cand.0 > a.0 || (cand.0 == a.0 && cand.1 < a.1) => Some(cand),
            Some(a) => Some(a),
        })
        .ok_or_else(|| JsrError::Inconsistent("no critical component".into()))?;

    let witness_chain = path.iter().copied().filter(|&c| cls.critical[c]).collect();
    Ok(GrowthOrder {
        lambda: cls.lambda_max(),
        r: weight - 1,
        path,
        witness_chain,
        depth: cls.depth,
    })
}

/// Tightens `g.lambda` with any other enclosure of ρ(Σ), e.g. from
/// [`best_bounds`](crate::bounds::best_bounds); λ = ρ(Σ) so both must overlap.
pub fn refine_lambda(g: &GrowthOrder, rho: &BestBounds) -> Result<GrowthOrder> {
    let other = enclosure_from_f64(rho.lower, rho.upper);
    let lambda = g.lambda.intersect(&other).ok_or_else(|| {
        JsrError::Inconsistent(format!(
            "component rate [{}, {}] disjoint from bounds [{}, {}]",
            g.lambda.lo.to_f64(),
            g.lambda.hi.to_f64(),
            rho.lower,
            rho.upper
        ))
    })?;
    Ok(GrowthOrder { lambda, ..g.clone() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub n: usize,
    pub norm: Scalar,
    /// `‖Σⁿ‖ / (nʳ λ_midⁿ)`.
    pub q: f64,
    pub q_at_lo: f64,
    pub q_at_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub r: usize,
    pub lambda_mid: Scalar,
    pub points: Vec<GrowthPoint>,
    /// Empirical `min q_n`.
    pub alpha: f64,
    /// Empirical `max q_n`.
    pub beta: f64,
    /// Least-squares slope of `ln q_n` against `ln n`.
    pub slope: f64,
}

impl GrowthReport {
    /// A slope this far from zero means `r` is likely off by one.
    pub fn drift_detected(&self, threshold: f64) -> bool {
        self.slope.abs() >= threshold
    }
}

fn q_value(norm: &Scalar, n: usize, r: usize, lambda: &Scalar) -> f64 {
    if lambda.is_zero() {
        return f64::INFINITY;
    }
    let denom = Scalar::from_integer(n as u64).pow(r as u32) * lambda.pow(n as u32);
    (norm / &denom).to_f64()
}

pub fn verify_growth(
    t: &NormTable,
    g: &GrowthOrder,
    n_lo: usize,
    n_hi: usize,
    max_rel_width: f64,
) -> Result<GrowthReport> {
    if n_lo == 0 || n_lo > n_hi {
        return Err(JsrError::OutOfRange { n: n_lo, max: n_hi });
    }
    if n_hi > t.n_max {
        return Err(JsrError::OutOfRange { n: n_hi, max: t.n_max });
    }
    if g.lambda.lo.is_zero() {
        return Err(JsrError::LambdaZero);
    }
    let rel_width = g.lambda.rel_width();
    if rel_width > max_rel_width {
        return Err(JsrError::LambdaTooWide {
            rel_width,
            limit: max_rel_width,
        });
    }
    let mid = g.lambda.midpoint();
    let points: Vec<GrowthPoint> = (n_lo..=n_hi)
        .map(|n| {
            let norm = t.sigma(n).expect("in range").clone();
            GrowthPoint {
                n,
                q: q_value(&norm, n, g.r, &mid),
                q_at_lo: q_value(&norm, n, g.r, &g.lambda.lo),
                q_at_hi: q_value(&norm, n, g.r, &g.lambda.hi),
                norm,
            }
        })
        .collect();
    let alpha = points.iter().map(|p| p.q).fold(f64::INFINITY, f64::min);
    let beta = points.iter().map(|p| p.q).fold(0.0, f64::max);
    let slope = log_log_slope(&points);
    Ok(GrowthReport {
        r: g.r,
        lambda_mid: mid,
        points,
        alpha,
        beta,
        slope,
    })
}

fn log_log_slope(points: &[GrowthPoint]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.q.ln()).collect();
    let n = xs.len() as f64;
    if xs.len() < 2 || ys.iter().any(|y| !y.is_finite()) {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
