//! Two-sided enclosures of the joint spectral radius ρ(Σ).
//!
//! Four methods are provided:
//!
//! * `main`: `(K·max_C ‖Σⁿ‖_C)^(1/n) ≤ ρ ≤ (D·max_C ‖Σⁿ‖_C)^(1/n)` over the
//!   strongly connected components of the dependency graph.
//! * `connected`: the same with `‖Σⁿ‖`, for strongly connected dependency graphs.
//! * `traditional`: `P_m^(1/m) ≤ ρ ≤ (D·‖Σᵐ‖)^(1/m)` with
//!   `P_m = max ρ(A₁…A_m)`.
//! * `blondel`: `ρ(S)/|Σ| ≤ ρ ≤ ρ(S)` with `S` the entrywise maximum.
//!
//! Every interval keeps its exact radicands; the decimal endpoints are
//! outward-rounded roots of them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{JsrError, Result};
use crate::graph::{build_graph, scc};
use crate::interval::{nth_root_enclosure, Enclosure};
use crate::matrix::{set_constants, MatrixSet};
use crate::norms::{maximal_elements, norm_table, EnumOptions, NormTable, ProductEnumerator, PruneMode};
use crate::perron::spectral_radius;
use crate::scalar::{Entry, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Main,
    Connected,
    Traditional,
    Blondel,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Main, Method::Connected, Method::Traditional, Method::Blondel];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Main => "main",
            Method::Connected => "connected",
            Method::Traditional => "traditional",
            Method::Blondel => "blondel",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "main" => Ok(Method::Main),
            "connected" => Ok(Method::Connected),
            "traditional" => Ok(Method::Traditional),
            "blondel" => Ok(Method::Blondel),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// Certified enclosure of ρ(Σ) produced by one method at one length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInterval {
    pub method: Method,
    pub n: usize,
    pub lower_radicand: Scalar,
    pub upper_radicand: Scalar,
    /// `lower_radicand^(1/n)`, rounded down.
    pub lower: f64,
    /// `upper_radicand^(1/n)`, rounded up.
    pub upper: f64,
    /// False when computed with the `f64` backend.
    pub certified: bool,
}

impl BoundInterval {
    pub fn from_radicands(
        method: Method,
        n: usize,
        lower_radicand: Scalar,
        upper_radicand: Scalar,
        certified: bool,
    ) -> Self {
        let lower = nth_root_enclosure(&lower_radicand, n as u32).lo.to_f64_down();
        let upper = nth_root_enclosure(&upper_radicand, n as u32).hi.to_f64_up();
        BoundInterval {
            method,
            n,
            lower_radicand,
            upper_radicand,
            lower,
            upper,
            certified,
        }
    }

    pub fn zero(method: Method, n: usize, certified: bool) -> Self {
        Self::from_radicands(method, n, Scalar::zero(), Scalar::zero(), certified)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// Exact-value check that `e` lies inside this interval.
    pub fn contains_enclosure(&self, e: &Enclosure) -> bool {
        Scalar::from_f64(self.lower).expect("finite") <= e.lo
            && (self.upper.is_infinite() || e.hi <= Scalar::from_f64(self.upper).expect("finite"))
    }

    /// `upper / lower` at the radicand level, as an enclosure of
    /// `(upper_radicand / lower_radicand)^(1/n)`; `None` when the lower radicand is 0.
    pub fn ratio(&self) -> Option<Enclosure> {
        if self.lower_radicand.is_zero() {
            return None;
        }
        Some(nth_root_enclosure(
            &(&self.upper_radicand / &self.lower_radicand),
            self.n as u32,
        ))
    }
}

fn check_len<T: Entry>(t: &NormTable<T>, n: usize) -> Result<()> {
    if n == 0 || n > t.n_max {
        return Err(JsrError::OutOfRange { n, max: t.n_max });
    }
    Ok(())
}

pub fn main_bounds<T: Entry>(s: &MatrixSet<T>, t: &NormTable<T>, n: usize) -> Result<BoundInterval> {
    check_len(t, n)?;
    if s.all_zero() {
        return Ok(BoundInterval::zero(Method::Main, n, T::CERTIFIED));
    }
    let c = set_constants(s)?;
    let peak = t.max_component_norm(n)?;
    let d = T::from_usize(s.dim());
    Ok(BoundInterval::from_radicands(
        Method::Main,
        n,
        c.k.mul(&peak).to_scalar(),
        d.mul(&peak).to_scalar(),
        T::CERTIFIED,
    ))
}

pub fn connected_bounds<T: Entry>(s: &MatrixSet<T>, t: &NormTable<T>, n: usize) -> Result<BoundInterval> {
    check_len(t, n)?;
    if s.all_zero() {
        return Ok(BoundInterval::zero(Method::Connected, n, T::CERTIFIED));
    }
    let cond = scc(&build_graph(s));
    if !cond.is_strongly_connected() {
        return Err(JsrError::NotConnected { components: cond.len() });
    }
    let c = set_constants(s)?;
    let norm = t.sigma(n)?;
    let d = T::from_usize(s.dim());
    Ok(BoundInterval::from_radicands(
        Method::Connected,
        n,
        c.k.mul(norm).to_scalar(),
        d.mul(norm).to_scalar(),
        T::CERTIFIED,
    ))
}

/// Enclosures of `P_m(Σ)` for m = 1..=m_max.
#[derive(Clone, Debug, PartialEq)]
pub struct PmTable {
    values: Vec<Enclosure>,
    pub rel_tol: f64,
    /// Some Perron enclosure hit the iteration cap.
    pub loose: bool,
    pub exhaustive: bool,
}

impl PmTable {
    pub fn m_max(&self) -> usize {
        self.values.len()
    }

    pub fn pm(&self, m: usize) -> Result<&Enclosure> {
        if m == 0 || m > self.values.len() {
            return Err(JsrError::OutOfRange {
                n: m,
                max: self.values.len(),
            });
        }
        Ok(&self.values[m - 1])
    }

    /// `P̃_m = max_{0 ≤ δ ≤ dim} P_{m+δ}`, endpoint-wise.
    pub fn tilde(&self, m: usize, dim: usize) -> Result<Enclosure> {
        let top = m + dim;
        if m == 0 || top > self.values.len() {
            return Err(JsrError::OutOfRange {
                n: top,
                max: self.values.len(),
            });
        }
        Ok(self.values[m - 1..top]
            .iter()
            .skip(1)
            .fold(self.values[m - 1].clone(), |acc, e| acc.max(e)))
    }
}

/// Computes `P_m` from each length's products.
///
/// With dominance pruning the frontier is already the set of entrywise-maximal
/// products; since ρ is monotone in the entrywise order, the maximum is
/// attained there. With pruning off every product's Perron root is still
/// evaluated and checked against the result, which is read off the same
/// maximal set so both modes report identical endpoints.
pub fn pm_table<T: Entry>(s: &MatrixSet<T>, m_max: usize, rel_tol: f64, options: EnumOptions) -> Result<PmTable> {
    if m_max == 0 {
        return Err(JsrError::OutOfRange { n: 0, max: usize::MAX });
    }
    let exhaustive = options.prune == PruneMode::Off;
    let mut table = PmTable {
        values: Vec::with_capacity(m_max),
        rel_tol,
        loose: false,
        exhaustive,
    };
    if s.all_zero() {
        table.values = vec![Enclosure::zero(); m_max];
        return Ok(table);
    }
    let mut en = ProductEnumerator::new(s, options)?;
    loop {
        let products = &en.frontier().products;
        let maximal;
        let candidates = if exhaustive {
            maximal = maximal_elements(products);
            &maximal
        } else {
            products
        };
        let radii: Vec<_> = candidates.par_iter().map(|p| spectral_radius(p, rel_tol)).collect();
        let mut best = Enclosure::zero();
        for r in &radii {
            best = best.max(&r.enclosure);
            table.loose |= r.loose;
        }
        if exhaustive {
            let worst = products
                .par_iter()
                .map(|p| spectral_radius(p, rel_tol).enclosure.lo)
                .max()
                .unwrap_or_else(Scalar::zero);
            if worst > best.hi {
                return Err(JsrError::Inconsistent(format!(
                    "a length-{} product has Perron root above the maximal-set bound",
                    en.frontier().length
                )));
            }
        }
        table.values.push(best);
        if table.values.len() == m_max {
            return Ok(table);
        }
        en.advance()?;
    }
}

pub fn p_m<T: Entry>(s: &MatrixSet<T>, m: usize, rel_tol: f64) -> Result<Enclosure> {
    Ok(pm_table(s, m, rel_tol, EnumOptions::default())?.pm(m)?.clone())
}

pub fn p_tilde<T: Entry>(s: &MatrixSet<T>, m: usize, rel_tol: f64) -> Result<Enclosure> {
    pm_table(s, m + s.dim(), rel_tol, EnumOptions::default())?.tilde(m, s.dim())
}

pub fn traditional_bounds<T: Entry>(
    s: &MatrixSet<T>,
    t: &NormTable<T>,
    pm: &PmTable,
    m: usize,
) -> Result<BoundInterval> {
    check_len(t, m)?;
    if s.all_zero() {
        return Ok(BoundInterval::zero(Method::Traditional, m, T::CERTIFIED));
    }
    let lower = pm.pm(m)?.lo.clone();
    let upper = T::from_usize(s.dim()).mul(t.sigma(m)?).to_scalar();
    Ok(BoundInterval::from_radicands(
        Method::Traditional,
        m,
        lower,
        upper,
        T::CERTIFIED,
    ))
}

/// `ρ(S)/m ≤ ρ(Σ) ≤ ρ(S)` with `m = |Σ|`.
pub fn blondel_nesterov_bounds<T: Entry>(s: &MatrixSet<T>, rel_tol: f64) -> BoundInterval {
    if s.all_zero() {
        return BoundInterval::zero(Method::Blondel, 1, T::CERTIFIED);
    }
    let rho = spectral_radius(&s.entrywise_max(), rel_tol).enclosure;
    let lower = &rho.lo / &Scalar::from_integer(s.len() as u64);
    BoundInterval::from_radicands(Method::Blondel, 1, lower, rho.hi, T::CERTIFIED)
}

/// Intersection of several enclosures with the method/length achieving each end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestBounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_source: (Method, usize),
    pub upper_source: (Method, usize),
    pub certified: bool,
}

impl BestBounds {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

pub fn intersect_intervals(intervals: &[BoundInterval]) -> Result<BestBounds> {
    let first = intervals
        .first()
        .ok_or_else(|| JsrError::Inconsistent("no intervals to intersect".into()))?;
    let mut best = BestBounds {
        lower: first.lower,
        upper: first.upper,
        lower_source: (first.method, first.n),
        upper_source: (first.method, first.n),
        certified: first.certified,
    };
    for b in &intervals[1..] {
        if b.lower > best.lower {
            best.lower = b.lower;
            best.lower_source = (b.method, b.n);
        }
        if b.upper < best.upper {
            best.upper = b.upper;
            best.upper_source = (b.method, b.n);
        }
        best.certified &= b.certified;
    }
    if best.lower > best.upper {
        return Err(JsrError::Inconsistent(format!(
            "empty intersection: lower {} from {:?} exceeds upper {} from {:?}",
            best.lower, best.lower_source, best.upper, best.upper_source
        )));
    }
    Ok(best)
}

/// Every interval of the requested methods for n = 1..=n_max.
/// `connected` is skipped when the dependency graph is not strongly connected.
pub fn all_intervals<T: Entry>(
    s: &MatrixSet<T>,
    n_max: usize,
    methods: &[Method],
    rel_tol: f64,
    options: EnumOptions,
) -> Result<Vec<BoundInterval>> {
    if n_max == 0 {
        return Err(JsrError::OutOfRange { n: 0, max: usize::MAX });
    }
    let table = norm_table(s, n_max, options)?;
    let pm = if methods.contains(&Method::Traditional) {
        Some(pm_table(s, n_max, rel_tol, options)?)
    } else {
        None
    };
    let connected = s.all_zero() || scc(&build_graph(s)).is_strongly_connected();
    let mut out = Vec::new();
    for &method in methods {
        match method {
            Method::Blondel => out.push(blondel_nesterov_bounds(s, rel_tol)),
            Method::Connected if !connected => {}
            _ => {
                for n in 1..=n_max {
                    out.push(match method {
                        Method::Main => main_bounds(s, &table, n)?,
                        Method::Connected => connected_bounds(s, &table, n)?,
                        Method::Traditional => traditional_bounds(s, &table, pm.as_ref().expect("computed"), n)?,
                        Method::Blondel => unreachable!(),
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn best_bounds<T: Entry>(
    s: &MatrixSet<T>,
    n_max: usize,
    methods: &[Method],
    rel_tol: f64,
    options: EnumOptions,
) -> Result<BestBounds> {
    intersect_intervals(&all_intervals(s, n_max, methods, rel_tol, options)?)
}
