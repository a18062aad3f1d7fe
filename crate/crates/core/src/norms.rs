//! Exhaustive enumeration of length-n products and the norm tables
//! `‖Σⁿ‖` and `‖Σⁿ‖_C` read off them.
//!
//! Products are grown by right-extension: the frontier at length n+1 is
//! `{P·A : P in frontier(n), A in Σ}`, deduplicated by exact equality. With
//! dominance pruning, entrywise-dominated products are dropped; right
//! multiplication by nonnegative matrices and entry maximization are both
//! monotone in the entrywise order, so the norms are unaffected.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{JsrError, Result};
use crate::graph::{build_graph, scc, Condensation};
use crate::matrix::{set_constants, Matrix, MatrixSet};
use crate::scalar::{Entry, Scalar};

#[allow(clippy::manual_non_exhaustive)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PruneMode {
    Off,
    #[default]
    Dominance,
    /// Keeps only the lexicographically largest product. Unsound; exists so
    /// self-checks can demonstrate that the equivalence test detects it.
    #[doc(hidden)]
    BrokenForTesting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    pub prune: PruneMode,
    /// Maximum number of products kept in a frontier.
    pub budget: usize,
}

pub const DEFAULT_BUDGET: usize = 1_000_000;

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            prune: PruneMode::Dominance,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl EnumOptions {
    pub fn exhaustive() -> Self {
        EnumOptions {
            prune: PruneMode::Off,
            ..Self::default()
        }
    }
}

/// Distinct products of one length that survived pruning, sorted lexicographically.
#[derive(Clone, Debug)]
pub struct Frontier<T: Entry> {
    pub length: usize,
    pub products: Vec<Matrix<T>>,
}

fn sort_dedup<T: Entry>(products: &mut Vec<Matrix<T>>) {
    products.par_sort_unstable_by(|a, b| a.lex_cmp(b));
    products.dedup_by(|a, b| a.lex_cmp(b) == Ordering::Equal);
}

/// Maximal elements (entrywise order) of a sorted, deduplicated list.
pub fn maximal_elements<T: Entry>(products: &[Matrix<T>]) -> Vec<Matrix<T>> {
    // Visit in decreasing entry sum: a product can only be dominated by one
    // with a larger sum, and equal-sum domination means equality.
    let mut keyed: Vec<(T, usize)> = products
        .iter()
        .enumerate()
        .map(|(i, m)| (m.entries().iter().fold(T::zero(), |acc, x| acc.add(x)), i))
        .collect();
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut kept: Vec<usize> = Vec::new();
    for (_, i) in keyed {
        let p = &products[i];
        if !kept.iter().any(|&k| p.dominated_by(&products[k])) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept.into_iter().map(|i| products[i].clone()).collect()
}

fn apply_pruning<T: Entry>(products: Vec<Matrix<T>>, mode: PruneMode) -> Vec<Matrix<T>> {
    match mode {
        PruneMode::Off => products,
        PruneMode::Dominance => maximal_elements(&products),
        PruneMode::BrokenForTesting => products.into_iter().last().into_iter().collect(),
    }
}

/// Incremental frontier enumeration.
pub struct ProductEnumerator<'a, T: Entry> {
    set: &'a MatrixSet<T>,
    options: EnumOptions,
    frontier: Frontier<T>,
}

impl<'a, T: Entry> ProductEnumerator<'a, T> {
    pub fn new(set: &'a MatrixSet<T>, options: EnumOptions) -> Result<Self> {
        let mut products = set.matrices().to_vec();
        sort_dedup(&mut products);
        let products = apply_pruning(products, options.prune);
        if products.len() > options.budget {
            return Err(JsrError::BudgetExceeded {
                limit: options.budget,
                length: 1,
            });
        }
        Ok(ProductEnumerator {
            set,
            options,
            frontier: Frontier { length: 1, products },
        })
    }

    pub fn frontier(&self) -> &Frontier<T> {
        &self.frontier
    }

    /// Advance to the next length. On budget overflow the current frontier is kept.
    pub fn advance(&mut self) -> Result<&Frontier<T>> {
        let next_len = self.frontier.length + 1;
        let set = self.set;
        let mut next: Vec<Matrix<T>> = self
            .frontier
            .products
            .par_iter()
            .flat_map_iter(|p| set.matrices().iter().map(move |a| p.mul_unchecked(a)))
            .collect();
        sort_dedup(&mut next);
        let next = apply_pruning(next, self.options.prune);
        if next.len() > self.options.budget {
            return Err(JsrError::BudgetExceeded {
                limit: self.options.budget,
                length: next_len,
            });
        }
        self.frontier = Frontier {
            length: next_len,
            products: next,
        };
        Ok(&self.frontier)
    }
}

/// `‖Σⁿ‖` and `‖Σⁿ‖_C` for n = 1..=n_max.
#[derive(Clone, Debug, PartialEq)]
pub struct NormTable<T: Entry = Scalar> {
    pub n_max: usize,
    sigma_norm: Vec<T>,
    component_norm: Vec<Vec<T>>,
    pub pruned: bool,
    pub components: Vec<Vec<usize>>,
}

impl<T: Entry> NormTable<T> {
    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.n_max {
            return Err(JsrError::OutOfRange { n, max: self.n_max });
        }
        Ok(())
    }

    /// `‖Σⁿ‖`.
    pub fn sigma(&self, n: usize) -> Result<&T> {
        self.check(n)?;
        Ok(&self.sigma_norm[n - 1])
    }

    /// `‖Σⁿ‖_C` for component index `c`.
    pub fn component(&self, n: usize, c: usize) -> Result<&T> {
        self.check(n)?;
        Ok(&self.component_norm[n - 1][c])
    }

    pub fn component_row(&self, n: usize) -> Result<&[T]> {
        self.check(n)?;
        Ok(&self.component_norm[n - 1])
    }

    /// `max_C ‖Σⁿ‖_C`.
    pub fn max_component_norm(&self, n: usize) -> Result<T> {
        self.check(n)?;
        Ok(max_of(&self.component_norm[n - 1]))
    }

    fn push(&mut self, frontier: &Frontier<T>) {
        let sigma = max_of(&frontier.products.iter().map(Matrix::max_norm).collect::<Vec<_>>());
        let comps = self
            .components
            .iter()
            .map(|c| max_of(&frontier.products.iter().map(|p| p.max_on(c)).collect::<Vec<_>>()))
            .collect();
        self.sigma_norm.push(sigma);
        self.component_norm.push(comps);
        self.n_max = self.sigma_norm.len();
    }
}

fn max_of<T: Entry>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |m, x| {
        if x.total_cmp(&m) == Ordering::Greater {
            x.clone()
        } else {
            m
        }
    })
}

/// Builds as much of the table as the budget allows. The returned error, if
/// any, is the budget overflow; the table then stops at the last full length.
pub fn norm_table_partial<T: Entry>(
    s: &MatrixSet<T>,
    n_max: usize,
    options: EnumOptions,
) -> (NormTable<T>, Option<JsrError>) {
    let cond = scc(&build_graph(s));
    norm_table_with(s, &cond, n_max, options)
}

pub(crate) fn norm_table_with<T: Entry>(
    s: &MatrixSet<T>,
    cond: &Condensation,
    n_max: usize,
    options: EnumOptions,
) -> (NormTable<T>, Option<JsrError>) {
    let mut table = NormTable {
        n_max: 0,
        sigma_norm: Vec::new(),
        component_norm: Vec::new(),
        pruned: options.prune != PruneMode::Off,
        components: cond.components.clone(),
    };
    if n_max == 0 {
        return (table, Some(JsrError::OutOfRange { n: 0, max: 0 }));
    }
    let mut en = match ProductEnumerator::new(s, options) {
        Ok(en) => en,
        Err(e) => return (table, Some(e)),
    };
    table.push(en.frontier());
    while table.n_max < n_max {
        match en.advance() {
            Ok(f) => table.push(f),
            Err(e) => return (table, Some(e)),
        }
    }
    (table, None)
}

pub fn norm_table<T: Entry>(s: &MatrixSet<T>, n_max: usize, options: EnumOptions) -> Result<NormTable<T>> {
    if n_max < 1 {
        return Err(JsrError::OutOfRange {
            n: n_max,
            max: usize::MAX,
        });
    }
    match norm_table_partial(s, n_max, options) {
        (t, None) => Ok(t),
        (_, Some(e)) => Err(e),
    }
}

/// Outcome of checking every positive entry of every length-n product
/// against `[Vⁿ, Dⁿ⁻¹Uⁿ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryRangeReport {
    pub n: usize,
    pub products: usize,
    pub positive_entries: usize,
    pub min_entry: Option<Scalar>,
    pub max_entry: Option<Scalar>,
    pub lower_bound: Scalar,
    pub upper_bound: Scalar,
}

pub fn entry_range_check(s: &MatrixSet, n: usize, budget: usize) -> Result<EntryRangeReport> {
    if n == 0 {
        return Err(JsrError::OutOfRange { n, max: usize::MAX });
    }
    let consts = set_constants(s)?;
    let lower_bound = consts.v.pow(n as u32);
    let upper_bound = Scalar::from_integer(s.dim() as u64).pow(n as u32 - 1) * consts.u.pow(n as u32);

    let mut en = ProductEnumerator::new(
        s,
        EnumOptions {
            prune: PruneMode::Off,
            budget,
        },
    )?;
    while en.frontier().length < n {
        en.advance()?;
    }
    let products = &en.frontier().products;
    let mut report = EntryRangeReport {
        n,
        products: products.len(),
        positive_entries: 0,
        min_entry: None,
        max_entry: None,
        lower_bound,
        upper_bound,
    };
    for x in products.iter().flat_map(|p| p.entries()).filter(|x| x.is_positive()) {
        if *x < report.lower_bound || *x > report.upper_bound {
            return Err(JsrError::InvariantViolation(format!(
                "entry {x} of a length-{n} product outside [{}, {}]",
                report.lower_bound, report.upper_bound
            )));
        }
        report.positive_entries += 1;
        if report.min_entry.as_ref().is_none_or(|m| x < m) {
            report.min_entry = Some(x.clone());
        }
        if report.max_entry.as_ref().is_none_or(|m| x > m) {
            report.max_entry = Some(x.clone());
        }
    }
    Ok(report)
}
