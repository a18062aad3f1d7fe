//! Dependency graph of a matrix set: strongly connected components, the
//! condensation DAG, shortest-path distances and witness path products.
//!
//! Vertices are 0-based indices into the matrix dimension.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use crate::error::{JsrError, Result};
use crate::matrix::{Matrix, MatrixSet};
use crate::scalar::Entry;

/// Edge `i → j` iff some matrix of the set has a nonzero `(i, j)` entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    dim: usize,
    adjacency: Vec<Vec<bool>>,
}

impl DependencyGraph {
    pub fn from_adjacency(adjacency: Vec<Vec<bool>>) -> Self {
        let dim = adjacency.len();
        assert!(adjacency.iter().all(|r| r.len() == dim), "square adjacency");
        DependencyGraph { dim, adjacency }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i].iter().enumerate().filter(|(_, &e)| e).map(|(j, _)| j)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.dim)
            .flat_map(|i| self.successors(i).map(move |j| (i, j)))
            .collect()
    }
}

pub fn build_graph<T: Entry>(s: &MatrixSet<T>) -> DependencyGraph {
    let d = s.dim();
    let mut adjacency = vec![vec![false; d]; d];
    for m in s.matrices() {
        for (i, row) in adjacency.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e |= !m.get(i, j).is_zero();
            }
        }
    }
    DependencyGraph { dim: d, adjacency }
}

/// Strongly connected components in topological order of the condensation
/// (ties broken by smallest vertex), each with its vertices sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Sorted, deduplicated edges between distinct components.
    pub dag_edges: Vec<(usize, usize)>,
    /// Singleton component without a self-loop.
    pub trivial: Vec<bool>,
}

impl Condensation {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// One nontrivial component covering every vertex.
    pub fn is_strongly_connected(&self) -> bool {
        self.components.len() == 1 && !self.trivial[0]
    }

    pub fn dag_successors(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.dag_edges.iter().filter(move |(a, _)| *a == c).map(|&(_, b)| b)
    }
}

struct Tarjan<'a> {
    g: &'a DependencyGraph,
    index: usize,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    comps: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.idx[v] = Some(self.index);
        self.low[v] = self.index;
        self.index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;

        for w in self.g.successors(v) {
            match self.idx[w] {
                None => {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                }
                Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                Some(_) => {}
            }
        }

        if Some(self.low[v]) == self.idx[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("tarjan stack");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            self.comps.push(comp);
        }
    }
}

pub fn scc(g: &DependencyGraph) -> Condensation {
    let d = g.dim();
    let mut t = Tarjan {
        g,
        index: 0,
        idx: vec![None; d],
        low: vec![0; d],
        stack: Vec::new(),
        on_stack: vec![false; d],
        comps: Vec::new(),
    };
    for v in 0..d {
        if t.idx[v].is_none() {
            t.visit(v);
        }
    }
    let raw = t.comps;

    let mut raw_of = vec![0; d];
    for (c, comp) in raw.iter().enumerate() {
        for &v in comp {
            raw_of[v] = c;
        }
    }
    let k = raw.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    let mut indegree = vec![0usize; k];
    for (i, j) in g.edges() {
        let (a, b) = (raw_of[i], raw_of[j]);
        if a != b && succ[a].insert(b) {
            indegree[b] += 1;
        }
    }

    // Kahn's algorithm keyed by smallest vertex
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..k)
        .filter(|&c| indegree[c] == 0)
        .map(|c| Reverse((raw[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((_, c))) = heap.pop() {
        order.push(c);
        for &b in &succ[c] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                heap.push(Reverse((raw[b][0], b)));
            }
        }
    }
    debug_assert_eq!(order.len(), k);

    let mut rank = vec![0; k];
    for (pos, &c) in order.iter().enumerate() {
        rank[c] = pos;
    }
    let components: Vec<Vec<usize>> = order.iter().map(|&c| raw[c].clone()).collect();
    let component_of: Vec<usize> = raw_of.iter().map(|&c| rank[c]).collect();
    let mut dag_edges: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| succ[a].iter().map(move |&b| (a, b)).collect::<Vec<_>>())
        .map(|(a, b)| (rank[a], rank[b]))
        .collect();
    dag_edges.sort_unstable();
    let trivial = components
        .iter()
        .map(|c| c.len() == 1 && !g.has_edge(c[0], c[0]))
        .collect();

    Condensation {
        components,
        component_of,
        dag_edges,
        trivial,
    }
}

/// All-pairs unweighted distances; `None` marks an unreachable pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    delta: Vec<Vec<Option<usize>>>,
}

impl DistanceTable {
    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.delta[i][j]
    }

    pub fn dim(&self) -> usize {
        self.delta.len()
    }
}

fn bfs(g: &DependencyGraph, source: usize, reverse: bool) -> Vec<Option<usize>> {
    let d = g.dim();
    let mut dist = vec![None; d];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].expect("visited");
        for w in 0..d {
            let edge = if reverse { g.has_edge(w, v) } else { g.has_edge(v, w) };
            if edge && dist[w].is_none() {
                dist[w] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn distances(g: &DependencyGraph) -> DistanceTable {
    DistanceTable {
        delta: (0..g.dim()).map(|i| bfs(g, i, false)).collect(),
    }
}

/// A shortest path product with a positive `(source, target)` entry.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessProduct<T: Entry> {
    pub source: usize,
    pub target: usize,
    /// Indices into the matrix set, in multiplication order.
    pub matrices: Vec<usize>,
    pub value: T,
}

/// Witness for `source ⇝ target`: follows the lexicographically smallest
/// shortest path and, per edge, the first matrix realizing it.
pub fn witness_product<T: Entry>(s: &MatrixSet<T>, source: usize, target: usize) -> Result<WitnessProduct<T>> {
    if source == target {
        return Ok(WitnessProduct {
            source,
            target,
            matrices: vec![],
            value: T::one(),
        });
    }
    let g = build_graph(s);
    let to_target = bfs(&g, target, true);
    let mut remaining = to_target[source].ok_or(JsrError::Unreachable {
        from: source,
        to: target,
    })?;
    let mut cur = source;
    let mut picks = Vec::with_capacity(remaining);
    while cur != target {
        let next = g
            .successors(cur)
            .find(|&w| to_target[w] == Some(remaining - 1))
            .expect("shortest path continues");
        let which = s
            .matrices()
            .iter()
            .position(|m| !m.get(cur, next).is_zero())
            .expect("edge is realized by some matrix");
        picks.push(which);
        cur = next;
        remaining -= 1;
    }
    let product = picks
        .iter()
        .map(|&k| s.matrices()[k].clone())
        .reduce(|acc, m| acc.mul_unchecked(&m))
        .unwrap_or_else(|| Matrix::identity(s.dim()));
    let value = product.get(source, target).clone();
    Ok(WitnessProduct {
        source,
        target,
        matrices: picks,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::scalar::Scalar;

    fn unipotent_set() -> MatrixSet {
        MatrixSet::singleton(Matrix::from_ints(&[&[1, 1], &[0, 1]]).unwrap())
    }

    fn shift_pair() -> MatrixSet {
        MatrixSet::new(vec![
            Matrix::from_ints(&[&[0, 1], &[0, 0]]).unwrap(),
            Matrix::from_ints(&[&[0, 0], &[1, 0]]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn graph_examples() {
        assert_eq!(build_graph(&unipotent_set()).edges(), vec![(0, 0), (0, 1), (1, 1)]);
        let id = MatrixSet::singleton(Matrix::<Scalar>::identity(2));
        assert_eq!(build_graph(&id).edges(), vec![(0, 0), (1, 1)]);
        assert_eq!(build_graph(&shift_pair()).edges(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn scc_examples() {
        let c = scc(&build_graph(&unipotent_set()));
        assert_eq!(c.components, vec![vec![0], vec![1]]);
        assert_eq!(c.dag_edges, vec![(0, 1)]);
        assert_eq!(c.trivial, vec![false, false]);

        let skewed = MatrixSet::singleton(Matrix::from_ratios(&[&[(1, 1), (1, 10)], &[(10, 1), (1, 1)]]).unwrap());
        let c = scc(&build_graph(&skewed));
        assert_eq!(c.components, vec![vec![0, 1]]);
        assert!(c.is_strongly_connected());

        let g = DependencyGraph::from_adjacency(vec![vec![false, true], vec![false, false]]);
        let c = scc(&g);
        assert_eq!(c.components, vec![vec![0], vec![1]]);
        assert_eq!(c.trivial, vec![true, true]);
        assert!(!c.is_strongly_connected());
    }

    #[test]
    fn topological_order_breaks_ties_by_smallest_vertex() {
        // 2 → 0, 1 isolated: sources are {1} and {2}; {1} first
        let mut adj = vec![vec![false; 3]; 3];
        adj[2][0] = true;
        let c = scc(&DependencyGraph::from_adjacency(adj));
        assert_eq!(c.components, vec![vec![1], vec![2], vec![0]]);
        assert_eq!(c.dag_edges, vec![(1, 2)]);
        assert_eq!(c.component_of, vec![2, 0, 1]);
    }

    #[test]
    fn distance_examples() {
        let t = distances(&build_graph(&unipotent_set()));
        assert_eq!(t.get(0, 1), Some(1));
        assert_eq!(t.get(1, 0), None);
        assert_eq!(t.get(0, 0), Some(0));
        assert_eq!(t.get(1, 1), Some(0));
        let t = distances(&build_graph(&shift_pair()));
        assert_eq!((t.get(0, 1), t.get(1, 0)), (Some(1), Some(1)));
    }

    #[test]
    fn witness_examples() {
        let w = witness_product(&unipotent_set(), 0, 0).unwrap();
        assert!(w.matrices.is_empty());
        assert_eq!(w.value, Scalar::one());

        let w = witness_product(&unipotent_set(), 0, 1).unwrap();
        assert_eq!(w.matrices, vec![0]);
        assert_eq!(w.value, Scalar::one());

        let w = witness_product(&shift_pair(), 1, 0).unwrap();
        assert_eq!(w.matrices, vec![1]);
        assert_eq!(w.value, Scalar::one());

        assert_eq!(
            witness_product(&unipotent_set(), 1, 0).unwrap_err(),
            JsrError::Unreachable { from: 1, to: 0 }
        );
    }

    #[test]
    fn witness_prefers_lexicographically_smallest_path() {
        // 0 → 1 → 3 and 0 → 2 → 3 are both shortest
        let mut a = Matrix::<Scalar>::zeros(4).entries().to_vec();
        for (i, j) in [(0, 1), (1, 3), (0, 2), (2, 3)] {
            a[i * 4 + j] = Scalar::from(2);
        }
        let rows = a.chunks(4).map(|r| r.to_vec()).collect();
        let s = MatrixSet::singleton(Matrix::from_rows(rows).unwrap());
        let w = witness_product(&s, 0, 3).unwrap();
        assert_eq!(w.matrices.len(), 2);
        // (A²)₀₃ = 2·2 + 2·2
        assert_eq!(w.value, Scalar::from(8));
    }
}
