//! Labeled multigraphs with loops and parallel edges.
//!
//! Every edge carries a label that names its polynomial variable. Labels are
//! never renumbered: deleting or contracting an edge keeps the labels of all
//! surviving edges, so polynomials of `G`, `G∖e` and `G/e` live in literally
//! the same variables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest usable label is `MAX_LABELS - 1`; terms are keyed by `u64` masks.
pub const MAX_LABELS: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub label: usize,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Bridge,
    Loop,
    Regular,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Bridge => "bridge",
            EdgeKind::Loop => "loop",
            EdgeKind::Regular => "regular",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Edge labels grouped by kind, each list ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCensus {
    pub bridges: Vec<usize>,
    pub loops: Vec<usize>,
    pub regular: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl Multigraph {
    /// Builds a graph whose edges are labeled `0..pairs.len()` in order.
    pub fn new(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(label, &(u, v))| Edge { label, u, v })
            .collect();
        Self::with_edges(vertex_count, edges)
    }

    /// Builds a graph from explicitly labeled edges.
    pub fn with_edges(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = 0u64;
        for e in &edges {
            if e.label >= MAX_LABELS {
                return Err(Error::LabelTooLarge {
                    label: e.label,
                    max: MAX_LABELS,
                });
            }
            if seen & (1 << e.label) != 0 {
                return Err(Error::DuplicateLabel(e.label));
            }
            seen |= 1 << e.label;
            for endpoint in [e.u, e.v] {
                if endpoint >= vertex_count {
                    return Err(Error::EndpointOutOfRange {
                        label: e.label,
                        endpoint,
                        vertex_count,
                    });
                }
            }
        }
        Ok(Multigraph {
            vertex_count,
            edges,
        })
    }

    pub fn edgeless(vertex_count: usize) -> Self {
        Multigraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().map(|e| e.label)
    }

    /// Bitmask of the labels present in the graph.
    pub fn label_mask(&self) -> u64 {
        self.edges.iter().fold(0, |m, e| m | (1 << e.label))
    }

    /// One more than the largest label, or 0 for an edgeless graph.
    pub fn label_bound(&self) -> usize {
        self.edges.iter().map(|e| e.label + 1).max().unwrap_or(0)
    }

    pub fn edge(&self, label: usize) -> Result<&Edge> {
        self.edges
            .iter()
            .find(|e| e.label == label)
            .ok_or(Error::UnknownLabel(label))
    }

    pub fn is_forest(&self) -> bool {
        self.betti_1() == 0
    }

    pub fn has_loop_only_edges(&self) -> bool {
        self.edges.iter().all(Edge::is_loop)
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        let mut merges = 0;
        for e in &self.edges {
            if uf.union(e.u, e.v) {
                merges += 1;
            }
        }
        self.vertex_count - merges
    }

    /// Component index of every vertex, numbered by first appearance.
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        let mut ids = vec![usize::MAX; self.vertex_count];
        let mut out = vec![0; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            let r = uf.find(v);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            out[v] = ids[r];
        }
        out
    }

    /// Cycle rank `n - |V| + #components`.
    pub fn betti_1(&self) -> usize {
        self.edges.len() + self.component_count() - self.vertex_count
    }

    pub fn classify_edge(&self, label: usize) -> Result<EdgeKind> {
        let edge = *self.edge(label)?;
        if edge.is_loop() {
            return Ok(EdgeKind::Loop);
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for e in self.edges.iter().filter(|e| e.label != label) {
            uf.union(e.u, e.v);
        }
        if uf.find(edge.u) == uf.find(edge.v) {
            Ok(EdgeKind::Regular)
        } else {
            Ok(EdgeKind::Bridge)
        }
    }

    pub fn census(&self) -> EdgeCensus {
        let mut census = EdgeCensus::default();
        let mut labels: Vec<usize> = self.labels().collect();
        labels.sort_unstable();
        for label in labels {
            match self.classify_edge(label).expect("label from graph") {
                EdgeKind::Bridge => census.bridges.push(label),
                EdgeKind::Loop => census.loops.push(label),
                EdgeKind::Regular => census.regular.push(label),
            }
        }
        census
    }

    /// `G∖e`: same vertices, edge `e` removed.
    pub fn delete_edge(&self, label: usize) -> Result<Multigraph> {
        self.edge(label)?;
        Ok(Multigraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .filter(|e| e.label != label)
                .copied()
                .collect(),
        })
    }

    /// `G/e`: the endpoints of `e` are identified and `e` is removed.
    ///
    /// The larger endpoint is merged into the smaller one and higher
    /// vertices shift down by one. Edges parallel to `e` become loops.
    pub fn contract_edge(&self, label: usize) -> Result<Multigraph> {
        let edge = *self.edge(label)?;
        if edge.is_loop() {
            return Err(Error::ContractLoop(label));
        }
        let keep = edge.u.min(edge.v);
        let gone = edge.u.max(edge.v);
        let remap = |x: usize| match x.cmp(&gone) {
            std::cmp::Ordering::Less => x,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => x - 1,
        };
        Ok(Multigraph {
            vertex_count: self.vertex_count - 1,
            edges: self
                .edges
                .iter()
                .filter(|e| e.label != label)
                .map(|e| Edge {
                    label: e.label,
                    u: remap(e.u),
                    v: remap(e.v),
                })
                .collect(),
        })
    }

    /// All maximal spanning forests as ascending label lists, in
    /// lexicographic order.
    pub fn spanning_forests(&self) -> Vec<Vec<usize>> {
        let mut candidates: Vec<Edge> = self.edges.iter().filter(|e| !e.is_loop()).copied().collect();
        candidates.sort_by_key(|e| e.label);
        let size = self.vertex_count - self.component_count();
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(size);
        forests_from(
            &candidates,
            0,
            size,
            &UnionFind::new(self.vertex_count),
            &mut chosen,
            &mut out,
        );
        out
    }

    /// Maximal spanning forests as label bitmasks, same order as
    /// [`Multigraph::spanning_forests`].
    pub fn spanning_forest_masks(&self) -> Vec<u64> {
        self.spanning_forests()
            .iter()
            .map(|f| f.iter().fold(0u64, |m, &l| m | (1 << l)))
            .collect()
    }

    /// Disjoint union; `other`'s vertices and labels are shifted past ours.
    pub fn disjoint_union(&self, other: &Multigraph) -> Result<Multigraph> {
        let shift = self.label_bound();
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            label: e.label + shift,
            u: e.u + self.vertex_count,
            v: e.v + self.vertex_count,
        }));
        Multigraph::with_edges(self.vertex_count + other.vertex_count, edges)
    }
}

fn forests_from(
    candidates: &[Edge],
    start: usize,
    remaining: usize,
    uf: &UnionFind,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        out.push(chosen.clone());
        return;
    }
    if candidates.len() - start < remaining {
        return;
    }
    for i in start..=candidates.len() - remaining {
        let e = candidates[i];
        let mut next = uf.clone();
        if !next.union(e.u, e.v) {
            continue;
        }
        chosen.push(e.label);
        forests_from(candidates, i + 1, remaining - 1, &next, chosen, out);
        chosen.pop();
    }
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> Multigraph {
        Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn banana(m: usize) -> Multigraph {
        Multigraph::new(2, &vec![(0, 1); m]).unwrap()
    }

    #[test]
    fn classify_basic() {
        let bridge = Multigraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(bridge.classify_edge(0), Ok(EdgeKind::Bridge));
        let lp = Multigraph::new(1, &[(0, 0)]).unwrap();
        assert_eq!(lp.classify_edge(0), Ok(EdgeKind::Loop));
        let c3 = cycle3();
        for l in 0..3 {
            assert_eq!(c3.classify_edge(l), Ok(EdgeKind::Regular));
        }
        assert_eq!(c3.classify_edge(7), Err(Error::UnknownLabel(7)));
    }

    #[test]
    fn delete_keeps_labels() {
        let path = cycle3().delete_edge(1).unwrap();
        assert_eq!(path.vertex_count(), 3);
        assert_eq!(path.labels().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(path.betti_1(), 0);

        let lp = Multigraph::new(1, &[(0, 0)]).unwrap().delete_edge(0).unwrap();
        assert_eq!((lp.vertex_count(), lp.edge_count()), (1, 0));

        let b2 = banana(3).delete_edge(0).unwrap();
        assert_eq!(b2.edge_count(), 2);
        assert!(b2.edges().iter().all(|e| (e.u, e.v) == (0, 1)));
        assert_eq!(banana(3).delete_edge(5), Err(Error::UnknownLabel(5)));
    }

    #[test]
    fn contract_cases() {
        let one = banana(2).contract_edge(0).unwrap();
        assert_eq!(one.vertex_count(), 1);
        assert_eq!(one.edges(), &[Edge { label: 1, u: 0, v: 0 }]);

        let b2 = cycle3().contract_edge(2).unwrap();
        assert_eq!(b2.vertex_count(), 2);
        assert_eq!(b2.census().regular, vec![0, 1]);
        assert!(b2.edges().iter().all(|e| !e.is_loop()));

        let point = Multigraph::new(2, &[(0, 1)]).unwrap().contract_edge(0).unwrap();
        assert_eq!((point.vertex_count(), point.edge_count()), (1, 0));

        let lp = Multigraph::new(1, &[(0, 0)]).unwrap();
        assert_eq!(lp.contract_edge(0), Err(Error::ContractLoop(0)));
    }

    #[test]
    fn forests_enumerated_in_lex_order() {
        assert_eq!(
            cycle3().spanning_forests(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        let lp = Multigraph::new(1, &[(0, 0)]).unwrap();
        assert_eq!(lp.spanning_forests(), vec![Vec::<usize>::new()]);
        let tree = Multigraph::new(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(tree.spanning_forests(), vec![vec![0, 1, 2]]);
        // two components, each a banana of two edges
        let two = banana(2).disjoint_union(&banana(2)).unwrap();
        assert_eq!(
            two.spanning_forests(),
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]
        );
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(cycle3().betti_1(), 1);
        assert_eq!(Multigraph::new(3, &[(0, 1), (1, 2)]).unwrap().betti_1(), 0);
        assert_eq!(Multigraph::new(1, &[(0, 0); 4]).unwrap().betti_1(), 4);
        assert_eq!(Multigraph::edgeless(5).betti_1(), 0);
    }

    #[test]
    fn validation() {
        assert_eq!(
            Multigraph::new(2, &[(0, 2)]),
            Err(Error::EndpointOutOfRange {
                label: 0,
                endpoint: 2,
                vertex_count: 2
            })
        );
        let dup = vec![Edge { label: 1, u: 0, v: 0 }, Edge { label: 1, u: 0, v: 0 }];
        assert_eq!(Multigraph::with_edges(1, dup), Err(Error::DuplicateLabel(1)));
        let big = vec![Edge { label: 63, u: 0, v: 0 }];
        assert!(matches!(
            Multigraph::with_edges(1, big),
            Err(Error::LabelTooLarge { .. })
        ));
    }

    #[test]
    fn union_shifts_labels_and_vertices() {
        let g = cycle3().disjoint_union(&banana(2)).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.labels().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        assert_eq!(g.edge(3).unwrap(), &Edge { label: 3, u: 3, v: 4 });
        assert_eq!(g.component_count(), 2);
    }
}
