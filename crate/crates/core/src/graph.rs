//! Undirected simple graphs in compressed adjacency form, node colourings and
//! graph collections.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

/// Immutable undirected simple graph.
///
/// Adjacency is stored in CSR form: the neighbours of `v` are
/// `targets[offsets[v]..offsets[v + 1]]`, sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    node_labels: Option<Vec<i64>>,
    node_attributes: Option<Vec<Vec<f64>>>,
}

impl Graph {
    /// Graph on `n` nodes without edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
            node_labels: None,
            node_attributes: None,
        }
    }

    /// Builds a graph from an undirected edge list. Each edge must appear once
    /// (in either orientation); self-loops and repeated edges are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in edges {
            targets[fill[u]] = v as u32;
            fill[u] += 1;
            targets[fill[v]] = u as u32;
            fill[v] += 1;
        }
        for v in 0..n {
            let adj = &mut targets[offsets[v]..offsets[v + 1]];
            adj.sort_unstable();
            if let Some(w) = adj.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (v.min(w[0] as usize), v.max(w[0] as usize));
                return Err(Error::DuplicateEdge(a, b));
            }
        }
        Ok(Graph {
            offsets,
            targets,
            node_labels: None,
            node_attributes: None,
        })
    }

    pub fn with_node_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: labels.len(),
            });
        }
        self.node_labels = Some(labels);
        Ok(self)
    }

    pub fn with_node_attributes(mut self, attributes: Vec<Vec<f64>>) -> Result<Self> {
        if attributes.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: attributes.len(),
            });
        }
        self.node_attributes = Some(attributes);
        Ok(self)
    }

    /// Number of nodes.
    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    /// CSR row offsets, `n + 1` entries.
    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn node_labels(&self) -> Option<&[i64]> {
        self.node_labels.as_deref()
    }

    pub fn node_attributes(&self) -> Option<&[Vec<f64>]> {
        self.node_attributes.as_deref()
    }

    pub(crate) fn check_node(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: v,
                n: self.n(),
            })
        }
    }

    /// Nodes reachable from `v` in at most `k` steps, `v` included, sorted
    /// ascending.
    pub fn k_hop_neighborhood(&self, v: usize, k: usize) -> Result<Vec<usize>> {
        self.check_node(v)?;
        let dist = self.bfs_distances(v, k);
        Ok((0..self.n()).filter(|&u| dist[u].is_some()).collect())
    }

    /// BFS distances from `v`, truncated at `limit`.
    pub(crate) fn bfs_distances(&self, v: usize, limit: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            if dx == limit {
                continue;
            }
            for &y in self.neighbors(x) {
                let y = y as usize;
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Subgraph induced by `nodes`. The kept nodes are renumbered `0..k` in
    /// ascending order of their original index; labels and attributes follow.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Graph> {
        let mut keep: Vec<usize> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            self.check_node(v)?;
            index[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|(u, v)| (index[u], index[v]))
            .collect();
        let mut g = Graph::from_edges(keep.len(), &edges)?;
        if let Some(labels) = &self.node_labels {
            g.node_labels = Some(keep.iter().map(|&v| labels[v]).collect());
        }
        if let Some(attrs) = &self.node_attributes {
            g.node_attributes = Some(keep.iter().map(|&v| attrs[v].clone()).collect());
        }
        Ok(g)
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        let edges: Vec<(usize, usize)> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        let mut g = Graph::from_edges(n, &edges)?;
        g.node_labels = self.node_labels.as_deref().map(|l| scatter(l, perm));
        g.node_attributes = self.node_attributes.as_deref().map(|a| scatter(a, perm));
        Ok(g)
    }
}

fn scatter<T: Clone>(src: &[T], perm: &[usize]) -> Vec<T> {
    let mut out = src.to_vec();
    for (v, x) in src.iter().enumerate() {
        out[perm[v]] = x.clone();
    }
    out
}

/// Disjoint union; node indices of `gs[i]` are shifted by the total node count
/// of `gs[..i]`. Labels are kept only if every part carries them.
pub fn disjoint_union(gs: &[Graph]) -> Graph {
    let n: usize = gs.iter().map(Graph::n).sum();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(gs.iter().map(|g| g.targets.len()).sum());
    offsets.push(0);
    let mut shift = 0u32;
    for g in gs {
        for v in 0..g.n() {
            targets.extend(g.neighbors(v).iter().map(|&u| u + shift));
            offsets.push(targets.len());
        }
        shift += g.n() as u32;
    }
    let node_labels = gs
        .iter()
        .map(|g| g.node_labels.as_ref())
        .collect::<Option<Vec<_>>>()
        .map(|ls| ls.into_iter().flatten().copied().collect());
    let node_attributes = gs
        .iter()
        .map(|g| g.node_attributes.as_ref())
        .collect::<Option<Vec<_>>>()
        .map(|ls| ls.into_iter().flatten().cloned().collect());
    Graph {
        offsets,
        targets,
        node_labels,
        node_attributes,
    }
}

/// A node colouring with dense, canonical colour ids: colours are numbered in
/// order of first occurrence when scanning nodes by ascending index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<u32>,
    num_classes: usize,
}

impl Coloring {
    /// Canonical colouring in which `u` and `v` share a colour iff
    /// `keys[u] == keys[v]`.
    pub fn from_keys<K: Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, u32> = HashMap::new();
        let colors: Vec<u32> = keys
            .into_iter()
            .map(|k| {
                let next = ids.len() as u32;
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Coloring {
            num_classes: ids.len(),
            colors,
        }
    }

    /// Caller guarantees `colors` is already dense and in first-occurrence
    /// order.
    pub(crate) fn from_canonical(colors: Vec<u32>, num_classes: usize) -> Self {
        Coloring {
            colors,
            num_classes,
        }
    }

    /// All nodes in one class (no classes when `n == 0`).
    pub fn constant(n: usize) -> Self {
        Coloring {
            colors: vec![0; n],
            num_classes: usize::from(n > 0),
        }
    }

    /// Every node in its own class.
    pub fn discrete(n: usize) -> Self {
        Coloring {
            colors: (0..n as u32).collect(),
            num_classes: n,
        }
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    #[inline]
    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Restriction to the nodes `range`, re-canonicalised.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Coloring {
        Coloring::from_keys(self.colors[range].iter().copied())
    }

    /// Node sets of each class, indexed by colour id.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c as usize].push(v);
        }
        out
    }
}

/// The colouring that assigns every node colour 0.
pub fn constant_coloring(g: &Graph) -> Coloring {
    Coloring::constant(g.n())
}

/// An ordered set of graphs, addressed both per graph and by global node
/// index in their disjoint union.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphCollection {
    graphs: Vec<Graph>,
    graph_labels: Option<Vec<i64>>,
    node_offsets: Vec<usize>,
}

impl GraphCollection {
    pub fn new(graphs: Vec<Graph>, graph_labels: Option<Vec<i64>>) -> Result<Self> {
        if let Some(labels) = &graph_labels {
            if labels.len() != graphs.len() {
                return Err(Error::LengthMismatch {
                    expected: graphs.len(),
                    got: labels.len(),
                });
            }
        }
        let mut node_offsets = Vec::with_capacity(graphs.len() + 1);
        node_offsets.push(0);
        for g in &graphs {
            node_offsets.push(node_offsets.last().unwrap() + g.n());
        }
        Ok(GraphCollection {
            graphs,
            graph_labels,
            node_offsets,
        })
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn graph_labels(&self) -> Option<&[i64]> {
        self.graph_labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn total_nodes(&self) -> usize {
        *self.node_offsets.last().unwrap()
    }

    /// Global node range occupied by graph `graph_id`.
    pub fn node_range(&self, graph_id: usize) -> std::ops::Range<usize> {
        self.node_offsets[graph_id]..self.node_offsets[graph_id + 1]
    }

    pub fn global_index(&self, graph_id: usize, local: usize) -> Result<usize> {
        let g = self
            .graphs
            .get(graph_id)
            .ok_or(Error::InvalidArgument(format!(
                "graph {graph_id} out of range ({} graphs)",
                self.graphs.len()
            )))?;
        g.check_node(local)?;
        Ok(self.node_offsets[graph_id] + local)
    }

    /// Inverse of [`global_index`](Self::global_index).
    pub fn locate(&self, global: usize) -> Result<(usize, usize)> {
        if global >= self.total_nodes() {
            return Err(Error::NodeOutOfRange {
                node: global,
                n: self.total_nodes(),
            });
        }
        let gid = self.node_offsets.partition_point(|&o| o <= global) - 1;
        Ok((gid, global - self.node_offsets[gid]))
    }

    /// Disjoint union of all graphs; node `i` of the result is global node `i`.
    pub fn union(&self) -> Graph {
        disjoint_union(&self.graphs)
    }

    /// Per-node labels over global indices, if every graph has them.
    pub fn node_labels(&self) -> Option<Vec<i64>> {
        self.graphs
            .iter()
            .map(|g| g.node_labels())
            .collect::<Option<Vec<_>>>()
            .map(|ls| ls.concat())
    }
}
