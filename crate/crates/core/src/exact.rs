//! Exact depth-`d` roles from node-identified unravellings, and automorphism
//! orbits.
//!
//! The unravelling of `v` at depth `d` is the tree of all walks of length at
//! most `d` starting at `v`; a walk's parent is the walk with its last vertex
//! removed, and its id is that last vertex. Two nodes have the same unidentified
//! role when their unravellings are isomorphic as rooted trees, and the same
//! exact role when some such isomorphism also induces a well-defined bijection
//! between ids.
//!
//! Everything here is exponential in `d` or `n` and guarded by explicit size
//! limits in [`ExactConfig`].

use std::collections::HashMap;
use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, GraphCollection};
use crate::wl;

/// Size guards for the exact routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactConfig {
    /// Largest graph accepted by [`exact_roles`].
    pub max_nodes: usize,
    /// Largest graph accepted by [`automorphism_orbits`].
    pub max_orbit_nodes: usize,
    /// Largest unravelling tree that will be materialised.
    pub max_tree_nodes: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_nodes: 32,
            max_orbit_nodes: 10,
            max_tree_nodes: 1 << 22,
        }
    }
}

const NO_PARENT: u32 = u32::MAX;

/// Tree of walks of length `<= depth` from a root vertex, stored level by
/// level. Children of a tree node occupy a contiguous index range.
#[derive(Clone, Debug)]
pub struct UnravellingTree {
    depth: usize,
    parent: Vec<u32>,
    id: Vec<u32>,
    child_start: Vec<u32>,
    level_start: Vec<usize>,
}

impl UnravellingTree {
    pub fn len(&self) -> usize {
        self.id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Vertex the root walk starts at.
    pub fn root_vertex(&self) -> usize {
        self.id[0] as usize
    }

    /// Last vertex of the walk represented by tree node `i`.
    pub fn id(&self, i: usize) -> usize {
        self.id[i] as usize
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        match self.parent[i] {
            NO_PARENT => None,
            p => Some(p as usize),
        }
    }

    pub fn children(&self, i: usize) -> Range<usize> {
        self.child_start[i] as usize..self.child_start[i + 1] as usize
    }

    /// Tree nodes at distance `k` from the root.
    pub fn level(&self, k: usize) -> Range<usize> {
        self.level_start[k]..self.level_start[k + 1]
    }

    /// The walk `(v, x1, ..., xk)` represented by tree node `i`.
    pub fn walk(&self, mut i: usize) -> Vec<usize> {
        let mut w = vec![self.id(i)];
        while let Some(p) = self.parent(i) {
            w.push(self.id(p));
            i = p;
        }
        w.reverse();
        w
    }
}

/// Unravelling of `g` at `v` to depth `d`, with the default tree-size guard.
pub fn build_unravelling(g: &Graph, v: usize, d: usize) -> Result<UnravellingTree> {
    build_unravelling_bounded(g, v, d, ExactConfig::default().max_tree_nodes)
}

pub fn build_unravelling_bounded(
    g: &Graph,
    v: usize,
    d: usize,
    max_tree_nodes: usize,
) -> Result<UnravellingTree> {
    g.check_node(v)?;
    let mut tree = UnravellingTree {
        depth: d,
        parent: vec![NO_PARENT],
        id: vec![v as u32],
        child_start: Vec::new(),
        level_start: vec![0, 1],
    };
    for k in 0..d {
        for i in tree.level(k) {
            tree.child_start.push(tree.id.len() as u32);
            for &y in g.neighbors(tree.id[i] as usize) {
                tree.parent.push(i as u32);
                tree.id.push(y);
            }
            if tree.id.len() > max_tree_nodes {
                return Err(Error::SizeGuard {
                    what: "unravelling tree size",
                    actual: tree.id.len(),
                    limit: max_tree_nodes,
                });
            }
        }
        tree.level_start.push(tree.id.len());
    }
    // the deepest level has no children
    let total = tree.id.len() as u32;
    tree.child_start.resize(tree.id.len() + 1, total);
    Ok(tree)
}

/// Interns sorted child-code lists, giving AHU codes shared across trees.
#[derive(Default)]
struct CodeBook {
    ids: HashMap<Vec<u32>, u32>,
}

impl CodeBook {
    /// AHU code of every node of `tree`: equal codes ⇔ isomorphic subtrees
    /// (ids ignored).
    fn encode(&mut self, tree: &UnravellingTree) -> Vec<u32> {
        let mut code = vec![0u32; tree.len()];
        let mut buf = Vec::new();
        for i in (0..tree.len()).rev() {
            buf.clear();
            buf.extend(tree.children(i).map(|c| code[c]));
            buf.sort_unstable();
            let next = self.ids.len() as u32;
            code[i] = match self.ids.get(&buf) {
                Some(&c) => c,
                None => {
                    self.ids.insert(buf.clone(), next);
                    next
                }
            };
        }
        code
    }
}

/// `true` iff the unravellings of `u` in `g1` and `v` in `g2` are isomorphic
/// as rooted trees.
pub fn unidentified_equivalent(
    g1: &Graph,
    u: usize,
    g2: &Graph,
    v: usize,
    d: usize,
) -> Result<bool> {
    let t1 = build_unravelling(g1, u, d)?;
    let t2 = build_unravelling(g2, v, d)?;
    let mut book = CodeBook::default();
    Ok(book.encode(&t1)[0] == book.encode(&t2)[0])
}

/// Partition of `g` by unravelling isomorphism at depth `d`.
pub fn unidentified_roles(g: &Graph, d: usize) -> Result<Coloring> {
    let mut book = CodeBook::default();
    let mut roots = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        roots.push(book.encode(&build_unravelling(g, v, d)?)[0]);
    }
    Ok(Coloring::from_keys(roots))
}

/// Unravelling together with its AHU codes.
struct Encoded {
    tree: UnravellingTree,
    code: Vec<u32>,
}

/// Search state for an id-consistent tree isomorphism: the partial id map and
/// the queue of matched tree-node pairs whose children are still unmatched.
#[derive(Clone)]
struct Matching {
    forward: Vec<u32>,
    backward: Vec<u32>,
    queue: Vec<(u32, u32)>,
    head: usize,
}

const UNMAPPED: u32 = u32::MAX;

fn id_consistent_isomorphism(a: &Encoded, b: &Encoded, n1: usize, n2: usize) -> bool {
    if a.code[0] != b.code[0] {
        return false;
    }
    let mut state = Matching {
        forward: vec![UNMAPPED; n1],
        backward: vec![UNMAPPED; n2],
        queue: vec![(0, 0)],
        head: 0,
    };
    let (r1, r2) = (a.tree.id[0] as usize, b.tree.id[0] as usize);
    state.forward[r1] = r2 as u32;
    state.backward[r2] = r1 as u32;
    extend(a, b, state)
}

/// Depth-first search over id assignments. Children whose id is already mapped
/// are forced; otherwise the first unmapped child is branched over every
/// compatible partner (same subtree code, partner id unused).
fn extend(a: &Encoded, b: &Encoded, mut state: Matching) -> bool {
    let mut pairs = Vec::new();
    while state.head < state.queue.len() {
        let (x, y) = state.queue[state.head];
        let (xs, ys) = (a.tree.children(x as usize), b.tree.children(y as usize));
        let mut used = vec![false; ys.len()];
        let mut free = None;
        pairs.clear();
        for cx in xs.clone() {
            let target = state.forward[a.tree.id[cx] as usize];
            if target == UNMAPPED {
                free.get_or_insert(cx);
                continue;
            }
            // siblings carry distinct ids in a simple graph, so at most one
            // partner can match
            let partner = ys
                .clone()
                .position(|cy| b.tree.id[cy] == target && b.code[cy] == a.code[cx]);
            match partner {
                Some(j) if !used[j] => {
                    used[j] = true;
                    pairs.push((cx as u32, (ys.start + j) as u32));
                }
                _ => return false,
            }
        }
        if let Some(cx) = free {
            let id_x = a.tree.id[cx] as usize;
            for (j, cy) in ys.clone().enumerate() {
                let id_y = b.tree.id[cy] as usize;
                if used[j] || b.code[cy] != a.code[cx] || state.backward[id_y] != UNMAPPED {
                    continue;
                }
                let mut branch = state.clone();
                branch.forward[id_x] = id_y as u32;
                branch.backward[id_y] = id_x as u32;
                // the current pair is revisited with one more child forced
                if extend(a, b, branch) {
                    return true;
                }
            }
            return false;
        }
        state.queue.extend_from_slice(&pairs);
        state.head += 1;
    }
    true
}

fn encode_pair(g1: &Graph, u: usize, g2: &Graph, v: usize, d: usize) -> Result<(Encoded, Encoded)> {
    let limit = ExactConfig::default().max_tree_nodes;
    let t1 = build_unravelling_bounded(g1, u, d, limit)?;
    let t2 = build_unravelling_bounded(g2, v, d, limit)?;
    let mut book = CodeBook::default();
    let c1 = book.encode(&t1);
    let c2 = book.encode(&t2);
    Ok((
        Encoded { tree: t1, code: c1 },
        Encoded { tree: t2, code: c2 },
    ))
}

/// `true` iff some isomorphism between the unravellings of `u` (in `g1`) and
/// `v` (in `g2`) maps equal ids to equal ids, bijectively.
pub fn identified_equivalent(g1: &Graph, u: usize, g2: &Graph, v: usize, d: usize) -> Result<bool> {
    let (a, b) = encode_pair(g1, u, g2, v, d)?;
    Ok(id_consistent_isomorphism(&a, &b, g1.n(), g2.n()))
}

/// Exact depth-`d` roles of every node of `g`.
pub fn exact_roles(g: &Graph, d: usize, config: &ExactConfig) -> Result<Coloring> {
    if g.n() > config.max_nodes {
        return Err(Error::SizeGuard {
            what: "graph size for exact roles",
            actual: g.n(),
            limit: config.max_nodes,
        });
    }
    let mut book = CodeBook::default();
    let mut encoded = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let tree = build_unravelling_bounded(g, v, d, config.max_tree_nodes)?;
        let code = book.encode(&tree);
        encoded.push(Encoded { tree, code });
    }
    // leader[v] = smallest u <= v equivalent to v
    let leader: Vec<usize> = (0..g.n())
        .into_par_iter()
        .map(|v| {
            (0..v)
                .find(|&u| id_consistent_isomorphism(&encoded[u], &encoded[v], g.n(), g.n()))
                .unwrap_or(v)
        })
        .collect();
    // a first match that is not its own leader would break transitivity
    debug_assert!(leader.iter().all(|&l| leader[l] == l));
    Ok(Coloring::from_keys(leader))
}

/// Exact roles over the disjoint union of a collection.
pub fn exact_roles_collection(
    collection: &GraphCollection,
    d: usize,
    config: &ExactConfig,
) -> Result<Coloring> {
    if collection.total_nodes() > config.max_nodes {
        return Err(Error::SizeGuard {
            what: "collection size for exact roles",
            actual: collection.total_nodes(),
            limit: config.max_nodes,
        });
    }
    exact_roles(&collection.union(), d, config)
}

/// Partition of the nodes into automorphism orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition(pub Coloring);

impl OrbitPartition {
    pub fn coloring(&self) -> &Coloring {
        &self.0
    }

    pub fn same_orbit(&self, u: usize, v: usize) -> bool {
        self.0.color(u) == self.0.color(v)
    }
}

/// Orbits by backtracking search for automorphisms. Candidate images are
/// restricted to the same stable refinement colour, which every automorphism
/// preserves.
pub fn automorphism_orbits(g: &Graph, config: &ExactConfig) -> Result<OrbitPartition> {
    let n = g.n();
    if n > config.max_orbit_nodes {
        return Err(Error::SizeGuard {
            what: "graph size for orbit search",
            actual: n,
            limit: config.max_orbit_nodes,
        });
    }
    let (stable, _) = wl::stable_coloring(g);
    let mut orbit_of: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for v in 0..n {
        for u in v + 1..n {
            if stable.color(u) != stable.color(v)
                || find(&mut orbit_of, u) == find(&mut orbit_of, v)
            {
                continue;
            }
            if let Some(perm) = automorphism_mapping(g, &stable, v, u) {
                for (x, &px) in perm.iter().enumerate() {
                    let (a, b) = (find(&mut orbit_of, x), find(&mut orbit_of, px));
                    if a != b {
                        orbit_of[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut orbit_of, x)).collect();
    Ok(OrbitPartition(Coloring::from_keys(roots)))
}

/// Some automorphism of `g` sending `from` to `to`, if one exists.
fn automorphism_mapping(
    g: &Graph,
    stable: &Coloring,
    from: usize,
    to: usize,
) -> Option<Vec<usize>> {
    let n = g.n();
    // assign vertices in BFS order from `from` so adjacency constraints bite early
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in std::iter::once(from).chain(0..n) {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &y in g.neighbors(x) {
                if !std::mem::replace(&mut seen[y as usize], true) {
                    order.push(y as usize);
                }
            }
        }
    }

    let mut image = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    image[from] = to;
    taken[to] = true;

    fn assign(
        g: &Graph,
        stable: &Coloring,
        order: &[usize],
        pos: usize,
        image: &mut [usize],
        taken: &mut [bool],
    ) -> bool {
        let Some(&x) = order.get(pos) else {
            return true;
        };
        for y in 0..g.n() {
            if taken[y] || stable.color(y) != stable.color(x) {
                continue;
            }
            let consistent = order[..pos]
                .iter()
                .all(|&z| g.has_edge(x, z) == g.has_edge(y, image[z]));
            if !consistent {
                continue;
            }
            image[x] = y;
            taken[y] = true;
            if assign(g, stable, order, pos + 1, image, taken) {
                return true;
            }
            image[x] = usize::MAX;
            taken[y] = false;
        }
        false
    }

    assign(g, stable, &order, 1, &mut image, &mut taken).then_some(image)
}
