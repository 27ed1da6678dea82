//! Sorted neighbourhood propagation (SNP) embeddings.
//!
//! The embedding of `v` at depth `d` collects, for every node `u`, the column
//! `(A^0[v][u], ..., A^d[v][u])` of walk counts, drops all-zero columns and
//! sorts the rest lexicographically. Counts are exact `u128`s; any overflow is
//! reported instead of wrapping.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, GraphCollection};

pub type Count = u128;

/// SNP embedding of a single node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SnpEmbedding {
    depth: usize,
    columns: Vec<Vec<Count>>,
}

impl SnpEmbedding {
    fn from_columns(depth: usize, mut columns: Vec<Vec<Count>>) -> Self {
        columns.retain(|c| c.iter().any(|&x| x != 0));
        columns.sort_unstable();
        SnpEmbedding { depth, columns }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Sorted non-zero columns, each of length `depth + 1`.
    pub fn columns(&self) -> &[Vec<Count>] {
        &self.columns
    }

    /// Embedding at a smaller depth: every column cut to its first
    /// `depth + 1` entries, then zero-stripped and re-sorted.
    pub fn truncate(&self, depth: usize) -> SnpEmbedding {
        assert!(depth <= self.depth, "cannot extend an embedding");
        SnpEmbedding::from_columns(
            depth,
            self.columns.iter().map(|c| c[..=depth].to_vec()).collect(),
        )
    }

    /// Compact canonical byte form (LEB128 entries, column-major). Two
    /// embeddings of equal depth are equal iff their keys are.
    pub fn key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.columns.len() * (self.depth + 1));
        for col in &self.columns {
            for &x in col {
                push_leb128(&mut out, x);
            }
        }
        out
    }

    /// `c0;c1;...` with the entries of each column joined by `,`.
    pub fn serialize(&self) -> String {
        self.columns
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn push_leb128(out: &mut Vec<u8>, mut x: Count) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

/// Walk counts from `v` restricted to the ball of radius `d`, which is the
/// only region where they can be non-zero.
struct BallProfile {
    nodes: Vec<usize>,
    /// `counts[i][k]` = number of walks of length `k` from `v` to `nodes[i]`.
    counts: Vec<Vec<Count>>,
}

fn ball_profile(g: &Graph, v: usize, d: usize) -> Result<BallProfile> {
    g.check_node(v)?;
    let dist = g.bfs_distances(v, d);
    let nodes: Vec<usize> = (0..g.n()).filter(|&u| dist[u].is_some()).collect();
    let mut local = HashMap::with_capacity(nodes.len());
    for (i, &u) in nodes.iter().enumerate() {
        local.insert(u, i);
    }
    let adj: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&u| {
            g.neighbors(u)
                .iter()
                .filter_map(|x| local.get(&(*x as usize)).copied())
                .collect()
        })
        .collect();

    let mut counts = vec![vec![0 as Count; d + 1]; nodes.len()];
    counts[local[&v]][0] = 1;
    for k in 0..d {
        for i in 0..nodes.len() {
            let mut total: Count = 0;
            for &j in &adj[i] {
                total = total.checked_add(counts[j][k]).ok_or(Error::Overflow {
                    node: v,
                    depth: k + 1,
                })?;
            }
            counts[i][k + 1] = total;
        }
    }
    Ok(BallProfile { nodes, counts })
}

/// Rows `A^0[v], ..., A^d[v]` of adjacency powers, each of length `n`,
/// obtained by repeated propagation rather than matrix powers.
pub fn walk_count_rows(g: &Graph, v: usize, d: usize) -> Result<Vec<Vec<Count>>> {
    let profile = ball_profile(g, v, d)?;
    let mut rows = vec![vec![0 as Count; g.n()]; d + 1];
    for (i, &u) in profile.nodes.iter().enumerate() {
        for (row, &count) in rows.iter_mut().zip(&profile.counts[i]) {
            row[u] = count;
        }
    }
    Ok(rows)
}

pub fn snp_embedding(g: &Graph, v: usize, d: usize) -> Result<SnpEmbedding> {
    let profile = ball_profile(g, v, d)?;
    Ok(SnpEmbedding::from_columns(d, profile.counts))
}

/// SNP roles of every node in the collection at depth `d`, over global node
/// indices. Nodes share a role iff their embeddings are equal.
pub fn snp_roles(collection: &GraphCollection, d: usize) -> Result<Coloring> {
    Ok(snp_roles_at(collection, d, &[d])?.pop().unwrap())
}

/// SNP roles for every depth `0..=d_max`; walk counts are computed once at
/// `d_max` and truncated.
pub fn snp_role_sweep(collection: &GraphCollection, d_max: usize) -> Result<Vec<Coloring>> {
    let depths: Vec<usize> = (0..=d_max).collect();
    snp_roles_at(collection, d_max, &depths)
}

/// Graphs are embedded in parallel a chunk at a time; keys are then interned
/// sequentially in global node order so ids stay canonical.
fn snp_roles_at(
    collection: &GraphCollection,
    d_max: usize,
    depths: &[usize],
) -> Result<Vec<Coloring>> {
    const CHUNK: usize = 64;
    let mut dicts: Vec<HashMap<Vec<u8>, u32>> = vec![HashMap::new(); depths.len()];
    let mut colors: Vec<Vec<u32>> =
        vec![Vec::with_capacity(collection.total_nodes()); depths.len()];
    for chunk in collection.graphs().chunks(CHUNK) {
        let keys: Vec<Vec<Vec<Vec<u8>>>> = chunk
            .par_iter()
            .map(|g| {
                (0..g.n())
                    .map(|v| {
                        let full = snp_embedding(g, v, d_max)?;
                        Ok(depths
                            .iter()
                            .map(|&d| full.truncate(d).key())
                            .collect::<Vec<_>>())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for per_node in keys.into_iter().flatten() {
            for (i, key) in per_node.into_iter().enumerate() {
                let next = dicts[i].len() as u32;
                colors[i].push(*dicts[i].entry(key).or_insert(next));
            }
        }
    }
    Ok(colors
        .into_iter()
        .zip(dicts)
        .map(|(c, dict)| Coloring::from_canonical(c, dict.len()))
        .collect())
}

/// One line per node: `graph_id,node_id,` followed by the serialised
/// embedding. Both ids are 1-based; `node_id` counts within its graph.
pub fn write_embedding_dump<W: Write>(
    collection: &GraphCollection,
    d: usize,
    mut out: W,
) -> Result<()> {
    for (gid, g) in collection.graphs().iter().enumerate() {
        let embeddings: Vec<SnpEmbedding> = (0..g.n())
            .into_par_iter()
            .map(|v| snp_embedding(g, v, d))
            .collect::<Result<_>>()?;
        for (v, e) in embeddings.iter().enumerate() {
            writeln!(out, "{},{},{}", gid + 1, v + 1, e.serialize())?;
        }
    }
    Ok(())
}
