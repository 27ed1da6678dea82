//! TUDataset text format.
//!
//! A dataset `<prefix>` in a directory consists of
//!
//! * `<prefix>_A.txt`: one `u, v` row per edge direction, 1-based global node ids
//! * `<prefix>_graph_indicator.txt`: the 1-based graph id of every node
//! * optional `<prefix>_node_labels.txt`, `<prefix>_graph_labels.txt` and
//!   `<prefix>_node_attributes.txt`
//!
//! Edge labels, if present, are ignored.

use std::collections::HashSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, GraphCollection};

fn file(dir: &Path, prefix: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{prefix}_{suffix}.txt"))
}

fn read_required(path: &Path) -> Result<String> {
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    Ok(fs::read_to_string(path)?)
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    if path.is_file() {
        Ok(Some(fs::read_to_string(path)?))
    } else {
        Ok(None)
    }
}

/// Non-empty lines with their 1-based line numbers; blank lines are only
/// tolerated at the end of the file.
fn data_lines<'a>(path: &'a Path, text: &'a str) -> Result<Vec<(usize, &'a str)>> {
    let lines: Vec<&str> = text.lines().collect();
    let last = lines
        .iter()
        .rposition(|l| !l.trim().is_empty())
        .map_or(0, |i| i + 1);
    lines[..last]
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let l = l.trim();
            if l.is_empty() {
                Err(Error::parse(path, i + 1, "blank line"))
            } else {
                Ok((i + 1, l))
            }
        })
        .collect()
}

fn parse_int<T: std::str::FromStr>(path: &Path, line: usize, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(path, line, format!("expected an integer, found {s:?}")))
}

fn parse_per_line<T: std::str::FromStr>(
    path: &Path,
    text: &str,
    expected: usize,
) -> Result<Vec<T>> {
    let lines = data_lines(path, text)?;
    if lines.len() != expected {
        return Err(Error::parse(
            path,
            lines.len(),
            format!("expected {expected} lines, found {}", lines.len()),
        ));
    }
    lines
        .into_iter()
        .map(|(no, l)| parse_int(path, no, l))
        .collect()
}

/// Loads `<prefix>` from `dir`.
pub fn load_tudataset(dir: impl AsRef<Path>, prefix: &str) -> Result<GraphCollection> {
    let dir = dir.as_ref();

    let ind_path = file(dir, prefix, "graph_indicator");
    let ind_text = read_required(&ind_path)?;
    let mut graph_of = Vec::new();
    for (no, l) in data_lines(&ind_path, &ind_text)? {
        let gid: usize = parse_int(&ind_path, no, l)?;
        let expected_next = graph_of.last().map_or(1, |&g: &usize| g + 2);
        let current = graph_of.last().map_or(0, |&g| g + 1);
        if gid != current && gid != expected_next {
            return Err(Error::parse(
                &ind_path,
                no,
                format!(
                    "graph ids must be contiguous from 1 and grouped; found {gid} after {current}"
                ),
            ));
        }
        graph_of.push(gid - 1);
    }
    let n = graph_of.len();
    let num_graphs = graph_of.last().map_or(0, |&g| g + 1);
    let mut start = vec![0usize; num_graphs + 1];
    for &g in &graph_of {
        start[g + 1] += 1;
    }
    for i in 0..num_graphs {
        start[i + 1] += start[i];
    }

    let a_path = file(dir, prefix, "A");
    let a_text = read_required(&a_path)?;
    let mut rows = HashSet::new();
    for (no, l) in data_lines(&a_path, &a_text)? {
        let (u, v) = l
            .split_once(',')
            .ok_or_else(|| Error::parse(&a_path, no, "expected `u, v`"))?;
        let (u, v): (usize, usize) = (parse_int(&a_path, no, u)?, parse_int(&a_path, no, v)?);
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(Error::parse(
                    &a_path,
                    no,
                    format!("node id {x} outside 1..={n}"),
                ));
            }
        }
        if u == v {
            return Err(Error::parse(&a_path, no, format!("self-loop on node {u}")));
        }
        if graph_of[u - 1] != graph_of[v - 1] {
            return Err(Error::parse(
                &a_path,
                no,
                format!(
                    "edge ({u}, {v}) joins graphs {} and {}",
                    graph_of[u - 1] + 1,
                    graph_of[v - 1] + 1
                ),
            ));
        }
        if !rows.insert((u - 1, v - 1)) {
            return Err(Error::parse(
                &a_path,
                no,
                format!("duplicate row ({u}, {v})"),
            ));
        }
    }
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_graphs];
    let mut undirected: Vec<_> = rows.iter().filter(|(u, v)| u < v).copied().collect();
    undirected.sort_unstable();
    for &(u, v) in &rows {
        if !rows.contains(&(v, u)) {
            return Err(Error::AsymmetricEdge(u + 1, v + 1));
        }
    }
    for (u, v) in undirected {
        let g = graph_of[u];
        edges[g].push((u - start[g], v - start[g]));
    }

    let node_labels = read_optional(&file(dir, prefix, "node_labels"))?
        .map(|t| parse_per_line::<i64>(&file(dir, prefix, "node_labels"), &t, n))
        .transpose()?;
    let graph_labels = read_optional(&file(dir, prefix, "graph_labels"))?
        .map(|t| parse_per_line::<i64>(&file(dir, prefix, "graph_labels"), &t, num_graphs))
        .transpose()?;
    let attr_path = file(dir, prefix, "node_attributes");
    let node_attributes = read_optional(&attr_path)?
        .map(|t| -> Result<Vec<Vec<f64>>> {
            let lines = data_lines(&attr_path, &t)?;
            if lines.len() != n {
                return Err(Error::parse(
                    &attr_path,
                    lines.len(),
                    format!("expected {n} lines, found {}", lines.len()),
                ));
            }
            lines
                .into_iter()
                .map(|(no, l)| {
                    l.split(',')
                        .map(|x| {
                            x.trim().parse::<f64>().map_err(|_| {
                                Error::parse(
                                    &attr_path,
                                    no,
                                    format!("expected a number, found {x:?}"),
                                )
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .transpose()?;

    let mut graphs = Vec::with_capacity(num_graphs);
    for (g, es) in edges.iter().enumerate() {
        let range = start[g]..start[g + 1];
        let mut graph = Graph::from_edges(range.len(), es)?;
        if let Some(labels) = &node_labels {
            graph = graph.with_node_labels(labels[range.clone()].to_vec())?;
        }
        if let Some(attrs) = &node_attributes {
            graph = graph.with_node_attributes(attrs[range].to_vec())?;
        }
        graphs.push(graph);
    }
    GraphCollection::new(graphs, graph_labels)
}

/// Writes `collection` as `<prefix>` into `dir` (created if needed). Edge rows
/// are emitted in both directions, ordered by source then target.
pub fn write_tudataset(
    collection: &GraphCollection,
    dir: impl AsRef<Path>,
    prefix: &str,
) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let create = |suffix: &str| -> Result<BufWriter<fs::File>> {
        Ok(BufWriter::new(fs::File::create(file(dir, prefix, suffix))?))
    };

    let mut a = create("A")?;
    let mut ind = create("graph_indicator")?;
    for (gid, g) in collection.graphs().iter().enumerate() {
        let base = collection.node_range(gid).start;
        for v in 0..g.n() {
            writeln!(ind, "{}", gid + 1)?;
            for &u in g.neighbors(v) {
                writeln!(a, "{}, {}", base + v + 1, base + u as usize + 1)?;
            }
        }
    }
    a.flush()?;
    ind.flush()?;

    if let Some(labels) = collection.node_labels() {
        let mut out = create("node_labels")?;
        for l in labels {
            writeln!(out, "{l}")?;
        }
        out.flush()?;
    }
    if let Some(labels) = collection.graph_labels() {
        let mut out = create("graph_labels")?;
        for l in labels {
            writeln!(out, "{l}")?;
        }
        out.flush()?;
    }
    let attrs: Option<Vec<&[Vec<f64>]>> = collection
        .graphs()
        .iter()
        .map(|g| g.node_attributes())
        .collect();
    if let Some(attrs) = attrs {
        let mut out = create("node_attributes")?;
        for row in attrs.into_iter().flatten() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
            writeln!(out, "{}", cells.join(", "))?;
        }
        out.flush()?;
    }
    Ok(())
}

pub const ROLES_CSV_HEADER: &str = "graph_id,node_id,role_id";

/// Per-node role assignment as `graph_id,node_id,role_id`; graph and node ids
/// are 1-based (node ids within their graph), role ids are the dense colour ids.
pub fn write_roles_csv<W: Write>(
    mut out: W,
    collection: &GraphCollection,
    roles: &Coloring,
) -> Result<()> {
    if roles.len() != collection.total_nodes() {
        return Err(Error::LengthMismatch {
            expected: collection.total_nodes(),
            got: roles.len(),
        });
    }
    writeln!(out, "{ROLES_CSV_HEADER}")?;
    for gid in 0..collection.len() {
        for (local, global) in collection.node_range(gid).enumerate() {
            writeln!(out, "{},{},{}", gid + 1, local + 1, roles.color(global))?;
        }
    }
    Ok(())
}

/// Reads a roles CSV back into `(graph_id, node_id, role_id)` triples.
pub fn parse_roles_csv(text: &str) -> Result<Vec<(usize, usize, u32)>> {
    let path = Path::new("<roles csv>");
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == ROLES_CSV_HEADER => {}
        _ => return Err(Error::parse(path, 1, "missing roles header")),
    }
    lines
        .map(|(i, line)| {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 3 {
                return Err(Error::parse(path, i + 1, "expected 3 fields"));
            }
            Ok((
                parse_int(path, i + 1, cells[0])?,
                parse_int(path, i + 1, cells[1])?,
                parse_int(path, i + 1, cells[2])?,
            ))
        })
        .collect()
}
