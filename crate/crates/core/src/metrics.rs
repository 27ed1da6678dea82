//! Role statistics: majority-label accuracy, overlap score and depth sweeps.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{self, ExactConfig};
use crate::graph::{Coloring, GraphCollection};
use crate::{snp, wl};

/// Role computation method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Wl,
    Snp,
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Wl => "wl",
            Method::Snp => "snp",
            Method::Exact => "exact",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wl" => Ok(Method::Wl),
            "snp" => Ok(Method::Snp),
            "exact" => Ok(Method::Exact),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

fn check_labels(roles: &Coloring, labels: &[i64]) -> Result<()> {
    if roles.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: roles.len(),
            got: labels.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::InvalidArgument("no nodes to score".into()));
    }
    Ok(())
}

/// Per-class label counts, as `(label, count)` sorted by label.
fn label_counts(roles: &Coloring, labels: &[i64]) -> Vec<Vec<(i64, usize)>> {
    let mut counts: Vec<HashMap<i64, usize>> = vec![HashMap::new(); roles.num_classes()];
    for (&c, &l) in roles.colors().iter().zip(labels) {
        *counts[c as usize].entry(l).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|m| {
            let mut v: Vec<_> = m.into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// Most frequent label of each role class; ties go to the smaller label.
pub fn majority_labels(roles: &Coloring, labels: &[i64]) -> Result<Vec<i64>> {
    check_labels(roles, labels)?;
    Ok(label_counts(roles, labels)
        .into_iter()
        .map(|class| {
            class
                .iter()
                .fold(
                    (i64::MAX, 0usize),
                    |best, &(l, c)| if c > best.1 { (l, c) } else { best },
                )
                .0
        })
        .collect())
}

/// Fraction of nodes whose label equals the majority label of their class.
pub fn majority_accuracy(roles: &Coloring, labels: &[i64]) -> Result<f64> {
    check_labels(roles, labels)?;
    let hits: usize = label_counts(roles, labels)
        .iter()
        .map(|class| class.iter().map(|&(_, c)| c).max().unwrap_or(0))
        .sum();
    Ok(hits as f64 / labels.len() as f64)
}

/// Accuracy of always predicting the most frequent label.
pub fn baseline_accuracy(labels: &[i64]) -> Result<f64> {
    majority_accuracy(&Coloring::constant(labels.len()), labels)
}

/// `(a - b) / (1 - b)` with `a` the majority accuracy of `roles`. `None` when
/// `b = 1`, where the score is undefined.
pub fn overlap_score(roles: &Coloring, labels: &[i64], baseline: f64) -> Result<Option<f64>> {
    if !(0.0..=1.0).contains(&baseline) {
        return Err(Error::InvalidArgument(format!(
            "baseline {baseline} outside [0, 1]"
        )));
    }
    let a = majority_accuracy(roles, labels)?;
    if baseline == 1.0 {
        return Ok(None);
    }
    Ok(Some((a - baseline) / (1.0 - baseline)))
}

/// One depth of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct DepthSweepRow {
    pub depth: usize,
    pub method: Method,
    pub num_roles: usize,
    pub roles_per_node: f64,
    /// `None` if the dataset has no node labels or only one label value.
    pub overlap: Option<f64>,
}

/// Roles of every node of the collection at each depth `0..=d_max`, over
/// global node indices.
pub fn role_sweep(
    collection: &GraphCollection,
    method: Method,
    d_max: usize,
    config: &ExactConfig,
) -> Result<Vec<Coloring>> {
    match method {
        Method::Wl => Ok(wl::wl_roles_collection(collection, d_max).colorings),
        Method::Snp => snp::snp_role_sweep(collection, d_max),
        Method::Exact => (0..=d_max)
            .map(|d| exact::exact_roles_collection(collection, d, config))
            .collect(),
    }
}

/// Role counts and overlap with the node labels for every depth `0..=d_max`.
/// The baseline is the global majority-label frequency, i.e. the accuracy of
/// the single depth-0 role.
pub fn depth_sweep(
    collection: &GraphCollection,
    method: Method,
    d_max: usize,
    config: &ExactConfig,
) -> Result<Vec<DepthSweepRow>> {
    let n = collection.total_nodes();
    if n == 0 {
        return Err(Error::InvalidArgument("empty collection".into()));
    }
    let labels = collection.node_labels();
    let baseline = labels.as_deref().map(baseline_accuracy).transpose()?;
    role_sweep(collection, method, d_max, config)?
        .into_iter()
        .enumerate()
        .map(|(depth, roles)| {
            let overlap = match (&labels, baseline) {
                (Some(labels), Some(b)) => overlap_score(&roles, labels, b)?,
                _ => None,
            };
            // every sweep partition refines the depth-0 one, so a >= b
            debug_assert!(overlap.is_none_or(|o| o > -1e-12));
            Ok(DepthSweepRow {
                depth,
                method,
                num_roles: roles.num_classes(),
                roles_per_node: roles.num_classes() as f64 / n as f64,
                overlap,
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "dataset,method,depth,num_roles,roles_per_node,overlap";

pub fn write_sweep_csv<W: Write>(mut out: W, dataset: &str, rows: &[DepthSweepRow]) -> Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        let overlap = r
            .overlap
            .map_or_else(|| "NA".to_string(), |o| format!("{o:.6}"));
        writeln!(
            out,
            "{dataset},{},{},{},{:.6},{overlap}",
            r.method, r.depth, r.num_roles, r.roles_per_node
        )?;
    }
    Ok(())
}

/// Parses the output of [`write_sweep_csv`] back into `(dataset, row)` pairs.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<(String, DepthSweepRow)>> {
    let path = std::path::Path::new("<sweep csv>");
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == SWEEP_CSV_HEADER => {}
        _ => return Err(Error::parse(path, 1, "missing sweep header")),
    }
    lines
        .map(|(i, line)| {
            let bad = |msg: &str| Error::parse(path, i + 1, msg.to_string());
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 6 {
                return Err(bad("expected 6 fields"));
            }
            let overlap = match cells[5] {
                "NA" => None,
                x => Some(x.parse().map_err(|_| bad("bad overlap"))?),
            };
            Ok((
                cells[0].to_string(),
                DepthSweepRow {
                    method: cells[1].parse()?,
                    depth: cells[2].parse().map_err(|_| bad("bad depth"))?,
                    num_roles: cells[3].parse().map_err(|_| bad("bad role count"))?,
                    roles_per_node: cells[4].parse().map_err(|_| bad("bad fraction"))?,
                    overlap,
                },
            ))
        })
        .collect()
}
