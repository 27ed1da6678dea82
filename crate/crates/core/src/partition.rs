//! Comparisons between colourings viewed as partitions of the node set.

use crate::error::{Error, Result};
use crate::graph::Coloring;

fn same_len(c: &Coloring, other: &Coloring) -> Result<()> {
    if c.len() == other.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: c.len(),
            got: other.len(),
        })
    }
}

/// `true` iff `fine` refines `coarse`: every class of `fine` lies inside a
/// single class of `coarse`.
pub fn refines(fine: &Coloring, coarse: &Coloring) -> Result<bool> {
    same_len(fine, coarse)?;
    let mut image = vec![u32::MAX; fine.num_classes()];
    for (&f, &c) in fine.colors().iter().zip(coarse.colors()) {
        let slot = &mut image[f as usize];
        if *slot == u32::MAX {
            *slot = c;
        } else if *slot != c {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mutual refinement.
pub fn equivalent(c: &Coloring, other: &Coloring) -> Result<bool> {
    Ok(refines(c, other)? && refines(other, c)?)
}

/// Class sizes, largest first.
pub fn class_sizes(c: &Coloring) -> Vec<usize> {
    let mut sizes = vec![0usize; c.num_classes()];
    for &col in c.colors() {
        sizes[col as usize] += 1;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

pub fn num_classes(c: &Coloring) -> usize {
    c.num_classes()
}

/// Coarsest common refinement of two colourings.
pub fn meet(c: &Coloring, other: &Coloring) -> Result<Coloring> {
    same_len(c, other)?;
    Ok(Coloring::from_keys(
        c.colors().iter().zip(other.colors()).map(|(&a, &b)| (a, b)),
    ))
}
