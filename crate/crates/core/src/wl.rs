//! Colour refinement (1-WL) and depth-`d` WL roles.
//!
//! Each step replaces the colour of `v` by an id for the signature
//! `(c(v), sorted multiset of c(x) for x in N(v))`. Ids come from a dictionary
//! keyed by the full signature, assigned in first-occurrence order over
//! ascending node index, so the map is injective and the output canonical.

use std::collections::hash_map::DefaultHasher;
use std::hash::{BuildHasher, Hash, Hasher};

use hashbrown::hash_table::{Entry, HashTable};
use rustc_hash::FxBuildHasher;

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, GraphCollection};
use crate::partition;

/// How signatures are turned into colour ids.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignatureMode {
    /// Dictionary relabelling; injective.
    #[default]
    Exact,
    /// Hashes signatures into `buckets` ids. Not injective; exists only so that
    /// verification suites can be shown to catch a broken refinement.
    Colliding { buckets: u64 },
}

/// Colourings `c^0, ..., c^d` produced by refinement from the constant
/// colouring.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinementTrace {
    pub colorings: Vec<Coloring>,
    /// First `t` with `c^{t+1} ≡ c^t`, if reached within the trace.
    pub stabilized_at: Option<usize>,
}

impl RefinementTrace {
    pub fn depth(&self) -> usize {
        self.colorings.len() - 1
    }

    /// Colouring after `t` steps.
    pub fn at(&self, t: usize) -> &Coloring {
        &self.colorings[t]
    }
}

/// One refinement step.
pub fn refine_step(g: &Graph, c: &Coloring) -> Result<Coloring> {
    refine_step_with(g, c, SignatureMode::Exact)
}

pub fn refine_step_with(g: &Graph, c: &Coloring, mode: SignatureMode) -> Result<Coloring> {
    let n = g.n();
    if c.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: c.len(),
        });
    }

    // Signature of v lives in sigs[offsets[v] + v..offsets[v + 1] + v + 1]:
    // own colour, then the sorted neighbour colours.
    let offsets = g.offsets();
    let range = |v: usize| offsets[v] + v..offsets[v + 1] + v + 1;
    let mut sigs = vec![0u32; offsets[n] + n];
    for v in 0..n {
        let sig = &mut sigs[range(v)];
        sig[0] = c.color(v);
        for (slot, &y) in sig[1..].iter_mut().zip(g.neighbors(v)) {
            *slot = c.color(y as usize);
        }
        sig[1..].sort_unstable();
    }

    let signature = |v: usize| &sigs[range(v)];
    Ok(match mode {
        SignatureMode::Exact => {
            // (representative node, id) per distinct signature
            let hasher = FxBuildHasher;
            let hash = |v: usize| hasher.hash_one(signature(v));
            let mut reps: HashTable<(u32, u32)> = HashTable::with_capacity(n);
            let mut next = 0u32;
            let colors: Vec<u32> = (0..n)
                .map(|v| {
                    let entry = reps.entry(
                        hash(v),
                        |&(r, _)| signature(r as usize) == signature(v),
                        |&(r, _)| hash(r as usize),
                    );
                    match entry {
                        Entry::Occupied(e) => e.get().1,
                        Entry::Vacant(e) => {
                            e.insert((v as u32, next));
                            next += 1;
                            next - 1
                        }
                    }
                })
                .collect();
            Coloring::from_canonical(colors, next as usize)
        }
        SignatureMode::Colliding { buckets } => Coloring::from_keys((0..n).map(|v| {
            let mut h = DefaultHasher::new();
            signature(v).hash(&mut h);
            h.finish() % buckets.max(1)
        })),
    })
}

/// `d` refinement steps from the constant colouring of `g`.
pub fn wl_roles(g: &Graph, d: usize) -> RefinementTrace {
    wl_roles_with(g, d, SignatureMode::Exact)
}

pub fn wl_roles_with(g: &Graph, d: usize, mode: SignatureMode) -> RefinementTrace {
    let mut colorings = Vec::with_capacity(d + 1);
    colorings.push(Coloring::constant(g.n()));
    let mut stabilized_at = None;
    for t in 0..d {
        let prev = &colorings[t];
        let next = if stabilized_at.is_some() {
            prev.clone()
        } else {
            let next = refine_step_with(g, prev, mode).expect("colouring covers the graph");
            if partition::equivalent(&next, prev).expect("same node count") {
                stabilized_at = Some(t);
            }
            next
        };
        colorings.push(next);
    }
    RefinementTrace {
        colorings,
        stabilized_at,
    }
}

/// WL roles over a whole collection, computed on the disjoint union so that
/// colour ids are comparable across graphs. Node `i` of each colouring is
/// global node `i` of the collection.
pub fn wl_roles_collection(collection: &GraphCollection, d: usize) -> RefinementTrace {
    wl_roles(&collection.union(), d)
}

/// Refines until the partition stops changing. Returns the stable colouring
/// and the number of steps `t` taken, where `c^t ≡ c^{t-1}`.
pub fn stable_coloring(g: &Graph) -> (Coloring, usize) {
    let mut current = Coloring::constant(g.n());
    let mut t = 0;
    loop {
        let next = refine_step(g, &current).expect("colouring covers the graph");
        t += 1;
        // refinement can only split classes, so equal counts mean equal partitions
        if next.num_classes() == current.num_classes() {
            return (next, t);
        }
        current = next;
    }
}
