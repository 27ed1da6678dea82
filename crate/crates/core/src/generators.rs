//! Deterministic and random graph generators used for fixtures, property
//! suites and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg.into()))
    }
}

/// Cycle `0 - 1 - ... - (n-1) - 0`.
pub fn make_cycle(n: usize) -> Result<Graph> {
    require(n >= 3, "cycle needs at least 3 nodes")?;
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn make_complete(n: usize) -> Result<Graph> {
    require(n >= 3, "complete graph needs at least 3 nodes")?;
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges)
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn make_path(n: usize) -> Result<Graph> {
    require(n >= 1, "path needs at least 1 node")?;
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

/// Star with centre 0 and `leaves` leaves.
pub fn make_star(leaves: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

/// The two 2-regular graphs of the running example: a six-cycle and two
/// disjoint triangles. With the example's 1-based ids mapped to index `id - 1`,
/// the cycle runs 1-2-4-5-6-3-1 and the triangles are {1,4,5} and {2,3,6}.
pub fn make_figure1_pair() -> (Graph, Graph) {
    let one_based = |edges: &[(usize, usize)]| {
        let e: Vec<_> = edges.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
        Graph::from_edges(6, &e).expect("fixture is a simple graph")
    };
    let cycle = one_based(&[(1, 2), (2, 4), (4, 5), (5, 6), (6, 3), (3, 1)]);
    let triangles = one_based(&[(1, 4), (4, 5), (5, 1), (2, 3), (3, 6), (6, 2)]);
    (cycle, triangles)
}

/// Erdős–Rényi G(n, p).
pub fn random_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("generated graph is simple")
}

/// Uniform random recursive tree: node `i > 0` attaches to a uniform earlier
/// node, then labels are shuffled.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let perm = random_permutation(n, rng);
    let edges: Vec<_> = (1..n)
        .map(|i| (perm[rng.gen_range(0..i)], perm[i]))
        .collect();
    Graph::from_edges(n, &edges).expect("generated tree is simple")
}

/// Random graph whose degrees never exceed `max_degree`: `n * max_degree / 2`
/// uniformly drawn node pairs, dropping loops, repeats and pairs that would
/// exceed the bound.
pub fn random_bounded_degree<R: Rng + ?Sized>(n: usize, max_degree: usize, rng: &mut R) -> Graph {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    if n >= 2 {
        for _ in 0..n * max_degree / 2 {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u == v
                || adj[u].len() >= max_degree
                || adj[v].len() >= max_degree
                || adj[u].contains(&v)
            {
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let edges: Vec<_> = adj
        .iter()
        .enumerate()
        .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges).expect("generated graph is simple")
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixed_shapes() {
        let c6 = make_cycle(6).unwrap();
        assert_eq!((c6.n(), c6.num_edges()), (6, 6));
        assert!((0..6).all(|v| c6.degree(v) == 2));
        assert_eq!(make_complete(3).unwrap().num_edges(), 3);
        assert!(make_cycle(2).is_err());
        assert!(make_complete(2).is_err());
        let star = make_star(3).unwrap();
        assert_eq!(star.degree(0), 3);
    }

    #[test]
    fn figure1_pair_shapes() {
        let (cycle, triangles) = make_figure1_pair();
        for g in [&cycle, &triangles] {
            assert_eq!(g.n(), 6);
            assert!((0..6).all(|v| g.degree(v) == 2));
        }
        assert_eq!(cycle.k_hop_neighborhood(0, 6).unwrap().len(), 6);
        let comp0 = triangles.k_hop_neighborhood(0, 6).unwrap();
        let comp1 = triangles.k_hop_neighborhood(1, 6).unwrap();
        assert_eq!(comp0, vec![0, 3, 4]);
        assert_eq!(comp1, vec![1, 2, 5]);
        // 1-2 and 1-3 are the cycle neighbours of node 1
        assert_eq!(cycle.neighbors(0), &[1, 2]);
    }

    #[test]
    fn random_generators_respect_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = random_tree(20, &mut rng);
        assert_eq!(t.num_edges(), 19);
        assert_eq!(t.k_hop_neighborhood(0, 20).unwrap().len(), 20);
        let b = random_bounded_degree(500, 4, &mut rng);
        assert!(b.max_degree() <= 4);
        assert!(b.num_edges() > 500);
    }
}
