//! Layered random construction with no (r+1)-clique.
//!
//! Each layer i randomly partitions the later vertices into r−1 near-equal
//! parts and adds every edge {i, v_1, ..., v_{r-1}} with one vertex per part.
//! Two later vertices in the same part never share an edge with i, so an
//! (r+1)-clique is impossible by pigeonhole.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ConstructionError;
use crate::hypergraph::{Edge, Hypergraph};
use crate::seeding::subseed;

#[derive(Debug, Clone)]
pub struct LayeredOutcome {
    pub graph: Hypergraph,
    /// partitions[i] = the r−1 parts of {i+1, .., n-1} used by layer i
    pub partitions: Vec<Vec<Vec<usize>>>,
    /// strict bound n^r / (r−1)^{r−1}
    pub edge_bound: f64,
}

pub fn clique_free_construct(
    n: usize,
    r: usize,
    seed: u64,
) -> Result<LayeredOutcome, ConstructionError> {
    if r < 3 || n < r {
        return Err(ConstructionError::ParamRange(format!(
            "layered construction needs r >= 3 and n >= r, got r = {r}, n = {n}"
        )));
    }
    let parts_per_layer = r - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, 0x1A));
    let mut edges: Vec<Edge> = Vec::new();
    let mut partitions = Vec::with_capacity(n);
    for i in 0..n {
        let mut rest: Vec<usize> = (i + 1..n).collect();
        rest.shuffle(&mut rng);
        let m = rest.len();
        let q = m / parts_per_layer;
        let rem = m % parts_per_layer;
        let mut parts: Vec<Vec<usize>> = Vec::with_capacity(parts_per_layer);
        let mut cursor = 0usize;
        for j in 0..parts_per_layer {
            let size = if j < rem { q + 1 } else { q };
            let mut part: Vec<usize> = rest[cursor..cursor + size].to_vec();
            part.sort_unstable();
            cursor += size;
            parts.push(part);
        }
        if parts.iter().all(|p| !p.is_empty()) {
            let mut pick = vec![0usize; parts_per_layer];
            loop {
                let mut e: Edge = Vec::with_capacity(r);
                e.push(i);
                for (j, &idx) in pick.iter().enumerate() {
                    e.push(parts[j][idx]);
                }
                edges.push(e);
                // odometer over part choices
                let mut j = parts_per_layer;
                loop {
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                    pick[j] += 1;
                    if pick[j] < parts[j].len() {
                        break;
                    }
                    pick[j] = 0;
                    if j == 0 {
                        break;
                    }
                }
                if pick.iter().all(|&x| x == 0) {
                    break;
                }
            }
        }
        partitions.push(parts);
    }
    let graph = Hypergraph::new(r, n, edges)?;
    assert!(graph.handshake_holds());
    let edge_bound = (n as f64).powi(r as i32) / ((r - 1) as f64).powi(r as i32 - 1);
    assert!((graph.edge_count() as f64) < edge_bound);
    Ok(LayeredOutcome {
        graph,
        partitions,
        edge_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::gen_clique;
    use crate::embed::contains_copy;

    #[test]
    fn no_clique_small() {
        let k4 = gen_clique(3, 4).unwrap();
        for seed in 0..10u64 {
            for n in [10usize, 20] {
                let out = clique_free_construct(n, 3, seed).unwrap();
                assert!(contains_copy(&out.graph, &k4).unwrap().is_none(), "n {n} seed {seed}");
            }
        }
    }

    #[test]
    fn edge_bound_r3() {
        for seed in 0..20u64 {
            let out = clique_free_construct(25, 3, seed).unwrap();
            assert!((out.graph.edge_count() as f64) < 25f64.powi(3) / 4.0);
        }
    }

    #[test]
    fn minimal_instance_single_edge() {
        let out = clique_free_construct(3, 3, 99).unwrap();
        assert_eq!(out.graph.edge_count(), 1);
        assert_eq!(out.graph.edges(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn partitions_cover_exactly() {
        let out = clique_free_construct(17, 4, 5).unwrap();
        for (i, parts) in out.partitions.iter().enumerate() {
            let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
            all.sort_unstable();
            let expect: Vec<usize> = (i + 1..17).collect();
            assert_eq!(all, expect);
            let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
            let max = *sizes.iter().max().unwrap();
            let min = *sizes.iter().min().unwrap();
            assert!(max - min <= 1);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = clique_free_construct(15, 3, 3).unwrap();
        let b = clique_free_construct(15, 3, 3).unwrap();
        assert_eq!(a.graph, b.graph);
    }
}
