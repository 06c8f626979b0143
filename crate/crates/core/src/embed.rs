//! Subhypergraph copy search, edge-disjoint packing, and the
//! independent-neighborhoods test.
//!
//! A copy is identified by its edge subset of the host (unlabeled); distinct
//! embeddings producing the same edge subset count once.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::{combinations, Edge, Hypergraph, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbedError {
    #[error("pattern support {support} exceeds the cap {cap}")]
    SizeCap { support: usize, cap: usize },
    #[error("uniformity mismatch: host r = {host}, pattern r = {pattern}")]
    UniformityMismatch { host: usize, pattern: usize },
}

const PATTERN_CAP: usize = 12;

/// One copy of a pattern inside a host: the host edge indices (sorted) and
/// the spanned vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CopyWitness {
    pub edge_indices: Vec<usize>,
    pub vertices: VertexSet,
}

impl CopyWitness {
    pub fn edges<'g>(&self, host: &'g Hypergraph) -> Vec<&'g Edge> {
        self.edge_indices.iter().map(|&i| host.edge(i)).collect()
    }

    pub fn shares_edge_with(&self, used: &[bool]) -> bool {
        self.edge_indices.iter().any(|&i| used[i])
    }
}

/// Pairwise edge-disjoint collection of copies of one pattern.
#[derive(Debug, Clone)]
pub struct Packing {
    pub copies: Vec<CopyWitness>,
    /// certified: every copy of the pattern in the host meets the packing
    pub maximal: bool,
}

impl Packing {
    pub fn edge_indices(&self) -> BTreeSet<usize> {
        self.copies
            .iter()
            .flat_map(|c| c.edge_indices.iter().copied())
            .collect()
    }
}

/// Connectivity-first ordering of the pattern's support: each next vertex
/// shares an edge with already-placed vertices when possible.
fn pattern_order(edges: &[Vec<usize>], support: &[usize], anchor: Option<usize>) -> Vec<usize> {
    let mut deg = std::collections::HashMap::new();
    for e in edges {
        for &v in e {
            *deg.entry(v).or_insert(0usize) += 1;
        }
    }
    let mut order: Vec<usize> = Vec::with_capacity(support.len());
    let mut placed: BTreeSet<usize> = BTreeSet::new();
    let first = anchor.unwrap_or_else(|| {
        *support
            .iter()
            .max_by_key(|&&v| (deg.get(&v).copied().unwrap_or(0), std::cmp::Reverse(v)))
            .unwrap()
    });
    order.push(first);
    placed.insert(first);
    while order.len() < support.len() {
        // prefer a vertex in an edge with placed vertices, most placed co-members
        let next = support
            .iter()
            .filter(|v| !placed.contains(v))
            .max_by_key(|&&v| {
                let attach = edges
                    .iter()
                    .filter(|e| e.contains(&v))
                    .map(|e| e.iter().filter(|u| placed.contains(u)).count())
                    .max()
                    .unwrap_or(0);
                (attach, deg.get(&v).copied().unwrap_or(0), std::cmp::Reverse(v))
            })
            .copied()
            .unwrap();
        order.push(next);
        placed.insert(next);
    }
    order
}

struct EmbedSearch<'a> {
    host: &'a Hypergraph,
    host_degs: Vec<usize>,
    pattern_edges: Vec<Vec<usize>>,
    pattern_degs: std::collections::HashMap<usize, usize>,
    order: Vec<usize>,
    /// pattern edges fully placed once position i is assigned
    ready_at: Vec<Vec<usize>>,
    found: BTreeSet<Vec<usize>>,
    limit: Option<usize>,
}

impl<'a> EmbedSearch<'a> {
    fn run(&mut self, anchor_host: Option<usize>) {
        let mut image = std::collections::HashMap::new();
        let mut used = vec![false; self.host.n()];
        let candidates: Vec<usize> = match anchor_host {
            Some(v) => vec![v],
            None => (0..self.host.n()).collect(),
        };
        for w in candidates {
            self.extend(0, w, &mut image, &mut used);
            if self.done() {
                return;
            }
        }
    }

    fn done(&self) -> bool {
        matches!(self.limit, Some(l) if self.found.len() >= l)
    }

    fn extend(
        &mut self,
        pos: usize,
        w: usize,
        image: &mut std::collections::HashMap<usize, usize>,
        used: &mut Vec<bool>,
    ) {
        if used[w] || self.host_degs[w] < self.pattern_degs[&self.order[pos]] {
            return;
        }
        image.insert(self.order[pos], w);
        used[w] = true;
        let ok = self.ready_at[pos].iter().all(|&ei| {
            let mut img: Edge = self.pattern_edges[ei]
                .iter()
                .map(|v| image[v])
                .collect();
            img.sort_unstable();
            self.host.has_edge(&img)
        });
        if ok {
            if pos + 1 == self.order.len() {
                let mut indices: Vec<usize> = self
                    .pattern_edges
                    .iter()
                    .map(|e| {
                        let mut img: Edge = e.iter().map(|v| image[v]).collect();
                        img.sort_unstable();
                        self.host.edges().binary_search(&img).unwrap()
                    })
                    .collect();
                indices.sort_unstable();
                indices.dedup();
                // injective vertex map keeps distinct edges distinct
                debug_assert_eq!(indices.len(), self.pattern_edges.len());
                self.found.insert(indices);
            } else {
                for cand in 0..self.host.n() {
                    self.extend(pos + 1, cand, image, used);
                    if self.done() {
                        break;
                    }
                }
            }
        }
        used[w] = false;
        image.remove(&self.order[pos]);
    }
}

fn enumerate_inner(
    host: &Hypergraph,
    pattern: &Hypergraph,
    limit: Option<usize>,
    anchor: Option<(usize, usize)>,
) -> Result<Vec<CopyWitness>, EmbedError> {
    if host.r() != pattern.r() {
        return Err(EmbedError::UniformityMismatch {
            host: host.r(),
            pattern: pattern.r(),
        });
    }
    let support = pattern.support();
    if support.len() > PATTERN_CAP {
        return Err(EmbedError::SizeCap {
            support: support.len(),
            cap: PATTERN_CAP,
        });
    }
    if pattern.edge_count() == 0 {
        return Ok(Vec::new());
    }
    if support.len() > host.n() || pattern.edge_count() > host.edge_count() {
        return Ok(Vec::new());
    }
    let pattern_edges: Vec<Vec<usize>> = pattern.edges().to_vec();
    let mut pattern_degs = std::collections::HashMap::new();
    for e in &pattern_edges {
        for &v in e {
            *pattern_degs.entry(v).or_insert(0usize) += 1;
        }
    }
    let order = pattern_order(
        &pattern_edges,
        support.as_slice(),
        anchor.map(|(pv, _)| pv),
    );
    let pos_of: std::collections::HashMap<usize, usize> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let mut ready_at = vec![Vec::new(); order.len()];
    for (ei, e) in pattern_edges.iter().enumerate() {
        let last = e.iter().map(|v| pos_of[v]).max().unwrap();
        ready_at[last].push(ei);
    }
    let mut search = EmbedSearch {
        host,
        host_degs: host.degrees(),
        pattern_edges,
        pattern_degs,
        order,
        ready_at,
        found: BTreeSet::new(),
        limit,
    };
    search.run(anchor.map(|(_, hv)| hv));
    Ok(search
        .found
        .into_iter()
        .map(|edge_indices| {
            let vertices: VertexSet = edge_indices
                .iter()
                .flat_map(|&i| host.edge(i).iter().copied())
                .collect();
            CopyWitness {
                edge_indices,
                vertices,
            }
        })
        .collect())
}

/// All copies of `pattern` in `host` (distinct edge subsets), in canonical
/// order. With `limit`, stops after that many.
pub fn enumerate_copies(
    host: &Hypergraph,
    pattern: &Hypergraph,
    limit: Option<usize>,
) -> Result<Vec<CopyWitness>, EmbedError> {
    enumerate_inner(host, pattern, limit, None)
}

/// First copy found, if any.
pub fn contains_copy(
    host: &Hypergraph,
    pattern: &Hypergraph,
) -> Result<Option<CopyWitness>, EmbedError> {
    Ok(enumerate_inner(host, pattern, Some(1), None)?.into_iter().next())
}

/// First copy with pattern vertex `pv` mapped to host vertex `hv`, if any.
pub fn contains_copy_anchored(
    host: &Hypergraph,
    pattern: &Hypergraph,
    pv: usize,
    hv: usize,
) -> Result<Option<CopyWitness>, EmbedError> {
    Ok(enumerate_inner(host, pattern, Some(1), Some((pv, hv)))?
        .into_iter()
        .next())
}

/// Greedy maximal edge-disjoint packing of copies of `pattern` in `host`.
/// Copies are taken in canonical order shuffled by `seed`; the result is
/// certified maximal against the full copy list.
pub fn max_edge_disjoint_packing(
    host: &Hypergraph,
    pattern: &Hypergraph,
    seed: u64,
) -> Result<Packing, EmbedError> {
    let all = enumerate_copies(host, pattern, None)?;
    let mut order: Vec<usize> = (0..all.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut used = vec![false; host.edge_count()];
    let mut copies = Vec::new();
    for i in order {
        let c = &all[i];
        if !c.shares_edge_with(&used) {
            for &ei in &c.edge_indices {
                used[ei] = true;
            }
            copies.push(c.clone());
        }
    }
    copies.sort();
    let maximal = all.iter().all(|c| c.shares_edge_with(&used));
    Ok(Packing { copies, maximal })
}

/// Outcome of the independent-neighborhoods test; a failing witness is an
/// (r−1)-set `core` together with an edge lying inside its neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndNbdReport {
    pub holds: bool,
    pub witness: Option<(VertexSet, Edge)>,
}

/// True iff no edge lies entirely inside the neighborhood of any (r−1)-set.
/// Agrees exactly with a generic fan-pattern embedding search.
pub fn independent_neighborhoods_check(g: &Hypergraph) -> IndNbdReport {
    let r = g.r();
    if r < 2 {
        return IndNbdReport {
            holds: true,
            witness: None,
        };
    }
    // only (r−1)-sets inside an edge have nonempty neighborhoods
    let mut cores: BTreeSet<Vec<usize>> = BTreeSet::new();
    for e in g.edges() {
        for idx in combinations(r, r - 1) {
            cores.insert(idx.iter().map(|&i| e[i]).collect());
        }
    }
    for core in cores {
        let s = VertexSet::from_sorted(core);
        let nb = g.neighborhood(&s).expect("core has size r-1");
        if nb.len() < r {
            continue;
        }
        for e in g.edges() {
            if e.iter().all(|&v| nb.contains(v)) {
                return IndNbdReport {
                    holds: false,
                    witness: Some((s, e.clone())),
                };
            }
        }
    }
    IndNbdReport {
        holds: true,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_clique, gen_fr, sample_random_hypergraph};
    use crate::invariants::are_isomorphic;

    fn k4_graph() -> Hypergraph {
        gen_clique(2, 4).unwrap()
    }

    fn k3_graph() -> Hypergraph {
        gen_clique(2, 3).unwrap()
    }

    #[test]
    fn triangles_in_k4() {
        let copies = enumerate_copies(&k4_graph(), &k3_graph(), None).unwrap();
        assert_eq!(copies.len(), 4);
        for c in &copies {
            let (sub, _) = k4_graph().induced(&c.vertices).unwrap();
            assert!(are_isomorphic(&sub, &k3_graph()).unwrap());
        }
    }

    #[test]
    fn no_triangle_in_c5() {
        let c5 = Hypergraph::new(
            2,
            5,
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![0, 4]],
        )
        .unwrap();
        assert!(contains_copy(&c5, &k3_graph()).unwrap().is_none());
    }

    #[test]
    fn overlap_pairs_in_k43() {
        // every pair of distinct triples of a 4-set shares exactly 2 vertices
        let host = gen_clique(3, 4).unwrap();
        let pat = crate::constructions::gen_pair_overlap(3, 2).unwrap();
        let copies = enumerate_copies(&host, &pat, None).unwrap();
        assert_eq!(copies.len(), 6);
    }

    #[test]
    fn f3_contains_itself() {
        let f3 = gen_fr(3).unwrap();
        let w = contains_copy(&f3, &f3).unwrap().unwrap();
        assert_eq!(w.edge_indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn k43_has_no_f3() {
        // the fan spans 2r-1 = 5 vertices
        let host = gen_clique(3, 4).unwrap();
        assert!(contains_copy(&host, &gen_fr(3).unwrap()).unwrap().is_none());
    }

    #[test]
    fn k53_f3_witness() {
        let host = gen_clique(3, 5).unwrap();
        let w = contains_copy(&host, &gen_fr(3).unwrap()).unwrap().unwrap();
        // re-verify against the fan definition: the copy is isomorphic to it
        let (sub, _) = host.induced(&w.vertices).unwrap();
        let edges: Vec<Vec<usize>> = w
            .edge_indices
            .iter()
            .map(|&i| host.edge(i).clone())
            .collect();
        assert_eq!(edges.len(), 4);
        assert_eq!(sub.n(), 5);
        let report = independent_neighborhoods_check(&host);
        assert!(!report.holds);
    }

    #[test]
    fn packing_k3_in_k4() {
        let packing = max_edge_disjoint_packing(&k4_graph(), &k3_graph(), 1).unwrap();
        assert_eq!(packing.copies.len(), 1);
        assert!(packing.maximal);
        // removing the triangle's edges leaves a triangle-free star
        let used = packing.edge_indices();
        let remaining: Vec<Edge> = k4_graph()
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| !used.contains(i))
            .map(|(_, e)| e.clone())
            .collect();
        assert_eq!(remaining.len(), 3);
        let rest = Hypergraph::new(2, 4, remaining).unwrap();
        assert!(contains_copy(&rest, &k3_graph()).unwrap().is_none());
    }

    #[test]
    fn packing_two_disjoint_copies() {
        let pat = crate::constructions::gen_pair_overlap(3, 2).unwrap();
        // two vertex-disjoint copies of the pattern
        let host = Hypergraph::new(
            3,
            8,
            vec![
                vec![0, 1, 2],
                vec![0, 1, 3],
                vec![4, 5, 6],
                vec![4, 5, 7],
            ],
        )
        .unwrap();
        let packing = max_edge_disjoint_packing(&host, &pat, 42).unwrap();
        assert_eq!(packing.copies.len(), 2);
        assert!(packing.maximal);
    }

    #[test]
    fn packing_maximality_random_corpus() {
        let pat = crate::constructions::gen_pair_overlap(3, 2).unwrap();
        for seed in 0..50u64 {
            let g = sample_random_hypergraph(12, 3, 0.2, 1000 + seed).unwrap();
            let packing = max_edge_disjoint_packing(&g, &pat, seed).unwrap();
            assert!(packing.maximal, "seed {seed}");
            // post-removal freeness: the survivor has no copy of the pattern
            let used = packing.edge_indices();
            let remaining: Vec<Edge> = g
                .edges()
                .iter()
                .enumerate()
                .filter(|(i, _)| !used.contains(i))
                .map(|(_, e)| e.clone())
                .collect();
            let rest = Hypergraph::new(3, 12, remaining).unwrap();
            assert!(contains_copy(&rest, &pat).unwrap().is_none(), "seed {seed}");
        }
    }

    #[test]
    fn indnbd_star_holds() {
        let star =
            Hypergraph::new(3, 7, vec![vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6]]).unwrap();
        assert!(independent_neighborhoods_check(&star).holds);
    }

    #[test]
    fn indnbd_f3_fails_with_witness() {
        let f3 = gen_fr(3).unwrap();
        let report = independent_neighborhoods_check(&f3);
        assert!(!report.holds);
        let (core, e0) = report.witness.unwrap();
        assert_eq!(core, VertexSet::new(vec![0, 1]));
        assert_eq!(e0, vec![2, 3, 4]);
    }

    #[test]
    fn indnbd_agrees_with_embedding_search() {
        let f3 = gen_fr(3).unwrap();
        for seed in 0..100u64 {
            let g = sample_random_hypergraph(12, 3, 0.1, 2000 + seed).unwrap();
            let via_nbd = independent_neighborhoods_check(&g).holds;
            let via_embed = contains_copy(&g, &f3).unwrap().is_none();
            assert_eq!(via_nbd, via_embed, "seed {seed}");
        }
    }

    #[test]
    fn uniformity_mismatch_rejected() {
        assert!(matches!(
            enumerate_copies(&k4_graph(), &gen_fr(3).unwrap(), None),
            Err(EmbedError::UniformityMismatch { .. })
        ));
    }
}
