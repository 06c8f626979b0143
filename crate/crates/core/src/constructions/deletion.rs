//! The deletion pipeline: sample a random host, remove a maximal edge-disjoint
//! packing of each forbidden member, certify the survivor.
//!
//! All packings are computed against the original sample: a member copy
//! surviving removal would be edge-disjoint from that member's packing,
//! contradicting its maximality, so freeness is deterministic.

use super::{sample_random_hypergraph, ConstructionError, ConstructionPlan};
use crate::embed::{contains_copy, max_edge_disjoint_packing};
use crate::hypergraph::{Edge, Hypergraph, VertexSet};
use crate::seeding::subseed;
use crate::solvers::{independence_number, SolverBudget};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    None,
    Freeness,
    Full,
}

#[derive(Debug, Clone)]
pub struct PackingSummary {
    pub copies: usize,
    pub edges_removed: usize,
    pub maximal: bool,
}

#[derive(Debug, Clone)]
pub struct AlphaEstimate {
    pub value: usize,
    /// exact branch-and-bound result vs. sampled t-set statistic
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct DeletionVerification {
    /// per family member, in input order
    pub freeness: Option<Vec<bool>>,
    pub alpha: Option<AlphaEstimate>,
    pub edge_count: usize,
    pub sample_edge_count: usize,
    pub edge_bound: f64,
}

#[derive(Debug, Clone)]
pub struct DeletionResult {
    pub final_graph: Hypergraph,
    pub removed_edges: usize,
    pub packings: Vec<PackingSummary>,
    pub verification: DeletionVerification,
}

const ALPHA_EXACT_CAP: usize = 40;
const ALPHA_SAMPLES: usize = 200;

pub fn deletion_construct(
    family: &[Hypergraph],
    plan: &ConstructionPlan,
    seed: u64,
    verify: VerifyLevel,
) -> Result<DeletionResult, ConstructionError> {
    let n = plan.n;
    let r = plan.r;
    let sample = sample_random_hypergraph(n, r, plan.p, subseed(seed, 0xB0))?;
    let mut removed: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
    let mut packings = Vec::with_capacity(family.len());
    for (i, member) in family.iter().enumerate() {
        let packing = max_edge_disjoint_packing(&sample, member, subseed(seed, 0xC0 + i as u64))?;
        let edges = packing.edge_indices();
        packings.push(PackingSummary {
            copies: packing.copies.len(),
            edges_removed: edges.len(),
            maximal: packing.maximal,
        });
        removed.extend(edges);
    }
    let kept: Vec<Edge> = sample
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(_, e)| e.clone())
        .collect();
    let final_graph = Hypergraph::new(r, n, kept)?;
    assert!(final_graph.handshake_holds());
    let freeness = if verify != VerifyLevel::None {
        let flags: Vec<bool> = family
            .iter()
            .map(|member| contains_copy(&final_graph, member).map(|c| c.is_none()))
            .collect::<Result<_, _>>()?;
        Some(flags)
    } else {
        None
    };
    let alpha = if verify == VerifyLevel::Full {
        Some(estimate_alpha(&final_graph, plan.t.ceil() as usize, seed))
    } else {
        None
    };
    let verification = DeletionVerification {
        freeness,
        alpha,
        edge_count: final_graph.edge_count(),
        sample_edge_count: sample.edge_count(),
        edge_bound: plan.sample_edge_bound,
    };
    Ok(DeletionResult {
        final_graph,
        removed_edges: removed.len(),
        packings,
        verification,
    })
}

fn estimate_alpha(g: &Hypergraph, t_ceil: usize, seed: u64) -> AlphaEstimate {
    if g.n() <= ALPHA_EXACT_CAP {
        if let Ok(out) = independence_number(g, &SolverBudget::default()) {
            if out.certified_maximum {
                return AlphaEstimate {
                    value: out.vertices.len(),
                    exact: true,
                };
            }
        }
    }
    // sampled fallback: largest independent subset found inside random
    // t-sized windows, greedily repaired
    let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, 0xD0));
    let t = t_ceil.min(g.n()).max(1);
    let mut best = 0usize;
    for _ in 0..ALPHA_SAMPLES {
        let mut verts: Vec<usize> = (0..g.n()).collect();
        verts.shuffle(&mut rng);
        let mut keep: Vec<bool> = vec![false; g.n()];
        for &v in verts.iter().take(t) {
            keep[v] = true;
        }
        for e in g.edges() {
            if e.iter().all(|&v| keep[v]) {
                keep[*e.last().unwrap()] = false;
            }
        }
        let s: VertexSet = (0..g.n()).filter(|&v| keep[v]).collect();
        debug_assert!(g.is_independent(&s));
        best = best.max(s.len());
    }
    AlphaEstimate {
        value: best,
        exact: false,
    }
}
