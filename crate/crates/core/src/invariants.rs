//! Exact density and automorphism invariants, plus isomorphism utilities.
//!
//! Density ρ is computed over all nontrivial edge subsets with exact rational
//! arithmetic; ties (which define the multiplicity `s` of a family) make
//! floating point comparisons unusable here.

use num::rational::Ratio;
use thiserror::Error;

use crate::hypergraph::{Edge, Hypergraph};

pub type Rat = Ratio<i64>;

/// Default cap on pattern support size for the exhaustive relabeling search.
pub const DEFAULT_PATTERN_CAP: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("density is only defined for nontrivial hypergraphs (>= 2 edges)")]
    NontrivialRequired,
    #[error("edge count {edges} exceeds the subset-sweep cap {cap}")]
    TooManyEdges { edges: usize, cap: usize },
    #[error("pattern support {support} exceeds the relabeling cap {cap}")]
    SizeCap { support: usize, cap: usize },
    #[error("family is empty")]
    EmptyFamily,
    #[error("family mixes uniformities ({a} and {b})")]
    MixedUniformities { a: usize, b: usize },
    #[error("hypergraph has no edges")]
    NoEdges,
}

/// Result of the exact density sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    /// max over nontrivial edge subsets of (e'−1)/(v'−r)
    pub rho: Rat,
    /// edge indices (into the host's canonical edge list) attaining the max;
    /// smallest subset first, then lexicographic
    pub witness: Vec<usize>,
    /// whole hypergraph attains rho
    pub balanced: bool,
}

/// Per-member data inside a sorted family profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberProfile {
    pub vertices: usize,
    pub edges: usize,
    pub rho: Rat,
    pub alpha: usize,
    pub balanced: bool,
}

/// Family invariants: members sorted by ρ ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyProfile {
    pub r: usize,
    /// order[i] = index of the i-th sorted member in the input list
    pub order: Vec<usize>,
    pub members: Vec<MemberProfile>,
    /// ρ of the family = ρ of the first sorted member
    pub rho: Rat,
    /// number of members attaining ρ
    pub s: usize,
    /// ρ > 1/(r−1)
    pub rho_above_threshold: bool,
    pub all_balanced: bool,
}

/// Edge-stabilizer counts of the automorphism group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutReport {
    /// per edge (canonical order): automorphisms fixing the edge setwise
    pub alpha_per_edge: Vec<usize>,
    pub alpha_min: usize,
    pub aut_order: usize,
}

const SUBSET_SWEEP_CAP: usize = 24;

/// Exact ρ(H) = max over nontrivial edge subsets H' of (e'−1)/(v'−r), where
/// v' counts the vertices spanned by the subset.
pub fn compute_rho(h: &Hypergraph) -> Result<DensityReport, InvariantError> {
    let m = h.edge_count();
    if m < 2 {
        return Err(InvariantError::NontrivialRequired);
    }
    if m > SUBSET_SWEEP_CAP {
        return Err(InvariantError::TooManyEdges {
            edges: m,
            cap: SUBSET_SWEEP_CAP,
        });
    }
    let masks: Vec<u128> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u128, |acc, &v| acc | (1u128 << v)))
        .collect();
    let r = h.r() as i64;
    let mut best: Option<(Rat, usize, Vec<usize>)> = None;
    for subset in 1u32..(1u32 << m) {
        let e_count = subset.count_ones() as usize;
        if e_count < 2 {
            continue;
        }
        let mut span = 0u128;
        for (i, mask) in masks.iter().enumerate() {
            if subset & (1 << i) != 0 {
                span |= mask;
            }
        }
        let v_count = span.count_ones() as i64;
        // two distinct r-sets span > r vertices, so the denominator is positive
        let value = Rat::new(e_count as i64 - 1, v_count - r);
        let better = match &best {
            None => true,
            Some((bv, be, bw)) => {
                value > *bv
                    || (value == *bv
                        && (e_count < *be
                            || (e_count == *be && {
                                let w: Vec<usize> =
                                    (0..m).filter(|i| subset & (1 << i) != 0).collect();
                                w < *bw
                            })))
            }
        };
        if better {
            let w: Vec<usize> = (0..m).filter(|i| subset & (1 << i) != 0).collect();
            best = Some((value, e_count, w));
        }
    }
    let (rho, _, witness) = best.unwrap();
    let spanned = h.support().len() as i64;
    let whole = Rat::new(m as i64 - 1, spanned - r);
    Ok(DensityReport {
        rho,
        witness,
        balanced: whole == rho,
    })
}

/// All automorphisms of `h` restricted to its support (isolated vertices are
/// interchangeable and carry no structure). Returned as maps old -> new over
/// support positions.
fn support_automorphisms(h: &Hypergraph) -> Result<Vec<Vec<usize>>, InvariantError> {
    let support = h.support();
    let k = support.len();
    if k > 12 {
        return Err(InvariantError::SizeCap {
            support: k,
            cap: 12,
        });
    }
    let idx_of: std::collections::HashMap<usize, usize> = support
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    // edges in support coordinates
    let edges: Vec<Vec<usize>> = h
        .edges()
        .iter()
        .map(|e| {
            let mut e2: Vec<usize> = e.iter().map(|v| idx_of[v]).collect();
            e2.sort_unstable();
            e2
        })
        .collect();
    let mut edge_set: Vec<Vec<usize>> = edges.clone();
    edge_set.sort_unstable();
    let mut deg = vec![0usize; k];
    for e in &edges {
        for &v in e {
            deg[v] += 1;
        }
    }
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; k];
    let mut used = vec![false; k];
    fn rec(
        d: usize,
        k: usize,
        deg: &[usize],
        edges: &[Vec<usize>],
        edge_set: &[Vec<usize>],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if d == k {
            out.push(perm.clone());
            return;
        }
        'cand: for w in 0..k {
            if used[w] || deg[w] != deg[d] {
                continue;
            }
            perm[d] = w;
            used[w] = true;
            // every edge fully mapped so far must land on an edge
            for e in edges {
                if e.iter().all(|&v| v <= d) {
                    let mut img: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                    img.sort_unstable();
                    if edge_set.binary_search(&img).is_err() {
                        used[w] = false;
                        perm[d] = usize::MAX;
                        continue 'cand;
                    }
                }
            }
            rec(d + 1, k, deg, edges, edge_set, perm, used, out);
            used[w] = false;
            perm[d] = usize::MAX;
        }
    }
    rec(
        0, k, &deg, &edges, &edge_set, &mut perm, &mut used, &mut out,
    );
    Ok(out)
}

/// For each edge, the number of automorphisms fixing it setwise.
pub fn edge_automorphisms(h: &Hypergraph) -> Result<AutReport, InvariantError> {
    if h.edge_count() == 0 {
        return Err(InvariantError::NoEdges);
    }
    let support = h.support();
    let idx_of: std::collections::HashMap<usize, usize> = support
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let auts = support_automorphisms(h)?;
    let mut alpha_per_edge = Vec::with_capacity(h.edge_count());
    for e in h.edges() {
        let local: Vec<usize> = e.iter().map(|v| idx_of[v]).collect();
        let mut sorted_local = local.clone();
        sorted_local.sort_unstable();
        let count = auts
            .iter()
            .filter(|perm| {
                let mut img: Vec<usize> = local.iter().map(|&v| perm[v]).collect();
                img.sort_unstable();
                img == sorted_local
            })
            .count();
        alpha_per_edge.push(count);
    }
    let alpha_min = *alpha_per_edge.iter().min().unwrap();
    Ok(AutReport {
        alpha_per_edge,
        alpha_min,
        aut_order: auts.len(),
    })
}

/// Profiles a family: per-member invariants, ρ-ascending order, and the
/// multiplicity `s` of the minimum.
pub fn family_profile(family: &[Hypergraph]) -> Result<FamilyProfile, InvariantError> {
    if family.is_empty() {
        return Err(InvariantError::EmptyFamily);
    }
    let r = family[0].r();
    for h in family {
        if h.r() != r {
            return Err(InvariantError::MixedUniformities { a: r, b: h.r() });
        }
    }
    let mut profiled: Vec<(usize, MemberProfile)> = Vec::with_capacity(family.len());
    for (i, h) in family.iter().enumerate() {
        let density = compute_rho(h)?;
        let aut = edge_automorphisms(h)?;
        profiled.push((
            i,
            MemberProfile {
                vertices: h.n(),
                edges: h.edge_count(),
                rho: density.rho,
                alpha: aut.alpha_min,
                balanced: density.balanced,
            },
        ));
    }
    profiled.sort_by(|a, b| a.1.rho.cmp(&b.1.rho).then(a.0.cmp(&b.0)));
    let rho = profiled[0].1.rho;
    let s = profiled.iter().filter(|(_, m)| m.rho == rho).count();
    let all_balanced = profiled.iter().all(|(_, m)| m.balanced);
    let threshold = Rat::new(1, r as i64 - 1);
    let (order, members): (Vec<usize>, Vec<MemberProfile>) = profiled.into_iter().unzip();
    Ok(FamilyProfile {
        r,
        order,
        members,
        rho,
        s,
        rho_above_threshold: rho > threshold,
        all_balanced,
    })
}

/// Lexicographically minimal edge-list encoding over all relabelings of the
/// support. Two hypergraphs are isomorphic iff their codes agree (isolated
/// vertices only contribute through `n`).
pub fn canonical_code(h: &Hypergraph) -> Result<Vec<u8>, InvariantError> {
    canonical_code_capped(h, DEFAULT_PATTERN_CAP)
}

pub fn canonical_code_capped(h: &Hypergraph, cap: usize) -> Result<Vec<u8>, InvariantError> {
    let support = h.support();
    let k = support.len();
    if k > cap {
        return Err(InvariantError::SizeCap { support: k, cap });
    }
    let idx_of: std::collections::HashMap<usize, usize> = support
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let edges: Vec<Vec<usize>> = h
        .edges()
        .iter()
        .map(|e| e.iter().map(|v| idx_of[v]).collect())
        .collect();
    let mut best: Option<Vec<Vec<usize>>> = None;
    let mut perm: Vec<usize> = (0..k).collect();
    // Heap's algorithm over support relabelings
    fn heap(
        n: usize,
        perm: &mut Vec<usize>,
        edges: &[Vec<usize>],
        best: &mut Option<Vec<Vec<usize>>>,
    ) {
        if n <= 1 {
            let mut relabeled: Vec<Vec<usize>> = edges
                .iter()
                .map(|e| {
                    let mut e2: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                    e2.sort_unstable();
                    e2
                })
                .collect();
            relabeled.sort_unstable();
            match best {
                None => *best = Some(relabeled),
                Some(b) => {
                    if relabeled < *b {
                        *best = Some(relabeled);
                    }
                }
            }
            return;
        }
        for i in 0..n {
            heap(n - 1, perm, edges, best);
            if n % 2 == 0 {
                perm.swap(i, n - 1);
            } else {
                perm.swap(0, n - 1);
            }
        }
    }
    heap(k, &mut perm, &edges, &mut best);
    let min_edges = best.unwrap_or_default();
    let mut code = Vec::new();
    code.extend_from_slice(&(h.r() as u32).to_be_bytes());
    code.extend_from_slice(&(h.n() as u32).to_be_bytes());
    code.extend_from_slice(&(min_edges.len() as u32).to_be_bytes());
    for e in &min_edges {
        for &v in e {
            code.extend_from_slice(&(v as u32).to_be_bytes());
        }
    }
    Ok(code)
}

/// Isomorphism via cheap invariants first, canonical codes second.
pub fn are_isomorphic(a: &Hypergraph, b: &Hypergraph) -> Result<bool, InvariantError> {
    if a.r() != b.r() || a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(false);
    }
    Ok(canonical_code(a)? == canonical_code(b)?)
}

/// Relabels `h` by the permutation old -> new (over all of `0..n`).
pub fn relabel(h: &Hypergraph, perm: &[usize]) -> Hypergraph {
    let edges: Vec<Edge> = h
        .edges()
        .iter()
        .map(|e| e.iter().map(|&v| perm[v]).collect())
        .collect();
    Hypergraph::new(h.r(), h.n(), edges).expect("relabeling preserves validity")
}
