//! Exact ground-truth solvers (independence number, weak chromatic number)
//! and the constructive coloring lemmas: degeneracy coloring, independent-set
//! peeling, the neighborhood/deletion independent-set routine, the resampling
//! coloring, and the two-stage coloring for independent-neighborhood hosts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::embed::independent_neighborhoods_check;
use crate::hypergraph::{combinations, Coloring, Hypergraph, VertexSet};
use crate::seeding::subseed;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("node budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("resample budget exhausted after {resamples} resamples")]
    ResampleCapExceeded {
        resamples: u64,
        best_effort: Coloring,
    },
    #[error("max degree {max_degree} exceeds the bound {bound}")]
    PreconditionFailed { max_degree: usize, bound: f64 },
    #[error("host fails the independent-neighborhoods check")]
    NotIndependentNeighborhoods,
    #[error("palette size must be even and positive, got {k}")]
    OddPalette { k: usize },
    #[error("host has {n} vertices, exact search capped at {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("extractor returned an invalid set on a {m}-vertex subinstance: {reason}")]
    ExtractorContractViolation { m: usize, reason: String },
    #[error("only 2-uniform hosts supported, got r = {r}")]
    NotGraph { r: usize },
    #[error(transparent)]
    Embed(#[from] crate::embed::EmbedError),
}

/// Caps for the exact searches; exceeding one yields a distinguished outcome,
/// never a wrong answer.
#[derive(Debug, Clone, Copy)]
pub struct SolverBudget {
    pub node_cap: u64,
    pub resample_cap: u64,
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            node_cap: 50_000_000,
            resample_cap: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSet {
    pub vertices: VertexSet,
    pub certified_maximum: bool,
}

const BITSET_CAP: usize = 64;

struct AlphaSearch<'a> {
    edges: &'a [u64],
    budget: u64,
    nodes: u64,
    best: u64,
    exhausted: bool,
}

impl AlphaSearch<'_> {
    /// best = bitmask of the best independent set found so far
    fn search(&mut self, in_mask: u64, free_mask: u64) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let all = in_mask | free_mask;
        // pick a contained edge with the fewest free vertices
        let mut pick: Option<u64> = None;
        let mut pick_free = usize::MAX;
        for &e in self.edges {
            if e & all == e {
                let nf = (e & free_mask).count_ones() as usize;
                if nf < pick_free {
                    pick_free = nf;
                    pick = Some(e);
                }
            }
        }
        let Some(edge) = pick else {
            if all.count_ones() > self.best.count_ones() {
                self.best = all;
            }
            return;
        };
        debug_assert!(pick_free > 0, "state already contains a full edge");
        // lower bound on forced exclusions: contained edges disjoint on free parts
        let mut claimed = 0u64;
        let mut forced = 0u32;
        for &e in self.edges {
            if e & all == e && e & free_mask & claimed == 0 {
                claimed |= e & free_mask;
                forced += 1;
            }
        }
        if all.count_ones() - forced <= self.best.count_ones() {
            return;
        }
        // at least one free vertex of `edge` must go; branch with earlier
        // candidates forced in to avoid revisiting
        let mut forced_in = 0u64;
        let mut rest = edge & free_mask;
        while rest != 0 {
            let v = rest & rest.wrapping_neg();
            rest ^= v;
            let new_in = in_mask | forced_in;
            // a forced-in set that swallows an edge is a dead branch
            if !self.edges.iter().any(|&e| e & new_in == e) {
                self.search(new_in, free_mask & !forced_in & !v);
            }
            forced_in |= v;
        }
    }
}

fn greedy_independent(g: &Hypergraph) -> u64 {
    let degs = g.degrees();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (degs[v], v));
    let mut mask = 0u64;
    for v in order {
        let cand = mask | (1 << v);
        let bad = g.edges().iter().any(|e| {
            e.iter().all(|&u| cand & (1 << u) != 0)
        });
        if !bad {
            mask = cand;
        }
    }
    mask
}

/// Exact maximum size of a vertex set containing no full edge, by branch and
/// bound over bitsets (n <= 64).
pub fn independence_number(
    g: &Hypergraph,
    budget: &SolverBudget,
) -> Result<IndependentSet, SolverError> {
    if g.n() > BITSET_CAP {
        return Err(SolverError::SizeCap {
            n: g.n(),
            cap: BITSET_CAP,
        });
    }
    let edges: Vec<u64> = g
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u64, |m, &v| m | (1 << v)))
        .collect();
    let full: u64 = if g.n() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n()) - 1
    };
    let mut search = AlphaSearch {
        edges: &edges,
        budget: budget.node_cap,
        nodes: 0,
        best: greedy_independent(g),
        exhausted: false,
    };
    search.search(0, full);
    let vertices: VertexSet = (0..g.n()).filter(|&v| search.best & (1 << v) != 0).collect();
    debug_assert!(g.is_independent(&vertices));
    Ok(IndependentSet {
        vertices,
        certified_maximum: !search.exhausted,
    })
}

pub struct ChiOutcome {
    pub chi: usize,
    pub coloring: Coloring,
    /// false when the node budget ran out before optimality was certified;
    /// `chi` is then only an upper bound
    pub certified: bool,
}

struct ChiSearch<'a> {
    g: &'a Hypergraph,
    /// edges whose highest-ordered vertex is v (positions in `order`)
    edges_by_last: Vec<Vec<usize>>,
    order: Vec<usize>,
    colors: Vec<usize>,
    budget: u64,
    nodes: u64,
    exhausted: bool,
}

impl ChiSearch<'_> {
    fn assign(&mut self, pos: usize, k: usize, max_used: usize) -> bool {
        if self.exhausted {
            return false;
        }
        if pos == self.order.len() {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return false;
        }
        let v = self.order[pos];
        let cap = k.min(max_used + 2); // symmetry: at most one fresh color
        for c in 0..cap {
            self.colors[v] = c;
            let ok = self.edges_by_last[pos].iter().all(|&ei| {
                let e = self.g.edge(ei);
                let c0 = self.colors[e[0]];
                !e.iter().all(|&u| self.colors[u] == c0)
            });
            if ok && self.assign(pos + 1, k, max_used.max(c)) {
                return true;
            }
        }
        self.colors[v] = usize::MAX;
        false
    }
}

/// Exact weak chromatic number by iterative deepening on the palette size.
pub fn weak_chromatic_number(
    g: &Hypergraph,
    budget: &SolverBudget,
) -> Result<ChiOutcome, SolverError> {
    if g.edge_count() == 0 {
        return Ok(ChiOutcome {
            chi: 1,
            coloring: Coloring::constant(g.n()),
            certified: true,
        });
    }
    let degs = g.degrees();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degs[v]), v));
    let pos_of: Vec<usize> = {
        let mut p = vec![0; g.n()];
        for (i, &v) in order.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    let mut edges_by_last = vec![Vec::new(); g.n()];
    for (ei, e) in g.edges().iter().enumerate() {
        let last = e.iter().map(|&v| pos_of[v]).max().unwrap();
        edges_by_last[last].push(ei);
    }
    let mut nodes_total = 0u64;
    for k in 2..=g.n() {
        let mut search = ChiSearch {
            g,
            edges_by_last: edges_by_last.clone(),
            order: order.clone(),
            colors: vec![usize::MAX; g.n()],
            budget: budget.node_cap.saturating_sub(nodes_total),
            nodes: 0,
            exhausted: false,
        };
        let found = search.assign(0, k, 0);
        nodes_total += search.nodes;
        if found {
            let coloring = Coloring {
                colors: search.colors,
                palette_size: k,
            };
            debug_assert!(coloring.is_proper(g));
            return Ok(ChiOutcome {
                chi: k,
                coloring,
                certified: true,
            });
        }
        if search.exhausted {
            return Err(SolverError::BudgetExceeded { nodes: nodes_total });
        }
    }
    // every edge has >= 2 vertices, so n colors always suffice; unreachable
    // unless n < 2 with edges, which Hypergraph::new forbids for r >= 2
    Err(SolverError::BudgetExceeded { nodes: nodes_total })
}

#[derive(Debug, Clone)]
pub struct DegeneracyOutcome {
    pub coloring: Coloring,
    pub degeneracy: usize,
    /// smallest-last elimination order (first removed first)
    pub elimination_order: Vec<usize>,
}

/// Smallest-last greedy coloring of a 2-uniform host; palette <= degeneracy+1.
pub fn degeneracy_coloring(g: &Hypergraph) -> Result<DegeneracyOutcome, SolverError> {
    if g.r() != 2 {
        return Err(SolverError::NotGraph { r: g.r() });
    }
    let n = g.n();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; n];
    let mut elimination_order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        degeneracy = degeneracy.max(deg[v]);
        removed[v] = true;
        elimination_order.push(v);
        for &u in &adj[v] {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    let mut colors = vec![usize::MAX; n];
    for &v in elimination_order.iter().rev() {
        let mut taken = vec![false; degeneracy + 2];
        for &u in &adj[v] {
            if colors[u] != usize::MAX && colors[u] < taken.len() {
                taken[colors[u]] = true;
            }
        }
        colors[v] = taken.iter().position(|&t| !t).unwrap();
    }
    let palette_size = colors.iter().copied().max().map_or(1, |c| c + 1);
    let coloring = Coloring {
        colors,
        palette_size,
    };
    debug_assert!(palette_size <= degeneracy + 1);
    debug_assert!(n == 0 || coloring.is_proper(g));
    Ok(DegeneracyOutcome {
        coloring,
        degeneracy,
        elimination_order,
    })
}

#[derive(Debug, Clone)]
pub struct TuranOutcome {
    pub set: IndependentSet,
    /// size fell short of n^{1/r} on an independent-neighborhoods host and no
    /// exact escalation was possible
    pub below_guarantee: bool,
    pub used_exact: bool,
}

const TURAN_EXACT_CAP: usize = 24;
const TURAN_TRIALS: usize = 30;

/// Independent set for independent-neighborhood hosts: best of (a) the largest
/// independent neighborhood of an (r−1)-set, (b) randomized sparsification with
/// one deletion per surviving edge. Escalates to exact search on small hosts
/// when the n^{1/r} target is missed.
pub fn turan_independent_set(g: &Hypergraph, seed: u64) -> TuranOutcome {
    let n = g.n();
    let r = g.r();
    let m = g.edge_count();
    if m == 0 {
        return TuranOutcome {
            set: IndependentSet {
                vertices: (0..n).collect(),
                certified_maximum: true,
            },
            below_guarantee: false,
            used_exact: false,
        };
    }
    // (a) neighborhoods of (r-1)-sets, verified independent
    let mut best: VertexSet = VertexSet::default();
    let mut cores: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    for e in g.edges() {
        for idx in combinations(r, r - 1) {
            cores.insert(idx.iter().map(|&i| e[i]).collect());
        }
    }
    for core in cores {
        let s = VertexSet::from_sorted(core);
        let nb = g.neighborhood(&s).expect("core has size r-1");
        if nb.len() > best.len() && g.is_independent(&nb) {
            best = nb;
        }
    }
    // (b) randomized deletion, q optimizing nq - m q^r
    let q = ((n as f64) / (r as f64 * m as f64))
        .powf(1.0 / (r as f64 - 1.0))
        .min(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, 0xA11CE));
    for _ in 0..TURAN_TRIALS {
        let mut sample: Vec<bool> = (0..n).map(|_| rng.gen_bool(q)).collect();
        for e in g.edges() {
            if e.iter().all(|&v| sample[v]) {
                sample[*e.last().unwrap()] = false;
            }
        }
        let cand: VertexSet = (0..n).filter(|&v| sample[v]).collect();
        debug_assert!(g.is_independent(&cand));
        if cand.len() > best.len() {
            best = cand;
        }
    }
    let target = (n as f64).powf(1.0 / r as f64);
    let indnbd = independent_neighborhoods_check(g).holds;
    let mut used_exact = false;
    let mut certified = false;
    if indnbd && (best.len() as f64) < target && n <= TURAN_EXACT_CAP {
        if let Ok(exact) = independence_number(g, &SolverBudget::default()) {
            if exact.certified_maximum {
                best = exact.vertices;
                used_exact = true;
                certified = true;
            }
        }
    }
    let below_guarantee = indnbd && (best.len() as f64) < target;
    TuranOutcome {
        set: IndependentSet {
            vertices: best,
            certified_maximum: certified,
        },
        below_guarantee,
        used_exact,
    }
}

#[derive(Debug, Clone)]
pub struct PeelOutcome {
    pub coloring: Coloring,
    /// the guaranteed bound ceil(2 n^{1-alpha})
    pub palette_bound: usize,
    pub rounds: usize,
}

/// Peels independent sets produced by `extractor`, one fresh color per round.
/// The extractor receives the current induced subhypergraph (densely labeled)
/// and must return an independent set of size >= m^alpha; this contract is
/// checked on every call.
pub fn recursive_coloring<F>(
    g: &Hypergraph,
    mut extractor: F,
    alpha: f64,
) -> Result<PeelOutcome, SolverError>
where
    F: FnMut(&Hypergraph, usize) -> VertexSet,
{
    assert!(alpha > 0.0 && alpha <= 0.5, "alpha must lie in (0, 1/2]");
    let n = g.n();
    let palette_bound = if n == 0 {
        1
    } else {
        (2.0 * (n as f64).powf(1.0 - alpha)).ceil() as usize
    };
    let mut colors = vec![usize::MAX; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut round = 0usize;
    while !remaining.is_empty() {
        let rset: VertexSet = remaining.iter().copied().collect();
        let (sub, old_of_new) = g.induced(&rset).expect("remaining ids in range");
        let m = sub.n();
        let picked = extractor(&sub, round);
        if picked.is_empty() || picked.iter().any(|v| v >= m) {
            return Err(SolverError::ExtractorContractViolation {
                m,
                reason: "empty or out-of-range set".into(),
            });
        }
        if !sub.is_independent(&picked) {
            return Err(SolverError::ExtractorContractViolation {
                m,
                reason: "returned set contains a full edge".into(),
            });
        }
        let need = (m as f64).powf(alpha);
        if (picked.len() as f64) + 1e-9 < need {
            return Err(SolverError::ExtractorContractViolation {
                m,
                reason: format!("size {} below m^alpha = {:.4}", picked.len(), need),
            });
        }
        for v in picked.iter() {
            colors[old_of_new[v]] = round;
        }
        remaining.retain(|&v| colors[v] == usize::MAX);
        round += 1;
    }
    let palette_size = round.max(1);
    let coloring = Coloring {
        colors: if n == 0 { Vec::new() } else { colors },
        palette_size,
    };
    debug_assert!(coloring.is_proper(g));
    Ok(PeelOutcome {
        coloring,
        palette_bound,
        rounds: round,
    })
}

#[derive(Debug, Clone)]
pub struct LllOutcome {
    pub coloring: Coloring,
    pub resamples: u64,
}

/// Random k-coloring repaired by resampling the lowest-canonical
/// monochromatic edge until none remains. Precondition (max degree at most
/// k^{r-1}/4r) is checked unless `skip_precondition` is set.
pub fn lll_coloring(
    g: &Hypergraph,
    k: usize,
    seed: u64,
    budget: &SolverBudget,
    skip_precondition: bool,
) -> Result<LllOutcome, SolverError> {
    assert!(k >= 1);
    let bound = (k as f64).powi(g.r() as i32 - 1) / (4.0 * g.r() as f64);
    let max_degree = g.max_degree();
    if !skip_precondition && (max_degree as f64) > bound {
        return Err(SolverError::PreconditionFailed { max_degree, bound });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, 0x11));
    let mut colors: Vec<usize> = (0..g.n()).map(|_| rng.gen_range(0..k)).collect();
    let mut resamples = 0u64;
    loop {
        let mono = g.edges().iter().find(|e| {
            let c0 = colors[e[0]];
            e.iter().all(|&v| colors[v] == c0)
        });
        let Some(e) = mono else { break };
        if resamples >= budget.resample_cap {
            return Err(SolverError::ResampleCapExceeded {
                resamples,
                best_effort: Coloring {
                    colors,
                    palette_size: k,
                },
            });
        }
        for &v in e {
            colors[v] = rng.gen_range(0..k);
        }
        resamples += 1;
    }
    let coloring = Coloring {
        colors,
        palette_size: k,
    };
    debug_assert!(coloring.is_proper(g));
    Ok(LllOutcome { coloring, resamples })
}

/// Stage report for the two-stage independent-neighborhoods coloring.
#[derive(Debug, Clone)]
pub struct IndnbdReport {
    pub degree_threshold: f64,
    pub low_degree_count: usize,
    pub n_prime: usize,
    pub stage1_palette: usize,
    pub stage2_palette: usize,
    /// |E| <= k^{r+1/(r-1)} / (40 r^2 2^r)
    pub premise_holds: bool,
    /// checked only when the premise holds
    pub n_prime_bound_ok: Option<bool>,
    pub palette_le_k: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct IndnbdOutcome {
    pub coloring: Coloring,
    pub report: IndnbdReport,
}

/// Two-stage coloring of a host with independent neighborhoods: low-degree
/// vertices get a resampling coloring on k/2 colors; the rest are peeled with
/// the neighborhood/deletion extractor on a disjoint palette.
pub fn indnbd_coloring(
    g: &Hypergraph,
    k: usize,
    seed: u64,
    budget: &SolverBudget,
) -> Result<IndnbdOutcome, SolverError> {
    if !independent_neighborhoods_check(g).holds {
        return Err(SolverError::NotIndependentNeighborhoods);
    }
    if k < 2 || k % 2 != 0 {
        return Err(SolverError::OddPalette { k });
    }
    let r = g.r();
    let n = g.n();
    let b_threshold = (k as f64).powf(r as f64 + 1.0 / (r as f64 - 1.0))
        / (40.0 * (r * r) as f64 * (2f64).powi(r as i32));
    let premise_holds = (g.edge_count() as f64) <= b_threshold;
    if g.edge_count() == 0 {
        return Ok(IndnbdOutcome {
            coloring: Coloring::constant(n),
            report: IndnbdReport {
                degree_threshold: 0.0,
                low_degree_count: n,
                n_prime: 0,
                stage1_palette: 1,
                stage2_palette: 0,
                premise_holds,
                n_prime_bound_ok: Some(true),
                palette_le_k: Some(true),
            },
        });
    }
    let d = (k as f64).powi(r as i32 - 1) / (2.0 * r as f64 * (2f64).powi(r as i32));
    let degs = g.degrees();
    let low: VertexSet = (0..n).filter(|&v| (degs[v] as f64) < d).collect();
    let high: VertexSet = (0..n).filter(|&v| (degs[v] as f64) >= d).collect();

    let mut colors = vec![usize::MAX; n];
    let stage1_palette = if low.is_empty() {
        0
    } else {
        let (sub, old_of_new) = g.induced(&low).expect("in range");
        // max degree in G[A] < d = (k/2)^{r-1}/(4r), the resampling bound
        let out = lll_coloring(&sub, k / 2, subseed(seed, 1), budget, false)?;
        for (new, &old) in old_of_new.iter().enumerate() {
            colors[old] = out.coloring.colors[new];
        }
        k / 2
    };
    let n_prime = high.len();
    let stage2_palette = if high.is_empty() {
        0
    } else {
        let (sub, old_of_new) = g.induced(&high).expect("in range");
        let alpha = 1.0 / r as f64;
        let out = recursive_coloring(
            &sub,
            |p, round| turan_independent_set(p, subseed(seed, 2 + round as u64)).set.vertices,
            alpha,
        )?;
        for (new, &old) in old_of_new.iter().enumerate() {
            colors[old] = stage1_palette + out.coloring.colors[new];
        }
        out.coloring.palette_size
    };
    let palette_size = (stage1_palette + stage2_palette).max(1);
    let coloring = Coloring {
        colors: colors
            .into_iter()
            .map(|c| if c == usize::MAX { 0 } else { c })
            .collect(),
        palette_size,
    };
    debug_assert!(coloring.is_proper(g));
    let (n_prime_bound_ok, palette_le_k) = if premise_holds {
        let bound = r as f64 * g.edge_count() as f64 / d;
        (
            Some((n_prime as f64) <= bound),
            Some(palette_size <= k),
        )
    } else {
        (None, None)
    };
    Ok(IndnbdOutcome {
        coloring,
        report: IndnbdReport {
            degree_threshold: d,
            low_degree_count: low.len(),
            n_prime,
            stage1_palette,
            stage2_palette,
            premise_holds,
            n_prime_bound_ok,
            palette_le_k,
        },
    })
}
