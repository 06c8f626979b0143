//! Hypertree recognition, leaf-deletion families, connectors, the auxiliary
//! pairing graph, and the tree-exclusion coloring with palette
//! 2(r−1)(t−1)+1.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::embed::{contains_copy, contains_copy_anchored, CopyWitness};
use crate::hypergraph::{Coloring, Edge, Hypergraph, VertexSet};
use crate::invariants::{canonical_code, InvariantError};
use crate::solvers::{degeneracy_coloring, SolverError};

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("hypergraph is not an r-tree")]
    NotATree,
    #[error("edge {0} is not a leaf")]
    NotALeaf(usize),
    #[error("tree must keep at least one edge after deletion")]
    SingleEdge,
    #[error("host contains a copy of the excluded tree")]
    ContainsPattern(CopyWitness),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Embed(#[from] crate::embed::EmbedError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// false if already connected
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Acyclicity of the vertex–edge incidence graph; equivalent to having no
/// Berge cycle (a length-ℓ cycle yields a length-2ℓ incidence cycle and
/// conversely).
pub fn is_r_forest(g: &Hypergraph) -> bool {
    let n = g.n();
    let mut uf = UnionFind::new(n + g.edge_count());
    for (j, e) in g.edges().iter().enumerate() {
        for &v in e {
            if !uf.union(v, n + j) {
                return false;
            }
        }
    }
    true
}

/// Connected forest with at least one edge.
pub fn is_r_tree(g: &Hypergraph) -> bool {
    if g.edge_count() == 0 || !is_r_forest(g) {
        return false;
    }
    let mut uf = UnionFind::new(g.n());
    for e in g.edges() {
        for w in e.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let root = uf.find(0);
    if !(0..g.n()).all(|v| uf.find(v) == root) {
        return false;
    }
    // a connected forest with t edges spans (r-1)t + 1 vertices
    debug_assert_eq!(g.n(), (g.r() - 1) * g.edge_count() + 1);
    true
}

/// A validated r-tree with `t` edges on (r−1)t+1 vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RTree {
    graph: Hypergraph,
    t: usize,
}

impl RTree {
    pub fn new(graph: Hypergraph) -> Result<Self, TreeError> {
        if !is_r_tree(&graph) {
            return Err(TreeError::NotATree);
        }
        let t = graph.edge_count();
        Ok(RTree { graph, t })
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn t(&self) -> usize {
        self.t
    }
}

/// Edge indices with at most one vertex of degree greater than one.
pub fn leaves(tree: &RTree) -> Vec<usize> {
    let degs = tree.graph.degrees();
    tree.graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.iter().filter(|&&v| degs[v] > 1).count() <= 1)
        .map(|(i, _)| i)
        .collect()
}

/// Removes a leaf edge and its degree-one vertices (exactly r−1 of them when
/// t >= 2), relabeling densely.
pub fn delete_leaf(tree: &RTree, edge_idx: usize) -> Result<RTree, TreeError> {
    if tree.t < 2 {
        return Err(TreeError::SingleEdge);
    }
    if !leaves(tree).contains(&edge_idx) {
        return Err(TreeError::NotALeaf(edge_idx));
    }
    let degs = tree.graph.degrees();
    let dropped: BTreeSet<usize> = tree
        .graph
        .edge(edge_idx)
        .iter()
        .copied()
        .filter(|&v| degs[v] == 1)
        .collect();
    debug_assert_eq!(dropped.len(), tree.graph.r() - 1);
    let keep: VertexSet = (0..tree.graph.n()).filter(|v| !dropped.contains(v)).collect();
    let edges: Vec<Edge> = tree
        .graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != edge_idx)
        .map(|(_, e)| e.clone())
        .collect();
    let reduced = Hypergraph::new(tree.graph.r(), tree.graph.n(), edges).expect("still valid");
    let (sub, _) = reduced.induced(&keep).expect("ids in range");
    RTree::new(sub)
}

/// Families F_0..F_{t-1}: F_0 = {T}; each later family collects the leaf
/// deletions of the previous one, deduplicated up to isomorphism.
#[derive(Debug, Clone)]
pub struct LeafFamilies {
    pub families: Vec<Vec<RTree>>,
    /// parent_links[i] = (parent index in families[i-1], leaf edge, child index)
    pub parent_links: Vec<Vec<(usize, usize, usize)>>,
    codes: Vec<Vec<Vec<u8>>>,
}

pub fn build_leaf_families(tree: &RTree) -> Result<LeafFamilies, TreeError> {
    let mut families = vec![vec![tree.clone()]];
    let mut codes = vec![vec![canonical_code(tree.graph())?]];
    let mut parent_links = vec![Vec::new()];
    for _ in 1..tree.t() {
        let prev = families.last().unwrap().clone();
        let mut next: Vec<RTree> = Vec::new();
        let mut next_codes: Vec<Vec<u8>> = Vec::new();
        let mut links = Vec::new();
        for (pi, parent) in prev.iter().enumerate() {
            for leaf in leaves(parent) {
                let child = delete_leaf(parent, leaf)?;
                let code = canonical_code(child.graph())?;
                let ci = match next_codes.iter().position(|c| c == &code) {
                    Some(ci) => ci,
                    None => {
                        next.push(child);
                        next_codes.push(code);
                        next.len() - 1
                    }
                };
                links.push((pi, leaf, ci));
            }
        }
        families.push(next);
        codes.push(next_codes);
        parent_links.push(links);
    }
    Ok(LeafFamilies {
        families,
        parent_links,
        codes,
    })
}

impl LeafFamilies {
    pub fn depth(&self) -> usize {
        self.families.len()
    }
}

/// Vertices of `member` (a tree in family i) at which attaching a fresh leaf
/// yields a tree isomorphic to some member of family i−1.
pub fn connectors(
    member: &RTree,
    i: usize,
    fam: &LeafFamilies,
) -> Result<VertexSet, TreeError> {
    assert!(i >= 1 && i < fam.depth());
    let r = member.graph().r();
    let n = member.graph().n();
    let prev_codes = &fam.codes[i - 1];
    let mut out = Vec::new();
    for v in 0..n {
        let mut edges: Vec<Edge> = member.graph().edges().to_vec();
        let mut fresh: Edge = (n..n + r - 1).collect();
        fresh.push(v);
        edges.push(fresh);
        let extended = Hypergraph::new(r, n + r - 1, edges).expect("fresh leaf is valid");
        let code = canonical_code(&extended)?;
        if prev_codes.iter().any(|c| c == &code) {
            out.push(v);
        }
    }
    Ok(VertexSet::from_sorted(out))
}

/// Audit trail of the tree-exclusion coloring.
#[derive(Debug, Clone)]
pub struct TreeColoringTrace {
    /// rounds[i-1] = A_i, the vertices gathered in round i
    pub rounds: Vec<Vec<usize>>,
    /// one witness tree (minus the connector) per gathered vertex
    pub x_sets: BTreeMap<usize, VertexSet>,
    pub pairing_edges: Vec<(usize, usize)>,
    pub elimination_order: Vec<usize>,
    pub pairing_degeneracy: usize,
    pub palette_bound: usize,
}

#[derive(Debug, Clone)]
pub struct TreeColoringOutcome {
    pub coloring: Coloring,
    pub trace: TreeColoringTrace,
}

/// Colors a T-free host with at most 2(r−1)(t−1)+1 colors by gathering
/// connector vertices round by round and degeneracy-coloring the pairing
/// graph between each vertex and its witness set.
pub fn tree_free_coloring(
    g: &Hypergraph,
    tree: &RTree,
) -> Result<TreeColoringOutcome, TreeError> {
    if let Some(copy) = contains_copy(g, tree.graph())? {
        return Err(TreeError::ContainsPattern(copy));
    }
    let r = g.r();
    let t = tree.t();
    let palette_bound = 2 * (r - 1) * (t - 1) + 1;
    if t == 1 {
        // a host free of the one-edge tree has no edges at all
        debug_assert_eq!(g.edge_count(), 0);
        return Ok(TreeColoringOutcome {
            coloring: Coloring::constant(g.n()),
            trace: TreeColoringTrace {
                rounds: Vec::new(),
                x_sets: BTreeMap::new(),
                pairing_edges: Vec::new(),
                elimination_order: Vec::new(),
                pairing_degeneracy: 0,
                palette_bound,
            },
        });
    }
    let fam = build_leaf_families(tree)?;
    // connectors per member of each family i >= 1
    let mut member_connectors: Vec<Vec<VertexSet>> = vec![Vec::new()];
    for i in 1..fam.depth() {
        let cs: Vec<VertexSet> = fam.families[i]
            .iter()
            .map(|m| connectors(m, i, &fam))
            .collect::<Result<_, _>>()?;
        debug_assert!(cs.iter().all(|c| !c.is_empty()));
        member_connectors.push(cs);
    }
    let mut remaining: Vec<bool> = vec![true; g.n()];
    let mut rounds: Vec<Vec<usize>> = Vec::new();
    let mut x_sets: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for i in 1..fam.depth() {
        let rset: VertexSet = (0..g.n()).filter(|&v| remaining[v]).collect();
        let (sub, old_of_new) = g.induced(&rset).expect("ids in range");
        let mut gathered = Vec::new();
        for new_v in 0..sub.n() {
            let host_v = old_of_new[new_v];
            let mut witness: Option<VertexSet> = None;
            'members: for (mi, member) in fam.families[i].iter().enumerate() {
                for c in member_connectors[i][mi].iter() {
                    if let Some(copy) =
                        contains_copy_anchored(&sub, member.graph(), c, new_v)?
                    {
                        let verts: VertexSet = copy
                            .vertices
                            .iter()
                            .map(|u| old_of_new[u])
                            .filter(|&u| u != host_v)
                            .collect();
                        witness = Some(verts);
                        break 'members;
                    }
                }
            }
            if let Some(x) = witness {
                debug_assert_eq!(x.len(), (r - 1) * (t - i));
                gathered.push(host_v);
                x_sets.insert(host_v, x);
            }
        }
        for &v in &gathered {
            remaining[v] = false;
        }
        rounds.push(gathered);
    }
    // residue spans no edge: the single-edge family would have gathered it
    debug_assert!(!g
        .edges()
        .iter()
        .any(|e| e.iter().all(|&v| remaining[v])));
    let mut pairing: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (&v, xs) in &x_sets {
        for u in xs.iter() {
            pairing.insert((v.min(u), v.max(u)));
        }
    }
    let pairing_edges: Vec<(usize, usize)> = pairing.into_iter().collect();
    let pairing_graph = Hypergraph::new(
        2,
        g.n(),
        pairing_edges.iter().map(|&(a, b)| vec![a, b]).collect(),
    )
    .expect("pairing edges are valid");
    let out = degeneracy_coloring(&pairing_graph)?;
    assert!(out.degeneracy <= palette_bound - 1);
    assert!(out.coloring.palette_size <= palette_bound);
    let mut coloring = out.coloring;
    coloring.palette_size = coloring.palette_size.max(1);
    assert!(coloring.is_proper(g), "pairing coloring must be proper for the host");
    Ok(TreeColoringOutcome {
        coloring,
        trace: TreeColoringTrace {
            rounds,
            x_sets,
            pairing_edges,
            elimination_order: out.elimination_order,
            pairing_degeneracy: out.degeneracy,
            palette_bound,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loose_path3() -> RTree {
        RTree::new(
            Hypergraph::new(3, 7, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6]]).unwrap(),
        )
        .unwrap()
    }

    fn star3() -> RTree {
        RTree::new(
            Hypergraph::new(3, 7, vec![vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn star_is_tree() {
        assert!(is_r_tree(star3().graph()));
    }

    #[test]
    fn shared_pair_is_cycle() {
        let g = Hypergraph::new(3, 4, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        assert!(!is_r_forest(&g));
    }

    #[test]
    fn single_edge_is_tree() {
        let g = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert!(is_r_tree(&g));
    }

    #[test]
    fn disconnected_forest_not_tree() {
        let g = Hypergraph::new(3, 6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert!(is_r_forest(&g));
        assert!(!is_r_tree(&g));
    }

    #[test]
    fn leaves_loose_path() {
        let t = loose_path3();
        assert_eq!(leaves(&t), vec![0, 2]);
    }

    #[test]
    fn leaves_star_all() {
        assert_eq!(leaves(&star3()), vec![0, 1, 2]);
    }

    #[test]
    fn leaves_single_edge() {
        let t = RTree::new(Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap()).unwrap();
        assert_eq!(leaves(&t), vec![0]);
    }

    #[test]
    fn delete_leaf_path() {
        let t = loose_path3();
        let reduced = delete_leaf(&t, 2).unwrap();
        assert_eq!(reduced.t(), 2);
        assert_eq!(reduced.graph().n(), 5);
    }

    #[test]
    fn delete_leaf_rejects_middle() {
        let t = loose_path3();
        assert!(matches!(delete_leaf(&t, 1), Err(TreeError::NotALeaf(1))));
    }

    #[test]
    fn delete_leaf_two_edges() {
        let t = RTree::new(Hypergraph::new(3, 5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap())
            .unwrap();
        for leaf in [0usize, 1] {
            let reduced = delete_leaf(&t, leaf).unwrap();
            assert_eq!(reduced.t(), 1);
        }
    }

    #[test]
    fn families_path_and_star_collapse() {
        for t in [loose_path3(), star3()] {
            let fam = build_leaf_families(&t).unwrap();
            assert_eq!(fam.depth(), 3);
            assert_eq!(fam.families[1].len(), 1); // the 2-edge loose path
            assert_eq!(fam.families[2].len(), 1); // single edge
            assert_eq!(fam.families[2][0].t(), 1);
        }
    }

    #[test]
    fn families_single_edge() {
        let t = RTree::new(Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap()).unwrap();
        let fam = build_leaf_families(&t).unwrap();
        assert_eq!(fam.depth(), 1);
    }

    #[test]
    fn connectors_path_parent() {
        // 2-edge path member with F_0 = {loose path}: attaching at the shared
        // vertex gives the star instead
        let fam = build_leaf_families(&loose_path3()).unwrap();
        let member = &fam.families[1][0];
        let cs = connectors(member, 1, &fam).unwrap();
        // member is {012, 234}: shared vertex 2 excluded
        assert_eq!(cs, VertexSet::new(vec![0, 1, 3, 4]));
    }

    #[test]
    fn connectors_star_parent() {
        let fam = build_leaf_families(&star3()).unwrap();
        // same member up to isomorphism, relabeled so the shared vertex is 2
        let member = RTree::new(
            Hypergraph::new(3, 5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap(),
        )
        .unwrap();
        let cs = connectors(&member, 1, &fam).unwrap();
        assert_eq!(cs, VertexSet::new(vec![2]));
    }

    #[test]
    fn connectors_single_edge_all() {
        let fam = build_leaf_families(&loose_path3()).unwrap();
        let member = &fam.families[2][0];
        let cs = connectors(member, 2, &fam).unwrap();
        assert_eq!(cs.len(), 3);
    }

    #[test]
    fn coloring_star_host() {
        // all 3-edges through vertex 0 on 9 vertices is loose-path-free
        let mut edges = Vec::new();
        for a in 1..9usize {
            for b in a + 1..9 {
                edges.push(vec![0, a, b]);
            }
        }
        let g = Hypergraph::new(3, 9, edges).unwrap();
        let t = loose_path3();
        let out = tree_free_coloring(&g, &t).unwrap();
        assert!(out.coloring.palette_size <= 9);
        assert!(out.coloring.is_proper(&g));
    }

    #[test]
    fn coloring_rejects_containing_host() {
        let host = loose_path3().graph().clone();
        let err = tree_free_coloring(&host, &loose_path3()).unwrap_err();
        assert!(matches!(err, TreeError::ContainsPattern(_)));
    }

    #[test]
    fn coloring_disjoint_triangles_graph_case() {
        // r = 2: disjoint triangles are 4-vertex-path-free
        let g = Hypergraph::new(
            2,
            6,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![3, 4],
                vec![3, 5],
                vec![4, 5],
            ],
        )
        .unwrap();
        let path4 = RTree::new(
            Hypergraph::new(2, 4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap(),
        )
        .unwrap();
        let out = tree_free_coloring(&g, &path4).unwrap();
        assert!(out.coloring.palette_size <= 5);
        assert!(out.coloring.is_proper(&g));
    }

    #[test]
    fn coloring_empty_host() {
        let g = Hypergraph::empty(3, 5);
        let out = tree_free_coloring(&g, &loose_path3()).unwrap();
        assert_eq!(out.coloring.palette_size, 1);
    }

    #[test]
    fn witness_sets_re_verify() {
        let mut edges = Vec::new();
        for a in 1..8usize {
            for b in a + 1..8 {
                edges.push(vec![0, a, b]);
            }
        }
        let g = Hypergraph::new(3, 8, edges).unwrap();
        let out = tree_free_coloring(&g, &loose_path3()).unwrap();
        let fam = build_leaf_families(&loose_path3()).unwrap();
        for (i, round) in out.trace.rounds.iter().enumerate() {
            let fi = i + 1;
            for &v in round {
                let xs = &out.trace.x_sets[&v];
                assert_eq!(xs.len(), 2 * (3 - fi));
                // {v} ∪ X_v hosts a copy of a family member with v in it
                let mut span: Vec<usize> = xs.iter().collect();
                span.push(v);
                let (sub, _) = g.induced(&VertexSet::new(span)).unwrap();
                let found = fam.families[fi]
                    .iter()
                    .any(|m| contains_copy(&sub, m.graph()).unwrap().is_some());
                assert!(found);
            }
        }
    }
}
