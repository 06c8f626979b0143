//! r-uniform hypergraph data model and bit-exact text I/O.
//!
//! Vertices are dense 0-based ids. Edges are strictly ascending `r`-tuples,
//! stored in lexicographic order so that serialization is deterministic.
//! A `Hypergraph` is immutable after construction; all queries are pure.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;
pub type Edge = Vec<Vertex>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("line {line}: malformed header (expected `r n m`)")]
    MalformedHeader { line: usize },
    #[error("line {line}: edge has {got} vertices, expected {expected}")]
    WrongArity {
        line: usize,
        got: usize,
        expected: usize,
    },
    #[error("line {line}: duplicate vertex within an edge")]
    DuplicateVertexInEdge { line: usize },
    #[error("line {line}: duplicate edge")]
    DuplicateEdge { line: usize },
    #[error("line {line}: vertex id {id} out of range (n = {n})")]
    VertexOutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: expected {expected} edges, found {got}")]
    EdgeCountMismatch {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("uniformity r = {r} out of range (need r >= 1)")]
    BadUniformity { r: usize },
    #[error("vertex id {id} out of range (n = {n})")]
    IdOutOfRange { id: usize, n: usize },
    #[error("vertex set has wrong size: got {got}, expected {expected}")]
    WrongSetSize { got: usize, expected: usize },
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new(mut ids: Vec<Vertex>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }

    pub fn from_sorted(ids: Vec<Vertex>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet(ids)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// r-uniform hypergraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hypergraph {
    r: usize,
    n: usize,
    edges: Vec<Edge>,
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge and the edge list into canonical
    /// order. Rejects wrong arities, in-edge duplicates, duplicate edges and
    /// out-of-range ids.
    pub fn new(r: usize, n: usize, edges: Vec<Edge>) -> Result<Self, HypergraphError> {
        if r < 1 {
            return Err(HypergraphError::BadUniformity { r });
        }
        let mut canon: Vec<Edge> = Vec::with_capacity(edges.len());
        for mut e in edges {
            if e.len() != r {
                return Err(HypergraphError::WrongArity {
                    line: 0,
                    got: e.len(),
                    expected: r,
                });
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(HypergraphError::DuplicateVertexInEdge { line: 0 });
            }
            if let Some(&id) = e.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { line: 0, id, n });
            }
            canon.push(e);
        }
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(HypergraphError::DuplicateEdge { line: 0 });
        }
        Ok(Hypergraph { r, n, edges: canon })
    }

    pub fn empty(r: usize, n: usize) -> Self {
        Hypergraph {
            r,
            n,
            edges: Vec::new(),
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Vertices covered by at least one edge.
    pub fn support(&self) -> VertexSet {
        let mut s: BTreeSet<Vertex> = BTreeSet::new();
        for e in &self.edges {
            s.extend(e.iter().copied());
        }
        VertexSet::from_sorted(s.into_iter().collect())
    }

    /// N(S) = vertices v outside S with S ∪ {v} an edge; requires |S| = r−1.
    pub fn neighborhood(&self, s: &VertexSet) -> Result<VertexSet, HypergraphError> {
        if s.len() + 1 != self.r {
            return Err(HypergraphError::WrongSetSize {
                got: s.len(),
                expected: self.r - 1,
            });
        }
        if let Some(id) = s.iter().find(|&v| v >= self.n) {
            return Err(HypergraphError::IdOutOfRange { id, n: self.n });
        }
        let mut out = Vec::new();
        for e in &self.edges {
            let mut extra = None;
            let mut ok = true;
            for &v in e {
                if s.contains(v) {
                    continue;
                }
                if extra.is_some() {
                    ok = false;
                    break;
                }
                extra = Some(v);
            }
            if ok {
                if let Some(v) = extra {
                    out.push(v);
                }
            }
        }
        Ok(VertexSet::new(out))
    }

    /// Induced subhypergraph on `s`, densely relabeled. Returns the new
    /// hypergraph plus the map new id -> old id.
    pub fn induced(&self, s: &VertexSet) -> Result<(Hypergraph, Vec<Vertex>), HypergraphError> {
        if let Some(id) = s.iter().find(|&v| v >= self.n) {
            return Err(HypergraphError::IdOutOfRange { id, n: self.n });
        }
        let old_of_new: Vec<Vertex> = s.iter().collect();
        let mut new_of_old = vec![usize::MAX; self.n];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            if e.iter().all(|&v| s.contains(v)) {
                edges.push(e.iter().map(|&v| new_of_old[v]).collect());
            }
        }
        let sub = Hypergraph {
            r: self.r,
            n: old_of_new.len(),
            edges,
        };
        Ok((sub, old_of_new))
    }

    /// True iff no edge is contained in `s`.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        !self.edges.iter().any(|e| e.iter().all(|&v| s.contains(v)))
    }

    /// Canonical text form: header `r n m`, then sorted edges, LF newlines.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.r, self.n, self.edges.len());
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Parses the text format: line 1 `r n m`, then m edge lines; `#` lines
    /// ignored. Errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self, HypergraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or(HypergraphError::MalformedHeader { line: 1 })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(HypergraphError::MalformedHeader { line: hline });
        }
        let parse_num = |s: &str| s.parse::<usize>().ok();
        let (r, n, m) = match (
            parse_num(fields[0]),
            parse_num(fields[1]),
            parse_num(fields[2]),
        ) {
            (Some(r), Some(n), Some(m)) => (r, n, m),
            _ => return Err(HypergraphError::MalformedHeader { line: hline }),
        };
        if r < 1 {
            return Err(HypergraphError::BadUniformity { r });
        }
        let mut edges: Vec<Edge> = Vec::with_capacity(m);
        let mut seen: BTreeSet<Edge> = BTreeSet::new();
        let mut last_line = hline;
        for (line, text) in lines.by_ref().take(m) {
            last_line = line;
            let mut e: Edge = Vec::with_capacity(r);
            for f in text.split_whitespace() {
                match f.parse::<usize>() {
                    Ok(v) => e.push(v),
                    Err(_) => return Err(HypergraphError::MalformedHeader { line }),
                }
            }
            if e.len() != r {
                return Err(HypergraphError::WrongArity {
                    line,
                    got: e.len(),
                    expected: r,
                });
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(HypergraphError::DuplicateVertexInEdge { line });
            }
            if let Some(&id) = e.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { line, id, n });
            }
            if !seen.insert(e.clone()) {
                return Err(HypergraphError::DuplicateEdge { line });
            }
            edges.push(e);
        }
        if edges.len() != m {
            return Err(HypergraphError::EdgeCountMismatch {
                line: last_line,
                expected: m,
                got: edges.len(),
            });
        }
        edges.sort_unstable();
        Ok(Hypergraph { r, n, edges })
    }

    /// Handshake identity: Σ_v deg(v) = r·|E|. Cheap sanity check asserted
    /// after constructions.
    pub fn handshake_holds(&self) -> bool {
        self.degrees().iter().sum::<usize>() == self.r * self.edges.len()
    }
}

/// Vertex coloring with an explicit palette size. Validity is a checkable
/// predicate, never assumed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub palette_size: usize,
}

impl Coloring {
    pub fn constant(n: usize) -> Self {
        Coloring {
            colors: vec![0; n],
            palette_size: 1,
        }
    }

    /// Weak properness: no edge is monochromatic.
    pub fn is_proper(&self, g: &Hypergraph) -> bool {
        if self.colors.len() != g.n() {
            return false;
        }
        if self.colors.iter().any(|&c| c >= self.palette_size) {
            return false;
        }
        !g.edges().iter().any(|e| {
            let c0 = self.colors[e[0]];
            e.iter().all(|&v| self.colors[v] == c0)
        })
    }

    pub fn colors_used(&self) -> usize {
        let mut seen = vec![false; self.palette_size];
        for &c in &self.colors {
            seen[c] = true;
        }
        seen.into_iter().filter(|&b| b).count()
    }
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Binomial coefficient as f64 (generalized to real `x` over integer `k`).
pub fn binom_real(x: f64, k: usize) -> f64 {
    let mut num = 1.0;
    for i in 0..k {
        num *= x - i as f64;
    }
    let mut den = 1.0;
    for i in 1..=k {
        den *= i as f64;
    }
    num / den
}

/// Exact binomial coefficient, saturating at u128 overflow boundaries is the
/// caller's concern; desk-scale inputs stay far below.
pub fn binom_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
