//! Canonical labeled instances of the forbidden patterns.

use super::ConstructionError;
use crate::hypergraph::{combinations, Hypergraph};

/// Two r-edges sharing exactly `m` vertices: {0..r-1} and {0..m-1} ∪ {r..2r-m-1}.
pub fn gen_pair_overlap(r: usize, m: usize) -> Result<Hypergraph, ConstructionError> {
    if r < 2 || m < 1 || m >= r {
        return Err(ConstructionError::ParamRange(format!(
            "pair overlap needs 1 <= m < r, got r = {r}, m = {m}"
        )));
    }
    let n = 2 * r - m;
    let e1: Vec<usize> = (0..r).collect();
    let e2: Vec<usize> = (0..m).chain(r..n).collect();
    Ok(Hypergraph::new(r, n, vec![e1, e2])?)
}

/// The overlap family excluded by an (r,ℓ)-system: pairs sharing ℓ..r−1 vertices.
pub fn gen_rl_family(r: usize, l: usize) -> Result<Vec<Hypergraph>, ConstructionError> {
    if r < 2 || l < 1 || l >= r {
        return Err(ConstructionError::ParamRange(format!(
            "(r,l)-family needs 1 <= l < r, got r = {r}, l = {l}"
        )));
    }
    (l..r).map(|m| gen_pair_overlap(r, m)).collect()
}

/// The fan pattern: r edges through a common (r−1)-core {0..r-2} with tips
/// {r-1..2r-2}, plus the transversal edge over the tips.
pub fn gen_fr(r: usize) -> Result<Hypergraph, ConstructionError> {
    if r < 2 {
        return Err(ConstructionError::ParamRange(format!(
            "fan needs r >= 2, got {r}"
        )));
    }
    let n = 2 * r - 1;
    let core: Vec<usize> = (0..r - 1).collect();
    let tips: Vec<usize> = (r - 1..n).collect();
    let mut edges: Vec<Vec<usize>> = tips
        .iter()
        .map(|&t| {
            let mut e = core.clone();
            e.push(t);
            e
        })
        .collect();
    edges.push(tips);
    Ok(Hypergraph::new(r, n, edges)?)
}

/// Complete r-graph on t vertices.
pub fn gen_clique(r: usize, t: usize) -> Result<Hypergraph, ConstructionError> {
    if r < 2 || t < r {
        return Err(ConstructionError::ParamRange(format!(
            "clique needs t >= r >= 2, got r = {r}, t = {t}"
        )));
    }
    Ok(Hypergraph::new(r, t, combinations(t, r))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_overlap_32() {
        let g = gen_pair_overlap(3, 2).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edges(), &[vec![0, 1, 2], vec![0, 1, 3]]);
    }

    #[test]
    fn rl_family_sizes() {
        let fam = gen_rl_family(4, 2).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(gen_rl_family(3, 2).unwrap().len(), 1);
    }

    #[test]
    fn fan_f3() {
        let g = gen_fr(3).unwrap();
        assert_eq!((g.n(), g.edge_count()), (5, 4));
        assert_eq!(
            g.edges(),
            &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4], vec![2, 3, 4]]
        );
    }

    #[test]
    fn clique_k43() {
        let g = gen_clique(3, 4).unwrap();
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn generators_reject_bad_params() {
        assert!(gen_pair_overlap(3, 3).is_err());
        assert!(gen_pair_overlap(3, 0).is_err());
        assert!(gen_clique(3, 2).is_err());
        assert!(gen_fr(1).is_err());
    }
}
