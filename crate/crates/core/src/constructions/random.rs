//! Seeded binomial random hypergraph sampling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ConstructionError;
use crate::hypergraph::{binom_u128, Hypergraph};

/// Lexicographic unranking of the r-subset of `0..n` with the given index.
fn unrank(n: usize, r: usize, mut idx: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(r);
    let mut v = 0usize;
    for pos in 0..r {
        loop {
            let c = binom_u128(n - v - 1, r - pos - 1);
            if idx < c {
                out.push(v);
                v += 1;
                break;
            }
            idx -= c;
            v += 1;
        }
    }
    out
}

/// Each of the C(n,r) potential edges is kept independently with probability
/// `p`; the kept set is walked by geometric skipping so the expected work is
/// proportional to p·C(n,r).
pub fn sample_random_hypergraph(
    n: usize,
    r: usize,
    p: f64,
    seed: u64,
) -> Result<Hypergraph, ConstructionError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ConstructionError::ParamRange(format!(
            "edge probability must lie in [0,1], got {p}"
        )));
    }
    if r < 1 || n < r {
        return Ok(Hypergraph::empty(r.max(1), n));
    }
    let total = binom_u128(n, r);
    if p == 0.0 {
        return Ok(Hypergraph::empty(r, n));
    }
    let mut edges = Vec::new();
    if p == 1.0 {
        for idx in 0..total {
            edges.push(unrank(n, r, idx));
        }
        return Ok(Hypergraph::new(r, n, edges)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log1p = (1.0 - p).ln();
    let mut idx: i128 = -1;
    loop {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let skip = (u.ln() / log1p).floor() as i128;
        idx += 1 + skip;
        if idx as u128 >= total || idx < 0 {
            break;
        }
        edges.push(unrank(n, r, idx as u128));
    }
    Ok(Hypergraph::new(r, n, edges)?)
}
