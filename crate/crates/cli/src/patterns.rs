//! Textual pattern/family specs shared by the subcommands:
//! `rl:R:L`, `fr:R`, `clique:R:T`, `overlap:R:M`, `file:PATH`, or a bare
//! hypergraph file path.

use anyhow::{bail, Context, Result};
use hfree_core::constructions::{gen_clique, gen_fr, gen_pair_overlap, gen_rl_family};
use hfree_core::Hypergraph;

pub struct FamilySpec {
    pub label: String,
    pub members: Vec<Hypergraph>,
}

fn parse_usize(part: Option<&str>, what: &str, spec: &str) -> Result<usize> {
    part.and_then(|p| p.parse::<usize>().ok())
        .with_context(|| format!("bad {what} in pattern spec `{spec}`"))
}

pub fn parse_family(spec: &str) -> Result<FamilySpec> {
    let mut it = spec.splitn(3, ':');
    let head = it.next().unwrap_or("");
    let members = match head {
        "rl" => {
            let r = parse_usize(it.next(), "r", spec)?;
            let l = parse_usize(it.next(), "l", spec)?;
            gen_rl_family(r, l)?
        }
        "fr" => {
            let r = parse_usize(it.next(), "r", spec)?;
            vec![gen_fr(r)?]
        }
        "clique" => {
            let r = parse_usize(it.next(), "r", spec)?;
            let t = parse_usize(it.next(), "t", spec)?;
            vec![gen_clique(r, t)?]
        }
        "overlap" => {
            let r = parse_usize(it.next(), "r", spec)?;
            let m = parse_usize(it.next(), "m", spec)?;
            vec![gen_pair_overlap(r, m)?]
        }
        "file" => {
            let path = it.next().unwrap_or("");
            if path.is_empty() {
                bail!("empty path in pattern spec `{spec}`");
            }
            vec![load_hypergraph(path)?]
        }
        _ => {
            // bare path fallback
            if std::path::Path::new(spec).exists() {
                vec![load_hypergraph(spec)?]
            } else {
                bail!(
                    "unrecognized pattern spec `{spec}` (expected rl:R:L, fr:R, \
                     clique:R:T, overlap:R:M, file:PATH, or an existing file)"
                );
            }
        }
    };
    Ok(FamilySpec {
        label: spec.to_string(),
        members,
    })
}

pub fn load_hypergraph(path: &str) -> Result<Hypergraph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read `{path}`"))?;
    Hypergraph::parse(&text).with_context(|| format!("cannot parse `{path}`"))
}
