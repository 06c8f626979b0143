//! One function per task; both the one-shot subcommands and the experiment
//! runner go through these so certificates stay identical.
//!
//! Certificates are serde_json values (sorted keys, no runtimes), so a rerun
//! with the same seed is byte-identical.

use anyhow::{bail, Result};
use serde_json::{json, Value};

use hfree_core::constructions::{
    clique_constant_bound, clique_free_construct, deletion_construct, fan_constant,
    fan_constant_generic, fan_lower_constant, gen_clique, plan_construction, rl_constant,
    rl_constant_generic, rl_constant_kmrt, ConstructionPlan, InfeasibleReason, PlanOverrides,
    VerifyLevel,
};
use hfree_core::embed::contains_copy;
use hfree_core::hypergraph::Coloring;
use hfree_core::invariants::{compute_rho, edge_automorphisms};
use hfree_core::seeding::subseed;
use hfree_core::solvers::{
    independence_number, indnbd_coloring, lll_coloring, recursive_coloring,
    turan_independent_set, weak_chromatic_number, SolverBudget,
};
use hfree_core::treecolor::{tree_free_coloring, RTree, TreeError};
use hfree_core::Hypergraph;

use crate::patterns::FamilySpec;

/// Everything a trial needs to record: the certificate, the CSV metrics, and
/// an optional hypergraph artifact.
pub struct TaskOutcome {
    pub cert: Value,
    pub r: Option<usize>,
    pub n: Option<usize>,
    pub edges: Option<usize>,
    pub alpha: Option<usize>,
    pub chi: Option<usize>,
    pub palette: Option<usize>,
    pub free: Option<bool>,
    pub pass: bool,
    pub graph_text: Option<String>,
}

impl TaskOutcome {
    fn new(cert: Value, pass: bool) -> Self {
        TaskOutcome {
            cert,
            r: None,
            n: None,
            edges: None,
            alpha: None,
            chi: None,
            palette: None,
            free: None,
            pass,
            graph_text: None,
        }
    }
}

pub const SCHEMA_VERSION: u32 = 1;

fn input_summary(g: &Hypergraph) -> Value {
    json!({ "r": g.r(), "n": g.n(), "edges": g.edge_count() })
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn coloring_json(c: &Coloring) -> Value {
    json!({ "colors": c.colors, "palette": c.palette_size })
}

pub fn invariants(g: &Hypergraph) -> Result<TaskOutcome> {
    let density = compute_rho(g)?;
    let aut = edge_automorphisms(g)?;
    let cert = json!({
        "schema_version": SCHEMA_VERSION,
        "task": "invariants",
        "input": input_summary(g),
        "rho": format!("{}/{}", density.rho.numer(), density.rho.denom()),
        "balanced": density.balanced,
        "witness": density.witness,
        "alpha_per_edge": aut.alpha_per_edge,
        "alpha_min": aut.alpha_min,
        "aut_order": aut.aut_order,
    });
    let mut out = TaskOutcome::new(cert, true);
    out.r = Some(g.r());
    out.n = Some(g.n());
    out.edges = Some(g.edge_count());
    Ok(out)
}

pub fn check_free(g: &Hypergraph, family: &FamilySpec) -> Result<TaskOutcome> {
    let mut witness = None;
    for (i, member) in family.members.iter().enumerate() {
        if let Some(copy) = contains_copy(g, member)? {
            witness = Some(json!({
                "member": i,
                "edge_indices": copy.edge_indices,
                "vertices": copy.vertices.as_slice(),
            }));
            break;
        }
    }
    let free = witness.is_none();
    let cert = json!({
        "schema_version": SCHEMA_VERSION,
        "task": "check-free",
        "input": input_summary(g),
        "pattern": family.label,
        "free": free,
        "witness": witness,
    });
    let mut out = TaskOutcome::new(cert, free);
    out.r = Some(g.r());
    out.n = Some(g.n());
    out.edges = Some(g.edge_count());
    out.free = Some(free);
    Ok(out)
}

pub fn solve_chi(g: &Hypergraph, budget: &SolverBudget) -> Result<TaskOutcome> {
    let res = weak_chromatic_number(g, budget)?;
    let proper = res.coloring.is_proper(g);
    let cert = json!({
        "schema_version": SCHEMA_VERSION,
        "task": "solve-chi",
        "input": input_summary(g),
        "chi": res.chi,
        "certified": res.certified,
        "coloring": coloring_json(&res.coloring),
        "proper": proper,
    });
    let mut out = TaskOutcome::new(cert, proper && res.certified);
    out.r = Some(g.r());
    out.n = Some(g.n());
    out.edges = Some(g.edge_count());
    out.chi = Some(res.chi);
    out.palette = Some(res.coloring.palette_size);
    Ok(out)
}

pub fn solve_alpha(g: &Hypergraph, budget: &SolverBudget) -> Result<TaskOutcome> {
    let res = independence_number(g, budget)?;
    let independent = g.is_independent(&res.vertices);
    let cert = json!({
        "schema_version": SCHEMA_VERSION,
        "task": "solve-alpha",
        "input": input_summary(g),
        "alpha": res.vertices.len(),
        "certified": res.certified_maximum,
        "set": res.vertices.as_slice(),
        "independent": independent,
    });
    let mut out = TaskOutcome::new(cert, independent && res.certified_maximum);
    out.r = Some(g.r());
    out.n = Some(g.n());
    out.edges = Some(g.edge_count());
    out.alpha = Some(res.vertices.len());
    Ok(out)
}

pub fn color_lll(
    g: &Hypergraph,
    k: usize,
    seed: u64,
    budget: &SolverBudget,
    skip_precondition: bool,
) -> Result<TaskOutcome> {
    let res = lll_coloring(g, k, seed, budget, skip_precondition)?;
    let proper = res.coloring.is_proper(g);
    let cert = json!({
        "schema_version": SCHEMA_VERSION,
        "task": "color-lll",
        "input": input_summary(g),
        "seed": seed,
        "k": k,
        "resamples": res.resamples,
        "coloring": coloring_json(&res.coloring),
        "proper": proper,
    });
    let mut out = TaskOutcome::new(cert, proper);
    out.r = Some(g.r());
    out.n = Some(g.n());
    out.edges = Some(g.edge_count());
    out.palette = Some(res.coloring.palette_size);
    Ok(out)
}

pub fn color_peel(g: &Hypergraph, seed: u64) -> Result<TaskOutcome> {
    let alpha = 1.0 / g.r() as f64;
    let res = recursive_coloring(
        g,
        |p, round| turan_independent_set(p, subseed(seed, round as u64)).set.vertices,
        alpha.min(0.5),
    )?;
    let proper = res.coloring.is_proper(g);
    let within = res.coloring.palette_size <= res.palette_bound;
    let cert = json!({
        "schema_version": SCHEMA_VERSION,
        "task": "color-peel",
        "input": input_summary(g),
        "seed": seed,
        "rounds": res.rounds,
        "palette_bound": res.palette_bound,
        "coloring": coloring_json(&res.coloring),
        "proper": proper,
        "within_bound": within,
    });
    let mut out = TaskOutcome::new(cert, proper && within);
    out.r = Some(g.r());
    out.n = Some(g.n());
    out.edges = Some(g.edge_count());
    out.palette = Some(res.coloring.palette_size);
    Ok(out)
}

pub fn color_indnbd(
    g: &Hypergraph,
    k: usize,
    seed: u64,
    budget: &SolverBudget,
) -> Result<TaskOutcome> {
    let res = indnbd_coloring(g, k, seed, budget)?;
    let proper = res.coloring.is_proper(g);
    let rep = &res.report;
    let cert = json!({
        "schema_version": SCHEMA_VERSION,
        "task": "color-indnbd",
        "input": input_summary(g),
        "seed": seed,
        "k": k,
        "degree_threshold": finite(rep.degree_threshold),
        "low_degree_count": rep.low_degree_count,
        "n_prime": rep.n_prime,
        "stage1_palette": rep.stage1_palette,
        "stage2_palette": rep.stage2_palette,
        "premise_holds": rep.premise_holds,
        "n_prime_bound_ok": rep.n_prime_bound_ok,
        "palette_le_k": rep.palette_le_k,
        "coloring": coloring_json(&res.coloring),
        "proper": proper,
    });
    let pass = proper && rep.palette_le_k.unwrap_or(true);
    let mut out = TaskOutcome::new(cert, pass);
    out.r = Some(g.r());
    out.n = Some(g.n());
    out.edges = Some(g.edge_count());
    out.palette = Some(res.coloring.palette_size);
    Ok(out)
}

pub fn color_tree(g: &Hypergraph, tree: &Hypergraph, with_trace: bool) -> Result<TaskOutcome> {
    let t = RTree::new(tree.clone())?;
    match tree_free_coloring(g, &t) {
        Ok(res) => {
            let proper = res.coloring.is_proper(g);
            let within = res.coloring.palette_size <= res.trace.palette_bound;
            let trace = if with_trace {
                let x: serde_json::Map<String, Value> = res
                    .trace
                    .x_sets
                    .iter()
                    .map(|(v, xs)| (v.to_string(), json!(xs.as_slice())))
                    .collect();
                json!({
                    "rounds": res.trace.rounds,
                    "x": x,
                    "pairing_edges": res.trace.pairing_edges,
                    "elimination_order": res.trace.elimination_order,
                    "pairing_degeneracy": res.trace.pairing_degeneracy,
                })
            } else {
                Value::Null
            };
            let cert = json!({
                "schema_version": SCHEMA_VERSION,
                "task": "color-tree",
                "input": input_summary(g),
                "tree": input_summary(tree),
                "palette_bound": res.trace.palette_bound,
                "coloring": coloring_json(&res.coloring),
                "proper": proper,
                "within_bound": within,
                "trace": trace,
            });
            let mut out = TaskOutcome::new(cert, proper && within);
            out.r = Some(g.r());
            out.n = Some(g.n());
            out.edges = Some(g.edge_count());
            out.palette = Some(res.coloring.palette_size);
            Ok(out)
        }
        Err(TreeError::ContainsPattern(copy)) => {
            let cert = json!({
                "schema_version": SCHEMA_VERSION,
                "task": "color-tree",
                "input": input_summary(g),
                "tree": input_summary(tree),
                "contains_tree": {
                    "edge_indices": copy.edge_indices,
                    "vertices": copy.vertices.as_slice(),
                },
            });
            let mut out = TaskOutcome::new(cert, false);
            out.r = Some(g.r());
            out.n = Some(g.n());
            out.edges = Some(g.edge_count());
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

fn reason_str(reason: &InfeasibleReason) -> String {
    match reason {
        InfeasibleReason::UnbalancedMember(i) => format!("unbalanced_member:{i}"),
        InfeasibleReason::DensityTooLow => "density_too_low".into(),
        InfeasibleReason::PGreaterThanOne => "p_greater_than_one".into(),
        InfeasibleReason::TGreaterThanN => "t_greater_than_n".into(),
    }
}

pub fn plan_json(plan: &ConstructionPlan, label: &str) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "task": "plan",
        "family": label,
        "r": plan.r,
        "n": plan.n,
        "rho": format!("{}/{}", plan.profile.rho.numer(), plan.profile.rho.denom()),
        "s": plan.profile.s,
        "c1": finite(plan.c1),
        "c1_residual": finite(plan.c1_residual),
        "c2": finite(plan.c2),
        "p": finite(plan.p),
        "t": finite(plan.t),
        "e0": finite(plan.e0),
        "mu": plan.mu.iter().map(|&m| finite(m)).collect::<Vec<_>>(),
        "predicted_k": finite(plan.predicted_k),
        "family_constant": finite(plan.family_constant),
        "predicted_edge_bound": finite(plan.predicted_edge_bound),
        "sample_edge_bound": finite(plan.sample_edge_bound),
        "feasible": plan.feasible,
        "reasons": plan.reasons.iter().map(reason_str).collect::<Vec<_>>(),
    })
}

pub fn plan(family: &FamilySpec, n: usize, overrides: PlanOverrides) -> Result<TaskOutcome> {
    let plan = plan_construction(&family.members, n, overrides)?;
    let cert = plan_json(&plan, &family.label);
    let mut out = TaskOutcome::new(cert, true);
    out.r = Some(plan.r);
    out.n = Some(n);
    Ok(out)
}

pub fn construct_deletion(
    family: &FamilySpec,
    n: usize,
    overrides: PlanOverrides,
    seed: u64,
    verify: VerifyLevel,
) -> Result<TaskOutcome> {
    let plan = plan_construction(&family.members, n, overrides)?;
    if overrides.p.is_none() && !plan.feasible {
        bail!(
            "plan infeasible at n = {n} ({}); pass an explicit p (and t) to run anyway",
            plan.reasons.iter().map(reason_str).collect::<Vec<_>>().join(", ")
        );
    }
    let res = deletion_construct(&family.members, &plan, seed, verify)?;
    let v = &res.verification;
    let all_free = v.freeness.as_ref().map(|f| f.iter().all(|&b| b));
    let cert = json!({
        "schema_version": SCHEMA_VERSION,
        "task": "construct-deletion",
        "family": family.label,
        "seed": seed,
        "plan": plan_json(&plan, &family.label),
        "sample_edges": v.sample_edge_count,
        "removed_edges": res.removed_edges,
        "final_edges": v.edge_count,
        "edge_bound": finite(v.edge_bound),
        "packings": res.packings.iter().map(|p| json!({
            "copies": p.copies,
            "edges_removed": p.edges_removed,
            "maximal": p.maximal,
        })).collect::<Vec<_>>(),
        "freeness": v.freeness.clone(),
        "alpha": v.alpha.as_ref().map(|a| json!({
            "value": a.value,
            "exact": a.exact,
        })),
    });
    let mut out = TaskOutcome::new(cert, all_free.unwrap_or(true));
    out.r = Some(plan.r);
    out.n = Some(n);
    out.edges = Some(v.edge_count);
    out.alpha = v.alpha.as_ref().map(|a| a.value);
    out.free = all_free;
    out.graph_text = Some(res.final_graph.serialize());
    Ok(out)
}

pub fn construct_cliquefree(n: usize, r: usize, seed: u64) -> Result<TaskOutcome> {
    let res = clique_free_construct(n, r, seed)?;
    let clique = gen_clique(r, r + 1)?;
    let free = contains_copy(&res.graph, &clique)?.is_none();
    let within = (res.graph.edge_count() as f64) < res.edge_bound;
    let cert = json!({
        "schema_version": SCHEMA_VERSION,
        "task": "construct-cliquefree",
        "seed": seed,
        "r": r,
        "n": n,
        "edges": res.graph.edge_count(),
        "edge_bound": finite(res.edge_bound),
        "free": free,
        "within_bound": within,
        "constant_bound": finite(clique_constant_bound(r)?),
    });
    let mut out = TaskOutcome::new(cert, free && within);
    out.r = Some(r);
    out.n = Some(n);
    out.edges = Some(res.graph.edge_count());
    out.free = Some(free);
    out.graph_text = Some(res.graph.serialize());
    Ok(out)
}

pub enum ConstantsSpec {
    Rl(usize, usize),
    Fr(usize),
}

pub fn constants(spec: &ConstantsSpec) -> Result<TaskOutcome> {
    let cert = match spec {
        ConstantsSpec::Rl(r, l) => json!({
            "schema_version": SCHEMA_VERSION,
            "task": "constants",
            "family": format!("rl:{r}:{l}"),
            "c_closed": finite(rl_constant(*r, *l)?),
            "c_prior": finite(rl_constant_kmrt(*r, *l)?),
            "c_generic": finite(rl_constant_generic(*r, *l)?),
        }),
        ConstantsSpec::Fr(r) => json!({
            "schema_version": SCHEMA_VERSION,
            "task": "constants",
            "family": format!("fr:{r}"),
            "c_upper": finite(fan_constant(*r)?),
            "c_generic": finite(fan_constant_generic(*r)?),
            "b_lower": finite(fan_lower_constant(*r)),
        }),
    };
    Ok(TaskOutcome::new(cert, true))
}
