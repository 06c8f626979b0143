//! Constants planner for the deletion construction.
//!
//! All real-valued bookkeeping is f64; logs are natural. Infeasibility at
//! desk scale (p > 1 or t > n) is flagged, never clamped; experiments pass
//! explicit overrides instead.

use super::ConstructionError;
use crate::hypergraph::{binom_real, binom_u128, Hypergraph};
use crate::invariants::{family_profile, FamilyProfile};

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

#[derive(Debug, Clone, PartialEq)]
pub struct C1Solution {
    pub c1: f64,
    pub residual: f64,
}

/// Unique positive root of Σ_{i<=s} e_i x^{e_i−1}/α_i = 1/(50 r!); the left
/// side is strictly increasing from 0, so bisection converges.
pub fn solve_c1(profile: &FamilyProfile) -> C1Solution {
    let target = 1.0 / (50.0 * factorial(profile.r));
    let f = |x: f64| -> f64 {
        profile.members[..profile.s]
            .iter()
            .map(|m| m.edges as f64 * x.powi(m.edges as i32 - 1) / m.alpha as f64)
            .sum()
    };
    let mut hi = 1.0f64;
    while f(hi) < target {
        hi *= 2.0;
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c1 = 0.5 * (lo + hi);
    C1Solution {
        c1,
        residual: (f(c1) - target) / target,
    }
}

/// c2 = max over the densest members of (α_i / (5 e_i c1^{e_i−1} r!))^{1/(r−1)}.
pub fn compute_c2(profile: &FamilyProfile, c1: f64) -> f64 {
    profile.members[..profile.s]
        .iter()
        .map(|m| {
            (m.alpha as f64 / (5.0 * m.edges as f64 * c1.powi(m.edges as i32 - 1) * factorial(profile.r)))
                .powf(1.0 / (profile.r as f64 - 1.0))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The generic final constant: 2 (r!/c1)^{1/(r−1−1/ρ)} c2^{(r−1)(r−1/ρ)/(r−1−1/ρ)}
/// ((r−1)/(r−1−1/ρ))^{(r−1/ρ)/(r−1−1/ρ)}.
pub fn generic_family_constant(r: usize, inv_rho: f64, c1: f64, c2: f64) -> f64 {
    let r = r as f64;
    let den = r - 1.0 - inv_rho;
    2.0 * (factorial(r as usize) / c1).powf(1.0 / den)
        * c2.powf((r - 1.0) * (r - inv_rho) / den)
        * ((r - 1.0) / den).powf((r - inv_rho) / den)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfeasibleReason {
    UnbalancedMember(usize),
    DensityTooLow,
    PGreaterThanOne,
    TGreaterThanN,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PlanOverrides {
    pub p: Option<f64>,
    pub t: Option<f64>,
}

/// Every constant of the deletion construction for a family and n, plus
/// feasibility flags. Overrides bypass only the formulas they replace.
#[derive(Debug, Clone)]
pub struct ConstructionPlan {
    pub r: usize,
    pub n: usize,
    pub profile: FamilyProfile,
    pub c1: f64,
    pub c1_residual: f64,
    pub c2: f64,
    pub p: f64,
    pub t: f64,
    pub e0: f64,
    pub mu: Vec<f64>,
    pub predicted_k: f64,
    pub family_constant: f64,
    pub predicted_edge_bound: f64,
    /// 2 c1 n^{r−1/ρ} / r!, the target on |E(G_p)|
    pub sample_edge_bound: f64,
    pub feasible: bool,
    pub reasons: Vec<InfeasibleReason>,
    pub overrides: PlanOverrides,
}

pub fn plan_construction(
    family: &[Hypergraph],
    n: usize,
    overrides: PlanOverrides,
) -> Result<ConstructionPlan, ConstructionError> {
    let profile = family_profile(family)?;
    let r = profile.r;
    let mut reasons = Vec::new();
    for (i, m) in profile.members.iter().enumerate() {
        if !m.balanced {
            reasons.push(InfeasibleReason::UnbalancedMember(profile.order[i]));
        }
    }
    if !profile.rho_above_threshold {
        reasons.push(InfeasibleReason::DensityTooLow);
    }
    let inv_rho = 1.0 / (*profile.rho.numer() as f64 / *profile.rho.denom() as f64);
    let sol = solve_c1(&profile);
    let c1 = sol.c1;
    let c2 = compute_c2(&profile, c1);
    let nf = n as f64;
    let p = overrides.p.unwrap_or(c1 * nf.powf(-inv_rho));
    let t = overrides
        .t
        .unwrap_or_else(|| c2 * (factorial(r) * nf.ln() / p).powf(1.0 / (r as f64 - 1.0)));
    if p > 1.0 {
        reasons.push(InfeasibleReason::PGreaterThanOne);
    }
    if t.ceil() > nf {
        reasons.push(InfeasibleReason::TGreaterThanN);
    }
    let e0 = binom_real(t, r) * p / 2.0;
    let mu: Vec<f64> = profile
        .members
        .iter()
        .map(|m| {
            binom_real(t, r)
                * binom_u128(n, m.vertices - r) as f64
                * m.edges as f64
                * p.powi(m.edges as i32)
                * factorial(r)
                * factorial(m.vertices - r)
                / m.alpha as f64
        })
        .collect();
    let predicted_k = nf / t;
    let family_constant = generic_family_constant(r, inv_rho, c1, c2);
    let exp = (r as f64 - inv_rho) / (r as f64 - 1.0 - inv_rho);
    let predicted_edge_bound = if predicted_k > 1.0 {
        family_constant * (predicted_k.powi(r as i32 - 1) * predicted_k.ln()).powf(exp)
    } else {
        f64::NAN
    };
    let sample_edge_bound = 2.0 * c1 * nf.powf(r as f64 - inv_rho) / factorial(r);
    Ok(ConstructionPlan {
        r,
        n,
        profile,
        c1,
        c1_residual: sol.residual,
        c2,
        p,
        t,
        e0,
        mu,
        predicted_k,
        family_constant,
        predicted_edge_bound,
        sample_edge_bound,
        feasible: reasons.is_empty(),
        reasons,
        overrides,
    })
}
