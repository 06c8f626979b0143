//! Closed-form evaluation of the specialized family constants, cross-checked
//! against the generic planner pipeline.

use super::plan::{compute_c2, factorial, generic_family_constant, solve_c1};
use super::{gen_fr, gen_rl_family, ConstructionError};
use crate::invariants::family_profile;

/// Falling factorial r(r−1)···(r−l+1).
pub fn falling(r: usize, l: usize) -> f64 {
    (0..l).map(|i| (r - i) as f64).product()
}

/// Edge-count constant for (r,l)-systems:
/// 2 (100 (r)_l^2 / l!)^{1/(l-1)} (10(r-1)/(l-1))^{l/(l-1)}.
pub fn rl_constant(r: usize, l: usize) -> Result<f64, ConstructionError> {
    if l < 2 || l >= r {
        return Err(ConstructionError::ParamRange(format!(
            "rl constant needs 2 <= l < r, got r = {r}, l = {l}"
        )));
    }
    let lf = l as f64;
    Ok(2.0 * (100.0 * falling(r, l).powi(2) / factorial(l)).powf(1.0 / (lf - 1.0))
        * (10.0 * (r as f64 - 1.0) / (lf - 1.0)).powf(lf / (lf - 1.0)))
}

/// Earlier (r,l)-system constant: 2 (2 r^{3l})^{l/(l-1)} / (r)_l.
pub fn rl_constant_kmrt(r: usize, l: usize) -> Result<f64, ConstructionError> {
    if l < 2 || l >= r {
        return Err(ConstructionError::ParamRange(format!(
            "rl constant needs 2 <= l < r, got r = {r}, l = {l}"
        )));
    }
    let lf = l as f64;
    Ok(2.0 * (2.0 * (r as f64).powi(3 * l as i32)).powf(lf / (lf - 1.0)) / falling(r, l))
}

/// Upper-bound constant for independent-neighborhood hosts:
/// (r! (50 r!(r+1)/(r-1)!^2)^{1/r})^{1/(r-3/2)} (10(r-1)/(r-3/2))^{(r-1/2)/(r-3/2)}.
pub fn fan_constant(r: usize) -> Result<f64, ConstructionError> {
    if r < 3 {
        return Err(ConstructionError::ParamRange(format!(
            "fan constant needs r >= 3, got {r}"
        )));
    }
    let rf = r as f64;
    let inner = factorial(r)
        * (50.0 * factorial(r) * (rf + 1.0) / factorial(r - 1).powi(2)).powf(1.0 / rf);
    Ok(inner.powf(1.0 / (rf - 1.5))
        * (10.0 * (rf - 1.0) / (rf - 1.5)).powf((rf - 0.5) / (rf - 1.5)))
}

/// Lower-bound constant 1/(40 r^2 2^r).
pub fn fan_lower_constant(r: usize) -> f64 {
    1.0 / (40.0 * (r * r) as f64 * (2f64).powi(r as i32))
}

/// Clique-construction constant bound 5^r r^r / (r-1)^{r-1}.
pub fn clique_constant_bound(r: usize) -> Result<f64, ConstructionError> {
    if r < 3 {
        return Err(ConstructionError::ParamRange(format!(
            "clique constant needs r >= 3, got {r}"
        )));
    }
    let rf = r as f64;
    Ok(5f64.powi(r as i32) * rf.powi(r as i32) / (rf - 1.0).powi(r as i32 - 1))
}

/// Generic pipeline value for the (r,l) overlap family: profile the generated
/// family, solve for c1, take c2, plug into the generic display.
pub fn rl_constant_generic(r: usize, l: usize) -> Result<f64, ConstructionError> {
    let profile = family_profile(&gen_rl_family(r, l)?)?;
    let sol = solve_c1(&profile);
    let c2 = compute_c2(&profile, sol.c1);
    let inv_rho = (r - l) as f64;
    Ok(generic_family_constant(r, inv_rho, sol.c1, c2))
}

/// Generic pipeline value for the fan family at density exponent 1/ρ = 1/2
/// (the exponent the printed specialization uses). The pipeline's own exact
/// density of the fan is r/(r−1); see `compute_rho`.
pub fn fan_constant_generic(r: usize) -> Result<f64, ConstructionError> {
    let profile = family_profile(&[gen_fr(r)?])?;
    let sol = solve_c1(&profile);
    let c2 = compute_c2(&profile, sol.c1);
    Ok(generic_family_constant(r, 0.5, sol.c1, c2))
}
