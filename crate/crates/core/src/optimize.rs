//! Choosing the display probability `beta`.
//!
//! Equilibrium accident probability is unimodal in `beta` (weakly rising up to
//! a breakpoint, weakly falling after it), so its minimum sits at an
//! endpoint. Social cost has no such structure inside the interior-fixed-point
//! regions and is minimized numerically.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{classify, solve, BehaviorProfile, Ctx, Region};
use crate::error::{Error, Result};
use crate::metrics::social_cost_of;
use crate::model::{GameParams, ModelSpec, Probability};
use crate::numeric;

/// Default number of grid points for [`optimize_beta_social`].
pub const DEFAULT_SOCIAL_GRID: usize = 201;
pub const MIN_SOCIAL_GRID: usize = 11;
/// Golden-section tolerance in `beta`.
pub const SOCIAL_XTOL: f64 = 1e-6;
/// Subintervals scanned for sign changes of the breakpoint residual.
pub const BETA_BAR_SCAN: usize = 1024;

/// Improvements smaller than this do not displace a smaller `beta`.
const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    #[serde(rename = "P")]
    AccidentProbability,
    #[serde(rename = "S")]
    SocialCost,
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Objective::AccidentProbability => "accident_probability",
            Objective::SocialCost => "social_cost",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub beta: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationOutcome {
    pub best_beta: Probability,
    pub best_value: f64,
    pub objective: Objective,
    /// Every evaluated candidate, in evaluation order.
    pub evidence: Vec<Candidate>,
}

/// One row of a `beta` sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub beta: Probability,
    pub region: Region,
    pub p: Probability,
    pub s: f64,
    pub profile: BehaviorProfile,
    pub q: Probability,
}

/// Breakpoint of the accident-probability curve in `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BetaBar {
    /// `P` weakly increases for `beta <= beta_bar` and weakly decreases after.
    Root {
        beta: Probability,
        /// The residual changed sign more than once on the scan grid; `beta`
        /// is the smallest root.
        multiple_sign_changes: bool,
    },
    /// `P` weakly increases on all of `[0, 1]`.
    AllIncreasing,
    /// `P` weakly decreases on all of `[0, 1]`.
    AllDecreasing,
}

impl BetaBar {
    /// True when `beta` lies on the weakly increasing branch.
    pub fn is_increasing_at(&self, beta: f64) -> bool {
        match *self {
            BetaBar::Root { beta: bar, .. } => beta <= bar.get(),
            BetaBar::AllIncreasing => true,
            BetaBar::AllDecreasing => false,
        }
    }
}

fn game_at(beta: f64, y: f64, r: f64) -> Result<GameParams> {
    GameParams::new(beta, y, r)
}

fn measure(model: &ModelSpec, game: &GameParams) -> Result<SweepRecord> {
    let ctx = Ctx::new(model, game);
    let eq = solve(&ctx)?;
    let s = social_cost_of(&ctx, &eq.profile, eq.p.get(), eq.q.get());
    Ok(SweepRecord {
        beta: game.beta,
        region: eq.region,
        p: eq.p,
        s,
        profile: eq.profile,
        q: eq.q,
    })
}

fn social_cost_at(model: &ModelSpec, y: f64, r: f64, beta: f64) -> Result<f64> {
    Ok(measure(model, &game_at(beta, y, r)?)?.s)
}

/// Minimizes equilibrium accident probability over `beta`.
///
/// Only the endpoints are evaluated; ties go to `beta = 0`.
pub fn optimize_beta_accident(model: &ModelSpec, y: f64, r: f64) -> Result<OptimizationOutcome> {
    let mut evidence = Vec::with_capacity(2);
    for beta in [0.0, 1.0] {
        let eq = solve(&Ctx::new(model, &game_at(beta, y, r)?))?;
        evidence.push(Candidate { beta, value: eq.p.get() });
    }
    let best = if evidence[1].value < evidence[0].value { evidence[1] } else { evidence[0] };
    Ok(OptimizationOutcome {
        best_beta: Probability::saturating(best.beta),
        best_value: best.value,
        objective: Objective::AccidentProbability,
        evidence,
    })
}

/// Residual whose sign separates the rising branch (`<= 0`) from the falling
/// one (`> 0`): `P_vu(beta) - p(mass with only unsignaled drivers reckless)`.
fn breakpoint_residual(model: &ModelSpec, y: f64, r: f64, beta: f64) -> Result<f64> {
    let game = game_at(beta, y, r)?;
    let ctx = Ctx::new(model, &game);
    let p_vu = ctx.p_vu();
    Ok(p_vu - model.p(ctx.unsignaled_only_mass(p_vu)))
}

pub fn beta_bar(model: &ModelSpec, y: f64, r: f64) -> Result<BetaBar> {
    let h = |beta: f64| breakpoint_residual(model, y, r, beta);
    if h(1.0)? <= 0.0 {
        return Ok(BetaBar::AllIncreasing);
    }
    if h(0.0)? > 0.0 {
        return Ok(BetaBar::AllDecreasing);
    }

    let values: Vec<f64> = (0..=BETA_BAR_SCAN)
        .map(|k| h(k as f64 / BETA_BAR_SCAN as f64))
        .collect::<Result<_>>()?;
    let crossings: Vec<usize> = (0..BETA_BAR_SCAN)
        .filter(|&k| (values[k] <= 0.0) != (values[k + 1] <= 0.0))
        .collect();
    let first = *crossings
        .first()
        .ok_or_else(|| Error::Internal("breakpoint residual changes sign but scan missed it".into()))?;
    let a = first as f64 / BETA_BAR_SCAN as f64;
    let b = (first + 1) as f64 / BETA_BAR_SCAN as f64;
    // h is a composition of total functions on [0, 1]; errors cannot occur
    // past the scan above.
    let root = numeric::bisect_predicate(|beta| h(beta).is_ok_and(|v| v > 0.0), a, b);
    Ok(BetaBar::Root {
        beta: Probability::saturating(root),
        multiple_sign_changes: crossings.len() > 1,
    })
}

/// Minimizes equilibrium social cost over `beta` by a uniform grid followed
/// by golden-section refinement around the best grid point.
pub fn optimize_beta_social(model: &ModelSpec, y: f64, r: f64, grid_size: usize) -> Result<OptimizationOutcome> {
    if grid_size < MIN_SOCIAL_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid_size must be at least {MIN_SOCIAL_GRID}, got {grid_size}"
        )));
    }
    game_at(0.0, y, r)?;
    let step = 1.0 / (grid_size - 1) as f64;
    let betas: Vec<f64> = (0..grid_size).map(|k| grid_beta(k, grid_size)).collect();
    let values: Vec<f64> = betas
        .par_iter()
        .map(|&beta| social_cost_at(model, y, r, beta))
        .collect::<Result<_>>()?;
    let mut evidence: Vec<Candidate> = betas
        .iter()
        .zip(&values)
        .map(|(&beta, &value)| Candidate { beta, value })
        .collect();

    let mut best = 0;
    for k in 1..grid_size {
        if values[k] < values[best] - TIE_EPS {
            best = k;
        }
    }
    let mut winner = evidence[best];

    let lo = (betas[best] - step).max(0.0);
    let hi = (betas[best] + step).min(1.0);
    // Errors only arise for invalid (y, r), which the grid already checked.
    let objective = |beta: f64| social_cost_at(model, y, r, beta).unwrap_or(f64::INFINITY);
    let (refined_beta, refined_value) = numeric::golden_section(objective, lo, hi, SOCIAL_XTOL);
    let refined = Candidate {
        beta: refined_beta,
        value: refined_value,
    };
    evidence.push(refined);
    if refined.value < winner.value - TIE_EPS {
        winner = refined;
    }

    Ok(OptimizationOutcome {
        best_beta: Probability::saturating(winner.beta),
        best_value: winner.value,
        objective: Objective::SocialCost,
        evidence,
    })
}

#[inline]
fn grid_beta(k: usize, n: usize) -> f64 {
    if k + 1 == n {
        1.0
    } else {
        k as f64 / (n - 1) as f64
    }
}

/// Solves and measures `n` evenly spaced values of `beta` in `[0, 1]`.
pub fn sweep_beta(model: &ModelSpec, y: f64, r: f64, n: usize) -> Result<Vec<SweepRecord>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sweep needs n >= 2, got {n}")));
    }
    (0..n)
        .into_par_iter()
        .map(|k| measure(model, &game_at(grid_beta(k, n), y, r)?))
        .collect()
}

/// Region of every `(r, y)` cell at fixed `beta`. Rows follow `r_grid`,
/// columns follow `y_grid`.
pub fn region_map(model: &ModelSpec, beta: f64, y_grid: &[f64], r_grid: &[f64]) -> Result<Vec<Vec<Region>>> {
    if y_grid.is_empty() || r_grid.is_empty() {
        return Err(Error::InvalidArgument("region map grids must be non-empty".into()));
    }
    r_grid
        .par_iter()
        .map(|&r| {
            y_grid
                .iter()
                .map(|&y| classify(&Ctx::new(model, &game_at(beta, y, r)?)))
                .collect()
        })
        .collect()
}

/// True iff region indices never decrease along the ascending `betas`.
pub fn check_region_ordering(model: &ModelSpec, y: f64, r: f64, betas: &[f64]) -> Result<bool> {
    if betas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("betas must be sorted ascending".into()));
    }
    let regions: Vec<Region> = betas
        .iter()
        .map(|&beta| classify(&Ctx::new(model, &game_at(beta, y, r)?)))
        .collect::<Result<_>>()?;
    Ok(regions.windows(2).all(|w| w[0] <= w[1]))
}
