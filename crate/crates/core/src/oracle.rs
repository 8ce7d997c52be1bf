//! Independent checks of equilibria.
//!
//! Nothing here uses the region classifier or the indifference thresholds.
//! A profile is judged directly: compute every accident probability
//! consistent with it, form each group's posterior and expected costs, and
//! test the six best-response implications ("if some drivers in a group take
//! an action, that action is no costlier than the other one").

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{fixed_points_between, BehaviorProfile, Ctx, EquilibriumResult};
use crate::error::{Error, Result};
use crate::metrics::{costs_at, CostBreakdown};
use crate::model::{GameParams, ModelSpec, Probability};
use crate::numeric;

pub const MIN_LATTICE: usize = 11;

/// Profiles may exceed their bounds by this much before being rejected.
const BOUNDS_SLACK: f64 = 1e-12;

/// Widening applied to the pruning interval of the brute-force search.
const PRUNE_MARGIN: f64 = 1e-9;

/// A best-response condition. Each one applies only while its group has
/// drivers taking the named action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    /// Some non-V2V drivers are careful: careful must cost no more.
    NonV2vCareful,
    /// Some non-V2V drivers are reckless: reckless must cost no more.
    NonV2vReckless,
    UnsignaledCareful,
    UnsignaledReckless,
    SignaledCareful,
    SignaledReckless,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::NonV2vCareful,
        Condition::NonV2vReckless,
        Condition::UnsignaledCareful,
        Condition::UnsignaledReckless,
        Condition::SignaledCareful,
        Condition::SignaledReckless,
    ];

    /// Short identifier used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Condition::NonV2vCareful => "n-careful",
            Condition::NonV2vReckless => "n-reckless",
            Condition::UnsignaledCareful => "vu-careful",
            Condition::UnsignaledReckless => "vu-reckless",
            Condition::SignaledCareful => "vs-careful",
            Condition::SignaledReckless => "vs-reckless",
        }
    }

    fn is_careful(self) -> bool {
        matches!(
            self,
            Condition::NonV2vCareful | Condition::UnsignaledCareful | Condition::SignaledCareful
        )
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    /// Whether the group has drivers taking the action.
    pub triggered: bool,
    /// Cost of the action in use minus cost of the alternative; `None` when
    /// the group never exists (no warnings are displayed).
    pub gap: Option<f64>,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub violated_conditions: Vec<Condition>,
    pub consistency_residual: f64,
    /// Accident probability the verdict was computed at.
    pub p: Probability,
    pub q: Probability,
    pub details: Vec<ConditionCheck>,
}

/// A profile together with its consistent accident and warning probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPoint {
    pub profile: BehaviorProfile,
    pub p: Probability,
    pub q: Probability,
}

impl EquilibriumPoint {
    /// Effective reckless mass `x_n + (1 - Q) x_vu + Q x_vs`.
    pub fn aggregate(&self) -> f64 {
        self.profile.aggregate(self.q.get())
    }
}

impl From<&EquilibriumResult> for EquilibriumPoint {
    fn from(eq: &EquilibriumResult) -> Self {
        EquilibriumPoint {
            profile: eq.profile,
            p: eq.p,
            q: eq.q,
        }
    }
}

/// Which conditions a profile triggers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Triggers([bool; 6]);

impl Triggers {
    /// `slack` is relative to each group's size: a mass within
    /// `slack * size` of a bound counts as sitting on it.
    fn of(profile: &BehaviorProfile, y: f64, slack: f64) -> Self {
        let (n, v) = (slack * (1.0 - y), slack * y);
        Triggers([
            profile.x_n < 1.0 - y - n,
            profile.x_n > n,
            profile.x_vu < y - v,
            profile.x_vu > v,
            profile.x_vs < y - v,
            profile.x_vs > v,
        ])
    }
}

/// `(cost of the action, cost of the alternative)` for a condition, or `None`
/// when the signaled group cannot occur.
fn cost_pair(condition: Condition, j: &CostBreakdown) -> Option<(f64, f64)> {
    match condition {
        Condition::NonV2vCareful => Some((j.j_n_c, j.j_n_r)),
        Condition::NonV2vReckless => Some((j.j_n_r, j.j_n_c)),
        Condition::UnsignaledCareful => Some((j.j_vu_c, j.j_vu_r)),
        Condition::UnsignaledReckless => Some((j.j_vu_r, j.j_vu_c)),
        Condition::SignaledCareful => Some((j.j_vs_c?, j.j_vs_r?)),
        Condition::SignaledReckless => Some((j.j_vs_r?, j.j_vs_c?)),
    }
}

fn condition_holds(condition: Condition, j: &CostBreakdown, tol: f64) -> bool {
    cost_pair(condition, j).is_none_or(|(used, other)| used - other <= tol)
}

fn report_at(ctx: &Ctx<'_>, profile: &BehaviorProfile, p: f64, tol: f64) -> VerificationReport {
    let q = ctx.q(p);
    let j = costs_at(ctx, p);
    let triggers = Triggers::of(profile, ctx.y, tol);
    let details: Vec<ConditionCheck> = Condition::ALL
        .iter()
        .zip(triggers.0)
        .map(|(&condition, triggered)| {
            let gap = cost_pair(condition, &j).map(|(used, other)| used - other);
            ConditionCheck {
                condition,
                triggered,
                gap,
                satisfied: !triggered || gap.is_none_or(|g| g <= tol),
            }
        })
        .collect();
    let violated_conditions: Vec<Condition> = details
        .iter()
        .filter(|c| !c.satisfied)
        .map(|c| c.condition)
        .collect();
    let consistency_residual = (p - ctx.consistency_map(profile, p)).abs();
    VerificationReport {
        passed: violated_conditions.is_empty() && consistency_residual <= tol,
        violated_conditions,
        consistency_residual,
        p: Probability::saturating(p),
        q: Probability::saturating(q),
        details,
    }
}

fn check_profile(profile: &BehaviorProfile, y: f64) -> Result<()> {
    let ok = |x: f64, hi: f64| x.is_finite() && x >= -BOUNDS_SLACK && x <= hi + BOUNDS_SLACK;
    if ok(profile.x_n, 1.0 - y) && ok(profile.x_vu, y) && ok(profile.x_vs, y) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("profile {profile} is out of bounds for y = {y}")))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")))
    }
}

/// Checks `profile` against the equilibrium conditions with slack `tol`.
///
/// The slack applies to the cost comparisons, to the mass triggers (a mass
/// within `tol` times its group size of a bound counts as sitting on it), and
/// to the consistency residual. When the profile admits several consistent accident
/// probabilities they must all yield the same verdict.
pub fn verify_equilibrium(
    model: &ModelSpec,
    game: &GameParams,
    profile: &BehaviorProfile,
    tol: f64,
) -> Result<VerificationReport> {
    check_tol(tol)?;
    let ctx = Ctx::new(model, game);
    check_profile(profile, ctx.y)?;
    let roots = fixed_points_between(&ctx, profile, model.p0(), model.p1());
    let mut reports = roots.iter().map(|&p| report_at(&ctx, profile, p, tol));
    let first = reports
        .next()
        .ok_or_else(|| Error::Internal(format!("no consistent accident probability for {profile}")))?;
    if reports.any(|r| r.passed != first.passed) {
        return Err(Error::Ambiguous { roots: roots.len() });
    }
    Ok(first)
}

#[inline]
fn lattice(k: usize, n: usize, hi: f64) -> f64 {
    if k + 1 == n {
        hi
    } else {
        hi * k as f64 / (n - 1) as f64
    }
}

/// Range of accident probabilities on which a condition can hold, found by
/// bisection on the condition itself.
fn admissible_range(ctx: &Ctx<'_>, condition: Condition, tol: f64, lo: f64, hi: f64) -> (f64, f64) {
    let holds = |p: f64| condition_holds(condition, &costs_at(ctx, p), tol);
    let (at_lo, at_hi) = (holds(lo), holds(hi));
    match (at_lo, at_hi) {
        (true, true) => (lo, hi),
        (false, false) => (f64::INFINITY, f64::NEG_INFINITY),
        _ => {
            let edge = numeric::bisect_predicate(holds, lo, hi);
            if condition.is_careful() {
                // careful pays off once the accident belief is high enough
                (edge - PRUNE_MARGIN, hi)
            } else {
                (lo, edge + PRUNE_MARGIN)
            }
        }
    }
}

/// Enumerates lattice profiles that pass [`verify_equilibrium`]-style checks
/// at slack `tol`.
///
/// The lattice has `grid_n` points per axis over
/// `[0, 1 - y] x [0, y] x [0, y]`; an axis of zero width has one point. A profile with several consistent accident
/// probabilities contributes one entry per probability that passes. The
/// output order is deterministic (lexicographic in the lattice indices, then
/// ascending `P`).
pub fn brute_force_equilibria(
    model: &ModelSpec,
    game: &GameParams,
    grid_n: usize,
    tol: f64,
) -> Result<Vec<EquilibriumPoint>> {
    if grid_n < MIN_LATTICE {
        return Err(Error::InvalidArgument(format!(
            "lattice needs at least {MIN_LATTICE} points per axis, got {grid_n}"
        )));
    }
    check_tol(tol)?;
    let ctx = Ctx::new(model, game);
    let (p0, p1) = (model.p0(), model.p1());
    let y = ctx.y;

    // Every condition holds on an interval of P (costs are monotone in each
    // posterior and posteriors are monotone in P); intersecting the triggered
    // ones bounds the search for each profile.
    let ranges: Vec<(f64, f64)> = Condition::ALL
        .iter()
        .map(|&c| admissible_range(&ctx, c, tol, p0, p1))
        .collect();
    let window = |triggers: Triggers| -> (f64, f64) {
        triggers
            .0
            .iter()
            .zip(&ranges)
            .filter(|(&on, _)| on)
            .fold((p0, p1), |(lo, hi), (_, &(a, b))| (lo.max(a), hi.min(b)))
    };

    // a group of size zero contributes a single lattice coordinate
    let axis = |size: f64| if size > 0.0 { grid_n } else { 1 };
    let (n_axis, v_axis) = (axis(1.0 - y), axis(y));

    let hits: Vec<Vec<EquilibriumPoint>> = (0..n_axis)
        .into_par_iter()
        .map(|i| {
            let x_n = lattice(i, n_axis, 1.0 - y);
            let mut found = Vec::new();
            for j in 0..v_axis {
                let x_vu = lattice(j, v_axis, y);
                for k in 0..v_axis {
                    let profile = BehaviorProfile::new(x_n, x_vu, lattice(k, v_axis, y));
                    let (lo, hi) = window(Triggers::of(&profile, y, tol));
                    if lo > hi {
                        continue;
                    }
                    for p in fixed_points_between(&ctx, &profile, lo, hi) {
                        if report_at(&ctx, &profile, p, tol).passed {
                            found.push(EquilibriumPoint {
                                profile,
                                p: Probability::saturating(p),
                                q: Probability::saturating(ctx.q(p)),
                            });
                        }
                    }
                }
            }
            found
        })
        .collect();
    Ok(hits.into_iter().flatten().collect())
}

/// True iff both points have the same effective reckless mass and accident
/// probability, each within `tol`.
pub fn essential_equivalence(a: &EquilibriumPoint, b: &EquilibriumPoint, tol: f64) -> bool {
    (a.aggregate() - b.aggregate()).abs() <= tol && (a.p.get() - b.p.get()).abs() <= tol
}
