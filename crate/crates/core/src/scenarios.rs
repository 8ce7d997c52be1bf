//! Published reference scenarios and their expected values.
//!
//! Every check compares one computed number against an expected one with an
//! absolute tolerance. Regions are compared by index and yes/no facts as
//! 1 or 0, both with zero tolerance.

use serde::Serialize;

use crate::equilibrium::{Ctx, Region};
use crate::error::Result;
use crate::metrics::social_cost_of;
use crate::model::{CurveSpec, GameParams, ModelSpec};
use crate::optimize::{
    beta_bar, optimize_beta_accident, optimize_beta_social, sweep_beta, BetaBar, DEFAULT_SOCIAL_GRID,
};

/// Slack for weak monotonicity along sweeps.
pub const MONOTONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub scenario: &'static str,
    pub quantity: String,
    pub expected: f64,
    pub computed: f64,
    pub tol: f64,
}

impl Check {
    fn new(scenario: &'static str, quantity: impl Into<String>, expected: f64, computed: f64, tol: f64) -> Self {
        Check {
            scenario,
            quantity: quantity.into(),
            expected,
            computed,
            tol,
        }
    }

    fn region(scenario: &'static str, quantity: impl Into<String>, expected: Region, computed: Region) -> Self {
        Check::new(scenario, quantity, expected.index().into(), computed.index().into(), 0.0)
    }

    fn fact(scenario: &'static str, quantity: impl Into<String>, holds: bool) -> Self {
        Check::new(scenario, quantity, 1.0, if holds { 1.0 } else { 0.0 }, 0.0)
    }

    pub fn abs_diff(&self) -> f64 {
        (self.computed - self.expected).abs()
    }

    pub fn passed(&self) -> bool {
        self.abs_diff() <= self.tol
    }
}

pub fn linear_model(p: CurveSpec, t: f64, f: f64) -> ModelSpec {
    ModelSpec::new(p, CurveSpec::linear(t), CurveSpec::linear(f))
}

/// Two-point accident probability reversal: `p = 0.8d + 0.1`, `t = 0.8y`,
/// `f = 0.1y`, `y = 0.9`, `r = 20`.
pub fn endpoint_reversal() -> (ModelSpec, f64, f64) {
    (linear_model(CurveSpec::affine(0.8, 0.1), 0.8, 0.1), 0.9, 20.0)
}

/// Quartic-root accident curve with low penetration.
pub fn quartic_low_penetration() -> (ModelSpec, f64, f64) {
    (linear_model(CurveSpec::power(0.25), 0.9, 0.1), 0.066, 1.001)
}

/// Flat accident curve with frequent false alarms.
pub fn flat_false_alarm() -> (ModelSpec, f64, f64) {
    (linear_model(CurveSpec::affine(0.03, 0.0), 0.95, 0.5), 0.4, 20.0)
}

/// No false positives, affine accident curve.
pub fn exact_warnings_affine() -> (ModelSpec, f64, f64) {
    (linear_model(CurveSpec::affine(0.3, 0.1), 0.9, 0.0), 0.9, 3.0)
}

/// No false positives, quartic-root accident curve.
pub fn exact_warnings_quartic() -> (ModelSpec, f64, f64) {
    (linear_model(CurveSpec::power(0.25), 0.9, 0.0), 0.07, 1.001)
}

/// Accident probability that first rises then falls in `beta`.
pub fn rise_then_fall() -> (ModelSpec, f64, f64) {
    (linear_model(CurveSpec::affine(0.3, 0.1), 0.8, 0.1), 0.9, 3.0)
}

/// Accident and social-cost optima at opposite endpoints.
pub fn opposed_optima() -> (ModelSpec, f64, f64) {
    (linear_model(CurveSpec::affine(0.8, 0.1), 0.9, 0.1), 0.8, 5.0)
}

struct Point {
    region: Region,
    p: f64,
    s: f64,
}

fn point(model: &ModelSpec, beta: f64, y: f64, r: f64) -> Result<Point> {
    let game = GameParams::new(beta, y, r)?;
    let ctx = Ctx::new(model, &game);
    let eq = crate::equilibrium::solve(&ctx)?;
    Ok(Point {
        region: eq.region,
        p: eq.p.get(),
        s: social_cost_of(&ctx, &eq.profile, eq.p.get(), eq.q.get()),
    })
}

/// True when `values` weakly increase (`increasing`) or weakly decrease
/// within [`MONOTONE_TOL`].
pub fn weakly_monotone(values: &[f64], increasing: bool) -> bool {
    values.windows(2).all(|w| {
        if increasing {
            w[1] >= w[0] - MONOTONE_TOL
        } else {
            w[1] <= w[0] + MONOTONE_TOL
        }
    })
}

fn endpoint_reversal_checks() -> Result<Vec<Check>> {
    const NAME: &str = "endpoint reversal";
    let (m, y, r) = endpoint_reversal();
    let zero = point(&m, 0.0, y, r)?;
    let one = point(&m, 1.0, y, r)?;
    let best = optimize_beta_accident(&m, y, r)?;
    Ok(vec![
        Check::new(NAME, "P(beta=0)", 0.1, zero.p, 1e-12),
        Check::new(NAME, "P(beta=1)", 0.1398, one.p, 1e-4),
        Check::new(NAME, "argmin_beta P", 0.0, best.best_beta.get(), 0.0),
    ])
}

fn quartic_checks() -> Result<Vec<Check>> {
    const NAME: &str = "quartic, low penetration";
    let (m, y, r) = quartic_low_penetration();
    let mid = point(&m, 0.4204, y, r)?;
    let one = point(&m, 1.0, y, r)?;
    Ok(vec![
        Check::region(NAME, "region(beta=0.4204)", Region::E3, mid.region),
        Check::region(NAME, "region(beta=1)", Region::E3, one.region),
        Check::new(NAME, "S(beta=0.4204)", 0.4949, mid.s, 1e-3),
        Check::new(NAME, "S(beta=1)", 0.4960, one.s, 1e-3),
        Check::fact(NAME, "S(beta=1) > S(beta=0.4204)", one.s > mid.s),
    ])
}

fn flat_false_alarm_checks() -> Result<Vec<Check>> {
    const NAME: &str = "flat curve, false alarms";
    let (m, y, r) = flat_false_alarm();
    let zero = point(&m, 0.0, y, r)?;
    let one = point(&m, 1.0, y, r)?;
    Ok(vec![
        Check::region(NAME, "region(beta=0)", Region::E5, zero.region),
        Check::region(NAME, "region(beta=1)", Region::E5, one.region),
        Check::new(NAME, "S(beta=0)", 0.6, zero.s, 1e-3),
        Check::new(NAME, "S(beta=1)", 0.6257, one.s, 1e-3),
        Check::fact(NAME, "S(beta=1) > S(beta=0)", one.s > zero.s),
    ])
}

fn exact_warning_checks() -> Result<Vec<Check>> {
    const AFFINE: &str = "no false positives, affine";
    const QUARTIC: &str = "no false positives, quartic";
    let (m, y, r) = exact_warnings_affine();
    let zero = point(&m, 0.0, y, r)?;
    let mid = point(&m, 0.4004, y, r)?;
    let (mq, yq, rq) = exact_warnings_quartic();
    let high = point(&mq, 0.9, yq, rq)?;
    let one = point(&mq, 1.0, yq, rq)?;
    Ok(vec![
        Check::new(AFFINE, "P(beta=0)", 0.25, zero.p, 1e-3),
        Check::new(AFFINE, "P(beta=0.4004)", 0.3304, mid.p, 1e-3),
        Check::region(AFFINE, "region(beta=0)", Region::E2, zero.region),
        Check::region(AFFINE, "region(beta=0.4004)", Region::E2, mid.region),
        Check::new(QUARTIC, "S(beta=0.9)", 0.4889, high.s, 2e-4),
        Check::new(QUARTIC, "S(beta=1)", 0.4890, one.s, 2e-4),
        Check::fact(QUARTIC, "S(beta=1) > S(beta=0.9)", one.s > high.s),
    ])
}

fn rise_then_fall_checks() -> Result<Vec<Check>> {
    const NAME: &str = "rise then fall";
    let (m, y, r) = rise_then_fall();
    let sweep = sweep_beta(&m, y, r, 101)?;
    let p: Vec<f64> = sweep.iter().map(|rec| rec.p.get()).collect();
    let (p0, p1) = (p[0], p[p.len() - 1]);
    let bar = beta_bar(&m, y, r)?;
    let bar_value = match bar {
        BetaBar::Root { beta, .. } => beta.get(),
        BetaBar::AllIncreasing => 1.0,
        BetaBar::AllDecreasing => 0.0,
    };
    let split = sweep.partition_point(|rec| bar.is_increasing_at(rec.beta.get()));
    // the two branches share the sweep point nearest the breakpoint
    let rising = &p[..split.min(p.len())];
    let falling = &p[split.saturating_sub(1)..];
    Ok(vec![
        Check::new(NAME, "P(beta=0)", 0.25, p0, 1e-9),
        Check::new(NAME, "P(beta=1)", 0.2954, p1, 1e-3),
        Check::fact(NAME, "P(beta=1) > P(beta=0)", p1 > p0),
        Check::new(NAME, "breakpoint", 0.5, bar_value, 0.05),
        Check::fact(NAME, "P rises before the breakpoint", weakly_monotone(rising, true)),
        Check::fact(NAME, "P falls after the breakpoint", weakly_monotone(falling, false)),
    ])
}

fn opposed_optima_checks() -> Result<Vec<Check>> {
    const NAME: &str = "opposed optima";
    let (m, y, r) = opposed_optima();
    let by_p = optimize_beta_accident(&m, y, r)?;
    let by_s = optimize_beta_social(&m, y, r, DEFAULT_SOCIAL_GRID)?;
    Ok(vec![
        Check::new(NAME, "argmin_beta P", 0.0, by_p.best_beta.get(), 0.0),
        Check::new(NAME, "argmin_beta S", 1.0, by_s.best_beta.get(), 0.0),
    ])
}

/// All reference checks, grouped by scenario in a fixed order.
pub fn reference_checks() -> Result<Vec<Check>> {
    let groups = [
        endpoint_reversal_checks()?,
        quartic_checks()?,
        flat_false_alarm_checks()?,
        exact_warning_checks()?,
        rise_then_fall_checks()?,
        opposed_optima_checks()?,
    ];
    Ok(groups.into_iter().flatten().collect())
}
