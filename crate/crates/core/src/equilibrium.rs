//! Signaling equilibrium of the hazard-warning game.
//!
//! Drivers split into three groups: non-V2V drivers, V2V drivers that did not
//! see a warning ("unsignaled"), and V2V drivers that did ("signaled"). Each
//! group's reckless mass feeds back into the accident probability `P`, which
//! in turn sets the warning probability `Q` and each group's posterior belief
//! about an accident. The equilibrium is computed in two steps:
//!
//! 1. [`classify_region`] places the game in one of seven parameter regions
//!    by comparing the three indifference thresholds against `p` evaluated at
//!    the corresponding candidate profiles.
//! 2. Each region fixes the structure of the profile, and at most one scalar
//!    (a mass or `P` itself) remains to be solved, either in closed form
//!    through `p⁻¹` or by bisection on a monotone residual.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GameParams, ModelSpec, Probability};
use crate::numeric;

/// Interior masses within this distance of a bound are snapped onto it.
pub const MASS_CLAMP_TOL: f64 = 1e-9;

/// Subintervals in the sign scan of [`consistency_fixed_points`].
pub const FIXED_POINT_SCAN: usize = 1024;

/// Largest accepted `|P - p(aggregate(P))|` for a reported fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-9;

/// Masses of reckless drivers in each group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BehaviorProfile {
    /// Reckless non-V2V drivers, in `[0, 1 - y]`.
    pub x_n: f64,
    /// Reckless unsignaled V2V drivers, in `[0, y]`.
    pub x_vu: f64,
    /// Reckless signaled V2V drivers, in `[0, y]`.
    pub x_vs: f64,
}

impl BehaviorProfile {
    pub fn new(x_n: f64, x_vu: f64, x_vs: f64) -> Self {
        BehaviorProfile { x_n, x_vu, x_vs }
    }

    /// Habitual V2V recklessness given warning probability `q`.
    pub fn habitual_v2v(&self, q: f64) -> f64 {
        (1.0 - q) * self.x_vu + q * self.x_vs
    }

    /// Total reckless mass seen by `p` given warning probability `q`.
    pub fn aggregate(&self, q: f64) -> f64 {
        self.x_n + self.habitual_v2v(q)
    }

    pub fn within_bounds(&self, y: f64) -> bool {
        let ok = |x: f64, hi: f64| x.is_finite() && (0.0..=hi).contains(&x);
        ok(self.x_n, 1.0 - y) && ok(self.x_vu, y) && ok(self.x_vs, y)
    }
}

impl fmt::Display for BehaviorProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ({}, {}))", self.x_n, self.x_vu, self.x_vs)
    }
}

/// Accident probabilities at which each group is indifferent between careful
/// and reckless driving.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Signaled V2V drivers.
    pub p_vs: Probability,
    /// Non-V2V drivers, `1 / (1 + r)`.
    pub p_n: Probability,
    /// Unsignaled V2V drivers.
    pub p_vu: Probability,
    /// Set when `r t(y) + f(y) = 0`; `p_vs` is then reported as 0.
    pub vs_degenerate: bool,
}

/// Parameter-space region; determines the structure of the equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Region {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
}

impl Region {
    pub const ALL: [Region; 7] = [
        Region::E1,
        Region::E2,
        Region::E3,
        Region::E4,
        Region::E5,
        Region::E6,
        Region::E7,
    ];

    /// 1-based index.
    pub fn index(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_index(index: u8) -> Option<Region> {
        Region::ALL.get(usize::from(index).checked_sub(1)?).copied()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}", self.index())
    }
}

/// A posterior that may be undefined because its conditioning event has
/// probability zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Posterior {
    Value(Probability),
    Degenerate,
}

impl Posterior {
    pub fn value(self) -> Option<f64> {
        match self {
            Posterior::Value(p) => Some(p.get()),
            Posterior::Degenerate => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub profile: BehaviorProfile,
    /// Accident probability.
    pub p: Probability,
    /// Probability that a V2V driver sees a warning.
    pub q: Probability,
    pub region: Region,
    /// `|P - p(aggregate)|` for the returned profile.
    pub residual: f64,
}

/// Model curves evaluated at the game's penetration level.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ctx<'a> {
    pub model: &'a ModelSpec,
    pub beta: f64,
    pub y: f64,
    pub r: f64,
    pub t: f64,
    pub f: f64,
}

impl<'a> Ctx<'a> {
    pub fn new(model: &'a ModelSpec, game: &GameParams) -> Self {
        Ctx {
            model,
            beta: game.beta.get(),
            y: game.y.get(),
            r: game.r,
            t: model.eval_t(game.y).get(),
            f: model.eval_f(game.y).get(),
        }
    }

    #[inline]
    pub fn q(&self, p: f64) -> f64 {
        self.beta * (p * self.t + (1.0 - p) * self.f)
    }

    #[inline]
    pub fn indifference(&self) -> f64 {
        1.0 / (1.0 + self.r)
    }

    pub fn p_vu(&self) -> f64 {
        let bt = self.beta * self.t;
        let bf = self.beta * self.f;
        (1.0 - bf) / (1.0 + self.r * (1.0 - bt) - bf)
    }

    /// `(p_vs, degenerate)`
    pub fn p_vs(&self) -> (f64, bool) {
        let denom = self.r * self.t + self.f;
        if denom == 0.0 {
            (0.0, true)
        } else {
            (self.f / denom, false)
        }
    }

    /// Reckless mass when only unsignaled V2V drivers are reckless and the
    /// accident probability is `p`.
    #[inline]
    pub fn unsignaled_only_mass(&self, p: f64) -> f64 {
        (1.0 - self.beta * p * (self.t - self.f) - self.beta * self.f) * self.y
    }

    /// Reckless mass when everyone except signaled V2V drivers is reckless.
    #[inline]
    pub fn all_but_signaled_mass(&self, p: f64) -> f64 {
        1.0 - (self.beta * p * (self.t - self.f) + self.beta * self.f) * self.y
    }

    pub fn posterior_no_signal(&self, p: f64) -> Posterior {
        let no_warning = 1.0 - self.q(p);
        if no_warning <= 0.0 {
            return Posterior::Degenerate;
        }
        Posterior::Value(Probability::saturating(p * (1.0 - self.beta * self.t) / no_warning))
    }

    pub fn posterior_signal(&self, p: f64) -> Posterior {
        let signal = p * self.t + (1.0 - p) * self.f;
        if self.beta == 0.0 || signal <= 0.0 {
            return Posterior::Degenerate;
        }
        Posterior::Value(Probability::saturating(p * self.t / signal))
    }

    /// Right-hand side of the consistency equation for `profile` at `c`.
    #[inline]
    pub fn consistency_map(&self, profile: &BehaviorProfile, c: f64) -> f64 {
        let q = self.q(c);
        self.model.p(profile.x_n + profile.x_vu - q * (profile.x_vu - profile.x_vs))
    }
}

pub fn thresholds(model: &ModelSpec, game: &GameParams) -> Thresholds {
    let ctx = Ctx::new(model, game);
    let (p_vs, vs_degenerate) = ctx.p_vs();
    Thresholds {
        p_vs: Probability::saturating(p_vs),
        p_n: Probability::saturating(ctx.indifference()),
        p_vu: Probability::saturating(ctx.p_vu()),
        vs_degenerate,
    }
}

/// `Q = beta (P t(y) + (1 - P) f(y))`.
pub fn warning_probability(model: &ModelSpec, game: &GameParams, p: Probability) -> Probability {
    Probability::saturating(Ctx::new(model, game).q(p.get()))
}

/// `P(A | no warning)`. Degenerate only when a warning is certain.
pub fn posterior_no_signal(model: &ModelSpec, game: &GameParams, p: Probability) -> Posterior {
    Ctx::new(model, game).posterior_no_signal(p.get())
}

/// `P(A | warning)`. Degenerate when warnings never occur (`Q = 0`).
pub fn posterior_signal(model: &ModelSpec, game: &GameParams, p: Probability) -> Posterior {
    Ctx::new(model, game).posterior_signal(p.get())
}

pub fn classify_region(model: &ModelSpec, game: &GameParams) -> Result<Region> {
    classify(&Ctx::new(model, game))
}

pub(crate) fn classify(ctx: &Ctx<'_>) -> Result<Region> {
    let m = ctx.model;
    let p_vu = ctx.p_vu();
    let p_n = ctx.indifference();
    let (p_vs, _) = ctx.p_vs();
    let p0 = m.p0();
    let p1 = m.p1();

    let at_vu = m.p(ctx.unsignaled_only_mass(p_vu));
    let at_n_low = m.p(ctx.unsignaled_only_mass(p_n));
    let at_n_high = m.p(ctx.all_but_signaled_mass(p_n));
    let at_vs = m.p(ctx.all_but_signaled_mass(p_vs));

    let region = if p_vu < p0 {
        Region::E1
    } else if p_vu <= at_vu {
        Region::E2
    } else if p_n < at_n_low {
        Region::E3
    } else if p_n <= at_n_high {
        Region::E4
    } else if p_vs < at_vs {
        Region::E5
    } else if p_vs <= p1 {
        Region::E6
    } else if p1 < p_vs {
        Region::E7
    } else {
        return Err(Error::Internal(format!(
            "no region matches (beta={}, y={}, r={}); check model validity",
            ctx.beta, ctx.y, ctx.r
        )));
    };
    Ok(region)
}

/// Accident probability in E3: all unsignaled V2V drivers reckless, nobody
/// else. Solves `P = p((1 - Q(P)) y)` on `[P_n, P_vu]`.
fn unsignaled_reckless_fixed_point(ctx: &Ctx<'_>) -> f64 {
    let g = |p: f64| ctx.model.p((1.0 - ctx.q(p)) * ctx.y) - p;
    numeric::bisect(g, ctx.indifference(), ctx.p_vu())
}

/// Accident probability in E5: everyone except signaled V2V drivers reckless.
/// Solves `P = p(1 - Q(P) y)` on `[P_vs, P_n]`.
fn signaled_careful_fixed_point(ctx: &Ctx<'_>) -> f64 {
    let g = |p: f64| ctx.model.p(1.0 - ctx.q(p) * ctx.y) - p;
    numeric::bisect(g, ctx.p_vs().0, ctx.indifference())
}

fn crash_probability_in(ctx: &Ctx<'_>, region: Region) -> f64 {
    match region {
        Region::E1 => ctx.model.p0(),
        Region::E2 => ctx.p_vu(),
        Region::E3 => unsignaled_reckless_fixed_point(ctx),
        Region::E4 => ctx.indifference(),
        Region::E5 => signaled_careful_fixed_point(ctx),
        Region::E6 => ctx.p_vs().0,
        Region::E7 => ctx.model.p1(),
    }
}

/// Equilibrium accident probability, case by case over the seven regions.
pub fn equilibrium_crash_probability(model: &ModelSpec, game: &GameParams) -> Result<Probability> {
    let ctx = Ctx::new(model, game);
    let region = classify(&ctx)?;
    Ok(Probability::saturating(crash_probability_in(&ctx, region)))
}

fn clamp_mass(value: f64, hi: f64, what: &str) -> Result<f64> {
    if value >= -MASS_CLAMP_TOL && value <= hi + MASS_CLAMP_TOL {
        Ok(value.clamp(0.0, hi))
    } else {
        Err(Error::Internal(format!("{what} = {value} escapes [0, {hi}]")))
    }
}

fn p_inverse(ctx: &Ctx<'_>, v: f64) -> Result<f64> {
    ctx.model.invert_p(Probability::saturating(v)).map_err(|e| {
        Error::Internal(format!("inverting p at an equilibrium probability failed: {e}"))
    })
}

/// The essentially unique signaling equilibrium of `game`.
pub fn solve_equilibrium(model: &ModelSpec, game: &GameParams) -> Result<EquilibriumResult> {
    let ctx = Ctx::new(model, game);
    solve(&ctx)
}

pub(crate) fn solve(ctx: &Ctx<'_>) -> Result<EquilibriumResult> {
    let region = classify(ctx)?;
    let p = crash_probability_in(ctx, region);
    let q = ctx.q(p);
    let y = ctx.y;

    let profile = match region {
        Region::E1 => BehaviorProfile::new(0.0, 0.0, 0.0),
        Region::E2 => {
            let x_vu = p_inverse(ctx, p)? / (1.0 - q);
            BehaviorProfile::new(0.0, clamp_mass(x_vu, y, "x_vu")?, 0.0)
        }
        Region::E3 => BehaviorProfile::new(0.0, y, 0.0),
        Region::E4 => {
            let x_n = p_inverse(ctx, p)? - (1.0 - q) * y;
            BehaviorProfile::new(clamp_mass(x_n, 1.0 - y, "x_n")?, y, 0.0)
        }
        Region::E5 => BehaviorProfile::new(1.0 - y, y, 0.0),
        Region::E6 => {
            // With q = 0 nobody is ever signaled; the mass is immaterial.
            let x_vs = if q > 0.0 {
                (p_inverse(ctx, p)? - 1.0 + q * y) / q
            } else {
                0.0
            };
            BehaviorProfile::new(1.0 - y, y, clamp_mass(x_vs, y, "x_vs")?)
        }
        Region::E7 => BehaviorProfile::new(1.0 - y, y, y),
    };

    let residual = (p - ctx.model.p(profile.aggregate(q))).abs();
    Ok(EquilibriumResult {
        profile,
        p: Probability::saturating(p),
        q: Probability::saturating(q),
        region,
        residual,
    })
}

/// Every accident probability consistent with `profile`.
///
/// The result is sorted ascending and never empty for in-bounds profiles.
pub fn consistency_fixed_points(
    model: &ModelSpec,
    game: &GameParams,
    profile: &BehaviorProfile,
) -> Vec<Probability> {
    let ctx = Ctx::new(model, game);
    fixed_points_between(&ctx, profile, model.p0(), model.p1())
        .into_iter()
        .map(Probability::saturating)
        .collect()
}

/// Fixed points of the consistency map restricted to `[lo, hi]`.
pub(crate) fn fixed_points_between(
    ctx: &Ctx<'_>,
    profile: &BehaviorProfile,
    lo: f64,
    hi: f64,
) -> Vec<f64> {
    let g = |c: f64| ctx.consistency_map(profile, c) - c;
    if hi < lo {
        return Vec::new();
    }
    if hi == lo {
        return if g(lo).abs() <= FIXED_POINT_TOL { vec![lo] } else { Vec::new() };
    }

    // The map is nonincreasing in c unless signaled drivers are more
    // reckless than unsignaled ones; then g is strictly decreasing and the
    // root is unique.
    let nonincreasing = ctx.beta * (ctx.t - ctx.f) * (profile.x_vu - profile.x_vs) >= 0.0;
    if nonincreasing {
        let (g_lo, g_hi) = (g(lo), g(hi));
        if g_lo < -FIXED_POINT_TOL || g_hi > FIXED_POINT_TOL {
            return Vec::new();
        }
        let root = if g_lo <= 0.0 {
            lo
        } else if g_hi >= 0.0 {
            hi
        } else {
            numeric::bisect(g, lo, hi)
        };
        return vec![root];
    }

    // Here the map is nondecreasing, so its range over [lo, hi] is known
    // from the endpoints.
    if g(hi) + hi < lo - FIXED_POINT_TOL || g(lo) + lo > hi + FIXED_POINT_TOL {
        return Vec::new();
    }

    let step = (hi - lo) / FIXED_POINT_SCAN as f64;
    let node = |k: usize| if k == FIXED_POINT_SCAN { hi } else { lo + step * k as f64 };
    let mut roots: Vec<f64> = Vec::new();
    let push = |root: f64, roots: &mut Vec<f64>| {
        if g(root).abs() <= FIXED_POINT_TOL && roots.last().is_none_or(|&last| root - last > FIXED_POINT_TOL) {
            roots.push(root);
        }
    };
    let mut a = lo;
    let mut g_a = g(a);
    if g_a == 0.0 {
        push(a, &mut roots);
    }
    for k in 1..=FIXED_POINT_SCAN {
        let b = node(k);
        let g_b = g(b);
        if g_b == 0.0 {
            push(b, &mut roots);
        } else if g_a != 0.0 && g_a.signum() != g_b.signum() {
            push(numeric::bisect(g, a, b), &mut roots);
        }
        a = b;
        g_a = g_b;
    }
    // A root tangent to zero shows up as a near-zero endpoint with no sign
    // change; the full-interval endpoints are always checked.
    if roots.is_empty() {
        for c in [lo, hi] {
            push(c, &mut roots);
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CurveSpec;

    fn model(p: CurveSpec, t: f64, f: f64) -> ModelSpec {
        ModelSpec::new(p, CurveSpec::linear(t), CurveSpec::linear(f))
    }

    /// p = 0.8d + 0.1, t = 0.8y, f = 0.1y
    fn proof_model() -> ModelSpec {
        model(CurveSpec::affine(0.8, 0.1), 0.8, 0.1)
    }

    /// p = 0.3d + 0.1, t = 0.8y, f = 0.1y
    fn rise_fall_model() -> ModelSpec {
        model(CurveSpec::affine(0.3, 0.1), 0.8, 0.1)
    }

    fn game(beta: f64, y: f64, r: f64) -> GameParams {
        GameParams::new(beta, y, r).unwrap()
    }

    fn prob(x: f64) -> Probability {
        Probability::new(x).unwrap()
    }

    // Independent linear oracle: with profile (0, (0.9, 0)) and affine p the
    // consistency equation P = 0.27 (1 - Q(P)) + 0.1 with
    // Q(P) = 0.09 + 0.63 P solves to P = 0.3457 / 1.1701.
    const RISE_FALL_P_AT_ONE: f64 = 0.3457 / 1.1701;

    #[test]
    fn thresholds_examples() {
        let th = thresholds(&proof_model(), &game(1.0, 0.9, 20.0));
        assert!((th.p_vu.get() - 0.1398).abs() < 1e-4);
        // exact value 0.91 / 6.51
        assert!((th.p_vu.get() - 0.91 / 6.51).abs() < 1e-15);

        let th = thresholds(&rise_fall_model(), &game(0.7, 0.4, 3.0));
        assert_eq!(th.p_n.get(), 0.25);

        let th = thresholds(&proof_model(), &game(0.0, 0.6, 7.0));
        assert_eq!(th.p_vu.get(), th.p_n.get());
        assert_eq!(th.p_n.get(), 0.125);
    }

    #[test]
    fn thresholds_degenerate_signal_denominator() {
        let th = thresholds(&proof_model(), &game(1.0, 0.0, 5.0));
        assert!(th.vs_degenerate);
        assert_eq!(th.p_vs.get(), 0.0);
    }

    #[test]
    fn warning_probability_examples() {
        let m = rise_fall_model();
        assert_eq!(warning_probability(&m, &game(0.0, 0.9, 3.0), prob(0.7)).get(), 0.0);
        let q = warning_probability(&m, &game(1.0, 0.9, 3.0), prob(0.25)).get();
        assert!((q - 0.2475).abs() < 1e-15);
        let q = warning_probability(&m, &game(1.0, 0.9, 3.0), prob(1.0)).get();
        assert!((q - 0.72).abs() < 1e-15);
    }

    #[test]
    fn posterior_equality_branches() {
        let m = rise_fall_model();
        let g = game(0.6, 0.9, 3.0);
        let th = thresholds(&m, &g);
        let at_vu = posterior_no_signal(&m, &g, th.p_vu).value().unwrap();
        assert!((at_vu - 0.25).abs() < 1e-14);
        let at_vs = posterior_signal(&m, &g, th.p_vs).value().unwrap();
        assert!((at_vs - 0.25).abs() < 1e-14);
    }

    #[test]
    fn posterior_signal_without_false_positives_is_certain() {
        let m = model(CurveSpec::affine(0.3, 0.1), 0.9, 0.0);
        let g = game(0.4, 0.9, 3.0);
        for p in [0.01, 0.2, 0.9] {
            assert_eq!(posterior_signal(&m, &g, prob(p)).value(), Some(1.0));
        }
    }

    #[test]
    fn posterior_signal_degenerate_without_warnings() {
        let m = rise_fall_model();
        assert_eq!(posterior_signal(&m, &game(0.0, 0.9, 3.0), prob(0.3)), Posterior::Degenerate);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_region(&proof_model(), &game(0.0, 0.9, 20.0)).unwrap(), Region::E1);
        assert_eq!(classify_region(&proof_model(), &game(1.0, 0.9, 20.0)).unwrap(), Region::E2);

        let quartic = model(CurveSpec::power(0.25), 0.9, 0.1);
        assert_eq!(classify_region(&quartic, &game(0.4204, 0.066, 1.001)).unwrap(), Region::E3);

        let flat = model(CurveSpec::affine(0.03, 0.0), 0.95, 0.5);
        assert_eq!(classify_region(&flat, &game(1.0, 0.4, 20.0)).unwrap(), Region::E5);
    }

    #[test]
    fn solve_e1_and_e2() {
        let e1 = solve_equilibrium(&proof_model(), &game(0.0, 0.9, 20.0)).unwrap();
        assert_eq!(e1.region, Region::E1);
        assert_eq!(e1.profile, BehaviorProfile::new(0.0, 0.0, 0.0));
        assert_eq!(e1.p.get(), 0.1);

        let e2 = solve_equilibrium(&proof_model(), &game(1.0, 0.9, 20.0)).unwrap();
        assert_eq!(e2.region, Region::E2);
        assert!((e2.p.get() - 0.1398).abs() < 1e-4);
        assert_eq!(e2.profile.x_n, 0.0);
        assert_eq!(e2.profile.x_vs, 0.0);
        let expected_vu = ((e2.p.get() - 0.1) / 0.8) / (1.0 - e2.q.get());
        assert!((e2.profile.x_vu - expected_vu).abs() < 1e-12);
        assert!(e2.residual <= 1e-10);
    }

    #[test]
    fn solve_e3_matches_linear_oracle() {
        let eq = solve_equilibrium(&rise_fall_model(), &game(1.0, 0.9, 3.0)).unwrap();
        assert_eq!(eq.region, Region::E3);
        assert_eq!(eq.profile, BehaviorProfile::new(0.0, 0.9, 0.0));
        assert!((eq.p.get() - RISE_FALL_P_AT_ONE).abs() < 1e-11);
        assert!((eq.p.get() - 0.2954).abs() < 1e-4);
        assert!(eq.residual <= 1e-10);
    }

    #[test]
    fn solve_e7_boundary_form() {
        // p(1) = 0.2 lies below P_vs = 0.9 / (1.01 * 0.1 + 0.9)
        let m = model(CurveSpec::affine(0.1, 0.1), 0.1, 0.09);
        let g = game(0.5, 1.0, 1.01);
        let eq = solve_equilibrium(&m, &g).unwrap();
        assert_eq!(eq.region, Region::E7);
        assert_eq!(eq.profile, BehaviorProfile::new(0.0, 1.0, 1.0));
        assert!((eq.p.get() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn crash_probability_cases() {
        // E1
        let p = equilibrium_crash_probability(&proof_model(), &game(0.0, 0.9, 20.0)).unwrap();
        assert_eq!(p.get(), 0.1);

        // E4: y = 0 leaves only non-V2V drivers, who mix at P_n when
        // p(0) <= 1/(1+r) <= p(1).
        let g = game(0.5, 0.0, 3.0);
        assert_eq!(classify_region(&rise_fall_model(), &g).unwrap(), Region::E4);
        let p = equilibrium_crash_probability(&rise_fall_model(), &g).unwrap();
        assert_eq!(p.get(), 0.25);

        // E6: signaled drivers mix at P_vs.
        let m = model(CurveSpec::affine(0.2, 0.0), 0.9, 0.3);
        let g = game(1.0, 0.5, 1.5);
        assert_eq!(classify_region(&m, &g).unwrap(), Region::E6);
        let th = thresholds(&m, &g);
        let p = equilibrium_crash_probability(&m, &g).unwrap();
        assert_eq!(p, th.p_vs);
        let eq = solve_equilibrium(&m, &g).unwrap();
        assert_eq!(eq.p, p);
        assert!(eq.profile.x_vs > 0.0 && eq.profile.x_vs < 0.5);
        assert!(eq.residual <= 1e-10);
    }

    #[test]
    fn e6_without_warnings_is_canonical() {
        // beta = 0 with p(1) exactly at P_vs lands on the E6 knife edge.
        // y = 0.5: t = 0.4, f = 0.1, r = 2 gives P_vs = 0.1 / 0.9.
        let p1 = 0.1 / 0.9;
        let m = model(CurveSpec::affine(p1, 0.0), 0.8, 0.2);
        let g = game(0.0, 0.5, 2.0);
        let eq = solve_equilibrium(&m, &g).unwrap();
        assert!(matches!(eq.region, Region::E5 | Region::E6));
        assert_eq!(eq.profile.x_vs, 0.0);
    }

    #[test]
    fn fixed_points_examples() {
        let m = rise_fall_model();
        let profile = BehaviorProfile::new(0.2, 0.3, 0.1);
        let fps = consistency_fixed_points(&m, &game(0.0, 0.5, 3.0), &profile);
        assert_eq!(fps.len(), 1);
        assert!((fps[0].get() - m.eval_p(0.5).unwrap().get()).abs() < 1e-12);

        let equal = BehaviorProfile::new(0.1, 0.4, 0.4);
        let fps = consistency_fixed_points(&m, &game(0.8, 0.5, 3.0), &equal);
        assert_eq!(fps.len(), 1);
        assert!((fps[0].get() - m.eval_p(0.5).unwrap().get()).abs() < 1e-12);

        let fps = consistency_fixed_points(&m, &game(1.0, 0.9, 3.0), &BehaviorProfile::new(0.0, 0.9, 0.0));
        assert_eq!(fps.len(), 1);
        assert!((fps[0].get() - RISE_FALL_P_AT_ONE).abs() < 1e-11);
    }

    #[test]
    fn fixed_points_scan_path() {
        // Signaled drivers more reckless than unsignaled: the map increases
        // in c and the scan path runs.
        let m = model(CurveSpec::power(0.5), 1.0, 0.0);
        let g = game(1.0, 1.0, 2.0);
        let profile = BehaviorProfile::new(0.0, 0.0, 1.0);
        // c = p(Q(c)) = sqrt(c): roots at 0 and 1.
        let fps = consistency_fixed_points(&m, &g, &profile);
        let values: Vec<f64> = fps.iter().map(|p| p.get()).collect();
        assert_eq!(values.len(), 2, "{values:?}");
        assert!(values[0].abs() < 1e-9);
        assert!((values[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn region_indices_round_trip() {
        for r in Region::ALL {
            assert_eq!(Region::from_index(r.index()), Some(r));
        }
        assert_eq!(Region::from_index(0), None);
        assert_eq!(Region::from_index(8), None);
        assert_eq!(Region::E4.to_string(), "E4");
    }
}
