//! Expected costs per group and the population social cost.
//!
//! Cost matrix: a careful driver pays 1 when there is no accident, a reckless
//! driver pays `r` when there is one, everything else is free.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{BehaviorProfile, Ctx, EquilibriumResult};
use crate::model::{GameParams, ModelSpec, Probability};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Careful,
    Reckless,
}

/// Expected cost of each action for a driver holding accident belief `belief`.
pub fn action_cost(action: Action, belief: f64, r: f64) -> f64 {
    match action {
        Action::Careful => 1.0 - belief,
        Action::Reckless => r * belief,
    }
}

/// Expected cost of each action in each group.
///
/// The signaled entries are `None` when no warning is ever displayed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub j_n_c: f64,
    pub j_n_r: f64,
    pub j_vu_c: f64,
    pub j_vu_r: f64,
    pub j_vs_c: Option<f64>,
    pub j_vs_r: Option<f64>,
}

pub fn group_costs(model: &ModelSpec, game: &GameParams, p: Probability) -> CostBreakdown {
    costs_at(&Ctx::new(model, game), p.get())
}

pub(crate) fn costs_at(ctx: &Ctx<'_>, p: f64) -> CostBreakdown {
    let r = ctx.r;
    // With certain warnings the unsignaled group is empty; any belief works.
    let unsignaled = ctx.posterior_no_signal(p).value().unwrap_or(p);
    let signaled = ctx.posterior_signal(p).value();
    CostBreakdown {
        j_n_c: action_cost(Action::Careful, p, r),
        j_n_r: action_cost(Action::Reckless, p, r),
        j_vu_c: action_cost(Action::Careful, unsignaled, r),
        j_vu_r: action_cost(Action::Reckless, unsignaled, r),
        j_vs_c: signaled.map(|b| action_cost(Action::Careful, b, r)),
        j_vs_r: signaled.map(|b| action_cost(Action::Reckless, b, r)),
    }
}

/// Social cost of an equilibrium (or any consistent profile/P/Q triple).
pub fn social_cost(model: &ModelSpec, game: &GameParams, eq: &EquilibriumResult) -> f64 {
    social_cost_of(&Ctx::new(model, game), &eq.profile, eq.p.get(), eq.q.get())
}

pub(crate) fn social_cost_of(ctx: &Ctx<'_>, x: &BehaviorProfile, p: f64, q: f64) -> f64 {
    let y = ctx.y;
    let j = costs_at(ctx, p);
    let non_v2v = j.j_n_c * (1.0 - y - x.x_n) + j.j_n_r * x.x_n;
    let unsignaled = j.j_vu_c * (y - x.x_vu) + j.j_vu_r * x.x_vu;
    let signaled = match (j.j_vs_c, j.j_vs_r) {
        (Some(c), Some(r)) => c * (y - x.x_vs) + r * x.x_vs,
        // zero weight when no warning is ever shown
        _ => 0.0,
    };
    non_v2v + (1.0 - q) * unsignaled + q * signaled
}

/// Social cost of an arbitrary in-bounds profile.
///
/// `P` is taken as the smallest consistent accident probability, so
/// off-equilibrium landscapes are well defined.
pub fn social_cost_of_profile(model: &ModelSpec, game: &GameParams, profile: &BehaviorProfile) -> f64 {
    let ctx = Ctx::new(model, game);
    let p = crate::equilibrium::fixed_points_between(&ctx, profile, model.p0(), model.p1())
        .first()
        .copied()
        .unwrap_or_else(|| model.p0());
    social_cost_of(&ctx, profile, p, ctx.q(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{classify_region, solve_equilibrium, Region};
    use crate::model::CurveSpec;

    fn game(beta: f64, y: f64, r: f64) -> GameParams {
        GameParams::new(beta, y, r).unwrap()
    }

    fn model(p: CurveSpec, t: f64, f: f64) -> ModelSpec {
        ModelSpec::new(p, CurveSpec::linear(t), CurveSpec::linear(f))
    }

    fn prob(x: f64) -> Probability {
        Probability::new(x).unwrap()
    }

    #[test]
    fn group_cost_examples() {
        let m = model(CurveSpec::affine(0.3, 0.1), 0.8, 0.1);
        let g = game(0.5, 0.9, 3.0);
        let j = group_costs(&m, &g, prob(0.25));
        assert_eq!(j.j_n_c, 0.75);
        assert_eq!(j.j_n_r, 0.75);

        let j = group_costs(&m, &g, prob(0.0));
        assert_eq!(j.j_n_c, 1.0);
        assert_eq!(j.j_n_r, 0.0);

        let g = game(0.5, 0.9, 7.0);
        let j = group_costs(&m, &g, prob(0.125));
        assert!((j.j_n_c - 0.875).abs() < 1e-15);
        assert!((j.j_n_r - 0.875).abs() < 1e-15);
    }

    #[test]
    fn signaled_costs_degenerate_without_warnings() {
        let m = model(CurveSpec::affine(0.3, 0.1), 0.8, 0.1);
        let j = group_costs(&m, &game(0.0, 0.9, 3.0), prob(0.3));
        assert_eq!(j.j_vs_c, None);
        assert_eq!(j.j_vs_r, None);
        // no warnings: unsignaled belief equals the prior
        assert!((j.j_vu_r - 0.9).abs() < 1e-15);
    }

    #[test]
    fn social_cost_quartic_e3() {
        let m = model(CurveSpec::power(0.25), 0.9, 0.1);
        for (beta, expected) in [(0.4204, 0.4949), (1.0, 0.4960)] {
            let g = game(beta, 0.066, 1.001);
            let eq = solve_equilibrium(&m, &g).unwrap();
            assert_eq!(eq.region, Region::E3);
            let s = social_cost(&m, &g, &eq);
            assert!((s - expected).abs() < 1e-3, "beta={beta}: {s}");
        }
    }

    #[test]
    fn social_cost_all_reckless_at_zero_beta() {
        let m = model(CurveSpec::affine(0.03, 0.0), 0.95, 0.5);
        let g = game(0.0, 0.4, 20.0);
        let eq = solve_equilibrium(&m, &g).unwrap();
        assert!((social_cost(&m, &g, &eq) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn social_cost_closed_form_in_e2() {
        let m = model(CurveSpec::affine(0.3, 0.1), 0.8, 0.1);
        let g = game(0.0, 0.9, 3.0);
        assert_eq!(classify_region(&m, &g).unwrap(), Region::E2);
        let eq = solve_equilibrium(&m, &g).unwrap();
        assert!((social_cost(&m, &g, &eq) - 0.75).abs() < 1e-12);

        for k in 0..=20 {
            let beta = k as f64 / 20.0;
            let g = game(beta, 0.9, 20.0);
            let m = model(CurveSpec::affine(0.8, 0.1), 0.8, 0.1);
            let eq = solve_equilibrium(&m, &g).unwrap();
            if eq.region != Region::E2 {
                continue;
            }
            let (t, f, r) = (0.72, 0.09, 20.0);
            let closed = r * (1.0 - beta * t) / (1.0 + r * (1.0 - beta * t) - beta * f);
            assert!((social_cost(&m, &g, &eq) - closed).abs() < 1e-9, "beta={beta}");
        }
    }

    #[test]
    fn social_cost_of_profile_matches_equilibrium() {
        let m = model(CurveSpec::affine(0.3, 0.1), 0.8, 0.1);
        let g = game(1.0, 0.9, 3.0);
        let eq = solve_equilibrium(&m, &g).unwrap();
        let s = social_cost_of_profile(&m, &g, &eq.profile);
        assert!((s - social_cost(&m, &g, &eq)).abs() < 1e-10);
    }
}
