//! Solver for the V2V hazard-signaling game.
//!
//! Drivers choose between careful and reckless driving; reckless mass raises
//! the accident probability, V2V-equipped cars broadcast warnings, and a
//! display probability `beta` decides how often a received warning reaches
//! the driver. The crate computes the signaling equilibrium of any game,
//! evaluates accident probability and social cost there, optimizes `beta`,
//! and checks all of it against a brute-force oracle.
//!
//! ```
//! use v2v_signal::{CurveSpec, GameParams, ModelSpec, Region, solve_equilibrium};
//!
//! let model = ModelSpec::new(
//!     CurveSpec::affine(0.3, 0.1),
//!     CurveSpec::linear(0.8),
//!     CurveSpec::linear(0.1),
//! );
//! let game = GameParams::new(1.0, 0.9, 3.0).unwrap();
//! let eq = solve_equilibrium(&model, &game).unwrap();
//! assert_eq!(eq.region, Region::E3);
//! assert!((eq.p.get() - 0.2954).abs() < 1e-4);
//! ```

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod metrics;
pub mod model;
pub mod numeric;
pub mod optimize;
pub mod oracle;
pub mod scenarios;

pub use equilibrium::{
    classify_region, consistency_fixed_points, equilibrium_crash_probability, posterior_no_signal,
    posterior_signal, solve_equilibrium, thresholds, warning_probability, BehaviorProfile,
    EquilibriumResult, Posterior, Region, Thresholds,
};
pub use error::{Error, Result};
pub use metrics::{group_costs, social_cost, social_cost_of_profile, Action, CostBreakdown};
pub use model::{CurveSpec, Diagnostic, GameParams, ModelSpec, MonotoneCurve, Probability};
pub use optimize::{
    beta_bar, check_region_ordering, optimize_beta_accident, optimize_beta_social, region_map,
    sweep_beta, BetaBar, Objective, OptimizationOutcome, SweepRecord,
};
pub use oracle::{
    brute_force_equilibria, essential_equivalence, verify_equilibrium, Condition, EquilibriumPoint,
    VerificationReport,
};
