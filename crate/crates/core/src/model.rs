//! Exogenous model functions and game parameters.
//!
//! A [`ModelSpec`] bundles the three curves that drive the game:
//!
//! * `p(d)`: accident probability as a function of the reckless mass `d`,
//! * `t(y)`: probability that an accident is detected and broadcast, as a
//!   function of V2V penetration `y`,
//! * `f(y)`: probability of a false-positive broadcast.
//!
//! Curves come from a small closed set of parametric families
//! ([`CurveSpec`]); each family has a closed-form inverse. Families added
//! later only need to implement [`MonotoneCurve::eval`] and inherit a
//! bisection-based inverse.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

/// Slack allowed when checking that a value lies in the range of `p`.
const RANGE_SLACK: f64 = 1e-12;

/// Number of points in the `(0, 1]` grid used to check `f < t`.
pub const VALIDATION_GRID: usize = 1000;

/// A real number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::Domain {
                what: "probability",
                value,
                lo: 0.0,
                hi: 1.0,
            })
        }
    }

    /// Clamps `value` into `[0, 1]`. NaN maps to 0.
    pub fn saturating(value: f64) -> Self {
        if value.is_nan() {
            Probability(0.0)
        } else {
            Probability(value.clamp(0.0, 1.0))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// A continuous, nondecreasing curve on `[0, 1]`.
pub trait MonotoneCurve {
    fn eval(&self, x: f64) -> f64;

    /// Returns `x` in `[0, 1]` with `eval(x) == v`.
    ///
    /// The default implementation bisects; override it when a closed form
    /// exists.
    fn invert(&self, v: f64) -> Result<f64> {
        invert_by_bisection(self, v)
    }
}

/// Guarded bisection inverse for any increasing curve.
pub fn invert_by_bisection<C: MonotoneCurve + ?Sized>(curve: &C, v: f64) -> Result<f64> {
    let lo = curve.eval(0.0);
    let hi = curve.eval(1.0);
    check_range(v, lo, hi)?;
    if v <= lo {
        return Ok(0.0);
    }
    if v >= hi {
        return Ok(1.0);
    }
    Ok(numeric::bisect(|x| curve.eval(x) - v, 0.0, 1.0))
}

fn check_range(v: f64, lo: f64, hi: f64) -> Result<()> {
    if v.is_nan() || v < lo - RANGE_SLACK || v > hi + RANGE_SLACK {
        Err(Error::Range { value: v, lo, hi })
    } else {
        Ok(())
    }
}

/// Parametric curve families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    /// `slope * x + intercept`
    Affine { slope: f64, intercept: f64 },
    /// `x ^ exponent`
    Power { exponent: f64 },
    /// `coefficient * x`
    Linear { coefficient: f64 },
}

impl CurveSpec {
    pub fn affine(slope: f64, intercept: f64) -> Self {
        CurveSpec::Affine { slope, intercept }
    }

    pub fn power(exponent: f64) -> Self {
        CurveSpec::Power { exponent }
    }

    pub fn linear(coefficient: f64) -> Self {
        CurveSpec::Linear { coefficient }
    }

    /// True when the curve is the zero function.
    pub fn is_identically_zero(&self) -> bool {
        match *self {
            CurveSpec::Affine { slope, intercept } => slope == 0.0 && intercept == 0.0,
            CurveSpec::Power { .. } => false,
            CurveSpec::Linear { coefficient } => coefficient == 0.0,
        }
    }

    fn parameter_problem(&self) -> Option<String> {
        match *self {
            CurveSpec::Affine { slope, intercept } => {
                if !slope.is_finite() || !intercept.is_finite() {
                    Some("affine parameters must be finite".into())
                } else {
                    None
                }
            }
            CurveSpec::Power { exponent } => {
                if !(exponent.is_finite() && exponent > 0.0) {
                    Some(format!("power exponent must be > 0, got {exponent}"))
                } else {
                    None
                }
            }
            CurveSpec::Linear { coefficient } => {
                if !(coefficient.is_finite() && coefficient >= 0.0) {
                    Some(format!("linear coefficient must be >= 0, got {coefficient}"))
                } else {
                    None
                }
            }
        }
    }

    fn strictly_increasing(&self) -> bool {
        match *self {
            CurveSpec::Affine { slope, .. } => slope > 0.0,
            CurveSpec::Power { exponent } => exponent > 0.0,
            CurveSpec::Linear { coefficient } => coefficient > 0.0,
        }
    }
}

impl MonotoneCurve for CurveSpec {
    #[inline]
    fn eval(&self, x: f64) -> f64 {
        match *self {
            CurveSpec::Affine { slope, intercept } => slope * x + intercept,
            CurveSpec::Power { exponent } => {
                if exponent == 0.25 {
                    x.sqrt().sqrt()
                } else {
                    x.powf(exponent)
                }
            }
            CurveSpec::Linear { coefficient } => coefficient * x,
        }
    }

    fn invert(&self, v: f64) -> Result<f64> {
        let lo = self.eval(0.0);
        let hi = self.eval(1.0);
        check_range(v, lo, hi)?;
        let x = match *self {
            CurveSpec::Affine { slope, intercept } => (v - intercept) / slope,
            CurveSpec::Power { exponent } => v.max(0.0).powf(exponent.recip()),
            CurveSpec::Linear { coefficient } => v / coefficient,
        };
        Ok(x.clamp(0.0, 1.0))
    }
}

/// Which of the three model curves a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveRole {
    P,
    T,
    F,
}

impl fmt::Display for CurveRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveRole::P => "p",
            CurveRole::T => "t",
            CurveRole::F => "f",
        })
    }
}

/// One violated [`ModelSpec`] invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    BadParameter { role: CurveRole, reason: String },
    PNotIncreasing,
    PBelowZero { p0: f64 },
    PAboveOne { p1: f64 },
    FNegative { y: f64 },
    TAboveOne { y: f64 },
    FNotBelowT { y: f64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::BadParameter { role, reason } => write!(f, "{role}: {reason}"),
            Diagnostic::PNotIncreasing => f.write_str("p not strictly increasing"),
            Diagnostic::PBelowZero { p0 } => write!(f, "p(0) = {p0} < 0"),
            Diagnostic::PAboveOne { p1 } => write!(f, "p(1) = {p1} > 1"),
            Diagnostic::FNegative { y } => write!(f, "f < 0 at y = {y}"),
            Diagnostic::TAboveOne { y } => write!(f, "t > 1 at y = {y}"),
            Diagnostic::FNotBelowT { y } => write!(f, "f ≥ t at y = {y}"),
        }
    }
}

/// The three model curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub p: CurveSpec,
    pub t: CurveSpec,
    pub f: CurveSpec,
}

impl ModelSpec {
    pub fn new(p: CurveSpec, t: CurveSpec, f: CurveSpec) -> Self {
        ModelSpec { p, t, f }
    }

    /// Builds a model and rejects it unless [`validate`](Self::validate)
    /// comes back clean.
    pub fn validated(p: CurveSpec, t: CurveSpec, f: CurveSpec) -> Result<Self> {
        let spec = ModelSpec { p, t, f };
        let diags = spec.validate();
        if diags.is_empty() {
            Ok(spec)
        } else {
            Err(Error::InvalidModel(diags))
        }
    }

    pub fn eval_p(&self, d: f64) -> Result<Probability> {
        check_unit("d", d)?;
        Ok(Probability::saturating(self.p.eval(d)))
    }

    pub fn invert_p(&self, v: Probability) -> Result<f64> {
        self.p.invert(v.get())
    }

    pub fn eval_t(&self, y: Probability) -> Probability {
        Probability::saturating(self.t.eval(y.get()))
    }

    pub fn eval_f(&self, y: Probability) -> Probability {
        Probability::saturating(self.f.eval(y.get()))
    }

    /// `p(d)` for solver internals; `d` is clamped into `[0, 1]` to absorb
    /// rounding in computed masses.
    #[inline]
    pub(crate) fn p(&self, d: f64) -> f64 {
        self.p.eval(d.clamp(0.0, 1.0))
    }

    #[inline]
    pub(crate) fn p0(&self) -> f64 {
        self.p.eval(0.0)
    }

    #[inline]
    pub(crate) fn p1(&self) -> f64 {
        self.p.eval(1.0)
    }

    /// Every violated invariant, in a stable order. Empty means valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        for (role, curve) in [(CurveRole::P, &self.p), (CurveRole::T, &self.t), (CurveRole::F, &self.f)] {
            if let Some(reason) = curve.parameter_problem() {
                diags.push(Diagnostic::BadParameter { role, reason });
            }
        }
        if !diags.is_empty() {
            return diags;
        }

        if !self.p.strictly_increasing() {
            diags.push(Diagnostic::PNotIncreasing);
        }
        let p0 = self.p.eval(0.0);
        let p1 = self.p.eval(1.0);
        if p0 < 0.0 {
            diags.push(Diagnostic::PBelowZero { p0 });
        }
        if p1 > 1.0 {
            diags.push(Diagnostic::PAboveOne { p1 });
        }

        let mut f_negative = None;
        let mut t_above = None;
        let mut f_not_below = None;
        for k in 1..=VALIDATION_GRID {
            let y = k as f64 / VALIDATION_GRID as f64;
            let t = self.t.eval(y);
            let f = self.f.eval(y);
            if f < 0.0 && f_negative.is_none() {
                f_negative = Some(y);
            }
            if t > 1.0 && t_above.is_none() {
                t_above = Some(y);
            }
            if f >= t && f_not_below.is_none() {
                f_not_below = Some(y);
            }
        }
        diags.extend(f_negative.map(|y| Diagnostic::FNegative { y }));
        diags.extend(t_above.map(|y| Diagnostic::TAboveOne { y }));
        diags.extend(f_not_below.map(|y| Diagnostic::FNotBelowT { y }));
        diags
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn check_unit(what: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: x,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

/// A signaling game `(beta, y, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGame")]
pub struct GameParams {
    /// Probability that a received warning is displayed to the driver.
    pub beta: Probability,
    /// Fraction of drivers with V2V equipment.
    pub y: Probability,
    /// Expected accident cost to a reckless driver.
    pub r: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    beta: f64,
    y: f64,
    r: f64,
}

impl TryFrom<RawGame> for GameParams {
    type Error = Error;

    fn try_from(raw: RawGame) -> Result<Self> {
        GameParams::new(raw.beta, raw.y, raw.r)
    }
}

impl GameParams {
    pub fn new(beta: f64, y: f64, r: f64) -> Result<Self> {
        let beta = Probability::new(beta)
            .map_err(|_| Error::InvalidGame(format!("beta = {beta} must lie in [0, 1]")))?;
        let y = Probability::new(y)
            .map_err(|_| Error::InvalidGame(format!("y = {y} must lie in [0, 1]")))?;
        if !(r.is_finite() && r > 1.0) {
            return Err(Error::InvalidGame(format!("r = {r} must be a finite value > 1")));
        }
        Ok(GameParams { beta, y, r })
    }

    /// Same game with a different display probability.
    pub fn with_beta(self, beta: Probability) -> Self {
        GameParams { beta, ..self }
    }

    /// `1 / (1 + r)`, the accident probability at which careful and reckless
    /// driving cost the same.
    #[inline]
    pub fn indifference(&self) -> f64 {
        1.0 / (1.0 + self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_model() -> ModelSpec {
        ModelSpec::new(CurveSpec::affine(0.3, 0.1), CurveSpec::linear(0.8), CurveSpec::linear(0.1))
    }

    fn prob(x: f64) -> Probability {
        Probability::new(x).unwrap()
    }

    #[test]
    fn eval_p_examples() {
        assert_eq!(sample_model().eval_p(0.0).unwrap().get(), 0.1);
        let quartic = ModelSpec::new(CurveSpec::power(0.25), CurveSpec::linear(0.9), CurveSpec::linear(0.1));
        assert_eq!(quartic.eval_p(1.0).unwrap().get(), 1.0);
        let steep = ModelSpec::new(CurveSpec::affine(0.8, 0.1), CurveSpec::linear(0.8), CurveSpec::linear(0.1));
        assert!((steep.eval_p(0.5).unwrap().get() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eval_p_rejects_out_of_domain() {
        assert!(matches!(sample_model().eval_p(1.5), Err(Error::Domain { .. })));
        assert!(matches!(sample_model().eval_p(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn invert_p_examples() {
        let d = sample_model().invert_p(prob(0.25)).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
        let quartic = ModelSpec::new(CurveSpec::power(0.25), CurveSpec::linear(0.9), CurveSpec::linear(0.1));
        assert_eq!(quartic.invert_p(prob(1.0)).unwrap(), 1.0);
        let steep = ModelSpec::new(CurveSpec::affine(0.8, 0.1), CurveSpec::linear(0.8), CurveSpec::linear(0.1));
        assert_eq!(steep.invert_p(prob(0.1)).unwrap(), 0.0);
    }

    #[test]
    fn invert_p_range_error() {
        // p ranges over [0.1, 0.4]
        assert!(matches!(sample_model().invert_p(prob(0.05)), Err(Error::Range { .. })));
        assert!(matches!(sample_model().invert_p(prob(0.5)), Err(Error::Range { .. })));
    }

    #[test]
    fn eval_t_and_f_examples() {
        let m = ModelSpec::new(CurveSpec::affine(0.3, 0.1), CurveSpec::linear(0.8), CurveSpec::linear(0.1));
        assert!((m.eval_t(prob(0.9)).get() - 0.72).abs() < 1e-15);
        assert!((m.eval_f(prob(0.9)).get() - 0.09).abs() < 1e-15);
        let no_fp = ModelSpec::new(CurveSpec::affine(0.3, 0.1), CurveSpec::linear(0.9), CurveSpec::linear(0.0));
        for y in [0.0, 0.3, 1.0] {
            assert_eq!(no_fp.eval_f(prob(y)).get(), 0.0);
        }
    }

    #[test]
    fn validate_examples() {
        assert!(sample_model().validate().is_empty());

        let decreasing = ModelSpec::new(CurveSpec::affine(-0.3, 0.1), CurveSpec::linear(0.8), CurveSpec::linear(0.1));
        let diags = decreasing.validate();
        assert!(diags.contains(&Diagnostic::PNotIncreasing));
        assert!(diags.iter().any(|d| d.to_string() == "p not strictly increasing"));

        let swapped = ModelSpec::new(CurveSpec::affine(0.3, 0.1), CurveSpec::linear(0.1), CurveSpec::linear(0.5));
        let diags = swapped.validate();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].to_string().starts_with("f ≥ t"));
    }

    #[test]
    fn validate_reports_every_violation() {
        let m = ModelSpec::new(CurveSpec::affine(1.0, 0.5), CurveSpec::linear(1.2), CurveSpec::linear(1.5));
        let diags = m.validate();
        assert!(diags.contains(&Diagnostic::PAboveOne { p1: 1.5 }));
        assert!(diags.iter().any(|d| matches!(d, Diagnostic::TAboveOne { .. })));
        assert!(diags.iter().any(|d| matches!(d, Diagnostic::FNotBelowT { .. })));
    }

    #[test]
    fn validate_bad_parameters() {
        let m = ModelSpec::new(CurveSpec::power(-1.0), CurveSpec::linear(0.8), CurveSpec::linear(-0.1));
        let diags = m.validate();
        assert_eq!(diags.len(), 2);
        assert!(matches!(diags[0], Diagnostic::BadParameter { role: CurveRole::P, .. }));
        assert!(matches!(diags[1], Diagnostic::BadParameter { role: CurveRole::F, .. }));
    }

    #[test]
    fn zero_false_positives_are_valid() {
        let m = ModelSpec::new(CurveSpec::affine(0.3, 0.1), CurveSpec::linear(0.9), CurveSpec::linear(0.0));
        assert!(m.validate().is_empty());
        assert!(m.f.is_identically_zero());
    }

    #[test]
    fn game_params_validation() {
        assert!(GameParams::new(0.5, 0.5, 1.0).is_err());
        assert!(GameParams::new(1.1, 0.5, 2.0).is_err());
        assert!(GameParams::new(0.5, -0.1, 2.0).is_err());
        let g = GameParams::new(0.5, 0.9, 3.0).unwrap();
        assert_eq!(g.indifference(), 0.25);
    }

    #[test]
    fn json_round_trip_and_field_names() {
        let text = r#"{"p": {"family": "affine", "slope": 0.3, "intercept": 0.1},
                       "t": {"family": "linear", "coefficient": 0.8},
                       "f": {"family": "linear", "coefficient": 0.1}}"#;
        let m = ModelSpec::from_json(text).unwrap();
        assert_eq!(m, sample_model());
        let back: ModelSpec = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);

        let power = r#"{"p": {"family": "power", "exponent": 0.25},
                        "t": {"family": "linear", "coefficient": 0.9},
                        "f": {"family": "linear", "coefficient": 0.0}}"#;
        assert_eq!(ModelSpec::from_json(power).unwrap().p, CurveSpec::power(0.25));

        let typo = r#"{"p": {"family": "affine", "slop": 0.3, "intercept": 0.1},
                       "t": {"family": "linear", "coefficient": 0.8},
                       "f": {"family": "linear", "coefficient": 0.1}}"#;
        assert!(ModelSpec::from_json(typo).is_err());
    }

    /// Logistic-shaped curve with no closed-form inverse in this crate; it
    /// exercises the bisection fallback.
    struct Smoothstep;

    impl MonotoneCurve for Smoothstep {
        fn eval(&self, x: f64) -> f64 {
            0.05 + 0.9 * x * x * (3.0 - 2.0 * x)
        }
    }

    #[test]
    fn bisection_fallback_round_trip() {
        for k in 0..=200 {
            let v = 0.05 + 0.9 * k as f64 / 200.0;
            let x = Smoothstep.invert(v).unwrap();
            assert!((Smoothstep.eval(x) - v).abs() <= 1e-9, "v = {v}");
        }
        assert!(Smoothstep.invert(0.99).is_err());
    }
}
