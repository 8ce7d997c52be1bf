//! Random valid games shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use v2v_signal::{CurveSpec, GameParams, ModelSpec};

/// Affine or power accident curve, linear detection and false-positive
/// curves with `f < t` (or `f = 0`).
pub fn model<R: Rng>(rng: &mut R) -> ModelSpec {
    loop {
        let p = if rng.gen_bool(0.5) {
            let slope: f64 = rng.gen_range(0.05..0.9);
            let intercept = rng.gen_range(0.0..(1.0 - slope).min(0.3));
            CurveSpec::affine(slope, intercept)
        } else {
            CurveSpec::power(rng.gen_range(0.25f64.ln()..4f64.ln()).exp())
        };
        let t = rng.gen_range(0.2..1.0);
        let f = if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.0..0.95) * t };
        let m = ModelSpec::new(p, CurveSpec::linear(t), CurveSpec::linear(f));
        if m.validate().is_empty() {
            return m;
        }
    }
}

pub fn beta<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..20) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.gen_range(0.0..=1.0),
    }
}

pub fn penetration<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..50) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.gen_range(0.02..0.98),
    }
}

pub fn cost<R: Rng>(rng: &mut R) -> f64 {
    1.0 + rng.gen_range(0.001..20.0)
}

pub fn game<R: Rng>(rng: &mut R) -> GameParams {
    GameParams::new(beta(rng), penetration(rng), cost(rng)).unwrap()
}

pub fn model_and_game<R: Rng>(rng: &mut R) -> (ModelSpec, GameParams) {
    (model(rng), game(rng))
}

pub fn linear_model(p: CurveSpec, t: f64, f: f64) -> ModelSpec {
    ModelSpec::new(p, CurveSpec::linear(t), CurveSpec::linear(f))
}
