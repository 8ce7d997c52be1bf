use thiserror::Error;

use crate::model::Diagnostic;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function being evaluated.
    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// `invert_p` was asked for a value that `p` never attains on [0, 1].
    #[error("value {value} is outside the range [{lo}, {hi}] of p")]
    Range { value: f64, lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid game parameters: {0}")]
    InvalidGame(String),

    #[error("invalid model: {}", join_diagnostics(.0))]
    InvalidModel(Vec<Diagnostic>),

    /// A behavior profile admits several consistent accident probabilities
    /// and the equilibrium conditions disagree between them.
    #[error("profile admits {roots} consistent accident probabilities with conflicting verdicts")]
    Ambiguous { roots: usize },

    /// Broken internal invariant; indicates a bug or an unvalidated model.
    #[error("internal error: {0}")]
    Internal(String),
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
