//! Command-line front end.
//!
//! A run reads a JSON config, applies flag overrides, executes one command
//! and reports through the supplied writers. Exit codes: 0 success, 1 a
//! reproduction or verification check failed, 2 usage, config or solver
//! error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::equilibrium::{solve_equilibrium, thresholds, BehaviorProfile, Region};
use crate::error::Error;
use crate::metrics::social_cost;
use crate::model::{GameParams, ModelSpec};
use crate::optimize::{
    optimize_beta_accident, optimize_beta_social, region_map, sweep_beta, Objective, SweepRecord,
    DEFAULT_SOCIAL_GRID,
};
use crate::oracle::verify_equilibrium;
use crate::scenarios::reference_checks;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const SWEEP_HEADER: &str = "beta,region,P,S,x_n,x_vu,x_vs,Q";
const DEFAULT_SWEEP_N: usize = 101;
const DEFAULT_VERIFY_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "v2v-signal", version, about = "Equilibrium solver for the V2V hazard-signaling game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Probability that a detected hazard is displayed
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// V2V penetration
    #[arg(long, global = true)]
    pub y: Option<f64>,
    /// Accident cost, in units of the regret cost of needless caution
    #[arg(long, global = true)]
    pub r: Option<f64>,
    /// Number of beta values in a sweep.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub objective: Option<ObjectiveArg>,
    /// Write CSV output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Solve one game and print region, profile, P, Q and S.
    Solve,
    /// Print the region and indifference thresholds of one game.
    Classify,
    /// Solve on an even beta grid and emit CSV.
    Sweep,
    /// Find the best beta for P or S.
    Optimize,
    /// Emit the region index of every (r, y) cell as a CSV matrix.
    RegionMap,
    /// Check a profile (default: the solver's) against the equilibrium conditions.
    Verify,
    /// Recompute the published reference values.
    ReproducePaper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum ObjectiveArg {
    #[value(name = "P")]
    #[serde(rename = "P")]
    P,
    #[value(name = "S")]
    #[serde(rename = "S")]
    S,
}

impl From<ObjectiveArg> for Objective {
    fn from(arg: ObjectiveArg) -> Self {
        match arg {
            ObjectiveArg::P => Objective::AccidentProbability,
            ObjectiveArg::S => Objective::SocialCost,
        }
    }
}

/// A list of values, or `n` evenly spaced values from `start` to `stop`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, n: usize },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::Values(ref v) => v.clone(),
            Grid::Range { start, stop, n } => match n {
                0 => Vec::new(),
                1 => vec![start],
                _ => (0..n)
                    .map(|k| {
                        if k + 1 == n {
                            stop
                        } else {
                            start + (stop - start) * k as f64 / (n - 1) as f64
                        }
                    })
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpec {
    pub beta: Option<f64>,
    pub y: Option<f64>,
    pub r: Option<f64>,
}

/// Contents of the `--config` file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    #[serde(default)]
    pub game: GameSpec,
    pub n: Option<usize>,
    pub objective: Option<ObjectiveArg>,
    pub grid_size: Option<usize>,
    pub y_grid: Option<Grid>,
    pub r_grid: Option<Grid>,
    pub profile: Option<BehaviorProfile>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    /// Applies command-line overrides.
    pub fn with_overrides(mut self, cli: &Cli) -> Self {
        self.game.beta = cli.beta.or(self.game.beta);
        self.game.y = cli.y.or(self.game.y);
        self.game.r = cli.r.or(self.game.r);
        self.n = cli.n.or(self.n);
        self.objective = cli.objective.or(self.objective);
        self.out = cli.out.clone().or(self.out);
        self
    }

    fn validated_model(&self) -> Result<ModelSpec, String> {
        let diags = self.model.validate();
        if diags.is_empty() {
            Ok(self.model)
        } else {
            Err(Error::InvalidModel(diags).to_string())
        }
    }

    fn y_r(&self) -> Result<(f64, f64), String> {
        let y = self.game.y.ok_or("missing y (config game.y or --y)")?;
        let r = self.game.r.ok_or("missing r (config game.r or --r)")?;
        // validates ranges
        GameParams::new(0.0, y, r).map_err(|e| e.to_string())?;
        Ok((y, r))
    }

    fn game(&self) -> Result<GameParams, String> {
        let (y, r) = self.y_r()?;
        let beta = self.game.beta.ok_or("missing beta (config game.beta or --beta)")?;
        GameParams::new(beta, y, r).map_err(|e| e.to_string())
    }
}

/// Formats a number with 12 significant digits, printed in its shortest
/// round-trip form. Magnitudes outside `[1e-6, 1e15)` use exponent notation.
pub fn fmt_num(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let magnitude = rounded.abs();
    if rounded == 0.0 {
        "0".to_string()
    } else if !(1e-6..1e15).contains(&magnitude) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for rec in records {
        let fields = [
            fmt_num(rec.beta.get()),
            rec.region.to_string(),
            fmt_num(rec.p.get()),
            fmt_num(rec.s),
            fmt_num(rec.profile.x_n),
            fmt_num(rec.profile.x_vu),
            fmt_num(rec.profile.x_vs),
            fmt_num(rec.q.get()),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Header row holds the y grid; each row starts with its r value.
pub fn region_map_csv(y_grid: &[f64], r_grid: &[f64], cells: &[Vec<Region>]) -> String {
    let mut out = String::from("r\\y");
    for &y in y_grid {
        out.push(',');
        out.push_str(&fmt_num(y));
    }
    out.push('\n');
    for (&r, row) in r_grid.iter().zip(cells) {
        out.push_str(&fmt_num(r));
        for region in row {
            out.push(',');
            out.push_str(&region.index().to_string());
        }
        out.push('\n');
    }
    out
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

enum Failure {
    Usage(String),
    Check,
}

impl From<String> for Failure {
    fn from(msg: String) -> Self {
        Failure::Usage(msg)
    }
}

impl From<&str> for Failure {
    fn from(msg: &str) -> Self {
        Failure::Usage(msg.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

/// Runs one invocation and returns its exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut io = Io { stdout, stderr };
    match dispatch(cli, &mut io) {
        Ok(()) => EXIT_OK,
        Err(Failure::Check) => EXIT_CHECK_FAILED,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, io: &mut Io<'_>) -> Result<(), Failure> {
    if cli.command == Command::ReproducePaper {
        return cmd_reproduce(cli.out.as_deref(), io);
    }
    let path = cli.config.as_deref().ok_or("this command needs --config PATH")?;
    let config = RunConfig::load(path)?.with_overrides(cli);
    let model = config.validated_model()?;
    match cli.command {
        Command::Solve => cmd_solve(&model, &config, io),
        Command::Classify => cmd_classify(&model, &config, io),
        Command::Sweep => cmd_sweep(&model, &config, io),
        Command::Optimize => cmd_optimize(&model, &config, io),
        Command::RegionMap => cmd_region_map(&model, &config, io),
        Command::Verify => cmd_verify(&model, &config, io),
        Command::ReproducePaper => unreachable!("handled above"),
    }
}

fn emit(out: Option<&Path>, text: &str, io: &mut Io<'_>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => Ok(io.stdout.write_all(text.as_bytes())?),
    }
}

fn cmd_solve(model: &ModelSpec, config: &RunConfig, io: &mut Io<'_>) -> Result<(), Failure> {
    let game = config.game()?;
    let eq = solve_equilibrium(model, &game)?;
    let s = social_cost(model, &game, &eq);
    let x = eq.profile;
    writeln!(io.stdout, "region   {}", eq.region)?;
    writeln!(
        io.stdout,
        "profile  x_n={} x_vu={} x_vs={}",
        fmt_num(x.x_n),
        fmt_num(x.x_vu),
        fmt_num(x.x_vs)
    )?;
    writeln!(io.stdout, "P        {}", fmt_num(eq.p.get()))?;
    writeln!(io.stdout, "Q        {}", fmt_num(eq.q.get()))?;
    writeln!(io.stdout, "S        {}", fmt_num(s))?;
    Ok(())
}

fn cmd_classify(model: &ModelSpec, config: &RunConfig, io: &mut Io<'_>) -> Result<(), Failure> {
    let game = config.game()?;
    let region = crate::equilibrium::classify_region(model, &game)?;
    let th = thresholds(model, &game);
    writeln!(io.stdout, "region   {region}")?;
    let degenerate = if th.vs_degenerate { " (no warnings)" } else { "" };
    writeln!(io.stdout, "P_vs     {}{degenerate}", fmt_num(th.p_vs.get()))?;
    writeln!(io.stdout, "P_n      {}", fmt_num(th.p_n.get()))?;
    writeln!(io.stdout, "P_vu     {}", fmt_num(th.p_vu.get()))?;
    Ok(())
}

fn cmd_sweep(model: &ModelSpec, config: &RunConfig, io: &mut Io<'_>) -> Result<(), Failure> {
    let (y, r) = config.y_r()?;
    let records = sweep_beta(model, y, r, config.n.unwrap_or(DEFAULT_SWEEP_N))?;
    emit(config.out.as_deref(), &sweep_csv(&records), io)
}

fn cmd_optimize(model: &ModelSpec, config: &RunConfig, io: &mut Io<'_>) -> Result<(), Failure> {
    let (y, r) = config.y_r()?;
    let objective: Objective = config.objective.unwrap_or(ObjectiveArg::S).into();
    let outcome = match objective {
        Objective::AccidentProbability => optimize_beta_accident(model, y, r)?,
        Objective::SocialCost => optimize_beta_social(model, y, r, config.grid_size.unwrap_or(DEFAULT_SOCIAL_GRID))?,
    };
    writeln!(io.stdout, "objective  {}", outcome.objective)?;
    writeln!(io.stdout, "best_beta  {}", fmt_num(outcome.best_beta.get()))?;
    writeln!(io.stdout, "value      {}", fmt_num(outcome.best_value))?;
    if let Some(path) = config.out.as_deref() {
        let mut csv = String::from("beta,value\n");
        for c in &outcome.evidence {
            csv.push_str(&format!("{},{}\n", fmt_num(c.beta), fmt_num(c.value)));
        }
        emit(Some(path), &csv, io)?;
    }
    Ok(())
}

fn cmd_region_map(model: &ModelSpec, config: &RunConfig, io: &mut Io<'_>) -> Result<(), Failure> {
    let beta = config.game.beta.ok_or("missing beta (config game.beta or --beta)")?;
    let y_grid = config.y_grid.as_ref().ok_or("region-map needs y_grid in the config")?.values();
    let r_grid = config.r_grid.as_ref().ok_or("region-map needs r_grid in the config")?.values();
    let cells = region_map(model, beta, &y_grid, &r_grid)?;
    emit(config.out.as_deref(), &region_map_csv(&y_grid, &r_grid, &cells), io)
}

fn cmd_verify(model: &ModelSpec, config: &RunConfig, io: &mut Io<'_>) -> Result<(), Failure> {
    let game = config.game()?;
    let profile = match config.profile {
        Some(p) => p,
        None => solve_equilibrium(model, &game)?.profile,
    };
    let tol = config.tol.unwrap_or(DEFAULT_VERIFY_TOL);
    let report = verify_equilibrium(model, &game, &profile, tol)?;
    writeln!(io.stdout, "profile   {profile}")?;
    writeln!(io.stdout, "P         {}", fmt_num(report.p.get()))?;
    writeln!(io.stdout, "residual  {}", fmt_num(report.consistency_residual))?;
    for check in &report.details {
        let gap = check.gap.map_or_else(|| "n/a".to_string(), fmt_num);
        let status = match (check.triggered, check.satisfied) {
            (false, _) => "inactive",
            (true, true) => "ok",
            (true, false) => "VIOLATED",
        };
        writeln!(io.stdout, "{:<12} gap={gap:<20} {status}", check.condition.label())?;
    }
    writeln!(io.stdout, "passed    {}", report.passed)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_reproduce(out: Option<&Path>, io: &mut Io<'_>) -> Result<(), Failure> {
    let checks = reference_checks()?;
    let mut csv = String::from("scenario,quantity,expected,computed,abs_diff,tol,pass\n");
    writeln!(
        io.stdout,
        "{:<28} {:<32} {:>10} {:>16} {:>12} {:>8}  result",
        "scenario", "quantity", "expected", "computed", "|diff|", "tol"
    )?;
    for c in &checks {
        let verdict = if c.passed() { "pass" } else { "FAIL" };
        writeln!(
            io.stdout,
            "{:<28} {:<32} {:>10} {:>16} {:>12} {:>8}  {verdict}",
            c.scenario,
            c.quantity,
            fmt_num(c.expected),
            fmt_num(c.computed),
            format!("{:.2e}", c.abs_diff()),
            fmt_num(c.tol),
        )?;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.scenario,
            c.quantity,
            fmt_num(c.expected),
            fmt_num(c.computed),
            fmt_num(c.abs_diff()),
            fmt_num(c.tol),
            c.passed()
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(io.stdout, "{} of {} checks passed", checks.len() - failed, checks.len())?;
    if let Some(path) = out {
        emit(Some(path), &csv, io)?;
    }
    if failed == 0 {
        Ok(())
    } else {
        let _ = writeln!(io.stderr, "{failed} reference check(s) failed");
        Err(Failure::Check)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(2.0e-15), "2e-15");
        assert_eq!(fmt_num(5.639932965123e-14), "5.63993296512e-14");
        assert_eq!(fmt_num(20.0), "20");
    }

    #[test]
    fn grid_values() {
        let g = Grid::Range { start: 0.0, stop: 1.0, n: 3 };
        assert_eq!(g.values(), vec![0.0, 0.5, 1.0]);
        let g: Grid = serde_json::from_str("[1.5, 2.0]").unwrap();
        assert_eq!(g.values(), vec![1.5, 2.0]);
        let g: Grid = serde_json::from_str(r#"{"start": 1.5, "stop": 3.0, "n": 4}"#).unwrap();
        assert_eq!(g.values(), vec![1.5, 2.0, 2.5, 3.0]);
    }

    #[test]
    fn config_parses_and_overrides() {
        let text = r#"{
            "model": {
                "p": {"family": "affine", "slope": 0.3, "intercept": 0.1},
                "t": {"family": "linear", "coefficient": 0.8},
                "f": {"family": "linear", "coefficient": 0.1}
            },
            "game": {"beta": 1.0, "y": 0.9, "r": 3.0},
            "objective": "P"
        }"#;
        let config: RunConfig = serde_json::from_str(text).unwrap();
        assert_eq!(config.objective, Some(ObjectiveArg::P));
        let cli = Cli::parse_from(["v2v-signal", "solve", "--beta", "0.5"]);
        let config = config.with_overrides(&cli);
        assert_eq!(config.game().unwrap().beta.get(), 0.5);
    }

    #[test]
    fn config_rejects_unknown_fields() {
        let text = r#"{"model": {"p": {"family": "power", "exponent": 2.0},
            "t": {"family": "linear", "coefficient": 0.8},
            "f": {"family": "linear", "coefficient": 0.1}}, "bogus": 1}"#;
        assert!(serde_json::from_str::<RunConfig>(text).is_err());
    }
}
