//! Command-line grammar and the validated run configuration it produces.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qd_core::numkernel::Backend;
use qd_core::winding::GridSpec;
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioId {
    Ex1,
    Ex2,
    Ex3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum Input {
    Builtin(ScenarioId),
    File(PathBuf),
}

impl Input {
    /// `ex1`, `ex2`, `ex3` name built-in scenarios; anything else is a path
    /// to a symbol JSON file.
    pub fn parse(s: &str) -> Input {
        match ScenarioId::from_str(s, true) {
            Ok(id) => Input::Builtin(id),
            Err(_) => Input::File(PathBuf::from(s)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    SymbolBuild,
    CurveTrace,
    DomainVerify,
    ParamsCompute,
    QuadratureCheck,
    DefiningEq,
    Scenario,
}

/// Pipeline stages requested for a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Stages {
    pub trace: bool,
    pub verify: bool,
    pub params: bool,
    pub quadrature: bool,
    pub defining_eq: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Residual bound for computed roots and node locations.
    pub root: f64,
    /// Relative singular-value cutoff for numerical rank.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { root: 1e-8, rank: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: Input,
    pub stages: Stages,
    pub tolerances: Tolerances,
    pub backend: Backend,
    pub output_dir: PathBuf,
    /// Seeds the pseudo-random spot checks of the winding labels.
    pub seed: u64,
    /// Initial number of circle samples for branch tracing.
    pub samples: usize,
    pub grid: GridSpec,
    pub report_only: bool,
    /// Example 1 parameters `a` and `β`.
    pub ex1_a: Complex64,
    pub ex1_beta: Complex64,
}

impl RunConfig {
    pub fn new(command: CommandKind, input: Input) -> RunConfig {
        RunConfig {
            command,
            input,
            stages: Stages::for_command(command),
            tolerances: Tolerances::default(),
            backend: Backend::Float,
            output_dir: PathBuf::from("."),
            seed: 42,
            samples: 512,
            grid: GridSpec { width: 512, height: 512 },
            report_only: false,
            ex1_a: Complex64::new(2.0, 0.0),
            ex1_beta: Complex64::new(0.3, 0.0),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("tol-root", self.tolerances.root), ("tol-rank", self.tolerances.rank)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Usage(format!("--{name} must be positive, got {v}")));
            }
        }
        if self.samples < 8 {
            return Err(CliError::Usage(format!("--samples must be at least 8, got {}", self.samples)));
        }
        if self.grid.width < 4 || self.grid.height < 4 {
            return Err(CliError::Usage("--grid needs at least 4 cells per side".into()));
        }
        Ok(())
    }
}

impl Stages {
    pub fn for_command(c: CommandKind) -> Stages {
        let mut s = Stages::default();
        match c {
            CommandKind::SymbolBuild | CommandKind::Scenario => {}
            CommandKind::CurveTrace => s.trace = true,
            CommandKind::DomainVerify => {
                s.trace = true;
                s.verify = true;
            }
            CommandKind::ParamsCompute => s.params = true,
            CommandKind::QuadratureCheck => s.quadrature = true,
            CommandKind::DefiningEq => s.defining_eq = true,
        }
        s
    }
}

#[derive(Debug, Parser)]
#[command(name = "qdom", version, about = "Quadrature domains generated by rational normal matrix symbols")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Initial circle samples for branch tracing.
    #[arg(long, global = true, default_value_t = 512)]
    pub samples: usize,
    /// Grid resolution for winding labels and area integrals.
    #[arg(long, global = true, num_args = 2, value_names = ["W", "H"], default_values_t = [512, 512])]
    pub grid: Vec<usize>,
    #[arg(long = "tol-root", global = true, default_value_t = 1e-8)]
    pub tol_root: f64,
    #[arg(long = "tol-rank", global = true, default_value_t = 1e-8)]
    pub tol_rank: f64,
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Float)]
    pub backend: BackendArg,
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Exit zero even when a checked invariant fails.
    #[arg(long = "report-only", global = true)]
    pub report_only: bool,
    /// Example 1 pole location, e.g. `2` or `1.5+0.5i`.
    #[arg(long, global = true, default_value = "2")]
    pub a: Complex64,
    /// Example 1 residue parameter.
    #[arg(long, global = true, default_value = "0.3")]
    pub beta: Complex64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BackendArg {
    Float,
    Exact,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Build and classify a symbol.
    SymbolBuild { input: String },
    /// Trace the eigenvalue curve on the circle.
    CurveTrace { input: String },
    /// Check that the symbol generates a quadrature domain.
    DomainVerify { input: String },
    /// Compute the subnormal matrix parameters (C, Λ).
    ParamsCompute { input: String },
    /// Nodes, weights and the quadrature identity (Example 1).
    QuadratureCheck { input: String },
    /// Polynomial defining equation of the boundary curve.
    DefiningEq { input: String },
    /// Run selected stages on a built-in scenario.
    Scenario {
        #[arg(value_enum)]
        id: ScenarioId,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        params: bool,
        #[arg(long)]
        quadrature: bool,
        #[arg(long = "defining-eq")]
        defining_eq: bool,
    },
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let (command, input, stages) = match self.command {
            Cmd::SymbolBuild { input } => (CommandKind::SymbolBuild, input, None),
            Cmd::CurveTrace { input } => (CommandKind::CurveTrace, input, None),
            Cmd::DomainVerify { input } => (CommandKind::DomainVerify, input, None),
            Cmd::ParamsCompute { input } => (CommandKind::ParamsCompute, input, None),
            Cmd::QuadratureCheck { input } => (CommandKind::QuadratureCheck, input, None),
            Cmd::DefiningEq { input } => (CommandKind::DefiningEq, input, None),
            Cmd::Scenario { id, trace, verify, params, quadrature, defining_eq } => {
                let name = id.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
                // Verification needs the trace.
                let stages = Stages { trace: trace || verify, verify, params, quadrature, defining_eq };
                (CommandKind::Scenario, name, Some(stages))
            }
        };
        let g = self.global;
        let mut cfg = RunConfig::new(command, Input::parse(&input));
        if let Some(s) = stages {
            cfg.stages = s;
        }
        cfg.tolerances = Tolerances { root: g.tol_root, rank: g.tol_rank };
        cfg.backend = match g.backend {
            BackendArg::Float => Backend::Float,
            BackendArg::Exact => Backend::Exact,
        };
        cfg.output_dir = g.out;
        cfg.seed = g.seed;
        cfg.samples = g.samples;
        cfg.grid = GridSpec { width: g.grid[0], height: g.grid[1] };
        cfg.report_only = g.report_only;
        cfg.ex1_a = g.a;
        cfg.ex1_beta = g.beta;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let mut full = vec!["qdom"];
        full.extend_from_slice(args);
        Cli::try_parse_from(full).map_err(|e| CliError::Usage(e.to_string()))?.into_config()
    }

    #[test]
    fn defaults() {
        let c = parse(&["curve-trace", "ex3"]).unwrap();
        assert_eq!(c.input, Input::Builtin(ScenarioId::Ex3));
        assert_eq!(c.seed, 42);
        assert!(c.stages.trace && !c.stages.verify);
        assert_eq!(c.grid, GridSpec { width: 512, height: 512 });
    }

    #[test]
    fn global_flags_after_subcommand() {
        let c = parse(&[
            "scenario", "ex1", "--params", "--quadrature", "--grid", "256", "128", "--backend", "exact", "--a",
            "1.5+0.5i", "--seed", "7",
        ])
        .unwrap();
        assert!(c.stages.params && c.stages.quadrature && !c.stages.trace);
        assert_eq!(c.grid, GridSpec { width: 256, height: 128 });
        assert_eq!(c.backend, Backend::Exact);
        assert_eq!(c.ex1_a, Complex64::new(1.5, 0.5));
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn verify_implies_trace() {
        let c = parse(&["scenario", "ex2", "--verify"]).unwrap();
        assert!(c.stages.trace && c.stages.verify);
    }

    #[test]
    fn file_input() {
        let c = parse(&["params-compute", "sym.json"]).unwrap();
        assert_eq!(c.input, Input::File(PathBuf::from("sym.json")));
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        assert!(matches!(parse(&["curve-trace", "ex1", "--tol-rank", "0"]), Err(CliError::Usage(_))));
        assert!(matches!(parse(&["curve-trace", "ex1", "--tol-root=-1e-3"]), Err(CliError::Usage(_))));
    }
}
