//! Built-in scenarios and symbol files.

use num_complex::Complex64;
use qd_core::numkernel::field::format_rational;
use qd_core::numkernel::GaussRat;
use qd_core::quaddom::{example1_build, example2_build, example3_build, Example1Scenario, Example2Params, Example2Scenario};
use qd_core::symbols::{MatrixSymbol, SymbolSpec};
use serde_json::{json, Value};

use crate::config::{Input, RunConfig, ScenarioId};
use crate::error::CliError;

/// Disc root of `D` taken as `γ₁` for the built-in Example 2.
pub const EX2_BRANCH_PICK: usize = 0;

pub enum Loaded {
    Ex1(Box<Example1Scenario>),
    Ex2(Box<Example2Scenario>),
    Ex3(MatrixSymbol),
    File { f: MatrixSymbol, spec: SymbolSpec },
}

impl Loaded {
    pub fn load(cfg: &RunConfig) -> Result<Loaded, CliError> {
        Ok(match &cfg.input {
            Input::Builtin(ScenarioId::Ex1) => Loaded::Ex1(Box::new(example1_build(cfg.ex1_a, cfg.ex1_beta)?)),
            Input::Builtin(ScenarioId::Ex2) => {
                Loaded::Ex2(Box::new(example2_build(&Example2Params::paper(), EX2_BRANCH_PICK)?))
            }
            Input::Builtin(ScenarioId::Ex3) => Loaded::Ex3(example3_build()?),
            Input::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                let spec = SymbolSpec::from_json(&text)?;
                Loaded::File { f: spec.build()?, spec }
            }
        })
    }

    pub fn symbol(&self) -> &MatrixSymbol {
        match self {
            Loaded::Ex1(s) => &s.f,
            Loaded::Ex2(s) => &s.f,
            Loaded::Ex3(f) | Loaded::File { f, .. } => f,
        }
    }

    /// The symbol as a JSON document; files are echoed as given.
    pub fn symbol_spec(&self) -> SymbolSpec {
        match self {
            Loaded::File { spec, .. } => spec.clone(),
            other => SymbolSpec::from_symbol(other.symbol()),
        }
    }

    /// Scenario parameters, exact where the registry pins them.
    pub fn parameters(&self) -> Value {
        let pair = |z: Complex64| [z.re, z.im];
        let exact = |z: &GaussRat| [format_rational(&z.re), format_rational(&z.im)];
        match self {
            Loaded::Ex1(s) => json!({ "scenario": "ex1", "a": pair(s.a), "beta": pair(s.beta) }),
            Loaded::Ex2(s) => json!({
                "scenario": "ex2",
                "lambda": exact(&s.params.lambda),
                "a": format_rational(&s.params.a),
                "c": format_rational(&s.params.c),
                "L": exact(&s.params.l),
                "branch_pick": EX2_BRANCH_PICK,
            }),
            Loaded::Ex3(_) => json!({
                "scenario": "ex3",
                "lambda": qd_core::quaddom::example3::EXAMPLE3_LAMBDA,
                "eps2": "exp(2 pi i / 3)",
            }),
            Loaded::File { .. } => json!({ "scenario": "file" }),
        }
    }
}
