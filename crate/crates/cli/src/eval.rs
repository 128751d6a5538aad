//! The `eval` command: apply one operator to parsed expressions.

use std::sync::Arc;

use bvcalc_core::densities::{
    canonical_delta_half, delta_mu_dressed, delta_s, divergence, hat_delta, tilde_delta, ReferenceDensity, SDensity,
};
use bvcalc_core::integration::{integrate_chart, LagrangianGauge};
use bvcalc_core::symplectic::{bv_bracket_dressed, dressed_laplacian, hamiltonian_vf, SuperVectorField};
use bvcalc_core::{rat, ChartMap, GeneratorTable, Rat, SuperFunction};
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::parse::{parse_function, parse_rational, parse_value, ParseError};

pub const OPERATORS: [&str; 12] = [
    "laplacian", "bracket", "delta_mu", "delta_s", "canonical", "hat", "tilde", "div", "ham", "berezinian",
    "restrict", "integrate",
];

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error in {which}: {err}")]
    Parse { which: String, err: ParseError },
    #[error("{0}")]
    Math(#[from] bvcalc_core::Error),
}

impl EvalError {
    /// Usage and parse problems exit with 2, mathematical failures with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            EvalError::Math(_) => 1,
            _ => 2,
        }
    }
}

/// Everything `eval` needs. The `--json` record embeds this verbatim, so a
/// printed record can be fed back through `--spec`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalRequest {
    pub op: String,
    pub exprs: Vec<String>,
    pub pairs: usize,
    pub pattern: Option<String>,
    pub params: Vec<String>,
    pub mu: Option<String>,
    pub s: Option<String>,
    pub psi: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalRecord {
    pub schema_version: u32,
    #[serde(flatten)]
    pub request: EvalRequest,
    pub result: String,
}

fn usage<T>(msg: impl Into<String>) -> Result<T, EvalError> {
    Err(EvalError::Usage(msg.into()))
}

impl EvalRequest {
    /// The chart: standard `q/p` names, or `x/y` names once a parity pattern
    /// or parameters are given.
    pub fn table(&self) -> Result<Arc<GeneratorTable>, EvalError> {
        if self.pairs == 0 {
            return usage("--pairs must be at least 1");
        }
        if self.pattern.is_none() && self.params.is_empty() {
            return Ok(GeneratorTable::darboux(self.pairs));
        }
        let mut flipped = vec![false; self.pairs];
        if let Some(p) = &self.pattern {
            if p.chars().count() != self.pairs {
                return usage(format!("--pattern needs one letter per pair, got {:?} for {} pairs", p, self.pairs));
            }
            for (slot, c) in flipped.iter_mut().zip(p.chars()) {
                *slot = match c {
                    'o' => false,
                    'e' => true,
                    _ => return usage(format!("--pattern letters are 'o' or 'e', got {c:?}")),
                };
            }
        }
        Ok(GeneratorTable::builder(self.pairs).pattern(&flipped).params(&self.params).xy_names(true).build()?)
    }

    fn arity(&self) -> Result<(), EvalError> {
        let n = self.pairs;
        let want = match self.op.as_str() {
            "bracket" => 2,
            "div" | "berezinian" => 2 * n,
            op if OPERATORS.contains(&op) => 1,
            op => return usage(format!("unknown operator {op:?}; expected one of {}", OPERATORS.join(", "))),
        };
        if self.exprs.len() != want {
            return usage(format!("{} takes {want} expression(s), got {}", self.op, self.exprs.len()));
        }
        Ok(())
    }

    pub fn run(&self) -> Result<String, EvalError> {
        self.arity()?;
        let t = self.table()?;
        let value = |i: usize| {
            parse_value(&self.exprs[i], &t).map_err(|err| EvalError::Parse { which: format!("argument {}", i + 1), err })
        };
        let function = |i: usize| {
            parse_function(&self.exprs[i], &t)
                .map_err(|err| EvalError::Parse { which: format!("argument {}", i + 1), err })
        };
        let functions = || (0..self.exprs.len()).map(function).collect::<Result<Vec<_>, _>>();
        Ok(match self.op.as_str() {
            "laplacian" => dressed_laplacian(&value(0)?).to_string(),
            "bracket" => bv_bracket_dressed(&function(0)?, &value(1)?).to_string(),
            "delta_mu" => delta_mu_dressed(&self.mu(&t)?, &value(0)?).to_string(),
            "delta_s" => delta_s(&self.mu(&t)?, &SDensity::new(self.weight()?, value(0)?))?.to_string(),
            "canonical" => canonical_delta_half(&SDensity::new(rat(1, 2), value(0)?))?.to_string(),
            "hat" => hat_delta(&self.mu(&t)?, &function(0)?)?.to_string(),
            "tilde" => tilde_delta(&self.mu(&t)?, &function(0)?).to_string(),
            "div" => {
                let mut comps = functions()?;
                let down = comps.split_off(self.pairs);
                divergence(&self.mu(&t)?, &SuperVectorField::new(&t, comps, down)?).to_string()
            }
            "ham" => hamiltonian_vf(&function(0)?)?.to_string(),
            "berezinian" => {
                let mut images = functions()?;
                let odd = images.split_off(self.pairs);
                ChartMap::new(&t, &t, images, odd)?.berezinian()?.to_string()
            }
            "restrict" => self.gauge(&t)?.restrict_dressed(&value(0)?)?.to_string(),
            "integrate" => match &self.psi {
                Some(_) => self.gauge(&t)?.integrate(&value(0)?)?.to_string(),
                None => integrate_chart(&value(0)?)?.to_string(),
            },
            _ => unreachable!("arity checked the operator"),
        })
    }

    pub fn record(&self) -> Result<EvalRecord, EvalError> {
        Ok(EvalRecord { schema_version: crate::report::SCHEMA_VERSION, request: self.clone(), result: self.run()? })
    }

    /// `--mu` is written as a value `c·exp(S)` with a nonzero constant `c`;
    /// absent means the standard density.
    fn mu(&self, t: &Arc<GeneratorTable>) -> Result<ReferenceDensity, EvalError> {
        let Some(src) = &self.mu else { return Ok(ReferenceDensity::standard(t)) };
        let v = parse_value(src, t).map_err(|err| EvalError::Parse { which: "--mu".into(), err })?;
        let c = v.base().body().as_constant().filter(|c| !c.is_zero() && SuperFunction::constant(t, c.clone()) == *v.base());
        match c {
            Some(c) => Ok(ReferenceDensity::new(c, v.exponent().clone())?),
            None => usage("--mu must be a nonzero constant times exp(S)"),
        }
    }

    fn weight(&self) -> Result<Rat, EvalError> {
        match &self.s {
            Some(src) => parse_rational(src).map_err(|err| EvalError::Parse { which: "--s".into(), err }),
            None => Ok(rat(1, 2)),
        }
    }

    fn gauge(&self, t: &Arc<GeneratorTable>) -> Result<LagrangianGauge, EvalError> {
        match &self.psi {
            Some(src) => {
                let psi = parse_function(src, t).map_err(|err| EvalError::Parse { which: "--psi".into(), err })?;
                Ok(LagrangianGauge::new(psi)?)
            }
            None => Ok(LagrangianGauge::trivial(t)),
        }
    }
}

/// Shorthand used by tests and examples.
pub fn eval(op: &str, exprs: &[&str], pairs: usize) -> Result<String, EvalError> {
    EvalRequest { op: op.into(), exprs: exprs.iter().map(|s| s.to_string()).collect(), pairs, ..Default::default() }
        .run()
}
