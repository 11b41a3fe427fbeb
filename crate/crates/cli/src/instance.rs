//! Instance files. Every number is a string: an exact decimal or fraction
//! (`"0.05"`, `"1/20"`) or a preset token (`"sqrt(2)"`, `"-pi"`, `"log(3)"`,
//! `"e"`, `"phi"`).

use std::cmp::Ordering;
use std::path::Path;

use kronecker_core::precision::DEFAULT_BITS;
use kronecker_core::witness::KroneckerInstance;
use kronecker_core::{LinearFormSystem, Real, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CliResult};

fn default_bits() -> u32 {
    DEFAULT_BITS
}

fn zero_token() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceFile {
    Kronecker(KroneckerFile),
    LinearSystem(LinearSystemFile),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KroneckerFile {
    pub lambda: Vec<String>,
    pub alpha: Vec<String>,
    pub epsilon: Vec<String>,
    #[serde(default = "zero_token")]
    pub tau: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default = "default_bits")]
    pub precision_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSystemFile {
    pub m: usize,
    pub n: usize,
    /// Row-major `m x n`: entry `i * n + j` is the coefficient of `a_i` in `L_j`.
    pub theta: Vec<String>,
    pub alpha: Vec<String>,
    pub epsilon: Vec<String>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<String>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<String>>,
    #[serde(default = "default_bits")]
    pub precision_bits: u32,
}

/// A linear system with its numbers evaluated at the file's precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearInstance {
    pub sys: LinearFormSystem,
    pub alpha: Vec<Scalar>,
    pub eps: Vec<Scalar>,
    pub x: Option<Vec<Scalar>>,
    pub window: Option<(Vec<Scalar>, Vec<Scalar>)>,
    pub precision_bits: u32,
}

fn reals(field: &str, tokens: &[String]) -> CliResult<Vec<Real>> {
    tokens
        .iter()
        .map(|t| Real::parse(t).map_err(|e| invalid(format!("{field}: {e}"))))
        .collect()
}

fn tokens(values: &[Real]) -> Vec<String> {
    values.iter().map(Real::to_token).collect()
}

fn check_bits(bits: u32) -> CliResult<()> {
    if !(16..=1 << 16).contains(&bits) {
        return Err(invalid(format!("precision_bits = {bits} is outside [16, 65536]")));
    }
    Ok(())
}

impl KroneckerFile {
    /// Parses and range-checks the instance.
    pub fn to_instance(&self) -> CliResult<KroneckerInstance> {
        check_bits(self.precision_bits)?;
        let inst = KroneckerInstance {
            lambda: reals("lambda", &self.lambda)?,
            alpha: reals("alpha", &self.alpha)?,
            eps: reals("epsilon", &self.epsilon)?,
            tau: Real::parse(&self.tau).map_err(|e| invalid(format!("tau: {e}")))?,
            delta: match &self.delta {
                Some(d) => Some(Real::parse(d).map_err(|e| invalid(format!("delta: {e}")))?),
                None => None,
            },
            precision_bits: self.precision_bits,
        };
        inst.validate().map_err(|e| invalid(e.to_string()))?;
        Ok(inst)
    }

    pub fn from_instance(inst: &KroneckerInstance) -> Self {
        KroneckerFile {
            lambda: tokens(&inst.lambda),
            alpha: tokens(&inst.alpha),
            epsilon: tokens(&inst.eps),
            tau: inst.tau.to_token(),
            delta: inst.delta.as_ref().map(Real::to_token),
            precision_bits: inst.precision_bits,
        }
    }
}

fn positive(v: &Scalar) -> bool {
    v.signum_proven() == Some(Ordering::Greater)
}

impl LinearSystemFile {
    pub fn to_instance(&self) -> CliResult<LinearInstance> {
        check_bits(self.precision_bits)?;
        let (m, n, bits) = (self.m, self.n, self.precision_bits);
        if m == 0 || n == 0 {
            return Err(invalid("m and n must be positive"));
        }
        let eval = |field: &str, t: &[String], len: usize| -> CliResult<Vec<Scalar>> {
            if t.len() != len {
                return Err(invalid(format!("{field} has {} entries, expected {len}", t.len())));
            }
            Ok(reals(field, t)?.iter().map(|r| r.eval(bits)).collect())
        };
        let theta = eval("theta", &self.theta, m * n)?;
        let sys = LinearFormSystem::from_row_major(m, n, theta).map_err(|e| invalid(e.to_string()))?;
        let alpha = eval("alpha", &self.alpha, n)?;
        let eps = eval("epsilon", &self.epsilon, n)?;
        let half = Scalar::ratio(1, 2);
        for (j, e) in eps.iter().enumerate() {
            if !positive(e) || e.le_proven(&half) != Some(true) {
                return Err(invalid(format!("epsilon[{j}] = {e} is outside (0, 1/2]")));
            }
        }
        let x = match &self.x {
            Some(t) => {
                let x = eval("X", t, m)?;
                for (i, xi) in x.iter().enumerate() {
                    if xi.le_proven(&Scalar::one()) != Some(false) {
                        return Err(invalid(format!("X[{i}] = {xi} must exceed 1")));
                    }
                }
                Some(x)
            }
            None => None,
        };
        let window = match (&self.tau, &self.t) {
            (Some(tau), Some(len)) => {
                let tau = eval("tau", tau, m)?;
                let len = eval("T", len, m)?;
                if let Some(i) = len.iter().position(|l| l.signum_proven() == Some(Ordering::Less)) {
                    return Err(invalid(format!("T[{i}] is negative")));
                }
                Some((tau, len))
            }
            (None, None) => None,
            _ => return Err(invalid("tau and T must be given together")),
        };
        if x.is_none() && window.is_none() {
            return Err(invalid("a linear system needs X or a (tau, T) window"));
        }
        Ok(LinearInstance {
            sys,
            alpha,
            eps,
            x,
            window,
            precision_bits: bits,
        })
    }
}

impl InstanceFile {
    /// Parses JSON and runs every range check, so a file that loads is a
    /// file the commands accept.
    pub fn parse(json: &str) -> CliResult<Self> {
        let file: InstanceFile = serde_json::from_str(json)?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> CliResult<()> {
        match self {
            InstanceFile::Kronecker(k) => k.to_instance().map(|_| ()),
            InstanceFile::LinearSystem(l) => l.to_instance().map(|_| ()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    pub fn kronecker(&self) -> CliResult<KroneckerInstance> {
        match self {
            InstanceFile::Kronecker(k) => k.to_instance(),
            InstanceFile::LinearSystem(_) => Err(invalid("expected a kronecker instance")),
        }
    }

    pub fn linear(&self) -> CliResult<LinearInstance> {
        match self {
            InstanceFile::LinearSystem(l) => l.to_instance(),
            InstanceFile::Kronecker(_) => Err(invalid("expected a linear_system instance")),
        }
    }
}
