//! Certificate files. Everything except `wall_clock` is a deterministic
//! function of the instance and the recorded parameters.

use std::path::Path;

use kronecker_core::hypothesis::{HypothesisCertificate, Rigor, Verdict};
use kronecker_core::scalar::{decimal_string, rational_string};
use kronecker_core::transference::ConditionReport;
use kronecker_core::{IntVector, Scalar};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliResult;
use crate::instance::InstanceFile;

pub const TOOL: &str = concat!("kronecker ", env!("CARGO_PKG_VERSION"));

/// A number as an approximate decimal plus either its exact value or a
/// rigorous enclosure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarDto {
    pub approx: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<u32>,
}

/// Truncated decimal with no trailing ellipsis.
pub fn decimal_cell(r: &BigRational, digits: usize) -> String {
    decimal_string(r, digits).trim_end_matches('…').to_string()
}

impl From<&Scalar> for ScalarDto {
    fn from(s: &Scalar) -> Self {
        let approx = decimal_string(&s.midpoint(), 20);
        match s {
            Scalar::Exact(r) => ScalarDto {
                approx,
                exact: Some(rational_string(r)),
                lo: None,
                hi: None,
                bits: None,
            },
            Scalar::Enclosure(_) => ScalarDto {
                approx,
                exact: None,
                lo: Some(rational_string(s.lower())),
                hi: Some(rational_string(s.upper())),
                bits: s.precision(),
            },
        }
    }
}

pub fn scalars(v: &[Scalar]) -> Vec<ScalarDto> {
    v.iter().map(ScalarDto::from).collect()
}

pub fn ints(v: &IntVector) -> Vec<String> {
    v.entries().iter().map(ToString::to_string).collect()
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Undecided => "undecided",
    }
}

pub fn rigor_name(r: Rigor) -> &'static str {
    match r {
        Rigor::Proven => "proven",
        Rigor::FloatOnly => "float_only",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsDto {
    pub n: u32,
    pub gamma: String,
    pub gamma1: String,
    pub m_star: Vec<ScalarDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_star: Option<ScalarDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisDto {
    pub delta_hat: ScalarDto,
    pub minimizer: Vec<String>,
    #[serde(rename = "box")]
    pub int_box: Vec<u64>,
    pub verdict: String,
    pub threshold: ScalarDto,
    pub rigor: String,
    pub precision_bits: u32,
}

impl From<&HypothesisCertificate> for HypothesisDto {
    fn from(h: &HypothesisCertificate) -> Self {
        HypothesisDto {
            delta_hat: (&h.delta_hat).into(),
            minimizer: ints(&h.minimizer),
            int_box: h.int_box.bounds.clone(),
            verdict: verdict_name(h.verdict).into(),
            threshold: (&h.threshold).into(),
            rigor: rigor_name(h.rigor).into(),
            precision_bits: h.precision_bits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDto {
    pub tau: ScalarDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<ScalarDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<ScalarDto>,
    pub in_window: bool,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionDto {
    pub pivot: usize,
    pub theta: Vec<ScalarDto>,
    pub beta: Vec<ScalarDto>,
    pub gamma1: String,
    pub delta0: ScalarDto,
    pub t1: ScalarDto,
    pub tau_prime: ScalarDto,
    pub shift: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot_residual: Option<ScalarDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerSolutionDto {
    pub solution: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionDto {
    pub duality_identity: bool,
    pub gamma1: String,
    pub checked_box: Vec<u64>,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violator: Option<Vec<String>>,
    pub complete: bool,
}

impl ConditionDto {
    pub fn new(identity: bool, r: &ConditionReport) -> Self {
        ConditionDto {
            duality_identity: identity,
            gamma1: rational_string(&r.gamma1_used),
            checked_box: r.checked_box.bounds.clone(),
            holds: r.holds,
            violator: r.violator.as_ref().map(ints),
            complete: r.complete,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbesDto {
    pub necessity: String,
    pub sufficiency: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violator: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckDto {
    pub name: String,
    pub core: String,
    pub oracle: String,
    pub agree: bool,
}

/// Options that influence results; the worker count is deliberately absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub budget: u64,
    pub max_bits: u32,
    #[serde(default)]
    pub float_fallback: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_range: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub int_box: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[serde(default)]
    pub reduce: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<String>,
    #[serde(default)]
    pub probes: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<String>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            budget: kronecker_core::hypothesis::DEFAULT_BUDGET,
            max_bits: kronecker_core::precision::DEFAULT_MAX_BITS,
            float_fallback: false,
            strategy: None,
            trials: None,
            seed: None,
            tau_range: None,
            int_box: None,
            window: None,
            reduce: false,
            gamma1: None,
            probes: false,
            step: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_class: Option<String>,
    pub rigor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failures: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tool: String,
    pub command: String,
    pub params: Params,
    pub instance: InstanceFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<HypothesisDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integer_solution: Option<IntegerSolutionDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<ProbesDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross_checks: Vec<CrossCheckDto>,
    pub summary: Summary,
    pub wall_clock: String,
}

impl Certificate {
    pub fn new(command: &str, params: Params, instance: InstanceFile) -> Self {
        Certificate {
            tool: TOOL.into(),
            command: command.into(),
            params,
            instance,
            constants: None,
            hypothesis: None,
            witnesses: Vec::new(),
            reduction: None,
            integer_solution: None,
            condition: None,
            probes: None,
            cross_checks: Vec::new(),
            summary: Summary {
                outcome: "success".into(),
                failure_class: None,
                rigor: "proven".into(),
                trials: None,
                failures: None,
            },
            wall_clock: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn fail(&mut self, class: &str) {
        self.summary.outcome = "failure".into();
        self.summary.failure_class = Some(class.into());
    }

    pub fn succeeded(&self) -> bool {
        self.summary.outcome == "success"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    /// JSON with the timestamp removed, for reproducibility comparisons.
    pub fn comparable(&self) -> String {
        let mut v = serde_json::to_value(self).expect("certificates always serialize");
        if let Value::Object(map) = &mut v {
            map.remove("wall_clock");
        }
        serde_json::to_string_pretty(&v).expect("values always serialize")
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
