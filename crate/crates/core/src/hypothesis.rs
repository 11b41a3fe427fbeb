//! Complete verification of the Diophantine hypotheses over integer boxes.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::bounds::box_theorem1;
use crate::enumerate::{self, Tracker};
pub use crate::enumerate::Strategy;
use crate::error::{Error, Result};
use crate::forms::{IntVector, LinearFormSystem};
use crate::precision::Precision;
use crate::scalar::Scalar;
use crate::witness::KroneckerInstance;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// `|m_j| <= bounds[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntBox {
    pub bounds: Vec<u64>,
}

impl IntBox {
    pub fn new(bounds: Vec<u64>) -> Self {
        IntBox { bounds }
    }

    pub fn from_bigints(bounds: &[BigInt]) -> Result<Self> {
        let b = bounds
            .iter()
            .map(|x| {
                if x.sign() == num_bigint::Sign::Minus {
                    return Err(Error::Domain(format!("negative box bound {x}")));
                }
                x.to_u64()
                    .filter(|&v| v < (1 << 40))
                    .ok_or_else(|| Error::BudgetExceeded {
                        needed: format!("box bound {x}"),
                        budget: 1 << 40,
                    })
            })
            .collect::<Result<_>>()?;
        Ok(IntBox { bounds: b })
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    /// `prod (2 B_j + 1)`.
    pub fn point_count(&self) -> BigUint {
        self.bounds
            .iter()
            .fold(BigUint::one(), |acc, &b| acc * BigUint::from(2 * b + 1))
    }

    pub fn check_budget(&self, budget: u64) -> Result<()> {
        let needed = self.point_count();
        if needed > BigUint::from(budget) {
            return Err(Error::BudgetExceeded {
                needed: needed.to_string(),
                budget,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        v.len() == self.len()
            && v.0.iter().zip(&self.bounds).all(|(x, &b)| x.magnitude() <= &BigUint::from(b))
    }

    fn signed(&self) -> Vec<i64> {
        self.bounds.iter().map(|&b| b as i64).collect()
    }

    /// Canonical nonzero points (first nonzero entry positive) in
    /// lexicographic order.
    pub fn canonical_points(&self) -> impl Iterator<Item = Vec<i64>> {
        let bounds = self.signed();
        enumerate::odometer_owned(bounds).filter(|v| enumerate::is_canonical_nonzero(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

/// Whether a verdict rests on separated enclosures or only on midpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rigor {
    Proven,
    FloatOnly,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub budget: u64,
    /// `None` uses the global worker pool.
    pub threads: Option<usize>,
    pub strategy: Strategy,
    pub precision: Precision,
    /// Report a midpoint verdict instead of failing when the cap is hit.
    pub float_fallback: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            threads: None,
            strategy: Strategy::Auto,
            precision: Precision::default(),
            float_fallback: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinResult {
    pub value: Scalar,
    pub minimizer: IntVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisCertificate {
    pub delta_hat: Scalar,
    pub minimizer: IntVector,
    pub int_box: IntBox,
    pub verdict: Verdict,
    pub threshold: Scalar,
    pub rigor: Rigor,
    pub precision_bits: u32,
}

fn prepare(values_len: usize, b: &IntBox, cfg: &SearchConfig) -> Result<()> {
    if values_len == 0 {
        return Err(Error::Domain("need at least one coefficient".into()));
    }
    if values_len != b.len() {
        return Err(Error::DimensionMismatch {
            expected: values_len,
            got: b.len(),
        });
    }
    b.check_budget(cfg.budget)
}

fn combine(values: &[Scalar], key: &[i64]) -> Scalar {
    key.iter()
        .zip(values)
        .fold(Scalar::zero(), |acc, (&m, v)| acc + Scalar::from_int(m) * v)
}

fn to_vector(key: &[i64]) -> IntVector {
    IntVector::from_i64(key)
}

/// Minimum of `|sum m_j lambda_j|` over nonzero `m` in the box, with the
/// canonical minimizer. Enclosure inputs that cannot separate the best
/// candidates give [`Error::Undecided`].
pub fn min_abs_form_over_box(lambda: &[Scalar], b: &IntBox, cfg: &SearchConfig) -> Result<MinResult> {
    prepare(lambda.len(), b, cfg)?;
    let key = enumerate::argmin(lambda, &b.signed(), false, cfg.strategy, cfg.threads)?;
    Ok(MinResult {
        value: combine(lambda, &key).abs(),
        minimizer: to_vector(&key),
    })
}

/// Minimum of `‖sum m_j theta_j‖` over nonzero `m` in the box.
pub fn min_dist_form_over_box(theta: &[Scalar], b: &IntBox, cfg: &SearchConfig) -> Result<MinResult> {
    prepare(theta.len(), b, cfg)?;
    let key = enumerate::argmin(theta, &b.signed(), true, Strategy::Pruned, cfg.threads)?;
    Ok(MinResult {
        value: combine(theta, &key).dist_to_nearest_int(),
        minimizer: to_vector(&key),
    })
}

/// `max_i ‖R_i(u)‖ / delta_i`.
pub fn transposed_ratio(sys: &LinearFormSystem, deltas: &[Scalar], u: &IntVector) -> Result<Scalar> {
    let r = sys.eval_transposed(u)?;
    let mut best: Option<Scalar> = None;
    for (ri, di) in r.iter().zip(deltas) {
        let q = ri.dist_to_nearest_int().checked_div(di)?;
        best = Some(match best {
            None => q,
            Some(b) => scalar_max(&b, &q),
        });
    }
    best.ok_or_else(|| Error::Domain("system has no transposed forms".into()))
}

/// Enclosure of `max(a, b)`.
pub fn scalar_max(a: &Scalar, b: &Scalar) -> Scalar {
    if let (Some(x), Some(y)) = (a.as_exact(), b.as_exact()) {
        return Scalar::Exact(x.max(y).clone());
    }
    let bits = a.precision().into_iter().chain(b.precision()).min().unwrap_or(64);
    Scalar::enclosure(
        a.lower().max(b.lower()).clone(),
        a.upper().max(b.upper()).clone(),
        bits,
    )
}

/// Minimum over nonzero `u` in the box of `max_i ‖R_i(u)‖ / delta_i`.
pub fn min_max_transposed_over_box(
    sys: &LinearFormSystem,
    deltas: &[Scalar],
    b: &IntBox,
    cfg: &SearchConfig,
) -> Result<MinResult> {
    if deltas.len() != sys.m() {
        return Err(Error::DimensionMismatch {
            expected: sys.m(),
            got: deltas.len(),
        });
    }
    for (i, d) in deltas.iter().enumerate() {
        if d.signum_proven() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Domain(format!("delta_{} must be positive", i + 1)));
        }
    }
    prepare(sys.n(), b, cfg)?;
    let mut tracker: Tracker<BigRational> = Tracker::new();
    for u in b.canonical_points() {
        let v = transposed_ratio(sys, deltas, &to_vector(&u))?;
        tracker.push(v.lower().clone(), v.upper().clone(), &u);
    }
    let key = tracker.finish()?;
    let minimizer = to_vector(&key);
    Ok(MinResult {
        value: transposed_ratio(sys, deltas, &minimizer)?,
        minimizer,
    })
}

/// Runs `min_abs_form_over_box` on inputs evaluated at increasing precision.
pub fn min_abs_form_escalating(
    eval: impl Fn(u32) -> Result<Vec<Scalar>>,
    b: &IntBox,
    cfg: &SearchConfig,
) -> Result<(MinResult, u32)> {
    cfg.precision
        .escalate(|bits| min_abs_form_over_box(&eval(bits)?, b, cfg))
}

fn decide(
    delta_hat: &Scalar,
    threshold: &Scalar,
    strict: bool,
    last_try: bool,
    cfg: &SearchConfig,
) -> Result<(Verdict, Rigor)> {
    let proven = if strict {
        threshold.lt_proven(delta_hat)
    } else {
        threshold.le_proven(delta_hat)
    };
    match proven {
        Some(true) => Ok((Verdict::Holds, Rigor::Proven)),
        Some(false) => Ok((Verdict::Fails, Rigor::Proven)),
        None if last_try && cfg.float_fallback => {
            let (a, b) = (threshold.midpoint(), delta_hat.midpoint());
            let holds = if strict { a < b } else { a <= b };
            let v = if holds { Verdict::Holds } else { Verdict::Fails };
            Ok((v, Rigor::FloatOnly))
        }
        None => Err(Error::Undecided("delta_hat against threshold")),
    }
}

/// Checks `|sum m_j lambda_j| >= delta` over the box `floor(M*)`. Without a
/// `delta` the threshold is the achieved minimum itself and the verdict
/// records whether it is positive.
pub fn check_theorem1_hypothesis(inst: &KroneckerInstance, cfg: &SearchConfig) -> Result<HypothesisCertificate> {
    let n = inst.n();
    if n < 2 {
        return Err(Error::Domain("the theorem needs N >= 2".into()));
    }
    let precision = Precision::new(inst.precision_bits, cfg.precision.max_bits);
    let (cert, _) = precision.escalate(|bits| {
        let ev = inst.eval(bits)?;
        let tb = box_theorem1(n as u32, &ev.eps)?;
        let int_box = IntBox::from_bigints(&tb.floor)?;
        let r = min_abs_form_over_box(&ev.lambda, &int_box, cfg)?;
        let last_try = bits >= precision.max_bits;
        let (threshold, verdict, rigor) = match &ev.delta {
            Some(d) => {
                let (v, rig) = decide(&r.value, d, false, last_try, cfg)?;
                (d.clone(), v, rig)
            }
            None => {
                let (v, rig) = decide(&r.value, &Scalar::zero(), true, last_try, cfg)?;
                (r.value.clone(), v, rig)
            }
        };
        Ok(HypothesisCertificate {
            delta_hat: r.value,
            minimizer: r.minimizer,
            int_box,
            verdict,
            threshold,
            rigor,
            precision_bits: bits,
        })
    })?;
    Ok(cert)
}
