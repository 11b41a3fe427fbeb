//! Approximation witnesses: a real `t` by exact interval intersection, an
//! integer `q` by exhaustive scan, and the reduction from one to the other.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::bounds::{gamma1, Part};
use crate::error::{Error, Result};
use crate::forms::{IntVector, LinearFormSystem};
use crate::precision::Precision;
use crate::real::Real;
use crate::scalar::Scalar;

/// Most integer cells a single coordinate may contribute to a window.
pub const MAX_CELLS: u64 = 50_000_000;

/// Inputs of the inhomogeneous problem `‖lambda_j t - alpha_j‖ <= eps_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KroneckerInstance {
    pub lambda: Vec<Real>,
    pub alpha: Vec<Real>,
    pub eps: Vec<Real>,
    pub tau: Real,
    pub delta: Option<Real>,
    pub precision_bits: u32,
}

/// A [`KroneckerInstance`] evaluated at one precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluated {
    pub lambda: Vec<Scalar>,
    pub alpha: Vec<Scalar>,
    pub eps: Vec<Scalar>,
    pub tau: Scalar,
    pub delta: Option<Scalar>,
}

impl KroneckerInstance {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_exact(&self) -> bool {
        self.lambda
            .iter()
            .chain(&self.alpha)
            .chain(&self.eps)
            .chain(std::iter::once(&self.tau))
            .chain(&self.delta)
            .all(Real::is_exact)
    }

    /// Dimension and range checks; `0 < eps_j < 1/2`, `delta > 0`.
    pub fn validate(&self) -> Result<()> {
        self.eval(self.precision_bits).map(|_| ())
    }

    pub fn eval(&self, bits: u32) -> Result<Evaluated> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Domain("instance has no coordinates".into()));
        }
        for got in [self.alpha.len(), self.eps.len()] {
            if got != n {
                return Err(Error::DimensionMismatch { expected: n, got });
            }
        }
        let ev = |v: &[Real]| v.iter().map(|x| x.eval(bits)).collect::<Vec<_>>();
        let eps = ev(&self.eps);
        let half = Scalar::ratio(1, 2);
        for (index, e) in eps.iter().enumerate() {
            let positive = e.signum_proven() == Some(Ordering::Greater);
            if !positive || e.lt_proven(&half) != Some(true) {
                return Err(Error::EpsilonOutOfRange {
                    index,
                    value: e.to_string(),
                });
            }
        }
        let delta = self.delta.as_ref().map(|d| d.eval(bits));
        if let Some(d) = &delta {
            if d.signum_proven() != Some(Ordering::Greater) {
                return Err(Error::Domain("delta must be positive".into()));
            }
        }
        Ok(Evaluated {
            lambda: ev(&self.lambda),
            alpha: ev(&self.alpha),
            eps,
            tau: self.tau.eval(bits),
            delta,
        })
    }

    fn start_precision(&self, p: &Precision) -> Precision {
        Precision::new(self.precision_bits, p.max_bits)
    }
}

/// Exact window `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Window {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if hi < lo {
            return Err(Error::Domain("window has negative length".into()));
        }
        Ok(Window { lo, hi })
    }

    /// The largest exact window provably inside `[tau, tau + len]`.
    pub fn inside(tau: &Scalar, len: &Scalar) -> Result<Self> {
        let lo = tau.upper().clone();
        let hi = tau.lower() + len.lower();
        if hi < lo {
            return Err(Error::Undecided("window narrower than its enclosure"));
        }
        Ok(Window { lo, hi })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Scalar,
    pub hi: Scalar,
}

/// Sorted, disjoint closed intervals inside a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleSet {
    pub window: Window,
    pub intervals: Vec<Interval>,
}

fn decided(a: &Scalar, b: &Scalar) -> Result<Ordering> {
    match a.cmp_proven(b) {
        Some(o) => Ok(o),
        None if a == b => Ok(Ordering::Equal),
        None => Err(Error::Undecided("interval endpoints overlap")),
    }
}

fn smax(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    Ok(if decided(a, b)? == Ordering::Less { b.clone() } else { a.clone() })
}

fn smin(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    Ok(if decided(a, b)? == Ordering::Greater { b.clone() } else { a.clone() })
}

/// `Some(true)` nonempty, `Some(false)` empty.
fn nonempty(lo: &Scalar, hi: &Scalar) -> Result<bool> {
    Ok(decided(lo, hi)? != Ordering::Greater)
}

impl FeasibleSet {
    pub fn empty(window: Window) -> Self {
        FeasibleSet {
            window,
            intervals: Vec::new(),
        }
    }

    pub fn full(window: Window) -> Self {
        let iv = Interval {
            lo: Scalar::Exact(window.lo.clone()),
            hi: Scalar::Exact(window.hi.clone()),
        };
        FeasibleSet {
            window,
            intervals: vec![iv],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    /// Drops empty intervals, sorts, and merges overlapping or touching ones.
    pub fn normalize(self) -> Result<Self> {
        let mut ivs = Vec::with_capacity(self.intervals.len());
        for iv in self.intervals {
            if nonempty(&iv.lo, &iv.hi)? {
                ivs.push(iv);
            }
        }
        let mut failed = false;
        ivs.sort_by(|a, b| {
            decided(&a.lo, &b.lo).unwrap_or_else(|_| {
                failed = true;
                Ordering::Equal
            })
        });
        if failed {
            return Err(Error::Undecided("interval endpoints overlap"));
        }
        let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match out.last_mut() {
                Some(cur) if nonempty(&iv.lo, &cur.hi)? => cur.hi = smax(&cur.hi, &iv.hi)?,
                _ => out.push(iv),
            }
        }
        Ok(FeasibleSet {
            window: self.window,
            intervals: out,
        })
    }

    /// Exact intersection by a linear merge.
    pub fn intersect(&self, other: &FeasibleSet) -> Result<FeasibleSet> {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = smax(&a[i].lo, &b[j].lo)?;
            let hi = smin(&a[i].hi, &b[j].hi)?;
            if nonempty(&lo, &hi)? {
                out.push(Interval { lo, hi });
            }
            match decided(&a[i].hi, &b[j].hi)? {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(FeasibleSet {
            window: self.window.clone(),
            intervals: out,
        })
    }
}

/// `{t in window : ‖lambda t - alpha‖ <= eps}`.
pub fn coordinate_feasible_set(
    lambda: &Scalar,
    alpha: &Scalar,
    eps: &Scalar,
    window: &Window,
) -> Result<FeasibleSet> {
    let (lambda, alpha) = match lambda.signum_proven() {
        Some(Ordering::Greater) => (lambda.clone(), alpha.clone()),
        Some(Ordering::Less) => (-lambda, -alpha),
        Some(Ordering::Equal) => {
            return Ok(if alpha.dist_to_nearest_int().le_decided(eps, "constant coordinate")? {
                FeasibleSet::full(window.clone())
            } else {
                FeasibleSet::empty(window.clone())
            });
        }
        None => return Err(Error::Undecided("sign of lambda")),
    };
    let w0 = Scalar::Exact(window.lo.clone());
    let w1 = Scalar::Exact(window.hi.clone());
    let kmin = crate::scalar::floor_rat((&lambda * &w0 - &alpha - eps).lower());
    let kmax = crate::scalar::ceil_rat((&lambda * &w1 - &alpha + eps).upper());
    let cells = (&kmax - &kmin).to_u64().unwrap_or(u64::MAX);
    if cells > MAX_CELLS {
        return Err(Error::BudgetExceeded {
            needed: format!("{cells} cells"),
            budget: MAX_CELLS,
        });
    }
    let inv = lambda.recip()?;
    let mut intervals = Vec::with_capacity(cells as usize + 1);
    let mut k = kmin;
    while k <= kmax {
        let kk = Scalar::from_int(k.clone()) + &alpha;
        let lo = smax(&(&(&kk - eps) * &inv), &w0)?;
        let hi = smin(&(&(&kk + eps) * &inv), &w1)?;
        if nonempty(&lo, &hi)? {
            intervals.push(Interval { lo, hi });
        }
        k += 1;
    }
    FeasibleSet {
        window: window.clone(),
        intervals,
    }
    .normalize()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub t: Scalar,
    pub residuals: Vec<Scalar>,
    pub tau: Scalar,
    pub len: Scalar,
    pub precision_bits: u32,
}

/// `‖lambda_j t - alpha_j‖` for every coordinate.
pub fn residuals(ev: &Evaluated, t: &Scalar) -> Vec<Scalar> {
    ev.lambda
        .iter()
        .zip(&ev.alpha)
        .map(|(l, a)| (l * t - a).dist_to_nearest_int())
        .collect()
}

/// Residuals at one precision; `ok` iff every upper bound is `<= eps_j`.
pub fn verify_witness_at(ev: &Evaluated, t: &Scalar) -> (Vec<Scalar>, bool) {
    let r = residuals(ev, t);
    let ok = r.iter().zip(&ev.eps).all(|(x, e)| x.upper() <= e.lower());
    (r, ok)
}

/// Recomputes the residuals from scratch, raising precision while a
/// residual straddles its bound.
pub fn verify_witness(inst: &KroneckerInstance, t: &Scalar, precision: &Precision) -> Result<(Vec<Scalar>, bool)> {
    let p = inst.start_precision(precision);
    let mut last = None;
    let res = p.escalate(|bits| {
        let ev = inst.eval(bits)?;
        let (r, ok) = verify_witness_at(&ev, t);
        if ok {
            return Ok((r, true));
        }
        let refuted = r.iter().zip(&ev.eps).any(|(x, e)| x.lower() > e.upper());
        if refuted || t.is_exact() && ev.lambda.iter().chain(&ev.alpha).all(Scalar::is_exact) {
            return Ok((r, false));
        }
        last = Some(r);
        Err(Error::Undecided("residual against epsilon"))
    });
    match res {
        Ok((v, _)) => Ok(v),
        Err(Error::PrecisionExhausted { .. }) => Ok((last.unwrap_or_default(), false)),
        Err(e) => Err(e),
    }
}

/// `find_t` at a single precision.
pub fn find_t_at(ev: &Evaluated, window: &Window) -> Result<Option<Scalar>> {
    let mut sets = Vec::with_capacity(ev.lambda.len());
    for j in 0..ev.lambda.len() {
        let s = coordinate_feasible_set(&ev.lambda[j], &ev.alpha[j], &ev.eps[j], window)?;
        if s.is_empty() {
            return Ok(None);
        }
        sets.push(s);
    }
    sets.sort_by_key(FeasibleSet::len);
    let mut acc = sets[0].clone();
    for s in &sets[1..] {
        acc = acc.intersect(s)?;
        if acc.is_empty() {
            return Ok(None);
        }
    }
    let first = &acc.intervals[0];
    let (a, b) = (first.lo.upper(), first.hi.lower());
    if a > b {
        return Err(Error::Undecided("feasible interval thinner than its endpoints"));
    }
    let t = Scalar::Exact((a + b) / BigInt::from(2));
    if !verify_witness_at(ev, &t).1 {
        return Err(Error::Undecided("midpoint residual at the bound"));
    }
    Ok(Some(t))
}

/// A `t` in `[tau, tau + len]` with `‖lambda_j t - alpha_j‖ <= eps_j`, or
/// `None` when the exact intersection is empty.
pub fn find_t(inst: &KroneckerInstance, len: &Scalar, precision: &Precision) -> Result<Option<Witness>> {
    let p = inst.start_precision(precision);
    let (found, bits) = p.escalate(|bits| {
        let ev = inst.eval(bits)?;
        let window = Window::inside(&ev.tau, len)?;
        Ok(find_t_at(&ev, &window)?.map(|t| (residuals(&ev, &t), t, ev.tau)))
    })?;
    Ok(found.map(|(residuals, t, tau)| Witness {
        t,
        residuals,
        tau,
        len: len.clone(),
        precision_bits: bits,
    }))
}

/// Lexicographically smallest integer `q` in `prod [ceil tau_i, floor(tau_i + len_i)]`
/// with `‖L_j(q) - alpha_j‖ <= eps_j` for all `j`.
pub fn find_integer_point(
    sys: &LinearFormSystem,
    alpha: &[Scalar],
    eps: &[Scalar],
    tau: &[Scalar],
    len: &[Scalar],
    budget: u64,
) -> Result<Option<IntVector>> {
    let (m, n) = (sys.m(), sys.n());
    for (expected, got) in [(n, alpha.len()), (n, eps.len()), (m, tau.len()), (m, len.len())] {
        if expected != got {
            return Err(Error::DimensionMismatch { expected, got });
        }
    }
    let mut lo = Vec::with_capacity(m);
    let mut hi = Vec::with_capacity(m);
    let mut count = BigUint::one();
    for (t, l) in tau.iter().zip(len) {
        let a = t.ceil()?;
        let b = (t + l).floor()?;
        if b < a {
            return Ok(None);
        }
        count *= (&b - &a + 1u32).magnitude();
        lo.push(a);
        hi.push(b);
    }
    if count > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: count.to_string(),
            budget,
        });
    }
    let mut q = lo.clone();
    loop {
        let v = IntVector(q.clone());
        let forms = sys.eval_forms(&v)?;
        let mut ok = true;
        for ((f, a), e) in forms.iter().zip(alpha).zip(eps) {
            if !(f - a).dist_to_nearest_int().le_decided(e, "integer point residual")? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(v));
        }
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if q[i] < hi[i] {
                q[i] += 1;
                for j in i + 1..m {
                    q[j] = lo[j].clone();
                }
                break;
            }
        }
    }
}

/// Data of the reduction of the real problem in `t` to a one-variable
/// integer problem in `q`, with `t = (alpha_p + q) / lambda_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRecord {
    pub pivot: usize,
    pub lambda_pivot: Scalar,
    pub alpha_pivot: Scalar,
    pub theta: Vec<Scalar>,
    pub beta: Vec<Scalar>,
    pub eps: Vec<Scalar>,
    pub gamma1: BigRational,
    pub delta0: Scalar,
    /// Window length for `q`.
    pub t1: Scalar,
    pub tau_prime: Scalar,
    /// `p = ceil(tau' + T1/4)`, the centre of the box the integer problem
    /// is solved in.
    pub shift: IntVector,
}

impl ReductionRecord {
    /// The `1 x (N-1)` system `L_i(q) = theta_i q`.
    pub fn system(&self) -> Result<LinearFormSystem> {
        LinearFormSystem::new(vec![self.theta.clone()])
    }

    /// `t = (alpha_p + q) / lambda_p`.
    pub fn lift(&self, q: &BigInt) -> Result<Scalar> {
        (&self.alpha_pivot + &Scalar::from_int(q.clone())).checked_div(&self.lambda_pivot)
    }

    /// Solves the integer problem by exhaustive scan and lifts the answer.
    pub fn solve(&self, budget: u64) -> Result<Option<(BigInt, Scalar)>> {
        let sys = self.system()?;
        let q = find_integer_point(
            &sys,
            &self.beta,
            &self.eps,
            std::slice::from_ref(&self.tau_prime),
            std::slice::from_ref(&self.t1),
            budget,
        )?;
        match q {
            None => Ok(None),
            Some(v) => {
                let q = v.0[0].clone();
                let t = self.lift(&q)?;
                Ok(Some((q, t)))
            }
        }
    }
}

/// Builds the reduction at one precision. `delta` is the hypothesis
/// threshold; the `q` window maps into `[tau, tau + T*]` for any `lambda_p`
/// sign.
pub fn reduce_theorem1(inst: &KroneckerInstance, delta: &Scalar, bits: u32) -> Result<ReductionRecord> {
    let ev = inst.eval(bits)?;
    let n = ev.lambda.len();
    if n < 2 {
        return Err(Error::Domain("the reduction needs N >= 2".into()));
    }
    for (index, l) in ev.lambda.iter().enumerate() {
        match l.signum_proven() {
            Some(Ordering::Equal) => return Err(Error::ZeroLambda { index }),
            None => return Err(Error::Undecided("sign of lambda")),
            _ => {}
        }
    }
    let mut pivot = 0;
    let mut best = ev.lambda[0].abs().checked_div(&ev.eps[0])?;
    for i in 1..n {
        let r = ev.lambda[i].abs().checked_div(&ev.eps[i])?;
        if decided(&r, &best)? == Ordering::Greater {
            pivot = i;
            best = r;
        }
    }
    let lp = ev.lambda[pivot].clone();
    let ap = ev.alpha[pivot].clone();
    let abs_lp = lp.abs();
    let g1 = gamma1(n as u32, Part::B)?;
    let half = Scalar::ratio(1, 2);
    let d0 = delta.checked_div(&abs_lp)?;
    let delta0 = smin(&d0, &half)?;
    let t1 = Scalar::from_int(2).checked_div(&(Scalar::Exact(g1.clone()) * &delta0))?;
    let mut theta = Vec::with_capacity(n - 1);
    let mut beta = Vec::with_capacity(n - 1);
    let mut eps = Vec::with_capacity(n - 1);
    for i in (0..n).filter(|&i| i != pivot) {
        let th = ev.lambda[i].checked_div(&lp)?;
        beta.push(&ev.alpha[i] - &(&th * &ap));
        theta.push(th);
        eps.push(ev.eps[i].clone());
    }
    let base = &(&lp * &ev.tau) - &ap;
    let tau_prime = if lp.signum_proven() == Some(Ordering::Less) {
        &base - &t1
    } else {
        base
    };
    let x = &t1 * &Scalar::ratio(1, 4);
    let shift = IntVector(vec![(&tau_prime + &x).ceil()?]);
    Ok(ReductionRecord {
        pivot,
        lambda_pivot: lp,
        alpha_pivot: ap,
        theta,
        beta,
        eps,
        gamma1: g1,
        delta0,
        t1,
        tau_prime,
        shift,
    })
}

/// Reduction, integer search and lift, raising precision on undecided
/// comparisons. Returns the record, `q` and `t`.
pub fn solve_by_reduction(
    inst: &KroneckerInstance,
    delta: &Real,
    budget: u64,
    precision: &Precision,
) -> Result<(ReductionRecord, Option<(BigInt, Scalar)>)> {
    let p = inst.start_precision(precision);
    let (out, _) = p.escalate(|bits| {
        let rec = reduce_theorem1(inst, &delta.eval(bits), bits)?;
        let sol = rec.solve(budget)?;
        Ok((rec, sol))
    })?;
    Ok(out)
}

/// `‖lambda_p t - alpha_p‖` for a lifted `t`, which equals `‖q‖ = 0`.
pub fn pivot_residual(rec: &ReductionRecord, t: &Scalar) -> Scalar {
    (&(&rec.lambda_pivot * t) - &rec.alpha_pivot).dist_to_nearest_int()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_exact;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn s(x: &str) -> Scalar {
        Scalar::Exact(parse_exact(x).unwrap())
    }

    fn w(a: &str, b: &str) -> Window {
        Window::new(parse_exact(a).unwrap(), parse_exact(b).unwrap()).unwrap()
    }

    fn set(window: &Window, ivs: &[(&str, &str)]) -> FeasibleSet {
        FeasibleSet {
            window: window.clone(),
            intervals: ivs.iter().map(|(a, b)| Interval { lo: s(a), hi: s(b) }).collect(),
        }
    }

    fn inst(lambda: &[&str], alpha: &[&str], eps: &[&str], tau: &str) -> KroneckerInstance {
        let r = |v: &[&str]| v.iter().map(|x| Real::parse(x).unwrap()).collect::<Vec<_>>();
        KroneckerInstance {
            lambda: r(lambda),
            alpha: r(alpha),
            eps: r(eps),
            tau: Real::parse(tau).unwrap(),
            delta: None,
            precision_bits: 128,
        }
    }

    #[test]
    fn coordinate_sets() {
        let win = w("0", "1");
        let a = coordinate_feasible_set(&s("1"), &s("1/2"), &s("1/4"), &win).unwrap();
        assert_eq!(a, set(&win, &[("1/4", "3/4")]));
        let b = coordinate_feasible_set(&s("2"), &s("0"), &s("1/4"), &win).unwrap();
        assert_eq!(b, set(&win, &[("0", "1/8"), ("3/8", "5/8"), ("7/8", "1")]));
        let c = coordinate_feasible_set(&s("0"), &s("0.4"), &s("0.3"), &win).unwrap();
        assert!(c.is_empty());
        let d = coordinate_feasible_set(&s("0"), &s("0.9"), &s("0.3"), &win).unwrap();
        assert_eq!(d, FeasibleSet::full(win.clone()));
        // negative lambda mirrors
        let e = coordinate_feasible_set(&s("-2"), &s("0"), &s("1/4"), &win).unwrap();
        assert_eq!(e, b);
    }

    #[test]
    fn intersections() {
        let win = w("0", "2");
        let a = set(&win, &[("0", "1")]);
        let b = set(&win, &[("1/2", "2")]);
        assert_eq!(a.intersect(&b).unwrap(), set(&win, &[("1/2", "1")]));
        let c = set(&win, &[("0", "1/8"), ("3/8", "5/8")]);
        let d = set(&win, &[("1/4", "3/4")]);
        assert_eq!(c.intersect(&d).unwrap(), set(&win, &[("3/8", "5/8")]));
        assert!(c.intersect(&FeasibleSet::empty(win.clone())).unwrap().is_empty());
        // touching intervals meet in a point
        let e = set(&win, &[("1", "2")]);
        assert_eq!(a.intersect(&e).unwrap(), set(&win, &[("1", "1")]));
    }

    #[test]
    fn normalize_merges_and_sorts() {
        let win = w("0", "5");
        let raw = set(&win, &[("3", "4"), ("0", "1"), ("1", "2"), ("5", "4"), ("3.5", "3.6")]);
        let n = raw.normalize().unwrap();
        assert_eq!(n, set(&win, &[("0", "2"), ("3", "4")]));
        assert_eq!(n.clone().normalize().unwrap(), n);
    }

    #[test]
    fn find_t_examples() {
        let p = Precision::default();
        let i = inst(&["1"], &["1/2"], &["1/4"], "0");
        let wt = find_t(&i, &s("1"), &p).unwrap().unwrap();
        assert_eq!(wt.t, s("1/2"));
        assert_eq!(wt.residuals, vec![Scalar::zero()]);

        let i = inst(&["1", "1"], &["0", "1/2"], &["1/5", "1/5"], "0");
        for len in ["1", "10", "100"] {
            assert!(find_t(&i, &s(len), &p).unwrap().is_none());
        }

        let i = inst(&["1", "sqrt(2)"], &["1/2", "1/2"], &["3/10", "3/10"], "0");
        let wt = find_t(&i, &s("8"), &p).unwrap().unwrap();
        let (_, ok) = verify_witness(&i, &wt.t, &p).unwrap();
        assert!(ok);
        assert!(wt.t.lower() >= &BigRational::zero() && wt.t.upper() <= &BigRational::from_integer(8.into()));
    }

    #[test]
    fn verify_examples() {
        let p = Precision::default();
        let i = inst(&["1"], &["1/2"], &["1/4"], "0");
        assert_eq!(verify_witness(&i, &s("1/2"), &p).unwrap(), (vec![Scalar::zero()], true));
        let (r, ok) = verify_witness(&i, &s("0.8"), &p).unwrap();
        assert_eq!(r, vec![s("0.3")]);
        assert!(!ok);
    }

    #[test]
    fn integer_point_examples() {
        let sys = |x: &str| LinearFormSystem::new(vec![vec![s(x)]]).unwrap();
        let q = find_integer_point(&sys("1/2"), &[s("1/4")], &[s("1/4")], &[s("0")], &[s("4")], 1000).unwrap();
        assert_eq!(q, Some(IntVector::from_i64(&[0])));
        let q = find_integer_point(&sys("1/3"), &[s("1/2")], &[s("1/10")], &[s("0")], &[s("2")], 1000).unwrap();
        assert_eq!(q, None);
        let q = find_integer_point(&sys("1"), &[s("5")], &[s("1/10")], &[s("0")], &[s("10")], 1000).unwrap();
        assert_eq!(q, Some(IntVector::from_i64(&[0])));
        let err = find_integer_point(&sys("1"), &[s("5")], &[s("1/10")], &[s("0")], &[s("10")], 5);
        assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn integer_point_first_is_lexicographic() {
        // two variables, one form x/2 + y/3 near 1/6
        let sys = LinearFormSystem::new(vec![vec![s("1/2")], vec![s("1/3")]]).unwrap();
        let q = find_integer_point(&sys, &[s("1/6")], &[s("0")], &[s("-2"), s("-2")], &[s("4"), s("4")], 100)
            .unwrap()
            .unwrap();
        // x = -2 has no solution; x = -1 first hits at y = -1
        assert_eq!(q, IntVector::from_i64(&[-1, -1]));
    }

    #[test]
    fn reduction_examples() {
        let mut i = inst(&["sqrt(2)", "1"], &["0", "0"], &["1/20", "1/20"], "0");
        let r = reduce_theorem1(&i, &s("0.005"), 128).unwrap();
        assert_eq!(r.pivot, 0);
        i = inst(&["1", "sqrt(2)"], &["1/4", "1/2"], &["1/20", "1/20"], "0");
        let r = reduce_theorem1(&i, &s("0.005"), 128).unwrap();
        assert_eq!(r.pivot, 1);
        let expect = 1.0 / 2f64.sqrt();
        assert!((r.theta[0].to_f64() - expect).abs() < 1e-15);
        assert!((r.beta[0].to_f64() - (0.25 - 0.5 * expect)).abs() < 1e-15);
        let t = r.lift(&BigInt::from(3)).unwrap();
        assert!((t.to_f64() - 3.5 / 2f64.sqrt()).abs() < 1e-12);
        assert!(pivot_residual(&r, &t).upper() < &parse_exact("1e-30").unwrap());

        let z = inst(&["1", "0"], &["0", "0"], &["1/20", "1/20"], "0");
        assert_eq!(reduce_theorem1(&z, &s("0.1"), 64).unwrap_err(), Error::ZeroLambda { index: 1 });
    }

    #[test]
    fn reduction_ties_pick_lowest_index() {
        let i = inst(&["2", "-2"], &["0", "0"], &["1/10", "1/10"], "0");
        assert_eq!(reduce_theorem1(&i, &s("0.1"), 64).unwrap().pivot, 0);
    }

    #[test]
    fn reduction_round_trip_negative_pivot() {
        let p = Precision::default();
        let i = inst(&["-3/2", "sqrt(3)"], &["1/3", "1/5"], &["1/20", "1/4"], "7/3");
        let delta = Real::parse("1/1000").unwrap();
        let (rec, sol) = solve_by_reduction(&i, &delta, 1_000_000, &p).unwrap();
        assert_eq!(rec.pivot, 0);
        let (_, t) = sol.unwrap();
        assert_eq!(pivot_residual(&rec, &t), Scalar::zero());
        assert!(verify_witness(&i, &t, &p).unwrap().1);
        // t lies in [tau, tau + |T1 / lambda_p|]
        let tau = s("7/3");
        let reach = rec.t1.checked_div(&rec.lambda_pivot.abs()).unwrap();
        assert!(t.lower() >= tau.upper());
        assert!(t.upper() <= (&tau + &reach).lower());
    }

    #[test]
    fn invalid_instances() {
        let mut i = inst(&["1"], &["0"], &["1/2"], "0");
        assert!(matches!(i.validate(), Err(Error::EpsilonOutOfRange { index: 0, .. })));
        i.eps = vec![Real::parse("1/4").unwrap(), Real::parse("1/4").unwrap()];
        assert!(matches!(i.validate(), Err(Error::DimensionMismatch { .. })));
    }

    fn rat(p: i64, q: i64) -> Scalar {
        Scalar::ratio(p, q)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn intersection_is_commutative_and_found_points_verify(
            coords in proptest::collection::vec((-12i64..12, 1i64..5, 0i64..20, 1i64..9), 1..4),
            tau in -20i64..20,
            len in 1i64..12,
        ) {
            let lambda: Vec<Scalar> = coords.iter().map(|c| rat(c.0, c.1)).collect();
            let alpha: Vec<Scalar> = coords.iter().map(|c| rat(c.2, 20)).collect();
            let eps: Vec<Scalar> = coords.iter().map(|c| rat(c.3, 20)).collect();
            let win = Window::new(BigRational::from_integer(tau.into()), BigRational::from_integer((tau + len).into())).unwrap();
            let sets: Vec<FeasibleSet> = (0..lambda.len())
                .map(|j| coordinate_feasible_set(&lambda[j], &alpha[j], &eps[j], &win).unwrap())
                .collect();
            for s in &sets {
                prop_assert_eq!(s.clone().normalize().unwrap(), s.clone());
            }
            let fwd = sets.iter().skip(1).fold(sets[0].clone(), |a, b| a.intersect(b).unwrap());
            let rev = sets.iter().rev().skip(1).fold(sets[sets.len() - 1].clone(), |a, b| a.intersect(b).unwrap());
            prop_assert_eq!(&fwd, &rev);
            let ev = Evaluated { lambda, alpha, eps, tau: Scalar::from_int(tau), delta: None };
            match find_t_at(&ev, &win).unwrap() {
                Some(t) => {
                    prop_assert!(verify_witness_at(&ev, &t).1);
                    prop_assert!(!fwd.is_empty());
                }
                None => prop_assert!(fwd.is_empty()),
            }
        }

        #[test]
        fn shifting_alpha_translates_feasibility(
            coords in proptest::collection::vec((-9i64..9, 1i64..4, 0i64..20, 1i64..9), 1..4),
            t in -40i64..40,
            s in -20i64..20,
        ) {
            let lambda: Vec<Scalar> = coords.iter().map(|c| rat(c.0, c.1)).collect();
            let alpha: Vec<Scalar> = coords.iter().map(|c| rat(c.2, 20)).collect();
            let eps: Vec<Scalar> = coords.iter().map(|c| rat(c.3, 20)).collect();
            let (t, s) = (rat(t, 7), rat(s, 5));
            let shifted: Vec<Scalar> = alpha.iter().zip(&lambda).map(|(a, l)| a + &(l * &s)).collect();
            let a = Evaluated { lambda: lambda.clone(), alpha, eps: eps.clone(), tau: Scalar::zero(), delta: None };
            let b = Evaluated { lambda, alpha: shifted, eps, tau: Scalar::zero(), delta: None };
            prop_assert_eq!(verify_witness_at(&a, &t).1, verify_witness_at(&b, &(&t + &s)).1);
        }
    }
}
