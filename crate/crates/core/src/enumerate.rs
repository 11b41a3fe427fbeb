//! Integer-box minimization of `|sum m_j v_j|` over canonical nonzero `m`.
//!
//! Every input value is turned into an integer enclosure `[a_j, a_j + w_j]`
//! at a common scale (the lcm of denominators for exact inputs, a power of
//! two otherwise), so the hot loops only add integers. The search keeps the
//! smallest upper bound `U` seen so far plus every candidate whose lower
//! bound does not exceed `U`; the final candidate set is therefore
//! `{m : lo(m) <= U*}` no matter in which order (or on how many threads) the
//! box was visited.
//!
//! In "wrap" mode an extra innermost coordinate with value 1 and unbounded
//! range is appended, which turns `|.|` into the distance to the nearest
//! integer. That coordinate is not part of the reported minimizer.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{ceil_rat, floor_rat, pow2, Scalar};

/// Above this many points the meet-in-the-middle search takes over.
pub const MITM_THRESHOLD: u64 = 1_000_000;

const UNBOUNDED: i64 = i64::MAX / 4;
const COARSE_GRID_BITS: u32 = 64;

pub(crate) trait KInt:
    Clone + Ord + Debug + Send + Sync + Signed + Integer + ToPrimitive + From<i64>
{
    fn from_big(b: &BigInt) -> Option<Self>;
}

impl KInt for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
}

impl KInt for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Pruned,
    MeetInTheMiddle,
}

#[derive(Debug, Clone)]
struct Coef<T> {
    a: T,
    w: T,
}

impl<T: KInt> Coef<T> {
    fn steep(&self) -> bool {
        self.a.abs() > self.w
    }
}

#[derive(Debug, Clone)]
struct Partial<T> {
    s: T,
    wn: T,
    wp: T,
}

impl<T: KInt> Partial<T> {
    fn zero() -> Self {
        Partial {
            s: T::zero(),
            wn: T::zero(),
            wp: T::zero(),
        }
    }

    fn add(&self, c: &Coef<T>, m: i64) -> Self {
        let mt = T::from(m);
        let ww = c.w.clone() * mt.clone();
        let (wn, wp) = if m >= 0 {
            (self.wn.clone(), self.wp.clone() + ww)
        } else {
            (self.wn.clone() + ww, self.wp.clone())
        };
        Partial {
            s: self.s.clone() + c.a.clone() * mt,
            wn,
            wp,
        }
    }

    fn join(&self, o: &Partial<T>) -> Self {
        Partial {
            s: self.s.clone() + o.s.clone(),
            wn: self.wn.clone() + o.wn.clone(),
            wp: self.wp.clone() + o.wp.clone(),
        }
    }

    /// Lower bound of `|v|` over everything reachable with `reach` more.
    fn lower_abs(&self, reach: &T) -> T {
        let lo = self.s.clone() + self.wn.clone() - reach.clone();
        if lo.is_positive() {
            return lo;
        }
        let hi = self.s.clone() + self.wp.clone() + reach.clone();
        if hi.is_negative() {
            -hi
        } else {
            T::zero()
        }
    }

    /// Enclosure of `|v|` at a leaf.
    fn abs_bounds(&self) -> (T, T) {
        let lo = self.s.clone() + self.wn.clone();
        let hi = self.s.clone() + self.wp.clone();
        if lo.is_positive() {
            (lo, hi)
        } else if hi.is_negative() {
            (-hi, -lo)
        } else {
            let top = if -lo.clone() > hi { -lo } else { hi };
            (T::zero(), top)
        }
    }
}

#[derive(Debug, Clone)]
struct Cand<T> {
    lo: T,
    hi: T,
    key: Vec<i64>,
}

/// Running minimum with all candidates that might still be the argmin.
#[derive(Debug, Clone)]
pub(crate) struct Tracker<T> {
    best: Option<T>,
    cands: Vec<Cand<T>>,
}

impl<T: Clone + Ord> Tracker<T> {
    pub(crate) fn new() -> Self {
        Tracker {
            best: None,
            cands: Vec::new(),
        }
    }

    pub(crate) fn bound(&self) -> Option<&T> {
        self.best.as_ref()
    }

    pub(crate) fn push(&mut self, lo: T, hi: T, key: &[i64]) {
        if let Some(b) = &self.best {
            if lo > *b {
                return;
            }
        }
        let improves = self.best.as_ref().is_none_or(|b| hi < *b);
        if improves {
            self.cands.retain(|c| c.lo <= hi);
            self.best = Some(hi.clone());
        }
        self.cands.push(Cand {
            lo,
            hi,
            key: key.to_vec(),
        });
    }

    pub(crate) fn merge(mut self, other: Tracker<T>) -> Self {
        for c in other.cands {
            self.push(c.lo, c.hi, &c.key);
        }
        self
    }

    /// The proven argmin, ties between exactly equal values going to the
    /// lexicographically smallest key.
    pub(crate) fn finish(self) -> Result<Vec<i64>> {
        let best = self
            .best
            .ok_or_else(|| Error::Domain("box contains no nonzero point".into()))?;
        let mut cands: Vec<Cand<T>> = self.cands.into_iter().filter(|c| c.lo <= best).collect();
        cands.sort_by(|x, y| x.key.cmp(&y.key).then_with(|| x.hi.cmp(&y.hi)));
        cands.dedup_by(|later, first| later.key == first.key);
        if cands.len() == 1 || cands.iter().all(|c| c.lo == c.hi) {
            Ok(cands.swap_remove(0).key)
        } else {
            Err(Error::Undecided("minimum not separated from runner-up"))
        }
    }
}

#[derive(Debug)]
struct KernelSpec<T> {
    coefs: Vec<Coef<T>>,
    bounds: Vec<i64>,
    keyed: usize,
    wrap: bool,
    /// `reach_after[d]`: bound on the contribution of coordinates after `d`;
    /// `None` when an unbounded coordinate follows.
    reach_after: Vec<Option<T>>,
}

impl<T: KInt> KernelSpec<T> {
    fn inner(&self) -> usize {
        self.coefs.len() - 1
    }

    fn range(&self, depth: usize) -> (i64, i64) {
        if self.wrap && depth == self.inner() {
            (-UNBOUNDED, UNBOUNDED)
        } else {
            (-self.bounds[depth], self.bounds[depth])
        }
    }
}

/// One top-level slice of the canonical half-box: coordinates before
/// `first` are zero and coordinate `first` is fixed to `value` (a range
/// `1..=B` when `first` is the innermost coordinate).
#[derive(Debug, Clone, Copy)]
struct Task {
    first: usize,
    value: Option<i64>,
}

struct Search<'a, T> {
    spec: &'a KernelSpec<T>,
    tracker: Tracker<T>,
    key: Vec<i64>,
}

impl<'a, T: KInt> Search<'a, T> {
    fn run(spec: &'a KernelSpec<T>, tracker: Tracker<T>, task: Task) -> Tracker<T> {
        let mut s = Search {
            spec,
            tracker,
            key: vec![0; spec.keyed],
        };
        match task.value {
            None => s.descend(task.first, Partial::zero(), 1, spec.bounds[task.first]),
            Some(v) => {
                s.key[task.first] = v;
                let p = Partial::zero().add(&spec.coefs[task.first], v);
                let (r0, r1) = spec.range(task.first + 1);
                s.descend(task.first + 1, p, r0, r1);
            }
        }
        s.tracker
    }

    fn pruned(&self, q: &Partial<T>, reach: &Option<T>) -> bool {
        match (self.tracker.bound(), reach) {
            (Some(u), Some(r)) => q.lower_abs(r) > *u,
            _ => false,
        }
    }

    fn descend(&mut self, depth: usize, p: Partial<T>, r0: i64, r1: i64) {
        if r0 > r1 {
            return;
        }
        let spec = self.spec;
        let c = &spec.coefs[depth];
        let reach = &spec.reach_after[depth];
        if reach.is_none() || !c.steep() {
            for m in r0..=r1 {
                let q = p.add(c, m);
                if !self.pruned(&q, reach) {
                    self.visit(depth, m, q);
                }
            }
            return;
        }
        // The lower bound is unimodal in m with its minimum between m0 and m0+1.
        let center = (-p.s.clone()).div_floor(&c.a);
        let m0 = if center < T::from(r0 - 1) {
            r0 - 1
        } else if center > T::from(r1) {
            r1
        } else {
            center.to_i64().expect("clamped")
        };
        let mut m = (m0 + 1).max(r0);
        while m <= r1 {
            let q = p.add(c, m);
            if self.pruned(&q, reach) {
                break;
            }
            self.visit(depth, m, q);
            m += 1;
        }
        let mut m = m0.min(r1);
        while m >= r0 {
            let q = p.add(c, m);
            if self.pruned(&q, reach) {
                break;
            }
            self.visit(depth, m, q);
            m -= 1;
        }
    }

    fn visit(&mut self, depth: usize, m: i64, q: Partial<T>) {
        if depth < self.spec.keyed {
            self.key[depth] = m;
        }
        if depth == self.spec.inner() {
            let (lo, hi) = q.abs_bounds();
            self.tracker.push(lo, hi, &self.key);
        } else {
            let (r0, r1) = self.spec.range(depth + 1);
            self.descend(depth + 1, q, r0, r1);
        }
    }
}

fn tasks(spec_bounds: &[i64], keyed: usize, inner: usize) -> Vec<Task> {
    let mut out = Vec::new();
    for first in 0..keyed {
        if first == inner {
            if spec_bounds[first] > 0 {
                out.push(Task { first, value: None });
            }
        } else {
            for v in 1..=spec_bounds[first] {
                out.push(Task {
                    first,
                    value: Some(v),
                });
            }
        }
    }
    out
}

fn run_parallel<T: KInt, W, F>(items: &[W], threads: Option<usize>, work: F) -> Tracker<T>
where
    W: Sync,
    F: Fn(Tracker<T>, &W) -> Tracker<T> + Sync,
{
    let go = || {
        items
            .par_iter()
            .fold(Tracker::new, &work)
            .reduce(Tracker::new, Tracker::merge)
    };
    match threads {
        Some(1) => items.iter().fold(Tracker::new(), &work),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map(|pool| pool.install(go))
            .unwrap_or_else(|_| go()),
        None => go(),
    }
}

fn pruned_search<T: KInt>(spec: &KernelSpec<T>, threads: Option<usize>) -> Result<Vec<i64>> {
    let ts = tasks(&spec.bounds, spec.keyed, spec.inner());
    run_parallel(&ts, threads, |t, task| Search::run(spec, t, *task)).finish()
}

pub(crate) fn is_canonical_nonzero(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// All points of the box in lexicographic order.
pub(crate) fn odometer_owned(bounds: Vec<i64>) -> impl Iterator<Item = Vec<i64>> {
    let mut cur: Option<Vec<i64>> = Some(bounds.iter().map(|b| -b).collect());
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        let mut i = next.len();
        while i > 0 {
            i -= 1;
            if next[i] < bounds[i] {
                next[i] += 1;
                for (j, b) in bounds.iter().enumerate().skip(i + 1) {
                    next[j] = -b;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

fn odometer(bounds: &[i64]) -> impl Iterator<Item = Vec<i64>> {
    odometer_owned(bounds.to_vec())
}

struct Half<T> {
    p: Partial<T>,
    key: Vec<i64>,
}

fn half_list<T: KInt>(coefs: &[Coef<T>], bounds: &[i64], canonical_only: bool) -> Vec<Half<T>> {
    odometer(bounds)
        .filter(|k| !canonical_only || k.iter().all(|&x| x == 0) || is_canonical_nonzero(k))
        .map(|key| {
            let p = key
                .iter()
                .zip(coefs)
                .fold(Partial::zero(), |acc, (&m, c)| acc.add(c, m));
            Half { p, key }
        })
        .collect()
}

fn mitm_search<T: KInt>(spec: &KernelSpec<T>, threads: Option<usize>) -> Result<Vec<i64>> {
    assert!(!spec.wrap && spec.keyed >= 2);
    let h = spec.keyed / 2;
    let left = half_list(&spec.coefs[..h], &spec.bounds[..h], true);
    let mut right = half_list(&spec.coefs[h..], &spec.bounds[h..], false);
    right.sort_by(|x, y| x.p.s.cmp(&y.p.s).then_with(|| x.key.cmp(&y.key)));
    let wmax = right
        .iter()
        .map(|r| {
            let n = -r.p.wn.clone();
            if n > r.p.wp {
                n
            } else {
                r.p.wp.clone()
            }
        })
        .max()
        .unwrap_or_else(T::zero);

    let work = |mut tr: Tracker<T>, a: &Half<T>| {
        let a_zero = a.key.iter().all(|&x| x == 0);
        let neg = -a.p.s.clone();
        let p = right.partition_point(|r| r.p.s < neg);
        let mut key = a.key.clone();
        key.resize(spec.keyed, 0);
        let mut consider = |tr: &mut Tracker<T>, r: &Half<T>| {
            if a_zero && !is_canonical_nonzero(&r.key) {
                return;
            }
            key[h..].copy_from_slice(&r.key);
            let (lo, hi) = a.p.join(&r.p).abs_bounds();
            tr.push(lo, hi, &key);
        };
        for r in &right[p..] {
            if let Some(u) = tr.bound() {
                let floor = a.p.s.clone() + r.p.s.clone() + a.p.wn.clone() - wmax.clone();
                if floor > *u {
                    break;
                }
            }
            consider(&mut tr, r);
        }
        for r in right[..p].iter().rev() {
            if let Some(u) = tr.bound() {
                let floor = -(a.p.s.clone() + r.p.s.clone() + a.p.wp.clone() + wmax.clone());
                if floor > *u {
                    break;
                }
            }
            consider(&mut tr, r);
        }
        tr
    };
    run_parallel(&left, threads, work).finish()
}

/// Integer image of the inputs at a common scale.
struct Scaled {
    a: Vec<BigInt>,
    w: Vec<BigInt>,
    scale: BigInt,
}

fn scale_values(values: &[Scalar], grid_bits: Option<u32>) -> Scaled {
    if values.iter().all(Scalar::is_exact) {
        let scale = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.lower().denom()));
        let a = values
            .iter()
            .map(|v| (v.lower() * &scale).to_integer())
            .collect();
        return Scaled {
            w: vec![BigInt::zero(); values.len()],
            a,
            scale,
        };
    }
    let precision = values.iter().filter_map(Scalar::precision).min().unwrap_or(64);
    let bits = grid_bits.map_or(precision, |g| g.min(precision)) as i64;
    let mag = values
        .iter()
        .map(|v| v.lower().abs().max(v.upper().abs()))
        .max()
        .map(|m| m.numer().bits() as i64 - m.denom().bits() as i64 + 1)
        .unwrap_or(0)
        .max(0);
    // coarser than the unit grid is never useful
    let s = (bits + 4 - mag).max(0);
    let f = pow2(s);
    let mut a = Vec::with_capacity(values.len());
    let mut w = Vec::with_capacity(values.len());
    for v in values {
        let lo = floor_rat(&(v.lower() * &f));
        let hi = ceil_rat(&(v.upper() * &f));
        w.push(&hi - &lo);
        a.push(lo);
    }
    Scaled {
        a,
        w,
        scale: BigInt::one() << (s as usize),
    }
}

fn build_spec<T: KInt>(sc: &Scaled, bounds: &[i64], wrap: bool) -> Option<KernelSpec<T>> {
    let mut coefs: Vec<Coef<T>> = sc
        .a
        .iter()
        .zip(&sc.w)
        .map(|(a, w)| {
            Some(Coef {
                a: T::from_big(a)?,
                w: T::from_big(w)?,
            })
        })
        .collect::<Option<_>>()?;
    let keyed = coefs.len();
    let mut all_bounds = bounds.to_vec();
    if wrap {
        coefs.push(Coef {
            a: T::from_big(&sc.scale)?,
            w: T::zero(),
        });
        all_bounds.push(UNBOUNDED);
    }
    let n = coefs.len();
    let mut reach_after = vec![Some(T::zero()); n];
    let mut acc = Some(T::zero());
    for d in (0..n).rev() {
        reach_after[d] = acc.clone();
        acc = if wrap && d == n - 1 {
            None
        } else {
            acc.map(|r| {
                r + (coefs[d].a.abs() + coefs[d].w.clone()) * T::from(all_bounds[d])
            })
        };
    }
    Some(KernelSpec {
        coefs,
        bounds: all_bounds,
        keyed,
        wrap,
        reach_after,
    })
}

fn fits_i128(sc: &Scaled, bounds: &[i64], wrap: bool) -> bool {
    let mut total = BigInt::zero();
    for ((a, w), b) in sc.a.iter().zip(&sc.w).zip(bounds) {
        total += (a.abs() + w) * BigInt::from(*b);
    }
    if wrap {
        total += &sc.scale * BigInt::from(4);
    }
    total.bits() <= 120
}

/// Canonical argmin of `|sum m_j v_j|` (or of `‖sum m_j v_j‖` when `wrap`)
/// over nonzero integer `m` with `|m_j| <= bounds[j]`.
pub(crate) fn argmin(
    values: &[Scalar],
    bounds: &[i64],
    wrap: bool,
    strategy: Strategy,
    threads: Option<usize>,
) -> Result<Vec<i64>> {
    debug_assert_eq!(values.len(), bounds.len());
    let points: f64 = bounds.iter().map(|&b| 2.0 * b as f64 + 1.0).product();
    let use_mitm = !wrap
        && values.len() >= 2
        && match strategy {
            Strategy::Auto => points > MITM_THRESHOLD as f64,
            Strategy::Pruned => false,
            Strategy::MeetInTheMiddle => true,
        };
    let run = |sc: &Scaled| {
        macro_rules! go {
            ($t:ty) => {{
                let spec = build_spec::<$t>(sc, bounds, wrap).expect("kernel integers fit");
                if use_mitm {
                    mitm_search(&spec, threads)
                } else {
                    pruned_search(&spec, threads)
                }
            }};
        }
        if fits_i128(sc, bounds, wrap) {
            go!(i128)
        } else {
            go!(BigInt)
        }
    };
    // A coarse grid keeps the kernel in machine integers; only a near tie
    // needs the full input precision.
    let exact = values.iter().all(Scalar::is_exact);
    let fine = values.iter().filter_map(Scalar::precision).min().unwrap_or(0);
    if !exact && fine > COARSE_GRID_BITS {
        match run(&scale_values(values, Some(COARSE_GRID_BITS))) {
            Err(Error::Undecided(_)) => {}
            other => return other,
        }
    }
    run(&scale_values(values, None))
}
