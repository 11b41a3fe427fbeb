//! Dual systems of linear forms and a complete check of the transference
//! condition
//!
//! `‖u·alpha‖ <= gamma1 max(max_i X_i ‖R_i(u)‖, max_j eps_j |u_j|)` for all
//! integer `u`, which only needs checking on a finite cutoff box.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::bounds::{gamma1, Part};
use crate::error::{Error, Result};
use crate::forms::{IntVector, LinearFormSystem};
use crate::hypothesis::{scalar_max, IntBox};
use crate::scalar::Scalar;
use crate::witness::find_integer_point;

/// Default limit on points scanned by the solvability probes.
pub const PROBE_BUDGET: u64 = 10_000_000;

/// Coefficient matrices of `f_k(z)` and `g_k(w)`, `z = (x, y)`,
/// `w = (v, u)`. Row `k` holds the coefficients of form `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPair {
    pub f: Vec<Vec<Scalar>>,
    pub g: Vec<Vec<Scalar>>,
    pub m: usize,
    pub n: usize,
}

impl DualPair {
    pub fn d(&self) -> usize {
        self.m + self.n
    }
}

fn check_positive(v: &[Scalar], what: &str) -> Result<()> {
    for (i, x) in v.iter().enumerate() {
        if x.signum_proven() != Some(Ordering::Greater) {
            return Err(Error::Domain(format!("{what}_{} must be positive", i + 1)));
        }
    }
    Ok(())
}

fn check_dims(sys: &LinearFormSystem, n_like: &[(&str, usize)], m_like: &[(&str, usize)]) -> Result<()> {
    for &(_, got) in n_like {
        if got != sys.n() {
            return Err(Error::DimensionMismatch {
                expected: sys.n(),
                got,
            });
        }
    }
    for &(_, got) in m_like {
        if got != sys.m() {
            return Err(Error::DimensionMismatch {
                expected: sys.m(),
                got,
            });
        }
    }
    Ok(())
}

/// `f_k = eps_k^{-1} (L_k(x) + y_k)`, `f_{n+i} = x_i / X_i`,
/// `g_k = eps_k u_k`, `g_{n+i} = X_i (v_i - R_i(u))`.
pub fn build_dual_pair(sys: &LinearFormSystem, eps: &[Scalar], x: &[Scalar]) -> Result<DualPair> {
    check_dims(sys, &[("eps", eps.len())], &[("X", x.len())])?;
    check_positive(eps, "eps")?;
    check_positive(x, "X")?;
    let (m, n) = (sys.m(), sys.n());
    let d = m + n;
    let mut f = vec![vec![Scalar::zero(); d]; d];
    let mut g = vec![vec![Scalar::zero(); d]; d];
    for k in 0..n {
        let inv = eps[k].recip()?;
        for i in 0..m {
            f[k][i] = sys.theta(i, k) * &inv;
        }
        f[k][m + k] = inv;
        g[k][m + k] = eps[k].clone();
    }
    for i in 0..m {
        f[n + i][i] = x[i].recip()?;
        g[n + i][i] = x[i].clone();
        for j in 0..n {
            g[n + i][m + j] = -(&x[i] * sys.theta(i, j));
        }
    }
    Ok(DualPair { f, g, m, n })
}

/// `F^T G = I` exactly, i.e. `sum_k f_k(z) g_k(w) = z·w` identically.
pub fn verify_duality_identity(pair: &DualPair) -> bool {
    let d = pair.d();
    (0..d).all(|a| {
        (0..d).all(|b| {
            let s = (0..d).fold(Scalar::zero(), |acc, k| acc + &pair.f[k][a] * &pair.g[k][b]);
            let want = if a == b { Scalar::one() } else { Scalar::zero() };
            s == want
        })
    })
}

/// `B_j = floor(1 / (2 gamma1 eps_j))`; outside this box the right-hand
/// side exceeds `1/2` and the condition holds trivially.
pub fn condition_cutoff_box(eps: &[Scalar], gamma1: &BigRational) -> Result<IntBox> {
    check_positive(eps, "eps")?;
    let two_g = Scalar::Exact(gamma1 * BigInt::from(2));
    let b = eps
        .iter()
        .map(|e| (&two_g * e).recip()?.floor())
        .collect::<Result<Vec<_>>>()?;
    IntBox::from_bigints(&b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub gamma1_used: BigRational,
    pub checked_box: IntBox,
    pub holds: bool,
    pub violator: Option<IntVector>,
    /// The cutoff box covers every `u` the condition can fail at.
    pub complete: bool,
}

/// Left and right sides of the condition at `u`.
pub fn condition_sides(
    sys: &LinearFormSystem,
    alpha: &[Scalar],
    eps: &[Scalar],
    x: &[Scalar],
    gamma1: &BigRational,
    u: &IntVector,
) -> Result<(Scalar, Scalar)> {
    let lhs = u
        .0
        .iter()
        .zip(alpha)
        .fold(Scalar::zero(), |acc, (c, a)| acc + Scalar::from_int(c.clone()) * a)
        .dist_to_nearest_int();
    let r = sys.eval_transposed(u)?;
    let mut rhs = Scalar::zero();
    for (ri, xi) in r.iter().zip(x) {
        rhs = scalar_max(&rhs, &(xi * &ri.dist_to_nearest_int()));
    }
    for (c, e) in u.0.iter().zip(eps) {
        rhs = scalar_max(&rhs, &(e * &Scalar::from_int(c.abs())));
    }
    Ok((lhs, Scalar::Exact(gamma1.clone()) * rhs))
}

fn violated_scalar(
    sys: &LinearFormSystem,
    alpha: &[Scalar],
    eps: &[Scalar],
    x: &[Scalar],
    gamma1: &BigRational,
    u: &[i64],
) -> Result<bool> {
    let (lhs, rhs) = condition_sides(sys, alpha, eps, x, gamma1, &IntVector::from_i64(u))?;
    match lhs.cmp_proven(&rhs) {
        Some(Ordering::Greater) => Ok(true),
        Some(_) => Ok(false),
        None => Err(Error::Undecided("condition sides overlap")),
    }
}

/// Integer data of an all-rational instance for overflow-checked `i128`
/// evaluation.
struct FastCheck {
    alpha: Vec<i128>,
    alpha_den: i128,
    theta: Vec<Vec<i128>>,
    theta_den: Vec<i128>,
    x: Vec<(i128, i128)>,
    eps: Vec<(i128, i128)>,
    gamma: (i128, i128),
}

fn small(r: &BigRational) -> Option<(i128, i128)> {
    Some((r.numer().to_i128()?, r.denom().to_i128()?))
}

fn common(values: &[&BigRational]) -> Option<(Vec<i128>, i128)> {
    let den = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums = values
        .iter()
        .map(|v| (*v * &den).to_integer().to_i128())
        .collect::<Option<Vec<_>>>()?;
    Some((nums, den.to_i128()?))
}

impl FastCheck {
    fn new(
        sys: &LinearFormSystem,
        alpha: &[Scalar],
        eps: &[Scalar],
        x: &[Scalar],
        gamma1: &BigRational,
    ) -> Option<Self> {
        fn ex(v: &[Scalar]) -> Option<Vec<&BigRational>> {
            v.iter().map(Scalar::as_exact).collect()
        }
        let (alpha, alpha_den) = common(&ex(alpha)?)?;
        let mut theta = Vec::new();
        let mut theta_den = Vec::new();
        for row in sys.rows() {
            let (nums, den) = common(&ex(row)?)?;
            theta.push(nums);
            theta_den.push(den);
        }
        Some(FastCheck {
            alpha,
            alpha_den,
            theta,
            theta_den,
            x: ex(x)?.into_iter().map(small).collect::<Option<_>>()?,
            eps: ex(eps)?.into_iter().map(small).collect::<Option<_>>()?,
            gamma: small(gamma1)?,
        })
    }

    /// `Some(violated)`, or `None` on overflow.
    fn violated(&self, u: &[i64]) -> Option<bool> {
        let dist = |acc: i128, den: i128| {
            let r = acc.rem_euclid(den);
            r.min(den - r)
        };
        let mut acc: i128 = 0;
        for (a, &c) in self.alpha.iter().zip(u) {
            acc = acc.checked_add(a.checked_mul(c as i128)?)?;
        }
        let (ln, ld) = (dist(acc, self.alpha_den), self.alpha_den);
        let (gn, gd) = self.gamma;
        // violated iff ln/ld > gamma * term for every term
        let beats = |pn: i128, pd: i128| -> Option<bool> {
            // ln/ld > (gn pn) / (gd pd)
            Some(ln.checked_mul(gd)?.checked_mul(pd)? > gn.checked_mul(pn)?.checked_mul(ld)?)
        };
        for ((row, &den), &(xn, xd)) in self.theta.iter().zip(&self.theta_den).zip(&self.x) {
            let mut r: i128 = 0;
            for (t, &c) in row.iter().zip(u) {
                r = r.checked_add(t.checked_mul(c as i128)?)?;
            }
            let dn = dist(r, den);
            if !beats(xn.checked_mul(dn)?, xd.checked_mul(den)?)? {
                return Some(false);
            }
        }
        for (&(en, ed), &c) in self.eps.iter().zip(u) {
            if !beats(en.checked_mul((c as i128).abs())?, ed)? {
                return Some(false);
            }
        }
        Some(true)
    }
}

fn slice_points(bounds: &[i64], first: i64) -> impl Iterator<Item = Vec<i64>> + '_ {
    // points with u_0 = first, in lexicographic order
    let rest: Vec<i64> = bounds[1..].to_vec();
    let mut cur: Option<Vec<i64>> = Some(rest.iter().map(|b| -b).collect());
    std::iter::from_fn(move || {
        let tail = cur.take()?;
        let mut next = tail.clone();
        let mut i = next.len();
        while i > 0 {
            i -= 1;
            if next[i] < rest[i] {
                next[i] += 1;
                for j in i + 1..next.len() {
                    next[j] = -rest[j];
                }
                cur = Some(next);
                break;
            }
        }
        let mut out = Vec::with_capacity(tail.len() + 1);
        out.push(first);
        out.extend(tail);
        Some(out)
    })
}

/// Checks the condition on every nonzero `u` of the cutoff box. `u` and
/// `-u` give the same sides, so only canonical `u` are visited; the
/// reported violator is the lexicographically first canonical one.
pub fn check_condition(
    sys: &LinearFormSystem,
    alpha: &[Scalar],
    eps: &[Scalar],
    x: &[Scalar],
    gamma1: &BigRational,
    budget: u64,
    threads: Option<usize>,
) -> Result<ConditionReport> {
    check_dims(sys, &[("alpha", alpha.len()), ("eps", eps.len())], &[("X", x.len())])?;
    check_positive(x, "X")?;
    let checked_box = condition_cutoff_box(eps, gamma1)?;
    checked_box.check_budget(budget)?;
    let fast = FastCheck::new(sys, alpha, eps, x, gamma1);
    let run = |use_fast: bool| -> Result<Option<Vec<i64>>> {
        let bounds: Vec<i64> = checked_box.bounds.iter().map(|&b| b as i64).collect();
        let test = |u: &[i64]| -> Result<Option<bool>> {
            if use_fast {
                Ok(fast.as_ref().and_then(|f| f.violated(u)))
            } else {
                violated_scalar(sys, alpha, eps, x, gamma1, u).map(Some)
            }
        };
        let scan = |first: i64| -> Option<Result<Option<Vec<i64>>>> {
            for u in slice_points(&bounds, first) {
                if first == 0 && !u.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
                    continue;
                }
                match test(&u) {
                    Ok(Some(true)) => return Some(Ok(Some(u))),
                    Ok(Some(false)) => {}
                    Ok(None) => return Some(Err(Error::Undecided("overflow"))),
                    Err(e) => return Some(Err(e)),
                }
            }
            None
        };
        let firsts: Vec<i64> = (0..=bounds[0]).collect();
        let found = match threads {
            Some(1) => firsts.iter().find_map(|&f| scan(f)),
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Domain(e.to_string()))?
                .install(|| firsts.par_iter().find_map_first(|&f| scan(f))),
            None => firsts.par_iter().find_map_first(|&f| scan(f)),
        };
        found.unwrap_or(Ok(None))
    };
    let violator = match fast {
        Some(_) => match run(true) {
            Err(Error::Undecided("overflow")) => run(false)?,
            other => other?,
        },
        None => run(false)?,
    };
    Ok(ConditionReport {
        gamma1_used: gamma1.clone(),
        checked_box,
        holds: violator.is_none(),
        violator: violator.map(|u| IntVector::from_i64(&u)),
        complete: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NecessityOutcome {
    SolutionAndConditionHold { solution: IntVector },
    NoSolution,
    CounterexampleToPartA { solution: IntVector, violator: IntVector },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SufficiencyOutcome {
    ConditionFails { violator: IntVector },
    ConditionHoldsSolutionFound { solution: IntVector },
    CounterexampleToPartB,
}

/// Lexicographically smallest integer `a` with `|a_i| <= X_i` and
/// `‖L_j(a) - alpha_j‖ <= eps_j`.
pub fn find_bounded_solution(
    sys: &LinearFormSystem,
    alpha: &[Scalar],
    eps: &[Scalar],
    x: &[Scalar],
    budget: u64,
) -> Result<Option<IntVector>> {
    check_dims(sys, &[("alpha", alpha.len()), ("eps", eps.len())], &[("X", x.len())])?;
    for (i, xi) in x.iter().enumerate() {
        if xi.le_proven(&Scalar::one()) != Some(false) {
            return Err(Error::Domain(format!("X_{} must exceed 1", i + 1)));
        }
    }
    let tau: Vec<Scalar> = x.iter().map(|v| -v).collect();
    let len: Vec<Scalar> = x.iter().map(|v| v * &Scalar::from_int(2)).collect();
    find_integer_point(sys, alpha, eps, &tau, &len, budget)
}

/// If a bounded solution exists, the condition must hold with `gamma1 = d`.
pub fn necessity_probe(
    sys: &LinearFormSystem,
    alpha: &[Scalar],
    eps: &[Scalar],
    x: &[Scalar],
    budget: u64,
) -> Result<NecessityOutcome> {
    let Some(solution) = find_bounded_solution(sys, alpha, eps, x, budget)? else {
        return Ok(NecessityOutcome::NoSolution);
    };
    let g = gamma1(sys.d() as u32, Part::A)?;
    let report = check_condition(sys, alpha, eps, x, &g, budget, Some(1))?;
    Ok(match report.violator {
        None => NecessityOutcome::SolutionAndConditionHold { solution },
        Some(violator) => NecessityOutcome::CounterexampleToPartA { solution, violator },
    })
}

/// If the condition holds with `gamma1 = 2^{d-1} / (d!)^2`, a bounded
/// solution must exist.
pub fn sufficiency_probe(
    sys: &LinearFormSystem,
    alpha: &[Scalar],
    eps: &[Scalar],
    x: &[Scalar],
    budget: u64,
) -> Result<SufficiencyOutcome> {
    let g = gamma1(sys.d() as u32, Part::B)?;
    let report = check_condition(sys, alpha, eps, x, &g, budget, Some(1))?;
    if let Some(violator) = report.violator {
        return Ok(SufficiencyOutcome::ConditionFails { violator });
    }
    Ok(match find_bounded_solution(sys, alpha, eps, x, budget)? {
        Some(solution) => SufficiencyOutcome::ConditionHoldsSolutionFound { solution },
        None => SufficiencyOutcome::CounterexampleToPartB,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_exact;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(x: &str) -> Scalar {
        Scalar::Exact(parse_exact(x).unwrap())
    }

    fn q(x: &str) -> BigRational {
        parse_exact(x).unwrap()
    }

    fn sys1(t: &str) -> LinearFormSystem {
        LinearFormSystem::new(vec![vec![s(t)]]).unwrap()
    }

    fn random_system(rng: &mut ChaCha8Rng, m: usize, n: usize) -> LinearFormSystem {
        let flat = (0..m * n)
            .map(|_| Scalar::ratio(rng.gen_range(-30..30), rng.gen_range(1..12)))
            .collect();
        LinearFormSystem::from_row_major(m, n, flat).unwrap()
    }

    #[test]
    fn dual_pair_example() {
        let p = build_dual_pair(&sys1("1/2"), &[s("1/4")], &[s("2")]).unwrap();
        // f1 = 2x + 4y, f2 = x/2; g1 = u/4, g2 = 2v - u
        assert_eq!(p.f, vec![vec![s("2"), s("4")], vec![s("1/2"), s("0")]]);
        assert_eq!(p.g, vec![vec![s("0"), s("1/4")], vec![s("2"), s("-1")]]);
        assert!(verify_duality_identity(&p));
    }

    #[test]
    fn duality_identity_random_and_perturbed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let (m, n) = (rng.gen_range(1..5), rng.gen_range(1..5));
            let sys = random_system(&mut rng, m, n);
            let eps: Vec<Scalar> = (0..n).map(|_| Scalar::ratio(rng.gen_range(1..10), 20)).collect();
            let x: Vec<Scalar> = (0..m).map(|_| Scalar::ratio(rng.gen_range(5..40), 4)).collect();
            let mut p = build_dual_pair(&sys, &eps, &x).unwrap();
            assert!(verify_duality_identity(&p));
            p.f[0][0] = &p.f[0][0] + &s("1e-9");
            assert!(!verify_duality_identity(&p));
        }
        let id = DualPair {
            f: vec![vec![s("1"), s("0")], vec![s("0"), s("1")]],
            g: vec![vec![s("1"), s("0")], vec![s("0"), s("1")]],
            m: 1,
            n: 1,
        };
        assert!(verify_duality_identity(&id));
    }

    #[test]
    fn cutoff_boxes() {
        assert_eq!(condition_cutoff_box(&[s("1/4")], &q("1/2")).unwrap(), IntBox::new(vec![4]));
        assert_eq!(
            condition_cutoff_box(&[s("1/2"), s("1/2")], &q("2")).unwrap(),
            IntBox::new(vec![0, 0])
        );
        assert_eq!(condition_cutoff_box(&[s("1/20")], &q("1/2")).unwrap(), IntBox::new(vec![20]));
    }

    #[test]
    fn condition_examples() {
        let r = check_condition(&sys1("0"), &[s("1/2")], &[s("1/4")], &[s("2")], &q("1/2"), 1000, Some(1)).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violator, Some(IntVector::from_i64(&[1])));
        assert!(r.complete);

        let r = check_condition(&sys1("1/3"), &[s("0")], &[s("1/4")], &[s("2")], &q("1/2"), 1000, Some(1)).unwrap();
        assert!(r.holds);

        let r = check_condition(&sys1("1/2"), &[s("1/2")], &[s("1/4")], &[s("2")], &q("2"), 1000, Some(1)).unwrap();
        assert!(r.holds);
        assert_eq!(r.checked_box, IntBox::new(vec![1]));
    }

    #[test]
    fn probes_examples() {
        let z = sys1("0");
        let (alpha, eps, x) = ([s("1/2")], [s("1/4")], [s("2")]);
        assert_eq!(necessity_probe(&z, &alpha, &eps, &x, PROBE_BUDGET).unwrap(), NecessityOutcome::NoSolution);
        assert!(matches!(
            sufficiency_probe(&z, &alpha, &eps, &x, PROBE_BUDGET).unwrap(),
            SufficiencyOutcome::ConditionFails { .. }
        ));
        let t = sys1("3/7");
        let zero = [s("0")];
        assert!(matches!(
            sufficiency_probe(&t, &zero, &eps, &x, PROBE_BUDGET).unwrap(),
            SufficiencyOutcome::ConditionHoldsSolutionFound { .. }
        ));
        // alpha = L(a0) with a0 = 2
        let hit = [s("6/7")];
        assert!(matches!(
            necessity_probe(&t, &hit, &eps, &x, PROBE_BUDGET).unwrap(),
            NecessityOutcome::SolutionAndConditionHold { .. }
        ));
        assert!(find_bounded_solution(&t, &hit, &eps, &[s("1")], 10).is_err());
    }

    #[test]
    fn fast_path_matches_scalar_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let (m, n) = (rng.gen_range(1..3), rng.gen_range(1..3));
            let sys = random_system(&mut rng, m, n);
            let alpha: Vec<Scalar> = (0..n).map(|_| Scalar::ratio(rng.gen_range(0..40), 40)).collect();
            let eps: Vec<Scalar> = (0..n).map(|_| Scalar::ratio(rng.gen_range(2..8), 16)).collect();
            let x: Vec<Scalar> = (0..m).map(|_| Scalar::ratio(rng.gen_range(5..32), 4)).collect();
            let g = gamma1((m + n) as u32, Part::B).unwrap();
            let fast = FastCheck::new(&sys, &alpha, &eps, &x, &g).unwrap();
            let bx = condition_cutoff_box(&eps, &g).unwrap();
            for u in bx.canonical_points().take(3000) {
                assert_eq!(
                    fast.violated(&u).unwrap(),
                    violated_scalar(&sys, &alpha, &eps, &x, &g, &u).unwrap()
                );
            }
        }
    }

    #[test]
    fn threads_agree_on_first_violator() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let sys = random_system(&mut rng, 2, 2);
            let alpha: Vec<Scalar> = (0..2).map(|_| Scalar::ratio(rng.gen_range(0..40), 40)).collect();
            let eps = vec![s("1/8"), s("3/16")];
            let x = vec![s("3"), s("5/2")];
            let g = gamma1(4, Part::B).unwrap();
            let a = check_condition(&sys, &alpha, &eps, &x, &g, PROBE_BUDGET, Some(1)).unwrap();
            let b = check_condition(&sys, &alpha, &eps, &x, &g, PROBE_BUDGET, Some(4)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn outside_cutoff_right_side_exceeds_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let half = s("1/2");
        for _ in 0..1000 {
            let (m, n) = (rng.gen_range(1..3), rng.gen_range(1..3));
            let sys = random_system(&mut rng, m, n);
            let alpha: Vec<Scalar> = (0..n).map(|_| Scalar::ratio(rng.gen_range(0..40), 40)).collect();
            let eps: Vec<Scalar> = (0..n).map(|_| Scalar::ratio(rng.gen_range(2..8), 16)).collect();
            let x: Vec<Scalar> = (0..m).map(|_| Scalar::ratio(rng.gen_range(5..32), 4)).collect();
            let g = gamma1((m + n) as u32, Part::B).unwrap();
            let bx = condition_cutoff_box(&eps, &g).unwrap();
            let mut u: Vec<i64> = (0..n).map(|_| rng.gen_range(-60..60)).collect();
            let j = rng.gen_range(0..n);
            let b = bx.bounds[j] as i64;
            u[j] = if rng.gen_bool(0.5) { b + 1 + rng.gen_range(0..20) } else { -b - 1 - rng.gen_range(0..20) };
            let (lhs, rhs) = condition_sides(&sys, &alpha, &eps, &x, &g, &IntVector::from_i64(&u)).unwrap();
            assert!(rhs.lower() > half.upper());
            assert!(lhs.upper() <= half.lower());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn larger_gamma1_keeps_condition(
            seed in 0u64..10_000,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (m, n) = (rng.gen_range(1..3), rng.gen_range(1..3));
            let sys = random_system(&mut rng, m, n);
            let alpha: Vec<Scalar> = (0..n).map(|_| Scalar::ratio(rng.gen_range(0..40), 40)).collect();
            let eps: Vec<Scalar> = (0..n).map(|_| Scalar::ratio(rng.gen_range(2..8), 16)).collect();
            let x: Vec<Scalar> = (0..m).map(|_| Scalar::ratio(rng.gen_range(5..32), 4)).collect();
            let small_g = gamma1((m + n) as u32, Part::B).unwrap();
            let big_g = &small_g * BigInt::from(rng.gen_range(2..6));
            let a = check_condition(&sys, &alpha, &eps, &x, &small_g, PROBE_BUDGET, Some(1)).unwrap();
            let b = check_condition(&sys, &alpha, &eps, &x, &big_g, PROBE_BUDGET, Some(1)).unwrap();
            prop_assert!(!a.holds || b.holds);
        }
    }
}
