//! Plain brute-force references. Everything here is nested loops over
//! scalar arithmetic, deliberately sharing no search code with
//! `kronecker-core`.

use std::cmp::Ordering;

use kronecker_core::error::{Error, Result};
use kronecker_core::witness::KroneckerInstance;
use kronecker_core::{IntVector, LinearFormSystem, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Largest box the exhaustive minimum oracle will scan.
pub const MIN_ORACLE_BUDGET: u64 = 1_000_000;

fn box_points(bounds: &[i64]) -> u64 {
    bounds
        .iter()
        .try_fold(1u64, |acc, &b| acc.checked_mul(2 * b as u64 + 1))
        .unwrap_or(u64::MAX)
}

/// Advances `v` to the next point of `prod [lo_i, hi_i]` in lexicographic
/// order; `false` after the last point.
fn advance(v: &mut [i64], lo: &[i64], hi: &[i64]) -> bool {
    for i in (0..v.len()).rev() {
        if v[i] < hi[i] {
            v[i] += 1;
            for j in i + 1..v.len() {
                v[j] = lo[j];
            }
            return true;
        }
    }
    false
}

fn residual_ok(lambda: &Scalar, alpha: &Scalar, eps: &Scalar, t: &Scalar) -> bool {
    let r = (lambda * t - alpha).dist_to_nearest_int();
    r.upper() <= eps.lower()
}

/// First grid point `tau + k step` in `[tau, tau + len]` whose residuals
/// are all provably within `eps`.
pub fn grid_witness_oracle(
    inst: &KroneckerInstance,
    len: &BigRational,
    step: &BigRational,
) -> Result<Option<Scalar>> {
    let ev = inst.eval(inst.precision_bits)?;
    let tau = ev
        .tau
        .as_exact()
        .cloned()
        .ok_or_else(|| Error::Domain("grid oracle needs an exact tau".into()))?;
    let end = &tau + len;
    let mut t = tau;
    while t <= end {
        let ts = Scalar::Exact(t.clone());
        let ok = (0..ev.lambda.len()).all(|j| residual_ok(&ev.lambda[j], &ev.alpha[j], &ev.eps[j], &ts));
        if ok {
            return Ok(Some(ts));
        }
        t += step;
    }
    Ok(None)
}

/// Minimum of `|sum m_j lambda_j|` over nonzero `m` with first nonzero
/// entry positive, ties going to the lexicographically first `m`.
pub fn exhaustive_min_oracle(lambda: &[Scalar], bounds: &[u64]) -> Result<(Scalar, IntVector)> {
    if lambda.len() != bounds.len() || lambda.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: lambda.len(),
            got: bounds.len(),
        });
    }
    let hi: Vec<i64> = bounds.iter().map(|&b| b as i64).collect();
    let lo: Vec<i64> = hi.iter().map(|b| -b).collect();
    let points = box_points(&hi);
    if points > MIN_ORACLE_BUDGET {
        return Err(Error::BudgetExceeded {
            needed: points.to_string(),
            budget: MIN_ORACLE_BUDGET,
        });
    }
    let mut best: Option<(Scalar, Vec<i64>)> = None;
    let mut m = lo.clone();
    loop {
        let canonical = m.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
        if canonical {
            let mut v = Scalar::zero();
            for (c, l) in m.iter().zip(lambda) {
                v = v + Scalar::from_int(*c) * l;
            }
            let v = v.abs();
            let better = match &best {
                None => true,
                Some((b, _)) => match v.cmp_proven(b) {
                    Some(Ordering::Less) => true,
                    Some(_) => false,
                    None => return Err(Error::Undecided("oracle comparison")),
                },
            };
            if better {
                best = Some((v, m.clone()));
            }
        }
        if !advance(&mut m, &lo, &hi) {
            break;
        }
    }
    let (v, key) = best.ok_or_else(|| Error::Domain("box contains no nonzero point".into()))?;
    Ok((v, IntVector::from_i64(&key)))
}

/// Lexicographically first integer `a` with `|a_i| <= floor(X_i)` and
/// `‖L_j(a) - alpha_j‖ <= eps_j`.
pub fn exhaustive_solution_oracle(
    sys: &LinearFormSystem,
    alpha: &[Scalar],
    eps: &[Scalar],
    x: &[Scalar],
    budget: u64,
) -> Result<Option<IntVector>> {
    let mut hi = Vec::with_capacity(x.len());
    for xi in x {
        let f = xi.floor()?;
        hi.push(i64::try_from(f).map_err(|_| Error::Domain("X too large".into()))?);
    }
    let lo: Vec<i64> = hi.iter().map(|b| -b).collect();
    let points = box_points(&hi);
    if points > budget {
        return Err(Error::BudgetExceeded {
            needed: points.to_string(),
            budget,
        });
    }
    let mut a = lo.clone();
    loop {
        let mut ok = true;
        for j in 0..sys.n() {
            let mut l = Scalar::zero();
            for (i, c) in a.iter().enumerate() {
                l = l + Scalar::from_int(BigInt::from(*c)) * sys.theta(i, j);
            }
            let r = (l - &alpha[j]).dist_to_nearest_int();
            if r.upper() > eps[j].lower() {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(IntVector::from_i64(&a)));
        }
        if !advance(&mut a, &lo, &hi) {
            return Ok(None);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kronecker_core::Real;

    fn r(s: &str) -> Real {
        Real::parse(s).unwrap()
    }

    fn s(x: &str) -> Scalar {
        r(x).eval(128)
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn inst(lambda: &[&str], alpha: &[&str], eps: &[&str]) -> KroneckerInstance {
        KroneckerInstance {
            lambda: lambda.iter().map(|x| r(x)).collect(),
            alpha: alpha.iter().map(|x| r(x)).collect(),
            eps: eps.iter().map(|x| r(x)).collect(),
            tau: r("0"),
            delta: None,
            precision_bits: 128,
        }
    }

    #[test]
    fn grid_examples() {
        let i = inst(&["1"], &["1/2"], &["1/4"]);
        let t = grid_witness_oracle(&i, &rat(1, 1), &rat(1, 100)).unwrap();
        assert_eq!(t, Some(Scalar::ratio(1, 4)));
        let i = inst(&["1", "1"], &["0", "1/2"], &["1/5", "1/5"]);
        assert_eq!(grid_witness_oracle(&i, &rat(10, 1), &rat(1, 100)).unwrap(), None);
    }

    #[test]
    fn min_examples() {
        let (v, m) = exhaustive_min_oracle(&[s("1"), s("sqrt(2)")], &[3, 3]).unwrap();
        assert_eq!(m, IntVector::from_i64(&[3, -2]));
        assert!((v.to_f64() - 0.171_572_875_253_809_9).abs() < 1e-15);
        assert_eq!(
            exhaustive_min_oracle(&[s("1")], &[1]).unwrap(),
            (Scalar::one(), IntVector::from_i64(&[1]))
        );
        assert_eq!(
            exhaustive_min_oracle(&[s("2"), s("1")], &[2, 2]).unwrap(),
            (Scalar::zero(), IntVector::from_i64(&[1, -2]))
        );
        assert!(exhaustive_min_oracle(&vec![s("1"); 4], &[20; 4]).is_err());
    }

    #[test]
    fn solution_examples() {
        let sys = LinearFormSystem::new(vec![vec![s("3/7")]]).unwrap();
        let a = exhaustive_solution_oracle(&sys, &[s("6/7")], &[s("0")], &[s("3")], 100).unwrap();
        assert_eq!(a, Some(IntVector::from_i64(&[2])));
        let zero = LinearFormSystem::new(vec![vec![s("0")]]).unwrap();
        assert_eq!(
            exhaustive_solution_oracle(&zero, &[s("1/2")], &[s("1/4")], &[s("2")], 100).unwrap(),
            None
        );
    }
}
