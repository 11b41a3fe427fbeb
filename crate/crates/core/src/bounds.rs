//! Closed-form constants, box sizes and window lengths.
//!
//! `gamma(N) = 2^(N-2) / (N (N!)^2)` fixes the hypothesis box
//! `M*_j = 1/(gamma eps_j)` and the window `T* = 1/(gamma delta)`. The
//! Gonek–Montgomery box `ceil((1/eps_j) ln(N/eps_j))` and window `4/delta`
//! are provided for comparison.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::real::{exp_scalar, ln_scalar};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    /// Necessity constant `gamma_1 = d`.
    A,
    /// Sufficiency constant `gamma_1 = 2^(d-1) / (d!)^2`.
    B,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn gamma(n: u32) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::Domain(format!("gamma needs N >= 2, got {n}")));
    }
    let f = factorial(n);
    Ok(BigRational::new(
        BigInt::one() << (n as usize - 2),
        BigInt::from(n) * &f * &f,
    ))
}

pub fn gamma1(d: u32, part: Part) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::Domain(format!("gamma1 needs d >= 2, got {d}")));
    }
    Ok(match part {
        Part::A => BigRational::from_integer(d.into()),
        Part::B => {
            let f = factorial(d);
            BigRational::new(BigInt::one() << (d as usize - 1), &f * &f)
        }
    })
}

fn check_eps(eps: &[Scalar]) -> Result<()> {
    let half = Scalar::ratio(1, 2);
    for (index, e) in eps.iter().enumerate() {
        let positive = e.lower().is_positive();
        let below_half = e.upper() < half.lower();
        if !positive || !below_half {
            return Err(Error::EpsilonOutOfRange {
                index,
                value: e.to_string(),
            });
        }
    }
    Ok(())
}

/// `M*_j = 1/(gamma eps_j)` together with the enumeration bound `floor(M*_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremBox {
    pub m_star: Vec<Scalar>,
    pub floor: Vec<BigInt>,
}

pub fn box_theorem1(n: u32, eps: &[Scalar]) -> Result<TheoremBox> {
    if eps.len() != n as usize {
        return Err(Error::DimensionMismatch {
            expected: n as usize,
            got: eps.len(),
        });
    }
    check_eps(eps)?;
    let g = Scalar::Exact(gamma(n)?);
    let mut m_star = Vec::with_capacity(eps.len());
    let mut floor = Vec::with_capacity(eps.len());
    for e in eps {
        let m = (&g * e).recip()?;
        if m.lower() < &BigRational::one() {
            return Err(Error::Domain(format!("M* = {m} is below 1")));
        }
        floor.push(m.floor()?);
        m_star.push(m);
    }
    Ok(TheoremBox { m_star, floor })
}

/// `ceil((1/eps_j) ln(N/eps_j))` at a fixed precision; undecided ceilings
/// are reported as [`Error::Undecided`].
pub fn box_gm_at(n: u32, eps: &[Scalar], bits: u32) -> Result<Vec<BigInt>> {
    check_eps(eps)?;
    let nn = Scalar::from_int(n);
    eps.iter()
        .map(|e| {
            let ratio = nn.checked_div(e)?;
            let value = ln_scalar(&ratio, bits)? * e.recip()?;
            value.ceil()
        })
        .collect()
}

pub fn box_gm(n: u32, eps: &[Scalar], precision: &Precision) -> Result<Vec<BigInt>> {
    precision
        .escalate(|bits| box_gm_at(n, eps, bits))
        .map(|(v, _)| v)
}

fn check_delta(delta: &Scalar) -> Result<()> {
    if !delta.lower().is_positive() {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    Ok(())
}

/// `T* = 1/(gamma(N) delta)`.
pub fn window_theorem1(n: u32, delta: &Scalar) -> Result<Scalar> {
    check_delta(delta)?;
    (&Scalar::Exact(gamma(n)?) * delta).recip()
}

/// `4/delta`.
pub fn window_gm(delta: &Scalar) -> Result<Scalar> {
    check_delta(delta)?;
    Scalar::from_int(4).checked_div(delta)
}

/// Corollary box `1/(2 eps_j gamma_1)`.
pub fn corollary_box(eps: &[Scalar], gamma1: &BigRational) -> Result<Vec<Scalar>> {
    let two_g = Scalar::Exact(gamma1 * BigInt::from(2));
    eps.iter().map(|e| (&two_g * e).recip()).collect()
}

/// The variant `1/(4 gamma_1 eps_j)` that appears inside the reduction
/// argument; half of [`corollary_box`]. Exposed for documentation and
/// comparison only.
pub fn corollary_box_proof_variant(eps: &[Scalar], gamma1: &BigRational) -> Result<Vec<Scalar>> {
    let four_g = Scalar::Exact(gamma1 * BigInt::from(4));
    eps.iter().map(|e| (&four_g * e).recip()).collect()
}

/// Corollary window `2/(gamma_1 delta_i)`.
pub fn corollary_window(deltas: &[Scalar], gamma1: &BigRational) -> Result<Vec<Scalar>> {
    let g = Scalar::Exact(gamma1.clone());
    deltas
        .iter()
        .map(|d| {
            check_delta(d)?;
            Scalar::from_int(2).checked_div(&(&g * d))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSet {
    pub n: u32,
    pub gamma: BigRational,
    pub gamma1_a: BigRational,
    pub gamma1_b: BigRational,
    pub m_star: Vec<Scalar>,
    pub m_star_floor: Vec<BigInt>,
    pub m_gm: Vec<BigInt>,
    pub t_star: Option<Scalar>,
    pub t_gm: Option<Scalar>,
    pub m_cor: Vec<Scalar>,
    pub t_cor: Option<Scalar>,
}

/// Everything for dimension `N` (taking `d = N` for the `gamma_1` values).
pub fn bound_set(
    n: u32,
    eps: &[Scalar],
    delta: Option<&Scalar>,
    precision: &Precision,
) -> Result<BoundSet> {
    let b = box_theorem1(n, eps)?;
    let gamma1_b = gamma1(n, Part::B)?;
    let (t_star, t_gm, t_cor) = match delta {
        Some(d) => (
            Some(window_theorem1(n, d)?),
            Some(window_gm(d)?),
            Some(corollary_window(std::slice::from_ref(d), &gamma1_b)?.remove(0)),
        ),
        None => (None, None, None),
    };
    Ok(BoundSet {
        n,
        gamma: gamma(n)?,
        gamma1_a: gamma1(n, Part::A)?,
        m_star: b.m_star,
        m_star_floor: b.floor,
        m_gm: box_gm(n, eps, precision)?,
        m_cor: corollary_box(eps, &gamma1_b)?,
        gamma1_b,
        t_star,
        t_gm,
        t_cor,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub eps: Scalar,
    pub m_star: Scalar,
    pub m_gm: BigInt,
    pub star_is_smaller: bool,
}

/// One row per grid value: is the theorem's box smaller than the
/// Gonek–Montgomery box?
pub fn compare_bounds(
    n: u32,
    eps_grid: &[Scalar],
    precision: &Precision,
) -> Result<Vec<ComparisonRow>> {
    let g = Scalar::Exact(gamma(n)?);
    eps_grid
        .iter()
        .map(|e| {
            let eps = std::slice::from_ref(e);
            let m_star = (&g * e).recip()?;
            let m_gm = box_gm(n, eps, precision)?.remove(0);
            let gm = Scalar::from_int(m_gm.clone());
            let star_is_smaller = m_star
                .lt_proven(&gm)
                .ok_or(Error::Undecided("M* vs M_gm"))?;
            Ok(ComparisonRow {
                eps: e.clone(),
                m_star,
                m_gm,
                star_is_smaller,
            })
        })
        .collect()
}

/// `eps_0 = N exp(-1/gamma(N))`: below it the theorem's box beats the
/// Gonek–Montgomery box (up to ceiling granularity).
pub fn crossover_epsilon(n: u32, bits: u32) -> Result<Scalar> {
    let inv = gamma(n)?.recip();
    Ok(exp_scalar(&Scalar::Exact(-inv), bits) * Scalar::from_int(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_exact;

    fn s(x: &str) -> Scalar {
        Scalar::Exact(parse_exact(x).unwrap())
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(2).unwrap(), r(1, 8));
        assert_eq!(gamma(3).unwrap(), r(1, 54));
        assert_eq!(gamma(4).unwrap(), r(1, 576));
        assert!(gamma(1).is_err());
    }

    #[test]
    fn gamma1_values() {
        assert_eq!(gamma1(2, Part::A).unwrap(), r(2, 1));
        assert_eq!(gamma1(2, Part::B).unwrap(), r(1, 2));
        assert_eq!(gamma1(3, Part::B).unwrap(), r(1, 9));
        assert!(gamma1(1, Part::B).is_err());
        for n in 2..=10 {
            let lhs = gamma1(n, Part::B).unwrap();
            let rhs = gamma(n).unwrap() * BigInt::from(2 * n);
            assert_eq!(lhs, rhs, "N = {n}");
        }
    }

    #[test]
    fn theorem_box_examples() {
        let b = box_theorem1(2, &[s("0.25"), s("0.25")]).unwrap();
        assert_eq!(b.m_star, vec![Scalar::from_int(32); 2]);
        let b = box_theorem1(2, &[s("0.05"), s("0.05")]).unwrap();
        assert_eq!(b.floor, vec![BigInt::from(160); 2]);
        let near_half = s("0.499999999");
        let b = box_theorem1(3, &vec![near_half; 3]).unwrap();
        assert_eq!(b.floor, vec![BigInt::from(108); 3]);
        assert!(b.m_star[0].to_f64() > 108.0 && b.m_star[0].to_f64() < 108.001);
    }

    #[test]
    fn m_star_times_eps_is_inverse_gamma() {
        for e in ["0.3", "0.01", "1/7", "0.4999"] {
            let b = box_theorem1(2, &[s(e), s(e)]).unwrap();
            assert_eq!(&b.m_star[0] * &s(e), Scalar::from_int(8));
        }
    }

    #[test]
    fn eps_range_is_enforced() {
        assert!(matches!(
            box_theorem1(2, &[s("0.5"), s("0.1")]),
            Err(Error::EpsilonOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            box_theorem1(2, &[s("0.1"), s("0")]),
            Err(Error::EpsilonOutOfRange { index: 1, .. })
        ));
        assert!(box_theorem1(2, &[s("0.1")]).is_err());
    }

    #[test]
    fn gm_box_examples() {
        let p = Precision::default();
        assert_eq!(box_gm(2, &[s("0.1")], &p).unwrap(), vec![BigInt::from(30)]);
        assert_eq!(box_gm(2, &[s("5e-4")], &p).unwrap(), vec![BigInt::from(16589)]);
        assert_eq!(box_gm(2, &[s("0.01")], &p).unwrap(), vec![BigInt::from(530)]);
    }

    #[test]
    fn window_examples() {
        assert_eq!(window_theorem1(2, &s("1")).unwrap(), Scalar::from_int(8));
        assert_eq!(window_theorem1(2, &s("0.5")).unwrap(), Scalar::from_int(16));
        assert_eq!(window_theorem1(3, &s("1/54")).unwrap(), Scalar::from_int(2916));
        assert!(window_theorem1(2, &s("0")).is_err());
        assert_eq!(window_gm(&s("1")).unwrap(), Scalar::from_int(4));
        assert_eq!(window_gm(&s("0.5")).unwrap(), Scalar::from_int(8));
        let w = window_gm(&s("0.005050")).unwrap();
        assert!((w.to_f64() - 792.079_207_920_792).abs() < 1e-9);
        for d in ["1/3", "0.005", "17"] {
            let t = window_theorem1(4, &s(d)).unwrap();
            assert_eq!(t * Scalar::Exact(gamma(4).unwrap()) * s(d), Scalar::one());
        }
    }

    #[test]
    fn comparison_rows() {
        let p = Precision::default();
        let rows = compare_bounds(2, &[s("0.01"), s("5e-4")], &p).unwrap();
        assert_eq!(rows[0].m_star, Scalar::from_int(800));
        assert_eq!(rows[0].m_gm, BigInt::from(530));
        assert!(!rows[0].star_is_smaller);
        assert_eq!(rows[1].m_star, Scalar::from_int(16000));
        assert_eq!(rows[1].m_gm, BigInt::from(16589));
        assert!(rows[1].star_is_smaller);
    }

    #[test]
    fn crossover_values() {
        let e2 = crossover_epsilon(2, 96).unwrap();
        assert!((e2.to_f64() - 6.709_252_558_050_237e-4).abs() < 1e-18);
        let e3 = crossover_epsilon(3, 96).unwrap();
        assert!((e3.to_f64() / 1.059_788_571_660_242_1e-23 - 1.0).abs() < 1e-12);
        let below = Scalar::Exact(e2.lower() * r(9, 10));
        let rows = compare_bounds(2, &[below], &Precision::default()).unwrap();
        assert!(rows[0].star_is_smaller);
    }

    #[test]
    fn corollary_boxes() {
        let g = gamma1(2, Part::B).unwrap();
        let b = corollary_box(&[s("0.25")], &g).unwrap();
        assert_eq!(b, vec![Scalar::from_int(4)]);
        let v = corollary_box_proof_variant(&[s("0.25")], &g).unwrap();
        assert_eq!(v, vec![Scalar::from_int(2)]);
        let w = corollary_window(&[s("0.25")], &g).unwrap();
        assert_eq!(w, vec![Scalar::from_int(16)]);
    }

    #[test]
    fn bound_set_assembles() {
        let bs = bound_set(2, &[s("0.25"), s("0.25")], Some(&s("1")), &Precision::default()).unwrap();
        assert_eq!(bs.gamma, r(1, 8));
        assert_eq!(bs.gamma1_b, r(1, 2));
        assert_eq!(bs.t_star, Some(Scalar::from_int(8)));
        assert_eq!(bs.m_star_floor, vec![BigInt::from(32); 2]);
    }
}
