//! Dual-mode real numbers: exact rationals, or outward-rounded enclosures
//! with dyadic endpoints.
//!
//! Every operation on an [`Scalar::Enclosure`] returns an interval that
//! contains the true result. Comparisons never guess: when two enclosures
//! overlap the answer is `None` and the caller is expected to raise the
//! working precision (see [`crate::precision`]).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Enclosure,
}

/// Closed interval `[lo, hi]` with dyadic endpoints rounded to `bits`
/// significant bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigRational,
    hi: BigRational,
    bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Exact(BigRational),
    Enclosure(Enclosure),
}

pub(crate) fn pow2(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << (k as usize))
    } else {
        BigRational::new_raw(BigInt::one(), BigInt::one() << ((-k) as usize))
    }
}

/// Ordering of two rationals by cross-multiplication.
///
/// `Ord` on `BigRational` walks the continued fractions of both sides, which
/// is very slow for two nearby dyadics; this is the hot comparison.
pub fn cmp_rat(a: &BigRational, b: &BigRational) -> Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    match (a.numer().sign(), b.numer().sign()) {
        (x, y) if x != y => return x.cmp(&y),
        _ => {}
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

pub fn min_rat<'a>(a: &'a BigRational, b: &'a BigRational) -> &'a BigRational {
    if cmp_rat(b, a) == Ordering::Less {
        b
    } else {
        a
    }
}

pub fn max_rat<'a>(a: &'a BigRational, b: &'a BigRational) -> &'a BigRational {
    if cmp_rat(b, a) == Ordering::Greater {
        b
    } else {
        a
    }
}

/// `q * 2^(-k)` in lowest terms.
fn dyadic(q: BigInt, k: i64) -> BigRational {
    let tz = q.trailing_zeros().unwrap_or(0) as i64;
    let (q, e) = (q >> (tz as usize), k - tz);
    if e >= 0 {
        BigRational::new_raw(q, BigInt::one() << (e as usize))
    } else {
        BigRational::new_raw(q << ((-e) as usize), BigInt::one())
    }
}

/// Largest dyadic number `<= r` with about `bits` significant bits.
pub(crate) fn round_down(r: &BigRational, bits: u32) -> BigRational {
    if r.is_zero() {
        return BigRational::zero();
    }
    // exact floor(log2 |r|), so the result does not depend on whether r is
    // in lowest terms
    let (n, d) = (r.numer().magnitude(), r.denom().magnitude());
    let mut e = n.bits() as i64 - d.bits() as i64;
    let below = if e >= 0 { n < &(d << (e as usize)) } else { &(n << ((-e) as usize)) < d };
    if below {
        e -= 1;
    }
    let shift = bits as i64 - e + 1;
    let (q, rem) = if shift >= 0 {
        (r.numer() << (shift as usize)).div_mod_floor(r.denom())
    } else {
        r.numer().div_mod_floor(&(r.denom() << ((-shift) as usize)))
    };
    if rem.is_zero() && r.denom().is_one() {
        return r.clone();
    }
    // exact or not, q / 2^shift is the answer; `dyadic` reduces it, so
    // unreduced inputs are fine here
    dyadic(q, shift)
}

/// Unreduced sum; only for values that are rounded right away.
pub(crate) fn raw_add(a: &BigRational, b: &BigRational) -> BigRational {
    if a.denom() == b.denom() {
        return BigRational::new_raw(a.numer() + b.numer(), a.denom().clone());
    }
    BigRational::new_raw(a.numer() * b.denom() + b.numer() * a.denom(), a.denom() * b.denom())
}

pub(crate) fn raw_sub(a: &BigRational, b: &BigRational) -> BigRational {
    raw_add(a, &BigRational::new_raw(-b.numer(), b.denom().clone()))
}

pub(crate) fn raw_mul(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::new_raw(a.numer() * b.numer(), a.denom() * b.denom())
}

pub(crate) fn raw_div_int(a: &BigRational, d: &BigInt) -> BigRational {
    debug_assert!(d.is_positive());
    BigRational::new_raw(a.numer().clone(), a.denom() * d)
}

pub(crate) fn round_up(r: &BigRational, bits: u32) -> BigRational {
    -round_down(&-r, bits)
}

/// Floor of a rational as a big integer.
pub fn floor_rat(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil_rat(r: &BigRational) -> BigInt {
    -floor_rat(&-r)
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Distance from an exact rational to the nearest integer.
pub fn dist_rat(x: &BigRational) -> BigRational {
    let frac = x - BigRational::from_integer(floor_rat(x));
    let other = BigRational::one() - &frac;
    if cmp_rat(&other, &frac) == Ordering::Less {
        other
    } else {
        frac
    }
}

impl Enclosure {
    /// Builds `[lo, hi]` rounded outward to `bits` bits.
    pub fn new(lo: BigRational, hi: BigRational, bits: u32) -> Self {
        debug_assert!(cmp_rat(&lo, &hi) != Ordering::Greater, "inverted enclosure");
        Enclosure {
            lo: round_down(&lo, bits),
            hi: round_up(&hi, bits),
            bits,
        }
    }

    fn raw(lo: BigRational, hi: BigRational, bits: u32) -> Self {
        debug_assert!(cmp_rat(&lo, &hi) != Ordering::Greater, "inverted enclosure");
        Enclosure { lo, hi, bits }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Scalar::Exact(BigRational::from_integer(v.into()))
    }

    /// Exact `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(num.into(), den.into()))
    }

    pub fn exact(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    pub fn enclosure(lo: BigRational, hi: BigRational, bits: u32) -> Self {
        Scalar::Enclosure(Enclosure::new(lo, hi, bits))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Enclosure(_) => Mode::Enclosure,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Enclosure(_) => None,
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Enclosure(e) => Some(e.bits),
        }
    }

    pub fn lower(&self) -> &BigRational {
        match self {
            Scalar::Exact(r) => r,
            Scalar::Enclosure(e) => &e.lo,
        }
    }

    pub fn upper(&self) -> &BigRational {
        match self {
            Scalar::Exact(r) => r,
            Scalar::Enclosure(e) => &e.hi,
        }
    }

    pub fn midpoint(&self) -> BigRational {
        match self {
            Scalar::Exact(r) => r.clone(),
            Scalar::Enclosure(e) => (&e.lo + &e.hi) / BigInt::from(2),
        }
    }

    /// Half-width; zero in exact mode.
    pub fn radius(&self) -> BigRational {
        match self {
            Scalar::Exact(_) => BigRational::zero(),
            Scalar::Enclosure(e) => (&e.hi - &e.lo) / BigInt::from(2),
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        cmp_rat(self.lower(), x) != Ordering::Greater && cmp_rat(x, self.upper()) != Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    fn combine_bits(&self, other: &Scalar) -> Option<u32> {
        match (self.precision(), other.precision()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        }
    }

    fn from_bounds(lo: BigRational, hi: BigRational, bits: Option<u32>) -> Scalar {
        match bits {
            None => {
                debug_assert_eq!(lo, hi);
                Scalar::Exact(lo)
            }
            Some(b) => Scalar::enclosure(lo, hi, b),
        }
    }

    /// Re-rounds an enclosure (or converts an exact value) at `bits` bits.
    /// Exact values stay exact.
    pub fn with_precision(&self, bits: u32) -> Scalar {
        match self {
            Scalar::Exact(_) => self.clone(),
            Scalar::Enclosure(e) => Scalar::enclosure(e.lo.clone(), e.hi.clone(), bits),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Enclosure(e) => {
                if !e.lo.is_negative() {
                    self.clone()
                } else if !e.hi.is_positive() {
                    -self
                } else {
                    let m = max_rat(&-&e.lo, &e.hi).clone();
                    Scalar::Enclosure(Enclosure::raw(BigRational::zero(), m, e.bits))
                }
            }
        }
    }

    pub fn recip(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(r) => {
                if r.is_zero() {
                    Err(Error::Domain("division by zero".into()))
                } else {
                    Ok(Scalar::Exact(r.recip()))
                }
            }
            Scalar::Enclosure(e) => {
                if !e.lo.is_positive() && !e.hi.is_negative() {
                    return Err(Error::Undecided("divisor enclosure contains zero"));
                }
                Ok(Scalar::enclosure(e.hi.recip(), e.lo.recip(), e.bits))
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if b.is_zero() {
                    Err(Error::Domain("division by zero".into()))
                } else {
                    Ok(Scalar::Exact(a / b))
                }
            }
            _ => Ok(self * &other.recip()?),
        }
    }

    /// Rigorous three-way comparison; `None` when the enclosures overlap
    /// (and are not the same single point).
    pub fn cmp_proven(&self, other: &Scalar) -> Option<Ordering> {
        if cmp_rat(self.upper(), other.lower()) == Ordering::Less {
            Some(Ordering::Less)
        } else if cmp_rat(self.lower(), other.upper()) == Ordering::Greater {
            Some(Ordering::Greater)
        } else if self.lower() == self.upper()
            && other.lower() == other.upper()
            && self.lower() == other.lower()
        {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// `Some(true)` iff `self <= other` for every point of both enclosures,
    /// `Some(false)` iff `self > other` everywhere.
    pub fn le_proven(&self, other: &Scalar) -> Option<bool> {
        if cmp_rat(self.upper(), other.lower()) != Ordering::Greater {
            Some(true)
        } else if cmp_rat(self.lower(), other.upper()) == Ordering::Greater {
            Some(false)
        } else {
            None
        }
    }

    pub fn lt_proven(&self, other: &Scalar) -> Option<bool> {
        other.le_proven(self).map(|b| !b)
    }

    pub fn cmp_decided(&self, other: &Scalar, what: &'static str) -> Result<Ordering> {
        self.cmp_proven(other).ok_or(Error::Undecided(what))
    }

    pub fn le_decided(&self, other: &Scalar, what: &'static str) -> Result<bool> {
        self.le_proven(other).ok_or(Error::Undecided(what))
    }

    /// Sign of the value, if decided.
    pub fn signum_proven(&self) -> Option<Ordering> {
        self.cmp_proven(&Scalar::zero())
    }

    pub fn is_zero_exact(&self) -> bool {
        matches!(self, Scalar::Exact(r) if r.is_zero())
    }

    pub fn floor(&self) -> Result<BigInt> {
        let lo = floor_rat(self.lower());
        if lo == floor_rat(self.upper()) {
            Ok(lo)
        } else {
            Err(Error::Undecided("floor"))
        }
    }

    pub fn ceil(&self) -> Result<BigInt> {
        let lo = ceil_rat(self.lower());
        if lo == ceil_rat(self.upper()) {
            Ok(lo)
        } else {
            Err(Error::Undecided("ceil"))
        }
    }

    /// Distance to the nearest integer, `‖x‖ ∈ [0, 1/2]`.
    ///
    /// In enclosure mode the result encloses `‖y‖` for every `y` in the
    /// input; when the input straddles a half-integer the upper end is 1/2.
    pub fn dist_to_nearest_int(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(dist_rat(r)),
            Scalar::Enclosure(e) => {
                let h = half();
                let k = floor_rat(&(&e.lo + &h));
                let hk = floor_rat(&(&e.hi + &h));
                let (lo, hi) = if k == hk {
                    let kr = BigRational::from_integer(k);
                    let dlo = &e.lo - &kr;
                    let dhi = &e.hi - &kr;
                    if !dlo.is_negative() {
                        (dlo, dhi)
                    } else if !dhi.is_positive() {
                        (-dhi, -dlo)
                    } else {
                        (BigRational::zero(), max_rat(&-dlo, &dhi).clone())
                    }
                } else if hk == &k + 1 {
                    let kr = BigRational::from_integer(k);
                    let k1 = &kr + BigRational::one();
                    let left = if cmp_rat(&e.lo, &kr) != Ordering::Greater {
                        BigRational::zero()
                    } else {
                        &e.lo - &kr
                    };
                    let right = if cmp_rat(&e.hi, &k1) != Ordering::Less {
                        BigRational::zero()
                    } else {
                        &k1 - &e.hi
                    };
                    (min_rat(&left, &right).clone(), h)
                } else {
                    (BigRational::zero(), h)
                };
                Scalar::Enclosure(Enclosure::raw(lo, hi, e.bits))
            }
        }
    }

    /// Integer minimizing `|x - k|`; ties at half-integers go to the even
    /// neighbour.
    pub fn nearest_int(&self) -> Result<BigInt> {
        match self {
            Scalar::Exact(r) => Ok(round_half_even(r)),
            Scalar::Enclosure(e) => {
                let h = half();
                let shifted = &e.lo + &h;
                if shifted.is_integer() {
                    return Err(Error::AmbiguousEnclosure);
                }
                let k = floor_rat(&shifted);
                if cmp_rat(&e.hi, &(BigRational::from_integer(k.clone()) + &h)) != Ordering::Less {
                    return Err(Error::AmbiguousEnclosure);
                }
                Ok(k)
            }
        }
    }
}

fn round_half_even(r: &BigRational) -> BigInt {
    let f = floor_rat(r);
    let frac = r - BigRational::from_integer(f.clone());
    match cmp_rat(&frac, &half()) {
        Ordering::Less => f,
        Ordering::Greater => f + 1,
        Ordering::Equal => {
            if f.is_even() {
                f
            } else {
                f + 1
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Enclosure(e) => Scalar::Enclosure(Enclosure::raw(-&e.hi, -&e.lo, e.bits)),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, other: &Scalar) -> Scalar {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            return Scalar::Exact(a + b);
        }
        let bits = self.combine_bits(other);
        Scalar::from_bounds(
            raw_add(self.lower(), other.lower()),
            raw_add(self.upper(), other.upper()),
            bits,
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, other: &Scalar) -> Scalar {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            return Scalar::Exact(a - b);
        }
        let bits = self.combine_bits(other);
        Scalar::from_bounds(
            raw_sub(self.lower(), other.upper()),
            raw_sub(self.upper(), other.lower()),
            bits,
        )
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            return Scalar::Exact(a * b);
        }
        let bits = self.combine_bits(other);
        let (a0, a1) = (self.lower(), self.upper());
        let (b0, b1) = (other.lower(), other.upper());
        if !a0.is_negative() && !b0.is_negative() {
            return Scalar::from_bounds(raw_mul(a0, b0), raw_mul(a1, b1), bits);
        }
        let products = [raw_mul(a0, b0), raw_mul(a0, b1), raw_mul(a1, b0), raw_mul(a1, b1)];
        let lo = products.iter().fold(&products[0], |a, b| min_rat(a, b)).clone();
        let hi = products.iter().fold(&products[0], |a, b| max_rat(a, b)).clone();
        Scalar::from_bounds(lo, hi, bits)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, other: Scalar) -> Scalar {
                (&self).$m(&other)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, other: &Scalar) -> Scalar {
                (&self).$m(other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

/// Exact value as `p/q` (or `p`).
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with `digits` significant digits, truncated toward zero.
/// Exact for terminating decimals that fit.
pub fn decimal_string(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    // exponent such that 10^exp <= a < 10^(exp+1)
    let mut exp: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while a < pow10(exp) {
        exp -= 1;
    }
    while a >= pow10(exp + 1) {
        exp += 1;
    }
    let scale = digits as i64 - 1 - exp;
    let scaled = &a * pow10(scale);
    let int = floor_rat(&scaled);
    let exact = scaled.is_integer();
    let mut s = int.to_string();
    // insert decimal point: value = int * 10^-scale
    let body = if scale <= 0 {
        s.extend(std::iter::repeat('0').take((-scale) as usize));
        s
    } else if (scale as usize) < s.len() {
        let p = s.len() - scale as usize;
        format!("{}.{}", &s[..p], &s[p..])
    } else {
        let zeros = scale as usize - s.len();
        format!("0.{}{}", "0".repeat(zeros), s)
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    let body = if exact { body } else { format!("{body}…") };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", rational_string(r)),
            Scalar::Enclosure(_) => {
                write!(
                    f,
                    "{} ± {}",
                    decimal_string(&self.midpoint(), 17),
                    decimal_string(&self.radius(), 3)
                )
            }
        }
    }
}

/// Parses an exact number: integers, decimals (`-0.05`, `5e-4`, `1.2E3`) and
/// fractions (`1/20`).
pub fn parse_exact(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let err = || Error::Parse(format!("not an exact number: {s:?}"));
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..].parse().map_err(|_| err())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| err())?;
    let scale = exp - frac_part.len() as i64;
    if scale.abs() > 100_000 {
        return Err(Error::Parse(format!("exponent out of range in {s:?}")));
    }
    let ten = BigInt::from(10);
    let mut v = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        v = -v;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_exact(s).unwrap()
    }

    #[test]
    fn parse_decimals_exactly() {
        assert_eq!(q("0.05"), BigRational::new(1.into(), 20.into()));
        assert_eq!(q("-0.3"), BigRational::new((-3).into(), 10.into()));
        assert_eq!(q("5e-4"), BigRational::new(1.into(), 2000.into()));
        assert_eq!(q("1.5E2"), BigRational::from_integer(150.into()));
        assert_eq!(q("1/20"), q("0.05"));
        assert_eq!(q(".5"), q("1/2"));
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("abc").is_err());
        assert!(parse_exact("").is_err());
        assert!(parse_exact("1.2.3").is_err());
    }

    #[test]
    fn dist_examples() {
        assert_eq!(
            Scalar::ratio(7, 3).dist_to_nearest_int(),
            Scalar::ratio(1, 3)
        );
        assert_eq!(
            Scalar::exact(q("-0.3")).dist_to_nearest_int(),
            Scalar::exact(q("0.3"))
        );
        let e = Scalar::enclosure(q("1.2"), q("1.2"), 64);
        let d = e.dist_to_nearest_int();
        assert!(d.contains(&q("0.2")));
        assert!(d.radius() < q("1e-15"));
    }

    #[test]
    fn dist_straddling_half() {
        let e = Scalar::enclosure(q("2.4"), q("2.6"), 64);
        let d = e.dist_to_nearest_int();
        assert_eq!(d.upper(), &q("1/2"));
        assert!(d.lower() <= &q("0.4"));
        let wide = Scalar::enclosure(q("-3"), q("5"), 64);
        assert_eq!(wide.dist_to_nearest_int().lower(), &BigRational::zero());
    }

    #[test]
    fn nearest_int_examples() {
        assert_eq!(Scalar::exact(q("2.4")).nearest_int().unwrap(), 2.into());
        assert_eq!(Scalar::exact(q("-1.5")).nearest_int().unwrap(), (-2).into());
        assert_eq!(Scalar::exact(q("2.5")).nearest_int().unwrap(), 2.into());
        assert_eq!(Scalar::exact(q("3.5")).nearest_int().unwrap(), 4.into());
        let amb = Scalar::enclosure(q("1.4"), q("1.6"), 64);
        assert_eq!(amb.nearest_int(), Err(Error::AmbiguousEnclosure));
    }

    #[test]
    fn rounding_is_outward() {
        let third = q("1/3");
        let lo = round_down(&third, 20);
        let hi = round_up(&third, 20);
        assert!(lo < third && third < hi);
        assert!(&hi - &lo < q("1/1000000"));
        assert!(lo.denom().is_power_of_two_bigint());
    }

    trait Pow2Check {
        fn is_power_of_two_bigint(&self) -> bool;
    }

    impl Pow2Check for BigInt {
        fn is_power_of_two_bigint(&self) -> bool {
            self.is_positive() && (self & (self - BigInt::one())).is_zero()
        }
    }

    #[test]
    fn enclosure_arithmetic_contains_result() {
        let a = Scalar::enclosure(q("1/3"), q("1/3"), 40);
        let b = Scalar::exact(q("-2/7"));
        let s = &a * &b;
        assert!(s.contains(&q("-2/21")));
        let d = a.checked_div(&b).unwrap();
        assert!(d.contains(&q("-7/6")));
        let z = Scalar::enclosure(q("-1e-9"), q("1e-9"), 40);
        assert!(a.checked_div(&z).is_err());
    }

    #[test]
    fn comparisons() {
        let a = Scalar::enclosure(q("1"), q("2"), 32);
        let b = Scalar::enclosure(q("1.5"), q("3"), 32);
        assert_eq!(a.cmp_proven(&b), None);
        assert_eq!(a.cmp_proven(&Scalar::from_int(5)), Some(Ordering::Less));
        assert_eq!(Scalar::from_int(2).le_proven(&a), None);
        assert_eq!(Scalar::from_int(2).le_proven(&Scalar::from_int(2)), Some(true));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&q("0.05"), 10), "0.05");
        assert_eq!(decimal_string(&q("1/3"), 5), "0.33333…");
        assert_eq!(decimal_string(&q("-1250"), 3), "-1250");
        assert_eq!(decimal_string(&q("16000"), 17), "16000");
    }

    fn rat() -> impl proptest::strategy::Strategy<Value = BigRational> {
        use proptest::prelude::*;
        (any::<i64>(), 1i64..=i64::MAX, 0u32..80)
            .prop_map(|(n, d, k)| BigRational::new(BigInt::from(n) << k as usize, BigInt::from(d)))
    }

    proptest::proptest! {
        #[test]
        fn cmp_rat_agrees_with_ord(a in rat(), b in rat()) {
            proptest::prop_assert_eq!(cmp_rat(&a, &b), a.cmp(&b));
            proptest::prop_assert_eq!(cmp_rat(&a, &a), Ordering::Equal);
        }

        #[test]
        fn rounding_brackets_and_is_reduced(a in rat(), bits in 8u32..200) {
            let lo = round_down(&a, bits);
            let hi = round_up(&a, bits);
            proptest::prop_assert!(lo <= a && a <= hi);
            proptest::prop_assert_eq!(&lo, &BigRational::new(lo.numer().clone(), lo.denom().clone()));
            proptest::prop_assert!(lo.denom().magnitude().count_ones() == 1 || lo == a);
            let width = (&hi - &lo).abs();
            proptest::prop_assert!(width <= a.abs() * pow2(2 - bits as i64));
        }

        #[test]
        fn raw_ops_match_reduced(a in rat(), b in rat(), d in 1i64..1000) {
            proptest::prop_assert_eq!(round_down(&raw_add(&a, &b), 64), round_down(&(&a + &b), 64));
            proptest::prop_assert_eq!(round_down(&raw_sub(&a, &b), 64), round_down(&(&a - &b), 64));
            proptest::prop_assert_eq!(round_up(&raw_mul(&a, &b), 64), round_up(&(&a * &b), 64));
            let d = BigInt::from(d);
            proptest::prop_assert_eq!(round_down(&raw_div_int(&a, &d), 64), round_down(&(&a / &d), 64));
        }
    }
}
