//! Input numbers: exact decimals/fractions and named irrational presets that
//! can be re-evaluated at any precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{
    cmp_rat, parse_exact, pow2, rational_string, raw_add, raw_div_int, raw_mul, raw_sub, round_down, round_up, Scalar,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresetKind {
    SqrtInt(u64),
    LogInt(u64),
    Pi,
    E,
    Phi,
    DecimalLiteral(String),
}

/// A named constant together with the precision to evaluate it at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrrationalPreset {
    kind: PresetKind,
    precision_bits: u32,
}

impl IrrationalPreset {
    pub fn new(kind: PresetKind, precision_bits: u32) -> Result<Self> {
        match &kind {
            PresetKind::SqrtInt(k) => {
                if *k < 2 || is_square(*k) {
                    return Err(Error::Domain(format!(
                        "sqrt({k}) needs k >= 2 and k not a perfect square"
                    )));
                }
            }
            PresetKind::LogInt(k) => {
                if *k < 2 {
                    return Err(Error::Domain(format!("log({k}) needs k >= 2")));
                }
            }
            PresetKind::DecimalLiteral(s) => {
                parse_exact(s)?;
            }
            _ => {}
        }
        if precision_bits == 0 {
            return Err(Error::Domain("precision must be positive".into()));
        }
        Ok(IrrationalPreset {
            kind,
            precision_bits,
        })
    }

    pub fn kind(&self) -> &PresetKind {
        &self.kind
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn evaluate(&self) -> Scalar {
        eval_kind(&self.kind, self.precision_bits)
    }
}

fn is_square(k: u64) -> bool {
    let r = k.sqrt();
    r * r == k
}

fn eval_kind(kind: &PresetKind, bits: u32) -> Scalar {
    let w = bits + 24;
    let (lo, hi) = match kind {
        PresetKind::DecimalLiteral(s) => {
            return Scalar::Exact(parse_exact(s).expect("validated literal"));
        }
        PresetKind::SqrtInt(k) => sqrt_int(&BigInt::from(*k), w),
        PresetKind::LogInt(k) => ln_rational(&BigRational::from_integer((*k).into()), w),
        PresetKind::Pi => pi(w),
        PresetKind::E => exp_rational(&BigRational::one(), w),
        PresetKind::Phi => {
            let (lo, hi) = sqrt_int(&BigInt::from(5), w);
            let one = BigRational::one();
            let two = BigInt::from(2);
            ((lo + &one) / &two, (hi + &one) / &two)
        }
    };
    Scalar::enclosure(lo, hi, bits + 1)
}

type Bounds = (BigRational, BigRational);

/// `[floor(sqrt(k) 2^w), +1] / 2^w`.
fn sqrt_int(k: &BigInt, w: u32) -> Bounds {
    let scaled: BigInt = k << (2 * w as usize);
    let s = scaled.sqrt();
    let den = pow2(-(w as i64));
    let lo = BigRational::from_integer(s.clone()) * &den;
    if &s * &s == scaled {
        return (lo.clone(), lo);
    }
    (lo, BigRational::from_integer(s + 1) * den)
}

/// `atanh(y) = sum y^(2i+1)/(2i+1)` for rational `0 <= y <= 1/3`.
fn atanh_small(y: &BigRational, w: u32) -> Bounds {
    if y.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let wb = w + 8;
    let y2 = y * y;
    let eps = pow2(-(w as i64) - 4);
    let (mut plo, mut phi) = (round_down(y, wb), round_up(y, wb));
    let (mut slo, mut shi) = (BigRational::zero(), BigRational::zero());
    let mut i: u64 = 0;
    loop {
        let d = BigInt::from(2 * i + 1);
        slo = round_down(&raw_add(&slo, &raw_div_int(&plo, &d)), wb);
        shi = round_up(&raw_add(&shi, &raw_div_int(&phi, &d)), wb);
        plo = round_down(&raw_mul(&plo, &y2), wb);
        phi = round_up(&raw_mul(&phi, &y2), wb);
        i += 1;
        if cmp_rat(&phi, &eps) == Ordering::Less {
            break;
        }
    }
    // remaining terms sum to at most p/(1 - y^2) <= 9p/8
    let tail = &phi * BigRational::new(9.into(), 8.into());
    (slo, round_up(&(shi + tail), wb))
}

fn ln2(w: u32) -> Bounds {
    let (lo, hi) = atanh_small(&BigRational::new(1.into(), 3.into()), w + 2);
    (lo * BigInt::from(2), hi * BigInt::from(2))
}

/// Natural logarithm of a positive rational.
pub(crate) fn ln_rational(r: &BigRational, w: u32) -> Bounds {
    assert!(r.is_positive(), "ln of non-positive value");
    if r < &BigRational::one() {
        let (lo, hi) = ln_rational(&r.recip(), w);
        return (-hi, -lo);
    }
    let mut e = r.numer().bits() as i64 - r.denom().bits() as i64;
    let two = BigRational::from_integer(2.into());
    let mut x = r * pow2(-e);
    while x >= two {
        e += 1;
        x = r * pow2(-e);
    }
    while x < BigRational::one() {
        e -= 1;
        x = r * pow2(-e);
    }
    let one = BigRational::one();
    let y = (&x - &one) / (&x + &one);
    let extra = 64 - (e.unsigned_abs().leading_zeros());
    let (alo, ahi) = atanh_small(&y, w + 2);
    let (l2lo, l2hi) = ln2(w + extra + 2);
    let eb = BigRational::from_integer(e.into());
    let (elo, ehi) = if e >= 0 {
        (&eb * l2lo, &eb * l2hi)
    } else {
        (&eb * l2hi, &eb * l2lo)
    };
    (elo + alo * BigInt::from(2), ehi + ahi * BigInt::from(2))
}

/// `exp(x)` for rational `x` by halving, Taylor series and repeated squaring.
pub(crate) fn exp_rational(x: &BigRational, w: u32) -> Bounds {
    if x.is_negative() {
        let (lo, hi) = exp_rational(&-x, w);
        return (hi.recip(), lo.recip());
    }
    if x.is_zero() {
        return (BigRational::one(), BigRational::one());
    }
    let mag = (x.numer().bits() as i64 - x.denom().bits() as i64 + 2).max(0) as u32;
    let wb = w + mag + 16;
    let r = x * pow2(-(mag as i64));
    let eps = pow2(-(wb as i64));
    let (mut tlo, mut thi) = (BigRational::one(), BigRational::one());
    let (mut slo, mut shi) = (BigRational::zero(), BigRational::zero());
    let mut i: u64 = 1;
    loop {
        slo = round_down(&raw_add(&slo, &tlo), wb);
        shi = round_up(&raw_add(&shi, &thi), wb);
        let f = raw_div_int(&r, &BigInt::from(i));
        tlo = round_down(&raw_mul(&tlo, &f), wb);
        thi = round_up(&raw_mul(&thi, &f), wb);
        i += 1;
        if cmp_rat(&thi, &eps) == Ordering::Less {
            break;
        }
    }
    // r <= 1/2: the tail is dominated by twice the next term
    shi = &shi + &thi * BigInt::from(2);
    for _ in 0..mag {
        slo = round_down(&raw_mul(&slo, &slo), wb);
        shi = round_up(&raw_mul(&shi, &shi), wb);
    }
    (slo, shi)
}

/// `atan(1/n)` by its alternating series.
fn atan_inv(n: u64, w: u32) -> Bounds {
    let wb = w + 8;
    let eps = pow2(-(wb as i64));
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut pow = n.clone();
    let (mut slo, mut shi) = (BigRational::zero(), BigRational::zero());
    let mut i: u64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), BigInt::from(2 * i + 1) * &pow);
        if cmp_rat(&term, &eps) == Ordering::Less {
            // alternating and decreasing: the limit is within one term
            return (round_down(&raw_sub(&slo, &term), wb), round_up(&raw_add(&shi, &term), wb));
        }
        if i % 2 == 0 {
            slo = round_down(&raw_add(&slo, &term), wb);
            shi = round_up(&raw_add(&shi, &term), wb);
        } else {
            slo = round_down(&raw_sub(&slo, &term), wb);
            shi = round_up(&raw_sub(&shi, &term), wb);
        }
        pow *= &n2;
        i += 1;
    }
}

fn pi(w: u32) -> Bounds {
    let (alo, ahi) = atan_inv(5, w + 6);
    let (blo, bhi) = atan_inv(239, w + 6);
    (
        alo * BigInt::from(16) - bhi * BigInt::from(4),
        ahi * BigInt::from(16) - blo * BigInt::from(4),
    )
}

/// Enclosure of `ln(x)` for a positive scalar, at `bits` bits.
pub fn ln_scalar(x: &Scalar, bits: u32) -> Result<Scalar> {
    if !x.lower().is_positive() {
        return Err(Error::Domain("logarithm of a non-positive value".into()));
    }
    let w = bits + 16;
    let (lo, _) = ln_rational(x.lower(), w);
    let (_, hi) = ln_rational(x.upper(), w);
    Ok(Scalar::enclosure(lo, hi, bits))
}

/// Enclosure of `exp(x)` at `bits` bits.
pub fn exp_scalar(x: &Scalar, bits: u32) -> Scalar {
    let w = bits + 16;
    let (lo, _) = exp_rational(x.lower(), w);
    let (_, hi) = exp_rational(x.upper(), w);
    Scalar::enclosure(lo, hi, bits)
}

/// A parsed input number. Exact values never lose precision; irrational
/// presets are evaluated on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Real {
    Exact(BigRational),
    Irrational { kind: PresetKind, negated: bool },
}

impl Real {
    pub fn parse(token: &str) -> Result<Real> {
        let t = token.trim();
        let (negated, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t),
        };
        let arg = |name: &str| -> Option<Result<u64>> {
            let inner = body.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
            Some(
                inner
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad argument in {token:?}"))),
            )
        };
        let kind = if let Some(k) = arg("sqrt") {
            PresetKind::SqrtInt(k?)
        } else if let Some(k) = arg("log") {
            PresetKind::LogInt(k?)
        } else {
            match body {
                "pi" => PresetKind::Pi,
                "e" => PresetKind::E,
                "phi" => PresetKind::Phi,
                _ => return parse_exact(t).map(Real::Exact),
            }
        };
        // validates the preset's argument
        IrrationalPreset::new(kind.clone(), 1)?;
        Ok(Real::Irrational { kind, negated })
    }

    pub fn exact(r: BigRational) -> Real {
        Real::Exact(r)
    }

    pub fn ratio(num: i64, den: i64) -> Real {
        Real::Exact(BigRational::new(num.into(), den.into()))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Irrational { .. } => None,
        }
    }

    pub fn eval(&self, bits: u32) -> Scalar {
        match self {
            Real::Exact(r) => Scalar::Exact(r.clone()),
            Real::Irrational { kind, negated } => {
                let v = eval_kind(kind, bits);
                if *negated {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn to_token(&self) -> String {
        match self {
            Real::Exact(r) => exact_token(r),
            Real::Irrational { kind, negated } => {
                let body = match kind {
                    PresetKind::SqrtInt(k) => format!("sqrt({k})"),
                    PresetKind::LogInt(k) => format!("log({k})"),
                    PresetKind::Pi => "pi".into(),
                    PresetKind::E => "e".into(),
                    PresetKind::Phi => "phi".into(),
                    PresetKind::DecimalLiteral(s) => s.clone(),
                };
                if *negated {
                    format!("-{body}")
                } else {
                    body
                }
            }
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_token())
    }
}

impl From<BigRational> for Real {
    fn from(r: BigRational) -> Self {
        Real::Exact(r)
    }
}

/// Terminating decimals print as decimals, everything else as `p/q`.
pub fn exact_token(r: &BigRational) -> String {
    let mut d = r.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while d.is_multiple_of(&two) {
        d /= &two;
        twos += 1;
    }
    while d.is_multiple_of(&five) {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() || r.is_integer() {
        return rational_string(r);
    }
    let places = twos.max(fives);
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = format!("{:0>width$}", digits, width = places + 1);
    let (ip, fp) = digits.split_at(digits.len() - places);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_exact(s).unwrap()
    }

    fn approx(s: &Scalar) -> f64 {
        s.to_f64()
    }

    #[test]
    fn presets_enclose_known_values() {
        let bits = 128;
        let cases = [
            ("sqrt(2)", "1.41421356237309504880168872420969807856967187537694"),
            ("sqrt(3)", "1.73205080756887729352744634150587236694280525381038"),
            ("log(3)", "1.09861228866810969139524523692252570464749055782275"),
            ("log(2)", "0.69314718055994530941723212145817656807550013436026"),
            ("log(1000)", "6.90775527898213705205397436405309262280330446588631"),
            ("pi", "3.14159265358979323846264338327950288419716939937511"),
            ("e", "2.71828182845904523536028747135266249775724709369996"),
            ("phi", "1.61803398874989484820458683436563811772030917980576"),
        ];
        for (tok, val) in cases {
            let s = Real::parse(tok).unwrap().eval(bits);
            // reference values are truncated to 50 decimals
            let v = q(val);
            let window = Scalar::enclosure(v.clone(), v + q("1e-50"), 200);
            assert!(
                s.lower() <= window.upper() && window.lower() <= s.upper(),
                "{tok}: {s}"
            );
            // radius <= 2^(1-p) |mid|
            assert!(s.radius() <= s.midpoint().abs() * pow2(1 - bits as i64), "{tok}");
        }
    }

    #[test]
    fn negated_presets() {
        let s = Real::parse("-sqrt(2)").unwrap().eval(64);
        assert!((approx(&s) + std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(Real::parse("-sqrt(2)").unwrap().to_token(), "-sqrt(2)");
    }

    #[test]
    fn invalid_presets_rejected() {
        assert!(Real::parse("sqrt(4)").is_err());
        assert!(Real::parse("sqrt(1)").is_err());
        assert!(Real::parse("log(1)").is_err());
        assert!(Real::parse("sqrt(x)").is_err());
        assert!(Real::parse("tau").is_err());
    }

    #[test]
    fn exp_and_ln_enclosures() {
        let e8 = exp_scalar(&Scalar::from_int(-8), 96);
        let v = q("0.000335462627902511838821389125780861019310900");
        assert!((e8.midpoint() - &v).abs() < q("1e-31"));
        assert!(e8.contains(&v));
        let ln20 = ln_scalar(&Scalar::from_int(20), 96).unwrap();
        assert!((approx(&ln20) - 20f64.ln()).abs() < 1e-15);
        let small = ln_scalar(&Scalar::ratio(1, 4000), 96).unwrap();
        assert!((approx(&small) + 4000f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn big_exponent_exp() {
        // 4 e^{-576}
        let v = exp_scalar(&Scalar::from_int(-576), 64) * Scalar::from_int(4);
        let m = v.midpoint();
        let expect = q("2.8082671194018938855364816812629465007262010907574e-250");
        let rel = ((&m - &expect) / &expect).abs();
        assert!(rel < q("1e-15"));
    }

    #[test]
    fn tokens_round_trip() {
        for t in ["0.05", "-1.25", "7", "1/3", "-2/7", "sqrt(5)", "log(7)", "pi", "e", "phi"] {
            let r = Real::parse(t).unwrap();
            assert_eq!(Real::parse(&r.to_token()).unwrap(), r, "{t}");
        }
        assert_eq!(Real::parse("5e-4").unwrap().to_token(), "0.0005");
        assert_eq!(Real::parse("0.50").unwrap().to_token(), "0.5");
    }

    #[test]
    fn preset_struct_validates() {
        assert!(IrrationalPreset::new(PresetKind::SqrtInt(9), 64).is_err());
        let p = IrrationalPreset::new(PresetKind::DecimalLiteral("0.05".into()), 64).unwrap();
        assert_eq!(p.evaluate(), Scalar::ratio(1, 20));
    }
}
