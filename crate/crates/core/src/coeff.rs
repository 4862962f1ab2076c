//! Exact Gaussian-rational coefficients.
//!
//! Text form: `<rat>`, `<rat>+<rat>i` or `<rat>-<rat>i`, where `<rat>` is an
//! optionally signed integer `p` or fraction `p/q` in lowest terms.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coefficient(Complex<BigRational>);

impl Coefficient {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Coefficient(Complex::new(re, im))
    }

    pub fn zero() -> Self {
        Coefficient(Complex::new(BigRational::zero(), BigRational::zero()))
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    /// `num/den` as a real coefficient. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Self::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn re(&self) -> &BigRational {
        &self.0.re
    }

    pub fn im(&self) -> &BigRational {
        &self.0.im
    }

    pub fn is_zero(&self) -> bool {
        self.0.re.is_zero() && self.0.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.re.is_one() && self.0.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.0.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Coefficient(self.0.conj())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Coefficient(self.0.inv()))
        }
    }

    /// Integer power; negative exponents invert. Panics for `0^negative`.
    pub fn powi(&self, exp: i64) -> Self {
        let base = if exp < 0 {
            self.inv().expect("zero raised to a negative power")
        } else {
            self.clone()
        };
        let mut out = Coefficient::one();
        for _ in 0..exp.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.0.re), rat_to_f64(&self.0.im))
    }

    pub(crate) fn as_complex(&self) -> &Complex<BigRational> {
        &self.0
    }

    /// Least common multiple of the denominators of both parts.
    pub(crate) fn denominator_lcm(&self) -> BigInt {
        self.0.re.denom().lcm(self.0.im.denom())
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient::zero()
    }
}

impl From<i64> for Coefficient {
    fn from(v: i64) -> Self {
        Coefficient::from_integer(v)
    }
}

impl From<BigRational> for Coefficient {
    fn from(v: BigRational) -> Self {
        Coefficient::new(v, BigRational::zero())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Coefficient> for &Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: &Coefficient) -> Coefficient {
                Coefficient((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: Coefficient) -> Coefficient {
                Coefficient(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: &Coefficient) -> Coefficient {
                Coefficient((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient(-self.0)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient(-self.0.clone())
    }
}

impl std::iter::Sum for Coefficient {
    fn sum<I: Iterator<Item = Coefficient>>(iter: I) -> Self {
        iter.fold(Coefficient::zero(), |acc, c| acc + c)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (&self.0.re, &self.0.im);
        if im.is_zero() {
            return write!(f, "{re}");
        }
        let sign = if im.is_negative() { '-' } else { '+' };
        write!(f, "{re}{sign}{}i", im.abs())
    }
}

/// Parse failure for a coefficient token; `offset` is a byte offset into the token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for CoeffParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at offset {})", self.message, self.offset)
    }
}

impl std::error::Error for CoeffParseError {}

fn perr(offset: usize, message: impl Into<String>) -> CoeffParseError {
    CoeffParseError {
        offset,
        message: message.into(),
    }
}

fn parse_digits(s: &str, offset: usize) -> Result<BigInt, CoeffParseError> {
    if s.is_empty() {
        return Err(perr(offset, "expected digits"));
    }
    if let Some(pos) = s.find(|c: char| !c.is_ascii_digit()) {
        return Err(perr(
            offset + pos,
            format!("unexpected character in number '{s}'"),
        ));
    }
    Ok(s.parse::<BigInt>().expect("ascii digits"))
}

/// `[+-]? p ( / q )?`, `q > 0`, `gcd(p, q) = 1`.
fn parse_rational(
    s: &str,
    offset: usize,
    allow_sign: bool,
) -> Result<BigRational, CoeffParseError> {
    let (negative, body, body_off) = match s.as_bytes().first() {
        Some(b'-') if allow_sign => (true, &s[1..], offset + 1),
        Some(b'+') if allow_sign => (false, &s[1..], offset + 1),
        _ => (false, s, offset),
    };
    let (num, den) = match body.find('/') {
        Some(slash) => {
            let num = parse_digits(&body[..slash], body_off)?;
            let den = parse_digits(&body[slash + 1..], body_off + slash + 1)?;
            if den.is_zero() {
                return Err(perr(body_off + slash + 1, "zero denominator"));
            }
            if !num.gcd(&den).is_one() {
                return Err(perr(
                    body_off,
                    format!("fraction '{body}' is not in lowest terms"),
                ));
            }
            (num, den)
        }
        None => (parse_digits(body, body_off)?, BigInt::one()),
    };
    let num = if negative { -num } else { num };
    Ok(BigRational::new_raw(num, den))
}

impl FromStr for Coefficient {
    type Err = CoeffParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(perr(0, "empty coefficient"));
        }
        if let Some(body) = s.strip_suffix('i') {
            // split at the last sign that is not the leading one
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(i, _)| i)
                .last()
                .ok_or_else(|| perr(0, "imaginary part needs the form <rat>+<rat>i"))?;
            let re = parse_rational(&body[..split], 0, true)?;
            let im = parse_rational(&body[split + 1..], split + 1, false)?;
            let im = if body.as_bytes()[split] == b'-' {
                -im
            } else {
                im
            };
            Ok(Coefficient::new(re, im))
        } else {
            Ok(Coefficient::from(parse_rational(s, 0, true)?))
        }
    }
}
