//! Exact rational and complex-rational scalars.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Exact complex-rational scalar.
pub type CQ = Complex<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn cq(re: Q, im: Q) -> CQ {
    Complex::new(re, im)
}

pub fn cq_real(re: Q) -> CQ {
    Complex::new(re, Q::zero())
}

pub fn cq_int(n: i64) -> CQ {
    cq_real(q(n))
}

/// The imaginary unit.
pub fn cq_i() -> CQ {
    Complex::new(Q::zero(), Q::one())
}

pub fn cq_is_zero(z: &CQ) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

pub fn q_to_f64(x: &Q) -> f64 {
    // Numerator and denominator are small in practice; fall back to string parsing for huge values.
    let n = x.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = x.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    n / d
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q` or `-p/q` (no whitespace, nonzero denominator).
pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let valid_int = |t: &str, signed: bool| {
        let digits = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        !digits.is_empty() && digits.len() <= 4096 && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(d) if valid_int(d, false) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(n, d))
}

/// Display wrapper for complex rationals, e.g. `1/2 - 3/4i`.
pub struct DisplayCQ<'a>(pub &'a CQ);

impl fmt::Display for DisplayCQ<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        match (z.re.is_zero(), z.im.is_zero()) {
            (_, true) => write!(f, "{}", format_q(&z.re)),
            (true, false) => write!(f, "{}i", format_q(&z.im)),
            (false, false) => {
                let sign = if z.im.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}i", format_q(&z.re), sign, format_q(&z.im.abs()))
            }
        }
    }
}
