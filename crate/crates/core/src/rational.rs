//! Arbitrary precision rationals and a few helpers shared by the other
//! modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Representative of `x` modulo `m` in `[0, m)`. `m` must be positive.
pub fn rem_euclid(x: &Rational, m: &Rational) -> Rational {
    debug_assert!(m.is_positive());
    let q = (x / m).floor();
    x - q * m
}

/// Parses `"p"`, `"-p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("bad numerator {num:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator {den:?}"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(num, den))
}

/// Always `p/q`, even for integers, so that file formats stay uniform.
pub fn format_fraction(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Rational as an (unreduced on output) multiple of pi, given a value in
/// turns. `1/8` turns is `pi/4`.
pub fn format_pi(turns: &Rational) -> String {
    let r: Rational = turns * int(2);
    if r.is_zero() {
        return "0".into();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let num = a.numer();
    let den = a.denom();
    let head = if num.is_one() {
        "π".to_string()
    } else {
        format!("{num}π")
    };
    if den.is_one() {
        format!("{sign}{head}")
    } else {
        format!("{sign}{head}/{den}")
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}
