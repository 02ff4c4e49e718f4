//! Exact rational numbers and their text form.
//!
//! Rationals are `num_rational::BigRational`: normalized sign-on-numerator
//! fractions with positive denominator and gcd 1, zero represented as 0/1.
//! The canonical text form is `num/den` (always with the denominator); parsers
//! additionally accept plain integers and finite decimal literals, both of
//! which are exact.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

use super::ScalarParseError;

/// Number of bits in the magnitude (0 for zero).
pub fn bit_len_int(n: &BigInt) -> u64 {
    n.magnitude().bits()
}

/// Bit size charged to a rational in storage accounting: numerator magnitude
/// bits plus denominator bits plus one sign bit.
pub fn rat_bits(r: &Rat) -> u64 {
    bit_len_int(r.numer()) + bit_len_int(r.denom()) + 1
}

pub fn rat_from_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_pow2(exp: i64) -> Rat {
    if exp >= 0 {
        Rat::from_integer(BigInt::one() << exp as u64)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-exp) as u64)
    }
}

/// Exact rational value of an `f64` (finite inputs only).
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(Rat::zero());
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exp_raw = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (man, exp) = if exp_raw == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), exp_raw - 1075)
    };
    let m = BigInt::from(sign) * BigInt::from(man);
    Some(Rat::from_integer(m) * rat_pow2(exp))
}

/// Round-to-nearest `f64` of a rational, for diagnostics and filters.
pub fn rat_to_f64(r: &Rat) -> f64 {
    let n = big_to_f64(r.numer());
    let d = big_to_f64(r.denom());
    if n.is_finite() && d.is_finite() && d != 0.0 {
        n / d
    } else {
        // fall back to scaled division for huge components
        let shift = bit_len_int(r.numer()).max(bit_len_int(r.denom())) as i64 - 900;
        if shift <= 0 {
            return n / d;
        }
        let sn = big_to_f64(&(r.numer() >> shift as u64));
        let sd = big_to_f64(&(r.denom() >> shift as u64));
        sn / sd
    }
}

fn big_to_f64(n: &BigInt) -> f64 {
    // BigInt::to_f64 exists via ToPrimitive; use it.
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::INFINITY)
}

/// Canonical `num/den` form, e.g. `-3/2`, `0/1`.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `num/den`, a plain integer, or a finite decimal literal, exactly.
pub fn parse_rat(s: &str) -> Result<Rat, ScalarParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ScalarParseError::new(s, "empty rational"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| ScalarParseError::new(s, "bad numerator"))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| ScalarParseError::new(s, "bad denominator"))?;
        if den.is_zero() {
            return Err(ScalarParseError::new(s, "zero denominator"));
        }
        return Ok(Rat::new(num, den));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1i32, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(ScalarParseError::new(s, "bad decimal literal"));
        }
        let digits = format!("{}{}", int_digits, frac_part);
        let num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits
                .parse()
                .map_err(|_| ScalarParseError::new(s, "bad decimal digits"))?
        };
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut r = Rat::new(num, den);
        if sign < 0 {
            r = -r;
        }
        return Ok(r);
    }
    let num: BigInt = t
        .parse()
        .map_err(|_| ScalarParseError::new(s, "bad integer"))?;
    Ok(Rat::from_integer(num))
}

/// `Some(sqrt)` when `n` is a perfect square.
pub fn perfect_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// `Some(sqrt)` when a non-negative rational is a square of a rational.
pub fn perfect_sqrt_rat(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = perfect_sqrt(r.numer().magnitude())?;
    let d = perfect_sqrt(r.denom().magnitude())?;
    Some(Rat::new(
        BigInt::from_biguint(Sign::Plus, n),
        BigInt::from_biguint(Sign::Plus, d),
    ))
}

/// Floor of a rational as a big integer.
pub fn rat_floor(r: &Rat) -> BigInt {
    r.numer().div_floor(r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["0/1", "-3/2", "355/113", "17/1"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(format_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert_eq!(format_rat(&parse_rat("3/-2").unwrap()), "-3/2");
        assert_eq!(format_rat(&parse_rat("7").unwrap()), "7/1");
    }

    #[test]
    fn parse_decimal_exact() {
        assert_eq!(format_rat(&parse_rat("3.25").unwrap()), "13/4");
        assert_eq!(format_rat(&parse_rat("-0.5").unwrap()), "-1/2");
        assert_eq!(format_rat(&parse_rat("0.1").unwrap()), "1/10");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "a/b", "1.2.3", "--3"] {
            assert!(parse_rat(s).is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn f64_conversion_is_exact() {
        for x in [0.5, -3.25, 1.0 / 1024.0, 12345678.0] {
            let r = rat_from_f64(x).unwrap();
            assert_eq!(rat_to_f64(&r), x);
        }
    }

    #[test]
    fn perfect_squares() {
        use num_traits::FromPrimitive;
        assert_eq!(
            perfect_sqrt(&BigUint::from_u64(144).unwrap()),
            Some(BigUint::from_u64(12).unwrap())
        );
        assert_eq!(perfect_sqrt(&BigUint::from_u64(145).unwrap()), None);
        let r = parse_rat("49/36").unwrap();
        assert_eq!(perfect_sqrt_rat(&r), Some(parse_rat("7/6").unwrap()));
    }
}
