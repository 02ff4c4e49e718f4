//! Exact arithmetic over rationals extended by at most one square root.
//!
//! A pipeline that starts from rational data stays rational until it takes the
//! square root of a non-square, which adjoins `sqrt(d)` for a fixed non-square
//! integer `d > 1`. From then on every value is `a + b*sqrt(d)` with rational
//! `a`, `b`, and all field operations, sign tests, floors, and comparisons are
//! exact. A second, independent radical is not representable and surfaces as
//! [`SqrtError::Unrepresentable`]; square roots that happen to be perfect
//! squares in the current field stay in the field.
//!
//! Values with `b = 0` are always collapsed to the plain rational variant, so
//! variant inspection doubles as an exact "is rational" test.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::rat::{
    bit_len_int, format_rat, parse_rat, perfect_sqrt_rat, rat_floor, rat_to_f64, Rat,
};
use super::{ScalarParseError, SqrtError};

/// `a + b*sqrt(d)` with `b != 0` and `d` a fixed positive non-square integer.
#[derive(Clone, Debug)]
pub struct QuadVal {
    pub a: Rat,
    pub b: Rat,
    pub d: Arc<BigInt>,
}

#[derive(Clone, Debug)]
pub enum ExactScalar {
    Rat(Rat),
    Quad(QuadVal),
}

impl ExactScalar {
    pub fn from_rat(r: Rat) -> Self {
        ExactScalar::Rat(r)
    }

    pub fn zero() -> Self {
        ExactScalar::Rat(Rat::zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, ExactScalar::Rat(r) if r.is_zero())
    }

    /// The exact rational value, when the value lies in the rational subfield.
    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            ExactScalar::Rat(r) => Some(r),
            ExactScalar::Quad(_) => None,
        }
    }

    fn quad(a: Rat, b: Rat, d: &Arc<BigInt>) -> Self {
        if b.is_zero() {
            ExactScalar::Rat(a)
        } else {
            ExactScalar::Quad(QuadVal {
                a,
                b,
                d: Arc::clone(d),
            })
        }
    }

    /// The extension generator currently in play, if any.
    pub fn field_d(&self) -> Option<&Arc<BigInt>> {
        match self {
            ExactScalar::Rat(_) => None,
            ExactScalar::Quad(q) => Some(&q.d),
        }
    }

    fn same_field<'a>(x: &'a ExactScalar, y: &'a ExactScalar) -> Option<&'a Arc<BigInt>> {
        match (x.field_d(), y.field_d()) {
            (None, None) => None,
            (Some(d), None) => Some(d),
            (None, Some(d)) => Some(d),
            (Some(d1), Some(d2)) => {
                assert!(
                    Arc::ptr_eq(d1, d2) || **d1 == **d2,
                    "arithmetic across distinct extension fields"
                );
                Some(d1)
            }
        }
    }

    fn parts(&self) -> (Rat, Rat) {
        match self {
            ExactScalar::Rat(r) => (r.clone(), Rat::zero()),
            ExactScalar::Quad(q) => (q.a.clone(), q.b.clone()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match Self::same_field(self, other) {
            None => {
                let (a1, _) = self.parts();
                let (a2, _) = other.parts();
                ExactScalar::Rat(a1 + a2)
            }
            Some(d) => {
                let d = Arc::clone(d);
                let (a1, b1) = self.parts();
                let (a2, b2) = other.parts();
                Self::quad(a1 + a2, b1 + b2, &d)
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactScalar::Rat(r) => ExactScalar::Rat(-r.clone()),
            ExactScalar::Quad(q) => ExactScalar::Quad(QuadVal {
                a: -q.a.clone(),
                b: -q.b.clone(),
                d: Arc::clone(&q.d),
            }),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match Self::same_field(self, other) {
            None => {
                let (a1, _) = self.parts();
                let (a2, _) = other.parts();
                ExactScalar::Rat(a1 * a2)
            }
            Some(d) => {
                let d = Arc::clone(d);
                let (a1, b1) = self.parts();
                let (a2, b2) = other.parts();
                let dr = Rat::from_integer((*d).clone());
                let a = &a1 * &a2 + &b1 * &b2 * &dr;
                let b = &a1 * &b2 + &b1 * &a2;
                Self::quad(a, b, &d)
            }
        }
    }

    /// Exact division. Panics on a zero divisor.
    pub fn div(&self, other: &Self) -> Self {
        match other {
            ExactScalar::Rat(r) => {
                assert!(!r.is_zero(), "division by zero");
                let inv = ExactScalar::Rat(r.recip());
                self.mul(&inv)
            }
            ExactScalar::Quad(q) => {
                // 1/(a+b√d) = (a−b√d)/(a²−b²d); the norm is nonzero because d
                // is a non-square.
                let dr = Rat::from_integer((*q.d).clone());
                let norm = &q.a * &q.a - &q.b * &q.b * &dr;
                assert!(!norm.is_zero(), "zero norm in quadratic division");
                let conj = ExactScalar::Quad(QuadVal {
                    a: q.a.clone() / norm.clone(),
                    b: -q.b.clone() / norm,
                    d: Arc::clone(&q.d),
                });
                self.mul(&conj)
            }
        }
    }

    pub fn signum(&self) -> i8 {
        match self {
            ExactScalar::Rat(r) => {
                if r.is_zero() {
                    0
                } else if r.is_negative() {
                    -1
                } else {
                    1
                }
            }
            ExactScalar::Quad(q) => {
                // sign(a + b√d) with b != 0
                let sa = if q.a.is_zero() {
                    0i8
                } else if q.a.is_negative() {
                    -1
                } else {
                    1
                };
                let sb = if q.b.is_negative() { -1i8 } else { 1 };
                if sa == 0 {
                    return sb;
                }
                if sa == sb {
                    return sa;
                }
                // Opposite signs: compare a² with b²·d.
                let dr = Rat::from_integer((*q.d).clone());
                let lhs = &q.a * &q.a;
                let rhs = &q.b * &q.b * dr;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    // equality would make √d rational
                    Ordering::Equal => unreachable!("non-square d with zero value"),
                }
            }
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.sub(other).signum().cmp(&0)
    }

    pub fn cmp_rat_value(&self, r: &Rat) -> Ordering {
        self.sub(&ExactScalar::Rat(r.clone())).signum().cmp(&0)
    }

    /// Exact square root, staying inside the current field.
    pub fn sqrt(&self) -> Result<Self, SqrtError> {
        match self.signum() {
            -1 => return Err(SqrtError::Negative),
            0 => return Ok(ExactScalar::zero()),
            _ => {}
        }
        match self {
            ExactScalar::Rat(r) => {
                if let Some(root) = perfect_sqrt_rat(r) {
                    return Ok(ExactScalar::Rat(root));
                }
                // √(n/m) = √(n·m)/m adjoins d = n·m (non-square since n/m is
                // not a rational square and gcd(n,m)=1).
                let n = r.numer().magnitude().clone();
                let m = r.denom().magnitude().clone();
                let d = BigInt::from(&n * &m);
                let b = Rat::new(BigInt::one(), BigInt::from(m));
                Ok(ExactScalar::Quad(QuadVal {
                    a: Rat::zero(),
                    b,
                    d: Arc::new(d),
                }))
            }
            ExactScalar::Quad(q) => {
                // (u + v√d)² = (u² + v²d) + 2uv√d: solve u² from the norm.
                let dr = Rat::from_integer((*q.d).clone());
                let norm = &q.a * &q.a - &q.b * &q.b * &dr;
                let s = perfect_sqrt_rat(&norm).ok_or(SqrtError::Unrepresentable)?;
                let two = Rat::from_integer(BigInt::from(2));
                for u2 in [(&q.a + &s) / &two, (&q.a - &s) / &two] {
                    if let Some(u) = perfect_sqrt_rat(&u2) {
                        if u.is_zero() {
                            continue;
                        }
                        let v = &q.b / (&u * &two);
                        let cand = ExactScalar::Quad(QuadVal {
                            a: u,
                            b: v,
                            d: Arc::clone(&q.d),
                        });
                        let cand = if cand.signum() < 0 { cand.neg() } else { cand };
                        debug_assert!(cand.mul(&cand).cmp_value(self) == Ordering::Equal);
                        return Ok(cand);
                    }
                }
                Err(SqrtError::Unrepresentable)
            }
        }
    }

    pub fn floor_int(&self) -> BigInt {
        match self {
            ExactScalar::Rat(r) => rat_floor(r),
            ExactScalar::Quad(_) => {
                // The float image seeds the search but can be arbitrarily far
                // off when a and b·√d nearly cancel, so bracket exponentially
                // and bisect with exact comparisons.
                let is_above = |n: &BigInt| {
                    // x < n ?
                    self.cmp_rat_value(&Rat::from_integer(n.clone())) == Ordering::Less
                };
                let est = self.to_f64();
                let seed = if est.is_finite() && est.abs() < 9.0e15 {
                    BigInt::from(est.floor() as i64)
                } else {
                    BigInt::zero()
                };
                let mut lo = seed;
                let mut step = BigInt::one();
                while is_above(&lo) {
                    lo -= &step;
                    step <<= 1;
                }
                let mut hi = &lo + 1;
                step = BigInt::one();
                while !is_above(&hi) {
                    hi += &step;
                    step <<= 1;
                }
                // invariant: lo ≤ x < hi
                while &hi - &lo > BigInt::one() {
                    let mid = (&lo + &hi) / 2;
                    if is_above(&mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                lo
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Rat(r) => rat_to_f64(r),
            ExactScalar::Quad(q) => {
                let d_bits = bit_len_int(&q.d);
                let root = if d_bits > 1000 {
                    let half = (d_bits / 2) as u64;
                    let shifted: BigUint = q.d.magnitude() >> (2 * half);
                    let approx = BigInt::from(shifted.sqrt());
                    rat_to_f64(&Rat::from_integer(approx << half))
                } else {
                    rat_to_f64(&Rat::from_integer((*q.d).clone())).sqrt()
                };
                rat_to_f64(&q.a) + rat_to_f64(&q.b) * root
            }
        }
    }

    /// Storage accounting: component bit sizes.
    pub fn bits(&self) -> u64 {
        match self {
            ExactScalar::Rat(r) => super::rat::rat_bits(r),
            ExactScalar::Quad(q) => {
                super::rat::rat_bits(&q.a) + super::rat::rat_bits(&q.b) + bit_len_int(&q.d)
            }
        }
    }

    /// Canonical text: `num/den` or `(num/den)+(num/den)*sqrt(D)`.
    pub fn render(&self) -> String {
        match self {
            ExactScalar::Rat(r) => format_rat(r),
            ExactScalar::Quad(q) => format!(
                "({})+({})*sqrt({})",
                format_rat(&q.a),
                format_rat(&q.b),
                q.d
            ),
        }
    }

    pub fn parse(s: &str) -> Result<Self, ScalarParseError> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix('(') {
            let (a_str, rest) = rest
                .split_once(")+(")
                .ok_or_else(|| ScalarParseError::new(s, "expected (a)+(b)*sqrt(d)"))?;
            let (b_str, rest) = rest
                .split_once(")*sqrt(")
                .ok_or_else(|| ScalarParseError::new(s, "expected (a)+(b)*sqrt(d)"))?;
            let d_str = rest
                .strip_suffix(')')
                .ok_or_else(|| ScalarParseError::new(s, "unterminated sqrt"))?;
            let a = parse_rat(a_str)?;
            let b = parse_rat(b_str)?;
            let d: BigInt = d_str
                .trim()
                .parse()
                .map_err(|_| ScalarParseError::new(s, "bad radicand"))?;
            if d <= BigInt::one() {
                return Err(ScalarParseError::new(s, "radicand must exceed 1"));
            }
            if b.is_zero() {
                return Ok(ExactScalar::Rat(a));
            }
            Ok(ExactScalar::Quad(QuadVal {
                a,
                b,
                d: Arc::new(d),
            }))
        } else {
            Ok(ExactScalar::Rat(parse_rat(t)?))
        }
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExactScalar::Rat(a), ExactScalar::Rat(b)) => a == b,
            (ExactScalar::Quad(x), ExactScalar::Quad(y)) => {
                Self::same_field(self, other);
                x.a == y.a && x.b == y.b
            }
            // canonical form: a quadratic value with b != 0 is never rational
            _ => false,
        }
    }
}
impl Eq for ExactScalar {}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        parse_rat(s).unwrap()
    }

    #[test]
    fn rational_sqrt_stays_rational() {
        let x = ExactScalar::Rat(r("49/36"));
        assert_eq!(x.sqrt().unwrap(), ExactScalar::Rat(r("7/6")));
    }

    #[test]
    fn sqrt_adjoins_and_squares_back() {
        let two = ExactScalar::Rat(r("2"));
        let root = two.sqrt().unwrap();
        assert!(root.as_rat().is_none());
        assert_eq!(root.mul(&root), two);
        // 1/(1+√2) = √2 − 1
        let one = ExactScalar::Rat(r("1"));
        let inv = one.div(&one.add(&root));
        assert_eq!(inv, root.sub(&one));
    }

    #[test]
    fn sqrt_of_perfect_square_in_field() {
        // (3 + √2)² = 11 + 6√2 must take a square root in-field.
        let root2 = ExactScalar::Rat(r("2")).sqrt().unwrap();
        let x = ExactScalar::Rat(r("3")).add(&root2);
        let sq = x.mul(&x);
        assert_eq!(sq.sqrt().unwrap(), x);
        // 1 + √2 is not a perfect square in Q(√2).
        let y = ExactScalar::Rat(r("1")).add(&root2);
        assert!(matches!(y.sqrt(), Err(SqrtError::Unrepresentable)));
    }

    #[test]
    fn signs_and_floor() {
        let root2 = ExactScalar::Rat(r("2")).sqrt().unwrap();
        // 3/2 − √2 ≈ 0.086 > 0; 7/5 − √2 ≈ −0.014 < 0
        assert_eq!(ExactScalar::Rat(r("3/2")).sub(&root2).signum(), 1);
        assert_eq!(ExactScalar::Rat(r("7/5")).sub(&root2).signum(), -1);
        assert_eq!(root2.floor_int(), BigInt::from(1));
        assert_eq!(root2.neg().floor_int(), BigInt::from(-2));
        let ten_root2 = root2.mul(&ExactScalar::Rat(r("10")));
        assert_eq!(ten_root2.floor_int(), BigInt::from(14));
    }

    #[test]
    fn render_parse_roundtrip() {
        let root5 = ExactScalar::Rat(r("5/4")).sqrt().unwrap();
        let x = ExactScalar::Rat(r("-3/7")).add(&root5.mul(&ExactScalar::Rat(r("2/3"))));
        let s = x.render();
        assert_eq!(ExactScalar::parse(&s).unwrap(), x);
        assert_eq!(ExactScalar::parse("‑bogus").is_ok(), false);
    }

    #[test]
    fn negative_sqrt_rejected() {
        assert!(matches!(
            ExactScalar::Rat(r("-1")).sqrt(),
            Err(SqrtError::Negative)
        ));
    }
}
