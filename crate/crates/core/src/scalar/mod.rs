//! Scalar backends for the codec: exact field arithmetic and arbitrary-
//! precision floating point behind one trait.
//!
//! Pipelines run in one of two numeric modes:
//!
//! * **exact** — values are rationals, extended by at most one square root
//!   when an irrational slope appears ([`ExactScalar`]). Every operation,
//!   comparison, and floor is exact; equality means equality.
//! * **precision** — values are correctly rounded binary floats at a
//!   configured mantissa width ([`AReal`]). Equality tests go through an
//!   explicit relative tolerance.
//!
//! The [`Scalar`] trait is the interface the codec is written against;
//! [`PrecisionContext`] carries the mode, working precision, and comparison
//! tolerance. [`to_rational_approx`] converts any scalar to the best rational
//! approximation under a denominator bound using only exact comparisons, so
//! its result is reproducible across backends.

pub mod exact;
pub mod rat;
pub mod real;

pub use exact::{ExactScalar, QuadVal};
pub use rat::{
    bit_len_int, format_rat, parse_rat, perfect_sqrt, perfect_sqrt_rat, rat_bits, rat_floor,
    rat_from_f64, rat_from_int, rat_pow2, rat_to_f64, Rat,
};
pub use real::AReal;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// Default mantissa width (bits) for precision mode.
pub const DEFAULT_PRECISION: u32 = 256;

/// Default equality tolerance exponent for a given mantissa width.
pub fn default_tol_log2(bits: u32) -> i64 {
    -((bits / 2) as i64)
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("cannot parse {input:?} as a number: {message}")]
pub struct ScalarParseError {
    pub input: String,
    pub message: String,
}

impl ScalarParseError {
    pub fn new(input: &str, message: &str) -> Self {
        ScalarParseError {
            input: input.to_string(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SqrtError {
    #[error("square root of a negative value")]
    Negative,
    #[error("square root is irrational over the current exact field")]
    Unrepresentable,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ContextError {
    #[error("working precision {0} bits is below the 64-bit minimum")]
    PrecisionTooSmall(u32),
    #[error("tolerance 2^{tol} is incompatible with {bits}-bit precision (allowed range 2^{} ..= 2^-16)", 16 - *bits as i64)]
    BadTolerance { bits: u32, tol: i64 },
}

/// Numeric mode of a pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact rational / quadratic-field arithmetic.
    Exact,
    /// Correctly rounded floats with the given mantissa width.
    Precision { bits: u32 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Precision { .. } => "precision",
        }
    }
}

/// Mode plus comparison policy; threaded through every codec entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    pub mode: Mode,
    /// Two values compare equal (precision mode only) when their difference
    /// is at most `2^eq_tol_log2 * max(1, |x|, |y|)`.
    pub eq_tol_log2: i64,
}

impl PrecisionContext {
    pub fn new_exact() -> Self {
        PrecisionContext {
            mode: Mode::Exact,
            eq_tol_log2: default_tol_log2(DEFAULT_PRECISION),
        }
    }

    pub fn new_precision(bits: u32) -> Self {
        PrecisionContext {
            mode: Mode::Precision { bits },
            eq_tol_log2: default_tol_log2(bits),
        }
    }

    pub fn with_tolerance(mut self, tol_log2: i64) -> Self {
        self.eq_tol_log2 = tol_log2;
        self
    }

    /// Mantissa width used when a float has to be built under this context.
    pub fn working_bits(&self) -> u32 {
        match self.mode {
            Mode::Exact => DEFAULT_PRECISION,
            Mode::Precision { bits } => bits,
        }
    }

    pub fn validate(&self) -> Result<(), ContextError> {
        if let Mode::Precision { bits } = self.mode {
            if bits < 64 {
                return Err(ContextError::PrecisionTooSmall(bits));
            }
            if self.eq_tol_log2 > -16 || self.eq_tol_log2 < 16 - bits as i64 {
                return Err(ContextError::BadTolerance {
                    bits,
                    tol: self.eq_tol_log2,
                });
            }
        }
        Ok(())
    }
}

/// Three-way result of a tolerance-aware comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TolOrdering {
    Less,
    Equal,
    Greater,
}

/// Common interface over [`ExactScalar`] and [`AReal`].
///
/// Arithmetic contract: exact-backend operations are exact; float-backend
/// operations are correctly rounded at the operand precision. `div` panics on
/// a zero divisor (callers test first). Backends whose operations are *not*
/// exact must return their exact numeric value from [`Scalar::exact_value_rat`]
/// so that value-sensitive algorithms can switch to rational arithmetic.
pub trait Scalar: Clone + std::fmt::Debug + PartialEq + Sized {
    fn from_rat_ctx(r: &Rat, ctx: &PrecisionContext) -> Self;
    fn zero_ctx(ctx: &PrecisionContext) -> Self {
        Self::from_rat_ctx(&Rat::zero(), ctx)
    }
    fn one_ctx(ctx: &PrecisionContext) -> Self {
        Self::from_rat_ctx(&Rat::one(), ctx)
    }
    fn from_int_ctx(n: i64, ctx: &PrecisionContext) -> Self {
        Self::from_rat_ctx(&rat_from_int(n), ctx)
    }
    /// A value of the same backend and parameters as `self`.
    fn make_rat(&self, r: &Rat) -> Self;

    /// The same value carried at the context's working precision (identity
    /// for exact backends). Needed when a pipeline raises its working
    /// precision mid-stream.
    fn at_precision(&self, _ctx: &PrecisionContext) -> Self {
        self.clone()
    }

    /// The quadratic-extension discriminant this value lives in, if any.
    /// Values with different `Some` keys cannot share arithmetic; float
    /// backends always return `None`.
    fn extension_key(&self) -> Option<BigInt> {
        None
    }

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Panics on a zero divisor.
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Result<Self, SqrtError>;

    fn signum(&self) -> i8;
    fn is_zero(&self) -> bool {
        self.signum() == 0
    }
    /// Exact value comparison (never tolerance-based).
    fn cmp_exact(&self, other: &Self) -> Ordering;
    /// Exact comparison against a rational.
    fn cmp_rat(&self, r: &Rat) -> Ordering;
    fn floor_int(&self) -> BigInt;

    /// The exact numeric value, when it is a rational number. Floats always
    /// have one (they are dyadic); quadratic irrationals have none.
    fn exact_value_rat(&self) -> Option<Rat>;
    /// The value as an *exactly stored* rational digit, when the backend
    /// guarantees it. Floats never qualify (their dyadic value is an
    /// approximation of the quantity they stand for).
    fn as_field_rational(&self) -> Option<Rat>;

    fn to_f64(&self) -> f64;
    /// Component bit count, for storage accounting.
    fn bits(&self) -> u64;
    fn render(&self) -> String;
    fn parse_ctx(s: &str, ctx: &PrecisionContext) -> Result<Self, ScalarParseError>;

    /// Self-describing serialized form: like [`Scalar::render`], but backends
    /// whose reconstruction needs a parameter beyond the digits (float
    /// precision) embed it, so mixed-precision collections roundtrip.
    fn wire_render(&self) -> String {
        self.render()
    }
    /// Inverse of [`Scalar::wire_render`]; `ctx` is the fallback for strings
    /// without embedded parameters.
    fn wire_parse(s: &str, ctx: &PrecisionContext) -> Result<Self, ScalarParseError> {
        Self::parse_ctx(s, ctx)
    }
}

impl Scalar for ExactScalar {
    fn from_rat_ctx(r: &Rat, _ctx: &PrecisionContext) -> Self {
        ExactScalar::from_rat(r.clone())
    }
    fn make_rat(&self, r: &Rat) -> Self {
        ExactScalar::from_rat(r.clone())
    }
    fn extension_key(&self) -> Option<BigInt> {
        match self {
            ExactScalar::Rat(_) => None,
            ExactScalar::Quad(q) => Some((*q.d).clone()),
        }
    }
    fn add(&self, other: &Self) -> Self {
        ExactScalar::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        ExactScalar::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        ExactScalar::mul(self, other)
    }
    fn div(&self, other: &Self) -> Self {
        ExactScalar::div(self, other)
    }
    fn neg(&self) -> Self {
        ExactScalar::neg(self)
    }
    fn abs(&self) -> Self {
        ExactScalar::abs(self)
    }
    fn sqrt(&self) -> Result<Self, SqrtError> {
        ExactScalar::sqrt(self)
    }
    fn signum(&self) -> i8 {
        ExactScalar::signum(self)
    }
    fn cmp_exact(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
    fn cmp_rat(&self, r: &Rat) -> Ordering {
        self.cmp_rat_value(r)
    }
    fn floor_int(&self) -> BigInt {
        ExactScalar::floor_int(self)
    }
    fn exact_value_rat(&self) -> Option<Rat> {
        self.as_rat().cloned()
    }
    fn as_field_rational(&self) -> Option<Rat> {
        self.as_rat().cloned()
    }
    fn to_f64(&self) -> f64 {
        ExactScalar::to_f64(self)
    }
    fn bits(&self) -> u64 {
        ExactScalar::bits(self)
    }
    fn render(&self) -> String {
        ExactScalar::render(self)
    }
    fn parse_ctx(s: &str, _ctx: &PrecisionContext) -> Result<Self, ScalarParseError> {
        ExactScalar::parse(s)
    }
}

impl Scalar for AReal {
    fn from_rat_ctx(r: &Rat, ctx: &PrecisionContext) -> Self {
        AReal::from_rat(r, ctx.working_bits())
    }
    fn make_rat(&self, r: &Rat) -> Self {
        AReal::from_rat(r, self.precision())
    }
    fn at_precision(&self, ctx: &PrecisionContext) -> Self {
        self.with_precision(ctx.working_bits())
    }
    fn add(&self, other: &Self) -> Self {
        AReal::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        AReal::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        AReal::mul(self, other)
    }
    fn div(&self, other: &Self) -> Self {
        AReal::div(self, other)
    }
    fn neg(&self) -> Self {
        AReal::neg(self)
    }
    fn abs(&self) -> Self {
        AReal::abs(self)
    }
    fn sqrt(&self) -> Result<Self, SqrtError> {
        AReal::sqrt(self).ok_or(SqrtError::Negative)
    }
    fn signum(&self) -> i8 {
        AReal::signum(self)
    }
    fn cmp_exact(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
    fn cmp_rat(&self, r: &Rat) -> Ordering {
        self.cmp_rat_value(r)
    }
    fn floor_int(&self) -> BigInt {
        AReal::floor_int(self)
    }
    fn exact_value_rat(&self) -> Option<Rat> {
        Some(self.to_rat())
    }
    fn as_field_rational(&self) -> Option<Rat> {
        None
    }
    fn to_f64(&self) -> f64 {
        AReal::to_f64(self)
    }
    fn bits(&self) -> u64 {
        let r = self.to_rat();
        rat_bits(&r)
    }
    fn render(&self) -> String {
        AReal::render(self)
    }
    fn parse_ctx(s: &str, ctx: &PrecisionContext) -> Result<Self, ScalarParseError> {
        AReal::parse(s, ctx.working_bits())
    }
    fn wire_render(&self) -> String {
        format!("{}@{}", AReal::render(self), self.precision())
    }
    fn wire_parse(s: &str, ctx: &PrecisionContext) -> Result<Self, ScalarParseError> {
        match s.rsplit_once('@') {
            Some((body, p)) => {
                let bits: u32 = p
                    .parse()
                    .map_err(|_| ScalarParseError::new(s, "bad precision suffix"))?;
                AReal::parse(body, bits)
            }
            None => AReal::parse(s, ctx.working_bits()),
        }
    }
}

/// Compare under the context's policy: exact mode compares exactly; precision
/// mode treats `|x - y| <= 2^tol * max(1, |x|, |y|)` as equal.
pub fn compare_with_tol<S: Scalar>(x: &S, y: &S, ctx: &PrecisionContext) -> TolOrdering {
    match ctx.mode {
        Mode::Exact => match x.cmp_exact(y) {
            Ordering::Less => TolOrdering::Less,
            Ordering::Equal => TolOrdering::Equal,
            Ordering::Greater => TolOrdering::Greater,
        },
        Mode::Precision { .. } => {
            let d = x.sub(y);
            if d.is_zero() {
                return TolOrdering::Equal;
            }
            let one = Rat::one();
            let ax = x.abs();
            let ay = y.abs();
            let mut scale = if ax.cmp_exact(&ay) == Ordering::Less { ay } else { ax };
            if scale.cmp_rat(&one) == Ordering::Less {
                scale = x.make_rat(&one);
            }
            let thr = scale.mul(&x.make_rat(&rat_pow2(ctx.eq_tol_log2)));
            if d.abs().cmp_exact(&thr) != Ordering::Greater {
                TolOrdering::Equal
            } else if d.signum() < 0 {
                TolOrdering::Less
            } else {
                TolOrdering::Greater
            }
        }
    }
}

pub fn eq_with_tol<S: Scalar>(x: &S, y: &S, ctx: &PrecisionContext) -> bool {
    compare_with_tol(x, y, ctx) == TolOrdering::Equal
}

/// Best rational approximation to `x` with denominator at most `max_den`,
/// decided entirely by exact comparisons. Ties (x exactly halfway between the
/// two closest candidates) resolve to the candidate with even numerator, then
/// to the smaller value.
pub fn to_rational_approx<S: Scalar>(x: &S, max_den: &BigInt) -> Rat {
    assert!(*max_den >= BigInt::one(), "denominator bound must be >= 1");
    if let Some(v) = x.exact_value_rat() {
        return best_rational_of_rat(&v, max_den);
    }
    best_rational_by_ops(x, max_den)
}

fn tie_break(c1: Rat, c2: Rat) -> Rat {
    let e1 = (c1.numer() % BigInt::from(2)).is_zero();
    let e2 = (c2.numer() % BigInt::from(2)).is_zero();
    match (e1, e2) {
        (true, false) => c1,
        (false, true) => c2,
        _ => {
            if c1 <= c2 {
                c1
            } else {
                c2
            }
        }
    }
}

/// Pick between the last in-bound convergent `c` and semiconvergent `s` by
/// exact distance to the target, where comparing against the target is the
/// closure `side(mid)` returning the target's position relative to `mid`.
fn pick_endgame(c: Rat, s: Rat, side: impl Fn(&Rat) -> Ordering) -> Rat {
    let (lo, hi) = if c <= s {
        (c, s)
    } else {
        (s, c)
    };
    let mid = (&lo + &hi) / Rat::from_integer(BigInt::from(2));
    match side(&mid) {
        Ordering::Less => lo,
        Ordering::Greater => hi,
        Ordering::Equal => tie_break(lo, hi),
    }
}

fn best_rational_of_rat(v: &Rat, max_den: &BigInt) -> Rat {
    if v.denom() <= max_den {
        return v.clone();
    }
    // Continued-fraction walk on (num, den).
    let mut num = v.numer().clone();
    let mut den = v.denom().clone();
    let (mut h_prev2, mut k_prev2) = (BigInt::zero(), BigInt::one());
    let (mut h_prev, mut k_prev) = (BigInt::one(), BigInt::zero());
    loop {
        debug_assert!(!den.is_zero(), "walk ran past an exact value");
        let a = num.div_floor(&den);
        let h = &a * &h_prev + &h_prev2;
        let k = &a * &k_prev + &k_prev2;
        if &k > max_den {
            let t = (max_den - &k_prev2).div_floor(&k_prev);
            let c = Rat::new(h_prev.clone(), k_prev.clone());
            if t.is_zero() {
                return c;
            }
            let s = Rat::new(&t * &h_prev + &h_prev2, &t * &k_prev + &k_prev2);
            return pick_endgame(c, s, |mid| v.cmp(mid));
        }
        let rem = &num - &a * &den;
        h_prev2 = std::mem::replace(&mut h_prev, h);
        k_prev2 = std::mem::replace(&mut k_prev, k);
        if rem.is_zero() {
            // Exact representation within the bound.
            return Rat::new(h_prev, k_prev);
        }
        num = std::mem::replace(&mut den, rem);
    }
}

/// Continued-fraction walk driven by backend operations; requires exact
/// arithmetic (used for quadratic irrationals, whose field ops are exact).
fn best_rational_by_ops<S: Scalar>(x: &S, max_den: &BigInt) -> Rat {
    let (mut h_prev2, mut k_prev2) = (BigInt::zero(), BigInt::one());
    let (mut h_prev, mut k_prev) = (BigInt::one(), BigInt::zero());
    let mut val = x.clone();
    let mut steps = 0u32;
    loop {
        steps += 1;
        assert!(steps < 10_000, "approximation walk failed to terminate");
        let a = val.floor_int();
        let h = &a * &h_prev + &h_prev2;
        let k = &a * &k_prev + &k_prev2;
        if &k > max_den {
            let t = (max_den - &k_prev2).div_floor(&k_prev);
            let c = Rat::new(h_prev.clone(), k_prev.clone());
            if t.is_zero() {
                return c;
            }
            let s = Rat::new(&t * &h_prev + &h_prev2, &t * &k_prev + &k_prev2);
            return pick_endgame(c, s, |mid| x.cmp_rat(mid));
        }
        let frac = val.sub(&val.make_rat(&Rat::from_integer(a)));
        h_prev2 = std::mem::replace(&mut h_prev, h);
        k_prev2 = std::mem::replace(&mut k_prev, k);
        if frac.is_zero() {
            return Rat::new(h_prev, k_prev);
        }
        val = val.make_rat(&Rat::one()).div(&frac);
    }
}
