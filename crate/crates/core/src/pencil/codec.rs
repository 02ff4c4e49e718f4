//! The stored record and its encoder/decoders.
//!
//! A record holds five scalars (`b1`, `b2`, `r`, one coordinate of `B`, one
//! coordinate of `P0`) plus two exactly-stored rationals (the other
//! coordinate of each anchor) with axis flags. The strict wrapper adds the
//! transversal slope `s`, making decoding a true inverse; the literal record
//! alone under-determines the figure by one rotational degree of freedom.

use num_bigint::BigInt;
use std::cmp::Ordering;

pub use super::figure::AxisChoice as Axis;
use super::figure::{intersect, Point};
use super::ops::{angle_from_ratio, solve_common_slope, tan_between};
use super::{build_figure, rationalize, values_equal, PencilError, SlopeSix};
use crate::scalar::{PrecisionContext, Rat, Scalar};

/// The literal five-plus-two stored record.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedSix<S> {
    /// Signed tangent from the transversal to the first `B`-pencil line.
    pub b1: S,
    /// Signed tangent from the transversal to the second `B`-pencil line.
    pub b2: S,
    /// Signed spacing ratio `(xa−xb)/(xb−xc)` along the transversal.
    pub r: S,
    pub b_rat: Rat,
    pub b_rat_axis: Axis,
    pub b_real: S,
    pub p0_rat: Rat,
    pub p0_rat_axis: Axis,
    pub p0_real: S,
}

/// Literal record plus the transversal slope: exactly invertible.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedSixStrict<S> {
    pub literal: EncodedSix<S>,
    pub s: S,
}

impl<S: Scalar> EncodedSix<S> {
    /// The five scalar slots in storage order.
    pub fn scalar_fields(&self) -> [&S; 5] {
        [&self.b1, &self.b2, &self.r, &self.b_real, &self.p0_real]
    }

    pub fn apex_point(&self) -> Point<S> {
        point_from(self.b_rat_axis, &self.b_rat, &self.b_real)
    }

    pub fn anchor_point(&self) -> Point<S> {
        point_from(self.p0_rat_axis, &self.p0_rat, &self.p0_real)
    }
}

fn point_from<S: Scalar>(axis: Axis, rat: &Rat, real: &S) -> Point<S> {
    match axis {
        Axis::X => Point::new(real.make_rat(rat), real.clone()),
        Axis::Y => Point::new(real.clone(), real.make_rat(rat)),
    }
}

/// Compare two literal records: scalar slots under the context policy,
/// rational slots and axis flags exactly.
pub fn literal_eq<S: Scalar>(
    x: &EncodedSix<S>,
    y: &EncodedSix<S>,
    ctx: &PrecisionContext,
) -> bool {
    x.b_rat_axis == y.b_rat_axis
        && x.p0_rat_axis == y.p0_rat_axis
        && x.b_rat == y.b_rat
        && x.p0_rat == y.p0_rat
        && x.scalar_fields()
            .iter()
            .zip(y.scalar_fields().iter())
            .all(|(a, b)| values_equal(*a, *b, ctx))
}

/// Encode six slopes: solve for the common transversal slope, realize the
/// figure, scale one apex coordinate onto an exact rational, and read off the
/// stored quantities. Always returns the strict wrapper; drop `s` via
/// `.literal` for the five-plus-two projection.
pub fn encode6<S: Scalar>(
    six: &SlopeSix<S>,
    max_den: &BigInt,
    ctx: &PrecisionContext,
) -> Result<EncodedSixStrict<S>, PencilError> {
    six.validate()?;
    let s = solve_common_slope(six, ctx)?;
    let fig = build_figure(six, &s, ctx)?;
    let (fig, parts) = rationalize(&fig, max_den, ctx)?;
    let m4 = &six.m[3];
    let m5 = &six.m[4];
    let b1 = tan_between(&s, m4).map_err(|_| PencilError::Perpendicular {
        detail: "transversal perpendicular to the first B-pencil line".to_string(),
    })?;
    let b2 = tan_between(&s, m5).map_err(|_| PencilError::Perpendicular {
        detail: "transversal perpendicular to the second B-pencil line".to_string(),
    })?;
    let den = fig.b.x.sub(&fig.c.x);
    if den.is_zero() {
        return Err(PencilError::DegenerateFigure {
            detail: "coincident intercept abscissae".to_string(),
        });
    }
    let r = fig.a.x.sub(&fig.b.x).div(&den);
    let (b_real, b_rat) = match parts.b_axis {
        Axis::X => (fig.apex2.y.clone(), parts.b_rat.clone()),
        Axis::Y => (fig.apex2.x.clone(), parts.b_rat.clone()),
    };
    let p0_real = match parts.p0_axis {
        Axis::X => fig.p0.y.clone(),
        Axis::Y => fig.p0.x.clone(),
    };
    Ok(EncodedSixStrict {
        literal: EncodedSix {
            b1,
            b2,
            r,
            b_rat,
            b_rat_axis: parts.b_axis,
            b_real,
            p0_rat: parts.p0_rat.clone(),
            p0_rat_axis: parts.p0_axis,
            p0_real,
        },
        s,
    })
}

/// Shared reconstruction: replay the figure from a literal record and a
/// transversal slope.
fn decode_with_s<S: Scalar>(
    enc: &EncodedSix<S>,
    s: &S,
    _ctx: &PrecisionContext,
) -> Result<SlopeSix<S>, PencilError> {
    if enc.b1.is_zero() || enc.b2.is_zero() {
        return Err(PencilError::DegenerateFigure {
            detail: "stored tangent is zero (a B-line parallel to the transversal)"
                .to_string(),
        });
    }
    if enc.b1.cmp_exact(&enc.b2) == Ordering::Equal {
        return Err(PencilError::DegenerateFigure {
            detail: "stored tangents coincide (B-pencil lines collapse)".to_string(),
        });
    }
    if enc.r.is_zero() {
        return Err(PencilError::DegenerateFigure {
            detail: "stored spacing ratio is zero".to_string(),
        });
    }
    let p0 = enc.anchor_point();
    let apex2 = enc.apex_point();
    // Apex on the transversal collapses the three intercepts.
    let residual = apex2
        .y
        .sub(&s.mul(&apex2.x.sub(&p0.x)).add(&p0.y));
    if residual.is_zero() {
        return Err(PencilError::DegenerateFigure {
            detail: "apex lies on the transversal".to_string(),
        });
    }
    let one = s.make_rat(&crate::scalar::rat_from_int(1));
    let den1 = one.sub(&s.mul(&enc.b1));
    if den1.is_zero() {
        return Err(PencilError::Perpendicular {
            detail: "s*b1 = 1: first reconstructed line is vertical".to_string(),
        });
    }
    let den2 = one.sub(&s.mul(&enc.b2));
    if den2.is_zero() {
        return Err(PencilError::Perpendicular {
            detail: "s*b2 = 1: second reconstructed line is vertical".to_string(),
        });
    }
    let m4 = s.add(&enc.b1).div(&den1);
    let m5 = s.add(&enc.b2).div(&den2);
    let d = intersect(&apex2, &m4, &p0, s).ok_or_else(|| PencilError::Parallel {
        detail: "reconstructed m4 parallel to the transversal".to_string(),
    })?;
    let e = intersect(&apex2, &m5, &p0, s).ok_or_else(|| PencilError::Parallel {
        detail: "reconstructed m5 parallel to the transversal".to_string(),
    })?;
    let f = Point::new(
        e.x.add(&e.x.sub(&d.x).div(&enc.r)),
        e.y.add(&e.y.sub(&d.y).div(&enc.r)),
    );
    let m6 = apex2.slope_to(&f)?;
    let origin = Point::new(
        s.make_rat(&Rat::from_integer(BigInt::from(0))),
        s.make_rat(&Rat::from_integer(BigInt::from(0))),
    );
    let m1 = origin.slope_to(&d)?;
    let m2 = origin.slope_to(&e)?;
    let m3 = origin.slope_to(&f)?;
    Ok(SlopeSix::new([m1, m2, m3, m4, m5, m6]))
}

/// Invert a strict record exactly (exact mode) or to working precision.
pub fn decode6_strict<S: Scalar>(
    enc: &EncodedSixStrict<S>,
    ctx: &PrecisionContext,
) -> Result<SlopeSix<S>, PencilError> {
    decode_with_s(&enc.literal, &enc.s, ctx)
}

/// Decode a literal record under an externally supplied transversal-slope
/// hypothesis, verifying the internal angle relation
/// `tan_between(s, m6) = angle_from_ratio(b1, b2, r)`.
pub fn decode6_literal<S: Scalar>(
    enc: &EncodedSix<S>,
    s_hypothesis: &S,
    ctx: &PrecisionContext,
) -> Result<SlopeSix<S>, PencilError> {
    let six = decode_with_s(enc, s_hypothesis, ctx)?;
    let b3_direct = tan_between(s_hypothesis, &six.m[5])?;
    let b3_relation = angle_from_ratio(&enc.b1, &enc.b2, &enc.r)?;
    if !values_equal(&b3_direct, &b3_relation, ctx) {
        return Err(PencilError::InconsistentLiteral);
    }
    Ok(six)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::within_rel_bound;
    use crate::scalar::{parse_rat, AReal, ExactScalar};
    use rand::{Rng, SeedableRng};

    fn ex(s: &str) -> ExactScalar {
        ExactScalar::from_rat(parse_rat(s).unwrap())
    }

    fn golden_six() -> SlopeSix<ExactScalar> {
        SlopeSix::new(["1", "2", "3", "-1", "-2", "-3"].map(ex))
    }

    fn max_den_default() -> BigInt {
        BigInt::from(1u64 << 32)
    }

    #[test]
    fn golden_encode_exact_values() {
        let ctx = PrecisionContext::new_exact();
        let enc = encode6(&golden_six(), &max_den_default(), &ctx).unwrap();
        assert_eq!(enc.s, ex("0"));
        assert_eq!(enc.literal.b1, ex("-1"));
        assert_eq!(enc.literal.b2, ex("-2"));
        assert_eq!(enc.literal.r, ex("3"));
        assert_eq!(enc.literal.b_rat_axis, Axis::X);
        assert_eq!(enc.literal.b_rat, parse_rat("0").unwrap());
        assert_eq!(enc.literal.b_real, ex("2"));
        assert_eq!(enc.literal.p0_rat_axis, Axis::X);
        assert_eq!(enc.literal.p0_rat, parse_rat("0").unwrap());
        assert_eq!(enc.literal.p0_real, ex("1"));
    }

    #[test]
    fn golden_strict_roundtrip() {
        let ctx = PrecisionContext::new_exact();
        let six = golden_six();
        let enc = encode6(&six, &max_den_default(), &ctx).unwrap();
        let back = decode6_strict(&enc, &ctx).unwrap();
        assert_eq!(back.m.to_vec(), six.m.to_vec());
    }

    #[test]
    fn golden_literal_decode_at_zero_matches_strict() {
        let ctx = PrecisionContext::new_exact();
        let enc = encode6(&golden_six(), &max_den_default(), &ctx).unwrap();
        let lit = decode6_literal(&enc.literal, &ex("0"), &ctx).unwrap();
        assert_eq!(lit.m.to_vec(), golden_six().m.to_vec());
    }

    #[test]
    fn golden_literal_decode_at_tenth_is_the_known_family_member() {
        let ctx = PrecisionContext::new_exact();
        let enc = encode6(&golden_six(), &max_den_default(), &ctx).unwrap();
        let lit = decode6_literal(&enc.literal, &ex("1/10"), &ctx).unwrap();
        let expect = ["56/55", "107/60", "158/65", "-9/11", "-19/12", "-29/13"].map(ex);
        assert_eq!(lit.m.to_vec(), expect.to_vec());
        // ...and it re-encodes to the SAME literal record with s = 1/10.
        let re = encode6(&lit, &max_den_default(), &ctx).unwrap();
        assert_eq!(re.s, ex("1/10"));
        assert!(literal_eq(&re.literal, &enc.literal, &ctx));
        // The two six-tuples are different: genuine literal-mode collision.
        assert_ne!(lit.m.to_vec(), golden_six().m.to_vec());
    }

    #[test]
    fn golden_literal_decode_perpendicular_hypothesis_errors() {
        let ctx = PrecisionContext::new_exact();
        let enc = encode6(&golden_six(), &max_den_default(), &ctx).unwrap();
        // s*b2 = (−1/2)(−2) = 1 → vertical reconstruction
        assert!(matches!(
            decode6_literal(&enc.literal, &ex("-1/2"), &ctx),
            Err(PencilError::Perpendicular { .. })
        ));
    }

    fn sample_six(rng: &mut rand_chacha::ChaCha20Rng) -> SlopeSix<ExactScalar> {
        loop {
            let mut vals: Vec<crate::scalar::Rat> = Vec::new();
            while vals.len() < 6 {
                let num: i64 = rng.random_range(-60..=60);
                let den: i64 = rng.random_range(1..=60);
                vals.push(crate::scalar::Rat::new(num.into(), den.into()));
            }
            let six = SlopeSix::new([
                ExactScalar::from_rat(vals[0].clone()),
                ExactScalar::from_rat(vals[1].clone()),
                ExactScalar::from_rat(vals[2].clone()),
                ExactScalar::from_rat(vals[3].clone()),
                ExactScalar::from_rat(vals[4].clone()),
                ExactScalar::from_rat(vals[5].clone()),
            ]);
            if six.validate().is_ok() {
                return six;
            }
        }
    }

    #[test]
    fn random_strict_roundtrips_exact() {
        let ctx = PrecisionContext::new_exact();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0xC0DEC);
        let max_den = max_den_default();
        let mut done = 0;
        let mut attempts = 0;
        while done < 150 {
            attempts += 1;
            assert!(attempts < 3000, "too few encodable samples");
            let six = sample_six(&mut rng);
            let enc = match encode6(&six, &max_den, &ctx) {
                Ok(e) => e,
                Err(_) => continue,
            };
            let back = decode6_strict(&enc, &ctx).unwrap();
            for (x, y) in six.m.iter().zip(back.m.iter()) {
                assert_eq!(x, y, "strict roundtrip must be exact");
            }
            done += 1;
        }
    }

    #[test]
    fn random_strict_roundtrips_precision() {
        let ctx = PrecisionContext::new_precision(256);
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0xF10A7);
        let max_den = max_den_default();
        let mut done = 0;
        let mut attempts = 0;
        while done < 100 {
            attempts += 1;
            assert!(attempts < 3000, "too few encodable samples");
            let mut vals: Vec<crate::scalar::Rat> = Vec::new();
            while vals.len() < 6 {
                let num: i64 = rng.random_range(-60..=60);
                let den: i64 = rng.random_range(1..=60);
                vals.push(crate::scalar::Rat::new(num.into(), den.into()));
            }
            let six = SlopeSix::new([
                AReal::from_rat(&vals[0], 256),
                AReal::from_rat(&vals[1], 256),
                AReal::from_rat(&vals[2], 256),
                AReal::from_rat(&vals[3], 256),
                AReal::from_rat(&vals[4], 256),
                AReal::from_rat(&vals[5], 256),
            ]);
            if six.validate().is_err() {
                continue;
            }
            let enc = match encode6(&six, &max_den, &ctx) {
                Ok(e) => e,
                Err(_) => continue,
            };
            let back = match decode6_strict(&enc, &ctx) {
                Ok(b) => b,
                Err(_) => continue,
            };
            for (x, y) in six.m.iter().zip(back.m.iter()) {
                assert!(
                    within_rel_bound(x, y, -192),
                    "precision roundtrip out of tolerance: {} vs {}",
                    x.render(),
                    y.render()
                );
            }
            done += 1;
        }
    }

    #[test]
    fn decode_rejects_apex_on_transversal() {
        let ctx = PrecisionContext::new_exact();
        let enc = EncodedSix {
            b1: ex("-1"),
            b2: ex("-2"),
            r: ex("3"),
            b_rat: parse_rat("0").unwrap(),
            b_rat_axis: Axis::X,
            b_real: ex("1"), // B = (0,1) = P0 → on the transversal
            p0_rat: parse_rat("0").unwrap(),
            p0_rat_axis: Axis::X,
            p0_real: ex("1"),
        };
        assert!(matches!(
            decode6_literal(&enc, &ex("0"), &ctx),
            Err(PencilError::DegenerateFigure { .. })
        ));
    }
}
