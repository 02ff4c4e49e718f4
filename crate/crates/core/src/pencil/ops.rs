//! Slope-level primitives: signed tangents between lines, the transversal
//! intercept ratio, the common-slope solver, and the angle relation used by
//! the literal decoder's consistency check.

use std::cmp::Ordering;

use super::{PencilError, SlopeSix};
use crate::scalar::{rat_from_int, rat_pow2, Mode, PrecisionContext, Scalar, SqrtError};

/// Signed tangent of the angle from direction `t` to direction `m`:
/// `(m − t)/(1 + t·m)`.
pub fn tan_between<S: Scalar>(t: &S, m: &S) -> Result<S, PencilError> {
    let den = t.mul(m).add(&t.make_rat(&rat_from_int(1)));
    if den.is_zero() {
        return Err(PencilError::Perpendicular {
            detail: format!("1 + t*m = 0 for t = {}, m = {}", t.render(), m.render()),
        });
    }
    Ok(m.sub(t).div(&den))
}

/// Signed intercept ratio `(xa−xb)/(xb−xc)` of the pencil `{m1,m2,m3}` on any
/// transversal of slope `s` not through the apex, computed in closed form:
/// `((m2−m1)(m3−s)) / ((m3−m2)(m1−s))`.
pub fn transversal_ratio<S: Scalar>(
    m1: &S,
    m2: &S,
    m3: &S,
    s: &S,
) -> Result<S, PencilError> {
    for (name, m) in [("m1", m1), ("m2", m2), ("m3", m3)] {
        if s.cmp_exact(m) == Ordering::Equal {
            return Err(PencilError::Parallel {
                detail: format!("s = {} equals pencil slope {}", s.render(), name),
            });
        }
    }
    if m1.cmp_exact(m2) == Ordering::Equal
        || m2.cmp_exact(m3) == Ordering::Equal
        || m1.cmp_exact(m3) == Ordering::Equal
    {
        return Err(PencilError::DegeneratePencil {
            detail: "repeated slope in a pencil triple".to_string(),
        });
    }
    let num = m2.sub(m1).mul(&m3.sub(s));
    let den = m3.sub(m2).mul(&m1.sub(s));
    Ok(num.div(&den))
}

/// Quadratic coefficients of the common-slope equation
/// `P·(m3−s)(m4−s) = Q·(m6−s)(m1−s)` with `P = (m2−m1)(m6−m5)`,
/// `Q = (m5−m4)(m3−m2)`, expanded as `A·s² + B·s + C = 0`.
fn common_slope_coeffs<S: Scalar>(six: &SlopeSix<S>) -> (S, S, S) {
    let [m1, m2, m3, m4, m5, m6] = &six.m;
    let p = m2.sub(m1).mul(&m6.sub(m5));
    let q = m5.sub(m4).mul(&m3.sub(m2));
    let a = p.sub(&q);
    let b = q.mul(&m1.add(m6)).sub(&p.mul(&m3.add(m4)));
    let c = p.mul(&m3.mul(m4)).sub(&q.mul(&m1.mul(m6)));
    (a, b, c)
}

fn root_is_valid<S: Scalar>(root: &S, six: &SlopeSix<S>) -> bool {
    six.m
        .iter()
        .all(|m| root.cmp_exact(m) != Ordering::Equal)
}

/// Pick the qualifying root with smallest absolute value (tie: the smaller
/// root).
fn pick_root<S: Scalar>(mut roots: Vec<S>, six: &SlopeSix<S>) -> Result<S, PencilError> {
    roots.retain(|r| root_is_valid(r, six));
    roots.sort_by(|x, y| match x.abs().cmp_exact(&y.abs()) {
        Ordering::Equal => x.cmp_exact(y),
        other => other,
    });
    roots.into_iter().next().ok_or(PencilError::NoCommonSlope)
}

/// One bisection refinement of the polynomial `A s² + B s + C` around an
/// approximate root, used when the quadratic formula is ill-conditioned.
fn bisect_polish<S: Scalar>(a: &S, b: &S, c: &S, approx: &S, iters: u32) -> S {
    let eval = |s: &S| -> S { a.mul(s).add(b).mul(s).add(c) };
    let one = approx.make_rat(&rat_from_int(1));
    // Build an expanding bracket around the approximation.
    let mut w = approx
        .abs()
        .add(&one)
        .mul(&approx.make_rat(&rat_pow2(-16)));
    let mut lo = approx.sub(&w);
    let mut hi = approx.add(&w);
    let mut found = false;
    for _ in 0..64 {
        let flo = eval(&lo).signum();
        let fhi = eval(&hi).signum();
        if flo == 0 {
            return lo;
        }
        if fhi == 0 {
            return hi;
        }
        if flo != fhi {
            found = true;
            break;
        }
        w = w.add(&w);
        lo = approx.sub(&w);
        hi = approx.add(&w);
    }
    if !found {
        return approx.clone();
    }
    let two = approx.make_rat(&rat_from_int(2));
    let mut flo = eval(&lo).signum();
    for _ in 0..iters {
        let mid = lo.add(&hi).div(&two);
        let fmid = eval(&mid).signum();
        if fmid == 0 {
            return mid;
        }
        if fmid == flo {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    lo.add(&hi).div(&two)
}

/// The transversal slope at which both pencils produce the same signed
/// intercept ratio. Among real roots of the quadratic, returns the one that
/// avoids all six slopes and has smallest absolute value (tie: smaller).
pub fn solve_common_slope<S: Scalar>(
    six: &SlopeSix<S>,
    ctx: &PrecisionContext,
) -> Result<S, PencilError> {
    six.validate()?;
    let (a, b, c) = common_slope_coeffs(six);
    let two = a.make_rat(&rat_from_int(2));
    if a.is_zero() {
        if b.is_zero() {
            return if c.is_zero() {
                Err(PencilError::DegenerateFamily)
            } else {
                Err(PencilError::NoCommonSlope)
            };
        }
        return pick_root(vec![c.neg().div(&b)], six);
    }
    let disc = b.mul(&b).sub(&two.mul(&two).mul(&a).mul(&c));
    match disc.signum() {
        -1 => Err(PencilError::NoCommonSlope),
        0 => pick_root(vec![b.neg().div(&two.mul(&a))], six),
        _ => {
            let sd = match disc.sqrt() {
                Ok(v) => v,
                Err(SqrtError::Unrepresentable) => {
                    return Err(PencilError::UnrepresentableRoot)
                }
                Err(SqrtError::Negative) => unreachable!("sign checked above"),
            };
            let roots = match ctx.mode {
                Mode::Exact => {
                    let r1 = b.neg().add(&sd).div(&two.mul(&a));
                    let r2 = b.neg().sub(&sd).div(&two.mul(&a));
                    vec![r1, r2]
                }
                Mode::Precision { bits } => {
                    // Stable pairing: q = −(B + sign(B)·√disc)/2; roots q/A, C/q.
                    let (r1, r2) = if b.is_zero() {
                        let r = sd.div(&two.mul(&a));
                        (r.clone(), r.neg())
                    } else {
                        let sgn_b = b.make_rat(&rat_from_int(b.signum() as i64));
                        let q = b.add(&sgn_b.mul(&sd)).neg().div(&two);
                        (q.div(&a), c.div(&q))
                    };
                    // Ill-conditioned leading coefficient: refine by bisection.
                    let threshold = c.abs().mul(&c.make_rat(&rat_pow2(32 - bits as i64)));
                    if a.abs().cmp_exact(&threshold) == Ordering::Less {
                        vec![
                            bisect_polish(&a, &b, &c, &r1, 2 * bits),
                            bisect_polish(&a, &b, &c, &r2, 2 * bits),
                        ]
                    } else {
                        vec![r1, r2]
                    }
                }
            };
            pick_root(roots, six)
        }
    }
}

/// The third signed tangent from the first two and the spacing ratio:
/// `1/b3 = 1/b2 − (1/b1 − 1/b2)/r`.
pub fn angle_from_ratio<S: Scalar>(b1: &S, b2: &S, r: &S) -> Result<S, PencilError> {
    if b1.is_zero() || b2.is_zero() || r.is_zero() || b1.cmp_exact(b2) == Ordering::Equal {
        return Err(PencilError::DegenerateAngle);
    }
    let one = b1.make_rat(&rat_from_int(1));
    let cot1 = one.div(b1);
    let cot2 = one.div(b2);
    let inv = cot2.sub(&cot1.sub(&cot2).div(r));
    if inv.is_zero() {
        return Err(PencilError::DegenerateAngle);
    }
    Ok(one.div(&inv))
}
