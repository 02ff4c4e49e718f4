//! Six rationals packed into two integers by base-2^k digit concatenation.
//!
//! The width `k` is sized so every magnitude and denominator fits a `k`-bit
//! field with a spare bit; the twelve fields (numerator magnitude and
//! denominator, alternating) are concatenated into one big integer, followed
//! by a six-bit sign field for the numerators. Storing `k` alongside makes
//! the pair self-describing.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::PackError;
use crate::scalar::Rat;

/// A packed six-tuple: field width plus the digit integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedPair {
    /// Field width in bits (≥ 1).
    pub k: u32,
    /// Twelve `k`-bit fields then a 6-bit numerator-sign field; nonnegative.
    pub d: BigInt,
}

impl PackedPair {
    /// Total bit length of the pair as stored: `k` plus the digit integer.
    pub fn total_bits(&self) -> u64 {
        u64::from(self.k.max(1).ilog2() + 1) + self.d.bits().max(1)
    }
}

/// Smallest `k ≥ 1` with `2^k ≥ 2·max(values ∪ {1})`.
pub fn field_width(values: &[BigInt]) -> u32 {
    let mut max = BigInt::one();
    for v in values {
        debug_assert!(!v.is_negative(), "field_width takes magnitudes");
        if *v > max {
            max = v.clone();
        }
    }
    // 2^k ≥ 2·max  ⟺  2^(k−1) ≥ max  ⟺  k−1 ≥ bits(max − 1)
    u32::try_from((max - 1u8).bits()).expect("field width fits u32") + 1
}

fn split_rat(r: &Rat) -> (BigInt, BigInt, bool) {
    (r.numer().abs(), r.denom().clone(), r.numer().is_negative())
}

/// Pack six normalized rationals into one `PackedPair`.
///
/// Digit order is numerator-magnitude then denominator for each rational in
/// turn, most significant first: the shifts are `(11k, 10k), (9k, 8k), …,
/// (k, 0)`, and the whole digit sum is then shifted left six bits to make
/// room for the numerator sign bits (bit `i−1` set ⟺ the `i`-th numerator
/// is negative).
pub fn pack12(rs: &[Rat; 6]) -> PackedPair {
    let parts: Vec<(BigInt, BigInt, bool)> = rs.iter().map(split_rat).collect();
    let mut magnitudes = Vec::with_capacity(12);
    for (num, den, _) in &parts {
        magnitudes.push(num.clone());
        magnitudes.push(den.clone());
    }
    let k = field_width(&magnitudes);
    let mut d0 = BigInt::zero();
    for (i, (num, den, _)) in parts.iter().enumerate() {
        // i is zero-based: shifts (12−2i−1)k and (12−2i−2)k.
        let hi = (12 - 2 * i as u32 - 1) * k;
        let lo = (12 - 2 * i as u32 - 2) * k;
        d0 += num << u64::from(hi);
        d0 += den << u64::from(lo);
    }
    let mut signs = BigInt::zero();
    for (i, (_, _, neg)) in parts.iter().enumerate() {
        if *neg {
            signs += BigInt::one() << i;
        }
    }
    PackedPair {
        k,
        d: (d0 << 6) + signs,
    }
}

/// Recover the six rationals from a `PackedPair`.
pub fn unpack12(p: &PackedPair) -> Result<[Rat; 6], PackError> {
    if p.k == 0 {
        return Err(PackError::CorruptPack {
            detail: "field width is zero".to_string(),
        });
    }
    if p.d.is_negative() {
        return Err(PackError::CorruptPack {
            detail: "digit integer is negative".to_string(),
        });
    }
    if p.d.bits() > u64::from(12 * p.k + 6) {
        return Err(PackError::CorruptPack {
            detail: format!(
                "digit integer has {} bits, more than the 12k+6 = {} the width admits",
                p.d.bits(),
                12 * p.k + 6
            ),
        });
    }
    let mask = (BigInt::one() << p.k) - 1;
    let signs = &p.d & BigInt::from(0x3f);
    let rest = &p.d >> 6;
    let mut out: Vec<Rat> = Vec::with_capacity(6);
    for i in 0..6u32 {
        let hi = (12 - 2 * i - 1) * p.k;
        let lo = (12 - 2 * i - 2) * p.k;
        let num: BigInt = (&rest >> u64::from(hi)) & &mask;
        let den: BigInt = (&rest >> u64::from(lo)) & &mask;
        if den.is_zero() {
            return Err(PackError::CorruptPack {
                detail: format!("zero denominator in field {}", i + 1),
            });
        }
        let neg = !((&signs >> i) & BigInt::one()).is_zero();
        let num = if neg { -num } else { num };
        out.push(Rat::new(num, den));
    }
    Ok(out.try_into().expect("exactly six rationals"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rat;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};

    fn rats(ts: [&str; 6]) -> [Rat; 6] {
        ts.map(|t| parse_rat(t).unwrap())
    }

    #[test]
    fn field_width_examples() {
        let zeros_ones: Vec<BigInt> = vec![0, 1, 0, 1].into_iter().map(BigInt::from).collect();
        assert_eq!(field_width(&zeros_ones), 1);
        let with_five: Vec<BigInt> = vec![5, 1, 0].into_iter().map(BigInt::from).collect();
        assert_eq!(field_width(&with_five), 4);
        assert_eq!(field_width(&[BigInt::zero()]), 1);
        assert_eq!(field_width(&[]), 1);
        // powers of two sit exactly on the boundary: 2^k ≥ 2·max
        assert_eq!(field_width(&[BigInt::from(4)]), 3);
        assert_eq!(field_width(&[BigInt::from(8)]), 4);
    }

    #[test]
    fn pack_six_zeros_frozen() {
        let p = pack12(&rats(["0", "0", "0", "0", "0", "0"]));
        assert_eq!(p.k, 1);
        // D0 = 2^10 + 2^8 + 2^6 + 2^4 + 2^2 + 1 = 1365; D = 1365·64 = 87360
        assert_eq!(p.d, BigInt::from(87360));
        let back = unpack12(&p).unwrap();
        assert!(back.iter().all(|r| r == &parse_rat("0").unwrap()));
    }

    #[test]
    fn pack_minus_three_fifths_frozen() {
        let p = pack12(&rats(["-3/5", "0", "0", "0", "0", "0"]));
        assert_eq!(p.k, 4);
        let expected: BigInt = ((BigInt::from(3) << 44u32)
            + (BigInt::from(5) << 40u32)
            + (BigInt::one() << 32u32)
            + (BigInt::one() << 24u32)
            + (BigInt::one() << 16u32)
            + (BigInt::one() << 8u32)
            + BigInt::one())
            * 64
            + 1;
        assert_eq!(p.d, expected);
        let back = unpack12(&p).unwrap();
        assert_eq!(back[0], parse_rat("-3/5").unwrap());
        assert!(back[1..].iter().all(|r| r == &parse_rat("0").unwrap()));
    }

    fn random_rat(rng: &mut rand_chacha::ChaCha20Rng, bits: u32) -> Rat {
        let mut num_bytes = vec![0u8; (bits / 8) as usize];
        rng.fill(num_bytes.as_mut_slice());
        let mut den_bytes = vec![0u8; (bits / 8) as usize];
        rng.fill(den_bytes.as_mut_slice());
        let num = BigInt::from_bytes_le(num_bigint::Sign::Plus, &num_bytes);
        let mut den = BigInt::from_bytes_le(num_bigint::Sign::Plus, &den_bytes);
        if den.is_zero() {
            den = BigInt::one();
        }
        let num = if rng.random_bool(0.5) { -num } else { num };
        Rat::new(num, den)
    }

    #[test]
    fn roundtrip_random_small() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0xD161);
        for _ in 0..2000 {
            let rs: [Rat; 6] = std::array::from_fn(|_| random_rat(&mut rng, 64));
            let p = pack12(&rs);
            // invariants: D < 2^(12k+6); k minimal
            assert!(p.d.bits() <= u64::from(12 * p.k + 6));
            let max = rs
                .iter()
                .flat_map(|r| [r.numer().abs(), r.denom().clone()])
                .max()
                .unwrap()
                .max(BigInt::one());
            assert!((BigInt::one() << p.k) >= 2 * &max, "width too small");
            assert!(
                p.k == 1 || (BigInt::one() << (p.k - 1)) < 2 * &max,
                "width not minimal"
            );
            assert_eq!(unpack12(&p).unwrap(), rs);
        }
    }

    #[test]
    fn roundtrip_random_wide() {
        // module property: exact inverse up to 2^256-sized parts
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0xD162);
        for _ in 0..500 {
            let rs: [Rat; 6] = std::array::from_fn(|_| random_rat(&mut rng, 256));
            let p = pack12(&rs);
            assert_eq!(unpack12(&p).unwrap(), rs);
        }
    }

    #[test]
    fn corrupt_pairs_are_rejected() {
        // zero denominator in the last field: clear its k bits above the sign field
        let p = pack12(&rats(["1/2", "1/3", "1/5", "1/7", "3/4", "-5/8"]));
        let mask = (BigInt::one() << p.k) - 1;
        let tampered = PackedPair {
            k: p.k,
            d: &p.d - ((&p.d >> 6u32) & &mask) * 64,
        };
        assert!(matches!(
            unpack12(&tampered),
            Err(PackError::CorruptPack { .. })
        ));
        assert!(matches!(
            unpack12(&PackedPair {
                k: 0,
                d: BigInt::from(87360)
            }),
            Err(PackError::CorruptPack { .. })
        ));
        assert!(matches!(
            unpack12(&PackedPair {
                k: 1,
                d: BigInt::from(-1)
            }),
            Err(PackError::CorruptPack { .. })
        ));
        // oversized digit integer for the declared width
        assert!(matches!(
            unpack12(&PackedPair {
                k: 1,
                d: BigInt::one() << 20u32
            }),
            Err(PackError::CorruptPack { .. })
        ));
    }

    #[test]
    fn pack_speed_sanity() {
        // the acceptance pass does 10^5 tuples in <10s; make sure 10^4 is trivial here
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0xD163);
        let start = std::time::Instant::now();
        for _ in 0..10_000 {
            let rs: [Rat; 6] = std::array::from_fn(|_| random_rat(&mut rng, 64));
            let p = pack12(&rs);
            assert_eq!(unpack12(&p).unwrap(), rs);
        }
        let ms = start.elapsed().as_millis().to_u64().unwrap();
        assert!(ms < 5_000, "digit packing too slow: {ms} ms for 10^4");
    }
}
