//! Fixed-width two's complement arithmetic on `i64` carriers.
//!
//! Values are always kept sign-extended from `width` bits. Division follows
//! the SMT-LIB `bvsdiv`/`bvsrem` definitions so that concrete execution and
//! the bit-blasted circuits agree on division by zero.

pub fn mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Truncates `v` to `width` bits and sign-extends the result.
pub fn wrap(v: i64, width: u32) -> i64 {
    if width >= 64 {
        return v;
    }
    let shift = 64 - width;
    (v << shift) >> shift
}

pub fn from_bits(bits: u64, width: u32) -> i64 {
    wrap((bits & mask(width)) as i64, width)
}

pub fn to_bits(v: i64, width: u32) -> u64 {
    (v as u64) & mask(width)
}

pub fn add(a: i64, b: i64, width: u32) -> i64 {
    wrap(a.wrapping_add(b), width)
}

pub fn sub(a: i64, b: i64, width: u32) -> i64 {
    wrap(a.wrapping_sub(b), width)
}

pub fn mul(a: i64, b: i64, width: u32) -> i64 {
    wrap(a.wrapping_mul(b), width)
}

pub fn neg(a: i64, width: u32) -> i64 {
    wrap(a.wrapping_neg(), width)
}

fn udiv(a: u64, b: u64, width: u32) -> u64 {
    a.checked_div(b).unwrap_or(mask(width))
}

fn urem(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        a % b
    }
}

pub fn sdiv(a: i64, b: i64, width: u32) -> i64 {
    let (ua, ub) = (to_bits(a, width), to_bits(b, width));
    let (na, nb) = (a < 0, b < 0);
    let abs_a = if na {
        to_bits(neg(a, width), width)
    } else {
        ua
    };
    let abs_b = if nb {
        to_bits(neg(b, width), width)
    } else {
        ub
    };
    let q = from_bits(udiv(abs_a, abs_b, width), width);
    if na != nb {
        neg(q, width)
    } else {
        q
    }
}

pub fn srem(a: i64, b: i64, width: u32) -> i64 {
    let (ua, ub) = (to_bits(a, width), to_bits(b, width));
    let abs_a = if a < 0 {
        to_bits(neg(a, width), width)
    } else {
        ua
    };
    let abs_b = if b < 0 {
        to_bits(neg(b, width), width)
    } else {
        ub
    };
    let r = from_bits(urem(abs_a, abs_b), width);
    if a < 0 {
        neg(r, width)
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_four_bits() {
        assert_eq!(wrap(7, 4), 7);
        assert_eq!(wrap(8, 4), -8);
        assert_eq!(wrap(-9, 4), 7);
        assert_eq!(wrap(300, 32), 300);
    }

    #[test]
    fn division_matches_c_for_nonzero_divisors() {
        for a in -8..8 {
            for b in -8..8 {
                if b == 0 || (a == -8 && b == -1) {
                    continue;
                }
                assert_eq!(sdiv(a, b, 4), a / b, "{a}/{b}");
                assert_eq!(srem(a, b, 4), a % b, "{a}%{b}");
            }
        }
    }

    #[test]
    fn division_by_zero_is_fixed() {
        assert_eq!(sdiv(5, 0, 8), -1);
        assert_eq!(sdiv(-5, 0, 8), 1);
        assert_eq!(srem(5, 0, 8), 5);
        assert_eq!(srem(-5, 0, 8), -5);
        assert_eq!(sdiv(-8, -1, 4), -8);
    }
}
