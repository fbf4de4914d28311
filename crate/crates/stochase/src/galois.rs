//! GF(2^m) arithmetic for 2 ≤ m ≤ 12, backed by exp/log tables.
//!
//! Elements are stored in polynomial (bitmask) representation: bit i of an
//! element is the coefficient of x^i, so addition is a plain XOR and needs no
//! tables. Multiplication, inversion and powers go through exponent form. The
//! exp table is doubled (length 2(q−1)) so the sum of two logs indexes it
//! directly without a modulo reduction — `mul` is the hot path under millions
//! of Berlekamp-Massey decodes per sweep.

use std::fmt;

/// Conventional minimal-weight primitive polynomials, indexed by m − 2.
const DEFAULT_POLYS: [u32; 11] = [
    0b111,       // m = 2:  x^2 + x + 1
    0b1011,      // m = 3:  x^3 + x + 1
    0b1_0011,    // m = 4:  x^4 + x + 1
    0b10_0101,   // m = 5:  x^5 + x^2 + 1
    0b100_0011,  // m = 6:  x^6 + x + 1
    0b1000_1001, // m = 7:  x^7 + x^3 + 1
    0x11d,       // m = 8:  x^8 + x^4 + x^3 + x^2 + 1
    0x211,       // m = 9:  x^9 + x^4 + 1
    0x409,       // m = 10: x^10 + x^3 + 1
    0x805,       // m = 11: x^11 + x^2 + 1
    0x1053,      // m = 12: x^12 + x^6 + x^4 + x + 1
];

pub const MIN_M: u32 = 2;
pub const MAX_M: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfError {
    /// m outside the supported 2..=12 range.
    UnsupportedM { m: u32 },
    /// The modulus bitmask does not have degree exactly m.
    WrongDegree { m: u32, poly: u32 },
    /// x does not generate the full multiplicative group modulo this polynomial.
    NonPrimitivePolynomial { m: u32, poly: u32 },
    /// inv(0) or division by zero.
    DivisionByZero,
}

impl fmt::Display for GfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GfError::UnsupportedM { m } => {
                write!(f, "unsupported field size m = {m} (supported: {MIN_M}..={MAX_M})")
            }
            GfError::WrongDegree { m, poly } => {
                write!(f, "polynomial {poly:#x} does not have degree {m}")
            }
            GfError::NonPrimitivePolynomial { m, poly } => {
                write!(f, "polynomial {poly:#x} is not primitive over GF(2^{m})")
            }
            GfError::DivisionByZero => write!(f, "division by zero in GF(2^m)"),
        }
    }
}

impl std::error::Error for GfError {}

/// Field parameters: m and the degree-m primitive modulus.
///
/// Construction verifies primitivity by walking the cycle of α = x, so a value
/// of this type always describes a genuine GF(2^m).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldParams {
    m: u32,
    poly: u32,
}

impl FieldParams {
    pub fn new(m: u32, poly: u32) -> Result<Self, GfError> {
        if !(MIN_M..=MAX_M).contains(&m) {
            return Err(GfError::UnsupportedM { m });
        }
        if poly >> m != 1 {
            return Err(GfError::WrongDegree { m, poly });
        }
        // A primitive polynomial has a nonzero constant term; without one the
        // multiply-by-x walk below would never return to 1.
        if poly & 1 == 0 {
            return Err(GfError::NonPrimitivePolynomial { m, poly });
        }
        if alpha_cycle_len(m, poly) != (1u32 << m) - 1 {
            return Err(GfError::NonPrimitivePolynomial { m, poly });
        }
        Ok(Self { m, poly })
    }

    /// The conventional minimal-weight primitive polynomial for this m
    /// (e.g. m = 8 → 0x11d, the usual RS(255,239) choice).
    pub fn with_default_poly(m: u32) -> Result<Self, GfError> {
        if !(MIN_M..=MAX_M).contains(&m) {
            return Err(GfError::UnsupportedM { m });
        }
        Self::new(m, DEFAULT_POLYS[(m - MIN_M) as usize])
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Field order q = 2^m.
    pub fn q(&self) -> usize {
        1 << self.m
    }
}

/// Length of the multiplicative cycle of α = x modulo `poly`; q−1 iff primitive.
fn alpha_cycle_len(m: u32, poly: u32) -> u32 {
    let top = 1u32 << m;
    let mut v = 1u32;
    let mut len = 0;
    loop {
        v <<= 1;
        if v & top != 0 {
            v ^= poly;
        }
        len += 1;
        if v == 1 || len >= top {
            return len;
        }
    }
}

/// exp/log lookup tables for one field.
///
/// `exp` has length 2(q−1) with `exp[i] = α^(i mod q−1)`; `log` maps each
/// nonzero element to its exponent in 0..q−1. Immutable after construction and
/// freely shareable across threads.
#[derive(Debug, Clone)]
pub struct FieldTables {
    m: u32,
    q: usize,
    poly: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

/// Builds the exp/log tables, re-verifying primitivity while filling them.
pub fn build_tables(params: FieldParams) -> Result<FieldTables, GfError> {
    let m = params.m();
    let q = params.q();
    let poly = params.poly();
    let top = 1u32 << m;

    let mut exp = vec![0u16; 2 * (q - 1)];
    let mut log = vec![0u16; q];
    let mut v = 1u32;
    for (i, slot) in exp.iter_mut().take(q - 1).enumerate() {
        *slot = v as u16;
        if v == 1 && i > 0 {
            // Cycle closed early: not primitive.
            return Err(GfError::NonPrimitivePolynomial { m, poly });
        }
        log[v as usize] = i as u16;
        v <<= 1;
        if v & top != 0 {
            v ^= poly;
        }
    }
    if v != 1 {
        return Err(GfError::NonPrimitivePolynomial { m, poly });
    }
    for i in 0..(q - 1) {
        exp[q - 1 + i] = exp[i];
    }
    Ok(FieldTables { m, q, poly, exp, log })
}

impl FieldTables {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Characteristic-2 addition (also subtraction): bitwise XOR.
    #[inline(always)]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    #[inline(always)]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    #[inline]
    pub fn inv(&self, a: u16) -> Result<u16, GfError> {
        if a == 0 {
            Err(GfError::DivisionByZero)
        } else {
            Ok(self.exp[self.q - 1 - self.log[a as usize] as usize])
        }
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> Result<u16, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e with a signed exponent; negative exponents invert (a ≠ 0).
    pub fn pow(&self, a: u16, e: i64) -> Result<u16, GfError> {
        if a == 0 {
            return match e {
                0 => Ok(1),
                e if e > 0 => Ok(0),
                _ => Err(GfError::DivisionByZero),
            };
        }
        let step = self.log[a as usize] as i64;
        let idx = (step * e).rem_euclid(self.q as i64 - 1);
        Ok(self.exp[idx as usize])
    }

    /// α^e for any signed e (wraps modulo q−1).
    #[inline]
    pub fn alpha_pow(&self, e: i64) -> u16 {
        self.exp[e.rem_euclid(self.q as i64 - 1) as usize]
    }

    /// Exponent of a nonzero element.
    #[inline]
    pub fn log(&self, a: u16) -> Result<u16, GfError> {
        if a == 0 {
            Err(GfError::DivisionByZero)
        } else {
            Ok(self.log[a as usize])
        }
    }
}

// ====================================================================
// tests
// ====================================================================

#[cfg(test)]
mod tests {
    use super::*;

    /// Table-free shift-and-reduce multiplier used as the independent oracle.
    fn naive_mul(mut a: u32, mut b: u32, m: u32, poly: u32) -> u16 {
        let top = 1u32 << m;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= poly;
            }
        }
        acc as u16
    }

    fn gf8() -> FieldTables {
        build_tables(FieldParams::new(3, 0b1011).unwrap()).unwrap()
    }

    #[test]
    fn exp_table_gf8() {
        let f = gf8();
        assert_eq!(&f.exp[..7], &[1, 2, 4, 3, 6, 7, 5]);
        // Doubled half repeats the first.
        assert_eq!(&f.exp[7..14], &f.exp[..7]);
    }

    #[test]
    fn exp_cycle_gf4() {
        let f = build_tables(FieldParams::new(2, 0b111).unwrap()).unwrap();
        assert_eq!(&f.exp[..3], &[1, 2, 3]);
    }

    #[test]
    fn reducible_poly_rejected() {
        // x^3 + 1 = (x+1)(x^2+x+1)
        assert_eq!(
            FieldParams::new(3, 0b1001),
            Err(GfError::NonPrimitivePolynomial { m: 3, poly: 0b1001 })
        );
    }

    #[test]
    fn degree_and_range_checks() {
        assert_eq!(FieldParams::new(1, 0b11), Err(GfError::UnsupportedM { m: 1 }));
        assert_eq!(FieldParams::new(13, 1 << 13 | 1), Err(GfError::UnsupportedM { m: 13 }));
        assert_eq!(FieldParams::new(3, 0b10011), Err(GfError::WrongDegree { m: 3, poly: 0b10011 }));
        // Zero constant term can never be primitive (x divides it).
        assert_eq!(
            FieldParams::new(3, 0b1010),
            Err(GfError::NonPrimitivePolynomial { m: 3, poly: 0b1010 })
        );
    }

    #[test]
    fn add_examples() {
        let f = gf8();
        assert_eq!(f.add(5, 5), 0);
        assert_eq!(f.add(5, 0), 5);
        assert_eq!(f.add(3, 6), 5);
    }

    #[test]
    fn mul_inv_examples() {
        let f = gf8();
        assert_eq!(f.mul(2, 4), 3); // α·α² = α³ = α + 1
        for a in 0..8 {
            assert_eq!(f.mul(a, 1), a);
        }
        assert_eq!(f.inv(3), Ok(6));
        assert_eq!(f.inv(0), Err(GfError::DivisionByZero));
        for a in 1..8 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn pow_conventions() {
        let f = gf8();
        assert_eq!(f.pow(2, 7), Ok(1)); // α^(q−1) = 1
        assert_eq!(f.pow(0, 0), Ok(1));
        assert_eq!(f.pow(0, 5), Ok(0));
        assert_eq!(f.pow(0, -1), Err(GfError::DivisionByZero));
        assert_eq!(f.pow(2, -1), f.inv(2));
        // alpha_pow wraps for negative exponents.
        assert_eq!(f.alpha_pow(-3), f.inv(f.alpha_pow(3)).unwrap());
    }

    #[test]
    fn alpha_powers_enumerate_nonzero_elements() {
        for m in MIN_M..=MAX_M {
            let f = build_tables(FieldParams::with_default_poly(m).unwrap()).unwrap();
            let mut seen = vec![false; f.q()];
            for i in 0..(f.q() - 1) as i64 {
                let v = f.alpha_pow(i) as usize;
                assert!(v != 0 && !seen[v], "m={m} repeated α^{i}");
                seen[v] = true;
            }
        }
    }

    #[test]
    fn table_invariants() {
        for m in MIN_M..=MAX_M {
            let f = build_tables(FieldParams::with_default_poly(m).unwrap()).unwrap();
            for a in 1..f.q() {
                assert_eq!(f.exp[f.log[a] as usize], a as u16);
            }
            for i in 0..2 * (f.q() - 1) {
                assert_eq!(f.log[f.exp[i] as usize] as usize, i % (f.q() - 1));
            }
        }
    }

    #[test]
    fn mul_matches_naive_oracle() {
        // Deterministic xorshift so the pairs are reproducible.
        let mut state = 0x243f_6a88_85a3_08d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for m in MIN_M..=MAX_M {
            let p = FieldParams::with_default_poly(m).unwrap();
            let f = build_tables(p).unwrap();
            let mask = (f.q() - 1) as u64;
            for _ in 0..10_000 {
                let a = (next() & mask) as u16;
                let b = (next() & mask) as u16;
                assert_eq!(f.mul(a, b), naive_mul(a as u32, b as u32, m, p.poly()));
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_m() {
        for m in MIN_M..=4 {
            let f = build_tables(FieldParams::with_default_poly(m).unwrap()).unwrap();
            let q = f.q() as u16;
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
            // Unique multiplicative inverses.
            for a in 1..q {
                let mut count = 0;
                for b in 1..q {
                    if f.mul(a, b) == 1 {
                        count += 1;
                    }
                }
                assert_eq!(count, 1, "m={m} element {a}");
            }
        }
    }
}
