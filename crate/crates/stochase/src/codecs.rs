//! Reed-Solomon and binary BCH code parameters and systematic encoders.
//!
//! Both families are handled in the generator-root (BCH) view: g(x) has roots
//! α^b, α^{b+1}, … with b = 1 (narrow sense) by default. Encoding is
//! systematic with the message in the first k positions: the codeword
//! polynomial is C(x) = U(x) + x^k·P(x) with P = (U·x^{n−k}) mod g, which is
//! divisible by g because x^n ≡ 1 modulo any divisor of x^n − 1.

use crate::galois::{build_tables, FieldParams, FieldTables, GfError};
use crate::poly;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFamily {
    ReedSolomon,
    BinaryBch,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CodeError {
    /// n is not q−1 for any supported field size.
    BadLength { n: usize },
    /// k out of range for the given n.
    BadDimension { n: usize, k: usize },
    /// Explicit field does not match n.
    FieldMismatch { n: usize, q: usize },
    /// No error-correction capability t yields the requested (n, k) BCH code.
    NoBchMatch { n: usize, k: usize },
    Gf(GfError),
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CodeError::BadLength { n } => {
                write!(f, "code length {n} is not 2^m - 1 for any m in 2..=12")
            }
            CodeError::BadDimension { n, k } => write!(f, "dimension k = {k} invalid for n = {n}"),
            CodeError::FieldMismatch { n, q } => {
                write!(f, "field of order {q} does not match code length {n}")
            }
            CodeError::NoBchMatch { n, k } => {
                write!(f, "no binary BCH code with n = {n}, k = {k} (no matching t)")
            }
            CodeError::Gf(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CodeError {}

impl From<GfError> for CodeError {
    fn from(e: GfError) -> Self {
        CodeError::Gf(e)
    }
}

/// Full description of one code: family, (n, k, t, d) and the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeSpec {
    pub family: CodeFamily,
    /// Codeword length: symbols for RS, bits for BCH.
    pub n: usize,
    pub k: usize,
    /// Guaranteed error-correction capability.
    pub t: usize,
    pub d_design: usize,
    pub field: FieldParams,
    /// Exponent b of the first generator root (narrow sense: 1).
    pub first_root: usize,
}

fn m_for_length(n: usize) -> Option<u32> {
    let m = usize::BITS - n.leading_zeros();
    if m >= 2 && m <= 12 && n == (1usize << m) - 1 {
        Some(m)
    } else {
        None
    }
}

impl CodeSpec {
    /// RS(n, k) over the default primitive polynomial for m = log2(n+1).
    pub fn reed_solomon(n: usize, k: usize) -> Result<Self, CodeError> {
        let m = m_for_length(n).ok_or(CodeError::BadLength { n })?;
        Self::reed_solomon_with_field(n, k, FieldParams::with_default_poly(m)?)
    }

    pub fn reed_solomon_with_field(n: usize, k: usize, field: FieldParams) -> Result<Self, CodeError> {
        if field.q() - 1 != n {
            return Err(CodeError::FieldMismatch { n, q: field.q() });
        }
        if k == 0 || k > n {
            return Err(CodeError::BadDimension { n, k });
        }
        Ok(CodeSpec {
            family: CodeFamily::ReedSolomon,
            n,
            k,
            t: (n - k) / 2,
            d_design: n - k + 1,
            field,
            first_root: 1,
        })
    }

    /// Binary BCH(n, k): searches for the t whose generator degree gives k.
    pub fn bch(n: usize, k: usize) -> Result<Self, CodeError> {
        let m = m_for_length(n).ok_or(CodeError::BadLength { n })?;
        Self::bch_with_field(n, k, FieldParams::with_default_poly(m)?)
    }

    pub fn bch_with_field(n: usize, k: usize, field: FieldParams) -> Result<Self, CodeError> {
        if field.q() - 1 != n {
            return Err(CodeError::FieldMismatch { n, q: field.q() });
        }
        if k == 0 || k > n {
            return Err(CodeError::BadDimension { n, k });
        }
        if k == n {
            return Err(CodeError::NoBchMatch { n, k });
        }
        let f = build_tables(field)?;
        for t in 1..=(n - 1) / 2 {
            let g = bch_generator_for_t(&f, n, t);
            let deg = poly::deg(&g).unwrap_or(0);
            if deg > n - k {
                return Err(CodeError::NoBchMatch { n, k });
            }
            if deg == n - k {
                return Ok(CodeSpec {
                    family: CodeFamily::BinaryBch,
                    n,
                    k,
                    t,
                    d_design: 2 * t + 1,
                    field,
                    first_root: 1,
                });
            }
        }
        Err(CodeError::NoBchMatch { n, k })
    }

    /// Builds the field tables (infallible: the params were validated).
    pub fn tables(&self) -> FieldTables {
        build_tables(self.field).expect("validated field params")
    }

    /// Bits carried by one codeword symbol: m for RS, 1 for BCH.
    pub fn bits_per_symbol(&self) -> usize {
        match self.family {
            CodeFamily::ReedSolomon => self.field.m() as usize,
            CodeFamily::BinaryBch => 1,
        }
    }

    pub fn codeword_bits(&self) -> usize {
        self.n * self.bits_per_symbol()
    }

    pub fn message_bits(&self) -> usize {
        self.k * self.bits_per_symbol()
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Number of syndromes consumed by the BM decoder.
    pub fn syndrome_count(&self) -> usize {
        2 * self.t
    }

    /// Size of the symbol alphabet codewords are drawn over.
    pub fn alphabet(&self) -> usize {
        match self.family {
            CodeFamily::ReedSolomon => self.field.q(),
            CodeFamily::BinaryBch => 2,
        }
    }
}

// ====================================================================
// generator polynomials
// ====================================================================

/// g(x) = Π_{j=0}^{n−k−1} (x − α^{b+j}): monic, degree n−k.
pub fn rs_generator_poly(spec: &CodeSpec, f: &FieldTables) -> Vec<u16> {
    assert_eq!(spec.family, CodeFamily::ReedSolomon);
    let mut g = vec![1u16];
    for j in 0..(spec.n - spec.k) {
        let root = f.alpha_pow((spec.first_root + j) as i64);
        g = poly::mul(f, &g, &[root, 1]);
    }
    g
}

/// Product of the minimal polynomials of the conjugacy classes covering
/// α^1 … α^{2t}.
fn bch_generator_for_t(f: &FieldTables, n: usize, t: usize) -> Vec<u16> {
    let mut covered = vec![false; n];
    let mut g = vec![1u16];
    for c in 1..=(2 * t).min(n - 1) {
        if covered[c] {
            continue;
        }
        // Conjugacy class of c under squaring: {c·2^j mod n}.
        let mut minimal = vec![1u16];
        let mut e = c;
        loop {
            covered[e] = true;
            minimal = poly::mul(f, &minimal, &[f.alpha_pow(e as i64), 1]);
            e = (e * 2) % n;
            if e == c {
                break;
            }
        }
        debug_assert!(minimal.iter().all(|&c| c <= 1), "minimal poly not binary");
        g = poly::mul(f, &g, &minimal);
    }
    g
}

/// Binary generator polynomial (coefficients 0/1, ascending).
pub fn bch_generator_poly(spec: &CodeSpec, f: &FieldTables) -> Vec<u16> {
    assert_eq!(spec.family, CodeFamily::BinaryBch);
    bch_generator_for_t(f, spec.n, spec.t)
}

// ====================================================================
// systematic encoders
// ====================================================================

fn systematic_encode(spec: &CodeSpec, f: &FieldTables, g: &[u16], msg: &[u16]) -> Vec<u16> {
    assert_eq!(msg.len(), spec.k, "message must have length k");
    let mut cw = Vec::with_capacity(spec.n);
    cw.extend_from_slice(msg);
    if spec.n == spec.k {
        return cw;
    }
    // parity = (U(x)·x^{n−k}) mod g(x)
    let mut num = vec![0u16; spec.n - spec.k];
    num.extend_from_slice(msg);
    let parity = poly::rem(f, &num, g);
    cw.extend_from_slice(&parity);
    cw
}

/// Systematic RS encoding: first k symbols are the message.
pub fn rs_encode(spec: &CodeSpec, f: &FieldTables, msg: &[u16]) -> Vec<u16> {
    assert_eq!(spec.family, CodeFamily::ReedSolomon);
    debug_assert!(msg.iter().all(|&s| (s as usize) < spec.field.q()));
    let g = rs_generator_poly(spec, f);
    systematic_encode(spec, f, &g, msg)
}

/// Systematic binary BCH encoding: first k bits are the message.
pub fn bch_encode(spec: &CodeSpec, f: &FieldTables, msg: &[u16]) -> Vec<u16> {
    assert_eq!(spec.family, CodeFamily::BinaryBch);
    debug_assert!(msg.iter().all(|&b| b <= 1));
    let g = bch_generator_poly(spec, f);
    systematic_encode(spec, f, &g, msg)
}

/// Family-dispatching convenience used by the simulator.
pub fn encode(spec: &CodeSpec, f: &FieldTables, msg: &[u16]) -> Vec<u16> {
    match spec.family {
        CodeFamily::ReedSolomon => rs_encode(spec, f, msg),
        CodeFamily::BinaryBch => bch_encode(spec, f, msg),
    }
}

// ====================================================================
// tests
// ====================================================================
