//! Dense polynomials over GF(2^m): coefficient vectors in ascending order
//! (index = degree). Shared plumbing for the encoders and the BM decoder.

use crate::galois::FieldTables;

/// Degree, or None for the zero polynomial. Trailing zero coefficients are
/// ignored.
pub(crate) fn deg(p: &[u16]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

pub(crate) fn mul(f: &FieldTables, a: &[u16], b: &[u16]) -> Vec<u16> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u16; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] ^= f.mul(ai, bj);
        }
    }
    out
}

/// Horner evaluation.
pub(crate) fn eval(f: &FieldTables, p: &[u16], x: u16) -> u16 {
    let mut acc = 0u16;
    for &c in p.iter().rev() {
        acc = f.mul(acc, x) ^ c;
    }
    acc
}

/// Remainder of `num` modulo `den` (den nonzero). The quotient is discarded.
pub(crate) fn rem(f: &FieldTables, num: &[u16], den: &[u16]) -> Vec<u16> {
    let dd = deg(den).expect("division by zero polynomial");
    let lead_inv = f.inv(den[dd]).expect("nonzero leading coefficient");
    let mut r: Vec<u16> = num.to_vec();
    while let Some(rd) = deg(&r) {
        if rd < dd {
            break;
        }
        let scale = f.mul(r[rd], lead_inv);
        let shift = rd - dd;
        for (i, &dc) in den.iter().enumerate().take(dd + 1) {
            r[shift + i] ^= f.mul(scale, dc);
        }
    }
    r.truncate(dd.max(1));
    r.resize(dd.max(1), 0);
    r
}
