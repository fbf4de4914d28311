//! Bounded-distance hard-decision decoding via Berlekamp-Massey.
//!
//! Pipeline: syndromes → BM (error locator Λ and evaluator Ω) → Chien search
//! for roots → Forney error values → correction. The decoder never re-encodes
//! to verify; instead it accepts exactly when the algebra is consistent:
//! L ≤ t, deg Ω < L, the Chien root count equals deg Λ, and every Forney
//! value is valid (nonzero, and equal to 1 for binary codes). Anything else
//! is reported as a decoding failure. Received words at distance > t from the
//! sent codeword may still decode to a *different* nearby codeword
//! (miscorrection) — that is a legitimate bounded-distance outcome.

use crate::codecs::{CodeFamily, CodeSpec};
use crate::galois::FieldTables;
use crate::poly;

/// Outcome classification for one hard-decision decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HddStatus {
    /// Input was already a codeword (all syndromes zero).
    Codeword,
    /// Corrected `errors` positions (1 ≤ errors ≤ t).
    Corrected,
    /// No codeword within distance t was found.
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HddOutcome {
    pub status: HddStatus,
    /// Number of symbol positions changed.
    pub errors: usize,
}

/// Reusable decoder holding scratch buffers so the Monte-Carlo hot loop does
/// not allocate per call.
pub struct BmDecoder {
    spec: CodeSpec,
    synd: Vec<u16>,
    lambda: Vec<u16>,
    b: Vec<u16>,
    t_poly: Vec<u16>,
    omega: Vec<u16>,
    /// Error positions found by Chien search.
    positions: Vec<usize>,
}

impl BmDecoder {
    pub fn new(spec: &CodeSpec) -> Self {
        let nsyn = spec.syndrome_count();
        BmDecoder {
            spec: *spec,
            synd: vec![0; nsyn],
            lambda: Vec::with_capacity(nsyn + 1),
            b: Vec::with_capacity(nsyn + 1),
            t_poly: Vec::with_capacity(nsyn + 1),
            omega: Vec::with_capacity(nsyn + 1),
            positions: Vec::with_capacity(nsyn),
        }
    }

    /// Decodes `word` in place. On `Failure` the word is left unmodified.
    pub fn decode_in_place(&mut self, f: &FieldTables, word: &mut [u16]) -> HddOutcome {
        debug_assert_eq!(word.len(), self.spec.n);
        let t = self.spec.t;
        if t == 0 {
            return HddOutcome { status: HddStatus::Codeword, errors: 0 };
        }

        if !self.fill_syndromes(f, word) {
            return HddOutcome { status: HddStatus::Codeword, errors: 0 };
        }

        let ell = self.berlekamp_massey(f);
        if ell > t {
            return HddOutcome { status: HddStatus::Failure, errors: 0 };
        }
        self.compute_omega(f);
        if poly::deg(&self.omega).map_or(false, |d| d >= ell) {
            return HddOutcome { status: HddStatus::Failure, errors: 0 };
        }
        let deg_lambda = match poly::deg(&self.lambda) {
            Some(d) if d == ell => d,
            // deg Λ < L means BM ended inconsistent; no valid locator.
            _ => return HddOutcome { status: HddStatus::Failure, errors: 0 },
        };
        if !self.chien_search(f, deg_lambda) {
            return HddOutcome { status: HddStatus::Failure, errors: 0 };
        }
        match self.forney_apply(f, word) {
            true => HddOutcome { status: HddStatus::Corrected, errors: deg_lambda },
            false => HddOutcome { status: HddStatus::Failure, errors: 0 },
        }
    }

    /// Returns false when all syndromes are zero.
    fn fill_syndromes(&mut self, f: &FieldTables, word: &[u16]) -> bool {
        let b0 = self.spec.first_root;
        let mut any = false;
        for j in 0..self.synd.len() {
            // s_j = Σ_i r_i α^{(b+j)i}, evaluated by Horner on reversed word:
            // Σ r_i x^i at x = α^{b+j}.
            let x = f.alpha_pow((b0 + j) as i64);
            let mut acc = 0u16;
            for &r in word.iter().rev() {
                acc = f.mul(acc, x) ^ r;
            }
            self.synd[j] = acc;
            any |= acc != 0;
        }
        any
    }

    /// Iterative BM over the syndrome sequence; returns the final LFSR length
    /// L and leaves Λ in `self.lambda`.
    fn berlekamp_massey(&mut self, f: &FieldTables) -> usize {
        self.lambda.clear();
        self.lambda.push(1);
        self.b.clear();
        self.b.push(1);
        let mut ell = 0usize;
        let mut shift = 1usize; // x-power applied to b since the last update
        for r in 0..self.synd.len() {
            // Discrepancy Δ = Σ_{i=0}^{L} λ_i s_{r−i}.
            let mut delta = 0u16;
            for i in 0..=ell.min(r).min(self.lambda.len() - 1) {
                delta ^= f.mul(self.lambda[i], self.synd[r - i]);
            }
            if delta == 0 {
                shift += 1;
                continue;
            }
            // λ' = λ − Δ·x^shift·b
            self.t_poly.clear();
            self.t_poly.extend_from_slice(&self.lambda);
            let need = shift + self.b.len();
            if self.t_poly.len() < need {
                self.t_poly.resize(need, 0);
            }
            for (i, &bi) in self.b.iter().enumerate() {
                self.t_poly[shift + i] ^= f.mul(delta, bi);
            }
            if 2 * ell <= r {
                // Length change: b ← Δ^{-1}·λ (old λ).
                let dinv = f.inv(delta).expect("delta nonzero");
                self.b.clear();
                for &li in &self.lambda {
                    self.b.push(f.mul(dinv, li));
                }
                ell = r + 1 - ell;
                shift = 1;
            } else {
                shift += 1;
            }
            std::mem::swap(&mut self.lambda, &mut self.t_poly);
        }
        ell
    }

    /// Ω = (S·Λ) mod x^{2t}, with S as a polynomial s_0 + s_1 x + … .
    fn compute_omega(&mut self, f: &FieldTables) {
        let nsyn = self.synd.len();
        self.omega.clear();
        self.omega.resize(nsyn, 0);
        for (i, &li) in self.lambda.iter().enumerate() {
            if li == 0 || i >= nsyn {
                continue;
            }
            for j in 0..nsyn - i {
                self.omega[i + j] ^= f.mul(li, self.synd[j]);
            }
        }
    }

    /// Finds all i in 0..n with Λ(α^{−i}) = 0; true iff the root count
    /// equals deg Λ (all roots distinct and in range).
    fn chien_search(&mut self, f: &FieldTables, deg_lambda: usize) -> bool {
        self.positions.clear();
        let n = self.spec.n;
        // Walk x = α^{−i} incrementally: term_j for coefficient j picks up a
        // factor α^{−j} per step.
        let mut terms: Vec<u16> = self.lambda.clone();
        let step: Vec<u16> = (0..self.lambda.len()).map(|j| f.alpha_pow(-(j as i64))).collect();
        for i in 0..n {
            let mut sum = 0u16;
            for term in terms.iter() {
                sum ^= term;
            }
            if sum == 0 {
                self.positions.push(i);
            }
            if i + 1 < n {
                for (term, &s) in terms.iter_mut().zip(step.iter()) {
                    *term = f.mul(*term, s);
                }
            }
        }
        self.positions.len() == deg_lambda
    }

    /// Error value at position i (locator X = α^i, inverse root Xi = α^{−i}):
    /// e = X^{1−b}·Ω(Xi)/Λ'(Xi). Applies corrections; false when any value is
    /// invalid (zero, or ≠ 1 for a binary code).
    fn forney_apply(&self, f: &FieldTables, word: &mut [u16]) -> bool {
        let binary = self.spec.family == CodeFamily::BinaryBch;
        let b0 = self.spec.first_root as i64;
        for &i in &self.positions {
            let xi = f.alpha_pow(-(i as i64));
            let omega_v = poly::eval(f, &self.omega, xi);
            let lambda_deriv_v = eval_deriv(f, &self.lambda, xi);
            if lambda_deriv_v == 0 {
                return false;
            }
            let base = match f.div(omega_v, lambda_deriv_v) {
                Ok(v) => v,
                Err(_) => return false,
            };
            let e = f.mul(f.alpha_pow((1 - b0) * i as i64), base);
            if e == 0 || (binary && e != 1) {
                return false;
            }
            word[i] ^= e;
        }
        true
    }
}

/// Λ'(x) in characteristic 2: only odd-power terms survive.
fn eval_deriv(f: &FieldTables, p: &[u16], x: u16) -> u16 {
    let mut acc = 0u16;
    let x2 = f.mul(x, x);
    // Λ'(x) = Σ_{i odd} λ_i x^{i−1}; Horner over x².
    for i in (1..p.len()).step_by(2).rev() {
        acc = f.mul(acc, x2) ^ p[i];
    }
    acc
}

/// Allocating convenience wrapper around [`BmDecoder::decode_in_place`].
pub fn decode_hdd(spec: &CodeSpec, f: &FieldTables, word: &[u16]) -> (Vec<u16>, HddOutcome) {
    let mut out = word.to_vec();
    let outcome = BmDecoder::new(spec).decode_in_place(f, &mut out);
    (out, outcome)
}

// ====================================================================
// tests
// ====================================================================
