//! Chase-family decoders around the bounded-distance BM core.
//!
//! Four variants share one selection rule (minimum soft weight W over the
//! candidates that decode cleanly):
//!
//! * `s_sca_decode`  — symbolic stochastic Chase: test vectors sampled
//!   per received block from the posterior symbol distributions Π.
//! * `ssbt_sca_decode` — symbol-domain stochastic Chase built from bitwise
//!   (BPSK) soft information via per-symbol probability products.
//! * `b_sca_decode`  — bitwise stochastic Chase: each bit flipped
//!   independently according to its posterior.
//! * `s_ca_decode`   — deterministic Chase enumerating every assignment of
//!   the λ least reliable blocks.
//!
//! Plus a brute-force maximum-likelihood oracle for tiny codes and a
//! Pyndiah-style soft-output stage.

use crate::bm::{BmDecoder, HddStatus};
use crate::codecs::CodeSpec;
use crate::dedup::UniquePool;
use crate::galois::FieldTables;
use crate::modem::{
    bit_llrs_from_exps, exponent_row, exps_from_row, llr_to_prob, pack_bits_msb,
    unpack_bits_msb, AppMatrix, ConstellationSpec,
};
use num_complex::Complex64;
use rand::Rng;
use std::fmt;

/// Hard cap on the deterministic Chase enumeration size.
pub const SCA_BUDGET_CAP_BITS: f64 = 24.0;
/// Hard cap on the ML-oracle codebook size.
pub const ML_CODEBOOK_CAP: u128 = 1 << 20;

pub type TestVector = Vec<u16>;

#[derive(Debug, Clone, PartialEq)]
pub enum ChaseError {
    InvalidConfig(&'static str),
    /// The deterministic Chase enumeration q^λ exceeds 2^24.
    BudgetExceeded { log2_vectors: f64 },
    /// The ML-oracle codebook q^k exceeds 2^20.
    CodebookTooLarge { log2_words: f64 },
    LengthMismatch { expected: usize, got: usize },
}

impl fmt::Display for ChaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChaseError::InvalidConfig(msg) => write!(f, "invalid chase config: {msg}"),
            ChaseError::BudgetExceeded { log2_vectors } => {
                write!(f, "enumeration budget exceeded: 2^{log2_vectors:.1} test vectors")
            }
            ChaseError::CodebookTooLarge { log2_words } => {
                write!(f, "ML codebook too large: 2^{log2_words:.1} codewords")
            }
            ChaseError::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
        }
    }
}

impl std::error::Error for ChaseError {}

// ====================================================================
// configuration and result types
// ====================================================================

#[derive(Debug, Clone, PartialEq)]
pub struct ChaseConfig {
    /// Sampling-iteration budget τ.
    pub tau: usize,
    /// Saturation threshold θ ∈ [0,1]: blocks with γ < θ are never perturbed.
    pub theta: f64,
    /// Scaling factor β ∈ (0,1] applied to bit LLRs before probability
    /// conversion (1 = off).
    pub beta: f64,
    /// Skip the HDD call for test vectors already tried in this decode.
    pub dedup: bool,
    /// λ for the deterministic enumeration decoder.
    pub lambda: usize,
    /// Make the plain hard decision iteration 0's test vector.
    pub include_hard_vector: bool,
    /// Stop as soon as a weight-0 candidate is found.
    pub early_exit: bool,
    /// Compute per-bit output LLRs (collects all candidates).
    pub soft_output: bool,
    /// Soft-output magnitude for bits with no disagreeing competitor;
    /// default 2·max|input LLR|.
    pub soft_saturation: Option<f64>,
    /// Record every vector submitted to HDD (test instrumentation).
    pub trace_submitted: bool,
}

impl Default for ChaseConfig {
    fn default() -> Self {
        ChaseConfig {
            tau: 1024,
            theta: 0.05,
            beta: 1.0,
            dedup: true,
            lambda: 2,
            include_hard_vector: true,
            early_exit: false,
            soft_output: false,
            soft_saturation: None,
            trace_submitted: false,
        }
    }
}

impl ChaseConfig {
    pub fn validate(&self) -> Result<(), ChaseError> {
        if self.tau < 1 {
            return Err(ChaseError::InvalidConfig("tau must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(ChaseError::InvalidConfig("theta must be in [0, 1]"));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(ChaseError::InvalidConfig("beta must be in (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChaseStatus {
    /// At least one test vector decoded cleanly; `decided` is a codeword.
    ChaseSuccess,
    /// Every HDD call failed; `decided` is the raw hard decision.
    AllHddFailed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Decided word D over the code alphabet (symbols for RS, bits for BCH).
    pub decided: Vec<u16>,
    /// Soft weight of the winner (∞ when AllHddFailed).
    pub weight: f64,
    pub status: ChaseStatus,
    /// Sampling iterations consumed (= τ unless early exit fired).
    pub iterations_used: usize,
    /// Distinct test vectors generated.
    pub unique_vectors: usize,
    /// Per-bit output LLRs when requested.
    pub soft_output: Option<Vec<f64>>,
    /// All clean candidates as (bits, weight), when soft output is on.
    pub candidates: Option<Vec<(Vec<u16>, f64)>>,
    /// Vectors actually submitted to HDD, when tracing is on.
    pub submitted: Option<Vec<Vec<u16>>>,
}

// ====================================================================
// reliability factors and sampling tables
// ====================================================================

/// Per-block reliability γ_i = (second-largest)/(largest) entry of Π's row i,
/// with `order` listing block indices from least reliable (largest γ) down.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityProfile {
    pub gamma: Vec<f64>,
    pub order: Vec<usize>,
}

pub fn reliability_factors(pi: &AppMatrix) -> ReliabilityProfile {
    let n = pi.n_rows();
    let mut gamma = Vec::with_capacity(n);
    for i in 0..n {
        let mut top = f64::NEG_INFINITY;
        let mut second = f64::NEG_INFINITY;
        for &v in pi.row(i) {
            if v > top {
                second = top;
                top = v;
            } else if v > second {
                second = v;
            }
        }
        gamma.push(second / top);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| gamma[b].partial_cmp(&gamma[a]).unwrap());
    ReliabilityProfile { gamma, order }
}

/// Per-row ascending sort of Π with prefix sums, kept with the permutation
/// so sampled subinterval indices map back to symbol labels.
#[derive(Debug, Clone)]
pub struct SamplingTables {
    q: usize,
    ac: Vec<f64>,
    perm: Vec<u16>,
}

impl SamplingTables {
    pub fn n_rows(&self) -> usize {
        self.ac.len() / self.q
    }

    pub fn ac_row(&self, i: usize) -> &[f64] {
        &self.ac[i * self.q..(i + 1) * self.q]
    }

    pub fn perm_row(&self, i: usize) -> &[u16] {
        &self.perm[i * self.q..(i + 1) * self.q]
    }
}

pub fn build_sampling_tables(pi: &AppMatrix) -> SamplingTables {
    let (n, q) = (pi.n_rows(), pi.n_cols());
    let mut ac = vec![0.0; n * q];
    let mut perm = vec![0u16; n * q];
    let mut idx: Vec<u16> = (0..q as u16).collect();
    for i in 0..n {
        let row = pi.row(i);
        idx.sort_by(|&a, &b| row[a as usize].partial_cmp(&row[b as usize]).unwrap());
        let mut cum = 0.0;
        for (j, &orig) in idx.iter().enumerate() {
            cum += row[orig as usize];
            ac[i * q + j] = cum;
            perm[i * q + j] = orig;
        }
        debug_assert!((ac[i * q + q - 1] - 1.0).abs() < 1e-9);
        idx.sort_unstable();
    }
    SamplingTables { q, ac, perm }
}

/// Core sampler: frozen positions emit the hard block; the rest draw
/// α ∈ (0,1) and take the first accumulated subinterval covering it, so each
/// unfrozen block follows its Π row exactly.
fn sample_blocks<R: Rng>(
    tables: &SamplingTables,
    frozen: &[bool],
    hard_blocks: &[u16],
    rng: &mut R,
    out: &mut [u16],
) {
    let q = tables.q;
    for i in 0..hard_blocks.len() {
        if frozen[i] {
            out[i] = hard_blocks[i];
            continue;
        }
        let alpha = 1.0 - rng.random::<f64>(); // (0, 1]
        let row = tables.ac_row(i);
        let j = row.partition_point(|&v| v < alpha).min(q - 1);
        out[i] = tables.perm_row(i)[j];
    }
}

/// One random test vector: block i is saturated to `hard_blocks[i]` when
/// γ_i < θ, otherwise drawn from its posterior row.
pub fn sample_test_vector<R: Rng>(
    tables: &SamplingTables,
    profile: &ReliabilityProfile,
    theta: f64,
    hard_blocks: &[u16],
    rng: &mut R,
) -> TestVector {
    let frozen: Vec<bool> = profile.gamma.iter().map(|&g| g < theta).collect();
    let mut out = vec![0u16; hard_blocks.len()];
    sample_blocks(tables, &frozen, hard_blocks, rng, &mut out);
    out
}

// ====================================================================
// soft weight and LLR utilities
// ====================================================================

/// W = Σ_i |p_i − 0.5| over the bit positions where `candidate` disagrees
/// with the hard decision.
pub fn soft_weight(candidate_bits: &[u16], hard_bits: &[u16], p: &[f64]) -> f64 {
    debug_assert_eq!(candidate_bits.len(), hard_bits.len());
    debug_assert_eq!(candidate_bits.len(), p.len());
    let mut w = 0.0;
    for i in 0..p.len() {
        if candidate_bits[i] != hard_bits[i] {
            w += (p[i] - 0.5).abs();
        }
    }
    w
}

/// Noise-dependent scaling: every LLR multiplied by β.
pub fn nds_scale(llrs: &[f64], beta: f64) -> Vec<f64> {
    llrs.iter().map(|&r| r * beta).collect()
}

// ====================================================================
// unified soft input
// ====================================================================

/// Channel soft information reduced to the one shape every decoder consumes:
/// a posterior matrix over sampling blocks plus bitwise reliabilities over
/// the code bits. Blocks may be modulation symbols (possibly zero-padded at
/// the tail), code symbols, or single bits.
#[derive(Debug, Clone)]
pub struct SoftInput {
    /// Bits per sampling block.
    pub block_bits: usize,
    /// Bits per code symbol.
    pub code_bits: usize,
    /// Total code bits n·code_bits (padding excluded).
    pub n_code_bits: usize,
    /// Posterior block distributions, n_blocks × 2^block_bits.
    pub pi: AppMatrix,
    /// Hard decision per block (from the bit LLR signs).
    pub hard_blocks: Vec<u16>,
    /// Hard decision per code bit.
    pub hard_bits: Vec<u16>,
    /// Hard decision packed to code symbols.
    pub hard_code: Vec<u16>,
    /// Pr{bit = 1} per code bit (after β scaling).
    pub p: Vec<f64>,
    /// Bit reliabilities |p − 0.5|.
    pub wbit: Vec<f64>,
    /// β-scaled bit LLRs per code bit.
    pub llr: Vec<f64>,
}

impl SoftInput {
    /// Converts a block vector to code symbols: unpack block bits MSB first,
    /// drop tail padding, repack per code symbol.
    pub fn blocks_to_code(&self, blocks: &[u16], out: &mut Vec<u16>) {
        out.clear();
        if self.block_bits == self.code_bits {
            out.extend_from_slice(blocks);
            return;
        }
        let mut acc = 0u16;
        let mut nacc = 0;
        let mut produced = 0usize;
        'outer: for &blk in blocks {
            for j in (0..self.block_bits).rev() {
                acc = (acc << 1) | ((blk >> j) & 1);
                nacc += 1;
                produced += 1;
                if nacc == self.code_bits {
                    out.push(acc);
                    acc = 0;
                    nacc = 0;
                }
                if produced == self.n_code_bits {
                    break 'outer;
                }
            }
        }
        debug_assert_eq!(out.len() * self.code_bits, self.n_code_bits);
    }

    /// Soft weight of a code-domain candidate against the hard decision,
    /// walking only the symbols (and within them, bits) that disagree.
    pub fn code_weight(&self, candidate: &[u16]) -> f64 {
        let mc = self.code_bits;
        let mut w = 0.0;
        for (i, (&a, &b)) in candidate.iter().zip(self.hard_code.iter()).enumerate() {
            let mut x = a ^ b;
            while x != 0 {
                let j = x.trailing_zeros() as usize;
                x &= x - 1;
                w += self.wbit[i * mc + (mc - 1 - j)];
            }
        }
        w
    }
}

/// Builds soft input from complex channel outputs: Π rows straight from the
/// channel likelihoods; bit LLRs from the same exponents, scaled by β, then
/// converted to probabilities. Handles tail zero-padding when the code bits
/// do not fill the final modulation symbol.
pub fn soft_from_channel(
    spec: &CodeSpec,
    cs: &ConstellationSpec,
    ys: &[Complex64],
    csi: Option<&[Complex64]>,
    sigma2: f64,
    beta: f64,
) -> SoftInput {
    let n_code_bits = spec.codeword_bits();
    let mb = cs.m;
    let n_blocks = n_code_bits.div_ceil(mb);
    assert_eq!(ys.len(), n_blocks, "received length must cover the codeword bits");
    if let Some(hs) = csi {
        assert_eq!(hs.len(), n_blocks);
    }
    let one = Complex64::new(1.0, 0.0);

    let mut pi = AppMatrix::zeros(n_blocks, cs.order);
    let mut llr_pad = vec![0.0; n_blocks * mb];
    let mut exponents = vec![0.0; cs.order];
    for (i, &y) in ys.iter().enumerate() {
        let h = csi.map_or(one, |hs| hs[i]);
        let row = pi.row_mut(i);
        exponent_row(cs, y, h, sigma2, &mut exponents);
        let sum = exps_from_row(&exponents, row);
        bit_llrs_from_exps(cs, &exponents, row, &mut llr_pad[i * mb..(i + 1) * mb]);
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    for v in llr_pad.iter_mut() {
        *v *= beta;
    }

    let hard_pad: Vec<u16> = llr_pad.iter().map(|&r| u16::from(r < 0.0)).collect();
    let hard_blocks = pack_bits_msb(&hard_pad, mb);
    let llr = llr_pad[..n_code_bits].to_vec();
    let hard_bits = hard_pad[..n_code_bits].to_vec();
    finish_soft_input(spec, pi, mb, hard_blocks, hard_bits, llr)
}

/// Builds soft input from per-bit LLRs (BPSK transmission): probabilities
/// from β-scaled LLRs, Π rows as per-block probability products.
pub fn soft_from_bit_llrs(
    spec: &CodeSpec,
    bit_llrs: &[f64],
    beta: f64,
    block_bits: usize,
) -> SoftInput {
    let n_code_bits = spec.codeword_bits();
    assert_eq!(bit_llrs.len(), n_code_bits);
    assert_eq!(n_code_bits % block_bits, 0);
    let llr = nds_scale(bit_llrs, beta);
    let p: Vec<f64> = llr.iter().map(|&r| llr_to_prob(r)).collect();
    let pi = crate::modem::bitwise_to_symbol_app(&p, block_bits);
    let hard_bits: Vec<u16> = llr.iter().map(|&r| u16::from(r < 0.0)).collect();
    let hard_blocks = pack_bits_msb(&hard_bits, block_bits);
    finish_soft_input(spec, pi, block_bits, hard_blocks, hard_bits, llr)
}

fn finish_soft_input(
    spec: &CodeSpec,
    pi: AppMatrix,
    block_bits: usize,
    hard_blocks: Vec<u16>,
    hard_bits: Vec<u16>,
    llr: Vec<f64>,
) -> SoftInput {
    let code_bits = spec.bits_per_symbol();
    let p: Vec<f64> = llr.iter().map(|&r| llr_to_prob(r)).collect();
    let wbit: Vec<f64> = p.iter().map(|&v| (v - 0.5).abs()).collect();
    let hard_code = pack_bits_msb(&hard_bits, code_bits);
    debug_assert_eq!(hard_code.len(), spec.n);
    SoftInput {
        block_bits,
        code_bits,
        n_code_bits: spec.codeword_bits(),
        pi,
        hard_blocks,
        hard_bits,
        hard_code,
        p,
        wbit,
        llr,
    }
}

// ====================================================================
// the stochastic Chase loop
// ====================================================================

/// Shared driver for the three stochastic variants. Runs exactly τ sampling
/// iterations (iteration 0 may be the hard vector); duplicates skip the HDD
/// call but still consume their iteration; minimum soft weight wins with
/// earliest-collected tie-breaking. `freeze_theta` is the effective
/// γ-threshold (equal to cfg.theta except for the bitwise freeze rule).
pub(crate) fn chase_with<R: Rng>(
    spec: &CodeSpec,
    f: &FieldTables,
    bm: &mut BmDecoder,
    input: &SoftInput,
    cfg: &ChaseConfig,
    freeze_theta: f64,
    rng: &mut R,
) -> Result<DecodeResult, ChaseError> {
    cfg.validate()?;
    if input.hard_code.len() != spec.n {
        return Err(ChaseError::LengthMismatch { expected: spec.n, got: input.hard_code.len() });
    }

    let tables = build_sampling_tables(&input.pi);
    let profile = reliability_factors(&input.pi);
    let frozen: Vec<bool> = profile.gamma.iter().map(|&g| g < freeze_theta).collect();

    let mut pool = UniquePool::with_capacity(cfg.tau.min(4096));
    let mut tv_blocks = vec![0u16; input.hard_blocks.len()];
    let mut code_word: Vec<u16> = Vec::with_capacity(spec.n);
    let mut decided = input.hard_code.clone();
    let mut best_w = f64::INFINITY;
    let mut status = ChaseStatus::AllHddFailed;
    let mut candidates: Option<Vec<(Vec<u16>, f64)>> = cfg.soft_output.then(Vec::new);
    let mut submitted: Option<Vec<Vec<u16>>> = cfg.trace_submitted.then(Vec::new);

    // The attempt guard exists for pathological retry policies; with
    // duplicates consuming their iteration it can never bind.
    let max_attempts = cfg.tau.saturating_mul(10);
    let mut iterations = 0usize;
    let mut attempts = 0usize;
    while iterations < cfg.tau && attempts < max_attempts {
        attempts += 1;
        if iterations == 0 && cfg.include_hard_vector {
            tv_blocks.copy_from_slice(&input.hard_blocks);
        } else {
            sample_blocks(&tables, &frozen, &input.hard_blocks, rng, &mut tv_blocks);
        }
        iterations += 1;
        input.blocks_to_code(&tv_blocks, &mut code_word);
        let fresh = pool.insert_if_new(&code_word);
        if cfg.dedup && !fresh {
            continue;
        }
        if let Some(log) = submitted.as_mut() {
            log.push(code_word.clone());
        }
        if bm.decode_in_place(f, &mut code_word).status == HddStatus::Failure {
            continue;
        }
        let w = input.code_weight(&code_word);
        if let Some(c) = candidates.as_mut() {
            c.push((unpack_bits_msb(&code_word, input.code_bits), w));
        }
        if w < best_w {
            best_w = w;
            decided.clear();
            decided.extend_from_slice(&code_word);
            status = ChaseStatus::ChaseSuccess;
            if cfg.early_exit && w == 0.0 {
                break;
            }
        }
    }

    let soft = match (&candidates, status) {
        (Some(cands), ChaseStatus::ChaseSuccess) if !cands.is_empty() => {
            let decided_bits = unpack_bits_msb(&decided, input.code_bits);
            let sat = cfg.soft_saturation.unwrap_or_else(|| {
                2.0 * input.llr.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
            });
            Some(soft_output(cands, &decided_bits, best_w, sat))
        }
        _ => None,
    };

    Ok(DecodeResult {
        decided,
        weight: best_w,
        status,
        iterations_used: iterations,
        unique_vectors: pool.len(),
        soft_output: soft,
        candidates,
        submitted,
    })
}

/// Symbolic stochastic Chase over complex channel outputs: Π per received
/// block from the channel likelihoods, then τ sampled test vectors through
/// BM-HDD, minimum soft weight wins.
pub fn s_sca_decode<R: Rng>(
    spec: &CodeSpec,
    cs: &ConstellationSpec,
    ys: &[Complex64],
    csi: Option<&[Complex64]>,
    sigma2: f64,
    cfg: &ChaseConfig,
    rng: &mut R,
) -> Result<DecodeResult, ChaseError> {
    let f = spec.tables();
    let mut bm = BmDecoder::new(spec);
    let input = soft_from_channel(spec, cs, ys, csi, sigma2, cfg.beta);
    chase_with(spec, &f, &mut bm, &input, cfg, cfg.theta, rng)
}

/// Symbol-domain stochastic Chase from bitwise (BPSK) soft information: Π
/// rows are per-code-symbol products of the bit probabilities, reducing the
/// sampled positions by the symbol width.
pub fn ssbt_sca_decode<R: Rng>(
    spec: &CodeSpec,
    bit_llrs: &[f64],
    cfg: &ChaseConfig,
    rng: &mut R,
) -> Result<DecodeResult, ChaseError> {
    let f = spec.tables();
    let mut bm = BmDecoder::new(spec);
    let input = soft_from_bit_llrs(spec, bit_llrs, cfg.beta, spec.bits_per_symbol());
    chase_with(spec, &f, &mut bm, &input, cfg, cfg.theta, rng)
}

/// Bitwise stochastic Chase: every bit is its own sampling block, frozen
/// when |p − 0.5| > 0.5 − θ/2.
pub fn b_sca_decode<R: Rng>(
    spec: &CodeSpec,
    bit_llrs: &[f64],
    cfg: &ChaseConfig,
    rng: &mut R,
) -> Result<DecodeResult, ChaseError> {
    let f = spec.tables();
    let mut bm = BmDecoder::new(spec);
    let input = soft_from_bit_llrs(spec, bit_llrs, cfg.beta, 1);
    chase_with(spec, &f, &mut bm, &input, cfg, bit_freeze_theta(cfg.theta), rng)
}

/// The bitwise freeze rule |p − 0.5| > 0.5 − θ/2 expressed as a γ-threshold:
/// with M = max(p, 1−p) the rule reads M > 1 − θ/2, and γ = (1−M)/M is
/// decreasing in M, so it is exactly γ < θ/(2−θ).
pub(crate) fn bit_freeze_theta(theta: f64) -> f64 {
    theta / (2.0 - theta)
}

// ====================================================================
// deterministic Chase (enumeration)
// ====================================================================

/// Deterministic Chase over a prepared soft input: enumerates every
/// assignment of the λ least reliable blocks (others fixed to the hard
/// decision), BM-HDD on each, minimum soft weight wins.
pub fn s_ca_decode(
    spec: &CodeSpec,
    input: &SoftInput,
    lambda: usize,
) -> Result<DecodeResult, ChaseError> {
    let f = spec.tables();
    let mut bm = BmDecoder::new(spec);
    s_ca_with(spec, &f, &mut bm, input, lambda)
}

pub(crate) fn s_ca_with(
    spec: &CodeSpec,
    f: &FieldTables,
    bm: &mut BmDecoder,
    input: &SoftInput,
    lambda: usize,
) -> Result<DecodeResult, ChaseError> {
    s_ca_core(spec, f, bm, input, lambda, false)
}

fn s_ca_core(
    spec: &CodeSpec,
    f: &FieldTables,
    bm: &mut BmDecoder,
    input: &SoftInput,
    lambda: usize,
    reversed: bool,
) -> Result<DecodeResult, ChaseError> {
    let n_blocks = input.hard_blocks.len();
    if lambda > n_blocks {
        return Err(ChaseError::LengthMismatch { expected: n_blocks, got: lambda });
    }
    let b = input.pi.n_cols() as u64;
    let log2_vectors = lambda as f64 * (b as f64).log2();
    if log2_vectors > SCA_BUDGET_CAP_BITS {
        return Err(ChaseError::BudgetExceeded { log2_vectors });
    }
    let total = b.pow(lambda as u32);

    let profile = reliability_factors(&input.pi);
    let chosen = &profile.order[..lambda];

    let mut pool = UniquePool::with_capacity((total as usize).min(4096));
    let mut tv_blocks = input.hard_blocks.clone();
    let mut code_word: Vec<u16> = Vec::with_capacity(spec.n);
    let mut decided = input.hard_code.clone();
    let mut best_w = f64::INFINITY;
    let mut status = ChaseStatus::AllHddFailed;

    let indices: Box<dyn Iterator<Item = u64>> =
        if reversed { Box::new((0..total).rev()) } else { Box::new(0..total) };
    for idx in indices {
        let mut rest = idx;
        for &pos in chosen {
            tv_blocks[pos] = (rest % b) as u16;
            rest /= b;
        }
        input.blocks_to_code(&tv_blocks, &mut code_word);
        pool.insert_if_new(&code_word);
        if bm.decode_in_place(f, &mut code_word).status == HddStatus::Failure {
            continue;
        }
        let w = input.code_weight(&code_word);
        if w < best_w {
            best_w = w;
            decided.clear();
            decided.extend_from_slice(&code_word);
            status = ChaseStatus::ChaseSuccess;
        }
    }

    Ok(DecodeResult {
        decided,
        weight: best_w,
        status,
        iterations_used: total as usize,
        unique_vectors: pool.len(),
        soft_output: None,
        candidates: None,
        submitted: None,
    })
}

// ====================================================================
// brute-force ML oracle
// ====================================================================

/// Exhaustive maximum-likelihood decoder for tiny codes: the full codebook
/// is encoded and modulated once, then every decode is an argmin of
/// Σ‖Y_i − h_i·s_i‖² (equivalently argmax likelihood) over all codewords.
pub struct MlOracle {
    words: Vec<Vec<u16>>,
    modulated: Vec<Vec<Complex64>>,
}

impl MlOracle {
    pub fn new(spec: &CodeSpec, cs: &ConstellationSpec) -> Result<Self, ChaseError> {
        let alphabet = spec.alphabet() as u128;
        let log2_words = spec.k as f64 * (alphabet as f64).log2();
        if log2_words > (ML_CODEBOOK_CAP as f64).log2() {
            return Err(ChaseError::CodebookTooLarge { log2_words });
        }
        let total = alphabet.pow(spec.k as u32) as u64;
        let f = spec.tables();
        let mb = cs.m;
        let padded = spec.codeword_bits().div_ceil(mb) * mb;
        let mut words = Vec::with_capacity(total as usize);
        let mut modulated = Vec::with_capacity(total as usize);
        let mut msg = vec![0u16; spec.k];
        for widx in 0..total {
            let mut rest = widx;
            for d in msg.iter_mut() {
                *d = (rest % alphabet as u64) as u16;
                rest /= alphabet as u64;
            }
            let cw = crate::codecs::encode(spec, &f, &msg);
            let mut bits = unpack_bits_msb(&cw, spec.bits_per_symbol());
            bits.resize(padded, 0);
            modulated.push(crate::modem::modulate(cs, &bits));
            words.push(cw);
        }
        Ok(MlOracle { words, modulated })
    }

    pub fn codebook_len(&self) -> usize {
        self.words.len()
    }

    /// Returns the most likely codeword for the received sequence.
    pub fn decode(&self, ys: &[Complex64], csi: Option<&[Complex64]>) -> &[u16] {
        let one = Complex64::new(1.0, 0.0);
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (w, tx) in self.modulated.iter().enumerate() {
            debug_assert_eq!(tx.len(), ys.len());
            let mut d = 0.0;
            for (i, (&y, &s)) in ys.iter().zip(tx.iter()).enumerate() {
                let h = csi.map_or(one, |hs| hs[i]);
                d += (y - h * s).norm_sqr();
            }
            if d < best_d {
                best_d = d;
                best = w;
            }
        }
        &self.words[best]
    }
}

/// One-shot convenience wrapper around [`MlOracle`].
pub fn ml_oracle_decode(
    spec: &CodeSpec,
    cs: &ConstellationSpec,
    ys: &[Complex64],
    csi: Option<&[Complex64]>,
) -> Result<Vec<u16>, ChaseError> {
    Ok(MlOracle::new(spec, cs)?.decode(ys, csi).to_vec())
}

// ====================================================================
// soft output
// ====================================================================

/// Pyndiah-style competitor-difference soft output. For each bit the
/// magnitude is W(best competitor disagreeing there) − W(decided), or
/// `saturation` when no competitor disagrees; the sign is positive for a
/// decided 0 (the "positive favors 0" convention).
pub fn soft_output(
    candidates: &[(Vec<u16>, f64)],
    decided_bits: &[u16],
    decided_weight: f64,
    saturation: f64,
) -> Vec<f64> {
    let nbits = decided_bits.len();
    let mut out = Vec::with_capacity(nbits);
    for b in 0..nbits {
        let mut competitor = f64::INFINITY;
        for (bits, w) in candidates {
            if bits[b] != decided_bits[b] && *w < competitor {
                competitor = *w;
            }
        }
        let mag = if competitor.is_finite() { competitor - decided_weight } else { saturation };
        out.push(if decided_bits[b] == 0 { mag } else { -mag });
    }
    out
}

// ====================================================================
// tests
// ====================================================================
