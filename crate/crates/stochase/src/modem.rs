//! Constellations, Gray labeling, and soft demapping.
//!
//! Supported schemes: BPSK (real axis), M-PSK and rectangular M-QAM for
//! power-of-two orders, all normalized to unit average symbol energy and
//! Gray-labeled (reflected Gray for PSK, per-axis reflected Gray for QAM).
//! Bit groups are MSB first throughout.
//!
//! Noise is parameterized by the per-real-dimension variance σ²; the
//! demapper exponents use ‖Y − h·s‖²/(2σ²), the true Gaussian
//! log-likelihood, so the BPSK bit LLR reduces exactly to 2y/σ².

use num_complex::Complex64;
use std::fmt;

/// LLR magnitudes are clamped here before exponentiation.
pub const LLR_CLAMP: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Bpsk,
    Psk,
    Qam,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Bpsk => write!(f, "bpsk"),
            Scheme::Psk => write!(f, "psk"),
            Scheme::Qam => write!(f, "qam"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModemError {
    /// Order must be a power of two in the supported range for the scheme.
    UnsupportedOrder { scheme: Scheme, order: usize },
}

impl fmt::Display for ModemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModemError::UnsupportedOrder { scheme, order } => {
                write!(f, "unsupported {scheme} order {order}")
            }
        }
    }
}

impl std::error::Error for ModemError {}

/// Binary-reflected Gray code.
pub fn gray(p: u16) -> u16 {
    p ^ (p >> 1)
}

/// Inverse of [`gray`].
pub fn gray_inverse(g: u16) -> u16 {
    let mut v = g;
    let mut shift = 1;
    while (g >> shift) != 0 {
        v ^= g >> shift;
        shift += 1;
    }
    v
}

/// A fixed constellation: `points[label]` is the complex point whose Gray
/// label is `label`.
#[derive(Debug, Clone)]
pub struct ConstellationSpec {
    pub scheme: Scheme,
    pub order: usize,
    /// Bits per symbol, log2(order).
    pub m: usize,
    pub points: Vec<Complex64>,
    /// True when the constellation lives on the real axis (BPSK).
    pub real_only: bool,
}

impl ConstellationSpec {
    pub fn new(scheme: Scheme, order: usize) -> Result<Self, ModemError> {
        let err = ModemError::UnsupportedOrder { scheme, order };
        if !order.is_power_of_two() {
            return Err(err);
        }
        let m = order.trailing_zeros() as usize;
        let points = match scheme {
            Scheme::Bpsk => {
                if order != 2 {
                    return Err(err);
                }
                vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]
            }
            Scheme::Psk => {
                if !(4..=4096).contains(&order) {
                    return Err(err);
                }
                let mut pts = vec![Complex64::new(0.0, 0.0); order];
                for p in 0..order {
                    let theta = std::f64::consts::TAU * p as f64 / order as f64;
                    pts[gray(p as u16) as usize] = Complex64::from_polar(1.0, theta);
                }
                pts
            }
            Scheme::Qam => {
                if !(4..=4096).contains(&order) {
                    return Err(err);
                }
                // Rectangular grid: the ceil(m/2) high label bits Gray-index
                // the I axis, the rest the Q axis.
                let mi = (m + 1) / 2;
                let mq = m - mi;
                let li = 1usize << mi;
                let lq = 1usize << mq;
                let scale =
                    (3.0 / ((li * li - 1) as f64 + (lq * lq - 1) as f64)).sqrt();
                let mut pts = vec![Complex64::new(0.0, 0.0); order];
                for ii in 0..li {
                    for iq in 0..lq {
                        let label =
                            ((gray(ii as u16) as usize) << mq) | gray(iq as u16) as usize;
                        let re = (2 * ii) as f64 - (li - 1) as f64;
                        let im = (2 * iq) as f64 - (lq - 1) as f64;
                        pts[label] = Complex64::new(re * scale, im * scale);
                    }
                }
                pts
            }
        };
        Ok(ConstellationSpec {
            scheme,
            order,
            m,
            points,
            real_only: scheme == Scheme::Bpsk,
        })
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.m
    }

    /// Nearest-point label: argmin over labels of ‖y − h·s‖².
    pub fn nearest(&self, y: Complex64, h: Complex64) -> u16 {
        let mut best = 0u16;
        let mut best_d = f64::INFINITY;
        for (s, &pt) in self.points.iter().enumerate() {
            let d = (y - h * pt).norm_sqr();
            if d < best_d {
                best_d = d;
                best = s as u16;
            }
        }
        best
    }
}

/// Row-major n×q matrix of per-symbol posterior distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct AppMatrix {
    q: usize,
    data: Vec<f64>,
}

impl AppMatrix {
    pub fn zeros(n: usize, q: usize) -> Self {
        AppMatrix { q, data: vec![0.0; n * q] }
    }

    pub fn n_rows(&self) -> usize {
        self.data.len() / self.q
    }

    pub fn n_cols(&self) -> usize {
        self.q
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.q..(i + 1) * self.q]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.q..(i + 1) * self.q]
    }
}

// ====================================================================
// modulation and hard decisions
// ====================================================================

/// Packs bits (MSB first) into m-bit labels. Bit count must divide evenly.
pub fn pack_bits_msb(bits: &[u16], m: usize) -> Vec<u16> {
    assert_eq!(bits.len() % m, 0, "bit count must be divisible by {m}");
    bits.chunks(m)
        .map(|chunk| chunk.iter().fold(0u16, |acc, &b| (acc << 1) | (b & 1)))
        .collect()
}

/// Inverse of [`pack_bits_msb`].
pub fn unpack_bits_msb(labels: &[u16], m: usize) -> Vec<u16> {
    let mut bits = Vec::with_capacity(labels.len() * m);
    for &s in labels {
        for j in (0..m).rev() {
            bits.push((s >> j) & 1);
        }
    }
    bits
}

/// Maps bits (MSB first per symbol) onto constellation points.
pub fn modulate(spec: &ConstellationSpec, bits: &[u16]) -> Vec<Complex64> {
    pack_bits_msb(bits, spec.m)
        .into_iter()
        .map(|s| spec.points[s as usize])
        .collect()
}

/// Pr{bit = 1 | y} for BPSK (0 → +1, 1 → −1) in noise of variance σ².
pub fn bpsk_bit_prob(y: f64, sigma2: f64) -> f64 {
    1.0 / (1.0 + (2.0 * y / sigma2).exp())
}

/// Pr{bit = 1} from an LLR with sign convention "positive favors 0".
/// The LLR is clamped to ±[`LLR_CLAMP`] so the result is never exactly 0 or 1.
pub fn llr_to_prob(llr: f64) -> f64 {
    1.0 / (1.0 + llr.clamp(-LLR_CLAMP, LLR_CLAMP).exp())
}

/// Bitwise hard decision: 1 where the LLR is negative.
pub fn hard_decision(llrs: &[f64]) -> Vec<u16> {
    llrs.iter().map(|&r| u16::from(r < 0.0)).collect()
}

// ====================================================================
// soft demapping
// ====================================================================

/// Fills `out[j] = −‖y − h·s_j‖²/(2σ²)`: the per-label log-likelihood up to
/// a common constant (which cancels in every consumer).
pub(crate) fn exponent_row(
    spec: &ConstellationSpec,
    y: Complex64,
    h: Complex64,
    sigma2: f64,
    out: &mut [f64],
) {
    debug_assert_eq!(out.len(), spec.order);
    let inv = 1.0 / (2.0 * sigma2);
    for (o, &pt) in out.iter_mut().zip(spec.points.iter()) {
        *o = -(y - h * pt).norm_sqr() * inv;
    }
}

/// log Σ exp with max subtraction over a masked subset.
fn log_sum_exp_where(row: &[f64], mut keep: impl FnMut(usize) -> bool) -> f64 {
    let mut mx = f64::NEG_INFINITY;
    for (j, &v) in row.iter().enumerate() {
        if keep(j) && v > mx {
            mx = v;
        }
    }
    let mut sum = 0.0;
    for (j, &v) in row.iter().enumerate() {
        if keep(j) {
            sum += (v - mx).exp();
        }
    }
    mx + sum.ln()
}

/// Turns an exponent row into unnormalized likelihoods exp(v − max) in
/// place, returning their sum (for normalization into probabilities).
pub(crate) fn exps_from_row(row: &[f64], exps: &mut [f64]) -> f64 {
    let mx = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (e, &v) in exps.iter_mut().zip(row) {
        *e = (v - mx).exp();
        sum += *e;
    }
    sum
}

/// Per-bit LLRs from one exponential pass: subset sums over precomputed
/// likelihoods, with a per-subset stabilized fallback when a whole subset
/// underflows against the row maximum.
pub(crate) fn bit_llrs_from_exps(
    spec: &ConstellationSpec,
    row: &[f64],
    exps: &[f64],
    out: &mut [f64],
) {
    debug_assert_eq!(out.len(), spec.m);
    const UNDERFLOW: f64 = 1e-300;
    for b in 0..spec.m {
        let mask = 1usize << (spec.m - 1 - b);
        let (mut s0, mut s1) = (0.0, 0.0);
        for (j, &e) in exps.iter().enumerate() {
            if j & mask == 0 {
                s0 += e;
            } else {
                s1 += e;
            }
        }
        out[b] = if s0 > UNDERFLOW && s1 > UNDERFLOW {
            s0.ln() - s1.ln()
        } else {
            log_sum_exp_where(row, |j| j & mask == 0)
                - log_sum_exp_where(row, |j| j & mask != 0)
        };
    }
}

pub(crate) fn bit_llrs_from_row(spec: &ConstellationSpec, row: &[f64], out: &mut [f64]) {
    let mut exps = vec![0.0; row.len()];
    exps_from_row(row, &mut exps);
    bit_llrs_from_exps(spec, row, &exps, out);
}

/// Per-bit LLRs (MSB first, positive favors 0) for one received symbol:
/// L(b) = log Σ_{s: bit b = 0} exp(−‖Y−h·s‖²/(2σ²)) − log Σ_{s: bit b = 1} (…),
/// computed stably in the log domain. For BPSK this is exactly 2y/σ².
pub fn qary_bit_llr(
    spec: &ConstellationSpec,
    y: Complex64,
    h: Complex64,
    sigma2: f64,
) -> Vec<f64> {
    let mut row = vec![0.0; spec.order];
    exponent_row(spec, y, h, sigma2, &mut row);
    let mut out = vec![0.0; spec.m];
    bit_llrs_from_row(spec, &row, &mut out);
    out
}

pub(crate) fn normalize_row_from_exponents(row: &mut [f64]) {
    let mx = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in row.iter_mut() {
        *v = (*v - mx).exp();
        sum += *v;
    }
    for v in row.iter_mut() {
        *v /= sum;
    }
}

/// Posterior symbol distributions π_{ij} = Pr{c_i = s_j | Y_i}, one row per
/// received symbol. `csi` carries the fading coefficients (None for AWGN).
pub fn symbol_app(
    spec: &ConstellationSpec,
    ys: &[Complex64],
    csi: Option<&[Complex64]>,
    sigma2: f64,
) -> AppMatrix {
    let one = Complex64::new(1.0, 0.0);
    let mut pi = AppMatrix::zeros(ys.len(), spec.order);
    for (i, &y) in ys.iter().enumerate() {
        let h = csi.map_or(one, |hs| hs[i]);
        let row = pi.row_mut(i);
        exponent_row(spec, y, h, sigma2, row);
        normalize_row_from_exponents(row);
    }
    pi
}

/// Builds symbol posteriors from independent per-bit probabilities
/// (`p[i]` = Pr{bit i = 1}, MSB first within each m-bit group):
/// π_{i,j} = Π over the bits of label j of (p or 1−p).
pub fn bitwise_to_symbol_app(p: &[f64], m: usize) -> AppMatrix {
    assert_eq!(p.len() % m, 0, "bit count must be divisible by {m}");
    let q = 1usize << m;
    let n = p.len() / m;
    let mut pi = AppMatrix::zeros(n, q);
    let mut scratch = vec![0.0; q];
    for i in 0..n {
        // Iterative doubling, MSB first: after processing bit b the partial
        // products are indexed by the top b+1 label bits.
        let row = pi.row_mut(i);
        row[0] = 1.0;
        let mut len = 1;
        for &pb in &p[i * m..(i + 1) * m] {
            scratch[..len].copy_from_slice(&row[..len]);
            for j in 0..len {
                row[2 * j] = scratch[j] * (1.0 - pb);
                row[2 * j + 1] = scratch[j] * pb;
            }
            len *= 2;
        }
    }
    pi
}

// ====================================================================
// tests
// ====================================================================
