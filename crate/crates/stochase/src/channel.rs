//! AWGN and flat Rayleigh fading channels with Eb/N0 bookkeeping.
//!
//! Convention: unit average symbol energy, σ² = N₀/2 per real dimension,
//! and Eb counts information bits only, so
//! N₀ = 1 / (rate · bits_per_symbol · 10^{Eb/N0 [dB] / 10}).
//!
//! Fading is i.i.d. per symbol by default (interleaved fast-fading
//! assumption); a block length can be supplied to hold each coefficient for
//! several consecutive symbols. The receiver is handed the exact fading
//! sequence (perfect CSI).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Awgn,
    Rayleigh,
}

/// Derived noise parameters for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub kind: ChannelKind,
    pub ebno_db: f64,
    /// Per-real-dimension noise variance.
    pub sigma2: f64,
    pub rate: f64,
    pub bits_per_symbol: usize,
}

impl ChannelParams {
    pub fn new(kind: ChannelKind, ebno_db: f64, rate: f64, bits_per_symbol: usize) -> Self {
        ChannelParams {
            kind,
            ebno_db,
            sigma2: sigma2_from_ebno(ebno_db, rate, bits_per_symbol),
            rate,
            bits_per_symbol,
        }
    }
}

/// Per-symbol complex fading coefficients handed to the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingRealization {
    pub h: Vec<Complex64>,
}

/// σ² (per real dimension) for unit symbol energy.
pub fn sigma2_from_ebno(ebno_db: f64, rate: f64, bits_per_symbol: usize) -> f64 {
    assert!(rate > 0.0 && rate <= 1.0, "rate must be in (0, 1]");
    assert!(bits_per_symbol >= 1);
    let n0 = 1.0 / (rate * bits_per_symbol as f64 * 10f64.powf(ebno_db / 10.0));
    n0 / 2.0
}

/// Adds white Gaussian noise of variance σ² per real dimension. With
/// `real_only` (BPSK) the imaginary part is left untouched.
pub fn awgn<R: Rng>(symbols: &[Complex64], sigma2: f64, real_only: bool, rng: &mut R) -> Vec<Complex64> {
    let sd = sigma2.sqrt();
    symbols
        .iter()
        .map(|&s| {
            let zr: f64 = rng.sample(StandardNormal);
            let zi: f64 = if real_only { 0.0 } else { rng.sample(StandardNormal) };
            Complex64::new(s.re + sd * zr, s.im + sd * zi)
        })
        .collect()
}

/// Flat Rayleigh fading: y[n] = h[n]·x[n] + z[n] with h complex circular
/// Gaussian, E|h|² = 1, held constant over `block_len` consecutive symbols
/// (1 = i.i.d.), plus complex AWGN of variance σ² per dimension.
pub fn rayleigh_block<R: Rng>(
    symbols: &[Complex64],
    sigma2: f64,
    block_len: usize,
    rng: &mut R,
) -> (Vec<Complex64>, FadingRealization) {
    assert!(block_len >= 1);
    let sd = sigma2.sqrt();
    let comp_sd = (0.5f64).sqrt(); // per-component variance 1/2 → E|h|² = 1
    let mut h = Vec::with_capacity(symbols.len());
    let mut cur = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(symbols.len());
    for (n, &s) in symbols.iter().enumerate() {
        if n % block_len == 0 {
            let hr: f64 = rng.sample(StandardNormal);
            let hi: f64 = rng.sample(StandardNormal);
            cur = Complex64::new(comp_sd * hr, comp_sd * hi);
        }
        h.push(cur);
        let zr: f64 = rng.sample(StandardNormal);
        let zi: f64 = rng.sample(StandardNormal);
        out.push(cur * s + Complex64::new(sd * zr, sd * zi));
    }
    (out, FadingRealization { h })
}

/// [`rayleigh_block`] with independent fading per symbol.
pub fn rayleigh<R: Rng>(
    symbols: &[Complex64],
    sigma2: f64,
    rng: &mut R,
) -> (Vec<Complex64>, FadingRealization) {
    rayleigh_block(symbols, sigma2, 1, rng)
}

// ====================================================================
// tests
// ====================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modem::{modulate, ConstellationSpec, Scheme};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sigma2_examples() {
        assert_eq!(sigma2_from_ebno(0.0, 1.0, 1), 0.5);
        assert!((sigma2_from_ebno(3.0103, 1.0, 1) - 0.25).abs() < 1e-5);
        let a = sigma2_from_ebno(2.0, 1.0, 1);
        let b = sigma2_from_ebno(2.0, 0.5, 1);
        assert!((b / a - 2.0).abs() < 1e-12);
        let c = sigma2_from_ebno(2.0, 1.0, 4);
        assert!((a / c - 4.0).abs() < 1e-12);
    }

    #[test]
    fn awgn_zero_noise_is_identity() {
        let sym = vec![Complex64::new(0.3, -0.7); 10];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(awgn(&sym, 0.0, false, &mut rng), sym);
    }

    #[test]
    fn awgn_noise_statistics() {
        let n = 1_000_000;
        let sym = vec![Complex64::new(0.0, 0.0); n];
        let s2 = 0.37;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let out = awgn(&sym, s2, false, &mut rng);
        for dim in 0..2 {
            let vals: Vec<f64> =
                out.iter().map(|c| if dim == 0 { c.re } else { c.im }).collect();
            let mean = vals.iter().sum::<f64>() / n as f64;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            assert!((var - s2).abs() / s2 < 0.01, "dim {dim} var {var}");
            assert!(mean.abs() < 3.0 * s2.sqrt() / (n as f64).sqrt() * 1.5);
        }
    }

    #[test]
    fn awgn_real_only_leaves_imag() {
        let sym = vec![Complex64::new(1.0, 0.25); 100];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = awgn(&sym, 0.5, true, &mut rng);
        assert!(out.iter().all(|c| c.im == 0.25));
        assert!(out.iter().any(|c| c.re != 1.0));
    }

    #[test]
    fn fading_normalization_and_cdf() {
        let n = 100_000;
        let sym = vec![Complex64::new(1.0, 0.0); n];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (_, fr) = rayleigh(&sym, 0.1, &mut rng);
        let mean_h2 = fr.h.iter().map(|h| h.norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean_h2 - 1.0).abs() < 0.01, "mean |h|² = {mean_h2}");

        // KS distance of |h| against the Rayleigh CDF 1 − exp(−r²).
        let mut mags: Vec<f64> = fr.h.iter().map(|h| h.norm()).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks = 0.0f64;
        for (i, &r) in mags.iter().enumerate() {
            let f = 1.0 - (-r * r).exp();
            let hi = (i + 1) as f64 / n as f64 - f;
            let lo = f - i as f64 / n as f64;
            ks = ks.max(hi).max(lo);
        }
        assert!(ks < 0.005, "KS statistic {ks}");
    }

    #[test]
    fn fading_iid_lag1() {
        let n = 100_000;
        let sym = vec![Complex64::new(1.0, 0.0); n];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (_, fr) = rayleigh(&sym, 0.1, &mut rng);
        // Real-part lag-1 autocorrelation ≈ 0 for i.i.d. draws.
        let re: Vec<f64> = fr.h.iter().map(|h| h.re).collect();
        let mean = re.iter().sum::<f64>() / n as f64;
        let var = re.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        let lag1 = re
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / ((n - 1) as f64 * var);
        assert!(lag1.abs() < 3.0 / (n as f64).sqrt(), "lag-1 corr {lag1}");
    }

    #[test]
    fn fading_block_structure() {
        let sym = vec![Complex64::new(1.0, 0.0); 40];
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (_, fr) = rayleigh_block(&sym, 0.1, 8, &mut rng);
        for blk in fr.h.chunks(8) {
            assert!(blk.iter().all(|&h| h == blk[0]));
        }
        assert_ne!(fr.h[0], fr.h[8]);
    }

    #[test]
    fn deterministic_given_seed() {
        let sym = vec![Complex64::new(-1.0, 0.5); 64];
        let a = {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            rayleigh(&sym, 0.2, &mut rng)
        };
        let b = {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            rayleigh(&sym, 0.2, &mut rng)
        };
        assert_eq!(a, b);
    }

    #[test]
    fn noiseless_fading_with_csi_recovers_labels() {
        let cs = ConstellationSpec::new(Scheme::Qam, 16).unwrap();
        let bits: Vec<u16> = (0..64).map(|i| ((i * 7 + 3) % 5 % 2) as u16).collect();
        let tx = modulate(&cs, &bits);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (rx, fr) = rayleigh(&tx, 0.0, &mut rng);
        for (i, (&y, &h)) in rx.iter().zip(fr.h.iter()).enumerate() {
            let labels = crate::modem::pack_bits_msb(&bits, 4);
            assert_eq!(cs.nearest(y, h), labels[i]);
        }
    }
}
