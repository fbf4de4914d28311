//! Monte-Carlo FER/BER harness: sweep orchestration, CSV serialization, and
//! the iteration-count power model.
//!
//! Determinism contract: every frame derives two private RNG streams from
//! (master_seed, Eb/N0, frame index) — one for the message and channel, one
//! for the decoder — so results are bit-identical across reruns and worker
//! counts. Frames run in parallel batches; accumulation scans results in
//! frame order and truncates exactly at the frame where the stop condition
//! fires.

use crate::bm::BmDecoder;
use crate::chase::{
    bit_freeze_theta, chase_with, s_ca_with, ChaseConfig, ChaseError, MlOracle, SoftInput,
};
use crate::channel::{awgn, rayleigh, sigma2_from_ebno, ChannelKind};
use crate::codecs::{encode, CodeError, CodeFamily, CodeSpec};
use crate::galois::FieldTables;
use crate::modem::{modulate, qary_bit_llr, unpack_bits_msb, ConstellationSpec, Scheme};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

/// Reject configs whose worst-case HDD-invocation estimate exceeds this.
pub const HDD_CALL_BUDGET: f64 = 1e9;

const BATCH: u64 = 256;

#[derive(Debug)]
pub enum SimError {
    Config(String),
    Chase(ChaseError),
    Code(CodeError),
    Io(std::io::Error),
    /// Estimated HDD invocations over [`HDD_CALL_BUDGET`].
    BudgetExceeded { estimated: f64 },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::Config(msg) => write!(f, "config error: {msg}"),
            SimError::Chase(e) => write!(f, "config error: {e}"),
            SimError::Code(e) => write!(f, "config error: {e}"),
            SimError::Io(e) => write!(f, "i/o error: {e}"),
            SimError::BudgetExceeded { estimated } => write!(
                f,
                "budget guardrail: estimated {estimated:.3e} HDD invocations exceeds {HDD_CALL_BUDGET:.0e}"
            ),
        }
    }
}

impl std::error::Error for SimError {}

impl From<ChaseError> for SimError {
    fn from(e: ChaseError) -> Self {
        SimError::Chase(e)
    }
}

impl From<CodeError> for SimError {
    fn from(e: CodeError) -> Self {
        SimError::Code(e)
    }
}

impl From<std::io::Error> for SimError {
    fn from(e: std::io::Error) -> Self {
        SimError::Io(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Hdd,
    SCa,
    BSca,
    SsbtSca,
    SSca,
    MlOracle,
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DecoderKind::Hdd => "hdd",
            DecoderKind::SCa => "s-ca",
            DecoderKind::BSca => "b-sca",
            DecoderKind::SsbtSca => "ssbt-sca",
            DecoderKind::SSca => "s-sca",
            DecoderKind::MlOracle => "ml-oracle",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub code: CodeSpec,
    pub modulation: ConstellationSpec,
    pub channel: ChannelKind,
    pub decoder: DecoderKind,
    pub chase: ChaseConfig,
    pub ebno_points: Vec<f64>,
    pub stop_frame_errors: u64,
    pub max_frames: u64,
    pub master_seed: u64,
}

impl SweepConfig {
    pub fn new(
        code: CodeSpec,
        modulation: ConstellationSpec,
        channel: ChannelKind,
        decoder: DecoderKind,
    ) -> Self {
        SweepConfig {
            code,
            modulation,
            channel,
            decoder,
            chase: ChaseConfig::default(),
            ebno_points: Vec::new(),
            stop_frame_errors: 100,
            max_frames: 100_000,
            master_seed: 1,
        }
    }
}

/// One measured operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct FerPoint {
    pub ebno_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub fer: f64,
    pub bit_errors: u64,
    pub ber: f64,
    pub mean_iterations: f64,
    pub mean_unique_vectors: f64,
    pub wall_seconds: f64,
}

// ====================================================================
// validation and budget guardrail
// ====================================================================

/// HDD invocations one frame can cost at most.
fn per_frame_hdd_calls(cfg: &SweepConfig) -> f64 {
    match cfg.decoder {
        DecoderKind::Hdd => 1.0,
        DecoderKind::SSca | DecoderKind::BSca | DecoderKind::SsbtSca => cfg.chase.tau as f64,
        DecoderKind::SCa => (cfg.modulation.order as f64).powi(cfg.chase.lambda as i32),
        DecoderKind::MlOracle => {
            (cfg.code.alphabet() as f64).powi(cfg.code.k as i32)
        }
    }
}

fn check_budget(cfg: &SweepConfig, n_points: usize) -> Result<(), SimError> {
    let estimated = per_frame_hdd_calls(cfg) * cfg.max_frames as f64 * n_points as f64;
    if estimated > HDD_CALL_BUDGET {
        return Err(SimError::BudgetExceeded { estimated });
    }
    Ok(())
}

pub fn validate_config(cfg: &SweepConfig) -> Result<(), SimError> {
    cfg.chase.validate()?;
    if cfg.stop_frame_errors < 1 {
        return Err(SimError::Config("stop_frame_errors must be >= 1".into()));
    }
    if cfg.max_frames < 1 {
        return Err(SimError::Config("max_frames must be >= 1".into()));
    }
    match cfg.decoder {
        DecoderKind::BSca if cfg.modulation.scheme != Scheme::Bpsk => {
            return Err(SimError::Config("b-sca requires BPSK transmission".into()));
        }
        DecoderKind::SsbtSca => {
            if cfg.modulation.scheme != Scheme::Bpsk {
                return Err(SimError::Config("ssbt-sca requires BPSK transmission".into()));
            }
            if cfg.code.family != CodeFamily::ReedSolomon {
                return Err(SimError::Config(
                    "ssbt-sca requires a symbol-oriented (Reed-Solomon) code".into(),
                ));
            }
        }
        DecoderKind::SCa => {
            let bits = cfg.chase.lambda as f64 * (cfg.modulation.order as f64).log2();
            if bits > crate::chase::SCA_BUDGET_CAP_BITS {
                return Err(SimError::Chase(ChaseError::BudgetExceeded {
                    log2_vectors: bits,
                }));
            }
        }
        DecoderKind::MlOracle => {
            let bits = cfg.code.k as f64 * (cfg.code.alphabet() as f64).log2();
            if bits > (crate::chase::ML_CODEBOOK_CAP as f64).log2() {
                return Err(SimError::Chase(ChaseError::CodebookTooLarge { log2_words: bits }));
            }
        }
        _ => {}
    }
    Ok(())
}

// ====================================================================
// frame execution
// ====================================================================

struct FrameStats {
    error: bool,
    bit_errors: u64,
    iterations: f64,
    unique: f64,
}

/// Base RNG keyed on (master_seed, operating point); per-frame streams are
/// selected with `set_stream`, so scheduling order is immaterial.
fn point_base_rng(master_seed: u64, ebno_db: f64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&ebno_db.to_bits().to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

fn run_frame(
    cfg: &SweepConfig,
    sigma2: f64,
    base: &ChaCha8Rng,
    oracle: Option<&MlOracle>,
    f: &FieldTables,
    bm: &mut BmDecoder,
    frame: u64,
) -> FrameStats {
    let spec = &cfg.code;
    let cs = &cfg.modulation;
    let mut ch_rng = base.clone();
    ch_rng.set_stream(2 * frame);
    let mut dec_rng = base.clone();
    dec_rng.set_stream(2 * frame + 1);

    // Transmit.
    use rand::Rng;
    let alphabet = spec.alphabet() as u16;
    let msg: Vec<u16> = (0..spec.k).map(|_| ch_rng.random_range(0..alphabet)).collect();
    let cw = encode(spec, f, &msg);
    let mut bits = unpack_bits_msb(&cw, spec.bits_per_symbol());
    bits.resize(spec.codeword_bits().div_ceil(cs.m) * cs.m, 0);
    let tx = modulate(cs, &bits);
    let (rx, csi) = match cfg.channel {
        ChannelKind::Awgn => (awgn(&tx, sigma2, cs.real_only, &mut ch_rng), None),
        ChannelKind::Rayleigh => {
            let (rx, fr) = rayleigh(&tx, sigma2, &mut ch_rng);
            (rx, Some(fr.h))
        }
    };
    let csi_ref = csi.as_deref();

    // Decode.
    let (decided, iterations, unique) = match cfg.decoder {
        DecoderKind::Hdd => {
            let input =
                crate::chase::soft_from_channel(spec, cs, &rx, csi_ref, sigma2, 1.0);
            let mut word = input.hard_code;
            bm.decode_in_place(f, &mut word);
            (word, 1.0, 1.0)
        }
        DecoderKind::SSca => {
            let input =
                crate::chase::soft_from_channel(spec, cs, &rx, csi_ref, sigma2, cfg.chase.beta);
            let res = chase_with(spec, f, bm, &input, &cfg.chase, cfg.chase.theta, &mut dec_rng)
                .expect("validated config");
            (res.decided, res.iterations_used as f64, res.unique_vectors as f64)
        }
        DecoderKind::SsbtSca | DecoderKind::BSca => {
            let input = bpsk_soft_input(cfg, &rx, csi_ref, sigma2);
            let theta = match cfg.decoder {
                DecoderKind::BSca => bit_freeze_theta(cfg.chase.theta),
                _ => cfg.chase.theta,
            };
            let res = chase_with(spec, f, bm, &input, &cfg.chase, theta, &mut dec_rng)
                .expect("validated config");
            (res.decided, res.iterations_used as f64, res.unique_vectors as f64)
        }
        DecoderKind::SCa => {
            let input =
                crate::chase::soft_from_channel(spec, cs, &rx, csi_ref, sigma2, cfg.chase.beta);
            let res = s_ca_with(spec, f, bm, &input, cfg.chase.lambda).expect("validated config");
            (res.decided, res.iterations_used as f64, res.unique_vectors as f64)
        }
        DecoderKind::MlOracle => {
            let oracle = oracle.expect("oracle built for ml-oracle decoder");
            let d = oracle.decode(&rx, csi_ref).to_vec();
            let calls = oracle.codebook_len() as f64;
            (d, calls, calls)
        }
    };

    // Compare: frame error on any codeword symbol; bit errors over the
    // message symbols only.
    let error = decided != cw;
    let bit_errors: u64 = decided[..spec.k]
        .iter()
        .zip(cw[..spec.k].iter())
        .map(|(&a, &b)| (a ^ b).count_ones() as u64)
        .sum();
    FrameStats { error, bit_errors, iterations, unique }
}

/// Per-bit LLRs for BPSK transmission (exact 2y/σ² under AWGN, fading-aware
/// under Rayleigh), feeding the bitwise and symbol-by-bit decoders.
fn bpsk_soft_input(
    cfg: &SweepConfig,
    rx: &[Complex64],
    csi: Option<&[Complex64]>,
    sigma2: f64,
) -> SoftInput {
    let one = Complex64::new(1.0, 0.0);
    let llrs: Vec<f64> = rx
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let h = csi.map_or(one, |hs| hs[i]);
            qary_bit_llr(&cfg.modulation, y, h, sigma2)[0]
        })
        .collect();
    let block_bits = match cfg.decoder {
        DecoderKind::BSca => 1,
        _ => cfg.code.bits_per_symbol(),
    };
    crate::chase::soft_from_bit_llrs(&cfg.code, &llrs, cfg.chase.beta, block_bits)
}

// ====================================================================
// points and sweeps
// ====================================================================

/// Runs frames at one Eb/N0 until `stop_frame_errors` frame errors or
/// `max_frames`, whichever comes first.
pub fn run_point(cfg: &SweepConfig, ebno_db: f64) -> Result<FerPoint, SimError> {
    validate_config(cfg)?;
    check_budget(cfg, 1)?;
    let t0 = Instant::now();
    let sigma2 = sigma2_from_ebno(ebno_db, cfg.code.rate(), cfg.modulation.m);
    let base = point_base_rng(cfg.master_seed, ebno_db);
    let oracle = match cfg.decoder {
        DecoderKind::MlOracle => Some(Arc::new(MlOracle::new(&cfg.code, &cfg.modulation)?)),
        _ => None,
    };

    let mut frames = 0u64;
    let mut frame_errors = 0u64;
    let mut bit_errors = 0u64;
    let mut sum_iterations = 0.0f64;
    let mut sum_unique = 0.0f64;
    let mut next = 0u64;
    'outer: while next < cfg.max_frames {
        let batch = BATCH.min(cfg.max_frames - next);
        let results: Vec<FrameStats> = (next..next + batch)
            .into_par_iter()
            .map_init(
                || (cfg.code.tables(), BmDecoder::new(&cfg.code)),
                |(f, bm), frame| {
                    run_frame(cfg, sigma2, &base, oracle.as_deref(), f, bm, frame)
                },
            )
            .collect();
        next += batch;
        for r in results {
            frames += 1;
            frame_errors += u64::from(r.error);
            bit_errors += r.bit_errors;
            sum_iterations += r.iterations;
            sum_unique += r.unique;
            if frame_errors >= cfg.stop_frame_errors {
                break 'outer;
            }
        }
    }

    let message_bits = cfg.code.message_bits() as f64;
    Ok(FerPoint {
        ebno_db,
        frames,
        frame_errors,
        fer: frame_errors as f64 / frames as f64,
        bit_errors,
        ber: bit_errors as f64 / (frames as f64 * message_bits),
        mean_iterations: sum_iterations / frames as f64,
        mean_unique_vectors: sum_unique / frames as f64,
        wall_seconds: t0.elapsed().as_secs_f64(),
    })
}

/// Validates a sweep and applies the whole-sweep call-budget guardrail
/// without running anything; callers that drive `run_point` themselves
/// (e.g. to stream CSV rows) should call this first.
pub fn preflight(cfg: &SweepConfig) -> Result<(), SimError> {
    validate_config(cfg)?;
    if cfg.ebno_points.is_empty() {
        return Err(SimError::Config("ebno_points must be nonempty".into()));
    }
    check_budget(cfg, cfg.ebno_points.len())
}

/// One point per configured Eb/N0 value.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<FerPoint>, SimError> {
    preflight(cfg)?;
    cfg.ebno_points.iter().map(|&e| run_point(cfg, e)).collect()
}

/// Total-power model: iterations × per-call decoder power.
pub fn estimate_power(iterations: f64, p_hdd_watts: f64) -> f64 {
    assert!(iterations >= 0.0 && p_hdd_watts >= 0.0);
    iterations * p_hdd_watts
}

// ====================================================================
// CSV serialization
// ====================================================================

/// Formats with 6 significant digits, C `%g`-style: fixed notation in
/// mid-range, scientific outside it, trailing zeros trimmed.
pub fn fmt_g6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.5e}", v);
    let (mant, e) = sci.split_once('e').unwrap();
    let e: i32 = e.parse().unwrap();
    if e < -4 || e >= 6 {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{}e{}{:02}", mant, if e < 0 { "-" } else { "+" }, e.abs())
    } else {
        let decimals = (5 - e).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

pub fn csv_header() -> &'static str {
    "ebno_db,frames,frame_errors,fer,bit_errors,ber,mean_iterations,mean_unique_vectors,wall_seconds"
}

pub fn csv_row(p: &FerPoint) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        fmt_g6(p.ebno_db),
        p.frames,
        p.frame_errors,
        fmt_g6(p.fer),
        p.bit_errors,
        fmt_g6(p.ber),
        fmt_g6(p.mean_iterations),
        fmt_g6(p.mean_unique_vectors),
        fmt_g6(p.wall_seconds),
    )
}

pub fn write_csv<W: Write>(points: &[FerPoint], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{}", csv_header())?;
    for p in points {
        writeln!(out, "{}", csv_row(p))?;
    }
    Ok(())
}

// ====================================================================
// single-frame report (CLI `decode`)
// ====================================================================

#[derive(Debug, Clone)]
pub struct FrameReport {
    pub transmitted: Vec<u16>,
    pub decided: Vec<u16>,
    pub frame_error: bool,
    pub bit_errors: u64,
    pub iterations: f64,
}

/// Replays exactly the frame the sweep harness would run at this index.
pub fn decode_one_frame(
    cfg: &SweepConfig,
    ebno_db: f64,
    frame: u64,
) -> Result<FrameReport, SimError> {
    validate_config(cfg)?;
    let sigma2 = sigma2_from_ebno(ebno_db, cfg.code.rate(), cfg.modulation.m);
    let base = point_base_rng(cfg.master_seed, ebno_db);
    let oracle = match cfg.decoder {
        DecoderKind::MlOracle => Some(MlOracle::new(&cfg.code, &cfg.modulation)?),
        _ => None,
    };
    let f = cfg.code.tables();
    let mut bm = BmDecoder::new(&cfg.code);

    // The transmitted word comes from the frame's channel stream, exactly as
    // run_frame derives it.
    let mut ch_rng = base.clone();
    ch_rng.set_stream(2 * frame);
    use rand::Rng;
    let alphabet = cfg.code.alphabet() as u16;
    let msg: Vec<u16> = (0..cfg.code.k).map(|_| ch_rng.random_range(0..alphabet)).collect();
    let transmitted = encode(&cfg.code, &f, &msg);

    let stats = run_frame(cfg, sigma2, &base, oracle.as_ref(), &f, &mut bm, frame);
    let decided = replay_decision(cfg, sigma2, &base, frame, &f, oracle.as_ref())?;
    debug_assert_eq!(stats.error, decided != transmitted);
    Ok(FrameReport {
        transmitted,
        decided,
        frame_error: stats.error,
        bit_errors: stats.bit_errors,
        iterations: stats.iterations,
    })
}

fn replay_decision(
    cfg: &SweepConfig,
    sigma2: f64,
    base: &ChaCha8Rng,
    frame: u64,
    f: &FieldTables,
    oracle: Option<&MlOracle>,
) -> Result<Vec<u16>, SimError> {
    let mut bm = BmDecoder::new(&cfg.code);
    let mut ch_rng = base.clone();
    ch_rng.set_stream(2 * frame);
    let mut dec_rng = base.clone();
    dec_rng.set_stream(2 * frame + 1);
    use rand::Rng;
    let spec = &cfg.code;
    let cs = &cfg.modulation;
    let alphabet = spec.alphabet() as u16;
    let msg: Vec<u16> = (0..spec.k).map(|_| ch_rng.random_range(0..alphabet)).collect();
    let cw = encode(spec, f, &msg);
    let mut bits = unpack_bits_msb(&cw, spec.bits_per_symbol());
    bits.resize(spec.codeword_bits().div_ceil(cs.m) * cs.m, 0);
    let tx = modulate(cs, &bits);
    let (rx, csi) = match cfg.channel {
        ChannelKind::Awgn => (awgn(&tx, sigma2, cs.real_only, &mut ch_rng), None),
        ChannelKind::Rayleigh => {
            let (rx, fr) = rayleigh(&tx, sigma2, &mut ch_rng);
            (rx, Some(fr.h))
        }
    };
    let csi_ref = csi.as_deref();
    let decided = match cfg.decoder {
        DecoderKind::Hdd => {
            let input = crate::chase::soft_from_channel(spec, cs, &rx, csi_ref, sigma2, 1.0);
            let mut word = input.hard_code;
            bm.decode_in_place(f, &mut word);
            word
        }
        DecoderKind::SSca => {
            let input =
                crate::chase::soft_from_channel(spec, cs, &rx, csi_ref, sigma2, cfg.chase.beta);
            chase_with(spec, f, &mut bm, &input, &cfg.chase, cfg.chase.theta, &mut dec_rng)?
                .decided
        }
        DecoderKind::SsbtSca | DecoderKind::BSca => {
            let input = bpsk_soft_input(cfg, &rx, csi_ref, sigma2);
            let theta = match cfg.decoder {
                DecoderKind::BSca => bit_freeze_theta(cfg.chase.theta),
                _ => cfg.chase.theta,
            };
            chase_with(spec, f, &mut bm, &input, &cfg.chase, theta, &mut dec_rng)?.decided
        }
        DecoderKind::SCa => {
            let input =
                crate::chase::soft_from_channel(spec, cs, &rx, csi_ref, sigma2, cfg.chase.beta);
            s_ca_with(spec, f, &mut bm, &input, cfg.chase.lambda)?.decided
        }
        DecoderKind::MlOracle => {
            oracle.expect("oracle built for ml-oracle decoder").decode(&rx, csi_ref).to_vec()
        }
    };
    Ok(decided)
}

// ====================================================================
// tests
// ====================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modem::Scheme;

    fn small_config(decoder: DecoderKind) -> SweepConfig {
        let code = CodeSpec::reed_solomon(15, 11).unwrap();
        let cs = ConstellationSpec::new(Scheme::Qam, 16).unwrap();
        let mut cfg = SweepConfig::new(code, cs, ChannelKind::Awgn, decoder);
        cfg.chase.tau = 16;
        cfg.stop_frame_errors = 20;
        cfg.max_frames = 400;
        cfg.master_seed = 7;
        cfg
    }

    #[test]
    fn fmt_g6_pinned() {
        assert_eq!(fmt_g6(0.0), "0");
        assert_eq!(fmt_g6(1.0), "1");
        assert_eq!(fmt_g6(0.5), "0.5");
        assert_eq!(fmt_g6(3.0103), "3.0103");
        assert_eq!(fmt_g6(0.000144), "0.000144");
        assert_eq!(fmt_g6(1.44e-5), "1.44e-05");
        assert_eq!(fmt_g6(0.123456789), "0.123457");
        assert_eq!(fmt_g6(1234567.0), "1.23457e+06");
        assert_eq!(fmt_g6(-2.5e-7), "-2.5e-07");
        assert_eq!(fmt_g6(100000.0), "100000");
    }

    #[test]
    fn power_model() {
        // 1000 × 1e-20 lands one ulp under 1e-17; equal at reporting
        // precision.
        assert!((estimate_power(1000.0, 1e-20) - 1e-17).abs() < 1e-30);
        assert_eq!(fmt_g6(estimate_power(1000.0, 1e-20)), "1e-17");
        assert_eq!(estimate_power(0.0, 5.0), 0.0);
        assert_eq!(estimate_power(1.0, 3.5), 3.5);
    }

    #[test]
    fn noiseless_point_has_zero_fer() {
        let mut cfg = small_config(DecoderKind::Hdd);
        cfg.max_frames = 50;
        let p = run_point(&cfg, 40.0).unwrap();
        assert_eq!(p.frames, 50);
        assert_eq!(p.frame_errors, 0);
        assert_eq!(p.fer, 0.0);
        assert_eq!(p.ber, 0.0);
    }

    #[test]
    fn deep_noise_point_saturates() {
        let cfg = small_config(DecoderKind::Hdd);
        let p = run_point(&cfg, -20.0).unwrap();
        assert_eq!(p.frame_errors, 20);
        assert_eq!(p.frames, 20); // every frame fails, stop fires immediately
        assert_eq!(p.fer, 1.0);
        assert!(p.ber > 0.0);
    }

    #[test]
    fn determinism_across_worker_counts() {
        let mut cfg = small_config(DecoderKind::SSca);
        cfg.ebno_points = vec![4.0, 6.0];
        let run_with = |threads: usize, cfg: &SweepConfig| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let points = pool.install(|| run_sweep(cfg).unwrap());
            points
                .iter()
                .map(|p| {
                    let row = csv_row(p);
                    row.rsplit_once(',').unwrap().0.to_string() // drop wall_seconds
                })
                .collect::<Vec<_>>()
        };
        let a = run_with(1, &cfg);
        let b = run_with(4, &cfg);
        let c = run_with(1, &cfg);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn mean_iterations_equals_tau_without_early_exit() {
        let mut cfg = small_config(DecoderKind::SSca);
        cfg.max_frames = 60;
        cfg.stop_frame_errors = 1000;
        let p = run_point(&cfg, 5.0).unwrap();
        assert_eq!(p.mean_iterations, cfg.chase.tau as f64);
        assert!(p.mean_unique_vectors <= cfg.chase.tau as f64);

        cfg.chase.early_exit = true;
        let p = run_point(&cfg, 12.0).unwrap();
        assert!(p.mean_iterations < cfg.chase.tau as f64);
        assert!(p.mean_iterations >= 1.0);
    }

    #[test]
    fn budget_guardrail_fires() {
        let mut cfg = small_config(DecoderKind::SSca);
        cfg.chase.tau = 100_000;
        cfg.max_frames = 100_000;
        match run_point(&cfg, 5.0) {
            Err(SimError::BudgetExceeded { estimated }) => assert!(estimated > HDD_CALL_BUDGET),
            other => panic!("expected budget rejection, got {other:?}"),
        }
    }

    #[test]
    fn config_validation_rules() {
        let cfg = small_config(DecoderKind::BSca);
        assert!(matches!(run_point(&cfg, 5.0), Err(SimError::Config(_))));
        let cfg = small_config(DecoderKind::SsbtSca);
        assert!(matches!(run_point(&cfg, 5.0), Err(SimError::Config(_))));

        let code = CodeSpec::bch(15, 7).unwrap();
        let cs = ConstellationSpec::new(Scheme::Bpsk, 2).unwrap();
        let cfg = SweepConfig::new(code, cs, ChannelKind::Awgn, DecoderKind::SsbtSca);
        assert!(matches!(run_point(&cfg, 5.0), Err(SimError::Config(_))));
    }

    #[test]
    fn bpsk_decoders_run() {
        let code = CodeSpec::reed_solomon(15, 11).unwrap();
        let cs = ConstellationSpec::new(Scheme::Bpsk, 2).unwrap();
        for decoder in [DecoderKind::SsbtSca, DecoderKind::BSca] {
            let mut cfg = SweepConfig::new(code, cs.clone(), ChannelKind::Awgn, decoder);
            cfg.chase.tau = 16;
            cfg.stop_frame_errors = 10;
            cfg.max_frames = 100;
            let p = run_point(&cfg, 4.0).unwrap();
            assert!(p.frames > 0);
        }
    }

    #[test]
    fn rayleigh_channel_runs() {
        let mut cfg = small_config(DecoderKind::SSca);
        cfg.channel = ChannelKind::Rayleigh;
        cfg.max_frames = 100;
        let p = run_point(&cfg, 12.0).unwrap();
        assert!(p.frames > 0);
    }

    #[test]
    fn oracle_point_runs() {
        let code = CodeSpec::bch(7, 4).unwrap();
        let cs = ConstellationSpec::new(Scheme::Bpsk, 2).unwrap();
        let mut cfg = SweepConfig::new(code, cs, ChannelKind::Awgn, DecoderKind::MlOracle);
        cfg.stop_frame_errors = 10;
        cfg.max_frames = 200;
        let p = run_point(&cfg, 3.0).unwrap();
        assert_eq!(p.mean_iterations, 16.0);
    }

    #[test]
    fn csv_shape() {
        let mut cfg = small_config(DecoderKind::Hdd);
        cfg.max_frames = 30;
        cfg.ebno_points = vec![5.0, 7.0];
        let points = run_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&points, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], csv_header());
        for row in &lines[1..] {
            assert_eq!(row.split(',').count(), 9);
        }
    }

    #[test]
    fn fer_monotone_in_ebno_loosely() {
        let mut cfg = small_config(DecoderKind::Hdd);
        cfg.stop_frame_errors = 60;
        cfg.max_frames = 3000;
        let lo = run_point(&cfg, 4.0).unwrap();
        let hi = run_point(&cfg, 8.0).unwrap();
        // Statistical slack: two combined standard errors.
        let se = |p: &FerPoint| (p.fer * (1.0 - p.fer) / p.frames as f64).sqrt();
        assert!(hi.fer <= lo.fer + 2.0 * (se(&lo) + se(&hi)), "{} vs {}", lo.fer, hi.fer);
    }

    #[test]
    fn decode_one_frame_replays_sweep_frame() {
        let cfg = small_config(DecoderKind::SSca);
        let rep = decode_one_frame(&cfg, 5.0, 3).unwrap();
        assert_eq!(rep.transmitted.len(), 15);
        assert_eq!(rep.decided.len(), 15);
        assert_eq!(rep.frame_error, rep.decided != rep.transmitted);
        let again = decode_one_frame(&cfg, 5.0, 3).unwrap();
        assert_eq!(rep.decided, again.decided);
    }
}
