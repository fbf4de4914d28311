//! Stochastic Chase decoding of Reed-Solomon and binary BCH codes.
//!
//! The crate is organized bottom-up:
//!
//! * [`galois`] — GF(2^m) arithmetic on exp/log tables (2 ≤ m ≤ 12).
//! * [`codecs`] — RS and binary BCH parameters plus systematic encoders.
//! * [`bm`] — the bounded-distance hard-decision core (syndromes,
//!   Berlekamp-Massey, Chien search, Forney).
//! * [`modem`] — Gray-labeled BPSK/M-PSK/M-QAM constellations and soft
//!   demapping into bitwise LLRs and the symbol posterior matrix Π.
//! * [`channel`] — AWGN and flat Rayleigh channels with Eb/N0 accounting.
//! * [`dedup`] — exact-duplicate test-vector pool.
//! * [`chase`] — the Chase-family decoders: S-CA(λ), B-SCA, SSBT-SCA and the
//!   stochastic symbolic S-SCA loop, plus an ML oracle for tiny codes.
//! * [`sim`] — deterministic Monte-Carlo FER/BER sweeps and CSV output.
//! * [`config`] — flat key/value sweep-config parsing for the `stochase` CLI.
//!
//! Every decode is deterministic given its RNG stream; sweep results are
//! reproducible bit-for-bit across worker counts.

pub mod bm;
pub mod channel;
pub mod chase;
pub mod codecs;
pub mod config;
pub mod dedup;
pub mod galois;
pub mod modem;
mod poly;
pub mod sim;
