//! `stochase` — Monte-Carlo FER sweeps and one-off encode/decode utilities
//! for stochastic Chase decoding of Reed-Solomon and binary BCH codes.
//!
//! Exit codes: 0 success, 2 configuration error, 3 call-budget rejection,
//! 1 anything else.

use clap::{Parser, Subcommand};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use stochase::codecs::{bch_generator_poly, encode, rs_generator_poly, CodeFamily, CodeSpec};
use stochase::config::parse_sweep_config;
use stochase::sim::{self, csv_header, csv_row, estimate_power, fmt_g6, SimError, SweepConfig};

#[derive(Parser)]
#[command(name = "stochase", version, about = "Stochastic Chase decoding simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the FER sweep described by a config file and emit CSV.
    Sweep {
        /// Flat key/value config file.
        #[arg(long)]
        config: PathBuf,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Replay one frame of a sweep point and print the decision.
    Decode {
        /// Flat key/value config file.
        #[arg(long)]
        config: PathBuf,
        /// Operating point, Eb/N0 in dB.
        #[arg(long)]
        ebno: f64,
        /// Frame index within the point.
        #[arg(long, default_value_t = 0)]
        frame: u64,
    },
    /// Systematically encode a message with the configured code.
    Encode {
        /// Flat key/value config file.
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated message symbols, k of them, each below 2^m.
        #[arg(long)]
        message: String,
    },
    /// Print the generator polynomial and field summary for a named code.
    Tables {
        /// Code name such as rs255_239 or bch63_45.
        #[arg(long)]
        code: String,
    },
    /// Evaluate the iteration-count power model.
    Power {
        /// Average decoder invocations per frame.
        #[arg(long)]
        iters: f64,
        /// Energy cost per invocation, watts.
        #[arg(long = "p-hdd")]
        p_hdd: f64,
    },
}

/// (exit code, message) on failure.
type CliResult = Result<(), (u8, String)>;

fn sim_fail(e: SimError) -> (u8, String) {
    let code = match e {
        SimError::Config(_) => 2,
        SimError::BudgetExceeded { .. } => 3,
        _ => 1,
    };
    (code, e.to_string())
}

fn io_fail(e: std::io::Error) -> (u8, String) {
    (1, e.to_string())
}

fn load_config(path: &Path) -> Result<SweepConfig, (u8, String)> {
    let text = fs::read_to_string(path)
        .map_err(|e| (2u8, format!("{}: {e}", path.display())))?;
    parse_sweep_config(&text).map_err(|e| (2, format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Sweep { config, output } => cmd_sweep(&config, output.as_deref()),
        Command::Decode { config, ebno, frame } => cmd_decode(&config, ebno, frame),
        Command::Encode { config, message } => cmd_encode(&config, &message),
        Command::Tables { code } => cmd_tables(&code),
        Command::Power { iters, p_hdd } => cmd_power(iters, p_hdd),
    }
}

// ====================================================================
// sweep
// ====================================================================

fn cmd_sweep(config: &Path, output: Option<&Path>) -> CliResult {
    let cfg = load_config(config)?;
    sim::preflight(&cfg).map_err(sim_fail)?;
    let mut sink: Box<dyn Write> = match output {
        Some(p) => Box::new(
            fs::File::create(p).map_err(|e| (1u8, format!("{}: {e}", p.display())))?,
        ),
        None => Box::new(std::io::stdout()),
    };
    writeln!(sink, "{}", csv_header()).map_err(io_fail)?;
    for &ebno in &cfg.ebno_points {
        let point = sim::run_point(&cfg, ebno).map_err(sim_fail)?;
        writeln!(sink, "{}", csv_row(&point)).map_err(io_fail)?;
        sink.flush().map_err(io_fail)?;
        eprintln!(
            "{} dB: fer {} ({}/{} frames, {:.1} s)",
            fmt_g6(ebno),
            fmt_g6(point.fer),
            point.frame_errors,
            point.frames,
            point.wall_seconds
        );
    }
    Ok(())
}

// ====================================================================
// single-frame replay
// ====================================================================

fn join_symbols(word: &[u16]) -> String {
    word.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_decode(config: &Path, ebno: f64, frame: u64) -> CliResult {
    let cfg = load_config(config)?;
    let report = sim::decode_one_frame(&cfg, ebno, frame).map_err(sim_fail)?;
    println!("frame {frame} at {} dB ({} decoder)", fmt_g6(ebno), cfg.decoder);
    println!("transmitted: {}", join_symbols(&report.transmitted));
    println!("decided:     {}", join_symbols(&report.decided));
    println!("frame_error: {}", report.frame_error);
    println!("bit_errors:  {}", report.bit_errors);
    println!("iterations:  {}", fmt_g6(report.iterations));
    Ok(())
}

// ====================================================================
// encode
// ====================================================================

fn cmd_encode(config: &Path, message: &str) -> CliResult {
    let cfg = load_config(config)?;
    let spec = cfg.code;
    let mut msg = Vec::with_capacity(spec.k);
    for part in message.split(',') {
        let sym: u16 = part
            .trim()
            .parse()
            .map_err(|e| (2u8, format!("message symbol '{}': {e}", part.trim())))?;
        if sym as usize >= spec.alphabet() {
            return Err((2, format!("message symbol {sym} outside GF(2^{})", spec.field.m())));
        }
        msg.push(sym);
    }
    if msg.len() != spec.k {
        return Err((2, format!("message has {} symbols, code needs k = {}", msg.len(), spec.k)));
    }
    let f = spec.tables();
    println!("{}", join_symbols(&encode(&spec, &f, &msg)));
    Ok(())
}

// ====================================================================
// tables
// ====================================================================

fn parse_code_name(name: &str) -> Result<CodeSpec, String> {
    let digits = name
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| format!("'{name}': expected a name like rs255_239"))?;
    let (family, rest) = name.split_at(digits);
    let (n, k) = rest
        .split_once('_')
        .ok_or_else(|| format!("'{name}': expected n_k after the family prefix"))?;
    let n: usize = n.parse().map_err(|e| format!("'{name}': bad n: {e}"))?;
    let k: usize = k.parse().map_err(|e| format!("'{name}': bad k: {e}"))?;
    match family {
        "rs" => CodeSpec::reed_solomon(n, k),
        "bch" => CodeSpec::bch(n, k),
        _ => return Err(format!("'{name}': family must be rs or bch")),
    }
    .map_err(|e| e.to_string())
}

fn poly_string(g: &[u16]) -> String {
    let mut terms = Vec::new();
    for (j, &c) in g.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let var = match j {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{j}"),
        };
        terms.push(match (c, j) {
            (1, 0) => "1".to_string(),
            (1, _) => var,
            (_, 0) => c.to_string(),
            _ => format!("{c}*{var}"),
        });
    }
    terms.join(" + ")
}

fn cmd_tables(code: &str) -> CliResult {
    let spec = parse_code_name(code).map_err(|msg| (2u8, msg))?;
    let f = spec.tables();
    let family = match spec.family {
        CodeFamily::ReedSolomon => "RS",
        CodeFamily::BinaryBch => "BCH",
    };
    println!(
        "{family}({},{}): t = {}, designed distance {}, rate {}",
        spec.n,
        spec.k,
        spec.t,
        spec.d_design,
        fmt_g6(spec.rate())
    );
    println!(
        "field: GF(2^{}) with {} elements, primitive polynomial {:#x}",
        f.m(),
        f.q(),
        f.poly()
    );
    let g = match spec.family {
        CodeFamily::ReedSolomon => rs_generator_poly(&spec, &f),
        CodeFamily::BinaryBch => bch_generator_poly(&spec, &f),
    };
    println!(
        "g(x), degree {}, roots alpha^{}..alpha^{}:",
        g.len() - 1,
        spec.first_root,
        spec.first_root + spec.syndrome_count() - 1
    );
    println!("  {}", poly_string(&g));
    println!("  coefficients (ascending): {}", join_symbols(&g));
    Ok(())
}

// ====================================================================
// power model
// ====================================================================

fn cmd_power(iters: f64, p_hdd: f64) -> CliResult {
    if !(iters >= 0.0) || !(p_hdd >= 0.0) {
        return Err((2, "iters and p-hdd must be nonnegative".into()));
    }
    println!("{}", fmt_g6(estimate_power(iters, p_hdd)));
    Ok(())
}
