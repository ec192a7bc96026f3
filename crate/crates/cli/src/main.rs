//! `polar-psu` command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage errors (bad flags, arguments or
//! input files), 3 when a contract check fails (engine disagreement, PSU
//! read mismatch, decoder divergence from the reference).

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use polar_psu::code::{bhattacharyya_bec, construct_frozen_set, DEFAULT_EPSILON, DENSE_CAP_LOG2};
use polar_psu::decoder::{LlrVec, ScDecoder};
use polar_psu::encoder::{expand, Engine, ExtendedInfoVector};
use polar_psu::hw_cost::{resource_counts, Arch};
use polar_psu::psu::{AnyPsu, PsuArch, PsuModel};
use polar_psu::schedule::{DecodeSchedule, OpKind};
use polar_psu::sim::{verify_against_reference, ChannelKind, Execution, SimConfig, Simulator};
use polar_psu::vectors::VectorLine;
use polar_psu::{BitVec, Error, PolarCode};

#[derive(Parser, Debug)]
#[command(
    name = "polar-psu",
    version,
    about = "Polar codes with cycle-accurate partial-sums units"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List Bhattacharyya parameters and the frozen set of a BEC-constructed code.
    Construct(ConstructArgs),
    /// Encode one vector.
    Encode(EncodeArgs),
    /// Decode channel LLRs, one value per line.
    Decode(DecodeArgs),
    /// Monte-Carlo error-rate sweep.
    Simulate(SimulateArgs),
    /// Per-push or per-clock trace of a partial-sums unit.
    PsuTrace(TraceArgs),
    /// Gate-count table for the partial-sums architectures.
    HwEstimate(HwArgs),
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    /// Code length exponent, N = 2^n.
    #[arg(long)]
    n: u32,
    /// Code dimension; defaults to N/2.
    #[arg(long)]
    k: Option<usize>,
    /// Erasure probability used for construction.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    eps: f64,
}

impl CodeArgs {
    fn dimension(&self) -> usize {
        self.k
            .unwrap_or_else(|| 1usize.checked_shl(self.n).unwrap_or(0) / 2)
    }

    fn build(&self) -> anyhow::Result<PolarCode> {
        Ok(construct_frozen_set(self.n, self.dimension(), self.eps)?)
    }

    fn describe(&self) -> String {
        format!("n={} k={} eps={}", self.n, self.dimension(), self.eps)
    }
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> anyhow::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BitFormat {
    Bin,
    Hex,
}

impl BitFormat {
    fn render(self, bits: &BitVec) -> String {
        match self {
            BitFormat::Bin => bits.to_string(),
            BitFormat::Hex => bits.to_hex(),
        }
    }

    fn parse(self, text: &str, len: usize) -> anyhow::Result<BitVec> {
        Ok(match self {
            BitFormat::Bin => text.parse()?,
            BitFormat::Hex => BitVec::from_hex(text.trim(), len)?,
        })
    }
}

#[derive(Args, Debug)]
struct EncodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Full N-bit input vector, zeros at frozen positions.
    #[arg(long, conflicts_with = "info", required_unless_present = "info")]
    u: Option<String>,
    /// K information bits, placed on the unfrozen positions.
    #[arg(long)]
    info: Option<String>,
    /// Notation of the input bits.
    #[arg(long, value_enum, default_value_t = BitFormat::Bin)]
    input_format: BitFormat,
    #[arg(long, default_value = "graph")]
    engine: Engine,
    /// Run every available engine and fail unless they agree.
    #[arg(long)]
    cross_check: bool,
    /// Notation of the codeword.
    #[arg(long, value_enum, default_value_t = BitFormat::Bin)]
    format: BitFormat,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// File with one LLR per line; stdin when absent or `-`.
    #[arg(long)]
    llrs: Option<PathBuf>,
    #[arg(long, default_value = "sr")]
    psu: PsuArch,
    #[arg(long, value_enum, default_value_t = BitFormat::Bin)]
    format: BitFormat,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ChannelArg {
    Awgn,
    Bec,
    Noiseless,
}

impl From<ChannelArg> for ChannelKind {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Awgn => ChannelKind::Awgn,
            ChannelArg::Bec => ChannelKind::Bec,
            ChannelArg::Noiseless => ChannelKind::Noiseless,
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum, default_value_t = ChannelArg::Awgn)]
    channel: ChannelArg,
    /// First sweep value: Eb/N0 in dB, or the erasure probability for `bec`.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    snr_start: f64,
    /// Last sweep value, same unit as `--snr-start`.
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    snr_stop: f64,
    #[arg(long, default_value_t = 7)]
    points: usize,
    /// Frames per point; the upper bound with `--stop-at-frame-errors`.
    #[arg(long, default_value_t = 2500)]
    trials: u64,
    /// Move to the next point after this many frame errors.
    #[arg(long)]
    stop_at_frame_errors: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "sr")]
    psu: PsuArch,
    /// Run trials on the calling thread only.
    #[arg(long)]
    sequential: bool,
    /// Also decode every frame under oracle supervision and against the
    /// reference decoder; exits 3 on any difference.
    #[arg(long)]
    verify: bool,
    /// Write one test-vector line per simulated frame to this file.
    #[arg(long)]
    dump_vectors: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TraceView {
    /// One row per pushed decision with the resulting storage contents.
    Steps,
    /// One row per decoder clock with the partial sums read at that clock.
    Schedule,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Code length exponent, N = 2^n.
    #[arg(long)]
    n: u32,
    /// Decisions to push, in leaf order (binary, at most N bits).
    #[arg(long)]
    u_hat: String,
    #[arg(long, default_value = "sr")]
    arch: PsuArch,
    #[arg(long, value_enum, default_value_t = TraceView::Steps)]
    view: TraceView,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HwArch {
    All,
    Sr,
    If,
    Fb,
}

#[derive(Args, Debug)]
struct HwArgs {
    #[arg(long, value_enum, default_value_t = HwArch::All)]
    arch: HwArch,
    /// Inclusive range of code lengths, e.g. `2^10..2^14` or `1024..16384`.
    #[arg(long, default_value = "2^10..2^14")]
    n_range: String,
    #[command(flatten)]
    output: Output,
}

/// A failed self-check, as opposed to bad input.
#[derive(Debug)]
struct ContractViolation(String);

impl fmt::Display for ContractViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ContractViolation {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ContractViolation>().is_some() {
        return 3;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::PartialSumMismatch { .. } | Error::State(_) | Error::Precondition(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Construct(a) => construct(&a),
        Command::Encode(a) => encode(&a),
        Command::Decode(a) => decode(&a),
        Command::Simulate(a) => simulate(&a),
        Command::PsuTrace(a) => psu_trace(&a),
        Command::HwEstimate(a) => hw_estimate(&a),
    }
}

fn construct(a: &ConstructArgs) -> anyhow::Result<()> {
    let code = a.code.build()?;
    let z = bhattacharyya_bec(code.n(), a.code.eps)?;
    let frozen: Vec<String> = code.frozen_indices().iter().map(usize::to_string).collect();
    let mut out = a.output.open()?;
    writeln!(
        out,
        "# construct {} frozen={}",
        a.code.describe(),
        frozen.join(" ")
    )?;
    writeln!(out, "index,z,frozen")?;
    for (i, z) in z.iter().enumerate() {
        writeln!(out, "{i},{z:?},{}", u8::from(code.is_frozen(i)))?;
    }
    out.flush()?;
    Ok(())
}

/// Engines usable at this code length.
fn engines_for(code: &PolarCode) -> Vec<Engine> {
    Engine::ALL
        .into_iter()
        .filter(|&e| e != Engine::Matrix || code.n() <= DENSE_CAP_LOG2)
        .collect()
}

/// Fails unless every codeword equals the first.
fn check_agreement(results: &[(Engine, BitVec)]) -> anyhow::Result<()> {
    if let Some((first, x0)) = results.first() {
        for (engine, x) in &results[1..] {
            if x != x0 {
                return Err(ContractViolation(format!(
                    "{engine} encoder gives {x}, {first} gives {x0}"
                ))
                .into());
            }
        }
    }
    Ok(())
}

fn encode(a: &EncodeArgs) -> anyhow::Result<()> {
    let code = a.code.build()?;
    let u = match (&a.u, &a.info) {
        (Some(u), _) => ExtendedInfoVector::new(&code, a.input_format.parse(u, code.len())?)?,
        (None, Some(info)) => expand(&code, &a.input_format.parse(info, code.dimension())?)?,
        (None, None) => bail!("one of --u or --info is required"),
    };
    let x = a.engine.encode(&code, &u)?;
    if a.cross_check {
        let mut results = vec![(a.engine, x.clone())];
        for engine in engines_for(&code).into_iter().filter(|&e| e != a.engine) {
            results.push((engine, engine.encode(&code, &u)?));
        }
        check_agreement(&results)?;
    }
    let mut out = a.output.open()?;
    writeln!(out, "{}", a.format.render(&x))?;
    out.flush()?;
    Ok(())
}

fn read_llrs(path: Option<&Path>) -> anyhow::Result<Vec<f64>> {
    let reader: Box<dyn BufRead> = match path {
        Some(p) if p != Path::new("-") => Box::new(BufReader::new(
            File::open(p).with_context(|| format!("cannot open {}", p.display()))?,
        )),
        _ => Box::new(io::stdin().lock()),
    };
    let mut values = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        values.push(
            text.parse::<f64>()
                .with_context(|| format!("line {}: bad LLR {text:?}", line_no + 1))?,
        );
    }
    Ok(values)
}

fn decode(a: &DecodeArgs) -> anyhow::Result<()> {
    let code = a.code.build()?;
    let llrs = LlrVec::try_from(read_llrs(a.llrs.as_deref())?)?;
    let mut psu = AnyPsu::for_code(a.psu, &code);
    let result = ScDecoder::new(&code).decode(&llrs, &mut psu)?;
    let mut out = a.output.open()?;
    writeln!(out, "u_hat={}", a.format.render(&result.u_hat))?;
    writeln!(out, "info={}", a.format.render(&result.info_hat))?;
    out.flush()?;
    Ok(())
}

fn sweep_values(start: f64, stop: f64, points: usize) -> anyhow::Result<Vec<f64>> {
    if points == 0 {
        bail!("--points must be at least 1");
    }
    if start.is_nan() || stop.is_nan() || start > stop {
        bail!("sweep start {start} is above stop {stop}");
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            if k + 1 == points {
                stop
            } else {
                start + step * k as f64
            }
        })
        .collect())
}

fn simulate(a: &SimulateArgs) -> anyhow::Result<()> {
    let code = a.code.build()?;
    let channel = ChannelKind::from(a.channel);
    let config = SimConfig {
        channel,
        points: sweep_values(a.snr_start, a.snr_stop, a.points)?,
        trials: a.trials,
        stop_after_frame_errors: a.stop_at_frame_errors,
        seed: a.seed,
        psu: a.psu,
        execution: if a.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let sim = Simulator::new(code, config)?;

    if a.verify {
        let report = verify_against_reference(&sim, a.psu)?;
        eprintln!(
            "# verify psu={} frames={} reads_checked={} reference_mismatches={}",
            a.psu, report.frames, report.reads_checked, report.reference_mismatches
        );
        if report.reference_mismatches > 0 {
            return Err(ContractViolation(format!(
                "{} of {} frames differ from the reference decoder",
                report.reference_mismatches, report.frames
            ))
            .into());
        }
    }

    let stats = sim.run()?;

    if let Some(path) = &a.dump_vectors {
        let mut dump = BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        );
        let mut ws = sim.workspace();
        for point in &stats {
            for t in 0..point.trials {
                let rec = sim.trial(point.param, t, &mut ws)?;
                let line = VectorLine {
                    seed: a.seed,
                    snr_db: point.param,
                    u: rec.u,
                    x: rec.x,
                    llrs: rec.llrs,
                    u_hat: rec.decoded.u_hat,
                };
                writeln!(dump, "{}", line.to_line())?;
            }
        }
        dump.flush()?;
    }

    let param_column = if channel == ChannelKind::Bec {
        "erasure"
    } else {
        "snr_db"
    };
    let mut out = a.output.open()?;
    writeln!(
        out,
        "# simulate {} channel={} points={} trials={} stop_at_frame_errors={} seed={} psu={}",
        a.code.describe(),
        channel,
        sim.config().points.len(),
        a.trials,
        a.stop_at_frame_errors
            .map_or_else(|| "none".to_string(), |v| v.to_string()),
        a.seed,
        a.psu
    )?;
    writeln!(out, "{param_column},trials,bit_errors,frame_errors,ber,fer")?;
    for s in &stats {
        writeln!(
            out,
            "{},{},{},{},{:e},{:e}",
            s.param,
            s.trials,
            s.bit_errors,
            s.frame_errors,
            s.ber(),
            s.fer()
        )?;
    }
    out.flush()?;
    Ok(())
}

fn parse_trace_bits(text: &str, len: usize) -> anyhow::Result<BitVec> {
    let bits: BitVec = text.parse()?;
    if bits.len() > len {
        bail!("{} decisions for a code of length {len}", bits.len());
    }
    Ok(bits)
}

fn psu_trace(a: &TraceArgs) -> anyhow::Result<()> {
    let code = PolarCode::rate_one(a.n)?;
    let bits = parse_trace_bits(&a.u_hat, code.len())?;
    let mut psu = AnyPsu::for_code(a.arch, &code);
    let mut out = a.output.open()?;
    let view = match a.view {
        TraceView::Steps => "steps",
        TraceView::Schedule => "schedule",
    };
    writeln!(
        out,
        "# psu-trace n={} arch={} view={view} u_hat={bits}",
        a.n, a.arch
    )?;
    match a.view {
        TraceView::Steps => {
            writeln!(out, "step,u_hat,control,state")?;
            for (step, b) in bits.iter().enumerate() {
                let control = match &psu {
                    AnyPsu::Sr(sr) => sr.control_row().to_string(),
                    _ => "NA".to_string(),
                };
                psu.push(b)?;
                writeln!(out, "{step},{b},{control},{}", psu.state_bits())?;
            }
        }
        TraceView::Schedule => {
            writeln!(out, "clock,stage,kind,edges,read_positions,sums")?;
            let schedule = DecodeSchedule::line(a.n);
            for op in schedule.ops() {
                let edges = op.edges();
                let (positions, sums) = match op.kind {
                    OpKind::F => ("NA".to_string(), "NA".to_string()),
                    OpKind::G => {
                        let mut positions = Vec::with_capacity(op.width());
                        let mut sums = String::with_capacity(op.width());
                        for pe in op.pe_assignments() {
                            positions.push(pe.read_position.to_string());
                            sums.push(char::from(b'0' + psu.read(op.sum_request(&pe))?));
                        }
                        (positions.join(" "), sums)
                    }
                };
                writeln!(
                    out,
                    "{},{},{},{}..{},{positions},{sums}",
                    op.clock, op.stage, op.kind, edges.start, edges.end
                )?;
                if let Some(i) = op.leaf() {
                    if i >= bits.len() {
                        break;
                    }
                    psu.push(bits.get(i))?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Parses `A..B` where each bound is a decimal or `2^k`.
fn parse_len_range(text: &str) -> anyhow::Result<Vec<u64>> {
    fn bound(s: &str) -> anyhow::Result<u64> {
        let s = s.trim();
        let value = match s.split_once('^') {
            Some((base, exp)) => {
                let base: u64 = base
                    .trim()
                    .parse()
                    .with_context(|| format!("bad base in {s:?}"))?;
                let exp: u32 = exp
                    .trim()
                    .parse()
                    .with_context(|| format!("bad exponent in {s:?}"))?;
                base.checked_pow(exp)
                    .with_context(|| format!("{s} overflows"))?
            }
            None => s.parse().with_context(|| format!("bad length {s:?}"))?,
        };
        if !value.is_power_of_two() {
            bail!("length {value} is not a power of two");
        }
        Ok(value)
    }
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (bound(lo)?, bound(hi)?),
        None => {
            let v = bound(text)?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty length range {text:?}");
    }
    Ok(std::iter::successors(Some(lo), |&v| v.checked_mul(2).filter(|&w| w <= hi)).collect())
}

fn hw_estimate(a: &HwArgs) -> anyhow::Result<()> {
    let archs: Vec<Arch> = match a.arch {
        HwArch::All => Arch::ALL.to_vec(),
        HwArch::Sr => vec![Arch::Sr],
        HwArch::If => vec![Arch::If],
        HwArch::Fb => vec![Arch::Fb],
    };
    let lengths = parse_len_range(&a.n_range)?;
    let mut out = a.output.open()?;
    let arch_names: Vec<String> = archs.iter().map(Arch::to_string).collect();
    writeln!(
        out,
        "# hw-estimate arch={} n_range={}",
        arch_names.join(" "),
        a.n_range
    )?;
    writeln!(
        out,
        "arch,N,dff,xor,mux,and,nand_equivalent,nand_exact,critical_path"
    )?;
    for &len in &lengths {
        for &arch in &archs {
            let r = resource_counts(arch, len)?;
            let counts = r.resources.map_or_else(
                || "NA,NA,NA,NA".to_string(),
                |c| format!("{},{},{},{}", c.dff, c.xor, c.mux, c.and),
            );
            let nand = r.nand_equivalent;
            let approx = *nand.numer() as f64 / *nand.denom() as f64;
            let path = r.critical_path.map_or_else(
                || "NA".to_string(),
                |p| {
                    p.iter()
                        .map(|(g, d)| format!("{g}:{d}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                },
            );
            writeln!(out, "{arch},{len},{counts},{approx:.2},{nand},{path}")?;
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_ranges() {
        assert_eq!(
            parse_len_range("2^10..2^12").unwrap(),
            vec![1024, 2048, 4096]
        );
        assert_eq!(parse_len_range("8..32").unwrap(), vec![8, 16, 32]);
        assert_eq!(parse_len_range("64").unwrap(), vec![64]);
        assert!(parse_len_range("12..16").is_err());
        assert!(parse_len_range("32..8").is_err());
    }

    #[test]
    fn sweeps() {
        assert_eq!(
            sweep_values(0.0, 3.0, 7).unwrap(),
            vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
        );
        assert_eq!(sweep_values(1.0, 1.0, 1).unwrap(), vec![1.0]);
        assert!(sweep_values(3.0, 0.0, 2).is_err());
        assert!(sweep_values(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn disagreeing_engines_are_a_contract_violation() {
        let a: BitVec = "0110".parse().unwrap();
        let b: BitVec = "0111".parse().unwrap();
        check_agreement(&[(Engine::Graph, a.clone()), (Engine::Sequential, a.clone())]).unwrap();
        let err = check_agreement(&[(Engine::Graph, a), (Engine::Sequential, b)]).unwrap_err();
        assert_eq!(exit_code(&err), 3);
    }

    #[test]
    fn exit_codes() {
        let usage = anyhow::Error::from(Error::InvalidArgument("x".into()));
        assert_eq!(exit_code(&usage), 2);
        let mismatch = anyhow::Error::from(Error::PartialSumMismatch {
            sum_index: 0,
            stage: 0,
            expected: 0,
            actual: 1,
        });
        assert_eq!(exit_code(&mismatch), 3);
    }

    #[test]
    fn trace_input_bounded() {
        assert_eq!(parse_trace_bits("1101", 8).unwrap().len(), 4);
        assert!(parse_trace_bits("111111111", 8).is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
