//! Monte-Carlo frame simulation.
//!
//! Trial `t` of a run draws its information bits and its channel noise from
//! stream `t` of the run seed, so every trial is reproducible on its own and
//! results do not depend on how trials are spread over threads. The same
//! trial index sees the same message and the same normalized noise at every
//! sweep point.
//!
//! With the `parallel` feature (default) trials of a chunk run on the rayon
//! pool; without it, or with [`Execution::Sequential`], they run in order on
//! the calling thread. Both paths produce identical statistics.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::bits::BitVec;
use crate::channel::{bec_llrs_with, bpsk_llr, stream_rng, SnrPoint};
use crate::code::PolarCode;
use crate::decoder::{sc_decode_reference, DecodeResult, LlrVec, ScDecoder};
use crate::encoder::{encode_graph, expand};
use crate::error::{invalid, Error, Result};
use crate::psu::{AnyPsu, CrossChecked, PsuArch, PsuModel};
use crate::schedule::DecodeSchedule;

/// Trials handed to the worker pool at a time.
const CHUNK: u64 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    /// BPSK over AWGN; sweep values are Eb/N0 in dB.
    Awgn,
    /// Binary erasure channel; sweep values are erasure probabilities.
    Bec,
    /// BPSK without noise; sweep values set the LLR scale as for AWGN.
    Noiseless,
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::Bec => "bec",
            ChannelKind::Noiseless => "noiseless",
        })
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "awgn" => Ok(ChannelKind::Awgn),
            "bec" => Ok(ChannelKind::Bec),
            "noiseless" => Ok(ChannelKind::Noiseless),
            other => Err(invalid(format!("unknown channel {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    /// Rayon pool when the `parallel` feature is on, sequential otherwise.
    #[default]
    Parallel,
    Sequential,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub channel: ChannelKind,
    /// One entry per sweep point, interpreted per [`ChannelKind`].
    pub points: Vec<f64>,
    /// Trials per point; an upper bound when stopping on frame errors.
    pub trials: u64,
    pub stop_after_frame_errors: Option<u64>,
    pub seed: u64,
    pub psu: PsuArch,
    pub execution: Execution,
}

impl SimConfig {
    pub fn awgn_sweep(
        start_db: f64,
        stop_db: f64,
        points: usize,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        Ok(SimConfig {
            channel: ChannelKind::Awgn,
            points: SnrPoint::sweep(start_db, stop_db, points)?
                .into_iter()
                .map(|p| p.ebn0_db)
                .collect(),
            trials,
            stop_after_frame_errors: None,
            seed,
            psu: PsuArch::Sr,
            execution: Execution::default(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(invalid("at least one sweep point is required"));
        }
        if self.trials == 0 {
            return Err(invalid("at least one trial per point is required"));
        }
        if self.stop_after_frame_errors == Some(0) {
            return Err(invalid("frame-error target must be positive"));
        }
        for &p in &self.points {
            match self.channel {
                ChannelKind::Bec if !(0.0..1.0).contains(&p) => {
                    return Err(invalid(format!("erasure probability {p} outside [0, 1)")))
                }
                _ if !p.is_finite() => return Err(invalid(format!("sweep value {p} not finite"))),
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointStats {
    pub param: f64,
    pub trials: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    /// Information bits per frame.
    pub info_bits: u64,
}

impl PointStats {
    pub fn ber(&self) -> f64 {
        let bits = self.trials * self.info_bits;
        if bits == 0 {
            0.0
        } else {
            self.bit_errors as f64 / bits as f64
        }
    }

    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.trials as f64
    }

    /// Wilson score interval for the frame error rate at normal quantile `z`.
    pub fn fer_interval(&self, z: f64) -> (f64, f64) {
        wilson_interval(self.frame_errors, self.trials, z)
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Transmitted side of one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub info: BitVec,
    pub u: BitVec,
    pub x: BitVec,
    pub llrs: LlrVec,
}

/// One simulated frame and its decode.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub info: BitVec,
    pub u: BitVec,
    pub x: BitVec,
    pub llrs: LlrVec,
    pub decoded: DecodeResult,
}

impl TrialRecord {
    pub fn bit_errors(&self) -> u64 {
        self.decoded.info_hat.hamming_distance(&self.info) as u64
    }
}

/// Per-thread decoding state.
#[derive(Clone, Debug)]
pub struct Workspace {
    decoder: ScDecoder,
    psu: AnyPsu,
}

#[derive(Clone, Debug)]
pub struct Simulator {
    code: PolarCode,
    schedule: Arc<DecodeSchedule>,
    config: SimConfig,
}

impl Simulator {
    pub fn new(code: PolarCode, config: SimConfig) -> Result<Self> {
        config.validate()?;
        if config.channel != ChannelKind::Bec && code.dimension() == 0 {
            return Err(invalid("AWGN sweeps need a code of positive dimension"));
        }
        let schedule = Arc::new(DecodeSchedule::line(code.n()));
        Ok(Simulator {
            code,
            schedule,
            config,
        })
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn workspace(&self) -> Workspace {
        Workspace {
            decoder: ScDecoder::with_schedule(&self.code, Arc::clone(&self.schedule)),
            psu: AnyPsu::for_code(self.config.psu, &self.code),
        }
    }

    /// Frame of trial `trial` at sweep value `param`.
    pub fn frame(&self, param: f64, trial: u64) -> Result<Frame> {
        let code = &self.code;
        let mut rng = stream_rng(self.config.seed, trial);
        let info = BitVec::from_bools((0..code.dimension()).map(|_| rng.random::<bool>()));
        let u = expand(code, &info)?;
        let x = encode_graph(code, &u)?;
        let llrs = match self.config.channel {
            ChannelKind::Awgn | ChannelKind::Noiseless => {
                let sigma = SnrPoint::new(param)?.sigma(code.rate());
                let noiseless = self.config.channel == ChannelKind::Noiseless;
                let values = x
                    .iter()
                    .map(|b| {
                        let noise: f64 = rng.sample(StandardNormal);
                        bpsk_llr(b, if noiseless { 0.0 } else { noise }, sigma)
                    })
                    .collect::<Vec<_>>();
                LlrVec::try_from(values)?
            }
            ChannelKind::Bec => bec_llrs_with(&x, param, &mut rng)?,
        };
        Ok(Frame {
            info,
            u: u.into_bits(),
            x,
            llrs,
        })
    }

    pub fn trial(&self, param: f64, trial: u64, ws: &mut Workspace) -> Result<TrialRecord> {
        let Frame { info, u, x, llrs } = self.frame(param, trial)?;
        let decoded = ws.decoder.decode(&llrs, &mut ws.psu)?;
        Ok(TrialRecord {
            trial,
            info,
            u,
            x,
            llrs,
            decoded,
        })
    }

    fn trial_errors(&self, param: f64, trial: u64, ws: &mut Workspace) -> Result<u32> {
        let frame = self.frame(param, trial)?;
        let decoded = ws.decoder.decode(&frame.llrs, &mut ws.psu)?;
        Ok(decoded.info_hat.hamming_distance(&frame.info) as u32)
    }

    fn run_chunk(&self, param: f64, trials: std::ops::Range<u64>) -> Result<Vec<u32>> {
        match self.config.execution {
            Execution::Parallel => self.run_chunk_parallel(param, trials),
            Execution::Sequential => {
                let mut ws = self.workspace();
                trials
                    .map(|t| self.trial_errors(param, t, &mut ws))
                    .collect()
            }
        }
    }

    #[cfg(feature = "parallel")]
    fn run_chunk_parallel(&self, param: f64, trials: std::ops::Range<u64>) -> Result<Vec<u32>> {
        use rayon::prelude::*;
        trials
            .into_par_iter()
            .map_init(|| self.workspace(), |ws, t| self.trial_errors(param, t, ws))
            .collect()
    }

    #[cfg(not(feature = "parallel"))]
    fn run_chunk_parallel(&self, param: f64, trials: std::ops::Range<u64>) -> Result<Vec<u32>> {
        let mut ws = self.workspace();
        trials
            .map(|t| self.trial_errors(param, t, &mut ws))
            .collect()
    }

    pub fn run_point(&self, param: f64) -> Result<PointStats> {
        let mut stats = PointStats {
            param,
            trials: 0,
            bit_errors: 0,
            frame_errors: 0,
            info_bits: self.code.dimension() as u64,
        };
        let mut start = 0;
        while start < self.config.trials {
            let end = (start + CHUNK).min(self.config.trials);
            for errors in self.run_chunk(param, start..end)? {
                stats.trials += 1;
                stats.bit_errors += u64::from(errors);
                stats.frame_errors += u64::from(errors > 0);
                if self
                    .config
                    .stop_after_frame_errors
                    .is_some_and(|target| stats.frame_errors >= target)
                {
                    return Ok(stats);
                }
            }
            start = end;
        }
        Ok(stats)
    }

    pub fn run(&self) -> Result<Vec<PointStats>> {
        self.config
            .points
            .iter()
            .map(|&p| self.run_point(p))
            .collect()
    }
}

/// Outcome of decoding frames with a PSU under oracle supervision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub frames: u64,
    /// PSU reads compared against the oracle.
    pub reads_checked: u64,
    /// Frames whose decisions or leaf LLRs differed from the reference.
    pub reference_mismatches: u64,
}

/// Decodes each frame of a sweep with `arch` wrapped in [`CrossChecked`]
/// and compares the result with [`sc_decode_reference`]. Any PSU read that
/// differs from the oracle aborts with [`Error::PartialSumMismatch`].
pub fn verify_against_reference(sim: &Simulator, arch: PsuArch) -> Result<VerifyReport> {
    let per_point = sim.config.trials;
    let run_point = |param: f64| -> Result<VerifyReport> {
        let mut report = VerifyReport::default();
        let mut decoder = ScDecoder::with_schedule(&sim.code, Arc::clone(&sim.schedule));
        let mut psu = CrossChecked::new(AnyPsu::for_code(arch, &sim.code), sim.code.len());
        for t in 0..per_point {
            let frame = sim.frame(param, t)?;
            let got = decoder.decode(&frame.llrs, &mut psu)?;
            let reference = sc_decode_reference(&sim.code, &frame.llrs)?;
            report.frames += 1;
            if got.u_hat != reference.u_hat
                || got
                    .leaf_llrs
                    .iter()
                    .zip(&reference.leaf_llrs)
                    .any(|(a, b)| a.to_bits() != b.to_bits())
            {
                report.reference_mismatches += 1;
            }
        }
        report.reads_checked = psu.reads_checked();
        debug_assert_eq!(psu.pushed(), sim.code.len());
        Ok(report)
    };

    let reports: Vec<VerifyReport> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            sim.config
                .points
                .par_iter()
                .map(|&p| run_point(p))
                .collect::<Result<_>>()?
        }
        #[cfg(not(feature = "parallel"))]
        {
            sim.config
                .points
                .iter()
                .map(|&p| run_point(p))
                .collect::<Result<_>>()?
        }
    };
    Ok(reports
        .into_iter()
        .fold(VerifyReport::default(), |acc, r| VerifyReport {
            frames: acc.frames + r.frames,
            reads_checked: acc.reads_checked + r.reads_checked,
            reference_mismatches: acc.reference_mismatches + r.reference_mismatches,
        }))
}
