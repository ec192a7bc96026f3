//! Min-sum successive cancellation decoding.
//!
//! [`ScDecoder`] is the line decoder: it runs the [`DecodeSchedule`] clock by
//! clock, keeps one LLR block per stage and takes its partial sums from a
//! pluggable [`PsuModel`]. [`sc_decode_reference`] recomputes every leaf from
//! the channel with partial sums taken straight from the decision history,
//! and exists to check the former.

use std::sync::Arc;

use crate::bits::BitVec;
use crate::code::PolarCode;
use crate::encoder::extract;
use crate::error::{invalid, Error, Result};
use crate::psu::{oracle_block_sums, PsuModel};
use crate::schedule::{DecodeSchedule, OpKind};

/// Check-node update; `sign(0)` counts as positive.
#[inline]
pub fn f_min_sum(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

/// Variable-node update conditioned on the partial sum `s`.
#[inline]
pub fn g_func(a: f64, b: f64, s: u8) -> f64 {
    if s == 0 {
        b + a
    } else {
        b - a
    }
}

/// Hard decision; a zero LLR decides 1.
#[inline]
pub fn decide(llr: f64) -> u8 {
    u8::from(llr <= 0.0 || llr.is_nan())
}

/// Channel or leaf LLRs, positive favoring bit 0. All values finite.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrVec(Vec<f64>);

impl LlrVec {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every value multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Result<LlrVec> {
        LlrVec::try_from(self.0.iter().map(|v| v * alpha).collect::<Vec<_>>())
    }
}

impl TryFrom<Vec<f64>> for LlrVec {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("LLR {pos} is not finite")));
        }
        Ok(LlrVec(values))
    }
}

impl From<LlrVec> for Vec<f64> {
    fn from(v: LlrVec) -> Self {
        v.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    /// All N decisions, frozen positions included.
    pub u_hat: BitVec,
    /// Decisions on the information positions.
    pub info_hat: BitVec,
    /// `λ(i, 0)` for every leaf.
    pub leaf_llrs: Vec<f64>,
}

/// Line SC decoder with reusable per-stage LLR storage.
#[derive(Clone, Debug)]
pub struct ScDecoder {
    code: PolarCode,
    schedule: Arc<DecodeSchedule>,
    /// `stages[j]` holds the current `2^j`-edge block of stage j; the last
    /// entry holds the channel LLRs.
    stages: Vec<Vec<f64>>,
}

impl ScDecoder {
    pub fn new(code: &PolarCode) -> Self {
        Self::with_schedule(code, Arc::new(DecodeSchedule::line(code.n())))
    }

    /// Shares an existing schedule, which must match the code length.
    pub fn with_schedule(code: &PolarCode, schedule: Arc<DecodeSchedule>) -> Self {
        assert_eq!(schedule.n(), code.n(), "schedule built for another length");
        let n = code.n();
        let stages = (0..=n).map(|j| vec![0.0; 1 << j]).collect();
        ScDecoder {
            code: code.clone(),
            schedule,
            stages,
        }
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn schedule(&self) -> &DecodeSchedule {
        &self.schedule
    }

    /// Decodes one frame. The PSU is reset first and receives every
    /// decision in leaf order.
    pub fn decode<P: PsuModel + ?Sized>(
        &mut self,
        channel: &LlrVec,
        psu: &mut P,
    ) -> Result<DecodeResult> {
        let n = self.code.n() as usize;
        let len = self.code.len();
        if channel.len() != len {
            return Err(invalid(format!(
                "{} channel LLRs for a code of length {len}",
                channel.len()
            )));
        }
        psu.reset();
        self.stages[n].copy_from_slice(channel.as_slice());
        let mut u_hat = BitVec::zeros(len);
        let mut leaf_llrs = vec![0.0; len];

        for op in self.schedule.ops() {
            let j = op.stage as usize;
            let w = op.width();
            let (lower, upper) = self.stages.split_at_mut(j + 1);
            let child = &mut lower[j];
            let parent = &upper[0];
            match op.kind {
                OpKind::F => {
                    for r in 0..w {
                        child[r] = f_min_sum(parent[r], parent[r + w]);
                    }
                }
                OpKind::G => {
                    for a in op.pe_assignments() {
                        let r = a.edge - (op.block << op.stage);
                        let s = psu.read(op.sum_request(&a))?;
                        child[r] = g_func(parent[r], parent[r + w], s);
                    }
                }
            }
            if let Some(i) = op.leaf() {
                let llr = self.stages[0][0];
                let bit = if self.code.is_frozen(i) {
                    0
                } else {
                    decide(llr)
                };
                leaf_llrs[i] = llr;
                u_hat.set(i, bit);
                psu.push(bit)?;
            }
        }

        Ok(DecodeResult {
            info_hat: extract(&self.code, &u_hat),
            u_hat,
            leaf_llrs,
        })
    }
}

/// One-shot line decode.
pub fn sc_decode<P: PsuModel + ?Sized>(
    code: &PolarCode,
    channel: &LlrVec,
    psu: &mut P,
) -> Result<DecodeResult> {
    ScDecoder::new(code).decode(channel, psu)
}

/// Reference decoder: each leaf LLR is rebuilt from the channel along its
/// own path, and each g step takes its partial sums from the decisions made
/// so far. Nothing is reused between leaves.
pub fn sc_decode_reference(code: &PolarCode, channel: &LlrVec) -> Result<DecodeResult> {
    let n = code.n();
    let len = code.len();
    if channel.len() != len {
        return Err(invalid(format!(
            "{} channel LLRs for a code of length {len}",
            channel.len()
        )));
    }
    let mut decided: Vec<u8> = Vec::with_capacity(len);
    let mut leaf_llrs = Vec::with_capacity(len);

    for i in 0..len {
        let mut parent = channel.as_slice().to_vec();
        for j in (0..n).rev() {
            let w = 1usize << j;
            let block = i >> j;
            let child: Vec<f64> = if block & 1 == 0 {
                (0..w)
                    .map(|r| f_min_sum(parent[r], parent[r + w]))
                    .collect()
            } else {
                let sums = oracle_block_sums(&decided, (block - 1) << j, j)?;
                (0..w)
                    .map(|r| g_func(parent[r], parent[r + w], sums.get(r)))
                    .collect()
            };
            parent = child;
        }
        let llr = parent[0];
        leaf_llrs.push(llr);
        decided.push(if code.is_frozen(i) { 0 } else { decide(llr) });
    }

    let u_hat = BitVec::try_from(decided)?;
    Ok(DecodeResult {
        info_hat: extract(code, &u_hat),
        u_hat,
        leaf_llrs,
    })
}
