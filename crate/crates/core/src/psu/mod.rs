//! Partial-sums units.
//!
//! Every unit follows the same contract as a hardware PSU sitting next to a
//! line decoder: decided bits are pushed one per leaf in index order, and
//! between pushes the processing elements read the partial sums they need
//! for the current g stage. A [`SumRequest`] names both the logical sum
//! `S(sum_index, stage)` and the PE asking for it, so units that are wired
//! per PE (the shift register) and units addressed by sum (indicator
//! function, oracle) answer the same request.

mod checked;
mod feedback;
mod indicator;
mod matrixgen;
mod oracle;
mod shift_register;

use std::fmt;
use std::str::FromStr;

pub use checked::CrossChecked;
pub use feedback::{fb_psu_complexity, FbPsuComplexity};
pub use indicator::IndicatorPsu;
pub use matrixgen::MatrixGen;
pub use oracle::{oracle_block_sums, oracle_partial_sum, OraclePsu};
pub use shift_register::{ShiftRegisterPsu, SrTally};

use crate::bits::BitVec;
use crate::code::PolarCode;
use crate::error::{invalid, Error, Result};

/// One partial-sum read issued by a processing element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumRequest {
    /// `i` in `S(i, j)`.
    pub sum_index: usize,
    /// `j` in `S(i, j)`.
    pub stage: u32,
    /// Processing element issuing the read; also the shift-register tap.
    pub pe: usize,
}

pub trait PsuModel {
    fn arch(&self) -> PsuArch;

    /// Back to the all-zero power-on state.
    fn reset(&mut self);

    /// Accepts the next decided bit.
    fn push(&mut self, u_hat: u8) -> Result<()>;

    fn read(&self, req: SumRequest) -> Result<u8>;

    /// Number of bits pushed since the last reset.
    fn pushed(&self) -> usize;

    /// Raw storage contents, for traces.
    fn state_bits(&self) -> BitVec;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PsuArch {
    /// Shift-register PSU driven by the LFSR matrix generator.
    Sr,
    /// Indicator-function PSU with N-1 accumulating cells.
    If,
    /// Brute-force recomputation from the decision history.
    Oracle,
}

impl PsuArch {
    pub const ALL: [PsuArch; 3] = [PsuArch::Sr, PsuArch::If, PsuArch::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            PsuArch::Sr => "sr",
            PsuArch::If => "if",
            PsuArch::Oracle => "oracle",
        }
    }
}

impl fmt::Display for PsuArch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PsuArch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sr" => Ok(PsuArch::Sr),
            "if" => Ok(PsuArch::If),
            "oracle" => Ok(PsuArch::Oracle),
            other => Err(invalid(format!("unknown PSU architecture {other:?}"))),
        }
    }
}

/// Runtime-selected PSU.
#[derive(Clone, Debug)]
pub enum AnyPsu {
    Sr(ShiftRegisterPsu),
    If(IndicatorPsu),
    Oracle(OraclePsu),
}

impl AnyPsu {
    /// A unit sized for decoding `code`.
    pub fn for_code(arch: PsuArch, code: &PolarCode) -> Self {
        match arch {
            PsuArch::Sr => AnyPsu::Sr(ShiftRegisterPsu::for_decoder(code)),
            PsuArch::If => AnyPsu::If(IndicatorPsu::new(code.n())),
            PsuArch::Oracle => AnyPsu::Oracle(OraclePsu::new(code.len())),
        }
    }

    fn inner(&self) -> &dyn PsuModel {
        match self {
            AnyPsu::Sr(p) => p,
            AnyPsu::If(p) => p,
            AnyPsu::Oracle(p) => p,
        }
    }

    fn inner_mut(&mut self) -> &mut dyn PsuModel {
        match self {
            AnyPsu::Sr(p) => p,
            AnyPsu::If(p) => p,
            AnyPsu::Oracle(p) => p,
        }
    }
}

impl PsuModel for AnyPsu {
    fn arch(&self) -> PsuArch {
        self.inner().arch()
    }

    fn reset(&mut self) {
        self.inner_mut().reset()
    }

    fn push(&mut self, u_hat: u8) -> Result<()> {
        self.inner_mut().push(u_hat)
    }

    fn read(&self, req: SumRequest) -> Result<u8> {
        self.inner().read(req)
    }

    fn pushed(&self) -> usize {
        self.inner().pushed()
    }

    fn state_bits(&self) -> BitVec {
        self.inner().state_bits()
    }
}

impl<P: PsuModel + ?Sized> PsuModel for &mut P {
    fn arch(&self) -> PsuArch {
        (**self).arch()
    }

    fn reset(&mut self) {
        (**self).reset()
    }

    fn push(&mut self, u_hat: u8) -> Result<()> {
        (**self).push(u_hat)
    }

    fn read(&self, req: SumRequest) -> Result<u8> {
        (**self).read(req)
    }

    fn pushed(&self) -> usize {
        (**self).pushed()
    }

    fn state_bits(&self) -> BitVec {
        (**self).state_bits()
    }
}

pub(crate) fn check_bit(bit: u8) -> Result<()> {
    if bit > 1 {
        Err(invalid(format!("{bit} is not a bit")))
    } else {
        Ok(())
    }
}
