use std::cell::Cell;

use super::{OraclePsu, PsuArch, PsuModel, SumRequest};
use crate::bits::BitVec;
use crate::error::{Error, Result};

/// Runs a unit in lockstep with an [`OraclePsu`] and fails any read whose
/// value differs from the oracle's.
#[derive(Clone, Debug)]
pub struct CrossChecked<P> {
    inner: P,
    oracle: OraclePsu,
    reads: Cell<u64>,
}

impl<P: PsuModel> CrossChecked<P> {
    pub fn new(inner: P, code_len: usize) -> Self {
        CrossChecked {
            inner,
            oracle: OraclePsu::new(code_len),
            reads: Cell::new(0),
        }
    }

    /// Reads verified since construction.
    pub fn reads_checked(&self) -> u64 {
        self.reads.get()
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    pub fn into_inner(self) -> P {
        self.inner
    }
}

impl<P: PsuModel> PsuModel for CrossChecked<P> {
    fn arch(&self) -> PsuArch {
        self.inner.arch()
    }

    fn reset(&mut self) {
        self.inner.reset();
        self.oracle.reset();
    }

    fn push(&mut self, u_hat: u8) -> Result<()> {
        self.inner.push(u_hat)?;
        self.oracle.push(u_hat)
    }

    fn read(&self, req: SumRequest) -> Result<u8> {
        let expected = self.oracle.read(req)?;
        let actual = self.inner.read(req)?;
        if expected != actual {
            return Err(Error::PartialSumMismatch {
                sum_index: req.sum_index,
                stage: req.stage,
                expected,
                actual,
            });
        }
        self.reads.set(self.reads.get() + 1);
        Ok(actual)
    }

    fn pushed(&self) -> usize {
        self.inner.pushed()
    }

    fn state_bits(&self) -> BitVec {
        self.inner.state_bits()
    }
}
