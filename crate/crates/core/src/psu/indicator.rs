use super::{check_bit, PsuArch, PsuModel, SumRequest};
use crate::bits::BitVec;
use crate::code::{kernel_power_entry, MAX_LOG2};
use crate::error::{invalid, Error, Result};

/// Indicator-function partial-sums unit with N-1 single-bit cells.
///
/// Stage `j` owns `2^j` cells at offset `2^j - 1`; cell `(j, r)` holds
/// `S(b*2^j + r, j)` for the block `b` currently accumulating at that stage.
/// On each push the indicator enables the cells whose kernel-power entry
/// `(i mod 2^j, r)` is one, and a stage clears its cells when a new block
/// begins. A block's sums stay readable from the push that completes it
/// until the next push.
#[derive(Clone, Debug)]
pub struct IndicatorPsu {
    n: u32,
    cells: Vec<u8>,
    windows: Vec<Option<usize>>,
    pushed: usize,
}

impl IndicatorPsu {
    /// Unit for a code of length `2^n`.
    pub fn new(n: u32) -> Self {
        assert!(
            (1..=MAX_LOG2).contains(&n),
            "code exponent {n} out of range"
        );
        IndicatorPsu {
            n,
            cells: vec![0; (1usize << n) - 1],
            windows: vec![None; n as usize],
            pushed: 0,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    fn cell(j: u32, r: usize) -> usize {
        (1usize << j) - 1 + r
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Reads `S(i, j)`.
    pub fn read_sum(&self, i: usize, j: u32) -> Result<u8> {
        if j >= self.n || i >= 1usize << self.n {
            return Err(invalid(format!("partial sum S({i},{j}) out of range")));
        }
        let block = i >> j;
        let complete_at = (block + 1) << j;
        if self.pushed < complete_at {
            return Err(Error::State(format!(
                "S({i},{j}) read after {} pushes; window completes at {complete_at}",
                self.pushed
            )));
        }
        if self.windows[j as usize] != Some(block) {
            return Err(Error::State(format!(
                "S({i},{j}) already overwritten by a later window"
            )));
        }
        Ok(self.cells[Self::cell(j, i & ((1 << j) - 1))])
    }
}

impl PsuModel for IndicatorPsu {
    fn arch(&self) -> PsuArch {
        PsuArch::If
    }

    fn reset(&mut self) {
        self.cells.fill(0);
        self.windows.fill(None);
        self.pushed = 0;
    }

    fn push(&mut self, u_hat: u8) -> Result<()> {
        check_bit(u_hat)?;
        let i = self.pushed;
        if i >= 1usize << self.n {
            return Err(Error::State(format!("all {i} decisions already pushed")));
        }
        for j in 0..self.n {
            let width = 1usize << j;
            let offset = i & (width - 1);
            let base = Self::cell(j, 0);
            if offset == 0 {
                self.cells[base..base + width].fill(0);
                self.windows[j as usize] = Some(i >> j);
            }
            if u_hat == 0 {
                continue;
            }
            // Enabled cells are the r with entry (offset, r) = 1; walk them
            // as the submasks of `offset`.
            let mut r = offset;
            loop {
                debug_assert_eq!(kernel_power_entry(offset, r), 1);
                self.cells[base + r] ^= 1;
                if r == 0 {
                    break;
                }
                r = (r - 1) & offset;
            }
        }
        self.pushed += 1;
        Ok(())
    }

    fn read(&self, req: SumRequest) -> Result<u8> {
        self.read_sum(req.sum_index, req.stage)
    }

    fn pushed(&self) -> usize {
        self.pushed
    }

    fn state_bits(&self) -> BitVec {
        BitVec::try_from(self.cells.clone()).expect("cells hold bits")
    }
}
