use super::{check_bit, MatrixGen, PsuArch, PsuModel, SumRequest};
use crate::bits::{BitVec, PackedBits};
use crate::code::PolarCode;
use crate::error::{invalid, Error, Result};

/// Shift-register partial-sums unit.
///
/// On every push all registers update at once from their old values:
///
/// ```text
/// R_0 <- u & c_0
/// R_k <- R_{k-1} ^ (u & c_k)      k > 0
/// ```
///
/// where `c` is the generator's current row; the generator then advances.
/// For decoding the width is N/2 and processing element `p` is hard-wired
/// to `R_p`. With width N and N pushes the register holds the codeword of
/// the pushed vector in reverse order.
#[derive(Clone, Debug)]
pub struct ShiftRegisterPsu {
    regs: PackedBits,
    gen: MatrixGen,
    steps: usize,
    budget: usize,
}

/// Gate tally of an SR-PSU instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SrTally {
    pub dff: usize,
    pub xor: usize,
    pub and: usize,
}

impl ShiftRegisterPsu {
    /// `width` registers accepting at most `budget` pushes.
    pub fn new(width: usize, budget: usize) -> Result<Self> {
        Ok(ShiftRegisterPsu {
            regs: PackedBits::zeros(width),
            gen: MatrixGen::new(width)?,
            steps: 0,
            budget,
        })
    }

    /// N/2 registers fed with the N decisions of one frame.
    pub fn for_decoder(code: &PolarCode) -> Self {
        let len = code.len();
        Self::new(len / 2, len).expect("N/2 is a power of two")
    }

    pub fn width(&self) -> usize {
        self.regs.len()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn registers(&self) -> BitVec {
        self.regs.to_bitvec()
    }

    /// Control row the next push will consume.
    pub fn control_row(&self) -> BitVec {
        self.gen.row()
    }

    pub fn generator(&self) -> &MatrixGen {
        &self.gen
    }

    pub fn shift_in(&mut self, u_hat: u8) -> Result<()> {
        check_bit(u_hat)?;
        if self.steps >= self.budget {
            return Err(Error::State(format!(
                "shift register already consumed its budget of {} steps",
                self.budget
            )));
        }
        self.regs.shift_up();
        if u_hat == 1 {
            self.regs.xor_assign(self.gen.control());
        }
        self.gen.step();
        self.steps += 1;
        Ok(())
    }

    /// Register tap `R_p`.
    pub fn tap(&self, p: usize) -> Result<u8> {
        if p >= self.width() {
            return Err(invalid(format!(
                "register index {p} outside [0, {})",
                self.width()
            )));
        }
        Ok(self.regs.get(p))
    }

    /// One DFF, one XOR and one AND per register, as drawn for the
    /// decoder's N/2-wide shift register.
    pub fn register_tally(&self) -> SrTally {
        let w = self.width();
        SrTally {
            dff: w,
            xor: w,
            and: w,
        }
    }

    /// Shift register plus matrix generator after constant propagation:
    /// `c_0 = 1` removes the AND and XOR on `R_0`, and `M_0` needs no XOR.
    pub fn reduced_tally(&self) -> SrTally {
        let w = self.width();
        SrTally {
            dff: 2 * w,
            xor: 2 * (w - 1),
            and: w - 1,
        }
    }
}

impl PsuModel for ShiftRegisterPsu {
    fn arch(&self) -> PsuArch {
        PsuArch::Sr
    }

    fn reset(&mut self) {
        self.regs.clear();
        self.gen.reset();
        self.steps = 0;
    }

    fn push(&mut self, u_hat: u8) -> Result<()> {
        self.shift_in(u_hat)
    }

    fn read(&self, req: SumRequest) -> Result<u8> {
        self.tap(req.pe)
    }

    fn pushed(&self) -> usize {
        self.steps
    }

    fn state_bits(&self) -> BitVec {
        self.registers()
    }
}
