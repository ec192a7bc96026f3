use crate::bits::{BitVec, PackedBits};
use crate::error::{invalid, Result};

/// LFSR that emits the rows of the control matrix, one per step.
///
/// The state starts at `[1, 0, .., 0]` and advances with
/// `M_0 <- 1`, `M_k <- M_k ^ M_{k-1}`. For a width `W = 2^m` the state
/// sequence walks the rows of the m-th Kronecker power of the kernel and
/// wraps to row 0 after `W` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGen {
    row: PackedBits,
    row_index: usize,
}

impl MatrixGen {
    pub fn new(width: usize) -> Result<Self> {
        if !width.is_power_of_two() {
            return Err(invalid(format!(
                "generator width {width} is not a power of two"
            )));
        }
        let mut row = PackedBits::zeros(width);
        row.set(0, 1);
        Ok(MatrixGen { row, row_index: 0 })
    }

    pub fn width(&self) -> usize {
        self.row.len()
    }

    /// Number of steps taken since reset.
    pub fn row_index(&self) -> usize {
        self.row_index
    }

    pub fn row(&self) -> BitVec {
        self.row.to_bitvec()
    }

    #[inline]
    pub fn bit(&self, k: usize) -> u8 {
        self.row.get(k)
    }

    pub(crate) fn control(&self) -> &PackedBits {
        &self.row
    }

    pub fn step(&mut self) {
        self.row.xor_shifted_self();
        self.row.set(0, 1);
        self.row_index += 1;
    }

    pub fn reset(&mut self) {
        self.row.clear();
        self.row.set(0, 1);
        self.row_index = 0;
    }
}

impl Iterator for MatrixGen {
    type Item = BitVec;

    /// Current row, then advance.
    fn next(&mut self) -> Option<BitVec> {
        let row = self.row();
        self.step();
        Some(row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::kronecker_power;

    fn rows(width: usize, count: usize) -> Vec<String> {
        MatrixGen::new(width)
            .unwrap()
            .take(count)
            .map(|r| r.to_string())
            .collect()
    }

    #[test]
    fn initial_rows() {
        assert_eq!(rows(4, 1), ["1000"]);
        assert_eq!(rows(1, 1), ["1"]);
        assert_eq!(rows(8, 1), ["10000000"]);
    }

    #[test]
    fn step_sequences() {
        assert_eq!(rows(4, 5), ["1000", "1100", "1010", "1111", "1000"]);
        assert_eq!(rows(2, 3), ["10", "11", "10"]);
        assert_eq!(rows(1, 2), ["1", "1"]);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(MatrixGen::new(0).is_err());
        assert!(MatrixGen::new(6).is_err());
    }

    #[test]
    fn walks_kronecker_rows_twice() {
        for m in 0..=8u32 {
            let w = 1usize << m;
            let kron = kronecker_power(m).unwrap();
            let mut gen = MatrixGen::new(w).unwrap();
            for i in 0..2 * w {
                assert_eq!(gen.row_index(), i);
                assert_eq!(gen.row(), kron.row(i % w), "m={m} step {i}");
                gen.step();
            }
        }
    }

    #[test]
    fn reset_restores_row_zero() {
        let mut gen = MatrixGen::new(16).unwrap();
        for _ in 0..5 {
            gen.step();
        }
        gen.reset();
        assert_eq!(gen, MatrixGen::new(16).unwrap());
    }
}
