use super::{check_bit, PsuArch, PsuModel, SumRequest};
use crate::bits::BitVec;
use crate::code::kernel_power_entry;
use crate::error::{Error, Result};

fn block_range(prefix_len: usize, i: usize, j: u32) -> Result<std::ops::Range<usize>> {
    let start = (i >> j) << j;
    let end = start + (1usize << j);
    if prefix_len < end {
        return Err(Error::Precondition(format!(
            "S({i},{j}) needs decisions {start}..{end} but only {prefix_len} are known"
        )));
    }
    Ok(start..end)
}

/// `S(i, j)` straight from the decisions: with `i = b*2^j + r`, the r-th
/// entry of the block `u_hat[b*2^j .. (b+1)*2^j]` times the j-th kernel
/// power.
pub fn oracle_partial_sum(u_hat: &[u8], i: usize, j: u32) -> Result<u8> {
    let block = block_range(u_hat.len(), i, j)?;
    let r = i & ((1usize << j) - 1);
    Ok(u_hat[block]
        .iter()
        .enumerate()
        .fold(0, |acc, (s, &u)| acc ^ (u & kernel_power_entry(s, r))))
}

/// All `2^j` sums of the block holding `i`, via the butterfly transform of
/// that block.
pub fn oracle_block_sums(u_hat: &[u8], i: usize, j: u32) -> Result<BitVec> {
    let block = block_range(u_hat.len(), i, j)?;
    let mut v = u_hat[block].to_vec();
    let len = v.len();
    let mut half = 1;
    while half < len {
        for base in (0..len).step_by(2 * half) {
            for k in base..base + half {
                v[k] ^= v[k + half];
            }
        }
        half *= 2;
    }
    BitVec::try_from(v)
}

/// Keeps the whole decision history and recomputes every read.
#[derive(Clone, Debug)]
pub struct OraclePsu {
    history: Vec<u8>,
    capacity: usize,
}

impl OraclePsu {
    pub fn new(code_len: usize) -> Self {
        OraclePsu {
            history: Vec::with_capacity(code_len),
            capacity: code_len,
        }
    }

    pub fn history(&self) -> &[u8] {
        &self.history
    }
}

impl PsuModel for OraclePsu {
    fn arch(&self) -> PsuArch {
        PsuArch::Oracle
    }

    fn reset(&mut self) {
        self.history.clear();
    }

    fn push(&mut self, u_hat: u8) -> Result<()> {
        check_bit(u_hat)?;
        if self.history.len() >= self.capacity {
            return Err(Error::State(format!(
                "all {} decisions already pushed",
                self.capacity
            )));
        }
        self.history.push(u_hat);
        Ok(())
    }

    fn read(&self, req: SumRequest) -> Result<u8> {
        oracle_partial_sum(&self.history, req.sum_index, req.stage)
    }

    fn pushed(&self) -> usize {
        self.history.len()
    }

    fn state_bits(&self) -> BitVec {
        BitVec::try_from(self.history.clone()).expect("history holds bits")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        for v in 0..16u32 {
            let u: Vec<u8> = (0..4).map(|k| ((v >> k) & 1) as u8).collect();
            assert_eq!(oracle_partial_sum(&u, 1, 2).unwrap(), u[1] ^ u[3]);
            for i in 0..4 {
                assert_eq!(oracle_partial_sum(&u, i, 0).unwrap(), u[i]);
            }
        }
        assert_eq!(oracle_partial_sum(&[1, 1], 0, 1).unwrap(), 0);
    }

    #[test]
    fn incomplete_block_is_precondition_error() {
        assert!(matches!(
            oracle_partial_sum(&[1, 0, 1], 0, 2),
            Err(Error::Precondition(_))
        ));
        assert!(oracle_block_sums(&[1], 0, 1).is_err());
    }

    proptest! {
        #[test]
        fn block_sums_agree_with_pointwise(
            bits in proptest::collection::vec(0u8..2, 64),
            j in 0u32..=6,
            b in 0usize..64,
        ) {
            let block = b >> j;
            let sums = oracle_block_sums(&bits, block << j, j).unwrap();
            for r in 0..(1usize << j) {
                let i = (block << j) + r;
                prop_assert_eq!(sums.get(r), oracle_partial_sum(&bits, i, j).unwrap());
            }
        }
    }
}
