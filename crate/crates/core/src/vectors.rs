//! Test-vector lines, one frame per line:
//!
//! ```text
//! seed,snr_db,u_hex,x_hex,llr_0,...,llr_{N-1},uhat_hex
//! ```
//!
//! Bit vectors use [`BitVec::to_hex`]. LLRs are printed in the shortest form that
//! round-trips so parsing a line gives back the exact `f64` values.

use crate::bits::BitVec;
use crate::decoder::LlrVec;
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct VectorLine {
    pub seed: u64,
    pub snr_db: f64,
    pub u: BitVec,
    pub x: BitVec,
    pub llrs: LlrVec,
    pub u_hat: BitVec,
}

impl VectorLine {
    pub fn to_line(&self) -> String {
        let mut out = format!(
            "{},{},{},{}",
            self.seed,
            self.snr_db,
            self.u.to_hex(),
            self.x.to_hex()
        );
        for v in self.llrs.as_slice() {
            out.push(',');
            out.push_str(&format!("{v:?}"));
        }
        out.push(',');
        out.push_str(&self.u_hat.to_hex());
        out
    }

    /// Parses a line for a code of length `code_len`.
    pub fn parse(line: &str, code_len: usize) -> Result<Self> {
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != code_len + 5 {
            return Err(invalid(format!(
                "expected {} fields for N = {code_len}, found {}",
                code_len + 5,
                fields.len()
            )));
        }
        let seed = fields[0]
            .parse()
            .map_err(|_| invalid(format!("bad seed {:?}", fields[0])))?;
        let snr_db = fields[1]
            .parse()
            .map_err(|_| invalid(format!("bad SNR {:?}", fields[1])))?;
        let llrs = fields[4..4 + code_len]
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| invalid(format!("bad LLR {f:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorLine {
            seed,
            snr_db,
            u: BitVec::from_hex(fields[2], code_len)?,
            x: BitVec::from_hex(fields[3], code_len)?,
            llrs: LlrVec::try_from(llrs)?,
            u_hat: BitVec::from_hex(fields[code_len + 4], code_len)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn layout() {
        let line = VectorLine {
            seed: 7,
            snr_db: 1.5,
            u: "00010111".parse().unwrap(),
            x: "11101000".parse().unwrap(),
            llrs: LlrVec::try_from(vec![-1.25, 0.1, 3.0, -0.0, 2.5, 1e-300, -7.0, 4.0]).unwrap(),
            u_hat: "00010111".parse().unwrap(),
        };
        let text = line.to_line();
        assert_eq!(
            text,
            "7,1.5,17,e8,-1.25,0.1,3.0,-0.0,2.5,1e-300,-7.0,4.0,17"
        );
        assert_eq!(VectorLine::parse(&text, 8).unwrap(), line);
        assert!(VectorLine::parse(&text, 4).is_err());
    }

    proptest! {
        #[test]
        fn llrs_survive_text(values in proptest::collection::vec(-1e6f64..1e6, 16)) {
            let line = VectorLine {
                seed: 1,
                snr_db: 0.5,
                u: BitVec::zeros(16),
                x: BitVec::zeros(16),
                llrs: LlrVec::try_from(values).unwrap(),
                u_hat: BitVec::zeros(16),
            };
            let back = VectorLine::parse(&line.to_line(), 16).unwrap();
            for (a, b) in back.llrs.as_slice().iter().zip(line.llrs.as_slice()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
