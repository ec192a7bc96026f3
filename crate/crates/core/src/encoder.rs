//! Three encoders computing `X = U * kernel^(⊗n)`: the dense generator
//! product, the butterfly graph, and the sequential shift-register encoder.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitVec;
use crate::code::{kronecker_power, PolarCode};
use crate::error::{invalid, Error, Result};
use crate::psu::ShiftRegisterPsu;

/// N-bit input vector with zeros at every frozen position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedInfoVector(BitVec);

impl ExtendedInfoVector {
    pub fn new(code: &PolarCode, u: BitVec) -> Result<Self> {
        if u.len() != code.len() {
            return Err(invalid(format!(
                "extended vector has {} bits, code length is {}",
                u.len(),
                code.len()
            )));
        }
        if let Some(i) = (0..u.len()).find(|&i| code.is_frozen(i) && u.get(i) == 1) {
            return Err(invalid(format!("frozen position {i} carries a one")));
        }
        Ok(ExtendedInfoVector(u))
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_bits(self) -> BitVec {
        self.0
    }

    fn check_len(&self, code: &PolarCode) -> Result<()> {
        if self.len() != code.len() {
            return Err(invalid(format!(
                "vector of length {} for a code of length {}",
                self.len(),
                code.len()
            )));
        }
        Ok(())
    }
}

/// Places the K information bits on the non-frozen positions, ascending.
pub fn expand(code: &PolarCode, info: &BitVec) -> Result<ExtendedInfoVector> {
    if info.len() != code.dimension() {
        return Err(invalid(format!(
            "{} information bits for a code of dimension {}",
            info.len(),
            code.dimension()
        )));
    }
    let mut u = BitVec::zeros(code.len());
    for (&pos, b) in code.info_indices().iter().zip(info.iter()) {
        u.set(pos, b);
    }
    Ok(ExtendedInfoVector(u))
}

/// Information bits of an N-bit vector (the non-frozen positions).
pub fn extract(code: &PolarCode, u: &BitVec) -> BitVec {
    BitVec::from_bools(code.info_indices().iter().map(|&i| u.get(i) == 1))
}

/// Dense product with the generator; limited to the dense-matrix cap.
pub fn encode_matrix(code: &PolarCode, u: &ExtendedInfoVector) -> Result<BitVec> {
    u.check_len(code)?;
    kronecker_power(code.n())?.left_multiply(u.bits())
}

/// In-place butterfly transform: `n` stages of `N/2` XORs.
pub fn polar_transform(bits: &mut [u8]) {
    let len = bits.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= b;
            }
        }
        half *= 2;
    }
}

/// Propagates `u` through the encoder graph.
pub fn encode_graph(code: &PolarCode, u: &ExtendedInfoVector) -> Result<BitVec> {
    u.check_len(code)?;
    let mut x = u.bits().clone();
    polar_transform(x.as_mut_slice());
    Ok(x)
}

/// Shifts `u` into an N-wide shift register driven by an N-wide matrix
/// generator; after N steps the register holds the codeword reversed,
/// `X[j] = R[N-1-j]`.
pub fn sequential_encode(code: &PolarCode, u: &ExtendedInfoVector) -> Result<BitVec> {
    u.check_len(code)?;
    let mut sr = ShiftRegisterPsu::new(code.len(), code.len())?;
    for b in u.bits().iter() {
        sr.shift_in(b)?;
    }
    Ok(sr.registers().reversed())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Matrix,
    Graph,
    Sequential,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Matrix, Engine::Graph, Engine::Sequential];

    pub fn encode(self, code: &PolarCode, u: &ExtendedInfoVector) -> Result<BitVec> {
        match self {
            Engine::Matrix => encode_matrix(code, u),
            Engine::Graph => encode_graph(code, u),
            Engine::Sequential => sequential_encode(code, u),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Matrix => "matrix",
            Engine::Graph => "graph",
            Engine::Sequential => "sequential",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix" => Ok(Engine::Matrix),
            "graph" => Ok(Engine::Graph),
            "sequential" => Ok(Engine::Sequential),
            other => Err(invalid(format!("unknown encoder engine {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ext(code: &PolarCode, s: &str) -> ExtendedInfoVector {
        ExtendedInfoVector::new(code, s.parse().unwrap()).unwrap()
    }

    fn all_engines(code: &PolarCode, u: &ExtendedInfoVector) -> BitVec {
        let outs: Vec<BitVec> = Engine::ALL
            .iter()
            .map(|e| e.encode(code, u).unwrap())
            .collect();
        assert_eq!(outs[0], outs[1]);
        assert_eq!(outs[1], outs[2]);
        outs[0].clone()
    }

    #[test]
    fn expand_examples() {
        let c = PolarCode::new(2, [0, 1]).unwrap();
        assert_eq!(
            expand(&c, &"10".parse().unwrap())
                .unwrap()
                .bits()
                .to_string(),
            "0010"
        );
        let c = PolarCode::rate_one(2).unwrap();
        assert_eq!(
            expand(&c, &"1101".parse().unwrap())
                .unwrap()
                .bits()
                .to_string(),
            "1101"
        );
        let c = PolarCode::new(1, [0]).unwrap();
        assert_eq!(
            expand(&c, &"1".parse().unwrap())
                .unwrap()
                .bits()
                .to_string(),
            "01"
        );
        assert!(expand(&c, &"11".parse().unwrap()).is_err());
    }

    #[test]
    fn extended_vector_rejects_ones_on_frozen() {
        let c = PolarCode::new(2, [0, 1]).unwrap();
        assert!(ExtendedInfoVector::new(&c, "0100".parse().unwrap()).is_err());
        assert!(ExtendedInfoVector::new(&c, "001".parse().unwrap()).is_err());
    }

    #[test]
    fn unit_vectors_of_length_eight() {
        let c = PolarCode::rate_one(3).unwrap();
        assert_eq!(
            all_engines(&c, &ext(&c, "00000001")).to_string(),
            "11111111"
        );
        assert_eq!(
            all_engines(&c, &ext(&c, "10000000")).to_string(),
            "10000000"
        );
    }

    #[test]
    fn small_examples() {
        let c = PolarCode::rate_one(2).unwrap();
        // rows 1 and 2 of the second power: 1100 ^ 1010
        assert_eq!(all_engines(&c, &ext(&c, "0110")).to_string(), "0110");
        let c = PolarCode::rate_one(1).unwrap();
        assert_eq!(all_engines(&c, &ext(&c, "11")).to_string(), "01");
        assert_eq!(all_engines(&c, &ext(&c, "10")).to_string(), "10");
    }

    #[test]
    fn sequential_register_before_readout() {
        let c = PolarCode::rate_one(1).unwrap();
        let mut sr = ShiftRegisterPsu::new(2, 2).unwrap();
        sr.shift_in(1).unwrap();
        sr.shift_in(0).unwrap();
        assert_eq!(sr.registers().to_string(), "01");
        assert_eq!(
            sequential_encode(&c, &ext(&c, "10")).unwrap().to_string(),
            "10"
        );
    }

    #[test]
    fn matrix_engine_respects_cap() {
        let c = PolarCode::rate_one(15).unwrap();
        let u = ExtendedInfoVector::new(&c, BitVec::zeros(1 << 15)).unwrap();
        assert!(matches!(
            encode_matrix(&c, &u),
            Err(Error::SizeLimit { .. })
        ));
        assert!(encode_graph(&c, &u).is_ok());
    }

    #[test]
    fn wrong_code_length() {
        let c2 = PolarCode::rate_one(2).unwrap();
        let c3 = PolarCode::rate_one(3).unwrap();
        let u = ext(&c2, "1010");
        for e in Engine::ALL {
            assert!(e.encode(&c3, &u).is_err());
        }
    }

    proptest! {
        #[test]
        fn engines_agree(n in 1u32..=8, seed in any::<u64>()) {
            let c = PolarCode::rate_one(n).unwrap();
            let bits: Vec<u8> = (0..c.len()).map(|i| ((seed.rotate_left(i as u32 % 64) ^ (i as u64 * 0x9e37)) & 1) as u8).collect();
            let u = ExtendedInfoVector::new(&c, BitVec::try_from(bits).unwrap()).unwrap();
            all_engines(&c, &u);
        }

        #[test]
        fn rate_one_involution(bits in proptest::collection::vec(0u8..2, 128)) {
            let c = PolarCode::rate_one(7).unwrap();
            let u = ExtendedInfoVector::new(&c, BitVec::try_from(bits).unwrap()).unwrap();
            let x = encode_graph(&c, &u).unwrap();
            let back = encode_graph(&c, &ExtendedInfoVector::new(&c, x).unwrap()).unwrap();
            prop_assert_eq!(&back, u.bits());
        }

        #[test]
        fn linearity(a in proptest::collection::vec(0u8..2, 64), b in proptest::collection::vec(0u8..2, 64)) {
            let c = PolarCode::rate_one(6).unwrap();
            let a = BitVec::try_from(a).unwrap();
            let b = BitVec::try_from(b).unwrap();
            let enc = |v: &BitVec| sequential_encode(&c, &ExtendedInfoVector::new(&c, v.clone()).unwrap()).unwrap();
            prop_assert_eq!(enc(&(&a ^ &b)), &enc(&a) ^ &enc(&b));
        }
    }
}
