//! Bit vectors and dense GF(2) matrices.
//!
//! [`BitVec`] is the public carrier for information vectors, codewords,
//! decisions and register dumps: one byte per bit, each byte 0 or 1.
//! [`BitMatrix`] and the crate-private [`PackedBits`] store bits in `u64`
//! words, which is what the register and Kronecker models operate on.

use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Ordered sequence of bits.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitVec(Vec<u8>);

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec(vec![0; len])
    }

    /// Unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[index] = 1;
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        BitVec(bits.into_iter().map(u8::from).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: u8) {
        debug_assert!(bit <= 1);
        self.0[i] = bit & 1;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [u8] {
        &mut self.0
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn reversed(&self) -> Self {
        BitVec(self.0.iter().rev().copied().collect())
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming_distance(&self, other: &BitVec) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Hex form: bit 0 is the most significant bit of the first digit, the
    /// tail is zero-padded to a whole digit.
    pub fn to_hex(&self) -> String {
        self.0
            .chunks(4)
            .map(|nib| {
                let v = nib
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (k, &b)| acc | (u32::from(b) << (3 - k)));
                char::from_digit(v, 16).unwrap()
            })
            .collect()
    }

    /// Inverse of [`BitVec::to_hex`]; `len` drops the padding bits, which
    /// must be zero.
    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        let s = s.trim();
        if s.len() != len.div_ceil(4) {
            return Err(invalid(format!(
                "hex string of {} digits cannot hold exactly {len} bits",
                s.len()
            )));
        }
        let mut bits = Vec::with_capacity(s.len() * 4);
        for c in s.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| invalid(format!("invalid hex digit {c:?}")))?;
            bits.extend((0..4).map(|k| ((v >> (3 - k)) & 1) as u8));
        }
        if bits[len..].iter().any(|&b| b != 0) {
            return Err(invalid("nonzero padding bits in hex string"));
        }
        bits.truncate(len);
        Ok(BitVec(bits))
    }
}

impl TryFrom<Vec<u8>> for BitVec {
    type Error = Error;

    fn try_from(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(invalid(format!("element {pos} is not a bit")));
        }
        Ok(BitVec(bits))
    }
}

impl From<BitVec> for Vec<u8> {
    fn from(v: BitVec) -> Self {
        v.0
    }
}

/// Parses a string of `0`/`1` characters; `_` and whitespace are ignored.
impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != '_')
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(invalid(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BitVec)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl BitXor for &BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: &BitVec) -> BitVec {
        assert_eq!(self.len(), rhs.len(), "xor of unequal lengths");
        BitVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a ^ b).collect())
    }
}

/// Fixed-width bit register packed into `u64` words; bit `k` lives in word
/// `k / 64` at position `k % 64`. Bits at or above `len` are always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PackedBits {
    words: Vec<u64>,
    len: usize,
}

impl PackedBits {
    pub fn zeros(len: usize) -> Self {
        PackedBits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, k: usize) -> u8 {
        debug_assert!(k < self.len);
        ((self.words[k / 64] >> (k % 64)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, k: usize, bit: u8) {
        debug_assert!(k < self.len);
        let mask = 1u64 << (k % 64);
        if bit & 1 == 1 {
            self.words[k / 64] |= mask;
        } else {
            self.words[k / 64] &= !mask;
        }
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    /// Every bit moves one position up (`b[k] <- b[k-1]`), `b[0] <- 0` and
    /// the top bit falls off.
    pub fn shift_up(&mut self) {
        let mut carry = 0u64;
        for w in &mut self.words {
            let next = *w >> 63;
            *w = (*w << 1) | carry;
            carry = next;
        }
        self.mask_tail();
    }

    /// `b[k] <- b[k] ^ b[k-1]` for all k simultaneously.
    pub fn xor_shifted_self(&mut self) {
        let mut carry = 0u64;
        for w in &mut self.words {
            let old = *w;
            *w ^= (old << 1) | carry;
            carry = old >> 63;
        }
        self.mask_tail();
    }

    pub fn xor_assign(&mut self, other: &PackedBits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn to_bitvec(&self) -> BitVec {
        BitVec((0..self.len).map(|k| self.get(k)).collect())
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

/// Dense row-major GF(2) matrix with rows packed into `u64` words.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(invalid("ragged rows"));
            }
            for (j, &b) in row.iter().enumerate() {
                if b > 1 {
                    return Err(invalid(format!("entry ({i},{j}) is not a bit")));
                }
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        ((self.data[i * self.words_per_row + j / 64] >> (j % 64)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, bit: u8) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        let w = &mut self.data[i * self.words_per_row + j / 64];
        let mask = 1u64 << (j % 64);
        if bit & 1 == 1 {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec((0..self.cols).map(|j| self.get(i, j)).collect())
    }

    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for a in 0..self.rows {
            for b in 0..self.cols {
                if self.get(a, b) == 0 {
                    continue;
                }
                for c in 0..other.rows {
                    let src = other.row_words(c);
                    out.or_row_shifted(a * other.rows + c, src, b * other.cols);
                }
            }
        }
        out
    }

    /// ORs `src` (a packed row) into row `i` starting at column `offset`.
    fn or_row_shifted(&mut self, i: usize, src: &[u64], offset: usize) {
        let base = i * self.words_per_row;
        let (wshift, bshift) = (offset / 64, offset % 64);
        for (k, &w) in src.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let lo = base + wshift + k;
            self.data[lo] |= w << bshift;
            if bshift != 0 && wshift + k + 1 < self.words_per_row {
                self.data[lo + 1] |= w >> (64 - bshift);
            }
        }
    }

    /// `v · self` over GF(2).
    pub fn left_multiply(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.rows {
            return Err(invalid(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut acc = vec![0u64; self.words_per_row];
        for (i, b) in v.iter().enumerate() {
            if b == 1 {
                for (a, w) in acc.iter_mut().zip(self.row_words(i)) {
                    *a ^= w;
                }
            }
        }
        Ok(BitVec(
            (0..self.cols)
                .map(|j| ((acc[j / 64] >> (j % 64)) & 1) as u8)
                .collect(),
        ))
    }

    /// Lower triangular with ones on the diagonal.
    pub fn is_lower_unitriangular(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        (0..self.rows).all(|i| {
            let row = self.row_words(i);
            let diag_word = i / 64;
            if (row[diag_word] >> (i % 64)) & 1 != 1 {
                return false;
            }
            let above = if i % 64 == 63 {
                0
            } else {
                !0u64 << (i % 64 + 1)
            };
            row[diag_word] & above == 0 && row[diag_word + 1..].iter().all(|&w| w == 0)
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(32) {
            writeln!(f, "  {}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display() {
        let v: BitVec = "1101_0".parse().unwrap();
        assert_eq!(v.as_slice(), &[1, 1, 0, 1, 0]);
        assert_eq!(v.to_string(), "11010");
        assert!("10x".parse::<BitVec>().is_err());
        assert!(BitVec::try_from(vec![0, 2]).is_err());
    }

    #[test]
    fn hex_layout() {
        let v: BitVec = "100000011".parse().unwrap();
        assert_eq!(v.to_hex(), "818");
        assert!(BitVec::from_hex("819", 9).is_err());
        assert!(BitVec::from_hex("81", 9).is_err());
    }

    #[test]
    fn packed_shift_crosses_words() {
        let mut p = PackedBits::zeros(130);
        p.set(63, 1);
        p.set(129, 1);
        p.shift_up();
        assert_eq!(p.get(64), 1);
        assert_eq!(p.get(63), 0);
        assert!(p
            .to_bitvec()
            .iter()
            .enumerate()
            .all(|(k, b)| (b == 1) == (k == 64)));
    }

    #[test]
    fn packed_xor_shifted_self() {
        let mut p = PackedBits::zeros(70);
        p.set(63, 1);
        p.xor_shifted_self();
        assert_eq!(p.get(63), 1);
        assert_eq!(p.get(64), 1);
        assert_eq!(p.to_bitvec().count_ones(), 2);
    }

    #[test]
    fn kronecker_small() {
        let k = BitMatrix::from_rows(&[&[1, 0], &[1, 1]]).unwrap();
        let k2 = k.kronecker(&k);
        let expect: Vec<BitVec> = ["1000", "1100", "1010", "1111"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for (i, row) in expect.iter().enumerate() {
            assert_eq!(&k2.row(i), row);
        }
        assert!(k2.is_lower_unitriangular());
    }

    proptest! {
        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(0u8..2, 0..200)) {
            let v = BitVec::try_from(bits).unwrap();
            prop_assert_eq!(BitVec::from_hex(&v.to_hex(), v.len()).unwrap(), v);
        }

        #[test]
        fn shift_up_matches_bytewise(bits in proptest::collection::vec(0u8..2, 1..300)) {
            let mut p = PackedBits::zeros(bits.len());
            for (k, &b) in bits.iter().enumerate() {
                p.set(k, b);
            }
            p.shift_up();
            let mut expect = vec![0u8];
            expect.extend_from_slice(&bits[..bits.len() - 1]);
            let got = p.to_bitvec();
            prop_assert_eq!(got.as_slice(), &expect[..]);
        }
    }
}
