//! Code definition: kernel powers, frozen-set construction, index helpers.

use crate::bits::BitMatrix;
use crate::error::{invalid, Error, Result};

/// Largest `n` for which [`kronecker_power`] builds a dense matrix.
pub const DENSE_CAP_LOG2: u32 = 14;

/// Largest supported code exponent for the matrix-free paths.
pub const MAX_LOG2: u32 = 26;

/// Default BEC design parameter for [`construct_frozen_set`].
pub const DEFAULT_EPSILON: f64 = 0.5;

/// A polar code PC(N, K) in natural bit order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarCode {
    n: u32,
    frozen: Vec<bool>,
    info: Vec<usize>,
}

impl PolarCode {
    /// Builds a code from an explicit frozen set. Every construction rule
    /// goes through here, so alternative constructions plug in by
    /// computing their own set.
    pub fn new<I: IntoIterator<Item = usize>>(n: u32, frozen: I) -> Result<Self> {
        if n == 0 || n > MAX_LOG2 {
            return Err(invalid(format!(
                "code exponent n={n} outside 1..={MAX_LOG2}"
            )));
        }
        let len = 1usize << n;
        let mut mask = vec![false; len];
        for i in frozen {
            if i >= len {
                return Err(invalid(format!("frozen index {i} outside [0, {len})")));
            }
            if std::mem::replace(&mut mask[i], true) {
                return Err(invalid(format!("frozen index {i} listed twice")));
            }
        }
        let info = (0..len).filter(|&i| !mask[i]).collect();
        Ok(PolarCode {
            n,
            frozen: mask,
            info,
        })
    }

    /// Rate-one code with no frozen positions.
    pub fn rate_one(n: u32) -> Result<Self> {
        Self::new(n, std::iter::empty())
    }

    /// Construction over a BEC with erasure probability `epsilon`.
    pub fn bec(n: u32, k: usize, epsilon: f64) -> Result<Self> {
        construct_frozen_set(n, k, epsilon)
    }

    /// log2 of the code length.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Code length N.
    pub fn len(&self) -> usize {
        self.frozen.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimension K.
    pub fn dimension(&self) -> usize {
        self.info.len()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.len() as f64
    }

    #[inline]
    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn frozen_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.frozen[i]).collect()
    }

    /// Non-frozen positions in ascending order.
    pub fn info_indices(&self) -> &[usize] {
        &self.info
    }

    /// `B(i, j) = floor(i / 2^j) mod 2`, with range checks against this code.
    pub fn branch_indicator(&self, i: usize, j: u32) -> Result<u8> {
        if i >= self.len() || j >= self.n {
            return Err(invalid(format!(
                "edge ({i},{j}) outside [0,{}) x [0,{})",
                self.len(),
                self.n
            )));
        }
        Ok(branch(i, j))
    }
}

/// Unchecked `B(i, j)`: 1 when edge `i` at stage `j` is a g-edge.
#[inline]
pub fn branch(i: usize, j: u32) -> u8 {
    ((i >> j) & 1) as u8
}

/// Entry `(row, col)` of the n-th Kronecker power of the kernel, for any
/// `n` large enough to hold both indices: one exactly when the set bits of
/// `col` are a subset of those of `row`.
#[inline]
pub fn kernel_power_entry(row: usize, col: usize) -> u8 {
    u8::from(col & !row == 0)
}

/// The 2x2 kernel `[[1,0],[1,1]]`.
pub fn kernel() -> BitMatrix {
    BitMatrix::from_rows(&[&[1, 0], &[1, 1]]).expect("kernel is well formed")
}

/// n-th Kronecker power of the kernel, capped at [`DENSE_CAP_LOG2`].
pub fn kronecker_power(n: u32) -> Result<BitMatrix> {
    kronecker_power_capped(n, DENSE_CAP_LOG2)
}

pub fn kronecker_power_capped(n: u32, cap_log2: u32) -> Result<BitMatrix> {
    if n > cap_log2 {
        return Err(Error::SizeLimit {
            dimension: 1usize.checked_shl(n).unwrap_or(usize::MAX),
            cap: 1usize << cap_log2,
        });
    }
    let kappa = kernel();
    let mut m = BitMatrix::from_rows(&[&[1]]).expect("1x1 identity");
    for _ in 0..n {
        m = kappa.kronecker(&m);
    }
    Ok(m)
}

/// Bhattacharyya parameters of the N bit-channels of a BEC(epsilon),
/// in natural index order.
///
/// Each level splits `z` into `2z - z^2` (even child) and `z^2` (odd child);
/// the first split ends up in the most significant index bit.
pub fn bhattacharyya_bec(n: u32, epsilon: f64) -> Result<Vec<f64>> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon {epsilon} outside (0, 1)")));
    }
    if n > MAX_LOG2 {
        return Err(invalid(format!("code exponent n={n} exceeds {MAX_LOG2}")));
    }
    let mut z = vec![epsilon];
    for _ in 0..n {
        z = z.iter().flat_map(|&z| [2.0 * z - z * z, z * z]).collect();
    }
    Ok(z)
}

/// Freezes the N-K bit-channels with the largest Bhattacharyya parameter
/// over a BEC(epsilon). Equal parameters freeze the lower index first.
pub fn construct_frozen_set(n: u32, k: usize, epsilon: f64) -> Result<PolarCode> {
    if n == 0 || n > MAX_LOG2 {
        return Err(invalid(format!(
            "code exponent n={n} outside 1..={MAX_LOG2}"
        )));
    }
    let len = 1usize << n;
    if k == 0 || k > len {
        return Err(invalid(format!("dimension K={k} outside 1..={len}")));
    }
    let z = bhattacharyya_bec(n, epsilon)?;
    PolarCode::new(n, least_reliable(&z, len - k))
}

/// Indices of the `count` largest parameters, lower index first on ties.
pub(crate) fn least_reliable(z: &[f64], count: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..z.len()).collect();
    // Stable sort keeps ascending index order among equal parameters.
    order.sort_by(|&a, &b| z[b].total_cmp(&z[a]));
    order.truncate(count);
    order
}
