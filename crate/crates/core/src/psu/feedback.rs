use crate::error::{invalid, Error, Result};

/// Complexity of the feedback-part PSU. There is no behavioral model; the
/// figures come from the per-stage DFF count
/// `D_l = N/2^(n-l+1) + N/2^(n-l+2) * (2^(l-2) - 2)`, `l = 2..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FbPsuComplexity {
    pub code_len: u64,
    /// `D_l` for `l = 2..=n`, in order.
    pub stage_dffs: Vec<i64>,
    pub dff_count: u64,
    pub xor_count: u64,
    pub mux_count: u64,
    pub critical_xor_depth: u32,
    pub critical_mux_depth: u32,
}

/// Sums the per-stage DFF counts and checks them against `(N^2 - 4) / 12`.
pub fn fb_psu_complexity(code_len: u64) -> Result<FbPsuComplexity> {
    if !code_len.is_power_of_two() || code_len < 4 {
        return Err(invalid(format!(
            "FB-PSU needs N = 2^n with n >= 2, got N = {code_len}"
        )));
    }
    let n = code_len.trailing_zeros();
    if n > 31 {
        return Err(invalid(format!(
            "N = {code_len} too large for the DFF count"
        )));
    }
    let len = code_len as i64;
    let stage_dffs: Vec<i64> = (2..=n)
        .map(|l| {
            len / (1i64 << (n - l + 1)) + len / (1i64 << (n - l + 2)) * ((1i64 << (l - 2)) - 2)
        })
        .collect();
    let summed = stage_dffs.iter().sum::<i64>();
    let closed = (len * len - 4) / 12;
    if summed != closed || (len * len - 4) % 12 != 0 {
        return Err(Error::State(format!(
            "stage DFF sum {summed} disagrees with closed form {closed} at N = {code_len}"
        )));
    }
    Ok(FbPsuComplexity {
        code_len,
        stage_dffs,
        dff_count: closed as u64,
        xor_count: code_len / 2 - 1,
        mux_count: code_len - 2,
        critical_xor_depth: n - 1,
        critical_mux_depth: n - 2,
    })
}
