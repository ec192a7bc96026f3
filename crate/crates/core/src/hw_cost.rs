//! Gate-count comparison of the partial-sums architectures.
//!
//! NAND-equivalent totals: FB `5N²/12 + 3N`, SR `15N/2`, IF `17N/2`.
//! Resource rows: FB `(N²-4)/12` DFF, `N/2-1` XOR, `N-2` MUX; SR `N` DFF,
//! `N-2` XOR, `N/2-1` AND. The IF-PSU only has a synthesized total, so its
//! resource rows and critical path are reported as unavailable.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{invalid, Error, Result};
use crate::psu::fb_psu_complexity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arch {
    Sr,
    If,
    Fb,
}

impl Arch {
    pub const ALL: [Arch; 3] = [Arch::Fb, Arch::Sr, Arch::If];
}

impl fmt::Display for Arch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arch::Sr => "SR",
            Arch::If => "IF",
            Arch::Fb => "FB",
        })
    }
}

impl FromStr for Arch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sr" => Ok(Arch::Sr),
            "if" => Ok(Arch::If),
            "fb" => Ok(Arch::Fb),
            other => Err(invalid(format!("unknown architecture {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Xor,
    Mux,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::And => "AND",
            GateKind::Xor => "XOR",
            GateKind::Mux => "MUX",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Resources {
    pub dff: u64,
    pub xor: u64,
    pub mux: u64,
    pub and: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostReport {
    pub arch: Arch,
    pub code_len: u64,
    /// `None` where no breakdown exists.
    pub resources: Option<Resources>,
    pub nand_equivalent: Ratio<u64>,
    pub critical_path: Option<Vec<(GateKind, u32)>>,
}

fn check_len(code_len: u64) -> Result<u32> {
    if !code_len.is_power_of_two() || code_len < 4 {
        return Err(invalid(format!("N = {code_len} is not 2^n with n >= 2")));
    }
    let n = code_len.trailing_zeros();
    if n > 24 {
        return Err(invalid(format!(
            "N = {code_len} too large for exact gate counts"
        )));
    }
    Ok(n)
}

/// Exact NAND-equivalent gate count.
pub fn nand_equivalent(arch: Arch, code_len: u64) -> Result<Ratio<u64>> {
    check_len(code_len)?;
    let len = code_len;
    Ok(match arch {
        Arch::Fb => Ratio::new(5 * len * len, 12) + Ratio::from_integer(3 * len),
        Arch::Sr => Ratio::new(15 * len, 2),
        Arch::If => Ratio::new(17 * len, 2),
    })
}

pub fn resource_counts(arch: Arch, code_len: u64) -> Result<CostReport> {
    check_len(code_len)?;
    let resources = match arch {
        Arch::Fb => {
            let fb = fb_psu_complexity(code_len)?;
            Some(Resources {
                dff: fb.dff_count,
                xor: fb.xor_count,
                mux: fb.mux_count,
                and: 0,
            })
        }
        Arch::Sr => Some(Resources {
            dff: code_len,
            xor: code_len - 2,
            mux: 0,
            and: code_len / 2 - 1,
        }),
        Arch::If => None,
    };
    Ok(CostReport {
        arch,
        code_len,
        resources,
        nand_equivalent: nand_equivalent(arch, code_len)?,
        critical_path: critical_path(arch, code_len)?,
    })
}

/// Gates on the longest combinational path, `None` when unknown.
pub fn critical_path(arch: Arch, code_len: u64) -> Result<Option<Vec<(GateKind, u32)>>> {
    let n = check_len(code_len)?;
    Ok(match arch {
        Arch::Sr => Some(vec![(GateKind::And, 1), (GateKind::Xor, 1)]),
        Arch::Fb => Some(vec![(GateKind::Xor, n - 1), (GateKind::Mux, n - 2)]),
        Arch::If => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::PolarCode;
    use crate::psu::ShiftRegisterPsu;

    #[test]
    fn nand_examples() {
        assert_eq!(
            nand_equivalent(Arch::Sr, 1024).unwrap(),
            Ratio::from_integer(7680)
        );
        assert_eq!(
            nand_equivalent(Arch::If, 1024).unwrap(),
            Ratio::from_integer(8704)
        );
        // 5 * 1024^2 / 12 + 3 * 1024 = 1319936 / 3
        assert_eq!(
            nand_equivalent(Arch::Fb, 1024).unwrap(),
            Ratio::new(1_319_936, 3)
        );
        assert_eq!(
            nand_equivalent(Arch::If, 8).unwrap(),
            Ratio::from_integer(68)
        );
        assert!(nand_equivalent(Arch::Sr, 2).is_err());
        assert!(nand_equivalent(Arch::Sr, 100).is_err());
    }

    #[test]
    fn resource_examples() {
        let sr = resource_counts(Arch::Sr, 8).unwrap().resources.unwrap();
        assert_eq!((sr.dff, sr.xor, sr.and, sr.mux), (8, 6, 3, 0));
        let fb = resource_counts(Arch::Fb, 8).unwrap().resources.unwrap();
        assert_eq!((fb.dff, fb.xor, fb.mux), (5, 3, 6));
        let ifr = resource_counts(Arch::If, 8).unwrap();
        assert!(ifr.resources.is_none());
        assert_eq!(ifr.nand_equivalent, Ratio::from_integer(68));
    }

    #[test]
    fn sr_row_matches_reduced_model_tally() {
        for n in 2..=14 {
            let code = PolarCode::rate_one(n).unwrap();
            let t = ShiftRegisterPsu::for_decoder(&code).reduced_tally();
            let r = resource_counts(Arch::Sr, 1 << n)
                .unwrap()
                .resources
                .unwrap();
            assert_eq!(
                (t.dff as u64, t.xor as u64, t.and as u64),
                (r.dff, r.xor, r.and)
            );
        }
    }

    #[test]
    fn critical_paths() {
        assert_eq!(
            critical_path(Arch::Sr, 16384).unwrap().unwrap(),
            vec![(GateKind::And, 1), (GateKind::Xor, 1)]
        );
        assert_eq!(
            critical_path(Arch::Fb, 1024).unwrap().unwrap(),
            vec![(GateKind::Xor, 9), (GateKind::Mux, 8)]
        );
        assert_eq!(critical_path(Arch::If, 1024).unwrap(), None);
    }

    #[test]
    fn ordering_and_growth() {
        let mut last = Ratio::from_integer(0);
        for n in 2..=20 {
            let len = 1u64 << n;
            let sr = nand_equivalent(Arch::Sr, len).unwrap();
            assert!(sr < nand_equivalent(Arch::If, len).unwrap());
            let ratio = nand_equivalent(Arch::Fb, len).unwrap() / sr;
            if len >= 64 {
                assert!(ratio > last);
            }
            last = ratio;
        }
    }
}
