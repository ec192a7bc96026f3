//! Clock-by-clock schedule of a line SC decoder.
//!
//! One stage is active per clock and all of its processing elements work in
//! parallel. Before leaf `i` is decided the decoder recomputes the stage
//! chain below the highest stage invalidated by the previous decision:
//! a g activation at stage `tz(i)` (trailing zeros of `i`) followed by f
//! activations down to stage 0. Leaf 0 starts with f activations from stage
//! n-1. The whole frame takes 2N-2 clocks.

use std::fmt;
use std::ops::Range;

use crate::code::PolarCode;
use crate::psu::SumRequest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    F,
    G,
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::F => "F",
            OpKind::G => "G",
        })
    }
}

/// g-edge served by one processing element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeAssignment {
    pub pe: usize,
    pub edge: usize,
    /// Index of `S` needed by the edge: `edge - 2^stage`.
    pub sum_index: usize,
    /// Shift-register tap the PE is wired to.
    pub read_position: usize,
}

/// One stage activation: the `2^stage` edges of block `block` at `stage`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StageOp {
    pub clock: usize,
    pub stage: u32,
    pub kind: OpKind,
    pub block: usize,
}

impl StageOp {
    /// Number of edges, and of active PEs.
    pub fn width(&self) -> usize {
        1 << self.stage
    }

    pub fn edges(&self) -> Range<usize> {
        let start = self.block << self.stage;
        start..start + self.width()
    }

    /// PE `p` takes edge `block*2^j + (2^j - 1 - p)`, whose partial sum
    /// sits in shift-register tap `p`. Empty for f activations.
    pub fn pe_assignments(&self) -> impl ExactSizeIterator<Item = PeAssignment> + '_ {
        let width = self.width();
        let base = self.block << self.stage;
        let count = if self.kind == OpKind::G { width } else { 0 };
        (0..count).map(move |pe| {
            let edge = base + (width - 1 - pe);
            PeAssignment {
                pe,
                edge,
                sum_index: edge - width,
                read_position: pe,
            }
        })
    }

    pub fn sum_request(&self, a: &PeAssignment) -> SumRequest {
        SumRequest {
            sum_index: a.sum_index,
            stage: self.stage,
            pe: a.pe,
        }
    }

    /// Leaf whose LLR this activation produces, for stage-0 activations.
    pub fn leaf(&self) -> Option<usize> {
        (self.stage == 0).then_some(self.block)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeSchedule {
    n: u32,
    ops: Vec<StageOp>,
}

impl DecodeSchedule {
    /// Line schedule for a code of length `2^n`.
    pub fn line(n: u32) -> Self {
        assert!(n >= 1, "schedule needs n >= 1");
        let len = 1usize << n;
        let mut ops = Vec::with_capacity(2 * len - 2);
        for leaf in 0..len {
            let top = if leaf == 0 {
                n - 1
            } else {
                leaf.trailing_zeros()
            };
            for stage in (0..=top).rev() {
                let block = leaf >> stage;
                let kind = if block & 1 == 1 { OpKind::G } else { OpKind::F };
                ops.push(StageOp {
                    clock: ops.len(),
                    stage,
                    kind,
                    block,
                });
            }
        }
        DecodeSchedule { n, ops }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn code_len(&self) -> usize {
        1 << self.n
    }

    pub fn ops(&self) -> &[StageOp] {
        &self.ops
    }

    pub fn total_clocks(&self) -> usize {
        self.ops.len()
    }

    /// g activations at `stage` over the frame.
    pub fn g_activations(&self, stage: u32) -> usize {
        self.ops
            .iter()
            .filter(|op| op.stage == stage && op.kind == OpKind::G)
            .count()
    }

    /// g-edge evaluations at `stage` over the frame.
    pub fn g_edge_evaluations(&self, stage: u32) -> usize {
        self.ops
            .iter()
            .filter(|op| op.stage == stage && op.kind == OpKind::G)
            .map(StageOp::width)
            .sum()
    }
}

pub fn build_line_schedule(code: &PolarCode) -> DecodeSchedule {
    DecodeSchedule::line(code.n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::branch;

    #[test]
    fn length_two() {
        let s = DecodeSchedule::line(1);
        assert_eq!(
            s.ops(),
            &[
                StageOp {
                    clock: 0,
                    stage: 0,
                    kind: OpKind::F,
                    block: 0
                },
                StageOp {
                    clock: 1,
                    stage: 0,
                    kind: OpKind::G,
                    block: 1
                },
            ]
        );
        let reads: Vec<_> = s.ops()[1].pe_assignments().collect();
        assert_eq!(
            reads,
            [PeAssignment {
                pe: 0,
                edge: 1,
                sum_index: 0,
                read_position: 0
            }]
        );
    }

    #[test]
    fn length_eight_clock_count_and_stage_two_reads() {
        let s = DecodeSchedule::line(3);
        assert_eq!(s.total_clocks(), 14);
        let g2: Vec<_> = s
            .ops()
            .iter()
            .filter(|op| op.stage == 2 && op.kind == OpKind::G)
            .collect();
        assert_eq!(g2.len(), 1);
        let mut sums: Vec<usize> = g2[0].pe_assignments().map(|a| a.sum_index).collect();
        sums.sort_unstable();
        assert_eq!(sums, [0, 1, 2, 3]);
        // PE p reads S(3 - p, 2) from tap p.
        for a in g2[0].pe_assignments() {
            assert_eq!(a.sum_index, 3 - a.pe);
            assert_eq!(a.read_position, a.pe);
        }
    }

    #[test]
    fn edges_match_branch_indicator() {
        for n in 1..=8 {
            let s = DecodeSchedule::line(n);
            for op in s.ops() {
                assert_eq!(op.edges().len(), 1 << op.stage);
                let want = u8::from(op.kind == OpKind::G);
                assert!(op.edges().all(|e| branch(e, op.stage) == want));
                for a in op.pe_assignments() {
                    assert!(a.pe < op.width());
                    assert!(op.edges().contains(&a.edge));
                }
            }
        }
    }

    #[test]
    fn leaves_in_order_once() {
        for n in 1..=10 {
            let s = DecodeSchedule::line(n);
            let leaves: Vec<usize> = s.ops().iter().filter_map(StageOp::leaf).collect();
            assert_eq!(leaves, (0..1usize << n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn reads_are_causal() {
        // Every sum read by a g activation only involves leaves already
        // decided when the activation runs.
        for n in 1..=9 {
            let s = DecodeSchedule::line(n);
            let mut decided = 0;
            for op in s.ops() {
                for a in op.pe_assignments() {
                    let block_end = ((a.sum_index >> op.stage) + 1) << op.stage;
                    assert!(block_end <= decided);
                }
                if op.leaf().is_some() {
                    decided += 1;
                }
            }
        }
    }

    #[test]
    fn per_stage_counts() {
        for n in 1..=10u32 {
            let s = DecodeSchedule::line(n);
            let len = 1usize << n;
            assert_eq!(s.total_clocks(), 2 * len - 2);
            for j in 0..n {
                assert_eq!(s.g_edge_evaluations(j), len / 2);
                assert_eq!(s.g_activations(j), len >> (j + 1));
            }
        }
    }
}
