use proptest::prelude::*;

use polar_psu::code::{construct_frozen_set, kronecker_power};
use polar_psu::decoder::{sc_decode, sc_decode_reference, LlrVec};
use polar_psu::encoder::{
    encode_graph, encode_matrix, expand, sequential_encode, ExtendedInfoVector,
};
use polar_psu::psu::{
    oracle_partial_sum, AnyPsu, CrossChecked, IndicatorPsu, PsuArch, PsuModel, ShiftRegisterPsu,
    SumRequest,
};
use polar_psu::schedule::DecodeSchedule;
use polar_psu::sim::{ChannelKind, Execution, SimConfig, Simulator};
use polar_psu::vectors::VectorLine;
use polar_psu::{BitVec, PolarCode};

fn code_and_info() -> impl Strategy<Value = (PolarCode, BitVec)> {
    (1u32..=7)
        .prop_flat_map(|n| (Just(n), 1usize..=(1 << n)))
        .prop_flat_map(|(n, k)| {
            let code = construct_frozen_set(n, k, 0.5).unwrap();
            (Just(code), proptest::collection::vec(any::<bool>(), k))
        })
        .prop_map(|(code, bits)| (code, BitVec::from_bools(bits)))
}

fn code_and_llrs() -> impl Strategy<Value = (PolarCode, LlrVec)> {
    (1u32..=7)
        .prop_flat_map(|n| (Just(n), 1usize..=(1 << n)))
        .prop_flat_map(|(n, k)| {
            let code = construct_frozen_set(n, k, 0.5).unwrap();
            let len = code.len();
            (Just(code), proptest::collection::vec(-8.0f64..8.0, len))
        })
        .prop_map(|(code, v)| (code, LlrVec::try_from(v).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoders_agree_on_codes((code, info) in code_and_info()) {
        let u = expand(&code, &info).unwrap();
        let g = encode_graph(&code, &u).unwrap();
        prop_assert_eq!(&encode_matrix(&code, &u).unwrap(), &g);
        prop_assert_eq!(&sequential_encode(&code, &u).unwrap(), &g);
    }

    #[test]
    fn noiseless_round_trip((code, info) in code_and_info(), scale in 0.01f64..50.0) {
        let u = expand(&code, &info).unwrap();
        let x = encode_graph(&code, &u).unwrap();
        let llrs = LlrVec::try_from(x.iter().map(|b| if b == 0 { scale } else { -scale }).collect::<Vec<_>>()).unwrap();
        for arch in PsuArch::ALL {
            let mut psu = AnyPsu::for_code(arch, &code);
            let r = sc_decode(&code, &llrs, &mut psu).unwrap();
            prop_assert_eq!(&r.info_hat, &info);
            prop_assert_eq!(&r.u_hat, u.bits());
        }
    }

    #[test]
    fn line_decoder_matches_reference((code, llrs) in code_and_llrs()) {
        let reference = sc_decode_reference(&code, &llrs).unwrap();
        for arch in PsuArch::ALL {
            let mut psu = CrossChecked::new(AnyPsu::for_code(arch, &code), code.len());
            let got = sc_decode(&code, &llrs, &mut psu).unwrap();
            prop_assert_eq!(&got, &reference);
            let n = u64::from(code.n());
            prop_assert_eq!(psu.reads_checked(), n * code.len() as u64 / 2);
        }
    }

    #[test]
    fn scheduled_reads_equal_subset_sums(n in 1u32..=7, seed in any::<u64>()) {
        let len = 1usize << n;
        let bits: Vec<u8> = (0..len).map(|i| ((seed >> (i % 64)) & 1) as u8 ^ (i as u8 & 1)).collect();
        let schedule = DecodeSchedule::line(n);
        let code = PolarCode::rate_one(n).unwrap();
        let mut sr = ShiftRegisterPsu::for_decoder(&code);
        let mut ind = IndicatorPsu::new(n);
        for op in schedule.ops() {
            for a in op.pe_assignments() {
                let req: SumRequest = op.sum_request(&a);
                let expect = oracle_partial_sum(&bits[..sr.pushed()], req.sum_index, req.stage).unwrap();
                prop_assert_eq!(sr.read(req).unwrap(), expect);
                prop_assert_eq!(ind.read(req).unwrap(), expect);
            }
            if let Some(i) = op.leaf() {
                sr.push(bits[i]).unwrap();
                ind.push(bits[i]).unwrap();
            }
        }
    }

    #[test]
    fn full_width_register_holds_reversed_codeword(n in 1u32..=9, seed in any::<u64>()) {
        let code = PolarCode::rate_one(n).unwrap();
        let u = BitVec::from_bools((0..code.len()).map(|i| (seed.rotate_left(i as u32) ^ i as u64) & 1 == 1));
        let mut sr = ShiftRegisterPsu::new(code.len(), code.len()).unwrap();
        for b in u.iter() {
            sr.push(b).unwrap();
        }
        let x = kronecker_power(n).unwrap().left_multiply(&u).unwrap();
        prop_assert_eq!(sr.registers().reversed(), x);
    }
}

#[test]
fn frozen_ones_are_rejected() {
    let code = PolarCode::bec(3, 4, 0.5).unwrap();
    let frozen = code.frozen_indices()[0];
    assert!(ExtendedInfoVector::new(&code, BitVec::unit(8, frozen)).is_err());
    assert!(ExtendedInfoVector::new(&code, BitVec::unit(8, code.info_indices()[0])).is_ok());
}

#[test]
fn parallel_and_sequential_runs_agree() {
    let code = PolarCode::bec(7, 64, 0.5).unwrap();
    for channel in [ChannelKind::Awgn, ChannelKind::Bec] {
        let points = match channel {
            ChannelKind::Bec => vec![0.2, 0.4],
            _ => vec![0.0, 1.5, 3.0],
        };
        let base = SimConfig {
            channel,
            points,
            trials: 1100,
            stop_after_frame_errors: None,
            seed: 77,
            psu: PsuArch::If,
            execution: Execution::Parallel,
        };
        let par = Simulator::new(code.clone(), base.clone())
            .unwrap()
            .run()
            .unwrap();
        let seq = Simulator::new(
            code.clone(),
            SimConfig {
                execution: Execution::Sequential,
                ..base
            },
        )
        .unwrap()
        .run()
        .unwrap();
        assert_eq!(par, seq);
    }
}

#[test]
fn stop_rule_is_deterministic() {
    let code = PolarCode::bec(6, 32, 0.5).unwrap();
    let mut config = SimConfig::awgn_sweep(0.0, 0.0, 1, 5000, 3).unwrap();
    config.stop_after_frame_errors = Some(37);
    let sim = Simulator::new(code, config.clone()).unwrap();
    let a = sim.run().unwrap();
    config.execution = Execution::Sequential;
    let b = Simulator::new(sim.code().clone(), config)
        .unwrap()
        .run()
        .unwrap();
    assert_eq!(a, b);
    assert_eq!(a[0].frame_errors, 37);
}

#[test]
fn vector_lines_replay() {
    let code = PolarCode::bec(5, 16, 0.5).unwrap();
    let config = SimConfig::awgn_sweep(1.0, 1.0, 1, 20, 11).unwrap();
    let sim = Simulator::new(code.clone(), config).unwrap();
    let mut ws = sim.workspace();
    for t in 0..20 {
        let rec = sim.trial(1.0, t, &mut ws).unwrap();
        let line = VectorLine {
            seed: 11,
            snr_db: 1.0,
            u: rec.u,
            x: rec.x,
            llrs: rec.llrs,
            u_hat: rec.decoded.u_hat,
        };
        let back = VectorLine::parse(&line.to_line(), code.len()).unwrap();
        assert_eq!(back, line);
        let replay = sc_decode_reference(&code, &back.llrs).unwrap();
        assert_eq!(replay.u_hat, back.u_hat);
    }
}
