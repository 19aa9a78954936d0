// SPDX-License-Identifier: Apache-2.0

mod common;

use proptest::prelude::*;
use quilopt::generate::{random_program, GenConfig};
use quilopt::harness::draw_pairs;
use quilopt::transforms::PassPair;

fn program(seed: u64) -> quilopt::ir::Program {
    random_program(seed, &GenConfig::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn emit_then_parse_is_identity(seed in any::<u64>()) {
        common::round_trips(&program(seed)).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn reorder_keeps_dependences(seed in any::<u64>()) {
        let p = program(seed);
        common::reorder_respects_edges(&p, false).map_err(TestCaseError::fail)?;
        common::reorder_respects_edges(&p, true).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn fold_is_idempotent(seed in any::<u64>()) {
        common::fold_idempotent(&program(seed)).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn dce_keeps_readout_writers(seed in any::<u64>()) {
        common::dce_keeps_readout_writers(&program(seed)).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn single_pass_preserves_readout(seed in any::<u64>(), pass in 0..PassPair::ALL.len()) {
        common::preserves(&program(seed), &[PassPair::ALL[pass]]).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn random_sequences_preserve_semantics() {
    let mut bad = Vec::new();
    for seed in 0..200u64 {
        if let Err(e) = common::preserves(&program(seed), &draw_pairs(seed, 0, 25)) {
            bad.push((seed, e));
        }
    }
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn fixtures_satisfy_properties() {
    for name in common::FIXTURES {
        let p = common::fixture(name);
        common::round_trips(&p).unwrap();
        common::reorder_respects_edges(&p, false).unwrap();
        common::reorder_respects_edges(&p, true).unwrap();
        common::fold_idempotent(&p).unwrap();
        common::dce_keeps_readout_writers(&p).unwrap();
    }
}
