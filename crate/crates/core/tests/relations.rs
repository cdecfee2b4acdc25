//! Bracket relations of gl(3) on generic and singular blocks, and agreement
//! of the symbolic singular action with the explicit coefficient lists.

mod common;

use common::{random_generic, random_singular, rng};
use gt3::action::{relation_sweep, Generator};
use gt3::singular_action::{oracle_mismatches, OracleVariant};
use gt3::{BlockSpec, Scalar};

#[test]
fn generic_relations_hold_on_small_windows() {
    let mut r = rng(11);
    for _ in 0..3 {
        let b = random_generic(&mut r, false);
        assert!(relation_sweep(&b, 2).unwrap().is_empty(), "{:?}", b.base());
    }
}

#[test]
fn singular_relations_hold_on_small_windows() {
    let mut r = rng(12);
    for _ in 0..2 {
        let b = random_singular(&mut r, false);
        let bad = relation_sweep(&b, 2).unwrap();
        assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
    }
}

#[test]
fn most_singular_block_satisfies_relations() {
    let zero: [Scalar; 6] = std::array::from_fn(|_| gt3::scalar::int(0));
    let b = BlockSpec::new(zero, false).unwrap();
    assert!(relation_sweep(&b, 2).unwrap().is_empty());
}

#[test]
fn oracle_matches_symbolic_action() {
    let mut r = rng(13);
    let b = random_singular(&mut r, false);
    let bad = oracle_mismatches(&b, 2, OracleVariant::Corrected).unwrap();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
}

#[test]
fn printed_derivative_lists_disagree() {
    let mut r = rng(14);
    let b = random_singular(&mut r, false);
    let bad = oracle_mismatches(&b, 1, OracleVariant::Printed).unwrap();
    let hit = |g: Generator| bad.iter().any(|m| m.generator == g);
    assert!(hit(Generator::E23) && hit(Generator::E32));
    assert!(!hit(Generator::E12) && !hit(Generator::E21));
}
