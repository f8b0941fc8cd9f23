use std::sync::Arc;

use parcohom_core::coeff::{SymPower, UdModule};
use parcohom_core::cohom::build_cohomology;
use parcohom_core::fflin::PrimeField;
use parcohom_core::hecke::{algebra_closure, eigen_systems, EigenSystem, HeckeEngine};
use parcohom_core::modgrp::{decompose_word, GroupTag, IntMat2};
use parcohom_core::wt1::{weight_one_with_character, CharacterData, WeightOneOptions, WeightOneResult};
use parcohom_core::Error;

fn systems(group: GroupTag, level: u64, p: u64, bound: u64) -> Vec<EigenSystem> {
    let f = PrimeField::new(p).unwrap();
    let pres = build_cohomology(group, level, Arc::new(SymPower::new(0, f))).unwrap();
    let mut e = HeckeEngine::new(&pres);
    let ops: Vec<_> = (1..=bound).map(|n| (n, e.t(n).unwrap().par_matrix)).collect();
    eigen_systems(&algebra_closure(&ops, 0).unwrap(), bound, 0).unwrap()
}

#[test]
fn gamma0_and_gamma1_agree_at_level_11() {
    let s0 = systems(GroupTag::Gamma0, 11, 7, 12);
    let s1 = systems(GroupTag::Gamma1, 11, 7, 12);
    assert_eq!(s0.len(), 1);
    assert!(s0[0].conjugate_to(&s1[0]).unwrap());
    // 11a: a_2 = -2, a_3 = -1, a_5 = 1
    assert_eq!(s0[0].value_fp(2), Some(5));
    assert_eq!(s0[0].value_fp(3), Some(6));
    assert_eq!(s0[0].value_fp(5), Some(1));
    assert!(s0[0].is_multiplicative().unwrap());
}

#[test]
fn level_37_splits_into_two_rational_systems() {
    let s = systems(GroupTag::Gamma0, 37, 5, 8);
    assert_eq!(s.len(), 2);
    // 37a has a_2 = -2, 37b has a_2 = 0
    let mut a2: Vec<_> = s.iter().map(|x| x.value_fp(2).unwrap()).collect();
    a2.sort();
    assert_eq!(a2, vec![0, 3]);
}

#[test]
fn general_modules_reach_hecke_operators() {
    let f = PrimeField::new(5).unwrap();
    let pres = build_cohomology(GroupTag::Gamma1, 7, Arc::new(UdModule::new(2, f).unwrap())).unwrap();
    let mut e = HeckeEngine::new(&pres);
    let t4 = e.t(4).unwrap();
    let t2 = e.t(2).unwrap();
    let t3 = e.t(3).unwrap();
    assert!(t4.matrix.commutes_with(&t2.matrix));
    assert_eq!(e.t(6).unwrap().matrix, t2.matrix.mul(&t3.matrix));
}

#[test]
fn weight_one_result_round_trips_through_json() {
    let chi = CharacterData::quadratic(23, 5).unwrap();
    let res = weight_one_with_character(23, 5, &chi, &WeightOneOptions::default()).unwrap();
    let text = serde_json::to_string(&res).unwrap();
    assert!(text.contains("\"dim_T1\":1"));
    let back: WeightOneResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, res);
}

#[test]
fn errors_name_the_failed_hypothesis() {
    let f = PrimeField::new(5).unwrap();
    let e = build_cohomology(GroupTag::Gamma0, 11, Arc::new(SymPower::new(0, PrimeField::new(3).unwrap())));
    assert!(matches!(e, Err(Error::Precondition(_))));
    assert!(matches!(decompose_word(&IntMat2::new(2, 0, 0, 1)), Err(Error::DeterminantNotOne(2))));
    assert!(build_cohomology(GroupTag::Gamma1, 11, Arc::new(SymPower::new(1, f))).is_ok());
}
