//! Localization at the level of regions: the δ11-closure against brute
//! force, bijectivity of D12 outputs, twisted characters, and table replay.

mod common;

use common::{frac, random_generic, random_region, random_singular, rng};
use gt3::action::act_word;
use gt3::catalog::instantiate;
use gt3::localize::{apply_functor, e21_injective, e21_surjective, replay_tables, twist_character, Functor};
use gt3::region::{window, Region};
use gt3::scalar::int;
use gt3::{Generator, Shift, SparseVector};

/// Regions closed under `k ↦ k − 1`, drawn at random.
fn injective_regions(seed: u64, count: usize) -> Vec<Region> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let reg = random_region(&mut r);
        if !reg.is_empty() && e21_injective(&reg) {
            out.push(reg);
        }
    }
    out
}

#[test]
fn closure_matches_brute_force() {
    let mut r = rng(31);
    for _ in 0..20 {
        let reg = random_region(&mut r);
        let cl = reg.k_closure();
        for p in window(3) {
            let brute = (0..=12).any(|j| reg.contains(Shift::new(p.m, p.n, p.k - j)));
            assert_eq!(cl.contains(p), brute, "{reg} at {p}");
        }
    }
}

#[test]
fn d12_outputs_are_bijective_and_qd12_outputs_are_disjoint() {
    for reg in injective_regions(32, 20) {
        let d = apply_functor(Functor::D12, &reg, None, &int(0)).unwrap().output;
        assert!(e21_injective(&d) && e21_surjective(&d), "{reg} -> {d}");
        assert!(reg.is_subset(&d));
        let q = apply_functor(Functor::QD12, &reg, None, &int(0)).unwrap().output;
        assert!(q.is_disjoint(&reg), "{reg} -> {q}");
        assert!(q.union(&reg).set_eq(&d));
    }
}

#[test]
fn non_injective_input_is_rejected() {
    let reg: Region = "{m<k}".parse().unwrap();
    for f in [Functor::D12, Functor::QD12, Functor::D12x] {
        assert!(apply_functor(f, &reg, None, &int(0)).is_err());
    }
}

#[test]
fn lower_half_space_localizes_to_its_complement() {
    let b = instantiate("G2", 1, 2).unwrap();
    let reg: Region = "{k<=m}".parse().unwrap();
    let out = apply_functor(Functor::QD12, &reg, Some(&b), &int(0)).unwrap();
    assert_eq!(out.output.to_string(), "{m<k}");
}

#[test]
fn twist_shifts_base_and_character() {
    let mut r = rng(33);
    for b in [random_generic(&mut r, false), random_singular(&mut r, false)] {
        let x = frac(&mut r);
        let reg = Region::full();
        let out = apply_functor(Functor::D12x, &reg, Some(&b), &x).unwrap();
        let base = out.base.unwrap();
        assert_eq!(base[5], &b.base()[5] + &x);
        assert_eq!(base[..5], b.base()[..5]);
        let tw = b.twisted(&x).unwrap();
        for t in b.window(1) {
            assert_eq!(tw.gamma_of(&t), twist_character(&b.gamma_of(&t), &x));
        }
    }
}

#[test]
fn integer_twist_is_a_relabeling() {
    // E21 lowers l11 with coefficient one, so E21^x T(w) = T(w − x·δ11); an
    // integer twist of the base is the same relabeling of the lattice.
    let mut r = rng(34);
    for b in [random_generic(&mut r, false), random_singular(&mut r, false)] {
        for x in 0..=3i64 {
            let word = vec![Generator::E21; x as usize];
            let tw = b.twisted(&int(x)).unwrap();
            for t in b.window(2) {
                let got = act_word(&b, &word, &SparseVector::basis(t)).unwrap();
                let s = Shift::new(t.shift.m, t.shift.n, t.shift.k - x);
                let want = SparseVector::basis(gt3::Tableau { shift: s, kind: t.kind });
                assert_eq!(got, want, "E21^{x} {t}");
                assert_eq!(tw.entries_of(s), b.entries_of(t.shift));
            }
        }
    }
}

/// Recipes that disagree with the printed targets at these parameters, each a
/// documented conflict between the printed C11/C12 regions and the
/// decomposition.
fn known_conflicts(t: i64) -> Vec<&'static str> {
    let mut v = vec!["C12:L3", "C12:L5"];
    if t >= 2 {
        v.extend(["C11:L2", "C11:L7"]);
    }
    v
}

#[test]
fn tables_replay_except_known_conflicts() {
    for (t, s) in [(1, 2), (1, 3)] {
        let recs = replay_tables(t, s).unwrap();
        let bad: Vec<_> = recs.iter().filter(|r| !r.matched).collect();
        for r in &bad {
            assert!(
                r.target.iter().any(|x| known_conflicts(t).contains(&x.as_str())),
                "{} <- {} at ({t},{s}): {:?} {:?}",
                r.target.join("|"),
                r.source,
                r.output,
                r.error
            );
        }
        assert!(bad.len() <= 3, "{} failures at ({t},{s})", bad.len());
    }
}
