//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion fails when any of its checks fails. Some checks disagree with
//! the printed tables for reasons recorded in the decisions ledger; those are
//! listed in `DOCUMENTED` and reported as such. The run exits nonzero only
//! when a failing check is not one of them.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::{random_generic, random_region, random_singular, rng};
use gt3::action::{act_unit, relation_sweep};
use gt3::catalog::{cases, classify_block, instantiate, label_report};
use gt3::generic_action::gamma_act;
use gt3::localize::{apply_functor, replay_tables, twist_character, Functor};
use gt3::region::{window, Region};
use gt3::scalar::{int, ratio};
use gt3::singular_action::{gamma_act_singular, oracle_mismatches, OracleVariant};
use gt3::spectral::{chain_from, mu_line, verify_ab_identities, ChainClass};
use gt3::structure::{decompose_block, omega_plus, simple_basis_generic, ClassGraph, OmegaSet};
use gt3::{BlockSpec, GTCharacter, Kind, Scalar, Shift, SparseVector, Tableau};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::Rng;

/// Checks known to disagree with the printed tables, by criterion.
const DOCUMENTED: &[(u8, &str)] = &[
    (5, "C12 count"),
    (5, "C11 regions t>=2"),
    (6, "C13 layers"),
    (7, "C12:L3"),
    (7, "C12:L5"),
    (7, "C11:L2|C11:L7 t>=2"),
];

#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn timed(limit: Duration, out: &mut Outcome, start: Instant) {
    let took = start.elapsed();
    out.check(took < limit, format!("took {took:?}, budget {limit:?}"));
}

fn relations_generic() -> Outcome {
    let mut out = Outcome::default();
    let start = Instant::now();
    let mut r = rng(1);
    for _ in 0..20 {
        let b = random_generic(&mut r, false);
        let bad = relation_sweep(&b, 4).unwrap();
        out.check(bad.is_empty(), format!("{} violations on {:?}", bad.len(), b.base()));
    }
    timed(Duration::from_secs(30), &mut out, start);
    out
}

fn relations_singular() -> Outcome {
    let mut out = Outcome::default();
    let mut r = rng(2);
    for i in 0..10 {
        let b = random_singular(&mut r, i % 2 == 0);
        let bad = relation_sweep(&b, 3).unwrap();
        out.check(bad.is_empty(), format!("{} violations on {:?}", bad.len(), b.base()));
        let diff = oracle_mismatches(&b, 3, OracleVariant::Corrected).unwrap();
        out.check(diff.is_empty(), format!("{} oracle mismatches on {:?}", diff.len(), b.base()));
    }
    out
}

fn finite_dimensional() -> Outcome {
    let mut out = Outcome::default();
    let b = BlockSpec::new([1, -1, -3, 1, -1, 1].map(int), true).unwrap();
    let finite: Vec<Region> = decompose_block(&b)
        .unwrap()
        .subquotients
        .into_iter()
        .map(|s| s.region)
        .filter(|r| r.points(12).len() == r.points(16).len())
        .collect();
    out.check(!finite.is_empty(), "no finite simple");
    let printed = [(1, 1), (-1, 2), (2, -1), (0, 0), (-2, 1), (1, -2), (-1, -1)];
    let want: BTreeMap<(Scalar, Scalar), usize> =
        printed.iter().map(|&(h1, h2)| ((int(h1), int(h2)), if (h1, h2) == (0, 0) { 2 } else { 1 })).collect();
    for r in &finite {
        let pts = r.points(12);
        out.check(pts.len() == 8, format!("{r} has {} points", pts.len()));
        let mut weights: BTreeMap<(Scalar, Scalar), usize> = BTreeMap::new();
        for p in &pts {
            let w = b.weight_of(&b.tableau_at(*p));
            *weights.entry((w.h1, w.h2)).or_default() += 1;
        }
        out.check(weights == want, format!("{r} weights {weights:?}"));
    }
    out.note(format!("{} finite simples of dimension 8", finite.len()));
    out
}

fn omega_example() -> Outcome {
    let mut out = Outcome::default();
    let b = BlockSpec::new([int(0), ratio(1, 3), ratio(-10, 3), int(0), ratio(7, 3), int(0)], false).unwrap();
    let t = b.origin();
    let o = omega_plus(&b, &t);
    out.check(o == OmegaSet::from_triples(&[(3, 1, 1), (2, 1, 1)]), format!("Ω⁺ = {:?}", o.triples()));
    let basis = simple_basis_generic(&b, &t).unwrap();
    let want: Region = "{m<=0, k<=m, n>-2}".parse().unwrap();
    out.check(basis.set_eq(&want), format!("simple basis {basis}"));
    out
}

/// Parameter pairs at which each case is instantiated.
fn params(n: usize) -> &'static [(i64, i64)] {
    match n {
        0 => &[(0, 0)],
        1 => &[(1, 2), (2, 3), (3, 4)],
        _ => &[(1, 2), (1, 3), (2, 3)],
    }
}

fn catalog_sweep() -> Outcome {
    let mut out = Outcome::default();
    let start = Instant::now();
    let generic = [1, 2, 2, 4, 4, 8, 4, 3, 6, 6, 12, 12, 6, 8, 8, 4];
    let singular = [1, 2, 2, 6, 16, 5, 10, 4, 10, 32, 20, 5, 10, 4];
    let printed: Vec<usize> = generic.iter().chain(&singular).copied().collect();
    let table: Vec<usize> = cases().iter().map(|c| c.count()).collect();
    out.check(table == printed, "catalog counts differ from the listed counts");
    let mut runs = 0;
    for c in cases() {
        for &(t, s) in params(c.params.len()) {
            let b = instantiate(&c.case, t, s).unwrap();
            let mut report = decompose_block(&b).unwrap();
            let (cls, hits) = label_report(&b, &mut report).unwrap();
            runs += 1;
            if cls.label != c.case {
                out.check(false, format!("{} classified as {}", c.case, cls.label));
            }
            if report.len() != c.count() {
                out.check(false, format!("{} count: {} vs {} at ({t},{s})", c.case, report.len(), c.count()));
            } else if hits != c.count() {
                let tag = if c.case == "C11" && t >= 2 { " t>=2" } else { "" };
                out.check(false, format!("{} regions{tag}: {hits}/{} at ({t},{s})", c.case, c.count()));
            }
        }
    }
    out.note(format!("{runs} blocks"));
    timed(Duration::from_secs(300), &mut out, start);
    out
}

/// Label groups of the computed Loewy layers, socle first.
fn layer_groups(b: &BlockSpec) -> Vec<Vec<usize>> {
    let mut report = decompose_block(b).unwrap();
    label_report(b, &mut report).unwrap();
    report
        .layers()
        .iter()
        .map(|l| {
            let mut g: Vec<usize> = l
                .iter()
                .map(|i| report.subquotients[*i].label.as_ref().map_or(0, |x| x[1..].parse().unwrap()))
                .collect();
            g.sort_unstable();
            g
        })
        .collect()
}

fn loewy() -> Outcome {
    let mut out = Outcome::default();
    for (label, t, s) in [("G6", 1, 2), ("C13", 0, 0)] {
        let got = layer_groups(&instantiate(label, t, s).unwrap());
        let want = &gt3::catalog::case(label).unwrap().loewy;
        let sizes: Vec<String> = got.iter().map(|l| l.len().to_string()).collect();
        out.note(format!("{label} {}", sizes.join("|")));
        out.check(&got == want, format!("{label} layers"));
    }
    out
}

fn localization() -> Outcome {
    let mut out = Outcome::default();
    for (t, s) in [(1, 2), (1, 3), (2, 3)] {
        let recs = replay_tables(t, s).unwrap();
        let bad: Vec<_> = recs.iter().filter(|r| !r.matched).collect();
        out.note(format!("({t},{s}) {}/{}", recs.len() - bad.len(), recs.len()));
        for r in bad {
            let tag = if t >= 2 && r.target.iter().any(|x| x.starts_with("C11")) { " t>=2" } else { "" };
            out.check(false, format!("{}{tag}", r.target.join("|")));
        }
    }
    let b = instantiate("G2", 1, 2).unwrap();
    let half: Region = "{k<=m}".parse().unwrap();
    let q = apply_functor(Functor::QD12, &half, Some(&b), &int(0)).unwrap().output;
    out.check(q.to_string() == "{m<k}", format!("QD12 {{k<=m}} = {q}"));
    let mut r = rng(7);
    for b in [random_generic(&mut r, false), random_singular(&mut r, false)] {
        let x = common::frac(&mut r);
        let tw = b.twisted(&x).unwrap();
        for t in b.window(1) {
            let (chi, twisted) = (b.gamma_of(&t), tw.gamma_of(&t));
            let mut want = chi.0.clone();
            want[0] = &want[0] + &x;
            out.check(twisted == twist_character(&chi, &x) && twisted.0 == want, format!("twisted character at {t}"));
        }
    }
    out
}

fn spectral() -> Outcome {
    let mut out = Outcome::default();
    let c = chain_from(&int(0), &int(0), 6);
    out.check(c.class == ChainClass::Degenerate, "λ=(0,0) chain class");
    out.check((-6..=6).all(|n| c.get(n) == Some(&int(n * (n + 1)))), "λ=(0,0) chain values");
    let mut r = rng(8);
    let mut blocks = Vec::new();
    for sl3 in [false, true] {
        blocks.push(random_generic(&mut r, sl3));
        blocks.push(random_singular(&mut r, sl3));
    }
    for label in ["G8", "G16", "C5", "C10", "C13"] {
        blocks.push(instantiate(label, 1, 3).unwrap());
    }
    let mut lines = 0;
    for b in &blocks {
        for anchor in window(1) {
            let c = mu_line(b, anchor, 4).unwrap();
            let h1 = b.weight_of(&b.tableau_at(anchor)).h1;
            lines += 1;
            out.check(c.recurrence_failures().is_empty(), format!("recurrence on {:?} at {anchor}", b.base()));
            out.check(c.is_connected(&h1), format!("g_λ on {:?} at {anchor}", b.base()));
        }
    }
    out.note(format!("{lines} μ-lines"));
    for (class, b) in [("generic", random_generic(&mut r, false)), ("singular", random_singular(&mut r, false))] {
        let mut kinds = BTreeSet::new();
        for _ in 0..30 {
            let s = Shift::new(r.gen_range(-3..=3), r.gen_range(-3..=3), r.gen_range(-3..=3));
            let t = b.tableau_at(s);
            kinds.insert(t.kind);
            let bad = verify_ab_identities(&b, &t).unwrap();
            out.check(bad.is_empty(), format!("{class} identities at {t}"));
        }
        out.check(class == "generic" || kinds.len() == 2, "singular sample misses a tableau kind");
        out.note(format!("30 {class} tableaux"));
    }
    out
}

fn multiplicity_bound() -> Outcome {
    let mut out = Outcome::default();
    let mut r = rng(9);
    let mut blocks = vec![random_generic(&mut r, false), random_singular(&mut r, false)];
    for c in cases() {
        let (t, s) = params(c.params.len())[0];
        blocks.push(instantiate(&c.case, t, s).unwrap());
    }
    let mut worst = 0;
    for b in &blocks {
        for sq in decompose_block(b).unwrap().subquotients {
            let mut by_char: BTreeMap<GTCharacter, usize> = BTreeMap::new();
            for p in sq.region.points(5) {
                *by_char.entry(b.gamma_of(&b.tableau_at(p))).or_default() += 1;
            }
            let most = by_char.values().copied().max().unwrap_or(0);
            worst = worst.max(most);
            out.check(most <= 2, format!("{} tableaux share a character in {}", most, sq.region));
        }
    }
    out.note(format!("largest character multiplicity {worst}"));
    let b = BlockSpec::new(std::array::from_fn(|_| int(-1)), true).unwrap();
    out.check(classify_block(&b).unwrap().label == "C13", "Verma block is not C13");
    let t = Tableau::regular(-1, 0, -1);
    let dt = Tableau::derivative(0, -1, -1);
    let report = decompose_block(&b).unwrap();
    let home = report.subquotients.iter().find(|s| s.region.contains(t.shift)).unwrap();
    let shared: BTreeSet<Shift> = home.region.points(5).into_iter().filter(|p| b.gamma_of(&b.tableau_at(*p)) == b.gamma_of(&t)).collect();
    out.check(shared == BTreeSet::from([t.shift, dt.shift]), format!("Verma character {shared:?}"));
    out
}

fn run_property<S: Strategy>(out: &mut Outcome, name: &str, cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    match runner.run(&s, f) {
        Ok(()) => out.note(name.to_string()),
        Err(e) => out.check(false, format!("{name}: {e}")),
    }
}

fn shifts(r: i64) -> impl Strategy<Value = Shift> {
    (-r..=r, -r..=r, -r..=r).prop_map(|(m, n, k)| Shift::new(m, n, k))
}

fn block_of(seed: u64, singular: bool) -> BlockSpec {
    let mut r = rng(seed);
    if singular {
        random_singular(&mut r, false)
    } else {
        random_generic(&mut r, false)
    }
}

/// The same generic block with the row-two entries exchanged.
fn swapped(b: &BlockSpec) -> BlockSpec {
    let mut v = b.base().clone();
    v.swap(3, 4);
    BlockSpec::new(v, false).unwrap()
}

fn tau_vector(v: &SparseVector) -> SparseVector {
    v.iter().map(|(t, c)| (Tableau { shift: t.shift.tau(), kind: t.kind }, c.clone())).collect()
}

fn properties() -> Outcome {
    let mut out = Outcome::default();
    let kinds = prop_oneof![Just(Kind::Regular), Just(Kind::Derivative)];
    run_property(&mut out, "canonicalization", 256, (any::<u64>(), any::<bool>(), shifts(6), kinds), |(seed, sing, s, kind)| {
        let b = block_of(seed, sing);
        let kind = if sing { kind } else { Kind::Regular };
        match b.canonicalize(s, kind) {
            (0, None) => prop_assert!(sing && kind == Kind::Derivative && s.m == s.n),
            (sign, Some(t)) => {
                prop_assert!(b.is_canonical(&t));
                prop_assert_eq!(b.canonicalize(t.shift, t.kind), (1, Some(t)));
                if sing {
                    // T(w) = T(τw) and DT(w) = −DT(τw).
                    let flipped = b.canonicalize(s.tau(), kind);
                    let expect = if kind == Kind::Derivative { -sign } else { sign };
                    prop_assert_eq!(flipped, (expect, Some(t)));
                } else {
                    prop_assert_eq!((sign, t.shift), (1, s));
                }
            }
            other => prop_assert!(false, "{other:?}"),
        }
        Ok(())
    });
    run_property(&mut out, "τ well-definedness", 64, (any::<u64>(), any::<bool>(), shifts(4), 1..=3u8, 1..=3u8), |(seed, sing, s, i, j)| {
        let b = block_of(seed, sing);
        let t = b.tableau_at(s);
        let v = act_unit(&b, i, j, &t).unwrap();
        prop_assert!(b.check_vector(&v).is_ok());
        if !sing {
            // T(v) depends on the unordered row two: relabel by τ in the
            // block with the row-two entries exchanged.
            let w = act_unit(&swapped(&b), i, j, &b.tableau_at(s.tau())).unwrap();
            prop_assert_eq!(tau_vector(&v), w);
        }
        Ok(())
    });
    run_property(&mut out, "Γ-separation", 16, (any::<u64>(), any::<bool>()), |(seed, sing)| {
        let b = block_of(seed, sing);
        let ts = b.window(2);
        for (a, ta) in ts.iter().enumerate() {
            for tb in &ts[a + 1..] {
                let same = b.gamma_of(ta) == b.gamma_of(tb);
                prop_assert_eq!(same, sing && ta.shift == tb.shift.tau(), "{} {}", ta, tb);
            }
        }
        for t in b.window(1) {
            for (r, c) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)] {
                let v = SparseVector::basis(t);
                let chi = b.gamma_of(&t);
                let w = if sing { gamma_act_singular(&b, r, c, &v) } else { gamma_act(&b, r, c, &v) }.unwrap();
                prop_assert!(w.iter().all(|(u, _)| b.gamma_of(u) == chi));
                if t.kind == Kind::Regular {
                    let g = gt3::tableau::gamma_index(r, c).unwrap();
                    prop_assert_eq!(w, v.iter().map(|(u, x)| (*u, x * &chi.0[g])).collect::<SparseVector>());
                }
            }
        }
        Ok(())
    });
    run_property(&mut out, "region closure", 12, (any::<u64>(), any::<bool>(), shifts(1)), |(seed, sing, s)| {
        let b = block_of(seed, sing);
        let g = ClassGraph::build(&b).unwrap();
        let region = g.generated(&b.tableau_at(s));
        for p in region.points(2) {
            let tp = b.tableau_at(p);
            for i in 1..=3u8 {
                for j in 1..=3u8 {
                    for (q, _) in act_unit(&b, i, j, &tp).unwrap().iter() {
                        prop_assert!(region.contains(q.shift), "E{}{} {} leaves {}", i, j, tp, region);
                    }
                }
            }
        }
        Ok(())
    });
    run_property(&mut out, "region algebra", 128, (any::<u64>(), shifts(2)), |(seed, d)| {
        let mut r = rng(seed);
        let (a, b) = (random_region(&mut r), random_region(&mut r));
        let ops = [
            ("union", a.union(&b)),
            ("intersect", a.intersect(&b)),
            ("complement", a.complement()),
            ("difference", a.difference(&b)),
            ("translate", a.translate(d)),
            ("swap", a.swap_mn()),
            ("closure", a.k_closure()),
            ("simplify", a.simplify()),
        ];
        let parsed: Region = a.to_string().parse().unwrap();
        for p in window(4) {
            let (x, y) = (a.contains(p), b.contains(p));
            let brute = [
                x || y,
                x && y,
                !x,
                x && !y,
                a.contains(Shift::new(p.m - d.m, p.n - d.n, p.k - d.k)),
                a.contains(p.tau()),
                (0..=12).any(|j| a.contains(Shift::new(p.m, p.n, p.k - j))),
                x,
            ];
            for ((name, op), want) in ops.iter().zip(brute) {
                prop_assert_eq!(op.contains(p), want, "{} of {} and {} at {}", name, a, b, p);
            }
            prop_assert_eq!(parsed.contains(p), x);
        }
        let inside = window(4).iter().all(|p| !a.contains(*p) || b.contains(*p));
        if a.is_subset(&b) {
            prop_assert!(inside);
        }
        if a.is_empty() {
            prop_assert!(a.points(4).is_empty() && a.complement().set_eq(&Region::full()));
        }
        Ok(())
    });
    out
}

fn main() {
    type Criterion = (u8, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (1, "generic relations", relations_generic),
        (2, "singular relations and closed form", relations_singular),
        (3, "finite-dimensional example", finite_dimensional),
        (4, "Ω⁺ worked example", omega_example),
        (5, "catalog reproduction", catalog_sweep),
        (6, "Loewy layers", loewy),
        (7, "localization tables", localization),
        (8, "spectral chains and identities", spectral),
        (9, "multiplicity bound", multiplicity_bound),
        (10, "properties", properties),
    ];
    let mut unexpected = Vec::new();
    for (n, name, f) in criteria {
        let start = Instant::now();
        let mut o = f();
        o.note(format!("{:.1}s", start.elapsed().as_secs_f64()));
        let notes = if o.notes.is_empty() { String::new() } else { format!(" ({})", o.notes.join("; ")) };
        if o.failures.is_empty() {
            println!("criterion {n:>2} PASS {name}{notes}");
            continue;
        }
        let documented = |f: &String| DOCUMENTED.iter().any(|(c, tag)| *c == n && f.starts_with(tag));
        println!("criterion {n:>2} FAIL {name}{notes}");
        for f in &o.failures {
            let mark = if documented(f) { "documented conflict" } else { "unexpected" };
            println!("    {mark}: {f}");
            if !documented(f) {
                unexpected.push(format!("criterion {n}: {f}"));
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("{} unexpected failures", unexpected.len());
        std::process::exit(1);
    }
}
