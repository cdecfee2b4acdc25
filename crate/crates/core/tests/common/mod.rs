//! Shared generators for integration tests.
#![allow(dead_code)]

use gt3::region::{Atom, Cell, Region, K, M, N, ZERO};
use gt3::scalar::{int, ratio};
use gt3::{BlockSpec, Scalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Non-integral rational with a small denominator.
pub fn frac(r: &mut impl Rng) -> Scalar {
    let q = [3, 5, 7, 11, 13][r.gen_range(0..5)];
    let mut p = r.gen_range(-20..=20);
    while p % q == 0 {
        p += 1;
    }
    ratio(p, q)
}

fn top(r: &mut impl Rng, sl3: bool) -> [Scalar; 3] {
    let a = frac(r);
    let b = frac(r);
    let c = if sl3 { -(&a + &b + int(3)) } else { frac(r) };
    [a, b, c]
}

/// Generic block: the row-two gap is not an integer.
pub fn random_generic(r: &mut impl Rng, sl3: bool) -> BlockSpec {
    loop {
        let [a, b, c] = top(r, sl3);
        let x = frac(r);
        let y = frac(r);
        let z = frac(r);
        if (&x - &y).is_integer() {
            continue;
        }
        return BlockSpec::new([a, b, c, x, y, z], sl3).unwrap();
    }
}

/// Singular block `v21 = v22`.
pub fn random_singular(r: &mut impl Rng, sl3: bool) -> BlockSpec {
    let [a, b, c] = top(r, sl3);
    let x = frac(r);
    let z = frac(r);
    BlockSpec::new([a, b, c, x.clone(), x, z], sl3).unwrap()
}

/// Union of one or two cells of up to three difference constraints with
/// constants in `-2..=2`.
pub fn random_region(r: &mut impl Rng) -> Region {
    let vars = [ZERO, M, N, K];
    let cells = (0..r.gen_range(1..=2)).map(|_| {
        Cell::from_atoms((0..r.gen_range(1..=3)).map(|_| {
            let i = vars[r.gen_range(0..4)];
            let mut j = vars[r.gen_range(0..4)];
            while j == i {
                j = vars[r.gen_range(0..4)];
            }
            Atom::new(i, j, r.gen_range(-2..=2))
        }))
    });
    Region::from_cells(cells)
}
