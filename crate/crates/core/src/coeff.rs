//! The gl(3) Gelfand-Tsetlin coefficient table, written once over any
//! [`Field`].
//!
//! For entries `w = (a,b,c | x,y | z)` and `P(t) = (t-a)(t-b)(t-c)`:
//!
//! | generator | shift      | coefficient              |
//! |-----------|------------|--------------------------|
//! | E12       | (0,0,1)    | −(z−x)(z−y)              |
//! | E21       | (0,0,−1)   | 1                        |
//! | E23       | (1,0,0)    | −P(x)/(x−y)              |
//! | E32       | (−1,0,0)   | (x−z)/(x−y)              |
//! | E31       | (−1,0,−1)  | 1/(x−y)                  |
//! | E13       | (1,0,1)    | −P(x)(z−y)/(x−y)         |
//!
//! The last four rows also carry the companion term obtained by swapping
//! `x` and `y` (and the first two shift coordinates).

use crate::scalar::{Field, Scalar};
use crate::tableau::Shift;

/// Tableau entries with the row-two entries possibly symbolic.
#[derive(Clone, Debug)]
pub struct Entries<F> {
    pub top: [F; 3],
    pub x: F,
    pub y: F,
    pub z: F,
}

impl Entries<Scalar> {
    pub fn from_array(e: [Scalar; 6]) -> Self {
        let [a, b, c, x, y, z] = e;
        Entries { top: [a, b, c], x, y, z }
    }
}

impl<F: Field> Entries<F> {
    fn swapped(&self) -> Self {
        Entries { top: self.top.clone(), x: self.y.clone(), y: self.x.clone(), z: self.z.clone() }
    }

    /// `P(t) = (t-a)(t-b)(t-c)`.
    pub fn p(&self, t: &F) -> F {
        let [a, b, c] = self.top.clone();
        (t.clone() - a) * (t.clone() - b) * (t.clone() - c)
    }
}

/// The one-sided coefficient `e_ij(w)` and its shift, before adding the
/// swapped companion.
fn half<F: Field>(i: u8, j: u8, w: &Entries<F>) -> (Shift, F) {
    let Entries { x, y, z, .. } = w.clone();
    match (i, j) {
        (1, 2) => (Shift::new(0, 0, 1), -((z.clone() - x) * (z - y))),
        (2, 1) => (Shift::new(0, 0, -1), F::one()),
        (2, 3) => (Shift::new(1, 0, 0), -(w.p(&x) / (x - y))),
        (3, 2) => (Shift::new(-1, 0, 0), (x.clone() - z) / (x - y)),
        (3, 1) => (Shift::new(-1, 0, -1), F::one() / (x - y)),
        (1, 3) => (Shift::new(1, 0, 1), -(w.p(&x) * (z - y.clone()) / (x - y))),
        _ => unreachable!("off-diagonal generator expected"),
    }
}

/// Terms `(shift, coefficient)` of `E_ij · T(w)`.
pub fn terms<F: Field>(i: u8, j: u8, w: &Entries<F>) -> Vec<(Shift, F)> {
    assert!((1..=3).contains(&i) && (1..=3).contains(&j), "indices must lie in 1..=3");
    if i == j {
        let Entries { top: [a, b, c], x, y, z } = w.clone();
        let v = match i {
            1 => z,
            2 => x + y - z + F::one(),
            _ => a + b + c - x - y + F::from_int(2),
        };
        return vec![(Shift::ZERO, v)];
    }
    let first = half(i, j, w);
    if matches!((i, j), (1, 2) | (2, 1)) {
        return vec![first];
    }
    let (s, c) = half(i, j, &w.swapped());
    vec![first, (s.tau(), c)]
}
