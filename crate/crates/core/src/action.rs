//! Generators of gl(3), block-level dispatch of the action and the bracket
//! relation sweep shared by generic and singular blocks.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tableau::{BlockSpec, SparseVector, Tableau};
use crate::{generic_action, singular_action};

/// A generator of gl(3); `H1 = E11 − E22`, `H2 = E22 − E33`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    E12,
    E21,
    E23,
    E32,
    E13,
    E31,
    H1,
    H2,
    E11,
    E22,
    E33,
}

impl Generator {
    pub const ALL: [Generator; 11] = [
        Generator::E12,
        Generator::E21,
        Generator::E23,
        Generator::E32,
        Generator::E13,
        Generator::E31,
        Generator::H1,
        Generator::H2,
        Generator::E11,
        Generator::E22,
        Generator::E33,
    ];

    /// The nine matrix units `E_ij`.
    pub const UNITS: [Generator; 9] = [
        Generator::E11,
        Generator::E12,
        Generator::E13,
        Generator::E21,
        Generator::E22,
        Generator::E23,
        Generator::E31,
        Generator::E32,
        Generator::E33,
    ];

    /// Root vectors that generate the action on any block.
    pub const SIMPLE_ROOTS: [Generator; 4] =
        [Generator::E12, Generator::E21, Generator::E23, Generator::E32];

    pub fn unit(i: u8, j: u8) -> Generator {
        use Generator::*;
        match (i, j) {
            (1, 1) => E11,
            (1, 2) => E12,
            (1, 3) => E13,
            (2, 1) => E21,
            (2, 2) => E22,
            (2, 3) => E23,
            (3, 1) => E31,
            (3, 2) => E32,
            (3, 3) => E33,
            _ => panic!("matrix unit indices out of range"),
        }
    }

    /// Expansion in matrix units.
    pub fn units(self) -> Vec<(Scalar, (u8, u8))> {
        use Generator::*;
        let one = Scalar::one();
        match self {
            H1 => vec![(one.clone(), (1, 1)), (-one, (2, 2))],
            H2 => vec![(one.clone(), (2, 2)), (-one, (3, 3))],
            E12 => vec![(one, (1, 2))],
            E21 => vec![(one, (2, 1))],
            E23 => vec![(one, (2, 3))],
            E32 => vec![(one, (3, 2))],
            E13 => vec![(one, (1, 3))],
            E31 => vec![(one, (3, 1))],
            E11 => vec![(one, (1, 1))],
            E22 => vec![(one, (2, 2))],
            E33 => vec![(one, (3, 3))],
        }
    }

    pub fn name(self) -> &'static str {
        use Generator::*;
        match self {
            E12 => "E12",
            E21 => "E21",
            E23 => "E23",
            E32 => "E32",
            E13 => "E13",
            E31 => "E31",
            H1 => "H1",
            H2 => "H2",
            E11 => "E11",
            E22 => "E22",
            E33 => "E33",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .iter()
            .copied()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown generator `{s}`")))
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Action of a matrix unit on one canonical basis tableau of a block.
pub fn act_unit(block: &BlockSpec, i: u8, j: u8, t: &Tableau) -> Result<SparseVector> {
    if block.is_singular() {
        singular_action::act_unit_singular(block, i, j, t)
    } else {
        generic_action::act_unit_generic(block, i, j, t)
    }
}

/// Action of a generator on a vector of either block kind.
pub fn act(block: &BlockSpec, g: Generator, v: &SparseVector) -> Result<SparseVector> {
    block.check_vector(v)?;
    let mut out = SparseVector::new();
    for (c, (i, j)) in g.units() {
        for (t, x) in v.iter() {
            out.axpy(&(&c * x), &act_unit(block, i, j, t)?);
        }
    }
    Ok(out)
}

/// Applies a word; the rightmost generator acts first.
pub fn act_word(block: &BlockSpec, word: &[Generator], v: &SparseVector) -> Result<SparseVector> {
    let mut cur = v.clone();
    for g in word.iter().rev() {
        cur = act(block, *g, &cur)?;
    }
    Ok(cur)
}

/// Memoized action of the nine matrix units on a window of basis tableaux.
pub struct ActionCache<'a> {
    block: &'a BlockSpec,
    table: HashMap<(u8, u8, Tableau), SparseVector>,
}

impl<'a> ActionCache<'a> {
    /// Precomputes every matrix unit on the radius-`r` window, in parallel.
    pub fn new(block: &'a BlockSpec, r: i64) -> Result<Self> {
        let tabs = block.window(r);
        let jobs: Vec<(u8, u8, Tableau)> = tabs
            .iter()
            .flat_map(|t| Generator::UNITS.iter().map(move |g| (g, t)))
            .map(|(g, t)| {
                let (_, (i, j)) = g.units()[0];
                (i, j, *t)
            })
            .collect();
        let table = jobs
            .into_par_iter()
            .map(|(i, j, t)| act_unit(block, i, j, &t).map(|v| ((i, j, t), v)))
            .collect::<Result<HashMap<_, _>>>()?;
        Ok(ActionCache { block, table })
    }

    pub fn block(&self) -> &BlockSpec {
        self.block
    }

    pub fn unit(&self, i: u8, j: u8, t: &Tableau) -> Result<SparseVector> {
        match self.table.get(&(i, j, *t)) {
            Some(v) => Ok(v.clone()),
            None => act_unit(self.block, i, j, t),
        }
    }

    pub fn act(&self, g: Generator, v: &SparseVector) -> Result<SparseVector> {
        let mut out = SparseVector::new();
        for (c, (i, j)) in g.units() {
            for (t, x) in v.iter() {
                out.axpy(&(&c * x), &self.unit(i, j, t)?);
            }
        }
        Ok(out)
    }
}

/// `[g1, g2]` predicted by the gl(3) structure constants, as matrix units.
pub fn expected_bracket(g1: Generator, g2: Generator) -> Vec<(Scalar, (u8, u8))> {
    let mut acc: HashMap<(u8, u8), Scalar> = HashMap::new();
    for (c1, (i, j)) in g1.units() {
        for (c2, (k, l)) in g2.units() {
            let c = &c1 * &c2;
            if j == k {
                *acc.entry((i, l)).or_insert_with(Scalar::zero) += &c;
            }
            if l == i {
                *acc.entry((k, j)).or_insert_with(Scalar::zero) -= &c;
            }
        }
    }
    let mut out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(u, c)| (c, u)).collect();
    out.sort_by_key(|(_, u)| *u);
    out
}

/// A nonzero residual of a bracket relation on one tableau.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub g1: Generator,
    pub g2: Generator,
    #[serde(serialize_with = "crate::ser::display")]
    pub tableau: Tableau,
    #[serde(serialize_with = "crate::ser::display")]
    pub residual: SparseVector,
}

/// Residual `[g1,g2]·t − expected·t` using a cache.
pub fn bracket_on(cache: &ActionCache<'_>, g1: Generator, g2: Generator, t: &Tableau) -> Result<SparseVector> {
    let v = SparseVector::basis(*t);
    let a = cache.act(g1, &cache.act(g2, &v)?)?;
    let b = cache.act(g2, &cache.act(g1, &v)?)?;
    let mut r = &a - &b;
    for (c, (i, j)) in expected_bracket(g1, g2) {
        r.axpy(&-c, &cache.unit(i, j, t)?);
    }
    Ok(r)
}

/// Checks one bracket relation on every basis tableau of the radius-`r` window.
pub fn bracket_sweep(block: &BlockSpec, g1: Generator, g2: Generator, r: i64) -> Result<Vec<Violation>> {
    let cache = ActionCache::new(block, r + 2)?;
    sweep(&cache, &[(g1, g2)], r)
}

/// Checks every bracket `[E_ij, E_kl]` on the radius-`r` window.
pub fn relation_sweep(block: &BlockSpec, r: i64) -> Result<Vec<Violation>> {
    let cache = ActionCache::new(block, r + 2)?;
    let units = Generator::UNITS;
    let pairs: Vec<_> = (0..units.len())
        .flat_map(|a| (a + 1..units.len()).map(move |b| (units[a], units[b])))
        .collect();
    sweep(&cache, &pairs, r)
}

fn sweep(cache: &ActionCache<'_>, pairs: &[(Generator, Generator)], r: i64) -> Result<Vec<Violation>> {
    let tabs = cache.block().window(r);
    let mut out: Vec<Violation> = tabs
        .par_iter()
        .map(|t| {
            let mut bad = Vec::new();
            for &(g1, g2) in pairs {
                let res = bracket_on(cache, g1, g2, t)?;
                if !res.is_zero() {
                    bad.push(Violation { g1, g2, tableau: *t, residual: res });
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.sort_by_key(|a| (a.tableau, a.g1, a.g2));
    Ok(out)
}
