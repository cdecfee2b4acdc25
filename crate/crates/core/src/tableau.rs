//! Blocks, tableaux, sparse vectors, weights and Gelfand-Tsetlin characters.
//!
//! A block fixes a base vector `v = (v31,v32,v33 | v21,v22 | v11)`; a tableau
//! in the block is an integer shift `(m,n,k)` of `v` together with a kind.
//! In a singular block (`v21 = v22`) the basis consists of regular tableaux
//! with `m <= n` and derivative tableaux with `m > n`, so canonical tableaux
//! are in bijection with `Z^3`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, int, Field, Scalar};

/// Integer shift: `m` copies of δ21, `n` of δ22, `k` of δ11.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Shift {
    pub m: i64,
    pub n: i64,
    pub k: i64,
}

impl Shift {
    pub const ZERO: Shift = Shift { m: 0, n: 0, k: 0 };

    pub const fn new(m: i64, n: i64, k: i64) -> Self {
        Shift { m, n, k }
    }

    /// Swap of the two row-two coordinates.
    pub fn tau(self) -> Self {
        Shift::new(self.n, self.m, self.k)
    }

    pub fn to_array(self) -> [i64; 3] {
        [self.m, self.n, self.k]
    }
}

impl Add for Shift {
    type Output = Shift;
    fn add(self, o: Shift) -> Shift {
        Shift::new(self.m + o.m, self.n + o.n, self.k + o.k)
    }
}

impl Sub for Shift {
    type Output = Shift;
    fn sub(self, o: Shift) -> Shift {
        Shift::new(self.m - o.m, self.n - o.n, self.k - o.k)
    }
}

impl Neg for Shift {
    type Output = Shift;
    fn neg(self) -> Shift {
        Shift::new(-self.m, -self.n, -self.k)
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.m, self.n, self.k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Regular,
    Derivative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    Generic,
    Singular,
}

/// A basis tableau of a block, identified by its shift and kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tableau {
    pub shift: Shift,
    pub kind: Kind,
}

impl Tableau {
    pub const fn regular(m: i64, n: i64, k: i64) -> Self {
        Tableau { shift: Shift::new(m, n, k), kind: Kind::Regular }
    }

    pub const fn derivative(m: i64, n: i64, k: i64) -> Self {
        Tableau { shift: Shift::new(m, n, k), kind: Kind::Derivative }
    }

    /// The canonical basis tableau of a singular block attached to a lattice
    /// point: regular if `m <= n`, derivative otherwise.
    pub fn at(s: Shift) -> Self {
        let kind = if s.m <= s.n { Kind::Regular } else { Kind::Derivative };
        Tableau { shift: s, kind }
    }

    pub fn is_derivative(&self) -> bool {
        self.kind == Kind::Derivative
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Regular => write!(f, "T{}", self.shift),
            Kind::Derivative => write!(f, "DT{}", self.shift),
        }
    }
}

/// Weight `(h1, h2)` of a tableau.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    pub h1: Scalar,
    pub h2: Scalar,
}

/// Values `(g11, g21, g22, g31, g32, g33)` of the Gelfand-Tsetlin generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GTCharacter(pub [Scalar; 6]);

/// Position of each `c_rs` in a character tuple.
pub const GAMMA_INDICES: [(u8, u8); 6] = [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)];

/// The polynomials `γ_rs` evaluated at entries `(l31,l32,l33,l21,l22,l11)`.
pub fn gamma_values<F: Field>(e: &[F; 6]) -> [F; 6] {
    let [a, b, c, x, y, z] = e.clone();
    let one = F::one();
    let two = F::from_int(2);
    let s1 = a.clone() + b.clone() + c.clone();
    let s2 = a.clone() * a.clone() + b.clone() * b.clone() + c.clone() * c.clone();
    let s3 = a.clone() * a.clone() * a.clone()
        + b.clone() * b.clone() * b.clone()
        + c.clone() * c.clone() * c.clone();
    let e2 = a.clone() * b.clone() + a * c.clone() + b * c;
    let g11 = z;
    let g21 = x.clone() + y.clone() + one.clone();
    let g22 = x.clone() * x.clone() + y.clone() * y.clone() + x + y;
    let g31 = s1.clone() + F::from_int(3);
    let g32 = s2.clone() + two * s1.clone() + one;
    let g33 = s3 + F::from_int(4) * s2 - e2 - F::from_int(6) + s1;
    [g11, g21, g22, g31, g32, g33]
}

/// Index of `c_rs` inside a character tuple.
pub fn gamma_index(r: u8, s: u8) -> Result<usize> {
    GAMMA_INDICES
        .iter()
        .position(|&p| p == (r, s))
        .ok_or_else(|| Error::Parse(format!("no Gelfand-Tsetlin generator c{r}{s}")))
}

/// A block: base vector plus kind and cached integrality data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    base: [Scalar; 6],
    kind: BlockKind,
    sl3: bool,
    origin: Tableau,
}

impl BlockSpec {
    /// Builds a block, normalizing `v21 - v22 ∈ Z` to `v21 = v22`.
    ///
    /// The tableau of the original base vector is kept as [`origin`](Self::origin).
    pub fn new(base: [Scalar; 6], sl3: bool) -> Result<Self> {
        if sl3 {
            let tr = &base[0] + &base[1] + &base[2] + int(3);
            if !tr.is_zero() {
                return Err(Error::InvalidBlock(
                    "sl(3) mode requires v31+v32+v33+3 = 0".into(),
                ));
            }
        }
        let d = &base[4] - &base[3];
        match scalar::as_int(&d) {
            Some(d) => {
                let mut b = base;
                b[4] = b[3].clone();
                let (_, origin) = canonical_singular(Shift::new(0, d, 0), Kind::Regular);
                let origin = origin.expect("regular tableaux are never zero");
                Ok(BlockSpec { base: b, kind: BlockKind::Singular, sl3, origin })
            }
            None if d.is_integer() => Err(Error::InvalidBlock("row-two gap out of range".into())),
            None => Ok(BlockSpec {
                base,
                kind: BlockKind::Generic,
                sl3,
                origin: Tableau::regular(0, 0, 0),
            }),
        }
    }

    /// Parses six scalars, e.g. `["0","1/3","-10/3","0","7/3","0"]`.
    pub fn parse<S: AsRef<str>>(items: &[S], sl3: bool) -> Result<Self> {
        if items.len() != 6 {
            return Err(Error::Parse(format!("expected 6 base entries, got {}", items.len())));
        }
        let v: Vec<Scalar> = items.iter().map(|s| scalar::parse(s.as_ref())).collect::<Result<_>>()?;
        Self::new(v.try_into().expect("length checked"), sl3)
    }

    pub fn base(&self) -> &[Scalar; 6] {
        &self.base
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn is_singular(&self) -> bool {
        self.kind == BlockKind::Singular
    }

    pub fn sl3_mode(&self) -> bool {
        self.sl3
    }

    /// Canonical tableau of the base vector the block was built from.
    pub fn origin(&self) -> Tableau {
        self.origin
    }

    pub fn top(&self) -> [Scalar; 3] {
        [self.base[0].clone(), self.base[1].clone(), self.base[2].clone()]
    }

    /// Base vector with `v11` moved by `x`.
    pub fn twisted(&self, x: &Scalar) -> Result<Self> {
        let mut b = self.base.clone();
        b[5] = &b[5] + x;
        let mut out = Self::new(b, self.sl3)?;
        out.origin = self.origin;
        Ok(out)
    }

    /// Entries `(v31,v32,v33, v21+m, v22+n, v11+k)`.
    pub fn entries_of(&self, s: Shift) -> [Scalar; 6] {
        let b = &self.base;
        [
            b[0].clone(),
            b[1].clone(),
            b[2].clone(),
            &b[3] + int(s.m),
            &b[4] + int(s.n),
            &b[5] + int(s.k),
        ]
    }

    /// Canonical form of `(shift, kind)` with its sign; `None` is the zero vector.
    pub fn canonicalize(&self, s: Shift, kind: Kind) -> (i8, Option<Tableau>) {
        match self.kind {
            BlockKind::Generic => (1, Some(Tableau { shift: s, kind })),
            BlockKind::Singular => canonical_singular(s, kind),
        }
    }

    /// Whether `t` is a canonical basis tableau of this block.
    pub fn is_canonical(&self, t: &Tableau) -> bool {
        match self.kind {
            BlockKind::Generic => t.kind == Kind::Regular,
            BlockKind::Singular => match t.kind {
                Kind::Regular => t.shift.m <= t.shift.n,
                Kind::Derivative => t.shift.m > t.shift.n,
            },
        }
    }

    /// The canonical basis tableau attached to a lattice point.
    pub fn tableau_at(&self, s: Shift) -> Tableau {
        match self.kind {
            BlockKind::Generic => Tableau { shift: s, kind: Kind::Regular },
            BlockKind::Singular => Tableau::at(s),
        }
    }

    pub fn weight_of(&self, t: &Tableau) -> Weight {
        let e = self.entries_of(t.shift);
        let one = Scalar::one();
        let r2 = &e[3] + &e[4] + &one;
        Weight { h1: int(2) * &e[5] - &r2, h2: int(2) * r2 - &e[5] }
    }

    /// Character of a tableau. A derivative tableau `DT(w)` shares the
    /// character of `T(w)`, which is symmetric in the row-two entries.
    pub fn gamma_of(&self, t: &Tableau) -> GTCharacter {
        GTCharacter(gamma_values(&self.entries_of(t.shift)))
    }

    /// Basis tableaux with `|m|,|n|,|k| <= r`.
    pub fn window(&self, r: i64) -> Vec<Tableau> {
        let mut out = Vec::new();
        for m in -r..=r {
            for n in -r..=r {
                for k in -r..=r {
                    out.push(self.tableau_at(Shift::new(m, n, k)));
                }
            }
        }
        out
    }

    /// Checks that every tableau of a vector is canonical for this block.
    pub fn check_vector(&self, v: &SparseVector) -> Result<()> {
        match v.terms().keys().find(|t| !self.is_canonical(t)) {
            Some(t) => Err(Error::InvalidBlock(format!("{t} is not a basis tableau of this block"))),
            None => Ok(()),
        }
    }
}

fn canonical_singular(s: Shift, kind: Kind) -> (i8, Option<Tableau>) {
    match kind {
        Kind::Regular if s.m > s.n => (1, Some(Tableau { shift: s.tau(), kind })),
        Kind::Regular => (1, Some(Tableau { shift: s, kind })),
        Kind::Derivative if s.m == s.n => (0, None),
        Kind::Derivative if s.m < s.n => (-1, Some(Tableau { shift: s.tau(), kind })),
        Kind::Derivative => (1, Some(Tableau { shift: s, kind })),
    }
}

/// Finite linear combination of canonical tableaux.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVector {
    terms: BTreeMap<Tableau, Scalar>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(t: Tableau) -> Self {
        Self::term(t, Scalar::one())
    }

    pub fn term(t: Tableau, c: Scalar) -> Self {
        let mut v = Self::new();
        v.add_term(t, c);
        v
    }

    pub fn terms(&self) -> &BTreeMap<Tableau, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &Tableau) -> Scalar {
        self.terms.get(t).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, t: Tableau, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Scalar, other: &SparseVector) {
        if c.is_zero() {
            return;
        }
        for (t, x) in &other.terms {
            self.add_term(*t, c * x);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVector {
        let mut out = SparseVector::new();
        out.axpy(c, self);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tableau, &Scalar)> {
        self.terms.iter()
    }

    /// Largest absolute coefficient, zero for the zero vector.
    pub fn max_norm(&self) -> Scalar {
        use num_traits::Signed;
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Scalar::zero)
    }
}

impl Add for &SparseVector {
    type Output = SparseVector;
    fn add(self, o: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.axpy(&Scalar::one(), o);
        out
    }
}

impl Sub for &SparseVector {
    type Output = SparseVector;
    fn sub(self, o: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.axpy(&-Scalar::one(), o);
        out
    }
}

impl FromIterator<(Tableau, Scalar)> for SparseVector {
    fn from_iter<I: IntoIterator<Item = (Tableau, Scalar)>>(it: I) -> Self {
        let mut v = SparseVector::new();
        for (t, c) in it {
            v.add_term(t, c);
        }
        v
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(t, c)| format!("{}*{}", scalar::format(c), t)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
