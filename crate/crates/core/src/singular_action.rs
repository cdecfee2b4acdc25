//! Action of gl(3) and Γ on a 1-singular block `V(T(v̄))`, `v̄21 = v̄22`.
//!
//! The generic coefficients are evaluated as rational functions of the
//! row-two entries and pushed through the evaluation/derivation pair at
//! `v̄`:
//!
//! ```text
//! E · T(v̄+w)  = D((v21 − v22) · E T(v+w))
//! E · DT(v̄+w) = D(E T(v+w))
//! D(f · T(v+u)) = D(f) · T(v̄+u) + ev(f) · DT(v̄+u)
//! ```
//!
//! followed by canonicalization. The explicit coefficient lists are kept
//! as an independent oracle.

use num_traits::{One, Zero};

use crate::action::Generator;
use crate::coeff::{self, Entries};
use crate::error::{Error, Result};
use crate::ratfunc::{DOp, RatFunc};
use crate::scalar::{int, ratio, Field, Scalar};
use crate::tableau::{gamma_index, gamma_values, BlockSpec, Kind, Shift, SparseVector, Tableau};

fn require_singular(block: &BlockSpec) -> Result<()> {
    if block.is_singular() {
        Ok(())
    } else {
        Err(Error::WrongBlockKind { expected: "singular" })
    }
}

fn symbolic_entries(block: &BlockSpec, s: Shift) -> Entries<RatFunc> {
    let b = block.base();
    Entries {
        top: [RatFunc::constant(b[0].clone()), RatFunc::constant(b[1].clone()), RatFunc::constant(b[2].clone())],
        x: RatFunc::x() + RatFunc::from_int(s.m),
        y: RatFunc::y() + RatFunc::from_int(s.n),
        z: RatFunc::constant(&b[5] + int(s.k)),
    }
}

fn push(block: &BlockSpec, out: &mut SparseVector, s: Shift, kind: Kind, c: Scalar) {
    if c.is_zero() {
        return;
    }
    if let (sign, Some(t)) = block.canonicalize(s, kind) {
        out.add_term(t, c * int(sign as i64));
    }
}

/// Applies `ev`/`D` to the symbolic terms attached to `t`.
fn lower(block: &BlockSpec, t: &Tableau, terms: Vec<(Shift, RatFunc)>) -> Result<SparseVector> {
    let d = DOp::new(block.base()[3].clone());
    let gap = RatFunc::x() - RatFunc::y();
    let mut out = SparseVector::new();
    for (eps, f) in terms {
        let f = match t.kind {
            Kind::Regular => gap.clone() * f,
            Kind::Derivative => f,
        };
        let (ev, der) = d.jet(&f)?;
        let s = t.shift + eps;
        push(block, &mut out, s, Kind::Regular, der);
        push(block, &mut out, s, Kind::Derivative, ev);
    }
    Ok(out)
}

fn check(block: &BlockSpec, t: &Tableau) -> Result<()> {
    require_singular(block)?;
    if block.is_canonical(t) {
        Ok(())
    } else {
        Err(Error::InvalidBlock(format!("{t} is not canonical")))
    }
}

/// `E_ij` on one canonical tableau of a singular block.
pub fn act_unit_singular(block: &BlockSpec, i: u8, j: u8, t: &Tableau) -> Result<SparseVector> {
    check(block, t)?;
    let w = symbolic_entries(block, t.shift);
    lower(block, t, coeff::terms(i, j, &w))
}

/// Linear extension of the singular action.
pub fn act_singular(block: &BlockSpec, g: Generator, v: &SparseVector) -> Result<SparseVector> {
    require_singular(block)?;
    crate::action::act(block, g, v)
}

/// `c_rs · T = γ_rs T` and `c_rs · DT = γ_rs DT + D(γ_rs) T`.
pub fn gamma_act_singular(block: &BlockSpec, r: u8, s: u8, v: &SparseVector) -> Result<SparseVector> {
    require_singular(block)?;
    block.check_vector(v)?;
    let idx = gamma_index(r, s)?;
    let mut out = SparseVector::new();
    for (t, c) in v.iter() {
        let w = symbolic_entries(block, t.shift);
        let e = [w.top[0].clone(), w.top[1].clone(), w.top[2].clone(), w.x, w.y, w.z];
        let g = gamma_values(&e)[idx].clone();
        out.axpy(c, &lower(block, t, vec![(Shift::ZERO, g)])?);
    }
    Ok(out)
}

/// Which version of the derivative-tableau lists for E32 and E23 the oracle
/// uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVariant {
    /// Coefficients as they must be for the relations to hold.
    Corrected,
    /// Coefficients exactly as printed: E32 uses `1/(m−n)` instead of
    /// `1/(n−m)` in its `T(w−δ22)` term, and the regular-tableau terms of E23
    /// are twice and minus twice the corrected values.
    Printed,
}

struct Closed<'a> {
    block: &'a BlockSpec,
    variant: OracleVariant,
}

impl Closed<'_> {
    fn p(&self, t: &Scalar) -> Scalar {
        self.block.top().iter().fold(Scalar::one(), |acc, a| acc * (a - t))
    }

    fn dp(&self, t: &Scalar) -> Scalar {
        let [a, b, c] = self.block.top();
        -((&b - t) * (&c - t) + (&a - t) * (&c - t) + (&a - t) * (&b - t))
    }

    fn unit(&self, i: u8, j: u8, t: &Tableau) -> Result<SparseVector> {
        let b = self.block;
        let Shift { m, n, k } = t.shift;
        let x0 = &b.base()[3];
        let xm = x0 + int(m);
        let xn = x0 + int(n);
        let zk = &b.base()[5] + int(k);
        let d21 = Shift::new(1, 0, 0);
        let d22 = Shift::new(0, 1, 0);
        let d11 = Shift::new(0, 0, 1);
        let w = t.shift;
        let dt = t.is_derivative();
        let mut out = SparseVector::new();
        let mut put = |s: Shift, kind: Kind, c: Scalar| push(b, &mut out, s, kind, c);
        let same = t.kind;
        let mn = int(m - n);
        match (i, j) {
            (1, 1) => put(w, same, zk.clone()),
            (2, 2) => put(w, same, &xm + &xn - &zk + int(1)),
            (3, 3) => {
                let [a, bb, c] = b.top();
                put(w, same, a + bb + c - &xm - &xn + int(2))
            }
            (2, 1) => put(w - d11, same, Scalar::one()),
            (1, 2) => {
                put(w + d11, same, -((&xm - &zk) * (&xn - &zk)));
                if dt {
                    put(w + d11, Kind::Regular, &mn * ratio(1, 2));
                }
            }
            (3, 2) if !dt && m == n => {
                put(w - d21, Kind::Regular, Scalar::one());
                put(w - d21, Kind::Derivative, int(2) * (&xm - &zk));
            }
            (3, 2) => {
                put(w - d21, same, (&xm - &zk) / &mn);
                put(w - d22, same, -((&xn - &zk) / &mn));
                if dt {
                    let nm = -mn.clone();
                    let lead = match self.variant {
                        OracleVariant::Corrected => nm.recip(),
                        OracleVariant::Printed => mn.recip(),
                    };
                    let c1 = ratio(1, 2) * (mn.recip() - int(2) * (&xm - &zk) / (&mn * &mn));
                    let c2 = -ratio(1, 2) * (lead - int(2) * (&xn - &zk) / (&nm * &nm));
                    put(w - d21, Kind::Regular, c1);
                    put(w - d22, Kind::Regular, c2);
                }
            }
            (2, 3) if !dt && m == n => {
                put(w + d22, Kind::Regular, self.dp(&xm));
                put(w + d22, Kind::Derivative, -(int(2) * self.p(&xm)));
            }
            (2, 3) => {
                put(w + d21, same, self.p(&xm) / &mn);
                put(w + d22, same, -(self.p(&xn) / &mn));
                if dt {
                    let sq = &mn * &mn;
                    let mut c1 = self.dp(&xm) / (int(2) * &mn) - self.p(&xm) / &sq;
                    let mut c2 = self.dp(&xn) / (int(2) * &mn) + self.p(&xn) / &sq;
                    if self.variant == OracleVariant::Printed {
                        c1 = int(2) * c1;
                        c2 = int(-2) * c2;
                    }
                    put(w + d21, Kind::Regular, c1);
                    put(w + d22, Kind::Regular, c2);
                }
            }
            (1, 3) => return self.commutator((1, 2), (2, 3), t),
            (3, 1) => return self.commutator((3, 2), (2, 1), t),
            _ => return Err(Error::Parse(format!("no matrix unit E{i}{j}"))),
        }
        Ok(out)
    }

    fn apply(&self, (i, j): (u8, u8), v: &SparseVector) -> Result<SparseVector> {
        let mut out = SparseVector::new();
        for (t, c) in v.iter() {
            out.axpy(c, &self.unit(i, j, t)?);
        }
        Ok(out)
    }

    fn commutator(&self, a: (u8, u8), b: (u8, u8), t: &Tableau) -> Result<SparseVector> {
        let v = SparseVector::basis(*t);
        let ab = self.apply(a, &self.apply(b, &v)?)?;
        let ba = self.apply(b, &self.apply(a, &v)?)?;
        Ok(&ab - &ba)
    }
}

/// Evaluates the explicit coefficient lists for the singular action.
///
/// `E13` and `E31` are taken as the commutators `[E12,E23]` and `[E32,E21]`
/// of the listed operators.
pub fn closed_form_oracle(block: &BlockSpec, g: Generator, t: &Tableau) -> Result<SparseVector> {
    closed_form_variant(block, g, t, OracleVariant::Corrected)
}

pub fn closed_form_variant(
    block: &BlockSpec,
    g: Generator,
    t: &Tableau,
    variant: OracleVariant,
) -> Result<SparseVector> {
    check(block, t)?;
    let cf = Closed { block, variant };
    let mut out = SparseVector::new();
    for (c, u) in g.units() {
        out.axpy(&c, &cf.apply(u, &SparseVector::basis(*t))?);
    }
    Ok(out)
}

/// A tableau and generator on which the oracle and the symbolic action differ.
#[derive(Clone, Debug, serde::Serialize)]
pub struct OracleMismatch {
    pub generator: Generator,
    pub tableau: String,
    pub symbolic: String,
    pub oracle: String,
}

/// Compares [`closed_form_oracle`] with [`act_singular`] on the radius-`r` window.
pub fn oracle_mismatches(block: &BlockSpec, r: i64, variant: OracleVariant) -> Result<Vec<OracleMismatch>> {
    use rayon::prelude::*;
    require_singular(block)?;
    let tabs = block.window(r);
    let out = tabs
        .par_iter()
        .map(|t| {
            let mut bad = Vec::new();
            for g in Generator::ALL {
                let a = act_singular(block, g, &SparseVector::basis(*t))?;
                let o = closed_form_variant(block, g, t, variant)?;
                if a != o {
                    bad.push(OracleMismatch {
                        generator: g,
                        tableau: t.to_string(),
                        symbolic: a.to_string(),
                        oracle: o.to_string(),
                    });
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(out.into_iter().flatten().collect())
}
