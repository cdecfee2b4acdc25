//! Spectral calculus of `A = E12 E21` and `B = E23 E32` on weight spaces.
//!
//! The constants of the centralizer of the Cartan subalgebra, the
//! connectedness polynomial `g_λ`, chains of `A`-eigenvalues, and a checker
//! for the three polynomial identities in `A` and `B`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::action::{act, Generator};
use crate::error::Result;
use crate::scalar::{self, int, ratio, Scalar};
use crate::tableau::{gamma_values, BlockSpec, Shift, SparseVector, Tableau};

/// Constants of the identities in `A`, `B` for a weight `(h1, h2)` and
/// central character `(γ1, γ2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerConstants {
    #[serde(serialize_with = "crate::ser::scalar")]
    pub r: Scalar,
    #[serde(serialize_with = "crate::ser::scalar")]
    pub r1: Scalar,
    #[serde(serialize_with = "crate::ser::scalar")]
    pub a: Scalar,
    #[serde(serialize_with = "crate::ser::scalar")]
    pub p: Scalar,
    #[serde(serialize_with = "crate::ser::scalar")]
    pub tau: Scalar,
    #[serde(serialize_with = "crate::ser::scalar")]
    pub tau1: Scalar,
    #[serde(serialize_with = "crate::ser::scalar")]
    pub eta: Scalar,
}

/// Which form of the identities to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbVariant {
    /// Second identity with `r1 A` and `τ1` linear in `p h2`.
    Corrected,
    /// Second identity with `r1 B` and `τ1` containing `p h2²`.
    Printed,
}

/// `r = ½(h1² − 2h1)`.
pub fn r_of(h1: &Scalar) -> Scalar {
    ratio(1, 2) * (h1 * h1 - int(2) * h1)
}

pub fn centralizer_constants(h1: &Scalar, h2: &Scalar, g1: &Scalar, g2: &Scalar) -> CentralizerConstants {
    constants_with(h1, h2, g1, g2, AbVariant::Corrected)
}

fn constants_with(h1: &Scalar, h2: &Scalar, g1: &Scalar, g2: &Scalar, v: AbVariant) -> CentralizerConstants {
    let q = |p, q| ratio(p, q);
    let (h11, h22, h12) = (h1 * h1, h2 * h2, h1 * h2);
    let r = r_of(h1);
    let r1 = r_of(h2);
    let a = int(6) * g1 + h1 + h2 - q(1, 3) * &h11 - q(1, 3) * &h22 + q(1, 6) * &h12;
    let d = h1 - h2;
    let p3 = q(1, 9) * &d * &d * &d - g2 + int(6) * g1 * (h2 - h1 + int(3)) - &h11 - &h22 - &h12
        + int(2) * h1
        - int(2) * h2;
    let p = q(1, 3) * p3;
    let tau = q(1, 2) * h1 * &p + &h12;
    let lead = match v {
        AbVariant::Corrected => h2.clone(),
        AbVariant::Printed => h22.clone(),
    };
    let tau1 = -q(1, 2) * &p * lead + q(1, 3) * h2 * (int(18) * g1 - &h11 - &h22 - &h12 + int(3) * h1);
    let eta = q(1, 4) * &p * &p + q(1, 6) * &p * (&h12 + &h11 + &h22 - int(18) * g1)
        + q(1, 4) * &h12 * (&h12 + int(4) - int(2) * &a);
    CentralizerConstants { r, r1, a, p, tau, tau1, eta }
}

/// `g_λ(x, y) = (x − y)² − 2(x + y) − 2r`, with `r` from `h1`.
pub fn g_lambda(x: &Scalar, y: &Scalar, h1: &Scalar) -> Scalar {
    let d = x - y;
    &d * &d - int(2) * (x + y) - int(2) * r_of(h1)
}

/// Type of a connected chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainClass {
    /// Contains `−r/2`.
    Degenerate,
    /// Contains `−¼ − r/2`.
    Critical,
    /// Part of a degenerate or critical sequence, without the special value.
    SingularOther,
    Generic,
}

/// Values `μ_i` for `i = start, start+1, …` of a connected sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub start: i64,
    #[serde(serialize_with = "crate::ser::scalar_list")]
    pub values: Vec<Scalar>,
    pub class: ChainClass,
    /// The chain could not be extended over the rationals.
    pub truncated: bool,
}

impl Chain {
    /// `μ_i`, if `i` is in range.
    pub fn get(&self, i: i64) -> Option<&Scalar> {
        usize::try_from(i - self.start).ok().and_then(|j| self.values.get(j))
    }

    /// Whether consecutive values satisfy `g_λ = 0`.
    pub fn is_connected(&self, h1: &Scalar) -> bool {
        self.values.windows(2).all(|w| g_lambda(&w[0], &w[1], h1).is_zero())
    }

    /// Triples violating `μ_{i+1} + μ_{i−1} = 2μ_i + 2`, by middle index.
    pub fn recurrence_failures(&self) -> Vec<i64> {
        self.values
            .windows(3)
            .enumerate()
            .filter(|(_, w)| &w[2] + &w[0] != int(2) * &w[1] + int(2))
            .map(|(j, _)| self.start + j as i64 + 1)
            .collect()
    }
}

/// Classifies values `μ_i` of a sequence whose step is `μ_1 − μ_0 − 1 = d`.
fn classify(values: &[Scalar], d: Option<&Scalar>, r: &Scalar) -> ChainClass {
    let deg = -ratio(1, 2) * r;
    let crit = &deg - ratio(1, 4);
    if values.contains(&deg) {
        ChainClass::Degenerate
    } else if values.contains(&crit) {
        ChainClass::Critical
    } else if d.is_some_and(scalar::is_int) {
        ChainClass::SingularOther
    } else {
        ChainClass::Generic
    }
}

/// Extends `μ0` to `μ_{−range} … μ_{range}` with `μ_1 = μ0 + 1 + √(1 + 4μ0 + 2r)`,
/// the nonnegative root. Irrational roots leave the single value `μ0`.
pub fn chain_from(mu0: &Scalar, h1: &Scalar, range: u32) -> Chain {
    let r = r_of(h1);
    let disc = int(1) + int(4) * mu0 + int(2) * &r;
    let Some(d) = scalar::sqrt_exact(&disc) else {
        return Chain {
            start: 0,
            values: vec![mu0.clone()],
            class: classify(std::slice::from_ref(mu0), None, &r),
            truncated: true,
        };
    };
    let range = i64::from(range);
    // μ_n = μ0 + n d + n².
    let values: Vec<Scalar> = (-range..=range).map(|n| mu0 + int(n) * &d + int(n * n)).collect();
    let class = classify(&values, Some(&d), &r);
    Chain { start: -range, values, class, truncated: false }
}

/// `μ_i`: the diagonal coefficient of `E12 E21` on the tableau at
/// `anchor + (i, −i, 0)`, for `|i| <= range`. On a singular block this is
/// the eigenvalue of the Jordan block of a derivative tableau.
pub fn mu_line(block: &BlockSpec, anchor: Shift, range: u32) -> Result<Chain> {
    let range = i64::from(range);
    let mut values = Vec::new();
    for i in -range..=range {
        let t = block.tableau_at(anchor + Shift::new(i, -i, 0));
        let v = SparseVector::basis(t);
        let av = act(block, Generator::E12, &act(block, Generator::E21, &v)?)?;
        values.push(av.coeff(&t));
    }
    let h1 = block.weight_of(&block.tableau_at(anchor)).h1;
    let j = range as usize;
    let d = (range > 0).then(|| &values[j + 1] - &values[j] - int(1));
    let class = classify(&values, d.as_ref(), &r_of(&h1));
    Ok(Chain { start: -range, values, class, truncated: false })
}

/// Nonzero residual of one identity on one tableau.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbResidual {
    pub identity: u8,
    pub tableau: Tableau,
    #[serde(serialize_with = "crate::ser::display")]
    pub residual: SparseVector,
}

/// The same block with all six entries moved by a common constant so that
/// the trace vanishes. Off-diagonal matrix units are unchanged.
fn traceless(block: &BlockSpec) -> Result<BlockSpec> {
    let b = block.base();
    let c = (&b[0] + &b[1] + &b[2] + int(3)) / int(3);
    BlockSpec::new(std::array::from_fn(|i| &b[i] - &c), true)
}

/// Evaluates the three identities in `A` and `B` on `t`.
pub fn verify_ab_identities(block: &BlockSpec, t: &Tableau) -> Result<Vec<AbResidual>> {
    ab_identities(block, t, AbVariant::Corrected)
}

/// Evaluates the identities in the chosen form; returns nonzero residuals.
pub fn ab_identities(block: &BlockSpec, t: &Tableau, variant: AbVariant) -> Result<Vec<AbResidual>> {
    let b = traceless(block)?;
    let w = b.weight_of(t);
    let g = gamma_values(&b.entries_of(t.shift));
    let g1 = ratio(1, 12) * &g[4];
    let g2 = ratio(3, 2) * &g[4] - &g[5];
    let k = constants_with(&w.h1, &w.h2, &g1, &g2, variant);

    let v = SparseVector::basis(*t);
    let mut memo: HashMap<String, SparseVector> = HashMap::new();
    let mut word = |s: &str| -> Result<SparseVector> {
        let mut cur = v.clone();
        for (j, op) in s.chars().rev().enumerate() {
            let key = s[s.len() - j - 1..].to_string();
            if let Some(x) = memo.get(&key) {
                cur = x.clone();
                continue;
            }
            let (x, y) = if op == 'A' { (Generator::E12, Generator::E21) } else { (Generator::E23, Generator::E32) };
            cur = act(&b, x, &act(&b, y, &cur)?)?;
            memo.insert(key, cur.clone());
        }
        Ok(cur)
    };
    let half = ratio(1, 2);
    let quarter = ratio(1, 4);
    let lin = |terms: &[(Scalar, SparseVector)]| {
        let mut out = SparseVector::new();
        for (c, x) in terms {
            out.axpy(c, x);
        }
        out
    };
    let one = Scalar::one();
    let (a, bb, aa, ab, ba, bbb) = (word("A")?, word("B")?, word("AA")?, word("AB")?, word("BA")?, word("BB")?);
    let (aba, bab, aab, baa, bba, abb) =
        (word("ABA")?, word("BAB")?, word("AAB")?, word("BAA")?, word("BBA")?, word("ABB")?);
    let comm2 = lin(&[
        (one.clone(), word("ABAB")?),
        (-&one, word("ABBA")?),
        (-&one, word("BAAB")?),
        (one.clone(), word("BABA")?),
    ]);
    let id1 = lin(&[
        (k.a.clone(), a.clone()),
        (-&one, aa.clone()),
        (-&one, ab.clone()),
        (-&one, ba.clone()),
        (-&one, aba.clone()),
        (half.clone(), aab.clone()),
        (half.clone(), baa.clone()),
        (-&k.r, bb.clone()),
        (-&k.tau, v.clone()),
    ]);
    let r1_target = match variant {
        AbVariant::Corrected => a.clone(),
        AbVariant::Printed => bb.clone(),
    };
    let id2 = lin(&[
        (k.a.clone(), bb.clone()),
        (-&one, bbb.clone()),
        (-&one, ab.clone()),
        (-&one, ba.clone()),
        (-&one, bab.clone()),
        (half.clone(), bba.clone()),
        (half.clone(), abb.clone()),
        (-&k.r1, r1_target),
        (-&k.tau1, v.clone()),
    ]);
    let id3 = lin(&[
        (quarter, comm2),
        (-&one, aba),
        (-&one, bab),
        (-&half * &k.r, bbb),
        (-&half * &k.r1, aa),
        (&k.a * &half - &one, &ab + &ba),
        (-(&k.tau + &k.r), bb),
        (-(&k.tau1 + &k.r1), a),
        (-&k.eta, v),
    ]);
    Ok([id1, id2, id3]
        .into_iter()
        .zip(1..)
        .filter(|(r, _)| !r.is_zero())
        .map(|(residual, identity)| AbResidual { identity, tableau: *t, residual })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_r() {
        let z = int(0);
        assert_eq!(centralizer_constants(&int(0), &z, &z, &z).r, int(0));
        assert_eq!(centralizer_constants(&int(2), &z, &z, &z).r, int(0));
        assert_eq!(centralizer_constants(&int(-1), &z, &z, &z).r, ratio(3, 2));
    }

    #[test]
    fn g_lambda_basics() {
        let h = ratio(2, 3);
        let x = ratio(5, 7);
        assert_eq!(g_lambda(&x, &x, &h), int(-4) * &x - int(2) * r_of(&h));
        assert!(g_lambda(&int(0), &int(2), &int(0)).is_zero());
        assert_eq!(g_lambda(&x, &int(3), &h), g_lambda(&int(3), &x, &h));
    }

    #[test]
    fn degenerate_chain_at_zero_weight() {
        let c = chain_from(&int(0), &int(0), 4);
        assert_eq!(c.class, ChainClass::Degenerate);
        for n in -4..=4 {
            assert_eq!(c.get(n), Some(&int(n * (n + 1))));
        }
        assert!(c.recurrence_failures().is_empty() && c.is_connected(&int(0)));
    }

    #[test]
    fn critical_chain_values() {
        let h1 = ratio(1, 3);
        let r = r_of(&h1);
        let crit = -ratio(1, 4) - &r / int(2);
        let c = chain_from(&crit, &h1, 3);
        assert_eq!(c.class, ChainClass::Critical);
        for (i, mu) in c.values.iter().enumerate() {
            let n = i as i64 - 3;
            assert_eq!(*mu, int(n * n) - ratio(1, 4) - &r / int(2));
        }
    }

    #[test]
    fn irrational_root_truncates() {
        let c = chain_from(&int(1), &int(0), 3);
        assert!(c.truncated && c.values.len() == 1);
        assert_eq!(c.class, ChainClass::Generic);
    }

    #[test]
    fn mu_line_on_integral_entries() {
        let q = |p| ratio(p, 7);
        let b = BlockSpec::new([q(1), q(2), q(3), int(0), int(0), int(0)], false).unwrap();
        let c = mu_line(&b, Shift::ZERO, 3).unwrap();
        for i in -3..=3 {
            assert_eq!(c.get(i), Some(&int(i * i - 1)));
        }
        assert_eq!(c.class, ChainClass::Critical);
        assert!(c.is_connected(&int(-1)));
    }
}
