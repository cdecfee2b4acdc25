//! Action of gl(3) and of the Gelfand-Tsetlin subalgebra on generic blocks.

use crate::action::{self, Generator, Violation};
use crate::coeff::{self, Entries};
use crate::error::{Error, Result};
use crate::tableau::{gamma_index, BlockSpec, Kind, SparseVector, Tableau};

fn require_generic(block: &BlockSpec) -> Result<()> {
    if block.is_singular() {
        Err(Error::WrongBlockKind { expected: "generic" })
    } else {
        Ok(())
    }
}

/// `E_ij · T(w)` on a generic block.
pub fn act_unit_generic(block: &BlockSpec, i: u8, j: u8, t: &Tableau) -> Result<SparseVector> {
    require_generic(block)?;
    if t.kind != Kind::Regular {
        return Err(Error::InvalidBlock("generic blocks have only regular tableaux".into()));
    }
    let w = Entries::from_array(block.entries_of(t.shift));
    Ok(coeff::terms(i, j, &w)
        .into_iter()
        .map(|(s, c)| (Tableau { shift: t.shift + s, kind: Kind::Regular }, c))
        .collect())
}

/// Linear extension of the tableau formulas.
pub fn act(block: &BlockSpec, g: Generator, v: &SparseVector) -> Result<SparseVector> {
    require_generic(block)?;
    action::act(block, g, v)
}

/// Left-to-right word; the rightmost generator acts first.
pub fn act_word(block: &BlockSpec, word: &[Generator], v: &SparseVector) -> Result<SparseVector> {
    require_generic(block)?;
    action::act_word(block, word, v)
}

/// Nonzero residuals of `[g1, g2] − expected` on the radius-`r` window,
/// where `expected` comes from the gl(3) structure constants.
pub fn bracket_residual(block: &BlockSpec, g1: Generator, g2: Generator, r: i64) -> Result<Vec<Violation>> {
    require_generic(block)?;
    action::bracket_sweep(block, g1, g2, r)
}

/// `c_rs` acts diagonally by `γ_rs` at the tableau entries.
pub fn gamma_act(block: &BlockSpec, r: u8, s: u8, v: &SparseVector) -> Result<SparseVector> {
    require_generic(block)?;
    block.check_vector(v)?;
    let idx = gamma_index(r, s)?;
    Ok(v.iter().map(|(t, c)| (*t, c * &block.gamma_of(t).0[idx])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Scalar};
    use num_traits::Zero;

    fn example() -> BlockSpec {
        BlockSpec::new([int(0), ratio(1, 3), ratio(-10, 3), int(0), ratio(7, 3), int(0)], true).unwrap()
    }

    #[test]
    fn e21_lowers_k() {
        let b = example();
        let v = act(&b, Generator::E21, &SparseVector::basis(Tableau::regular(1, 2, 3))).unwrap();
        assert_eq!(v, SparseVector::basis(Tableau::regular(1, 2, 2)));
    }

    #[test]
    fn e12_vanishes_when_w11_equals_w21() {
        let b = example();
        let v = act(&b, Generator::E12, &SparseVector::basis(Tableau::regular(0, 0, 0))).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn h1_is_the_weight() {
        let b = example();
        for t in b.window(1) {
            let v = act(&b, Generator::H1, &SparseVector::basis(t)).unwrap();
            assert_eq!(v, SparseVector::term(t, b.weight_of(&t).h1));
        }
    }

    #[test]
    fn sl2_triple_and_root_pairings() {
        let b = example();
        for (g1, g2) in [(Generator::E12, Generator::E21), (Generator::E13, Generator::E31), (Generator::E12, Generator::E13)] {
            assert!(bracket_residual(&b, g1, g2, 2).unwrap().is_empty());
        }
    }

    #[test]
    fn gamma_eigenvalues() {
        let b = example();
        let t = Tableau::regular(1, -1, 2);
        let v = SparseVector::basis(t);
        assert_eq!(gamma_act(&b, 1, 1, &v).unwrap(), SparseVector::term(t, int(2)));
        let e = b.entries_of(t.shift);
        let g21 = &e[3] + &e[4] + int(1);
        assert_eq!(gamma_act(&b, 2, 1, &v).unwrap(), SparseVector::term(t, g21));
        let g = b.gamma_of(&t);
        for (idx, (r, s)) in crate::tableau::GAMMA_INDICES.iter().enumerate() {
            let mut w = gamma_act(&b, *r, *s, &v).unwrap();
            w.axpy(&-g.0[idx].clone(), &v);
            assert!(w.is_zero());
        }
        let _ = Scalar::zero();
    }

    #[test]
    fn singular_block_is_rejected() {
        let b = BlockSpec::new(std::array::from_fn(|_| int(0)), false).unwrap();
        assert!(matches!(
            act(&b, Generator::E12, &SparseVector::basis(Tableau::regular(0, 0, 0))),
            Err(Error::WrongBlockKind { .. })
        ));
    }
}
