//! Rational functions in the two row-two entries `(v21, v22)` and the
//! evaluation/derivation pair at a singular point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, ratio, Field, Scalar};

/// Polynomial in `X = v21`, `Y = v22`, keyed by exponent pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl Poly2 {
    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly2::default();
        p.add_term((0, 0), c);
        p
    }

    pub fn x() -> Self {
        let mut p = Poly2::default();
        p.add_term((1, 0), Scalar::one());
        p
    }

    pub fn y() -> Self {
        let mut p = Poly2::default();
        p.add_term((0, 1), Scalar::one());
        p
    }

    fn add_term(&mut self, e: (u32, u32), c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * pow(x, i) * pow(y, j);
        }
        acc
    }

    pub fn dx(&self) -> Self {
        let mut p = Poly2::default();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                p.add_term((i - 1, j), c * int(i as i64));
            }
        }
        p
    }

    pub fn dy(&self) -> Self {
        let mut p = Poly2::default();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                p.add_term((i, j - 1), c * int(j as i64));
            }
        }
        p
    }

    fn lead(&self) -> Option<((u32, u32), &Scalar)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    pub fn div_exact(&self, g: &Poly2) -> Option<Poly2> {
        let ((a, b), d) = g.lead()?;
        let mut r = self.clone();
        let mut q = Poly2::default();
        while let Some(((i, j), c)) = r.lead() {
            if i < a || j < b {
                return None;
            }
            let mut t = Poly2::default();
            t.add_term((i - a, j - b), c / d);
            r = &r - &(&t * g);
            q = &q + &t;
        }
        Some(q)
    }
}

fn pow(x: &Scalar, e: u32) -> Scalar {
    num_traits::pow(x.clone(), e as usize)
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, o: &Poly2) -> Poly2 {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(*e, c.clone());
        }
        p
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, o: &Poly2) -> Poly2 {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(*e, -c.clone());
        }
        p
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, o: &Poly2) -> Poly2 {
        let mut p = Poly2::default();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &o.terms {
                p.add_term((i + k, j + l), c * d);
            }
        }
        p
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), c)| format!("({})*X^{}*Y^{}", crate::scalar::format(c), i, j))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Quotient of two [`Poly2`]; the denominator is never the zero polynomial.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly2,
    den: Poly2,
}

impl RatFunc {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc { num, den }.tidy())
    }

    pub fn constant(c: Scalar) -> Self {
        RatFunc { num: Poly2::constant(c), den: Poly2::constant(Scalar::one()) }
    }

    /// The variable `v21`.
    pub fn x() -> Self {
        RatFunc { num: Poly2::x(), den: Poly2::constant(Scalar::one()) }
    }

    /// The variable `v22`.
    pub fn y() -> Self {
        RatFunc { num: Poly2::y(), den: Poly2::constant(Scalar::one()) }
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    fn tidy(mut self) -> Self {
        if self.num.is_zero() {
            self.den = Poly2::constant(Scalar::one());
        } else if let Some(c) = self.den.as_constant() {
            if !c.is_one() {
                let inv = Poly2::constant(c.recip());
                self.num = &self.num * &inv;
                self.den = Poly2::constant(Scalar::one());
            }
        }
        self
    }

    /// Exact value at a point where the reduced denominator does not vanish.
    ///
    /// Common factors `X - Y - (x - y)` are cancelled first, which is the only
    /// way a denominator of a Gelfand-Tsetlin coefficient can vanish.
    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        let f = self.reduced_at(x, y)?;
        Ok(f.num.eval(x, y) / f.den.eval(x, y))
    }

    /// Partial derivatives `(∂/∂v21, ∂/∂v22)` as rational functions.
    pub fn partials(&self) -> (RatFunc, RatFunc) {
        let d2 = &self.den * &self.den;
        let px = &(&self.num.dx() * &self.den) - &(&self.num * &self.den.dx());
        let py = &(&self.num.dy() * &self.den) - &(&self.num * &self.den.dy());
        (
            RatFunc { num: px, den: d2.clone() }.tidy(),
            RatFunc { num: py, den: d2 }.tidy(),
        )
    }

    /// Cancels the factor vanishing at `(x, y)` until the denominator is
    /// nonzero there.
    pub fn reduced_at(&self, x: &Scalar, y: &Scalar) -> Result<RatFunc> {
        let mut f = self.clone();
        let g = &(&Poly2::x() - &Poly2::y()) - &Poly2::constant(x - y);
        while f.den.eval(x, y).is_zero() {
            match (f.num.div_exact(&g), f.den.div_exact(&g)) {
                (Some(n), Some(d)) => f = RatFunc { num: n, den: d }.tidy(),
                _ => return Err(Error::DivisionByZero),
            }
        }
        Ok(f)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &RatFunc) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::constant(Scalar::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::constant(Scalar::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc { num: &self.num + &o.num, den: self.den }.tidy();
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc { num, den: &self.den * &o.den }.tidy()
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self + (-o)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        RatFunc { num: &self.num * &o.num, den: &self.den * &o.den }.tidy()
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    /// Panics on division by the zero function.
    fn div(self, o: RatFunc) -> RatFunc {
        assert!(!o.num.is_zero(), "division by the zero rational function");
        RatFunc { num: &self.num * &o.den, den: &self.den * &o.num }.tidy()
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den }
    }
}

impl Field for RatFunc {
    fn from_scalar(s: &Scalar) -> Self {
        RatFunc::constant(s.clone())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

/// Evaluation `ev` and derivation `D = ½(∂/∂v21 − ∂/∂v22)` at a point
/// `v̄21 = v̄22 = x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DOp {
    pub x: Scalar,
}

impl DOp {
    pub fn new(x: Scalar) -> Self {
        DOp { x }
    }

    pub fn ev(&self, f: &RatFunc) -> Result<Scalar> {
        f.eval(&self.x, &self.x)
    }

    pub fn d(&self, f: &RatFunc) -> Result<Scalar> {
        let g = f.reduced_at(&self.x, &self.x)?;
        let (px, py) = g.partials();
        Ok((px.eval(&self.x, &self.x)? - py.eval(&self.x, &self.x)?) * ratio(1, 2))
    }

    /// `(ev f, D f)` in one pass.
    pub fn jet(&self, f: &RatFunc) -> Result<(Scalar, Scalar)> {
        let g = f.reduced_at(&self.x, &self.x)?;
        let x = &self.x;
        let n = g.num.eval(x, x);
        let d = g.den.eval(x, x);
        let dn = g.num.dx().eval(x, x) - g.num.dy().eval(x, x);
        let dd = g.den.dx().eval(x, x) - g.den.dy().eval(x, x);
        let ev = &n / &d;
        let der = (dn * &d - &n * dd) / (&d * &d) * ratio(1, 2);
        Ok((ev, der))
    }
}
