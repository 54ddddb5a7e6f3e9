//! The Hodge–Deligne avatar ring `Z[u,v,(uv)^{-1}]`.
//!
//! A class of a variety is represented by its compactly-supported
//! E-polynomial `sum (-1)^{p+q} h^{p,q} u^p v^q`; the class of the affine
//! line is the monomial `uv`, and inverting it makes every monomial lattice
//! point of `Z^2` reachable. Monomials are line elements for the
//! lambda-structure used throughout: Adams operations act by
//! `u^p v^q -> u^{kp} v^{kq}`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::num::{Int, Rat, Ring};

/// Bivariate Laurent polynomial with coefficients in `C`, exponents in `Z^2`.
///
/// `EPoly` (integer coefficients) is the public avatar ring; the rational
/// variant backs Newton recursions and plethystic operations whose
/// intermediate steps divide by integers.
#[derive(Clone, PartialEq, Eq)]
pub struct BivLaurent<C: Ring> {
    coeffs: BTreeMap<(i64, i64), C>,
}

pub type EPoly = BivLaurent<Int>;
pub type QEPoly = BivLaurent<Rat>;

impl<C: Ring> BivLaurent<C> {
    pub fn new() -> Self {
        BivLaurent {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(p: i64, q: i64, c: C) -> Self {
        let mut m = Self::new();
        if !c.is_zero() {
            m.coeffs.insert((p, q), c);
        }
        m
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, 0, c)
    }

    /// The class of the affine line, `L = uv`.
    pub fn lefschetz() -> Self {
        Self::monomial(1, 1, C::one())
    }

    /// `L^k` for any integer `k` (negative powers allowed).
    pub fn lefschetz_pow(k: i64) -> Self {
        Self::monomial(k, k, C::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &C)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, p: i64, q: i64) -> C {
        self.coeffs.get(&(p, q)).cloned().unwrap_or_else(C::zero)
    }

    pub fn insert_term(&mut self, p: i64, q: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get(&(p, q)).cloned() {
            None => {
                self.coeffs.insert((p, q), c);
            }
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.coeffs.remove(&(p, q));
                } else {
                    self.coeffs.insert((p, q), s);
                }
            }
        }
    }

    /// Adams operation `psi^k`: every monomial `u^p v^q` is a line element,
    /// so `psi^k(u^p v^q) = u^{kp} v^{kq}`. Ring endomorphism; requires
    /// `k >= 1`.
    pub fn adams(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter(String::from(
                "adams operation needs k >= 1",
            )));
        }
        let mut out = Self::new();
        for (&(p, q), c) in &self.coeffs {
            out.insert_term(p * k as i64, q * k as i64, c.clone());
        }
        Ok(out)
    }

    /// Max of `p + q` over monomials; `None` encodes weight `-infinity`.
    pub fn weight(&self) -> Option<i64> {
        self.coeffs.keys().map(|&(p, q)| p + q).max()
    }

    /// Coefficient of `(uv)^d`, i.e. of the monomial `u^d v^d`.
    pub fn uv_coeff(&self, d: i64) -> C {
        self.coeff(d, d)
    }

    /// Largest `d` with a nonzero `(uv)^d` term.
    pub fn top_uv_degree(&self) -> Option<i64> {
        self.coeffs
            .keys()
            .filter(|&&(p, q)| p == q)
            .map(|&(p, _)| p)
            .max()
    }

    /// Evaluate at `u = v = sqrt(x)` formally, i.e. substitute `uv -> x`.
    /// Only defined for polynomials supported on the diagonal `p = q`.
    pub fn eval_uv(&self, x: &Rat) -> Result<Rat>
    where
        C: IntoRat,
    {
        let mut acc = <Rat as num_traits::Zero>::zero();
        for (&(p, q), c) in &self.coeffs {
            if p != q {
                return Err(Error::InvalidParameter(String::from(
                    "eval_uv needs a polynomial in uv (diagonal support)",
                )));
            }
            acc += c.clone().into_rat() * rat_pow(x, p);
        }
        Ok(acc)
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> BivLaurent<D> {
        let mut out = BivLaurent::new();
        for (&(p, q), c) in &self.coeffs {
            out.insert_term(p, q, f(c));
        }
        out
    }
}

fn rat_pow(x: &Rat, e: i64) -> Rat {
    let mut acc = <Rat as num_traits::One>::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Coefficient rings that embed into `Q`; lets `eval_uv` serve both the
/// integer and rational variants.
pub trait IntoRat: Ring {
    fn into_rat(self) -> Rat;
}

impl IntoRat for Int {
    fn into_rat(self) -> Rat {
        Rat::from_integer(self)
    }
}

impl IntoRat for Rat {
    fn into_rat(self) -> Rat {
        self
    }
}

impl<C: Ring> Default for BivLaurent<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Ring> Ring for BivLaurent<C> {
    fn zero() -> Self {
        Self::new()
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(p, q), c) in &other.coeffs {
            out.insert_term(p, q, c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        let mut out = Self::new();
        for (&(p, q), c) in &self.coeffs {
            out.coeffs.insert((p, q), c.neg());
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (&(p1, q1), c1) in &self.coeffs {
            for (&(p2, q2), c2) in &other.coeffs {
                out.insert_term(p1 + p2, q1 + q2, c1.mul(c2));
            }
        }
        out
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_int(n: i64) -> Self {
        Self::constant(C::from_int(n))
    }
}

impl EPoly {
    /// View with rational coefficients.
    pub fn to_rational(&self) -> QEPoly {
        self.map_coeffs(|c| Rat::from_integer(c.clone()))
    }

    /// Serialise as `[p, q, coeff]` triples in lexicographic order.
    pub fn to_triples(&self) -> Vec<(i64, i64, Int)> {
        self.terms().map(|(&(p, q), c)| (p, q, c.clone())).collect()
    }

    pub fn from_triples(triples: &[(i64, i64, Int)]) -> Self {
        let mut out = Self::new();
        for (p, q, c) in triples {
            out.insert_term(*p, *q, c.clone());
        }
        out
    }
}

impl QEPoly {
    /// Back to integer coefficients; errors if any denominator survives.
    pub fn to_integer(&self) -> Result<EPoly> {
        use num_traits::One;
        let mut out = EPoly::new();
        for (&(p, q), c) in self.terms() {
            if !c.denom().is_one() {
                return Err(Error::InvalidParameter(String::from(
                    "non-integral coefficient where an integral class was expected",
                )));
            }
            out.insert_term(p, q, c.numer().clone());
        }
        Ok(out)
    }
}

impl<C: Ring> core::fmt::Debug for BivLaurent<C> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(p, q), c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}", c)?;
            if p != 0 {
                write!(f, "*u^{p}")?;
            }
            if q != 0 {
                write!(f, "*v^{q}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn l() -> EPoly {
        EPoly::lefschetz()
    }

    #[test]
    fn ring_axioms_on_samples() {
        let a = l().add(&EPoly::one());
        let b = EPoly::monomial(2, 0, int(3)).sub(&l());
        let c = EPoly::monomial(-1, -1, int(1));
        // commutativity, associativity, distributivity
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        // L * L^{-1} = 1
        assert_eq!(l().mul(&c), EPoly::one());
    }

    #[test]
    fn adams_is_ring_endomorphism() {
        let f = l().add(&EPoly::monomial(1, 0, int(2)));
        let g = EPoly::monomial(0, 1, int(1)).sub(&EPoly::one());
        let lhs = f.mul(&g).adams(3).unwrap();
        let rhs = f.adams(3).unwrap().mul(&g.adams(3).unwrap());
        assert_eq!(lhs, rhs);
        assert!(EPoly::one().adams(0).is_err());
    }

    #[test]
    fn adams_examples() {
        // adams(uv, 3) = u^3 v^3
        assert_eq!(l().adams(3).unwrap(), EPoly::monomial(3, 3, int(1)));
        // adams(1+u+v, 2) = 1+u^2+v^2
        let f = EPoly::one()
            .add(&EPoly::monomial(1, 0, int(1)))
            .add(&EPoly::monomial(0, 1, int(1)));
        let expect = EPoly::one()
            .add(&EPoly::monomial(2, 0, int(1)))
            .add(&EPoly::monomial(0, 2, int(1)));
        assert_eq!(f.adams(2).unwrap(), expect);
    }

    #[test]
    fn weight_and_uv_extraction() {
        let f = l().mul(&l()).add(&EPoly::monomial(3, 0, int(-2)));
        assert_eq!(f.weight(), Some(4));
        assert_eq!(f.uv_coeff(2), int(1));
        assert_eq!(f.uv_coeff(1), int(0));
        assert_eq!(EPoly::zero().weight(), None);
    }

    #[test]
    fn eval_uv_diagonal_only() {
        let f = l().add(&EPoly::one());
        assert_eq!(f.eval_uv(&crate::num::rat_int(3)).unwrap(), crate::num::rat_int(4));
        let g = EPoly::monomial(1, 0, int(1));
        assert!(g.eval_uv(&crate::num::rat_int(3)).is_err());
    }

    #[test]
    fn triples_round_trip() {
        let f = l().sub(&EPoly::monomial(-1, -1, int(5)));
        assert_eq!(EPoly::from_triples(&f.to_triples()), f);
    }
}
