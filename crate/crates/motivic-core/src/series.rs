//! Truncated formal power series over avatar rings.
//!
//! A `MotSeries` is a finitely-supported coefficient table indexed by
//! exponent vectors inside a per-variable truncation box; every operation
//! silently works modulo the ideal of terms outside the box, which is stable
//! under multiplication and under the variable scalings `t_i -> t_i^k` used
//! by Adams operations. The plethystic exponential and logarithm implement
//! the power-structure evaluation of constant-family Euler products: Adams
//! operations act on the coefficients and on all `t`-variables
//! simultaneously.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::epoly::{EPoly, QEPoly};
use crate::error::{Error, Result};
use crate::num::{moebius, rat, Rat, Ring};

/// Rings carrying Adams operations (`psi^k`), with `psi^1 = id`.
pub trait AdamsRing: Ring {
    fn adams_op(&self, k: u32) -> Self;
}

impl AdamsRing for EPoly {
    fn adams_op(&self, k: u32) -> Self {
        self.adams(k).expect("k >= 1")
    }
}

impl AdamsRing for QEPoly {
    fn adams_op(&self, k: u32) -> Self {
        self.adams(k).expect("k >= 1")
    }
}

#[derive(Clone, PartialEq)]
pub struct MotSeries<C: Ring> {
    vars: Vec<String>,
    bounds: Vec<u32>,
    coeffs: BTreeMap<Vec<u32>, C>,
}

impl<C: Ring> MotSeries<C> {
    pub fn new(vars: &[&str], bounds: &[u32]) -> Self {
        assert_eq!(vars.len(), bounds.len());
        MotSeries {
            vars: vars.iter().map(|v| String::from(*v)).collect(),
            bounds: bounds.to_vec(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn new_owned(vars: Vec<String>, bounds: Vec<u32>) -> Self {
        assert_eq!(vars.len(), bounds.len());
        MotSeries {
            vars,
            bounds,
            coeffs: BTreeMap::new(),
        }
    }

    /// Single-variable series in `T` truncated at degree `prec`.
    pub fn single(prec: u32) -> Self {
        Self::new(&["T"], &[prec])
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn in_box(&self, exps: &[u32]) -> bool {
        exps.iter().zip(self.bounds.iter()).all(|(e, b)| e <= b)
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.coeffs.get(exps).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of `T^n` in a single-variable series.
    pub fn coeff1(&self, n: u32) -> C {
        assert_eq!(self.nvars(), 1);
        self.coeff(&[n])
    }

    pub fn set_coeff(&mut self, exps: &[u32], c: C) {
        assert_eq!(exps.len(), self.nvars());
        if !self.in_box(exps) {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(exps);
        } else {
            self.coeffs.insert(exps.to_vec(), c);
        }
    }

    pub fn add_coeff(&mut self, exps: &[u32], c: C) {
        if !self.in_box(exps) || c.is_zero() {
            return;
        }
        let cur = self.coeff(exps);
        self.set_coeff(exps, cur.add(&c));
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.coeffs.iter()
    }

    pub fn constant(&self) -> C {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn new_like(&self) -> Self {
        MotSeries {
            vars: self.vars.clone(),
            bounds: self.bounds.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one_like(&self) -> Self {
        let mut s = self.new_like();
        s.add_coeff(&vec![0; self.nvars()], C::one());
        s
    }

    pub fn constant_series(&self, c: C) -> Self {
        let mut s = self.new_like();
        s.add_coeff(&vec![0; self.nvars()], c);
        s
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars || self.bounds != other.bounds {
            return Err(Error::TruncationMismatch(String::from(
                "series have different variables or truncation boxes",
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other).expect("compatible series");
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_coeff(e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.new_like();
        for (e, c) in self.terms() {
            out.coeffs.insert(e.clone(), c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other).expect("compatible series");
        let mut out = self.new_like();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e: Vec<u32> = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                if out.in_box(&e) {
                    out.add_coeff(&e, c1.mul(c2));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = self.new_like();
        for (e, x) in self.terms() {
            out.add_coeff(e, x.mul(c));
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse given the inverse of the constant term.
    pub fn inverse_with(&self, const_inv: &C) -> Self {
        // F = c(1 - R) with R = 1 - F/c, so 1/F = (1/c) sum_j R^j
        let cinv_series = self.constant_series(const_inv.clone());
        let r = self.one_like().sub(&self.mul(&cinv_series));
        let maxdeg: u32 = self.bounds.iter().sum();
        let mut acc = self.one_like();
        let mut term = self.one_like();
        for _ in 1..=maxdeg.max(1) {
            term = term.mul(&r);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        acc.mul(&cinv_series)
    }

    /// Inverse of a series with constant term 1.
    pub fn inverse_unit(&self) -> Self {
        assert!(self.constant() == C::one(), "constant term must be 1");
        self.inverse_with(&C::one())
    }

    /// Substitute `t_i -> c_i * t_i`.
    pub fn scale_vars(&self, factors: &[C]) -> Self {
        assert_eq!(factors.len(), self.nvars());
        let mut out = self.new_like();
        for (e, x) in self.terms() {
            let mut c = x.clone();
            for (f, &n) in factors.iter().zip(e.iter()) {
                c = c.mul(&f.pow(n as u64));
            }
            out.add_coeff(e, c);
        }
        out
    }

    /// Geometric series `1/(1 - c T^a)` in a single variable.
    pub fn geometric(prec: u32, c: &C, a: u32) -> Self {
        assert!(a >= 1);
        let mut s = Self::single(prec);
        let mut n = 0u32;
        let mut acc = C::one();
        while n <= prec {
            s.add_coeff(&[n], acc.clone());
            n = match n.checked_add(a) {
                Some(v) => v,
                None => break,
            };
            acc = acc.mul(c);
        }
        s
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> MotSeries<D> {
        let mut out = MotSeries {
            vars: self.vars.clone(),
            bounds: self.bounds.clone(),
            coeffs: BTreeMap::new(),
        };
        for (e, c) in self.terms() {
            out.add_coeff(e, f(c));
        }
        out
    }

    pub fn truncate_total_degree(&self, d: u32) -> Self {
        let mut out = self.new_like();
        for (e, c) in self.terms() {
            if e.iter().sum::<u32>() <= d {
                out.add_coeff(e, c.clone());
            }
        }
        out
    }
}

impl<C: AdamsRing> MotSeries<C> {
    /// `psi^k`: Adams on every coefficient and `t_i -> t_i^k` on every
    /// variable. Terms leaving the truncation box are dropped.
    pub fn adams_series(&self, k: u32) -> Self {
        assert!(k >= 1);
        let mut out = self.new_like();
        for (e, c) in self.terms() {
            let ek: Vec<u32> = e.iter().map(|&n| n.saturating_mul(k)).collect();
            if out.in_box(&ek) {
                out.add_coeff(&ek, c.adams_op(k));
            }
        }
        out
    }
}

impl MotSeries<QEPoly> {
    /// Plethystic exponential: `Exp(F) = exp(sum_{k>=1} psi^k(F)/k)` for a
    /// series with zero constant term.
    pub fn pleth_exp(&self) -> Self {
        assert!(self.constant().is_zero(), "Exp needs zero constant term");
        let maxdeg: u32 = self.bounds.iter().sum();
        let min_deg = self
            .terms()
            .map(|(e, _)| e.iter().sum::<u32>())
            .min()
            .unwrap_or(u32::MAX);
        let mut s = self.new_like();
        let mut k = 1u32;
        while k <= maxdeg.max(1) && min_deg.saturating_mul(k) <= maxdeg {
            let t = self
                .adams_series(k)
                .scale(&QEPoly::constant(rat(1, k as i64)));
            s = s.add(&t);
            k += 1;
        }
        s.exp_naive()
    }

    /// Plethystic logarithm, inverse of `pleth_exp`: for `G` with constant
    /// term 1, `Log(G) = sum_{k>=1} mu(k)/k psi^k(log G)`.
    pub fn pleth_log(&self) -> Self {
        assert!(self.constant() == QEPoly::one(), "Log needs constant term 1");
        let lg = self.log_naive();
        let maxdeg: u32 = self.bounds.iter().sum();
        let mut out = self.new_like();
        for k in 1..=maxdeg.max(1) {
            let mu = moebius(k as u64);
            if mu == 0 {
                continue;
            }
            let t = lg
                .adams_series(k)
                .scale(&QEPoly::constant(rat(mu, k as i64)));
            out = out.add(&t);
        }
        out
    }

    /// Ordinary exponential of a series with zero constant term.
    pub fn exp_naive(&self) -> Self {
        assert!(self.constant().is_zero());
        let maxdeg: u32 = self.bounds.iter().sum();
        let mut acc = self.one_like();
        let mut term = self.one_like();
        for j in 1..=maxdeg.max(1) {
            term = term.mul(self).scale(&QEPoly::constant(rat(1, j as i64)));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Ordinary logarithm of a series with constant term 1.
    pub fn log_naive(&self) -> Self {
        assert!(self.constant() == QEPoly::one());
        let u = self.sub(&self.one_like());
        let maxdeg: u32 = self.bounds.iter().sum();
        let mut acc = self.new_like();
        let mut term = self.one_like();
        for j in 1..=maxdeg.max(1) {
            term = term.mul(&u);
            if term.is_zero() {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&term.scale(&QEPoly::constant(rat(sign, j as i64))));
        }
        acc
    }
}

impl MotSeries<Rat> {
    /// Ordinary exponential over `Q`.
    pub fn exp_rat(&self) -> Self {
        assert!(Ring::is_zero(&self.constant()));
        let maxdeg: u32 = self.bounds.iter().sum();
        let mut acc = self.one_like();
        let mut term = self.one_like();
        for j in 1..=maxdeg.max(1) {
            term = term.mul(self).scale(&rat(1, j as i64));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl<C: Ring> core::fmt::Debug for MotSeries<C> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for (v, &n) in self.vars.iter().zip(e.iter()) {
                if n > 0 {
                    write!(f, "*{v}^{n}")?;
                }
            }
        }
        Ok(())
    }
}
