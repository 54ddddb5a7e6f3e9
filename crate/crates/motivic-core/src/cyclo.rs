//! Exact arithmetic in `Q(zeta_p)` for a prime `p`.
//!
//! Values are stored on the basis `1, z, ..., z^{p-2}` where `z` is a
//! primitive `p`-th root of unity, reduced by `1 + z + ... + z^{p-1} = 0`.
//! The representation is unique, and a value is rational exactly when all
//! higher coordinates vanish; such values are canonicalised to `p = 1`, so
//! that sums over different characteristics interoperate and equality is
//! structural. This houses additive character sums: `sum_{x in F_p} z^x = 0`
//! holds by construction.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::num::{Rat, Ring};

/// Element of `Q(zeta_p)`; `p = 1` means a plain rational.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloValue {
    p: u32,
    /// Length `p - 1` for `p > 1`, length 1 for `p = 1`.
    coords: Vec<Rat>,
}

impl CycloValue {
    pub fn from_rat(r: Rat) -> Self {
        CycloValue {
            p: 1,
            coords: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(crate::num::rat_int(n))
    }

    /// `zeta_p^j` (any integer `j`), reduced to the canonical basis.
    pub fn root_of_unity(p: u32, j: i64) -> Self {
        assert!(p >= 2, "root_of_unity needs p >= 2");
        let jm = j.rem_euclid(p as i64) as u32;
        let mut coords = vec![Rat::zero_value(); (p - 1) as usize];
        if jm == p - 1 {
            for c in coords.iter_mut() {
                *c = -Rat::one_value();
            }
        } else {
            coords[jm as usize] = Rat::one_value();
        }
        CycloValue { p, coords }.canonical()
    }

    /// The additive character `psi(a) = zeta_p^a` of `F_p`.
    pub fn psi(p: u32, a: u32) -> Self {
        Self::root_of_unity(p, a as i64)
    }

    fn canonical(mut self) -> Self {
        if self.p > 1 && self.coords[1..].iter().all(is_zero_rat) {
            self = CycloValue {
                p: 1,
                coords: vec![self.coords[0].clone()],
            };
        }
        self
    }

    fn promoted(&self, p: u32) -> Vec<Rat> {
        if self.p == p {
            return self.coords.clone();
        }
        assert_eq!(self.p, 1, "cyclotomic values of different conductors");
        let mut coords = vec![Rat::zero_value(); (p - 1) as usize];
        coords[0] = self.coords[0].clone();
        coords
    }

    fn join(a: &Self, b: &Self) -> u32 {
        match (a.p, b.p) {
            (1, p) | (p, 1) => p,
            (p, r) => {
                assert_eq!(p, r, "cyclotomic values of different conductors");
                p
            }
        }
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        if self.p == 1 {
            return self.clone();
        }
        let p = self.p;
        let mut out = CycloValue {
            p,
            coords: vec![Rat::zero_value(); (p - 1) as usize],
        };
        for (j, c) in self.coords.iter().enumerate() {
            if !is_zero_rat(c) {
                out.add_monomial((p as i64 - j as i64) % p as i64, c.clone());
            }
        }
        out.canonical()
    }

    fn add_monomial(&mut self, j: i64, c: Rat) {
        let p = self.p;
        let jm = j.rem_euclid(p as i64) as u32;
        if jm == p - 1 {
            for k in 0..(p - 1) as usize {
                let v = self.coords[k].clone() - c.clone();
                self.coords[k] = v;
            }
        } else {
            let v = self.coords[jm as usize].clone() + c;
            self.coords[jm as usize] = v;
        }
    }

    /// `|z|^2 = z * conj(z)`, which is rational (and totally non-negative
    /// for our uses); errors if the product is irrational, which cannot
    /// happen for `p <= 3` and is reported rather than silently truncated
    /// otherwise.
    pub fn abs_sq(&self) -> Result<Rat> {
        let n = self.mul(&self.conj());
        n.as_rational().ok_or_else(|| {
            Error::InvalidParameter(String::from("|z|^2 did not reduce to a rational"))
        })
    }

    /// Exact check `|z|^2 <= bound` across all complex embeddings.
    ///
    /// `z conj(z)` is totally real and totally non-negative. When it is
    /// rational the comparison is immediate; for `p = 5` it lies in
    /// `Q(sqrt 5)` and the sign of `bound - sigma(|z|^2)` is decided by
    /// exact rational arithmetic on both conjugates. Other irrational
    /// cases are reported rather than approximated.
    pub fn abs_sq_leq(&self, bound: &Rat) -> Result<bool> {
        let n = self.mul(&self.conj());
        if let Some(r) = n.as_rational() {
            return Ok(r <= *bound);
        }
        if n.p == 5 {
            // totally real elements of Q(zeta_5) have the shape
            // x + y tau with tau = zeta + zeta^4 = (-1 + sqrt5)/2, whose
            // reduced coordinates are (x - y, 0, -y, -y)
            let c = &n.coords;
            if is_zero_rat(&c[1]) && c[2] == c[3] {
                let y = -c[2].clone();
                let x = c[0].clone() + &y;
                // conjugates: x + y(-1 +- sqrt5)/2 <= bound
                let a = bound - &x + &y * Rat::new(
                    crate::num::Int::from(1),
                    crate::num::Int::from(2),
                );
                // compare a >= +-(y/2) sqrt5
                let half_y = &y * Rat::new(crate::num::Int::from(1), crate::num::Int::from(2));
                let ok_plus = sqrt5_leq(&half_y, &a);
                let ok_minus = sqrt5_leq(&(-half_y), &a);
                return Ok(ok_plus && ok_minus);
            }
        }
        Err(Error::InvalidParameter(String::from(
            "|z|^2 comparison outside Q and Q(sqrt 5) is not supported",
        )))
    }

    /// `Some(r)` iff the value is rational.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.p == 1 {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let coords = self.coords.iter().map(|c| c * r).collect();
        CycloValue { p: self.p, coords }.canonical()
    }

    pub fn conductor(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }
}

fn is_zero_rat(r: &Rat) -> bool {
    num_traits::Zero::is_zero(r)
}

/// Exact test `c sqrt5 <= a` for rationals.
fn sqrt5_leq(c: &Rat, a: &Rat) -> bool {
    let zero = <Rat as crate::num::Ring>::zero();
    let five = crate::num::rat_int(5);
    if *c <= zero {
        if *a >= zero {
            return true;
        }
        // both negative: c sqrt5 <= a < 0 iff 5 c^2 >= a^2
        return five * c * c >= a * a;
    }
    if *a < zero {
        return false;
    }
    five * c * c <= a * a
}

trait RatExt {
    fn zero_value() -> Rat;
    fn one_value() -> Rat;
}

impl RatExt for Rat {
    fn zero_value() -> Rat {
        num_traits::Zero::zero()
    }
    fn one_value() -> Rat {
        num_traits::One::one()
    }
}

impl Ring for CycloValue {
    fn zero() -> Self {
        Self::from_rat(Rat::zero_value())
    }
    fn one() -> Self {
        Self::from_rat(Rat::one_value())
    }
    fn add(&self, other: &Self) -> Self {
        let p = Self::join(self, other);
        if p == 1 {
            return Self::from_rat(&self.coords[0] + &other.coords[0]);
        }
        let a = self.promoted(p);
        let b = other.promoted(p);
        let coords = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| x + y)
            .collect::<Vec<_>>();
        CycloValue { p, coords }.canonical()
    }
    fn neg(&self) -> Self {
        let coords = self.coords.iter().map(|c| -c).collect();
        CycloValue {
            p: self.p,
            coords,
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let p = Self::join(self, other);
        if p == 1 {
            return Self::from_rat(&self.coords[0] * &other.coords[0]);
        }
        let a = self.promoted(p);
        let b = other.promoted(p);
        let mut out = CycloValue {
            p,
            coords: vec![Rat::zero_value(); (p - 1) as usize],
        };
        for (i, x) in a.iter().enumerate() {
            if is_zero_rat(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if is_zero_rat(y) {
                    continue;
                }
                out.add_monomial((i + j) as i64, x * y);
            }
        }
        out.canonical()
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(is_zero_rat)
    }
    fn from_int(n: i64) -> Self {
        CycloValue::from_int(n)
    }
}

impl core::fmt::Debug for CycloValue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.p == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate() {
            if is_zero_rat(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*z{}^{j}", self.p)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Integer-coordinate accumulator for character sums. Inner enumeration
/// loops add roots of unity here and convert to a `CycloValue` (with an
/// overall rational scale) once at the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloAcc {
    p: u32,
    coords: Vec<i128>,
}

impl CycloAcc {
    pub fn new(p: u32) -> Self {
        assert!(p >= 2);
        CycloAcc {
            p,
            coords: vec![0; (p - 1) as usize],
        }
    }

    /// Add `m * zeta^j`.
    pub fn add_root(&mut self, j: u32, m: i128) {
        let jm = j % self.p;
        if jm == self.p - 1 {
            for c in self.coords.iter_mut() {
                *c -= m;
            }
        } else {
            self.coords[jm as usize] += m;
        }
    }

    pub fn add(&mut self, other: &CycloAcc) {
        assert_eq!(self.p, other.p);
        for (a, b) in self.coords.iter_mut().zip(other.coords.iter()) {
            *a += b;
        }
    }

    pub fn to_value(&self, scale: &Rat) -> CycloValue {
        let coords = self
            .coords
            .iter()
            .map(|&c| Rat::from_integer(crate::num::Int::from(c)) * scale)
            .collect();
        CycloValue {
            p: self.p,
            coords,
        }
        .canonical()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn one(p: u32) -> Self {
        let mut acc = CycloAcc::new(p);
        acc.add_root(0, 1);
        acc
    }

    pub fn mul(&self, other: &CycloAcc) -> CycloAcc {
        assert_eq!(self.p, other.p);
        let mut out = CycloAcc::new(self.p);
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coords.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                out.add_root((i + j) as u32, a * b);
            }
        }
        out
    }

    pub fn scale_int(&self, m: i128) -> CycloAcc {
        CycloAcc {
            p: self.p,
            coords: self.coords.iter().map(|&c| c * m).collect(),
        }
    }
}
