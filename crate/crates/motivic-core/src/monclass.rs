//! Monodromy-graded avatar classes and the twisted product.
//!
//! A `MonClass` is a finite map from monodromy eigenvalue exponents
//! `alpha in Q cap (-1, 0]` (the eigenvalue being `exp(-2 pi i alpha)`) to
//! E-polynomials. The `alpha = 0` component is the trivial-monodromy part;
//! forgetting the grading (summing components) is a ring map to `EPoly` for
//! the ordinary product.
//!
//! The twisted product extends bilinearly the rule for line elements
//! `u^p v^q` at `alpha` and `u^r v^s` at `beta`:
//! - eigenvalue: `alpha + beta` reduced into `(-1, 0]`;
//! - weight: `p+q+r+s` if `alpha beta = 0`; one more if both are nonzero
//!   and `alpha + beta != -1`; two more if `alpha + beta = -1`;
//! - Hodge p-index: `p + r`, shifted by one exactly when both eigenvalues
//!   are nonzero and `alpha + beta <= -1`; the q-index is weight minus
//!   p-index.
//!
//! Restricted to trivial eigenvalues this is the ordinary product, and the
//! basic worked example holds: two copies of the rank-one class at
//! `alpha = -1/2` multiply to `uv` with trivial monodromy.

use alloc::collections::BTreeMap;

use crate::epoly::EPoly;
use crate::num::{Int, Ring};

/// Eigenvalue exponent: reduced fraction in `(-1, 0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Alpha {
    // ordered so that BTreeMap keys sort by numeric value; num in (-den, 0]
    num: i64,
    den: i64,
}

impl Alpha {
    /// Reduce `num/den` modulo 1 into `(-1, 0]`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0);
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        n = n.rem_euclid(d);
        if n > 0 {
            n -= d; // land in (-1, 0]
        }
        let g = gcd(n.unsigned_abs(), d as u64) as i64;
        if g > 1 {
            n /= g;
            d /= g;
        }
        Alpha { num: n, den: d }
    }

    pub fn zero() -> Self {
        Alpha { num: 0, den: 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    /// Sum in `Q/Z`, reduced back into `(-1, 0]`.
    pub fn add(&self, other: &Alpha) -> Alpha {
        Alpha::new(self.num * other.den + other.num * self.den, self.den * other.den)
    }

    /// Is `alpha + beta = -1` before reduction (i.e. sums to -1 exactly)?
    fn sums_to_minus_one(&self, other: &Alpha) -> bool {
        self.num * other.den + other.num * self.den == -self.den * other.den
    }

    /// Is `alpha + beta < -1`?
    fn sums_below_minus_one(&self, other: &Alpha) -> bool {
        self.num * other.den + other.num * self.den < -self.den * other.den
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Eigenvalue-graded E-polynomial: the avatar of an equivariant class.
#[derive(Clone, PartialEq, Eq)]
pub struct MonClass {
    graded: BTreeMap<Alpha, EPoly>,
}

impl MonClass {
    pub fn new() -> Self {
        MonClass {
            graded: BTreeMap::new(),
        }
    }

    /// A class with trivial monodromy.
    pub fn from_epoly(e: EPoly) -> Self {
        let mut m = Self::new();
        m.insert(Alpha::zero(), e);
        m
    }

    pub fn lefschetz() -> Self {
        Self::from_epoly(EPoly::lefschetz())
    }

    pub fn lefschetz_pow(k: i64) -> Self {
        Self::from_epoly(EPoly::lefschetz_pow(k))
    }

    /// `[TildeE, mu_2]`: two points exchanged by the involution. One
    /// invariant and one anti-invariant line: `{0: 1, -1/2: 1}`.
    pub fn tilde_e() -> Self {
        let mut m = Self::new();
        m.insert(Alpha::zero(), EPoly::one());
        m.insert(Alpha::new(-1, 2), EPoly::one());
        m
    }

    /// `[G_m, mu_2]` with the translation action `x -> -x`: translations on
    /// a connected group act trivially on cohomology, so the class is
    /// `uv - 1` with trivial monodromy.
    pub fn gm_mu2() -> Self {
        Self::from_epoly(EPoly::lefschetz().sub(&EPoly::one()))
    }

    pub fn insert(&mut self, alpha: Alpha, e: EPoly) {
        if e.is_zero() {
            return;
        }
        match self.graded.get(&alpha).cloned() {
            None => {
                self.graded.insert(alpha, e);
            }
            Some(old) => {
                let s = old.add(&e);
                if s.is_zero() {
                    self.graded.remove(&alpha);
                } else {
                    self.graded.insert(alpha, s);
                }
            }
        }
    }

    pub fn component(&self, alpha: &Alpha) -> EPoly {
        self.graded.get(alpha).cloned().unwrap_or_else(EPoly::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Alpha, &EPoly)> {
        self.graded.iter()
    }

    /// Forget the monodromy grading.
    pub fn forget(&self) -> EPoly {
        let mut acc = EPoly::zero();
        for e in self.graded.values() {
            acc = acc.add(e);
        }
        acc
    }

    /// Weight: `p + q` on the trivial component, `p + q + 1` on components
    /// with nontrivial monodromy; `None` is `-infinity`.
    pub fn weight(&self) -> Option<i64> {
        self.graded
            .iter()
            .filter_map(|(a, e)| {
                e.weight().map(|w| if a.is_zero() { w } else { w + 1 })
            })
            .max()
    }

    /// The twisted product (convolution `*` at avatar level).
    pub fn twisted_product(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (a, ea) in &self.graded {
            for (b, eb) in &other.graded {
                let gamma = a.add(b);
                for (&(p1, q1), c1) in ea.terms() {
                    for (&(p2, q2), c2) in eb.terms() {
                        let c = c1 * c2;
                        let (dp, dq) = if a.is_zero() || b.is_zero() {
                            (0, 0)
                        } else if a.sums_to_minus_one(b) {
                            (1, 1)
                        } else if a.sums_below_minus_one(b) {
                            // weight +1, and the Hodge index shift goes to p
                            (1, 0)
                        } else {
                            // alpha + beta > -1: weight +1 lands on q
                            (0, 1)
                        };
                        let mono = EPoly::monomial(p1 + p2 + dp, q1 + q2 + dq, c);
                        out.insert(gamma, mono);
                    }
                }
            }
        }
        out
    }
}

impl Default for MonClass {
    fn default() -> Self {
        Self::new()
    }
}

impl Ring for MonClass {
    fn zero() -> Self {
        Self::new()
    }
    fn one() -> Self {
        Self::from_epoly(EPoly::one())
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, e) in &other.graded {
            out.insert(*a, e.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        let mut out = Self::new();
        for (a, e) in &self.graded {
            out.graded.insert(*a, e.neg());
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        self.twisted_product(other)
    }
    fn is_zero(&self) -> bool {
        self.graded.is_empty()
    }
    fn from_int(n: i64) -> Self {
        Self::from_epoly(EPoly::constant(Int::from(n)))
    }
}

impl core::fmt::Debug for MonClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.graded.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, e) in &self.graded {
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "[a={}/{}: {:?}]", a.num, a.den, e)?;
        }
        Ok(())
    }
}
