//! The point-counting avatar.
//!
//! A `CountAvatar` provides exact point counts `N_m = #X(F_{q^m})` for a
//! catalog of varieties, either through a zeta-function descriptor (Weil
//! numerator for curves, closed formulas for cellular varieties) or through
//! brute-force enumeration of an affine spec over small finite fields. From
//! the counts, the closed-point census `a_d` follows by Möbius inversion and
//! is checked for non-negativity. Exponential sums land in `Q(zeta_p)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclo::{CycloAcc, CycloValue};
use crate::epoly::EPoly;
use crate::error::{Error, Result};
use crate::finfield::Fq;
use crate::num::{divisors, int, int_pow, moebius, prime_power, Int, Ring};


/// Multivariate polynomial with integer coefficients: terms `(exponents, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    pub nvars: u32,
    pub terms: Vec<(Vec<u32>, i64)>,
}

impl MultiPoly {
    pub fn zero(nvars: u32) -> Self {
        MultiPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    /// Single variable `x_i`.
    pub fn var(nvars: u32, i: u32) -> Self {
        let mut e = vec![0u32; nvars as usize];
        e[i as usize] = 1;
        MultiPoly {
            nvars,
            terms: vec![(e, 1)],
        }
    }

    pub fn constant(nvars: u32, c: i64) -> Self {
        MultiPoly {
            nvars,
            terms: vec![(vec![0; nvars as usize], c)],
        }
    }

    pub fn term(mut self, exps: &[u32], c: i64) -> Self {
        assert_eq!(exps.len(), self.nvars as usize);
        self.terms.push((exps.to_vec(), c));
        self
    }

    pub fn eval(&self, field: &Fq, point: &[u32]) -> u32 {
        let mut acc = field.zero();
        for (exps, c) in &self.terms {
            let mut t = field.from_int(*c);
            for (x, &e) in point.iter().zip(exps.iter()) {
                if e > 0 {
                    if *x == 0 {
                        t = 0;
                        break;
                    }
                    t = field.mul(t, field.pow(*x, e as i64));
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }
}

/// Affine spec over the integers: common zero locus of `equations` inside
/// the product of `A^1`/`G_m` factors selected by `invertible`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSpec {
    pub nvars: u32,
    pub equations: Vec<MultiPoly>,
    pub invertible: Vec<bool>,
}

impl AffineSpec {
    pub fn new(nvars: u32, equations: Vec<MultiPoly>) -> Self {
        AffineSpec {
            nvars,
            equations,
            invertible: vec![false; nvars as usize],
        }
    }

    pub fn in_torus(mut self) -> Self {
        for f in self.invertible.iter_mut() {
            *f = true;
        }
        self
    }

    fn for_each_point(&self, field: &Fq, mut visit: impl FnMut(&[u32])) -> Result<()> {
        let n = self.nvars as usize;
        let q = field.q() as u64;
        let total = q.checked_pow(n as u32).filter(|&t| t <= 200_000_000);
        if total.is_none() {
            return Err(Error::BoundExceeded(String::from(
                "affine enumeration larger than 2e8 points",
            )));
        }
        let mut point = vec![0u32; n];
        loop {
            let mut ok = true;
            for (i, &x) in point.iter().enumerate() {
                if self.invertible[i] && x == 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                ok = self
                    .equations
                    .iter()
                    .all(|eq| eq.eval(field, &point) == 0);
            }
            if ok {
                visit(&point);
            }
            // odometer
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(());
                }
                point[i] += 1;
                if point[i] < field.q() {
                    break;
                }
                point[i] = 0;
                i += 1;
            }
        }
    }
}

/// Catalog descriptor for the counting measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountAvatar {
    Point,
    /// Disjoint union of `k` rational points.
    Points(u64),
    Affine(u32),
    Projective(u32),
    Gm,
    /// Two points exchanged by the mu_2-action; the plain count forgets the
    /// action.
    TildeE,
    /// Smooth projective curve with zeta numerator `P(T) = prod (1 - a_i T)`
    /// given by its coefficient list (constant 1 first). `N_m = q^m + 1 -
    /// sum a_i^m`.
    WeilCurve { numer: Vec<Int> },
    /// Elliptic curve with zeta numerator `1 + aT + qT^2`, so that
    /// `#E(F_q) = q + 1 + a`.
    Elliptic { a: i64 },
    /// Fermat curve `x^n + y^n = c` inside `G_m^2`, `c = 0` or `1`.
    Fermat { n: u32, affine: bool },
    BruteForce(AffineSpec),
    Prod(Vec<CountAvatar>),
    Sum(Vec<CountAvatar>),
}

fn require_prime(q: u64, what: &str) -> Result<u32> {
    match prime_power(q) {
        Some((p, 1)) => Ok(p as u32),
        Some(_) => Err(Error::InvalidParameter(String::from(what))),
        None => Err(Error::InvalidParameter(String::from("q is not a prime power"))),
    }
}

impl CountAvatar {
    /// Exact `#X(F_{q^m})`, `m >= 1`. Descriptor counts work for any prime
    /// power `q`; brute-force enumeration needs `q` prime (the enumerator
    /// then works over every extension `F_{q^m}`).
    pub fn count_points(&self, q: u64, m: u32) -> Result<Int> {
        if prime_power(q).is_none() {
            return Err(Error::InvalidParameter(String::from(
                "q is not a prime power",
            )));
        }
        assert!(m >= 1);
        let qm = int_pow(&Int::from(q), m);
        match self {
            CountAvatar::Point => Ok(int(1)),
            CountAvatar::Points(k) => Ok(Int::from(*k)),
            CountAvatar::Affine(n) => Ok(int_pow(&qm, *n)),
            CountAvatar::Projective(n) => {
                let mut acc = int(0);
                for i in 0..=*n {
                    acc += int_pow(&qm, i);
                }
                Ok(acc)
            }
            CountAvatar::Gm => Ok(qm - int(1)),
            CountAvatar::TildeE => Ok(int(2)),
            CountAvatar::WeilCurve { numer } => {
                let ps = power_sums_of_inverse_roots(numer, m);
                Ok(qm + int(1) - ps)
            }
            CountAvatar::Elliptic { a } => {
                let numer = vec![int(1), int(*a), Int::from(q)];
                let ps = power_sums_of_inverse_roots(&numer, m);
                Ok(qm + int(1) - ps)
            }
            CountAvatar::Fermat { n, affine } => {
                let p = require_prime(q, "Fermat brute force needs prime q")?;
                let fbig = extension_field(p, m)?;
                let spec = fermat_spec(*n, *affine);
                let mut count = 0u64;
                spec.for_each_point(&fbig, |_| count += 1)?;
                Ok(Int::from(count))
            }
            CountAvatar::BruteForce(spec) => {
                let p = require_prime(q, "brute-force enumeration needs prime q")?;
                let fbig = extension_field(p, m)?;
                let mut count = 0u64;
                spec.for_each_point(&fbig, |_| count += 1)?;
                Ok(Int::from(count))
            }
            CountAvatar::Prod(parts) => {
                let mut acc = int(1);
                for part in parts {
                    acc *= part.count_points(q, m)?;
                }
                Ok(acc)
            }
            CountAvatar::Sum(parts) => {
                let mut acc = int(0);
                for part in parts {
                    acc += part.count_points(q, m)?;
                }
                Ok(acc)
            }
        }
    }

    /// Closed-point census: `a_d = (1/d) sum_{e|d} mu(e) N_{d/e}`, the number
    /// of closed points of degree `d` on `X/F_q`. Errors if the counts are
    /// not consistent (non-integral or negative census).
    pub fn closed_point_census(&self, q: u64, max_deg: u32) -> Result<Vec<Int>> {
        let mut counts = Vec::with_capacity(max_deg as usize);
        for m in 1..=max_deg {
            counts.push(self.count_points(q, m)?);
        }
        let mut census = Vec::with_capacity(max_deg as usize);
        for d in 1..=max_deg as u64 {
            let mut acc = int(0);
            for e in divisors(d) {
                let mu = moebius(e);
                if mu != 0 {
                    acc += int(mu) * &counts[(d / e - 1) as usize];
                }
            }
            let (quot, rem) = num_integer::Integer::div_rem(&acc, &int(d as i64));
            if !num_traits::Zero::is_zero(&rem) || quot < int(0) {
                return Err(Error::InvalidParameter(String::from(
                    "inconsistent point counts: census not a non-negative integer",
                )));
            }
            census.push(quot);
        }
        Ok(census)
    }

    /// Hodge–Deligne avatar of the same catalog entry, when it has one.
    pub fn hd_class(&self) -> Result<EPoly> {
        hd_measure(self)
    }
}

fn extension_field(p: u32, m: u32) -> Result<Fq> {
    Fq::new(p, m)
}

fn fermat_spec(n: u32, affine: bool) -> AffineSpec {
    let c = if affine { 1 } else { 0 };
    let eq = MultiPoly {
        nvars: 2,
        terms: vec![
            (vec![n, 0], 1),
            (vec![0, n], 1),
            (vec![0, 0], -(c as i64)),
        ],
    };
    AffineSpec::new(2, vec![eq]).in_torus()
}

/// Power sums `sum_i a_i^m` of the inverse roots of `P(T) = prod(1 - a_i T)`
/// from its coefficients, by Newton's identities. Exact integers.
fn power_sums_of_inverse_roots(numer: &[Int], m: u32) -> Int {
    // e_j = (-1)^j c_j where P(T) = sum c_j T^j
    let deg = numer.len() - 1;
    let e: Vec<Int> = (0..=deg)
        .map(|j| {
            if j % 2 == 0 {
                numer[j].clone()
            } else {
                -numer[j].clone()
            }
        })
        .collect();
    let mut p: Vec<Int> = vec![int(0); m as usize + 1];
    for k in 1..=m as usize {
        // p_k = sum_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k
        let mut acc = int(0);
        for i in 1..k {
            if i <= deg {
                let sign = if i % 2 == 1 { 1 } else { -1 };
                acc += int(sign) * &e[i] * &p[k - i];
            }
        }
        if k <= deg {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += int(sign * k as i64) * &e[k];
        }
        p[k] = acc;
    }
    p[m as usize].clone()
}

/// The Hodge–Deligne measure on the catalog. Additive over `Sum`,
/// multiplicative over `Prod`; `L = uv`.
pub fn hd_measure(x: &CountAvatar) -> Result<EPoly> {
    let l = EPoly::lefschetz;
    Ok(match x {
        CountAvatar::Point => EPoly::one(),
        CountAvatar::Points(k) => EPoly::constant(Int::from(*k)),
        CountAvatar::Affine(n) => EPoly::lefschetz_pow(*n as i64),
        CountAvatar::Projective(n) => {
            let mut acc = EPoly::zero();
            for i in 0..=*n {
                acc = acc.add(&EPoly::lefschetz_pow(i as i64));
            }
            acc
        }
        CountAvatar::Gm => l().sub(&EPoly::one()),
        CountAvatar::TildeE => EPoly::constant(int(2)),
        CountAvatar::WeilCurve { numer } => {
            // smooth projective curve of genus g: 1 + g u + g v + uv
            let deg = numer.len() - 1;
            if deg % 2 != 0 {
                return Err(Error::UnsupportedVariety(String::from(
                    "Weil numerator must have even degree 2g",
                )));
            }
            let g = (deg / 2) as i64;
            genus_curve_class(g)
        }
        CountAvatar::Elliptic { .. } => genus_curve_class(1),
        CountAvatar::Fermat { n, affine } => match (n, affine) {
            // F_0^1: x + y = 0 in G_m^2 is a G_m; F_1^1: x + y = 1 in G_m^2
            // is G_m minus one point.
            (1, false) => l().sub(&EPoly::one()),
            (1, true) => l().sub(&EPoly::constant(int(2))),
            // F_0^2 is two disjoint copies of G_m; F_1^2 is G_m minus the
            // four points {1, -1, i, -i}.
            (2, false) => l().sub(&EPoly::one()).mul(&EPoly::constant(int(2))),
            (2, true) => l().sub(&EPoly::constant(int(5))),
            _ => {
                return Err(Error::UnsupportedVariety(String::from(
                    "no Hodge data for Fermat curves with n > 2",
                )))
            }
        },
        CountAvatar::BruteForce(_) => {
            return Err(Error::UnsupportedVariety(String::from(
                "brute-force specs carry no Hodge data",
            )))
        }
        CountAvatar::Prod(parts) => {
            let mut acc = EPoly::one();
            for part in parts {
                acc = acc.mul(&hd_measure(part)?);
            }
            acc
        }
        CountAvatar::Sum(parts) => {
            let mut acc = EPoly::zero();
            for part in parts {
                acc = acc.add(&hd_measure(part)?);
            }
            acc
        }
    })
}

fn genus_curve_class(g: i64) -> EPoly {
    EPoly::one()
        .add(&EPoly::monomial(1, 0, Int::from(g)))
        .add(&EPoly::monomial(0, 1, Int::from(g)))
        .add(&EPoly::lefschetz())
}

/// Exponential sum `sum_{x in X(F_q)} psi(Tr(f(x)))` in `Q(zeta_p)`,
/// specialising the class `[X, f]`.
pub fn exp_sum(spec: &AffineSpec, f: &MultiPoly, q: u64) -> Result<CycloValue> {
    let (p, k) = prime_power(q).ok_or_else(|| {
        Error::InvalidParameter(String::from("q is not a prime power"))
    })?;
    let field = Fq::new(p as u32, k)?;
    let mut acc = CycloAcc::new(p as u32);
    spec.for_each_point(&field, |point| {
        let v = f.eval(&field, point);
        acc.add_root(field.trace(v), 1);
    })?;
    Ok(acc.to_value(&crate::num::rat_int(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat_int;

    #[test]
    fn cellular_counts() {
        assert_eq!(CountAvatar::Affine(2).count_points(3, 1).unwrap(), int(9));
        assert_eq!(
            CountAvatar::Projective(2).count_points(2, 2).unwrap(),
            int(21)
        );
        assert_eq!(CountAvatar::Gm.count_points(5, 1).unwrap(), int(4));
        assert_eq!(CountAvatar::TildeE.count_points(7, 3).unwrap(), int(2));
    }

    #[test]
    fn fermat_f1_over_f13() {
        // x^2 + y^2 = 1 in G_m^2 over F_13 has 8 points
        let x = CountAvatar::Fermat { n: 2, affine: true };
        assert_eq!(x.count_points(13, 1).unwrap(), int(8));
    }

    #[test]
    fn elliptic_counts_match_numerator() {
        // numerator 1 + t + 5t^2 over F_5: N_1 = 5 + 1 + 1 = 7,
        // N_2 = 25 + 1 - (a^2 - 2q) = 35
        let e = CountAvatar::Elliptic { a: 1 };
        assert_eq!(e.count_points(5, 1).unwrap(), int(7));
        assert_eq!(e.count_points(5, 2).unwrap(), int(35));
    }

    #[test]
    fn census_of_the_projective_line() {
        // a_1 = q + 1, a_d = (number of monic irreducibles of degree d)
        let p1 = CountAvatar::Projective(1);
        let census = p1.closed_point_census(2, 4).unwrap();
        assert_eq!(census, vec![int(3), int(1), int(2), int(3)]);
        // N_m = sum_{d | m} d a_d reconstructs the counts
        for m in 1..=4u32 {
            let mut acc = int(0);
            for d in divisors(m as u64) {
                acc += int(d as i64) * &census[(d - 1) as usize];
            }
            assert_eq!(acc, p1.count_points(2, m).unwrap());
        }
    }

    #[test]
    fn brute_force_agrees_with_descriptors() {
        // G_m as a brute-force spec: one variable, invertible, no equations
        let gm = CountAvatar::BruteForce(AffineSpec::new(1, vec![]).in_torus());
        for q in [2u64, 3, 5] {
            for m in 1..=4u32 {
                assert_eq!(
                    gm.count_points(q, m).unwrap(),
                    CountAvatar::Gm.count_points(q, m).unwrap()
                );
            }
        }
    }

    #[test]
    fn hd_catalog_values() {
        assert_eq!(hd_measure(&CountAvatar::Affine(1)).unwrap(), EPoly::lefschetz());
        let gm = hd_measure(&CountAvatar::Gm).unwrap();
        assert_eq!(gm, EPoly::lefschetz().sub(&EPoly::one()));
        // additivity: A^1 = G_m + point
        let pt = hd_measure(&CountAvatar::Point).unwrap();
        assert_eq!(gm.add(&pt), EPoly::lefschetz());
        let elliptic = hd_measure(&CountAvatar::Elliptic { a: 1 }).unwrap();
        assert_eq!(elliptic.weight(), Some(2));
        // entries without Hodge data report an unsupported-variety error
        let brute = CountAvatar::BruteForce(AffineSpec::new(1, vec![]));
        assert!(matches!(
            hd_measure(&brute),
            Err(crate::error::Error::UnsupportedVariety(_))
        ));
        assert!(hd_measure(&CountAvatar::Fermat { n: 3, affine: true }).is_err());
    }

    #[test]
    fn exp_sum_linear_vanishes() {
        // X = A^1, f = x, q = 3 -> 0
        let a1 = AffineSpec::new(1, vec![]);
        let f = MultiPoly::var(1, 0);
        let s = exp_sum(&a1, &f, 3).unwrap();
        assert!(crate::num::Ring::is_zero(&s));
        // f = 0, q = 5 -> 5
        let z = MultiPoly::zero(1);
        let s = exp_sum(&a1, &z, 5).unwrap();
        assert_eq!(s.as_rational().unwrap(), rat_int(5));
    }

    #[test]
    fn gauss_sum_x2_over_f3() {
        let a1 = AffineSpec::new(1, vec![]);
        let f = MultiPoly {
            nvars: 1,
            terms: vec![(vec![2], 1)],
        };
        let s = exp_sum(&a1, &f, 3).unwrap();
        assert_eq!(s.abs_sq().unwrap(), rat_int(3));
    }

    #[test]
    fn exp_sum_over_extension_field() {
        // linear form over F_4 still sums to zero via the trace
        let a1 = AffineSpec::new(1, vec![]);
        let f = MultiPoly::var(1, 0);
        let s = exp_sum(&a1, &f, 4).unwrap();
        assert!(crate::num::Ring::is_zero(&s));
    }
}
