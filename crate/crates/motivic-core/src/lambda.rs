//! Symmetric powers of avatar classes and Kapranov zeta functions.
//!
//! The avatar rings carry the unique lambda-structure in which every
//! monomial `u^p v^q` is a line element. Symmetric powers are computed by
//! the Newton recursion `n sigma^n(a) = sum_{k=1}^{n} psi^k(a)
//! sigma^{n-k}(a)` over rational coefficients; the results are integral and
//! are converted back. On effective catalog classes this agrees with the
//! class of the geometric symmetric power, which the counting oracle
//! enforces: the counting avatar of the Kapranov zeta function is computed
//! independently through `sum_n #S^n X(F_q) t^n = exp(sum_m #X(F_{q^m})
//! t^m / m)` in exact rational arithmetic.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::counting::CountAvatar;
use crate::epoly::{EPoly, QEPoly};
use crate::error::{Error, Result};
use crate::num::{rat, Int, Rat, Ring};
use crate::series::MotSeries;

/// All symmetric powers `sigma^0(a), ..., sigma^n(a)`.
pub fn sympow_all(a: &EPoly, n: u32) -> Vec<EPoly> {
    let aq = a.to_rational();
    // psi^k(a) for k = 1..n
    let adams: Vec<QEPoly> = (1..=n.max(1))
        .map(|k| aq.adams(k).expect("k >= 1"))
        .collect();
    let mut sigma: Vec<QEPoly> = Vec::with_capacity(n as usize + 1);
    sigma.push(QEPoly::one());
    for m in 1..=n as usize {
        let mut acc = QEPoly::zero();
        for k in 1..=m {
            acc = acc.add(&adams[k - 1].mul(&sigma[m - k]));
        }
        sigma.push(acc.mul(&QEPoly::constant(rat(1, m as i64))));
    }
    sigma
        .into_iter()
        .map(|s| {
            s.to_integer()
                .expect("symmetric powers of integral classes are integral")
        })
        .collect()
}

/// `sigma^n(a)`, the n-th symmetric power of the class `a`.
pub fn sympow(a: &EPoly, n: u32) -> EPoly {
    sympow_all(a, n).pop().expect("nonempty")
}

/// Kapranov zeta function of an E-avatar class: `sum_n sigma^n(a) T^n`
/// truncated at `prec`.
pub fn kapranov_zeta_epoly(a: &EPoly, prec: u32) -> MotSeries<EPoly> {
    let sigmas = sympow_all(a, prec);
    let mut s = MotSeries::single(prec);
    for (n, c) in sigmas.into_iter().enumerate() {
        s.set_coeff(&[n as u32], c);
    }
    s
}

/// Counting avatar of the Kapranov zeta function: exact point counts
/// `#S^n X(F_q)` for `n <= prec`, by the exponential identity. The counts
/// are verified to be non-negative integers.
pub fn kapranov_zeta_counting(x: &CountAvatar, q: u64, prec: u32) -> Result<Vec<Int>> {
    let mut logz = MotSeries::<Rat>::single(prec);
    for m in 1..=prec {
        let nm = x.count_points(q, m)?;
        logz.set_coeff(&[m], Rat::new(nm, Int::from(m)));
    }
    let z = logz.exp_rat();
    let mut out = Vec::with_capacity(prec as usize + 1);
    for n in 0..=prec {
        let c = z.coeff1(n);
        if !num_traits::One::is_one(c.denom()) || c.numer() < &Int::from(0) {
            return Err(Error::InvalidParameter(String::from(
                "symmetric-power counts came out non-integral or negative",
            )));
        }
        out.push(c.numer().clone());
    }
    Ok(out)
}

/// `#S^n X(F_q)` for a single `n`.
pub fn sympow_count(x: &CountAvatar, q: u64, n: u32) -> Result<Int> {
    Ok(kapranov_zeta_counting(x, q, n)?.pop().expect("nonempty"))
}

/// Brute-force `#S^n X(F_q)`: enumerate effective zero-cycles of degree `n`
/// directly from the closed-point census. Independent of the exponential
/// identity; used as an oracle against it.
pub fn sympow_count_bruteforce(x: &CountAvatar, q: u64, n: u32) -> Result<Int> {
    if n == 0 {
        return Ok(Int::from(1));
    }
    let census = x.closed_point_census(q, n)?;
    // number of multisets of closed points with total degree n: coefficient
    // of t^n in prod_d (1 - t^d)^{-a_d}, expanded by per-degree partitions
    let mut coeffs: Vec<Int> = vec![Int::from(0); n as usize + 1];
    coeffs[0] = Int::from(1);
    for d in 1..=n {
        let a_d = &census[(d - 1) as usize];
        // multiply by (1 - t^d)^{-a_d}: coefficient of t^{dk} is
        // binom(a_d + k - 1, k)
        let mut next = vec![Int::from(0); n as usize + 1];
        for base in 0..=n as usize {
            if num_traits::Zero::is_zero(&coeffs[base]) {
                continue;
            }
            let mut k = 0usize;
            while base + d as usize * k <= n as usize {
                let b = binom_rising(a_d, k as u32);
                next[base + d as usize * k] += &coeffs[base] * b;
                k += 1;
            }
        }
        coeffs = next;
    }
    Ok(coeffs[n as usize].clone())
}

/// `binom(a + k - 1, k)` for a big integer `a >= 0`.
fn binom_rising(a: &Int, k: u32) -> Int {
    let mut num = Int::from(1);
    let mut den = Int::from(1);
    for i in 0..k {
        num *= a + Int::from(i);
        den *= Int::from(i + 1);
    }
    num / den
}
