//! Weight calculus on avatars: radius of convergence, convergence bounds,
//! and coefficient-growth extraction for series with a pole at `L^{-1}`.
//!
//! The avatar weight of an E-polynomial is the maximal `p + q` over its
//! monomials; nontrivial monodromy adds one. It can undershoot the weight of
//! the class it shadows when cancellation hides pure pieces, so every
//! statement here is at avatar level.

use alloc::vec::Vec;

use crate::epoly::EPoly;
use crate::error::{Error, Result};
use crate::monclass::MonClass;
use crate::num::{rat, rat_int, Rat, Ring};
use crate::series::MotSeries;

/// Avatar rings with a weight function (`None` is `-infinity`).
pub trait Weighted: Ring {
    fn weight_of(&self) -> Option<i64>;
}

impl Weighted for EPoly {
    fn weight_of(&self) -> Option<i64> {
        self.weight()
    }
}

impl Weighted for MonClass {
    fn weight_of(&self) -> Option<i64> {
        self.weight()
    }
}

/// Result of a finite-window radius estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusReport {
    /// `max w(X_i)/2i` over the window; `None` when every windowed
    /// coefficient vanishes.
    pub radius: Option<Rat>,
    /// The max is attained at two or more indices and the ratio sequence is
    /// non-increasing across the window: the heuristic for "the limsup has
    /// stabilised".
    pub stabilized: bool,
    pub window: (u32, u32),
}

/// Finite-window estimate of `limsup w(X_i)/2i` for a single-variable
/// series. A true limsup is not computable from a truncation; the window
/// max plus the stabilisation flag makes the heuristic auditable.
pub fn radius<C: Weighted>(
    series: &MotSeries<C>,
    window: (u32, u32),
) -> Result<RadiusReport> {
    let (lo, hi) = window;
    if series.nvars() != 1 {
        return Err(Error::InvalidParameter(alloc::string::String::from(
            "radius needs a single-variable series",
        )));
    }
    if lo < 1 || lo > hi || hi > series.bounds()[0] {
        return Err(Error::InvalidParameter(alloc::string::String::from(
            "window outside the computed truncation",
        )));
    }
    let mut ratios: Vec<Rat> = Vec::new();
    for i in lo..=hi {
        if let Some(w) = series.coeff1(i).weight_of() {
            ratios.push(rat(w, 2 * i as i64));
        }
    }
    let radius = ratios.iter().cloned().reduce(|a, b| if b > a { b } else { a });
    let stabilized = match &radius {
        None => false,
        Some(m) => {
            let hits = ratios.iter().filter(|r| *r == m).count();
            let non_increasing = ratios.windows(2).all(|w| w[0] >= w[1]);
            hits >= 2 && non_increasing
        }
    };
    Ok(RadiusReport {
        radius,
        stabilized,
        window,
    })
}

/// Which bound regime `convergence_check` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceMode {
    /// The series is a polynomial: require `w(X_i) <= 2i - 2` for every
    /// computed `i >= 1`.
    Polynomial,
    /// Two regimes over a curve base: `w(X_i) <= 2i - 2` for `i <= M` and
    /// `w(X_i) <= 2ci - 1` beyond.
    TwoRegime,
}

/// Verify the curve-base convergence bounds on a single-variable series
/// with constant term 1: weight at most `2i - 2` up to `M`, at most
/// `2ci - 1` beyond (for `TwoRegime`).
pub fn convergence_check<C: Weighted>(
    series: &MotSeries<C>,
    m: u32,
    c: &Rat,
    mode: ConvergenceMode,
) -> bool {
    let prec = series.bounds()[0];
    for i in 1..=prec {
        let w = match series.coeff1(i).weight_of() {
            None => continue,
            Some(w) => w,
        };
        let ok = match mode {
            ConvergenceMode::Polynomial => w <= 2 * i as i64 - 2,
            ConvergenceMode::TwoRegime => {
                if i <= m {
                    w <= 2 * i as i64 - 2
                } else {
                    rat_int(w) <= rat_int(2 * i as i64) * c - rat_int(1)
                }
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Per-residue coefficient-growth report for `Z(T) = F(T)/(1-L^a T^a)^r`.
#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub residue: u32,
    /// False: all partial sums vanished identically (the
    /// `limsup dim/n < 1` case). True: a top degree `d0` exists.
    pub case_two: bool,
    /// Top `(uv)`-degree among the `F_p^{(i)}(1)`, when case two.
    pub d0: Option<i64>,
    /// `i0`: least `i` with a degree-`d0` contribution; the number of
    /// top-dimensional components grows like `n^{r - i0 - 1}`.
    pub kappa_log_degree: Option<u32>,
    /// Coefficients (constant first) of the polynomial in `m = (n - p)/a`
    /// giving the top Hodge–Deligne coefficient of `[M_n] L^{-n}`; degree
    /// at most `r - 1`.
    pub leading_polynomial: Vec<Rat>,
}

/// Implements the denominator-expansion analysis: writes
/// `Z(L^{-1}T) = G(T) + sum_{i<r} F_p^{(i)}(1) (-1)^i / i! * binom(m+r-i-1,
/// r-i-1)` per residue class `p mod a` and extracts the polynomial that
/// controls the top Hodge–Deligne coefficients. `numerator` is the series
/// `F` with `Z = F/(1 - L^a T^a)^r`, computed far enough that the partial
/// sums for `F_p^{(i)}(1)` are stable; stability is enforced by comparing
/// against the partial sums with the last two terms dropped.
pub fn coef_growth(numerator: &MotSeries<EPoly>, a: u32, r: u32) -> Result<Vec<GrowthReport>> {
    assert!(a >= 1 && r >= 1);
    if numerator.nvars() != 1 {
        return Err(Error::InvalidParameter(alloc::string::String::from(
            "coef_growth needs a single-variable numerator",
        )));
    }
    let prec = numerator.bounds()[0];
    let mut reports = Vec::new();
    for p in 0..a {
        // twisted coefficients of F_p: f_{aj+p} L^{-(aj+p)}
        let mut fj: Vec<EPoly> = Vec::new();
        let mut n = p;
        while n <= prec {
            let c = numerator
                .coeff1(n)
                .mul(&EPoly::lefschetz_pow(-(n as i64)));
            fj.push(c);
            n += a;
        }
        // partial sums S_i = sum_j j(j-1)...(j-i+1) f_{p,j}, with a
        // stability re-check dropping the last two terms
        let sums = derivative_partial_sums(&fj, r, fj.len());
        if fj.len() < r as usize + 3 {
            return Err(Error::Unstable(alloc::string::String::from(
                "numerator truncation too short for stable partial sums",
            )));
        }
        let sums_short = derivative_partial_sums(&fj, r, fj.len() - 2);
        let d0 = sums
            .iter()
            .filter_map(|s| s.top_uv_degree())
            .max();
        let d0_short = sums_short
            .iter()
            .filter_map(|s| s.top_uv_degree())
            .max();
        if d0 != d0_short {
            return Err(Error::Unstable(alloc::string::String::from(
                "top uv-degree of partial sums did not stabilise",
            )));
        }
        match d0 {
            None => reports.push(GrowthReport {
                residue: p,
                case_two: false,
                d0: None,
                kappa_log_degree: None,
                leading_polynomial: Vec::new(),
            }),
            Some(d0) => {
                let tops: Vec<Rat> = sums
                    .iter()
                    .map(|s| Rat::from_integer(s.uv_coeff(d0)))
                    .collect();
                let tops_short: Vec<Rat> = sums_short
                    .iter()
                    .map(|s| Rat::from_integer(s.uv_coeff(d0)))
                    .collect();
                if tops != tops_short {
                    return Err(Error::Unstable(alloc::string::String::from(
                        "top coefficients of partial sums did not stabilise",
                    )));
                }
                // polynomial in m: sum_i (-1)^i/i! tops[i] binom(m+r-i-1, r-i-1)
                let mut poly = alloc::vec![rat_int(0); r as usize];
                let mut i0 = None;
                for (i, top) in tops.iter().enumerate() {
                    if num_traits::Zero::is_zero(top) {
                        continue;
                    }
                    if i0.is_none() {
                        i0 = Some(i as u32);
                    }
                    let mut fact = rat_int(1);
                    for k in 1..=i as i64 {
                        fact *= rat_int(k);
                    }
                    let sign = if i % 2 == 0 { rat_int(1) } else { rat_int(-1) };
                    let scale = top * sign / fact;
                    let b = binom_poly(r - 1 - i as u32);
                    for (k, c) in b.iter().enumerate() {
                        poly[k] = poly[k].clone() + c * &scale;
                    }
                }
                while poly.last().map(num_traits::Zero::is_zero) == Some(true) {
                    poly.pop();
                }
                reports.push(GrowthReport {
                    residue: p,
                    case_two: true,
                    d0: Some(d0),
                    kappa_log_degree: i0.map(|i| r - 1 - i),
                    leading_polynomial: poly,
                });
            }
        }
    }
    Ok(reports)
}

/// `S_i = sum_{j < upto} j(j-1)...(j-i+1) f_j` for `i = 0..r`.
fn derivative_partial_sums(fj: &[EPoly], r: u32, upto: usize) -> Vec<EPoly> {
    let mut out = Vec::with_capacity(r as usize);
    for i in 0..r as usize {
        let mut acc = EPoly::zero();
        for (j, f) in fj.iter().enumerate().take(upto) {
            if j < i {
                continue;
            }
            // falling factorial j (j-1) ... (j-i+1)
            let mut ff = crate::num::int(1);
            for k in 0..i {
                ff *= crate::num::int((j - k) as i64);
            }
            acc = acc.add(&f.mul(&EPoly::constant(ff)));
        }
        out.push(acc);
    }
    out
}

/// Coefficients (constant first) of `binom(m + k, k)` as a polynomial in
/// `m`: `prod_{s=1..k} (m + s) / s`.
fn binom_poly(k: u32) -> Vec<Rat> {
    // binom(m + k, k) = prod_{s=1}^{k} (m + s)/s
    let mut poly = alloc::vec![rat_int(1)];
    for s in 1..=k as i64 {
        // multiply by (m + s)
        let mut next = alloc::vec![rat_int(0); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] = next[j + 1].clone() + c;
            next[j] = next[j].clone() + c * rat_int(s);
        }
        poly = next;
    }
    let mut fact = rat_int(1);
    for s in 1..=k as i64 {
        fact *= rat_int(s);
    }
    poly.into_iter().map(|c| c / &fact).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::kapranov_zeta_epoly;

    #[test]
    fn radius_of_kapranov_zeta_is_dimension() {
        for (class, dim) in [
            (EPoly::one().add(&EPoly::lefschetz()), 1i64), // P^1
            (EPoly::lefschetz().mul(&EPoly::lefschetz()), 2), // A^2
        ] {
            let z = kapranov_zeta_epoly(&class, 8);
            let rep = radius(&z, (4, 8)).unwrap();
            assert_eq!(rep.radius, Some(rat_int(dim)));
            assert!(rep.stabilized);
        }
    }

    #[test]
    fn radius_of_geometric_and_polynomial() {
        // sum (uv)^{2i} t^i: radius 2
        let s = MotSeries::<EPoly>::geometric(6, &EPoly::lefschetz_pow(2), 1);
        let rep = radius(&s, (2, 6)).unwrap();
        assert_eq!(rep.radius, Some(rat_int(2)));
        assert!(rep.stabilized);
        // finite polynomial: -infinity on a trailing window
        let mut p = MotSeries::<EPoly>::single(6);
        p.set_coeff(&[1], EPoly::lefschetz());
        let rep = radius(&p, (3, 6)).unwrap();
        assert_eq!(rep.radius, None);
        assert!(!rep.stabilized);
        // window validation
        assert!(radius(&p, (0, 6)).is_err());
        assert!(radius(&p, (3, 9)).is_err());
    }

    #[test]
    fn convergence_bounds() {
        // admissible polynomial: coefficients of weight <= 2i - 2
        let mut s = MotSeries::<EPoly>::single(4);
        s.set_coeff(&[0], EPoly::one());
        s.set_coeff(&[2], EPoly::lefschetz()); // w = 2 <= 2
        s.set_coeff(&[3], EPoly::lefschetz().mul(&EPoly::lefschetz())); // 4 <= 4
        assert!(convergence_check(&s, 4, &rat_int(0), ConvergenceMode::Polynomial));
        // w(X_1) = 2 violates the bound
        let mut bad = MotSeries::<EPoly>::single(3);
        bad.set_coeff(&[1], EPoly::lefschetz());
        assert!(!convergence_check(&bad, 3, &rat_int(0), ConvergenceMode::Polynomial));
        // two-regime: tail bound 2ci - 1
        let mut t = MotSeries::<EPoly>::single(6);
        t.set_coeff(&[2], EPoly::one()); // w=0 <= 2
        t.set_coeff(&[5], EPoly::lefschetz()); // tail: 2 <= 2*(1/2)*5 - 1 = 4
        assert!(convergence_check(&t, 3, &rat(1, 2), ConvergenceMode::TwoRegime));
        t.set_coeff(&[6], EPoly::lefschetz_pow(3)); // 6 > 2*(1/2)*6 - 1
        assert!(!convergence_check(&t, 3, &rat(1, 2), ConvergenceMode::TwoRegime));
    }

    #[test]
    fn growth_of_projective_line_zeta() {
        // Z_{P^1} = (1/(1-T)) / (1 - L T): numerator 1/(1-T), a = r = 1
        let f = MotSeries::<EPoly>::geometric(12, &EPoly::one(), 1);
        let reports = coef_growth(&f, 1, 1).unwrap();
        assert_eq!(reports.len(), 1);
        let rep = &reports[0];
        assert!(rep.case_two);
        assert_eq!(rep.d0, Some(0));
        assert_eq!(rep.kappa_log_degree, Some(0));
        assert_eq!(rep.leading_polynomial, alloc::vec![rat_int(1)]);
    }

    #[test]
    fn growth_of_double_pole() {
        // Z = 1/(1 - L T)^2: numerator 1, a = 1, r = 2: [M_n] = (n+1) L^n
        let mut f = MotSeries::<EPoly>::single(10);
        f.set_coeff(&[0], EPoly::one());
        let reports = coef_growth(&f, 1, 2).unwrap();
        let rep = &reports[0];
        assert!(rep.case_two);
        assert_eq!(rep.d0, Some(0));
        // polynomial m + 1
        assert_eq!(rep.leading_polynomial, alloc::vec![rat_int(1), rat_int(1)]);
        assert_eq!(rep.kappa_log_degree, Some(1));
    }

    #[test]
    fn growth_even_support_odd_residue() {
        // F supported on even degrees, a = 2: odd residue is case (i)
        let mut f = MotSeries::<EPoly>::single(12);
        for j in (0..=12).step_by(2) {
            f.set_coeff(&[j], EPoly::one());
        }
        let reports = coef_growth(&f, 2, 1).unwrap();
        assert!(reports[0].case_two);
        assert!(!reports[1].case_two);
    }

    #[test]
    fn growth_requires_enough_truncation() {
        let mut f = MotSeries::<EPoly>::single(2);
        f.set_coeff(&[0], EPoly::one());
        assert!(coef_growth(&f, 1, 2).is_err());
    }
}
