//! Places of `P^1` over `F_q`, exact Laurent expansions, and Riemann–Roch
//! spaces.
//!
//! Finite places are monic irreducible polynomials `pi(t)`; the place at
//! infinity has uniformiser `s = 1/t`. At a finite place the residue field
//! is presented as `F_q[x]/(pi)` and the image of `t` in `kappa[[u]]`
//! (where `u` is the class of `pi`) is computed by Newton iteration, which
//! keeps every expansion algebraic and reproducible. The residue pairing
//! `r_v(x) = Tr res_v(x dt)` is evaluated through the expansion of
//! `dt/du`; its conductor is 0 at finite places and 2 at infinity, summing
//! to `2g - 2 = -2` as the divisor of `dt` must.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::finfield::Fq;

/// A place of `P^1`: a monic irreducible polynomial, or infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlaceId {
    /// Coefficients low-to-high, monic.
    Finite(Vec<u32>),
    Infinity,
}

/// The finite place `t = c` over `F_q`.
pub fn place_rational(q: u32, c: u32) -> PlaceId {
    PlaceId::Finite(vec![(q - (c % q)) % q, 1])
}

/// Local analytic data at a place: residue field, uniformiser expansions,
/// and the residue functional for the form `dt`.
#[derive(Clone)]
pub struct LocalPlace {
    pub id: PlaceId,
    pub degree: u32,
    /// Residue field `kappa(v)`, presented as `F_q[x]/(pi)` at finite
    /// places (so the class of `t` is the generator) and as `F_q` at
    /// infinity.
    pub kappa: Fq,
    pub qv: u64,
    /// Conductor of `r_v`: 0 at finite places, 2 at infinity.
    pub conductor: i32,
    /// Expansion of `t` in `kappa[[u]]`, to `prec` coefficients (finite
    /// places only).
    t_series: Vec<u32>,
    /// Expansion of `dt/du` in `kappa[[u]]` (finite); at infinity `dt =
    /// -s^{-2} ds` is handled in closed form.
    dt_series: Vec<u32>,
    prec: usize,
}

impl LocalPlace {
    /// Build the local data, with expansions to `prec` terms.
    pub fn new(q: u32, id: PlaceId, prec: usize) -> Result<LocalPlace> {
        match &id {
            PlaceId::Infinity => {
                let kappa = Fq::from_modulus(q, &[0, 1])?;
                Ok(LocalPlace {
                    id,
                    degree: 1,
                    qv: q as u64,
                    kappa,
                    conductor: 2,
                    t_series: Vec::new(),
                    dt_series: Vec::new(),
                    prec,
                })
            }
            PlaceId::Finite(pi) => {
                let degree = (pi.len() - 1) as u32;
                let kappa = Fq::from_modulus(q, pi)?;
                // solve pi(tau(u)) = u with tau(0) = theta (the class of t)
                // by Newton iteration in kappa[[u]]
                let theta = kappa.gen_x();
                let mut tau = vec![kappa.zero(); prec];
                tau[0] = theta;
                // derivative pi'(theta) is a unit (pi is separable)
                for filled in 1..prec {
                    // tau has correct coefficients < filled; improve one
                    // coefficient: pi(tau) = u requires the u^filled
                    // coefficient of pi(tau) - u to vanish; it is linear in
                    // tau[filled] with slope pi'(theta).
                    let val = eval_poly_series(&kappa, pi, &tau, filled + 1);
                    let mut defect = val[filled];
                    if filled == 1 {
                        defect = kappa.sub(defect, kappa.one());
                    }
                    let slope = eval_poly_deriv(&kappa, pi, theta);
                    let corr = kappa.neg(kappa.mul(defect, kappa.inv(slope)));
                    tau[filled] = corr;
                }
                // dt/du = tau'(u)
                let mut dt = vec![kappa.zero(); prec];
                for k in 1..prec {
                    dt[k - 1] = kappa.mul(tau[k], kappa.from_int(k as i64));
                }
                Ok(LocalPlace {
                    id,
                    degree,
                    qv: kappa.q() as u64,
                    kappa,
                    conductor: 0,
                    t_series: tau,
                    dt_series: dt,
                    prec,
                })
            }
        }
    }

    /// Laurent expansion of the rational function `num/den` (polynomials
    /// over `F_q`) at this place: coefficients in `kappa` for `u`-powers
    /// `lo..hi`.
    pub fn expand(&self, num: &[u32], den: &[u32], lo: i32, hi: i32) -> Result<Vec<u32>> {
        assert!(lo <= hi);
        match &self.id {
            PlaceId::Infinity => {
                // t = 1/s: f = num(1/s)/den(1/s)
                // = s^{deg den - deg num} rev(num)(s)/rev(den)(s)
                let dn = poly_deg(num);
                let dd = poly_deg(den);
                if num.iter().all(|&c| c == 0) {
                    return Ok(vec![0; (hi - lo) as usize]);
                }
                let (dn, dd) = (dn.unwrap(), dd.expect("nonzero denominator"));
                let shift = dd as i32 - dn as i32;
                let rev = |p: &[u32], d: usize| -> Vec<u32> {
                    (0..=d).map(|i| p[d - i]).collect()
                };
                let rn = rev(num, dn);
                let rd = rev(den, dd);
                // rd(0) != 0 since den had degree dd
                self.laurent_divide(&rn, &rd, shift, lo, hi)
            }
            PlaceId::Finite(pi) => {
                // valuations of num and den at pi
                let (n_red, vn) = strip_pi(num, pi, self.kappa.p());
                let (d_red, vd) = strip_pi(den, pi, self.kappa.p());
                if n_red.iter().all(|&c| c == 0) {
                    return Ok(vec![0; (hi - lo) as usize]);
                }
                let shift = vn as i32 - vd as i32;
                // expand the unit parts through tau(u)
                let n_ser = eval_poly_series(&self.kappa, &n_red, &self.t_series, self.prec);
                let d_ser = eval_poly_series(&self.kappa, &d_red, &self.t_series, self.prec);
                self.laurent_divide_series(&n_ser, &d_ser, shift, lo, hi)
            }
        }
    }

    fn laurent_divide(
        &self,
        num: &[u32],
        den: &[u32],
        shift: i32,
        lo: i32,
        hi: i32,
    ) -> Result<Vec<u32>> {
        let prec = self.prec;
        let mut n_ser = vec![0u32; prec];
        for (i, &c) in num.iter().enumerate().take(prec) {
            n_ser[i] = c % self.kappa.p();
        }
        let mut d_ser = vec![0u32; prec];
        for (i, &c) in den.iter().enumerate().take(prec) {
            d_ser[i] = c % self.kappa.p();
        }
        self.laurent_divide_series(&n_ser, &d_ser, shift, lo, hi)
    }

    /// `(n/d) * u^{shift}` restricted to the window `lo..hi`; `d[0]` must
    /// be a unit.
    fn laurent_divide_series(
        &self,
        n_ser: &[u32],
        d_ser: &[u32],
        shift: i32,
        lo: i32,
        hi: i32,
    ) -> Result<Vec<u32>> {
        let k = &self.kappa;
        if d_ser[0] == 0 {
            return Err(Error::InvalidParameter(alloc::string::String::from(
                "denominator not a unit after stripping the uniformiser",
            )));
        }
        let need = (hi - shift).max(1) as usize;
        if need > self.prec {
            return Err(Error::BoundExceeded(alloc::string::String::from(
                "expansion window exceeds the precomputed precision",
            )));
        }
        let inv0 = k.inv(d_ser[0]);
        let mut quot = vec![0u32; need];
        for i in 0..need {
            let mut acc = if i < n_ser.len() { n_ser[i] } else { 0 };
            for j in 1..=i {
                if j < d_ser.len() {
                    acc = k.sub(acc, k.mul(d_ser[j], quot[i - j]));
                }
            }
            quot[i] = k.mul(acc, inv0);
        }
        let mut out = Vec::with_capacity((hi - lo) as usize);
        for pow in lo..hi {
            let idx = pow - shift;
            out.push(if idx < 0 || idx as usize >= need {
                0
            } else {
                quot[idx as usize]
            });
        }
        Ok(out)
    }

    /// `w_k = [u^{-1}] (u^k dt/du)`: the residue weights of the form `dt`.
    /// Nonzero only for `k <= -1` at finite places and only for `k = 1` at
    /// infinity.
    pub fn residue_weight(&self, k: i32) -> u32 {
        match &self.id {
            PlaceId::Infinity => {
                if k == 1 {
                    // dt = -s^{-2} ds
                    self.kappa.neg(self.kappa.one())
                } else {
                    0
                }
            }
            PlaceId::Finite(_) => {
                if k <= -1 {
                    let idx = (-1 - k) as usize;
                    if idx < self.dt_series.len() {
                        self.dt_series[idx]
                    } else {
                        0
                    }
                } else {
                    0
                }
            }
        }
    }

    /// `r_v(x) = Tr_{kappa/F_p} res_v(x dt)` for `x` given by coefficients
    /// on the window `lo..hi`.
    pub fn residue_functional(&self, coeffs: &[u32], lo: i32) -> u32 {
        let mut acc = self.kappa.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let w = self.residue_weight(lo + i as i32);
            if w != 0 {
                acc = self.kappa.add(acc, self.kappa.mul(c, w));
            }
        }
        self.kappa.trace(acc)
    }
}

fn poly_deg(p: &[u32]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

/// Divide out the highest power of `pi` from `f` over `F_p`; returns the
/// reduced polynomial and the valuation.
fn strip_pi(f: &[u32], pi: &[u32], p: u32) -> (Vec<u32>, u32) {
    let mut val = 0u32;
    let mut cur: Vec<u32> = f.to_vec();
    trim(&mut cur);
    if cur.is_empty() {
        return (cur, 0);
    }
    loop {
        match poly_divmod(&cur, pi, p) {
            Some(quot) => {
                val += 1;
                cur = quot;
                if cur.is_empty() {
                    return (cur, val);
                }
            }
            None => return (cur, val),
        }
    }
}

fn trim(f: &mut Vec<u32>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Exact division `f / pi` over `F_p` if the remainder vanishes.
fn poly_divmod(f: &[u32], pi: &[u32], p: u32) -> Option<Vec<u32>> {
    let df = poly_deg(f)?;
    let dp = poly_deg(pi).expect("nonzero modulus");
    if df < dp {
        return None;
    }
    let mut rem: Vec<u32> = f.to_vec();
    let mut quot = vec![0u32; df - dp + 1];
    for i in (0..=df - dp).rev() {
        let c = rem[i + dp] % p;
        quot[i] = c;
        if c != 0 {
            for (j, &pc) in pi.iter().enumerate() {
                let idx = i + j;
                rem[idx] = ((rem[idx] as u64 + p as u64 - (c as u64 * pc as u64) % p as u64)
                    % p as u64) as u32;
            }
        }
    }
    if rem.iter().all(|&c| c == 0) {
        trim(&mut quot);
        Some(quot)
    } else {
        None
    }
}

/// Evaluate the polynomial `f` (coefficients over `F_p`) on a series `s`
/// in `kappa[[u]]`, truncated to `prec` coefficients.
fn eval_poly_series(kappa: &Fq, f: &[u32], s: &[u32], prec: usize) -> Vec<u32> {
    // Horner over the series ring
    let mut acc = vec![kappa.zero(); prec];
    for &c in f.iter().rev() {
        // acc = acc * s + c
        let mut next = vec![kappa.zero(); prec];
        for i in 0..prec {
            if acc[i] == 0 {
                continue;
            }
            for (j, &sj) in s.iter().enumerate().take(prec - i) {
                if sj != 0 {
                    next[i + j] = kappa.add(next[i + j], kappa.mul(acc[i], sj));
                }
            }
        }
        next[0] = kappa.add(next[0], kappa.from_int(c as i64));
        acc = next;
    }
    acc
}

fn eval_poly_deriv(kappa: &Fq, f: &[u32], x: u32) -> u32 {
    let mut acc = kappa.zero();
    let mut xpow = kappa.one(); // x^{i-1}
    for (i, &c) in f.iter().enumerate().skip(1) {
        let term = kappa.mul(kappa.from_int((i as i64) * (c as i64)), xpow);
        acc = kappa.add(acc, term);
        xpow = kappa.mul(xpow, x);
    }
    acc
}

/// A divisor on `P^1`: finite map from places to multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorP1 {
    pub entries: Vec<(PlaceId, i64)>,
}

impl DivisorP1 {
    pub fn new(entries: Vec<(PlaceId, i64)>) -> Self {
        let mut merged: Vec<(PlaceId, i64)> = Vec::new();
        for (id, m) in entries {
            match merged.iter_mut().find(|(p, _)| *p == id) {
                Some((_, acc)) => *acc += m,
                None => merged.push((id, m)),
            }
        }
        merged.retain(|(_, m)| *m != 0);
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        DivisorP1 { entries: merged }
    }

    pub fn degree(&self) -> i64 {
        self.entries
            .iter()
            .map(|(id, m)| {
                let d = match id {
                    PlaceId::Infinity => 1,
                    PlaceId::Finite(pi) => (pi.len() - 1) as i64,
                };
                m * d
            })
            .sum()
    }

    pub fn multiplicity(&self, id: &PlaceId) -> i64 {
        self.entries
            .iter()
            .find(|(p, _)| p == id)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }
}

/// A rational function `num/den` over `F_q`, `den` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    pub num: Vec<u32>,
    pub den: Vec<u32>,
}

/// Basis of the Riemann–Roch space `L(D) = {f : div f >= -D}` over `F_q`:
/// explicit rational functions with common denominator the product of the
/// positive finite part of `D`. `dim L(D) = deg D + 1` for `deg D >= 0`
/// (genus zero), and the empty basis otherwise.
pub fn rr_space(q: u32, divisor: &DivisorP1) -> Result<Vec<RationalFn>> {
    let deg_d = divisor.degree();
    if deg_d < 0 {
        return Ok(Vec::new());
    }
    // common denominator from positive finite multiplicities
    let mut den = vec![1u32];
    for (id, m) in &divisor.entries {
        if let PlaceId::Finite(pi) = id {
            for _ in 0..(*m).max(0) {
                den = poly_mul(&den, pi, q);
            }
        }
    }
    let deg_q = poly_deg(&den).unwrap_or(0) as i64;
    let m_inf = divisor.multiplicity(&PlaceId::Infinity);
    let max_deg_g = deg_q + m_inf;
    if max_deg_g < 0 {
        return Ok(Vec::new());
    }
    let dim_candidates = (max_deg_g + 1) as usize;
    // linear constraints from required zeros (negative finite
    // multiplicities): the expansion of g at pi must vanish to order
    // |m| + (valuation of den at pi, which is 0 there)
    let mut constraints: Vec<Vec<u32>> = Vec::new(); // rows over F_q
    for (id, m) in &divisor.entries {
        if *m >= 0 {
            continue;
        }
        let pi = match id {
            PlaceId::Finite(pi) => pi,
            PlaceId::Infinity => continue, // handled by the degree bound
        };
        let place = LocalPlace::new(q, PlaceId::Finite(pi.clone()), (-m) as usize + 2)?;
        let d = place.degree as usize;
        // for each monomial t^j: expansion coefficients 0..|m| at the place
        let mut monomial_exp: Vec<Vec<u32>> = Vec::new();
        for j in 0..dim_candidates {
            let mut mono = vec![0u32; j + 1];
            mono[j] = 1;
            let coeffs = place.expand(&mono, &[1], 0, -m as i32)?;
            monomial_exp.push(coeffs);
        }
        for ord in 0..(-m) as usize {
            for digit in 0..d {
                // row: coefficient `digit` of the kappa-element at u^ord
                let mut row = vec![0u32; dim_candidates];
                for (j, exp) in monomial_exp.iter().enumerate() {
                    row[j] = kappa_digit(&place.kappa, exp[ord], digit);
                }
                constraints.push(row);
            }
        }
    }
    let null = null_space(&constraints, dim_candidates, q);
    let expected = (deg_d + 1) as usize;
    if null.len() != expected {
        return Err(Error::InvalidParameter(alloc::string::String::from(
            "Riemann-Roch dimension mismatch (is the divisor well-formed?)",
        )));
    }
    Ok(null
        .into_iter()
        .map(|g| RationalFn {
            num: g,
            den: den.clone(),
        })
        .collect())
}

fn kappa_digit(kappa: &Fq, elem: u32, digit: usize) -> u32 {
    let mut e = elem;
    for _ in 0..digit {
        e /= kappa.p();
    }
    e % kappa.p()
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    out
}

/// Null space of the constraint matrix over `F_p`, as vectors of length
/// `ncols` (coefficients of the numerator polynomial).
fn null_space(rows: &[Vec<u32>], ncols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut mat: Vec<Vec<u32>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let pivot_row = (rank..mat.len()).find(|&r| mat[r][col] != 0);
        if let Some(r) = pivot_row {
            mat.swap(rank, r);
            let inv = mod_inv(mat[rank][col], p);
            for c in col..ncols {
                mat[rank][c] = ((mat[rank][c] as u64 * inv as u64) % p as u64) as u32;
            }
            for rr in 0..mat.len() {
                if rr != rank && mat[rr][col] != 0 {
                    let f = mat[rr][col];
                    for c in col..ncols {
                        let sub = (f as u64 * mat[rank][c] as u64) % p as u64;
                        mat[rr][c] =
                            ((mat[rr][c] as u64 + p as u64 - sub) % p as u64) as u32;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u32; ncols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            // v[pc] = -mat[r][free]
            v[pc] = (p - mat[r][free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}
