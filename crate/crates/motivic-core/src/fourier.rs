//! Exact Schwartz–Bruhat calculus over `F_q((t))` and the Poisson formula
//! over `F_q(t)`.
//!
//! A Schwartz–Bruhat function of level `(M, N)` on `F_v^n` is an exact
//! value table on the carrier `(t^M O / t^N O)^n`, values in `Q(zeta_p)`
//! stored as an integer-coordinate table with one overall rational scale.
//! Integration is `q_v^{-nN}` times the table sum; the Fourier transform
//! pairs carriers through the residue kernel of the form `dt` and lands at
//! level `(nu - N, nu - M)`. Summation over rational points pulls the
//! product of local tables back along the Riemann–Roch space determined by
//! the supports, and the Poisson check compares the two global sums with
//! the factor `L^{(1-g)n}`, specialised at `L = q`, `g = 0`.
//!
//! The annulus integral `int_{ord(x) = m} psi(res(P(x) x^{-d} dt))` is
//! evaluated by a small symbolic engine: the residue is computed as a
//! polynomial in the coordinates of the unit part of `x`, and the
//! character sum collapses one coordinate at a time (isolated linear
//! coordinates kill the branch or come free), with a node budget and a
//! truncation re-check.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclo::{CycloAcc, CycloValue};
use crate::error::{Error, Result};
use crate::localfield::{rr_space, DivisorP1, LocalPlace, PlaceId, RationalFn};
use crate::num::{rat_int, Int, Rat, Ring, SplitMix64};

/// Level `(M, N)` with `M <= N`: supported on `t^M O`, invariant mod
/// `t^N O`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalLevel {
    pub m: i32,
    pub n: i32,
}

impl LocalLevel {
    pub fn new(m: i32, n: i32) -> Self {
        assert!(m <= n, "level needs M <= N");
        LocalLevel { m, n }
    }

    pub fn width(&self) -> usize {
        (self.n - self.m) as usize
    }
}

/// A local Schwartz–Bruhat function: an exact table on
/// `(t^M O / t^N O)^n`.
///
/// Table order is lexicographic in the coordinates `x_M, ..., x_{N-1}` of
/// the first copy, then the second copy, etc., with `x_M` most
/// significant.
#[derive(Clone)]
pub struct SBFunction {
    pub place: LocalPlace,
    pub copies: u32,
    pub level: LocalLevel,
    pub scale: Rat,
    pub table: Vec<CycloAcc>,
}

impl SBFunction {
    pub fn carrier_len(place: &LocalPlace, copies: u32, level: &LocalLevel) -> usize {
        let digits = copies as usize * level.width();
        let mut size = 1usize;
        for _ in 0..digits {
            size = size
                .checked_mul(place.qv as usize)
                .expect("carrier too large");
        }
        size
    }

    /// Constant function `c` on `t^M O` (vanishing outside), as a level
    /// `(M, M)` table.
    pub fn indicator(place: LocalPlace, copies: u32, m: i32, c: CycloAcc) -> Self {
        SBFunction {
            place,
            copies,
            level: LocalLevel::new(m, m),
            scale: rat_int(1),
            table: vec![c],
        }
    }

    /// `1_{O^n}` at a place, the implicit factor at unmarked places.
    pub fn one_on_integers(place: LocalPlace, copies: u32) -> Self {
        let p = place.kappa.p();
        SBFunction::indicator(place, copies, 0, CycloAcc::one(p))
    }

    /// Deterministic random table with entries `m * zeta^j`, `|m| <= 2`.
    pub fn random(
        place: LocalPlace,
        copies: u32,
        level: LocalLevel,
        rng: &mut SplitMix64,
    ) -> Self {
        let p = place.kappa.p();
        let len = Self::carrier_len(&place, copies, &level);
        let mut table = Vec::with_capacity(len);
        for _ in 0..len {
            let mut acc = CycloAcc::new(p);
            let m = rng.range_i64(-2, 2);
            if m != 0 {
                acc.add_root(rng.below(p as u64) as u32, m as i128);
            }
            table.push(acc);
        }
        SBFunction {
            place,
            copies,
            level,
            scale: rat_int(1),
            table,
        }
    }

    fn digits_of(&self, mut index: usize) -> Vec<u32> {
        let nd = self.copies as usize * self.level.width();
        let qv = self.place.qv as usize;
        let mut digits = vec![0u32; nd];
        for k in (0..nd).rev() {
            digits[k] = (index % qv) as u32;
            index /= qv;
        }
        digits
    }

    fn index_of(&self, digits: &[u32]) -> usize {
        let qv = self.place.qv as usize;
        let mut idx = 0usize;
        for &d in digits {
            idx = idx * qv + d as usize;
        }
        idx
    }

    /// Value as an exact cyclotomic number.
    pub fn value(&self, index: usize) -> CycloValue {
        self.table[index].to_value(&self.scale)
    }

    /// `int phi = q_v^{-nN} sum_x phi(x)`.
    pub fn integrate(&self) -> CycloValue {
        let mut acc = CycloAcc::new(self.place.kappa.p());
        for entry in &self.table {
            acc.add(entry);
        }
        let norm = qv_pow(self.place.qv, -(self.level.n as i64) * self.copies as i64);
        acc.to_value(&(self.scale.clone() * norm))
    }

    /// Reindex to level `(M-1, N)` (extension by zero).
    pub fn extend_support(&self) -> Self {
        let level = LocalLevel::new(self.level.m - 1, self.level.n);
        let mut out = SBFunction {
            place: self.place.clone(),
            copies: self.copies,
            level,
            scale: self.scale.clone(),
            table: vec![
                CycloAcc::new(self.place.kappa.p());
                Self::carrier_len(&self.place, self.copies, &level)
            ],
        };
        let w_old = self.level.width();
        let w_new = level.width();
        for (i, entry) in self.table.iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            let old = self.digits_of(i);
            // new leading coordinate x_{M-1} = 0 per copy
            let mut digits = vec![0u32; self.copies as usize * w_new];
            for j in 0..self.copies as usize {
                for k in 0..w_old {
                    digits[j * w_new + 1 + k] = old[j * w_old + k];
                }
            }
            let idx = out.index_of(&digits);
            out.table[idx] = entry.clone();
        }
        out
    }

    /// Reindex to level `(M, N+1)` (pullback along the projection).
    pub fn raise_level(&self) -> Self {
        let level = LocalLevel::new(self.level.m, self.level.n + 1);
        let mut out = SBFunction {
            place: self.place.clone(),
            copies: self.copies,
            level,
            scale: self.scale.clone(),
            table: vec![
                CycloAcc::new(self.place.kappa.p());
                Self::carrier_len(&self.place, self.copies, &level)
            ],
        };
        let w_old = self.level.width();
        let w_new = level.width();
        for i in 0..out.table.len() {
            let digits = out.digits_of(i);
            let mut old = vec![0u32; self.copies as usize * w_old];
            for j in 0..self.copies as usize {
                for k in 0..w_old {
                    old[j * w_old + k] = digits[j * w_new + k];
                }
            }
            out.table[i] = self.table[self.index_of(&old)].clone();
        }
        out
    }

    /// Translate by `a` (one carrier vector): `x -> phi(x - a)`.
    pub fn translate(&self, a: &[u32]) -> Self {
        let mut out = self.clone();
        let kappa = &self.place.kappa;
        for i in 0..self.table.len() {
            let digits = self.digits_of(i);
            let shifted: Vec<u32> = digits
                .iter()
                .zip(a.iter())
                .map(|(&x, &s)| kappa.sub(x, s))
                .collect();
            out.table[i] = self.table[self.index_of(&shifted)].clone();
        }
        out
    }

    /// The local Fourier transform against the kernel `psi(r_v(x y))`:
    /// lands at level `(nu - N, nu - M)` with the `q_v^{-nN}` factor in
    /// the scale.
    pub fn fourier(&self) -> Self {
        let nu = self.place.conductor;
        let out_level = LocalLevel::new(nu - self.level.n, nu - self.level.m);
        let kappa = self.place.kappa.clone();
        let p = kappa.p();
        let w_in = self.level.width();
        let w_out = out_level.width();
        // residue pairing between coordinate positions: weight of
        // u^{k1 + k2}
        let mut pairing: Vec<(usize, usize, u32)> = Vec::new();
        for k1 in 0..w_in {
            for k2 in 0..w_out {
                let pow = (self.level.m + k1 as i32) + (out_level.m + k2 as i32);
                let w = self.place.residue_weight(pow);
                if w != 0 {
                    pairing.push((k1, k2, w));
                }
            }
        }
        let out_len = Self::carrier_len(&self.place, self.copies, &out_level);
        let mut table = vec![CycloAcc::new(p); out_len];
        let copies = self.copies as usize;
        for (ti, acc_out) in table.iter_mut().enumerate() {
            // decode y digits
            let mut y = vec![0u32; copies * w_out];
            let mut rem = ti;
            let qv = self.place.qv as usize;
            for k in (0..copies * w_out).rev() {
                y[k] = (rem % qv) as u32;
                rem /= qv;
            }
            for (xi, entry) in self.table.iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let x = self.digits_of(xi);
                let mut r = kappa.zero();
                for j in 0..copies {
                    for &(k1, k2, w) in &pairing {
                        let c1 = x[j * w_in + k1];
                        let c2 = y[j * w_out + k2];
                        if c1 != 0 && c2 != 0 {
                            r = kappa.add(r, kappa.mul(kappa.mul(c1, c2), w));
                        }
                    }
                }
                let character = kappa.trace(r);
                acc_out.add(&entry.mul(&root_acc(p, character)));
            }
        }
        let norm = qv_pow(self.place.qv, -(self.level.n as i64) * self.copies as i64);
        SBFunction {
            place: self.place.clone(),
            copies: self.copies,
            level: out_level,
            scale: self.scale.clone() * norm,
            table,
        }
    }

    /// Pointwise equality of values (scales may differ).
    pub fn values_equal(&self, other: &Self) -> bool {
        if self.level != other.level || self.copies != other.copies {
            return false;
        }
        self.table
            .iter()
            .zip(other.table.iter())
            .all(|(a, b)| a.to_value(&self.scale) == b.to_value(&other.scale))
    }
}

fn root_acc(p: u32, j: u32) -> CycloAcc {
    let mut acc = CycloAcc::new(p);
    acc.add_root(j, 1);
    acc
}

fn qv_pow(qv: u64, e: i64) -> Rat {
    let base = Rat::from_integer(Int::from(qv));
    let mut acc = rat_int(1);
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Sum of the product `prod_v phi_v(f)` over `f in L(D)^n`, `D` determined
/// by the supports: `D = -sum M_v [v]`. Places must be distinct; copies
/// must agree; unmarked places contribute 1 automatically because `L(D)`
/// is integral there.
pub fn sum_rational(factors: &[SBFunction], q: u32) -> Result<CycloValue> {
    if factors.is_empty() {
        return Err(Error::InvalidParameter(String::from(
            "sum_rational needs at least one local factor",
        )));
    }
    let copies = factors[0].copies;
    if factors.iter().any(|f| f.copies != copies) {
        return Err(Error::InvalidParameter(String::from(
            "local factors disagree on the number of copies",
        )));
    }
    for (i, f) in factors.iter().enumerate() {
        if factors[..i].iter().any(|g| g.place.id == f.place.id) {
            return Err(Error::InvalidParameter(String::from(
                "two local factors at the same place",
            )));
        }
    }
    let divisor = DivisorP1::new(
        factors
            .iter()
            .map(|f| (f.place.id.clone(), -(f.level.m as i64)))
            .collect(),
    );
    let basis = rr_space(q, &divisor)?;
    let ell = basis.len();
    // per factor: expansion matrix of basis elements on the level window
    let mut exp_mats: Vec<Vec<Vec<u32>>> = Vec::new();
    for f in factors {
        let mut rows = Vec::with_capacity(ell);
        for b in &basis {
            rows.push(expand_on_window(&f.place, b, &f.level)?);
        }
        exp_mats.push(rows);
    }
    let p = factors[0].place.kappa.p();
    let mut total = CycloAcc::new(p);
    // enumerate lambda in F_q^{ell * n}
    let dim = ell * copies as usize;
    let count = (q as u64)
        .checked_pow(dim as u32)
        .filter(|&c| c <= 50_000_000)
        .ok_or_else(|| Error::BoundExceeded(String::from("rational sum too large")))?;
    let mut lambda = vec![0u32; dim];
    for step in 0..count {
        if step > 0 {
            // odometer
            let mut i = 0;
            loop {
                lambda[i] += 1;
                if lambda[i] < q {
                    break;
                }
                lambda[i] = 0;
                i += 1;
            }
        }
        let mut prod: Option<CycloAcc> = None;
        let mut zero = false;
        for (fi, f) in factors.iter().enumerate() {
            let width = f.level.width();
            let kappa = &f.place.kappa;
            let mut digits = vec![0u32; copies as usize * width];
            for j in 0..copies as usize {
                for (i, row) in exp_mats[fi].iter().enumerate() {
                    let l = lambda[j * ell + i];
                    if l == 0 {
                        continue;
                    }
                    for (k, &c) in row.iter().enumerate() {
                        if c != 0 {
                            digits[j * width + k] =
                                kappa.add(digits[j * width + k], kappa.mul(l, c));
                        }
                    }
                }
            }
            let entry = &f.table[f.index_of(&digits)];
            if entry.is_zero() {
                zero = true;
                break;
            }
            prod = Some(match prod {
                None => entry.clone(),
                Some(acc) => acc.mul(entry),
            });
        }
        if !zero {
            if let Some(acc) = prod {
                total.add(&acc);
            }
        }
    }
    let mut scale = rat_int(1);
    for f in factors {
        scale *= &f.scale;
    }
    Ok(total.to_value(&scale))
}

/// Expansion coordinates of a rational function on a level window at a
/// place.
fn expand_on_window(place: &LocalPlace, f: &RationalFn, level: &LocalLevel) -> Result<Vec<u32>> {
    place.expand(&f.num, &f.den, level.m, level.n)
}

/// Outcome of a Poisson verification.
#[derive(Clone, Debug)]
pub struct PoissonReport {
    pub lhs: CycloValue,
    pub rhs: CycloValue,
    pub equal: bool,
}

/// The motivic Poisson formula specialised at `L = q` over `F_q(t)`:
/// `sum_{x in F^n} Phi(x) = q^{(1-g)n} sum_{y in F^n} F Phi(y)` with
/// `g = 0`. The factor list must contain the place at infinity (its
/// Fourier transform is supported away from `O`, so it can never be left
/// implicit); finite places with `Phi_v = 1_{O}` may be omitted.
pub fn poisson_check(factors: &[SBFunction], q: u32) -> Result<PoissonReport> {
    if !factors
        .iter()
        .any(|f| f.place.id == PlaceId::Infinity)
    {
        return Err(Error::InvalidParameter(String::from(
            "the infinite place must be among the factors",
        )));
    }
    let copies = factors[0].copies;
    let lhs = sum_rational(factors, q)?;
    let transformed: Vec<SBFunction> = factors.iter().map(|f| f.fourier()).collect();
    let rhs_sum = sum_rational(&transformed, q)?;
    let rhs = rhs_sum.scale(&qv_pow(q as u64, copies as i64));
    Ok(PoissonReport {
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Level data for a per-divisor family: base levels `(alpha_v, beta_v)` at
/// marked places (infinity must be included) and offsets `(M_i, N_i)` per
/// multiplicity index.
#[derive(Clone, Debug)]
pub struct FamilyLevels {
    pub sigma: Vec<(PlaceId, (i32, i32))>,
    pub offsets: BTreeMap<Vec<u32>, (u32, u32)>,
}

impl FamilyLevels {
    fn base_level(&self, id: &PlaceId) -> (i32, i32) {
        self.sigma
            .iter()
            .find(|(p, _)| p == id)
            .map(|(_, l)| *l)
            .unwrap_or((0, 0))
    }

    fn offset(&self, i: &[u32]) -> (u32, u32) {
        if i.iter().all(|&c| c == 0) {
            return (0, 0);
        }
        self.offsets.get(i).copied().unwrap_or((0, 0))
    }
}

/// Report of the per-divisor Poisson run and the order-of-summation check.
#[derive(Clone, Debug)]
pub struct FamilyPoissonReport {
    pub divisors: usize,
    pub all_poisson_equal: bool,
    /// `sum_D sum_x` computed divisor-by-divisor.
    pub total_by_divisor: CycloValue,
    /// The same double sum with the order reversed: one enumeration of the
    /// common Riemann–Roch space, summing over divisors inside.
    pub total_by_point: CycloValue,
    pub swap_equal: bool,
}

/// For every effective divisor `D` of multidegree `m` on `P^1/F_q`, build
/// the seeded Schwartz–Bruhat product at levels `(alpha_v - M_{i_v},
/// beta_v + N_{i_v})`, verify the Poisson formula, and check that summing
/// over divisors then points equals summing over points then divisors.
pub fn family_poisson(
    q: u32,
    copies: u32,
    m: &[u32],
    levels: &FamilyLevels,
    seed: u64,
) -> Result<FamilyPoissonReport> {
    if !levels
        .sigma
        .iter()
        .any(|(p, _)| *p == PlaceId::Infinity)
    {
        return Err(Error::InvalidParameter(String::from(
            "the family's marked set must include infinity",
        )));
    }
    let total_deg: u32 = m.iter().sum();
    // closed points of P^1 up to the total degree
    let base = crate::euler::BaseCurve::new(crate::euler::BaseKind::Proj1);
    let points = base.closed_points(q as u64, total_deg.max(1))?;
    // enumerate divisors: assignments of multiplicity vectors
    let mut divisors: Vec<Vec<(PlaceId, Vec<u32>)>> = Vec::new();
    let mut current: Vec<(PlaceId, Vec<u32>)> = Vec::new();
    enumerate_divisors(&points, 0, m, &mut current, &mut divisors);

    let prec = 24usize;
    let mut all_equal = true;
    let p = q;
    let mut total_by_divisor = CycloValue::zero();
    let mut per_divisor_factors: Vec<Vec<SBFunction>> = Vec::new();
    for div in &divisors {
        let mut factors: Vec<SBFunction> = Vec::new();
        // marked set: sigma places and the divisor's support
        let mut ids: Vec<PlaceId> = levels.sigma.iter().map(|(p, _)| p.clone()).collect();
        for (id, _) in div {
            if !ids.contains(id) {
                ids.push(id.clone());
            }
        }
        for id in ids {
            let mult = div
                .iter()
                .find(|(p, _)| *p == id)
                .map(|(_, i)| i.clone())
                .unwrap_or_else(|| vec![0; m.len()]);
            let (alpha, beta) = levels.base_level(&id);
            let (moff, noff) = levels.offset(&mult);
            let level = LocalLevel::new(alpha - moff as i32, beta + noff as i32);
            let place = LocalPlace::new(q, id.clone(), prec)?;
            let mut rng = SplitMix64::new(
                seed ^ hash_place(&id) ^ (vec_hash(&mult).wrapping_mul(0x9e37)),
            );
            factors.push(SBFunction::random(place, copies, level, &mut rng));
        }
        let report = poisson_check(&factors, q)?;
        if !report.equal {
            all_equal = false;
        }
        total_by_divisor = total_by_divisor.add(&report.lhs);
        per_divisor_factors.push(factors);
    }

    // reversed order: one common Riemann-Roch space containing every
    // divisor's summation domain
    let mut max_pole: BTreeMap<PlaceId, i64> = BTreeMap::new();
    for factors in &per_divisor_factors {
        for f in factors {
            let e = max_pole.entry(f.place.id.clone()).or_insert(i64::MIN);
            *e = (*e).max(-(f.level.m as i64));
        }
    }
    let big_divisor = DivisorP1::new(max_pole.clone().into_iter().collect());
    let basis = rr_space(p, &big_divisor)?;
    // places where some divisor allows a pole: functions must be checked
    // for integrality there when a given divisor leaves the place implicit
    let mut pole_places: Vec<(LocalPlace, i64)> = Vec::new();
    for (id, &pole) in max_pole.iter() {
        if pole > 0 {
            pole_places.push((LocalPlace::new(q, id.clone(), prec)?, pole));
        }
    }
    let ell = basis.len();
    let dim = ell * copies as usize;
    let count = (q as u64)
        .checked_pow(dim as u32)
        .filter(|&c| c <= 50_000_000)
        .ok_or_else(|| Error::BoundExceeded(String::from("swap check too large")))?;
    let mut total_by_point = CycloValue::zero();
    let mut lambda = vec![0u32; dim];
    for step in 0..count {
        if step > 0 {
            let mut i = 0;
            loop {
                lambda[i] += 1;
                if lambda[i] < q {
                    break;
                }
                lambda[i] = 0;
                i += 1;
            }
        }
        for factors in &per_divisor_factors {
            if let Some(v) =
                eval_extended(factors, &pole_places, &basis, &lambda, ell, copies)?
            {
                total_by_point = total_by_point.add(&v);
            }
        }
    }
    Ok(FamilyPoissonReport {
        divisors: divisors.len(),
        all_poisson_equal: all_equal,
        swap_equal: total_by_divisor == total_by_point,
        total_by_divisor,
        total_by_point,
    })
}

/// Evaluate `Phi_D` (extension by zero outside its own summation domain)
/// at the rational tuple determined by `lambda` over the common basis.
/// Returns `None` when any factor vanishes.
fn eval_extended(
    factors: &[SBFunction],
    pole_places: &[(LocalPlace, i64)],
    basis: &[RationalFn],
    lambda: &[u32],
    ell: usize,
    copies: u32,
) -> Result<Option<CycloValue>> {
    let mut prod: Option<CycloAcc> = None;
    let mut scale = rat_int(1);
    // implicit factors 1_{O_v}: the function must be integral at every
    // place this divisor does not mark but the common space allows poles at
    for (place, pole) in pole_places {
        if factors.iter().any(|f| f.place.id == place.id) {
            continue;
        }
        let kappa = &place.kappa;
        for j in 0..copies as usize {
            let mut coords = vec![0u32; *pole as usize];
            for (i, b) in basis.iter().enumerate() {
                let l = lambda[j * ell + i];
                if l == 0 {
                    continue;
                }
                let row = place.expand(&b.num, &b.den, -(*pole as i32), 0)?;
                for (k, &c) in row.iter().enumerate() {
                    if c != 0 {
                        coords[k] = kappa.add(coords[k], kappa.mul(l, c));
                    }
                }
            }
            if coords.iter().any(|&c| c != 0) {
                return Ok(None);
            }
        }
    }
    for f in factors {
        let kappa = &f.place.kappa;
        let width = f.level.width();
        // expand on the wide window [min(M, 0-ish pole bound), N): we must
        // detect coordinates below M (support violation)
        let max_pole = basis
            .iter()
            .map(|b| pole_order_at(&f.place, b))
            .max()
            .unwrap_or(0);
        let lo = (-(max_pole as i32)).min(f.level.m);
        let mut digits = vec![0u32; copies as usize * (f.level.n - lo) as usize];
        let wide = (f.level.n - lo) as usize;
        for j in 0..copies as usize {
            for (i, b) in basis.iter().enumerate() {
                let l = lambda[j * ell + i];
                if l == 0 {
                    continue;
                }
                let row = f.place.expand(&b.num, &b.den, lo, f.level.n)?;
                for (k, &c) in row.iter().enumerate() {
                    if c != 0 {
                        digits[j * wide + k] = kappa.add(digits[j * wide + k], kappa.mul(l, c));
                    }
                }
            }
        }
        // support check: coordinates below M must vanish
        let below = (f.level.m - lo) as usize;
        for j in 0..copies as usize {
            for k in 0..below {
                if digits[j * wide + k] != 0 {
                    return Ok(None);
                }
            }
        }
        let mut level_digits = vec![0u32; copies as usize * width];
        for j in 0..copies as usize {
            for k in 0..width {
                level_digits[j * width + k] = digits[j * wide + below + k];
            }
        }
        let entry = &f.table[f.index_of(&level_digits)];
        if entry.is_zero() {
            return Ok(None);
        }
        prod = Some(match prod {
            None => entry.clone(),
            Some(acc) => acc.mul(entry),
        });
        scale *= &f.scale;
    }
    Ok(prod.map(|acc| acc.to_value(&scale)))
}

fn pole_order_at(place: &LocalPlace, f: &RationalFn) -> u32 {
    // valuation of the denominator at the place minus numerator valuation,
    // clamped to >= 0; a coarse bound via degrees is enough for windows
    match &place.id {
        PlaceId::Infinity => {
            let dn = f.num.iter().rposition(|&c| c != 0).unwrap_or(0);
            let dd = f.den.iter().rposition(|&c| c != 0).unwrap_or(0);
            dn.saturating_sub(dd) as u32
        }
        PlaceId::Finite(_) => (f.den.len() - 1) as u32,
    }
}

fn hash_place(id: &PlaceId) -> u64 {
    match id {
        PlaceId::Infinity => 0x1234_5678_9abc_def0,
        PlaceId::Finite(pi) => {
            let mut h = 0xcbf2_9ce4_8422_2325u64;
            for &c in pi {
                h = (h ^ c as u64).wrapping_mul(0x100_0000_01b3);
            }
            h
        }
    }
}

fn vec_hash(v: &[u32]) -> u64 {
    let mut h = 0x9e37_79b9u64;
    for &c in v {
        h = (h ^ c as u64).wrapping_mul(0x85eb_ca6b);
    }
    h
}

fn enumerate_divisors(
    points: &[crate::euler::ClosedPoint],
    idx: usize,
    remaining: &[u32],
    current: &mut Vec<(PlaceId, Vec<u32>)>,
    out: &mut Vec<Vec<(PlaceId, Vec<u32>)>>,
) {
    if idx == points.len() {
        if remaining.iter().all(|&r| r == 0) {
            out.push(current.clone());
        }
        return;
    }
    let pt = &points[idx];
    let d = pt.degree;
    // all multiplicity vectors i with d*i <= remaining
    let dims = remaining.len();
    let mut i = vec![0u32; dims];
    loop {
        let consumed: Vec<u32> = i.iter().map(|&c| c * d).collect();
        if consumed
            .iter()
            .zip(remaining.iter())
            .all(|(c, r)| c <= r)
        {
            let next: Vec<u32> = remaining
                .iter()
                .zip(consumed.iter())
                .map(|(r, c)| r - c)
                .collect();
            if i.iter().any(|&c| c > 0) {
                current.push((euler_point_to_place(pt), i.clone()));
                enumerate_divisors(points, idx + 1, &next, current, out);
                current.pop();
            } else {
                enumerate_divisors(points, idx + 1, &next, current, out);
            }
        }
        // odometer with component bound remaining/d + 1
        let mut k = 0;
        loop {
            if k == dims {
                return;
            }
            i[k] += 1;
            if i[k] * d <= remaining[k] {
                break;
            }
            i[k] = 0;
            k += 1;
        }
    }
}

fn euler_point_to_place(pt: &crate::euler::ClosedPoint) -> PlaceId {
    match &pt.id {
        crate::euler::PointId::Infinity => PlaceId::Infinity,
        crate::euler::PointId::Finite(pi) => PlaceId::Finite(pi.clone()),
    }
}

// ---------------------------------------------------------------------
// The annulus integral
// ---------------------------------------------------------------------

/// Monomial in the unit-part coordinates: a power of `u_0` (possibly
/// negative) times positive powers of `u_k`, `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Mono {
    u0: i32,
    parts: Vec<(u32, u32)>, // (index, exponent), sorted
}

impl Mono {
    fn one() -> Self {
        Mono {
            u0: 0,
            parts: Vec::new(),
        }
    }

    fn mul(&self, other: &Mono) -> Mono {
        let mut parts: BTreeMap<u32, u32> = self.parts.iter().copied().collect();
        for &(k, e) in &other.parts {
            *parts.entry(k).or_insert(0) += e;
        }
        Mono {
            u0: self.u0 + other.u0,
            parts: parts.into_iter().collect(),
        }
    }
}

/// Polynomial over `F_q` in the `u`-coordinates.
type SymPoly = BTreeMap<Mono, u32>;

fn sym_add_term(poly: &mut SymPoly, mono: Mono, c: u32, q: u32) {
    if c.is_multiple_of(q) {
        return;
    }
    let entry = poly.entry(mono).or_insert(0);
    *entry = (*entry + c) % q;
    if *entry == 0 {
        poly.retain(|_, v| *v != 0);
    }
}

fn sym_mul(a: &SymPoly, b: &SymPoly, q: u32) -> SymPoly {
    let mut out = SymPoly::new();
    for (ma, &ca) in a {
        for (mb, &cb) in b {
            sym_add_term(&mut out, ma.mul(mb), (ca as u64 * cb as u64 % q as u64) as u32, q);
        }
    }
    out
}

/// Truncated series in `t` with `SymPoly` coefficients.
#[derive(Clone, Debug)]
struct SymSeries {
    coeffs: Vec<SymPoly>, // index = t-power, length = truncation
}

impl SymSeries {
    fn zero(prec: usize) -> Self {
        SymSeries {
            coeffs: vec![SymPoly::new(); prec],
        }
    }

    fn unit_u(prec: usize, q: u32) -> Self {
        // u(t) = u_0 + u_1 t + ... with symbolic coefficients
        let mut s = Self::zero(prec);
        for k in 0..prec {
            let mono = if k == 0 {
                Mono {
                    u0: 1,
                    parts: Vec::new(),
                }
            } else {
                Mono {
                    u0: 0,
                    parts: vec![(k as u32, 1)],
                }
            };
            sym_add_term(&mut s.coeffs[k], mono, 1, q);
        }
        s
    }

    fn mul(&self, other: &SymSeries, q: u32) -> SymSeries {
        let prec = self.coeffs.len();
        let mut out = Self::zero(prec);
        for i in 0..prec {
            if self.coeffs[i].is_empty() {
                continue;
            }
            for j in 0..prec - i {
                if other.coeffs[j].is_empty() {
                    continue;
                }
                let prod = sym_mul(&self.coeffs[i], &other.coeffs[j], q);
                for (m, c) in prod {
                    sym_add_term(&mut out.coeffs[i + j], m, c, q);
                }
            }
        }
        out
    }

    /// Inverse of a series whose leading coefficient is the monomial
    /// `u_0` (a unit).
    fn inverse_unit(&self, q: u32) -> SymSeries {
        let prec = self.coeffs.len();
        let mut inv = Self::zero(prec);
        let u0_inv = Mono {
            u0: -1,
            parts: Vec::new(),
        };
        sym_add_term(&mut inv.coeffs[0], u0_inv.clone(), 1, q);
        for i in 1..prec {
            // inv_i = -u0^{-1} sum_{a=1..i} self_a inv_{i-a}
            let mut acc = SymPoly::new();
            for a in 1..=i {
                let prod = sym_mul(&self.coeffs[a], &inv.coeffs[i - a], q);
                for (m, c) in prod {
                    sym_add_term(&mut acc, m, c, q);
                }
            }
            let mut out = SymPoly::new();
            for (m, c) in acc {
                sym_add_term(&mut out, m.mul(&u0_inv), (q - c) % q, q);
            }
            inv.coeffs[i] = out;
        }
        inv
    }

    fn pow(&self, e: u32, q: u32) -> SymSeries {
        let prec = self.coeffs.len();
        let mut acc = Self::zero(prec);
        sym_add_term(&mut acc.coeffs[0], Mono::one(), 1, q);
        for _ in 0..e {
            acc = acc.mul(self, q);
        }
        acc
    }
}

const ANNULUS_NODE_BUDGET: u64 = 2_000_000;

/// `int_{ord(x) = m} psi(res(P(x) x^{-d} dt)) dx` over `F_q((t))`, `q`
/// prime, by exact reduction to a finite character sum: the result is
/// `q^{-m-md} sum over the unit part of psi(R)`, where `R` is the
/// `t^{md-1}` coefficient of `P(t^m u) u^{-d}`, a polynomial in the unit
/// coordinates. The sum collapses coordinate by coordinate: an isolated
/// linear coordinate with nonzero constant coefficient kills its branch,
/// an absent coordinate contributes a factor `q`, and remaining
/// coordinates are enumerated. The computation is repeated at one deeper
/// truncation and must agree.
///
/// The closed-form case split of the characteristic-zero statement (value
/// `-q^{-2}` exactly when `m = d = 1`, zero otherwise) specialises to
/// `F_q` only when `p` does not divide `d`: the vanishing argument for the
/// top coordinate divides by `d`, and for `p | d` the sum can be nonzero.
pub fn annulus_integral(m: u32, d: u32, p_coeffs: &[Vec<i64>], q: u32) -> Result<CycloValue> {
    if crate::num::prime_power(q as u64) != Some((q as u64, 1)) {
        return Err(Error::InvalidParameter(String::from(
            "annulus_integral needs prime q",
        )));
    }
    if m < 1 || d < 1 {
        return Err(Error::InvalidParameter(String::from(
            "annulus_integral needs m, d >= 1",
        )));
    }
    let c0 = p_coeffs
        .first()
        .map(|c| c.first().copied().unwrap_or(0).rem_euclid(q as i64))
        .unwrap_or(0);
    if c0 == 0 {
        return Err(Error::InvalidParameter(String::from(
            "ord P(0) = 0 required: the constant coefficient must be a unit",
        )));
    }
    let first = annulus_sum(m, d, p_coeffs, q, 0)?;
    let second = annulus_sum(m, d, p_coeffs, q, 1)?;
    if first != second {
        return Err(Error::Unstable(String::from(
            "annulus integral changed under the truncation re-check",
        )));
    }
    Ok(first)
}

fn annulus_sum(m: u32, d: u32, p_coeffs: &[Vec<i64>], q: u32, margin: usize) -> Result<CycloValue> {
    let md = (m * d) as usize;
    let prec = md + margin; // need t-powers 0..md-1 (+margin)
    let prec = prec.max(1);
    // u(t), u(t)^{-d}
    let u = SymSeries::unit_u(prec, q);
    let u_inv = u.inverse_unit(q);
    let u_minus_d = u_inv.pow(d, q);
    // P(t^m u) u^{-d} = sum_j c_j(t) t^{jm} u^j u^{-d}
    let mut total = SymSeries::zero(prec);
    let mut u_pow_j = SymSeries::zero(prec);
    sym_add_term(&mut u_pow_j.coeffs[0], Mono::one(), 1, q);
    for (j, cj) in p_coeffs.iter().enumerate() {
        let shift = j * m as usize;
        if shift >= prec {
            break;
        }
        let factor = u_pow_j.mul(&u_minus_d, q);
        for (tpow, coeff) in cj.iter().enumerate() {
            let c = coeff.rem_euclid(q as i64) as u32;
            if c == 0 {
                continue;
            }
            for i in 0..prec {
                if shift + tpow + i >= prec {
                    break;
                }
                for (mono, &cc) in &factor.coeffs[i] {
                    sym_add_term(
                        &mut total.coeffs[shift + tpow + i],
                        mono.clone(),
                        (cc as u64 * c as u64 % q as u64) as u32,
                        q,
                    );
                }
            }
        }
        u_pow_j = u_pow_j.mul(&u, q);
    }
    let residue = if md >= 1 {
        total.coeffs[md - 1].clone()
    } else {
        SymPoly::new()
    };
    // the residue must only involve u_0..u_{md-1}
    let max_var = residue
        .keys()
        .flat_map(|mono| mono.parts.iter().map(|&(k, _)| k))
        .max()
        .unwrap_or(0);
    if max_var as usize >= md.max(1) {
        return Err(Error::Unstable(String::from(
            "residue depends on coordinates beyond the stated truncation bound",
        )));
    }
    // character sum over u_0 in F_q^*, u_1..u_{md-1} in F_q
    let mut acc = CycloAcc::new(q);
    let mut budget = ANNULUS_NODE_BUDGET;
    for u0 in 1..q {
        let r0 = substitute_u0(&residue, u0, q);
        let vars: Vec<u32> = (1..md as u32).collect();
        collapse_sum(r0, &vars, 1, q, &mut acc, &mut budget)?;
    }
    let scale = qv_pow(q as u64, -((m as i64) + md as i64));
    Ok(acc.to_value(&scale))
}

fn substitute_u0(poly: &SymPoly, value: u32, q: u32) -> SymPoly {
    let mut out = SymPoly::new();
    for (mono, &c) in poly {
        let ufac = pow_mod(value, mono.u0, q);
        let nm = Mono {
            u0: 0,
            parts: mono.parts.clone(),
        };
        sym_add_term(&mut out, nm, (c as u64 * ufac as u64 % q as u64) as u32, q);
    }
    out
}

fn pow_mod(a: u32, e: i32, q: u32) -> u32 {
    let mut base = a as u64 % q as u64;
    if e < 0 {
        // a^{-1} = a^{q-2}
        let mut inv = 1u64;
        let mut b = base;
        let mut k = q as u64 - 2;
        while k > 0 {
            if k & 1 == 1 {
                inv = inv * b % q as u64;
            }
            b = b * b % q as u64;
            k >>= 1;
        }
        base = inv;
    }
    let mut acc = 1u64;
    for _ in 0..e.unsigned_abs() {
        acc = acc * base % q as u64;
    }
    acc as u32
}

/// Recursive collapse of `sum over the given coordinates of psi(poly)`.
fn collapse_sum(
    poly: SymPoly,
    vars: &[u32],
    multiplier: i128,
    q: u32,
    acc: &mut CycloAcc,
    budget: &mut u64,
) -> Result<()> {
    if *budget == 0 {
        return Err(Error::BoundExceeded(String::from(
            "annulus character sum exceeded its node budget",
        )));
    }
    *budget -= 1;
    let mut remaining: Vec<u32> = vars.to_vec();
    let mut mult = multiplier;
    loop {
        let mut progressed = false;
        let mut i = 0;
        while i < remaining.len() {
            let k = remaining[i];
            let mut appears = false;
            let mut isolated_linear = true;
            for mono in poly.keys() {
                match mono.parts.iter().find(|&&(idx, _)| idx == k) {
                    None => {}
                    Some(&(_, e)) => {
                        appears = true;
                        if e > 1 || mono.parts.len() > 1 {
                            isolated_linear = false;
                            break;
                        }
                    }
                }
            }
            if !appears {
                // free coordinate
                mult *= q as i128;
                remaining.remove(i);
                progressed = true;
                continue;
            }
            if isolated_linear {
                // sum over this coordinate of psi(c * u_k + rest) vanishes
                return Ok(());
            }
            i += 1;
        }
        if !progressed {
            break;
        }
    }
    if remaining.is_empty() {
        let constant = poly
            .get(&Mono::one())
            .copied()
            .unwrap_or(0);
        acc.add_root(constant, mult);
        return Ok(());
    }
    // enumerate the smallest remaining coordinate
    let k = *remaining.iter().min().unwrap();
    let rest: Vec<u32> = remaining.iter().copied().filter(|&v| v != k).collect();
    for value in 0..q {
        let substituted = substitute_var(&poly, k, value, q);
        collapse_sum(substituted, &rest, mult, q, acc, budget)?;
    }
    Ok(())
}

fn substitute_var(poly: &SymPoly, k: u32, value: u32, q: u32) -> SymPoly {
    let mut out = SymPoly::new();
    for (mono, &c) in poly {
        let mut factor = 1u64;
        let mut parts = Vec::new();
        for &(idx, e) in &mono.parts {
            if idx == k {
                for _ in 0..e {
                    factor = factor * value as u64 % q as u64;
                }
            } else {
                parts.push((idx, e));
            }
        }
        if factor == 0 {
            continue;
        }
        let nm = Mono { u0: mono.u0, parts };
        sym_add_term(&mut out, nm, (c as u64 * factor % q as u64) as u32, q);
    }
    out
}

/// Literal evaluation of the annulus integral: enumerate the carrier
/// `(t^m O \ t^{m+1} O)/t^N O` at the stated bound `N = md + m + 2` and
/// sum the character values. Exponentially slower than
/// [`annulus_integral`] and kept as its independent oracle.
pub fn annulus_integral_bruteforce(
    m: u32,
    d: u32,
    p_coeffs: &[Vec<i64>],
    q: u32,
) -> Result<CycloValue> {
    let nn = (m * d + m + 2) as usize;
    let width = nn - m as usize;
    let total = (q as u64)
        .checked_pow(width as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::BoundExceeded(String::from("annulus brute force too large")))?;
    let mut acc = CycloAcc::new(q);
    for code in 0..total {
        let mut xv = vec![0u32; nn];
        let mut c = code;
        for k in 0..width {
            xv[m as usize + k] = (c % q as u64) as u32;
            c /= q as u64;
        }
        if xv[m as usize] == 0 {
            continue;
        }
        let u: Vec<u32> = (0..width + 2)
            .map(|k| *xv.get(m as usize + k).unwrap_or(&0))
            .collect();
        let prec = width + 2;
        let uinv = series_inv_fq(&u, q, prec);
        let mut uinv_d = vec![0u32; prec];
        uinv_d[0] = 1;
        for _ in 0..d {
            uinv_d = series_mul_fq(&uinv_d, &uinv, q, prec);
        }
        let mut upow = vec![0u32; prec];
        upow[0] = 1;
        let mut total_series = vec![0u32; prec];
        for (j, cj) in p_coeffs.iter().enumerate() {
            let base = series_mul_fq(&upow, &uinv_d, q, prec);
            for (tp, co) in cj.iter().enumerate() {
                let cc = co.rem_euclid(q as i64) as u32;
                if cc == 0 {
                    continue;
                }
                let shift = j * m as usize + tp;
                for i in 0..prec {
                    if shift + i >= prec {
                        break;
                    }
                    total_series[shift + i] = ((total_series[shift + i] as u64
                        + base[i] as u64 * cc as u64)
                        % q as u64) as u32;
                }
            }
            upow = series_mul_fq(&upow, &u, q, prec);
        }
        let md = (m * d) as usize;
        let res = if md >= 1 { total_series[md - 1] } else { 0 };
        acc.add_root(res, 1);
    }
    let scale = qv_pow(q as u64, -(nn as i64));
    Ok(acc.to_value(&scale))
}

fn series_mul_fq(a: &[u32], b: &[u32], q: u32, prec: usize) -> Vec<u32> {
    let mut out = vec![0u32; prec];
    for i in 0..prec {
        if a[i] == 0 {
            continue;
        }
        for j in 0..prec - i {
            out[i + j] = ((out[i + j] as u64 + a[i] as u64 * b[j] as u64) % q as u64) as u32;
        }
    }
    out
}

fn series_inv_fq(a: &[u32], q: u32, prec: usize) -> Vec<u32> {
    let mut inv = vec![0u32; prec];
    let a0inv = pow_mod(a[0], -1, q);
    inv[0] = a0inv;
    for i in 1..prec {
        let mut acc = 0u64;
        for k in 1..=i {
            acc = (acc + a[k] as u64 * inv[i - k] as u64) % q as u64;
        }
        inv[i] = (a0inv as u64 * ((q as u64 - acc) % q as u64) % q as u64) as u32;
    }
    inv
}
