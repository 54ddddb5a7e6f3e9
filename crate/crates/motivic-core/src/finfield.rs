//! Small finite fields `F_{p^k}` with exhaustive enumeration.
//!
//! Elements are codes `0..q` whose base-`p` digits are the coefficients of
//! the residue polynomial. Multiplication goes through discrete-log tables
//! built from a generator, so fields are limited to a few hundred thousand
//! elements — plenty for desk-scale enumeration. Residue fields of places
//! are built with an explicit modulus so that Laurent-expansion coordinates
//! match the quotient presentation `F_p[x]/(pi)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const MAX_FIELD: u64 = 1 << 21;

/// Polynomials over `F_p` as coefficient vectors (index = degree), used only
/// during field construction.
fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    // reduce by monic modulus
    let k = modulus.len() - 1;
    for i in (k..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..k {
            let sub = c * modulus[j] as u64 % p as u64;
            prod[i - k + j] = (prod[i - k + j] + p as u64 - sub) % p as u64;
        }
    }
    let mut out: Vec<u32> = prod.iter().take(k).map(|&c| c as u32).collect();
    poly_trim(&mut out);
    out
}

fn poly_pow_mod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let mut b = base.to_vec();
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = r.len() - 1 - db;
        for j in 0..=db {
            let sub = c as u64 * b[j] as u64 % p as u64;
            let idx = shift + j;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p prime, a != 0
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

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = (f.len() - 1) as u32;
    if k == 0 {
        return false;
    }
    let x = vec![0u32, 1];
    // x^{p^k} == x mod f
    let mut xp = x.clone();
    for _ in 0..k {
        xp = poly_pow_mod(&xp, p as u64, f, p);
    }
    let mut diff = xp.clone();
    sub_poly(&mut diff, &x, p);
    if !diff.is_empty() {
        return false;
    }
    // gcd(x^{p^{k/r}} - x, f) = 1 for every prime r | k
    let mut k_rem = k;
    let mut r = 2;
    let mut prime_divs = Vec::new();
    while r * r <= k_rem {
        if k_rem.is_multiple_of(r) {
            prime_divs.push(r);
            while k_rem.is_multiple_of(r) {
                k_rem /= r;
            }
        }
        r += 1;
    }
    if k_rem > 1 {
        prime_divs.push(k_rem);
    }
    for r in prime_divs {
        let mut xr = x.clone();
        for _ in 0..(k / r) {
            xr = poly_pow_mod(&xr, p as u64, f, p);
        }
        let mut diff = xr;
        sub_poly(&mut diff, &x, p);
        if diff.is_empty() {
            return false;
        }
        let g = poly_gcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn sub_poly(a: &mut Vec<u32>, b: &[u32], p: u32) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (i, &c) in b.iter().enumerate() {
        a[i] = ((a[i] as u64 + p as u64 - c as u64) % p as u64) as u32;
    }
    poly_trim(a);
}

/// Lexicographically smallest monic irreducible of degree `k` over `F_p`.
pub fn find_irreducible(p: u32, k: u32) -> Vec<u32> {
    assert!(k >= 1);
    if k == 1 {
        return vec![0, 1]; // x
    }
    let total = (p as u64).pow(k);
    for code in 0..total {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1); // monic
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist");
}

/// A finite field `F_{p^k}`, with discrete-log multiplication tables.
#[derive(Clone)]
pub struct Fq {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp_table: Vec<u32>,
    log_table: Vec<u32>,
}

impl Fq {
    /// Build `F_{p^k}` with the default (smallest) irreducible modulus.
    pub fn new(p: u32, k: u32) -> Result<Fq> {
        if crate::num::prime_power(p as u64) != Some((p as u64, 1)) {
            return Err(Error::InvalidParameter(String::from(
                "field characteristic must be prime",
            )));
        }
        let modulus = find_irreducible(p, k);
        Self::from_modulus(p, &modulus)
    }

    /// Build `F_p[x]/(modulus)` for a monic irreducible `modulus`; the
    /// coordinate presentation is the quotient basis `1, x, ..., x^{k-1}`.
    pub fn from_modulus(p: u32, modulus: &[u32]) -> Result<Fq> {
        let k = (modulus.len() - 1) as u32;
        let q128 = (p as u64).pow(k);
        if q128 > MAX_FIELD {
            return Err(Error::BoundExceeded(String::from(
                "finite field too large to enumerate",
            )));
        }
        if k > 1 && !is_irreducible(modulus, p) {
            return Err(Error::InvalidParameter(String::from(
                "field modulus is reducible",
            )));
        }
        let q = q128 as u32;
        let mut field = Fq {
            p,
            k,
            q,
            modulus: modulus.to_vec(),
            exp_table: Vec::new(),
            log_table: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn code_to_poly(&self, mut code: u32) -> Vec<u32> {
        let mut f = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            f.push(code % self.p);
            code /= self.p;
        }
        poly_trim(&mut f);
        f
    }

    fn poly_to_code(&self, f: &[u32]) -> u32 {
        let mut code = 0u64;
        for &c in f.iter().rev() {
            code = code * self.p as u64 + c as u64;
        }
        code as u32
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        let fa = self.code_to_poly(a);
        let fb = self.code_to_poly(b);
        if fa.is_empty() || fb.is_empty() {
            return 0;
        }
        self.poly_to_code(&poly_mul_mod(&fa, &fb, &self.modulus, self.p))
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = (q - 1) as u64;
        let mut prime_divs = Vec::new();
        let mut m = order;
        let mut r = 2u64;
        while r * r <= m {
            if m.is_multiple_of(r) {
                prime_divs.push(r);
                while m.is_multiple_of(r) {
                    m /= r;
                }
            }
            r += 1;
        }
        if m > 1 {
            prime_divs.push(m);
        }
        let raw_pow = |field: &Fq, mut base: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = field.raw_mul(acc, base);
                }
                base = field.raw_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let mut generator = 0;
        'search: for g in 1..q {
            if g == 0 {
                continue;
            }
            for &r in &prime_divs {
                if raw_pow(self, g, order / r) == 1 {
                    continue 'search;
                }
            }
            generator = g;
            break;
        }
        assert!(generator != 0 || q == 2, "no generator found");
        if q == 2 {
            generator = 1;
        }
        let mut exp_table = vec![0u32; (q - 1) as usize];
        let mut log_table = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..(q - 1) as usize {
            exp_table[i] = cur;
            log_table[cur as usize] = i as u32;
            cur = self.raw_mul(cur, generator);
        }
        self.exp_table = exp_table;
        self.log_table = log_table;
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> u32 {
        0
    }
    pub fn one(&self) -> u32 {
        1
    }

    /// Image of the integer `n` under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// The class of `x` (the modulus variable) in the quotient presentation.
    pub fn gen_x(&self) -> u32 {
        if self.k == 1 {
            // x reduces to the negative of the constant term of the modulus
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p // code with digits (0,1,0,..)
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let mut out = 0u64;
        let mut mult = 1u64;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.k {
            let s = (a % self.p + b % self.p) % self.p;
            out += s as u64 * mult;
            mult *= self.p as u64;
            a /= self.p;
            b /= self.p;
        }
        out as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        let mut out = 0u64;
        let mut mult = 1u64;
        let mut a = a;
        for _ in 0..self.k {
            let d = a % self.p;
            let s = if d == 0 { 0 } else { self.p - d };
            out += s as u64 * mult;
            mult *= self.p as u64;
            a /= self.p;
        }
        out as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let ord = (self.q - 1) as u64;
        let l = (self.log_table[a as usize] as u64 + self.log_table[b as usize] as u64) % ord;
        self.exp_table[l as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "division by zero in finite field");
        let ord = (self.q - 1) as u64;
        let l = (ord - self.log_table[a as usize] as u64) % ord;
        self.exp_table[l as usize]
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        if a == 0 {
            assert!(e > 0, "0^e needs e > 0");
            return 0;
        }
        let ord = (self.q - 1) as i64;
        let l = (self.log_table[a as usize] as i64 * (e % ord)).rem_euclid(ord);
        self.exp_table[l as usize]
    }

    /// Absolute trace to `F_p`: the sum of Frobenius conjugates, an element
    /// of the prime field returned as its constant digit in `0..p`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut sum = 0u32;
        let mut cur = a;
        for _ in 0..self.k {
            sum = self.add(sum, cur);
            cur = self.pow(cur, self.p as i64);
        }
        debug_assert!(sum < self.p, "trace must land in the prime field");
        sum
    }

    /// Is `a` a square in `F_q`?
    pub fn is_square(&self, a: u32) -> bool {
        if a == 0 || self.p == 2 {
            return true;
        }
        self.log_table[a as usize].is_multiple_of(2)
    }

    /// A square root of -1 if `q = 1 mod 4`.
    pub fn sqrt_minus_one(&self) -> Option<u32> {
        if self.q % 4 != 1 {
            return None;
        }
        let l = (self.q - 1) / 4;
        Some(self.exp_table[l as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// The multiplicative generator backing the log tables.
    pub fn generator(&self) -> u32 {
        self.exp_table[if self.q == 2 { 0 } else { 1 }]
    }
}

impl core::fmt::Debug for Fq {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "F_{}", self.q)
    }
}
