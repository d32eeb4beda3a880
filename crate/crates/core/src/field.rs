//! Exact arithmetic in GF(p^k).
//!
//! A [`Field`] is constructed from a prime characteristic, an irreducible
//! modulus polynomial and a declared primitive element. Elements are stored
//! in polynomial basis, packed base-p into a single machine word, so the
//! whole field fits in lookup tables: for q <= 2^20 a discrete-log /
//! antilog pair is precomputed and multiplication is two table reads.
//! Larger fields fall back to schoolbook polynomial arithmetic.

use std::sync::atomic::{AtomicU32, Ordering};

use crate::error::{Error, Result};

static NEXT_FIELD_ID: AtomicU32 = AtomicU32::new(1);

const TABLE_LIMIT: u64 = 1 << 20;

/// A field element: the base-p packed coefficient vector of its polynomial
/// basis representation. Elements are only meaningful relative to the
/// [`Field`] that produced them; in debug builds every binary operation
/// asserts that both operands carry the owning field's identity token.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fe {
    v: u32,
    #[cfg(debug_assertions)]
    fid: u32,
}

impl Fe {
    /// Packed representation index, in `[0, q)`.
    pub fn index(self) -> u64 {
        self.v as u64
    }
}

impl std::fmt::Debug for Fe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fe({})", self.v)
    }
}

/// GF(p^k) under a fixed irreducible modulus with a declared primitive
/// element. Immutable after construction; share with `Arc`.
pub struct Field {
    id: u32,
    p: u64,
    k: u32,
    q: u64,
    /// Modulus coefficients, ascending degree, length k+1, monic.
    modulus: Vec<u64>,
    generator: u32,
    /// dlog table: element index -> exponent of the generator. Empty for
    /// fields above the table limit. Entry 0 is a sentinel.
    log: Vec<u32>,
    /// antilog table: exponent -> element index, length q-1.
    exp: Vec<u32>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Field#{}(GF({}^{}))", self.id, self.p, self.k)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial helpers over GF(p), coefficients ascending, always trimmed.
mod modp {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
        // m monic
        let mut a = a.to_vec();
        let dm = m.len() - 1;
        while a.len() > dm {
            let c = *a.last().unwrap();
            let da = a.len() - 1;
            if c != 0 {
                for i in 0..=dm {
                    let idx = da - dm + i;
                    a[idx] = (a[idx] + (p - m[i] % p) % p * c) % p;
                }
            }
            a.pop();
        }
        trim(a)
    }

    pub fn mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(p, &out, m)
    }

    pub fn powmod(p: u64, a: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
        let mut base = rem(p, a, m);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(p, &acc, &base, m);
            }
            base = mulmod(p, &base, &base, m);
            e >>= 1;
        }
        acc
    }

    pub fn sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = (x + p - y) % p;
        }
        trim(out)
    }

    pub fn gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            // make b monic before reducing
            let lc = *b.last().unwrap();
            let lc_inv = inv_mod(p, lc);
            let bm: Vec<u64> = b.iter().map(|&c| c * lc_inv % p).collect();
            let r = rem(p, &a, &bm);
            a = b;
            b = r;
        }
        a
    }

    pub fn inv_mod(p: u64, a: u64) -> u64 {
        // p prime, a != 0: Fermat
        let mut e = p - 2;
        let mut base = a % p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    /// Rabin irreducibility test for a monic polynomial of degree k >= 1.
    pub fn irreducible(p: u64, m: &[u64]) -> bool {
        let k = (m.len() - 1) as u64;
        if k == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        // x^(p^k) == x mod m
        let mut t = x.clone();
        for _ in 0..k {
            t = powmod(p, &t, p, m);
        }
        if trim(sub(p, &t, &x)) != Vec::<u64>::new() {
            return false;
        }
        // gcd(x^(p^(k/l)) - x, m) == 1 for each prime l | k
        let mut primes = vec![];
        let mut kk = k;
        let mut d = 2;
        while d * d <= kk {
            if kk.is_multiple_of(d) {
                primes.push(d);
                while kk.is_multiple_of(d) {
                    kk /= d;
                }
            }
            d += 1;
        }
        if kk > 1 {
            primes.push(kk);
        }
        for l in primes {
            let mut t = x.clone();
            for _ in 0..k / l {
                t = powmod(p, &t, p, m);
            }
            let g = gcd(p, &sub(p, &t, &x), m);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Builds GF(p^k) from the modulus and generator, both given as
    /// coefficient lists over GF(p) in ascending degree. The modulus must be
    /// monic of degree k and irreducible; the generator must have
    /// multiplicative order p^k - 1. Both are verified.
    pub fn new(p: u64, k: u32, modulus: &[u64], generator: &[u64]) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::CharacteristicNotPrime(p));
        }
        if k < 1 {
            return Err(Error::Precondition("extension degree must be >= 1".into()));
        }
        let mut modulus: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        modulus = modp::trim(modulus);
        if modulus.len() != k as usize + 1 || *modulus.last().unwrap() != 1 {
            return Err(Error::Precondition(format!(
                "modulus must be monic of degree {k}"
            )));
        }
        let q = (p as u128).checked_pow(k).filter(|&q| q <= (1 << 31)).ok_or_else(
            || Error::Precondition("field size p^k exceeds the supported 2^31 limit".into()),
        )? as u64;
        if !modp::irreducible(p, &modulus) {
            return Err(Error::ReducibleModulus);
        }

        let mut field = Field {
            id: NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed),
            p,
            k,
            q,
            modulus,
            generator: 0,
            log: vec![],
            exp: vec![],
        };
        let gen_digits: Vec<u64> = generator.iter().map(|&c| c % p).collect();
        let g = field.fe(field.pack(&modp::rem(p, &gen_digits, &field.modulus)));
        if field.is_zero(g) {
            return Err(Error::NonPrimitiveGenerator);
        }
        field.generator = g.v;

        if q <= TABLE_LIMIT {
            let mut log = vec![u32::MAX; q as usize];
            let mut exp = Vec::with_capacity((q - 1) as usize);
            let mut e = field.one();
            for i in 0..q - 1 {
                if log[e.v as usize] != u32::MAX {
                    // cycled back before covering the whole group
                    return Err(Error::NonPrimitiveGenerator);
                }
                log[e.v as usize] = i as u32;
                exp.push(e.v);
                e = field.mul_schoolbook(e, g);
            }
            if e != field.one() {
                return Err(Error::NonPrimitiveGenerator);
            }
            field.log = log;
            field.exp = exp;
        } else if !field.order_is_full(g) {
            return Err(Error::NonPrimitiveGenerator);
        }
        Ok(field)
    }

    fn order_is_full(&self, g: Fe) -> bool {
        let n = self.q - 1;
        let mut primes = vec![];
        let mut m = n;
        let mut d = 2u64;
        while d * d <= m {
            if m.is_multiple_of(d) {
                primes.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        primes.iter().all(|&l| {
            self.pow(g, (n / l) as i64)
                .map(|v| v != self.one())
                .unwrap_or(false)
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn char2(&self) -> bool {
        self.p == 2
    }

    pub fn generator(&self) -> Fe {
        self.fe(self.generator as u64)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn fe(&self, v: u64) -> Fe {
        debug_assert!(v < self.q);
        Fe {
            v: v as u32,
            #[cfg(debug_assertions)]
            fid: self.id,
        }
    }

    #[inline]
    fn check(&self, a: Fe) {
        #[cfg(debug_assertions)]
        debug_assert_eq!(a.fid, self.id, "element used with a foreign field spec");
        let _ = a;
    }

    pub fn zero(&self) -> Fe {
        self.fe(0)
    }

    pub fn one(&self) -> Fe {
        self.fe(1)
    }

    pub fn is_zero(&self, a: Fe) -> bool {
        self.check(a);
        a.v == 0
    }

    /// Element from its packed index in `[0, q)`.
    pub fn from_index(&self, v: u64) -> Result<Fe> {
        if v >= self.q {
            return Err(Error::Precondition(format!(
                "element index {v} out of range for field of size {}",
                self.q
            )));
        }
        Ok(self.fe(v))
    }

    /// Element from a coefficient vector over GF(p), ascending degree.
    /// Longer inputs are reduced modulo the field modulus.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Fe {
        let digits: Vec<u64> = coeffs.iter().map(|&c| c % self.p).collect();
        let reduced = modp::rem(self.p, &digits, &self.modulus);
        self.fe(self.pack(&reduced))
    }

    /// Lift an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        self.fe(n.rem_euclid(self.p as i64) as u64)
    }

    fn pack(&self, digits: &[u64]) -> u64 {
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * self.p + d;
        }
        v
    }

    fn unpack(&self, mut v: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.check(a);
        self.check(b);
        if self.p == 2 {
            return self.fe((a.v ^ b.v) as u64);
        }
        let (mut va, mut vb) = (a.v as u64, b.v as u64);
        let mut out = 0u64;
        let mut mult = 1u64;
        for _ in 0..self.k {
            let s = (va % self.p + vb % self.p) % self.p;
            out += s * mult;
            mult *= self.p;
            va /= self.p;
            vb /= self.p;
        }
        self.fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        self.check(a);
        if self.p == 2 {
            return a;
        }
        let mut va = a.v as u64;
        let mut out = 0u64;
        let mut mult = 1u64;
        for _ in 0..self.k {
            let d = va % self.p;
            out += if d == 0 { 0 } else { self.p - d } * mult;
            mult *= self.p;
            va /= self.p;
        }
        self.fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    fn mul_schoolbook(&self, a: Fe, b: Fe) -> Fe {
        let da = self.unpack(a.v as u64);
        let db = self.unpack(b.v as u64);
        let prod = {
            let mut out = vec![0u64; 2 * self.k as usize];
            for (i, &x) in da.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in db.iter().enumerate() {
                    out[i + j] = (out[i + j] + x * y) % self.p;
                }
            }
            out
        };
        self.fe(self.pack(&modp::rem(self.p, &prod, &self.modulus)))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.check(a);
        self.check(b);
        if a.v == 0 || b.v == 0 {
            return self.zero();
        }
        if !self.log.is_empty() {
            let mut e = self.log[a.v as usize] + self.log[b.v as usize];
            let n = (self.q - 1) as u32;
            if e >= n {
                e -= n;
            }
            return self.fe(self.exp[e as usize] as u64);
        }
        self.mul_schoolbook(a, b)
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        self.check(a);
        if a.v == 0 {
            return Err(Error::DivisionByZero);
        }
        if !self.log.is_empty() {
            let n = (self.q - 1) as u32;
            let e = (n - self.log[a.v as usize]) % n;
            return Ok(self.fe(self.exp[e as usize] as u64));
        }
        self.pow(a, self.q as i64 - 2)
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with arbitrary integer exponent; negative exponents require a
    /// nonzero base. `0^0 = 1` by convention.
    pub fn pow(&self, a: Fe, e: i64) -> Result<Fe> {
        self.check(a);
        if a.v == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Greater => Ok(self.zero()),
                std::cmp::Ordering::Equal => Ok(self.one()),
                std::cmp::Ordering::Less => Err(Error::DivisionByZero),
            };
        }
        if !self.log.is_empty() {
            let n = (self.q - 1) as i64;
            let e = (self.log[a.v as usize] as i64 as i128 * e as i128).rem_euclid(n as i128);
            return Ok(self.fe(self.exp[e as usize] as u64));
        }
        let mut base = if e < 0 { self.inv(a)? } else { a };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Square root in characteristic 2: the Frobenius inverse `a^(q/2)`,
    /// unique since squaring is a bijection there.
    pub fn sqrt_char2(&self, a: Fe) -> Result<Fe> {
        if self.p != 2 {
            return Err(Error::OddCharacteristic);
        }
        self.pow(a, (self.q / 2) as i64)
    }

    /// Discrete log of `a` relative to the declared generator; `None` for
    /// zero. Only available on fields with precomputed tables.
    pub fn dlog(&self, a: Fe) -> Option<u64> {
        self.check(a);
        if a.v == 0 || self.log.is_empty() {
            return None;
        }
        Some(self.log[a.v as usize] as u64)
    }

    pub fn gen_pow(&self, e: i64) -> Fe {
        self.pow(self.generator(), e).expect("generator is nonzero")
    }

    /// Sort key placing 0 first, then elements by discrete log.
    pub fn dkey(&self, a: Fe) -> u64 {
        if self.is_zero(a) {
            0
        } else {
            1 + self.dlog(a).expect("dkey requires dlog tables")
        }
    }

    /// Renders an element as a power of the declared generator: `0`, `1`,
    /// `α`, or `α^e`.
    pub fn render(&self, a: Fe) -> String {
        match self.dlog(a) {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(1) => "α".into(),
            Some(e) => format!("α^{e}"),
        }
    }

    /// Parses the α-power notation produced by [`Field::render`]. ASCII `a`
    /// is accepted in place of `α`, and plain integers are lifted into the
    /// prime subfield.
    pub fn parse_el(&self, s: &str) -> Result<Fe> {
        let s = s.trim();
        let bad = || Error::Precondition(format!("cannot parse field element `{s}`"));
        if s == "0" {
            return Ok(self.zero());
        }
        if s == "a" || s == "α" {
            return Ok(self.generator());
        }
        if let Some(rest) = s.strip_prefix("a^").or_else(|| s.strip_prefix("α^")) {
            let e: i64 = rest.parse().map_err(|_| bad())?;
            return Ok(self.gen_pow(e));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(self.from_int(n));
        }
        Err(bad())
    }

    /// All q elements, in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.q).map(|v| self.fe(v))
    }
}
