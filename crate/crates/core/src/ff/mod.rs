//! Finite fields GF(p^k) in polynomial-basis representation.
//!
//! An element is the packed integer `sum c_i p^i` of its coefficient vector with
//! respect to the basis `1, X, ..., X^(k-1)` of `GF(p)[X]/(modulus)`. Every element
//! carries the id of the context that created it and all binary operations check it.
//! Fields small enough get exp/log/Zech tables built at construction; the
//! representation is the same either way.

pub mod conway;
pub(crate) mod fpoly;
mod tower;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

pub use conway::ConwayTable;
pub use fpoly::{is_prime, prime_factors};
pub use tower::TowerEmbedding;

static NEXT_CTX_ID: AtomicU32 = AtomicU32::new(1);

/// Fields up to this many elements get log tables.
const TABLE_LIMIT: u64 = 1 << 21;
const NO_LOG: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElem {
    ctx: u32,
    v: u32,
}

impl FieldElem {
    pub fn ctx_id(self) -> u32 {
        self.ctx
    }

    /// Packed coefficient vector.
    pub fn raw(self) -> u32 {
        self.v
    }

    pub fn is_zero(self) -> bool {
        self.v == 0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

pub struct FieldCtx {
    id: u32,
    p: u32,
    k: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: u32,
    conway: bool,
    pw: Vec<u32>,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("id", &self.id)
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("conway", &self.conway)
            .finish()
    }
}

impl FieldCtx {
    /// GF(p) with the smallest primitive root as generator.
    pub fn prime(p: u32) -> Result<Arc<FieldCtx>> {
        if p > 1 << 16 || !is_prime(p as u64) {
            return Err(Error::pre(format!("{p} is not a prime <= 2^16")));
        }
        let r = smallest_primitive_root(p);
        Self::build(p, vec![(p - r) % p, 1], false)
    }

    /// GF(p^k) = GF(p)[X]/(modulus). `modulus` is low-to-high and must be monic irreducible.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Arc<FieldCtx>> {
        Self::build(p, modulus, false)
    }

    /// GF(p^k) defined by the Conway polynomial C(p,k); the generator is the class of X.
    pub fn conway(p: u32, k: u32, table: &ConwayTable) -> Result<Arc<FieldCtx>> {
        let modulus = table.get(p, k).ok_or(Error::MissingConway { p, k })?.to_vec();
        Self::build(p, modulus, true)
    }

    fn build(p: u32, modulus: Vec<u32>, conway: bool) -> Result<Arc<FieldCtx>> {
        if !is_prime(p as u64) || p > 1 << 16 {
            return Err(Error::pre(format!("{p} is not a prime <= 2^16")));
        }
        let modulus = fpoly::trim(modulus);
        let k = match fpoly::degree(&modulus) {
            Some(d) if d >= 1 => d as u32,
            _ => return Err(Error::pre("modulus must have degree >= 1")),
        };
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::pre("modulus coefficients must lie in 0..p"));
        }
        if modulus[k as usize] != 1 {
            return Err(Error::pre("modulus must be monic"));
        }
        let order = (p as u64)
            .checked_pow(k)
            .filter(|&n| n < 1 << 31)
            .ok_or_else(|| Error::pre(format!("GF({p}^{k}) is too large for the packed representation")))?;
        if !fpoly::is_irreducible(&modulus, p) {
            return Err(Error::pre(format!("modulus {modulus:?} is reducible over GF({p})")));
        }
        let pw = (0..=k).map(|i| p.pow(i)).collect();
        let mut ctx = FieldCtx {
            id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
            p,
            k,
            order: order as u32,
            modulus,
            generator: 0,
            conway,
            pw,
            tables: None,
        };
        let x = ctx.pack(&fpoly::rem(&[0, 1], &ctx.modulus, p));
        ctx.generator = if ctx.raw_is_primitive(x) {
            x
        } else if conway {
            return Err(Error::BadConway { p, k, reason: "X is not primitive".into() });
        } else {
            (2..ctx.order).find(|&v| ctx.raw_is_primitive(v)).unwrap_or(1)
        };
        if order <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(Arc::new(ctx))
    }

    fn build_tables(&self) -> Tables {
        let n1 = (self.order - 1) as usize;
        let mut exp = vec![0u32; 2 * n1.max(1)];
        let mut log = vec![NO_LOG; self.order as usize];
        let mut cur = 1u32;
        for i in 0..n1 {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            cur = self.mul_slow(cur, self.generator);
        }
        for i in n1..2 * n1 {
            exp[i] = exp[i - n1];
        }
        let zech = (0..n1)
            .map(|d| {
                let s = self.plus_one(exp[d]);
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();
        Tables { exp, log, zech }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_conway(&self) -> bool {
        self.conway
    }

    // ---------------------------------------------------------------------
    // construction of elements

    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(1)
    }

    pub fn generator(&self) -> FieldElem {
        self.wrap(self.generator)
    }

    /// Element from its packed coefficient vector.
    pub fn elem(&self, raw: u32) -> FieldElem {
        assert!(raw < self.order, "packed value {raw} out of range for GF({})", self.order);
        self.wrap(raw)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElem {
        let reduced = fpoly::rem(&coeffs.iter().map(|&c| c % self.p).collect::<Vec<_>>(), &self.modulus, self.p);
        self.wrap(self.pack(&reduced))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        self.wrap(n.rem_euclid(self.p as i64) as u32)
    }

    /// `generator^e`, negative exponents allowed.
    pub fn gen_pow(&self, e: i64) -> FieldElem {
        let n1 = (self.order - 1) as i64;
        self.pow(self.generator(), e.rem_euclid(n1) as u64)
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let v = self.own(a);
        (0..self.k).map(|i| (v / self.pw[i as usize]) % self.p).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(move |v| self.wrap(v))
    }

    #[inline]
    pub(crate) fn wrap(&self, v: u32) -> FieldElem {
        FieldElem { ctx: self.id, v }
    }

    #[inline]
    pub(crate) fn own(&self, a: FieldElem) -> u32 {
        if a.ctx != self.id {
            panic!("{}", Error::FieldMismatch { left: a.ctx, right: self.id });
        }
        a.v
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a.ctx == self.id
    }

    fn pack(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn unpack(&self, v: u32, out: &mut [u32]) {
        let mut v = v;
        for c in out.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
    }

    fn plus_one(&self, v: u32) -> u32 {
        let c0 = v % self.p;
        v - c0 + (c0 + 1) % self.p
    }

    // ---------------------------------------------------------------------
    // arithmetic

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (x, y) = (self.own(a), self.own(b));
        self.wrap(self.add_raw(x, y))
    }

    #[inline]
    pub(crate) fn add_raw(&self, x: u32, y: u32) -> u32 {
        if self.p == 2 {
            return x ^ y;
        }
        if x == 0 {
            return y;
        }
        if y == 0 {
            return x;
        }
        if let Some(t) = &self.tables {
            let n1 = self.order - 1;
            let (lx, ly) = (t.log[x as usize], t.log[y as usize]);
            let d = if ly >= lx { ly - lx } else { ly + n1 - lx };
            let z = t.zech[d as usize];
            if z == NO_LOG {
                0
            } else {
                t.exp[(lx + z) as usize]
            }
        } else {
            let mut out = 0u32;
            let (mut x, mut y) = (x, y);
            for i in 0..self.k as usize {
                out += ((x % self.p + y % self.p) % self.p) * self.pw[i];
                x /= self.p;
                y /= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let x = self.own(a);
        self.wrap(self.neg_raw(x))
    }

    #[inline]
    pub(crate) fn neg_raw(&self, x: u32) -> u32 {
        if self.p == 2 || x == 0 {
            return x;
        }
        if let Some(t) = &self.tables {
            let half = (self.order - 1) / 2;
            return t.exp[(t.log[x as usize] + half) as usize];
        }
        let mut out = 0u32;
        let mut x = x;
        for i in 0..self.k as usize {
            out += ((self.p - x % self.p) % self.p) * self.pw[i];
            x /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (x, y) = (self.own(a), self.own(b));
        self.wrap(self.add_raw(x, self.neg_raw(y)))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (x, y) = (self.own(a), self.own(b));
        self.wrap(self.mul_raw(x, y))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[x as usize] + t.log[y as usize]) as usize],
            None => self.mul_slow(x, y),
        }
    }

    fn mul_slow(&self, x: u32, y: u32) -> u32 {
        let k = self.k as usize;
        let p = self.p as u64;
        let mut a = [0u32; 32];
        let mut b = [0u32; 32];
        self.unpack(x, &mut a[..k]);
        self.unpack(y, &mut b[..k]);
        let mut prod = [0u64; 64];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] += a[i] as u64 * b[j] as u64;
            }
        }
        for c in prod.iter_mut().take(2 * k) {
            *c %= p;
        }
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                prod[d - k + i] = (prod[d - k + i] + (p - m as u64) * c) % p;
            }
            prod[d] = 0;
        }
        let mut out = 0u32;
        for i in (0..k).rev() {
            out = out * self.p + prod[i] as u32;
        }
        out
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        let x = self.own(a);
        if e == 0 {
            return self.one();
        }
        if x == 0 {
            return self.zero();
        }
        let n1 = (self.order - 1) as u64;
        if let Some(t) = &self.tables {
            let l = t.log[x as usize] as u64 * (e % n1) % n1;
            return self.wrap(t.exp[l as usize]);
        }
        let mut e = e % n1;
        let (mut base, mut acc) = (x, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        self.wrap(acc)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        let x = self.own(a);
        if x == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => {
                let n1 = self.order - 1;
                let l = t.log[x as usize];
                Some(self.wrap(t.exp[((n1 - l) % n1) as usize]))
            }
            None => Some(self.pow(a, (self.order - 2) as u64)),
        }
    }

    pub(crate) fn inv_raw(&self, x: u32) -> u32 {
        self.own(self.inv(self.wrap(x)).expect("inverse of zero"))
    }

    /// `dst[i] += c * src[i]` on packed values; the hot loop of elimination.
    pub(crate) fn axpy_raw(&self, dst: &mut [u32], c: u32, src: &[u32]) {
        if c == 0 {
            return;
        }
        match &self.tables {
            Some(t) => {
                let lc = t.log[c as usize];
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d = self.add_raw(*d, t.exp[(lc + t.log[s as usize]) as usize]);
                    }
                }
            }
            None => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d = self.add_raw(*d, self.mul_slow(c, s));
                    }
                }
            }
        }
    }

    /// `a / b`; panics on division by zero.
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b).expect("division by zero in finite field"))
    }

    /// `a^(p^j)`.
    pub fn frobenius(&self, a: FieldElem, j: u32) -> FieldElem {
        let n1 = (self.order - 1) as u64;
        let e = fpoly::pow_mod(self.p as u64, j as u64, n1);
        if self.own(a) == 0 {
            return a;
        }
        self.pow(a, if e == 0 { n1 } else { e })
    }

    /// Discrete logarithm to the designated generator.
    pub fn log(&self, a: FieldElem) -> Option<u64> {
        let x = self.own(a);
        if x == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            return Some(t.log[x as usize] as u64);
        }
        // baby-step giant-step
        let n1 = (self.order - 1) as u64;
        let m = (n1 as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(m as usize);
        let mut cur = 1u32;
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = self.mul_slow(cur, self.generator);
        }
        let giant = self.own(self.inv(self.pow(self.generator(), m)).unwrap());
        let mut gamma = x;
        for i in 0..=m {
            if let Some(&j) = baby.get(&gamma) {
                return Some((i * m + j) % n1);
            }
            gamma = self.mul_slow(gamma, giant);
        }
        None
    }

    pub fn multiplicative_order(&self, a: FieldElem) -> Option<u64> {
        if self.own(a) == 0 {
            return None;
        }
        let mut ord = (self.order - 1) as u64;
        for l in prime_factors(ord) {
            while ord % l == 0 && self.pow(a, ord / l) == self.one() {
                ord /= l;
            }
        }
        Some(ord)
    }

    fn raw_is_primitive(&self, x: u32) -> bool {
        if x == 0 {
            return false;
        }
        let n1 = (self.order - 1) as u64;
        let one = 1u32;
        let pow = |e: u64| {
            let (mut base, mut acc, mut e) = (x, 1u32, e);
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul_slow(acc, base);
                }
                base = self.mul_slow(base, base);
                e >>= 1;
            }
            acc
        };
        pow(n1) == one && prime_factors(n1).into_iter().all(|l| pow(n1 / l) != one)
    }

    /// Evaluate a polynomial with prime-field coefficients (low to high) at `a`.
    pub fn eval_prime_poly(&self, coeffs: &[u32], a: FieldElem) -> FieldElem {
        coeffs.iter().rev().fold(self.zero(), |acc, &c| self.add(self.mul(acc, a), self.from_int(c as i64)))
    }

    /// `sum c_i * a^i` for coefficients already in this field.
    pub fn horner(&self, coeffs: &[FieldElem], a: FieldElem) -> FieldElem {
        coeffs.iter().rev().fold(self.zero(), |acc, &c| self.add(self.mul(acc, a), c))
    }

    /// Human-readable form: `0` or `g^e` when a discrete log is cheap, coefficients otherwise.
    pub fn fmt_elem(&self, a: FieldElem) -> String {
        if a.is_zero() {
            return "0".into();
        }
        match self.log(a) {
            Some(e) => format!("g^{e}"),
            None => format!("{:?}", self.coeffs(a)),
        }
    }

    /// Generator-power encoding with -1 for zero.
    pub fn power_code(&self, a: FieldElem) -> i64 {
        self.log(a).map(|e| e as i64).unwrap_or(-1)
    }
}

fn smallest_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let n1 = (p - 1) as u64;
    let factors = prime_factors(n1);
    (2..p).find(|&g| factors.iter().all(|&l| fpoly::pow_mod(g as u64, n1 / l, p as u64) != 1)).expect("primitive roots exist")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn brute_smallest_primitive_root(p: u32) -> u32 {
        (1..p)
            .find(|&g| {
                let mut seen = std::collections::HashSet::new();
                let mut x = 1u64;
                for _ in 0..p - 1 {
                    seen.insert(x);
                    x = x * g as u64 % p as u64;
                }
                seen.len() == (p - 1) as usize
            })
            .unwrap()
    }

    #[test]
    fn prime_field_generators() {
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(f7.order(), 7);
        assert_eq!(f7.generator().raw(), brute_smallest_primitive_root(7));
        assert_eq!(f7.generator().raw(), 3);
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(f2.generator().raw(), 1);
        for p in [3, 5, 11, 13, 17, 101] {
            assert_eq!(FieldCtx::prime(p).unwrap().generator().raw(), brute_smallest_primitive_root(p));
        }
    }

    #[test]
    fn non_prime_rejected() {
        assert!(matches!(FieldCtx::prime(49), Err(Error::Precondition(_))));
        assert!(FieldCtx::prime(1).is_err());
    }

    #[test]
    fn reducible_modulus_rejected() {
        // X^2 + 1 = (X+2)(X+3) over GF(5)
        assert!(FieldCtx::with_modulus(5, vec![1, 0, 1]).is_err());
        assert!(FieldCtx::with_modulus(3, vec![1, 0, 1]).is_ok());
    }

    #[test]
    #[should_panic(expected = "different field contexts")]
    fn mixed_contexts_panic() {
        let a = FieldCtx::prime(7).unwrap();
        let b = FieldCtx::prime(7).unwrap();
        let _ = a.add(a.one(), b.one());
    }

    fn check_axioms(f: &FieldCtx, samples: usize, seed: u64) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let n = f.order();
        for _ in 0..samples {
            let a = f.elem(rng.gen_range(0..n));
            let b = f.elem(rng.gen_range(0..n));
            let c = f.elem(rng.gen_range(0..n));
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            // table and schoolbook multiplication agree
            assert_eq!(f.mul(a, b).raw(), f.mul_slow(a.raw(), b.raw()));
        }
    }

    #[test]
    fn field_axioms_with_and_without_tables() {
        let f49 = FieldCtx::with_modulus(7, vec![3, 6, 1]).unwrap();
        check_axioms(&f49, 2000, 1);
        let f81 = FieldCtx::with_modulus(3, vec![2, 0, 0, 1, 1]).unwrap();
        check_axioms(&f81, 2000, 2);
        // GF(13^6) is above the table limit: digit arithmetic path
        let big = FieldCtx::with_modulus(13, vec![2, 11, 11, 10, 0, 0, 1]);
        if let Ok(big) = big {
            assert!(big.tables.is_none());
            check_axioms(&big, 1000, 3);
        }
    }

    #[test]
    fn frobenius_and_logs() {
        let f = FieldCtx::with_modulus(2, vec![1, 1, 0, 0, 1]).unwrap();
        for a in f.elements() {
            assert_eq!(f.frobenius(a, 4), a);
            assert_eq!(f.frobenius(a, 1), f.mul(a, a));
            if !a.is_zero() {
                assert_eq!(f.gen_pow(f.log(a).unwrap() as i64), a);
            }
        }
    }
}
