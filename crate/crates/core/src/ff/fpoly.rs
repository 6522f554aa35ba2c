//! Dense univariate polynomials over a prime field GF(p), coefficients low to high.
//!
//! Only what modulus verification and the Conway search need.

pub(crate) fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = degree(m).expect("division by zero polynomial");
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(m[dm], p) as u64;
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = (r[dr] as u64 * lead_inv % p as u64) as u32;
        let shift = dr - dm;
        for (i, &mc) in m[..=dm].iter().enumerate() {
            let sub = (c as u64 * mc as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u64 * y as u64;
        }
        // keep the accumulators bounded for large p
        if i % 64 == 63 {
            out.iter_mut().for_each(|c| *c %= p as u64);
        }
    }
    trim(out.into_iter().map(|c| (c % p as u64) as u32).collect())
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// `base^e mod m`.
pub(crate) fn powmod(base: &[u32], mut e: u128, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Evaluate `g` at the residue class `h` modulo `m` (Horner).
pub(crate) fn compose_mod(g: &[u32], h: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut acc: Vec<u32> = Vec::new();
    for &c in g.iter().rev() {
        acc = mulmod(&acc, h, m, p);
        if acc.is_empty() {
            acc.push(0);
        }
        acc[0] = (acc[0] + c) % p;
        acc = trim(acc);
    }
    acc
}

/// Rabin's test: `f | X^(p^k) - X` and `gcd(f, X^(p^(k/l)) - X) = 1` for every prime `l | k`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(k) = degree(f) else { return false };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = [0u32, 1];
    let frob = |times: usize| -> Vec<u32> {
        let mut r = x.to_vec();
        for _ in 0..times {
            r = powmod(&r, p as u128, f, p);
        }
        r
    };
    if !sub(&frob(k), &x, p).is_empty() {
        return false;
    }
    for l in prime_factors(k as u64) {
        let d = k / l as usize;
        let g = gcd(f, &sub(&frob(d), &x, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// For irreducible `f` of degree `k`: is X of full order `p^k - 1` modulo `f`?
pub(crate) fn is_primitive(f: &[u32], p: u32) -> bool {
    let k = degree(f).unwrap_or(0) as u32;
    let n = (p as u128).pow(k) - 1;
    let x = [0u32, 1];
    prime_factors(n as u64).into_iter().all(|l| powmod(&x, n / l as u128, f, p) != vec![1])
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rabin_small_cases() {
        // X^2 + 1 is irreducible mod 3 but not mod 5
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // X^4 + X + 1 over GF(2)
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        // X^4 + X^2 + 1 = (X^2 + X + 1)^2
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn primitivity() {
        // X^4 + X^3 + X^2 + X + 1 is irreducible over GF(2) but X has order 5
        assert!(is_irreducible(&[1, 1, 1, 1, 1], 2));
        assert!(!is_primitive(&[1, 1, 1, 1, 1], 2));
        assert!(is_primitive(&[1, 1, 0, 0, 1], 2));
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_factors(7u64.pow(6) - 1), vec![2, 3, 19, 43]);
        assert_eq!(prime_factors(48), vec![2, 3]);
        assert!(is_prime(1201));
        assert!(!is_prime(49));
    }
}
