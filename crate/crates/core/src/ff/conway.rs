//! Conway polynomial tables.
//!
//! File format: one entry per line, `p k c0 c1 ... ck` (coefficients low to high),
//! `#` starts a comment. Every entry is re-verified on load: monic of degree `k`,
//! irreducible, primitive, and compatible with every smaller entry `C(p,d)`, `d | k`,
//! present in the same table.

use std::collections::BTreeMap;
use std::path::Path;

use super::fpoly;
use crate::error::{Error, Result};

/// Environment variable that overrides the bundled table.
pub const TABLE_ENV: &str = "HERMCODES_CONWAY_TABLE";

const BUILTIN: &str = include_str!("../../data/conway.txt");

#[derive(Clone, Debug, Default)]
pub struct ConwayTable {
    entries: BTreeMap<(u32, u32), Vec<u32>>,
}

impl ConwayTable {
    /// The table shipped with the crate.
    pub fn builtin() -> Result<Self> {
        Self::parse(BUILTIN)
    }

    /// `$HERMCODES_CONWAY_TABLE` if set, the bundled table otherwise.
    pub fn from_env_or_builtin() -> Result<Self> {
        match std::env::var_os(TABLE_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Self::builtin(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let nums = body
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
            if nums.len() < 2 {
                return Err(Error::Parse { line: line_no, msg: "expected `p k c0 .. ck`".into() });
            }
            let (p, k) = (nums[0], nums[1]);
            if nums.len() != k as usize + 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("degree {k} needs {} coefficients, found {}", k + 1, nums.len() - 2),
                });
            }
            raw.push((line_no, p, k, nums[2..].to_vec()));
        }
        // verify smaller degrees first so compatibility can be checked against them
        raw.sort_by_key(|&(_, p, k, _)| (p, k));
        let mut table = ConwayTable::default();
        for (_, p, k, coeffs) in raw {
            table.verify(p, k, &coeffs)?;
            table.entries.insert((p, k), coeffs);
        }
        Ok(table)
    }

    fn verify(&self, p: u32, k: u32, coeffs: &[u32]) -> Result<()> {
        let bad = |reason: &str| Error::BadConway { p, k, reason: reason.into() };
        if !fpoly::is_prime(p as u64) {
            return Err(bad("p is not prime"));
        }
        if k == 0 || coeffs.len() != k as usize + 1 || coeffs[k as usize] != 1 {
            return Err(bad("not monic of degree k"));
        }
        if coeffs.iter().any(|&c| c >= p) {
            return Err(bad("coefficient out of range"));
        }
        if !fpoly::is_irreducible(coeffs, p) {
            return Err(bad("reducible"));
        }
        if !fpoly::is_primitive(coeffs, p) {
            return Err(bad("not primitive"));
        }
        for d in (1..k).filter(|d| k % d == 0) {
            if let Some(sub) = self.entries.get(&(p, d)) {
                if !compatible(coeffs, sub, p, k, d) {
                    return Err(bad(&format!("incompatible with C({p},{d})")));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, p: u32, k: u32) -> Option<&[u32]> {
        self.entries.get(&(p, k)).map(Vec::as_slice)
    }

    pub fn insert_verified(&mut self, p: u32, k: u32, coeffs: Vec<u32>) -> Result<()> {
        self.verify(p, k, &coeffs)?;
        self.entries.insert((p, k), coeffs);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &[u32])> {
        self.entries.iter().map(|(&(p, k), c)| (p, k, c.as_slice()))
    }

    /// Serialise in the on-disk format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# p k c0 c1 ... ck   (Conway polynomial C(p,k), low to high)\n");
        for (p, k, c) in self.iter() {
            let cs: Vec<String> = c.iter().map(u32::to_string).collect();
            out.push_str(&format!("{p} {k} {}\n", cs.join(" ")));
        }
        out
    }
}

/// `X^((p^k-1)/(p^d-1))` is a root of `sub` modulo `f`.
fn compatible(f: &[u32], sub: &[u32], p: u32, k: u32, d: u32) -> bool {
    let e = ((p as u128).pow(k) - 1) / ((p as u128).pow(d) - 1);
    let h = fpoly::powmod(&[0, 1], e, f, p);
    fpoly::compose_mod(sub, &h, f, p).is_empty()
}

/// Compute C(p,k) from its definition: the least primitive polynomial, in the
/// ordering of `(a_{k-1}, ..., a_0)` where the polynomial is
/// `X^k + sum_i (-1)^(k-i) a_i X^i`, compatible with every `C(p,d)`, `d | k`, `d < k`.
/// All those smaller entries must already be in `table`.
pub fn search(p: u32, k: u32, table: &ConwayTable) -> Result<Vec<u32>> {
    if k == 1 {
        let n1 = (p - 1) as u64;
        let factors = fpoly::prime_factors(n1);
        let r =
            (1..p).find(|&g| p == 2 || factors.iter().all(|&l| fpoly::pow_mod(g as u64, n1 / l, p as u64) != 1)).expect("primitive root");
        return Ok(vec![(p - r) % p, 1]);
    }
    let divisors: Vec<u32> = (1..k).filter(|d| k % d == 0).collect();
    for &d in &divisors {
        if table.get(p, d).is_none() {
            return Err(Error::MissingConway { p, k: d });
        }
    }
    // compatibility with C(p,1) pins a_0 to the primitive root used there
    let a0 = (p - table.get(p, 1).unwrap()[0]) % p;
    let k = k as usize;
    let total = (p as u64).pow(k as u32 - 1);
    for idx in 0..total {
        // idx enumerates (a_{k-1}, ..., a_1) lexicographically
        let mut a = vec![0u32; k];
        a[0] = a0;
        let mut rest = idx;
        for i in 1..k {
            a[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        let mut coeffs = vec![0u32; k + 1];
        coeffs[k] = 1;
        for i in 0..k {
            let ai = a[i];
            coeffs[i] = if (k - i) % 2 == 0 { ai } else { (p - ai) % p };
        }
        if !divisors.iter().all(|&d| compatible(&coeffs, table.get(p, d).unwrap(), p, k as u32, d)) {
            continue;
        }
        if fpoly::is_irreducible(&coeffs, p) && fpoly::is_primitive(&coeffs, p) {
            return Ok(coeffs);
        }
    }
    Err(Error::consistency(format!("no Conway polynomial found for p={p}, k={k}")))
}
