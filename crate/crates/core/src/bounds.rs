//! Distance bounds for `C_Omega(D, 3m P)`: designed distance, Matthews-Michel, the
//! combined three-case bound, the witness weight `d*`, the one-point comparison value
//! and the Xing-Chen evaluator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::prime_power;
use crate::error::{Error, Result};
use crate::gaps::gap_set_formula;
use crate::rrspace::{in_code_range, split_m};

/// q values with a reference improvement row.
pub const TABLE_QS: [u32; 7] = [5, 7, 8, 9, 11, 13, 16];

/// Reference improvements over δ for the Xing-Chen codes, keyed by `(q, m)`. The `t` used
/// for each comparison is not stated alongside them.
pub const XC_REFERENCE_IMPROVEMENT: [((u32, u32), i64); 4] = [((5, 7), 2), ((5, 8), 2), ((7, 19), 1), ((7, 18), 4)];

fn check_q(q: u32) -> Result<()> {
    if prime_power(q).is_none() {
        return Err(Error::pre(format!("q = {q} is not a prime power")));
    }
    Ok(())
}

pub fn genus(q: u32) -> i64 {
    let q = q as i64;
    q * (q - 1) / 2
}

/// `3m - q^2 + q + 2`, i.e. `deg G - (2g - 2)` for `G = 3m P`.
pub fn delta(q: u32, m: u32) -> i64 {
    let q = q as i64;
    3 * m as i64 - q * q + q + 2
}

/// `n - k + 1` for the code at `(q, m)`.
pub fn singleton(q: u32, m: u32) -> i64 {
    3 * m as i64 - genus(q) + 2
}

/// Smallest and largest m with `q^2 - q - 2 <= 3m <= 2q^2 - q - 2`.
pub fn code_m_range(q: u32) -> (u32, u32) {
    let q = q as i64;
    let lo = (q * q - q - 2).max(0);
    let hi = 2 * q * q - q - 2;
    (((lo + 2) / 3) as u32, (hi / 3) as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Designed {
    pub n: i64,
    pub k: i64,
    pub delta: i64,
}

pub fn designed(q: u32, m: u32) -> Result<Designed> {
    check_q(q)?;
    if !in_code_range(q, m) {
        let (lo, hi) = code_m_range(q);
        return Err(Error::pre(format!("m = {m} outside {lo}..={hi} for q = {q}")));
    }
    let qi = q as i64;
    Ok(Designed { n: qi * qi * qi, k: qi * qi * qi + (qi * qi - qi - 2) / 2 - 3 * m as i64, delta: delta(q, m) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatthewsMichel {
    pub u: u32,
    pub m: u32,
    pub m0: u32,
    pub bound: i64,
    pub improvement: i64,
    /// `(q-2)(6u-q-1)`
    pub closed_form: i64,
    /// m lies in the range where the code construction applies
    pub applicable: bool,
}

pub fn matthews_michel(q: u32, u: u32) -> Result<MatthewsMichel> {
    check_q(q)?;
    if !(q + 1 <= 6 * u && 6 * u <= 2 * (q + 1)) {
        return Err(Error::pre(format!("u = {u} needs q+1 <= 6u <= 2(q+1) for q = {q}")));
    }
    let m = (2 * u - 1) * q - u - 1;
    let (_, m0) = split_m(q, m);
    let bound = delta(q, m) + 3 * m0 as i64;
    let closed_form = (q as i64 - 2) * (6 * u as i64 - q as i64 - 1);
    if bound != closed_form {
        return Err(Error::consistency(format!("MM bound {bound} differs from closed form {closed_form}")));
    }
    Ok(MatthewsMichel { u, m, m0, bound, improvement: 3 * m0 as i64, closed_form, applicable: in_code_range(q, m) })
}

/// The u with `m = (2u-1)q - u - 1` in the admissible range, if any.
pub fn mm_u_for_m(q: u32, m: u32) -> Option<u32> {
    let s = m + q + 1;
    let d = 2 * q - 1;
    (s % d == 0).then_some(s / d).filter(|&u| q + 1 <= 6 * u && 6 * u <= 2 * (q + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MmGeneric {
    pub k: u32,
    pub t: u32,
    pub g_degree: u32,
    /// `deg G - (2g-2) + 3(t+1)`
    pub consistent: i64,
    /// `2g - 2 + 3(t+1)`, taken literally
    pub literal: i64,
    pub singleton: i64,
    pub literal_exceeds_singleton: bool,
    pub applicable: bool,
}

/// Matthews-Michel bound from the gap run `k..=k+t` at the degree-3 place with
/// `G = g_degree P`, `g_degree = 3(2k + t - 1)`.
pub fn mm_generic(q: u32, k: u32, t: u32, g_degree: u32) -> Result<MmGeneric> {
    check_q(q)?;
    let gs = gap_set_formula(q);
    if k == 0 || !(k..=k + t).all(|x| gs.gaps.binary_search(&x).is_ok()) {
        return Err(Error::pre(format!("{k}..={} is not a run of gaps for q = {q}", k + t)));
    }
    let m = 2 * k + t - 1;
    if g_degree != 3 * m {
        return Err(Error::pre(format!("deg G = {g_degree} but the run gives 3(2k+t-1) = {}", 3 * m)));
    }
    let g = genus(q);
    let r_term = 3 * (t as i64 + 1);
    let singleton = g_degree as i64 - g + 2;
    let literal = 2 * g - 2 + r_term;
    Ok(MmGeneric {
        k,
        t,
        g_degree,
        consistent: g_degree as i64 - (2 * g - 2) + r_term,
        literal,
        singleton,
        literal_exceeds_singleton: literal > singleton,
        applicable: in_code_range(q, m),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainBound {
    pub k_param: i64,
    pub c1: i64,
    pub c2: i64,
    /// `δ + 3K`, plus one when `m0 >= 3`
    pub c3: i64,
    pub guaranteed: i64,
}

/// Violated hypotheses of the three-case theorem, empty when it applies.
pub fn main_theorem_violations(q: u32, m: u32) -> Vec<String> {
    let mut out = Vec::new();
    if !in_code_range(q, m) {
        out.push(format!("3m = {} outside [q^2-q-2, 2q^2-q-2]", 3 * m));
    }
    if m % (q + 1) == 0 {
        out.push(format!("q+1 = {} divides m", q + 1));
    }
    let k = k_param(q, m);
    if k < 0 {
        out.push(format!("K = {k} < 0"));
    }
    out
}

/// `K = 2q - 3m1 - m0 - 4`.
pub fn k_param(q: u32, m: u32) -> i64 {
    let (m1, m0) = split_m(q, m);
    2 * q as i64 - 3 * m1 as i64 - m0 as i64 - 4
}

pub fn main_theorem(q: u32, m: u32) -> Result<MainBound> {
    check_q(q)?;
    let v = main_theorem_violations(q, m);
    if !v.is_empty() {
        return Err(Error::pre(v.join("; ")));
    }
    let (_, m0) = split_m(q, m);
    let (d, m0, k) = (delta(q, m), m0 as i64, k_param(q, m));
    let c1 = d + 3 * (q as i64 + 1 - m0);
    let c2 = d + (m0 + 1) * (m0 + 2) / 2;
    let c3 = d + 3 * k + i64::from(m0 >= 3);
    Ok(MainBound { k_param: k, c1, c2, c3, guaranteed: c1.min(c2).min(c3) })
}

/// Weight of the explicit codeword: `3 m1 (q+1) - q^2 + 4q + 5`.
pub fn dstar(q: u32, m: u32) -> Result<i64> {
    designed(q, m)?;
    let (m1, m0) = split_m(q, m);
    let qi = q as i64;
    let kk = qi * qi - 3 * m1 as i64 - 5;
    if kk < 0 || kk > qi * qi - qi {
        return Err(Error::pre(format!("witness needs 0 <= q^2-3m1-5 <= q^2-q, got {kk}")));
    }
    let closed = 3 * m1 as i64 * (qi + 1) - qi * qi + 4 * qi + 5;
    let via_delta = delta(q, m) + 3 * (qi + 1 - m0 as i64);
    if closed != via_delta {
        return Err(Error::consistency(format!("d* forms disagree: {closed} vs {via_delta}")));
    }
    Ok(closed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnePointTrue {
    pub a: i64,
    pub b: i64,
    pub d_true: i64,
}

/// True distance of the one-point code with the same parameters, via
/// `3m = 2q^2 - (a+1)q - b - 2`, `0 <= a, b <= q-1`.
pub fn one_point_true(q: u32, m: u32) -> Result<OnePointTrue> {
    check_q(q)?;
    let qi = q as i64;
    let r = 2 * qi * qi - qi - 2 - 3 * m as i64;
    if r < 0 || r > qi * qi - 1 {
        return Err(Error::pre(format!("no (a, b) in range for q = {q}, m = {m}")));
    }
    let (a, b) = r.div_rem(&qi);
    let d = delta(q, m);
    Ok(OnePointTrue { a, b, d_true: if a < b { d } else { d + b } })
}

/// `ln(x)` scaled by `10^digits`, truncated, error below `digits`-independent small
/// multiple of one unit.
fn ln_fixed(x: u32, digits: u32) -> BigInt {
    let scale = BigInt::from(10u32).pow(digits);
    // ln x = 2 atanh((x-1)/(x+1))
    let num = BigInt::from(x - 1);
    let den = BigInt::from(x + 1);
    let num2 = &num * &num;
    let den2 = &den * &den;
    let mut pn = num.clone();
    let mut pd = den.clone();
    let mut sum = BigInt::zero();
    let mut i = 0u32;
    loop {
        let term = (&scale * &pn) / (&pd * BigInt::from(2 * i + 1));
        if term.is_zero() {
            break;
        }
        sum += term;
        pn *= &num2;
        pd *= &den2;
        i += 1;
    }
    sum * 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XingChen {
    pub q: u32,
    pub t: i64,
    pub n: i64,
    pub k: i64,
    pub d_bound: i64,
    /// the unrounded quotient to 30 decimals
    pub quotient: String,
}

/// `[q^3, t+1-g, >= (2q^3+q^2-q-1-2t) / (4 + log_q e)]`, floored; 0 when the
/// numerator is not positive.
pub fn xing_chen(q: u32, t: i64) -> Result<XingChen> {
    check_q(q)?;
    if t < 0 {
        return Err(Error::pre("t must be non-negative"));
    }
    let qi = q as i64;
    let numer = 2 * qi * qi * qi + qi * qi - qi - 1 - 2 * t;
    let (n, k) = (qi * qi * qi, t + 1 - genus(q));
    if numer <= 0 {
        return Ok(XingChen { q, t, n, k, d_bound: 0, quotient: "0".into() });
    }
    let numer = BigInt::from(numer);
    // value = N ln q / (4 ln q + 1); each bracket ends with the floor pinned down
    let mut digits = 60u32;
    loop {
        let s = BigInt::from(10u32).pow(digits);
        let l = ln_fixed(q, digits);
        let slack = BigInt::from(4 * digits + 16);
        let f = |l: &BigInt| (&numer * l).div_floor(&(l * 4 + &s));
        let (lo, hi) = (f(&(&l - &slack)), f(&(&l + &slack)));
        if lo == hi {
            let shown = (&numer * &l * BigInt::from(10u32).pow(30)).div_floor(&(&l * 4 + &s));
            let (ip, fp) = shown.div_rem(&BigInt::from(10u32).pow(30));
            let d_bound = i64::try_from(lo).map_err(|_| Error::consistency("quotient overflow"))?;
            return Ok(XingChen { q, t, n, k, d_bound, quotient: format!("{ip}.{:0>30}", fp.abs()) });
        }
        digits *= 2;
        if digits > 4000 {
            return Err(Error::consistency("Xing-Chen floor not resolved"));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundTag {
    Designed,
    Mm,
    MainI,
    MainIi,
    MainIii,
    DstarUpper,
    Singleton,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
    /// one of the three case values; the minimum over them is the lower bound
    Case,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedBound {
    pub tag: BoundTag,
    pub kind: BoundKind,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XcComparison {
    /// dimension-matched: `t = k + g - 1`
    pub eval: XingChen,
    pub improvement: i64,
    pub reference_improvement: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub main_improves_designed: Option<i64>,
    pub main_beats_one_point: Option<bool>,
    pub main_vs_xing_chen: Option<i64>,
    pub mm_within_main: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u32,
    pub m: u32,
    pub m1: u32,
    pub m0: u32,
    pub g: i64,
    pub n: i64,
    pub k: i64,
    pub delta: i64,
    pub singleton: i64,
    /// "main" for `m0 > 0`, "one-point" when `(q+1) | m`
    pub route: String,
    pub mm: Option<MatthewsMichel>,
    pub main: Option<MainBound>,
    pub main_inapplicable: Vec<String>,
    pub dstar: Option<i64>,
    pub one_point_true: Option<OnePointTrue>,
    pub xing_chen: Option<XcComparison>,
    pub bounds: Vec<TaggedBound>,
    pub verdicts: Verdicts,
}

impl BoundReport {
    /// Best lower bound on d among the applicable ones.
    pub fn best_lower(&self) -> i64 {
        let mut b = self.delta;
        if let Some(mm) = &self.mm {
            b = b.max(mm.bound);
        }
        if let Some(mb) = &self.main {
            b = b.max(mb.guaranteed);
        }
        b
    }

    /// Smallest known upper bound on d.
    pub fn best_upper(&self) -> i64 {
        self.dstar.map_or(self.singleton, |d| d.min(self.singleton))
    }
}

pub fn report(q: u32, m: u32) -> Result<BoundReport> {
    let des = designed(q, m)?;
    let (m1, m0) = split_m(q, m);
    let g = genus(q);
    let mm = match mm_u_for_m(q, m) {
        Some(u) => Some(matthews_michel(q, u)?),
        None => None,
    };
    let main_inapplicable = main_theorem_violations(q, m);
    let main = if main_inapplicable.is_empty() { Some(main_theorem(q, m)?) } else { None };
    let dstar = dstar(q, m).ok();
    let one_point_true = one_point_true(q, m).ok();
    let t = des.k + g - 1;
    let xing_chen = if t >= 0 {
        let eval = xing_chen(q, t)?;
        let improvement = eval.d_bound - des.delta;
        let reference_improvement = XC_REFERENCE_IMPROVEMENT.iter().find(|(k, _)| *k == (q, m)).map(|&(_, v)| v);
        Some(XcComparison { eval, improvement, reference_improvement })
    } else {
        None
    };

    let sing = singleton(q, m);
    let mut bounds = vec![TaggedBound { tag: BoundTag::Designed, kind: BoundKind::Lower, value: des.delta }];
    if let Some(mm) = &mm {
        bounds.push(TaggedBound { tag: BoundTag::Mm, kind: BoundKind::Lower, value: mm.bound });
    }
    if let Some(mb) = &main {
        for (tag, value) in [(BoundTag::MainI, mb.c1), (BoundTag::MainIi, mb.c2), (BoundTag::MainIii, mb.c3)] {
            bounds.push(TaggedBound { tag, kind: BoundKind::Case, value });
        }
    }
    if let Some(d) = dstar {
        bounds.push(TaggedBound { tag: BoundTag::DstarUpper, kind: BoundKind::Upper, value: d });
    }
    bounds.push(TaggedBound { tag: BoundTag::Singleton, kind: BoundKind::Upper, value: sing });

    let verdicts = Verdicts {
        main_improves_designed: main.map(|mb| mb.guaranteed - des.delta),
        main_beats_one_point: main.zip(one_point_true).map(|(mb, op)| mb.guaranteed > op.d_true),
        main_vs_xing_chen: main.zip(xing_chen.as_ref()).map(|(mb, xc)| mb.guaranteed - xc.eval.d_bound),
        mm_within_main: mm.zip(main).map(|(mm, mb)| mm.bound <= mb.guaranteed),
    };
    let rep = BoundReport {
        q,
        m,
        m1,
        m0,
        g,
        n: des.n,
        k: des.k,
        delta: des.delta,
        singleton: sing,
        route: if m0 == 0 { "one-point" } else { "main" }.into(),
        mm,
        main,
        main_inapplicable,
        dstar,
        one_point_true,
        xing_chen,
        bounds,
        verdicts,
    };
    if rep.best_lower() > rep.best_upper() {
        return Err(Error::consistency(format!(
            "lower bound {} exceeds upper bound {} at q = {q}, m = {m}",
            rep.best_lower(),
            rep.best_upper()
        )));
    }
    Ok(rep)
}

/// m in the code range with `(q+1) ∤ m`, the combined bound applicable, and the combined
/// bound beating the one-point true distance.
pub fn improvement_table(q: u32) -> Result<Vec<u32>> {
    check_q(q)?;
    let (lo, hi) = code_m_range(q);
    let mut out: Vec<u32> = (lo..=hi)
        .into_par_iter()
        .filter(|&m| {
            m % (q + 1) != 0
                && main_theorem_violations(q, m).is_empty()
                && match (main_theorem(q, m), one_point_true(q, m)) {
                    (Ok(mb), Ok(op)) => mb.guaranteed > op.d_true,
                    _ => false,
                }
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// One CSV line per q: `q,cond,values`, the values comma-separated inside quotes.
pub fn table_csv(qs: &[u32]) -> Result<String> {
    let mut s = String::from("q,cond_on_m,values\n");
    for &q in qs {
        let (lo, hi) = code_m_range(q);
        let ms = improvement_table(q)?;
        let vals = ms.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ");
        s.push_str(&format!("{q},{lo} <= m <= {hi},\"{vals}\"\n"));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn designed_examples() {
        assert_eq!(designed(7, 18).unwrap(), Designed { n: 343, k: 309, delta: 14 });
        assert_eq!(designed(5, 7).unwrap(), Designed { n: 125, k: 113, delta: 3 });
        assert_eq!(designed(2, 1).unwrap(), Designed { n: 8, k: 5, delta: 3 });
        assert!(designed(7, 13).is_err());
        assert!(designed(7, 30).is_err());
        assert!(designed(6, 10).is_err());
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let (lo, hi) = code_m_range(q);
            for m in lo..=hi {
                let d = designed(q, m).unwrap();
                assert!(d.k + d.delta <= d.n + 1);
                if 3 * m as i64 > 2 * genus(q) - 2 {
                    assert_eq!(d.k, d.n - (3 * m as i64 + 1 - genus(q)));
                }
            }
        }
    }

    #[test]
    fn mm_examples() {
        let a = matthews_michel(7, 2).unwrap();
        assert_eq!((a.m, a.bound, a.improvement, a.closed_form), (18, 20, 6, 20));
        let b = matthews_michel(8, 2).unwrap();
        assert_eq!((b.m, b.m0, b.bound), (21, 3, 18));
        let c = matthews_michel(5, 1).unwrap();
        assert_eq!(c.m, 3);
        assert!(!c.applicable);
        assert!(matthews_michel(7, 1).is_err());
        assert!(matthews_michel(7, 3).is_err());
        assert_eq!(mm_u_for_m(7, 18), Some(2));
        assert_eq!(mm_u_for_m(7, 19), None);
    }

    #[test]
    fn mm_generic_examples() {
        let r = mm_generic(7, 9, 1, 54).unwrap();
        assert_eq!(r.consistent, 20);
        assert_eq!(r.literal, 46);
        assert_eq!(r.singleton, 35);
        assert!(r.literal_exceeds_singleton);
        assert!(r.applicable);
        let s = mm_generic(5, 1, 2, 9).unwrap();
        assert!(!s.applicable);
        assert!(mm_generic(7, 6, 1, 3 * 12).is_err());
        assert!(mm_generic(7, 9, 1, 51).is_err());
    }

    #[test]
    fn main_theorem_examples() {
        let r = main_theorem(7, 18).unwrap();
        assert_eq!((r.c1, r.c2, r.c3, r.guaranteed), (32, 20, 20, 20));
        let r = main_theorem(7, 19).unwrap();
        assert_eq!((r.k_param, r.c1, r.c2, r.c3, r.guaranteed), (1, 32, 27, 21, 21));
        let r = main_theorem(5, 7).unwrap();
        assert_eq!((r.k_param, r.c1, r.c2, r.c3, r.guaranteed), (2, 18, 6, 9, 6));
        assert_eq!(main_theorem(5, 8).unwrap().guaranteed, 9);
        assert_eq!(main_theorem(8, 21).unwrap().guaranteed, 19);
        let e = main_theorem(7, 16).unwrap_err().to_string();
        assert!(e.contains("divides"), "{e}");
        assert!(main_theorem(7, 29).is_err());
    }

    #[test]
    fn dstar_and_one_point() {
        assert_eq!(dstar(7, 18).unwrap(), 32);
        assert_eq!(dstar(5, 7).unwrap(), 18);
        for q in [3, 4, 5, 7, 8, 9, 11] {
            let (lo, hi) = code_m_range(q);
            for m in lo..=hi {
                if let Ok(d) = dstar(q, m) {
                    let (_, m0) = split_m(q, m);
                    assert_eq!(d - delta(q, m), 3 * (q as i64 + 1 - m0 as i64));
                    if let Ok(mb) = main_theorem(q, m) {
                        assert!(delta(q, m) <= mb.guaranteed && mb.guaranteed <= d);
                        assert!(mb.guaranteed <= singleton(q, m));
                    }
                }
            }
        }
        assert_eq!(one_point_true(7, 18).unwrap(), OnePointTrue { a: 5, b: 0, d_true: 14 });
        assert_eq!(one_point_true(7, 19).unwrap(), OnePointTrue { a: 4, b: 4, d_true: 21 });
        assert_eq!(one_point_true(5, 8).unwrap(), OnePointTrue { a: 3, b: 4, d_true: 6 });
    }

    #[test]
    fn xing_chen_values() {
        // 619 / (4 + 1/ln 7) = 137.13...
        let x = xing_chen(7, 54).unwrap();
        assert_eq!((x.n, x.k, x.d_bound), (343, 34, 137));
        assert!(x.quotient.starts_with("137.13"), "{}", x.quotient);
        assert_eq!(xing_chen(7, 400).unwrap().d_bound, 0);
        assert_eq!(xing_chen(8, 40).unwrap().k, 13);
        // ln 2 = 0.693147180559945309417232121458...
        let l = ln_fixed(2, 40);
        assert_eq!(l.to_string()[..30], *"693147180559945309417232121458");
    }

    #[test]
    fn report_consistency() {
        let r = report(7, 18).unwrap();
        assert_eq!(r.main.unwrap().guaranteed, 20);
        assert_eq!(r.mm.unwrap().bound, 20);
        assert_eq!(r.verdicts.main_improves_designed, Some(6));
        assert_eq!(r.xing_chen.as_ref().unwrap().reference_improvement, Some(4));
        let r = report(7, 16).unwrap();
        assert_eq!(r.route, "one-point");
        assert!(r.main.is_none());
        let v = serde_json::to_value(report(5, 7).unwrap()).unwrap();
        assert_eq!(v["bounds"][0]["tag"], "designed");
    }

    #[test]
    fn improvements_over_delta() {
        for ((q, m), want) in [((5, 7), 3), ((5, 8), 3), ((7, 19), 4), ((7, 18), 6)] {
            assert_eq!(main_theorem(q, m).unwrap().guaranteed - delta(q, m), want);
        }
    }

    #[test]
    fn mm_never_exceeds_main() {
        for q in [5, 7, 8, 9, 11, 13, 16] {
            for u in 1..=q {
                if let Ok(mm) = matthews_michel(q, u) {
                    if let Ok(mb) = main_theorem(q, mm.m) {
                        assert!(mm.bound <= mb.guaranteed, "q={q} u={u}");
                    }
                }
            }
        }
    }

    #[test]
    fn table_rows() {
        assert_eq!(improvement_table(5).unwrap(), vec![7, 8]);
        assert_eq!(improvement_table(7).unwrap(), vec![18]);
        assert_eq!(improvement_table(11).unwrap(), vec![38, 39, 40, 41, 42, 43, 44, 50, 51, 52, 61, 62, 63]);
        let csv = table_csv(&[5, 7]).unwrap();
        assert_eq!(csv, "q,cond_on_m,values\n5,6 <= m <= 14,\"7, 8\"\n7,14 <= m <= 29,\"18\"\n");
    }
}
