//! Sparse bivariate polynomials and truncated power series over a [`FieldCtx`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem, TowerEmbedding};

/// `sum c_ij x^i y^j` with only nonzero coefficients stored.
#[derive(Clone)]
pub struct BivarPoly {
    ctx: Arc<FieldCtx>,
    terms: BTreeMap<(u32, u32), FieldElem>,
}

impl PartialEq for BivarPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id() == other.ctx.id() && self.terms == other.terms
    }
}

impl Eq for BivarPoly {}

impl BivarPoly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        BivarPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: FieldElem) -> Self {
        Self::monomial(ctx, c, 0, 0)
    }

    pub fn monomial(ctx: &Arc<FieldCtx>, c: FieldElem, i: u32, j: u32) -> Self {
        let mut p = Self::zero(ctx);
        p.add_term(i, j, c);
        p
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> Self {
        Self::monomial(ctx, ctx.one(), 1, 0)
    }

    pub fn y(ctx: &Arc<FieldCtx>) -> Self {
        Self::monomial(ctx, ctx.one(), 0, 1)
    }

    /// `sum coeffs[k] * x^i y^j` over the exponent pairs `monos[k]`.
    pub fn from_coeffs(ctx: &Arc<FieldCtx>, monos: &[(u32, u32)], coeffs: &[FieldElem]) -> Self {
        let mut p = Self::zero(ctx);
        for (&(i, j), &c) in monos.iter().zip(coeffs) {
            p.add_term(i, j, c);
        }
        p
    }

    /// The Hermitian polynomial `x^(q+1) - y^q - y`.
    pub fn hermitian(ctx: &Arc<FieldCtx>, q: u32) -> Self {
        let mut h = Self::monomial(ctx, ctx.one(), q + 1, 0);
        h.add_term(0, q, ctx.from_int(-1));
        h.add_term(0, 1, ctx.from_int(-1));
        h
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: FieldElem) {
        let f = &self.ctx;
        let entry = self.terms.entry((i, j)).or_insert_with(|| f.zero());
        *entry = f.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), FieldElem)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> FieldElem {
        self.terms.get(&(i, j)).copied().unwrap_or_else(|| self.ctx.zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(i, j), &c) in &other.terms {
            out.add_term(i, j, c);
        }
        out
    }

    pub fn neg(&self) -> BivarPoly {
        self.scale(self.ctx.from_int(-1))
    }

    pub fn sub(&self, other: &BivarPoly) -> BivarPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElem) -> BivarPoly {
        let mut out = Self::zero(&self.ctx);
        if c.is_zero() {
            return out;
        }
        for (&k, &v) in &self.terms {
            out.terms.insert(k, self.ctx.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &BivarPoly) -> BivarPoly {
        let f = &self.ctx;
        let mut acc: BTreeMap<(u32, u32), FieldElem> = BTreeMap::new();
        for (&(i1, j1), &a) in &self.terms {
            for (&(i2, j2), &b) in &other.terms {
                let e = acc.entry((i1 + i2, j1 + j2)).or_insert_with(|| f.zero());
                *e = f.add(*e, f.mul(a, b));
            }
        }
        acc.retain(|_, v| !v.is_zero());
        BivarPoly { ctx: f.clone(), terms: acc }
    }

    pub fn pow(&self, e: u32) -> BivarPoly {
        let mut out = Self::constant(&self.ctx, self.ctx.one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        let f = &self.ctx;
        // group by y-degree, Horner in x inside each group
        let dy = self.degree_y().unwrap_or(0) as usize;
        let mut by_y: Vec<Vec<(u32, FieldElem)>> = vec![Vec::new(); dy + 1];
        for (&(i, j), &c) in &self.terms {
            by_y[j as usize].push((i, c));
        }
        let mut acc = f.zero();
        for row in by_y.iter().rev() {
            let mut inner = f.zero();
            for &(i, c) in row {
                inner = f.add(inner, f.mul(c, f.pow(x, i as u64)));
            }
            acc = f.add(f.mul(acc, y), inner);
        }
        acc
    }

    pub fn partial_x(&self) -> BivarPoly {
        let mut out = Self::zero(&self.ctx);
        for (&(i, j), &c) in &self.terms {
            if i > 0 {
                out.add_term(i - 1, j, self.ctx.mul(c, self.ctx.from_int(i as i64)));
            }
        }
        out
    }

    pub fn partial_y(&self) -> BivarPoly {
        let mut out = Self::zero(&self.ctx);
        for (&(i, j), &c) in &self.terms {
            if j > 0 {
                out.add_term(i, j - 1, self.ctx.mul(c, self.ctx.from_int(j as i64)));
            }
        }
        out
    }

    /// Same polynomial with coefficients pushed into the bigger field.
    pub fn embed(&self, emb: &TowerEmbedding) -> Result<BivarPoly> {
        if emb.small().id() != self.ctx.id() {
            return Err(Error::FieldMismatch { left: self.ctx.id(), right: emb.small().id() });
        }
        let terms = self.terms.iter().map(|(&k, &c)| (k, emb.up(c))).collect();
        Ok(BivarPoly { ctx: emb.big().clone(), terms })
    }

    /// Inverse of [`embed`](Self::embed); `None` if some coefficient is not in the subfield.
    pub fn descend(&self, emb: &TowerEmbedding) -> Option<BivarPoly> {
        let mut terms = BTreeMap::new();
        for (&k, &c) in &self.terms {
            terms.insert(k, emb.descend(c)?);
        }
        Some(BivarPoly { ctx: emb.small().clone(), terms })
    }

    /// `C(x, alpha x + beta)` as a univariate polynomial, low to high.
    pub fn substitute_y_linear(&self, alpha: FieldElem, beta: FieldElem) -> Vec<FieldElem> {
        let f = &self.ctx;
        let d = self.degree().unwrap_or(0) as usize;
        let line = vec![beta, alpha];
        let mut line_pows = vec![vec![f.one()]];
        for j in 1..=self.degree_y().unwrap_or(0) as usize {
            let next = uni_mul(f, &line_pows[j - 1], &line);
            line_pows.push(next);
        }
        let mut out = vec![f.zero(); d + 1];
        for (&(i, j), &c) in &self.terms {
            for (k, &lc) in line_pows[j as usize].iter().enumerate() {
                let slot = &mut out[i as usize + k];
                *slot = f.add(*slot, f.mul(c, lc));
            }
        }
        uni_trim(out)
    }

    /// Division by `x^(q+1) - y^q - y` with respect to `x`: returns `(quo, rem)` with
    /// `self = quo * H + rem` and `deg_x rem <= q`. Neither step raises the total degree.
    pub fn hermitian_div_rem(&self, q: u32) -> (BivarPoly, BivarPoly) {
        let f = &self.ctx;
        let mut rem = self.clone();
        let mut quo = Self::zero(f);
        loop {
            let Some((&(i, j), &c)) = rem.terms.iter().rev().find(|(&(i, _), _)| i > q) else {
                break;
            };
            // c x^i y^j = c x^(i-q-1) y^j * H + c x^(i-q-1) y^j (y^q + y)
            let (a, b) = (i - q - 1, j);
            quo.add_term(a, b, c);
            rem.terms.remove(&(i, j));
            rem.add_term(a, b + q, c);
            rem.add_term(a, b + 1, c);
        }
        (quo, rem)
    }

    /// Normal form modulo the Hermitian polynomial (`deg_x <= q`).
    pub fn reduce_hermitian(&self, q: u32) -> BivarPoly {
        self.hermitian_div_rem(q).1
    }

    /// Substitute truncated power series for `x` and `y`.
    pub fn eval_series(&self, x: &PowerSeries, y: &PowerSeries) -> PowerSeries {
        let f = &self.ctx;
        let n = x.precision().min(y.precision());
        let dx = self.degree_x().unwrap_or(0) as usize;
        let dy = self.degree_y().unwrap_or(0) as usize;
        let mut xp = vec![PowerSeries::constant(f, f.one(), n)];
        for k in 1..=dx {
            xp.push(xp[k - 1].mul(x));
        }
        let mut yp = vec![PowerSeries::constant(f, f.one(), n)];
        for k in 1..=dy {
            yp.push(yp[k - 1].mul(y));
        }
        let mut acc = PowerSeries::zero(f, n);
        for (&(i, j), &c) in &self.terms {
            acc = acc.add(&xp[i as usize].mul(&yp[j as usize]).scale(c));
        }
        acc
    }

    /// Terms as `(i, j, generator power)` with -1 never occurring.
    pub fn to_terms(&self) -> Vec<PolyTerm> {
        self.terms.iter().map(|(&(i, j), &c)| PolyTerm { x: i, y: j, c: self.ctx.power_code(c) }).collect()
    }

    pub fn from_terms(ctx: &Arc<FieldCtx>, terms: &[PolyTerm]) -> Self {
        let mut p = Self::zero(ctx);
        for t in terms {
            if t.c >= 0 {
                p.add_term(t.x, t.y, ctx.gen_pow(t.c));
            }
        }
        p
    }
}

/// One term of a serialised polynomial: coefficient `g^c` (`c = -1` is zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub x: u32,
    pub y: u32,
    pub c: i64,
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Terms from highest to lowest, coefficients as powers of the field generator `g`.
impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| std::cmp::Reverse((i + j, i)));
        let parts: Vec<String> = keys
            .iter()
            .map(|&(i, j)| {
                let c = self.ctx.fmt_elem(self.terms[&(i, j)]);
                let mut s = c;
                if i > 0 {
                    s.push_str(&if i == 1 { "*x".to_string() } else { format!("*x^{i}") });
                }
                if j > 0 {
                    s.push_str(&if j == 1 { "*y".to_string() } else { format!("*y^{j}") });
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// -------------------------------------------------------------------------
// univariate helpers (coefficients low to high)

pub fn uni_trim(mut a: Vec<FieldElem>) -> Vec<FieldElem> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn uni_mul(f: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    uni_trim(out)
}

pub fn uni_eval(f: &FieldCtx, a: &[FieldElem], x: FieldElem) -> FieldElem {
    f.horner(a, x)
}

/// Divide by `(X - r)`: quotient and remainder.
pub fn uni_div_linear(f: &FieldCtx, a: &[FieldElem], r: FieldElem) -> (Vec<FieldElem>, FieldElem) {
    if a.is_empty() {
        return (Vec::new(), f.zero());
    }
    let mut quo = vec![f.zero(); a.len() - 1];
    let mut carry = f.zero();
    for k in (0..a.len()).rev() {
        let v = f.add(a[k], f.mul(carry, r));
        if k == 0 {
            return (quo, v);
        }
        quo[k - 1] = v;
        carry = v;
    }
    unreachable!()
}

/// Multiplicity of `r` as a root of the nonzero polynomial `a`.
pub fn uni_root_multiplicity(f: &FieldCtx, a: &[FieldElem], r: FieldElem) -> usize {
    let mut cur = uni_trim(a.to_vec());
    let mut mult = 0;
    while !cur.is_empty() {
        let (quo, rem) = uni_div_linear(f, &cur, r);
        if !rem.is_zero() {
            break;
        }
        cur = uni_trim(quo);
        mult += 1;
    }
    mult
}

// -------------------------------------------------------------------------

/// Power series truncated modulo `t^precision`.
#[derive(Clone)]
pub struct PowerSeries {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for PowerSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id() == other.ctx.id() && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes: Vec<i64> = self.coeffs.iter().map(|&c| self.ctx.power_code(c)).collect();
        write!(f, "PowerSeries(prec {}, {codes:?})", self.coeffs.len())
    }
}

impl PowerSeries {
    pub fn zero(ctx: &Arc<FieldCtx>, precision: usize) -> Self {
        PowerSeries { ctx: ctx.clone(), coeffs: vec![ctx.zero(); precision] }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: FieldElem, precision: usize) -> Self {
        let mut s = Self::zero(ctx, precision);
        if precision > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c + t`.
    pub fn shifted_variable(ctx: &Arc<FieldCtx>, c: FieldElem, precision: usize) -> Self {
        let mut s = Self::constant(ctx, c, precision);
        if precision > 1 {
            s.coeffs[1] = ctx.one();
        }
        s
    }

    pub fn from_coeffs(ctx: &Arc<FieldCtx>, mut coeffs: Vec<FieldElem>, precision: usize) -> Self {
        coeffs.resize(precision, ctx.zero());
        PowerSeries { ctx: ctx.clone(), coeffs }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.ctx.zero())
    }

    /// Index of the first nonzero coefficient within the precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, n: usize) -> PowerSeries {
        let n = n.min(self.precision());
        PowerSeries { ctx: self.ctx.clone(), coeffs: self.coeffs[..n].to_vec() }
    }

    fn common(&self, other: &PowerSeries) -> usize {
        self.precision().min(other.precision())
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.common(other);
        let f = &self.ctx;
        let coeffs = (0..n).map(|i| f.add(self.coeffs[i], other.coeffs[i])).collect();
        PowerSeries { ctx: f.clone(), coeffs }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.common(other);
        let f = &self.ctx;
        let coeffs = (0..n).map(|i| f.sub(self.coeffs[i], other.coeffs[i])).collect();
        PowerSeries { ctx: f.clone(), coeffs }
    }

    pub fn scale(&self, c: FieldElem) -> PowerSeries {
        let f = &self.ctx;
        PowerSeries { ctx: f.clone(), coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.common(other);
        let f = &self.ctx;
        let mut out = vec![0u32; n];
        let b: Vec<u32> = other.coeffs[..n].iter().map(|&c| f.own(c)).collect();
        for (i, &a) in self.coeffs[..n].iter().enumerate() {
            if !a.is_zero() {
                f.axpy_raw(&mut out[i..], f.own(a), &b[..n - i]);
            }
        }
        PowerSeries { ctx: f.clone(), coeffs: out.into_iter().map(|v| f.wrap(v)).collect() }
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn inv(&self) -> Option<PowerSeries> {
        let f = &self.ctx;
        let n = self.precision();
        let c0inv = f.inv(self.coeff(0))?;
        let mut out = vec![f.zero(); n];
        if n == 0 {
            return Some(self.clone());
        }
        out[0] = c0inv;
        for k in 1..n {
            let mut s = f.zero();
            for i in 1..=k {
                s = f.add(s, f.mul(self.coeffs[i], out[k - i]));
            }
            out[k] = f.neg(f.mul(s, c0inv));
        }
        Some(PowerSeries { ctx: f.clone(), coeffs: out })
    }

    pub fn pow(&self, e: u32) -> PowerSeries {
        let mut out = PowerSeries::constant(&self.ctx, self.ctx.one(), self.precision());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::ConwayTable;

    fn gf49() -> Arc<FieldCtx> {
        FieldCtx::conway(7, 2, &ConwayTable::builtin().unwrap()).unwrap()
    }

    #[test]
    fn arithmetic_and_eval() {
        let f = gf49();
        let x = BivarPoly::x(&f);
        let y = BivarPoly::y(&f);
        let p = x.add(&y).pow(3);
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.coeff(2, 1), f.from_int(3));
        let (a, b) = (f.gen_pow(5), f.gen_pow(17));
        assert_eq!(p.eval(a, b), f.pow(f.add(a, b), 3));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.partial_x().eval(a, b), f.mul(f.from_int(3), f.pow(f.add(a, b), 2)));
    }

    #[test]
    fn hermitian_division_is_exact_identity() {
        let f = gf49();
        let q = 7;
        let h = BivarPoly::hermitian(&f, q);
        let g = BivarPoly::x(&f).pow(20).add(&BivarPoly::monomial(&f, f.gen_pow(3), 9, 4));
        let (quo, rem) = g.hermitian_div_rem(q);
        assert!(rem.degree_x().unwrap() <= q);
        assert!(rem.degree().unwrap() <= g.degree().unwrap());
        assert_eq!(quo.mul(&h).add(&rem), g);
        // a multiple of H reduces to zero
        assert!(h.mul(&g).reduce_hermitian(q).is_zero());
    }

    #[test]
    fn substitution_and_roots() {
        let f = gf49();
        // (y - x)^2 (y + 1) at y = x + 0 vanishes identically
        let x = BivarPoly::x(&f);
        let y = BivarPoly::y(&f);
        let c = y.sub(&x).pow(2).mul(&y.add(&BivarPoly::constant(&f, f.one())));
        assert!(c.substitute_y_linear(f.one(), f.zero()).is_empty());
        // along y = 2x - 2 the factor (y - x) becomes (x - 2), a double root at 2
        let u = c.substitute_y_linear(f.from_int(2), f.from_int(-2));
        assert_eq!(uni_root_multiplicity(&f, &u, f.from_int(2)), 2);
    }

    #[test]
    fn series_inverse_and_eval() {
        let f = gf49();
        let s = PowerSeries::from_coeffs(&f, vec![f.gen_pow(3), f.gen_pow(8), f.one()], 10);
        let one = s.mul(&s.inv().unwrap());
        assert_eq!(one, PowerSeries::constant(&f, f.one(), 10));
        // x^2 y at x = 1 + t, y = t
        let p = BivarPoly::monomial(&f, f.one(), 2, 1);
        let v = p.eval_series(&PowerSeries::shifted_variable(&f, f.one(), 6), &PowerSeries::shifted_variable(&f, f.zero(), 6));
        assert_eq!(v.valuation(), Some(1));
        assert_eq!(v.coeff(2), f.from_int(2));
        assert_eq!(v.coeff(3), f.one());
        assert_eq!(v.coeff(4), f.zero());
    }

    #[test]
    fn terms_roundtrip() {
        let f = gf49();
        let p = BivarPoly::hermitian(&f, 7).add(&BivarPoly::monomial(&f, f.gen_pow(26), 3, 0));
        assert_eq!(BivarPoly::from_terms(&f, &p.to_terms()), p);
    }
}
