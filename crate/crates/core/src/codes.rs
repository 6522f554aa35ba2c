//! Generator matrices of the codes on D (all affine GF(q^2)-points of H, in canonical
//! order), the residue scaling vector, the A1/A2 reduction, the explicit witness and
//! exact minimum distances for small codes.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::curve::{Divisor, Hermitian, Place3};
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem};
use crate::linalg::FieldMatrix;
use crate::poly::BivarPoly;
use crate::rrspace::{a1_dimension, a1_pole_order, a2_pole_order, basis_l_a1, basis_l_a2, basis_l_mp, in_code_range, split_m, RRBasis};

/// Default limit on the number of words an exhaustive distance search may visit.
pub const ENUM_GUARD: u64 = 1 << 26;
/// Largest q for which duality_check runs without an override.
pub const DUALITY_MAX_Q: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivisorTag {
    /// `(q^3+q^2-q-2) P_inf - m P`
    A1,
    /// `m P`
    MP,
    /// `(q^2-3m_1-1)(q+1) P_inf - (P_inf + m_0 P)`
    A2,
}

#[derive(Clone, Debug)]
pub struct CodeMatrix {
    pub q: u32,
    pub m: u32,
    pub tag: DivisorTag,
    /// k x n over GF(q^2); column j belongs to `points[j]`
    pub generator: FieldMatrix,
    pub points: Vec<crate::curve::CurvePoint>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CodeMatrixJson {
    pub q: u32,
    pub m: u32,
    pub tag: DivisorTag,
    pub n: usize,
    pub k: usize,
    /// `[x, y]` as generator powers, -1 for zero
    pub columns: Vec<[i64; 2]>,
    pub rows: Vec<Vec<i64>>,
}

impl CodeMatrix {
    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        self.generator.ctx()
    }

    pub fn to_json(&self) -> CodeMatrixJson {
        let f = self.field();
        CodeMatrixJson {
            q: self.q,
            m: self.m,
            tag: self.tag,
            n: self.n(),
            k: self.k(),
            columns: self.points.iter().map(|p| [f.power_code(p.x), f.power_code(p.y)]).collect(),
            rows: self.generator.to_rows().iter().map(|r| r.iter().map(|&e| f.power_code(e)).collect()).collect(),
        }
    }

    /// One row per line, generator powers separated by spaces, -1 for zero.
    pub fn to_grid(&self) -> String {
        let f = self.field();
        let mut s = String::new();
        for r in self.generator.to_rows() {
            let line: Vec<String> = r.iter().map(|&e| f.power_code(e).to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Matrix of `num / l^e` evaluated at the points: one row per numerator.
fn evaluate_basis(h: &Hermitian, basis: &RRBasis, place: &Place3, points: &[crate::curve::CurvePoint]) -> Result<FieldMatrix> {
    let f = h.fq2();
    let mut monos: Vec<(u32, u32)> = basis.numerators.iter().flat_map(|p| p.terms().map(|(e, _)| e)).collect();
    monos.sort_unstable();
    monos.dedup();
    let index: BTreeMap<(u32, u32), usize> = monos.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut coeffs = FieldMatrix::zeros(f, basis.dim(), monos.len());
    for (r, p) in basis.numerators.iter().enumerate() {
        for (e, c) in p.terms() {
            coeffs.set(r, index[&e], c);
        }
    }
    let scale: Vec<FieldElem> = if basis.denominator_exponent == 0 {
        vec![f.one(); points.len()]
    } else {
        let ell = h.ell_product(place)?;
        points
            .iter()
            .map(|pt| {
                let v = ell.eval(pt.x, pt.y);
                f.inv(v)
                    .map(|i| f.pow(i, basis.denominator_exponent as u64))
                    .ok_or_else(|| Error::consistency("tangent product vanishes on D"))
            })
            .collect::<Result<_>>()?
    };
    let mut mono_eval = FieldMatrix::zeros(f, monos.len(), points.len());
    for (c, pt) in points.iter().enumerate() {
        for (r, &(i, j)) in monos.iter().enumerate() {
            let v = f.mul(f.pow(pt.x, i as u64), f.pow(pt.y, j as u64));
            mono_eval.set(r, c, f.mul(v, scale[c]));
        }
    }
    coeffs.mul(&mono_eval)
}

fn build_code(h: &Hermitian, place: &Place3, m: u32, tag: DivisorTag) -> Result<CodeMatrix> {
    let q = h.q();
    if !in_code_range(q, m) {
        return Err(Error::pre(format!("m = {m} outside q^2-q-2 <= 3m <= 2q^2-q-2 for q = {q}")));
    }
    let basis = match tag {
        DivisorTag::A1 => basis_l_a1(h, place, m)?,
        DivisorTag::MP => basis_l_mp(h, place, m as i64)?,
        DivisorTag::A2 => basis_l_a2(h, place, m)?,
    };
    let points = h.rational_affine_points();
    let mut generator = evaluate_basis(h, &basis, place, &points)?;
    let expected = match tag {
        DivisorTag::A1 | DivisorTag::A2 => a1_dimension(q, m) as usize,
        DivisorTag::MP => basis.dim(),
    };
    let rank = generator.rank();
    // at 3m = 2g - 2, deg A_1 = n and L(A_1 - D) may be nonzero (q = 2, m = 0 contains R)
    let boundary = tag != DivisorTag::MP && 3 * m as i64 == 2 * h.genus() as i64 - 2;
    if boundary && rank < generator.rows() {
        log::debug!("{tag:?} evaluation at q = {q}, m = {m} has a kernel of dimension {}", generator.rows() - rank);
        generator = generator.row_space_basis();
    } else if rank != generator.rows() || rank != expected {
        return Err(Error::consistency(format!("{tag:?} code has rank {rank}, {} rows, expected {expected}", generator.rows())));
    }
    Ok(CodeMatrix { q, m, tag, generator, points })
}

/// `C_L(D, A_1)`, which is monomially equivalent to `C_Omega(D, 3m P)`.
pub fn build_cl_a1(h: &Hermitian, place: &Place3, m: u32) -> Result<CodeMatrix> {
    if m % (h.q() + 1) == 0 {
        return Err(Error::pre(format!("m = {m} is a multiple of q+1; this is a one-point code")));
    }
    build_code(h, place, m, DivisorTag::A1)
}

/// `C_L(D, mP)`.
pub fn build_cl_mp(h: &Hermitian, place: &Place3, m: u32) -> Result<CodeMatrix> {
    build_code(h, place, m, DivisorTag::MP)
}

/// `C_L(D, A_2)`.
pub fn build_cl_a2(h: &Hermitian, place: &Place3, m: u32) -> Result<CodeMatrix> {
    build_code(h, place, m, DivisorTag::A2)
}

#[derive(Clone, Debug)]
pub struct ScalingVector {
    pub points: Vec<crate::curve::CurvePoint>,
    pub entries: Vec<FieldElem>,
}

/// The c in GF(q^2) with `c^q + c != 0`, by generator power.
pub fn non_tangent_constants(f: &FieldCtx, q: u32) -> Vec<FieldElem> {
    let mut cs: Vec<FieldElem> = f.elements().filter(|&c| !f.add(f.pow(c, q as u64), c).is_zero()).collect();
    cs.sort_by_key(|&c| f.power_code(c));
    cs
}

/// `u_S` for `S = (a, b)`: `prod_c (b - c)` when `a = 0`, else
/// `a^(q+1) prod_{c != b} (b - c)`, with c over the non-tangent constants.
pub fn scaling_vector(h: &Hermitian) -> Result<ScalingVector> {
    let f = h.fq2();
    let q = h.q();
    let cs = non_tangent_constants(f, q);
    let points = h.rational_affine_points();
    let mut entries = Vec::with_capacity(points.len());
    for pt in &points {
        let (a, b) = (pt.x, pt.y);
        let mut u = if a.is_zero() { f.one() } else { f.pow(a, q as u64 + 1) };
        for &c in &cs {
            if c != b {
                u = f.mul(u, f.sub(b, c));
            }
        }
        if u.is_zero() {
            return Err(Error::consistency("zero entry in the scaling vector"));
        }
        entries.push(u);
    }
    Ok(ScalingVector { points, entries })
}

/// Recompute each `u_S` as the `t`-coefficient of `R(a + t, y(t))` along the branch at S.
pub fn scaling_vector_by_branches(h: &Hermitian) -> Result<ScalingVector> {
    let r = h.r_polynomial();
    let points = h.rational_affine_points();
    let entries = points
        .par_iter()
        .map(|pt| {
            let br = h.branch_expansion(pt, 2)?;
            let s = r.eval_series(&br.first, &br.second);
            if !s.coeff(0).is_zero() {
                return Err(Error::consistency("R does not vanish at a point of D"));
            }
            Ok(s.coeff(1))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalingVector { points, entries })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub q: u32,
    pub m: u32,
    pub k_a1: usize,
    pub k_mp: usize,
    pub n: usize,
    /// `sum_S u_S^-1 f(S) h(S) = 0` for all basis pairs
    pub orthogonal: bool,
    pub complementary: bool,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.orthogonal && self.complementary
    }
}

/// `diag(u^-1) C_L(D, A_1)` against `C_L(D, mP)`: orthogonal, of complementary dimensions.
pub fn duality_check(h: &Hermitian, place: &Place3, m: u32, guard_override: bool) -> Result<DualityReport> {
    let q = h.q();
    if q > DUALITY_MAX_Q && !guard_override {
        return Err(Error::Guard(format!("duality check limited to q <= {DUALITY_MAX_Q}")));
    }
    let a1 = build_code(h, place, m, DivisorTag::A1)?;
    let mp = build_cl_mp(h, place, m)?;
    let u = scaling_vector(h)?;
    let f = h.fq2();
    let mut scaled = a1.generator.clone();
    for c in 0..scaled.cols() {
        let inv = f.inv(u.entries[c]).expect("nonzero");
        for r in 0..scaled.rows() {
            scaled.set(r, c, f.mul(scaled.get(r, c), inv));
        }
    }
    let prod = scaled.mul(&mp.generator.transpose())?;
    let n = a1.n();
    Ok(DualityReport { q, m, k_a1: a1.k(), k_mp: mp.k(), n, orthogonal: prod.is_zero(), complementary: a1.k() + mp.k() == n })
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub a1: Divisor,
    pub a2: Divisor,
    pub m1: u32,
    pub m0: u32,
    /// `(q+1) | m`: `A_2` is a multiple of `P_inf`
    pub one_point: bool,
    /// `l^m1 L(A_2)` evaluates onto the same space as `L(A_1)`; checked on request
    pub equivalence_checked: Option<bool>,
}

/// `A_1` and `A_2 = A_1 + m_1 div(l_1 l_2 l_3)`. With `verify`, also checks that
/// `diag(l(S)^m1) C_L(D, A_2) = C_L(D, A_1)` (limited to q <= 4).
pub fn reduce_a1_to_a2(h: &Hermitian, place: &Place3, m: u32, verify: bool) -> Result<Reduction> {
    let q = h.q();
    let (m1, m0) = split_m(q, m);
    let a1 = Divisor::infinity_minus_place(a1_pole_order(q), m as i64, place);
    let a2 = Divisor::infinity_minus_place(a2_pole_order(q, m), m0 as i64, place);
    if a1.degree() != a2.degree() {
        return Err(Error::consistency(format!("deg A1 = {} but deg A2 = {}", a1.degree(), a2.degree())));
    }
    let mut out = Reduction { a1, a2, m1, m0, one_point: m0 == 0, equivalence_checked: None };
    if verify {
        if q > 4 {
            return Err(Error::Guard("A1/A2 equivalence check limited to q <= 4".into()));
        }
        let g1 = build_code(h, place, m, DivisorTag::A1)?;
        let g2 = build_cl_a2(h, place, m)?;
        let f = h.fq2();
        let ell = h.ell_product(place)?;
        let mut moved = g2.generator.clone();
        for (c, pt) in g2.points.iter().enumerate() {
            let s = f.pow(ell.eval(pt.x, pt.y), m1 as u64);
            for r in 0..moved.rows() {
                moved.set(r, c, f.mul(moved.get(r, c), s));
            }
        }
        let both = moved.vstack(&g1.generator)?;
        out.equivalence_checked = Some(moved.rank() == g1.k() && both.rank() == g1.k());
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub q: u32,
    pub m: u32,
    /// the `c_i`
    pub constants: Vec<FieldElem>,
    /// `l_1 l_2 l_3 X prod (Y - c_i)`
    pub poly: BivarPoly,
    pub codeword: Vec<FieldElem>,
    pub weight: usize,
    /// codeword lies in the row space of `C_L(D, A_2)`; checked on request
    pub in_code: Option<bool>,
}

/// The codeword of `C_L(D, A_2)` given by `C* = l_1 l_2 l_3 X (Y - c_1)...(Y - c_k)`,
/// `k = q^2 - 3m_1 - 5`, the `c_i` being the first k non-tangent constants.
pub fn generic_witness(h: &Hermitian, place: &Place3, m: u32, verify: bool) -> Result<Witness> {
    let q = h.q();
    let expected = bounds::dstar(q, m)?;
    let (m1, _) = split_m(q, m);
    let k = (q * q - 3 * m1 - 5) as usize;
    let f = h.fq2();
    let cs: Vec<FieldElem> = non_tangent_constants(f, q).into_iter().take(k).collect();
    if cs.len() != k {
        return Err(Error::pre(format!("need {k} constants with c^q + c != 0")));
    }
    let mut poly = h.ell_product(place)?.mul(&BivarPoly::x(f));
    for &c in &cs {
        poly = poly.mul(&BivarPoly::y(f).sub(&BivarPoly::constant(f, c)));
    }
    let points = h.rational_affine_points();
    let codeword: Vec<FieldElem> = points.iter().map(|p| poly.eval(p.x, p.y)).collect();
    let weight = codeword.iter().filter(|e| !e.is_zero()).count();
    if weight as i64 != expected {
        return Err(Error::consistency(format!("witness weight {weight} differs from d* = {expected}")));
    }
    let in_code = if verify {
        let g2 = build_cl_a2(h, place, m)?;
        let mut ext = g2.generator.clone();
        ext.push_row(&codeword)?;
        Some(ext.rank() == g2.k())
    } else {
        None
    };
    Ok(Witness { q, m, constants: cs, poly, codeword, weight, in_code })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMethod {
    /// every codeword
    Full,
    /// dual weight distribution and the MacWilliams transform
    Dual,
    /// whichever enumerates fewer words
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub d: usize,
    pub method: DistanceMethod,
    pub words_visited: u64,
    /// `A_w` for the code, when computed through the dual
    pub weight_distribution: Option<Vec<String>>,
}

fn words(qq: u64, dim: usize) -> Option<u64> {
    qq.checked_pow(dim as u32)
}

/// Exact minimum distance of the row space of `g` (full rank assumed).
pub fn min_distance_exact(g: &FieldMatrix, method: DistanceMethod, guard: u64) -> Result<DistanceResult> {
    let (k, n) = (g.rows(), g.cols());
    if k == 0 {
        return Err(Error::pre("the zero code has no minimum distance"));
    }
    if g.rank() != k {
        return Err(Error::pre("generator matrix must have full row rank"));
    }
    let qq = g.ctx().order() as u64;
    let full_cost = words(qq, k);
    let dual_cost = words(qq, n - k);
    let method = match method {
        DistanceMethod::Auto => {
            if dual_cost.unwrap_or(u64::MAX) < full_cost.unwrap_or(u64::MAX) {
                DistanceMethod::Dual
            } else {
                DistanceMethod::Full
            }
        }
        m => m,
    };
    let cost = if method == DistanceMethod::Full { full_cost } else { dual_cost };
    match cost {
        Some(c) if c <= guard => {}
        _ => {
            return Err(Error::Guard(format!(
                "{method:?} enumeration needs {qq}^{} words, over the limit {guard}",
                if method == DistanceMethod::Full { k } else { n - k }
            )))
        }
    }
    match method {
        DistanceMethod::Full => {
            let d = min_weight_full(g);
            Ok(DistanceResult { d, method, words_visited: full_cost.unwrap(), weight_distribution: None })
        }
        _ => {
            let dist = code_weights_via_dual(g)?;
            let d =
                dist.iter().skip(1).position(|a| !a.is_zero()).map(|i| i + 1).ok_or_else(|| Error::consistency("no nonzero codeword"))?;
            Ok(DistanceResult {
                d,
                method,
                words_visited: dual_cost.unwrap(),
                weight_distribution: Some(dist.iter().map(|a| a.to_string()).collect()),
            })
        }
    }
}

fn raw_rows(g: &FieldMatrix) -> Vec<Vec<u32>> {
    g.to_rows().iter().map(|r| r.iter().map(|e| e.raw()).collect()).collect()
}

/// Walk all combinations of `free` rows added to `start`, calling `visit` on each word
/// (the start word included). Consecutive words differ by one scaled row.
fn odometer(f: &FieldCtx, rows: &[Vec<u32>], free: &[usize], start: Vec<u32>, mut visit: impl FnMut(&[u32])) {
    let els: Vec<u32> = f.elements().map(|e| e.raw()).collect();
    let qq = els.len();
    let mut cur = start;
    let mut idx = vec![0usize; free.len()];
    visit(&cur);
    loop {
        let mut j = 0;
        loop {
            if j == free.len() {
                return;
            }
            let old = els[idx[j]];
            idx[j] = (idx[j] + 1) % qq;
            let new = els[idx[j]];
            let diff = f.add_raw(new, f.neg_raw(old));
            f.axpy_raw(&mut cur, diff, &rows[free[j]]);
            if idx[j] != 0 {
                break;
            }
            j += 1;
        }
        visit(&cur);
    }
}

fn weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Minimum weight over codewords whose first nonzero message digit is 1.
fn min_weight_full(g: &FieldMatrix) -> usize {
    let f = g.ctx().clone();
    let rows = raw_rows(g);
    let k = rows.len();
    let els: Vec<u32> = f.elements().map(|e| e.raw()).collect();
    // jobs: leading position p, and the value of the digit after it
    let jobs: Vec<(usize, Option<u32>)> =
        (0..k).flat_map(|p| if p + 1 < k { els.iter().map(|&v| (p, Some(v))).collect::<Vec<_>>() } else { vec![(p, None)] }).collect();
    jobs.par_iter()
        .map(|&(p, next)| {
            let mut start = rows[p].clone();
            let mut first_free = p + 1;
            if let Some(v) = next {
                f.axpy_raw(&mut start, v, &rows[p + 1]);
                first_free = p + 2;
            }
            let free: Vec<usize> = (first_free..k).collect();
            let mut best = usize::MAX;
            odometer(&f, &rows, &free, start, |w| best = best.min(weight(w)));
            best
        })
        .min()
        .unwrap()
}

/// Weight distribution of the dual (all `Q^(n-k)` words).
fn dual_weight_distribution(h: &FieldMatrix, n: usize) -> Vec<u64> {
    let f = h.ctx().clone();
    let rows = raw_rows(h);
    let r = rows.len();
    if r == 0 {
        let mut b = vec![0u64; n + 1];
        b[0] = 1;
        return b;
    }
    let els: Vec<u32> = f.elements().map(|e| e.raw()).collect();
    els.par_iter()
        .map(|&v| {
            let mut start = vec![0u32; n];
            f.axpy_raw(&mut start, v, &rows[0]);
            let free: Vec<usize> = (1..r).collect();
            let mut hist = vec![0u64; n + 1];
            odometer(&f, &rows, &free, start, |w| hist[weight(w)] += 1);
            hist
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `K_w(j) = sum_s (-1)^s (Q-1)^(w-s) C(j, s) C(n-j, w-s)`.
fn krawtchouk(n: usize, qq: u64, w: usize, j: usize) -> BigInt {
    let mut s_total = BigInt::zero();
    for s in 0..=w {
        let term = Pow::pow(BigInt::from(qq - 1), (w - s) as u32) * binom(j, s) * binom(n - j, w - s);
        if s % 2 == 0 {
            s_total += term;
        } else {
            s_total -= term;
        }
    }
    s_total
}

/// Weight distribution of the code from that of its dual.
pub fn macwilliams(dual: &[u64], n: usize, qq: u64, dual_dim: usize) -> Result<Vec<BigInt>> {
    let size = Pow::pow(BigInt::from(qq), dual_dim as u32);
    let mut out = Vec::with_capacity(n + 1);
    for w in 0..=n {
        let mut acc = BigInt::zero();
        for (j, &b) in dual.iter().enumerate() {
            if b != 0 {
                acc += BigInt::from(b) * krawtchouk(n, qq, w, j);
            }
        }
        if !(&acc % &size).is_zero() {
            return Err(Error::consistency(format!("MacWilliams transform not integral at weight {w}")));
        }
        out.push(acc / &size);
    }
    Ok(out)
}

fn code_weights_via_dual(g: &FieldMatrix) -> Result<Vec<BigInt>> {
    let (k, n) = (g.rows(), g.cols());
    let h = g.nullspace();
    if h.rows() != n - k || !g.mul(&h.transpose())?.is_zero() {
        return Err(Error::consistency("parity-check matrix does not match the generator"));
    }
    let qq = g.ctx().order() as u64;
    let dual = dual_weight_distribution(&h, n);
    let a = macwilliams(&dual, n, qq, n - k)?;
    let total: BigInt = a.iter().sum();
    if !a[0].is_one() || total != Pow::pow(BigInt::from(qq), k as u32) || a.iter().any(|x| x < &BigInt::zero()) {
        return Err(Error::consistency("weight distribution fails its sanity checks"));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::ConwayTable;

    fn setup(q: u32) -> (Hermitian, Place3) {
        let h = Hermitian::new(q, &ConwayTable::builtin().unwrap()).unwrap();
        let p = h.find_degree3_place(None).unwrap();
        (h, p)
    }

    #[test]
    fn small_code_shapes() {
        let (h, p) = setup(2);
        let c = build_cl_a1(&h, &p, 1).unwrap();
        assert_eq!((c.k(), c.n()), (5, 8));
        let (h, p) = setup(3);
        let c = build_cl_a1(&h, &p, 2).unwrap();
        assert_eq!((c.k(), c.n()), (23, 27));
        assert!(build_cl_a1(&h, &p, 4).is_err());
        let json = c.to_json();
        assert_eq!(json.rows.len(), 23);
        assert_eq!(c.to_grid().lines().count(), 23);
    }

    #[test]
    fn scaling_vector_matches_branches() {
        for q in [2, 3, 4] {
            let (h, _) = setup(q);
            let a = scaling_vector(&h).unwrap();
            let b = scaling_vector_by_branches(&h).unwrap();
            assert_eq!(a.entries, b.entries);
            assert!(a.entries.iter().all(|e| !e.is_zero()));
        }
    }

    #[test]
    fn duality_small() {
        for (q, ms) in [(2u32, vec![0u32, 1]), (3, vec![2, 3, 4])] {
            let (h, p) = setup(q);
            for m in ms {
                let r = duality_check(&h, &p, m, false).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
        let (h, p) = setup(4);
        assert!(matches!(duality_check(&h, &p, 4, false), Err(Error::Guard(_))));
    }

    #[test]
    fn boundary_kernel() {
        let (h, p) = setup(2);
        let r = duality_check(&h, &p, 0, false).unwrap();
        assert_eq!((r.k_a1, r.k_mp), (7, 1));
        let (h, p) = setup(5);
        let c = build_code(&h, &p, 6, DivisorTag::A1).unwrap();
        let mp = build_cl_mp(&h, &p, 6).unwrap();
        assert_eq!(c.k() + mp.k(), 125);
    }

    #[test]
    fn reduction() {
        let (h, p) = setup(3);
        for m in 2..=4 {
            let r = reduce_a1_to_a2(&h, &p, m, true).unwrap();
            assert_eq!(r.equivalence_checked, Some(true), "m = {m}");
            assert_eq!(r.one_point, m == 4);
        }
        let (h, p) = setup(2);
        let r = reduce_a1_to_a2(&h, &p, 1, true).unwrap();
        assert_eq!((r.m1, r.m0), (0, 1));
        assert_eq!(r.equivalence_checked, Some(true));
    }

    #[test]
    fn witness_weights() {
        for q in [3, 4, 5] {
            let (h, p) = setup(q);
            let (lo, hi) = bounds::code_m_range(q);
            for m in lo..=hi {
                let Ok(d) = bounds::dstar(q, m) else { continue };
                let w = generic_witness(&h, &p, m, q <= 4).unwrap();
                assert_eq!(w.weight as i64, d);
                if q <= 4 {
                    assert_eq!(w.in_code, Some(true), "q={q} m={m}");
                }
            }
        }
    }

    #[test]
    fn distance_small_examples() {
        let f = FieldCtx::conway(2, 2, &ConwayTable::builtin().unwrap()).unwrap();
        let ones = FieldMatrix::from_rows(&f, 6, &[vec![f.one(); 6]]).unwrap();
        for m in [DistanceMethod::Full, DistanceMethod::Dual] {
            assert_eq!(min_distance_exact(&ones, m, ENUM_GUARD).unwrap().d, 6);
        }
        let id = FieldMatrix::identity(&f, 4);
        assert_eq!(min_distance_exact(&id, DistanceMethod::Dual, ENUM_GUARD).unwrap().d, 1);
    }

    #[test]
    fn full_and_dual_agree() {
        use rand::{Rng, SeedableRng};
        let table = ConwayTable::builtin().unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (p, e) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            let f = FieldCtx::conway(p, e, &table).unwrap();
            for _ in 0..6 {
                let n = rng.gen_range(4..9);
                let k = rng.gen_range(1..n);
                let rows: Vec<Vec<FieldElem>> = (0..k).map(|_| (0..n).map(|_| f.elem(rng.gen_range(0..f.order()))).collect()).collect();
                let g = FieldMatrix::from_rows(&f, n, &rows).unwrap().row_space_basis();
                let a = min_distance_exact(&g, DistanceMethod::Full, ENUM_GUARD).unwrap();
                let b = min_distance_exact(&g, DistanceMethod::Dual, ENUM_GUARD).unwrap();
                assert_eq!(a.d, b.d);
                // brute force over all messages
                let qq = f.order() as usize;
                let mut best = usize::MAX;
                for idx in 1..qq.pow(g.rows() as u32) {
                    let mut x = idx;
                    let msg: Vec<FieldElem> = (0..g.rows())
                        .map(|_| {
                            let d = x % qq;
                            x /= qq;
                            f.elem(d as u32)
                        })
                        .collect();
                    let w = g.transpose().mul_vec(&msg).unwrap().iter().filter(|e| !e.is_zero()).count();
                    best = best.min(w);
                }
                assert_eq!(a.d, best);
            }
        }
    }

    #[test]
    fn tiny_exact_distances() {
        for (q, m) in [(2u32, 1u32), (3, 2)] {
            let (h, p) = setup(q);
            let c = build_cl_a1(&h, &p, m).unwrap();
            let r = min_distance_exact(&c.generator, DistanceMethod::Auto, ENUM_GUARD).unwrap();
            let lower = bounds::main_theorem(q, m).map(|b| b.guaranteed).unwrap_or(bounds::delta(q, m));
            assert!(lower <= r.d as i64);
            assert!(r.d as i64 <= bounds::singleton(q, m));
        }
    }
}
