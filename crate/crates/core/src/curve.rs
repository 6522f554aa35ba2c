//! The Hermitian curve `X^(q+1) - Y^q Z - Y Z^q = 0` over GF(q^2) and its
//! extensions GF(q^4), GF(q^6): points, degree-3 places, tangents, branch
//! expansions, intersection multiplicities and vanishing conditions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{ConwayTable, FieldCtx, FieldElem, TowerEmbedding};
use crate::linalg::FieldMatrix;
use crate::poly::{uni_div_linear, uni_eval, uni_root_multiplicity, uni_trim, BivarPoly, PowerSeries};

/// Largest q for which GF(q^6) is enumerated.
pub const MAX_Q_SEXTIC: u32 = 16;

/// Projective point `(X:Y:Z)`, scaled so the last nonzero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CurvePoint {
    pub x: FieldElem,
    pub y: FieldElem,
    pub z: FieldElem,
}

impl CurvePoint {
    pub fn affine(f: &FieldCtx, x: FieldElem, y: FieldElem) -> Self {
        CurvePoint { x, y, z: f.one() }
    }

    pub fn infinity(f: &FieldCtx) -> Self {
        CurvePoint { x: f.zero(), y: f.one(), z: f.zero() }
    }

    pub fn normalized(f: &FieldCtx, x: FieldElem, y: FieldElem, z: FieldElem) -> Result<Self> {
        let s = [z, y, x].into_iter().find(|c| !c.is_zero()).ok_or_else(|| Error::pre("(0:0:0) is not a point"))?;
        let inv = f.inv(s).expect("nonzero");
        Ok(CurvePoint { x: f.mul(x, inv), y: f.mul(y, inv), z: f.mul(z, inv) })
    }

    pub fn is_affine(&self) -> bool {
        !self.z.is_zero()
    }

    pub fn field_id(&self) -> u32 {
        self.x.ctx_id()
    }

    /// Canonical ordering key: generator powers of the coordinates, -1 for zero.
    pub fn sort_key(&self, f: &FieldCtx) -> [i64; 3] {
        [f.power_code(self.x), f.power_code(self.y), f.power_code(self.z)]
    }

    pub fn map(&self, g: impl Fn(FieldElem) -> FieldElem) -> CurvePoint {
        CurvePoint { x: g(self.x), y: g(self.y), z: g(self.z) }
    }
}

/// Which field the points are taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    Q2,
    Q4,
    Q6,
}

impl Extension {
    pub fn degree_over_q2(self) -> u32 {
        match self {
            Extension::Q2 => 1,
            Extension::Q4 => 2,
            Extension::Q6 => 3,
        }
    }
}

/// Line `a X + b Y + c Z = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Line {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
}

impl Line {
    /// Affine equation `a x + b y + c` as a polynomial.
    pub fn to_poly(&self, f: &Arc<FieldCtx>) -> BivarPoly {
        let mut p = BivarPoly::zero(f);
        p.add_term(1, 0, self.a);
        p.add_term(0, 1, self.b);
        p.add_term(0, 0, self.c);
        p
    }

    pub fn contains(&self, f: &FieldCtx, pt: &CurvePoint) -> bool {
        f.add(f.add(f.mul(self.a, pt.x), f.mul(self.b, pt.y)), f.mul(self.c, pt.z)).is_zero()
    }
}

/// A degree-3 place: three points of H(GF(q^6)) with `P_{i+1} = Fr_{q^2}(P_i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Place3 {
    pub pts: [CurvePoint; 3],
    /// `orientation[i] = j` where the tangent at `P_i` meets H again at `P_j`.
    pub orientation: [usize; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `Z = 1`, coordinates `(x, y)`.
    Affine,
    /// `Y = 1`, coordinates `(X/Y, Z/Y)`; the curve reads `u^(q+1) - w - w^q = 0`.
    AtInfinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parameter {
    /// first chart coordinate minus its value at the center
    First,
    Second,
}

/// Local parametrisation of H at a point: both chart coordinates as series in `t`.
#[derive(Clone, Debug)]
pub struct BranchExpansion {
    pub center: CurvePoint,
    pub chart: Chart,
    pub parameter: Parameter,
    pub first: PowerSeries,
    pub second: PowerSeries,
}

impl BranchExpansion {
    pub fn precision(&self) -> usize {
        self.first.precision()
    }

    /// The dependent coordinate.
    pub fn series(&self) -> &PowerSeries {
        match self.parameter {
            Parameter::First => &self.second,
            Parameter::Second => &self.first,
        }
    }

    pub fn truncate(&self, n: usize) -> BranchExpansion {
        BranchExpansion {
            center: self.center,
            chart: self.chart,
            parameter: self.parameter,
            first: self.first.truncate(n),
            second: self.second.truncate(n),
        }
    }
}

/// Newton iteration for a smooth branch of `g(u, w) = 0` through `(a, b)`.
pub fn newton_branch(g: &BivarPoly, a: FieldElem, b: FieldElem, n: usize) -> Result<(Parameter, PowerSeries, PowerSeries)> {
    let f = g.ctx().clone();
    if !g.eval(a, b).is_zero() {
        return Err(Error::pre("center does not lie on the curve"));
    }
    let gu = g.partial_x();
    let gw = g.partial_y();
    // solve for the coordinate whose partial derivative is a unit
    let (param, dep_partial) = if !gw.eval(a, b).is_zero() {
        (Parameter::First, gw)
    } else if !gu.eval(a, b).is_zero() {
        (Parameter::Second, gu)
    } else {
        return Err(Error::consistency("singular point on a smooth curve"));
    };
    let assemble = |t_coord: &PowerSeries, dep: &PowerSeries| match param {
        Parameter::First => (t_coord.clone(), dep.clone()),
        Parameter::Second => (dep.clone(), t_coord.clone()),
    };
    let (c_param, c_dep) = match param {
        Parameter::First => (a, b),
        Parameter::Second => (b, a),
    };
    let mut dep = PowerSeries::constant(&f, c_dep, n.max(1));
    let mut k = 1usize;
    let mut rounds = 0;
    loop {
        k = (2 * k).min(n.max(1));
        let t_coord = PowerSeries::shifted_variable(&f, c_param, k);
        let cur = dep.truncate(k);
        let cur = PowerSeries::from_coeffs(&f, cur.coeffs().to_vec(), k);
        let (u, w) = assemble(&t_coord, &cur);
        let residual = g.eval_series(&u, &w);
        if residual.valuation().is_none() && k == n.max(1) {
            dep = cur;
            break;
        }
        let deriv = dep_partial.eval_series(&u, &w);
        let step = residual.mul(&deriv.inv().ok_or_else(|| Error::consistency("derivative vanished"))?);
        dep = cur.sub(&step);
        rounds += 1;
        if rounds > 64 {
            return Err(Error::consistency("Newton iteration stalled"));
        }
    }
    let t_coord = PowerSeries::shifted_variable(&f, c_param, n.max(1));
    let (u, w) = assemble(&t_coord, &dep);
    Ok((param, u, w))
}

/// The Hermitian curve for one q, with GF(q^2) and GF(q^6) contexts and the embedding between them.
pub struct Hermitian {
    q: u32,
    p: u32,
    e: u32,
    table: ConwayTable,
    fq2: Arc<FieldCtx>,
    fq6: Arc<FieldCtx>,
    emb: TowerEmbedding,
}

impl std::fmt::Debug for Hermitian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hermitian(q={})", self.q)
    }
}

/// `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = crate::ff::prime_factors(q as u64);
    if p.len() != 1 {
        return None;
    }
    let p = p[0] as u32;
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p, e))
}

impl Hermitian {
    pub fn new(q: u32, table: &ConwayTable) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::pre(format!("q = {q} is not a prime power")))?;
        if q > MAX_Q_SEXTIC {
            return Err(Error::Guard(format!("q = {q} exceeds {MAX_Q_SEXTIC}")));
        }
        let fq2 = FieldCtx::conway(p, 2 * e, table)?;
        let fq6 = FieldCtx::conway(p, 6 * e, table)?;
        let emb = TowerEmbedding::new(fq2.clone(), fq6.clone())?;
        Ok(Hermitian { q, p, e, table: table.clone(), fq2, fq6, emb })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn genus(&self) -> u32 {
        self.q * (self.q - 1) / 2
    }

    pub fn fq2(&self) -> &Arc<FieldCtx> {
        &self.fq2
    }

    pub fn fq6(&self) -> &Arc<FieldCtx> {
        &self.fq6
    }

    pub fn embedding(&self) -> &TowerEmbedding {
        &self.emb
    }

    /// Affine equation `x^(q+1) - y^q - y` over the field of `f`.
    pub fn equation(&self, f: &Arc<FieldCtx>) -> BivarPoly {
        BivarPoly::hermitian(f, self.q)
    }

    fn field(&self, ext: Extension) -> Result<Arc<FieldCtx>> {
        Ok(match ext {
            Extension::Q2 => self.fq2.clone(),
            Extension::Q6 => self.fq6.clone(),
            Extension::Q4 => FieldCtx::conway(self.p, 4 * self.e, &self.table)?,
        })
    }

    pub fn on_curve(&self, f: &FieldCtx, pt: &CurvePoint) -> bool {
        let q = self.q as u64;
        let lhs = f.pow(pt.x, q + 1);
        let rhs = f.add(f.mul(f.pow(pt.y, q), pt.z), f.mul(pt.y, f.pow(pt.z, q)));
        lhs == rhs
    }

    /// All points of H over the chosen field in canonical order, P_inf included.
    pub fn enumerate_points(&self, ext: Extension) -> Result<(Arc<FieldCtx>, Vec<CurvePoint>)> {
        let f = self.field(ext)?;
        let q = self.q as u64;
        // bucket y by y^q + y, then look up x^(q+1)
        let mut trace: Vec<(u32, u32)> = f.elements().map(|y| (f.add(f.pow(y, q), y).raw(), y.raw())).collect();
        trace.sort_unstable();
        let xs: Vec<FieldElem> = f.elements().collect();
        let mut pts: Vec<CurvePoint> = xs
            .par_iter()
            .flat_map_iter(|&x| {
                let n = f.pow(x, q + 1).raw();
                let lo = trace.partition_point(|&(t, _)| t < n);
                let hi = trace.partition_point(|&(t, _)| t <= n);
                let f = &f;
                trace[lo..hi].iter().map(move |&(_, y)| CurvePoint::affine(f, x, f.elem(y)))
            })
            .collect();
        pts.push(CurvePoint::infinity(&f));
        sort_points(&f, &mut pts);
        Ok((f, pts))
    }

    /// Closed-form point count over GF(q^(2k)), k = 1, 2, 3.
    pub fn expected_count(&self, ext: Extension) -> u64 {
        let q = self.q as u64;
        match ext {
            Extension::Q2 | Extension::Q4 => q.pow(3) + 1,
            Extension::Q6 => q.pow(6) + 1 + q.pow(4) * (q - 1),
        }
    }

    /// Affine GF(q^2)-points, the support of D, in canonical column order.
    pub fn rational_affine_points(&self) -> Vec<CurvePoint> {
        let f = &self.fq2;
        let q = self.q as u64;
        let mut pts = Vec::with_capacity((q * q * q) as usize);
        for x in f.elements() {
            let n = f.pow(x, q + 1);
            for y in f.elements() {
                if f.add(f.pow(y, q), y) == n {
                    pts.push(CurvePoint::affine(f, x, y));
                }
            }
        }
        sort_points(f, &mut pts);
        pts
    }

    /// `q^2`-Frobenius on GF(q^6)-points.
    pub fn frobenius(&self, pt: &CurvePoint) -> CurvePoint {
        let f = &self.fq6;
        let j = 2 * self.e;
        pt.map(|c| f.frobenius(c, j))
    }

    /// Number of degree-3 places from the point count formula.
    pub fn degree3_place_count(&self) -> u64 {
        (self.expected_count(Extension::Q6) - self.expected_count(Extension::Q2)) / 3
    }

    /// All degree-3 places by orbit decomposition of H(GF(q^6)) minus H(GF(q^2)).
    pub fn all_degree3_places(&self) -> Result<Vec<Place3>> {
        let (_, pts) = self.enumerate_points(Extension::Q6)?;
        let mut seen = std::collections::HashSet::new();
        let mut places = Vec::new();
        for pt in pts {
            if seen.contains(&pt) || self.frobenius(&pt) == pt {
                continue;
            }
            let place = self.place_from_point(pt)?;
            seen.extend(place.pts);
            places.push(place);
        }
        Ok(places)
    }

    /// A degree-3 place drawn from all of them with a seeded generator; `None` gives the
    /// canonical first one.
    pub fn place_by_seed(&self, seed: Option<u64>) -> Result<Place3> {
        use rand::{Rng, SeedableRng};
        match seed {
            None => self.find_degree3_place(None),
            Some(s) => {
                let mut places = self.all_degree3_places()?;
                let mut rng = rand::rngs::StdRng::seed_from_u64(s);
                let i = rng.gen_range(0..places.len());
                Ok(places.swap_remove(i))
            }
        }
    }

    /// The degree-3 place through `seed`, or through the first qualifying point of H(GF(q^6)).
    pub fn find_degree3_place(&self, seed: Option<CurvePoint>) -> Result<Place3> {
        if let Some(s) = seed {
            return self.place_from_point(s);
        }
        let (_, pts) = self.enumerate_points(Extension::Q6)?;
        for pt in pts {
            if pt.is_affine() && self.frobenius(&pt) != pt {
                return self.place_from_point(pt);
            }
        }
        Err(Error::consistency("no degree-3 place found"))
    }

    pub fn place_from_point(&self, p1: CurvePoint) -> Result<Place3> {
        let f = &self.fq6;
        if p1.field_id() != f.id() || !self.on_curve(f, &p1) {
            return Err(Error::pre("seed is not a point of H over GF(q^6)"));
        }
        let p2 = self.frobenius(&p1);
        let p3 = self.frobenius(&p2);
        if p2 == p1 {
            return Err(Error::pre("seed is GF(q^2)-rational"));
        }
        if self.frobenius(&p3) != p1 {
            return Err(Error::consistency("Frobenius orbit does not close after three steps"));
        }
        if !p1.is_affine() || !p2.is_affine() || !p3.is_affine() {
            return Err(Error::consistency("degree-3 place meets the line at infinity"));
        }
        let pts = [p1, p2, p3];
        // triangle: the three points are not collinear
        let det = det3(f, &pts);
        if det.is_zero() {
            return Err(Error::consistency("degree-3 place is collinear"));
        }
        let mut orientation = [0usize; 3];
        for i in 0..3 {
            let l = self.tangent_line(f, &pts[i]);
            let meet = self.line_intersection(f, &l)?;
            let mut mult_here = 0;
            let mut other = None;
            for (pt, mult) in meet {
                if pt == pts[i] {
                    mult_here = mult;
                } else {
                    other = Some((pt, mult));
                }
            }
            let (other, om) = other.ok_or_else(|| Error::consistency("tangent at a place point meets H only once"))?;
            if mult_here != self.q as usize || om != 1 {
                return Err(Error::consistency("tangent intersection divisor is not qP_i + P_j"));
            }
            orientation[i] = pts.iter().position(|p| *p == other).ok_or_else(|| Error::consistency("tangent meets H outside the orbit"))?;
        }
        Ok(Place3 { pts, orientation })
    }

    /// Tangent `a^q X - c^q Y - b^q Z = 0` at `(a:b:c)`.
    pub fn tangent_line(&self, f: &FieldCtx, pt: &CurvePoint) -> Line {
        let q = self.q as u64;
        Line { a: f.pow(pt.x, q), b: f.neg(f.pow(pt.z, q)), c: f.neg(f.pow(pt.y, q)) }
    }

    /// Intersection divisor of H with a line, as points with multiplicities.
    /// Roots are found by scanning the field, so this is meant for small fields or few calls.
    pub fn line_intersection(&self, f: &Arc<FieldCtx>, l: &Line) -> Result<Vec<(CurvePoint, usize)>> {
        let q = self.q;
        let mut out = Vec::new();
        if l.b.is_zero() {
            // a X + c Z = 0
            if l.a.is_zero() {
                // Z = 0: only P_inf, with multiplicity q+1
                return Ok(vec![(CurvePoint::infinity(f), q as usize + 1)]);
            }
            // x = -c/a; P_inf also lies on the line
            let x0 = f.neg(f.div(l.c, l.a));
            let n = f.pow(x0, q as u64 + 1);
            // y^q + y - n = 0
            let mut poly = vec![f.zero(); q as usize + 1];
            poly[0] = f.neg(n);
            poly[1] = f.one();
            poly[q as usize] = f.add(poly[q as usize], f.one());
            for (y, mult) in roots_by_scan(f, &poly) {
                out.push((CurvePoint::affine(f, x0, y), mult));
            }
            out.push((CurvePoint::infinity(f), 1));
            return Ok(out);
        }
        // y = alpha x + beta
        let alpha = f.neg(f.div(l.a, l.b));
        let beta = f.neg(f.div(l.c, l.b));
        let g = self.equation(f).substitute_y_linear(alpha, beta);
        let deg = g.len().saturating_sub(1);
        for (x, mult) in roots_by_scan(f, &g) {
            out.push((CurvePoint::affine(f, x, f.add(f.mul(alpha, x), beta)), mult));
        }
        if deg < q as usize + 1 {
            out.push((CurvePoint::infinity(f), q as usize + 1 - deg));
        }
        Ok(out)
    }

    /// Branch of H at `pt` to precision `n` (`n <= 4 q^2`).
    pub fn branch_expansion(&self, pt: &CurvePoint, n: usize) -> Result<BranchExpansion> {
        let cap = 4 * (self.q as usize).pow(2);
        if n > cap {
            return Err(Error::Guard(format!("branch precision {n} exceeds {cap}")));
        }
        self.expand(pt, n)
    }

    fn field_of(&self, pt: &CurvePoint) -> Result<Arc<FieldCtx>> {
        if pt.field_id() == self.fq6.id() {
            Ok(self.fq6.clone())
        } else if pt.field_id() == self.fq2.id() {
            Ok(self.fq2.clone())
        } else {
            Err(Error::pre("point is neither over GF(q^2) nor GF(q^6) of this curve"))
        }
    }

    fn expand(&self, pt: &CurvePoint, n: usize) -> Result<BranchExpansion> {
        let f = self.field_of(pt)?;
        if !self.on_curve(&f, pt) {
            return Err(Error::pre("point is not on H"));
        }
        // both charts carry the same equation u^(q+1) - w^q - w = 0
        let g = self.equation(&f);
        let (chart, a, b) = if pt.is_affine() { (Chart::Affine, pt.x, pt.y) } else { (Chart::AtInfinity, pt.x, pt.z) };
        let (parameter, first, second) = newton_branch(&g, a, b, n)?;
        Ok(BranchExpansion { center: *pt, chart, parameter, first, second })
    }

    /// `C` rewritten in the coordinates of the chart used at `pt`.
    fn in_chart(&self, c: &BivarPoly, chart: Chart) -> BivarPoly {
        match chart {
            Chart::Affine => c.clone(),
            Chart::AtInfinity => {
                // C_h(u, 1, w) = sum c_ij u^i w^(d - i - j)
                let d = c.degree().unwrap_or(0);
                let mut out = BivarPoly::zero(c.ctx());
                for ((i, j), v) in c.terms() {
                    out.add_term(i, d - i - j, v);
                }
                out
            }
        }
    }

    fn lift_poly(&self, c: &BivarPoly, f: &Arc<FieldCtx>) -> Result<BivarPoly> {
        if c.ctx().id() == f.id() {
            Ok(c.clone())
        } else if c.ctx().id() == self.fq2.id() && f.id() == self.fq6.id() {
            c.embed(&self.emb)
        } else {
            Err(Error::FieldMismatch { left: c.ctx().id(), right: f.id() })
        }
    }

    /// `I(pt, H . C)`, the order of `C` along the branch of H at `pt`. For a point at
    /// infinity `C` is taken as the projective curve of degree `deg C`.
    pub fn intersection_multiplicity(&self, pt: &CurvePoint, c: &BivarPoly) -> Result<usize> {
        let f = self.field_of(pt)?;
        let c = self.lift_poly(c, &f)?;
        if c.reduce_hermitian(self.q).is_zero() {
            return Err(Error::pre("C vanishes identically on H"));
        }
        let cap = c.degree().unwrap_or(0) as usize * (self.q as usize + 1) + 1;
        let mut n = 8usize.min(cap);
        loop {
            let br = self.expand(pt, n)?;
            let cc = self.in_chart(&c, br.chart);
            if let Some(v) = cc.eval_series(&br.first, &br.second).valuation() {
                return Ok(v);
            }
            if n >= cap {
                return Err(Error::consistency("no nonzero term within the Bezout bound"));
            }
            n = (2 * n).min(cap);
        }
    }

    /// Rows `t^0 .. t^(v-1)` of `f(x(t), y(t))` for `f` ranging over the given monomials
    /// (columns), at an affine point. Its nullspace is `{f : ord_pt(f) >= v}`.
    pub fn vanishing_conditions(&self, pt: &CurvePoint, monos: &[(u32, u32)], v: usize) -> Result<FieldMatrix> {
        let f = self.field_of(pt)?;
        if !pt.is_affine() {
            return Err(Error::pre("vanishing conditions are imposed at affine points"));
        }
        if v == 0 {
            return Ok(FieldMatrix::zeros(&f, 0, monos.len()));
        }
        let br = self.expand(pt, v)?;
        let dx = monos.iter().map(|m| m.0).max().unwrap_or(0) as usize;
        let dy = monos.iter().map(|m| m.1).max().unwrap_or(0) as usize;
        let mut xp = vec![PowerSeries::constant(&f, f.one(), v)];
        for k in 1..=dx {
            xp.push(xp[k - 1].mul(&br.first));
        }
        let mut yp = vec![PowerSeries::constant(&f, f.one(), v)];
        for k in 1..=dy {
            yp.push(yp[k - 1].mul(&br.second));
        }
        let mut m = FieldMatrix::zeros(&f, v, monos.len());
        for (col, &(i, j)) in monos.iter().enumerate() {
            let s = xp[i as usize].mul(&yp[j as usize]);
            for r in 0..v {
                m.set(r, col, s.coeff(r));
            }
        }
        Ok(m)
    }

    /// `R(x, y) = x * prod_{c : c^q + c != 0} (y - c)` over GF(q^2).
    pub fn r_polynomial(&self) -> BivarPoly {
        let f = &self.fq2;
        let q = self.q as u64;
        let mut r = BivarPoly::x(f);
        for c in f.elements() {
            if !f.add(f.pow(c, q), c).is_zero() {
                r = r.mul(&BivarPoly::y(f).sub(&BivarPoly::constant(f, c)));
            }
        }
        r
    }

    /// Affine tangent polynomials at the three place points (over GF(q^6)).
    pub fn place_tangents(&self, place: &Place3) -> [BivarPoly; 3] {
        let f = &self.fq6;
        place.pts.map(|pt| self.tangent_line(f, &pt).to_poly(f))
    }

    /// `l_1 l_2 l_3`, a cubic with GF(q^2) coefficients.
    pub fn ell_product(&self, place: &Place3) -> Result<BivarPoly> {
        let [a, b, c] = self.place_tangents(place);
        a.mul(&b).mul(&c).descend(&self.emb).ok_or_else(|| Error::consistency("tangent product is not GF(q^2)-rational"))
    }
}

fn det3(f: &FieldCtx, pts: &[CurvePoint; 3]) -> FieldElem {
    let m = pts.map(|p| [p.x, p.y, p.z]);
    let term = |a: usize, b: usize, c: usize| f.mul(m[0][a], f.sub(f.mul(m[1][b], m[2][c]), f.mul(m[1][c], m[2][b])));
    f.add(f.sub(term(0, 1, 2), term(1, 0, 2)), term(2, 0, 1))
}

/// Roots of a univariate polynomial with multiplicities, by exhaustive scan.
fn roots_by_scan(f: &FieldCtx, poly: &[FieldElem]) -> Vec<(FieldElem, usize)> {
    let poly = uni_trim(poly.to_vec());
    if poly.len() <= 1 {
        return Vec::new();
    }
    let deg = poly.len() - 1;
    let mut out = Vec::new();
    let mut rest = poly.clone();
    let mut found = 0;
    for x in f.elements() {
        if found == deg {
            break;
        }
        if uni_eval(f, &rest, x).is_zero() {
            let m = uni_root_multiplicity(f, &poly, x);
            for _ in 0..m {
                rest = uni_trim(uni_div_linear(f, &rest, x).0);
            }
            found += m;
            out.push((x, m));
        }
    }
    out
}

pub fn sort_points(f: &FieldCtx, pts: &mut [CurvePoint]) {
    pts.sort_by_cached_key(|p| p.sort_key(f));
}

pub fn compare_points(f: &FieldCtx, a: &CurvePoint, b: &CurvePoint) -> Ordering {
    a.sort_key(f).cmp(&b.sort_key(f))
}

// -------------------------------------------------------------------------
// divisors

/// Support element of a divisor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceId {
    Infinity,
    Point(CurvePoint),
    Degree3(Place3),
}

impl PlaceId {
    pub fn degree(&self) -> i64 {
        match self {
            PlaceId::Degree3(_) => 3,
            _ => 1,
        }
    }
}

/// Finite formal sum of places; a degree-3 place is stored as one entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    parts: BTreeMap<PlaceId, i64>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, place: PlaceId, mult: i64) -> Self {
        self.add(place, mult);
        self
    }

    pub fn add(&mut self, place: PlaceId, mult: i64) {
        let e = self.parts.entry(place.clone()).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.parts.remove(&place);
        }
    }

    pub fn multiplicity(&self, place: &PlaceId) -> i64 {
        self.parts.get(place).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.parts.iter().map(|(p, m)| p.degree() * m).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PlaceId, i64)> {
        self.parts.iter().map(|(p, &m)| (p, m))
    }

    /// `n P_inf - m P`.
    pub fn infinity_minus_place(n: i64, m: i64, place: &Place3) -> Divisor {
        Divisor::new().with(PlaceId::Infinity, n).with(PlaceId::Degree3(place.clone()), -m)
    }

    pub fn to_json(&self, fq6: &FieldCtx, format: PointFormat) -> DivisorJson {
        let parts = self
            .parts
            .iter()
            .map(|(p, &m)| {
                let place = match p {
                    PlaceId::Infinity => PlaceJson::Infinity,
                    PlaceId::Point(pt) => PlaceJson::Point { coords: point_json(fq6, pt, format) },
                    PlaceId::Degree3(pl) => PlaceJson::Degree3 { points: pl.pts.iter().map(|pt| point_json(fq6, pt, format)).collect() },
                };
                DivisorPartJson { place, multiplicity: m }
            })
            .collect();
        DivisorJson { degree: self.degree(), parts }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointFormat {
    /// generator powers, -1 for zero
    Power,
    /// coefficient vectors over the prime field, low to high
    Coeffs,
}

pub fn point_json(f: &FieldCtx, pt: &CurvePoint, format: PointFormat) -> Vec<String> {
    [pt.x, pt.y, pt.z]
        .iter()
        .map(|&c| match format {
            PointFormat::Power => f.power_code(c).to_string(),
            PointFormat::Coeffs => {
                let cs: Vec<String> = f.coeffs(c).iter().map(u32::to_string).collect();
                cs.join(" ")
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaceJson {
    Infinity,
    Point { coords: Vec<String> },
    Degree3 { points: Vec<Vec<String>> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DivisorPartJson {
    pub place: PlaceJson,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DivisorJson {
    pub degree: i64,
    pub parts: Vec<DivisorPartJson>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(q: u32) -> Hermitian {
        Hermitian::new(q, &ConwayTable::builtin().unwrap()).unwrap()
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert!(matches!(Hermitian::new(6, &ConwayTable::builtin().unwrap()), Err(Error::Precondition(_))));
    }

    #[test]
    fn small_point_counts() {
        let h = curve(2);
        let (_, pts) = h.enumerate_points(Extension::Q2).unwrap();
        assert_eq!(pts.len(), 9);
        let (_, pts) = h.enumerate_points(Extension::Q6).unwrap();
        assert_eq!(pts.len(), 81);
        assert_eq!(h.rational_affine_points().len(), 8);
    }

    #[test]
    fn tangent_at_infinity_and_affine_slope() {
        let h = curve(3);
        let f = h.fq2().clone();
        let l = h.tangent_line(&f, &CurvePoint::infinity(&f));
        assert!(l.a.is_zero() && l.b.is_zero() && !l.c.is_zero());
        for pt in h.rational_affine_points() {
            let l = h.tangent_line(&f, &pt);
            // y = a^q x + const
            assert_eq!(f.neg(f.div(l.a, l.b)), f.pow(pt.x, 3));
            let meet = h.line_intersection(&f, &l).unwrap();
            assert_eq!(meet, vec![(pt, 4)]);
        }
    }

    #[test]
    fn lemma_model_expansion() {
        // Y + X^q + X Y^q = 0 at (0,0): Y = -X^q + ...
        let q = 5;
        let h = curve(q);
        let f = h.fq2().clone();
        let mut g = BivarPoly::y(&f);
        g.add_term(q, 0, f.one());
        g.add_term(1, q, f.one());
        let (param, x, y) = newton_branch(&g, f.zero(), f.zero(), 3 * q as usize).unwrap();
        assert_eq!(param, Parameter::First);
        assert_eq!(y.valuation(), Some(q as usize));
        assert_eq!(y.coeff(q as usize), f.from_int(-1));
        assert!(g.eval_series(&x, &y).valuation().is_none());
    }

    #[test]
    fn rational_branch_shape() {
        let q = 3;
        let h = curve(q);
        let f = h.fq2().clone();
        for pt in h.rational_affine_points() {
            let br = h.branch_expansion(&pt, 20).unwrap();
            let y = br.series();
            assert_eq!(y.coeff(0), pt.y);
            assert_eq!(y.coeff(1), f.pow(pt.x, q as u64));
            for k in 2..=q as usize {
                assert!(y.coeff(k).is_zero());
            }
            assert!(!y.coeff(q as usize + 1).is_zero());
            let short = h.branch_expansion(&pt, 7).unwrap();
            assert_eq!(short.series(), &y.truncate(7));
        }
        assert!(matches!(h.branch_expansion(&h.rational_affine_points()[0], 37), Err(Error::Guard(_))));
    }

    #[test]
    fn degree3_places_q2() {
        let h = curve(2);
        assert_eq!(h.degree3_place_count(), 24);
        let places = h.all_degree3_places().unwrap();
        assert_eq!(places.len(), 24);
        for pl in &places {
            assert_eq!(pl.orientation, [1, 2, 0]);
        }
    }

    #[test]
    fn place_tangency_pattern() {
        for q in [2, 3, 4] {
            let h = curve(q);
            let place = h.find_degree3_place(None).unwrap();
            let ell = h.ell_product(&place).unwrap();
            for pt in &place.pts {
                assert_eq!(h.intersection_multiplicity(pt, &ell).unwrap(), q as usize + 1);
            }
            let tangents = h.place_tangents(&place);
            for (i, t) in tangents.iter().enumerate() {
                assert_eq!(h.intersection_multiplicity(&place.pts[i], t).unwrap(), q as usize);
                assert_eq!(h.intersection_multiplicity(&place.pts[place.orientation[i]], t).unwrap(), 1);
            }
            // a line through P_1 and a rational point is not tangent
            let f = h.fq6().clone();
            let s = h.rational_affine_points()[1].map(|c| h.embedding().up(c));
            let p1 = place.pts[0];
            let line = BivarPoly::y(&f)
                .sub(&BivarPoly::constant(&f, s.y))
                .mul(&BivarPoly::constant(&f, f.sub(p1.x, s.x)))
                .sub(&BivarPoly::x(&f).sub(&BivarPoly::constant(&f, s.x)).mul(&BivarPoly::constant(&f, f.sub(p1.y, s.y))));
            assert_eq!(h.intersection_multiplicity(&p1, &line).unwrap(), 1);
        }
    }

    #[test]
    fn r_polynomial_divisor() {
        let q = 3;
        let h = curve(q);
        let r = h.r_polynomial();
        assert_eq!(r.degree(), Some(q * q - q + 1));
        let d = h.rational_affine_points();
        for pt in &d {
            assert_eq!(h.intersection_multiplicity(pt, &r).unwrap(), 1);
        }
        // the x factor meets H once at P_inf, so R has pole order deg(R)(q+1) - 1 = q^3
        let inf = CurvePoint::infinity(h.fq2());
        assert_eq!(h.intersection_multiplicity(&inf, &r).unwrap(), 1);
        let deg = r.degree().unwrap() as usize;
        assert_eq!(deg * (q as usize + 1) - 1, d.len());
    }

    #[test]
    fn vanishing_condition_rows() {
        let h = curve(3);
        let place = h.find_degree3_place(None).unwrap();
        let monos = [(0, 0), (1, 0), (0, 1)];
        let m = h.vanishing_conditions(&place.pts[0], &monos, 0).unwrap();
        assert_eq!(m.rows(), 0);
        let m = h.vanishing_conditions(&place.pts[0], &monos, 1).unwrap();
        let p = place.pts[0];
        assert_eq!(m.row(0), vec![h.fq6().one(), p.x, p.y]);
    }

    #[test]
    fn divisor_degree() {
        let h = curve(2);
        let place = h.find_degree3_place(None).unwrap();
        let a = Divisor::infinity_minus_place(12, 2, &place);
        assert_eq!(a.degree(), 6);
        let j = a.to_json(h.fq6(), PointFormat::Power);
        assert_eq!(j.parts.len(), 2);
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(serde_json::from_str::<DivisorJson>(&s).unwrap(), j);
    }
}
