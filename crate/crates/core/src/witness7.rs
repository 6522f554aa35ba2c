//! The degree-42 curve certifying a weight-20 word in `C_Omega(D, 18P)` at q = 7:
//! solve `R T = C A + B H` for C and check C against P, `P_inf` and D.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::codes::{build_cl_mp, scaling_vector};
use crate::curve::{CurvePoint, Hermitian};
use crate::error::{Error, Result};
use crate::ff::ConwayTable;
use crate::linalg::FieldMatrix;
use crate::poly::{uni_root_multiplicity, BivarPoly, PolyTerm};
use crate::rrspace::split_m;

/// Exponents of `P = (b^e1, b^e2)`, b the Conway generator of GF(7^6).
pub const WITNESS_POINT: [i64; 2] = [11896, 108645];

/// `(i, j, e, negated)` for `± a^e x^i y^j`, a the Conway generator of GF(49).
const WITNESS_T: [(u32, u32, i64, bool); 9] = [
    (3, 0, 26, false),
    (2, 1, 39, false),
    (1, 2, 32, false),
    (2, 0, 45, false),
    (1, 1, 40, false),
    (0, 2, 18, false),
    (1, 0, 41, false),
    (0, 1, 45, false),
    (0, 0, 0, true),
];

const WITNESS_A: [(u32, u32, i64, bool); 15] = [
    (4, 0, 25, false),
    (3, 1, 7, false),
    (2, 2, 0, false),
    (1, 3, 10, false),
    (0, 4, 44, false),
    (3, 0, 4, false),
    (2, 1, 19, false),
    (1, 2, 4, false),
    (0, 3, 9, false),
    (2, 0, 37, false),
    (1, 1, 2, false),
    (0, 2, 3, false),
    (1, 0, 37, false),
    (0, 1, 41, false),
    (0, 0, 10, false),
];

/// Witness data; coefficients as generator powers (`PolyTerm::c`, -1 for zero).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessInput {
    pub q: u32,
    pub m: u32,
    /// exponents of the coordinates of `P_1` over GF(q^6)
    pub point: [i64; 2],
    pub t: Vec<PolyTerm>,
    pub a: Vec<PolyTerm>,
}

fn signed_terms(h: &Hermitian, terms: &[(u32, u32, i64, bool)]) -> Vec<PolyTerm> {
    let f = h.fq2();
    terms
        .iter()
        .map(|&(i, j, e, neg)| {
            let c = f.gen_pow(e);
            PolyTerm { x: i, y: j, c: f.power_code(if neg { f.neg(c) } else { c }) }
        })
        .collect()
}

impl WitnessInput {
    /// The constants of the q = 7, m = 18 certificate.
    pub fn embedded(h: &Hermitian) -> Result<Self> {
        if h.q() != 7 {
            return Err(Error::pre("the embedded witness is for q = 7"));
        }
        Ok(WitnessInput { q: 7, m: 18, point: WITNESS_POINT, t: signed_terms(h, &WITNESS_T), a: signed_terms(h, &WITNESS_A) })
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&s)?)
    }
}

/// Validated input with its polynomials built.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub q: u32,
    pub m: u32,
    pub point: CurvePoint,
    pub r: BivarPoly,
    pub t: BivarPoly,
    pub a: BivarPoly,
}

pub fn prepare(h: &Hermitian, input: &WitnessInput) -> Result<Prepared> {
    if input.q != h.q() {
        return Err(Error::pre(format!("input is for q = {}, curve has q = {}", input.q, h.q())));
    }
    let f6 = h.fq6();
    let point = CurvePoint::affine(f6, f6.gen_pow(input.point[0]), f6.gen_pow(input.point[1]));
    if !h.on_curve(f6, &point) {
        return Err(Error::pre("P is not on H"));
    }
    if h.embedding().descend(point.x).is_some() && h.embedding().descend(point.y).is_some() {
        return Err(Error::pre("P must not be GF(q^2)-rational"));
    }
    let f2 = h.fq2();
    Ok(Prepared {
        q: input.q,
        m: input.m,
        point,
        r: h.r_polynomial(),
        t: BivarPoly::from_terms(f2, &input.t),
        a: BivarPoly::from_terms(f2, &input.a),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftSystem {
    /// C in normal form modulo H; B recovered by exact division
    Reduced,
    /// C and B with all monomials of their degrees as unknowns
    Full,
}

#[derive(Clone, Debug)]
pub struct WitnessResult {
    pub c: BivarPoly,
    pub b: BivarPoly,
    pub unknowns: usize,
    pub equations: usize,
}

fn monos_up_to(d: u32, max_x: Option<u32>) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for s in 0..=d {
        for i in (0..=s).rev() {
            if max_x.is_none_or(|mx| i <= mx) {
                v.push((i, s - i));
            }
        }
    }
    v
}

/// Solve `R T = C A + B H` with `deg C <= deg(RT) - deg A`, `deg B <= deg(RT) - q - 1`.
pub fn solve_lift(q: u32, r: &BivarPoly, t: &BivarPoly, a: &BivarPoly, system: LiftSystem) -> Result<WitnessResult> {
    let f = r.ctx().clone();
    let rt = r.mul(t);
    let (Some(d_rt), Some(d_a)) = (rt.degree(), a.degree()) else {
        return Err(Error::pre("R T and A must be nonzero"));
    };
    if d_a > d_rt {
        return Err(Error::pre("deg A exceeds deg R T"));
    }
    let dc = d_rt - d_a;
    let hpoly = BivarPoly::hermitian(&f, q);
    let c_monos = monos_up_to(dc, if system == LiftSystem::Reduced { Some(q) } else { None });
    let b_monos = match system {
        LiftSystem::Reduced => Vec::new(),
        LiftSystem::Full => monos_up_to(d_rt.saturating_sub(q + 1), None),
    };
    let reduce = |p: BivarPoly| if system == LiftSystem::Reduced { p.reduce_hermitian(q) } else { p };
    let mut cols: Vec<BivarPoly> = c_monos.iter().map(|&(i, j)| reduce(BivarPoly::monomial(&f, f.one(), i, j).mul(a))).collect();
    cols.extend(b_monos.iter().map(|&(i, j)| BivarPoly::monomial(&f, f.one(), i, j).mul(&hpoly)));
    let rhs = reduce(rt.clone());
    let mut rows: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for p in cols.iter().chain(std::iter::once(&rhs)) {
        for (e, _) in p.terms() {
            let next = rows.len();
            rows.entry(e).or_insert(next);
        }
    }
    let mut m = FieldMatrix::zeros(&f, rows.len(), cols.len());
    for (c, p) in cols.iter().enumerate() {
        for (e, v) in p.terms() {
            m.set(rows[&e], c, v);
        }
    }
    let mut b = vec![f.zero(); rows.len()];
    for (e, v) in rhs.terms() {
        b[rows[&e]] = v;
    }
    log::info!("lift system ({system:?}): {} equations, {} unknowns", rows.len(), cols.len());
    let sol = m.solve(&b)?.ok_or_else(|| Error::consistency("R T is not in the ideal (A, H) within the degree bounds"))?;
    let nc = c_monos.len();
    let c = BivarPoly::from_coeffs(&f, &c_monos, &sol[..nc]);
    let bpoly = match system {
        LiftSystem::Full => BivarPoly::from_coeffs(&f, &b_monos, &sol[nc..]),
        LiftSystem::Reduced => {
            let (quo, rem) = rt.sub(&c.mul(a)).hermitian_div_rem(q);
            if !rem.is_zero() {
                return Err(Error::consistency("R T - C A is not divisible by H"));
            }
            quo
        }
    };
    if !rt.sub(&c.mul(a)).sub(&bpoly.mul(&hpoly)).is_zero() {
        return Err(Error::consistency("lift identity fails"));
    }
    Ok(WitnessResult { c, b: bpoly, unknowns: cols.len(), equations: rows.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityCheck {
    pub branch: usize,
    /// root multiplicity at `x = P_1` of `C(x, P_1^q x - P_2^q)`; `None` if that is
    /// identically zero
    pub tangent: Option<usize>,
    pub expected: usize,
    pub passed: bool,
}

/// `I(P, C . H)` by the branch of H at P and by substituting the tangent at P. The
/// tangent meets H to order q at P, so the two agree below q.
pub fn check_multiplicity(h: &Hermitian, c: &BivarPoly, pt: &CurvePoint, expected: usize) -> Result<MultiplicityCheck> {
    let q = h.q() as usize;
    let branch = h.intersection_multiplicity(pt, c)?;
    let f6 = h.fq6();
    let c6 = if c.ctx().id() == f6.id() { c.clone() } else { c.embed(h.embedding())? };
    let qq = h.q() as u64;
    let uni = c6.substitute_y_linear(f6.pow(pt.x, qq), f6.neg(f6.pow(pt.y, qq)));
    let tangent = (!uni.is_empty()).then(|| uni_root_multiplicity(f6, &uni, pt.x));
    let agree = match tangent {
        _ if branch < q => tangent == Some(branch),
        Some(t) => t >= q,
        None => true,
    };
    if !agree {
        return Err(Error::consistency(format!("branch multiplicity {branch} but tangent substitution gives {tangent:?}")));
    }
    Ok(MultiplicityCheck { branch, tangent, expected, passed: branch == expected })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfinityCheck {
    pub degree: u32,
    pub expected_degree: u32,
    /// coefficient of `y^deg` is zero, i.e. C passes through (0:1:0)
    pub top_y_absent: bool,
    pub passed: bool,
}

pub fn check_infinity(c: &BivarPoly, expected_degree: u32) -> InfinityCheck {
    let degree = c.degree().unwrap_or(0);
    let top_y_absent = c.coeff(0, degree).is_zero();
    InfinityCheck { degree, expected_degree, top_y_absent, passed: degree == expected_degree && top_y_absent }
}

/// Number of affine GF(q^2)-points of H where C does not vanish.
pub fn count_off_curve(h: &Hermitian, c: &BivarPoly) -> usize {
    h.rational_affine_points().iter().filter(|p| !c.eval(p.x, p.y).is_zero()).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub q: u32,
    pub m: u32,
    pub n: i64,
    pub k: i64,
    pub delta: i64,
    pub point: [i64; 2],
    pub system: LiftSystem,
    pub unknowns: usize,
    pub equations: usize,
    pub c_degree: u32,
    pub b_degree: Option<u32>,
    pub c: Vec<PolyTerm>,
    pub lift_identity: bool,
    pub multiplicity: MultiplicityCheck,
    pub infinity: InfinityCheck,
    pub affine_points: usize,
    pub off_curve: usize,
    /// the word, moved into `C_Omega(D, mP)`, is orthogonal to `C_L(D, mP)`
    pub omega_orthogonal: Option<bool>,
    pub guaranteed_lower: Option<i64>,
    /// `d` when the witness weight meets the lower bound
    pub minimum_distance: Option<i64>,
    pub conclusion: String,
}

/// Run the lift and all checks. With `orthogonality`, also maps the word into
/// `C_Omega(D, mP)` and tests it against `C_L(D, mP)`.
pub fn verify(h: &Hermitian, input: &WitnessInput, system: LiftSystem, orthogonality: bool) -> Result<WitnessReport> {
    let prep = prepare(h, input)?;
    let q = prep.q;
    let des = bounds::designed(q, prep.m)?;
    let (m1, m0) = split_m(q, prep.m);
    let res = solve_lift(q, &prep.r, &prep.t, &prep.a, system)?;
    let c = res.c.clone();
    let multiplicity = check_multiplicity(h, &c, &prep.point, m0 as usize)?;
    let expected_degree = q * q - 3 * m1 - 1;
    let infinity = check_infinity(&c, expected_degree);
    let affine_points = h.rational_affine_points().len();
    let off_curve = count_off_curve(h, &c);
    let omega_orthogonal = if orthogonality { Some(omega_orthogonal(h, &prep, &c)?) } else { None };
    let guaranteed_lower = bounds::main_theorem(q, prep.m).ok().map(|b| b.guaranteed);
    let all_checks = multiplicity.passed && infinity.passed && omega_orthogonal != Some(false);
    let minimum_distance = match guaranteed_lower {
        Some(g) if all_checks && g == off_curve as i64 => Some(g),
        _ => None,
    };
    let conclusion = match minimum_distance {
        Some(d) => format!("minimum distance = {d}, matching [{},{},{d}]", des.n, des.k),
        None if all_checks => format!("codeword of weight {off_curve} found; d <= {off_curve}"),
        None => "witness checks failed".to_string(),
    };
    Ok(WitnessReport {
        q,
        m: prep.m,
        n: des.n,
        k: des.k,
        delta: des.delta,
        point: input.point,
        system,
        unknowns: res.unknowns,
        equations: res.equations,
        c_degree: c.degree().unwrap_or(0),
        b_degree: res.b.degree(),
        c: c.to_terms(),
        lift_identity: true,
        multiplicity,
        infinity,
        affine_points,
        off_curve,
        omega_orthogonal,
        guaranteed_lower,
        minimum_distance,
        conclusion,
    })
}

/// `w_S = u_S^-1 l(S)^m1 C(S)` against every row of `C_L(D, mP)`.
fn omega_orthogonal(h: &Hermitian, prep: &Prepared, c: &BivarPoly) -> Result<bool> {
    let q = prep.q;
    let (m1, _) = split_m(q, prep.m);
    let place = h.place_from_point(prep.point)?;
    let ell = h.ell_product(&place)?;
    let u = scaling_vector(h)?;
    let f = h.fq2();
    let w: Vec<_> =
        u.points.iter().zip(&u.entries).map(|(p, &us)| f.mul(f.div(f.pow(ell.eval(p.x, p.y), m1 as u64), us), c.eval(p.x, p.y))).collect();
    let mp = build_cl_mp(h, &place, prep.m)?;
    Ok(mp.generator.mul_vec(&w)?.iter().all(|e| e.is_zero()))
}

/// Convenience: curve plus the embedded input.
pub fn embedded_setup(table: &ConwayTable) -> Result<(Hermitian, WitnessInput)> {
    let h = Hermitian::new(7, table)?;
    let input = WitnessInput::embedded(&h)?;
    Ok((h, input))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Hermitian, WitnessInput) {
        embedded_setup(&ConwayTable::builtin().unwrap()).unwrap()
    }

    #[test]
    fn input_invariants() {
        let (h, input) = setup();
        let p = prepare(&h, &input).unwrap();
        assert_eq!(p.t.degree(), Some(3));
        assert_eq!(p.a.degree(), Some(4));
        assert_eq!(p.r.degree(), Some(43));
        // a = b^((7^6-1)/48) under the tower embedding
        let f2 = h.fq2();
        assert_eq!(h.embedding().up(f2.generator()), h.fq6().gen_pow(117648 / 48));
        // constant term of T is -1
        assert_eq!(p.t.coeff(0, 0), f2.neg(f2.one()));
    }

    #[test]
    fn trivial_lift() {
        let (h, _) = setup();
        let f = h.fq2();
        let r = h.r_polynomial();
        let one = BivarPoly::constant(f, f.one());
        let res = solve_lift(7, &r, &one, &one, LiftSystem::Reduced).unwrap();
        assert_eq!(res.c, r);
        assert!(res.b.is_zero());
    }

    #[test]
    fn embedded_witness() {
        let (h, input) = setup();
        let rep = verify(&h, &input, LiftSystem::Reduced, false).unwrap();
        assert_eq!(rep.c_degree, 42);
        assert!(rep.b_degree.unwrap() <= 38);
        assert_eq!(rep.multiplicity.branch, 2);
        assert_eq!(rep.multiplicity.tangent, Some(2));
        assert!(rep.infinity.passed);
        assert_eq!(rep.affine_points, 343);
        assert_eq!(rep.off_curve, 20);
        assert_eq!(rep.minimum_distance, Some(20));
        assert_eq!((rep.unknowns, rep.equations), (316, 348));
    }

    #[test]
    fn negative_controls() {
        let (h, input) = setup();
        let prep = prepare(&h, &input).unwrap();
        let f6 = h.fq6();
        let pt = prep.point;
        // the tangent itself meets H to order q
        let tan = h.tangent_line(f6, &pt).to_poly(f6);
        assert_eq!(h.intersection_multiplicity(&pt, &tan).unwrap(), 7);
        // a non-tangent line through P
        let other = BivarPoly::y(f6).sub(&BivarPoly::constant(f6, pt.y));
        let chk = check_multiplicity(&h, &other, &pt, 2).unwrap();
        assert_eq!(chk.branch, 1);
        assert!(!chk.passed);
        // R vanishes on all of D
        assert_eq!(count_off_curve(&h, &prep.r), 0);
        // perturbing A breaks the certificate
        let mut bad = input.clone();
        bad.a[0].c = (bad.a[0].c + 1) % 48;
        let broken = match verify(&h, &bad, LiftSystem::Reduced, false) {
            Err(_) => true,
            Ok(r) => r.minimum_distance.is_none(),
        };
        assert!(broken);
        // y^42 term added
        let res = solve_lift(7, &prep.r, &prep.t, &prep.a, LiftSystem::Reduced).unwrap();
        let f2 = h.fq2();
        let spoiled = res.c.add(&BivarPoly::monomial(f2, f2.one(), 0, 42));
        assert!(!check_infinity(&spoiled, 42).passed);
    }

    #[test]
    fn y42_invariant_under_h_multiples() {
        // the top form of H is x^8, so G H never contributes y^42 when deg G <= 34
        let (h, input) = setup();
        let prep = prepare(&h, &input).unwrap();
        let res = solve_lift(7, &prep.r, &prep.t, &prep.a, LiftSystem::Reduced).unwrap();
        let f2 = h.fq2();
        let hp = BivarPoly::hermitian(f2, 7);
        for (i, j) in [(0u32, 34u32), (34, 0), (10, 24), (0, 0)] {
            let g = BivarPoly::monomial(f2, f2.gen_pow(5), i, j);
            let c2 = res.c.add(&g.mul(&hp));
            assert_eq!(c2.coeff(0, 42), res.c.coeff(0, 42));
            assert_eq!(count_off_curve(&h, &c2), 20);
        }
    }

    #[test]
    fn full_system_and_omega_word() {
        let (h, input) = setup();
        let prep = prepare(&h, &input).unwrap();
        let red = solve_lift(7, &prep.r, &prep.t, &prep.a, LiftSystem::Reduced).unwrap();
        let full = solve_lift(7, &prep.r, &prep.t, &prep.a, LiftSystem::Full).unwrap();
        assert_eq!(full.c.reduce_hermitian(7), red.c);
        let rep = verify(&h, &input, LiftSystem::Reduced, true).unwrap();
        assert_eq!(rep.omega_orthogonal, Some(true));
    }
}
