//! Riemann-Roch spaces attached to a degree-3 place `P` and the point `P_inf`,
//! computed as nullspaces of vanishing conditions along branches of H.
//!
//! `L(mP)` uses the adjoint description: with `m = u(q+1) - v`, `0 <= v <= q`,
//! every element is `f / (l_1 l_2 l_3)^u` with `deg f <= 3u` and `ord_{P_i} f >= v`.

use serde::{Deserialize, Serialize};

use crate::curve::{Divisor, Hermitian, Place3, PlaceId};
use crate::error::{Error, Result};
use crate::ff::{FieldElem, TowerEmbedding};
use crate::linalg::FieldMatrix;
use crate::poly::{BivarPoly, PolyTerm};

/// Basis of a Riemann-Roch space: `numerator / (l_1 l_2 l_3)^denominator_exponent`.
#[derive(Clone, Debug)]
pub struct RRBasis {
    pub divisor: Divisor,
    pub denominator_exponent: u32,
    pub numerators: Vec<BivarPoly>,
    /// numerators have GF(q^2) coefficients
    pub rational: bool,
}

impl RRBasis {
    pub fn dim(&self) -> usize {
        self.numerators.len()
    }

    pub fn to_json(&self) -> RRBasisJson {
        RRBasisJson {
            divisor_degree: self.divisor.degree(),
            denominator_exponent: self.denominator_exponent,
            rational: self.rational,
            numerators: self.numerators.iter().map(BivarPoly::to_terms).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RRBasisJson {
    pub divisor_degree: i64,
    pub denominator_exponent: u32,
    pub rational: bool,
    pub numerators: Vec<Vec<PolyTerm>>,
}

/// `m = u(q+1) - v` with `0 <= v <= q`.
pub fn decompose(q: u32, m: u32) -> (u32, u32) {
    let u = m.div_ceil(q + 1);
    (u, u * (q + 1) - m)
}

/// `m = m1 (q+1) + m0` with `0 <= m0 <= q`.
pub fn split_m(q: u32, m: u32) -> (u32, u32) {
    (m / (q + 1), m % (q + 1))
}

/// All `x^i y^j` with `i + j <= d`, by degree then by `j`.
pub fn monomials_up_to(d: u32) -> Vec<(u32, u32)> {
    (0..=d).flat_map(|s| (0..=s).map(move |j| (s - j, j))).collect()
}

fn count_up_to(d: i64) -> usize {
    if d < 0 {
        0
    } else {
        ((d + 1) * (d + 2) / 2) as usize
    }
}

/// `x^i y^j` with `j <= q-1` and pole order `iq + j(q+1) <= n`, by increasing pole order.
pub fn weierstrass_monomials(q: u32, n: i64) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    if n < 0 {
        return out;
    }
    for j in 0..q {
        let mut i = 0u32;
        while (i as i64) * q as i64 + (j as i64) * (q as i64 + 1) <= n {
            out.push((i, j));
            i += 1;
        }
    }
    out.sort_by_key(|&(i, j)| i * q + j * (q + 1));
    out
}

/// Basis of `L(n P_inf)` over GF(q^2).
pub fn basis_l_at_infinity(h: &Hermitian, n: i64) -> RRBasis {
    let f = h.fq2();
    let numerators = weierstrass_monomials(h.q(), n).into_iter().map(|(i, j)| BivarPoly::monomial(f, f.one(), i, j)).collect();
    RRBasis { divisor: Divisor::new().with(PlaceId::Infinity, n), denominator_exponent: 0, numerators, rational: true }
}

/// GF(q^2)-linear conditions equivalent to the GF(q^6)-linear ones in `m`, for unknowns
/// ranging over GF(q^2): each row is split into its coordinates over `1, b, b^2`.
pub fn restrict_scalars(emb: &TowerEmbedding, m: &FieldMatrix) -> Result<FieldMatrix> {
    let small = emb.small();
    let rel = emb.relative_degree() as usize;
    let mut out = FieldMatrix::zeros(small, 0, m.cols());
    for r in 0..m.rows() {
        let coords: Vec<Vec<FieldElem>> = m.row(r).into_iter().map(|e| emb.coordinates(e)).collect();
        for k in 0..rel {
            let row: Vec<FieldElem> = coords.iter().map(|c| c[k]).collect();
            out.push_row(&row)?;
        }
    }
    Ok(out)
}

/// `dim L(mP)`: vanishing to order `v` at all three points over GF(q^6), modulo the
/// multiples of H of degree `<= 3u`, which are counted, not computed.
pub fn dim_l_mp(h: &Hermitian, place: &Place3, m: i64) -> Result<usize> {
    if m < 0 {
        return Err(Error::pre(format!("m = {m} must be non-negative")));
    }
    let q = h.q();
    let (u, v) = decompose(q, m as u32);
    let monos = monomials_up_to(3 * u);
    let mut conds = FieldMatrix::zeros(h.fq6(), 0, monos.len());
    for pt in &place.pts {
        conds = conds.vstack(&h.vanishing_conditions(pt, &monos, v as usize)?)?;
    }
    let nullity = monos.len() - conds.rank();
    let multiples_of_h = count_up_to(3 * u as i64 - (q as i64 + 1));
    nullity.checked_sub(multiples_of_h).ok_or_else(|| Error::consistency("adjoint space smaller than the multiples of H"))
}

/// GF(q^2)-rational basis of `L(mP)`: numerators in normal form modulo H (`deg_x <= q`),
/// conditions at `P_1` only, solved after restriction of scalars.
pub fn basis_l_mp(h: &Hermitian, place: &Place3, m: i64) -> Result<RRBasis> {
    if m < 0 {
        return Err(Error::pre(format!("m = {m} must be non-negative")));
    }
    let q = h.q();
    let (u, v) = decompose(q, m as u32);
    let monos: Vec<(u32, u32)> = monomials_up_to(3 * u).into_iter().filter(|&(i, _)| i <= q).collect();
    let conds = h.vanishing_conditions(&place.pts[0], &monos, v as usize)?;
    let restricted = restrict_scalars(h.embedding(), &conds)?;
    let ns = restricted.nullspace();
    let numerators = ns.to_rows().iter().map(|c| BivarPoly::from_coeffs(h.fq2(), &monos, c)).collect();
    Ok(RRBasis { divisor: Divisor::new().with(PlaceId::Degree3(place.clone()), m), denominator_exponent: u, numerators, rational: true })
}

/// GF(q^2)-basis of `L(n P_inf - m P)` for `m >= 0`: Weierstrass monomials of pole order
/// `<= n` vanishing to order `m` at `P_1`.
pub fn basis_l_inf_minus_place(h: &Hermitian, place: &Place3, n: i64, m: u32) -> Result<RRBasis> {
    let monos = weierstrass_monomials(h.q(), n);
    let numerators = if monos.is_empty() {
        Vec::new()
    } else {
        let conds = h.vanishing_conditions(&place.pts[0], &monos, m as usize)?;
        let restricted = restrict_scalars(h.embedding(), &conds)?;
        let ns = restricted.nullspace();
        ns.to_rows().iter().map(|c| BivarPoly::from_coeffs(h.fq2(), &monos, c)).collect()
    };
    Ok(RRBasis { divisor: Divisor::infinity_minus_place(n, m as i64, place), denominator_exponent: 0, numerators, rational: true })
}

/// `q^3 + q^2 - q - 2`, the pole order in `A_1`.
pub fn a1_pole_order(q: u32) -> i64 {
    let q = q as i64;
    q * q * q + q * q - q - 2
}

/// `(q^2 - q - 2) <= 3m <= 2q^2 - q - 2`.
pub fn in_code_range(q: u32, m: u32) -> bool {
    let (q, m3) = (q as i64, 3 * m as i64);
    q * q - q - 2 <= m3 && m3 <= 2 * q * q - q - 2
}

/// `q^3 + (q^2 - q - 2)/2 - 3m`.
pub fn a1_dimension(q: u32, m: u32) -> i64 {
    let q = q as i64;
    q * q * q + (q * q - q - 2) / 2 - 3 * m as i64
}

/// Basis of `L(A_1)`, `A_1 = (q^3+q^2-q-2) P_inf - m P`.
pub fn basis_l_a1(h: &Hermitian, place: &Place3, m: u32) -> Result<RRBasis> {
    let q = h.q();
    if !in_code_range(q, m) {
        return Err(Error::pre(format!("m = {m} outside q^2-q-2 <= 3m <= 2q^2-q-2 for q = {q}")));
    }
    let basis = basis_l_inf_minus_place(h, place, a1_pole_order(q), m)?;
    let expected = a1_dimension(q, m);
    if basis.dim() as i64 != expected {
        return Err(Error::consistency(format!("dim L(A1) = {} but Riemann-Roch gives {expected}", basis.dim())));
    }
    Ok(basis)
}

/// Pole order of `A_2 = (q^2 - 3 m_1 - 1)(q+1) P_inf - (P_inf + m_0 P)` at `P_inf`.
pub fn a2_pole_order(q: u32, m: u32) -> i64 {
    let (m1, _) = split_m(q, m);
    (q as i64 * q as i64 - 3 * m1 as i64 - 1) * (q as i64 + 1) - 1
}

/// Basis of `L(A_2)`.
pub fn basis_l_a2(h: &Hermitian, place: &Place3, m: u32) -> Result<RRBasis> {
    let q = h.q();
    let (_, m0) = split_m(q, m);
    basis_l_inf_minus_place(h, place, a2_pole_order(q, m), m0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::ConwayTable;

    fn curve(q: u32) -> Hermitian {
        Hermitian::new(q, &ConwayTable::builtin().unwrap()).unwrap()
    }

    #[test]
    fn decompositions() {
        assert_eq!(decompose(7, 0), (0, 0));
        assert_eq!(decompose(7, 5), (1, 3));
        assert_eq!(decompose(7, 8), (1, 0));
        assert_eq!(decompose(7, 9), (2, 7));
        assert_eq!(split_m(7, 18), (2, 2));
    }

    #[test]
    fn weierstrass_monomial_counts() {
        // lattice count against Riemann-Roch n + 1 - g for n > 2g - 2
        let n = a1_pole_order(7);
        assert_eq!(n, 383);
        assert_eq!(weierstrass_monomials(7, n).len(), 363);
        assert_eq!(weierstrass_monomials(2, 0), vec![(0, 0)]);
        assert_eq!(weierstrass_monomials(2, 3), vec![(0, 0), (1, 0), (0, 1)]);
        for q in [2u32, 3, 4, 5] {
            let g = (q * (q - 1) / 2) as i64;
            for n in (2 * g - 1)..(2 * g + 30) {
                assert_eq!(weierstrass_monomials(q, n).len() as i64, n + 1 - g);
            }
        }
    }

    #[test]
    fn small_dimensions() {
        let h = curve(3);
        let place = h.find_degree3_place(None).unwrap();
        assert_eq!(dim_l_mp(&h, &place, 0).unwrap(), 1);
        let b = basis_l_mp(&h, &place, 0).unwrap();
        assert_eq!((b.dim(), b.denominator_exponent), (1, 0));
        assert!(dim_l_mp(&h, &place, -1).is_err());
        assert_eq!(basis_l_a1(&h, &place, 2).unwrap().dim(), 23);
        let h2 = curve(2);
        let p2 = h2.find_degree3_place(None).unwrap();
        assert_eq!(basis_l_a1(&h2, &p2, 1).unwrap().dim(), 5);
        assert!(matches!(basis_l_a1(&h2, &p2, 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn a1_numerators_vanish_at_place() {
        let h = curve(3);
        let place = h.find_degree3_place(None).unwrap();
        let b = basis_l_a1(&h, &place, 3).unwrap();
        for g in &b.numerators {
            for pt in &place.pts {
                assert!(h.intersection_multiplicity(pt, g).unwrap() >= 3);
            }
        }
    }

    #[test]
    fn mp_basis_matches_dimension_and_has_poles_only_at_p() {
        let h = curve(4);
        let place = h.find_degree3_place(None).unwrap();
        let ell = h.ell_product(&place).unwrap();
        let d = h.rational_affine_points();
        for m in 0..10 {
            let b = basis_l_mp(&h, &place, m).unwrap();
            assert_eq!(b.dim(), dim_l_mp(&h, &place, m).unwrap(), "m = {m}");
            // numerators are independent modulo H
            let f = h.fq2();
            let monos: Vec<(u32, u32)> = monomials_up_to(3 * b.denominator_exponent);
            let rows: Vec<Vec<FieldElem>> = b
                .numerators
                .iter()
                .map(|g| {
                    let r = g.reduce_hermitian(h.q());
                    monos.iter().map(|&(i, j)| r.coeff(i, j)).collect()
                })
                .collect();
            assert_eq!(FieldMatrix::from_rows(f, monos.len(), &rows).unwrap().rank(), b.dim());
            for s in d.iter().take(20) {
                assert!(!ell.eval(s.x, s.y).is_zero());
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let h = curve(2);
        let b = basis_l_at_infinity(&h, 5);
        let j = b.to_json();
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(serde_json::from_str::<RRBasisJson>(&s).unwrap(), j);
        assert_eq!(j.numerators.len(), 5);
    }
}
