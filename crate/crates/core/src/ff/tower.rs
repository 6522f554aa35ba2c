use std::collections::HashMap;
use std::sync::Arc;

use super::{fpoly, FieldCtx, FieldElem};
use crate::error::{Error, Result};

/// Largest subfield for which the full embedding table is materialised.
const TABLE_LIMIT: u32 = 1 << 16;

/// Field homomorphism GF(p^s) -> GF(p^b) for s | b, fixed by the image of the
/// small field's generator, together with coordinates of the big field as a
/// vector space over the embedded small field.
#[derive(Debug)]
pub struct TowerEmbedding {
    small: Arc<FieldCtx>,
    big: Arc<FieldCtx>,
    image_of_generator: FieldElem,
    /// image of every small element, indexed by packed value
    forward: Vec<FieldElem>,
    backward: HashMap<FieldElem, FieldElem>,
    /// `relative_degree x big.k` matrix over GF(p) mapping big-field digits to
    /// (small-coordinate, small-digit) pairs
    coord_matrix: Vec<Vec<u32>>,
    relative_degree: u32,
}

impl TowerEmbedding {
    /// With Conway-compatible moduli the small generator goes to
    /// `b^((|big|-1)/(|small|-1))`; otherwise the first power of that element
    /// that is a root of the small modulus is used.
    pub fn new(small: Arc<FieldCtx>, big: Arc<FieldCtx>) -> Result<Self> {
        let p = small.characteristic();
        if big.characteristic() != p || big.degree() % small.degree() != 0 {
            return Err(Error::pre(format!(
                "GF({}^{}) is not a subfield of GF({}^{})",
                p,
                small.degree(),
                big.characteristic(),
                big.degree()
            )));
        }
        if small.order() > TABLE_LIMIT {
            return Err(Error::Guard(format!("subfield of order {} too large to tabulate", small.order())));
        }
        let n_small = (small.order() - 1) as i64;
        let cofactor = (big.order() as i64 - 1) / n_small;
        let base = big.gen_pow(cofactor);
        let modulus = small.modulus().to_vec();
        let image = if big.eval_prime_poly(&modulus, base).is_zero() {
            base
        } else {
            (1..n_small)
                .filter(|j| num_integer::gcd(*j, n_small) == 1)
                .map(|j| big.pow(base, j as u64))
                .find(|&c| big.eval_prime_poly(&modulus, c).is_zero())
                .ok_or_else(|| Error::consistency("small modulus has no root in the big field"))?
        };
        // images of the GF(p)-basis 1, a, a^2, ...; then every element by linearity
        let k = small.degree() as usize;
        let basis: Vec<FieldElem> = (0..k).map(|i| big.pow(image, i as u64)).collect();
        let forward: Vec<FieldElem> = small
            .elements()
            .map(|e| small.coeffs(e).iter().zip(&basis).fold(big.zero(), |acc, (&c, &b)| big.add(acc, big.mul(big.from_int(c as i64), b))))
            .collect();
        let backward = small.elements().map(|e| (forward[e.raw() as usize], e)).collect();
        let relative_degree = big.degree() / small.degree();
        let coord_matrix = coordinate_matrix(&small, &big, &basis, relative_degree)?;
        Ok(TowerEmbedding { small, big, image_of_generator: image, forward, backward, coord_matrix, relative_degree })
    }

    pub fn small(&self) -> &Arc<FieldCtx> {
        &self.small
    }

    pub fn big(&self) -> &Arc<FieldCtx> {
        &self.big
    }

    pub fn image_of_generator(&self) -> FieldElem {
        self.image_of_generator
    }

    pub fn relative_degree(&self) -> u32 {
        self.relative_degree
    }

    pub fn embed(&self, e: FieldElem) -> Result<FieldElem> {
        if !self.small.contains(e) {
            return Err(Error::FieldMismatch { left: e.ctx_id(), right: self.small.id() });
        }
        Ok(self.forward[e.raw() as usize])
    }

    /// Infallible variant for callers that already hold a small-field element.
    pub fn up(&self, e: FieldElem) -> FieldElem {
        self.embed(e).expect("element of the small field")
    }

    /// Preimage of a big-field element lying in the embedded subfield.
    pub fn descend(&self, e: FieldElem) -> Option<FieldElem> {
        self.backward.get(&e).copied()
    }

    /// Coordinates of `e` with respect to the basis `1, b, b^2, ...` of the big
    /// field over the embedded small field (`b` the big generator).
    pub fn coordinates(&self, e: FieldElem) -> Vec<FieldElem> {
        let digits = self.big.coeffs(e);
        let ks = self.small.degree() as usize;
        let p = self.small.characteristic() as u64;
        (0..self.relative_degree as usize)
            .map(|j| {
                let small_digits: Vec<u32> = (0..ks)
                    .map(|i| {
                        let row = &self.coord_matrix[j * ks + i];
                        (row.iter().zip(&digits).map(|(&m, &d)| m as u64 * d as u64).sum::<u64>() % p) as u32
                    })
                    .collect();
                self.small.from_coeffs(&small_digits)
            })
            .collect()
    }

    /// `sum_j c_j b^j`, inverse of [`coordinates`](Self::coordinates).
    pub fn from_coordinates(&self, coords: &[FieldElem]) -> FieldElem {
        let b = self.big.generator();
        coords.iter().rev().fold(self.big.zero(), |acc, &c| self.big.add(self.big.mul(acc, b), self.up(c)))
    }
}

/// Invert the GF(p)-linear map `(c_{j,i}) -> sum_{i,j} c_{j,i} a^i b^j`.
fn coordinate_matrix(small: &FieldCtx, big: &FieldCtx, small_basis: &[FieldElem], rel: u32) -> Result<Vec<Vec<u32>>> {
    let p = big.characteristic();
    let n = big.degree() as usize;
    let ks = small.degree() as usize;
    // column (j*ks + i) holds the big-field digits of a^i b^j
    let mut cols = Vec::with_capacity(n);
    for j in 0..rel as usize {
        let bj = big.pow(big.generator(), j as u64);
        for &ai in small_basis.iter().take(ks) {
            cols.push(big.coeffs(big.mul(ai, bj)));
        }
    }
    // Gauss-Jordan on [M | I] over GF(p), M[r][c] = cols[c][r]
    let mut aug: Vec<Vec<u32>> = (0..n)
        .map(|r| {
            let mut row: Vec<u32> = (0..n).map(|c| cols[c][r]).collect();
            row.extend((0..n).map(|c| u32::from(c == r)));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| aug[r][col] != 0).ok_or_else(|| Error::consistency("generator powers do not span the big field"))?;
        aug.swap(col, pivot);
        let inv = fpoly::pow_mod(aug[col][col] as u64, (p - 2) as u64, p as u64) as u32;
        for x in aug[col].iter_mut() {
            *x = ((*x as u64 * inv as u64) % p as u64) as u32;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col] == 0 {
                continue;
            }
            let f = row[col] as u64;
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = ((*x as u64 + (p as u64 - f) * y as u64) % p as u64) as u32;
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
