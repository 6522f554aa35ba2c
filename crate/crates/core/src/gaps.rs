//! Weierstrass gaps at a degree-3 place: closed form, maximal runs, and the
//! dimension-jump oracle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{Hermitian, Place3};
use crate::error::{Error, Result};
use crate::rrspace::dim_l_mp;

/// Largest q the oracle accepts.
pub const ORACLE_MAX_Q: u32 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRun {
    pub start: u32,
    pub end: u32,
    pub u: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSet {
    pub q: u32,
    pub gaps: Vec<u32>,
    pub runs: Vec<GapRun>,
}

/// `{ u(q+1) - v : 0 <= v <= q, 0 < 3u <= v }`.
pub fn gap_set_formula(q: u32) -> GapSet {
    let mut gaps = Vec::new();
    for u in 1..=q / 3 {
        for v in 3 * u..=q {
            gaps.push(u * (q + 1) - v);
        }
    }
    gaps.sort_unstable();
    let runs = runs_of(q, &gaps);
    GapSet { q, gaps, runs }
}

/// Split a sorted gap list into maximal blocks of consecutive integers. Each block is
/// tagged with the `u` of the formula; a block mixing two values of `u` is not expected
/// and gets the `u` of its first element.
fn runs_of(q: u32, gaps: &[u32]) -> Vec<GapRun> {
    let mut runs: Vec<GapRun> = Vec::new();
    for &g in gaps {
        match runs.last_mut() {
            Some(r) if r.end + 1 == g => r.end = g,
            _ => runs.push(GapRun { start: g, end: g, u: g.div_ceil(q + 1) }),
        }
    }
    runs
}

/// Gaps found as the `m >= 1` with `dim L(mP) = dim L((m-1)P)`, scanning up to
/// `ceil((2g-1)/3) + 1`.
pub fn gap_set_oracle(h: &Hermitian, place: &Place3) -> Result<GapSet> {
    let q = h.q();
    if q > ORACLE_MAX_Q {
        return Err(Error::Guard(format!("gap oracle limited to q <= {ORACLE_MAX_Q}")));
    }
    let g = h.genus() as i64;
    let top = ((2 * g - 1).max(0) + 2) / 3 + 1;
    let dims: Vec<usize> = (0..=top).into_par_iter().map(|m| dim_l_mp(h, place, m)).collect::<Result<_>>()?;
    for w in dims.windows(2) {
        if w[1] < w[0] || w[1] > w[0] + 3 {
            return Err(Error::consistency(format!("dimension step {} -> {} is impossible", w[0], w[1])));
        }
    }
    let gaps: Vec<u32> = (1..=top as usize).filter(|&m| dims[m] == dims[m - 1]).map(|m| m as u32).collect();
    let runs = runs_of(q, &gaps);
    Ok(GapSet { q, gaps, runs })
}

/// The maximal gap run `k..k+t` with `m = 2k + t - 1`, if any. Runs are disjoint and
/// `2k + t - 1` is increasing along them, so at most one run matches.
pub fn mm_gap_run_for_m(q: u32, m: u32) -> Option<(u32, u32)> {
    gap_set_formula(q).runs.iter().map(|r| (r.start, r.end - r.start)).filter(|&(k, t)| 2 * k + t == m + 1).max_by_key(|&(_, t)| t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        let g7 = gap_set_formula(7);
        assert_eq!(g7.gaps, vec![1, 2, 3, 4, 5, 9, 10]);
        assert_eq!(g7.runs, vec![GapRun { start: 1, end: 5, u: 1 }, GapRun { start: 9, end: 10, u: 2 }]);
        assert!(gap_set_formula(2).gaps.is_empty());
        assert_eq!(gap_set_formula(5).gaps, vec![1, 2, 3]);
        assert_eq!(gap_set_formula(3).gaps, vec![1]);
    }

    #[test]
    fn run_blocks_follow_closed_form() {
        // block for u spans (u-1)q + u .. u(q-2), with q - 3u + 1 gaps
        for q in 2..=32 {
            let gs = gap_set_formula(q);
            for r in &gs.runs {
                assert_eq!(r.start, (r.u - 1) * q + r.u);
                assert_eq!(r.end, r.u * (q - 2));
                assert_eq!(r.end - r.start + 1, q - 3 * r.u + 1);
            }
            let g = q * (q - 1) / 2;
            assert!(gs.gaps.iter().all(|&x| x <= (2 * g).saturating_sub(1).div_ceil(3)));
        }
    }

    #[test]
    fn oracle_small_q() {
        let table = crate::ff::ConwayTable::builtin().unwrap();
        for q in [3, 5] {
            let h = Hermitian::new(q, &table).unwrap();
            let place = h.find_degree3_place(None).unwrap();
            assert_eq!(gap_set_oracle(&h, &place).unwrap(), gap_set_formula(q));
        }
    }

    #[test]
    fn mm_runs() {
        assert_eq!(mm_gap_run_for_m(7, 18), Some((9, 1)));
        assert_eq!(mm_gap_run_for_m(7, 5), Some((1, 4)));
        assert_eq!(mm_gap_run_for_m(7, 17), None);
        assert_eq!(mm_gap_run_for_m(5, 3), Some((1, 2)));
    }
}
