//! The acceptance checks, runnable from the `selftest` subcommand and the test suite.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, TABLE_QS};
use crate::codes::{self, DistanceMethod, ENUM_GUARD};
use crate::curve::{Extension, Hermitian};
use crate::error::{Error, Result};
use crate::ff::{ConwayTable, FieldCtx};
use crate::gaps::{gap_set_formula, gap_set_oracle};
use crate::linalg::FieldMatrix;
use crate::rrspace::{basis_l_inf_minus_place, basis_l_mp, dim_l_mp, weierstrass_monomials};
use crate::witness7::{self, LiftSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Outcome {
    pub id: u8,
    pub title: String,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        let s = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        format!("criterion {:>2} {s} ({:.1}s) {}: {}", self.id, self.seconds, self.title, self.detail)
    }
}

/// Reference rows of the improvement table, one per q.
pub const REFERENCE_TABLE: [(u32, &str); 7] = [
    (5, "7, 8"),
    (7, "18"),
    (8, "20, 21, 22, 23, 24, 28, 29, 30"),
    (9, "24, 25, 26, 32, 33, 41"),
    (11, "38, 39, 40, 41, 42, 43, 44, 50, 51, 52, 61, 62, 63"),
    (13, "59, 60, 61, 62, 63, 64, 65, 72, 73, 74, 86, 87, 88"),
    (16, "88, 89, 90, 91, 92, 93, 94, 95, 96, 105, 106, 107, 108, 109, 110, 111, 112, 121, 122, 123, 124, 138, 139, 140"),
];

fn run(id: u8, title: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Outcome {
    let t = Instant::now();
    let (status, detail) = match f() {
        Ok((true, d)) => (Status::Pass, d),
        Ok((false, d)) => (Status::Fail, d),
        Err(e) => (Status::Fail, format!("error: {e}")),
    };
    Outcome { id, title: title.into(), status, detail, seconds: t.elapsed().as_secs_f64() }
}

fn curve(table: &ConwayTable, q: u32) -> Result<Hermitian> {
    Hermitian::new(q, table)
}

pub fn criterion_1(table: &ConwayTable) -> Outcome {
    run(1, "gap sequence formula vs dimension oracle", || {
        let mut notes = Vec::new();
        let mut ok = true;
        for q in [2, 3, 4, 5, 7] {
            let h = curve(table, q)?;
            let place = h.find_degree3_place(None)?;
            let oracle = gap_set_oracle(&h, &place)?;
            let formula = gap_set_formula(q);
            ok &= oracle == formula;
            notes.push(format!("q={q} {:?}", oracle.gaps));
            if q == 7 {
                let d4 = dim_l_mp(&h, &place, 4)?;
                let d5 = dim_l_mp(&h, &place, 5)?;
                let d6 = dim_l_mp(&h, &place, 6)?;
                notes.push(format!(
                    "q-2=5: l(4P)={d4} l(5P)={d5} -> 5 is {}; l(6P)={d6} -> smallest non-gap {}",
                    if d4 == d5 { "a gap" } else { "a non-gap" },
                    if d6 > d5 && d4 == d5 { "is q-1=6" } else { "differs" }
                ));
            }
        }
        Ok((ok, notes.join("; ")))
    })
}

pub fn criterion_2(table: &ConwayTable) -> Outcome {
    run(2, "q=7, m=18: [343,309,20]", || {
        let rep = bounds::report(7, 18)?;
        let g = rep.main.map(|b| b.guaranteed).unwrap_or(-1);
        let (h, input) = witness7::embedded_setup(table)?;
        let place = h.place_from_point(witness7::prepare(&h, &input)?.point)?;
        let code = codes::build_cl_a1(&h, &place, 18)?;
        let w = witness7::verify(&h, &input, LiftSystem::Reduced, true)?;
        let ok = (rep.n, rep.k, rep.delta, g) == (343, 309, 14, 20)
            && (code.n(), code.k()) == (343, 309)
            && w.minimum_distance == Some(20)
            && w.omega_orthogonal == Some(true);
        Ok((ok, format!("n={} k={} delta={} guaranteed={g}; witness weight {}; {}", rep.n, rep.k, rep.delta, w.off_curve, w.conclusion)))
    })
}

pub fn criterion_3() -> Outcome {
    run(3, "improvement table rows", || {
        let csv = bounds::table_csv(&TABLE_QS)?;
        let mut expected = String::from("q,cond_on_m,values\n");
        for (q, vals) in REFERENCE_TABLE {
            let (lo, hi) = bounds::code_m_range(q);
            expected.push_str(&format!("{q},{lo} <= m <= {hi},\"{vals}\"\n"));
        }
        let ok = csv == expected;
        Ok((ok, if ok { "7 rows identical".into() } else { format!("got:\n{csv}") }))
    })
}

pub fn criterion_4() -> Outcome {
    run(4, "improvements over delta", || {
        let mut got = Vec::new();
        for (q, m) in [(5, 7), (5, 8), (7, 19), (7, 18)] {
            got.push(bounds::main_theorem(q, m)?.guaranteed - bounds::delta(q, m));
        }
        Ok((got == [3, 3, 4, 6], format!("{got:?}")))
    })
}

pub fn criterion_5() -> Outcome {
    run(5, "Matthews-Michel closed form", || {
        let mut n = 0;
        for q in [5, 7, 8, 9, 11, 13] {
            for u in 1..=q {
                if q + 1 <= 6 * u && 6 * u <= 2 * (q + 1) {
                    let mm = bounds::matthews_michel(q, u)?;
                    if mm.bound != (q as i64 - 2) * (6 * u as i64 - q as i64 - 1) {
                        return Ok((false, format!("q={q} u={u}")));
                    }
                    n += 1;
                }
            }
        }
        Ok((true, format!("{n} (q,u) pairs")))
    })
}

pub fn criterion_6(table: &ConwayTable) -> Outcome {
    run(6, "witness weights equal d*", || {
        let mut n = 0;
        for q in [3, 4, 5] {
            let h = curve(table, q)?;
            let place = h.find_degree3_place(None)?;
            let (lo, hi) = bounds::code_m_range(q);
            for m in lo..=hi {
                let Ok(d) = bounds::dstar(q, m) else { continue };
                let (m1, _) = crate::rrspace::split_m(q, m);
                let w = codes::generic_witness(&h, &place, m, q <= 4)?;
                let closed = 3 * m1 as i64 * (q as i64 + 1) - (q * q) as i64 + 4 * q as i64 + 5;
                if w.weight as i64 != closed || w.weight as i64 != d || w.in_code == Some(false) {
                    return Ok((false, format!("q={q} m={m}: weight {}", w.weight)));
                }
                n += 1;
            }
        }
        Ok((true, format!("{n} (q,m) cases")))
    })
}

pub fn criterion_7(table: &ConwayTable) -> Outcome {
    run(7, "duality / monomial equivalence", || {
        let mut notes = Vec::new();
        let mut ok = true;
        for q in [2, 3] {
            let h = curve(table, q)?;
            let place = h.find_degree3_place(None)?;
            let (lo, hi) = bounds::code_m_range(q);
            for m in lo..=hi {
                let r = codes::duality_check(&h, &place, m, false)?;
                ok &= r.passed();
                notes.push(format!("q={q} m={m} k={}+{}", r.k_a1, r.k_mp));
            }
        }
        Ok((ok, notes.join(", ")))
    })
}

pub fn criterion_8(table: &ConwayTable) -> Outcome {
    run(8, "exact distances at tiny scale", || {
        let mut notes = Vec::new();
        let mut ok = true;
        for (q, m) in [(2, 1), (3, 2), (3, 3)] {
            let h = curve(table, q)?;
            let place = h.find_degree3_place(None)?;
            let code = codes::build_cl_a1(&h, &place, m)?;
            let d = codes::min_distance_exact(&code.generator, DistanceMethod::Auto, ENUM_GUARD)?.d as i64;
            let rep = bounds::report(q, m)?;
            let (lo, hi) = (rep.best_lower(), rep.best_upper());
            ok &= lo <= d && d <= hi;
            notes.push(format!("({q},{m}): {lo} <= d={d} <= {hi}"));
        }
        Ok((ok, notes.join(", ")))
    })
}

pub fn criterion_9(table: &ConwayTable) -> Outcome {
    run(9, "point counts", || {
        let mut ok = true;
        let mut notes = Vec::new();
        for q in [2u64, 3, 4, 5, 7] {
            let h = curve(table, q as u32)?;
            let counts: Vec<usize> = [Extension::Q2, Extension::Q4, Extension::Q6]
                .into_iter()
                .map(|e| h.enumerate_points(e).map(|(_, p)| p.len()))
                .collect::<Result<_>>()?;
            let want = [q.pow(3) + 1, q.pow(3) + 1, q.pow(6) + 1 + q.pow(4) * (q - 1)];
            ok &= counts.iter().zip(want).all(|(&c, w)| c as u64 == w);
            notes.push(format!("q={q} {counts:?}"));
        }
        Ok((ok, notes.join(", ")))
    })
}

/// Field axioms and rank-nullity on random data, and Riemann-Roch on random divisors.
pub fn criterion_10(table: &ConwayTable, seed: u64) -> Outcome {
    run(10, "property suites", || {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let field_checks = field_axioms(table, &mut rng)?;
        let rank_checks = rank_nullity(table, &mut rng)?;
        let seeds: Vec<(u32, u64)> = [2u32, 3, 4, 5].iter().map(|&q| (q, rng.gen())).collect();
        let rr: Vec<(usize, Vec<String>)> = seeds.par_iter().map(|&(q, s)| riemann_roch(table, q, s, 30)).collect::<Result<_>>()?;
        let instances: usize = rr.iter().map(|r| r.0).sum();
        let failures: Vec<String> = rr.into_iter().flat_map(|r| r.1).collect();
        let ok = failures.is_empty() && instances >= 100;
        Ok((
            ok,
            format!(
                "{field_checks} field identities, {rank_checks} matrices, {instances} divisors, {} failures{}",
                failures.len(),
                failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
            ),
        ))
    })
}

fn field_axioms(table: &ConwayTable, rng: &mut impl Rng) -> Result<usize> {
    let mut n = 0;
    for (p, k) in [(2, 2), (2, 6), (3, 2), (3, 6), (5, 2), (7, 2), (7, 6)] {
        let f = FieldCtx::conway(p, k, table)?;
        for _ in 0..200 {
            let [a, b, c] = [0; 3].map(|_| f.elem(rng.gen_range(0..f.order())));
            let ok = f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                && f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
                && f.add(a, f.neg(a)).is_zero()
                && f.mul(a, b) == f.mul(b, a)
                && (a.is_zero() || f.mul(a, f.inv(a).expect("nonzero")) == f.one())
                && f.pow(a, f.order() as u64) == a;
            if !ok {
                return Err(Error::consistency(format!("field axiom failed in GF({p}^{k})")));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn rank_nullity(table: &ConwayTable, rng: &mut impl Rng) -> Result<usize> {
    let mut n = 0;
    for (p, k) in [(2, 2), (3, 2), (5, 2)] {
        let f = FieldCtx::conway(p, k, table)?;
        for _ in 0..40 {
            let (r, c) = (rng.gen_range(1..12), rng.gen_range(1..12));
            // sometimes low rank: product of thin factors
            let m = if rng.gen_bool(0.5) {
                random_matrix(&f, r, c, rng)
            } else {
                let t = rng.gen_range(1..=r.min(c));
                random_matrix(&f, r, t, rng).mul(&random_matrix(&f, t, c, rng))?
            };
            let ns = m.nullspace();
            if m.rank() + ns.rows() != c || (ns.rows() > 0 && !m.mul(&ns.transpose())?.is_zero()) {
                return Err(Error::consistency("rank-nullity failed"));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn random_matrix(f: &std::sync::Arc<FieldCtx>, r: usize, c: usize, rng: &mut impl Rng) -> FieldMatrix {
    let rows: Vec<Vec<_>> = (0..r).map(|_| (0..c).map(|_| f.elem(rng.gen_range(0..f.order()))).collect()).collect();
    FieldMatrix::from_rows(f, c, &rows).expect("shape")
}

/// Random divisors `n P_inf - m P`, `m P` and `n P_inf` at a random place; checks
/// `l(A) = deg A + 1 - g` above `2g - 2` and `l(A) >= deg A + 1 - g` below.
fn riemann_roch(table: &ConwayTable, q: u32, seed: u64, count: usize) -> Result<(usize, Vec<String>)> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let h = curve(table, q)?;
    let place = h.place_by_seed(Some(rng.gen()))?;
    let g = h.genus() as i64;
    let mut failures = Vec::new();
    for _ in 0..count {
        let kind = rng.gen_range(0..3);
        let (label, deg, dim) = match kind {
            0 => {
                let m = rng.gen_range(0..=(g as u32 / 2 + 3));
                let n = rng.gen_range(0..=(3 * m as i64 + 2 * g + 6));
                let b = basis_l_inf_minus_place(&h, &place, n, m)?;
                (format!("{n}Pinf-{m}P"), n - 3 * m as i64, b.dim() as i64)
            }
            1 => {
                let m = rng.gen_range(0..=(2 * g / 3 + 4));
                let d = dim_l_mp(&h, &place, m)? as i64;
                let b = basis_l_mp(&h, &place, m)?.dim() as i64;
                if d != b {
                    failures.push(format!("q={q} {m}P: adjoint count {d} vs basis {b}"));
                }
                (format!("{m}P"), 3 * m, d)
            }
            _ => {
                let n = rng.gen_range(0..=(2 * g + 6));
                (format!("{n}Pinf"), n, weierstrass_monomials(q, n).len() as i64)
            }
        };
        let rr = deg + 1 - g;
        let ok = if deg > 2 * g - 2 { dim == rr } else { dim >= rr.max(0) && (deg >= 0 || dim == 0) };
        if !ok {
            failures.push(format!("q={q} {label}: l = {dim}, deg + 1 - g = {rr}"));
        }
    }
    Ok((count, failures))
}

pub fn run_all(table: &ConwayTable, seed: u64) -> Vec<Outcome> {
    vec![
        criterion_1(table),
        criterion_2(table),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(table),
        criterion_7(table),
        criterion_8(table),
        criterion_9(table),
        criterion_10(table, seed),
    ]
}
