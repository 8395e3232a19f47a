//! Built-in verification suites, one check per acceptance item.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::expr::Expr;
use crate::groupmodel::{poly_det, poly_matmul, poly_transpose, GroupModel};
use crate::laurent::{GaussianRational, LaurentPoly};
use crate::mathieu::{mathieu_report_with, origin_in_hull, Verdict};
use crate::measure::GroupSpec;
use crate::numeric::{monte_carlo_expr, quadrature_expr, su2_reference_integral, SU2_REFERENCE_NODES};
use crate::rational::{frac, int, Rational};
use crate::rootsystem::{all_types_up_to, RootSystem};
use crate::weyl::ReducedWord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

pub const SUITES: &[&str] = &[
    "normalization",
    "monomial-table",
    "schur",
    "lemma-exp",
    "oracle-triangle",
    "monte-carlo",
    "sqrt-elimination",
    "identities",
    "word-independence",
    "hull",
    "mathieu",
    "all",
];

/// Run a named suite; `None` for an unknown name.
pub fn run_suite(name: &str) -> Option<Vec<CheckResult>> {
    let checks: Vec<fn() -> CheckResult> = match name {
        "normalization" => vec![normalization],
        "monomial-table" => vec![monomial_table],
        "schur" => vec![schur],
        "lemma-exp" => vec![lemma_exp],
        "oracle-triangle" => vec![oracle_triangle],
        "monte-carlo" => vec![monte_carlo],
        "sqrt-elimination" => vec![sqrt_elimination],
        "identities" => vec![identities],
        "word-independence" => vec![word_independence],
        "hull" => vec![hull],
        "mathieu" => vec![mathieu],
        "all" => vec![
            normalization,
            monomial_table,
            schur,
            lemma_exp,
            oracle_triangle,
            monte_carlo,
            sqrt_elimination,
            identities,
            word_independence,
            hull,
            mathieu,
        ],
        _ => return None,
    };
    Some(checks.into_iter().map(|c| c()).collect())
}

fn timed(id: u32, name: &str, body: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        id,
        name: name.into(),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn real(q: Rational) -> GaussianRational {
    GaussianRational::real(q)
}

fn su(n: usize) -> GroupModel {
    GroupModel::new(&GroupSpec::su(n).expect("n >= 2"), None).expect("SU(n) model")
}

/// `int_0^1 x^p (1 - x)^q dx = p! q! / (p + q + 1)!`
pub fn beta_integral(p: u32, q: u32) -> Rational {
    let fact = |n: u32| (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
    Rational::new(fact(p) * fact(q), fact(p + q + 1))
}

/// A random polynomial in the entries of one `SU(n)` factor and their
/// conjugates: `terms` monomials of degree at most `max_degree` with small
/// Gaussian-rational coefficients. Half of the monomials pair each `a` with
/// a `c` so that their integrals tend to be nonzero.
pub fn random_expr(rng: &mut impl Rng, n: usize, max_degree: u32, terms: usize) -> Expr {
    let mut acc: Option<Expr> = None;
    for _ in 0..terms {
        let mut re = rng.gen_range(-3i64..=3);
        let im = rng.gen_range(-2i64..=2);
        if re == 0 && im == 0 {
            re = 1;
        }
        let den = rng.gen_range(1i64..=3);
        let mut mono = Expr::Const(GaussianRational::new(frac(re, den), frac(im, den)));
        let degree = rng.gen_range(0..=max_degree);
        let balanced = rng.gen_bool(0.5);
        let entry = |conj: bool, rng: &mut dyn rand::RngCore| Expr::Entry {
            conj,
            factor: 1,
            i: rng.gen_range(1..=n),
            j: rng.gen_range(1..=n),
        };
        let mut d = 0;
        while d < degree {
            if balanced && d + 1 < degree {
                mono = mono * entry(false, rng) * entry(true, rng);
                d += 2;
            } else {
                let conj = rng.gen_bool(0.5);
                mono = mono * entry(conj, rng);
                d += 1;
            }
        }
        acc = Some(match acc {
            None => mono,
            Some(a) => a + mono,
        });
    }
    acc.unwrap_or(Expr::Const(GaussianRational::zero()))
}

pub fn normalization() -> CheckResult {
    timed(1, "normalization", || {
        let mut bad = Vec::new();
        for g in ["SU(2)", "SU(3)", "SU(4)", "SU(2)xSU(2)xT^1", "T^3"] {
            let spec: GroupSpec = g.parse()?;
            let model = GroupModel::new(&spec, None)?;
            let m = model.measure();
            let v = LaurentPoly::one(m.n_x, m.n_circle).weighted_integral(m)?;
            if !v.is_one() {
                bad.push(format!("{g}: {v}"));
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "5 groups integrate 1 to 1".into() } else { bad.join("; ") }))
    })
}

pub fn monomial_table() -> CheckResult {
    timed(2, "SU(2) monomial table", || {
        let gm = su(2);
        let (a, c, b, d) = (Expr::a(1, 1, 1), Expr::a(1, 1, 2), Expr::a(1, 2, 1), Expr::a(1, 2, 2));
        let mut failures = 0;
        for n1 in 0..4u32 {
            for n2 in 0..4u32 {
                for n3 in 0..4u32 {
                    for n4 in 0..4u32 {
                        let e = a.clone().pow(n1) * b.clone().pow(n2) * c.clone().pow(n3) * d.clone().pow(n4);
                        let got = gm.integrate(&e)?;
                        let want = if n1 == n4 && n2 == n3 {
                            let v = beta_integral(n1, n2);
                            if n2 % 2 == 1 {
                                -v
                            } else {
                                v
                            }
                        } else {
                            Rational::zero()
                        };
                        if got != real(want) {
                            failures += 1;
                        }
                    }
                }
            }
        }
        Ok((failures == 0, format!("{} of 256 monomials match", 256 - failures)))
    })
}

pub fn schur() -> CheckResult {
    timed(3, "Schur orthogonality", || {
        let mut cases = 0;
        let mut failures = 0;
        for n in [2usize, 3] {
            let gm = su(n);
            let idx: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
            for &(i, j) in &idx {
                for &(k, l) in &idx {
                    let v = gm.integrate(&(Expr::a(1, i, j) * Expr::c(1, k, l)))?;
                    let want = if i == k && j == l { frac(1, n as i64) } else { Rational::zero() };
                    cases += 1;
                    if v != real(want) {
                        failures += 1;
                    }
                }
            }
        }
        Ok((failures == 0, format!("{} of {cases} pairs match", cases - failures)))
    })
}

pub fn lemma_exp() -> CheckResult {
    timed(4, "weight exponents are positive integers", || {
        let mut roots = 0;
        for (t, rank) in all_types_up_to(8) {
            let rs = RootSystem::new(t, rank)?;
            for beta in rs.positive_roots() {
                if rs.weight_exponent(beta)? == 0 {
                    return Ok((false, format!("{t}{rank}: zero exponent at {:?}", beta.0)));
                }
                roots += 1;
            }
        }
        Ok((true, format!("{roots} positive roots over all types of rank <= 8")))
    })
}

pub fn oracle_triangle() -> CheckResult {
    timed(5, "SU(2) oracle triangle", || {
        let gm = su(2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (mut worst_q, mut worst_e) = (0.0f64, 0.0f64);
        for _ in 0..50 {
            let e = random_expr(&mut rng, 2, 6, 3);
            let exact = gm.integrate(&e)?.to_complex();
            let q = quadrature_expr(&gm, &e, None)?.value();
            let r = su2_reference_integral(
                |m| e.eval_numeric(&|_, i, j| m.get(i - 1, j - 1), &[]),
                SU2_REFERENCE_NODES,
            );
            worst_q = worst_q.max((exact - q).norm());
            worst_e = worst_e.max((exact - r).norm());
        }
        let ok = worst_q < 1e-10 && worst_e < 1e-9;
        Ok((ok, format!("50 expressions; max |exact - quad| = {worst_q:.2e}, max |exact - euler| = {worst_e:.2e}")))
    })
}

pub fn monte_carlo() -> CheckResult {
    timed(6, "SU(3) Monte Carlo consistency", || {
        let gm = su(3);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut hits = 0;
        for k in 0..10u64 {
            let e = random_expr(&mut rng, 3, 4, 3);
            let exact = gm.integrate(&e)?.to_complex();
            let mc = monte_carlo_expr(&gm, &e, 1_000_000, 1000 + k)?;
            if (mc.value() - exact).norm() <= 4.0 * mc.std_error {
                hits += 1;
            }
        }
        Ok((hits >= 9, format!("{hits} of 10 within 4 standard errors")))
    })
}

pub fn sqrt_elimination() -> CheckResult {
    timed(7, "square-root elimination", || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst = 0.0f64;
        for (n, deg) in [(2usize, 6u32), (3, 4)] {
            let gm = su(n);
            for _ in 0..10 {
                let e = random_expr(&mut rng, n, deg, 3);
                let exact = gm.integrate(&e)?.to_complex();
                let q = quadrature_expr(&gm, &e, None)?.value();
                worst = worst.max((exact - q).norm());
            }
        }
        Ok((worst < 1e-9, format!("20 expressions; max deviation {worst:.2e}")))
    })
}

pub fn identities() -> CheckResult {
    timed(8, "exact matrix identities", || {
        let mut bad = Vec::new();
        for n in 2..=4 {
            let gm = su(n);
            let p = gm.pair(0)?;
            let (nx, nc) = (gm.measure().n_x, gm.measure().n_circle);
            if poly_det(&p.q) != LaurentPoly::one(nx, nc) {
                bad.push(format!("det Q != 1 for SU({n})"));
            }
            let prod = poly_matmul(&p.q, &poly_transpose(&p.qc));
            for (i, row) in prod.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    let want = if i == j { LaurentPoly::one(nx, nc) } else { LaurentPoly::zero(nx, nc) };
                    if *e != want {
                        bad.push(format!("Q Qc^T != I at ({},{}) for SU({n})", i + 1, j + 1));
                    }
                }
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "SU(2), SU(3), SU(4)".into() } else { bad.join("; ") }))
    })
}

pub fn word_independence() -> CheckResult {
    timed(9, "SU(3) word independence", || {
        let spec = GroupSpec::su(3)?;
        let m1 = GroupModel::new(&spec, Some(&[ReducedWord::new(vec![1, 2, 1])]))?;
        let m2 = GroupModel::new(&spec, Some(&[ReducedWord::new(vec![2, 1, 2])]))?;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut differ = 0;
        let mut distinct_polys = 0;
        for _ in 0..20 {
            let e = random_expr(&mut rng, 3, 4, 3);
            if m1.reduce(&e)? != m2.reduce(&e)? {
                distinct_polys += 1;
            }
            if m1.integrate(&e)? != m2.integrate(&e)? {
                differ += 1;
            }
        }
        Ok((
            differ == 0,
            format!("{} of 20 integrals identical; {distinct_polys} reductions differ as polynomials", 20 - differ),
        ))
    })
}

pub fn hull() -> CheckResult {
    timed(10, "hull certificates", || {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut mismatches = 0;
        let mut inside = 0;
        for dim in [2usize, 3] {
            for _ in 0..100 {
                let k = rng.gen_range(1..=8);
                let pts: BTreeSet<Vec<i64>> =
                    (0..k).map(|_| (0..dim).map(|_| rng.gen_range(-5..=5)).collect()).collect();
                let cert = origin_in_hull(&pts)?;
                let pts: Vec<Vec<i64>> = pts.into_iter().collect();
                let brute = caratheodory(&pts);
                if !cert.verify() || brute != (cert.verdict == Verdict::OriginInside) {
                    mismatches += 1;
                }
                inside += brute as usize;
            }
        }
        Ok((mismatches == 0, format!("200 spectra, {inside} with the origin inside, {mismatches} mismatches")))
    })
}

/// Whether some affinely independent subset of at most `dim + 1` points has
/// the origin as a nonnegative barycentric combination.
pub fn caratheodory(points: &[Vec<i64>]) -> bool {
    let dim = points.first().map_or(0, Vec::len);
    let n = points.len();
    (1u64..(1 << n)).any(|mask| {
        let chosen: Vec<&Vec<i64>> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &points[i]).collect();
        chosen.len() <= dim + 1 && barycentric(&chosen, dim).is_some_and(|l| l.iter().all(|v| *v >= Rational::zero()))
    })
}

fn barycentric(pts: &[&Vec<i64>], dim: usize) -> Option<Vec<Rational>> {
    let k = pts.len();
    let mut rows: Vec<Vec<Rational>> = (0..=dim)
        .map(|r| {
            let mut row: Vec<Rational> = pts.iter().map(|p| if r == 0 { int(1) } else { int(p[r - 1]) }).collect();
            row.push(if r == 0 { int(1) } else { int(0) });
            row
        })
        .collect();
    let mut r0 = 0;
    for c in 0..k {
        let p = (r0..rows.len()).find(|&r| !rows[r][c].is_zero())?;
        rows.swap(r0, p);
        let pv = rows[r0][c].clone();
        rows[r0].iter_mut().for_each(|v| *v /= &pv);
        let src = rows[r0].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != r0 && !row[c].is_zero() {
                let f = row[c].clone();
                row.iter_mut().zip(&src).for_each(|(v, s)| *v -= &f * s);
            }
        }
        r0 += 1;
    }
    if rows[r0..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some(rows[..k].iter().map(|row| row[k].clone()).collect())
}

pub fn mathieu() -> CheckResult {
    timed(11, "vanishing threshold end to end", || {
        let gm = su(2);
        let r = mathieu_report_with(&gm, &Expr::a(1, 1, 1), &Expr::c(1, 1, 1), 20)?;
        let hyp = r.hypothesis.holds_in_checked_range && r.power_integrals.len() == 20;
        let sep = r.hull.as_ref().is_some_and(|h| h.verify() && h.separating_vector.is_some());
        let (n0, concl) = match &r.conclusion {
            Some(c) => (c.threshold, c.all_zero && c.integrals.len() == 6),
            None => (0, false),
        };
        Ok((
            hyp && sep && concl,
            format!("int f^n = 0 for n <= 20: {hyp}; separating vector: {sep}; n0 = {n0}; int f^n g = 0 on [n0, n0+5]: {concl}"),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_values() {
        assert_eq!(beta_integral(1, 0), frac(1, 2));
        assert_eq!(beta_integral(1, 1), frac(1, 6));
        assert_eq!(beta_integral(2, 3), frac(1, 60));
    }

    #[test]
    fn random_exprs_are_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_expr(&mut a, 3, 4, 3), random_expr(&mut b, 3, 4, 3));
    }

    #[test]
    fn fast_suites_pass() {
        for name in ["normalization", "monomial-table", "schur", "lemma-exp", "identities", "hull", "mathieu"] {
            for r in run_suite(name).unwrap() {
                assert!(r.passed, "{}: {}", r.name, r.detail);
            }
        }
        assert!(run_suite("nope").is_none());
    }
}
