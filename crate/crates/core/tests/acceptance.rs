//! Acceptance criteria, each checked against an oracle written here.
//! Runs without the libtest harness so every criterion prints its own line.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use haarlie::groupmodel::{PolyMatrix, GroupModel};
use haarlie::mathieu::{mathieu_report_with, origin_in_hull, Verdict};
use haarlie::numeric::{haar_monte_carlo, haar_quadrature, su2_reference_integral, GroupPoint, SU2_REFERENCE_NODES};
use haarlie::rootsystem::{RootSystem, RootType};
use haarlie::{Expr, GaussianRational, GroupSpec, LaurentPoly, Rational, ReducedWord};

struct Outcome {
    passed: bool,
    detail: String,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn real(r: Rational) -> GaussianRational {
    GaussianRational::real(r)
}

fn model(n: usize) -> GroupModel {
    GroupModel::new(&GroupSpec::su(n).unwrap(), None).unwrap()
}

fn entry_value(p: &GroupPoint, e: &Expr) -> Complex64 {
    p.eval(e)
}

/// Random polynomial in the entries of SU(n) and their conjugates.
fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_degree: u32) -> Expr {
    let terms = rng.gen_range(1..=3);
    let mut total: Option<Expr> = None;
    for _ in 0..terms {
        let re = rng.gen_range(-4i64..=4);
        let im = rng.gen_range(-4i64..=4);
        let den = rng.gen_range(1i64..=4);
        let mut term = Expr::Const(GaussianRational::new(q(re, den), q(im, den)));
        let deg = rng.gen_range(1..=max_degree);
        if rng.gen_bool(0.7) {
            // a_ij conj(a_kl) pairs, mostly with matching indices, so many
            // integrals are nonzero
            for _ in 0..deg.max(2) / 2 {
                let (i, j) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
                let (k, l) = if rng.gen_bool(0.8) { (i, j) } else { (rng.gen_range(1..=n), rng.gen_range(1..=n)) };
                term = term * Expr::a(1, i, j) * Expr::c(1, k, l);
            }
        } else {
            for _ in 0..deg {
                let (i, j) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
                term = term * if rng.gen_bool(0.5) { Expr::a(1, i, j) } else { Expr::c(1, i, j) };
            }
        }
        total = Some(match total {
            Some(t) => t + term,
            None => term,
        });
    }
    total.unwrap()
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    for g in ["SU(2)", "SU(3)", "SU(4)", "SU(2)xSU(2)xT^1", "T^3"] {
        let gm = GroupModel::new(&g.parse().unwrap(), None).unwrap();
        let v = gm.integrate(&Expr::Const(GaussianRational::one())).unwrap();
        if v != GaussianRational::one() {
            bad.push(format!("{g} gives {v}"));
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() { "5 groups".into() } else { bad.join(", ") },
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i)) / (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `int_0^1 x^p (1-x)^r dx` by binomial expansion.
fn moment(p: u32, r: u32) -> Rational {
    (0..=r).fold(Rational::zero(), |acc, k| {
        let t = Rational::new(binomial(r, k), BigInt::from(p + k + 1));
        if k % 2 == 0 {
            acc + t
        } else {
            acc - t
        }
    })
}

fn criterion_2() -> Outcome {
    let gm = model(2);
    // [[a, c], [b, d]]
    let (a, b, c, d) = (Expr::a(1, 1, 1), Expr::a(1, 2, 1), Expr::a(1, 1, 2), Expr::a(1, 2, 2));
    let mut ok = 0;
    for n1 in 0..=3 {
        for n2 in 0..=3 {
            for n3 in 0..=3 {
                for n4 in 0..=3 {
                    let e = a.clone().pow(n1) * b.clone().pow(n2) * c.clone().pow(n3) * d.clone().pow(n4);
                    let want = if n1 == n4 && n2 == n3 {
                        let m = moment(n1, n2);
                        if n2 % 2 == 1 {
                            -m
                        } else {
                            m
                        }
                    } else {
                        Rational::zero()
                    };
                    if gm.integrate(&e).unwrap() == real(want) {
                        ok += 1;
                    }
                }
            }
        }
    }
    Outcome {
        passed: ok == 256,
        detail: format!("{ok}/256 monomials"),
    }
}

fn criterion_3() -> Outcome {
    let mut ok = 0;
    let mut total = 0;
    for n in [2usize, 3] {
        let gm = model(n);
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let want = if i == k && j == l { q(1, n as i64) } else { Rational::zero() };
                        total += 1;
                        if gm.integrate(&(Expr::a(1, i, j) * Expr::c(1, k, l))).unwrap() == real(want) {
                            ok += 1;
                        }
                    }
                }
            }
        }
    }
    Outcome {
        passed: ok == total && total == 97,
        detail: format!("{ok}/{total} index pairs"),
    }
}

fn criterion_4() -> Outcome {
    // Number of positive roots from the classification.
    let mut cases: Vec<(RootType, usize, usize)> = Vec::new();
    for r in 1..=8 {
        cases.push((RootType::A, r, r * (r + 1) / 2));
    }
    for r in 2..=8 {
        cases.push((RootType::B, r, r * r));
        cases.push((RootType::C, r, r * r));
    }
    for r in 3..=8 {
        cases.push((RootType::D, r, r * (r - 1)));
    }
    cases.extend([(RootType::E, 6, 36), (RootType::E, 7, 63), (RootType::E, 8, 120), (RootType::F, 4, 24), (RootType::G, 2, 6)]);
    let mut roots = 0;
    let mut problems = Vec::new();
    for (t, rank, count) in cases {
        let rs = RootSystem::new(t, rank).unwrap();
        if rs.positive_roots().len() != count {
            problems.push(format!("{t}{rank}: {} positive roots", rs.positive_roots().len()));
        }
        let simple_len: Vec<Rational> = (0..rank)
            .map(|i| rs.root_pairing(&rs.simple_roots()[i], &rs.simple_roots()[i]))
            .collect();
        for beta in rs.positive_roots() {
            roots += 1;
            let e = match rs.weight_exponent(beta) {
                Ok(e) => e,
                Err(err) => {
                    problems.push(format!("{t}{rank} {:?}: {err}", beta.0));
                    continue;
                }
            };
            // height of the coroot: sum_i n_i (alpha_i, alpha_i) / (beta, beta)
            let bb = rs.root_pairing(beta, beta);
            let height = beta
                .0
                .iter()
                .zip(&simple_len)
                .fold(Rational::zero(), |acc, (&n, l)| acc + Rational::from_integer(BigInt::from(n)) * l / &bb);
            if e == 0 || Rational::from_integer(BigInt::from(e)) != height {
                problems.push(format!("{t}{rank} {:?}: exponent {e}, coroot height {height}", beta.0));
            }
        }
    }
    Outcome {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{roots} positive roots in 31 root systems")
        } else {
            problems.join("; ")
        },
    }
}

fn criterion_5() -> Outcome {
    let gm = model(2);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut dq, mut de) = (0.0f64, 0.0f64);
    let mut nonzero = 0;
    for _ in 0..50 {
        let e = random_poly(&mut rng, 2, 6);
        let exact = gm.integrate(&e).unwrap().to_complex();
        if exact.norm() > 0.0 {
            nonzero += 1;
        }
        let quad = haar_quadrature(gm.spec(), None, |p| entry_value(p, &e), e.degree()).unwrap().value();
        let euler = su2_reference_integral(|m| e.eval_numeric(&|_, i, j| m.get(i - 1, j - 1), &[]), SU2_REFERENCE_NODES);
        dq = dq.max((exact - quad).norm());
        de = de.max((exact - euler).norm());
    }
    Outcome {
        passed: dq < 1e-10 && de < 1e-9,
        detail: format!("50 expressions ({nonzero} with nonzero integral), quadrature {dq:.1e}, Euler angles {de:.1e}"),
    }
}

fn criterion_6() -> Outcome {
    let gm = model(3);
    let mut rng = ChaCha8Rng::seed_from_u64(6006);
    let mut within = 0;
    let mut nonzero = 0;
    for k in 0..10u64 {
        let e = random_poly(&mut rng, 3, 4);
        let exact = gm.integrate(&e).unwrap().to_complex();
        if exact.norm() > 0.0 {
            nonzero += 1;
        }
        let r = haar_monte_carlo(gm.spec(), None, |p| entry_value(p, &e), 1_000_000, 77 + k).unwrap();
        if (r.value() - exact).norm() <= 4.0 * r.std_error {
            within += 1;
        }
    }
    Outcome {
        passed: within >= 9,
        detail: format!("{within}/10 within 4 standard errors ({nonzero} with nonzero integral)"),
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst = 0.0f64;
    let mut nonzero = 0;
    for (n, deg) in [(2usize, 6u32), (3, 4)] {
        let gm = model(n);
        for _ in 0..10 {
            let e = random_poly(&mut rng, n, deg);
            let exact = gm.integrate(&e).unwrap().to_complex();
            if exact.norm() > 0.0 {
                nonzero += 1;
            }
            let quad = haar_quadrature(gm.spec(), None, |p| entry_value(p, &e), e.degree()).unwrap().value();
            worst = worst.max((exact - quad).norm());
        }
    }
    Outcome {
        passed: worst < 1e-9,
        detail: format!("10 SU(2) + 10 SU(3) expressions ({nonzero} with nonzero integral), max deviation {worst:.1e}"),
    }
}

/// Determinant as a sum over permutations.
fn leibniz_det(m: &PolyMatrix) -> LaurentPoly {
    let n = m.len();
    let (nx, nc) = (m[0][0].n_x(), m[0][0].n_circle());
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = LaurentPoly::zero(nx, nc);
    loop {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut term = LaurentPoly::one(nx, nc);
        for (r, &c) in perm.iter().enumerate() {
            term = &term * &m[r][c];
        }
        total = if inversions % 2 == 0 { &total + &term } else { &total - &term };
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    total
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=4 {
        let gm = model(n);
        let p = gm.pair(0).unwrap();
        let (nx, nc) = (gm.measure().n_x, gm.measure().n_circle);
        if leibniz_det(&p.q) != LaurentPoly::one(nx, nc) {
            bad.push(format!("det Q on SU({n})"));
        }
        for i in 0..n {
            for j in 0..n {
                // (Q Qc^T)_{ij} = sum_k Q_{ik} Qc_{jk}
                let s = (0..n).fold(LaurentPoly::zero(nx, nc), |acc, k| &acc + &(&p.q[i][k] * &p.qc[j][k]));
                let want = if i == j { LaurentPoly::one(nx, nc) } else { LaurentPoly::zero(nx, nc) };
                if s != want {
                    bad.push(format!("(Q Qc^T)[{},{}] on SU({n})", i + 1, j + 1));
                }
            }
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() { "SU(2), SU(3), SU(4)".into() } else { bad.join(", ") },
    }
}

fn criterion_9() -> Outcome {
    let spec = GroupSpec::su(3).unwrap();
    let m1 = GroupModel::new(&spec, Some(&[ReducedWord::new(vec![1, 2, 1])])).unwrap();
    let m2 = GroupModel::new(&spec, Some(&[ReducedWord::new(vec![2, 1, 2])])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut same = 0;
    let mut nonzero = 0;
    for _ in 0..20 {
        let e = random_poly(&mut rng, 3, 4);
        let (v1, v2) = (m1.integrate(&e).unwrap(), m2.integrate(&e).unwrap());
        if !v1.is_zero() {
            nonzero += 1;
        }
        if v1 == v2 {
            same += 1;
        }
    }
    Outcome {
        passed: same == 20,
        detail: format!("{same}/20 identical ({nonzero} nonzero)"),
    }
}

/// Brute force over subsets of size at most `dim + 1`: the origin is inside
/// iff some subset has nonnegative barycentric weights for it.
fn brute_force_inside(points: &[Vec<i64>]) -> bool {
    let dim = points[0].len();
    let n = points.len();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if idx.len() > dim + 1 {
            continue;
        }
        // augmented system [[1 ... 1], [m_1 ... m_k]] lambda = [1, 0]
        let k = idx.len();
        let mut a: Vec<Vec<Rational>> = (0..=dim)
            .map(|r| {
                let mut row: Vec<Rational> = idx
                    .iter()
                    .map(|&p| if r == 0 { Rational::one() } else { Rational::from_integer(BigInt::from(points[p][r - 1])) })
                    .collect();
                row.push(if r == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        let mut rank = 0;
        let mut independent = true;
        for col in 0..k {
            let Some(piv) = (rank..=dim).find(|&r| !a[r][col].is_zero()) else {
                independent = false;
                break;
            };
            a.swap(rank, piv);
            let inv = Rational::one() / &a[rank][col];
            for v in a[rank].iter_mut() {
                *v *= &inv;
            }
            for r in 0..=dim {
                if r != rank && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..=k {
                        let t = &f * &a[rank][c];
                        a[r][c] -= t;
                    }
                }
            }
            rank += 1;
        }
        if !independent || a[rank..].iter().any(|row| !row[k].is_zero()) {
            continue;
        }
        if a[..k].iter().all(|row| !row[k].is_negative()) {
            return true;
        }
    }
    false
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut agree = 0;
    let mut verified = 0;
    let mut inside = 0;
    let mut total = 0;
    for dim in [2usize, 3] {
        for _ in 0..100 {
            let size = rng.gen_range(1..=8);
            let pts: BTreeSet<Vec<i64>> = (0..size).map(|_| (0..dim).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            let cert = origin_in_hull(&pts).unwrap();
            let list: Vec<Vec<i64>> = pts.into_iter().collect();
            let brute = brute_force_inside(&list);
            total += 1;
            inside += brute as u32;
            agree += (brute == (cert.verdict == Verdict::OriginInside)) as u32;
            verified += cert.verify() as u32;
        }
    }
    Outcome {
        passed: agree == total && verified == total,
        detail: format!("{agree}/{total} agree with brute force, {verified}/{total} certificates verified, {inside} inside"),
    }
}

fn criterion_11() -> Outcome {
    let gm = model(2);
    let r = mathieu_report_with(&gm, &Expr::a(1, 1, 1), &Expr::c(1, 1, 1), 20).unwrap();
    let powers_zero = r.power_integrals.len() == 20 && r.power_integrals.iter().all(|v| v.is_zero());
    let hull = r.hull.as_ref().unwrap();
    let separated = hull.verdict == Verdict::OriginOutside && hull.verify();
    let Some(c) = r.conclusion.as_ref() else {
        return Outcome {
            passed: false,
            detail: "no threshold computed".into(),
        };
    };
    // Independent check of the conclusion: int f^n g for n0 <= n <= n0 + 5.
    let f = gm.reduce(&Expr::a(1, 1, 1)).unwrap();
    let g = gm.reduce(&Expr::c(1, 1, 1)).unwrap();
    let mut ok = c.integrals.len() == 6;
    for n in c.threshold..=c.threshold + 5 {
        let v = (&f.pow(n as u32) * &g).weighted_integral(gm.measure()).unwrap();
        ok &= v.is_zero();
    }
    Outcome {
        passed: powers_zero && separated && ok && c.all_zero,
        detail: format!(
            "powers vanish for n <= 20: {powers_zero}, separating vector {:?}, n0 = {}, conclusion checked: {ok}",
            hull.separating_vector.as_ref().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            c.threshold
        ),
    }
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("normalization", Duration::from_secs(1), criterion_1),
        ("SU(2) monomial table", Duration::from_secs(10), criterion_2),
        ("Schur orthogonality", Duration::from_secs(60), criterion_3),
        ("weight exponents", Duration::from_secs(5), criterion_4),
        ("SU(2) oracle triangle", Duration::from_secs(120), criterion_5),
        ("SU(3) Monte Carlo", Duration::from_secs(300), criterion_6),
        ("square-root elimination", Duration::from_secs(120), criterion_7),
        ("exact matrix identities", Duration::from_secs(30), criterion_8),
        ("word independence", Duration::from_secs(60), criterion_9),
        ("hull certificates", Duration::from_secs(30), criterion_10),
        ("vanishing threshold", Duration::from_secs(10), criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = took <= *budget;
        let passed = out.passed && in_time;
        failed += !passed as u32;
        println!(
            "criterion {:>2} {} {name}: {} [{:.2}s of {}s]",
            k + 1,
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            budget.as_secs(),
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
