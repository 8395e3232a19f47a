//! Spectra, origin-in-hull certificates, vanishing thresholds and power
//! integral experiments.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::groupmodel::GroupModel;
use crate::laurent::{GaussianRational, LaurentPoly};
use crate::measure::{GroupSpec, MeasureSpec};
use crate::rational::{floor, int, to_f64, Rational};
use crate::weyl::ReducedWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    OriginInside,
    OriginOutside,
}

/// Exact answer to "is the origin in the convex hull of `points`".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullCertificate {
    pub verdict: Verdict,
    pub points: Vec<Vec<i64>>,
    /// Convex weights, aligned with `points`, whose combination is zero.
    #[serde(with = "crate::rational::wire_opt_vec", default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Rational>>,
    /// `v` with `v . m >= 1` for every point, attaining 1.
    #[serde(with = "crate::rational::wire_opt_vec", default, skip_serializing_if = "Option::is_none")]
    pub separating_vector: Option<Vec<Rational>>,
}

fn dot_int(v: &[Rational], m: &[i64]) -> Rational {
    v.iter().zip(m).fold(Rational::zero(), |acc, (a, &b)| acc + a * int(b))
}

impl HullCertificate {
    /// Exact check of whichever witness the verdict calls for.
    pub fn verify(&self) -> bool {
        let dim = self.points.first().map_or(0, Vec::len);
        if self.points.is_empty() || self.points.iter().any(|p| p.len() != dim) {
            return false;
        }
        match (self.verdict, &self.weights, &self.separating_vector) {
            (Verdict::OriginInside, Some(w), None) => {
                if w.len() != self.points.len() || w.iter().any(|l| l.is_negative()) {
                    return false;
                }
                if w.iter().fold(Rational::zero(), |a, b| a + b) != Rational::one() {
                    return false;
                }
                (0..dim).all(|k| {
                    w.iter()
                        .zip(&self.points)
                        .fold(Rational::zero(), |a, (l, p)| a + l * int(p[k]))
                        .is_zero()
                })
            }
            (Verdict::OriginOutside, None, Some(v)) => {
                v.len() == dim && self.points.iter().all(|p| dot_int(v, p) >= Rational::one())
            }
            _ => false,
        }
    }
}

/// Dense simplex tableau for `A lambda + s = b`, `lambda, s >= 0`, minimizing
/// the sum of the artificials `s`.
struct PhaseOne {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of every column.
    cost: Vec<Rational>,
}

impl PhaseOne {
    fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> PhaseOne {
        let r = a.len();
        let n = a[0].len();
        let rows: Vec<Vec<Rational>> = a
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..r).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let mut cost = vec![Rational::zero(); n + r];
        for (j, c) in cost.iter_mut().enumerate() {
            if j < n {
                *c = -rows.iter().fold(Rational::zero(), |acc, row| acc + &row[j]);
            }
        }
        PhaseOne {
            rows,
            rhs: b,
            basis: (n..n + r).collect(),
            cost,
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let p = self.rows[pr][pc].clone();
        for v in self.rows[pr].iter_mut() {
            *v /= &p;
        }
        self.rhs[pr] /= &p;
        let prow = self.rows[pr].clone();
        let prhs = self.rhs[pr].clone();
        for r in 0..self.rows.len() {
            if r == pr || self.rows[r][pc].is_zero() {
                continue;
            }
            let f = self.rows[r][pc].clone();
            for (v, pv) in self.rows[r].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[r] -= &f * &prhs;
        }
        if !self.cost[pc].is_zero() {
            let f = self.cost[pc].clone();
            for (v, pv) in self.cost.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[pr] = pc;
    }

    /// Run to optimality with Bland's rule.
    fn solve(&mut self) {
        while let Some(enter) = self.cost.iter().position(|c| c.is_negative()) {
            let mut best: Option<(Rational, usize, usize)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((q, _, bidx)) => ratio < *q || (ratio == *q && self.basis[r] < *bidx),
                };
                if better {
                    best = Some((ratio, r, self.basis[r]));
                }
            }
            // Phase one is bounded below by zero, so a leaving row exists.
            let (_, row, _) = best.expect("phase one is bounded");
            self.pivot(row, enter);
        }
    }
}

/// Decide whether the origin lies in the convex hull of `points`, with an
/// exact witness either way. Duplicate points are merged.
pub fn origin_in_hull(points: &BTreeSet<Vec<i64>>) -> Result<HullCertificate> {
    let pts: Vec<Vec<i64>> = points.iter().cloned().collect();
    let dim = match pts.first() {
        None => return Err(Error::EmptySpectrum),
        Some(p) => p.len(),
    };
    if let Some(bad) = pts.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: format!("points of dimension {dim}"),
            got: format!("{bad:?}"),
        });
    }
    let n = pts.len();
    // Row 0: sum lambda = 1; row k: sum lambda m_k = 0.
    let mut a = vec![vec![Rational::one(); n]];
    for k in 0..dim {
        a.push(pts.iter().map(|p| int(p[k])).collect());
    }
    let mut b = vec![Rational::zero(); dim + 1];
    b[0] = Rational::one();
    let mut lp = PhaseOne::new(a, b);
    lp.solve();
    let value = lp.basis.iter().zip(&lp.rhs).fold(Rational::zero(), |acc, (&j, r)| {
        if j >= n {
            acc + r
        } else {
            acc
        }
    });
    let cert = if value.is_zero() {
        let mut weights = vec![Rational::zero(); n];
        for (&j, r) in lp.basis.iter().zip(&lp.rhs) {
            if j < n {
                weights[j] = r.clone();
            }
        }
        HullCertificate {
            verdict: Verdict::OriginInside,
            points: pts,
            weights: Some(weights),
            separating_vector: None,
        }
    } else {
        // Dual of phase one: y_r = 1 - (reduced cost of artificial r).
        let y: Vec<Rational> = (0..=dim).map(|r| Rational::one() - &lp.cost[n + r]).collect();
        let mut v: Vec<Rational> = y[1..].iter().map(|c| -c / &y[0]).collect();
        let min = pts
            .iter()
            .map(|p| dot_int(&v, p))
            .min()
            .expect("nonempty");
        if !min.is_positive() {
            return Err(Error::Internal(format!("dual vector {v:?} does not separate")));
        }
        for c in v.iter_mut() {
            *c /= &min;
        }
        HullCertificate {
            verdict: Verdict::OriginOutside,
            points: pts,
            weights: None,
            separating_vector: Some(v),
        }
    };
    if !cert.verify() {
        return Err(Error::Internal("hull certificate failed its exact check".into()));
    }
    Ok(cert)
}

/// The `n_0` beyond which `Sp(f^n)` misses `-Sp(g)`, given `v . m >= 1` on
/// `Sp(f)`: `1 + max(0, floor(max_{m' in Sp(g)} -v . m'))`.
pub fn vanishing_threshold(sp_f: &BTreeSet<Vec<i64>>, sp_g: &BTreeSet<Vec<i64>>, v: &[Rational]) -> Result<u64> {
    for m in sp_f {
        if m.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("points of dimension {}", v.len()),
                got: format!("{m:?}"),
            });
        }
        let d = dot_int(v, m);
        if d < Rational::one() {
            return Err(Error::InvalidSeparator {
                point: m.clone(),
                value: d.to_string(),
            });
        }
    }
    let worst = sp_g
        .iter()
        .map(|m| -dot_int(v, m))
        .max()
        .map(|q| floor(&q))
        .unwrap_or_else(BigInt::zero);
    let worst = worst.max(BigInt::zero());
    u64::try_from(worst + 1).map_err(|_| Error::DomainError("threshold does not fit in 64 bits".into()))
}

/// `[int f^n delta]` for `n = 1..=n_max`.
pub fn power_integral_sequence(f: &LaurentPoly, m: &MeasureSpec, n_max: u32) -> Result<Vec<GaussianRational>> {
    if n_max == 0 {
        return Err(Error::DomainError("n_max must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(n_max as usize);
    let mut p = f.clone();
    out.push(p.weighted_integral(m)?);
    for _ in 1..n_max {
        p = p.try_mul(f)?;
        out.push(p.weighted_integral(m)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexedValue {
    pub n: u64,
    pub value: GaussianRational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    /// Powers `1..=checked_up_to` were computed exactly.
    pub checked_up_to: u32,
    pub holds_in_checked_range: bool,
    pub first_nonzero: Option<u32>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    pub threshold: u64,
    /// `int f^n g delta` for `threshold <= n <= threshold + 5`.
    pub integrals: Vec<IndexedValue>,
    pub all_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Heuristic {
    pub label: String,
    /// `|int f^n delta|^(1/n)` for `n = 1..=n_max`.
    pub root_moduli: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MathieuReport {
    pub group: String,
    pub f: String,
    pub g: String,
    pub spectrum_f: Vec<Vec<i64>>,
    pub spectrum_g: Vec<Vec<i64>>,
    pub hull: Option<HullCertificate>,
    pub power_integrals: Vec<GaussianRational>,
    pub hypothesis: Hypothesis,
    pub conclusion: Option<Conclusion>,
    pub heuristic: Heuristic,
}

/// Number of powers past the threshold checked in a report.
pub const CONCLUSION_SPAN: u64 = 5;

pub fn mathieu_report(
    f: &Expr,
    g: &Expr,
    spec: &GroupSpec,
    words: Option<&[ReducedWord]>,
    n_max: u32,
) -> Result<MathieuReport> {
    let model = GroupModel::new(spec, words)?;
    mathieu_report_with(&model, f, g, n_max)
}

pub fn mathieu_report_with(model: &GroupModel, f: &Expr, g: &Expr, n_max: u32) -> Result<MathieuReport> {
    let m = model.measure();
    let rf = model.reduce(f)?;
    let rg = model.reduce(g)?;
    let sp_f = rf.spectrum();
    let sp_g = rg.spectrum();
    let hull = if sp_f.is_empty() { None } else { Some(origin_in_hull(&sp_f)?) };
    let powers = power_integral_sequence(&rf, m, n_max)?;
    let first_nonzero = powers.iter().position(|v| !v.is_zero()).map(|i| i as u32 + 1);
    let hypothesis = Hypothesis {
        checked_up_to: n_max,
        holds_in_checked_range: first_nonzero.is_none(),
        first_nonzero,
        message: match first_nonzero {
            None => format!("int f^n = 0 for 1 <= n <= {n_max} (checked range only)"),
            Some(k) => format!("hypothesis not satisfied: int f^{k} != 0"),
        },
    };
    let conclusion = match hull.as_ref().and_then(|h| h.separating_vector.as_ref()) {
        None => None,
        Some(v) => {
            let n0 = vanishing_threshold(&sp_f, &sp_g, v)?;
            let exp = |n: u64| u32::try_from(n).map_err(|_| Error::DomainError("threshold too large".into()));
            let mut p = rf.pow(exp(n0)?);
            let mut integrals = Vec::new();
            for n in n0..=n0 + CONCLUSION_SPAN {
                if n > n0 {
                    p = &p * &rf;
                }
                integrals.push(IndexedValue {
                    n,
                    value: (&p * &rg).weighted_integral(m)?,
                });
            }
            let all_zero = integrals.iter().all(|v| v.value.is_zero());
            Some(Conclusion {
                threshold: n0,
                integrals,
                all_zero,
            })
        }
    };
    let heuristic = Heuristic {
        label: "heuristic: floating approximations of |int f^n|^(1/n); not evidence either way".into(),
        root_moduli: powers
            .iter()
            .enumerate()
            .map(|(i, v)| to_f64(&v.norm_sqr()).sqrt().powf(1.0 / (i + 1) as f64))
            .collect(),
    };
    Ok(MathieuReport {
        group: m.group.to_string(),
        f: f.to_string(),
        g: g.to_string(),
        spectrum_f: sp_f.into_iter().collect(),
        spectrum_g: sp_g.into_iter().collect(),
        hull,
        power_integrals: powers,
        hypothesis,
        conclusion,
        heuristic,
    })
}
