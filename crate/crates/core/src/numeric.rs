//! Floating-point Haar integration through the unitary chart: weighted Monte
//! Carlo, tensor-product quadrature, and the Euler-angle formula on `SU(2)`.
//!
//! Monte Carlo draws are split into chunks of [`MC_CHUNK`] samples. Chunk `c`
//! uses `ChaCha8Rng::seed_from_u64(seed)` on stream `c`, so results depend only
//! on `(seed, samples)` and not on the thread count. Chunk statistics are
//! merged pairwise in chunk order.

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::groupmodel::{numeric_point_unchecked, CMatrix, GroupModel};
use crate::measure::{measure_spec, GroupSpec, MeasureSpec};
use crate::weyl::ReducedWord;

pub const MC_CHUNK: usize = 1 << 14;

/// Largest quadrature grid accepted, in nodes.
pub const MAX_GRID: u64 = 1 << 34;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(c: Complex64) -> Self {
        ComplexValue { re: c.re, im: c.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(c: ComplexValue) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericResult {
    pub estimate: ComplexValue,
    /// Standard error of the mean; zero for quadrature.
    pub std_error: f64,
    /// Samples drawn or quadrature nodes visited.
    pub samples: u64,
    pub seed: Option<u64>,
    /// Non-fatal diagnostics such as an undersized degree budget.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl NumericResult {
    pub fn value(&self) -> Complex64 {
        self.estimate.into()
    }
}

/// A point of the group: one matrix per simple factor, plus torus phases.
pub struct GroupPoint<'a> {
    pub factors: &'a [CMatrix],
    pub torus: &'a [Complex64],
}

impl GroupPoint<'_> {
    /// Numeric value of an expression at this point.
    pub fn eval(&self, e: &Expr) -> Complex64 {
        e.eval_numeric(&|f, i, j| self.factors[f - 1].get(i - 1, j - 1), self.torus)
    }
}

/// Maps chart coordinates to group points for groups whose simple factors
/// are all of type A.
#[derive(Debug, Clone)]
pub struct Chart {
    measure: MeasureSpec,
    sizes: Vec<usize>,
}

impl Chart {
    pub fn new(spec: &GroupSpec, words: Option<&[ReducedWord]>) -> Result<Chart> {
        Chart::from_measure(measure_spec(spec, words)?)
    }

    pub fn from_measure(measure: MeasureSpec) -> Result<Chart> {
        let sizes = measure
            .factors
            .iter()
            .enumerate()
            .map(|(f, l)| {
                l.factor.su_dimension().ok_or(Error::UnsupportedFactor {
                    factor: f + 1,
                    label: l.factor.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Chart { measure, sizes })
    }

    pub fn measure(&self) -> &MeasureSpec {
        &self.measure
    }

    /// Factor matrices and torus phases at chart coordinates `(x, circle)`.
    pub fn point(&self, x: &[f64], circle: &[Complex64]) -> (Vec<CMatrix>, Vec<Complex64>) {
        let mats = self
            .measure
            .factors
            .iter()
            .zip(&self.sizes)
            .map(|(l, &n)| {
                let len = l.length();
                numeric_point_unchecked(
                    n,
                    &l.word.letters,
                    &x[l.x_offset..l.x_offset + len],
                    &circle[l.w_offset..l.w_offset + len],
                    &circle[l.z_offset()..l.z_offset() + n - 1],
                )
            })
            .collect();
        (mats, circle[self.measure.torus_offset..].to_vec())
    }
}

#[derive(Debug, Clone, Copy)]
struct Welford {
    n: u64,
    mean: Complex64,
    m2: f64,
}

impl Welford {
    fn new() -> Welford {
        Welford {
            n: 0,
            mean: Complex64::new(0.0, 0.0),
            m2: 0.0,
        }
    }

    fn push(&mut self, v: Complex64) {
        self.n += 1;
        let d = v - self.mean;
        self.mean += d / self.n as f64;
        let d2 = v - self.mean;
        self.m2 += d.re * d2.re + d.im * d2.im;
    }

    fn merge(a: Welford, b: Welford) -> Welford {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        let fb = b.n as f64 / n as f64;
        Welford {
            n,
            mean: a.mean + d * fb,
            m2: a.m2 + b.m2 + d.norm_sqr() * a.n as f64 * fb,
        }
    }
}

fn pairwise<T: Copy>(items: &[T], zero: T, op: &impl Fn(T, T) -> T) -> T {
    match items.len() {
        0 => zero,
        1 => items[0],
        n => {
            let (l, r) = items.split_at(n / 2);
            op(pairwise(l, zero, op), pairwise(r, zero, op))
        }
    }
}

/// Weighted Monte Carlo estimate of the Haar integral of `f`.
///
/// `x_j` is drawn from the density `2e_j x^(2e_j - 1)` on `[0,1]` by inverse
/// CDF, circle variables uniformly.
pub fn haar_monte_carlo<F>(
    spec: &GroupSpec,
    words: Option<&[ReducedWord]>,
    f: F,
    samples: u64,
    seed: u64,
) -> Result<NumericResult>
where
    F: Fn(&GroupPoint) -> Complex64 + Sync,
{
    if samples == 0 {
        return Err(Error::DomainError("at least one sample is required".into()));
    }
    let chart = Chart::new(spec, words)?;
    let m = chart.measure();
    let inv_pow: Vec<f64> = m.exponents.iter().map(|&e| 1.0 / (2.0 * e as f64)).collect();
    let chunks = samples.div_ceil(MC_CHUNK as u64);
    let stats: Vec<Welford> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = (samples - c * MC_CHUNK as u64).min(MC_CHUNK as u64);
            let mut x = vec![0.0; m.n_x];
            let mut circle = vec![Complex64::new(1.0, 0.0); m.n_circle];
            let mut acc = Welford::new();
            for _ in 0..count {
                for (xj, &p) in x.iter_mut().zip(&inv_pow) {
                    // 1 - u lies in (0, 1]
                    let u: f64 = 1.0 - rng.gen::<f64>();
                    *xj = u.powf(p);
                }
                for t in circle.iter_mut() {
                    *t = Complex64::from_polar(1.0, 2.0 * PI * rng.gen::<f64>());
                }
                let (mats, torus) = chart.point(&x, &circle);
                acc.push(f(&GroupPoint {
                    factors: &mats,
                    torus: &torus,
                }));
            }
            acc
        })
        .collect();
    let total = pairwise(&stats, Welford::new(), &Welford::merge);
    let var = if total.n > 1 { total.m2 / (total.n - 1) as f64 } else { 0.0 };
    Ok(NumericResult {
        estimate: total.mean.into(),
        std_error: (var.max(0.0) / total.n as f64).sqrt(),
        samples: total.n,
        seed: Some(seed),
        warnings: Vec::new(),
    })
}

/// Gauss-Legendre nodes and weights on `[0, 1]` for the weight
/// `2e x^(2e-1)`, exact for polynomials of degree `deg` in `x`.
fn weighted_x_rule(e: u32, deg: u32) -> Vec<(f64, f64)> {
    let count = ((deg + 2 * e) / 2 + 1).max(2) as usize;
    let rule = GaussLegendre::new(count).expect("at least two nodes");
    let p = (2 * e - 1) as i32;
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(s, w)| {
            let x = 0.5 * (s + 1.0);
            (x, 0.5 * w * 2.0 * e as f64 * x.powi(p))
        })
        .collect()
}

fn circle_rule(count: usize) -> Vec<(Complex64, f64)> {
    (0..count)
        .map(|k| {
            (
                Complex64::from_polar(1.0, 2.0 * PI * k as f64 / count as f64),
                1.0 / count as f64,
            )
        })
        .collect()
}

/// Tensor-product quadrature of `f` through the unitary chart, exact up to
/// roundoff for polynomial expressions of degree at most `degree`.
pub fn haar_quadrature<F>(
    spec: &GroupSpec,
    words: Option<&[ReducedWord]>,
    f: F,
    degree: u32,
) -> Result<NumericResult>
where
    F: Fn(&GroupPoint) -> Complex64 + Sync,
{
    let chart = Chart::new(spec, words)?;
    let m = chart.measure();
    let x_rules: Vec<Vec<(f64, f64)>> = m.exponents.iter().map(|&e| weighted_x_rule(e, degree)).collect();
    let c_rule = circle_rule(degree as usize + 1);
    let mut dims: Vec<usize> = x_rules.iter().map(Vec::len).collect();
    dims.extend(std::iter::repeat(c_rule.len()).take(m.n_circle));
    let total = dims.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d as u64));
    let total = match total {
        Some(t) if t <= MAX_GRID => t,
        _ => {
            return Err(Error::DomainError(format!(
                "quadrature grid {dims:?} exceeds {MAX_GRID} nodes"
            )))
        }
    };
    const CHUNK: u64 = 4096;
    let chunks = total.div_ceil(CHUNK);
    let sums: Vec<Complex64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut x = vec![0.0; m.n_x];
            let mut circle = vec![Complex64::new(1.0, 0.0); m.n_circle];
            let mut acc = Complex64::new(0.0, 0.0);
            let end = ((c + 1) * CHUNK).min(total);
            for idx in c * CHUNK..end {
                let mut rest = idx;
                let mut weight = 1.0;
                for (d, &len) in dims.iter().enumerate().rev() {
                    let k = (rest % len as u64) as usize;
                    rest /= len as u64;
                    if d < m.n_x {
                        let (node, w) = x_rules[d][k];
                        x[d] = node;
                        weight *= w;
                    } else {
                        let (node, w) = c_rule[k];
                        circle[d - m.n_x] = node;
                        weight *= w;
                    }
                }
                let (mats, torus) = chart.point(&x, &circle);
                acc += f(&GroupPoint {
                    factors: &mats,
                    torus: &torus,
                }) * weight;
            }
            acc
        })
        .collect();
    let estimate = pairwise(&sums, Complex64::new(0.0, 0.0), &|a, b| a + b);
    Ok(NumericResult {
        estimate: estimate.into(),
        std_error: 0.0,
        samples: total,
        seed: None,
        warnings: Vec::new(),
    })
}

/// Quadrature of an expression; warns when `budget` is below its degree.
pub fn quadrature_expr(model: &GroupModel, e: &Expr, budget: Option<u32>) -> Result<NumericResult> {
    model.validate(e)?;
    let deg = e.degree();
    let budget = budget.unwrap_or(deg);
    let words: Vec<ReducedWord> = model.measure().factors.iter().map(|l| l.word.clone()).collect();
    let mut r = haar_quadrature(model.spec(), Some(&words), |p| p.eval(e), budget)?;
    if budget < deg {
        r.warnings.push(format!(
            "BudgetTooSmall: degree budget {budget} is below the expression degree {deg}; the result may be inexact"
        ));
    }
    Ok(r)
}

/// Monte Carlo estimate for an expression.
pub fn monte_carlo_expr(model: &GroupModel, e: &Expr, samples: u64, seed: u64) -> Result<NumericResult> {
    model.validate(e)?;
    let words: Vec<ReducedWord> = model.measure().factors.iter().map(|l| l.word.clone()).collect();
    haar_monte_carlo(model.spec(), Some(&words), |p| p.eval(e), samples, seed)
}

/// The Euler-angle matrix with angles `(phi, theta, psi)`.
pub fn su2_euler(phi: f64, theta: f64, psi: f64) -> CMatrix {
    let i = Complex64::i();
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = |t: f64| Complex64::from_polar(1.0, t / 2.0);
    CMatrix::from_rows(vec![
        vec![e(phi + psi) * c, i * s * e(phi - psi)],
        vec![i * s * e(psi - phi), c * e(-(phi + psi))],
    ])
}

/// Default node counts `(phi, theta, psi)` for [`su2_reference_integral`].
pub const SU2_REFERENCE_NODES: (usize, usize, usize) = (24, 32, 48);

/// Haar integral over `SU(2)` by the Euler-angle formula
/// `1/(16 pi^2) int_0^{2pi} int_0^pi int_{-2pi}^{2pi} f sin(theta) dpsi dtheta dphi`,
/// trapezoid in `phi` and `psi`, Gauss-Legendre in `theta`.
pub fn su2_reference_integral<F>(f: F, nodes: (usize, usize, usize)) -> Complex64
where
    F: Fn(&CMatrix) -> Complex64 + Sync,
{
    let (n_phi, n_theta, n_psi) = nodes;
    let theta_rule = GaussLegendre::new(n_theta.max(2)).expect("at least two nodes");
    let thetas: Vec<(f64, f64)> = theta_rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(s, w)| {
            let t = 0.5 * PI * (s + 1.0);
            (t, 0.5 * PI * w * t.sin())
        })
        .collect();
    let d_phi = 2.0 * PI / n_phi as f64;
    let d_psi = 4.0 * PI / n_psi as f64;
    let rows: Vec<Complex64> = (0..n_phi)
        .into_par_iter()
        .map(|a| {
            let phi = a as f64 * d_phi;
            let mut acc = Complex64::new(0.0, 0.0);
            for &(theta, wt) in &thetas {
                for b in 0..n_psi {
                    let psi = -2.0 * PI + b as f64 * d_psi;
                    acc += f(&su2_euler(phi, theta, psi)) * wt;
                }
            }
            acc
        })
        .collect();
    let total = pairwise(&rows, Complex64::new(0.0, 0.0), &|a, b| a + b);
    total * d_phi * d_psi / (16.0 * PI * PI)
}
