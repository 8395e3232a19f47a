//! Sparse polynomials over the Gaussian rationals, polynomial in a block of
//! `x` variables and Laurent in a block of circle variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::MeasureSpec;
use crate::rational::{int, to_f64, Rational};

/// An element `re + i im` of Q(i).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianRational {
    #[serde(with = "crate::rational::wire")]
    pub re: Rational,
    #[serde(with = "crate::rational::wire")]
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational::new(re, Rational::zero())
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::real(int(n))
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -&self.im / &n))
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::real(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::real(Rational::one())
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        let re = if self.im.is_zero() || rhs.im.is_zero() {
            &self.re * &rhs.re
        } else {
            &self.re * &rhs.re - &self.im * &rhs.im
        };
        let im = if self.im.is_zero() {
            &self.re * &rhs.im
        } else if rhs.im.is_zero() {
            &self.im * &rhs.re
        } else {
            &self.re * &rhs.im + &self.im * &rhs.re
        };
        GaussianRational::new(re, im)
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        &self + &rhs
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        &self - &rhs
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |q: &Rational| {
            if q.abs().is_one() {
                "i".to_string()
            } else {
                format!("{}i", q.abs())
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}", imag(&self.im))
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{})", self.re, sign, imag(&self.im))
            }
        }
    }
}

/// Exponent vector of a term: nonnegative on `x`, signed on circle variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub x: Vec<u32>,
    pub circle: Vec<i32>,
}

impl Monomial {
    pub fn one(n_x: usize, n_circle: usize) -> Monomial {
        Monomial {
            x: vec![0; n_x],
            circle: vec![0; n_circle],
        }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            circle: self.circle.iter().zip(&other.circle).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_circle_constant(&self) -> bool {
        self.circle.iter().all(|&e| e == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    n_x: usize,
    n_circle: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero(n_x: usize, n_circle: usize) -> LaurentPoly {
        LaurentPoly {
            n_x,
            n_circle,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_x: usize, n_circle: usize, c: GaussianRational) -> LaurentPoly {
        let mut p = LaurentPoly::zero(n_x, n_circle);
        p.add_term(Monomial::one(n_x, n_circle), c);
        p
    }

    pub fn one(n_x: usize, n_circle: usize) -> LaurentPoly {
        LaurentPoly::constant(n_x, n_circle, GaussianRational::one())
    }

    /// The variable `x_j` (0-based).
    pub fn x(n_x: usize, n_circle: usize, j: usize) -> LaurentPoly {
        let mut m = Monomial::one(n_x, n_circle);
        m.x[j] = 1;
        LaurentPoly::monomial(m, GaussianRational::one())
    }

    /// The circle monomial `t_k^e` (0-based `k`).
    pub fn circle(n_x: usize, n_circle: usize, k: usize, e: i32) -> LaurentPoly {
        let mut m = Monomial::one(n_x, n_circle);
        m.circle[k] = e;
        LaurentPoly::monomial(m, GaussianRational::one())
    }

    pub fn monomial(m: Monomial, c: GaussianRational) -> LaurentPoly {
        let mut p = LaurentPoly::zero(m.x.len(), m.circle.len());
        p.add_term(m, c);
        p
    }

    /// Build from `(monomial, coefficient)` pairs, merging duplicates.
    pub fn from_terms(
        n_x: usize,
        n_circle: usize,
        terms: impl IntoIterator<Item = (Monomial, GaussianRational)>,
    ) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::zero(n_x, n_circle);
        for (m, c) in terms {
            if m.x.len() != n_x || m.circle.len() != n_circle {
                return Err(Error::DimensionMismatch {
                    expected: format!("({n_x}, {n_circle}) exponents"),
                    got: format!("({}, {})", m.x.len(), m.circle.len()),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_circle(&self) -> usize {
        self.n_circle
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (sorted) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    fn check_dims(&self, other: &LaurentPoly) -> Result<()> {
        if self.n_x != other.n_x || self.n_circle != other.n_circle {
            return Err(Error::DimensionMismatch {
                expected: format!("({}, {}) variables", self.n_x, self.n_circle),
                got: format!("({}, {})", other.n_x, other.n_circle),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_dims(other)?;
        let mut acc: std::collections::HashMap<Monomial, GaussianRational> =
            std::collections::HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        let s = &*o.get() + &c;
                        *o.get_mut() = s;
                    }
                }
            }
        }
        Ok(LaurentPoly {
            n_x: self.n_x,
            n_circle: self.n_circle,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, c: &GaussianRational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.n_x, self.n_circle);
        }
        LaurentPoly {
            n_x: self.n_x,
            n_circle: self.n_circle,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// `self^n` by repeated squaring; `p^0 = 1`.
    pub fn pow(&self, mut n: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one(self.n_x, self.n_circle);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Complex conjugation for real `x` and unimodular circle variables:
    /// coefficients are conjugated and circle exponents negated.
    pub fn conjugate(&self) -> LaurentPoly {
        LaurentPoly {
            n_x: self.n_x,
            n_circle: self.n_circle,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let m = Monomial {
                        x: m.x.clone(),
                        circle: m.circle.iter().map(|e| -e).collect(),
                    };
                    (m, c.conj())
                })
                .collect(),
        }
    }

    /// The circle-constant part, i.e. the average over all circle variables.
    pub fn circle_average(&self) -> LaurentPoly {
        LaurentPoly {
            n_x: self.n_x,
            n_circle: self.n_circle,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.is_circle_constant())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `A * sum_{circle-constant terms} c * prod_j 1/(a_j + 2 e_j)`: the
    /// integral against `A prod_j x_j^(2 e_j - 1) dx_j` on `[0,1]^N` and the
    /// normalized Haar measure on the circles.
    pub fn weighted_integral(&self, m: &MeasureSpec) -> Result<GaussianRational> {
        if self.n_x != m.n_x || self.n_circle != m.n_circle {
            return Err(Error::DimensionMismatch {
                expected: format!("({}, {}) variables", m.n_x, m.n_circle),
                got: format!("({}, {})", self.n_x, self.n_circle),
            });
        }
        Ok(self.weighted_integral_with(&m.exponents, &m.constant))
    }

    fn weighted_integral_with(&self, exponents: &[u32], constant: &Rational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (mono, c) in &self.terms {
            if !mono.is_circle_constant() {
                continue;
            }
            let denom = mono
                .x
                .iter()
                .zip(exponents)
                .fold(num_bigint::BigInt::one(), |d, (&a, &e)| d * num_bigint::BigInt::from(a + 2 * e));
            let w = Rational::new(num_bigint::BigInt::one(), denom);
            acc = &acc + &GaussianRational::new(&c.re * &w, &c.im * &w);
        }
        GaussianRational::new(&acc.re * constant, &acc.im * constant)
    }

    /// Circle exponent vectors whose coefficient polynomial in `x` is nonzero.
    pub fn spectrum(&self) -> BTreeSet<Vec<i64>> {
        self.terms
            .keys()
            .map(|m| m.circle.iter().map(|&e| e as i64).collect())
            .collect()
    }

    /// Largest total `x` degree and largest absolute circle exponent.
    pub fn degree_bounds(&self) -> (u32, u32) {
        let mut dx = 0;
        let mut dc = 0;
        for m in self.terms.keys() {
            dx = dx.max(m.x.iter().sum());
            dc = dc.max(m.circle.iter().map(|e| e.unsigned_abs()).max().unwrap_or(0));
        }
        (dx, dc)
    }

    /// Numeric evaluation at real `x` and complex circle values.
    pub fn eval(&self, x: &[f64], circle: &[Complex64]) -> Complex64 {
        assert_eq!(x.len(), self.n_x, "x arity");
        assert_eq!(circle.len(), self.n_circle, "circle arity");
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_complex();
                for (&a, &xv) in m.x.iter().zip(x) {
                    if a > 0 {
                        v *= xv.powi(a as i32);
                    }
                }
                for (&e, &t) in m.circle.iter().zip(circle) {
                    if e != 0 {
                        v *= t.powi(e);
                    }
                }
                v
            })
            .sum()
    }

    /// Canonical text form using the given variable names.
    pub fn to_text(&self, x_names: &[String], circle_names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut factors = Vec::new();
            for (a, name) in m.x.iter().zip(x_names) {
                match a {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{a}")),
                }
            }
            for (e, name) in m.circle.iter().zip(circle_names) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            let coeff = c.to_string();
            let term = if factors.is_empty() {
                coeff
            } else if c.is_one() {
                factors.join("*")
            } else {
                format!("{coeff}*{}", factors.join("*"))
            };
            parts.push(term);
        }
        parts.join(" + ")
    }

    fn default_names(&self) -> (Vec<String>, Vec<String>) {
        (
            (1..=self.n_x).map(|j| format!("x{j}")).collect(),
            (1..=self.n_circle).map(|k| format!("t{k}")).collect(),
        )
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (xs, cs) = self.default_names();
        f.write_str(&self.to_text(&xs, &cs))
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("LaurentPoly addition")
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("LaurentPoly subtraction")
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("LaurentPoly multiplication")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&GaussianRational::from_int(-1))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: Vec<i64>,
    coeff: GaussianRational,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n_x: usize,
    n_circle: usize,
    terms: Vec<TermJson>,
}

/// JSON form: `{n_x, n_circle, terms: [{exponents, coeff}]}` where
/// `exponents` lists the x exponents followed by the circle exponents.
impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            n_x: self.n_x,
            n_circle: self.n_circle,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exponents: m
                        .x
                        .iter()
                        .map(|&a| a as i64)
                        .chain(m.circle.iter().map(|&e| e as i64))
                        .collect(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            if t.exponents.len() != raw.n_x + raw.n_circle {
                return Err(D::Error::custom("exponent vector has the wrong length"));
            }
            let (xs, cs) = t.exponents.split_at(raw.n_x);
            let x = xs
                .iter()
                .map(|&a| u32::try_from(a).map_err(|_| D::Error::custom("negative or huge x exponent")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let circle = cs
                .iter()
                .map(|&e| i32::try_from(e).map_err(|_| D::Error::custom("circle exponent out of range")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            terms.push((Monomial { x, circle }, t.coeff));
        }
        LaurentPoly::from_terms(raw.n_x, raw.n_circle, terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{measure_spec, GroupSpec};
    use crate::rational::frac;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(int(re), int(im))
    }

    #[test]
    fn basic_algebra() {
        let x = LaurentPoly::x(1, 1, 0);
        let mut sq = Monomial::one(1, 1);
        sq.x[0] = 2;
        assert_eq!(&x * &x, LaurentPoly::monomial(sq, GaussianRational::one()));

        let w = LaurentPoly::circle(0, 1, 0, 1);
        let winv = LaurentPoly::circle(0, 1, 0, -1);
        let s = &w + &winv;
        let expected = &(&LaurentPoly::circle(0, 1, 0, 2) + &LaurentPoly::circle(0, 1, 0, -2))
            + &LaurentPoly::constant(0, 1, GaussianRational::from_int(2));
        assert_eq!(&s * &s, expected);
        assert_eq!(s.pow(2), expected);

        let z = LaurentPoly::circle(0, 1, 0, 1);
        assert_eq!(z.pow(3), LaurentPoly::circle(0, 1, 0, 3));
        assert_eq!(z.pow(0), LaurentPoly::one(0, 1));
    }

    #[test]
    fn dimension_mismatch() {
        let a = LaurentPoly::one(1, 2);
        let b = LaurentPoly::one(1, 3);
        assert!(matches!(a.try_mul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.try_add(&b), Err(Error::DimensionMismatch { .. })));
        let m = measure_spec(&GroupSpec::su(3).unwrap(), None).unwrap();
        assert!(matches!(a.weighted_integral(&m), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn conjugation_examples() {
        let iz = LaurentPoly::circle(0, 1, 0, 1).scale(&GaussianRational::i());
        assert_eq!(iz.conjugate(), LaurentPoly::circle(0, 1, 0, -1).scale(&g(0, -1)));
        let x = LaurentPoly::x(1, 1, 0);
        assert_eq!(x.conjugate(), x);
        let one = LaurentPoly::one(1, 1);
        let post = &one - &(&x * &x);
        let w = LaurentPoly::circle(1, 1, 0, 1);
        let winv = LaurentPoly::circle(1, 1, 0, -1);
        assert_eq!((&w * &post).conjugate(), &winv * &post);
    }

    #[test]
    fn su2_integrals() {
        let m = measure_spec(&GroupSpec::su(2).unwrap(), None).unwrap();
        let one = LaurentPoly::one(1, 2);
        assert_eq!(one.weighted_integral(&m).unwrap(), GaussianRational::one());
        let w = LaurentPoly::circle(1, 2, 0, 1);
        assert_eq!(w.weighted_integral(&m).unwrap(), GaussianRational::zero());
        let x = LaurentPoly::x(1, 2, 0);
        let p = &one - &(&x * &x);
        assert_eq!(p.weighted_integral(&m).unwrap(), GaussianRational::real(frac(1, 2)));
    }

    #[test]
    fn spectrum_examples() {
        assert!(LaurentPoly::zero(1, 2).spectrum().is_empty());
        let x = LaurentPoly::x(1, 2, 0);
        let w = LaurentPoly::circle(1, 2, 0, 1);
        let z = LaurentPoly::circle(1, 2, 1, 1);
        let winv = LaurentPoly::circle(1, 2, 0, -1);
        let p = &(&(&x * &w) * &z) + &winv;
        assert_eq!(p.spectrum(), [vec![1, 1], vec![-1, 0]].into_iter().collect());
        let q = &(&w * &z) * &(&LaurentPoly::one(1, 2) - &(&x * &x));
        assert_eq!(q.spectrum(), [vec![1, 1]].into_iter().collect());
    }

    #[test]
    fn text_form() {
        let x = LaurentPoly::x(1, 1, 0);
        let t = LaurentPoly::circle(1, 1, 0, -1).scale(&g(0, 2));
        let p = &x + &t;
        assert_eq!(p.to_string(), "2i*t1^-1 + x1");
    }

    fn arb_coeff() -> impl Strategy<Value = GaussianRational> {
        (-5i64..=5, 1i64..=4, -5i64..=5, 1i64..=4).prop_map(|(a, b, c, d)| GaussianRational::new(frac(a, b), frac(c, d)))
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((prop::collection::vec(0u32..3, 1), prop::collection::vec(-2i32..=2, 2), arb_coeff()), 0..6)
            .prop_map(|terms| {
                LaurentPoly::from_terms(1, 2, terms.into_iter().map(|(x, circle, c)| (Monomial { x, circle }, c))).unwrap()
            })
    }

    proptest! {
        #[test]
        fn conjugation_is_multiplicative_involution(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(p.conjugate().conjugate(), p.clone());
            prop_assert_eq!((&p * &q).conjugate(), &p.conjugate() * &q.conjugate());
        }

        #[test]
        fn integral_is_linear_and_commutes_with_conjugation(p in arb_poly(), q in arb_poly(), c in arb_coeff()) {
            let m = measure_spec(&GroupSpec::su(2).unwrap(), None).unwrap();
            let lhs = (&p.scale(&c) + &q).weighted_integral(&m).unwrap();
            let rhs = &(&c * &p.weighted_integral(&m).unwrap()) + &q.weighted_integral(&m).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(p.conjugate().weighted_integral(&m).unwrap(), p.weighted_integral(&m).unwrap().conj());
        }

        #[test]
        fn spectrum_of_product_lies_in_minkowski_sum(p in arb_poly(), q in arb_poly()) {
            let sp = p.spectrum();
            let sq = q.spectrum();
            for m in (&p * &q).spectrum() {
                let found = sp.iter().any(|a| sq.iter().any(|b| a.iter().zip(b).map(|(x, y)| x + y).eq(m.iter().copied())));
                prop_assert!(found);
            }
        }

        #[test]
        fn zero_outside_spectrum_means_zero_integral(p in arb_poly()) {
            let m = measure_spec(&GroupSpec::su(2).unwrap(), None).unwrap();
            if !p.spectrum().contains(&vec![0, 0]) {
                prop_assert!(p.weighted_integral(&m).unwrap().is_zero());
            }
        }

        #[test]
        fn json_round_trip(p in arb_poly()) {
            let text = serde_json::to_string(&p).unwrap();
            let back: LaurentPoly = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
