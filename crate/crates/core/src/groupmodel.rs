//! Coordinate models for `SU(n)` factors.
//!
//! Each factor with reduced word `i_1 ... i_L` gets the symbolic matrix
//! `Q = E_{i_1}(B(x_1, w_1)) ... E_{i_L}(B(x_L, w_L)) psi(z)` where
//! `B(x, w) = [[iw(1-x^2), ix], [ix, -iw^-1]]` and `psi(z)` is the diagonal
//! torus. Its partner `Qc` is the inverse transpose of `Q`, built block by
//! block, and stands in for the entrywise complex conjugate.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::laurent::{GaussianRational, LaurentPoly};
use crate::measure::{measure_spec, FactorLayout, GroupSpec, MeasureSpec, SimpleFactor};
use crate::rootsystem::RootType;
use crate::weyl::{longest_beta_sequence, ReducedWord};

/// A square matrix of Laurent polynomials, row-major.
pub type PolyMatrix = Vec<Vec<LaurentPoly>>;

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateMatrixPair {
    pub q: PolyMatrix,
    pub qc: PolyMatrix,
    pub word: ReducedWord,
    /// Index of the factor inside its group.
    pub factor: usize,
}

impl CoordinateMatrixPair {
    pub fn size(&self) -> usize {
        self.q.len()
    }
}

fn gi(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(crate::rational::int(re), crate::rational::int(im))
}

/// Right-multiply columns `(c, c+1)` of `m` by the 2x2 block `s`.
fn right_block(m: &mut PolyMatrix, c: usize, s: &[[LaurentPoly; 2]; 2]) {
    for row in m.iter_mut() {
        let left = &(&row[c] * &s[0][0]) + &(&row[c + 1] * &s[1][0]);
        let right = &(&row[c] * &s[0][1]) + &(&row[c + 1] * &s[1][1]);
        row[c] = left;
        row[c + 1] = right;
    }
}

fn identity(n: usize, n_x: usize, n_circle: usize) -> PolyMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        LaurentPoly::one(n_x, n_circle)
                    } else {
                        LaurentPoly::zero(n_x, n_circle)
                    }
                })
                .collect()
        })
        .collect()
}

/// Build `Q` and `Qc` for an `SU(n)` factor in the global variable space of
/// `m`.
pub fn coordinate_matrix(m: &MeasureSpec, factor: usize) -> Result<CoordinateMatrixPair> {
    let layout: &FactorLayout = m
        .factors
        .get(factor)
        .ok_or_else(|| Error::IndexOutOfRange(format!("factor {} of {}", factor + 1, m.factors.len())))?;
    let n = layout.factor.su_dimension().ok_or(Error::UnsupportedFactor {
        factor: factor + 1,
        label: layout.factor.to_string(),
    })?;
    let (nx, nc) = (m.n_x, m.n_circle);
    let one = LaurentPoly::one(nx, nc);
    let mut q = identity(n, nx, nc);
    let mut qc = identity(n, nx, nc);
    for (j, &letter) in layout.word.letters.iter().enumerate() {
        let x = LaurentPoly::x(nx, nc, layout.x_offset + j);
        let w = LaurentPoly::circle(nx, nc, layout.w_offset + j, 1);
        let winv = LaurentPoly::circle(nx, nc, layout.w_offset + j, -1);
        let post = &one - &(&x * &x);
        let ix = x.scale(&gi(0, 1));
        let mix = x.scale(&gi(0, -1));
        let b = [
            [(&w * &post).scale(&gi(0, 1)), ix.clone()],
            [ix, winv.scale(&gi(0, -1))],
        ];
        let bc = [
            [winv.scale(&gi(0, -1)), mix.clone()],
            [mix, (&w * &post).scale(&gi(0, 1))],
        ];
        right_block(&mut q, letter - 1, &b);
        right_block(&mut qc, letter - 1, &bc);
    }
    let z0 = layout.z_offset();
    let mut last = LaurentPoly::one(nx, nc);
    for k in 0..n - 1 {
        let z = LaurentPoly::circle(nx, nc, z0 + k, 1);
        let zinv = LaurentPoly::circle(nx, nc, z0 + k, -1);
        for row in q.iter_mut() {
            row[k] = &row[k] * &z;
        }
        for row in qc.iter_mut() {
            row[k] = &row[k] * &zinv;
        }
        last = &last * &z;
    }
    let last_inv = last.conjugate();
    for row in q.iter_mut() {
        row[n - 1] = &row[n - 1] * &last_inv;
    }
    for row in qc.iter_mut() {
        row[n - 1] = &row[n - 1] * &last;
    }
    Ok(CoordinateMatrixPair {
        q,
        qc,
        word: layout.word.clone(),
        factor,
    })
}

/// Product of two polynomial matrices.
pub fn poly_matmul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    let (nx, nc) = (a[0][0].n_x(), a[0][0].n_circle());
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(LaurentPoly::zero(nx, nc), |acc, k| &acc + &(&a[i][k] * &b[k][j]))
                })
                .collect()
        })
        .collect()
}

pub fn poly_transpose(a: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

/// Determinant by Laplace expansion along the first row.
pub fn poly_det(a: &PolyMatrix) -> LaurentPoly {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let (nx, nc) = (a[0][0].n_x(), a[0][0].n_circle());
    let mut acc = LaurentPoly::zero(nx, nc);
    for c in 0..n {
        if a[0][c].is_zero() {
            continue;
        }
        let minor: PolyMatrix = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = &a[0][c] * &poly_det(&minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// The reduction `f -> f~` for a product group, realized as the ring
/// homomorphism substituting `Q` and `Qc` entries and torus variables.
#[derive(Debug, Clone)]
pub struct GroupModel {
    measure: MeasureSpec,
    pairs: Vec<Option<CoordinateMatrixPair>>,
}

impl GroupModel {
    pub fn new(spec: &GroupSpec, words: Option<&[ReducedWord]>) -> Result<GroupModel> {
        let measure = measure_spec(spec, words)?;
        let pairs = (0..measure.factors.len())
            .map(|f| {
                if measure.factors[f].factor.root_type == RootType::A {
                    coordinate_matrix(&measure, f).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupModel { measure, pairs })
    }

    pub fn measure(&self) -> &MeasureSpec {
        &self.measure
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.measure.group
    }

    /// Coordinate matrices of factor `factor` (0-based).
    pub fn pair(&self, factor: usize) -> Result<&CoordinateMatrixPair> {
        match self.pairs.get(factor) {
            None => Err(Error::IndexOutOfRange(format!(
                "factor {} but the group has {} simple factors",
                factor + 1,
                self.pairs.len()
            ))),
            Some(None) => Err(Error::UnsupportedFactor {
                factor: factor + 1,
                label: self.measure.factors[factor].factor.to_string(),
            }),
            Some(Some(p)) => Ok(p),
        }
    }

    /// Check that every symbol of `expr` refers to an existing coordinate.
    pub fn validate(&self, expr: &Expr) -> Result<()> {
        let mut err = None;
        expr.for_each_symbol(&mut |s| {
            if err.is_some() {
                return;
            }
            if let Err(e) = self.check_symbol(s) {
                err = Some(e);
            }
        });
        err.map_or(Ok(()), Err)
    }

    fn check_symbol(&self, s: &Expr) -> Result<()> {
        match *s {
            Expr::Entry { factor, i, j, .. } => {
                if factor == 0 {
                    return Err(Error::IndexOutOfRange("factor numbers are 1-based".into()));
                }
                let n = self.pair(factor - 1)?.size();
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(Error::IndexOutOfRange(format!(
                        "entry [{i},{j}] of factor {factor}, which is {n}x{n}"
                    )));
                }
                Ok(())
            }
            Expr::Torus { k, .. } => {
                let d = self.measure.group.torus_dim;
                if k == 0 || k > d {
                    return Err(Error::IndexOutOfRange(format!("u[{k}] but the torus has dimension {d}")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn reduce(&self, expr: &Expr) -> Result<LaurentPoly> {
        self.validate(expr)?;
        Ok(self.reduce_unchecked(expr))
    }

    fn reduce_unchecked(&self, expr: &Expr) -> LaurentPoly {
        let (nx, nc) = (self.measure.n_x, self.measure.n_circle);
        match expr {
            Expr::Const(c) => LaurentPoly::constant(nx, nc, c.clone()),
            Expr::Entry { conj, factor, i, j } => {
                let p = self.pairs[factor - 1].as_ref().expect("validated");
                let m = if *conj { &p.qc } else { &p.q };
                m[i - 1][j - 1].clone()
            }
            Expr::Torus { k, inverse } => {
                LaurentPoly::circle(nx, nc, self.measure.torus_offset + k - 1, if *inverse { -1 } else { 1 })
            }
            Expr::Add(l, r) => &self.reduce_unchecked(l) + &self.reduce_unchecked(r),
            Expr::Sub(l, r) => &self.reduce_unchecked(l) - &self.reduce_unchecked(r),
            Expr::Mul(l, r) => {
                let a = self.reduce_unchecked(l);
                if a.is_zero() {
                    return a;
                }
                &a * &self.reduce_unchecked(r)
            }
            Expr::Neg(e) => -&self.reduce_unchecked(e),
            Expr::Pow(b, n) => self.reduce_unchecked(b).pow(*n),
        }
    }

    /// Exact Haar integral of `expr`.
    pub fn integrate(&self, expr: &Expr) -> Result<GaussianRational> {
        self.reduce(expr)?.weighted_integral(&self.measure)
    }
}

/// Reduce `f` for the group `spec` with optional per-factor words.
pub fn reduce_function(f: &Expr, spec: &GroupSpec, words: Option<&[ReducedWord]>) -> Result<LaurentPoly> {
    GroupModel::new(spec, words)?.reduce(f)
}

/// A dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> CMatrix {
        CMatrix {
            n,
            data: vec![Complex64::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> CMatrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix required");
        CMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Complex64::one();
        for c in 0..n {
            let p = (c..n)
                .max_by(|&r, &s| a[r * n + c].norm().total_cmp(&a[s * n + c].norm()))
                .expect("nonempty range");
            if a[p * n + c] == Complex64::zero() {
                return Complex64::zero();
            }
            if p != c {
                for k in 0..n {
                    a.swap(p * n + k, c * n + k);
                }
                det = -det;
            }
            let pivot = a[c * n + c];
            det *= pivot;
            for r in c + 1..n {
                let f = a[r * n + c] / pivot;
                for k in c..n {
                    let v = a[c * n + k];
                    a[r * n + k] -= f * v;
                }
            }
        }
        det
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Right-multiply columns `(c, c+1)` by a 2x2 block.
    fn right_block(&mut self, c: usize, s: [[Complex64; 2]; 2]) {
        let n = self.n;
        for r in 0..n {
            let a = self.data[r * n + c];
            let b = self.data[r * n + c + 1];
            self.data[r * n + c] = a * s[0][0] + b * s[1][0];
            self.data[r * n + c + 1] = a * s[0][1] + b * s[1][1];
        }
    }
}

const UNIT_TOL: f64 = 1e-12;

/// The unitary chart point for an `SU(n)` factor without input validation.
/// `x`, `w` have one entry per letter of `word`, and `z` has `n - 1`.
pub fn numeric_point_unchecked(n: usize, word: &[usize], x: &[f64], w: &[Complex64], z: &[Complex64]) -> CMatrix {
    let i = Complex64::i();
    let mut m = CMatrix::identity(n);
    for ((&letter, &xj), &wj) in word.iter().zip(x).zip(w) {
        let s = (1.0 - xj * xj).max(0.0).sqrt();
        let block = [[i * wj * s, i * xj], [i * xj, -i * s / wj]];
        m.right_block(letter - 1, block);
    }
    let mut last = Complex64::one();
    for (k, &zk) in z.iter().enumerate() {
        for r in 0..n {
            m.data[r * n + k] *= zk;
        }
        last *= zk;
    }
    let last_inv = last.inv();
    for r in 0..n {
        m.data[r * n + n - 1] *= last_inv;
    }
    m
}

/// The unitary chart point `prod_j E_{i_j}([[iw s, ix], [ix, -iw^-1 s]]) psi(z)`
/// with `s = sqrt(1 - x^2)`, for the `SU(n)` factor `factor`.
pub fn numeric_point(
    factor: &SimpleFactor,
    word: &ReducedWord,
    x: &[f64],
    w: &[Complex64],
    z: &[Complex64],
) -> Result<CMatrix> {
    let n = factor.su_dimension().ok_or(Error::UnsupportedFactor {
        factor: 1,
        label: factor.to_string(),
    })?;
    longest_beta_sequence(&factor.root_system(), word)?;
    let l = word.len();
    if x.len() != l || w.len() != l || z.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: format!("{l} x, {l} w, {} z values", n - 1),
            got: format!("{} x, {} w, {} z values", x.len(), w.len(), z.len()),
        });
    }
    if let Some(bad) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::DomainError(format!("x = {bad} lies outside [0, 1]")));
    }
    if let Some(bad) = w.iter().chain(z).find(|v| (v.norm() - 1.0).abs() > UNIT_TOL) {
        return Err(Error::DomainError(format!("circle value {bad} is not unimodular")));
    }
    Ok(numeric_point_unchecked(n, &word.letters, x, w, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn model(n: usize) -> GroupModel {
        GroupModel::new(&GroupSpec::su(n).unwrap(), None).unwrap()
    }

    fn parse(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn su2_matrix_and_integrals() {
        let gm = model(2);
        let p = gm.pair(0).unwrap();
        let names = gm.measure().variable_names();
        let text = |q: &LaurentPoly| q.to_text(&names.0, &names.1);
        assert_eq!(text(&p.q[0][0]), "i*w1*z1 + -i*x1^2*w1*z1");
        assert_eq!(text(&p.q[0][1]), "i*x1*z1^-1");
        assert_eq!(text(&p.q[1][0]), "i*x1*z1");
        assert_eq!(text(&p.q[1][1]), "-i*w1^-1*z1^-1");
        assert_eq!(gm.integrate(&parse("a1[1,1]*a1[2,2]")).unwrap(), GaussianRational::real(frac(1, 2)));
        assert_eq!(
            gm.integrate(&parse("a1[1,1]*a1[1,2]*a1[2,1]*a1[2,2]")).unwrap(),
            GaussianRational::real(frac(-1, 6))
        );
    }

    #[test]
    fn exact_identities() {
        for n in 2..=4 {
            let gm = model(n);
            let p = gm.pair(0).unwrap();
            let (nx, nc) = (gm.measure().n_x, gm.measure().n_circle);
            assert_eq!(poly_det(&p.q), LaurentPoly::one(nx, nc), "det, n = {n}");
            assert_eq!(poly_matmul(&p.q, &poly_transpose(&p.qc)), identity(n, nx, nc), "n = {n}");
        }
    }

    #[test]
    fn schur_orthogonality() {
        for n in 2..=4 {
            let gm = model(n);
            let expected = GaussianRational::real(frac(1, n as i64));
            for i in 1..=n {
                for j in 1..=n {
                    let v = gm.integrate(&(Expr::a(1, i, j) * Expr::c(1, i, j))).unwrap();
                    assert_eq!(v, expected, "n = {n}, ({i},{j})");
                }
            }
            // off-diagonal pairs vanish
            let v = gm.integrate(&(Expr::a(1, 1, 1) * Expr::c(1, 2, 1))).unwrap();
            assert!(v.is_zero());
        }
    }

    #[test]
    fn fourth_moments() {
        // E|a_11|^4 = 2 / (n (n + 1)) and E|a_11|^2 |a_22|^2 = 1 / (n^2 - 1)
        for n in 2..=4i64 {
            let gm = model(n as usize);
            let v = gm.integrate(&(Expr::a(1, 1, 1) * Expr::c(1, 1, 1)).pow(2)).unwrap();
            assert_eq!(v, GaussianRational::real(frac(2, n * (n + 1))), "n = {n}");
            let v = gm
                .integrate(&(Expr::a(1, 1, 1) * Expr::c(1, 1, 1) * Expr::a(1, 2, 2) * Expr::c(1, 2, 2)))
                .unwrap();
            assert_eq!(v, GaussianRational::real(frac(1, n * n - 1)), "n = {n}");
        }
    }

    #[test]
    fn determinant_integrates_to_one() {
        let gm = model(3);
        let det = parse(
            "a[1,1]*a[2,2]*a[3,3] + a[1,2]*a[2,3]*a[3,1] + a[1,3]*a[2,1]*a[3,2] \
             - a[1,3]*a[2,2]*a[3,1] - a[1,1]*a[2,3]*a[3,2] - a[1,2]*a[2,1]*a[3,3]",
        );
        assert_eq!(gm.integrate(&det).unwrap(), GaussianRational::one());
    }

    #[test]
    fn product_groups() {
        let spec: GroupSpec = "SU(2) x SU(2) x T^1".parse().unwrap();
        let gm = GroupModel::new(&spec, None).unwrap();
        let e = parse("a1[1,1]*c1[1,1]*a2[2,2]*c2[2,2]*u[1]*u[1]^-1");
        assert_eq!(gm.integrate(&e).unwrap(), GaussianRational::real(frac(1, 4)));
        assert!(gm.integrate(&parse("u[1]")).unwrap().is_zero());
    }

    #[test]
    fn symbol_errors() {
        let gm = model(2);
        assert!(matches!(gm.reduce(&parse("a[3,1]")), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(gm.reduce(&parse("a2[1,1]")), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(gm.reduce(&parse("u[1]")), Err(Error::IndexOutOfRange(_))));
        let g2 = GroupModel::new(&"G2".parse().unwrap(), None).unwrap();
        assert!(matches!(g2.reduce(&parse("a[1,1]")), Err(Error::UnsupportedFactor { .. })));
        assert_eq!(g2.integrate(&parse("1/3")).unwrap(), GaussianRational::real(frac(1, 3)));
    }

    #[test]
    fn conjugation_at_integral_level() {
        let gm = model(3);
        for s in ["a[1,2]*a[2,1]*i", "a[1,1]^2*c[2,2] + 1/2*a[3,3]", "(a[1,1] + i*c[2,3])^3"] {
            let e = parse(s);
            let lhs = gm.integrate(&e.conjugate_swapped()).unwrap();
            assert_eq!(lhs, gm.integrate(&e).unwrap().conj(), "{s}");
        }
    }

    #[test]
    fn numeric_point_examples() {
        let f = SimpleFactor::su(2).unwrap();
        let w = ReducedWord::new(vec![1]);
        let one = Complex64::one();
        let i = Complex64::i();
        let m = numeric_point(&f, &w, &[0.0], &[one], &[one]).unwrap();
        assert!(m.max_abs_diff(&CMatrix::from_rows(vec![vec![i, 0.0.into()], vec![0.0.into(), -i]])) < 1e-15);
        let m = numeric_point(&f, &w, &[1.0], &[Complex64::from_polar(1.0, 0.7)], &[one]).unwrap();
        assert!(m.max_abs_diff(&CMatrix::from_rows(vec![vec![0.0.into(), i], vec![i, 0.0.into()]])) < 1e-15);
        assert!(matches!(numeric_point(&f, &w, &[1.5], &[one], &[one]), Err(Error::DomainError(_))));
        assert!(matches!(numeric_point(&f, &w, &[0.5], &[one * 1.1], &[one]), Err(Error::DomainError(_))));
    }

    #[test]
    fn numeric_points_are_special_unitary() {
        let f = SimpleFactor::su(3).unwrap();
        let word = ReducedWord::new(vec![1, 2, 1]);
        let ph = |t: f64| Complex64::from_polar(1.0, t);
        for s in 0..20 {
            let t = s as f64 * 0.37;
            let x = [t.sin().abs(), (0.3 * t).cos().abs(), 0.5];
            let m = numeric_point(&f, &word, &x, &[ph(t), ph(2.0 * t), ph(-t)], &[ph(0.1 + t), ph(1.3 * t)]).unwrap();
            assert!(m.adjoint().mul(&m).max_abs_diff(&CMatrix::identity(3)) < 1e-12);
            assert!((m.det() - 1.0).norm() < 1e-12);
        }
    }
}
