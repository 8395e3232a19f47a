//! Polynomial expressions in the matrix entries of the simple factors, their
//! conjugates and explicit torus coordinates.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' NAT)?
//! atom   := RATIONAL | 'i' | 'a' NAT? '[' NAT ',' NAT ']' | 'c' NAT? '[' NAT ',' NAT ']'
//!         | 'u' '[' NAT ']' ('^-1')? | '(' expr ')'
//! ```
//!
//! Factor and index numbering is 1-based; `a[i,j]` abbreviates `a1[i,j]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::laurent::GaussianRational;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(GaussianRational),
    /// Entry `(i, j)` of factor `factor` (all 1-based); `conj` selects `c`.
    Entry {
        conj: bool,
        factor: usize,
        i: usize,
        j: usize,
    },
    /// Torus coordinate `u[k]` (1-based) or its inverse.
    Torus { k: usize, inverse: bool },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn constant(c: GaussianRational) -> Expr {
        Expr::Const(c)
    }

    pub fn a(factor: usize, i: usize, j: usize) -> Expr {
        Expr::Entry {
            conj: false,
            factor,
            i,
            j,
        }
    }

    pub fn c(factor: usize, i: usize, j: usize) -> Expr {
        Expr::Entry {
            conj: true,
            factor,
            i,
            j,
        }
    }

    pub fn u(k: usize) -> Expr {
        Expr::Torus { k, inverse: false }
    }

    pub fn pow(self, n: u32) -> Expr {
        Expr::Pow(Box::new(self), n)
    }

    /// Complex conjugate expression: `a` and `c` swap, constants are
    /// conjugated and torus coordinates inverted.
    pub fn conjugate_swapped(&self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(c.conj()),
            Expr::Entry { conj, factor, i, j } => Expr::Entry {
                conj: !conj,
                factor: *factor,
                i: *i,
                j: *j,
            },
            Expr::Torus { k, inverse } => Expr::Torus {
                k: *k,
                inverse: !inverse,
            },
            Expr::Add(l, r) => Expr::Add(Box::new(l.conjugate_swapped()), Box::new(r.conjugate_swapped())),
            Expr::Sub(l, r) => Expr::Sub(Box::new(l.conjugate_swapped()), Box::new(r.conjugate_swapped())),
            Expr::Mul(l, r) => Expr::Mul(Box::new(l.conjugate_swapped()), Box::new(r.conjugate_swapped())),
            Expr::Neg(e) => Expr::Neg(Box::new(e.conjugate_swapped())),
            Expr::Pow(b, n) => Expr::Pow(Box::new(b.conjugate_swapped()), *n),
        }
    }

    /// Fold every constant subexpression into a single constant. Powers of
    /// constants are folded only up to exponent 64.
    pub fn fold_constants(self) -> Expr {
        fn bin(l: Expr, r: Expr, op: fn(&GaussianRational, &GaussianRational) -> GaussianRational, mk: fn(Box<Expr>, Box<Expr>) -> Expr) -> Expr {
            match (l.fold_constants(), r.fold_constants()) {
                (Expr::Const(a), Expr::Const(b)) => Expr::Const(op(&a, &b)),
                (l, r) => mk(Box::new(l), Box::new(r)),
            }
        }
        match self {
            Expr::Add(l, r) => bin(*l, *r, |a, b| a + b, Expr::Add),
            Expr::Sub(l, r) => bin(*l, *r, |a, b| a - b, Expr::Sub),
            Expr::Mul(l, r) => bin(*l, *r, |a, b| a * b, Expr::Mul),
            Expr::Neg(e) => match e.fold_constants() {
                Expr::Const(c) => Expr::Const(-c),
                e => Expr::Neg(Box::new(e)),
            },
            Expr::Pow(b, n) => match b.fold_constants() {
                Expr::Const(c) if n <= 64 => {
                    let mut acc = GaussianRational::one();
                    for _ in 0..n {
                        acc = &acc * &c;
                    }
                    Expr::Const(acc)
                }
                b => Expr::Pow(Box::new(b), n),
            },
            leaf => leaf,
        }
    }

    /// Upper bound on the total degree in entries and torus coordinates.
    pub fn degree(&self) -> u32 {
        match self {
            Expr::Const(_) => 0,
            Expr::Entry { .. } | Expr::Torus { .. } => 1,
            Expr::Add(l, r) | Expr::Sub(l, r) => l.degree().max(r.degree()),
            Expr::Mul(l, r) => l.degree() + r.degree(),
            Expr::Neg(e) => e.degree(),
            Expr::Pow(b, n) => b.degree() * n,
        }
    }

    /// Visit every leaf symbol.
    pub fn for_each_symbol(&self, f: &mut impl FnMut(&Expr)) {
        match self {
            Expr::Const(_) => {}
            Expr::Entry { .. } | Expr::Torus { .. } => f(self),
            Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) => {
                l.for_each_symbol(f);
                r.for_each_symbol(f);
            }
            Expr::Neg(e) | Expr::Pow(e, _) => e.for_each_symbol(f),
        }
    }

    /// Numeric value given the entries of each factor (row-major `n x n`)
    /// and the torus phases. Conjugate symbols use complex conjugation.
    pub fn eval_numeric(&self, entry: &impl Fn(usize, usize, usize) -> Complex64, torus: &[Complex64]) -> Complex64 {
        match self {
            Expr::Const(c) => c.to_complex(),
            Expr::Entry { conj, factor, i, j } => {
                let v = entry(*factor, *i, *j);
                if *conj {
                    v.conj()
                } else {
                    v
                }
            }
            Expr::Torus { k, inverse } => {
                let t = torus[k - 1];
                if *inverse {
                    t.inv()
                } else {
                    t
                }
            }
            Expr::Add(l, r) => l.eval_numeric(entry, torus) + r.eval_numeric(entry, torus),
            Expr::Sub(l, r) => l.eval_numeric(entry, torus) - r.eval_numeric(entry, torus),
            Expr::Mul(l, r) => l.eval_numeric(entry, torus) * r.eval_numeric(entry, torus),
            Expr::Neg(e) => -e.eval_numeric(entry, torus),
            Expr::Pow(b, n) => b.eval_numeric(entry, torus).powu(*n),
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_const(c: &GaussianRational) -> String {
    let simple_real = |q: &Rational| !q.is_negative() && q.denom().is_one();
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) if simple_real(&c.re) => fmt_rational(&c.re),
        (_, true) => format!("({})", fmt_rational(&c.re)),
        (true, false) if c.im.is_one() => "i".into(),
        (true, false) => format!("({}*i)", fmt_rational(&c.im)),
        (false, false) => format!("({} + {}*i)", fmt_rational(&c.re), fmt_rational(&c.im)),
    }
}

/// Prints a fully parenthesized form; parsing it back yields the same tree
/// up to [`Expr::fold_constants`].
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => f.write_str(&fmt_const(c)),
            Expr::Entry { conj, factor, i, j } => {
                write!(f, "{}{factor}[{i},{j}]", if *conj { 'c' } else { 'a' })
            }
            Expr::Torus { k, inverse: false } => write!(f, "u[{k}]"),
            Expr::Torus { k, inverse: true } => write!(f, "u[{k}]^-1"),
            Expr::Add(l, r) => write!(f, "({l} + {r})"),
            Expr::Sub(l, r) => write!(f, "({l} - {r})"),
            Expr::Mul(l, r) => write!(f, "({l}*{r})"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Pow(b, n) => match **b {
                Expr::Pow(..) | Expr::Torus { inverse: true, .. } => write!(f, "({b})^{n}"),
                _ => write!(f, "{b}^{n}"),
            },
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(self.pos, format!("expected '{}', found '{}'", ch as char, c as char)),
            None => self.err(self.pos, format!("expected '{}', found end of input", ch as char)),
        }
    }

    fn nat(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected a natural number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn small_nat(&mut self, what: &str) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        let n = self.nat()?;
        usize::try_from(n).map_err(|_| Error::Parse {
            pos: start,
            msg: format!("{what} is too large"),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = lhs + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = lhs - self.term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = lhs * self.unary()?;
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'-') {
                return self.err(self.pos, "negative powers are only allowed on torus coordinates");
            }
            let start = self.pos;
            let n = self.nat()?;
            let n = u32::try_from(n).map_err(|_| Error::Parse {
                pos: start,
                msg: "exponent is too large".into(),
            })?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn index_pair(&mut self) -> Result<(usize, usize)> {
        self.expect(b'[')?;
        let i = self.small_nat("row index")?;
        self.expect(b',')?;
        let j = self.small_nat("column index")?;
        self.expect(b']')?;
        Ok((i, j))
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return self.err(self.pos, "unexpected end of input"),
        };
        match self.src[start] {
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            b'0'..=b'9' => {
                let num = self.nat()?;
                let save = self.pos;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den_pos = self.pos;
                    let den = self.nat()?;
                    if den.is_zero() {
                        return self.err(den_pos, "zero denominator");
                    }
                    return Ok(Expr::Const(GaussianRational::real(Rational::new(num, den))));
                }
                self.pos = save;
                Ok(Expr::Const(GaussianRational::real(Rational::from_integer(num))))
            }
            b'i' => {
                self.pos += 1;
                Ok(Expr::Const(GaussianRational::i()))
            }
            c @ (b'a' | b'c') => {
                self.pos += 1;
                let factor = if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.small_nat("factor number")?
                } else {
                    1
                };
                let (i, j) = self.index_pair()?;
                if factor == 0 || i == 0 || j == 0 {
                    return self.err(start, "factor and matrix indices are 1-based");
                }
                Ok(Expr::Entry {
                    conj: c == b'c',
                    factor,
                    i,
                    j,
                })
            }
            b'u' => {
                self.pos += 1;
                self.expect(b'[')?;
                let k = self.small_nat("torus index")?;
                self.expect(b']')?;
                if k == 0 {
                    return self.err(start, "torus indices are 1-based");
                }
                // `u[k]^-1`; a following `^NAT` is handled by `factor`.
                let save = self.pos;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    if self.peek() == Some(b'-') {
                        self.pos += 1;
                        let one_pos = {
                            self.skip_ws();
                            self.pos
                        };
                        let n = self.nat()?;
                        if !n.is_one() {
                            return self.err(one_pos, "only '^-1' is allowed as a negative power");
                        }
                        return Ok(Expr::Torus { k, inverse: true });
                    }
                }
                self.pos = save;
                Ok(Expr::Torus { k, inverse: false })
            }
            other => self.err(start, format!("unexpected character '{}'", other as char)),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        if let Some(pos) = s.bytes().position(|b| !b.is_ascii()) {
            return Err(Error::Parse {
                pos,
                msg: "non-ASCII character".into(),
            });
        }
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        if let Some(c) = p.peek() {
            return p.err(p.pos, format!("unexpected trailing '{}'", c as char));
        }
        Ok(e.fold_constants())
    }
}
