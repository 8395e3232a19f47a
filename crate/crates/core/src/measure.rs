//! Integration-measure data for products of simple groups and a torus.
//!
//! For each simple factor with a reduced word of length `L` for the longest
//! Weyl element and rank `R`, the chart uses `L` variables `x_j` in `[0, 1]`
//! with weight `x_j^(2 e_j - 1)`, `L` circle variables `w_j` and `R` circle
//! variables `z_k`. Torus factors contribute further circle variables `u_k`.
//! All circle variables carry the normalized Haar measure of the circle, so
//! the only global constant is `A = prod_j 2 e_j`.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::rootsystem::{Root, RootSystem, RootType};
use crate::weyl::{canonical_longest_word, longest_beta_sequence, ReducedWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleFactor {
    pub root_type: RootType,
    pub rank: usize,
}

impl SimpleFactor {
    pub fn new(root_type: RootType, rank: usize) -> Result<SimpleFactor> {
        if !root_type.is_valid_rank(rank) {
            return Err(Error::InvalidType { root_type, rank });
        }
        Ok(SimpleFactor { root_type, rank })
    }

    /// `SU(n)`, i.e. type `A_{n-1}`.
    pub fn su(n: usize) -> Result<SimpleFactor> {
        if n < 2 {
            return Err(Error::InvalidGroup(format!("SU({n}) is trivial; need n >= 2")));
        }
        SimpleFactor::new(RootType::A, n - 1)
    }

    pub fn root_system(&self) -> RootSystem {
        RootSystem::new(self.root_type, self.rank).expect("validated at construction")
    }

    /// Size of the defining matrix representation for type A factors.
    pub fn su_dimension(&self) -> Option<usize> {
        (self.root_type == RootType::A).then_some(self.rank + 1)
    }
}

impl fmt::Display for SimpleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.su_dimension() {
            Some(n) => write!(f, "SU({n})"),
            None => write!(f, "{}{}", self.root_type, self.rank),
        }
    }
}

/// A product `K_1 x ... x K_n x T^d` of simple factors and a torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub simple_factors: Vec<SimpleFactor>,
    pub torus_dim: usize,
}

impl GroupSpec {
    pub fn new(simple_factors: Vec<SimpleFactor>, torus_dim: usize) -> Result<GroupSpec> {
        if simple_factors.is_empty() && torus_dim == 0 {
            return Err(Error::InvalidGroup("the trivial group has no factors".into()));
        }
        Ok(GroupSpec {
            simple_factors,
            torus_dim,
        })
    }

    pub fn su(n: usize) -> Result<GroupSpec> {
        GroupSpec::new(vec![SimpleFactor::su(n)?], 0)
    }

    pub fn torus(d: usize) -> Result<GroupSpec> {
        GroupSpec::new(Vec::new(), d)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.simple_factors.iter().map(|s| s.to_string()).collect();
        if self.torus_dim > 0 {
            parts.push(format!("T^{}", self.torus_dim));
        }
        write!(f, "{}", parts.join("x"))
    }
}

/// Parses `GROUP := FACTOR ('x' FACTOR)*` with `FACTOR := 'SU(' NAT ')' |
/// 'T^' NAT | TYPE NAT`, where `TYPE` is one of the letters `A`..`G`.
/// Torus factors accumulate into a single torus.
impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupSpec> {
        let mut p = GroupParser { src: s, pos: 0 };
        let mut factors = Vec::new();
        let mut torus = 0;
        loop {
            p.skip_ws();
            let start = p.pos;
            if p.eat("SU(") {
                let n = p.nat()?;
                p.expect(")")?;
                factors.push(SimpleFactor::su(n).map_err(|e| p.err_at(start, e.to_string()))?);
            } else if p.eat("T^") {
                let d = p.nat()?;
                if d == 0 {
                    return Err(p.err_at(start, "torus dimension must be positive".into()));
                }
                torus += d;
            } else if let Some(t) = p.type_letter() {
                let rank = p.nat()?;
                factors.push(SimpleFactor::new(t, rank).map_err(|e| p.err_at(start, e.to_string()))?);
            } else {
                return Err(p.err_at(start, "expected 'SU(n)', 'T^d' or a type label such as 'G2'".into()));
            }
            p.skip_ws();
            if p.at_end() {
                break;
            }
            p.expect("x")?;
        }
        GroupSpec::new(factors, torus)
    }
}

struct GroupParser<'a> {
    src: &'a str,
    pos: usize,
}

impl GroupParser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err_at(self.pos, format!("expected {tok:?}")))
        }
    }

    fn type_letter(&mut self) -> Option<RootType> {
        let c = self.rest().chars().next()?;
        let t = RootType::from_str(&c.to_string()).ok()?;
        self.pos += 1;
        Some(t)
    }

    fn nat(&mut self) -> Result<usize> {
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.err_at(self.pos, "expected a natural number".into()));
        }
        let value = digits
            .parse()
            .map_err(|_| self.err_at(self.pos, "number too large".into()))?;
        self.pos += digits.len();
        Ok(value)
    }

    fn err_at(&self, pos: usize, msg: String) -> Error {
        Error::Parse { pos, msg }
    }
}

/// What a chart variable parametrizes. Factor and variable indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "lowercase")]
pub enum VarRole {
    X { factor: usize, j: usize },
    W { factor: usize, j: usize },
    Z { factor: usize, k: usize },
    U { k: usize },
}

/// Layout of one simple factor inside the global variable list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorLayout {
    pub factor: SimpleFactor,
    pub word: ReducedWord,
    pub betas: Vec<Root>,
    pub exponents: Vec<u32>,
    /// First x variable of this factor.
    pub x_offset: usize,
    /// First w variable of this factor among the circle variables; the `z`
    /// variables follow the `L` w variables directly.
    pub w_offset: usize,
}

impl FactorLayout {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn z_offset(&self) -> usize {
        self.w_offset + self.length()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub group: GroupSpec,
    pub n_x: usize,
    pub n_circle: usize,
    pub exponents: Vec<u32>,
    #[serde(with = "crate::rational::wire")]
    pub constant: Rational,
    pub x_roles: Vec<VarRole>,
    pub circle_roles: Vec<VarRole>,
    pub factors: Vec<FactorLayout>,
    pub torus_offset: usize,
}

impl MeasureSpec {
    /// Power of `x_j` in the weight monomial.
    pub fn weight_powers(&self) -> Vec<u32> {
        self.exponents.iter().map(|e| 2 * e - 1).collect()
    }

    /// A readable name for each x variable, then each circle variable.
    pub fn variable_names(&self) -> (Vec<String>, Vec<String>) {
        let multi = self.factors.len() > 1;
        let name = |prefix: &str, factor: usize, idx: usize| {
            if multi {
                format!("{prefix}{}_{}", factor + 1, idx + 1)
            } else {
                format!("{prefix}{}", idx + 1)
            }
        };
        let role_name = |r: &VarRole| match *r {
            VarRole::X { factor, j } => name("x", factor, j),
            VarRole::W { factor, j } => name("w", factor, j),
            VarRole::Z { factor, k } => name("z", factor, k),
            VarRole::U { k } => format!("u{}", k + 1),
        };
        (
            self.x_roles.iter().map(role_name).collect(),
            self.circle_roles.iter().map(role_name).collect(),
        )
    }
}

/// Assemble the measure for `spec`. `words`, when given, supplies one reduced
/// word for the longest element per simple factor; otherwise the canonical
/// words are used.
pub fn measure_spec(spec: &GroupSpec, words: Option<&[ReducedWord]>) -> Result<MeasureSpec> {
    build(spec, words, None)
}

fn build(spec: &GroupSpec, words: Option<&[ReducedWord]>, form_scale: Option<&Rational>) -> Result<MeasureSpec> {
    if let Some(ws) = words {
        if ws.len() != spec.simple_factors.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} words (one per simple factor)", spec.simple_factors.len()),
                got: format!("{} words", ws.len()),
            });
        }
    }
    let mut factors = Vec::with_capacity(spec.simple_factors.len());
    let mut x_roles = Vec::new();
    let mut circle_roles = Vec::new();
    let mut exponents = Vec::new();
    for (f, factor) in spec.simple_factors.iter().enumerate() {
        let mut rs = factor.root_system();
        if let Some(s) = form_scale {
            rs = rs.with_form_scale(s);
        }
        let word = match words {
            Some(ws) => ws[f].clone(),
            None => canonical_longest_word(&rs),
        };
        let seq = longest_beta_sequence(&rs, &word)?;
        let exps = seq
            .betas
            .iter()
            .map(|b| rs.weight_exponent(b))
            .collect::<Result<Vec<u32>>>()?;
        let layout = FactorLayout {
            factor: *factor,
            word,
            betas: seq.betas,
            exponents: exps.clone(),
            x_offset: x_roles.len(),
            w_offset: circle_roles.len(),
        };
        for j in 0..layout.length() {
            x_roles.push(VarRole::X { factor: f, j });
        }
        for j in 0..layout.length() {
            circle_roles.push(VarRole::W { factor: f, j });
        }
        for k in 0..factor.rank {
            circle_roles.push(VarRole::Z { factor: f, k });
        }
        exponents.extend(exps);
        factors.push(layout);
    }
    let torus_offset = circle_roles.len();
    for k in 0..spec.torus_dim {
        circle_roles.push(VarRole::U { k });
    }
    let constant = exponents
        .iter()
        .fold(Rational::one(), |acc, &e| acc * int(2 * e as i64));
    Ok(MeasureSpec {
        group: spec.clone(),
        n_x: x_roles.len(),
        n_circle: circle_roles.len(),
        exponents,
        constant,
        x_roles,
        circle_roles,
        factors,
        torus_offset,
    })
}
