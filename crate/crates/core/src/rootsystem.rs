//! Root data for the simple types A through G.
//!
//! Roots are stored as integer coordinate vectors in the basis of simple
//! roots. The invariant form is the symmetrized Cartan matrix, normalized so
//! that long roots have squared length 2.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, int, is_integer, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl RootType {
    pub const ALL: [RootType; 7] = [
        RootType::A,
        RootType::B,
        RootType::C,
        RootType::D,
        RootType::E,
        RootType::F,
        RootType::G,
    ];

    pub fn is_valid_rank(self, rank: usize) -> bool {
        match self {
            RootType::A => rank >= 1,
            RootType::B | RootType::C => rank >= 2,
            RootType::D => rank >= 3,
            RootType::E => (6..=8).contains(&rank),
            RootType::F => rank == 4,
            RootType::G => rank == 2,
        }
    }

    /// Number of positive roots of the irreducible system of this type.
    pub fn positive_root_count(self, rank: usize) -> usize {
        match self {
            RootType::A => rank * (rank + 1) / 2,
            RootType::B | RootType::C => rank * rank,
            RootType::D => rank * (rank - 1),
            RootType::E => match rank {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            RootType::F => 24,
            RootType::G => 6,
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            RootType::A => 'A',
            RootType::B => 'B',
            RootType::C => 'C',
            RootType::D => 'D',
            RootType::E => 'E',
            RootType::F => 'F',
            RootType::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for RootType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "A" => Ok(RootType::A),
            "B" => Ok(RootType::B),
            "C" => Ok(RootType::C),
            "D" => Ok(RootType::D),
            "E" => Ok(RootType::E),
            "F" => Ok(RootType::F),
            "G" => Ok(RootType::G),
            _ => Err(format!("unknown root type {s:?}")),
        }
    }
}

/// A root written in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn simple(rank: usize, i: usize) -> Root {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&c| c <= 0) && self.0.iter().any(|&c| c < 0)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn add_simple(&self, i: usize, k: i64) -> Root {
        let mut v = self.0.clone();
        v[i] += k;
        Root(v)
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|&c| int(c)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    root_type: RootType,
    rank: usize,
    /// Gram matrix `(alpha_i, alpha_j)` of the simple roots.
    form: Vec<Vec<Rational>>,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee> = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)`.
    cartan: Vec<Vec<i64>>,
    simple_roots: Vec<Root>,
    positive_roots: Vec<Root>,
    rho: Vec<Rational>,
    members: HashSet<Root>,
}

/// Squared lengths of the simple roots and the off-diagonal form entries.
fn gram_matrix(root_type: RootType, rank: usize) -> Vec<Vec<Rational>> {
    let mut lengths = vec![int(2); rank];
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    let chain = |edges: &mut Vec<(usize, usize, Rational)>, upto: usize, w: Rational| {
        for i in 0..upto {
            edges.push((i, i + 1, w.clone()));
        }
    };
    match root_type {
        RootType::A => chain(&mut edges, rank - 1, int(-1)),
        RootType::B => {
            // alpha_n short
            lengths[rank - 1] = int(1);
            chain(&mut edges, rank - 1, int(-1));
        }
        RootType::C => {
            // alpha_n long, the rest short
            for l in lengths.iter_mut().take(rank - 1) {
                *l = int(1);
            }
            chain(&mut edges, rank - 2, frac(-1, 2));
            edges.push((rank - 2, rank - 1, int(-1)));
        }
        RootType::D => {
            chain(&mut edges, rank - 2, int(-1));
            edges.push((rank - 3, rank - 1, int(-1)));
        }
        RootType::E => {
            // Bourbaki labelling: 1-3-4-5-6-7-8 with 2 attached to 4.
            edges.push((0, 2, int(-1)));
            edges.push((1, 3, int(-1)));
            for i in 2..rank - 1 {
                edges.push((i, i + 1, int(-1)));
            }
        }
        RootType::F => {
            lengths[2] = int(1);
            lengths[3] = int(1);
            edges.push((0, 1, int(-1)));
            edges.push((1, 2, int(-1)));
            edges.push((2, 3, frac(-1, 2)));
        }
        RootType::G => {
            lengths[0] = frac(2, 3);
            edges.push((0, 1, int(-1)));
        }
    }
    let mut form = vec![vec![Rational::zero(); rank]; rank];
    for (i, l) in lengths.into_iter().enumerate() {
        form[i][i] = l;
    }
    for (i, j, w) in edges {
        form[i][j] = w.clone();
        form[j][i] = w;
    }
    form
}

impl RootSystem {
    pub fn new(root_type: RootType, rank: usize) -> Result<RootSystem> {
        if !root_type.is_valid_rank(rank) {
            return Err(Error::InvalidType { root_type, rank });
        }
        Ok(Self::from_form(root_type, rank, gram_matrix(root_type, rank)))
    }

    fn from_form(root_type: RootType, rank: usize, form: Vec<Vec<Rational>>) -> RootSystem {
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let c = int(2) * &form[i][j] / &form[i][i];
                        debug_assert!(is_integer(&c));
                        c.to_integer().to_i64().expect("cartan entry fits i64")
                    })
                    .collect()
            })
            .collect();
        let simple_roots: Vec<Root> = (0..rank).map(|i| Root::simple(rank, i)).collect();
        let positive_roots = positive_roots_by_strings(&cartan, &simple_roots);
        let mut rho = vec![Rational::zero(); rank];
        for beta in &positive_roots {
            for (r, &c) in rho.iter_mut().zip(&beta.0) {
                *r += frac(c, 2);
            }
        }
        let members = positive_roots.iter().cloned().collect();
        RootSystem {
            root_type,
            rank,
            form,
            cartan,
            simple_roots,
            positive_roots,
            rho,
            members,
        }
    }

    /// The same root system with the invariant form multiplied by `scale`.
    /// Everything derived from ratios of the form is unchanged.
    pub fn with_form_scale(&self, scale: &Rational) -> RootSystem {
        assert!(scale.is_positive(), "form scale must be positive");
        let form = self
            .form
            .iter()
            .map(|row| row.iter().map(|x| x * scale).collect())
            .collect();
        Self::from_form(self.root_type, self.rank, form)
    }

    pub fn root_type(&self) -> RootType {
        self.root_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.root_type, self.rank)
    }

    pub fn form(&self) -> &[Vec<Rational>] {
        &self.form
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_roots(&self) -> &[Root] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn rho(&self) -> &[Rational] {
        &self.rho
    }

    /// Real dimension of the compact group with this root system.
    pub fn group_dimension(&self) -> usize {
        self.rank + 2 * self.positive_roots.len()
    }

    pub fn is_positive_root(&self, beta: &Root) -> bool {
        self.members.contains(beta)
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots
            .iter()
            .max_by_key(|r| r.height())
            .expect("root systems are nonempty")
    }

    /// The invariant form on rational coordinate vectors.
    pub fn pairing(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    acc += ui * &self.form[i][j] * vj;
                }
            }
        }
        acc
    }

    pub fn root_pairing(&self, a: &Root, b: &Root) -> Rational {
        self.pairing(&a.to_rational(), &b.to_rational())
    }

    /// `<beta, alpha_i^vee>` for an integral vector.
    pub fn coroot_pairing(&self, beta: &Root, i: usize) -> i64 {
        self.cartan[i].iter().zip(&beta.0).map(|(c, b)| c * b).sum()
    }

    /// Simple reflection `s_i` applied to a root.
    pub fn reflect_root(&self, i: usize, beta: &Root) -> Root {
        let k = self.coroot_pairing(beta, i);
        beta.add_simple(i, -k)
    }

    /// Simple reflection `s_i` applied to a rational vector.
    pub fn reflect(&self, i: usize, v: &[Rational]) -> Vec<Rational> {
        let alpha = self.simple_roots[i].to_rational();
        let k = int(2) * self.pairing(v, &alpha) / &self.form[i][i];
        let mut out = v.to_vec();
        out[i] -= k;
        out
    }

    /// The exponent `2 (rho, beta) / (beta, beta)`; always a positive integer
    /// for a positive root.
    pub fn weight_exponent(&self, beta: &Root) -> Result<u32> {
        if !self.is_positive_root(beta) {
            return Err(Error::NotARoot(beta.0.clone()));
        }
        let b = beta.to_rational();
        let value = int(2) * self.pairing(&self.rho, &b) / self.pairing(&b, &b);
        if !is_integer(&value) || !value.is_positive() {
            return Err(Error::NonIntegralExponent {
                root: beta.0.clone(),
                value: value.to_string(),
            });
        }
        value
            .to_integer()
            .to_u32()
            .ok_or_else(|| Error::Internal(format!("exponent {value} overflows")))
    }
}

/// Generate the positive roots layer by layer in height using root strings:
/// for a positive root `beta` and simple root `alpha_i`, `beta + alpha_i` is
/// a root iff `p - <beta, alpha_i^vee> > 0`, where `p` is the largest `k`
/// with `beta - k alpha_i` a root.
fn positive_roots_by_strings(cartan: &[Vec<i64>], simple: &[Root]) -> Vec<Root> {
    let rank = simple.len();
    let pair = |beta: &Root, i: usize| -> i64 { cartan[i].iter().zip(&beta.0).map(|(c, b)| c * b).sum() };
    let mut known: HashSet<Root> = simple.iter().cloned().collect();
    let mut all: Vec<Root> = simple.to_vec();
    let mut layer: Vec<Root> = simple.to_vec();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..rank {
                let mut p = 0;
                let mut down = beta.add_simple(i, -1);
                while known.contains(&down) {
                    p += 1;
                    down = down.add_simple(i, -1);
                }
                if p - pair(beta, i) > 0 {
                    let up = beta.add_simple(i, 1);
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.cmp(a)));
    all
}

/// Every valid `(type, rank)` pair with rank at most `max_rank`.
pub fn all_types_up_to(max_rank: usize) -> Vec<(RootType, usize)> {
    let mut out = Vec::new();
    for t in RootType::ALL {
        for rank in 1..=max_rank {
            if t.is_valid_rank(rank) {
                out.push((t, rank));
            }
        }
    }
    out
}
