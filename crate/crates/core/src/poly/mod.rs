//! Exact polynomial arithmetic over the rationals.
//!
//! Homogeneous forms in `x, y, z` are the main currency of the crate. Terms are
//! kept in a sorted map keyed by exponent triples and printed in graded
//! lexicographic order with `x > y > z`.

mod affine;
mod conic;
mod parse;
pub mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use affine::{dehomogenize, AffinePolynomial};
pub use conic::{conic_is_smooth, ConicForm};
pub use parse::{parse_factors, parse_polynomial};

/// Exact rational coefficient. Always stored in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// Exponents of `x`, `y`, `z` in that order.
pub type Exponent = [u32; 3];

/// A projective point with rational coordinates.
pub type Point = [Rat; 3];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not homogeneous: found terms of degrees {found:?}")]
    NonHomogeneous { found: Vec<u32> },
    #[error("expected a quadratic form, got degree {0}")]
    NotQuadratic(u32),
    #[error("the zero polynomial is not a valid conic")]
    ZeroConic,
    #[error("exponent {0} exceeds the supported maximum of {max}", max = parse::MAX_EXPONENT)]
    ExponentTooLarge(u64),
    #[error("projective point has all coordinates zero")]
    ZeroPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }

    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
            Var::Z => 'z',
        }
    }
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// Scales a projective point so that its last nonzero coordinate is 1.
pub fn normalize_point(p: &Point) -> Result<Point, PolyError> {
    let pivot = p.iter().rposition(|c| !c.is_zero()).ok_or(PolyError::ZeroPoint)?;
    let s = p[pivot].clone();
    Ok([&p[0] / &s, &p[1] / &s, &p[2] / &s])
}

pub fn fmt_point(p: &Point) -> String {
    format!("({}:{}:{})", fmt_rat(&p[0]), fmt_rat(&p[1]), fmt_rat(&p[2]))
}

/// Number of monomials of degree `t` in three variables.
pub fn monomial_count(t: u32) -> usize {
    let t = t as usize;
    (t + 2) * (t + 1) / 2
}

/// All exponent triples of total degree `t`, in grlex order (`x > y > z`).
pub fn monomials(t: u32) -> Vec<Exponent> {
    let mut out = Vec::with_capacity(monomial_count(t));
    for i in (0..=t).rev() {
        for j in (0..=t - i).rev() {
            out.push([i, j, t - i - j]);
        }
    }
    out
}

/// Position of `e` in [`monomials`] of its degree.
pub fn monomial_index(e: &Exponent) -> usize {
    let t = (e[0] + e[1] + e[2]) as usize;
    let i = e[0] as usize;
    let j = e[1] as usize;
    // rows with a larger x-exponent come first
    let before: usize = (i + 1..=t).map(|a| t - a + 1).sum();
    before + (t - i - j)
}

/// Homogeneous polynomial in `x, y, z` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousPolynomial {
    degree: u32,
    terms: BTreeMap<Exponent, Rat>,
}

impl HomogeneousPolynomial {
    pub fn zero(degree: u32) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial([0, 0, 0], Rat::one())
    }

    pub fn monomial(e: Exponent, c: Rat) -> Self {
        let degree = e[0] + e[1] + e[2];
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { degree, terms }
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.index()] = 1;
        Self::monomial(e, Rat::one())
    }

    /// Builds a form from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponent, Rat)>,
    {
        let mut map: BTreeMap<Exponent, Rat> = BTreeMap::new();
        let mut bad = Vec::new();
        for (e, c) in terms {
            let deg = e[0] + e[1] + e[2];
            if deg != degree {
                bad.push(deg);
                continue;
            }
            *map.entry(e).or_insert_with(Rat::zero) += c;
        }
        if !bad.is_empty() {
            bad.push(degree);
            bad.sort_unstable();
            bad.dedup();
            return Err(PolyError::NonHomogeneous { found: bad });
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { degree, terms: map })
    }

    pub fn degree(&self) -> u32 {
        self.degree
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

    pub fn coeff(&self, e: &Exponent) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Terms in grlex order, leading term first.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter().rev()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Exponent, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree + m[0] + m[1] + m[2]);
        }
        Self {
            degree: self.degree + m[0] + m[1] + m[2],
            terms: self
                .terms
                .iter()
                .map(|(e, v)| ([e[0] + m[0], e[1] + m[1], e[2] + m[2]], v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        let k = v.index();
        let degree = self.degree.saturating_sub(1);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[k] -= 1;
            terms.insert(e2, c * Rat::from_integer(BigInt::from(e[k])));
        }
        Self { degree, terms }
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.derivative(Var::X), self.derivative(Var::Y), self.derivative(Var::Z)]
    }

    pub fn eval(&self, p: &Point) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    t *= num_traits::pow(p[k].clone(), ek as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Multiplies by the lcm of denominators and divides by the content, with a
    /// positive leading coefficient.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.terms.values().map(|c| (c * &l).to_integer()).collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        let lead_neg = self.terms().next().map(|(_, c)| c.is_negative()).unwrap_or(false);
        if lead_neg {
            g = -g;
        }
        Self {
            degree: self.degree,
            terms: self
                .terms
                .keys()
                .zip(ints)
                .map(|(e, v)| (*e, Rat::from_integer(v / &g)))
                .collect(),
        }
    }

    /// Whether `other` is a nonzero rational multiple of `self`.
    pub fn is_proportional(&self, other: &Self) -> bool {
        self.degree == other.degree && !self.is_zero() && self.primitive() == other.primitive()
    }

    /// `f(T v)`: variable `k` is replaced by row `k` of `t` applied to `(x, y, z)`.
    pub fn linear_substitute(&self, t: &[[Rat; 3]; 3]) -> Self {
        let images: Vec<Self> = t
            .iter()
            .map(|row| {
                let terms = Var::ALL.iter().zip(row).map(|(v, c)| {
                    let mut e = [0; 3];
                    e[v.index()] = 1;
                    (e, c.clone())
                });
                Self::from_terms(1, terms).expect("linear form")
            })
            .collect();
        let mut acc = Self::zero(self.degree);
        for (e, c) in &self.terms {
            let term = (0..3).fold(Self::one(), |m, k| &m * &images[k].pow(e[k])).scale(c);
            acc = &acc + &term;
        }
        acc
    }

    pub fn product<'a, I>(factors: I) -> Self
    where
        I: IntoIterator<Item = &'a HomogeneousPolynomial>,
    {
        factors.into_iter().fold(Self::one(), |acc, f| &acc * f)
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                write!(f, "-")?;
            } else if n > 0 {
                write!(f, "+")?;
            }
            let mono = fmt_monomial(e);
            if mono.is_empty() {
                write!(f, "{}", fmt_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_rat(&abs))?;
            }
        }
        Ok(())
    }
}

fn fmt_monomial(e: &Exponent) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        match e[v.index()] {
            0 => {}
            1 => parts.push(v.name().to_string()),
            n => parts.push(format!("{}^{n}", v.name())),
        }
    }
    parts.join("*")
}

fn combine(a: &HomogeneousPolynomial, b: &HomogeneousPolynomial, sign: i8) -> HomogeneousPolynomial {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if sign > 0 { b.clone() } else { -b };
    }
    assert_eq!(a.degree, b.degree, "adding forms of different degree");
    let mut terms = a.terms.clone();
    for (e, c) in &b.terms {
        let entry = terms.entry(*e).or_insert_with(Rat::zero);
        if sign > 0 {
            *entry += c;
        } else {
            *entry -= c;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    HomogeneousPolynomial { degree: a.degree, terms }
}

impl Add for &HomogeneousPolynomial {
    type Output = HomogeneousPolynomial;
    fn add(self, rhs: Self) -> HomogeneousPolynomial {
        combine(self, rhs, 1)
    }
}

impl Sub for &HomogeneousPolynomial {
    type Output = HomogeneousPolynomial;
    fn sub(self, rhs: Self) -> HomogeneousPolynomial {
        combine(self, rhs, -1)
    }
}

impl Neg for &HomogeneousPolynomial {
    type Output = HomogeneousPolynomial;
    fn neg(self) -> HomogeneousPolynomial {
        HomogeneousPolynomial {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &HomogeneousPolynomial {
    type Output = HomogeneousPolynomial;
    fn mul(self, rhs: Self) -> HomogeneousPolynomial {
        let degree = self.degree + rhs.degree;
        let mut terms: BTreeMap<Exponent, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                *terms.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        HomogeneousPolynomial { degree, terms }
    }
}
