//! Graded pieces of the Jacobian ideal: Milnor algebra dimensions, the total
//! Tjurina number read off the stabilized Hilbert function, and the minimal
//! degree of a Jacobian relation with an explicit witness.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{kernel_basis, rank, rank_certified, RatMatrix};
use crate::poly::{monomial_count, monomial_index, monomials, HomogeneousPolynomial, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JacobianError {
    #[error("curve degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("Hilbert function not stable on the window: {0:?}")]
    Unstable(Vec<(u32, usize)>),
}

/// Which rank routine backs the graded computations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinalgMode {
    /// Fraction-free elimination over the integers.
    #[default]
    Exact,
    /// Multi-modular elimination with an exact kernel certificate.
    Modular,
}

impl LinalgMode {
    pub fn rank(self, m: &RatMatrix) -> usize {
        match self {
            LinalgMode::Exact => rank(m),
            LinalgMode::Modular => rank_certified(m),
        }
    }
}

#[derive(Debug, Clone)]
pub struct JacobianContext {
    f: HomogeneousPolynomial,
    d: u32,
    partials: [HomogeneousPolynomial; 3],
}

/// A relation `a f_x + b f_y + c f_z = 0` with `a, b, c` of degree `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyzygyWitness {
    pub r: u32,
    pub a: HomogeneousPolynomial,
    pub b: HomogeneousPolynomial,
    pub c: HomogeneousPolynomial,
}

impl SyzygyWitness {
    pub fn new(r: u32, a: HomogeneousPolynomial, b: HomogeneousPolynomial, c: HomogeneousPolynomial) -> Self {
        Self { r, a, b, c }
    }

    /// Scales the triple to integer coefficients with unit content and a
    /// positive leading coefficient.
    pub fn normalized(&self) -> Self {
        use num_bigint::BigInt;
        use num_integer::Integer;
        let all: Vec<&Rat> = [&self.a, &self.b, &self.c].iter().flat_map(|p| p.terms().map(|(_, c)| c)).collect();
        let Some(first) = all.first() else {
            return self.clone();
        };
        let l = all.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let g = all.iter().fold(BigInt::zero(), |g, c| g.gcd(&(*c * Rat::from_integer(l.clone())).to_integer()));
        let mut s = Rat::new(l, g);
        if first.is_negative() {
            s = -s;
        }
        Self { r: self.r, a: self.a.scale(&s), b: self.b.scale(&s), c: self.c.scale(&s) }
    }
}

/// Minimal degree of a Jacobian relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mdr {
    Exact(SyzygyWitness),
    /// No relation of degree `< n` exists; the search stops at `d - 2`.
    AtLeast(u32),
}

impl Mdr {
    pub fn value(&self) -> Option<u32> {
        match self {
            Mdr::Exact(w) => Some(w.r),
            Mdr::AtLeast(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&SyzygyWitness> {
        match self {
            Mdr::Exact(w) => Some(w),
            Mdr::AtLeast(_) => None,
        }
    }
}

/// Outcome of reading the Hilbert function on `[3d-6, 3d-4]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Stabilization {
    /// All window values agree; the common value is the total Tjurina number.
    Stable { tau: usize },
    /// Values `(1, 0, 0)`: the Milnor algebra is finite with its socle in
    /// degree `3d-6`, so the curve is smooth and the total Tjurina number is 0.
    Smooth,
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertProfile {
    /// `(t, dim M(f)_t)` for consecutive `t`, starting at `3d-6`.
    pub window: Vec<(u32, usize)>,
    pub stabilization: Stabilization,
}

impl HilbertProfile {
    pub fn tau(&self) -> Option<usize> {
        match self.stabilization {
            Stabilization::Stable { tau } => Some(tau),
            Stabilization::Smooth => Some(0),
            Stabilization::Unstable => None,
        }
    }
}

impl JacobianContext {
    pub fn new(f: HomogeneousPolynomial) -> Result<Self, JacobianError> {
        let d = f.degree();
        if d < 2 || f.is_zero() {
            return Err(JacobianError::DegreeTooSmall(d));
        }
        let partials = f.gradient();
        Ok(Self { f, d, partials })
    }

    pub fn f(&self) -> &HomogeneousPolynomial {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn partials(&self) -> &[HomogeneousPolynomial; 3] {
        &self.partials
    }

    /// Matrix of `(a, b, c) -> a f_x + b f_y + c f_z` from `S_s^3` to
    /// `S_{s+d-1}`. Column `k * dim S_s + j` is the `j`-th monomial of degree
    /// `s` in slot `k`.
    pub fn syzygy_matrix(&self, s: u32) -> RatMatrix {
        let target = s + self.d - 1;
        let block = monomial_count(s);
        let mut m = RatMatrix::new(monomial_count(target), 3 * block);
        for (k, partial) in self.partials.iter().enumerate() {
            for (j, mono) in monomials(s).iter().enumerate() {
                for (e, c) in partial.terms() {
                    let row = monomial_index(&[e[0] + mono[0], e[1] + mono[1], e[2] + mono[2]]);
                    m.add_to(row, k * block + j, c);
                }
            }
        }
        m
    }

    /// `dim M(f)_t = dim S_t - rank(S_{t-d+1}^3 -> S_t)`.
    pub fn milnor_dim(&self, t: u32, mode: LinalgMode) -> usize {
        let full = monomial_count(t);
        if t + 1 < self.d {
            return full;
        }
        full - mode.rank(&self.syzygy_matrix(t + 1 - self.d))
    }

    /// Hilbert function on `[3d-6, 3d-4 + extend]`.
    pub fn hilbert_profile(&self, mode: LinalgMode, extend: u32) -> HilbertProfile {
        let start = 3 * self.d - 6;
        let degrees: Vec<u32> = (start..=start + 2 + extend).collect();
        let window: Vec<(u32, usize)> = degrees.par_iter().map(|&t| (t, self.milnor_dim(t, mode))).collect();
        let v: Vec<usize> = window.iter().take(3).map(|(_, n)| *n).collect();
        let stabilization = if v[0] == v[1] && v[1] == v[2] {
            Stabilization::Stable { tau: v[0] }
        } else if v == [1, 0, 0] {
            Stabilization::Smooth
        } else {
            Stabilization::Unstable
        };
        HilbertProfile { window, stabilization }
    }

    /// Total Tjurina number from the stabilized Hilbert function.
    pub fn total_tjurina(&self, mode: LinalgMode) -> Result<usize, JacobianError> {
        let profile = self.hilbert_profile(mode, 0);
        profile.tau().ok_or(JacobianError::Unstable(profile.window))
    }

    fn witness_from_vector(&self, r: u32, v: &[Rat]) -> SyzygyWitness {
        let block = monomial_count(r);
        let mons = monomials(r);
        let part = |k: usize| {
            HomogeneousPolynomial::from_terms(
                r,
                mons.iter().enumerate().map(|(j, e)| (*e, v[k * block + j].clone())),
            )
            .expect("monomials of degree r")
        };
        SyzygyWitness::new(r, part(0), part(1), part(2)).normalized()
    }

    /// Dimension of the relation space in degree `r` (`r <= d - 2`).
    pub fn syzygy_dim(&self, r: u32) -> usize {
        let m = self.syzygy_matrix(r);
        m.cols() - rank(&m)
    }

    /// Searches degrees `0..=d-2` for the first nonzero relation.
    pub fn mdr(&self) -> Mdr {
        for r in 0..=self.d - 2 {
            let kernel = kernel_basis(&self.syzygy_matrix(r));
            if let Some(v) = kernel.vectors.first() {
                return Mdr::Exact(self.witness_from_vector(r, v));
            }
        }
        Mdr::AtLeast(self.d - 1)
    }

    /// The Koszul relation `(f_y, -f_x, 0)` (or the analogous pair when
    /// `f_x = f_y = 0`); always a relation of degree `d - 1`.
    pub fn koszul_witness(&self) -> SyzygyWitness {
        let [fx, fy, fz] = &self.partials;
        let zero = HomogeneousPolynomial::zero(self.d - 1);
        let w = if !fx.is_zero() || !fy.is_zero() {
            SyzygyWitness::new(self.d - 1, fy.clone(), -fx, zero)
        } else {
            SyzygyWitness::new(self.d - 1, fz.clone(), zero, -fx)
        };
        w.normalized()
    }

    pub fn verify_witness(&self, w: &SyzygyWitness) -> bool {
        if w.a.is_zero() && w.b.is_zero() && w.c.is_zero() {
            return false;
        }
        let [fx, fy, fz] = &self.partials;
        let sum = &(&(&w.a * fx) + &(&w.b * fy)) + &(&w.c * fz);
        sum.is_zero()
    }
}

/// Shorthand for the witness `(a, b, c)` built from expression strings.
pub fn witness_from_text(r: u32, a: &str, b: &str, c: &str) -> Result<SyzygyWitness, crate::poly::PolyError> {
    let parse = |s: &str| -> Result<HomogeneousPolynomial, crate::poly::PolyError> {
        let p = crate::poly::parse_polynomial(s)?;
        Ok(if p.is_zero() { HomogeneousPolynomial::zero(r) } else { p })
    };
    Ok(SyzygyWitness::new(r, parse(a)?, parse(b)?, parse(c)?))
}
