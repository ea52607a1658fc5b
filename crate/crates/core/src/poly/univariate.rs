//! Dense univariate polynomials over the rationals and exact rational root
//! extraction.
//!
//! Rational roots are found p-adically: the square-free part is reduced
//! modulo a small prime, every root mod p is lifted by Newton iteration past
//! the height bound, and candidates come back through rational reconstruction.
//! Every candidate is checked exactly before it is reported.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(Vec<Rat>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Self(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Self(vec![]), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        let l = d.lead();
        for k in (dd..r.len()).rev() {
            let c = &r[k] / &l;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.0.iter().enumerate() {
                let sub = &c * di;
                r[k - dd + i] -= sub;
            }
            q[k - dd] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Integer polynomial with coprime coefficients and positive leading term.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.0 {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * &l).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        if ints.last().is_some_and(|v| v.is_negative()) {
            g = -g;
        }
        ints.into_iter().map(|v| v / &g).collect()
    }

    /// Distinct rational roots with their multiplicities, in increasing order.
    pub fn rational_roots(&self) -> Vec<(Rat, u32)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut candidates = Vec::new();
        let mut rest = self.clone();
        if rest.0[0].is_zero() {
            candidates.push(Rat::zero());
            let k = rest.0.iter().take_while(|c| c.is_zero()).count();
            rest = Self(rest.0[k..].to_vec());
        }
        if rest.degree().unwrap_or(0) > 0 {
            let g = rest.gcd(&rest.derivative());
            let (sqfree, _) = rest.div_rem(&g);
            candidates.extend(padic_roots(&sqfree.primitive_integer()));
        }
        let mut out: Vec<(Rat, u32)> = candidates
            .into_iter()
            .map(|r| {
                let m = self.multiplicity(&r);
                (r, m)
            })
            .filter(|(_, m)| *m > 0)
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Order of vanishing at `r`.
    pub fn multiplicity(&self, r: &Rat) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let lin = Self(vec![-r.clone(), Rat::one()]);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                return m;
            }
            p = q;
            m += 1;
        }
    }
}

fn eval_mod(p: &[BigInt], t: &BigInt, m: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| (acc * t + c).mod_floor(m))
}

fn deriv_int(p: &[BigInt]) -> Vec<BigInt> {
    p.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Smallest `(a, b)` with `a ≡ b u (mod m)`, `|a|, b ≤ sqrt(m/2)`.
pub(crate) fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rat::new(r1, t1))
}

const SMALL_PRIMES: [u32; 12] = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157];

fn padic_roots(p: &[BigInt]) -> Vec<Rat> {
    let deg = p.len() - 1;
    if deg == 1 {
        return vec![Rat::new(-p[0].clone(), p[1].clone())];
    }
    let dp = deriv_int(p);
    // |numerator| <= |p0|, denominator <= |lead|
    let height = p[0].abs().max(p[deg].abs());
    let target = BigInt::from(2) * &height * &height + BigInt::one();
    for &prime in SMALL_PRIMES.iter().chain(std::iter::once(&1009)).chain(std::iter::once(&10007)) {
        let pr = BigInt::from(prime);
        if (&p[deg] % &pr).is_zero() {
            continue;
        }
        let roots: Vec<BigInt> =
            (0..prime).map(BigInt::from).filter(|t| eval_mod(p, t, &pr).is_zero()).collect();
        // need simple roots mod p
        if roots.iter().any(|t| eval_mod(&dp, t, &pr).is_zero()) {
            continue;
        }
        let mut out = Vec::new();
        for r in roots {
            let mut m = pr.clone();
            let mut x = r;
            while m <= target {
                m = &m * &m;
                let inv = mod_inverse(&eval_mod(&dp, &x, &m), &m).expect("simple root");
                x = (&x - eval_mod(p, &x, &m) * inv).mod_floor(&m);
            }
            if let Some(q) = rational_reconstruct(&x, &m) {
                let ev = p.iter().rev().fold(Rat::zero(), |acc, c| acc * &q + Rat::from_integer(c.clone()));
                if ev.is_zero() {
                    out.push(q);
                }
            }
        }
        return out;
    }
    // every listed prime was unlucky; fall back to exhaustive divisor search
    divisor_roots(p)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

fn divisor_roots(p: &[BigInt]) -> Vec<Rat> {
    let deg = p.len() - 1;
    let mut out = Vec::new();
    for a in divisors(&p[0]) {
        for b in divisors(&p[deg]) {
            for s in [1, -1] {
                let q = Rat::new(&a * BigInt::from(s), b.clone());
                let ev = p.iter().rev().fold(Rat::zero(), |acc, c| acc * &q + Rat::from_integer(c.clone()));
                if ev.is_zero() && !out.contains(&q) {
                    out.push(q);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| rat(v)).collect())
    }

    fn from_roots(roots: &[(Rat, u32)], lead: i64) -> UniPoly {
        let mut p = up(&[lead]);
        for (r, m) in roots {
            for _ in 0..*m {
                let lin = UniPoly::new(vec![-r.clone(), rat(1)]);
                let mut c = vec![Rat::zero(); p.0.len() + 1];
                for (i, a) in p.0.iter().enumerate() {
                    for (j, b) in lin.0.iter().enumerate() {
                        c[i + j] += a * b;
                    }
                }
                p = UniPoly::new(c);
            }
        }
        p
    }

    #[test]
    fn finds_roots_with_multiplicity() {
        let roots = vec![(ratio(-3, 2), 2), (rat(0), 1), (ratio(5, 7), 1)];
        let p = from_roots(&roots, 6);
        assert_eq!(p.rational_roots(), roots);
    }

    #[test]
    fn irrational_and_complex_roots_are_skipped() {
        // (t^2 - 2)(t^2 + 1)(3t - 1)
        let p = from_roots(&[(ratio(1, 3), 1)], 3);
        let q = up(&[-2, 0, 1]);
        let r = up(&[1, 0, 1]);
        let mul = |a: &UniPoly, b: &UniPoly| {
            let mut c = vec![Rat::zero(); a.0.len() + b.0.len() - 1];
            for (i, x) in a.0.iter().enumerate() {
                for (j, y) in b.0.iter().enumerate() {
                    c[i + j] += x * y;
                }
            }
            UniPoly::new(c)
        };
        let full = mul(&mul(&p, &q), &r);
        assert_eq!(full.rational_roots(), vec![(ratio(1, 3), 1)]);
        assert!(up(&[1, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn large_height_roots() {
        let roots = vec![(ratio(-123457, 9973), 1), (ratio(99991, 2), 3)];
        let p = from_roots(&roots, 1);
        assert_eq!(p.rational_roots(), {
            let mut r = roots.clone();
            r.sort_by(|a, b| a.0.cmp(&b.0));
            r
        });
    }

    #[test]
    fn gcd_and_division() {
        let a = from_roots(&[(rat(1), 2), (rat(2), 1)], 1);
        let b = from_roots(&[(rat(1), 1), (rat(3), 1)], 2);
        assert_eq!(a.gcd(&b), up(&[-1, 1]));
        let (q, r) = a.div_rem(&up(&[-2, 1]));
        assert!(r.is_zero());
        assert_eq!(q, from_roots(&[(rat(1), 2)], 1));
    }

    #[test]
    fn reconstruction_roundtrip() {
        let m = BigInt::from(1_000_000_007u64);
        let q = ratio(-37, 101);
        let u = (q.numer() * mod_inverse(q.denom(), &m).unwrap()).mod_floor(&m);
        assert_eq!(rational_reconstruct(&u, &m), Some(q));
    }
}
