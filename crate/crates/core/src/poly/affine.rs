use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use super::{fmt_rat, normalize_point, HomogeneousPolynomial, Point, PolyError, Rat, Var};

/// Polynomial in two local coordinates `(u, v)` centred at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePolynomial {
    /// The projective variables playing the roles of `u` and `v`.
    pub vars: [Var; 2],
    terms: BTreeMap<[u32; 2], Rat>,
}

impl AffinePolynomial {
    pub fn new(vars: [Var; 2], terms: impl IntoIterator<Item = ([u32; 2], Rat)>) -> Self {
        let mut map: BTreeMap<[u32; 2], Rat> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(Rat::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { vars, terms: map }
    }

    pub fn coeff(&self, u: u32, v: u32) -> Rat {
        self.terms.get(&[u, v]).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0, 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 2], &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree among the terms (the multiplicity at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1]).min()
    }

    pub fn derivative(&self, which: usize) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[which] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[which] -= 1;
            out.insert(e2, c * Rat::from_integer(BigInt::from(e[which])));
        }
        Self { vars: self.vars, terms: out }
    }

    /// Applies the linear substitution `u -> a*u + b*v`, `v -> c*u + d*v`.
    pub fn linear_substitute(&self, m: [[Rat; 2]; 2]) -> Self {
        let mut out: BTreeMap<[u32; 2], Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            let u_pow = expand_binomial(&m[0][0], &m[0][1], e[0]);
            let v_pow = expand_binomial(&m[1][0], &m[1][1], e[1]);
            for (i, a) in u_pow.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in v_pow.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    // (a u + b v)^n contributes u^(n-i) v^i
                    let key = [(e[0] as usize - i + e[1] as usize - j) as u32, (i + j) as u32];
                    *out.entry(key).or_insert_with(Rat::zero) += c * a * b;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Self { vars: self.vars, terms: out }
    }
}

/// Coefficients of `(a u + b v)^n` indexed by the power of `v`.
fn expand_binomial(a: &Rat, b: &Rat, n: u32) -> Vec<Rat> {
    (0..=n)
        .map(|i| {
            let c = Rat::from_integer(binomial(BigInt::from(n), BigInt::from(i)));
            c * num_traits::pow(a.clone(), (n - i) as usize) * num_traits::pow(b.clone(), i as usize)
        })
        .collect()
}

impl fmt::Display for AffinePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = [self.vars[0].name(), self.vars[1].name()];
        let mut first = true;
        for (e, c) in self.terms.iter() {
            let neg = c.is_negative();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let abs = c.abs();
            let mut mono = Vec::new();
            for (k, &n) in e.iter().enumerate() {
                match n {
                    0 => {}
                    1 => mono.push(names[k].to_string()),
                    n => mono.push(format!("{}^{n}", names[k])),
                }
            }
            let mono = mono.join("*");
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

/// Local equation of `f` at `p`.
///
/// The chart is the last coordinate of `p` that is nonzero (so `z = 1` when
/// possible); the two remaining variables are translated so that `p` becomes
/// the origin.
pub fn dehomogenize(f: &HomogeneousPolynomial, p: &Point) -> Result<AffinePolynomial, PolyError> {
    let p = normalize_point(p)?;
    let chart = p.iter().rposition(|c| !c.is_zero()).expect("normalized point");
    let others: Vec<usize> = (0..3).filter(|&k| k != chart).collect();
    let vars = [Var::ALL[others[0]], Var::ALL[others[1]]];
    let shift = [p[others[0]].clone(), p[others[1]].clone()];
    let mut out: BTreeMap<[u32; 2], Rat> = BTreeMap::new();
    for (e, c) in f.terms() {
        let a = e[others[0]];
        let b = e[others[1]];
        // (u + s0)^a (v + s1)^b
        for i in 0..=a {
            let ci = Rat::from_integer(binomial(BigInt::from(a), BigInt::from(i)))
                * num_traits::pow(shift[0].clone(), (a - i) as usize);
            if ci.is_zero() {
                continue;
            }
            for j in 0..=b {
                let cj = Rat::from_integer(binomial(BigInt::from(b), BigInt::from(j)))
                    * num_traits::pow(shift[1].clone(), (b - j) as usize);
                if cj.is_zero() {
                    continue;
                }
                *out.entry([i, j]).or_insert_with(Rat::zero) += c * &ci * cj;
            }
        }
    }
    Ok(AffinePolynomial::new(vars, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rat};

    #[test]
    fn conic_at_point_on_it() {
        let f = parse_polynomial("x^2+y^2-z^2").unwrap();
        let g = dehomogenize(&f, &[rat(0), rat(1), rat(1)]).unwrap();
        assert_eq!(g.vars, [Var::X, Var::Y]);
        assert_eq!(g, AffinePolynomial::new([Var::X, Var::Y], [([2, 0], rat(1)), ([0, 2], rat(1)), ([0, 1], rat(2))]));
        assert_eq!(g.constant_term(), rat(0));
    }

    #[test]
    fn x_chart_for_point_at_infinity() {
        let f = parse_polynomial("x^2*y^2+z^4").unwrap();
        let g = dehomogenize(&f, &[rat(1), rat(0), rat(0)]).unwrap();
        assert_eq!(g.vars, [Var::Y, Var::Z]);
        assert_eq!(g.to_string(), "z^4+y^2");
        assert_eq!(g.order(), Some(2));
    }

    #[test]
    fn point_off_curve_has_constant_term() {
        let f = parse_polynomial("x^2+y^2-z^2").unwrap();
        let g = dehomogenize(&f, &[rat(0), rat(0), rat(1)]).unwrap();
        assert_eq!(g.constant_term(), rat(-1));
    }

    #[test]
    fn linear_substitution_shear() {
        // u^2 + v with v -> v - u gives u^2 - u + v
        let g = AffinePolynomial::new([Var::X, Var::Y], [([2, 0], rat(1)), ([0, 1], rat(1))]);
        let h = g.linear_substitute([[rat(1), rat(0)], [rat(-1), rat(1)]]);
        assert_eq!(h, AffinePolynomial::new([Var::X, Var::Y], [([2, 0], rat(1)), ([1, 0], rat(-1)), ([0, 1], rat(1))]));
    }
}
