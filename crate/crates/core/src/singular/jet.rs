//! Order-4 jets of smooth conic branches.
//!
//! At a point `p` of a smooth conic the local equation (in the chart of the
//! last nonzero coordinate) has a nonzero linear part `a u + b v`. A rational
//! shear turns the tangent into `{t = 0}`, after which the branch is a graph
//! `t = c2 s^2 + c3 s^3 + c4 s^4 + O(s^5)`. The shear depends only on the
//! tangent line, so two conics tangent at `p` share the frame and their jets
//! can be compared coefficient by coefficient.

use num_traits::{One, Zero};

use super::LocusError;
use crate::poly::{dehomogenize, normalize_point, AffinePolynomial, ConicForm, Point, Rat};

const ORDER: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchJet {
    pub center: Point,
    /// Tangent line `l0 x + l1 y + l2 z = 0`, scaled so its first nonzero
    /// coefficient is 1.
    pub tangent: [Rat; 3],
    /// `[c2, c3, c4]`.
    pub coeffs: [Rat; 3],
}

impl BranchJet {
    pub fn c2(&self) -> &Rat {
        &self.coeffs[0]
    }

    pub fn c3(&self) -> &Rat {
        &self.coeffs[1]
    }

    pub fn c4(&self) -> &Rat {
        &self.coeffs[2]
    }
}

/// Truncated power series in `s`, coefficients of `s^0..=s^ORDER`.
type Series = [Rat; ORDER + 1];

fn series_zero() -> Series {
    std::array::from_fn(|_| Rat::zero())
}

fn series_mul(a: &Series, b: &Series) -> Series {
    let mut out = series_zero();
    for i in 0..=ORDER {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..=ORDER - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

/// `g(s, phi(s))` truncated at order `ORDER`.
fn compose(g: &AffinePolynomial, phi: &Series) -> Series {
    let mut out = series_zero();
    for (e, c) in g.terms() {
        let mut term = series_zero();
        if (e[0] as usize) > ORDER {
            continue;
        }
        term[e[0] as usize] = c.clone();
        for _ in 0..e[1] {
            term = series_mul(&term, phi);
        }
        for k in 0..=ORDER {
            out[k] += &term[k];
        }
    }
    out
}

fn scaled_line(mut l: [Rat; 3]) -> [Rat; 3] {
    if let Some(k) = l.iter().position(|c| !c.is_zero()) {
        let s = l[k].clone();
        for c in l.iter_mut() {
            *c = &*c / &s;
        }
    }
    l
}

pub fn branch_jet(q: &ConicForm, p: &Point) -> Result<BranchJet, LocusError> {
    let p = normalize_point(p)?;
    if !q.contains(&p) {
        return Err(LocusError::NotOnConic(Box::new(p)));
    }
    let grad: [Rat; 3] = q.poly().gradient().map(|g| g.eval(&p));
    if grad.iter().all(Zero::is_zero) {
        return Err(LocusError::SingularComponentPoint(Box::new(p)));
    }
    let g = dehomogenize(q.poly(), &p)?;
    let (a, b) = (g.coeff(1, 0), g.coeff(0, 1));
    let (shear, lin) = if !b.is_zero() {
        // u = s, v = t - (a/b) s
        ([[Rat::one(), Rat::zero()], [-(&a / &b), Rat::one()]], b)
    } else {
        // u = t, v = s
        ([[Rat::zero(), Rat::one()], [Rat::one(), Rat::zero()]], a)
    };
    let h = g.linear_substitute(shear);
    debug_assert!(h.coeff(1, 0).is_zero() && h.coeff(0, 1) == lin);
    let mut phi = series_zero();
    for _ in 0..ORDER {
        let r = compose(&h, &phi);
        for k in 0..=ORDER {
            phi[k] = &phi[k] - &r[k] / &lin;
        }
    }
    debug_assert!(compose(&h, &phi).iter().all(Zero::is_zero));
    Ok(BranchJet {
        center: p,
        tangent: scaled_line(grad),
        coeffs: [phi[2].clone(), phi[3].clone(), phi[4].clone()],
    })
}

/// Intersection multiplicity of two smooth conics at a common point.
pub fn local_intersection_multiplicity(ci: &ConicForm, cj: &ConicForm, p: &Point) -> Result<u32, LocusError> {
    let a = branch_jet(ci, p)?;
    let b = branch_jet(cj, p)?;
    if a.tangent != b.tangent {
        return Ok(1);
    }
    (0..3)
        .find(|&k| a.coeffs[k] != b.coeffs[k])
        .map(|k| k as u32 + 2)
        .ok_or(LocusError::ProportionalComponents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn c(s: &str) -> ConicForm {
        ConicForm::parse(s).unwrap()
    }

    #[test]
    fn parabola_is_its_own_jet() {
        let j = branch_jet(&c("y*z-x^2"), &[rat(0), rat(0), rat(1)]).unwrap();
        assert_eq!(j.coeffs, [rat(1), rat(0), rat(0)]);
    }

    #[test]
    fn circle_series() {
        let j = branch_jet(&c("x^2+y^2-z^2"), &[rat(0), rat(1), rat(1)]).unwrap();
        assert_eq!(j.coeffs, [ratio(-1, 2), rat(0), ratio(-1, 8)]);
    }

    #[test]
    fn point_off_conic() {
        let r = branch_jet(&c("x^2+y^2-z^2"), &[rat(0), rat(0), rat(1)]);
        assert!(matches!(r, Err(LocusError::NotOnConic(_))));
    }

    #[test]
    fn vertical_tangent_uses_swap() {
        // x^2+y^2-z^2 at (1:0:1) has tangent x = z
        let j = branch_jet(&c("x^2+y^2-z^2"), &[rat(1), rat(0), rat(1)]).unwrap();
        assert_eq!(j.tangent, [rat(1), rat(0), rat(-1)]);
        assert_eq!(j.coeffs, [ratio(-1, 2), rat(0), ratio(-1, 8)]);
    }

    #[test]
    fn multiplicities() {
        let one = [rat(1), rat(1), rat(1)];
        let f = c("3*x^2+y^2-4*z^2");
        let g = c("x^2+3*y^2-4*z^2");
        assert_eq!(local_intersection_multiplicity(&f, &g, &one).unwrap(), 1);
        let origin = [rat(0), rat(0), rat(1)];
        let a = c("2*x^2+y^2+2*x*z");
        let b = c("x^2+y^2+2*x*z");
        assert_eq!(local_intersection_multiplicity(&a, &b, &origin).unwrap(), 4);
        // y = x^2 against y = x^2/(1-x): jets first differ at s^3
        let d = c("x^2-y*z");
        let e = c("x^2-y*z+x*y");
        assert_eq!(local_intersection_multiplicity(&d, &e, &origin).unwrap(), 3);
        let e2 = c("x^2-y*z+x*z");
        assert_eq!(local_intersection_multiplicity(&d, &e2, &origin).unwrap(), 1);
    }
}
