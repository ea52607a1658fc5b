//! Rational intersection points of two conics.
//!
//! After moving a projection center `(a:b:1)` to `(0:0:1)`, each conic reads
//! `a2 z^2 + a1 z + a0` with `a_i` a binary form of degree `2 - i`, and the
//! resultant in `z` is the binary quartic
//! `(a2 b0 - a0 b2)^2 - (a2 b1 - a1 b2)(a1 b0 - a0 b1)`.
//! Its roots are the directions from the center to the common points and the
//! root multiplicities are the intersection multiplicities, provided the
//! center is off both conics and no line through it meets two common points.
//! Centers are taken on the twisted curve `(n : n^3 : 1)`, which meets any
//! line or conic in finitely many points, and each candidate is checked.

use num_traits::{One, Zero};

use super::jet::local_intersection_multiplicity;
use super::LocusError;
use crate::poly::univariate::UniPoly;
use crate::poly::{normalize_point, rat, ConicForm, HomogeneousPolynomial, Point, Rat};

const MAX_CENTERS: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairIntersection {
    /// Located points (normalized) with intersection multiplicities, sorted.
    pub points: Vec<(Point, u32)>,
    /// `4 -` the located total: multiplicity carried by irrational points.
    pub residual: u32,
}

/// Binary form `sum c[i] x^i y^(deg - i)`.
#[derive(Debug, Clone)]
struct Binary {
    deg: usize,
    c: Vec<Rat>,
}

impl Binary {
    fn mul(&self, o: &Binary) -> Binary {
        let mut c = vec![Rat::zero(); self.deg + o.deg + 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Binary { deg: self.deg + o.deg, c }
    }

    fn sub(&self, o: &Binary) -> Binary {
        assert_eq!(self.deg, o.deg);
        Binary { deg: self.deg, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.c.iter().enumerate().fold(Rat::zero(), |acc, (i, c)| {
            acc + c * num_traits::pow(x.clone(), i) * num_traits::pow(y.clone(), self.deg - i)
        })
    }
}

/// Splits a conic as `a2 z^2 + a1 z + a0`.
fn z_coefficients(q: &HomogeneousPolynomial) -> [Binary; 3] {
    let part = |zdeg: u32| {
        let deg = (2 - zdeg) as usize;
        let c = (0..=deg).map(|i| q.coeff(&[i as u32, (deg - i) as u32, zdeg])).collect();
        Binary { deg, c }
    };
    [part(2), part(1), part(0)]
}

fn resultant(a: &[Binary; 3], b: &[Binary; 3]) -> Binary {
    let [a2, a1, a0] = a;
    let [b2, b1, b0] = b;
    let p = a2.mul(b0).sub(&a0.mul(b2));
    let q = a2.mul(b1).sub(&a1.mul(b2));
    let r = a1.mul(b0).sub(&a0.mul(b1));
    p.mul(&p).sub(&q.mul(&r))
}

/// Roots `(x:y)` of a nonzero binary form with multiplicities.
fn binary_roots(f: &Binary) -> Vec<((Rat, Rat), u32)> {
    let u = UniPoly::new(f.c.clone());
    let mut out: Vec<((Rat, Rat), u32)> = u.rational_roots().into_iter().map(|(t, m)| ((t, Rat::one()), m)).collect();
    let at_infinity = f.deg - u.degree().unwrap_or(0);
    if at_infinity > 0 {
        out.push(((Rat::one(), Rat::zero()), at_infinity as u32));
    }
    out
}

fn on_line(q: &[Binary; 3], x: &Rat, y: &Rat) -> UniPoly {
    UniPoly::new(vec![q[2].eval(x, y), q[1].eval(x, y), q[0].eval(x, y)])
}

fn try_center(ci: &ConicForm, cj: &ConicForm, a: &Rat, b: &Rat) -> Result<Option<PairIntersection>, LocusError> {
    let t = [
        [Rat::one(), Rat::zero(), a.clone()],
        [Rat::zero(), Rat::one(), b.clone()],
        [Rat::zero(), Rat::zero(), Rat::one()],
    ];
    let qa = z_coefficients(&ci.poly().linear_substitute(&t));
    let qb = z_coefficients(&cj.poly().linear_substitute(&t));
    if qa[0].c[0].is_zero() || qb[0].c[0].is_zero() {
        return Ok(None);
    }
    let res = resultant(&qa, &qb);
    if res.c.iter().all(Zero::is_zero) {
        return Err(LocusError::ProportionalComponents);
    }
    let mut points = Vec::new();
    for ((x, y), m) in binary_roots(&res) {
        let g = on_line(&qa, &x, &y).gcd(&on_line(&qb, &x, &y));
        if g.degree() != Some(1) {
            return Ok(None);
        }
        let z = -&g.coeffs()[0] / &g.coeffs()[1];
        let p = normalize_point(&[&x + a * &z, &y + b * &z, z])?;
        if local_intersection_multiplicity(ci, cj, &p)? != m {
            return Ok(None);
        }
        points.push((p, m));
    }
    points.sort();
    let located: u32 = points.iter().map(|(_, m)| m).sum();
    Ok(Some(PairIntersection { points, residual: 4 - located }))
}

/// Common rational points of two smooth, non-proportional conics.
pub fn rational_pair_intersections(ci: &ConicForm, cj: &ConicForm) -> Result<PairIntersection, LocusError> {
    if ci.poly().is_proportional(cj.poly()) {
        return Err(LocusError::ProportionalComponents);
    }
    for n in 0..MAX_CENTERS {
        if let Some(out) = try_center(ci, cj, &rat(n), &rat(n * n * n))? {
            return Ok(out);
        }
    }
    Err(LocusError::NoGenericProjection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::fmt_point;

    fn c(s: &str) -> ConicForm {
        ConicForm::parse(s).unwrap()
    }

    fn show(r: &PairIntersection) -> Vec<(String, u32)> {
        r.points.iter().map(|(p, m)| (fmt_point(p), *m)).collect()
    }

    #[test]
    fn a7_pair() {
        let r = rational_pair_intersections(&c("2*x^2+y^2+2*x*z"), &c("x^2+y^2+2*x*z")).unwrap();
        assert_eq!(show(&r), vec![("(0:0:1)".to_string(), 4)]);
        assert_eq!(r.residual, 0);
    }

    #[test]
    fn pencil_base_points() {
        let r = rational_pair_intersections(&c("3*x^2+y^2-4*z^2"), &c("x^2+3*y^2-4*z^2")).unwrap();
        let mut got = show(&r);
        got.sort();
        let mut want: Vec<(String, u32)> =
            ["(-1:-1:1)", "(-1:1:1)", "(1:-1:1)", "(1:1:1)"].iter().map(|s| (s.to_string(), 1)).collect();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(r.residual, 0);
    }

    #[test]
    fn no_rational_points() {
        // both force z = 0 and then x^2 + y^2 = 0
        let r = rational_pair_intersections(&c("x^2+y^2-z^2"), &c("x^2+y^2-3*z^2")).unwrap();
        assert!(r.points.is_empty());
        assert_eq!(r.residual, 4);
    }

    #[test]
    fn points_at_infinity() {
        // the difference is xz, so the common points lie on x = 0 or z = 0
        let r = rational_pair_intersections(&c("x*y-z^2"), &c("x*y-z^2+x*z")).unwrap();
        assert_eq!(show(&r), vec![("(0:1:0)".to_string(), 3), ("(1:0:0)".to_string(), 1)]);
        assert_eq!(r.residual, 0);
    }
}
