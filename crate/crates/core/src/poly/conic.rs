use std::fmt;

use num_traits::Zero;

use super::{HomogeneousPolynomial, Point, PolyError, Rat};

/// A plane conic `a x^2 + b xy + c y^2 + d xz + e yz + f z^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConicForm {
    poly: HomogeneousPolynomial,
}

impl ConicForm {
    pub fn new(poly: HomogeneousPolynomial) -> Result<Self, PolyError> {
        if poly.is_zero() {
            return Err(PolyError::ZeroConic);
        }
        if poly.degree() != 2 {
            return Err(PolyError::NotQuadratic(poly.degree()));
        }
        Ok(Self { poly })
    }

    pub fn parse(text: &str) -> Result<Self, PolyError> {
        Self::new(super::parse_polynomial(text)?)
    }

    pub fn poly(&self) -> &HomogeneousPolynomial {
        &self.poly
    }

    /// Coefficients `[a, b, c, d, e, f]` of `x^2, xy, y^2, xz, yz, z^2`.
    pub fn coefficients(&self) -> [Rat; 6] {
        let p = &self.poly;
        [
            p.coeff(&[2, 0, 0]),
            p.coeff(&[1, 1, 0]),
            p.coeff(&[0, 2, 0]),
            p.coeff(&[1, 0, 1]),
            p.coeff(&[0, 1, 1]),
            p.coeff(&[0, 0, 2]),
        ]
    }

    /// Symmetric matrix `M` with `q(v) = v^T M v`.
    pub fn matrix(&self) -> [[Rat; 3]; 3] {
        let [a, b, c, d, e, f] = self.coefficients();
        let two = Rat::from_integer(2.into());
        let (b2, d2, e2) = (&b / &two, &d / &two, &e / &two);
        [[a, b2.clone(), d2.clone()], [b2, c, e2.clone()], [d2, e2, f]]
    }

    pub fn determinant(&self) -> Rat {
        let m = self.matrix();
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    pub fn is_smooth(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn eval(&self, p: &Point) -> Rat {
        self.poly.eval(p)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval(p).is_zero()
    }
}

impl fmt::Display for ConicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Smoothness test for a conic.
pub fn conic_is_smooth(q: &ConicForm) -> bool {
    q.is_smooth()
}
