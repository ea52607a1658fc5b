//! Local Milnor and Tjurina numbers by truncated linear algebra.
//!
//! For an ideal `I` of `Q[u,v]` the quotient `Q[u,v]/(I + m^N)` is supported
//! at the origin, and its dimension grows with `N` until `m^N` lies in `I`
//! locally. Equal dimensions at `N` and `N+1` already force that (Nakayama),
//! so the first repeated value is the length of the local algebra.

use std::collections::BTreeMap;

use serde::Serialize;

use super::LocusError;
use crate::linalg::{rank, RatMatrix};
use crate::poly::{dehomogenize, HomogeneousPolynomial, Point, Rat};

/// Truncation degrees are tried up to this bound before giving up.
pub const MAX_TRUNCATION: u32 = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalInvariants {
    pub mu: u32,
    pub tau: u32,
}

type Sparse2 = BTreeMap<[u32; 2], Rat>;

fn index2(e: [u32; 2]) -> usize {
    let t = (e[0] + e[1]) as usize;
    t * (t + 1) / 2 + e[1] as usize
}

/// `dim Q[u,v]/(gens + m^n)`.
fn truncated_colength(gens: &[Sparse2], n: u32) -> usize {
    let cols = (n as usize) * (n as usize + 1) / 2;
    let mut rows: Vec<Vec<(usize, Rat)>> = Vec::new();
    for g in gens {
        let Some(ord) = g.keys().map(|e| e[0] + e[1]).min() else {
            continue;
        };
        for t in 0..n.saturating_sub(ord) {
            for i in 0..=t {
                rows.push(
                    g.iter()
                        .filter(|(e, _)| e[0] + e[1] + t < n)
                        .map(|(e, c)| (index2([e[0] + t - i, e[1] + i]), c.clone()))
                        .collect(),
                );
            }
        }
    }
    let mut m = RatMatrix::new(rows.len(), cols);
    for (r, row) in rows.into_iter().enumerate() {
        for (c, v) in row {
            m.set(r, c, v);
        }
    }
    cols - rank(&m)
}

fn local_length(gens: &[Sparse2]) -> Option<u32> {
    let mut prev = truncated_colength(gens, 1);
    for n in 2..=MAX_TRUNCATION {
        let cur = truncated_colength(gens, n);
        if cur == prev {
            return Some(cur as u32);
        }
        prev = cur;
    }
    None
}

/// Milnor and Tjurina numbers of the germ of `f` at `p`.
pub fn local_invariants(f: &HomogeneousPolynomial, p: &Point) -> Result<LocalInvariants, LocusError> {
    let g = dehomogenize(f, p)?;
    let to_map = |h: &crate::poly::AffinePolynomial| -> Sparse2 { h.terms().map(|(e, c)| (*e, c.clone())).collect() };
    let (gu, gv) = (g.derivative(0), g.derivative(1));
    let grad = [to_map(&gu), to_map(&gv)];
    let mu = local_length(&grad).ok_or_else(|| LocusError::NonIsolated(Box::new(p.clone())))?;
    let tau = local_length(&[to_map(&g), grad[0].clone(), grad[1].clone()])
        .ok_or_else(|| LocusError::NonIsolated(Box::new(p.clone())))?;
    Ok(LocalInvariants { mu, tau })
}
