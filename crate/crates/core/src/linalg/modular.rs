//! Multi-modular rank with an exact certificate.
//!
//! The rank modulo a prime never exceeds the rational rank, so agreement of
//! two primes gives a candidate `r` that is already a proven lower bound. The
//! upper bound comes from rebuilding the reduced kernel basis over the
//! rationals (CRT plus rational reconstruction over as many primes as it
//! takes) and checking `M v = 0` exactly for each of the `cols - r` vectors.
//! Any disagreement or failed certificate falls back to exact elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::sparse::{integer_rank, SparseRow};
use super::RatMatrix;
use crate::poly::univariate::rational_reconstruct;
use crate::poly::Rat;

const MAX_PRIMES: usize = 48;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes just below 2^31, largest first.
fn primes() -> impl Iterator<Item = u64> {
    (1u64 << 20..(1u64 << 31)).rev().filter(|&n| is_prime(n))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Gauss-Jordan elimination mod `p`. Returns the pivot columns and, for each
/// pivot row, the reduced entries.
fn rref_mod(rows: &[SparseRow], cols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let mut d = vec![0u64; cols];
            for (c, v) in row {
                d[*c] = reduce(v, p);
            }
            d
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == a.len() {
            break;
        }
        let Some(sel) = (prow..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(prow, sel);
        let inv = inv_mod(a[prow][col], p);
        for v in a[prow][col..].iter_mut() {
            *v = *v * inv % p;
        }
        let (head, tail) = a.split_at_mut(prow);
        let (pivot, rest) = tail.split_first_mut().expect("pivot row");
        for row in head.iter_mut().chain(rest.iter_mut()) {
            let f = row[col];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                if y != 0 {
                    *x = (*x + nf * y) % p;
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    a.truncate(prow);
    (pivots, a)
}

fn certify_block(rows: &[SparseRow], cols: usize) -> Option<usize> {
    let mut ps = primes();
    let p1 = ps.next()?;
    let p2 = ps.next()?;
    let (piv1, red1) = rref_mod(rows, cols, p1);
    let (piv2, red2) = rref_mod(rows, cols, p2);
    if piv1 != piv2 {
        return None;
    }
    let r = piv1.len();
    let free: Vec<usize> = {
        let mut is_pivot = vec![false; cols];
        for &c in &piv1 {
            is_pivot[c] = true;
        }
        (0..cols).filter(|&c| !is_pivot[c]).collect()
    };
    if free.is_empty() {
        return Some(r);
    }
    // residues[i][k]: entry of pivot row i at free column k
    let mut residues: Vec<Vec<BigInt>> =
        red1.iter().map(|row| free.iter().map(|&c| BigInt::from(row[c])).collect()).collect();
    let mut modulus = BigInt::from(p1);
    let absorb = |red: &[Vec<u64>], p: u64, residues: &mut Vec<Vec<BigInt>>, modulus: &mut BigInt| {
        let m_mod = reduce(modulus, p);
        let m_inv = inv_mod(m_mod, p);
        for (i, row) in red.iter().enumerate() {
            for (k, &c) in free.iter().enumerate() {
                let a = &residues[i][k];
                let a_mod = reduce(a, p);
                let diff = (row[c] + p - a_mod) % p;
                let t = diff * m_inv % p;
                residues[i][k] = a + &*modulus * BigInt::from(t);
            }
        }
        *modulus *= BigInt::from(p);
    };
    absorb(&red2, p2, &mut residues, &mut modulus);
    let mut used = 2;
    loop {
        if let Some(kernel) = reconstruct(&residues, &modulus) {
            if verify(rows, &piv1, &free, &kernel) {
                return Some(r);
            }
        }
        if used >= MAX_PRIMES {
            return None;
        }
        let p = ps.next()?;
        let (piv, red) = rref_mod(rows, cols, p);
        used += 1;
        if piv != piv1 {
            continue;
        }
        absorb(&red, p, &mut residues, &mut modulus);
    }
}

fn reconstruct(residues: &[Vec<BigInt>], modulus: &BigInt) -> Option<Vec<Vec<Rat>>> {
    residues
        .iter()
        .map(|row| row.iter().map(|x| rational_reconstruct(x, modulus)).collect::<Option<Vec<_>>>())
        .collect()
}

/// Checks every reconstructed kernel vector against the integer rows.
fn verify(rows: &[SparseRow], pivots: &[usize], free: &[usize], reduced: &[Vec<Rat>]) -> bool {
    let cols = pivots.len() + free.len();
    for (k, &fc) in free.iter().enumerate() {
        let mut v: Vec<Rat> = vec![Rat::zero(); cols];
        v[fc] = Rat::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -reduced[i][k].clone();
        }
        let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let w: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
        for row in rows {
            let s = row.iter().fold(BigInt::zero(), |acc, (c, x)| acc + x * &w[*c]);
            if !s.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Rank over the rationals via modular elimination, certified exactly.
pub fn rank_certified(m: &RatMatrix) -> usize {
    let rows = m.integer_rows();
    m.blocks()
        .into_iter()
        .map(|(rs, cs)| {
            let mut local = vec![usize::MAX; m.cols()];
            for (k, c) in cs.iter().enumerate() {
                local[*c] = k;
            }
            let block: Vec<SparseRow> = rs
                .iter()
                .map(|&r| rows[r].iter().map(|(c, v)| (local[*c], v.clone())).collect())
                .collect();
            certify_block(&block, cs.len()).unwrap_or_else(|| integer_rank(block, cs.len()))
        })
        .sum()
}
