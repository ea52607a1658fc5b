//! Exact rank and kernel computations over the rationals.
//!
//! Matrices coming from multiplication maps are sparse and frequently split
//! into independent blocks (one per multidegree class), so every routine first
//! separates the connected components of the row/column incidence graph.

mod modular;
mod sparse;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Rat;

pub use modular::rank_certified;

/// Sparse rational matrix stored row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Rat>>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rat>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::new(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rat::from_integer(BigInt::from(v))).collect())
            .collect();
        Self::from_dense(&dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, v: &Rat) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let e = self.data[r].entry(c).or_insert_with(Rat::zero);
        *e += v;
        if e.is_zero() {
            self.data[r].remove(&c);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.data[r].get(&c).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &Rat)> {
        self.data[r].iter().map(|(c, v)| (*c, v))
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().fold(Rat::zero(), |acc, (c, x)| acc + x * &v[*c]))
            .collect()
    }

    /// `P M Q` for permutations given as images (`row_perm[i]` is the new
    /// position of row `i`).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut m = Self::new(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                m.set(row_perm[i], col_perm[*c], v.clone());
            }
        }
        m
    }

    /// Rows scaled to coprime integers, as sorted sparse vectors.
    pub(crate) fn integer_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        self.data
            .iter()
            .map(|row| {
                let l = row.values().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
                let ints: Vec<(usize, BigInt)> =
                    row.iter().map(|(c, v)| (*c, (v * &l).to_integer())).collect();
                sparse::make_primitive(ints)
            })
            .collect()
    }

    /// Connected components of the bipartite row/column graph. Each entry lists
    /// the rows and columns of one block; empty rows and columns are omitted.
    pub(crate) fn blocks(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        // union-find over rows (0..rows) and columns (rows..rows+cols)
        let n = self.rows + self.cols;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (r, row) in self.data.iter().enumerate() {
            for c in row.keys() {
                let a = find(&mut parent, r);
                let b = find(&mut parent, self.rows + c);
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (r, row) in self.data.iter().enumerate() {
            if !row.is_empty() {
                let root = find(&mut parent, r);
                groups.entry(root).or_default().0.push(r);
            }
        }
        let mut used = vec![false; self.cols];
        for row in &self.data {
            for c in row.keys() {
                used[*c] = true;
            }
        }
        for (c, u) in used.iter().enumerate() {
            if *u {
                let root = find(&mut parent, self.rows + c);
                groups.entry(root).or_default().1.push(c);
            }
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort();
        out
    }
}

/// Basis of the right kernel `{v : M v = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    pub dimension: usize,
    pub vectors: Vec<Vec<Rat>>,
}

/// Exact rank over the rationals, by fraction-free sparse elimination.
pub fn rank(m: &RatMatrix) -> usize {
    let rows = m.integer_rows();
    m.blocks()
        .into_iter()
        .map(|(rs, cs)| {
            let mut local: BTreeMap<usize, usize> = BTreeMap::new();
            for (k, c) in cs.iter().enumerate() {
                local.insert(*c, k);
            }
            let block: Vec<Vec<(usize, BigInt)>> = rs
                .iter()
                .map(|&r| rows[r].iter().map(|(c, v)| (local[c], v.clone())).collect())
                .collect();
            sparse::integer_rank(block, cs.len())
        })
        .sum()
}

/// Reduced row echelon form over the rationals: returns pivot columns and the
/// reduced nonzero rows (dense).
pub(crate) fn rref(m: &RatMatrix) -> (Vec<usize>, Vec<Vec<Rat>>) {
    let mut a: Vec<Vec<Rat>> = (0..m.rows)
        .map(|r| {
            let mut row = vec![Rat::zero(); m.cols];
            for (c, v) in m.row(r) {
                row[c] = v.clone();
            }
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..m.cols {
        if prow == a.len() {
            break;
        }
        let Some(sel) = (prow..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(prow, sel);
        let inv = Rat::one() / &a[prow][col];
        for v in a[prow].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = a[prow].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == prow || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                if !pv.is_zero() {
                    row[c] -= &f * pv;
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    a.truncate(prow);
    (pivots, a)
}

/// Kernel basis in reduced form: one vector per free column, with a 1 in that
/// column and zeros in the other free columns.
pub fn kernel_basis(m: &RatMatrix) -> KernelBasis {
    let (pivots, reduced) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vectors: Vec<Vec<Rat>> = (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rat::zero(); m.cols];
            v[free] = Rat::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect();
    KernelBasis { dimension: vectors.len(), vectors }
}
