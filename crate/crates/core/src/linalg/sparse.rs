//! Fraction-free elimination on sparse integer rows.
//!
//! Each elimination step replaces a row by an integer combination with the
//! pivot row and strips the row content, so entries stay integral and small.
//! Pivots come from the sparsest remaining column; ties go to the shortest
//! row with the smallest pivot entry.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type SparseRow = Vec<(usize, BigInt)>;

pub(crate) fn make_primitive(mut row: SparseRow) -> SparseRow {
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            return row;
        }
    }
    if !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    row
}

/// `a * x - b * y` for sorted sparse rows, dropping cancelled entries.
fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry(row: &SparseRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

/// Rank of a block of integer rows with `cols` columns.
pub(crate) fn integer_rank(rows: Vec<SparseRow>, cols: usize) -> usize {
    let mut rows: Vec<Option<SparseRow>> = rows.into_iter().map(Some).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row.as_ref().expect("fresh row") {
            col_rows[*c].insert(r);
        }
    }
    let mut rank = 0;
    loop {
        let Some(col) = (0..cols)
            .filter(|&c| !col_rows[c].is_empty())
            .min_by_key(|&c| col_rows[c].len())
        else {
            return rank;
        };
        let prow = *col_rows[col]
            .iter()
            .min_by_key(|&&r| {
                let row = rows[r].as_ref().expect("active row");
                (row.len(), entry(row, col).expect("nonzero pivot").bits())
            })
            .expect("nonempty column");
        let pivot_row = rows[prow].take().expect("active row");
        for (c, _) in &pivot_row {
            col_rows[*c].remove(&prow);
        }
        let pivot = entry(&pivot_row, col).expect("nonzero pivot").clone();
        let targets: Vec<usize> = col_rows[col].iter().copied().collect();
        for r in targets {
            let row = rows[r].take().expect("active row");
            for (c, _) in &row {
                col_rows[*c].remove(&r);
            }
            let a = entry(&row, col).expect("in column").clone();
            let g = pivot.gcd(&a);
            let (mut mp, mut ma) = (&pivot / &g, &a / &g);
            if mp.is_negative() {
                mp = -mp;
                ma = -ma;
            }
            let new = make_primitive(combine(&mp, &row, &ma, &pivot_row));
            for (c, _) in &new {
                col_rows[*c].insert(r);
            }
            if !new.is_empty() {
                rows[r] = Some(new);
            }
        }
        rank += 1;
    }
}
