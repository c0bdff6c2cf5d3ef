use super::{
    add_mod, gcd, mul_mod, neg_mod, normalizing_unit, reduce_i64, sub_mod, xgcd, ResidueMatrix,
    SolutionModule,
};
use crate::error::{Error, Result};

/// Howell normal form of the row span of `mat`.
///
/// The result is in echelon form with every pivot a divisor of the modulus,
/// entries above each pivot reduced into `[0, pivot)`, and the Howell
/// property: the rows from index `i` on span every element of the row span
/// that vanishes left of the `i`-th pivot column. Zero rows are dropped, so
/// two matrices with the same row span produce identical output.
pub fn howell_form(mat: &ResidueMatrix) -> ResidueMatrix {
    let m = mat.modulus();
    let cols = mat.cols();
    let rows: Vec<Vec<u64>> = (0..mat.rows())
        .map(|r| mat.row(r))
        .filter(|row| row.iter().any(|&x| x != 0))
        .map(<[u64]>::to_vec)
        .collect();
    let rows = howell_rows(rows, cols, m);
    let data = rows.into_iter().flatten().collect::<Vec<_>>();
    ResidueMatrix::from_raw_parts(m, data.len() / cols.max(1), cols, data)
}

pub(crate) fn howell_rows(mut rows: Vec<Vec<u64>>, cols: usize, m: u64) -> Vec<Vec<u64>> {
    let mut pivots: Vec<(usize, u64)> = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r >= rows.len() {
            break;
        }
        // Fold every nonzero entry of this column (at or below row r) into
        // row r with unimodular 2x2 gcd steps.
        for k in r + 1..rows.len() {
            let b = rows[k][col];
            if b == 0 {
                continue;
            }
            let a = rows[r][col];
            let (g, s, t) = xgcd(a, b);
            let s = reduce_i64(s, m);
            let t = reduce_i64(t, m);
            let u = (a / g) % m;
            let v = neg_mod((b / g) % m, m);
            let (top, bottom) = rows.split_at_mut(k);
            let row_r = &mut top[r];
            let row_k = &mut bottom[0];
            for c in col..cols {
                let x = row_r[c];
                let y = row_k[c];
                row_r[c] = add_mod(mul_mod(s, x, m), mul_mod(t, y, m), m);
                row_k[c] = add_mod(mul_mod(v, x, m), mul_mod(u, y, m), m);
            }
            debug_assert_eq!(row_k[col], 0);
        }
        let a = rows[r][col];
        if a == 0 {
            continue;
        }
        let unit = normalizing_unit(a, m);
        if unit != 1 {
            for x in rows[r][col..].iter_mut() {
                *x = mul_mod(*x, unit, m);
            }
        }
        let p = rows[r][col];
        debug_assert_eq!(p, gcd(a, m));
        // Saturation: (m/p) * row r vanishes in this column but may be
        // nonzero further right; it has to stay in the pool.
        let ann = m / p;
        if ann != 1 {
            let sat: Vec<u64> = rows[r].iter().map(|&x| mul_mod(x, ann, m)).collect();
            if sat.iter().any(|&x| x != 0) {
                rows.push(sat);
            }
        }
        pivots.push((col, p));
        r += 1;
    }
    rows.truncate(r);
    debug_assert_eq!(rows.len(), pivots.len());

    // Back-reduce entries above each pivot into [0, pivot).
    for (i, &(col, p)) in pivots.iter().enumerate() {
        let (above, rest) = rows.split_at_mut(i);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            let q = row[col] / p;
            if q == 0 {
                continue;
            }
            for c in col..cols {
                row[c] = sub_mod(row[c], mul_mod(q, pivot_row[c], m), m);
            }
        }
    }
    rows
}

/// The module `{x : A·x = 0 (mod m)}`.
///
/// A matrix with zero rows yields the full module; zero columns yield the
/// zero module of rank 0.
pub fn solve_homogeneous(a: &ResidueMatrix) -> SolutionModule {
    let m = a.modulus();
    let n = a.cols();
    // Only the row span of A matters.
    let reduced = howell_form(a);
    let k = reduced.rows();
    // Rows of [A^T | I]: (A·y, y) over y. Elements with zero left block are
    // exactly (0, y) with A·y = 0, and the Howell property puts a spanning
    // set of them at the bottom.
    let width = k + n;
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = vec![0; width];
        for i in 0..k {
            row[i] = reduced.get(i, j);
        }
        row[k + j] = 1;
        rows.push(row);
    }
    let hf = howell_rows(rows, width, m);
    let kernel: Vec<Vec<u64>> = hf
        .into_iter()
        .filter(|row| row[..k].iter().all(|&x| x == 0))
        .map(|row| row[k..].to_vec())
        .collect();
    SolutionModule::from_generators(m, n, kernel)
}

/// Solves `A·x = b`. Returns one particular solution (or `None` when the
/// system is inconsistent) together with the homogeneous solution module.
pub fn solve_affine(
    a: &ResidueMatrix,
    b: &[u64],
) -> Result<(Option<Vec<u64>>, SolutionModule)> {
    let m = a.modulus();
    if b.len() != a.rows() {
        return Err(Error::Shape(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    let r = a.rows();
    // Rows of [A^T | -b^T ; I | 0 ; 0 | 1] regrouped as (A·y - c·b, c, y).
    // A solution is an element with zero left block and c = 1.
    let width = r + 1 + n;
    let mut rows = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut row = vec![0; width];
        for i in 0..r {
            row[i] = a.get(i, j);
        }
        row[r + 1 + j] = 1;
        rows.push(row);
    }
    let mut last = vec![0; width];
    for i in 0..r {
        last[i] = neg_mod(b[i] % m, m);
    }
    last[r] = 1;
    rows.push(last);
    let hf = howell_rows(rows, width, m);
    let particular = hf
        .iter()
        .find(|row| row[..r].iter().all(|&x| x == 0) && row[r] != 0)
        .filter(|row| row[r] == 1)
        .map(|row| row[r + 1..].to_vec());
    Ok((particular, solve_homogeneous(a)))
}
