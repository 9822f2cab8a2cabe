// Row-reduction reads clearer with explicit indices.
#![allow(clippy::needless_range_loop)]

// Row-major dense complex matrices with textbook algorithms.

use num_complex::Complex64;

pub type Row = Vec<Complex64>;
pub type Dense = Vec<Row>;

pub fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn zeros(r: usize, c: usize) -> Dense {
    vec![vec![zero(); c]; r]
}

pub fn mat_vec(a: &Dense, x: &[Complex64]) -> Row {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}


pub fn mat_mul(a: &Dense, b: &Dense) -> Dense {
    let inner = b.len();
    let c = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| (0..c).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &Dense, b: &[Complex64]) -> Option<Row> {
    let n = a.len();
    let mut m: Dense = a.iter().zip(b).map(|(row, &v)| {
        let mut r = row.clone();
        r.push(v);
        r
    }).collect();
    let scale = a.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap())?;
        if m[pivot][col].norm() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, pivot);
        for i in col + 1..n {
            let f = m[i][col] / m[col][col];
            for j in col..=n {
                let sub = f * m[col][j];
                m[i][j] -= sub;
            }
        }
    }
    let mut x = vec![zero(); n];
    for i in (0..n).rev() {
        let s: Complex64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    Some(x)
}

/// Basis of `{x : a x = 0}` from the reduced row echelon form.
pub fn null_space(a: &Dense, cols: usize, rel_tol: f64) -> Vec<Row> {
    let mut m = a.clone();
    let scale = a.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == m.len() {
            break;
        }
        let best = (r..m.len()).max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap()).unwrap();
        if m[best][col].norm() <= rel_tol * scale {
            continue;
        }
        m.swap(r, best);
        let p = m[r][col];
        for v in m[r].iter_mut() {
            *v /= p;
        }
        for i in 0..m.len() {
            if i != r {
                let f = m[i][col];
                for j in 0..cols {
                    let sub = f * m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero(); cols];
            v[f] = Complex64::new(1.0, 0.0);
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m[row][f];
            }
            v
        })
        .collect()
}
