use crate::exactnum::{Matrix, Rational};

use super::SpectraError;

/// All `m`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        // rightmost index that can still move
        let Some(i) = (0..m).rev().find(|&i| cur[i] < n - m + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..m {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `rho_m(A)`: entry `(I, J)` is the minor of `A` on rows `I`, columns `J`.
pub fn wedge_power(a: &Matrix, m: usize) -> Result<Matrix, SpectraError> {
    let n = a.dim();
    if m == 0 || m > n {
        return Err(SpectraError::BadExponent { m, n });
    }
    if m == 1 {
        return Ok(a.clone());
    }
    let idx = subsets(n, m);
    let size = idx.len();
    let mut entries: Vec<Rational> = Vec::with_capacity(size * size);
    for rows in &idx {
        for cols in &idx {
            let sub = Matrix::from_rows(a.submatrix(rows, cols)).expect("square minor");
            entries.push(sub.determinant());
        }
    }
    Ok(Matrix::new(size, entries).expect("C(n,m)^2 entries"))
}
