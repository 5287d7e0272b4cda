use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::place::{Place, PlaceSet};
use super::rational::{format_rational, int, parse_rational, Rational};
use super::ExactError;

/// Dense `n x n` rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    entries: Vec<Rational>,
}

/// Per-place max-entry norms and their maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormProfile {
    #[serde(with = "place_map")]
    pub per_place: BTreeMap<Place, Rational>,
    #[serde(with = "super::rational::serde_q")]
    pub global: Rational,
}

mod place_map {
    use super::*;
    use serde::ser::SerializeMap;

    pub fn serialize<S: Serializer>(m: &BTreeMap<Place, Rational>, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            map.serialize_entry(&k.to_string(), &format_rational(v))?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Place, Rational>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                let p: Place = k.parse().map_err(serde::de::Error::custom)?;
                let q = parse_rational(&v).map_err(serde::de::Error::custom)?;
                Ok((p, q))
            })
            .collect()
    }
}

impl Matrix {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self, ExactError> {
        if entries.len() != n * n {
            return Err(ExactError::Shape {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(Matrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(ExactError::Shape {
                    expected: n,
                    got: r.len(),
                });
            }
            entries.extend(r);
        }
        Ok(Matrix { n, entries })
    }

    /// Integer literal rows; panics on ragged input (test and example helper).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        Matrix::from_rows(v).expect("square integer literal")
    }

    pub fn zero(n: usize) -> Self {
        Matrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diag(d: &[Rational]) -> Self {
        let mut m = Matrix::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Elementary matrix `E_ij` (zero-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zero(n);
        m[(i, j)] = Rational::one();
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.n).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self, ExactError> {
        let n = cols.len();
        let mut m = Matrix::zero(n);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(ExactError::Shape {
                    expected: n,
                    got: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.n)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<Rational>()
            })
            .collect()
    }

    /// Frobenius inner product `tr(A B^t)`.
    pub fn frobenius_dot(&self, other: &Matrix) -> Rational {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn frobenius_sq(&self) -> Rational {
        self.frobenius_dot(self)
    }

    pub fn determinant(&self) -> Rational {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = &a[r * n + col] / &p;
                for k in col..n {
                    let t = &f * &a[col * n + k];
                    a[r * n + k] -= t;
                }
            }
        }
        det
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Matrix::identity(n).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                    inv.swap(piv * n + k, col * n + k);
                }
            }
            let p = a[col * n + col].clone();
            for k in 0..n {
                a[col * n + k] /= &p;
                inv[col * n + k] /= &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for k in 0..n {
                    let t = &f * &a[col * n + k];
                    a[r * n + k] -= t;
                    let t = &f * &inv[col * n + k];
                    inv[r * n + k] -= t;
                }
            }
        }
        Some(Matrix { n, entries: inv })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `C^{-1} self C` given both `C` and its inverse.
    pub fn conjugate_by(&self, c: &Matrix, c_inv: &Matrix) -> Self {
        &(c_inv * self) * c
    }

    /// `max_ij |a_ij|_v`.
    pub fn norm_at(&self, v: Place) -> Rational {
        self.entries
            .iter()
            .map(|x| v.abs(x))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self[(i, j)].clone()).collect())
            .collect()
    }

    /// Canonical `p/q` row grid, the same text form used in every file format.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<Self, ExactError> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_rows(parsed)
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, other: &Matrix) -> Self {
        &(self * other) - &(other * self)
    }
}

/// Per-place and global max-entry norms.
pub fn matrix_norm(a: &Matrix, s: &PlaceSet) -> NormProfile {
    let per_place: BTreeMap<Place, Rational> = s.iter().map(|&v| (v, a.norm_at(v))).collect();
    let global = per_place
        .values()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    NormProfile { per_place, global }
}

/// Rank of a rectangular rational matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut rs = RowSpace::new(rows.first().map_or(0, |r| r.len()));
    for r in rows {
        rs.insert(r.clone());
    }
    rs.dim()
}

/// Basis of the right kernel `{x : M x = 0}` of a rectangular matrix.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..ncols {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[ri][f].clone();
            }
            v
        })
        .collect()
}

/// Incrementally maintained row-echelon basis of a subspace of Q^d.
#[derive(Clone, Debug)]
pub struct RowSpace {
    width: usize,
    // (pivot column, row normalised to 1 at the pivot)
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RowSpace {
    pub fn new(width: usize) -> Self {
        RowSpace {
            width,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (pc, row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let f = v[*pc].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let p = r[pc].clone();
        for x in r.iter_mut() {
            *x /= &p;
        }
        // keep existing rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            if !row[pc].is_zero() {
                let f = row[pc].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((pc, r));
        true
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.n + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] += a * b;
                    }
                }
            }
        }
        Matrix { n, entries: out }
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        Matrix::from_string_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// True when every entry is an S-integer: denominators only involve primes in `s`.
pub fn is_s_integral(a: &Matrix, s: &PlaceSet) -> bool {
    a.entries().iter().all(|x| {
        let mut d = x.denom().abs();
        for p in s.primes() {
            let bp = num_bigint::BigInt::from(p);
            while (&d % &bp).is_zero() {
                d /= &bp;
            }
        }
        d.is_one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    #[test]
    fn norms_match_examples() {
        let s2 = PlaceSet::with_primes([2]).unwrap();
        let id = Matrix::identity(2);
        let prof = matrix_norm(&id, &PlaceSet::archimedean_only());
        assert_eq!(prof.global, int(1));

        let a = Matrix::from_i64(&[&[1, 2], &[0, 1]]);
        let prof = matrix_norm(&a, &s2);
        assert_eq!(prof.per_place[&Place::Archimedean], int(2));
        assert_eq!(prof.per_place[&Place::Finite(2)], int(1));
        assert_eq!(prof.global, int(2));

        let d = Matrix::diag(&[int(2), rat(1, 2)]);
        let prof = matrix_norm(&d, &s2);
        assert_eq!(prof.per_place[&Place::Archimedean], int(2));
        assert_eq!(prof.per_place[&Place::Finite(2)], int(2));
        assert_eq!(prof.global, int(2));
    }

    #[test]
    fn inverse_and_determinant() {
        let a = Matrix::from_i64(&[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]);
        assert_eq!(a.determinant(), int(1));
        let ai = a.inverse().unwrap();
        assert!((&a * &ai).is_identity());
        let sing = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_none());
        assert_eq!(sing.determinant(), int(0));
    }

    #[test]
    fn kernel_and_rank() {
        let rows = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
        assert_eq!(rank(&rows), 1);
        let k = nullspace(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Rational = rows[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn power_matches_repeated_product() {
        let a = Matrix::from_i64(&[&[1, 1], &[1, 0]]);
        let mut p = Matrix::identity(2);
        for _ in 0..7 {
            p = &p * &a;
        }
        assert_eq!(a.pow(7), p);
        assert_eq!(a.pow(7)[(0, 0)], int(21));
    }
}
