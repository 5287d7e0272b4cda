//! Rational change-of-basis matrices adapted to `A`: approximate real
//! eigenbases, dominant splittings `line ⊕ complement`, and diagonal
//! balancing. All bases are exact rationals, so conjugates are exact and
//! only their off-diagonal smallness is approximate.

use num_traits::{Signed, Zero};

use crate::exactnum::matrix::nullspace;
use crate::exactnum::rational::{floor_log2, int, pow2, pow_int, round_dyadic, round_padic, valuation};
use crate::exactnum::{Matrix, Place, Rational};
use crate::spectra::{char_poly, roots::isolate_roots, wedge_power};

use super::ForgeError;

const SQUARINGS: usize = 48;

/// Index of the entry of largest `|.|_v`, first in row-major order.
fn argmax_entry(x: &Matrix, place: Place) -> (usize, usize) {
    let n = x.dim();
    let mut best = (0, 0);
    let mut top = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            let v = place.abs(&x[(i, j)]);
            if v > top {
                top = v;
                best = (i, j);
            }
        }
    }
    best
}

fn round_at(x: &Rational, place: Place, bits: u32) -> Rational {
    match place {
        Place::Archimedean => round_dyadic(x, bits),
        Place::Finite(p) => {
            let digits = (bits as f64 / (p as f64).log2()).ceil() as i64;
            match valuation(x, p) {
                None => Rational::zero(),
                Some(v) if v >= digits => Rational::zero(),
                Some(v) => round_padic(x, p, (digits - v) as u32),
            }
        }
    }
}

fn normalise(x: &Matrix, place: Place, bits: u32) -> Option<Matrix> {
    let (i, j) = argmax_entry(x, place);
    let pivot = x[(i, j)].clone();
    if pivot.is_zero() {
        return None;
    }
    let e: Vec<Rational> = x.entries().iter().map(|y| round_at(&(y / &pivot), place, bits)).collect();
    Matrix::new(x.dim(), e).ok()
}

/// Basis `[v1 | ker w1]` where `v1` and `w1` are the right and left
/// dominant eigenvectors at `place`, approximated by repeated squaring.
pub fn dominant_split_basis(a: &Matrix, place: Place, bits: u32) -> Option<Matrix> {
    let n = a.dim();
    let mut x = normalise(a, place, bits)?;
    for _ in 0..SQUARINGS {
        let y = normalise(&(&x * &x), place, bits)?;
        if y == x {
            break;
        }
        x = y;
    }
    let (i, j) = argmax_entry(&x, place);
    let v1 = x.column(j);
    let w1 = x.row(i).to_vec();
    let q = (0..n).max_by(|&s, &t| place.abs(&w1[s]).cmp(&place.abs(&w1[t])).then(t.cmp(&s)))?;
    let mut cols = vec![v1];
    for k in (0..n).filter(|&k| k != q) {
        let mut c = vec![Rational::zero(); n];
        c[k] = int(1);
        c[q] = -(&w1[k] / &w1[q]);
        cols.push(c);
    }
    let c = Matrix::from_columns(&cols).ok()?;
    (!c.determinant().is_zero()).then_some(c)
}

/// Scales so the largest entry is 1, then rounds unless `bits` is `None`.
fn scale_to_unit(v: Vec<Rational>, bits: Option<u32>) -> Option<Vec<Rational>> {
    let top = v.iter().map(|x| x.abs()).max()?;
    if top.is_zero() {
        return None;
    }
    let piv = v.iter().find(|x| x.abs() == top)?.clone();
    Some(
        v.iter()
            .map(|x| {
                let y = x / &piv;
                match bits {
                    Some(b) => round_dyadic(&y, b),
                    None => y,
                }
            })
            .collect(),
    )
}

/// Columns are approximate eigenvectors ordered by decreasing `|lambda|`,
/// provided every eigenvalue is real and simple.
pub fn real_eigenbasis(a: &Matrix, bits: u32) -> Option<Matrix> {
    let n = a.dim();
    let f = char_poly(a).poly();
    if !f.is_squarefree() {
        return None;
    }
    let discs = isolate_roots(&f, &pow2(-(bits as i64))).ok()?;
    if discs.iter().any(|d| d.exact.is_none() && d.real != Some(true)) {
        return None;
    }
    let mut roots: Vec<(Rational, bool)> = discs
        .iter()
        .map(|d| match &d.exact {
            Some(q) => (q.clone(), true),
            None => (d.center.re.clone(), false),
        })
        .collect();
    roots.sort_by(|x, y| y.0.abs().cmp(&x.0.abs()).then(y.0.cmp(&x.0)));
    let id = Matrix::identity(n);
    let mut cols = Vec::with_capacity(n);
    for (mu, exact) in roots {
        let shifted = a - &id.scale(&mu);
        let v = if exact {
            scale_to_unit(nullspace(&shifted.rows(), n).into_iter().next()?, None)?
        } else {
            let inv = shifted.inverse()?;
            let mut x: Vec<Rational> = (0..n).map(|i| int(i as i64 + 1)).collect();
            for _ in 0..3 {
                x = scale_to_unit(inv.mul_vec(&x), Some(bits + 8))?;
            }
            x
        };
        cols.push(v);
    }
    let c = Matrix::from_columns(&cols).ok()?;
    (!c.determinant().is_zero()).then_some(c)
}

/// `rho_m(A)`, `rho_m(B)` written in a basis whose first vector is the
/// dominant eigenvector of `rho_m(A)` at `place`.
#[derive(Clone, Debug)]
pub struct WedgeFrame {
    pub place: Place,
    pub m: usize,
    pub basis: Matrix,
    pub basis_inv: Matrix,
    pub a_hat: Matrix,
    pub b_hat: Matrix,
    /// The basis comes from a full eigenbasis of `A`.
    pub eigenbasis: bool,
    /// `max |a_hat_ij|_v` over `i != j`.
    pub off_diagonal: Rational,
}

pub fn off_diagonal(x: &Matrix, place: Place) -> Rational {
    let n = x.dim();
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|ij| place.abs(&x[ij]))
        .max()
        .unwrap_or_else(Rational::zero)
}

impl WedgeFrame {
    pub fn new(a: &Matrix, b: &Matrix, place: Place, m: usize, bits: u32) -> Result<Self, ForgeError> {
        let wa = wedge_power(a, m)?;
        let wb = wedge_power(b, m)?;
        let eig = match place {
            Place::Archimedean => real_eigenbasis(a, bits),
            Place::Finite(_) => None,
        };
        let (basis, eigenbasis) = match eig {
            Some(c) => (wedge_power(&c, m)?, true),
            None => (dominant_split_basis(&wa, place, bits).ok_or(ForgeError::NoSplitting(place))?, false),
        };
        let basis_inv = basis.inverse().ok_or(ForgeError::NoSplitting(place))?;
        let a_hat = wa.conjugate_by(&basis, &basis_inv);
        let b_hat = wb.conjugate_by(&basis, &basis_inv);
        Ok(WedgeFrame {
            place,
            m,
            off_diagonal: off_diagonal(&a_hat, place),
            basis,
            basis_inv,
            a_hat,
            b_hat,
            eigenbasis,
        })
    }

    /// Same frame with `B` replaced.
    pub fn with_b(&self, b: &Matrix) -> Result<Self, ForgeError> {
        let wb = wedge_power(b, self.m)?;
        Ok(WedgeFrame {
            b_hat: wb.conjugate_by(&self.basis, &self.basis_inv),
            ..self.clone()
        })
    }
}

/// `log_b |x|_v` rounded down, `None` for zero.
fn log_abs(x: &Rational, place: Place) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    match place {
        Place::Archimedean => Some(floor_log2(&x.abs())),
        Place::Finite(p) => valuation(x, p).map(|v| -v),
    }
}

/// Exponents `k_i` such that conjugating by `D = diag(b^k_i)` roughly
/// minimises `max |(D^-1 B D)_ij|_v`: each index balances its largest row
/// and column entry, and an index with an empty side is pushed down to the
/// diagonal level.
pub fn balance_exponents(b: &Matrix, place: Place) -> Vec<i64> {
    let n = b.dim();
    let w: Vec<Vec<Option<i64>>> = (0..n).map(|i| (0..n).map(|j| log_abs(&b[(i, j)], place)).collect()).collect();
    let diag_level = (0..n).filter_map(|i| w[i][i]).max().unwrap_or(0);
    let mut x = vec![0i64; n];
    for _ in 0..4 * n {
        let mut moved = false;
        for i in 0..n {
            let out = (0..n).filter(|&j| j != i).filter_map(|j| w[i][j].map(|v| v + x[j])).max();
            let inn = (0..n).filter(|&j| j != i).filter_map(|j| w[j][i].map(|v| v - x[j])).max();
            let target = match (out, inn) {
                (Some(o), Some(c)) => (o - c).div_euclid(2),
                (Some(o), None) => (o - diag_level).max(x[i]),
                (None, Some(c)) => (diag_level - c).min(x[i]),
                (None, None) => x[i],
            };
            if target != x[i] {
                x[i] = target;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    x
}

/// `D^-1 X D` for `D = diag(b^k_i)`.
pub fn apply_balance(x: &Matrix, ks: &[i64], base: u64) -> Matrix {
    let n = x.dim();
    let mut y = x.clone();
    for i in 0..n {
        for j in 0..n {
            if ks[j] != ks[i] && !y[(i, j)].is_zero() {
                y[(i, j)] = &x[(i, j)] * pow_int(base, ks[j] - ks[i]);
            }
        }
    }
    y
}

pub fn balance_matrix(ks: &[i64], base: u64) -> Matrix {
    Matrix::diag(&ks.iter().map(|&k| pow_int(base, k)).collect::<Vec<_>>())
}
