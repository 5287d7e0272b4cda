//! Almost-algebras: spans of matrices closed under products up to a small
//! error in the trace inner product `<X, Y> = tr(X Y^t)`.
//!
//! The basis is kept orthogonal but unnormalised, so everything stays
//! exact; normalised quantities are formed as ratios of squared norms and
//! only the final defects go through a square root.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ForgeError;
use crate::exactnum::rational::{floor_log2, pow2, rpow, serde_q, serde_q_vec, sqrt_upper};
use crate::exactnum::{Matrix, Rational};

const DEFECT_BITS: u32 = 64;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlmostAlgebra {
    /// Pairwise orthogonal; divide by `sqrt(norms_sq)` for an orthonormal
    /// basis.
    pub basis_matrices: Vec<Matrix>,
    #[serde(with = "serde_q_vec")]
    pub norms_sq: Vec<Rational>,
    #[serde(with = "serde_q_vec")]
    pub epsilon_ladder: Vec<Rational>,
    /// `f(0), f(1), ...`: dimension after each round.
    pub dimensions: Vec<usize>,
    pub dimension: usize,
    pub stabilized_k: usize,
    #[serde(with = "serde_q")]
    pub closure_defect: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDefect {
    #[serde(with = "serde_q")]
    pub product: Rational,
    #[serde(with = "serde_q")]
    pub associativity: Rational,
}

impl AlgebraDefect {
    pub fn value(&self) -> Rational {
        self.product.clone().max(self.associativity.clone())
    }
}

struct Span {
    basis: Vec<Matrix>,
    norms_sq: Vec<Rational>,
}

impl Span {
    fn project(&self, x: &Matrix) -> Matrix {
        let mut p = Matrix::zero(x.dim());
        for (b, nb) in self.basis.iter().zip(&self.norms_sq) {
            let c = x.frobenius_dot(b) / nb;
            if !c.is_zero() {
                p = &p + &b.scale(&c);
            }
        }
        p
    }

    fn residual(&self, x: &Matrix) -> Matrix {
        x - &self.project(x)
    }

    /// Adds `x` if its normalised residual squared exceeds `eps^2 * scale`.
    fn offer(&mut self, x: &Matrix, scale: &Rational, eps: &Rational) -> bool {
        let r = self.residual(x);
        let rs = r.frobenius_sq();
        if rs.is_zero() || rs <= eps * eps * scale {
            return false;
        }
        self.basis.push(r);
        self.norms_sq.push(rs);
        true
    }

    /// Largest `|| x_ij - P x_ij ||^2 / (|b_i|^2 |b_j|^2)` over products.
    fn product_defect_sq(&self) -> Rational {
        let mut worst = Rational::zero();
        for (bi, ni) in self.basis.iter().zip(&self.norms_sq) {
            for (bj, nj) in self.basis.iter().zip(&self.norms_sq) {
                let r = self.residual(&(bi * bj)).frobenius_sq() / (ni * nj);
                worst = worst.max(r);
            }
        }
        worst
    }
}

/// Grows the span of `blocks` under products. Round `k` adds the products
/// of the current basis whose residual exceeds `eps_{k+1}`, where
/// `eps_1 = delta * epsilon` and each later rung is `delta` times the last;
/// it stops at the first round that adds nothing.
pub fn build_almost_algebra(blocks: &[Matrix], epsilon: &Rational, delta: &Rational) -> Result<AlmostAlgebra, ForgeError> {
    let n = blocks.first().map(|b| b.dim()).ok_or(ForgeError::InvalidBlock(0))?;
    for (i, b) in blocks.iter().enumerate() {
        if b.dim() != n || b.frobenius_sq() > Rational::one() {
            return Err(ForgeError::InvalidBlock(i));
        }
    }
    let cap = n * n + 1;
    let ladder: Vec<Rational> = (1..=cap as u32 + 1).map(|k| epsilon * rpow(delta, k)).collect();
    let mut span = Span {
        basis: Vec::new(),
        norms_sq: Vec::new(),
    };
    for b in blocks {
        span.offer(b, &Rational::one(), &ladder[0]);
    }
    let mut dims = vec![span.basis.len()];
    for k in 1..=cap {
        let eps = &ladder[k];
        let current = span.basis.len();
        let mut products = Vec::new();
        for i in 0..current {
            for j in 0..current {
                let scale = &span.norms_sq[i] * &span.norms_sq[j];
                products.push((&span.basis[i] * &span.basis[j], scale));
            }
        }
        for (x, scale) in &products {
            span.offer(x, scale, eps);
        }
        dims.push(span.basis.len());
        if span.basis.len() == current {
            let defect = sqrt_upper(&span.product_defect_sq(), DEFECT_BITS);
            return Ok(AlmostAlgebra {
                dimension: current,
                stabilized_k: k - 1,
                dimensions: dims,
                epsilon_ladder: ladder[..=k].to_vec(),
                closure_defect: defect,
                basis_matrices: span.basis,
                norms_sq: span.norms_sq,
            });
        }
    }
    Err(ForgeError::NoStabilization)
}

/// Product defect and associativity defect of the structure constants
/// `e_i * e_j := P(e_i e_j)` on the orthonormalised basis.
pub fn algebra_defect(aa: &AlmostAlgebra) -> AlgebraDefect {
    let span = Span {
        basis: aa.basis_matrices.clone(),
        norms_sq: aa.norms_sq.clone(),
    };
    let d = span.basis.len();
    let prod: Vec<Vec<Matrix>> = (0..d)
        .map(|i| (0..d).map(|j| span.project(&(&span.basis[i] * &span.basis[j]))).collect())
        .collect();
    let mut worst = Rational::zero();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let left = span.project(&(&prod[i][j] * &span.basis[k]));
                let right = span.project(&(&span.basis[i] * &prod[j][k]));
                let r = (&left - &right).frobenius_sq() / (&span.norms_sq[i] * &span.norms_sq[j] * &span.norms_sq[k]);
                worst = worst.max(r);
            }
        }
    }
    AlgebraDefect {
        product: sqrt_upper(&span.product_defect_sq(), DEFECT_BITS),
        associativity: sqrt_upper(&worst, DEFECT_BITS),
    }
}

/// Components of `B` along the eigenspaces of `Ad(A)` for diagonal `A`:
/// entries `(i, j)` grouped by the ratio `a_i / a_j`, each block scaled by
/// a power of two to Frobenius norm at most 1.
pub fn ad_blocks(a_diag: &[Rational], b: &Matrix) -> Vec<Matrix> {
    let n = b.dim();
    let mut groups: Vec<(Rational, Matrix)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if b[(i, j)].is_zero() || a_diag[j].is_zero() {
                continue;
            }
            let ratio = &a_diag[i] / &a_diag[j];
            let slot = match groups.iter().position(|(r, _)| *r == ratio) {
                Some(s) => s,
                None => {
                    groups.push((ratio, Matrix::zero(n)));
                    groups.len() - 1
                }
            };
            groups[slot].1[(i, j)] = b[(i, j)].clone();
        }
    }
    groups
        .into_iter()
        .map(|(_, m)| {
            let f = m.frobenius_sq();
            if f <= Rational::one() {
                m
            } else {
                // 4^-(e+1) * f < 1 where 2^e <= f
                let e = floor_log2(&f) / 2 + 1;
                m.scale(&pow2(-e))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn delta() -> Rational {
        pow2(-4)
    }

    #[test]
    fn scalar_block() {
        let b = Matrix::identity(2).scale(&rat(1, 2));
        let aa = build_almost_algebra(&[b], &pow2(-10), &delta()).unwrap();
        assert_eq!(aa.dimension, 1);
        assert!(aa.closure_defect.is_zero());
    }

    #[test]
    fn idempotents() {
        let e11 = Matrix::unit(2, 0, 0);
        let e22 = Matrix::unit(2, 1, 1);
        let aa = build_almost_algebra(&[e11, e22], &pow2(-10), &delta()).unwrap();
        assert_eq!(aa.dimension, 2);
        assert!(aa.closure_defect.is_zero());
        assert!(algebra_defect(&aa).value().is_zero());
    }

    #[test]
    fn perturbed_idempotents() {
        let d = pow2(-20);
        let e11 = Matrix::unit(2, 0, 0);
        let mut x = Matrix::unit(2, 1, 1);
        x[(0, 1)] = d.clone();
        x = x.scale(&rat(1, 2));
        let aa = build_almost_algebra(&[e11, x], &pow2(-10), &delta()).unwrap();
        assert_eq!(aa.dimension, 2);
        assert!(aa.closure_defect > Rational::zero() && aa.closure_defect <= pow2(-10));
        let def = algebra_defect(&aa);
        assert!(def.product > Rational::zero() && def.value() <= pow2(-10));
    }

    #[test]
    fn nilpotent_and_generated_algebra() {
        let aa = build_almost_algebra(&[Matrix::unit(2, 0, 1)], &pow2(-10), &delta()).unwrap();
        assert_eq!(aa.dimension, 1);
        assert!(algebra_defect(&aa).value().is_zero());
        // E12 and E21 generate all of M_2
        let aa = build_almost_algebra(&[Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)], &pow2(-10), &delta()).unwrap();
        assert_eq!(aa.dimension, 4);
        assert!(aa.closure_defect.is_zero());
        assert!(aa.dimensions.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_large_blocks() {
        let b = Matrix::identity(2);
        assert!(matches!(build_almost_algebra(&[b], &pow2(-10), &delta()), Err(ForgeError::InvalidBlock(0))));
    }

    #[test]
    fn ad_blocks_split_by_ratio() {
        let a = [int(4), int(1), rat(1, 4)];
        let b = Matrix::from_i64(&[&[1, 2, 0], &[0, 1, 3], &[5, 0, 1]]);
        let blocks = ad_blocks(&a, &b);
        // ratios: 1 (diagonal), 4 (01, 12), 1/16 (20)
        assert_eq!(blocks.len(), 3);
        assert!(blocks.iter().all(|m| m.frobenius_sq() <= int(1)));
    }
}
