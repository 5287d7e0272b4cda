//! Seeded random inputs shared by the integration tests.
#![allow(dead_code)]

use std::path::Path;

use pongcert_cli::GeneratorFile;
use pongcert_core::cayley::algebra_dimension;
use pongcert_core::exactnum::rational::{int, pow2};
use pongcert_core::exactnum::{s_support, Matrix};
use pongcert_core::spectra::l1_gap_report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sanov() -> Vec<Matrix> {
    vec![Matrix::from_i64(&[&[1, 2], &[0, 1]]), Matrix::from_i64(&[&[1, 0], &[2, 1]])]
}

pub fn heisenberg() -> Vec<Matrix> {
    vec![
        Matrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
        Matrix::from_i64(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
    ]
}

/// `I + k E_ij` with `i != j` and `k` in `{-2, -1, 1, 2}`.
pub fn elementary(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let mut m = Matrix::identity(n);
    m[(i, j)] = int([-2, -1, 1, 2][rng.gen_range(0..4)]);
    m
}

pub fn random_sl(n: usize, len: usize, rng: &mut ChaCha8Rng) -> Matrix {
    (0..len).fold(Matrix::identity(n), |acc, _| &acc * &elementary(n, rng))
}

pub fn random_int_matrix(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> Matrix {
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Matrix::from_i64(&refs)
}

/// A pair with a proximal first generator that generates an irreducible
/// algebra: `diag(2^k, 2^-k) (I + x E_12)` with an `SL_2(Z)` partner, or
/// two random `SL_3(Z)` words.
pub fn hyperbolic_pair(dyadic: bool, rng: &mut ChaCha8Rng) -> Vec<Matrix> {
    loop {
        let (a, b) = if dyadic {
            let k = rng.gen_range(1..=3);
            let mut u = Matrix::identity(2);
            u[(0, 1)] = int(rng.gen_range(-2..=2));
            (&Matrix::diag(&[pow2(k), pow2(-k)]) * &u, random_sl(2, 4, rng))
        } else {
            (random_sl(3, 5, rng), random_sl(3, 5, rng))
        };
        let n = a.dim();
        if algebra_dimension(&a, &b) != n * n {
            continue;
        }
        let mats = vec![a, b];
        let s = s_support(&mats).expect("rational entries");
        let proximal = l1_gap_report(&mats[0], &s).map(|g| g.l1_cells().next().is_some()).unwrap_or(false);
        if proximal {
            return mats;
        }
    }
}

pub fn write_generators(dir: &Path, name: &str, mats: &[Matrix]) -> std::path::PathBuf {
    let path = dir.join(name);
    let body = serde_json::to_string_pretty(&GeneratorFile::from_matrices(mats)).unwrap();
    std::fs::write(&path, body).unwrap();
    path
}
