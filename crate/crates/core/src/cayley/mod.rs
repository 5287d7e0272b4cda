//! Cayley balls, growth statistics and the search for a regular generic
//! pair inside a ball of bounded radius.

mod ball;
pub mod growth;
pub mod pair;

use thiserror::Error;

use crate::exactnum::{ExactError, GeneratorSet, Matrix};
use crate::spectra::SpectraError;

pub use growth::{estimate_omega, BallSize, GrowthReport, OmegaEstimate, Verdict};
pub use pair::{algebra_dimension, find_regular_pair, has_common_eigenvector, Genericity, RegularPair};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_DEPTH: usize = 4;

#[derive(Debug, Error)]
pub enum CayleyError {
    #[error("ball enumeration exceeded {max_elements} elements")]
    BudgetExceeded {
        max_elements: u64,
        partial: Box<GrowthReport>,
    },
    #[error("no regular generic pair within radius {0}")]
    NotFound(usize),
    #[error("need at least two radii")]
    InsufficientData,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Exact sizes `|B_S(k)|` for `k <= radius`, over generators and inverses.
pub fn enumerate_ball(gens: &[Matrix], radius: usize, budget: u64) -> Result<GrowthReport, CayleyError> {
    let set = GeneratorSet::new(gens.to_vec())?;
    let sweep = ball::sweep(&set, radius, budget, false);
    let report = GrowthReport::from_sizes(&sweep.sizes);
    if sweep.exhausted_budget {
        return Err(CayleyError::BudgetExceeded {
            max_elements: budget,
            partial: Box::new(report),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{PlaceSet, Word};

    fn sanov() -> Vec<Matrix> {
        vec![
            Matrix::from_i64(&[&[1, 2], &[0, 1]]),
            Matrix::from_i64(&[&[1, 0], &[2, 1]]),
        ]
    }

    fn heisenberg() -> Vec<Matrix> {
        vec![
            Matrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
            Matrix::from_i64(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
        ]
    }

    #[test]
    fn free_group_balls() {
        let r = enumerate_ball(&sanov(), 6, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.sizes(), vec![1, 5, 17, 53, 161, 485, 1457]);
        let id = enumerate_ball(&[Matrix::identity(2)], 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(id.sizes(), vec![1; 5]);
    }

    #[test]
    fn budget_is_enforced() {
        match enumerate_ball(&sanov(), 6, 100) {
            Err(CayleyError::BudgetExceeded { partial, .. }) => {
                assert_eq!(partial.sizes(), vec![1, 5, 17, 53]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sanov_pair() {
        let gens = GeneratorSet::new(sanov()).unwrap();
        let p = find_regular_pair(&gens, 2, &PlaceSet::archimedean_only(), DEFAULT_BUDGET).unwrap();
        assert_eq!(p.matrix_a, Matrix::from_i64(&[&[5, 2], &[2, 1]]));
        assert_eq!(p.word_a, "+0 +1".parse::<Word>().unwrap());
        assert_eq!(p.matrix_b, sanov()[0]);
        assert!(p.genericity.passes(2));
    }

    #[test]
    fn no_pair_in_finite_or_unipotent_groups() {
        let rot = GeneratorSet::new(vec![Matrix::from_i64(&[&[0, -1], &[1, 0]])]).unwrap();
        assert!(matches!(
            find_regular_pair(&rot, 4, &PlaceSet::archimedean_only(), DEFAULT_BUDGET),
            Err(CayleyError::NotFound(4))
        ));
        let h = GeneratorSet::new(heisenberg()).unwrap();
        assert!(matches!(
            find_regular_pair(&h, 3, &PlaceSet::archimedean_only(), DEFAULT_BUDGET),
            Err(CayleyError::NotFound(3))
        ));
    }

    #[test]
    fn genericity_checks() {
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert!(has_common_eigenvector(&a, &a.pow(3)));
        assert!(!has_common_eigenvector(&a, &sanov()[0]));
        assert_eq!(algebra_dimension(&a, &a.pow(2)), 2);
        assert_eq!(algebra_dimension(&a, &sanov()[0]), 4);
        // upper triangular pair: common eigenvector e1
        let u = Matrix::from_i64(&[&[2, 1], &[0, 1]]);
        let v = Matrix::from_i64(&[&[1, 3], &[0, 5]]);
        assert!(has_common_eigenvector(&u, &v));
        assert_eq!(algebra_dimension(&u, &v), 3);
    }
}
