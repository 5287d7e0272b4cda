//! Ping-pong on projective space: cone checks, the exponent search, the
//! brute-force freeness oracle and self-contained certificates.

pub mod certificate;
pub mod conditions;
pub mod cone;
pub mod oracle;

use thiserror::Error;

use crate::cayley::growth::OMEGA_FRAC_BITS;
use crate::exactnum::rational::{int, nth_root_floor, pow_int};
use crate::exactnum::{ExactError, Matrix, Place, Rational};
use crate::spectra::SpectraError;

pub use certificate::{verify_certificate, IssueRequest, PingPongCertificate, VerifyReport};
pub use conditions::{check_l_conditions, l_conditions_from, Constants, LConditions};
pub use cone::{maps_into, maps_off, verify_cone_inclusions, ConeChecks};
pub use oracle::{freeness_oracle, OracleReport};

pub const DEFAULT_EXPONENT_CAP: u32 = 64;
pub const RADIUS_STEPS: u32 = 16;

#[derive(Debug, Error)]
pub enum PingPongError {
    #[error("gap condition undecided at {0}")]
    Inconclusive(Place),
    #[error("oracle depth {depth} exceeds the budget of {budget} words")]
    OracleBudget { depth: usize, budget: u64 },
    #[error("no exponent up to {0} satisfies the cone checks")]
    ExponentSearchExhausted(u32),
    #[error("basis is singular or of the wrong size")]
    BadBasis,
    #[error("cone checks failed: {0:?}")]
    ChecksFailed(ConeChecks),
    #[error("oracle found a relation: {:?}", .0.collision)]
    OracleRefuted(OracleReport),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Candidate cone radii at `place`, largest first: `{1, 1/2, 1/4} b^-k`
/// for `k <= steps`, where `b` is the scaling base of the place.
pub fn radius_grid(place: Place, steps: u32) -> Vec<Rational> {
    let b = place.scaling_base();
    let mut out: Vec<Rational> = (0..=steps as i64)
        .flat_map(|k| {
            let s = pow_int(b, -k);
            [int(1), Rational::new(1.into(), 2.into()), Rational::new(1.into(), 4.into())]
                .into_iter()
                .map(move |c| c * &s)
        })
        .collect();
    out.sort_by(|x, y| y.cmp(x));
    out.dedup();
    out
}

/// Least `e <= cap`, then largest radius, for which the three cone checks
/// hold for `A`, `B` written in a basis adapted to the attracting line of `A`.
pub fn derive_exponent(a: &Matrix, b: &Matrix, place: Place, cap: u32, steps: u32) -> Result<(u32, Rational), PingPongError> {
    let radii: Vec<Rational> = radius_grid(place, steps).into_iter().filter(|r| maps_off(b, r, place)).collect();
    if radii.is_empty() {
        return Err(PingPongError::ExponentSearchExhausted(cap));
    }
    let mut ae = Matrix::identity(a.dim());
    for e in 1..=cap {
        ae = &ae * a;
        let m1 = &ae * b;
        let m2 = &ae * &m1;
        if let Some(r) = radii.iter().find(|r| maps_into(&m1, r, place) && maps_into(&m2, r, place)) {
            return Ok((e, r.clone()));
        }
    }
    Err(PingPongError::ExponentSearchExhausted(cap))
}

/// Lower bound on the exponential growth rate implied by a free semigroup
/// on two words of lengths `len_ab`, `len_a2b`: `2^(1/l)` with `l` the
/// longer length, rounded down to a dyadic.
pub fn certificate_to_growth_bound(len_ab: usize, len_a2b: usize) -> Rational {
    let l = len_ab.max(len_a2b).max(1);
    nth_root_floor(&int(2), l as u32, OMEGA_FRAC_BITS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{rat, to_f64};

    #[test]
    fn diagonal_example_exponent() {
        let a = Matrix::diag(&[int(4), rat(1, 4)]);
        let b = Matrix::from_i64(&[&[1, 1], &[1, 2]]);
        let (e, r) = derive_exponent(&a, &b, Place::Archimedean, 16, RADIUS_STEPS).unwrap();
        assert_eq!(e, 1);
        assert!(verify_cone_inclusions(&a, &b, e, &r, Place::Archimedean).all());
    }

    #[test]
    fn commuting_pair_never_pongs() {
        let a = Matrix::diag(&[int(4), rat(1, 4)]);
        assert!(derive_exponent(&a, &a, Place::Archimedean, 8, RADIUS_STEPS).is_err());
    }

    #[test]
    fn growth_bound_from_lengths() {
        let q = certificate_to_growth_bound(3, 5);
        assert!((to_f64(&q) - 2f64.powf(0.2)).abs() < 1e-5);
        assert!(num_traits::pow(q, 5) <= int(2));
    }

    #[test]
    fn radii_descend() {
        let g = radius_grid(Place::Finite(3), RADIUS_STEPS);
        assert_eq!(g[0], int(1));
        assert!(g.windows(2).all(|w| w[0] > w[1]));
        assert!(g.iter().all(num_traits::Signed::is_positive));
    }
}
