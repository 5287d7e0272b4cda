//! Exact arithmetic substrate: rationals, places and their absolute values,
//! dense matrices, max-entry norms and group words.

pub mod factor;
pub mod interval;
pub mod matrix;
pub mod place;
pub mod rational;
pub mod word;

use thiserror::Error;

pub use interval::RationalInterval;
pub use matrix::{matrix_norm, Matrix, NormProfile};
pub use place::{abs_value, Place, PlaceSet};
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use word::{evaluate_word, GeneratorSet, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid place set: {0}")]
    InvalidPlaceSet(String),
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("generator index {index} out of range (have {count})")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("generator {0} is singular")]
    Singular(usize),
    #[error("no generators")]
    NoGenerators,
    #[error("prime divisor {0} does not fit in 64 bits")]
    PrimeTooLarge(String),
}

/// Smallest place set making every generator (and inverse) an S-integer
/// matrix: the archimedean place plus every prime dividing a denominator.
pub fn s_support(gens: &[Matrix]) -> Result<PlaceSet, ExactError> {
    use num_bigint::BigUint;
    use num_integer::Integer;
    use num_traits::One;

    let mut lcm = BigUint::one();
    for (i, g) in gens.iter().enumerate() {
        let inv = g.inverse().ok_or(ExactError::Singular(i))?;
        for x in g.entries().iter().chain(inv.entries()) {
            lcm = lcm.lcm(x.denom().magnitude());
        }
    }
    let primes = factor::prime_divisors(&lcm);
    let mut small = Vec::with_capacity(primes.len());
    for p in primes {
        use num_traits::ToPrimitive;
        small.push(
            p.to_u64()
                .ok_or_else(|| ExactError::PrimeTooLarge(p.to_string()))?,
        );
    }
    PlaceSet::with_primes(small)
}

#[cfg(test)]
mod tests {
    use super::rational::{int, rat};
    use super::*;

    #[test]
    fn support_examples() {
        let sanov = vec![
            Matrix::from_i64(&[&[1, 2], &[0, 1]]),
            Matrix::from_i64(&[&[1, 0], &[2, 1]]),
        ];
        assert_eq!(s_support(&sanov).unwrap(), PlaceSet::archimedean_only());
        let d = Matrix::diag(&[int(2), rat(1, 2)]);
        assert_eq!(s_support(&[d]).unwrap(), PlaceSet::with_primes([2]).unwrap());
        let d6 = Matrix::diag(&[rat(1, 6), int(6)]);
        assert_eq!(
            s_support(&[d6]).unwrap(),
            PlaceSet::with_primes([2, 3]).unwrap()
        );
    }
}
