use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::SpectraError;
use crate::exactnum::rational::{pow_int, serde_q, valuation};
use crate::exactnum::Rational;

/// `|lambda|_p = p^(-valuation)`. Valuations of eigenvalues can be
/// fractional (ramified roots), so the modulus itself need not be rational.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicAbs {
    pub prime: u64,
    #[serde(with = "serde_q")]
    pub valuation: Rational,
}

impl PadicAbs {
    pub fn new(prime: u64, valuation: Rational) -> Self {
        PadicAbs { prime, valuation }
    }

    pub fn one(prime: u64) -> Self {
        PadicAbs::new(prime, Rational::zero())
    }

    /// The exact value when the valuation is an integer.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.valuation.is_integer() {
            Some(pow_int(self.prime, -self.valuation.to_integer().to_i64()?))
        } else {
            None
        }
    }

    pub fn mul(&self, other: &PadicAbs) -> PadicAbs {
        debug_assert_eq!(self.prime, other.prime);
        PadicAbs::new(self.prime, &self.valuation + &other.valuation)
    }

    /// `self >= c` for a positive rational `c`.
    pub fn at_least(&self, c: &Rational) -> bool {
        // p^(a/b) >= c  <=>  p^a >= c^b  with  a/b = -valuation, b > 0
        let e = -self.valuation.clone();
        let a = e.numer().to_i64().expect("valuation numerator fits");
        let b = e.denom().to_u32().expect("valuation denominator fits");
        pow_int(self.prime, a) >= num_traits::pow(c.clone(), b as usize)
    }

    /// `self >= c * other`.
    pub fn at_least_times(&self, c: &Rational, other: &PadicAbs) -> bool {
        PadicAbs::new(self.prime, &self.valuation - &other.valuation).at_least(c)
    }

    /// A rational upper bound, `p^ceil(-v)`.
    pub fn upper_bound(&self) -> Rational {
        let e = (-self.valuation.clone()).ceil().to_integer().to_i64().unwrap_or(i64::MAX);
        pow_int(self.prime, e)
    }

    pub fn to_f64(&self) -> f64 {
        (self.prime as f64).powf(-self.valuation.to_f64().unwrap_or(0.0))
    }
}

impl Ord for PadicAbs {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger absolute value means smaller valuation
        other.valuation.cmp(&self.valuation)
    }
}

impl PartialOrd for PadicAbs {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PadicAbs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^({})", self.prime, -self.valuation.clone())
    }
}

/// Root valuations of `f` at `p`, one per root with multiplicity, ascending
/// (largest absolute value first).
pub fn newton_polygon(f: &Poly, p: u64) -> Result<Vec<Rational>, SpectraError> {
    if f.is_zero() || f.degree() == 0 {
        return Ok(vec![]);
    }
    if f.coeff(0).is_zero() {
        return Err(SpectraError::ZeroEigenvalue);
    }
    let pts: Vec<(i64, Rational)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| valuation(c, p).map(|v| (i as i64, Rational::from_integer(v.into()))))
        .collect();
    // lower hull, monotone chain
    let mut hull: Vec<(i64, Rational)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let lhs = (y2 - y1) * Rational::from_integer((pt.0 - x1).into());
            let rhs = (&pt.1 - y1) * Rational::from_integer((x2 - x1).into());
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::with_capacity(f.degree());
    for w in hull.windows(2) {
        let (x1, y1) = &w[0];
        let (x2, y2) = &w[1];
        let len = x2 - x1;
        let slope = (y2 - y1) / Rational::from_integer(len.into());
        for _ in 0..len {
            out.push(-slope.clone());
        }
    }
    // slopes increase along the hull, so valuations decrease; flip
    out.reverse();
    Ok(out)
}

/// The `n` values `|lambda_i|_p`, largest first.
pub fn padic_abs_of_roots(f: &Poly, p: u64) -> Result<Vec<PadicAbs>, SpectraError> {
    let lc = f.leading();
    if lc.is_zero() {
        return Ok(vec![]);
    }
    let monic = if lc.is_one() { f.clone() } else { f.monic() };
    Ok(newton_polygon(&monic, p)?
        .into_iter()
        .map(|v| PadicAbs::new(p, v))
        .collect())
}
