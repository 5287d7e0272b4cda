use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{serde_q, Rational};

/// Closed interval `[lo, hi]` with rational endpoints. Arithmetic is exact
/// on the endpoints, so every operation is an enclosure.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalInterval {
    #[serde(with = "serde_q")]
    pub lo: Rational,
    #[serde(with = "serde_q")]
    pub hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval");
        RationalInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RationalInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        RationalInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn abs(&self) -> Self {
        if self.lo >= Rational::zero() {
            self.clone()
        } else if self.hi <= Rational::zero() {
            -self
        } else {
            RationalInterval {
                lo: Rational::zero(),
                hi: self.lo.abs().max(self.hi.abs()),
            }
        }
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Self) -> bool {
        self.hi <= other.lo
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }
}

impl Add for &RationalInterval {
    type Output = RationalInterval;
    fn add(self, rhs: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &RationalInterval {
    type Output = RationalInterval;
    fn sub(self, rhs: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &RationalInterval {
    type Output = RationalInterval;
    fn mul(self, rhs: &RationalInterval) -> RationalInterval {
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        RationalInterval {
            lo: c.iter().min().cloned().unwrap(),
            hi: c.iter().max().cloned().unwrap(),
        }
    }
}

impl Neg for &RationalInterval {
    type Output = RationalInterval;
    fn neg(self) -> RationalInterval {
        RationalInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.6}, {:.6}]",
            super::rational::to_f64(&self.lo),
            super::rational::to_f64(&self.hi)
        )
    }
}
