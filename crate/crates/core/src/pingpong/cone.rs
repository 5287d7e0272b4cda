//! Cone bounds. `U_r = {[x] : max_{i>=2} |x_i| <= r |x_1|}` around `[e1]`;
//! for `x` in `U_r` scaled to `x_1 = 1`, row bounds of `M x` follow from the
//! triangle inequality (or the ultrametric one at a finite place).

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::{Matrix, Place, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeChecks {
    /// `B U ∩ U = ∅`
    pub disjoint: bool,
    /// `A^e B U ⊆ U`
    pub inclusion_ab: bool,
    /// `A^{2e} B U ⊆ U`
    pub inclusion_a2b: bool,
}

impl ConeChecks {
    pub fn all(&self) -> bool {
        self.disjoint && self.inclusion_ab && self.inclusion_a2b
    }
}

/// Upper and lower bounds of `|(M x)_i|_v` over the cone.
pub(crate) fn row_bounds(m: &Matrix, r: &Rational, place: Place) -> (Vec<Rational>, Vec<Rational>) {
    let n = m.dim();
    let mut up = Vec::with_capacity(n);
    let mut low = Vec::with_capacity(n);
    for i in 0..n {
        let head = place.abs(&m[(i, 0)]);
        match place {
            Place::Archimedean => {
                let tail: Rational = (1..n).map(|j| m[(i, j)].abs()).sum::<Rational>() * r;
                up.push(&head + &tail);
                low.push((&head - &tail).max(Rational::zero()));
            }
            Place::Finite(_) => {
                let tail = (1..n)
                    .map(|j| place.abs(&m[(i, j)]))
                    .max()
                    .unwrap_or_else(Rational::zero)
                    * r;
                if head > tail {
                    up.push(head.clone());
                    low.push(head);
                } else {
                    up.push(tail);
                    low.push(Rational::zero());
                }
            }
        }
    }
    (up, low)
}

/// `M U_r ⊆ U_r`: row 1 stays away from zero and dominates the rest.
pub fn maps_into(m: &Matrix, r: &Rational, place: Place) -> bool {
    let (up, low) = row_bounds(m, r, place);
    if low[0].is_zero() {
        return false;
    }
    let bound = r * &low[0];
    up.iter().skip(1).all(|u| *u <= bound)
}

/// `M U_r ∩ U_r = ∅`: some row `i >= 2` always exceeds `r` times row 1.
pub fn maps_off(m: &Matrix, r: &Rational, place: Place) -> bool {
    let (up, low) = row_bounds(m, r, place);
    let bound = r * &up[0];
    low.iter().skip(1).any(|l| *l > bound)
}

/// Checks the three ping-pong conditions for `A`, `B` already written in a
/// basis where `A` fixes the line of `e1` up to small error.
pub fn verify_cone_inclusions(a: &Matrix, b: &Matrix, e: u32, r: &Rational, place: Place) -> ConeChecks {
    if !r.is_positive() {
        return ConeChecks {
            disjoint: false,
            inclusion_ab: false,
            inclusion_a2b: false,
        };
    }
    let ae = a.pow(e as u64);
    let m1 = &ae * b;
    let m2 = &ae * &m1;
    ConeChecks {
        disjoint: maps_off(b, r, place),
        inclusion_ab: maps_into(&m1, r, place),
        inclusion_a2b: maps_into(&m2, r, place),
    }
}
