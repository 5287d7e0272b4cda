use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::PingPongError;
use crate::exactnum::rational::{int, serde_q};
use crate::exactnum::{Matrix, Place, Rational};
use crate::spectra::{self, gap, ModulusValue, GAP_PRECISIONS};

/// Constants of the relations `1/|B11| <= c2 ||A||^d2` and
/// `||B|| <= c3 ||A||^d3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(with = "serde_q")]
    pub c2: Rational,
    #[serde(with = "serde_q")]
    pub d2: Rational,
    #[serde(with = "serde_q")]
    pub c3: Rational,
    #[serde(with = "serde_q")]
    pub d3: Rational,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            c2: int(1),
            d2: int(1),
            c3: int(1),
            d3: int(2),
        }
    }
}

/// `x <= c y^d` for `x >= 0`, `c, y > 0` and rational `d = a/b`, checked as
/// `(x/c)^b <= y^a`.
pub fn le_power(x: &Rational, c: &Rational, y: &Rational, d: &Rational) -> bool {
    let a = d.numer().to_i64().expect("exponent numerator fits");
    let b = d.denom().to_u64().expect("exponent denominator fits") as usize;
    let lhs = num_traits::pow(x / c, b);
    let rhs = if a >= 0 {
        num_traits::pow(y.clone(), a as usize)
    } else {
        Rational::one() / num_traits::pow(y.clone(), a.unsigned_abs() as usize)
    };
    lhs <= rhs
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LConditions {
    pub place: Place,
    /// Eigenvalue moduli of `A` at `place`, largest first.
    pub a_moduli: Vec<ModulusValue>,
    pub constants: Constants,
    pub l1: bool,
    pub l2: bool,
    pub l3: bool,
    #[serde(with = "serde_q")]
    pub b11_lower: Rational,
    #[serde(with = "serde_q")]
    pub b_norm: Rational,
    #[serde(with = "serde_q")]
    pub a_norm: Rational,
}

impl LConditions {
    pub fn all(&self) -> bool {
        self.l1 && self.l2 && self.l3
    }
}

/// Checks the three conditions for `A` (diagonal up to a small error in the
/// current basis) and `B` at `place`. The gap condition only depends on the
/// spectrum of `A`; archimedean enclosures are refined until it is decided.
pub fn check_l_conditions(a: &Matrix, b: &Matrix, place: Place, k: &Constants) -> Result<LConditions, PingPongError> {
    let mut decided = None;
    for &prec in &GAP_PRECISIONS {
        let items = match spectra::items_at(a, place, prec) {
            Ok(items) => items,
            Err(spectra::SpectraError::PrecisionExhausted) => break,
            Err(e) => return Err(e.into()),
        };
        let cell = gap::decide(&gap::wedge_moduli(&items, 1));
        if let Some(l1) = cell.l1 {
            let mut moduli: Vec<ModulusValue> = items.into_iter().map(|i| i.value).collect();
            sort_desc(&mut moduli);
            decided = Some((l1, moduli));
            break;
        }
        if !place.is_archimedean() {
            break;
        }
    }
    let (l1, a_moduli) = decided.ok_or(PingPongError::Inconclusive(place))?;
    Ok(l_conditions_from(place, l1, a_moduli, a, b, k))
}

/// The three conditions when the gap verdict and the moduli of `A` are
/// already known, e.g. from the spectrum of a matrix `A` is a wedge power of.
pub fn l_conditions_from(place: Place, l1: bool, a_moduli: Vec<ModulusValue>, a: &Matrix, b: &Matrix, k: &Constants) -> LConditions {
    let a_norm = a.norm_at(place);
    let b_norm = b.norm_at(place);
    let b11 = place.abs(&b[(0, 0)]);
    let leaves_line = (1..b.dim()).any(|i| !b[(i, 0)].is_zero());
    let l2 = !b11.is_zero() && leaves_line && le_power(&(Rational::one() / &b11), &k.c2, &a_norm, &k.d2);
    let l3 = le_power(&b_norm, &k.c3, &a_norm, &k.d3);
    LConditions {
        place,
        a_moduli,
        constants: k.clone(),
        l1,
        l2,
        l3,
        b11_lower: b11,
        b_norm,
        a_norm,
    }
}

pub(crate) fn sort_desc(v: &mut [ModulusValue]) {
    v.sort_by(|x, y| match (x, y) {
        (ModulusValue::Archimedean(a), ModulusValue::Archimedean(b)) => b.midpoint().cmp(&a.midpoint()),
        (ModulusValue::Padic(a), ModulusValue::Padic(b)) => b.cmp(a),
        _ => std::cmp::Ordering::Equal,
    });
}
