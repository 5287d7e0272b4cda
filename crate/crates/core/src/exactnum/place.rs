use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::factor::is_prime_u64;
use super::rational::{pow_int, valuation, Rational};
use super::ExactError;

/// A place of Q: the archimedean absolute value or a p-adic one.
///
/// Ordering puts the archimedean place first, then primes ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Archimedean,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Self, ExactError> {
        if is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(ExactError::NotPrime(p))
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Archimedean => None,
            Place::Finite(p) => Some(*p),
        }
    }

    /// `|x|_v`, exact.
    pub fn abs(&self, x: &Rational) -> Rational {
        abs_value(x, *self)
    }

    /// The scale used when balancing by centraliser conjugations: a power
    /// of this base moves `|.|_v` and nothing else.
    pub fn scaling_base(&self) -> u64 {
        match self {
            Place::Archimedean => 2,
            Place::Finite(p) => *p,
        }
    }
}

/// `|x|_v`. For a finite prime, `|a/b|_p = p^(v_p(b) - v_p(a))`.
pub fn abs_value(x: &Rational, v: Place) -> Rational {
    match v {
        Place::Archimedean => x.abs(),
        Place::Finite(p) => match valuation(x, p) {
            None => Rational::zero(),
            Some(k) => pow_int(p, -k),
        },
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Place::Archimedean),
            t => {
                let p: u64 = t.parse().map_err(|_| ExactError::Parse(s.to_string()))?;
                Place::finite(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An ordered set of places that always contains the archimedean one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Place>", into = "Vec<Place>")]
pub struct PlaceSet(Vec<Place>);

impl PlaceSet {
    pub fn new(places: Vec<Place>) -> Result<Self, ExactError> {
        let mut sorted = places.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(ExactError::InvalidPlaceSet("duplicate place".into()));
        }
        if sorted.first() != Some(&Place::Archimedean) {
            return Err(ExactError::InvalidPlaceSet(
                "the archimedean place is required".into(),
            ));
        }
        Ok(PlaceSet(sorted))
    }

    pub fn archimedean_only() -> Self {
        PlaceSet(vec![Place::Archimedean])
    }

    /// `{inf}` plus the given primes (deduplicated).
    pub fn with_primes(primes: impl IntoIterator<Item = u64>) -> Result<Self, ExactError> {
        let mut v = vec![Place::Archimedean];
        for p in primes {
            let pl = Place::finite(p)?;
            if !v.contains(&pl) {
                v.push(pl);
            }
        }
        PlaceSet::new(v)
    }

    pub fn places(&self) -> &[Place] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.0.iter()
    }

    pub fn contains(&self, p: &Place) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().filter_map(|p| p.prime())
    }
}

impl TryFrom<Vec<Place>> for PlaceSet {
    type Error = ExactError;
    fn try_from(v: Vec<Place>) -> Result<Self, Self::Error> {
        PlaceSet::new(v)
    }
}

impl From<PlaceSet> for Vec<Place> {
    fn from(s: PlaceSet) -> Self {
        s.0
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    #[test]
    fn abs_value_examples() {
        assert_eq!(abs_value(&rat(3, 2), Place::Finite(2)), int(2));
        assert_eq!(abs_value(&int(0), Place::Archimedean), int(0));
        assert_eq!(abs_value(&rat(-5, 4), Place::Archimedean), rat(5, 4));
        assert_eq!(abs_value(&int(0), Place::Finite(5)), int(0));
        assert_eq!(abs_value(&rat(50, 3), Place::Finite(5)), rat(1, 25));
    }

    #[test]
    fn place_set_invariants() {
        assert!(PlaceSet::new(vec![Place::Finite(2)]).is_err());
        assert!(PlaceSet::new(vec![Place::Archimedean, Place::Archimedean]).is_err());
        let s = PlaceSet::with_primes([3, 2, 3]).unwrap();
        assert_eq!(
            s.places(),
            &[Place::Archimedean, Place::Finite(2), Place::Finite(3)]
        );
        assert!(Place::finite(4).is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Archimedean);
        assert_eq!("7".parse::<Place>().unwrap(), Place::Finite(7));
        assert!("9".parse::<Place>().is_err());
        assert_eq!(Place::Finite(3).to_string(), "3");
    }
}
