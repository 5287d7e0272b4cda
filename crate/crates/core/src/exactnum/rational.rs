//! Exact rationals and the helpers the rest of the crate leans on: "p/q"
//! text encoding, p-adic valuations, dyadic rounding and certified roots.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`; panics on `d == 0` like any literal division by zero would.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_bigint(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Canonical text form. Always `p/q`, even for integers.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(ExactError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Serde adapter storing a rational as its `p/q` string.
pub mod serde_q {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_q_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(x)`; `None` for zero.
pub fn valuation(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

/// `base^k` for any integer `k`.
pub fn pow_int(base: u64, k: i64) -> Rational {
    let b = BigInt::from(base);
    let m = num_traits::pow(b, k.unsigned_abs() as usize);
    if k >= 0 {
        Rational::from_integer(m)
    } else {
        Rational::new(BigInt::one(), m)
    }
}

pub fn pow2(k: i64) -> Rational {
    pow_int(2, k)
}

pub fn rpow(x: &Rational, k: u32) -> Rational {
    num_traits::pow(x.clone(), k as usize)
}

/// `floor(log2 |x|)` for nonzero `x`.
pub fn floor_log2(x: &Rational) -> i64 {
    debug_assert!(!x.is_zero());
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= |x| < 2^(e+1) after at most one correction
    if pow2(e) > x.abs() {
        e -= 1;
    }
    e
}

/// Nearest multiple of `2^-bits` (ties toward +inf).
pub fn round_dyadic(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = x * Rational::from_integer(scale.clone());
    let r = (scaled + rat(1, 2)).floor();
    Rational::new(r.to_integer(), scale)
}

/// Round keeping about `bits` significant bits.
pub fn round_relative(x: &Rational, bits: u32) -> Rational {
    if x.is_zero() {
        return x.clone();
    }
    let e = floor_log2(x);
    let shift = bits as i64 - e;
    let s = pow2(shift);
    let r = (x * &s + rat(1, 2)).floor();
    r / s
}

/// A low-height rational `y` with `|x - y|_p <= |x|_p * p^-digits`.
pub fn round_padic(x: &Rational, p: u64, digits: u32) -> Rational {
    let Some(v) = valuation(x, p) else {
        return x.clone();
    };
    let unit = x / pow_int(p, v);
    let modulus = num_traits::pow(BigInt::from(p), digits as usize);
    let num = unit.numer().mod_floor(&modulus);
    let den = unit.denom().mod_floor(&modulus);
    let inv = mod_inverse(&den, &modulus).expect("unit denominator is invertible mod p^k");
    let mut r = (num * inv).mod_floor(&modulus);
    // symmetric residue keeps archimedean size down
    if &r * 2 > modulus {
        r -= &modulus;
    }
    Rational::from_integer(r) * pow_int(p, v)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Certified bounds `lo <= sqrt(x) <= hi` with `hi - lo <= 2^-bits / denom(x)`;
/// both equal when `x` is a perfect square.
pub fn sqrt_bounds(x: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    // sqrt(p/q) = sqrt(p q) / q
    let pq = (x.numer() * x.denom()).magnitude().clone();
    let scaled: BigUint = pq << (2 * bits);
    let s = scaled.sqrt();
    let denom = BigInt::from(x.denom().magnitude().clone()) << bits;
    let lo = Rational::new(BigInt::from(s.clone()), denom.clone());
    if &s * &s == scaled {
        return (lo.clone(), lo);
    }
    let hi = Rational::new(BigInt::from(s + 1u32), denom);
    (lo, hi)
}

pub fn sqrt_upper(x: &Rational, bits: u32) -> Rational {
    sqrt_bounds(x, bits).1
}

pub fn sqrt_lower(x: &Rational, bits: u32) -> Rational {
    sqrt_bounds(x, bits).0
}

/// Largest `k / 2^frac_bits` whose `n`-th power does not exceed `x`.
pub fn nth_root_floor(x: &Rational, n: u32, frac_bits: u32) -> Rational {
    assert!(n >= 1 && !x.is_negative());
    // k^n <= x * 2^(n f)  <=>  k <= (num * 2^(n f) / den)^(1/n); use floor of the quotient.
    let scaled = (x.numer().magnitude() << (n as u64 * frac_bits as u64)) / x.denom().magnitude();
    let k = scaled.nth_root(n);
    Rational::new(BigInt::from(k), BigInt::one() << frac_bits)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // huge or tiny: go through log2
        let e = floor_log2(x);
        let m = (x / pow2(e)).to_f64().unwrap_or(1.0);
        m * 2f64.powi(e.clamp(-1100, 1100) as i32)
    })
}

/// Exact conversion of a finite `f64`.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn max_ref<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn sign_of(x: &Rational) -> Sign {
    x.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5/1");
        assert_eq!(parse_rational("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rat(3, 2), 2), Some(-1));
        assert_eq!(valuation(&rat(12, 5), 2), Some(2));
        assert_eq!(valuation(&int(0), 3), None);
    }

    #[test]
    fn roots_are_certified() {
        let (lo, hi) = sqrt_bounds(&int(2), 40);
        assert!(&lo * &lo <= int(2) && &hi * &hi >= int(2));
        assert!(&hi - &lo <= pow2(-40));
        let (lo, hi) = sqrt_bounds(&rat(9, 4), 10);
        assert_eq!(lo, rat(3, 2));
        assert_eq!(hi, rat(3, 2));
        let q = nth_root_floor(&int(2), 3, 20);
        assert!(rpow(&q, 3) <= int(2));
        assert!(rpow(&(q + pow2(-20)), 3) > int(2));
    }

    #[test]
    fn padic_rounding_is_close() {
        let x = rat(7, 3) * pow2(-2);
        let y = round_padic(&x, 2, 30);
        let d = &x - &y;
        assert!(d.is_zero() || valuation(&d, 2).unwrap() >= 28);
        assert!(y.denom() <= &BigInt::from(4));
    }

    #[test]
    fn log2_floor() {
        assert_eq!(floor_log2(&int(1)), 0);
        assert_eq!(floor_log2(&int(8)), 3);
        assert_eq!(floor_log2(&rat(7, 8)), -1);
        assert_eq!(floor_log2(&rat(-1, 1024)), -10);
    }
}
