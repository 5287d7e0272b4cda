//! Integer factorisation for denominators: trial division, then
//! Miller-Rabin and Pollard-Brent on what is left.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigUint::from(n))
}

/// Deterministic below 3.3e24; probabilistic with fixed bases above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in SMALL_PRIMES {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint, seed: u64) -> Option<BigUint> {
    let c = BigUint::from(seed);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32 + seed as u32);
    let m = 64u32;
    let mut g = BigUint::one();
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min((r - k) as u32) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m as u64;
        }
        r *= 2;
        if r > 1 << 24 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn split(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    for seed in 1..64u64 {
        if let Some(d) = pollard_brent(&n, seed) {
            let other = &n / &d;
            split(d, out);
            split(other, out);
            return;
        }
    }
    // unreachable for composite n in practice
    out.push(n);
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: &BigUint) -> Vec<BigUint> {
    let mut n = n.clone();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while p < 10_000 {
        let bp = BigUint::from(p);
        if (&n % &bp).is_zero() {
            out.push(bp.clone());
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        if n.is_one() {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        split(n, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

pub fn prime_divisors_u64(n: &BigUint) -> Option<Vec<u64>> {
    prime_divisors(n).iter().map(|p| p.to_u64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorisations() {
        let f = |n: u64| prime_divisors_u64(&BigUint::from(n)).unwrap();
        assert_eq!(f(1), Vec::<u64>::new());
        assert_eq!(f(6), vec![2, 3]);
        assert_eq!(f(1024), vec![2]);
        assert_eq!(f(2 * 3 * 3 * 10007), vec![2, 3, 10007]);
        // two primes just above the trial-division cutoff
        assert_eq!(f(1_000_003 * 999_983), vec![999_983, 1_000_003]);
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561));
    }
}
