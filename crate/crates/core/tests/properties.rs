use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use pongcert_core::cayley::enumerate_ball;
use pongcert_core::exactnum::rational::{int, nth_root_floor, pow2, rat, rpow};
use pongcert_core::exactnum::{Matrix, Place, PlaceSet, Rational};
use pongcert_core::pingpong::certificate_to_growth_bound;
use pongcert_core::spectra::{archimedean_moduli, char_poly, check_separation, newton_polygon_moduli, wedge_power};
use pongcert_core::wordforge::{amplify_entry, build_almost_algebra};

fn matrix(n: usize, bound: i64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-bound..=bound, n * n).prop_map(move |v| {
        let rows: Vec<&[i64]> = v.chunks(n).collect();
        Matrix::from_i64(&rows)
    })
}

/// Words in the elementary matrices `I +- E_ij`, so the result lies in
/// `SL_n(Z)`.
fn sl_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((0..n, 0..n - 1, any::<bool>()), 1..8).prop_map(move |steps| {
        steps.into_iter().fold(Matrix::identity(n), |acc, (i, j, neg)| {
            let j = if j >= i { j + 1 } else { j };
            let mut e = Matrix::identity(n);
            e[(i, j)] = int(if neg { -1 } else { 1 });
            &acc * &e
        })
    })
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..5000, 1i64..5000, any::<bool>()).prop_map(|(p, q, neg)| rat(if neg { -p } else { p }, q))
}

fn primes_of(x: &Rational) -> Vec<u64> {
    let mut out = Vec::new();
    for n in [x.numer().magnitude().clone(), x.denom().magnitude().clone()] {
        let mut n: u64 = n.try_into().unwrap();
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                out.push(p);
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            out.push(n);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_formula(x in nonzero_rational()) {
        let mut prod = Place::Archimedean.abs(&x);
        for p in primes_of(&x) {
            prod *= Place::finite(p).unwrap().abs(&x);
        }
        prop_assert_eq!(prod, Rational::one());
    }

    #[test]
    fn wedge_is_multiplicative((a, b) in (2usize..=4).prop_flat_map(|n| (matrix(n, 3), matrix(n, 3)))) {
        let n = a.dim();
        for m in 1..=n {
            let lhs = wedge_power(&(&a * &b), m).unwrap();
            let rhs = &wedge_power(&a, m).unwrap() * &wedge_power(&b, m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        // top wedge is the determinant
        prop_assert_eq!(wedge_power(&a, n).unwrap()[(0, 0)].clone(), a.determinant());
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(3, 5), b in matrix(3, 5)) {
        prop_assert_eq!((&a * &b).determinant(), a.determinant() * b.determinant());
    }

    #[test]
    fn padic_moduli_multiply_to_one(a in sl_matrix(3), k in -3i64..=3, p in prop::sample::select(vec![2u64, 3, 5])) {
        // conjugate by diag(p^k, 1, 1) to get denominators
        let d = Matrix::diag(&[pongcert_core::exactnum::rational::pow_int(p, k), int(1), int(1)]);
        let a = a.conjugate_by(&d, &d.inverse().unwrap());
        let vals = newton_polygon_moduli(&a, Place::finite(p).unwrap()).unwrap();
        prop_assert_eq!(vals.len(), 3);
        let total: Rational = vals.iter().map(|v| v.valuation.clone()).sum();
        prop_assert!(total.is_zero());
    }

    #[test]
    fn archimedean_moduli_enclose_one(a in sl_matrix(3)) {
        let m = archimedean_moduli(&a, 64).unwrap();
        let lo = m.iter().fold(Rational::one(), |acc, x| acc * &x.lo);
        let hi = m.iter().fold(Rational::one(), |acc, x| acc * &x.hi);
        prop_assert!(lo <= Rational::one() && Rational::one() <= hi);
    }

    #[test]
    fn integer_separation_at_least_one(a in sl_matrix(3)) {
        prop_assume!(char_poly(&a).poly().is_squarefree());
        for s in [PlaceSet::archimedean_only(), PlaceSet::with_primes([2, 3, 7]).unwrap()] {
            let rep = check_separation(&a, &s).unwrap();
            prop_assert!(rep.product_over_s >= Rational::one());
        }
    }

    #[test]
    fn ball_sizes_ignore_generator_order(a in sl_matrix(2), b in sl_matrix(2)) {
        let one = enumerate_ball(&[a.clone(), b.clone()], 3, 100_000).unwrap();
        let two = enumerate_ball(&[b.clone(), a.clone()], 3, 100_000).unwrap();
        let three = enumerate_ball(&[b.inverse().unwrap(), a], 3, 100_000).unwrap();
        prop_assert_eq!(one.sizes(), two.sizes());
        prop_assert_eq!(one.sizes(), three.sizes());
    }

    #[test]
    fn growth_bound_is_tight(l1 in 1usize..40, extra in 0usize..40) {
        let l2 = l1 + extra;
        let q = certificate_to_growth_bound(l1, l2);
        let l = l2 as u32;
        prop_assert!(q > Rational::one());
        prop_assert!(rpow(&q, l) <= int(2));
        prop_assert!(rpow(&(&q + pow2(-20)), l) > int(2));
        prop_assert_eq!(q, nth_root_floor(&int(2), l, 20));
    }

    #[test]
    fn amplified_entry_meets_bound(
        e in prop::sample::subsequence(vec![-3i64, -2, -1, 1, 2, 3], 2),
        small in prop::collection::vec(-1i64..=1, 9),
        big in 6i64..20,
        t in 1usize..3,
    ) {
        let e3 = -(e[0] + e[1]);
        prop_assume!(e3 != e[0] && e3 != e[1]);
        let a = Matrix::diag(&[pow2(e[0]), pow2(e[1]), pow2(e3)]);
        let rows: Vec<&[i64]> = small.chunks(3).collect();
        let mut b = Matrix::from_i64(&rows);
        b[(0, 0)] = Rational::zero();
        b[(0, t)] = int(big);
        b[(t, 0)] = int(big + 1);
        let r = amplify_entry(&a, &b, (0, 0), &rat(1, 2), Place::Archimedean).unwrap();
        prop_assert!(r.entry.abs() >= r.lower_bound);
        prop_assert!(r.lower_bound > Rational::zero());
        prop_assert!(r.word.len() <= 4);
    }

    #[test]
    fn almost_algebra_dimensions_grow(entries in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 1..3)) {
        let blocks: Vec<Matrix> = entries
            .iter()
            .map(|v| Matrix::from_i64(&[&v[..2], &v[2..]]).scale(&rat(1, 8)))
            .filter(|m| !m.is_zero())
            .collect();
        prop_assume!(!blocks.is_empty());
        let aa = build_almost_algebra(&blocks, &pow2(-10), &pow2(-4)).unwrap();
        prop_assert!(aa.dimensions.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(aa.dimension <= 4);
        prop_assert_eq!(*aa.dimensions.last().unwrap(), aa.dimension);
    }
}
