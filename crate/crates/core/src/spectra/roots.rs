//! Certified isolation of the complex roots of a squarefree rational
//! polynomial.
//!
//! Approximations `z_i` come from Durand-Kerner iteration (seeded in `f64`,
//! then refined in exact dyadic arithmetic). With Weierstrass corrections
//! `w_i = f(z_i) / prod_{j != i} (z_i - z_j)` the monic `f` is the
//! characteristic polynomial of `diag(z) - 1 w^t`, so the column Gershgorin
//! discs `D(z_i - w_i, (n-1)|w_i|)` enclose all roots, and an isolated disc
//! holds exactly one.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::SpectraError;
use crate::exactnum::rational::{floor_log2, from_f64, int, pow2, round_dyadic, sqrt_bounds, sqrt_upper, to_f64};
use crate::exactnum::{Rational, RationalInterval};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexQ {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexQ {
    pub fn real(re: Rational) -> Self {
        ComplexQ {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        ComplexQ::real(Rational::zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexQ {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexQ {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexQ {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        let d = o.norm_sq();
        let num = self.mul(&o.conj());
        ComplexQ {
            re: num.re / &d,
            im: num.im / d,
        }
    }

    pub fn conj(&self) -> Self {
        ComplexQ {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn round(&self, bits: u32) -> Self {
        ComplexQ {
            re: round_dyadic(&self.re, bits),
            im: round_dyadic(&self.im, bits),
        }
    }
}

/// One isolated root: it lies within `sqrt(radius_sq)` of `center`, and no
/// other root of the polynomial does.
#[derive(Clone, Debug)]
pub struct RootDisc {
    pub center: ComplexQ,
    pub radius_sq: Rational,
    /// Set when `center` is an exact rational root.
    pub exact: Option<Rational>,
    /// `Some(true)` certified real, `Some(false)` certified non-real.
    pub real: Option<bool>,
    /// Index of the disc holding the complex conjugate (non-real roots).
    pub conjugate: Option<usize>,
}

impl RootDisc {
    /// Certified enclosure of `|root|`.
    pub fn modulus(&self, bits: u32) -> RationalInterval {
        if let Some(x) = &self.exact {
            return RationalInterval::point(x.abs());
        }
        let (lo, hi) = sqrt_bounds(&self.center.norm_sq(), bits);
        let r = sqrt_upper(&self.radius_sq, bits);
        let lo = (lo - &r).max(Rational::zero());
        RationalInterval::new(lo, hi + r)
    }

    /// Enclosure of the real part.
    pub fn real_part(&self, bits: u32) -> RationalInterval {
        let r = sqrt_upper(&self.radius_sq, bits);
        RationalInterval::new(&self.center.re - &r, &self.center.re + &r)
    }
}

fn horner(f: &Poly, z: &ComplexQ) -> ComplexQ {
    let mut acc = ComplexQ::zero();
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z).add(&ComplexQ::real(c.clone()));
    }
    acc
}

/// `ceil(log2)` of a Fujiwara-style root bound, at least 0.
fn root_bound_log2(f: &Poly) -> i64 {
    let n = f.degree();
    let mut best = 0i64;
    for i in 1..=n {
        let c = f.coeff(n - i);
        if c.is_zero() {
            continue;
        }
        // 2 |c|^(1/i)  <=  2^(1 + ceil((log2|c| + 1) / i))
        let e = floor_log2(&c) + 1;
        let k = 1 + (e + i as i64 - 1).div_euclid(i as i64);
        best = best.max(k);
    }
    best
}

fn f64_seeds(f: &Poly, scale_log2: i64) -> Vec<(f64, f64)> {
    let n = f.degree();
    let s = pow2(scale_log2);
    let g = f.scale_roots_down(&s);
    let c: Vec<f64> = g.coeffs().iter().map(to_f64).collect();
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 0.4 + std::f64::consts::TAU * k as f64 / n as f64;
            (0.9 * t.cos(), 0.9 * t.sin())
        })
        .collect();
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cdiv = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    for _ in 0..800 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut p = (0.0, 0.0);
            for ck in c.iter().rev() {
                p = cmul(p, z[i]);
                p.0 += ck;
            }
            let mut q = (1.0, 0.0);
            for j in 0..n {
                if j != i {
                    q = cmul(q, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let w = cdiv(p, q);
            if w.0.is_finite() && w.1.is_finite() {
                z[i] = (z[i].0 - w.0, z[i].1 - w.1);
                delta = delta.max(w.0.abs() + w.1.abs());
            }
        }
        if delta < 1e-15 {
            break;
        }
    }
    let scale = 2f64.powi(scale_log2.clamp(-1000, 1000) as i32);
    z.into_iter()
        .map(|(a, b)| {
            if a.is_finite() && b.is_finite() {
                (a * scale, b * scale)
            } else {
                (scale, 0.0)
            }
        })
        .collect()
}

fn common_denominator(f: &Poly) -> Rational {
    use num_integer::Integer;
    let mut l = num_bigint::BigInt::one();
    for c in f.coeffs() {
        l = l.lcm(c.denom());
    }
    Rational::from_integer(l)
}

/// Isolates every root of a squarefree polynomial to discs of radius at
/// most `tol`.
pub fn isolate_roots(f: &Poly, tol: &Rational) -> Result<Vec<RootDisc>, SpectraError> {
    let f = f.monic();
    let n = f.degree();
    if f.is_zero() || n == 0 {
        return Ok(vec![]);
    }
    if !f.is_squarefree() {
        return Err(SpectraError::NotSquarefree);
    }
    if n == 1 {
        let r = -f.coeff(0);
        return Ok(vec![RootDisc {
            center: ComplexQ::real(r.clone()),
            radius_sq: Rational::zero(),
            exact: Some(r),
            real: Some(true),
            conjugate: None,
        }]);
    }
    let bound_log2 = root_bound_log2(&f);
    let seeds = f64_seeds(&f, bound_log2);
    let denom = common_denominator(&f);
    let tol_sq = tol * tol;
    let tol_bits = (-floor_log2(tol)).max(0) as u32;

    let mut bits = 64u32.max(tol_bits + 16) + bound_log2.max(0) as u32;
    let mut z: Vec<ComplexQ> = seeds
        .iter()
        .map(|&(a, b)| ComplexQ {
            re: round_dyadic(&from_f64(a), bits),
            im: round_dyadic(&from_f64(b), bits),
        })
        .collect();
    // keep seeds pairwise distinct
    for i in 0..n {
        for j in 0..i {
            if z[i] == z[j] {
                z[i].im += pow2(-(bits as i64) / 2) * int(i as i64 + 1);
            }
        }
    }

    const MAX_BITS: u32 = 8192;
    while bits <= MAX_BITS {
        for _ in 0..60 {
            snap_rational_roots(&f, &denom, &mut z);
            let w = corrections(&f, &z);
            if let Some(discs) = certify(&f, &z, &w, n, &tol_sq) {
                return Ok(discs);
            }
            let next: Vec<ComplexQ> = z.iter().zip(&w).map(|(zi, wi)| zi.sub(wi).round(bits)).collect();
            if next == z {
                break;
            }
            z = next;
        }
        bits *= 2;
    }
    Err(SpectraError::PrecisionExhausted)
}

fn corrections(f: &Poly, z: &[ComplexQ]) -> Vec<ComplexQ> {
    let n = z.len();
    (0..n)
        .map(|i| {
            let p = horner(f, &z[i]);
            if p.is_zero() {
                return ComplexQ::zero();
            }
            let mut q = ComplexQ::real(Rational::one());
            for j in 0..n {
                if j != i {
                    q = q.mul(&z[i].sub(&z[j]));
                }
            }
            if q.is_zero() {
                // coincident approximations; force another iteration
                return ComplexQ::real(Rational::one());
            }
            p.div(&q)
        })
        .collect()
}

fn snap_rational_roots(f: &Poly, denom: &Rational, z: &mut [ComplexQ]) {
    for zi in z.iter_mut() {
        if !zi.im.is_zero() && zi.im.abs() > Rational::new(1.into(), 1024.into()) {
            continue;
        }
        let cand = (&zi.re * denom + crate::exactnum::rat(1, 2)).floor() / denom;
        if f.eval(&cand).is_zero() {
            *zi = ComplexQ::real(cand);
        }
    }
}

fn certify(f: &Poly, z: &[ComplexQ], w: &[ComplexQ], n: usize, tol_sq: &Rational) -> Option<Vec<RootDisc>> {
    let nm1 = int(n as i64 - 1);
    let nm1_sq = &nm1 * &nm1;
    let mut discs: Vec<RootDisc> = z
        .iter()
        .zip(w)
        .map(|(zi, wi)| {
            let exact = if wi.is_zero() && zi.im.is_zero() && f.eval(&zi.re).is_zero() {
                Some(zi.re.clone())
            } else {
                None
            };
            RootDisc {
                center: zi.sub(wi),
                radius_sq: &nm1_sq * wi.norm_sq(),
                exact,
                real: None,
                conjugate: None,
            }
        })
        .collect();
    if discs.iter().any(|d| &d.radius_sq > tol_sq) {
        return None;
    }
    let radius: Vec<Rational> = discs.iter().map(|d| sqrt_upper(&d.radius_sq, 64)).collect();
    if !pairwise_disjoint(&discs.iter().map(|d| d.center.clone()).collect::<Vec<_>>(), &radius) {
        return None;
    }
    // real-axis symmetric enlargements decide realness
    let sym_centers: Vec<ComplexQ> = discs.iter().map(|d| ComplexQ::real(d.center.re.clone())).collect();
    let mut sym_radius = radius.clone();
    for i in 0..n {
        let im = discs[i].center.im.abs();
        if im > radius[i] {
            discs[i].real = Some(false);
        } else {
            sym_radius[i] = &radius[i] + im;
        }
    }
    let touching: Vec<usize> = (0..n).filter(|&i| discs[i].real.is_none()).collect();
    for &i in &touching {
        let ok = (0..n).all(|j| {
            if j == i {
                return true;
            }
            let (cj, rj) = if discs[j].real.is_none() {
                (&sym_centers[j], &sym_radius[j])
            } else {
                (&discs[j].center, &radius[j])
            };
            let d2 = sym_centers[i].sub(cj).norm_sq();
            let s = &sym_radius[i] + rj;
            d2 > &s * &s
        });
        if ok {
            discs[i].real = Some(true);
        }
    }
    for i in 0..n {
        if discs[i].exact.is_some() {
            discs[i].real = Some(true);
        }
        if discs[i].real == Some(false) {
            let cc = discs[i].center.conj();
            let partner = (0..n).find(|&j| {
                j != i && {
                    let d2 = cc.sub(&discs[j].center).norm_sq();
                    let s = &radius[i] + &radius[j];
                    d2 <= &s * &s
                }
            });
            discs[i].conjugate = partner;
        }
    }
    Some(discs)
}

fn pairwise_disjoint(c: &[ComplexQ], r: &[Rational]) -> bool {
    for i in 0..c.len() {
        for j in 0..i {
            let d2 = c[i].sub(&c[j]).norm_sq();
            let s = &r[i] + &r[j];
            if d2 <= &s * &s {
                return false;
            }
        }
    }
    true
}

/// Approximate the root as `f64` pair, for display and ordering only.
pub fn approx(d: &RootDisc) -> (f64, f64) {
    (
        d.center.re.to_f64().unwrap_or(f64::NAN),
        d.center.im.to_f64().unwrap_or(f64::NAN),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn golden_ratio_squares() {
        // x^2 - 3x + 1: roots (3 +- sqrt 5)/2
        let roots = isolate_roots(&p(&[1, -3, 1]), &pow2(-40)).unwrap();
        assert_eq!(roots.len(), 2);
        let mut m: Vec<RationalInterval> = roots.iter().map(|r| r.modulus(80)).collect();
        m.sort_by(|a, b| b.lo.cmp(&a.lo));
        assert!(m[0].contains(&rat(2618033988, 1_000_000_000)) || m[0].lo < rat(26180340, 10_000_000));
        assert!(m[0].lo > rat(2618, 1000) && m[0].hi < rat(2619, 1000));
        assert!(m[1].lo > rat(381, 1000) && m[1].hi < rat(382, 1000));
        assert!(roots.iter().all(|r| r.real == Some(true)));
    }

    #[test]
    fn rational_roots_are_exact() {
        // (x - 4)(x - 1/4)
        let f = Poly::new(vec![int(1), rat(-17, 4), int(1)]);
        let roots = isolate_roots(&f, &pow2(-30)).unwrap();
        let mut ex: Vec<Rational> = roots.iter().map(|r| r.exact.clone().unwrap()).collect();
        ex.sort();
        assert_eq!(ex, vec![rat(1, 4), int(4)]);
    }

    #[test]
    fn rotation_roots_are_conjugate() {
        let roots = isolate_roots(&p(&[1, 0, 1]), &pow2(-30)).unwrap();
        assert!(roots.iter().all(|r| r.real == Some(false)));
        assert_eq!(roots[0].conjugate, Some(1));
        assert_eq!(roots[1].conjugate, Some(0));
        for r in &roots {
            assert!(r.modulus(64).contains(&int(1)));
        }
    }

    #[test]
    fn clustered_and_large_roots() {
        // (x - 1000)(x - 1001)(x + 1/1000)
        let f = Poly::linear(&int(1000))
            .mul(&Poly::linear(&int(1001)))
            .mul(&Poly::linear(&rat(-1, 1000)));
        let roots = isolate_roots(&f, &pow2(-20)).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|r| r.exact.is_some()));
        // irreducible cubic x^3 - 2
        let roots = isolate_roots(&p(&[-2, 0, 0, 1]), &pow2(-50)).unwrap();
        let reals: Vec<_> = roots.iter().filter(|r| r.real == Some(true)).collect();
        assert_eq!(reals.len(), 1);
        let m = reals[0].modulus(100);
        assert!(m.lo > rat(12599, 10000) && m.hi < rat(12600, 10000));
    }

    #[test]
    fn rejects_repeated_roots() {
        assert!(matches!(
            isolate_roots(&p(&[1, -2, 1]), &pow2(-10)),
            Err(SpectraError::NotSquarefree)
        ));
    }
}
