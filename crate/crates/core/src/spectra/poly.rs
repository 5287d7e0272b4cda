//! Dense univariate polynomials over Q, coefficients in ascending degree.

use std::fmt;

use num_traits::{One, Zero};

use crate::exactnum::{Matrix, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::new(vec![Rational::one()])
    }

    /// `x - r`.
    pub fn linear(r: &Rational) -> Self {
        Poly::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Poly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let lc = d.leading();
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); self.coeffs.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &lc;
            if !f.is_zero() {
                for (j, c) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &f * c;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `f / gcd(f, f')`, monic: same roots, each simple.
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Yun's algorithm: `f = c * prod a_i^i` with each `a_i` squarefree and
    /// pairwise coprime. Returns `(i, a_i)` for nonconstant factors.
    pub fn squarefree_factorization(&self) -> Vec<(usize, Poly)> {
        let f = self.monic();
        let mut out = Vec::new();
        if f.degree() == 0 {
            return out;
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            if a.degree() > 0 {
                out.push((i, a.monic()));
            }
            i += 1;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &Poly) -> Rational {
        if self.is_zero() || other.is_zero() {
            return Rational::zero();
        }
        let m = self.degree();
        let n = other.degree();
        if m == 0 {
            return num_traits::pow(self.leading(), n);
        }
        if n == 0 {
            return num_traits::pow(other.leading(), m);
        }
        let size = m + n;
        let mut s = Matrix::zero(size);
        // Sylvester layout with coefficients in descending degree
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                s[(i, i + j)] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                s[(n + i, i + j)] = c.clone();
            }
        }
        s.determinant()
    }

    /// Discriminant of a monic polynomial: `prod_{i<j} (r_i - r_j)^2`.
    pub fn discriminant(&self) -> Rational {
        let n = self.degree();
        if n <= 1 {
            return Rational::one();
        }
        let f = self.monic();
        let r = f.resultant(&f.derivative());
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Substitute `x -> s x` and rescale to monic.
    pub fn scale_roots_down(&self, s: &Rational) -> Poly {
        // roots of g are roots of f divided by s: g(y) = f(s y) / s^n
        let n = self.degree();
        let mut out = Vec::with_capacity(n + 1);
        let mut pw = Rational::one();
        for c in &self.coeffs {
            out.push(c * &pw);
            pw *= s;
        }
        Poly::new(out).monic()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn discriminants() {
        // x^2 - 3x + 1
        assert_eq!(p(&[1, -3, 1]).discriminant(), int(5));
        // x^2 - 5/2 x + 1
        let q = Poly::new(vec![int(1), rat(-5, 2), int(1)]);
        assert_eq!(q.discriminant(), rat(9, 4));
        // (x-1)^2
        assert_eq!(p(&[1, -2, 1]).discriminant(), int(0));
        // x^3 - x: roots -1, 0, 1 -> prod (ri-rj)^2 = 1*1*4 = 4
        assert_eq!(p(&[0, -1, 0, 1]).discriminant(), int(4));
    }

    #[test]
    fn yun_factorisation() {
        // (x-1)^2 (x+2)^3 (x^2+1)
        let f = p(&[-1, 1])
            .mul(&p(&[-1, 1]))
            .mul(&p(&[2, 1]).mul(&p(&[2, 1])).mul(&p(&[2, 1])))
            .mul(&p(&[1, 0, 1]));
        let fac = f.squarefree_factorization();
        assert_eq!(fac.len(), 3);
        assert_eq!(fac[0], (1, p(&[1, 0, 1])));
        assert_eq!(fac[1], (2, p(&[-1, 1])));
        assert_eq!(fac[2], (3, p(&[2, 1])));
        let deg: usize = fac.iter().map(|(i, a)| i * a.degree()).sum();
        assert_eq!(deg, f.degree());
        let sf = f.squarefree_part();
        assert_eq!(sf.degree(), 4);
        assert!(sf.is_squarefree());
    }

    #[test]
    fn division_identity() {
        let a = p(&[3, 0, -2, 5, 1]);
        let b = p(&[1, 2, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }
}
