use std::io::Write;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::CayleyError;
use crate::exactnum::rational::{int, nth_root_floor, rat, serde_q};
use crate::exactnum::Rational;

/// Bits after the binary point in the certified root bounds.
pub const OMEGA_FRAC_BITS: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExponentialEvidence,
    PolynomialEvidence,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSize {
    pub n: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaEstimate {
    pub n: usize,
    /// Largest `k / 2^20` with `(k / 2^20)^n <= |B(n)|`.
    #[serde(with = "serde_q")]
    pub lower_bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub ball_sizes: Vec<BallSize>,
    pub omega_estimates: Vec<OmegaEstimate>,
    pub poly_fit_degree: Option<u32>,
    pub verdict: Verdict,
}

impl GrowthReport {
    pub fn from_sizes(sizes: &[u64]) -> Self {
        let ball_sizes: Vec<BallSize> = sizes
            .iter()
            .enumerate()
            .map(|(n, &count)| BallSize { n, count })
            .collect();
        let omega_estimates = sizes
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| OmegaEstimate {
                n,
                lower_bound: nth_root_floor(&int(c as i64), n as u32, OMEGA_FRAC_BITS),
            })
            .collect();
        let verdict = verdict(sizes);
        let poly_fit_degree = match verdict {
            Verdict::ExponentialEvidence => None,
            _ => poly_fit_degree(sizes),
        };
        GrowthReport {
            ball_sizes,
            omega_estimates,
            poly_fit_degree,
            verdict,
        }
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.ball_sizes.iter().map(|b| b.count).collect()
    }

    pub fn max_radius(&self) -> usize {
        self.ball_sizes.last().map_or(0, |b| b.n)
    }

    /// CSV with header `n,count`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,count")?;
        for b in &self.ball_sizes {
            writeln!(w, "{},{}", b.n, b.count)?;
        }
        Ok(())
    }
}

/// The certified lower bound on `|B(n)|^(1/n)` at the largest sampled
/// radius. Labelled empirical: it bounds the sampled ball, not the limit.
pub fn estimate_omega(report: &GrowthReport) -> Result<Rational, CayleyError> {
    if report.ball_sizes.len() < 2 {
        return Err(CayleyError::InsufficientData);
    }
    report
        .omega_estimates
        .last()
        .map(|e| e.lower_bound.clone())
        .ok_or(CayleyError::InsufficientData)
}

fn ratio(sizes: &[u64], n: usize) -> Rational {
    Rational::new(BigInt::from(sizes[n]), BigInt::from(sizes[n - 1]))
}

/// Compares the growth ratio `r_n = |B(n)| / |B(n-1)|` at the largest radius
/// `N` with the one at `ceil(N/2)`: for exponential growth `r_n - 1` settles
/// to a positive constant, for polynomial growth of degree `d` it decays
/// like `d/n`, halving between the two radii.
pub fn verdict(sizes: &[u64]) -> Verdict {
    let big_n = sizes.len().saturating_sub(1);
    if big_n < 3 {
        return Verdict::Inconclusive;
    }
    let m = big_n.div_ceil(2);
    let one = Rational::one();
    let rn = ratio(sizes, big_n) - &one;
    let rm = ratio(sizes, m) - &one;
    if rn <= Rational::from_integer(0.into()) {
        return Verdict::PolynomialEvidence;
    }
    if rm <= Rational::from_integer(0.into()) {
        return Verdict::Inconclusive;
    }
    let rho = rn / rm;
    if rho >= rat(3, 4) {
        Verdict::ExponentialEvidence
    } else if rho <= rat(2, 3) {
        Verdict::PolynomialEvidence
    } else {
        Verdict::Inconclusive
    }
}

/// Smallest `d <= 32` with `|B(n)| / n^d` non-increasing over the upper half
/// of the sampled radii, i.e. `|B(n)| <= C n^d` there with `C` fixed by the
/// midpoint.
pub fn poly_fit_degree(sizes: &[u64]) -> Option<u32> {
    let big_n = sizes.len().checked_sub(1)?;
    if big_n < 2 {
        return None;
    }
    let m = big_n.div_ceil(2).max(1);
    (0..=32u32).find(|&d| {
        (m + 1..=big_n).all(|n| {
            // B(n) (n-1)^d <= B(n-1) n^d
            let lhs = BigInt::from(sizes[n]) * num_traits::pow(BigInt::from(n - 1), d as usize);
            let rhs = BigInt::from(sizes[n - 1]) * num_traits::pow(BigInt::from(n), d as usize);
            lhs <= rhs
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEISENBERG: [u64; 13] = [1, 5, 17, 53, 135, 299, 593, 1069, 1793, 2845, 4309, 6281, 8871];

    #[test]
    fn free_group_is_exponential() {
        let sizes: Vec<u64> = (0..=6).map(|n| 2 * 3u64.pow(n) - 1).collect();
        let r = GrowthReport::from_sizes(&sizes);
        assert_eq!(r.verdict, Verdict::ExponentialEvidence);
        let q = estimate_omega(&r).unwrap();
        assert!(q > int(3));
        assert!(num_traits::pow(q, 6) <= int(1457));
    }

    #[test]
    fn heisenberg_is_polynomial_of_degree_four() {
        let r = GrowthReport::from_sizes(&HEISENBERG);
        assert_eq!(r.verdict, Verdict::PolynomialEvidence);
        assert_eq!(r.poly_fit_degree, Some(4));
    }

    #[test]
    fn constant_sizes() {
        let r = GrowthReport::from_sizes(&[1, 1, 1, 1, 1]);
        assert_eq!(r.verdict, Verdict::PolynomialEvidence);
        assert_eq!(r.poly_fit_degree, Some(0));
        assert_eq!(estimate_omega(&r).unwrap(), int(1));
        assert!(estimate_omega(&GrowthReport::from_sizes(&[1])).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        GrowthReport::from_sizes(&[1, 5, 17]).write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "n,count\n0,1\n1,5\n2,17\n");
    }
}
