//! Characteristic polynomials, discriminants and eigenvalue separation,
//! certified eigenvalue moduli at every place, and exterior powers.

pub mod gap;
pub mod padic;
pub mod poly;
pub mod roots;
pub mod wedge;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::rational::{int, pow2, serde_q, serde_q_vec, sqrt_lower};
use crate::exactnum::{Matrix, Place, PlaceSet, Rational, RationalInterval};

pub use gap::{GapCell, GapEntry, GapGrid, ModulusItem, ModulusValue, WedgeModulus};
pub use padic::PadicAbs;
pub use poly::Poly;
pub use roots::{ComplexQ, RootDisc};
pub use wedge::{binomial, subsets, wedge_power};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectraError {
    #[error("repeated eigenvalues after squarefree reduction")]
    ZeroDiscriminant,
    #[error("root isolation did not converge within the precision cap")]
    PrecisionExhausted,
    #[error("polynomial has repeated roots")]
    NotSquarefree,
    #[error("matrix has a zero eigenvalue")]
    ZeroEigenvalue,
    #[error("wedge exponent {m} outside 1..={n}")]
    BadExponent { m: usize, n: usize },
    #[error("{0} is not a finite place")]
    NotFinite(Place),
}

/// Monic characteristic polynomial, coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharPoly {
    #[serde(with = "serde_q_vec")]
    pub coefficients: Vec<Rational>,
}

impl CharPoly {
    pub fn poly(&self) -> Poly {
        Poly::new(self.coefficients.clone())
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }
}

impl std::fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.poly())
    }
}

/// Faddeev-LeVerrier.
pub fn char_poly(a: &Matrix) -> CharPoly {
    let n = a.dim();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m = Matrix::zero(n);
    let id = Matrix::identity(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k
        m = &(a * &m) + &id.scale(&c[n - k + 1]);
        let am = a * &m;
        c[n - k] = -am.trace() / int(k as i64);
    }
    CharPoly { coefficients: c }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparationReport {
    #[serde(with = "serde_q")]
    pub product_over_s: Rational,
    pub passes: bool,
    /// Lower bound on `min_{i != j} |lambda_i - lambda_j|_v`; empty when
    /// there is at most one distinct eigenvalue.
    #[serde(with = "place_map")]
    pub per_place_lower_bounds: BTreeMap<Place, Rational>,
    /// `|disc|_v` of the squarefree part, per place.
    #[serde(with = "place_map")]
    pub disc_abs: BTreeMap<Place, Rational>,
    pub distinct_eigenvalues: usize,
}

mod place_map {
    use std::collections::BTreeMap;

    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::exactnum::rational::{format_rational, parse_rational};
    use crate::exactnum::{Place, Rational};

    pub fn serialize<S: Serializer>(m: &BTreeMap<Place, Rational>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), format_rational(v))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Place, Rational>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                Ok((
                    k.parse().map_err(D::Error::custom)?,
                    parse_rational(&v).map_err(D::Error::custom)?,
                ))
            })
            .collect()
    }
}

/// Separation via the discriminant of the squarefree part of the
/// characteristic polynomial: `prod_{i != j} |l_i - l_j|_v = |disc|_v`.
pub fn check_separation(a: &Matrix, s: &PlaceSet) -> Result<SeparationReport, SpectraError> {
    let h = char_poly(a).poly().squarefree_part();
    let r = h.degree();
    let disc = h.discriminant();
    if disc.is_zero() {
        return Err(SpectraError::ZeroDiscriminant);
    }
    let mut disc_abs = BTreeMap::new();
    let mut product = Rational::one();
    for v in s.iter() {
        let x = v.abs(&disc);
        product *= &x;
        disc_abs.insert(*v, x);
    }
    let mut lower = BTreeMap::new();
    if r >= 2 {
        let pairs = (r * (r - 1) / 2) as u32;
        for v in s.iter() {
            let u = pair_distance_bound(&h, *v)?;
            let denom = num_traits::pow(u, 2 * (pairs as usize - 1));
            lower.insert(*v, sqrt_lower(&(&disc_abs[v] / denom), 64));
        }
    }
    Ok(SeparationReport {
        passes: product >= Rational::one(),
        product_over_s: product,
        per_place_lower_bounds: lower,
        disc_abs,
        distinct_eigenvalues: r,
    })
}

/// An upper bound on every `|l_i - l_j|_v` for roots of the monic `h`.
fn pair_distance_bound(h: &Poly, v: Place) -> Result<Rational, SpectraError> {
    match v {
        Place::Archimedean => {
            // Cauchy: every root has modulus < 1 + max |c_i|
            let n = h.degree();
            let m = (0..n).map(|i| h.coeff(i).abs()).max().unwrap_or_else(Rational::zero);
            Ok(int(2) * (Rational::one() + m))
        }
        Place::Finite(p) => {
            let vals = padic::padic_abs_of_roots(h, p)?;
            Ok(vals
                .iter()
                .map(|x| x.upper_bound())
                .max()
                .unwrap_or_else(Rational::one))
        }
    }
}

/// Archimedean roots of a characteristic polynomial, with multiplicity and
/// modulus equality classes.
#[derive(Clone, Debug)]
pub struct ArchRoot {
    pub disc: RootDisc,
    pub multiplicity: usize,
    pub class: usize,
}

/// Isolates all roots of `f` so that each modulus enclosure is narrower
/// than `tol`.
pub fn arch_roots(f: &Poly, tol: &Rational) -> Result<Vec<ArchRoot>, SpectraError> {
    let mut out: Vec<ArchRoot> = Vec::new();
    let disc_tol = tol / int(4);
    for (mult, factor) in f.squarefree_factorization() {
        let base = out.len();
        let discs = roots::isolate_roots(&factor, &disc_tol)?;
        for d in discs {
            out.push(ArchRoot {
                disc: d,
                multiplicity: mult,
                class: 0,
            });
        }
        // fix conjugate links to global indices
        for r in out[base..].iter_mut() {
            if let Some(j) = r.disc.conjugate {
                r.disc.conjugate = Some(base + j);
            }
        }
    }
    // union-find over "certainly equal modulus"
    let n = out.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        if let Some(j) = out[i].disc.conjugate {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
        for j in 0..i {
            if let (Some(x), Some(y)) = (&out[i].disc.exact, &out[j].disc.exact) {
                if x.abs() == y.abs() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
    }
    let mut ids: Vec<usize> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let c = match ids.iter().position(|&x| x == root) {
            Some(c) => c,
            None => {
                ids.push(root);
                ids.len() - 1
            }
        };
        out[i].class = c;
    }
    Ok(out)
}

fn modulus_tolerance(a: &Matrix, precision: u32) -> Rational {
    let scale = a.norm_at(Place::Archimedean).max(Rational::one());
    pow2(-(precision as i64)) * scale
}

fn sqrt_bits(tol: &Rational) -> u32 {
    (crate::exactnum::rational::floor_log2(tol).unsigned_abs() as u32) + 8
}

/// Modulus items at the archimedean place, one per eigenvalue.
pub fn archimedean_items(a: &Matrix, precision: u32) -> Result<Vec<ModulusItem>, SpectraError> {
    let tol = modulus_tolerance(a, precision);
    let roots = arch_roots(&char_poly(a).poly(), &tol)?;
    let bits = sqrt_bits(&tol);
    let mut items = Vec::new();
    for r in &roots {
        let m = r.disc.modulus(bits);
        for _ in 0..r.multiplicity {
            items.push(ModulusItem {
                value: ModulusValue::Archimedean(m.clone()),
                class: r.class,
            });
        }
    }
    Ok(items)
}

/// Modulus items at a finite place; classes are exact valuations.
pub fn padic_items(a: &Matrix, p: u64) -> Result<Vec<ModulusItem>, SpectraError> {
    let vals = padic::padic_abs_of_roots(&char_poly(a).poly(), p)?;
    let mut distinct: Vec<Rational> = Vec::new();
    Ok(vals
        .into_iter()
        .map(|v| {
            let c = match distinct.iter().position(|x| *x == v.valuation) {
                Some(c) => c,
                None => {
                    distinct.push(v.valuation.clone());
                    distinct.len() - 1
                }
            };
            ModulusItem {
                value: ModulusValue::Padic(v),
                class: c,
            }
        })
        .collect())
}

pub fn items_at(a: &Matrix, place: Place, precision: u32) -> Result<Vec<ModulusItem>, SpectraError> {
    match place {
        Place::Archimedean => archimedean_items(a, precision),
        Place::Finite(p) => padic_items(a, p),
    }
}

/// Certified enclosures of `|lambda_i|_inf`, sorted descending by midpoint.
pub fn archimedean_moduli(a: &Matrix, precision: u32) -> Result<Vec<RationalInterval>, SpectraError> {
    let mut v: Vec<RationalInterval> = archimedean_items(a, precision)?
        .into_iter()
        .map(|i| match i.value {
            ModulusValue::Archimedean(x) => x,
            ModulusValue::Padic(_) => unreachable!(),
        })
        .collect();
    v.sort_by(|x, y| y.midpoint().cmp(&x.midpoint()));
    Ok(v)
}

/// `|lambda_i|_p` for each eigenvalue, largest first.
pub fn newton_polygon_moduli(a: &Matrix, p: Place) -> Result<Vec<PadicAbs>, SpectraError> {
    match p {
        Place::Finite(q) => padic::padic_abs_of_roots(&char_poly(a).poly(), q),
        Place::Archimedean => Err(SpectraError::NotFinite(p)),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenReport {
    pub charpoly: CharPoly,
    #[serde(with = "serde_q")]
    pub discriminant: Rational,
    pub archimedean_moduli: Vec<RationalInterval>,
    pub padic_moduli: BTreeMap<Place, Vec<PadicAbs>>,
    pub is_semisimple_proxy: bool,
}

pub fn eigen_report(a: &Matrix, s: &PlaceSet, precision: u32) -> Result<EigenReport, SpectraError> {
    let cp = char_poly(a);
    let poly = cp.poly();
    let mut padic_moduli = BTreeMap::new();
    for p in s.primes() {
        padic_moduli.insert(Place::Finite(p), padic::padic_abs_of_roots(&poly, p)?);
    }
    Ok(EigenReport {
        discriminant: poly.discriminant(),
        is_semisimple_proxy: poly.is_squarefree(),
        archimedean_moduli: archimedean_moduli(a, precision)?,
        padic_moduli,
        charpoly: cp,
    })
}

pub const GAP_PRECISIONS: [u32; 4] = [64, 128, 256, 512];

/// The `(place, m)` grid for `m` in `1..n`. Archimedean cells left undecided
/// at one precision are retried at the next; what stays undecided is
/// reported as `None`.
pub fn l1_gap_report(a: &Matrix, s: &PlaceSet) -> Result<GapGrid, SpectraError> {
    let n = a.dim();
    let mut entries = Vec::new();
    for place in s.iter() {
        let mut cells: Vec<GapCell> = Vec::new();
        for &prec in &GAP_PRECISIONS {
            let items = match items_at(a, *place, prec) {
                Ok(items) => items,
                Err(SpectraError::PrecisionExhausted) => break,
                Err(e) => return Err(e),
            };
            cells = (1..n).map(|m| gap::decide(&gap::wedge_moduli(&items, m))).collect();
            let undecided = cells.iter().any(|c| c.l1.is_none() || c.dominant.is_none());
            if !undecided || !place.is_archimedean() {
                break;
            }
        }
        if cells.is_empty() {
            cells = vec![GapCell { l1: None, dominant: None }; n.saturating_sub(1)];
        }
        for (i, cell) in cells.into_iter().enumerate() {
            entries.push(GapEntry {
                place: *place,
                m: i + 1,
                cell,
            });
        }
    }
    Ok(GapGrid { entries })
}

/// Largest eigenvalue modulus of `rho_m(A)` at `place`, as a rational upper
/// bound.
pub fn wedge_spectral_radius(a: &Matrix, place: Place, m: usize) -> Result<Rational, SpectraError> {
    let items = items_at(a, place, 64)?;
    Ok(gap::spectral_radius_bound(&gap::wedge_moduli(&items, m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    #[test]
    fn charpoly_examples() {
        let id = Matrix::identity(2);
        assert_eq!(char_poly(&id).coefficients, vec![int(1), int(-2), int(1)]);
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(char_poly(&a).coefficients, vec![int(1), int(-3), int(1)]);
        let d = Matrix::diag(&[int(2), rat(1, 2)]);
        assert_eq!(char_poly(&d).coefficients, vec![int(1), rat(-5, 2), int(1)]);
    }

    #[test]
    fn separation_examples() {
        let d = Matrix::diag(&[int(2), rat(1, 2)]);
        let s = PlaceSet::with_primes([2]).unwrap();
        let r = check_separation(&d, &s).unwrap();
        assert_eq!(r.disc_abs[&Place::Archimedean], rat(9, 4));
        assert_eq!(r.disc_abs[&Place::Finite(2)], int(4));
        assert_eq!(r.product_over_s, int(9));
        assert!(r.passes);
        // the pair is 3/2 apart at infinity, |3/2|_2 = 1/2
        assert!(r.per_place_lower_bounds[&Place::Archimedean] <= rat(3, 2));
        assert!(r.per_place_lower_bounds[&Place::Finite(2)] <= rat(2, 1));

        let id = Matrix::identity(2);
        let r = check_separation(&id, &PlaceSet::archimedean_only()).unwrap();
        assert_eq!(r.product_over_s, int(1));
        assert!(r.passes && r.per_place_lower_bounds.is_empty());

        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let r = check_separation(&a, &PlaceSet::archimedean_only()).unwrap();
        assert_eq!(r.product_over_s, int(5));
    }

    #[test]
    fn moduli_examples() {
        let d = Matrix::diag(&[int(4), rat(1, 4)]);
        let m = archimedean_moduli(&d, 30).unwrap();
        assert_eq!(m, vec![RationalInterval::point(int(4)), RationalInterval::point(rat(1, 4))]);
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let m = archimedean_moduli(&a, 30).unwrap();
        assert!(m[0].contains(&rat(2618034, 1000000)) || (m[0].lo > rat(2618, 1000) && m[0].hi < rat(2619, 1000)));
        assert!(m[0].width() <= pow2(-30) * int(2));
        let rot = Matrix::from_i64(&[&[0, -1], &[1, 0]]);
        let m = archimedean_moduli(&rot, 30).unwrap();
        assert!(m.iter().all(|x| x.contains(&int(1))));
        let items = archimedean_items(&rot, 30).unwrap();
        assert_eq!(items[0].class, items[1].class);
    }

    #[test]
    fn newton_examples() {
        let d = Matrix::diag(&[int(2), rat(1, 2)]);
        let v = newton_polygon_moduli(&d, Place::Finite(2)).unwrap();
        assert_eq!(v[0].as_rational(), Some(int(2)));
        assert_eq!(v[1].as_rational(), Some(rat(1, 2)));
        assert!(newton_polygon_moduli(&d, Place::Archimedean).is_err());
    }

    #[test]
    fn gap_grid_examples() {
        let s = PlaceSet::archimedean_only();
        let g = l1_gap_report(&Matrix::diag(&[int(4), rat(1, 4)]), &s).unwrap();
        assert_eq!(g.get(Place::Archimedean, 1).unwrap().l1, Some(true));
        let g = l1_gap_report(&Matrix::diag(&[rat(3, 2), rat(2, 3)]), &s).unwrap();
        assert_eq!(g.get(Place::Archimedean, 1).unwrap().l1, Some(false));
        let g = l1_gap_report(&Matrix::diag(&[int(2), int(2), rat(1, 4)]), &s).unwrap();
        assert_eq!(g.get(Place::Archimedean, 1).unwrap().l1, Some(false));
        assert_eq!(g.get(Place::Archimedean, 2).unwrap().l1, Some(true));
        // hyperbolic integer matrix: (3 + sqrt 5)/2 against its inverse
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let g = l1_gap_report(&a, &s).unwrap();
        assert_eq!(g.get(Place::Archimedean, 1).unwrap().l1, Some(true));
    }
}
