use serde::{Deserialize, Serialize};

use super::ball::sweep;
use super::CayleyError;
use crate::exactnum::matrix::{rank, RowSpace};
use crate::exactnum::{GeneratorSet, Matrix, PlaceSet, Word};
use crate::spectra::{self, wedge_power, EigenReport, GapEntry};

/// `A` and `B` share an eigenvector over `C` iff the commutators
/// `[A^k, B^l]`, `1 <= k, l < n`, have a common kernel vector (Shemesh).
pub fn has_common_eigenvector(a: &Matrix, b: &Matrix) -> bool {
    let n = a.dim();
    if n == 1 {
        return true;
    }
    let mut rows = Vec::new();
    let mut ak = a.clone();
    for _ in 1..n {
        let mut bl = b.clone();
        for _ in 1..n {
            rows.extend((&(&ak * &bl) - &(&bl * &ak)).rows());
            bl = &bl * b;
        }
        ak = &ak * a;
    }
    rank(&rows) < n
}

/// Dimension of the unital algebra generated by `a` and `b`.
pub fn algebra_dimension(a: &Matrix, b: &Matrix) -> usize {
    let n = a.dim();
    let mut space = RowSpace::new(n * n);
    let id = Matrix::identity(n);
    space.insert(id.entries().to_vec());
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in [a, b] {
            let y = g * &x;
            if space.insert(y.entries().to_vec()) {
                queue.push(y);
            }
        }
        if space.dim() == n * n {
            break;
        }
    }
    space.dim()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeGenericity {
    pub m: usize,
    pub no_common_eigenvector: bool,
    pub algebra_dimension: usize,
    pub full_algebra: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Genericity {
    pub a_squarefree: bool,
    /// `(place, m)` cells where `rho_m(A)` has a certified dominant
    /// eigenvalue.
    pub dominant_cells: Vec<GapEntry>,
    pub no_common_eigenvector: bool,
    pub algebra_dimension: usize,
    /// The same checks for the wedge images; recorded, not required.
    pub wedge: Vec<WedgeGenericity>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegularPair {
    pub word_a: Word,
    pub word_b: Word,
    pub matrix_a: Matrix,
    pub matrix_b: Matrix,
    pub eigen_a: EigenReport,
    pub genericity: Genericity,
}

/// Checks `(b)` and `(c)` for a candidate `B`, plus the recorded wedge data.
pub fn pair_genericity(a: &Matrix, b: &Matrix, dominant_cells: Vec<GapEntry>) -> Genericity {
    let mut ms: Vec<usize> = dominant_cells.iter().map(|c| c.m).filter(|&m| m > 1).collect();
    ms.sort();
    ms.dedup();
    let wedge = ms
        .into_iter()
        .map(|m| {
            let wa = wedge_power(a, m).expect("1 <= m < n");
            let wb = wedge_power(b, m).expect("1 <= m < n");
            let d = algebra_dimension(&wa, &wb);
            WedgeGenericity {
                m,
                no_common_eigenvector: !has_common_eigenvector(&wa, &wb),
                algebra_dimension: d,
                full_algebra: d == wa.dim() * wa.dim(),
            }
        })
        .collect();
    Genericity {
        a_squarefree: true,
        dominant_cells,
        no_common_eigenvector: !has_common_eigenvector(a, b),
        algebra_dimension: algebra_dimension(a, b),
        wedge,
    }
}

impl Genericity {
    pub fn passes(&self, n: usize) -> bool {
        self.a_squarefree && self.no_common_eigenvector && self.algebra_dimension == n * n
    }
}

/// Candidate `A`s in ball order: squarefree characteristic polynomial and
/// some `(place, m)` where `rho_m(A)` has a strictly dominant eigenvalue.
fn regular_cells(a: &Matrix, s: &PlaceSet) -> Option<Vec<GapEntry>> {
    let poly = spectra::char_poly(a).poly();
    if !poly.is_squarefree() || poly.discriminant() == num_traits::Zero::zero() {
        return None;
    }
    let grid = spectra::l1_gap_report(a, s).ok()?;
    let cells: Vec<GapEntry> = grid
        .entries
        .into_iter()
        .filter(|e| e.cell.dominant == Some(true))
        .collect();
    (!cells.is_empty()).then_some(cells)
}

/// Searches `B_S(depth)` in shortlex order for a regular `A`, then for the
/// first `B` making the pair generic.
pub fn find_regular_pair(
    gens: &GeneratorSet,
    depth: usize,
    s: &PlaceSet,
    budget: u64,
) -> Result<RegularPair, CayleyError> {
    let ball = sweep(gens, depth, budget, true);
    if ball.exhausted_budget {
        return Err(CayleyError::BudgetExceeded {
            max_elements: budget,
            partial: Box::new(super::GrowthReport::from_sizes(&ball.sizes)),
        });
    }
    let n = gens.dim();
    for (wa, a) in &ball.elements {
        let Some(cells) = regular_cells(a, s) else {
            continue;
        };
        for (wb, b) in &ball.elements {
            if wb.is_empty() || wb == wa {
                continue;
            }
            if has_common_eigenvector(a, b) || algebra_dimension(a, b) != n * n {
                continue;
            }
            let g = pair_genericity(a, b, cells.clone());
            if g.passes(n) {
                let eigen_a = spectra::eigen_report(a, s, 64)?;
                return Ok(RegularPair {
                    word_a: wa.clone(),
                    word_b: wb.clone(),
                    matrix_a: a.clone(),
                    matrix_b: b.clone(),
                    eigen_a,
                    genericity: g,
                });
            }
        }
    }
    Err(CayleyError::NotFound(depth))
}
