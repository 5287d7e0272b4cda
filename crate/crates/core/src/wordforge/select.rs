use serde::{Deserialize, Serialize};

use super::relation::ConjugatedPair;
use super::ForgeError;
use crate::exactnum::{Matrix, Place, PlaceSet, Rational};
use crate::spectra::{l1_gap_report, GapGrid};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Selection {
    pub place: Place,
    pub m: usize,
    pub grid: GapGrid,
}

/// Places by decreasing `||A||_v` (ties in place order), and for each the
/// least `m` with a certified gap; the first hit wins.
pub fn select_for(a: &Matrix, s: &PlaceSet) -> Result<Selection, ForgeError> {
    let grid = l1_gap_report(a, s)?;
    let mut places: Vec<(Place, Rational)> = s.iter().map(|&v| (v, a.norm_at(v))).collect();
    places.sort_by(|x, y| y.1.cmp(&x.1));
    for (place, _) in places {
        let hit = grid
            .entries
            .iter()
            .filter(|e| e.place == place && e.cell.l1 == Some(true))
            .map(|e| e.m)
            .min();
        if let Some(m) = hit {
            return Ok(Selection { place, m, grid });
        }
    }
    Err(ForgeError::NoGap(grid))
}

pub fn select_place_and_wedge(pair: &ConjugatedPair, s: &PlaceSet) -> Result<Selection, ForgeError> {
    select_for(&pair.a, s)
}
