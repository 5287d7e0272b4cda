//! The `(place, m)` grid recording whether `rho_m(A)` has a dominant
//! eigenvalue at that place, and whether it satisfies the doubling gap
//! `|a1| >= max(2, 2|a2|)`.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::padic::PadicAbs;
use super::wedge::subsets;
use crate::exactnum::rational::int;
use crate::exactnum::{Place, Rational, RationalInterval};

/// One eigenvalue modulus at a place. Items sharing a `class` are known to
/// be exactly equal.
#[derive(Clone, Debug)]
pub struct ModulusItem {
    pub value: ModulusValue,
    pub class: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusValue {
    Archimedean(RationalInterval),
    Padic(PadicAbs),
}

/// A modulus of `rho_m(A)` together with how many subsets realise it.
#[derive(Clone, Debug)]
pub struct WedgeModulus {
    pub value: ModulusValue,
    pub multiplicity: usize,
}

/// Tri-state: `None` means interval precision could not decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCell {
    pub l1: Option<bool>,
    pub dominant: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapEntry {
    pub place: Place,
    pub m: usize,
    #[serde(flatten)]
    pub cell: GapCell,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapGrid {
    pub entries: Vec<GapEntry>,
}

impl GapGrid {
    pub fn get(&self, place: Place, m: usize) -> Option<GapCell> {
        self.entries
            .iter()
            .find(|e| e.place == place && e.m == m)
            .map(|e| e.cell)
    }

    pub fn has_inconclusive(&self) -> bool {
        self.entries
            .iter()
            .any(|e| e.cell.l1.is_none() || e.cell.dominant.is_none())
    }

    /// Cells certified to satisfy the doubling gap, in grid order.
    pub fn l1_cells(&self) -> impl Iterator<Item = &GapEntry> {
        self.entries.iter().filter(|e| e.cell.l1 == Some(true))
    }

    pub fn as_map(&self) -> BTreeMap<(Place, usize), GapCell> {
        self.entries.iter().map(|e| ((e.place, e.m), e.cell)).collect()
    }
}

/// Moduli of `rho_m(A)` from the moduli of `A`: products over `m`-subsets,
/// grouped by how many members of each equality class they use.
pub fn wedge_moduli(items: &[ModulusItem], m: usize) -> Vec<WedgeModulus> {
    let classes = items.iter().map(|i| i.class).max().map_or(0, |c| c + 1);
    let mut groups: BTreeMap<Vec<usize>, WedgeModulus> = BTreeMap::new();
    for s in subsets(items.len(), m) {
        let mut key = vec![0usize; classes];
        for &i in &s {
            key[items[i].class] += 1;
        }
        if let Some(g) = groups.get_mut(&key) {
            g.multiplicity += 1;
            continue;
        }
        let value = product(s.iter().map(|&i| &items[i].value));
        groups.insert(key, WedgeModulus {
            value,
            multiplicity: 1,
        });
    }
    let mut out: Vec<WedgeModulus> = groups.into_values().collect();
    // p-adic values are exact, so equal ones merge
    if matches!(out.first().map(|g| &g.value), Some(ModulusValue::Padic(_))) {
        let mut merged: BTreeMap<Rational, WedgeModulus> = BTreeMap::new();
        for g in out {
            let ModulusValue::Padic(p) = &g.value else { unreachable!() };
            merged
                .entry(p.valuation.clone())
                .and_modify(|e| e.multiplicity += g.multiplicity)
                .or_insert(g);
        }
        out = merged.into_values().collect();
    }
    out
}

fn product<'a>(mut vals: impl Iterator<Item = &'a ModulusValue>) -> ModulusValue {
    let first = vals.next().expect("nonempty subset").clone();
    vals.fold(first, |acc, v| match (acc, v) {
        (ModulusValue::Archimedean(a), ModulusValue::Archimedean(b)) => {
            ModulusValue::Archimedean(RationalInterval::new(&a.lo * &b.lo, &a.hi * &b.hi))
        }
        (ModulusValue::Padic(a), ModulusValue::Padic(b)) => ModulusValue::Padic(a.mul(b)),
        _ => panic!("mixed places in one modulus list"),
    })
}

/// Decide dominance and the doubling gap for one list of wedge moduli.
pub fn decide(groups: &[WedgeModulus]) -> GapCell {
    if groups.iter().map(|g| g.multiplicity).sum::<usize>() < 2 {
        return GapCell {
            l1: Some(false),
            dominant: Some(false),
        };
    }
    match &groups[0].value {
        ModulusValue::Padic(_) => decide_padic(groups),
        ModulusValue::Archimedean(_) => decide_archimedean(groups),
    }
}

fn decide_padic(groups: &[WedgeModulus]) -> GapCell {
    // groups arrive sorted by valuation ascending, i.e. largest first
    let vals: Vec<&PadicAbs> = groups
        .iter()
        .map(|g| match &g.value {
            ModulusValue::Padic(p) => p,
            _ => unreachable!(),
        })
        .collect();
    let top = vals[0];
    let dominant = groups[0].multiplicity == 1;
    let two = int(2);
    let l1 = dominant && top.at_least(&two) && top.at_least_times(&two, vals[1]);
    GapCell {
        l1: Some(l1),
        dominant: Some(dominant),
    }
}

fn decide_archimedean(groups: &[WedgeModulus]) -> GapCell {
    let iv: Vec<&RationalInterval> = groups
        .iter()
        .map(|g| match &g.value {
            ModulusValue::Archimedean(i) => i,
            _ => unreachable!(),
        })
        .collect();
    let t = (0..iv.len()).max_by(|&a, &b| iv[a].midpoint().cmp(&iv[b].midpoint())).unwrap();
    let top = iv[t];
    let mu = groups[t].multiplicity;
    let others_hi = (0..iv.len())
        .filter(|&g| g != t)
        .map(|g| iv[g].hi.clone())
        .max();
    let max_hi = iv.iter().map(|i| i.hi.clone()).max().unwrap();
    // second largest lower bound, counting multiplicity
    let mut los: Vec<Rational> = Vec::new();
    for (g, i) in iv.iter().enumerate() {
        for _ in 0..groups[g].multiplicity.min(2) {
            los.push(i.lo.clone());
        }
    }
    los.sort_by(|a, b| b.cmp(a));
    let second_lo = los[1].clone();

    let dominant = if mu == 1 && others_hi.as_ref().is_none_or(|h| &top.lo > h) {
        Some(true)
    } else if (mu >= 2 && others_hi.as_ref().is_none_or(|h| &top.lo >= h)) || max_hi <= second_lo {
        Some(false)
    } else {
        None
    };

    let two = int(2);
    let l1 = if mu == 1 && top.lo >= two && others_hi.as_ref().is_none_or(|h| top.lo >= &two * h) {
        Some(true)
    } else if max_hi < two || dominant == Some(false) || max_hi < &two * &second_lo {
        Some(false)
    } else {
        None
    };
    GapCell { l1, dominant }
}

/// Largest modulus among the groups, as a rational upper bound (used only
/// to order places).
pub fn spectral_radius_bound(groups: &[WedgeModulus]) -> Rational {
    groups
        .iter()
        .map(|g| match &g.value {
            ModulusValue::Archimedean(i) => i.hi.clone(),
            ModulusValue::Padic(p) => p.upper_bound(),
        })
        .max()
        .unwrap_or_else(Rational::one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn exact(vals: &[Rational]) -> Vec<ModulusItem> {
        let mut classes: Vec<Rational> = Vec::new();
        vals.iter()
            .map(|v| {
                let c = classes.iter().position(|x| x == v).unwrap_or_else(|| {
                    classes.push(v.clone());
                    classes.len() - 1
                });
                ModulusItem {
                    value: ModulusValue::Archimedean(RationalInterval::point(v.clone())),
                    class: c,
                }
            })
            .collect()
    }

    #[test]
    fn diagonal_cells() {
        let g = wedge_moduli(&exact(&[int(4), rat(1, 4)]), 1);
        assert_eq!(decide(&g).l1, Some(true));
        let g = wedge_moduli(&exact(&[rat(3, 2), rat(2, 3)]), 1);
        assert_eq!(decide(&g), GapCell { l1: Some(false), dominant: Some(true) });
        let items = exact(&[int(2), int(2), rat(1, 4)]);
        let g = wedge_moduli(&items, 1);
        assert_eq!(decide(&g), GapCell { l1: Some(false), dominant: Some(false) });
        let g = wedge_moduli(&items, 2);
        assert_eq!(decide(&g), GapCell { l1: Some(true), dominant: Some(true) });
    }

    #[test]
    fn overlapping_intervals_are_undecided() {
        let items = vec![
            ModulusItem {
                value: ModulusValue::Archimedean(RationalInterval::new(rat(39, 10), rat(41, 10))),
                class: 0,
            },
            ModulusItem {
                value: ModulusValue::Archimedean(RationalInterval::new(rat(19, 10), rat(21, 10))),
                class: 1,
            },
            ModulusItem {
                value: ModulusValue::Archimedean(RationalInterval::new(rat(1, 9), rat(1, 7))),
                class: 2,
            },
        ];
        let cell = decide(&wedge_moduli(&items, 1));
        assert_eq!(cell.dominant, Some(true));
        assert_eq!(cell.l1, None);
    }

    #[test]
    fn padic_cells() {
        let items: Vec<ModulusItem> = [rat(-2, 1), int(0), int(2)]
            .into_iter()
            .enumerate()
            .map(|(c, v)| ModulusItem {
                value: ModulusValue::Padic(PadicAbs::new(2, v)),
                class: c,
            })
            .collect();
        assert_eq!(decide(&wedge_moduli(&items, 1)).l1, Some(true));
        // rho_2 moduli: 4, 1, 1/4
        assert_eq!(decide(&wedge_moduli(&items, 2)).l1, Some(true));
    }
}
