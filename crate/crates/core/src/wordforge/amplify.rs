//! Making a chosen entry of `B` large by a short word `B A^k1 B ... B`,
//! following a path of large entries of `B`. For a two-step path through
//! `t` and diagonal `A = diag(a_s)`,
//! `(B A^k B)_ij = sum_s B_is B_sj a_s^k`, so the values over `k < n` are a
//! Vandermonde transform of the coefficients and cannot all be small when
//! `B_it B_tj` is large.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ForgeError;
use crate::exactnum::rational::{rpow, serde_q};
use crate::exactnum::{Letter, Matrix, Place, Rational, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmplifiedEntry {
    /// Word over `A = g0`, `B = g1`.
    pub word: Word,
    /// Path of large entries `i = t0 -> t1 -> ... -> j`.
    pub path: Vec<usize>,
    /// Powers of `A` between consecutive `B`s.
    pub powers: Vec<u32>,
    /// Exact target entry of the word.
    #[serde(with = "serde_q")]
    pub entry: Rational,
    /// `|entry|_v >= lower_bound`.
    #[serde(with = "serde_q")]
    pub lower_bound: Rational,
    /// `lower_bound = p ||A||^-k ||B||^l` with `k = 0`, `l = path length`.
    #[serde(with = "serde_q")]
    pub p: Rational,
    pub l: u32,
    /// The bound follows from the Vandermonde inversion rather than from
    /// the achieved value alone.
    pub vandermonde: bool,
}

/// `B A^k1 B ... A^kr B` over the letters `A = g0`, `B = g1`.
pub fn spell_word(powers: &[u32]) -> Word {
    let a = Letter::new(0, false);
    let b = Letter::new(1, false);
    let mut letters = vec![b];
    for &k in powers {
        letters.extend(std::iter::repeat_n(a, k as usize));
        letters.push(b);
    }
    Word::from_letters(letters)
}

/// Edges `s -> t` with `|B_st|_v > c ||B||_v`.
pub fn large_entry_graph(b: &Matrix, c: &Rational, place: Place) -> Vec<Vec<bool>> {
    let n = b.dim();
    let level = c * b.norm_at(place);
    (0..n).map(|s| (0..n).map(|t| place.abs(&b[(s, t)]) > level).collect()).collect()
}

fn shortest_path(g: &[Vec<bool>], i: usize, j: usize) -> Option<Vec<usize>> {
    let n = g.len();
    if g[i][j] {
        return Some(vec![i, j]);
    }
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut q = VecDeque::from([i]);
    seen[i] = true;
    while let Some(s) = q.pop_front() {
        for t in 0..n {
            if g[s][t] && t == j {
                let mut path = vec![j, s];
                let mut cur = s;
                while cur != i {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            if g[s][t] && !seen[t] {
                seen[t] = true;
                prev[t] = s;
                q.push_back(t);
            }
        }
    }
    None
}

fn word_entry(a_pows: &[Matrix], b: &Matrix, powers: &[u32], (i, j): (usize, usize)) -> Rational {
    let mut acc = b.clone();
    for &k in powers {
        acc = &(&acc * &a_pows[k as usize]) * b;
    }
    acc[(i, j)].clone()
}

/// Row `t` of the inverse Vandermonde matrix `V_ks = a_s^k`, reduced to the
/// factor that turns `max_k |y_k|` into a bound on `|x_t|`.
fn vandermonde_factor(diag: &[Rational], t: usize, place: Place) -> Option<Rational> {
    let n = diag.len();
    let rows: Vec<Rational> = (0..n).flat_map(|k| diag.iter().map(move |a| rpow(a, k as u32))).collect();
    let v = Matrix::new(n, rows).ok()?;
    let inv = v.inverse()?;
    let row = inv.row(t);
    Some(match place {
        Place::Archimedean => row.iter().map(|x| x.abs()).sum(),
        Place::Finite(_) => row.iter().map(|x| place.abs(x)).max()?,
    })
}

/// Finds a word in `A`, `B` whose `target` entry is large at `place`.
pub fn amplify_entry(a: &Matrix, b: &Matrix, target: (usize, usize), c: &Rational, place: Place) -> Result<AmplifiedEntry, ForgeError> {
    let n = a.dim();
    let (i, j) = target;
    let g = large_entry_graph(b, c, place);
    let path = shortest_path(&g, i, j).ok_or(ForgeError::NotConnected { i, j })?;
    let bn = b.norm_at(place);
    let hops = path.len() - 1;
    let finish = |powers: Vec<u32>, entry: Rational, lower: Rational, vandermonde: bool| {
        let l = hops as u32;
        AmplifiedEntry {
            word: spell_word(&powers),
            path: path.clone(),
            powers,
            p: &lower / rpow(&bn, l),
            entry,
            lower_bound: lower,
            l,
            vandermonde,
        }
    };
    if hops == 1 {
        let e = b[(i, j)].clone();
        let lo = place.abs(&e);
        return Ok(finish(vec![], e, lo, false));
    }
    let mut a_pows = vec![Matrix::identity(n)];
    for k in 1..n {
        a_pows.push(&a_pows[k - 1] * a);
    }
    // all tuples of powers in 0..n, lexicographic; strict improvement only
    let slots = hops - 1;
    let mut best: Option<(Vec<u32>, Rational, Rational)> = None;
    let mut powers = vec![0u32; slots];
    loop {
        let e = word_entry(&a_pows, b, &powers, (i, j));
        let v = place.abs(&e);
        if best.as_ref().is_none_or(|(_, _, bv)| v > *bv) {
            best = Some((powers.clone(), e, v));
        }
        let Some(pos) = (0..slots).rev().find(|&s| (powers[s] as usize) < n - 1) else {
            break;
        };
        powers[pos] += 1;
        for p in powers.iter_mut().skip(pos + 1) {
            *p = 0;
        }
    }
    let (powers, entry, achieved) = best.expect("at least one tuple");
    let diag: Vec<Rational> = (0..n).map(|s| a[(s, s)].clone()).collect();
    let distinct = (0..n).all(|s| (0..s).all(|r| diag[r] != diag[s]));
    if hops == 2 && a.is_diagonal() && distinct {
        let t = path[1];
        let x_t = place.abs(&(&b[(i, t)] * &b[(t, j)]));
        if let Some(f) = vandermonde_factor(&diag, t, place).filter(|f| !f.is_zero()) {
            let lower = x_t / f;
            debug_assert!(achieved >= lower);
            return Ok(finish(powers, entry, lower, true));
        }
    }
    Ok(finish(powers, entry, achieved, false))
}
