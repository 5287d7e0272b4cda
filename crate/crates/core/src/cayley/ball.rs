use std::collections::HashSet;

use rayon::prelude::*;

use crate::exactnum::{GeneratorSet, Letter, Matrix, Word};

/// Result of a breadth-first sweep: sphere sizes for every completed radius,
/// and optionally the elements themselves with their shortlex-least words.
pub(crate) struct Sweep {
    pub sizes: Vec<u64>,
    pub elements: Vec<(Word, Matrix)>,
    pub exhausted_budget: bool,
}

/// Breadth-first enumeration over the alphabet `g0, g0^-1, g1, ...`.
///
/// Right multiplication by a letter moves word length by at most one, so
/// deduplication only needs the previous, current and next spheres.
/// Products are formed in parallel and inserted sequentially in frontier
/// order, which keeps counts and chosen words independent of scheduling.
pub(crate) fn sweep(gens: &GeneratorSet, radius: usize, budget: u64, keep: bool) -> Sweep {
    let alphabet: Vec<(Letter, Matrix)> = gens
        .alphabet()
        .into_iter()
        .map(|l| (l, gens.letter(l).expect("alphabet letter").clone()))
        .collect();
    let n = gens.dim();
    let id = Matrix::identity(n);
    let mut sizes = vec![1u64];
    let mut elements = Vec::new();
    if keep {
        elements.push((Word::empty(), id.clone()));
    }
    let mut prev: HashSet<Matrix> = HashSet::new();
    let mut cur: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut frontier: Vec<(Word, Matrix)> = vec![(Word::empty(), id)];
    let mut total = 1u64;
    for _ in 1..=radius {
        let products: Vec<Vec<Matrix>> = frontier
            .par_iter()
            .map(|(_, x)| alphabet.iter().map(|(_, s)| x * s).collect())
            .collect();
        let mut next: HashSet<Matrix> = HashSet::new();
        let mut next_frontier = Vec::new();
        for ((w, _), prods) in frontier.iter().zip(products) {
            for ((letter, _), y) in alphabet.iter().zip(prods) {
                if prev.contains(&y) || cur.contains(&y) || next.contains(&y) {
                    continue;
                }
                next.insert(y.clone());
                let mut w2 = w.clone();
                w2.push(*letter);
                next_frontier.push((w2, y));
            }
        }
        total += next.len() as u64;
        if total > budget {
            return Sweep {
                sizes,
                elements,
                exhausted_budget: true,
            };
        }
        sizes.push(total);
        if keep {
            elements.extend(next_frontier.iter().cloned());
        }
        prev = std::mem::replace(&mut cur, next);
        frontier = next_frontier;
    }
    Sweep {
        sizes,
        elements,
        exhausted_budget: false,
    }
}
