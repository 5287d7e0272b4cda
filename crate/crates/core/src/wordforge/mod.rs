//! Preparing a pair `(A, B)` for ping-pong: a basis adapted to `A`, the
//! norm balance between `A` and `B` (or the role swap), the choice of place
//! and exterior power, and the amplification of `B`'s corner entry.

pub mod almost;
pub mod amplify;
pub mod basis;
pub mod l2;
pub mod relation;
pub mod select;
pub mod trace;

use thiserror::Error;

use crate::exactnum::rational::pow2;
use crate::exactnum::{ExactError, Letter, Place, Rational, Word};
use crate::pingpong::{Constants, PingPongError};
use crate::spectra::{GapGrid, SpectraError};

pub use almost::{algebra_defect, build_almost_algebra, AlgebraDefect, AlmostAlgebra};
pub use amplify::{amplify_entry, AmplifiedEntry};
pub use basis::WedgeFrame;
pub use l2::{ensure_l2, L2Outcome};
pub use relation::{balance_or_trace, swap_roles, swap_wanted, ConjugatedPair, NormRelation};
pub use select::{select_place_and_wedge, Selection};
pub use trace::TraceRecord;

#[derive(Debug, Error)]
pub enum ForgeError {
    #[error("no norm relation certified with words up to length {0}")]
    BalanceFailed(usize),
    #[error("role swap needs the trace relation")]
    SwapNotApplicable,
    #[error("role swap failed: {0}")]
    SwapFailed(String),
    #[error("no place and wedge power with a certified gap")]
    NoGap(GapGrid),
    #[error("no dominant direction found at {0}")]
    NoSplitting(Place),
    #[error("gap undecided at {0}")]
    Undecided(Place),
    #[error("entry ({i}, {j}) not reachable through large entries")]
    NotConnected { i: usize, j: usize },
    #[error("block {0} is malformed or has norm above 1")]
    InvalidBlock(usize),
    #[error("almost-algebra dimension did not stabilise")]
    NoStabilization,
    #[error("(L2) not reachable with words up to length {0}")]
    L2Unreachable(usize),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    PingPong(#[from] PingPongError),
}

#[derive(Clone, Debug)]
pub struct ForgeOptions {
    /// Working precision of approximate eigenvectors.
    pub bits: u32,
    /// Largest power of `||A||` allowed in the trace relation.
    pub m_cap: u32,
    /// Longest replacement word for `B`.
    pub word_cap: usize,
    /// Largest exponent `d` tried in `||B|| <= ||A||^d`.
    pub d_max: u32,
    pub constants: Constants,
    /// Ratio between consecutive rungs of the almost-algebra ladder.
    pub delta: Rational,
}

impl Default for ForgeOptions {
    fn default() -> Self {
        ForgeOptions {
            bits: 64,
            m_cap: 4,
            word_cap: 8,
            d_max: 2,
            constants: Constants::default(),
            delta: pow2(-4),
        }
    }
}

/// Freely reduced words of length exactly `len` over `A, A^-1, B, B^-1`,
/// in shortlex order.
pub fn ab_words(len: usize) -> Vec<Word> {
    let alphabet = [Letter::new(0, false), Letter::new(0, true), Letter::new(1, false), Letter::new(1, true)];
    let mut level: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(level.len() * 3);
        for w in &level {
            for &l in &alphabet {
                if w.last().is_some_and(|&p| p == l.inv()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        level = next;
    }
    level.into_iter().map(Word::from_letters).collect()
}

/// `A`, `a`, `B`, `b` spelling of a word over the pair.
pub fn spell(w: &Word) -> String {
    w.letters()
        .iter()
        .map(|l| match (l.generator, l.inverse) {
            (0, false) => 'A',
            (0, true) => 'a',
            (1, false) => 'B',
            (1, true) => 'b',
            _ => '?',
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_counts() {
        assert_eq!(ab_words(1).len(), 4);
        assert_eq!(ab_words(3).len(), 36);
        assert_eq!(spell(&ab_words(2)[0]), "AA");
        assert_eq!(spell(&ab_words(2)[1]), "AB");
    }
}
