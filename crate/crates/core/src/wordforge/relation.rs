//! Norm balance between `A` and `B`: either `||B|| <= c ||A||^d`, or the
//! trace of `B` is large enough that the roles of `A` and `B` can be
//! interchanged.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::{apply_balance, balance_exponents, balance_matrix, dominant_split_basis, off_diagonal, real_eigenbasis};
use super::{ab_words, ForgeError, ForgeOptions};
use crate::exactnum::rational::{int, rpow, serde_q};
use crate::exactnum::{GeneratorSet, Matrix, Place, PlaceSet, Rational, Word};
use crate::spectra::char_poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormRelation {
    /// `||B|| <= c ||A||^d`
    BPrecA {
        #[serde(with = "serde_q")]
        c: Rational,
        d: u32,
    },
    /// `||A||^m max_v |Tr B|_v >= ||B||`
    TraceBig { m: u32 },
    /// Roles interchanged; the new pair satisfies `||B|| <= c ||A||^d`.
    Swapped {
        #[serde(with = "serde_q")]
        c: Rational,
        d: u32,
    },
}

/// `A`, `B` in a common basis where `A` is (nearly) diagonal. The words
/// `a_word`, `b_word` are over the two letters `A = g0`, `B = g1` of the
/// original pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugatedPair {
    pub a_word: Word,
    pub b_word: Word,
    /// Current `A` and `B` in the original coordinates.
    pub a: Matrix,
    pub b: Matrix,
    pub basis: Matrix,
    pub a_conj: Matrix,
    pub b_conj: Matrix,
    /// Whether `basis` is a full eigenbasis of `A`.
    pub diagonalised: bool,
    #[serde(with = "serde_q")]
    pub off_diagonal: Rational,
    pub norm_relation: NormRelation,
}

/// `max_{v in S} ||X||_v`
pub fn s_norm(x: &Matrix, s: &PlaceSet) -> Rational {
    s.iter().map(|&v| x.norm_at(v)).max().unwrap_or_else(Rational::zero)
}

fn s_abs(x: &Rational, s: &PlaceSet) -> Rational {
    s.iter().map(|v| v.abs(x)).max().unwrap_or_else(Rational::zero)
}

/// Basis putting `A` in (near) diagonal form: a real eigenbasis when there
/// is one, else a dominant splitting, else nothing.
fn diagonalising_basis(a: &Matrix, bits: u32) -> (Matrix, bool) {
    if let Some(c) = real_eigenbasis(a, bits) {
        return (c, true);
    }
    match dominant_split_basis(a, Place::Archimedean, bits) {
        Some(c) => (c, false),
        None => (Matrix::identity(a.dim()), false),
    }
}

struct Conjugated {
    basis: Matrix,
    a_conj: Matrix,
    b_conj: Matrix,
}

/// Conjugates by `C` and then by the balancing diagonal, keeping the
/// balanced version only if it lowers `||B||_S`.
fn conjugate_balanced(a: &Matrix, b: &Matrix, c: &Matrix, c_inv: &Matrix, s: &PlaceSet) -> Conjugated {
    let a_conj = a.conjugate_by(c, c_inv);
    let b_conj = b.conjugate_by(c, c_inv);
    let ks = balance_exponents(&b_conj, Place::Archimedean);
    if ks.iter().all(|&k| k == ks[0]) {
        return Conjugated {
            basis: c.clone(),
            a_conj,
            b_conj,
        };
    }
    let bb = apply_balance(&b_conj, &ks, 2);
    if s_norm(&bb, s) < s_norm(&b_conj, s) {
        Conjugated {
            basis: c * &balance_matrix(&ks, 2),
            a_conj: apply_balance(&a_conj, &ks, 2),
            b_conj: bb,
        }
    } else {
        Conjugated {
            basis: c.clone(),
            a_conj,
            b_conj,
        }
    }
}

/// Least `d <= d_max` with `||B|| <= ||A||^d`.
fn prec_exponent(a_norm: &Rational, b_norm: &Rational, d_max: u32) -> Option<u32> {
    (1..=d_max).find(|&d| *b_norm <= rpow(a_norm, d))
}

/// Least `m <= m_cap` with `||A||^m max_v |Tr B|_v >= ||B||`.
fn trace_exponent(a_norm: &Rational, b: &Matrix, b_norm: &Rational, s: &PlaceSet, m_cap: u32) -> Option<u32> {
    let t = s_abs(&b.trace(), s);
    if t.is_zero() {
        return None;
    }
    (0..=m_cap).find(|&m| rpow(a_norm, m) * &t >= *b_norm)
}

fn relation_for(c: &Conjugated, s: &PlaceSet, opts: &ForgeOptions) -> Option<NormRelation> {
    let an = s_norm(&c.a_conj, s);
    let bn = s_norm(&c.b_conj, s);
    if let Some(d) = prec_exponent(&an, &bn, opts.d_max) {
        return Some(NormRelation::BPrecA { c: Rational::one(), d });
    }
    trace_exponent(&an, &c.b_conj, &bn, s, opts.m_cap).map(|m| NormRelation::TraceBig { m })
}

/// Diagonalises `A`, balances `B` by a diagonal conjugation from the
/// centraliser, and certifies one of the two norm relations, replacing `B`
/// by a short word in `A`, `B` when needed.
pub fn balance_or_trace(a: &Matrix, b: &Matrix, s: &PlaceSet, opts: &ForgeOptions) -> Result<ConjugatedPair, ForgeError> {
    let (c, diagonalised) = diagonalising_basis(a, opts.bits);
    let c_inv = c.inverse().expect("bases are invertible");
    let pair = GeneratorSet::new(vec![a.clone(), b.clone()])?;
    let build = |w: &Word| -> Option<ConjugatedPair> {
        let bw = pair.evaluate(w).ok()?;
        let conj = conjugate_balanced(a, &bw, &c, &c_inv, s);
        let rel = relation_for(&conj, s, opts)?;
        Some(ConjugatedPair {
            a_word: Word::generator(0),
            b_word: w.clone(),
            a: a.clone(),
            b: bw,
            off_diagonal: off_diagonal(&conj.a_conj, Place::Archimedean),
            basis: conj.basis,
            a_conj: conj.a_conj,
            b_conj: conj.b_conj,
            diagonalised,
            norm_relation: rel,
        })
    };
    if let Some(p) = build(&Word::generator(1)) {
        return Ok(p);
    }
    for len in 2..=opts.word_cap {
        let words: Vec<Word> = ab_words(len).into_iter().filter(|w| w.letters().iter().any(|l| l.generator == 1)).collect();
        let hit = words.par_iter().map(&build).find_first(|p| p.is_some()).flatten();
        if let Some(p) = hit {
            return Ok(p);
        }
    }
    Err(ForgeError::BalanceFailed(opts.word_cap))
}

/// Conditions on the pair coming out of `balance_or_trace`: the trace
/// relation holds and `||A||^(2m) <= ||B||`, so `B` is the better
/// candidate for the expanding element.
pub fn swap_wanted(pair: &ConjugatedPair, s: &PlaceSet) -> bool {
    match pair.norm_relation {
        NormRelation::TraceBig { m } => rpow(&s_norm(&pair.a_conj, s), 2 * m) <= s_norm(&pair.b_conj, s),
        _ => false,
    }
}

/// Diagonalises `B` with a well-conditioned basis and interchanges roles.
pub fn swap_roles(pair: &ConjugatedPair, s: &PlaceSet, opts: &ForgeOptions) -> Result<ConjugatedPair, ForgeError> {
    if !matches!(pair.norm_relation, NormRelation::TraceBig { .. }) {
        return Err(ForgeError::SwapNotApplicable);
    }
    if !char_poly(&pair.b).poly().is_squarefree() {
        return Err(ForgeError::SwapFailed("B has a repeated eigenvalue".into()));
    }
    let (c, _) = diagonalising_basis(&pair.b, opts.bits);
    let c_inv = c.inverse().expect("bases are invertible");
    let bn = s_norm(&pair.b, s);
    let cond = s_norm(&c, s).max(s_norm(&c_inv, s));
    if bn <= int(1) || prec_exponent(&bn, &cond, opts.d_max).is_none() {
        return Err(ForgeError::SwapFailed("eigenbasis of B is badly conditioned".into()));
    }
    let conj = conjugate_balanced(&pair.b, &pair.a, &c, &c_inv, s);
    let an = s_norm(&conj.a_conj, s);
    let d = prec_exponent(&an, &s_norm(&conj.b_conj, s), opts.d_max)
        .ok_or_else(|| ForgeError::SwapFailed("swapped pair is not balanced".into()))?;
    Ok(ConjugatedPair {
        a_word: pair.b_word.clone(),
        b_word: pair.a_word.clone(),
        a: pair.b.clone(),
        b: pair.a.clone(),
        off_diagonal: off_diagonal(&conj.a_conj, Place::Archimedean),
        basis: conj.basis,
        a_conj: conj.a_conj,
        b_conj: conj.b_conj,
        diagonalised: real_eigenbasis(&pair.b, opts.bits).is_some(),
        norm_relation: NormRelation::Swapped { c: Rational::one(), d },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{pow2, rat};

    fn arch() -> PlaceSet {
        PlaceSet::archimedean_only()
    }

    #[test]
    fn already_balanced() {
        let a = Matrix::diag(&[int(4), rat(1, 4)]);
        let b = Matrix::from_i64(&[&[1, 1], &[1, 2]]);
        let p = balance_or_trace(&a, &b, &arch(), &ForgeOptions::default()).unwrap();
        assert_eq!(p.norm_relation, NormRelation::BPrecA { c: int(1), d: 1 });
        assert_eq!(p.b_word, Word::generator(1));
    }

    #[test]
    fn centraliser_rescales() {
        let a = Matrix::diag(&[int(4), rat(1, 4)]);
        let b = Matrix::new(2, vec![int(1), pow2(16), int(0), int(1)]).unwrap();
        let p = balance_or_trace(&a, &b, &arch(), &ForgeOptions::default()).unwrap();
        assert_eq!(p.b_conj, Matrix::from_i64(&[&[1, 1], &[0, 1]]));
        assert!(matches!(p.norm_relation, NormRelation::BPrecA { d: 1, .. }));
        assert_eq!(p.a_conj, a);
    }

    #[test]
    fn diagonal_trace_then_swap() {
        let a = Matrix::diag(&[int(2), rat(1, 2)]);
        let b = Matrix::diag(&[pow2(10), pow2(-10)]);
        let p = balance_or_trace(&a, &b, &arch(), &ForgeOptions::default()).unwrap();
        assert_eq!(p.norm_relation, NormRelation::TraceBig { m: 0 });
        assert!(swap_wanted(&p, &arch()));
        let q = swap_roles(&p, &arch(), &ForgeOptions::default()).unwrap();
        assert_eq!(q.a, b);
        assert_eq!(q.b, a);
        assert!(s_norm(&q.b_conj, &arch()) <= s_norm(&q.a_conj, &arch()));
        assert!(matches!(q.norm_relation, NormRelation::Swapped { d: 1, .. }));
    }

    #[test]
    fn triangular_swap() {
        let t = pow2(10);
        let b = Matrix::new(2, vec![t.clone(), int(1), int(0), int(1) / &t]).unwrap();
        let a = Matrix::diag(&[int(2), rat(1, 2)]);
        let p = balance_or_trace(&a, &b, &arch(), &ForgeOptions::default()).unwrap();
        assert!(matches!(p.norm_relation, NormRelation::TraceBig { .. }));
        let q = swap_roles(&p, &arch(), &ForgeOptions::default()).unwrap();
        assert!(matches!(q.norm_relation, NormRelation::Swapped { .. }));
        assert!(q.off_diagonal < pow2(-40));
    }

    #[test]
    fn swap_requires_trace_relation() {
        let a = Matrix::diag(&[int(4), rat(1, 4)]);
        let b = Matrix::from_i64(&[&[1, 1], &[1, 2]]);
        let p = balance_or_trace(&a, &b, &arch(), &ForgeOptions::default()).unwrap();
        assert!(matches!(swap_roles(&p, &arch(), &ForgeOptions::default()), Err(ForgeError::SwapNotApplicable)));
    }
}
