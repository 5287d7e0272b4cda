use num_traits::One;
use serde::{Deserialize, Serialize};

use super::amplify::{amplify_entry, AmplifiedEntry};
use super::basis::WedgeFrame;
use super::{ForgeError, ForgeOptions};
use crate::exactnum::rational::rpow;
use crate::exactnum::{GeneratorSet, Matrix, Rational, Word};
use crate::pingpong::conditions::sort_desc;
use crate::pingpong::{l_conditions_from, LConditions};
use crate::spectra::{gap, items_at, ModulusValue, SpectraError, GAP_PRECISIONS};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct L2Outcome {
    /// Replacement for `B`, over `A = g0`, `B = g1`.
    pub b_word: Word,
    pub conditions: LConditions,
    pub amplification: Option<AmplifiedEntry>,
    #[serde(skip)]
    pub frame: Option<WedgeFrame>,
}

/// Gap verdict and moduli of `rho_m(A)` at the frame's place, from the
/// spectrum of `A` itself.
fn wedge_gap(a: &Matrix, frame: &WedgeFrame) -> Result<(bool, Vec<ModulusValue>), ForgeError> {
    for &prec in &GAP_PRECISIONS {
        let items = match items_at(a, frame.place, prec) {
            Ok(items) => items,
            Err(SpectraError::PrecisionExhausted) => break,
            Err(e) => return Err(e.into()),
        };
        let groups = gap::wedge_moduli(&items, frame.m);
        if let Some(l1) = gap::decide(&groups).l1 {
            let mut moduli: Vec<ModulusValue> = groups
                .into_iter()
                .flat_map(|g| std::iter::repeat_n(g.value, g.multiplicity))
                .collect();
            sort_desc(&mut moduli);
            return Ok((l1, moduli));
        }
        if !frame.place.is_archimedean() {
            break;
        }
    }
    Err(ForgeError::Undecided(frame.place))
}

/// Makes `(rho_m(B))_11` large relative to `||rho_m(A)||` by replacing `B`
/// with a word `B A^k ... B` from the amplifier, trying thresholds
/// `c = ||A||^-mc` for `mc = 0..=3`.
pub fn ensure_l2(a: &Matrix, b: &Matrix, frame: &WedgeFrame, opts: &ForgeOptions) -> Result<L2Outcome, ForgeError> {
    let (l1, moduli) = wedge_gap(a, frame)?;
    let cond = l_conditions_from(frame.place, l1, moduli.clone(), &frame.a_hat, &frame.b_hat, &opts.constants);
    if cond.l2 {
        return Ok(L2Outcome {
            b_word: Word::generator(1),
            conditions: cond,
            amplification: None,
            frame: Some(frame.clone()),
        });
    }
    let pair = GeneratorSet::new(vec![a.clone(), b.clone()])?;
    let an = frame.a_hat.norm_at(frame.place);
    let mut seen: Vec<Word> = Vec::new();
    for mc in 0..=3u32 {
        let c = if an > Rational::one() { Rational::one() / rpow(&an, mc) } else { Rational::one() };
        let Ok(amp) = amplify_entry(&frame.a_hat, &frame.b_hat, (0, 0), &c, frame.place) else {
            continue;
        };
        if amp.word.len() > opts.word_cap || seen.contains(&amp.word) {
            continue;
        }
        seen.push(amp.word.clone());
        let nb = pair.evaluate(&amp.word)?;
        let f2 = frame.with_b(&nb)?;
        let cond = l_conditions_from(frame.place, l1, moduli.clone(), &f2.a_hat, &f2.b_hat, &opts.constants);
        if cond.l2 {
            return Ok(L2Outcome {
                b_word: amp.word.clone(),
                conditions: cond,
                amplification: Some(amp),
                frame: Some(f2),
            });
        }
    }
    Err(ForgeError::L2Unreachable(opts.word_cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};
    use crate::exactnum::Place;

    #[test]
    fn already_large() {
        let a = Matrix::diag(&[int(4), rat(1, 4)]);
        let b = Matrix::from_i64(&[&[1, 1], &[1, 2]]);
        let f = WedgeFrame::new(&a, &b, Place::Archimedean, 1, 64).unwrap();
        let r = ensure_l2(&a, &b, &f, &ForgeOptions::default()).unwrap();
        assert_eq!(r.b_word, Word::generator(1));
        assert!(r.conditions.l1 && r.conditions.l2);
    }

    #[test]
    fn zero_corner_is_amplified() {
        let a = Matrix::diag(&[int(4), rat(1, 4)]);
        let b = Matrix::from_i64(&[&[0, 1], &[-1, 1]]);
        let f = WedgeFrame::new(&a, &b, Place::Archimedean, 1, 64).unwrap();
        let r = ensure_l2(&a, &b, &f, &ForgeOptions::default()).unwrap();
        assert_eq!(r.b_word.to_string(), "+1 +1");
        assert!(r.conditions.l2);
        assert!(r.amplification.unwrap().vandermonde);
    }

    #[test]
    fn monomial_pair_is_rejected() {
        // every word in diag(A) and antidiagonal B is monomial, so B e1 stays
        // on a coordinate axis
        let a = Matrix::diag(&[int(4), rat(1, 4)]);
        let b = Matrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let f = WedgeFrame::new(&a, &b, Place::Archimedean, 1, 64).unwrap();
        assert!(matches!(ensure_l2(&a, &b, &f, &ForgeOptions::default()), Err(ForgeError::L2Unreachable(_))));
    }

    #[test]
    fn reducible_pair_is_rejected() {
        let a = Matrix::diag(&[int(4), rat(1, 4)]);
        let b = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
        let f = WedgeFrame::new(&a, &b, Place::Archimedean, 1, 64).unwrap();
        assert!(matches!(ensure_l2(&a, &b, &f, &ForgeOptions::default()), Err(ForgeError::L2Unreachable(_))));
    }
}
