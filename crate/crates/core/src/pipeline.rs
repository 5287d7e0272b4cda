//! The full certification run: regular pair, norm balance, place and wedge
//! power, corner amplification, exponent search, certificate and oracle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{find_regular_pair, CayleyError};
use crate::config::RunConfig;
use crate::exactnum::rational::format_rational;
use crate::exactnum::{GeneratorSet, Matrix, PlaceSet, Word};
use crate::pingpong::{derive_exponent, IssueRequest, OracleReport, PingPongCertificate, PingPongError};
use crate::wordforge::almost::ad_blocks;
use crate::wordforge::relation::s_norm;
use crate::wordforge::select::select_for;
use crate::wordforge::{
    balance_or_trace, build_almost_algebra, ensure_l2, spell, swap_roles, swap_wanted, ConjugatedPair, ForgeError, NormRelation,
    TraceRecord, WedgeFrame,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    FindRegularPair,
    BalanceOrTrace,
    SelectPlaceAndWedge,
    EnsureL2,
    DeriveExponent,
    FreenessOracle,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Forge(#[from] ForgeError),
    #[error(transparent)]
    PingPong(#[from] PingPongError),
}

#[derive(Debug)]
pub struct Failure {
    pub stage: Stage,
    pub error: PipelineError,
    pub trace: Vec<TraceRecord>,
}

/// Machine-readable form of a failure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FailureReport {
    pub stage: Stage,
    pub error: String,
    pub trace: Vec<TraceRecord>,
}

impl Failure {
    pub fn report(&self) -> FailureReport {
        FailureReport {
            stage: self.stage,
            error: self.error.to_string(),
            trace: self.trace.clone(),
        }
    }

    pub fn budget_exceeded(&self) -> bool {
        matches!(
            self.error,
            PipelineError::Cayley(CayleyError::BudgetExceeded { .. })
                | PipelineError::PingPong(PingPongError::OracleBudget { .. })
                | PipelineError::Forge(ForgeError::PingPong(PingPongError::OracleBudget { .. }))
        )
    }
}

#[derive(Clone, Debug)]
pub struct Certified {
    pub certificate: PingPongCertificate,
    pub oracle: OracleReport,
    pub trace: Vec<TraceRecord>,
}

struct Run<'a> {
    gens: &'a GeneratorSet,
    s: &'a PlaceSet,
    cfg: &'a RunConfig,
    trace: Vec<TraceRecord>,
}

fn relation_record(step: &str, r: &NormRelation) -> TraceRecord {
    match r {
        NormRelation::BPrecA { c, d } => TraceRecord::new(step).relation("b_prec_a").constant("c", format_rational(c)).constant("d", d),
        NormRelation::TraceBig { m } => TraceRecord::new(step).relation("trace_big").constant("m", m),
        NormRelation::Swapped { c, d } => TraceRecord::new(step).relation("swapped").constant("c", format_rational(c)).constant("d", d),
    }
}

impl Run<'_> {
    fn fail(self, stage: Stage, e: impl Into<PipelineError>) -> Failure {
        Failure {
            stage,
            error: e.into(),
            trace: self.trace,
        }
    }

    /// Pairs to try, best first.
    fn candidates(&mut self, cp: ConjugatedPair) -> Vec<ConjugatedPair> {
        if !matches!(cp.norm_relation, NormRelation::TraceBig { .. }) {
            return vec![cp];
        }
        let mut fallback = cp.clone();
        if let NormRelation::TraceBig { m } = cp.norm_relation {
            // without the swap inequality, ||B|| < ||A||^(2m)
            if !swap_wanted(&cp, self.s) {
                fallback.norm_relation = NormRelation::BPrecA {
                    c: num_traits::One::one(),
                    d: 2 * m,
                };
                self.trace.push(relation_record("balance_or_trace", &fallback.norm_relation).flag("from_trace_relation"));
                return vec![fallback];
            }
        }
        match swap_roles(&cp, self.s, &self.cfg.forge_options(self.cfg.precisions[0])) {
            Ok(sw) => {
                self.trace.push(relation_record("swap_roles", &sw.norm_relation).lengths(&[sw.a_word.len(), sw.b_word.len()]));
                vec![sw, cp]
            }
            Err(e) => {
                self.trace.push(TraceRecord::new("swap_roles").flag("swap_failed").detail(&e.to_string()));
                vec![cp]
            }
        }
    }

    fn attempt(&mut self, cp: &ConjugatedPair, wa0: &Word, wb0: &Word) -> Result<Certified, (Stage, PipelineError)> {
        let images = [wa0.clone(), wb0.clone()];
        let mut wa = cp.a_word.substitute(&images).map_err(|e| (Stage::BalanceOrTrace, ForgeError::from(e).into()))?;
        let wb = cp.b_word.substitute(&images).map_err(|e| (Stage::BalanceOrTrace, ForgeError::from(e).into()))?;
        let mut a = cp.a.clone();
        let b = cp.b.clone();
        let mut squarings = 0;
        let sel = loop {
            match select_for(&a, self.s) {
                Ok(sel) => break sel,
                Err(ForgeError::NoGap(grid)) if squarings < self.cfg.max_squarings && grid.entries.iter().any(|e| e.cell.dominant == Some(true)) => {
                    a = &a * &a;
                    wa = wa.concat(&wa);
                    squarings += 1;
                }
                Err(e) => return Err((Stage::SelectPlaceAndWedge, e.into())),
            }
        };
        self.trace.push(
            TraceRecord::new("select_place_and_wedge")
                .constant("place", sel.place)
                .constant("m", sel.m)
                .constant("squarings", squarings)
                .constant("norm", format_rational(&s_norm(&a, self.s)))
                .lengths(&[wa.len()]),
        );
        let mut last = (Stage::DeriveExponent, PipelineError::PingPong(PingPongError::ExponentSearchExhausted(self.cfg.exponent_cap)));
        for &bits in &self.cfg.precisions {
            let opts = self.cfg.forge_options(bits);
            let frame = WedgeFrame::new(&a, &b, sel.place, sel.m, bits).map_err(|e| (Stage::EnsureL2, e.into()))?;
            let l2 = ensure_l2(&a, &b, &frame, &opts).map_err(|e| (Stage::EnsureL2, e.into()))?;
            let wb2 = l2.b_word.substitute(&[wa.clone(), wb.clone()]).map_err(|e| (Stage::EnsureL2, ForgeError::from(e).into()))?;
            let mut rec = TraceRecord::new("ensure_l2")
                .relation(if l2.amplification.is_some() { "amplified" } else { "direct" })
                .constant("l1", l2.conditions.l1)
                .constant("l2", l2.conditions.l2)
                .constant("l3", l2.conditions.l3)
                .constant("b_word", spell(&l2.b_word))
                .lengths(&[wa.len(), wb2.len()]);
            if let Some(amp) = &l2.amplification {
                rec = rec.constant("p", format_rational(&amp.p)).constant("l", amp.l);
                if !amp.vandermonde {
                    rec = rec.flag("almost_algebra_path");
                    if frame.a_hat.dim() <= 4 {
                        let diag: Vec<_> = (0..frame.a_hat.dim()).map(|i| frame.a_hat[(i, i)].clone()).collect();
                        if let Ok(aa) = build_almost_algebra(&ad_blocks(&diag, &frame.b_hat), &num_traits::One::one(), &opts.delta) {
                            rec = rec.constant("almost_algebra_dimension", aa.dimension).constant("closure_defect", format_rational(&aa.closure_defect));
                        }
                    }
                }
            }
            if !l2.conditions.l3 {
                rec = rec.flag("l3_not_certified");
            }
            self.trace.push(rec);
            let frame = l2.frame.expect("ensure_l2 returns its frame");
            match derive_exponent(&frame.a_hat, &frame.b_hat, sel.place, self.cfg.exponent_cap, self.cfg.radius_steps) {
                Ok((e, r)) => {
                    self.trace.push(
                        TraceRecord::new("derive_exponent")
                            .constant("exponent", e)
                            .constant("cone_radius", format_rational(&r))
                            .constant("bits", bits),
                    );
                    let issued = PingPongCertificate::issue(IssueRequest {
                        gens: self.gens,
                        word_a: &wa,
                        word_b: &wb2,
                        place: sel.place,
                        wedge_m: sel.m,
                        exponent: e,
                        cone_radius: &r,
                        basis: &frame.basis,
                        oracle_depth: self.cfg.oracle_depth,
                        oracle_budget: self.cfg.oracle_budget,
                    });
                    let (cert, oracle) = issued.map_err(|e| (Stage::FreenessOracle, e.into()))?;
                    self.trace.push(
                        TraceRecord::new("certificate")
                            .constant("growth_bound", format_rational(&cert.growth_bound))
                            .constant("oracle_words", oracle.words_checked)
                            .lengths(&[cert.len_ab, cert.len_a2b]),
                    );
                    return Ok(Certified {
                        certificate: cert,
                        oracle,
                        trace: std::mem::take(&mut self.trace),
                    });
                }
                Err(e) => {
                    self.trace.push(TraceRecord::new("derive_exponent").constant("bits", bits).flag("exhausted"));
                    last = (Stage::DeriveExponent, e.into());
                }
            }
        }
        Err(last)
    }
}

/// Runs every step; on success the certificate has already passed the
/// cone checks and the freeness oracle.
pub fn certify(gens: &GeneratorSet, s: &PlaceSet, cfg: &RunConfig) -> Result<Certified, Failure> {
    let mut run = Run {
        gens,
        s,
        cfg,
        trace: Vec::new(),
    };
    let pair = match find_regular_pair(gens, cfg.search_depth, s, cfg.element_budget) {
        Ok(p) => p,
        Err(e) => return Err(run.fail(Stage::FindRegularPair, e)),
    };
    run.trace.push(
        TraceRecord::new("find_regular_pair")
            .constant("word_a", &pair.word_a)
            .constant("word_b", &pair.word_b)
            .lengths(&[pair.word_a.len(), pair.word_b.len()])
            .detail(&pair.genericity),
    );
    let cp = match balance_or_trace(&pair.matrix_a, &pair.matrix_b, s, &cfg.forge_options(cfg.precisions[0])) {
        Ok(cp) => cp,
        Err(e) => return Err(run.fail(Stage::BalanceOrTrace, e)),
    };
    let mut rec = relation_record("balance_or_trace", &cp.norm_relation)
        .constant("b_word", spell(&cp.b_word))
        .constant("off_diagonal", format_rational(&cp.off_diagonal))
        .lengths(&[cp.a_word.len(), cp.b_word.len()]);
    if !cp.diagonalised {
        rec = rec.flag("not_diagonalised");
    }
    run.trace.push(rec);
    let mut last = None;
    for cand in run.candidates(cp) {
        match run.attempt(&cand, &pair.word_a, &pair.word_b) {
            Ok(c) => return Ok(c),
            Err(e) => last = Some(e),
        }
    }
    let (stage, e) = last.expect("at least one candidate");
    Err(run.fail(stage, e))
}

/// The ping-pong words as matrices, for callers that want to inspect them.
pub fn certificate_pair(cert: &PingPongCertificate, gens: &GeneratorSet) -> Result<(Matrix, Matrix), PipelineError> {
    let a = gens.evaluate(&cert.word_a).map_err(ForgeError::from)?;
    let b = gens.evaluate(&cert.word_b).map_err(ForgeError::from)?;
    Ok(crate::pingpong::certificate::pair_matrices(&a, &b, cert.exponent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};
    use crate::pingpong::verify_certificate;

    fn sanov() -> GeneratorSet {
        GeneratorSet::new(vec![
            Matrix::from_i64(&[&[1, 2], &[0, 1]]),
            Matrix::from_i64(&[&[1, 0], &[2, 1]]),
        ])
        .unwrap()
    }

    #[test]
    fn sanov_end_to_end() {
        let gens = sanov();
        let s = PlaceSet::archimedean_only();
        let cfg = RunConfig::default();
        let c = certify(&gens, &s, &cfg).unwrap();
        let cert = &c.certificate;
        assert!(cert.growth_bound > int(1));
        assert!(num_traits::pow(cert.growth_bound.clone(), cert.len_a2b) <= int(2));
        assert!(c.oracle.free);
        let v = verify_certificate(cert, &gens, cfg.oracle_budget);
        assert!(v.valid, "{:?}", v.failures);
    }

    #[test]
    fn heisenberg_fails_at_pair_search() {
        let gens = GeneratorSet::new(vec![
            Matrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
            Matrix::from_i64(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]),
        ])
        .unwrap();
        let f = certify(&gens, &PlaceSet::archimedean_only(), &RunConfig::default()).unwrap_err();
        assert_eq!(f.stage, Stage::FindRegularPair);
    }

    #[test]
    fn dyadic_pair() {
        let gens = GeneratorSet::new(vec![
            Matrix::diag(&[int(2), rat(1, 2)]),
            Matrix::from_i64(&[&[1, 1], &[1, 2]]),
        ])
        .unwrap();
        let s = PlaceSet::with_primes([2]).unwrap();
        let c = certify(&gens, &s, &RunConfig::default()).unwrap();
        assert!(verify_certificate(&c.certificate, &gens, 1 << 16).valid);
    }
}
