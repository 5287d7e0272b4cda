use num_traits::Signed;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::cone::{verify_cone_inclusions, ConeChecks};
use super::oracle::{freeness_oracle, OracleReport};
use super::{certificate_to_growth_bound, PingPongError};
use crate::exactnum::rational::serde_q;
use crate::exactnum::{GeneratorSet, Matrix, Place, Rational, Word};
use crate::spectra::wedge_power;

pub const CERTIFICATE_VERSION: u32 = 1;

/// Everything a third party needs to re-check that `A^e B` and `A^{2e} B`
/// generate a free semigroup, where `A`, `B` are words in the generators.
///
/// The cone lives in the `wedge_m`-th exterior power, in the coordinates
/// given by the columns of `basis`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PingPongCertificate {
    pub version: u32,
    pub generators_sha256: String,
    pub pair_sha256: String,
    pub word_a: Word,
    pub word_b: Word,
    pub place: Place,
    pub wedge_m: usize,
    pub exponent: u32,
    #[serde(with = "serde_q")]
    pub cone_radius: Rational,
    pub basis: Matrix,
    pub checks: ConeChecks,
    pub len_ab: usize,
    pub len_a2b: usize,
    #[serde(with = "serde_q")]
    pub growth_bound: Rational,
    pub oracle_depth_validated: usize,
}

fn sha256_json<T: Serialize>(x: &T) -> String {
    let bytes = serde_json::to_vec(x).expect("matrices serialise");
    hex::encode(Sha256::digest(&bytes))
}

pub fn generators_digest(gens: &[Matrix]) -> String {
    sha256_json(&gens)
}

pub fn pair_digest(u: &Matrix, v: &Matrix) -> String {
    sha256_json(&[u, v])
}

/// The ping-pong pair `(A^e B, A^{2e} B)` in the original coordinates.
pub fn pair_matrices(a: &Matrix, b: &Matrix, e: u32) -> (Matrix, Matrix) {
    let ae = a.pow(e as u64);
    let u = &ae * b;
    let v = &ae * &u;
    (u, v)
}

/// Checks computed from scratch for the given data.
pub fn recompute_checks(a: &Matrix, b: &Matrix, m: usize, basis: &Matrix, e: u32, r: &Rational, place: Place) -> Result<ConeChecks, PingPongError> {
    let wa = wedge_power(a, m)?;
    let wb = wedge_power(b, m)?;
    if basis.dim() != wa.dim() {
        return Err(PingPongError::BadBasis);
    }
    let inv = basis.inverse().ok_or(PingPongError::BadBasis)?;
    let ah = wa.conjugate_by(basis, &inv);
    let bh = wb.conjugate_by(basis, &inv);
    Ok(verify_cone_inclusions(&ah, &bh, e, r, place))
}

/// Lengths of `A^e B` and `A^{2e} B` as words in the generators.
pub fn word_lengths(word_a: &Word, word_b: &Word, e: u32) -> (usize, usize) {
    let la = word_a.len() * e as usize;
    (la + word_b.len(), 2 * la + word_b.len())
}

pub struct IssueRequest<'a> {
    pub gens: &'a GeneratorSet,
    pub word_a: &'a Word,
    pub word_b: &'a Word,
    pub place: Place,
    pub wedge_m: usize,
    pub exponent: u32,
    pub cone_radius: &'a Rational,
    pub basis: &'a Matrix,
    pub oracle_depth: usize,
    pub oracle_budget: u64,
}

impl PingPongCertificate {
    /// Builds a certificate, refusing unless all three cone checks pass and
    /// the brute-force oracle finds no relation.
    pub fn issue(req: IssueRequest<'_>) -> Result<(Self, OracleReport), PingPongError> {
        let a = req.gens.evaluate(req.word_a)?;
        let b = req.gens.evaluate(req.word_b)?;
        let checks = recompute_checks(&a, &b, req.wedge_m, req.basis, req.exponent, req.cone_radius, req.place)?;
        if !checks.all() {
            return Err(PingPongError::ChecksFailed(checks));
        }
        let (u, v) = pair_matrices(&a, &b, req.exponent);
        let oracle = freeness_oracle(&u, &v, req.oracle_depth, req.oracle_budget)?;
        if !oracle.free {
            return Err(PingPongError::OracleRefuted(oracle));
        }
        let (len_ab, len_a2b) = word_lengths(req.word_a, req.word_b, req.exponent);
        let cert = PingPongCertificate {
            version: CERTIFICATE_VERSION,
            generators_sha256: generators_digest(req.gens.matrices()),
            pair_sha256: pair_digest(&u, &v),
            word_a: req.word_a.clone(),
            word_b: req.word_b.clone(),
            place: req.place,
            wedge_m: req.wedge_m,
            exponent: req.exponent,
            cone_radius: req.cone_radius.clone(),
            basis: req.basis.clone(),
            checks,
            len_ab,
            len_a2b,
            growth_bound: certificate_to_growth_bound(len_ab, len_a2b),
            oracle_depth_validated: req.oracle_depth,
        };
        Ok((cert, oracle))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub failures: Vec<String>,
    pub oracle: Option<OracleReport>,
}

/// Re-derives every field of `cert` from the generators. Any disagreement
/// is a failure; nothing in the certificate is trusted.
pub fn verify_certificate(cert: &PingPongCertificate, gens: &GeneratorSet, oracle_budget: u64) -> VerifyReport {
    let mut failures: Vec<String> = Vec::new();
    if cert.version != CERTIFICATE_VERSION {
        failures.push(format!("unsupported version {}", cert.version));
    }
    if cert.generators_sha256 != generators_digest(gens.matrices()) {
        failures.push("generator digest mismatch".into());
    }
    if cert.exponent == 0 {
        failures.push("exponent must be positive".into());
    }
    if !cert.cone_radius.is_positive() {
        failures.push("cone radius must be positive".into());
    }
    let n = gens.dim();
    if cert.wedge_m == 0 || cert.wedge_m >= n.max(2) {
        failures.push(format!("wedge power {} outside 1..{}", cert.wedge_m, n));
    }
    let mats = gens.evaluate(&cert.word_a).and_then(|a| Ok((a, gens.evaluate(&cert.word_b)?)));
    let (a, b) = match mats {
        Ok(ab) => ab,
        Err(e) => {
            failures.push(format!("words do not evaluate: {e}"));
            return VerifyReport {
                valid: false,
                failures,
                oracle: None,
            };
        }
    };
    let (len_ab, len_a2b) = word_lengths(&cert.word_a, &cert.word_b, cert.exponent);
    if (len_ab, len_a2b) != (cert.len_ab, cert.len_a2b) {
        failures.push(format!(
            "recorded lengths ({}, {}) differ from ({len_ab}, {len_a2b})",
            cert.len_ab, cert.len_a2b
        ));
    }
    if cert.growth_bound != certificate_to_growth_bound(len_ab, len_a2b) {
        failures.push("growth bound does not match the word lengths".into());
    }
    let mut oracle = None;
    if failures.is_empty() {
        match recompute_checks(&a, &b, cert.wedge_m, &cert.basis, cert.exponent, &cert.cone_radius, cert.place) {
            Ok(c) if c.all() && c == cert.checks => {}
            Ok(c) => failures.push(format!("cone checks do not hold: {c:?}")),
            Err(e) => failures.push(e.to_string()),
        }
        let (u, v) = pair_matrices(&a, &b, cert.exponent);
        if cert.pair_sha256 != pair_digest(&u, &v) {
            failures.push("pair digest mismatch".into());
        }
        if failures.is_empty() {
            match freeness_oracle(&u, &v, cert.oracle_depth_validated, oracle_budget) {
                Ok(r) => {
                    if !r.free {
                        failures.push(format!("oracle found a relation: {:?}", r.collision));
                    }
                    oracle = Some(r);
                }
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    VerifyReport {
        valid: failures.is_empty(),
        failures,
        oracle,
    }
}
