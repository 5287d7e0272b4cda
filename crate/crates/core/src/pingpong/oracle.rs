use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PingPongError;
use crate::exactnum::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub free: bool,
    pub depth: usize,
    pub words_checked: u64,
    /// First colliding pair in shortlex order, as strings over `u`, `v`.
    pub collision: Option<(String, String)>,
}

fn spell(w: &[u8]) -> String {
    w.iter().map(|&c| if c == 0 { 'u' } else { 'v' }).collect()
}

/// Checks that all nonempty positive words of length `<= depth` in `u`, `v`
/// are distinct matrices. Words are visited in shortlex order, so the
/// reported collision is the least one.
pub fn freeness_oracle(u: &Matrix, v: &Matrix, depth: usize, budget: u64) -> Result<OracleReport, PingPongError> {
    let total = (1u64 << (depth + 1).min(63)) - 2;
    if depth >= 63 || total > budget {
        return Err(PingPongError::OracleBudget { depth, budget });
    }
    let mut seen: HashMap<Matrix, Vec<u8>> = HashMap::with_capacity(total as usize);
    let mut level: Vec<(Vec<u8>, Matrix)> = vec![(vec![], Matrix::identity(u.dim()))];
    let mut checked = 0u64;
    for _ in 1..=depth {
        let next: Vec<(Vec<u8>, Matrix)> = level
            .par_iter()
            .flat_map_iter(|(w, m)| {
                [(0u8, u), (1u8, v)].into_iter().map(move |(c, g)| {
                    let mut w2 = w.clone();
                    w2.push(c);
                    (w2, m * g)
                })
            })
            .collect();
        for (w, m) in &next {
            checked += 1;
            if let Some(prev) = seen.get(m) {
                return Ok(OracleReport {
                    free: false,
                    depth,
                    words_checked: checked,
                    collision: Some((spell(prev), spell(w))),
                });
            }
            seen.insert(m.clone(), w.clone());
        }
        level = next;
    }
    Ok(OracleReport {
        free: true,
        depth,
        words_checked: checked,
        collision: None,
    })
}
