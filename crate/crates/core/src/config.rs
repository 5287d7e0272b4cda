use serde::{Deserialize, Serialize};

use crate::cayley::{DEFAULT_BUDGET, DEFAULT_DEPTH};
use crate::exactnum::rational::{pow2, serde_q};
use crate::exactnum::Rational;
use crate::pingpong::{Constants, DEFAULT_EXPONENT_CAP};
use crate::wordforge::ForgeOptions;

/// Every knob of a run. Missing fields take their defaults.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Radius of the ball searched for a regular pair.
    pub search_depth: usize,
    /// Word length checked by the freeness oracle.
    pub oracle_depth: usize,
    pub oracle_budget: u64,
    pub exponent_cap: u32,
    /// Bits of precision for eigenvector approximations, tried in order.
    pub precisions: Vec<u32>,
    #[serde(with = "serde_q")]
    pub epsilon_ratio: Rational,
    /// Cone radii go down to `b^-radius_steps / 4`.
    pub radius_steps: u32,
    pub element_budget: u64,
    pub word_cap: usize,
    pub trace_cap: u32,
    pub constants: Constants,
    /// Squarings of `A` allowed when only a dominant eigenvalue (no gap)
    /// is certified.
    pub max_squarings: u32,
    pub max_generators: usize,
    pub max_dim: usize,
    pub certificate_out: Option<String>,
    pub trace_out: Option<String>,
    pub csv_out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            search_depth: DEFAULT_DEPTH,
            oracle_depth: 12,
            oracle_budget: 1 << 16,
            exponent_cap: DEFAULT_EXPONENT_CAP,
            precisions: vec![64, 128, 256],
            epsilon_ratio: pow2(-4),
            radius_steps: 16,
            element_budget: DEFAULT_BUDGET,
            word_cap: 8,
            trace_cap: 4,
            constants: Constants::default(),
            max_squarings: 6,
            max_generators: 16,
            max_dim: 6,
            certificate_out: None,
            trace_out: None,
            csv_out: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let checks: [(&'static str, bool); 11] = [
            ("search_depth", self.search_depth > 0),
            ("oracle_depth", self.oracle_depth > 0),
            ("oracle_budget", self.oracle_budget > 0),
            ("exponent_cap", self.exponent_cap > 0),
            ("precisions", !self.precisions.is_empty() && self.precisions.iter().all(|&p| p > 0)),
            ("epsilon_ratio", self.epsilon_ratio > Rational::from_integer(0.into()) && self.epsilon_ratio < Rational::from_integer(1.into())),
            ("element_budget", self.element_budget > 0),
            ("word_cap", self.word_cap > 0),
            ("radius_steps", self.radius_steps > 0),
            ("max_generators", self.max_generators > 0),
            ("max_dim", self.max_dim > 1),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(ConfigError::NotPositive(name));
            }
        }
        Ok(())
    }

    pub fn forge_options(&self, bits: u32) -> ForgeOptions {
        ForgeOptions {
            bits,
            m_cap: self.trace_cap,
            word_cap: self.word_cap,
            constants: self.constants.clone(),
            delta: self.epsilon_ratio.clone(),
            ..ForgeOptions::default()
        }
    }
}
