//! Exact-arithmetic toolkit for finitely generated subgroups of `SL_n(Q)`:
//! Cayley-ball growth, eigenvalue separation at every place, wedge powers,
//! ping-pong certificates for free sub-semigroups and the growth lower
//! bounds they imply.

pub mod exactnum;
pub mod cayley;
pub mod spectra;
pub mod pingpong;
pub mod wordforge;
pub mod config;
pub mod pipeline;
