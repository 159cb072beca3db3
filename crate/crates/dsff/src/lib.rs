//! Dissipative spectral form factor of the complex elliptic Ginibre ensemble.
//!
//! Three independent routes to the same quantity: exact finite-N Laguerre formulas
//! ([`finite_n`]), regime-wise asymptotics ([`asymptotics`], [`limits`]) and Monte Carlo
//! over sampled matrices ([`montecarlo`]).

pub mod error;
pub mod specfun;

pub use error::{DsffError, Result};
pub mod quad;
pub mod finite_n;
pub mod asymptotics;
pub mod limits;
pub mod montecarlo;
pub mod figures;
