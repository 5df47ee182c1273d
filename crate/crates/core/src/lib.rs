//! Generalized Bessel functions of root systems A, B and D, the Jack
//! polynomial and multivariate hypergeometric machinery behind them, the
//! semigroup densities of radial Dunkl processes, and a Monte Carlo simulator
//! of the radial Dunkl SDE.

pub mod bessel;
pub mod cache;
pub mod detrep;
pub mod error;
pub mod hyperseries;
pub mod jack;
pub mod kernels;
pub mod partitions;
pub mod quadrature;
pub mod rootsys;
pub mod simulate;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
