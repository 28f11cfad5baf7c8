//! Exact arithmetic kernels for studying perfect squares in binary
//! recurrence sequences `x_k + y_k*sqrt(d) = alpha * eps^(step*k)`,
//! where `alpha = a + b0*sqrt(d)` and `eps = (t + u*sqrt(d))/2` is a
//! unit of the real quadratic order.
//!
//! Everything in this crate is exact (big integers and rationals) or
//! carries an explicit bit-precision parameter. There is no ambient
//! floating point. The crate is `no_std` + `alloc`; IO, parallel scan
//! drivers and the CLI live in the companion `recsquares` crate.
//!
//! Module map:
//! - [`intkit`]: valuations, squarefree core, radical, exact square
//!   detection, budgeted factorization.
//! - [`quadratic`]: exact arithmetic in quadratic fields and the
//!   `t^2 - d u^2 = +-4` Pell solver.
//! - [`sequence`]: sequence generation, square scans, lower bounds and
//!   the K cutoff index.
//! - [`representation`]: the quartic decomposition
//!   `f^2 (x + N_eps sqrt(N_alpha)) = +-(a + sqrt(N_alpha))(r + s sqrt(core))^4`
//!   and the gcd quantities behind it.
//! - [`hp`]: fixed-point big reals and complex numbers with explicit
//!   precision.
//! - [`hypergeom`]: hypergeometric approximants to quartic roots of
//!   unit complex numbers, their denominators and the derived
//!   approximation bounds.
//! - [`analysis`]: gap principle, square-count thresholds, the bounded
//!   quartic solver, congruence sieve, sequence classifiers and the
//!   conjecture scan kernels.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod hp;
pub mod hypergeom;
pub mod intkit;
pub mod quadratic;
pub mod representation;
pub mod sequence;

pub use error::{Error, Result};
