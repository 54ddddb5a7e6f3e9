//! Exact computation in Grothendieck-ring avatars.
//!
//! Everything in this crate is exact: coefficients are arbitrary-precision
//! integers and rationals, character sums take values in cyclotomic integer
//! rings, and finite-field enumeration kernels are deterministic. The crate
//! is `no_std` (with `alloc`); IO, scenario files and the command-line front
//! end live in the companion `motivic-cli` crate.
//!
//! Module map:
//! - [`epoly`]: two-variable Laurent polynomials `Z[u,v,(uv)^{-1}]`, the
//!   Hodge–Deligne avatar of classes of varieties; `L = uv`.
//! - [`cyclo`]: exact arithmetic in `Q(zeta_p)`, home of additive character
//!   sums and local-field integrals.
//! - [`finfield`]: small finite fields `F_{p^k}` with full enumeration,
//!   traces and discrete-log tables.
//! - [`counting`]: the point-counting avatar: a catalog of varieties with
//!   exact `#X(F_{q^m})` and closed-point censuses, plus brute-force
//!   enumerators and exponential sums.
//! - [`lambda`]: Adams operations and symmetric powers on avatars, and
//!   Kapranov zeta functions.
//! - [`partitions`]: multidimensional partitions, refinements, contraction,
//!   Howe's alternating-sum lemma, and overlap matrices.
//! - [`series`]: truncated multivariate power series over any avatar ring,
//!   with plethystic exponential and logarithm.
//! - [`euler`]: motivic Euler products in both avatars, a configuration
//!   counting oracle, and checkers for the product identities.
//! - [`monclass`]: monodromy-graded classes and the twisted product.
//! - [`vanishing`]: the Denef–Loeser zeta function from resolution data,
//!   nearby/vanishing cycles, Fermat-curve convolution.
//! - [`weight`]: weight functions, radius of convergence, convergence
//!   criteria and coefficient-growth extraction.
//! - [`height`]: log-anticanonical pole orders, local factors at good
//!   places, global assembly, and a direct height-counting oracle.
//! - [`localfield`]: places of `P^1`, Laurent expansions, Riemann–Roch
//!   spaces.
//! - [`fourier`]: Schwartz–Bruhat functions over `F_q((t))`, integration,
//!   Fourier transform, summation over rational points, Poisson checks and
//!   the annulus integral.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod counting;
pub mod cyclo;
pub mod epoly;
pub mod error;
pub mod euler;
pub mod finfield;
pub mod fourier;
pub mod height;
pub mod lambda;
pub mod localfield;
pub mod monclass;
pub mod num;
pub mod partitions;
pub mod series;
pub mod vanishing;
pub mod weight;

pub use error::Error;
pub use num::{Int, Rat};
