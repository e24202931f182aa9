//! Exact construction and certification of dihedral-group frames.
//!
//! The crate builds the 2n-vector orbit of a seed vector under the dihedral
//! group acting on `C^n`, and decides the full-spark (Haar) property — every
//! n of the 2n orbit vectors form a basis — by exact symbolic computation
//! over the cyclotomic field `Q(xi_n)`. Alongside the exact certifier there
//! is a floating-point frame toolkit: synthesis/analysis/frame operators,
//! erasure reconstruction from any spanning subset of coefficients, and
//! numeric spark diagnostics.
//!
//! Module map:
//!
//! * [`exactfield`] — arbitrary-precision rationals and `Q(xi_n)` arithmetic.
//! * [`polyring`] — univariate polynomials in `t` over `Q(xi_n)` and exact
//!   determinants of matrices of such polynomials.
//! * [`grouprep`] — dihedral generators in the time and Fourier pictures,
//!   the DFT, orbit-matrix assembly, and the Heisenberg comparison group.
//! * [`certifier`] — exhaustive exact certification over all `C(2n, n)` row
//!   subsets, with witnesses on refutation.
//! * [`frames`] — numeric frame operators, reconstruction, spark checks,
//!   and a seeded genericity experiment.
//! * [`exec`] — deterministic chunked execution, parallel via rayon when the
//!   `parallel` feature (default) is enabled, sequential otherwise.

pub mod certifier;
pub mod exactfield;
pub mod exec;
pub mod frames;
pub mod grouprep;
pub mod polyring;
pub mod wire;
