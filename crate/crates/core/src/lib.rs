//! Numerical toolkit for massless free fermions in thermal and locally
//! thermal states.
//!
//! The crate evaluates smeared two-point functions of the vacuum, KMS states,
//! mixtures of KMS states and the Hot Bang state, the thermal functions
//! `L^{μν}(β)` and derived macroobservables, and runs the positivity,
//! transport and limit checks that characterise these states.
//!
//! Conventions used throughout:
//!
//! * metric signature (+,−,−,−), natural units;
//! * Fourier transform `f̃(ζ) = (2π)^{-2} ∫ dx e^{i(ζ,x)} f(x)`;
//! * `two_point(ω, f, g, PsiBarPsi) = ω(ψ̄(f) ψ(g))`, so positivity concerns
//!   the pairing `(f̄, f)`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod hotbang;
pub mod minkowski;
pub mod quad;
pub mod states;
pub mod testfn;
pub mod thermal;
pub mod verify;

pub use error::Error;
pub use num_complex::Complex64;

/// Runs `f(i)` for `i in 0..n` and returns the results in index order.
///
/// With the `parallel` feature the calls are distributed over the rayon pool;
/// the output order never depends on scheduling.
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
