//! Deterministic numerical engines: Gauss rules, mass-shell integration,
//! alternating series, finite differences, limit extrapolation and Chebyshev
//! interpolation.
//!
//! All reductions run in a fixed index order with compensated accumulation,
//! so results do not depend on how node evaluations are scheduled.

mod chebyshev;
mod diff;
mod extrapolate;
mod gauss;
mod series;
mod shell;
mod sum;

pub use chebyshev::{fit_chebyshev, Chebyshev, ChebyshevFit};
pub use diff::{finite_difference, fornberg_weights};
pub use extrapolate::{extrapolate_limit, Extrapolation, ExtrapolationKind};
pub use gauss::{gauss_legendre, GaussRule};
pub use series::{alternating_sum, alternating_sum_traced, SeriesSum};
pub use shell::{shell_integrate, shell_integrate_checked, QuadConfig, ShellGrid, ShellNode};
pub use sum::{Components, Compensated, CompensatedVec};
