//! Exact and numeric tools for degenerating families: truncated
//! characteristic-class algebra, local Milnor numbers, normal-crossing
//! threshold bookkeeping, global invariant plumbing, and elliptic-period
//! asymptotics.
//!
//! The symbolic side (graded rings, class identities, counting) is exact
//! over arbitrary-precision rationals; the numeric side (periods, least
//! squares) is f64 with pinned tolerances. Nothing here rounds silently.

pub mod graded;
pub mod invariants;
pub mod milnor;
pub mod ncd;
pub mod periodfit;
pub mod rat;

pub use graded::{GradedClass, PClasses, Ring, SplitBundle};
pub use invariants::BCOVReport;
pub use milnor::{LocalPoly, MilnorResult};
pub use ncd::{AsymptoticReport, NCDModel};
pub use periodfit::{FitResult, PeriodSample};
pub use rat::Rat;
