//! Exact enumerative data for linear orbits of plane line configurations.
//!
//! The crate computes the adjusted predegree polynomial `sum_j (f_j d_j) t^j / j!`
//! of a configuration of (possibly multiple) lines in the plane by three
//! independent routes (a closed form, expanded blow-up contributions, and direct
//! Chow-ring evaluation), together with orbit classification, stabilizer
//! component counts, orbit-closure degrees, and the analogous polynomials for
//! transversal hyperplane arrangements in `P^n`.

pub mod arrangements;
pub mod cli;
pub mod configuration;
pub mod excess;
mod linalg;
pub mod predegree;
pub mod series;
pub mod stabilizer;

pub use configuration::{ConfigClass, ConfigTag, LineConfiguration, RationalLine};
pub use excess::Engine;
pub use series::{Rational, TruncatedSeries};
