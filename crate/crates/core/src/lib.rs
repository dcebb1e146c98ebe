//! Exact counts, generating-function identities and rigorous enclosures for
//! recurrence of nearest-neighbour walks on the integer lattice and of
//! complex-weighted walks on finite graphs.

pub mod error;
pub mod interval;
pub mod series;
pub mod lattice;
pub mod recurrence;
pub mod effective2d;
pub mod weighted;
pub mod montecarlo;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
pub use interval::Interval;
pub use series::{AnySeries, Coefficient, Semantics, SeriesError, TruncatedSeries};
