//! Exact computation of arc-space invariants: jet schemes over finite fields,
//! invariant factors of differentials along arcs, relative Mather discrepancies,
//! and motivic change of variables for birational morphisms.

pub mod catalog;
pub mod counting;
pub mod error;
pub mod field;
mod fp;
pub mod integrator;
pub mod jets;
pub mod mather;
pub mod matrix;
pub mod motivic;
pub mod poly;
pub mod presentation;
pub mod series;
pub mod snf;

pub use error::{AlgebraError, IntegratorError, JetError, MatherError, PresentationError};
pub use field::{Field, FieldValue};
pub use matrix::SeriesMatrix;
pub use poly::{parse_poly, MultiPoly};
pub use series::{Order, TruncSeries};
pub use snf::{snf, SnfResult};
