//! Exact reduction of singularities for quasi-homogeneous cuspidal foliations
//! of (C³, 0).
//!
//! The pipeline: [`foliation`] builds the pre-normal 1-form from user data,
//! [`resolution`] runs the point, monoidal and line blow-ups and records a
//! replayable trace, [`divisor`] assembles the dual graph of the exceptional
//! divisor, and [`pi1`] emits the fundamental-group presentations of the
//! essential component. Everything is computed over Q(ζ_M).


pub mod divisor;
pub mod error;
pub mod foliation;

pub mod forms;
pub mod io;

pub mod numeric;
pub mod pi1;

pub mod poly;
pub mod resolution;


pub use error::{ArithError, FormError};
pub use forms::{Form, OneForm, PolyMap};
pub use numeric::{CfDigits, CycloScalar, Field, Rational};
pub use poly::MultiPoly;
pub use foliation::{CuspidalInput, DerivedParams};
pub use resolution::{resolve, ResolutionTrace, ResolveError, ResolveOptions};
