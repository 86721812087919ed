//! Exact finite-field incidence machinery: Gauss sums in `Z[zeta_p]`, closed-form
//! spectra of the cone and zero-sphere Cayley graphs, point-sphere incidences via
//! lifting, the mixing bound, and sum-product statistics. Every closed form is
//! checked against a brute-force oracle with exact integer arithmetic.

pub mod cyclo;
pub mod error;
pub mod field;
pub mod geometry;
pub mod incidence;
mod par;
pub mod report;
pub mod spectrum;
pub mod sumproduct;

pub use cyclo::{CycInt, ExactRadical};
pub use error::{Error, Result};
pub use field::{mk_field, FieldConfig, FieldCtx, FieldElt, FieldVector};
pub use geometry::{Form, Sphere, VarietySpec};
pub use incidence::{PointSet, RadiusClass, SphereSet};
pub use sumproduct::ScalarSet;
