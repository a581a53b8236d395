//! Exact arithmetic for semisimple root systems, Weyl groups, weight
//! multiplicities, Schubert calculus, and the face-reduction rules that
//! shrink tensor-product multiplicity problems to smaller groups.
//!
//! Everything is integer or rational exact; there is no floating point in
//! this crate. Conventions are fixed in [`rootsys`] and shared by all
//! modules.

pub mod linalg;
pub mod reduce;
pub mod reps;
pub mod rootsys;
pub mod schubert;

pub use reduce::{
    BoundReport, FaceDatum, FaceReport, FactoredRule, LeviSystem, MultiplicityProblem,
    ReducedProblem, ReductionReport,
};
pub use reps::{Character, WeightMultTable};
pub use rootsys::{Family, RootCoords, RootSystem, Weight, WeylElement};
pub use schubert::SchubertExpr;
