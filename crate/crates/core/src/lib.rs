//! Hilbert and Thompson metric geometry on finite-dimensional order-unit
//! cones.
//!
//! The crate has three layers:
//!
//! * **Cones and bodies** ([`cones`], [`convexset`]): Birkhoff gauges and the
//!   two metrics on catalogued cone families, cross-ratio distances along
//!   chords, and the lift of a bounded convex body to a cone one dimension
//!   up, under which the body's Hilbert geometry becomes the cone's
//!   projective metric.
//! * **Reconstruction** ([`collineation`]): for strictly convex geometries,
//!   every distance-preserving black box is induced by a bi-positive linear
//!   map; the module recovers that matrix from oracle calls and verifies it.
//! * **Simplex geometries** ([`simplexgeom`], [`dualrecovery`]): over a
//!   finite weighted point set, the geometry is isometric to a quotient
//!   normed space via the coordinatewise logarithm; isometries are
//!   gauge/relabelling/sign triples, forming a semidirect product, and the
//!   dual extreme-point structure recovers the triple behind a black box.
//!
//! [`polytope`] (vertex/ray enumeration), [`sample`] (seeded generators) and
//! [`json`] (wire schemas) support the above.

pub mod cones;
pub mod collineation;
pub mod convexset;
pub mod dualrecovery;
pub mod error;
pub mod json;
pub mod linalg;
pub mod polytope;
pub mod sample;
pub mod simplexgeom;

pub use cones::{
    induced_isometry_apply, positive_operator_norm, Chord, ConeSpec, OrderUnitSpace,
    ProjectivePoint,
};
pub use collineation::{
    base_change, extend_collineation, extend_to_boundary, reconstruct_linear,
    verify_projective_linearity, InducedMap, IsometryOracle, PartialLinearMap, VerifyReport,
};
pub use convexset::{body_chord, body_dist, lift, ConvexBody, LiftedSpace};
pub use dualrecovery::{
    equilateral_witness, extreme_points, hahn_jordan, recover_eps_theta,
    recover_simplex_isometry, tv_norm, DeltaOracle, EquilateralWitness, SignedMeasure,
};
pub use error::{GeomError, Result};
pub use simplexgeom::{
    find_nonaffine_midpoint, isometry_apply, isometry_compose, isometry_inverse, log_map,
    quotient_linear_isometry_apply, quotient_norm_oracle, simplex_dist, variation_norm,
    DeltaPoint, FiniteK, QuotientFunction, SimplexIsometry,
};
