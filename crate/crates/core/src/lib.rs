//! Homogeneous locally nilpotent derivations on normal affine varieties with
//! a torus action of complexity at most one, in exact rational arithmetic.

pub mod curve_divisors;
pub mod error;
pub mod graded_algebra;
pub mod input;
pub mod lattice_polyhedra;
pub mod linalg;
pub mod lnd_fiber;
pub mod lnd_horizontal;
pub mod ml_invariant;
pub mod rational;

pub use curve_divisors::{Curve, CurvePoint, PolyhedralDivisor, QDivisor, Section};
pub use error::{Error, Result};
pub use graded_algebra::{AlgebraType, GradedAlgebra, HomogeneousElement};
pub use input::{parse_element, InputSpec};
pub use lattice_polyhedra::{Cone, Quasifan, Side, SupportFunction, TailedPolyhedron};
pub use rational::{LatticeVector, LinearForm, Rat, RationalVector};
