//! Factorization of motion polynomials over the dual quaternions and its
//! use in linkage synthesis.
//!
//! The crate is organized bottom-up:
//!
//! - [`dualquat`]: quaternions, dual quaternions, poses and the action on
//!   three-space;
//! - [`poly`]: polynomials over the reals, quaternions and dual quaternions;
//! - [`factorization`]: decomposition of motion polynomials into linear
//!   factors, including exceptional cases and real multipliers;
//! - [`synthesis`]: three-pose Bennett synthesis, Bennett flips and linkages
//!   that trace bounded rational curves;
//! - [`linkage`]: link graphs, configuration sampling, validation and export;
//! - [`io`]: readers for the JSON input files.

pub mod dualquat;
pub mod error;
pub mod factorization;
pub mod io;
pub mod linkage;
pub mod poly;
pub mod synthesis;
pub mod vec3;

pub use dualquat::{
    classify_generator, normalize_pose, DualNumber, DualQuaternion, Generator, PluckerLine, Pose, Quaternion,
    DEFAULT_TOL,
};
pub use error::{Error, Result};
pub use factorization::{
    all_factorizations, factor_bounded_with_multiplier, factor_generic, factor_quaternion, factor_with_backtracking,
    is_bounded, right_multiply_and_factor, solve_linear_factor, FactorOptions, FactorStatus, Factorization,
    FactorizationReport, LinearSolutionSet,
};
pub use poly::{DQPoly, MotionPolynomial, Param, Poly, QuatPoly, RealPoly};
