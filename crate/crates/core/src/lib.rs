//! Semantic toolkit for ZX diagrams.
//!
//! The crate evaluates diagram terms to matrices over two interchangeable
//! backends: an exact one working in cyclotomic fields with big-rational
//! coefficients, and a floating-point one over `Complex64`. On top of the
//! evaluator sit a data-driven axiom catalog with a sampling soundness
//! harness, a supplementarity-to-cyclotomic verification pipeline, and a
//! classifier atlas for three-spider Euler-form equalities.

pub mod angle;
pub mod cyclotomic;
pub mod diagram;
pub mod euler;
pub mod interp;
pub mod matrix;
pub mod parser;
pub mod rules;
pub mod supcyc;

mod error;

pub use angle::{Angle, RationalAngle};
pub use cyclotomic::Cyclotomic;
pub use diagram::{AngleExpr, Diagram, Generator};
pub use error::ZxError;
pub use euler::{
    classify_euler, enumerate_euler, euler_compose, radin_sadun_check, radin_sadun_sweep,
    two_spider_solve, Classification, EulerEquality, FamilyMatch, RadinSadunReport,
    RadinSadunVerdict, SpiderOrder,
};
pub use interp::{interpret, Backend, EvalConfig};
pub use matrix::{equal_up_to_scalar, matrices_equal, Mat, Matrix, Scalar, ScalarRatio};
pub use rules::{
    check_soundness, scaled_equality_test, CompareMode, RuleSchema, ScaleReport, SoundnessConfig,
    SoundnessReport,
};
pub use supcyc::{
    d1_semantics, d2_semantics, d_semantics, extract_a1, q_coefficients, verify_sup_to_cyc,
    w_matrix, w_matrix_closed, SupToCycReport,
};
