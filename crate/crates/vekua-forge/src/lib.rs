//! Rewrites elliptic first-order linear PDE systems in the plane as
//! Vekua-type equations over a generalized complex algebra, and verifies the
//! rewrite by pointwise residual checks against manufactured solutions.

pub mod cli;
pub mod coeffexpr;
pub mod ellsys;
pub mod error;
pub mod gcnum;
pub mod rewrite;
pub mod verify;

pub use coeffexpr::{parse_expr, EvalError, Expr, Jet2, ParseError};
pub use ellsys::{
    make_constant_structure_family, Classification, EllipticSystem, Region, SolutionPair,
};
pub use error::Error;
pub use gcnum::{DegenerateElement, StructureParams, GC};
pub use rewrite::{rewrite_at, VekuaPointData};
pub use verify::{grid_verify, manufacture_rhs, vekua_residual, GridReport};
