//! Periodic unfolding, extension operators, and homogenization of a
//! two-component quasilinear diffusion problem with interfacial resistance
//! on structured 2D grids.
//!
//! The library builds ε-pavings of a box domain by a reference cell with a
//! rectangular inclusion, solves the fine-scale two-component problem with
//! bilinear elements, solves the periodic cell problem on the perforated
//! cell, assembles the effective (homogenized) tensor, and measures the
//! unfolding/extension identities and convergence ladders that connect the
//! fine and homogenized descriptions.

pub mod cell;
pub mod coeff;
pub mod config;
pub mod expr;
pub mod extend;
pub mod fem;
pub mod fine;
pub mod geometry;
pub mod harness;
pub mod homog;
pub mod mesh;
pub mod plot;
pub mod report;
pub mod sparse;
pub mod unfold;

pub use coeff::CoefficientModel;
pub use geometry::{BoxDomain, EpsilonTiling, ReferenceCell};
pub use mesh::{CellMeshes, EpsMeshes, GridFunction, Mesh};

/// Crate-wide error type. Variants map onto the CLI exit-code contract:
/// configuration problems exit 2, solver failures exit 3, I/O failures 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("mesh error: {0}")]
    Mesh(String),
    #[error(
        "iterative solver did not converge after {iterations} iterations \
         (relative residual {residual:.3e})"
    )]
    NoConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },
    #[error("matrix is not positive definite (negative curvature at iteration {iteration})")]
    NotSpd { iteration: usize },
    #[error("singular system: {0}")]
    Singular(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
