//! Finite fields and spherical Steiner systems.

pub mod field;
pub mod projective;
mod steiner;

pub use field::FieldCtx;
pub use projective::{Mobius, ProjectivePoint};
pub use steiner::{
    build_spherical_steiner, read_design, verify_steiner, write_design, SteinerSystem, MAX_STEINER_POINTS,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("scale limit: {0}")]
    ScaleLimit(String),
    #[error("construction bug: {0}")]
    ConstructionBug(String),
}
