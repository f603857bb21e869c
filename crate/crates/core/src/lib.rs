//! Exact divisor calculus, Riemann–Roch bookkeeping, fixed loci of
//! diagonal involutions and classification tables for Calabi–Yau
//! threefolds that double-cover ℚ-Fano threefolds with ½(1,1,1) points.
//!
//! Modules:
//! - [`intersection`]: divisor classes, triple products, the cover diagram
//!   and its canonical-class relations.
//! - [`riemann_roch`]: Chern restrictions to exceptional planes and the
//!   count of isolated fixed points.
//! - [`invariants`]: `H³`, `H·c₂`, `e` of the cover from quotient data.
//! - [`weighted`]: weighted projective spaces, sign involutions and their
//!   fixed strata on hypersurfaces.
//! - [`fermat`]: certified fixed points on Fermat complete intersections.
//! - [`tables`]: the classification dataset and its validators.

pub mod cyclotomic;
pub mod fermat;
pub mod intersection;
pub mod invariants;
pub mod poly;
pub mod rational;
pub mod riemann_roch;
pub mod tables;
pub mod weighted;

pub use rational::Q;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Intersection(#[from] intersection::IntersectionError),
    #[error(transparent)]
    RiemannRoch(#[from] riemann_roch::RiemannRochError),
    #[error(transparent)]
    Invariants(#[from] invariants::InvariantsError),
    #[error(transparent)]
    Weighted(#[from] weighted::WeightedError),
    #[error(transparent)]
    Fermat(#[from] fermat::FermatError),
    #[error(transparent)]
    Tables(#[from] tables::TablesError),
    #[error("derivation failed: {0}")]
    Derivation(String),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Intersection(_) => "intersection",
            Error::RiemannRoch(_) => "riemann_roch",
            Error::Invariants(_) => "invariants",
            Error::Weighted(_) => "weighted",
            Error::Fermat(_) => "fermat",
            Error::Tables(_) => "tables",
            Error::Derivation(_) => "derivation",
            Error::Usage(_) => "usage",
        }
    }
}
