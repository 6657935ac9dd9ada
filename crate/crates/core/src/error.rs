//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("a and b must be coprime: gcd({0}, {1}) = {2}")]
    NonCoprime(u32, u32, u32),
    #[error("(a, b, k) = ({0}, {1}, {2}) is an excluded triple")]
    ExcludedTriple(u32, u32, u32),
    #[error("F = {0} is not positive; the configuration has no balanced neck scale")]
    NonPositiveF(f64),
    #[error("m = {m} is below the threshold {threshold:.1} (= {factor} k |v|); pass force to override")]
    MTooSmall { m: u32, threshold: f64, factor: f64 },
    #[error("no off-span lattice vector found within the search radius (internal lattice bug)")]
    DegenerateW,
    #[error("right-hand side has kernel component {0:.3e} exceeding tolerance {1:.3e}")]
    KernelObstruction(f64, f64),
    #[error("grid_n = {0} under-resolves the singular structure; need at least {1}")]
    ResolutionError(usize, usize),
    #[error("point ({0}, {1}) is not a singular point of the configuration")]
    NotSingularPoint(f64, f64),
    #[error("Newton iteration did not converge: residual {0:.3e} after {1} iterations")]
    NoConvergence(f64, usize),
    #[error("invalid domain: {0}")]
    DomainError(String),
    #[error("bridge disks of radius {0:.4} overlap (half-spacing {1:.4})")]
    BridgeOverlap(f64, f64),
    #[error("mesh has {0} triangles with minimum angle below {1} degrees")]
    DegenerateTriangles(usize, f64),
    #[error("eigensolver failed to reach residual {0:.3e} (achieved {1:.3e})")]
    SolverFailure(f64, f64),
    #[error("genus {0} is too small; need genus >= 3")]
    GenusTooSmall(u32),
    #[error("invalid flat lattice: {0}")]
    InvalidLattice(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
