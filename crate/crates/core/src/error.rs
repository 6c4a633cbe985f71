use thiserror::Error;

/// Errors raised by the lattice, invariant, polarization, strata and
/// reduction layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported surface: e-invariant {e} is negative (only e >= 0 is modeled)")]
    UnsupportedSurface { e: i64 },

    #[error("genus must be nonnegative, got {0}")]
    NegativeGenus(i64),

    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("surface is geometrically ruled; there is no exceptional curve to blow down")]
    NoBlowdown,

    #[error("operation requires a geometrically ruled surface, but the surface has {blowups} blowup(s)")]
    NotGeometricallyRuled { blowups: usize },

    #[error("rank must be at least {min}, got {rank}")]
    Rank { rank: i64, min: i64 },

    #[error("internal consistency: {what} = {value} is odd, halving is not exact")]
    OddHalving { what: &'static str, value: i64 },

    #[error("Chern data is not normalized along {along}: d = {d} is outside [0, {rank})")]
    NotNormalized { along: &'static str, d: i64, rank: i64 },

    #[error("splitting type parts must be nonempty and weakly decreasing: {0:?}")]
    InvalidSplittingType(Vec<i64>),

    #[error("enumeration window min_part = {min_part} does not contain the generic splitting type")]
    WindowTooSmall { min_part: i64 },

    #[error("expected 0 <= d < rank, got d = {d} with rank {rank}")]
    SplittingDegree { rank: i64, d: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
