use thiserror::Error;

/// Everything that can go wrong while building, planning or verifying.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("robots {first} and {second} are only {distance:e} apart")]
    Coincident {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("first two robots coincide; the configuration has no direction")]
    DegenerateDirection,

    #[error("dimension {0} is odd; the tangent field needs an even dimension")]
    OddDimension(usize),

    #[error("values {0:e}, {1:e} and {2:e} chain into one cluster without being mutually close")]
    AmbiguousClustering(f64, f64, f64),

    #[error("query sits on a cell boundary: {0}")]
    BoundaryQuery(String),

    #[error("configuration is not desingularized ({count} of {robots} projections distinct)")]
    NotDesingularized { count: usize, robots: usize },

    #[error("configuration does not lie on the first coordinate axis (off by {0:e})")]
    NotOnAxis(f64),

    #[error("configuration is not colinear (off by {0:e})")]
    NotColinear(f64),

    #[error("configurations do not share a common line")]
    LinesDiffer,

    #[error("geodesic between antipodal directions is undefined")]
    DegenerateGeodesic,

    #[error("endpoint mismatch at junction {junction}: gap {gap:e}")]
    EndpointMismatch { junction: usize, gap: f64 },

    #[error("deformed query is outside the section's domain: {0}")]
    Domain(String),

    #[error("robots {first} and {second} collide at t = {t} (separation {separation:e})")]
    CollisionDetected {
        t: f64,
        first: usize,
        second: usize,
        separation: f64,
    },

    #[error("perturbed query left its cell after {attempts} attempts")]
    CellEscape { attempts: usize },

    #[error("domain count mismatch: missing {missing:?}, extra {extra:?}")]
    CountMismatch { missing: Vec<usize>, extra: Vec<usize> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl PlanError {
    /// Boundary-type failures: the float classification is undecidable near here.
    pub fn is_boundary(&self) -> bool {
        matches!(
            self,
            PlanError::AmbiguousClustering(..) | PlanError::BoundaryQuery(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, PlanError>;
