use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("ray {ray} is not primitive")]
    RaysNotPrimitive { ray: usize },
    #[error("cone {cone} is not unimodular")]
    ConeNotUnimodular { cone: usize },
    #[error("wall {rays:?} is not shared by exactly two opposite cones")]
    FacetUnpaired { rays: Vec<usize> },
    #[error("sample point {sample} is not covered by any cone")]
    PointNotCovered { sample: usize },
    #[error("fan is not smooth and complete: {0}")]
    NotSmoothComplete(String),
    #[error("expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("divisor is not globally generated: coefficient of ray {ray} in D(cone {cone}) is negative")]
    NotGloballyGenerated { cone: usize, ray: usize },
    #[error("divisor is not nef and big")]
    NotNefOrBig,
    #[error("fan has no centred primitive collection")]
    NoCpc,
    #[error("divisor is not ample")]
    NotAmple,
    #[error("effective cone hypothesis fails: no cone has all outside rays with nonpositive coordinates")]
    HypothesisStarFails,
    #[error("variety is projective space")]
    IsProjectiveSpace,
    #[error("relation is not positive")]
    NotPositive,
    #[error("not a relation among the rays")]
    NotARelation,
    #[error("no certified generic lift after {attempts} attempts")]
    GenericityFailure { attempts: usize },
    #[error("line parameter {index} is zero")]
    ZeroParameter { index: usize },
    #[error("point is not in the torus: coordinate {coord} is zero")]
    NotInTorus { coord: usize },
    #[error("curve does not pass through the base point at its base parameter")]
    CurveMissesQ0,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("divisor is not big and nef")]
    NotBigNef,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable variant name, used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Malformed(..) => "Malformed",
            Error::RaysNotPrimitive { .. } => "RaysNotPrimitive",
            Error::ConeNotUnimodular { .. } => "ConeNotUnimodular",
            Error::FacetUnpaired { .. } => "FacetUnpaired",
            Error::PointNotCovered { .. } => "PointNotCovered",
            Error::NotSmoothComplete(..) => "NotSmoothComplete",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotGloballyGenerated { .. } => "NotGloballyGenerated",
            Error::NotNefOrBig => "NotNefOrBig",
            Error::NoCpc => "NoCpc",
            Error::NotAmple => "NotAmple",
            Error::HypothesisStarFails => "HypothesisStarFails",
            Error::IsProjectiveSpace => "IsProjectiveSpace",
            Error::NotPositive => "NotPositive",
            Error::NotARelation => "NotARelation",
            Error::GenericityFailure { .. } => "GenericityFailure",
            Error::ZeroParameter { .. } => "ZeroParameter",
            Error::NotInTorus { .. } => "NotInTorus",
            Error::CurveMissesQ0 => "CurveMissesQ0",
            Error::NotApplicable(..) => "NotApplicable",
            Error::NotBigNef => "NotBigNef",
            Error::BadParameters(..) => "BadParameters",
            Error::NotPrime(..) => "NotPrime",
            Error::Unsupported(..) => "Unsupported",
        }
    }
}
