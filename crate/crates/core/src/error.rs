use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state norm {norm} is outside the accepted band around 1")]
    NotNormalized { norm: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("non-finite value from field at t = {t}")]
    NonFiniteField { t: f64 },

    #[error("Hamiltonian samples do not commute (residual {residual:e}); use evolve_ordered")]
    NonCommuting { residual: f64 },

    #[error("quadrature did not converge (estimated error {estimate:e})")]
    QuadratureNonConvergence { estimate: f64 },

    #[error("integration tolerance not reached at the maximum step count (residual {residual:e})")]
    IntegrationTolerance { residual: f64 },

    #[error("probability leakage {leakage:e} outside the Krylov subspace")]
    KrylovLeakage { leakage: f64 },

    #[error("curvature undefined: state is (numerically) an eigenstate of H(t)")]
    CurvatureUndefined,

    #[error("no accessible region: the trajectory does not move")]
    NoAccessibleRegion,

    #[error("accessed volume is zero")]
    ZeroAccessedVolume,

    #[error("path length is zero but the endpoints differ")]
    ZeroPathLength,

    #[error("missing energy uncertainty on trajectory samples")]
    MissingEnergyUncertainty,

    #[error("inconsistent results: {0}")]
    Inconsistent(String),
}
