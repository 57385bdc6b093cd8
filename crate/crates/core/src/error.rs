use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order cap exceeded: group order would exceed {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("unknown catalog group `{0}`")]
    UnknownCatalog(String),

    #[error("degenerate spectrum: eigenvalue clusters unresolved after {attempts} random combinations")]
    DegenerateSpectrum { attempts: usize },

    #[error("table verification failed: {what} residual {residual:.3e}")]
    TableVerificationFailed { what: &'static str, residual: f64 },

    #[error("invalid normal subgroup: {0}")]
    InvalidNormalSubgroup(String),

    #[error("non-integral multiplicity: residual {residual:.3e} at ({pi}, {pi2}; {sigma})")]
    NonIntegralMultiplicity {
        pi: usize,
        pi2: usize,
        sigma: usize,
        residual: f64,
    },

    #[error("mismatched tables: operands live on different character tables")]
    MismatchedTables,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("derivation undefined on the real-eigenvalue locus (Im z = {im})")]
    DerivationUndefined { im: f64 },

    #[error("point not on the unit circle: |z| = {modulus}")]
    NotOnCircle { modulus: f64 },

    #[error("level {level} exceeds support cap {cap}")]
    SupportCapExceeded { level: u32, cap: u32 },

    #[error("odd level {0} in an SO(3)-restricted polynomial")]
    OddLevel(u32),

    #[error("certificate vacuous: AM = 1 for an abelian factor")]
    CertificateVacuous,

    #[error("invalid orbit group: {0}")]
    InvalidOrbitGroup(String),

    #[error("malformed spec: {0}")]
    MalformedSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
