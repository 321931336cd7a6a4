use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion has zero norm")]
    ZeroQuaternion,

    #[error("non-finite {0}")]
    NonFinite(&'static str),

    #[error("inertia tensor is singular")]
    SingularInertia,

    #[error("invalid inertia tensor: {0}")]
    InvalidInertia(&'static str),

    #[error("degenerate mass catalog: all mass lies on a line, inertia tensor {tensor:?} is singular")]
    DegenerateCatalog { tensor: [[f64; 3]; 3] },

    #[error("invalid mass catalog: {0}")]
    InvalidCatalog(String),

    #[error("invalid chamber bounds: {0}")]
    InvalidChamber(String),

    #[error("altitude {0} km outside the supported 200-2000 km band")]
    AltitudeOutOfRange(f64),

    #[error("position vector has zero length")]
    ZeroRadius,

    #[error("magnetic field is zero, dipole allocation impossible")]
    ZeroField,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("state diverged at step {step} (t = {t} s)")]
    Diverged { step: u64, t: f64 },

    #[error("failed to parse {what}: {source}")]
    Parse {
        what: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{what}: key `{path}`: {source}")]
    Config {
        what: String,
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
