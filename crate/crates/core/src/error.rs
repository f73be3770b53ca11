use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported layout: {0}")]
    UnsupportedLayout(String),

    #[error("numeric blow-up at step {step} (t = {t_fs} fs); retry with dt below {suggested_dt_fs} fs")]
    NumericBlowup {
        step: usize,
        t_fs: f64,
        suggested_dt_fs: f64,
    },

    #[error("capacity exceeded: run needs ~{needed_mib} MiB, cap is {cap_mib} MiB")]
    Capacity { needed_mib: u64, cap_mib: u64 },

    #[error("config error at `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
