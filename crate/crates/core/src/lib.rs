pub mod analysis;
pub mod error;
pub mod laplace;
pub mod oracle_fd;
pub mod spectral;
pub mod specfun;

pub use error::{Error, Result};
