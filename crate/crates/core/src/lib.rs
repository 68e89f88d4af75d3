pub mod algebra;
pub mod carlitz;
pub mod check;
pub mod dd;
pub mod error;
pub mod forms;
pub mod hankel;
pub mod io;
pub mod series;
pub mod verify;

pub use error::{Error, Result};

/// Version of the computational core; cached artifacts are keyed on it.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
