pub mod error;
pub mod extract;
pub mod group;
pub mod io;
pub mod lift;
pub mod ode;
pub mod oracle;
pub mod phi;
pub mod reference;
pub mod ring;

pub use error::{Error, Result};
