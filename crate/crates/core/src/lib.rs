//! Construction and exact verification of CSS codes with transversal CCZ and U
//! gates over finite fields.

pub mod alphred;
pub mod bundle;
pub mod certificate;
pub mod classical;
pub mod cli;
pub mod css;
pub mod enumerate;
pub mod error;
pub mod flinalg;
pub mod gf;
pub mod multfriendly;
pub mod transversal;

pub use error::{Error, Result};
