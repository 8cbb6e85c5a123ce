//! Coarse projections to Teichmüller geodesics, computed on the torus.

pub mod constants;
pub mod error;
pub mod experiments;
pub mod foliation;
pub mod optimize;
pub mod projection;
pub mod report;
pub mod sampling;
pub mod stats;
pub mod torus;

pub use error::{Result, TeichError};
pub use foliation::*;
pub use projection::*;
pub use torus::*;
