//! Jacobi fields, curvatures of radial graphs and rotational barriers in
//! products `M^n x R` of a rotationally symmetric manifold with the line.

pub mod barrier;
pub mod compare;
pub mod curvature;
pub mod dirichlet;
pub mod error;
pub mod io;
pub mod jacobi;
pub mod manifold;
pub mod numeric;
pub mod oracle;
mod radial;
pub mod scenario;

pub use error::{Error, Result};
pub use manifold::{BaseSpec, ManifoldSpec, ModelManifold, Orientation};
