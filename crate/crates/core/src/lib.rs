//! Exact construction of minuscule cones `(G/P)_a` for A4, D5, E6, E7 and of
//! universal torsor equations for split del Pezzo surfaces of degree 5 to 2,
//! presented as intersections of torus dilatations of those cones.

pub mod atlas;
pub mod error;
pub mod gpideal;
pub mod json;
pub mod minrep;
pub mod picard;
pub mod polyalg;
pub mod rootsys;
pub mod torsor;

pub use error::{Error, Result};
