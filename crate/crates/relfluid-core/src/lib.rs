//! Analysis toolkit for relativistic fluids.
//!
//! The crate is organised by topic: [`thermo`] (equations of state),
//! [`kinematics`] (pointwise geometry of a fluid state), [`characteristics`]
//! (principal symbol, sound cones, hyperbolicity), [`formulation`] (grid
//! residuals of vorticity and enthalpy-wave identities), [`viscous_causality`]
//! (DNMR and BDNK causality inequalities and cell audits), [`sim1d`] (a 1+1D
//! finite-volume solver) and [`vacuum1d`] (free-boundary diagnostics).
//!
//! Algorithm variants (equations of state, reconstructions, Riemann solvers,
//! time integrators, residual checks, causality theories, vacuum closures and
//! initial conditions) implement a common trait per family and are looked up
//! by name through [`registry::Registry`].

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Tensor code reads closest to index notation with explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod characteristics;
pub mod error;
pub mod formulation;
pub mod io;
pub mod kinematics;
pub mod registry;
pub mod sim1d;
pub mod tensor;
pub mod thermo;
pub mod vacuum1d;
pub mod viscous_causality;

pub use error::{Error, Result};
