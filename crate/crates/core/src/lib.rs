//! Airy-convolution solutions of the linearized KdV equation
//! `u_t + u_xxx = 0` for initial data with power-like behaviour at infinity,
//! their leading large-time asymptotics in the self-similar variable
//! `η = x / (3t)^{1/3}`, and independent numerical checks of both.

pub mod acceptance;
pub mod airy;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod initial_data;
mod oscillatory;
pub mod quadrature;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
