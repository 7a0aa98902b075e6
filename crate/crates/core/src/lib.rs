//! Quantum-mechanical Carnot engine with a Woods-Saxon working substance.
//!
//! A single particle sits in a well of width `L`. Moving the wall while the
//! energy expectation value is held fixed plays the role of an isotherm;
//! moving it with the particle locked in one eigenstate plays the role of an
//! adiabat. The crate computes level energies and wall pressures
//! ([`spectrum`]), solves the four strokes ([`processes`]), assembles the
//! cycle and its work, heat input and efficiency ([`cycle`]), and ships the
//! quadrature and root-finding oracles it relies on ([`numerics`]).
//! [`cli`] is the command-line front end.

pub mod cli;
pub mod cycle;
pub mod error;
pub mod numerics;
pub mod processes;
pub mod spectrum;

pub use cycle::{run_cycle, CycleResult, CycleSpec, Mode};
pub use error::{Error, Result};
pub use spectrum::{EngineParams, LevelIndex, MixedState};
