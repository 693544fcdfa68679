//! Exact LP relaxations, rounding procedures, integrality-gap constructions
//! and combinatorial approximation algorithms for scheduling on unrelated
//! machines, with a brute-force oracle for checking the guarantees on small
//! instances.
//!
//! All arithmetic in correctness-critical paths is exact ([`Rational`]).

pub mod assignment;
pub mod cli;
pub mod configlp;
pub mod error;
pub mod gaplab;
pub mod instance;
pub mod io;
pub mod lp;
pub mod maxmin;
mod matching;
pub mod oracle;
pub mod random;
pub mod rational;

pub use assignment::{
    makespan, min_load, FractionalAssignment, HalfIntegralAssignment, IntegralAssignment,
    JobShare, LoadProfile,
};
pub use error::{AssignmentError, InstanceError};
pub use instance::{Instance, ProcessingTime};
pub use rational::Rational;
