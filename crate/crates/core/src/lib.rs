//! Amoebae and tropicalizations of Laurent hypersurfaces, and numerical
//! checks that scaled amoebae converge to tropical varieties.
//!
//! * [`poly`]: Laurent polynomials over `C` and over `C[t, 1/t]`.
//! * [`tropical`]: tropical polynomials and planar corner loci.
//! * [`amoeba`]: amoeba sampling, a slice membership test and lopsidedness.
//! * [`hybrid`]: monomial valuations, hybrid seminorms and polycircles.
//! * [`converge`]: Hausdorff distances and Kuratowski-style checks.
//! * [`toric`]: lattice polytopes and moment maps.
//! * [`experiment`]: the scaling-limit experiments driven by the CLI.

pub mod amoeba;
pub mod converge;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod hybrid;
pub mod io;
pub mod poly;
pub mod toric;
pub mod tropical;
pub mod window;

pub use error::{Error, Result};
pub use exec::Execution;
pub use window::Window;
