//! Constructive solver and verifier for the uniform Hamilton-Waterloo
//! problem `HWP(v; M, N; alpha, beta)` with `M` an odd divisor of `N`.
//!
//! Every construction in this crate returns a [`Certificate`] that has
//! already passed [`certify::verify`]; anything that cannot be built is
//! reported as an explicit refusal instead.

pub mod assembly;
pub mod cayley;
pub mod certify;
pub mod cmn;
pub mod designs;
pub mod error;
pub mod graph;
pub mod lex;
pub mod matrix;
pub mod oracle;
pub mod pipeline;
pub mod skolem;

pub use certify::{Certificate, Claim, Cycle, Factor, Verdict};
pub use error::{HwpError, Refusal, Result};
pub use graph::{GraphSpec, Vertex};
