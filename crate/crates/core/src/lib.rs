//! Grand Lebesgue space norms and sharp Sobolev-type constants.
//!
//! The crate evaluates Talenti's sharp Sobolev constant, upper bounds for the
//! radial trace constant, norms of radial functions (closed form for the
//! log-power family `|ln|x||^Δ 1{|x| ≤ 1}`, adaptive quadrature otherwise),
//! Grand Lebesgue space norms `sup_p |f|_p / ψ(p)`, and the ratio sweeps
//! showing that the constant one in the GLS Sobolev inequalities cannot be
//! improved.

pub mod cli;
pub mod config;
pub mod constants;
pub mod error;
pub mod exponents;
pub mod gls;
pub mod hardy;
pub mod optimize;
pub mod quad;
pub mod radial;
pub mod report;
pub mod sharpness;
pub mod specfun;

pub use error::{Error, Result};
pub use exponents::{Interval, Setting};
pub use radial::{NormResult, RadialProfile};
pub use specfun::LogValue;
