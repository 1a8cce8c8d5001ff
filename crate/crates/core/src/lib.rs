//! shiftlab: numerically rigorous structure theory of almost-invariant and
//! nearly-invariant subspaces of the shift at finite truncation.

pub mod error;
pub mod frame;
pub mod hardy;
pub mod hitt;
pub mod invariance;
pub mod model;
pub mod scalar;
pub mod tolerance;

pub use error::{Error, Result};
pub use frame::{Frame, ProductFrame};
pub use hardy::{multiply_truncate, BlaschkeProduct, TaylorVec};
pub use scalar::{Cx, Scalar};
pub use tolerance::Tolerances;

/// Concrete `f64` aliases; the default instantiation used by the CLI.
pub type C64 = Cx<f64>;
pub type TaylorVec64 = TaylorVec<f64>;
pub type BlaschkeProduct64 = BlaschkeProduct<f64>;
pub type Frame64 = Frame<f64>;
pub type ProductFrame64 = ProductFrame<f64>;
pub type Tolerances64 = Tolerances<f64>;

/// `f32` aliases for low-precision experimentation.
pub type C32 = Cx<f32>;
pub type TaylorVec32 = TaylorVec<f32>;
pub type Frame32 = Frame<f32>;
