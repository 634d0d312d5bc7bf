//! Double port graphs, adaptive instruments and contextuality bounds for
//! adaptive quantum computation.
//!
//! * [`dpg`]: labeled double port graphs with horizontal (quantum) and
//!   vertical (classical) wires, composition and canonical forms.
//! * [`paste`]: gadget substitution and label-set converters.
//! * [`quantum`]: dense matrices, CP maps and density operators.
//! * [`inst`]: adaptive instruments and their two compositions.
//! * [`models`]: label semantics, evaluation, gadgets, converters and rewriting.
//! * [`lp`]: a simplex solver over floats and exact rationals.
//! * [`contextuality`]: Bell scenarios, contextual fraction and the
//!   computational-power bound.

pub mod error;
pub mod quantum;
pub mod inst;
pub mod dpg;
pub mod paste;
pub mod models;
pub mod lp;
pub mod contextuality;

pub use error::{Error, Result};
