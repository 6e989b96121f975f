//! Compiler passes turning the model's tagged nonlinear atoms into
//! mixed-integer linear/conic form.
//!
//! Pass order matters only in one place: the fractional pass can introduce
//! binary-gated products, so the exact linearization passes run after it.
//! [`apply_all`] runs the standard pipeline:
//!
//! 1. [`binary_product_pass`] — AND-encodes binary×binary products.
//! 2. [`fractional_pass`] — rewrites reciprocals into bilinear links with
//!    derived bounds.
//! 3. [`polynomial_lift_pass`] — lifts univariate polynomials (degree ≤ 5)
//!    and multilinear products into chains of bilinear terms.
//! 4. [`glover_pass`] — big-M linearization of one-hot selections and
//!    binary×continuous products, with per-atom constants from the
//!    continuous factor's bounds.
//! 5. [`mccormick_pass`] — piecewise McCormick envelopes for all remaining
//!    bilinear terms; the terms stay recorded for spatial refinement.
//!
//! Every pass is idempotent (it consumes all atoms of its kind) and
//! tag-preserving: emitted rows carry the tag of the atom they replace.

use core::fmt;

mod binprod;
mod fractional;
mod glover;
mod interval;
mod mccormick;
mod polylift;

pub use binprod::binary_product_pass;
pub use fractional::fractional_pass;
pub use glover::glover_pass;
pub use interval::{mul_interval, propagate_bilinear_bounds, square_interval};
pub use mccormick::{mccormick_pass, refine_envelope, McCormickOptions};
pub use polylift::polynomial_lift_pass;

use crate::ir::ProblemIR;

#[derive(Clone, Debug, PartialEq)]
pub enum ReformError {
    /// A pass needed finite bounds on this variable and found none.
    UnboundedVariable(alloc::string::String),
    /// A reciprocal's denominator range includes zero.
    DenominatorSpansZero(alloc::string::String),
    /// Polynomial degree beyond the supported lifting.
    DegreeTooHigh(usize),
    /// An atom kind survived the full pipeline.
    UnprocessedAtom(&'static str),
}

impl fmt::Display for ReformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReformError::UnboundedVariable(name) => {
                write!(f, "variable `{name}` needs finite bounds for this pass")
            }
            ReformError::DenominatorSpansZero(name) => {
                write!(f, "denominator `{name}` has a range including zero")
            }
            ReformError::DegreeTooHigh(d) => {
                write!(f, "polynomial degree {d} exceeds the supported 5")
            }
            ReformError::UnprocessedAtom(kind) => {
                write!(f, "atom kind `{kind}` left unprocessed by the pipeline")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ReformError {}

/// Runs the full pipeline with the given envelope options. On success the IR
/// contains only linear rows, cone rows, and retained spatial metadata.
pub fn apply_all(ir: &mut ProblemIR, options: &McCormickOptions) -> Result<(), ReformError> {
    binary_product_pass(ir)?;
    fractional_pass(ir)?;
    polynomial_lift_pass(ir)?;
    glover_pass(ir)?;
    mccormick_pass(ir, options)?;
    if let Some(atom) = ir.atoms.first() {
        let kind = match atom {
            crate::ir::Atom::OneHotSelect { .. } => "one-hot select",
            crate::ir::Atom::BinContProduct { .. } => "binary-continuous product",
            crate::ir::Atom::BinaryProduct { .. } => "binary product",
            crate::ir::Atom::Reciprocal { .. } => "reciprocal",
            crate::ir::Atom::Bilinear { .. } => "bilinear",
            crate::ir::Atom::Polynomial { .. } => "polynomial",
            crate::ir::Atom::Product { .. } => "product",
        };
        return Err(ReformError::UnprocessedAtom(kind));
    }
    Ok(())
}

extern crate alloc;
