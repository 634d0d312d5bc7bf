//! The label catalog shared by all models.
//!
//! Port counts are `(h_in, h_out, v_in, v_out)`.

use std::collections::BTreeMap;

use crate::dpg::{Arity, Label};
use crate::error::{unknown, Error, Result};
use crate::quantum::Angle;

/// Boolean 1-state: no inputs, one output bit equal to 1.
pub const ONE: &str = "one";
/// Boolean delete: discards one bit.
pub const DELETE: &str = "delete";
/// Boolean XOR of two bits.
pub const XOR: &str = "xor";
/// Boolean OR of two bits.
pub const OR: &str = "or";
/// Boolean copy of one bit into two.
pub const COPY: &str = "copy";
/// Computational-basis preparation `|r⟩` controlled by an input bit.
pub const N_Z: &str = "N_Z";
/// Hadamard gate.
pub const H: &str = "H";
/// T gate.
pub const T: &str = "T";
/// Controlled-Z entangling gate.
pub const E: &str = "E";
/// Destructive Z measurement.
pub const M_Z: &str = "M_Z";
/// Preparation of `|+⟩`.
pub const N_X: &str = "N_X";
/// Pauli X correction controlled by an input bit.
pub const X: &str = "X";
/// Pauli Z correction controlled by an input bit.
pub const Z: &str = "Z";
/// Destructive measurement in the XY plane at angle `±alpha`.
pub const M: &str = "M";
/// Preparation of the magic state `T|+⟩`.
pub const N_T: &str = "N_T";
/// S correction controlled by an input bit.
pub const S: &str = "S";
/// Hadamard correction controlled by an input bit.
pub const H_C: &str = "H_c";
/// Non-destructive Z measurement.
pub const MND_Z: &str = "Mnd_Z";
/// Trace (discard a qubit).
pub const TR: &str = "Tr";
/// Preparation of `T^s|+⟩` controlled by an input bit.
pub const N_XT: &str = "N_XT";
/// Destructive X (setting 0) or Y (setting 1) measurement.
pub const M_XY: &str = "M_XY";

/// Parameter name of the measurement angle of [`M`].
pub const ALPHA: &str = "alpha";

/// Arity of every parameter-free builtin label, keyed by name.
pub fn builtin_arity(name: &str) -> Option<Arity> {
    Some(match name {
        ONE => Arity::new(0, 0, 0, 1),
        DELETE => Arity::new(0, 0, 1, 0),
        XOR | OR => Arity::new(0, 0, 2, 1),
        COPY => Arity::new(0, 0, 1, 2),
        N_Z | N_XT => Arity::new(0, 1, 1, 0),
        H | T => Arity::new(1, 1, 0, 0),
        E => Arity::new(2, 2, 0, 0),
        M_Z => Arity::new(1, 0, 0, 1),
        N_X | N_T => Arity::new(0, 1, 0, 0),
        X | Z | S | H_C => Arity::new(1, 1, 1, 0),
        M | M_XY => Arity::new(1, 0, 1, 1),
        MND_Z => Arity::new(1, 1, 0, 1),
        TR => Arity::new(1, 0, 0, 0),
        _ => return None,
    })
}

/// A builtin label by name and parameters, as used in serialized graphs.
pub fn builtin(name: &str, params: &BTreeMap<String, Angle>) -> Result<Label> {
    let arity = builtin_arity(name).ok_or_else(|| unknown("label", name))?;
    let mut label = Label::new(name, arity);
    if name == M {
        let alpha = params
            .get(ALPHA)
            .ok_or_else(|| Error::Invalid(format!("label {M} needs parameter {ALPHA}")))?;
        label = label.with_param(ALPHA, *alpha);
    }
    if let Some(extra) = params.keys().find(|k| !(name == M && k.as_str() == ALPHA)) {
        return Err(Error::Invalid(format!("label {name} has no parameter {extra}")));
    }
    Ok(label)
}

fn plain(name: &str) -> Label {
    Label::new(name, builtin_arity(name).expect("builtin name"))
}

/// The 1-state.
pub fn one() -> Label {
    plain(ONE)
}

/// The delete label.
pub fn delete() -> Label {
    plain(DELETE)
}

/// The XOR label.
pub fn xor() -> Label {
    plain(XOR)
}

/// The OR label.
pub fn or() -> Label {
    plain(OR)
}

/// The copy label.
pub fn copy() -> Label {
    plain(COPY)
}

/// The controlled computational-basis preparation.
pub fn n_z() -> Label {
    plain(N_Z)
}

/// The Hadamard gate.
pub fn h() -> Label {
    plain(H)
}

/// The T gate.
pub fn t() -> Label {
    plain(T)
}

/// The entangling gate.
pub fn e() -> Label {
    plain(E)
}

/// The destructive Z measurement.
pub fn m_z() -> Label {
    plain(M_Z)
}

/// The `|+⟩` preparation.
pub fn n_x() -> Label {
    plain(N_X)
}

/// The X correction.
pub fn x() -> Label {
    plain(X)
}

/// The Z correction.
pub fn z() -> Label {
    plain(Z)
}

/// The XY-plane measurement at angle `alpha`.
pub fn m_alpha(alpha: Angle) -> Label {
    plain(M).with_param(ALPHA, alpha)
}

/// The magic-state preparation.
pub fn n_t() -> Label {
    plain(N_T)
}

/// The S correction.
pub fn s() -> Label {
    plain(S)
}

/// The Hadamard correction.
pub fn h_c() -> Label {
    plain(H_C)
}

/// The non-destructive Z measurement.
pub fn mnd_z() -> Label {
    plain(MND_Z)
}

/// The trace label.
pub fn tr() -> Label {
    plain(TR)
}

/// The controlled `T^s|+⟩` preparation.
pub fn n_xt() -> Label {
    plain(N_XT)
}

/// The X/Y measurement.
pub fn m_xy() -> Label {
    plain(M_XY)
}

/// Arity of a single-qubit adaptive local instrument label.
pub const LOCAL_ARITY: Arity = Arity::new(1, 1, 1, 1);

/// Arity of a wrapped local instrument: two setting bits in, two copies of the outcome out, qubit discarded.
pub const WRAPPED_ARITY: Arity = Arity::new(1, 0, 2, 2);

/// Suffix marking the wrapped form of a local instrument label.
pub const WRAPPED_SUFFIX: &str = "~";

/// Label of a registered single-qubit local instrument.
pub fn local(name: &str) -> Label {
    Label::new(name, LOCAL_ARITY)
}

/// Label of the wrapped form of a registered local instrument.
pub fn wrapped(name: &str) -> Label {
    Label::new(format!("{name}{WRAPPED_SUFFIX}"), WRAPPED_ARITY)
}
