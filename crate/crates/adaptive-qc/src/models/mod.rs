//! Label semantics for the Boolean, circuit and adaptive models, the canonical
//! evaluator, the gadget library, converters and the rewrite engine.

pub mod converters;
pub mod eval;
pub mod gadgets;
pub mod labels;
pub mod rewrite;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::dpg::{Dpg, Label};
use crate::error::{unknown, Error, Result};
use crate::inst::AdaptiveInstrument;
use crate::quantum::{gate, ket, projector, projector_ket, Angle, ComplexMatrix, CpMap, ProjectorKind};

pub use converters::converter;
pub use eval::evaluate;
pub use gadgets::gadget;
pub use rewrite::{apply_rewrite, standard_form, RewriteRule, StandardForm};

use labels as l;

/// The label sets of the supported models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    /// Boolean circuits: 1-state, delete, XOR, OR, copy.
    B,
    /// Affine Boolean circuits: `B` without OR.
    BXor,
    /// Quantum circuits: `N_Z`, `H`, `T`, `E`, `M_Z`.
    C,
    /// Measurement-based computation with arbitrary rational angles.
    M,
    /// Measurement-based computation with angles in `{0, ±π/4}`.
    MPi4,
    /// Computation with magic states.
    Q,
    /// Measurement-based Pauli computation.
    P,
    /// `P` extended by X and S corrections.
    PTilde,
    /// Adaptive local instruments registered by name.
    A,
    /// Wrapped adaptive local instruments.
    ATilde,
    /// Every builtin label.
    Full,
}

impl Model {
    /// Every model.
    pub const ALL: [Model; 11] = [
        Model::B,
        Model::BXor,
        Model::C,
        Model::M,
        Model::MPi4,
        Model::Q,
        Model::P,
        Model::PTilde,
        Model::A,
        Model::ATilde,
        Model::Full,
    ];

    /// Short name used in serialized graphs.
    pub fn name(self) -> &'static str {
        match self {
            Model::B => "B",
            Model::BXor => "B+",
            Model::C => "C",
            Model::M => "M",
            Model::MPi4 => "M[pi/4]",
            Model::Q => "Q",
            Model::P => "P",
            Model::PTilde => "P~",
            Model::A => "A",
            Model::ATilde => "A~",
            Model::Full => "full",
        }
    }

    /// Whether a builtin label belongs to the model.
    pub fn allows_builtin(self, label: &Label) -> bool {
        let name = label.name();
        let affine = matches!(name, l::ONE | l::DELETE | l::XOR | l::COPY);
        match self {
            Model::B => affine || name == l::OR,
            Model::BXor | Model::A | Model::ATilde => affine,
            Model::C => matches!(name, l::N_Z | l::H | l::T | l::E | l::M_Z),
            Model::M => affine || matches!(name, l::N_X | l::E | l::X | l::Z | l::M),
            Model::MPi4 => {
                affine
                    || matches!(name, l::N_X | l::E | l::X | l::Z)
                    || (name == l::M
                        && label
                            .param(l::ALPHA)
                            .is_some_and(|a| [Angle::ZERO, Angle::PI_4, Angle::MINUS_PI_4].contains(&a)))
            }
            Model::Q => affine || matches!(name, l::N_T | l::E | l::S | l::H_C | l::MND_Z | l::TR),
            Model::P => affine || matches!(name, l::N_XT | l::E | l::M_XY),
            Model::PTilde => affine || matches!(name, l::N_XT | l::E | l::M_XY | l::X | l::S),
            Model::Full => l::builtin_arity(name).is_some(),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Model> {
        let norm = s.trim().to_ascii_lowercase().replace('π', "pi").replace('⊕', "+").replace('̃', "~");
        Model::ALL
            .into_iter()
            .find(|m| m.name().to_ascii_lowercase() == norm)
            .or(match norm.as_str() {
                "boolean" => Some(Model::B),
                "qc" => Some(Model::C),
                "mbqc" => Some(Model::M),
                "mbqc[pi/4]" | "m_pi4" => Some(Model::MPi4),
                "qcm" => Some(Model::Q),
                "mbpc" => Some(Model::P),
                "mbpc~" | "ptilde" => Some(Model::PTilde),
                _ => None,
            })
            .ok_or_else(|| unknown("model", s))
    }
}

/// Resolves labels of a model to adaptive instruments.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelSemantics {
    model: Model,
    locals: BTreeMap<String, AdaptiveInstrument>,
}

/// The semantics of a model.
pub fn semantics(model: Model) -> LabelSemantics {
    LabelSemantics {
        model,
        locals: BTreeMap::new(),
    }
}

impl LabelSemantics {
    /// The model.
    pub fn model(&self) -> Model {
        self.model
    }

    /// Registers a single-qubit local instrument `(1; 1 → 1; 1)` under a name.
    ///
    /// In model `A` the label [`labels::local`] resolves to it; in model `Ã`
    /// the label [`labels::wrapped`] resolves to its wrapped form.
    pub fn with_local(mut self, name: &str, inst: AdaptiveInstrument) -> Result<LabelSemantics> {
        if (inst.k(), inst.l(), inst.m(), inst.n()) != (1, 1, 1, 1) {
            return Err(Error::ArityMismatch(format!("local instrument {name} must be (1; 1 → 1; 1)")));
        }
        self.locals.insert(name.to_string(), inst);
        Ok(self)
    }

    /// Whether the label belongs to the model.
    pub fn allows(&self, label: &Label) -> bool {
        if self.model.allows_builtin(label) {
            return true;
        }
        match self.model {
            Model::A => label.arity() == l::LOCAL_ARITY && self.locals.contains_key(label.name()),
            Model::ATilde => {
                label.arity() == l::WRAPPED_ARITY
                    && label
                        .name()
                        .strip_suffix(l::WRAPPED_SUFFIX)
                        .is_some_and(|base| self.locals.contains_key(base))
            }
            _ => false,
        }
    }

    /// The instrument of a label.
    pub fn resolve(&self, label: &Label) -> Result<AdaptiveInstrument> {
        if !self.allows(label) {
            return Err(Error::LabelNotInModel {
                label: label.to_string(),
                model: self.model.to_string(),
            });
        }
        if self.model.allows_builtin(label) {
            return builtin_instrument(label);
        }
        match self.model {
            Model::A => Ok(self.locals[label.name()].clone()),
            _ => {
                let base = label.name().strip_suffix(l::WRAPPED_SUFFIX).expect("checked by allows");
                wrap_local(&self.locals[base])
            }
        }
    }

    /// Checks that every vertex label belongs to the model.
    pub fn check_graph(&self, g: &Dpg) -> Result<()> {
        for v in g.vertices() {
            if !self.allows(&v.label) {
                return Err(Error::LabelNotInModel {
                    label: v.label.to_string(),
                    model: self.model.to_string(),
                });
            }
        }
        Ok(())
    }
}

fn conj(a: &ComplexMatrix) -> CpMap {
    CpMap::from_conjugation(a).expect("power-of-two dimensions")
}

fn power(g: &str, r: usize) -> ComplexMatrix {
    if r == 1 {
        gate(g).expect("known gate")
    } else {
        ComplexMatrix::identity(2, 2)
    }
}

fn plus() -> ComplexMatrix {
    projector_ket(ProjectorKind::Alpha(Angle::ZERO), false)
}

/// The instrument of a builtin label.
pub fn builtin_instrument(label: &Label) -> Result<AdaptiveInstrument> {
    let correction = |g: &'static str| {
        AdaptiveInstrument::from_fn(1, 0, 1, 1, move |r, _| Some(conj(&power(g, r))))
    };
    match label.name() {
        l::ONE => Ok(AdaptiveInstrument::boolean(0, 1, |_| 1)),
        l::DELETE => Ok(AdaptiveInstrument::boolean(1, 0, |_| 0)),
        l::XOR => Ok(AdaptiveInstrument::boolean(2, 1, |a| (a >> 1) ^ (a & 1))),
        l::OR => Ok(AdaptiveInstrument::boolean(2, 1, |a| (a != 0) as usize)),
        l::COPY => Ok(AdaptiveInstrument::boolean(1, 2, |a| a | (a << 1))),
        l::N_Z => AdaptiveInstrument::from_fn(1, 0, 0, 1, |r, _| Some(conj(&ket(r, 1)))),
        l::H | l::T => AdaptiveInstrument::from_fn(0, 0, 1, 1, |_, _| Some(conj(&gate(label.name()).expect("gate")))),
        l::E => AdaptiveInstrument::from_fn(0, 0, 2, 2, |_, _| Some(conj(&gate("E").expect("gate")))),
        l::M_Z => AdaptiveInstrument::from_fn(0, 1, 1, 0, |_, s| Some(conj(&ket(s, 1).adjoint()))),
        l::N_X => AdaptiveInstrument::from_fn(0, 0, 0, 1, |_, _| Some(conj(&plus()))),
        l::X => correction("X"),
        l::Z => correction("Z"),
        l::S => correction("S"),
        l::H_C => correction("H"),
        l::M => {
            let alpha = label
                .param(l::ALPHA)
                .ok_or_else(|| Error::Invalid(format!("label {label} lacks {}", l::ALPHA)))?;
            AdaptiveInstrument::from_fn(1, 1, 1, 0, |r, s| {
                let angle = if r == 1 { -alpha } else { alpha };
                Some(conj(&projector_ket(ProjectorKind::Alpha(angle), s == 1).adjoint()))
            })
        }
        l::N_T => AdaptiveInstrument::from_fn(0, 0, 0, 1, |_, _| Some(conj(&(gate("T").expect("gate") * plus())))),
        l::MND_Z => AdaptiveInstrument::from_fn(0, 1, 1, 1, |_, r| Some(conj(&projector(ProjectorKind::Z, r == 1)))),
        l::TR => AdaptiveInstrument::unchecked(0, 0, 1, 0, [((0, 0), CpMap::trace(1))]),
        l::N_XT => AdaptiveInstrument::from_fn(1, 0, 0, 1, |s, _| Some(conj(&(power("T", s) * plus())))),
        l::M_XY => AdaptiveInstrument::from_fn(1, 1, 1, 0, |s, r| {
            Some(conj(&projector_ket(ProjectorKind::XTwist(s == 1), r == 1).adjoint()))
        }),
        other => Err(unknown("label", other)),
    }
}

/// The wrapped form `(2; 1 → 0; 2)` of a local instrument: the setting is the
/// XOR of both input bits, the outcome is copied to both output bits and the
/// qubit is discarded.
pub fn wrap_local(base: &AdaptiveInstrument) -> Result<AdaptiveInstrument> {
    if (base.k(), base.l(), base.m(), base.n()) != (1, 1, 1, 1) {
        return Err(Error::ArityMismatch("only (1; 1 → 1; 1) instruments can be wrapped".into()));
    }
    let tr = CpMap::trace(1);
    let mut entries = Vec::new();
    for r in 0..4usize {
        let setting = (r >> 1) ^ (r & 1);
        for (&(a, s), phi) in base.table() {
            if a == setting {
                entries.push(((r, s | (s << 1)), phi.then(&tr)?));
            }
        }
    }
    AdaptiveInstrument::unchecked(2, 2, 1, 0, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inst::kleisli;
    use crate::quantum::{max_abs_diff, outer, TOL};

    #[test]
    fn every_builtin_is_a_valid_instrument() {
        let mut names: Vec<Label> = [
            l::ONE, l::DELETE, l::XOR, l::OR, l::COPY, l::N_Z, l::H, l::T, l::E, l::M_Z, l::N_X, l::X, l::Z,
            l::N_T, l::S, l::H_C, l::MND_Z, l::TR, l::N_XT, l::M_XY,
        ]
        .iter()
        .map(|n| l::builtin(n, &BTreeMap::new()).unwrap())
        .collect();
        names.push(l::m_alpha(Angle::PI_4));
        names.push(l::m_alpha(Angle::new(1, 3).unwrap()));
        for lab in names {
            let inst = builtin_instrument(&lab).unwrap();
            inst.validate(TOL).unwrap_or_else(|e| panic!("{lab}: {e}"));
            let a = lab.arity();
            assert_eq!((inst.k(), inst.l(), inst.m(), inst.n()), (a.v_in, a.v_out, a.h_in, a.h_out), "{lab}");
        }
    }

    #[test]
    fn pi4_model_rejects_other_angles() {
        let sem = semantics(Model::MPi4);
        assert!(sem.resolve(&l::m_alpha(Angle::new(1, 3).unwrap())).is_err());
        assert!(sem.resolve(&l::m_alpha(Angle::MINUS_PI_4)).is_ok());
        assert!(semantics(Model::M).resolve(&l::m_alpha(Angle::new(1, 3).unwrap())).is_ok());
    }

    #[test]
    fn n_xt_with_one_prepares_magic_state() {
        let inst = semantics(Model::P).resolve(&l::n_xt()).unwrap();
        let prepared = inst.entry(1, 0).apply(&ComplexMatrix::identity(1, 1)).unwrap();
        let magic = gate("T").unwrap() * plus();
        assert!(max_abs_diff(&prepared, &outer(&magic)) < 1e-15);
    }

    #[test]
    fn copy_with_one_is_point_mass() {
        let k = kleisli(&semantics(Model::B).resolve(&l::copy()).unwrap()).unwrap();
        assert_eq!(k.row(1), &[0.0, 0.0, 0.0, 1.0]);
        assert!(semantics(Model::BXor).resolve(&l::or()).is_err());
    }

    #[test]
    fn model_names_roundtrip() {
        for m in Model::ALL {
            assert_eq!(m.name().parse::<Model>().unwrap(), m);
        }
        assert_eq!("mbqc".parse::<Model>().unwrap(), Model::M);
        assert!("nope".parse::<Model>().is_err());
    }

    #[test]
    fn wrapped_setting_enters_through_xor() {
        let base = AdaptiveInstrument::from_fn(1, 1, 1, 1, |s, r| {
            Some(conj(&projector(ProjectorKind::XTwist(s == 1), r == 1)))
        })
        .unwrap();
        let w = wrap_local(&base).unwrap();
        for r in 0..4 {
            for c in 0..2 {
                let shifted = r ^ (c | (c << 1));
                for b in 0..4 {
                    assert!(w.entry(r, b).distance(&w.entry(shifted, b)) < 1e-15);
                }
            }
        }
        w.validate(TOL).unwrap();
    }
}
