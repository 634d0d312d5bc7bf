//! Converter dictionaries between the circuit model and the adaptive models.

use crate::dpg::{Dpg, GraphBuilder, Label};
use crate::error::{unknown, Error, Result};
use crate::paste::{paste, GadgetDictionary};
use crate::quantum::Angle;

use super::gadgets::{
    copy_into, h_correction_into, h_mbpc, h_mbpc_into, j, j_into, plus_mbpc_into, t_gadget, t_m,
    teleported_j_pi4_into, xor_into, z_ptilde_into, zero_into,
};
use super::labels as l;
use super::Model;

/// Names understood by [`converter`].
pub const CONVERTER_NAMES: [&str; 4] = ["qc-to-mbqc", "qc-to-qcm", "mbpc-to-qcm", "qc-to-mbpc"];

/// Source and target model of a named converter.
pub fn converter_models(name: &str) -> Result<(Model, Model)> {
    match name {
        "qc-to-mbqc" => Ok((Model::C, Model::MPi4)),
        "qc-to-qcm" => Ok((Model::C, Model::Q)),
        "mbpc-to-qcm" => Ok((Model::PTilde, Model::Q)),
        "qc-to-mbpc" => Ok((Model::C, Model::PTilde)),
        _ => Err(unknown("converter", name)),
    }
}

/// The converter dictionary of the given name.
///
/// * `qc-to-mbqc`: `H ↦ J(0)`, `T ↦ J(π/4)` then `J(0)`, `E ↦ E`, `N_Z ↦ N_X`
///   then `Z` then `J(0)`, `M_Z ↦ J(0)` then `M(0)`.
/// * `qc-to-qcm`: `H ↦ H_c•𝟏`, `T ↦` T-gadget, `M_Z ↦ Mnd_Z` then `Tr`,
///   `N_Z ↦` Z-measured magic state with a conditional X.
/// * `mbpc-to-qcm`: X/Y measurements and `N_{X/T}` preparations expressed with
///   S, Hadamard corrections and non-destructive Z measurements.
/// * `qc-to-mbpc`: `H ↦` H-mbpc, `T ↦` teleported `J(π/4)` then H-mbpc.
///
/// Affine Boolean labels map to themselves in every dictionary.
pub fn converter(name: &str) -> Result<GadgetDictionary> {
    let affine = [l::one(), l::delete(), l::xor(), l::copy()];
    let dict = match name {
        "qc-to-mbqc" => GadgetDictionary::new()
            .with(l::h(), j(Angle::ZERO))?
            .with(l::t(), t_m())?
            .with(l::e(), Dpg::single(l::e()))?
            .with(l::n_z(), qc_to_mbqc_prep())?
            .with(l::m_z(), qc_to_mbqc_meas())?,
        "qc-to-qcm" => GadgetDictionary::new()
            .with(l::h(), h_qcm())?
            .with(l::t(), t_gadget())?
            .with(l::e(), Dpg::single(l::e()))?
            .with(l::n_z(), qc_to_qcm_prep())?
            .with(l::m_z(), qc_to_qcm_meas())?,
        "mbpc-to-qcm" => GadgetDictionary::new()
            .with(l::e(), Dpg::single(l::e()))?
            .with(l::s(), Dpg::single(l::s()))?
            .with(l::x(), x_qcm())?
            .with(l::m_xy(), m_xy_qcm())?
            .with(l::n_xt(), n_xt_qcm())?,
        "qc-to-mbpc" => GadgetDictionary::new()
            .with(l::h(), h_mbpc())?
            .with(l::t(), t_mbpc())?
            .with(l::e(), Dpg::single(l::e()))?
            .with(l::n_z(), qc_to_mbpc_prep())?
            .with(l::m_z(), qc_to_mbpc_meas())?,
        _ => return Err(unknown("converter", name)),
    };
    Ok(dict.with_identity_for(affine))
}

/// The converter taking graphs of `source` to `target`, by target name
/// `mbqc`, `qcm` or `mbpc`.
pub fn converter_for(source: Model, target: &str) -> Result<&'static str> {
    let name = match (source, target) {
        (Model::C, "mbqc") => "qc-to-mbqc",
        (Model::C, "qcm") => "qc-to-qcm",
        (Model::C, "mbpc") => "qc-to-mbpc",
        (Model::P | Model::PTilde, "qcm") => "mbpc-to-qcm",
        _ => {
            return Err(Error::Invalid(format!("no converter from model {source} to {target}")));
        }
    };
    Ok(name)
}

/// Pastes the named converter into a graph and returns the result with its model.
pub fn convert_with(g: &Dpg, name: &str) -> Result<(Model, Dpg)> {
    let (source, target) = converter_models(name)?;
    super::semantics(source).check_graph(g)?;
    Ok((target, paste(g, &converter(name)?)?))
}

fn single_qubit(f: impl FnOnce(&mut GraphBuilder, crate::dpg::Endpoint) -> crate::dpg::Endpoint) -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let out = f(&mut b, q);
    b.h_output(out);
    b.build().expect("valid gadget")
}

fn qc_to_mbqc_prep() -> Dpg {
    let mut b = GraphBuilder::new();
    let r = b.v_input();
    let (p, _) = b.add(l::n_x(), &[], &[]);
    let (z, _) = b.add(l::z(), &[p[0].clone()], &[r]);
    let out = j_into(&mut b, Angle::ZERO, z[0].clone());
    b.h_output(out);
    b.build().expect("valid gadget")
}

fn qc_to_mbqc_meas() -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let h = j_into(&mut b, Angle::ZERO, q);
    let (_, one) = b.add(l::one(), &[], &[]);
    let (_, s) = b.add(l::m_alpha(Angle::ZERO), &[h], &[one[0].clone()]);
    b.v_output(s[0].clone());
    b.build().expect("valid gadget")
}

fn h_qcm() -> Dpg {
    single_qubit(h_correction_into)
}

/// Adds `X^r = H S^r S^r H` in `Q`.
fn x_qcm_into(b: &mut GraphBuilder, q: crate::dpg::Endpoint, r: crate::dpg::Endpoint) -> crate::dpg::Endpoint {
    let h = h_correction_into(b, q);
    let z = z_ptilde_into(b, h, r);
    h_correction_into(b, z)
}

/// Adds an X measurement in `Q`: Hadamard, non-destructive Z measurement, trace.
fn measure_x_qcm_into(b: &mut GraphBuilder, q: crate::dpg::Endpoint) -> crate::dpg::Endpoint {
    let h = h_correction_into(b, q);
    measure_z_qcm_into(b, h)
}

fn measure_z_qcm_into(b: &mut GraphBuilder, q: crate::dpg::Endpoint) -> crate::dpg::Endpoint {
    let (m, t) = b.add(l::mnd_z(), &[q], &[]);
    b.add(l::tr(), &[m[0].clone()], &[]);
    t[0].clone()
}

fn qc_to_qcm_meas() -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let t = measure_z_qcm_into(&mut b, q);
    b.v_output(t);
    b.build().expect("valid gadget")
}

fn qc_to_qcm_prep() -> Dpg {
    let mut b = GraphBuilder::new();
    let r = b.v_input();
    let (magic, _) = b.add(l::n_t(), &[], &[]);
    let (q, t) = b.add(l::mnd_z(), &[magic[0].clone()], &[]);
    let flip = xor_into(&mut b, t[0].clone(), r);
    let out = x_qcm_into(&mut b, q[0].clone(), flip);
    b.h_output(out);
    b.build().expect("valid gadget")
}

fn x_qcm() -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let r = b.v_input();
    let out = x_qcm_into(&mut b, q, r);
    b.h_output(out);
    b.build().expect("valid gadget")
}

fn m_xy_qcm() -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let s = b.v_input();
    let (s1, s2) = copy_into(&mut b, s);
    let (sq, _) = b.add(l::s(), &[q], &[s1]);
    let t = measure_x_qcm_into(&mut b, sq[0].clone());
    let out = xor_into(&mut b, s2, t);
    b.v_output(out);
    b.build().expect("valid gadget")
}

fn n_xt_qcm() -> Dpg {
    let mut b = GraphBuilder::new();
    let s = b.v_input();
    let (magic, _) = b.add(l::n_t(), &[], &[]);
    let h = h_correction_into(&mut b, magic[0].clone());
    let (z, t) = b.add(l::mnd_z(), &[h], &[]);
    let h = h_correction_into(&mut b, z[0].clone());
    let q_o = z_ptilde_into(&mut b, h, t[0].clone());

    let (q_a, _) = b.add(l::n_t(), &[], &[]);
    let (e, _) = b.add(l::e(), &[q_a[0].clone(), q_o], &[]);
    let (s1, s2) = copy_into(&mut b, s);
    let (ha, _) = b.add(l::h_c(), &[e[0].clone()], &[s1]);
    let u = measure_z_qcm_into(&mut b, ha[0].clone());
    let (ho, _) = b.add(l::h_c(), &[e[1].clone()], &[s2]);
    let out = z_ptilde_into(&mut b, ho[0].clone(), u);
    b.h_output(out);
    b.build().expect("valid gadget")
}

fn t_mbpc() -> Dpg {
    single_qubit(|b, q| {
        let jq = teleported_j_pi4_into(b, q);
        h_mbpc_into(b, jq)
    })
}

fn qc_to_mbpc_prep() -> Dpg {
    let mut b = GraphBuilder::new();
    let r = b.v_input();
    let p = plus_mbpc_into(&mut b);
    let z = z_ptilde_into(&mut b, p, r);
    let out = h_mbpc_into(&mut b, z);
    b.h_output(out);
    b.build().expect("valid gadget")
}

fn qc_to_mbpc_meas() -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let h = h_mbpc_into(&mut b, q);
    let z = zero_into(&mut b);
    let (_, s) = b.add(l::m_xy(), &[h], &[z]);
    b.v_output(s[0].clone());
    b.build().expect("valid gadget")
}

/// Labels of the source model covered by a converter, used for coverage checks.
pub fn source_labels(name: &str) -> Result<Vec<Label>> {
    Ok(converter(name)?.entries().keys().cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::semantics;

    #[test]
    fn dictionaries_land_in_target_model() {
        for name in CONVERTER_NAMES {
            let (_, target) = converter_models(name).unwrap();
            for (label, g) in converter(name).unwrap().entries() {
                semantics(target)
                    .check_graph(g)
                    .unwrap_or_else(|e| panic!("{name} {label}: {e}"));
            }
        }
    }

    #[test]
    fn qc_to_qcm_h_is_correction_on_one() {
        let g = converter("qc-to-qcm").unwrap().get(&l::h()).unwrap().clone();
        assert_eq!(g.vertices().len(), 2);
        assert!(converter("nope").is_err());
    }
}
