use adaptive_qc::inst::kleisli;
use adaptive_qc::models::gadgets::*;
use adaptive_qc::models::{evaluate, semantics, Model};
use adaptive_qc::quantum::{gate, ghz_density, pauli_string, Angle, ComplexMatrix, CpMap, DensityMatrix, TOL};

fn channel_of(g: &adaptive_qc::dpg::Dpg, model: Model) -> CpMap {
    let inst = evaluate(g, &semantics(model)).unwrap();
    inst.validate(TOL).unwrap();
    adaptive_qc::inst::channel(&inst).unwrap()
}

fn unitary(u: &ComplexMatrix) -> CpMap {
    CpMap::from_conjugation(u).unwrap()
}

fn jmat(alpha: Angle) -> ComplexMatrix {
    gate("H").unwrap() * adaptive_qc::quantum::phase_gate(alpha)
}

#[test]
fn j_gadget_is_j_unitary() {
    for alpha in [Angle::ZERO, Angle::PI_4, Angle::MINUS_PI_4, Angle::new(1, 3).unwrap()] {
        let d = channel_of(&j(alpha), Model::M).distance(&unitary(&jmat(alpha)));
        assert!(d < 1e-9, "alpha {alpha}: {d}");
    }
    assert!(channel_of(&j(Angle::ZERO), Model::MPi4).distance(&unitary(&gate("H").unwrap())) < 1e-9);
}

#[test]
fn t_from_two_j_gadgets() {
    assert!(channel_of(&t_m(), Model::MPi4).distance(&unitary(&gate("T").unwrap())) < 1e-9);
}

#[test]
fn teleport_is_identity() {
    assert!(channel_of(&teleport(), Model::M).distance(&CpMap::identity(1)) < 1e-9);
}

#[test]
fn t_gadget_is_t() {
    assert!(channel_of(&t_gadget(), Model::Q).distance(&unitary(&gate("T").unwrap())) < 1e-9);
}

#[test]
fn h_mbpc_is_hadamard() {
    assert!(channel_of(&h_mbpc(), Model::PTilde).distance(&unitary(&gate("H").unwrap())) < 1e-9);
}

#[test]
fn ghz_gadgets_prepare_ghz() {
    let target = ghz_density(3).unwrap();
    for (g, model) in [(ghz_m(3).unwrap(), Model::M), (ghz_ptilde(3).unwrap(), Model::PTilde)] {
        let state = channel_of(&g, model).apply(&ComplexMatrix::identity(1, 1)).unwrap();
        let diff = adaptive_qc::quantum::max_abs_diff(&state, target.matrix());
        assert!(diff < 1e-9, "{model}: {diff}");
    }
}

#[test]
fn mermin_signs() {
    let ghz = ghz_density(3).unwrap();
    let e = |p: &str| ghz.expectation(&pauli_string(p).unwrap()).unwrap().re;
    assert!((e("XXX") - 1.0).abs() < 1e-12);
    for p in ["XYY", "YXY", "YYX"] {
        assert!((e(p) + 1.0).abs() < 1e-12);
    }
    let _ = DensityMatrix::zero_state(1);
}

#[test]
fn drawn_or_gadget_computes_nor() {
    let k = kleisli(&evaluate(&or_gadget(), &semantics(Model::PTilde)).unwrap()).unwrap();
    assert_eq!(k.as_function(1e-9).unwrap(), vec![1, 0, 0, 0]);
    let k = kleisli(&evaluate(&or_parity_gadget(), &semantics(Model::PTilde)).unwrap()).unwrap();
    assert_eq!(k.as_function(1e-9).unwrap(), vec![0, 1, 1, 1]);
}

#[test]
fn and_gadgets() {
    let k = kleisli(&evaluate(&and_b(), &semantics(Model::B)).unwrap()).unwrap();
    assert_eq!(k.as_function(1e-9).unwrap(), vec![0, 0, 0, 1]);
    let k = kleisli(&evaluate(&and_ptilde(), &semantics(Model::PTilde)).unwrap()).unwrap();
    assert_eq!(k.as_function(1e-9).unwrap(), vec![0, 0, 0, 1]);
}

#[test]
fn not_and_zero() {
    let k = kleisli(&evaluate(&not_gate(), &semantics(Model::BXor)).unwrap()).unwrap();
    assert_eq!(k.as_function(1e-9).unwrap(), vec![1, 0]);
    let k = kleisli(&evaluate(&zero(), &semantics(Model::BXor)).unwrap()).unwrap();
    assert_eq!(k.as_function(1e-9).unwrap(), vec![0]);
}

#[test]
fn teleported_j_pi4_is_j_pi4() {
    let target = unitary(&jmat(Angle::PI_4));
    let d = channel_of(&teleported_j_pi4(), Model::PTilde).distance(&target);
    assert!(d < 1e-9, "{d}");
}

#[test]
fn teleported_j_pi4_as_drawn_differs() {
    let target = unitary(&jmat(Angle::PI_4));
    let d = channel_of(&teleported_j_pi4_as_drawn(), Model::PTilde).distance(&target);
    eprintln!("as drawn distance {d}");
    assert!(d > 1e-3);
}
