mod common;

use adaptive_qc::dpg::{self, Dpg};
use adaptive_qc::inst::{self, instrument_distance};
use adaptive_qc::models::converters::convert_with;
use adaptive_qc::models::rewrite::{mbpc_rules, mbqc_rules};
use adaptive_qc::models::{evaluate, labels as l, semantics, standard_form, Model};
use adaptive_qc::quantum::Angle;
use proptest::prelude::*;

use common::{random_m_graph, random_qc_graph, rng};

const TOL: f64 = 1e-9;

fn eval(g: &Dpg, model: Model) -> inst::AdaptiveInstrument {
    evaluate(g, &semantics(model)).unwrap()
}

fn labels_of(g: &Dpg) -> Vec<&str> {
    g.vertices().iter().map(|v| v.label.name()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evaluation_respects_horizontal_composition(seed in any::<u64>(), m in 0usize..=2, k in 0usize..=2, k2 in 0usize..=1) {
        let mut r = rng(seed);
        let top = random_qc_graph(&mut r, m, k);
        let next = random_qc_graph(&mut r, top.n(), k2);
        let whole = dpg::compose_h(&top, &next).unwrap();
        let expected = inst::compose_h(&eval(&top, Model::C), &eval(&next, Model::C)).unwrap();
        prop_assert!(instrument_distance(&eval(&whole, Model::C), &expected).unwrap() < TOL);
    }

    #[test]
    fn evaluation_respects_vertical_composition(seed in any::<u64>(), m in 0usize..=1, k in 0usize..=2) {
        let mut r = rng(seed);
        let top = random_qc_graph(&mut r, m, k);
        let bottom = random_qc_graph(&mut r, 0, top.l());
        let whole = dpg::compose_v(&top, &bottom).unwrap();
        let expected = inst::compose_v(&eval(&top, Model::C), &eval(&bottom, Model::C)).unwrap();
        prop_assert!(instrument_distance(&eval(&whole, Model::C), &expected).unwrap() < TOL);
    }

    #[test]
    fn converters_preserve_semantics(seed in any::<u64>(), m in 0usize..=2, k in 0usize..=2) {
        let mut r = rng(seed);
        let g = random_qc_graph(&mut r, m, k);
        let before = eval(&g, Model::C);
        for name in ["qc-to-mbqc", "qc-to-qcm", "qc-to-mbpc"] {
            let (model, converted) = convert_with(&g, name).unwrap();
            prop_assert_eq!(converted.arity(), g.arity());
            let d = instrument_distance(&eval(&converted, model), &before).unwrap();
            prop_assert!(d < TOL, "{}: {}", name, d);
            if name == "qc-to-mbpc" {
                let (model, twice) = convert_with(&converted, "mbpc-to-qcm").unwrap();
                prop_assert_eq!(twice.arity(), g.arity());
                let d = instrument_distance(&eval(&twice, model), &before).unwrap();
                prop_assert!(d < TOL, "mbpc-to-qcm: {}", d);
            }
        }
    }

    #[test]
    fn standard_form_preserves_semantics_and_splits_layers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_m_graph(&mut r);
        let sf = standard_form(&g).unwrap();
        let before = eval(&g, Model::M);
        prop_assert!(instrument_distance(&eval(&sf.rewritten, Model::M), &before).unwrap() < TOL);
        prop_assert!(instrument_distance(&eval(&sf.assemble().unwrap(), Model::M), &before).unwrap() < TOL);
        prop_assert!(labels_of(&sf.prep).iter().all(|n| [l::N_X, l::E].contains(n)));
        prop_assert!(labels_of(&sf.meas).iter().all(|n| [l::M, l::ONE, l::DELETE, l::XOR, l::OR, l::COPY].contains(n)));
        prop_assert!(labels_of(&sf.corr).iter().all(|n| [l::X, l::Z].contains(n)));
        prop_assert_eq!(sf.corr.k(), sf.exported);
    }
}

#[test]
fn correction_rules_are_sound() {
    for alpha in [Angle::ZERO, Angle::PI_4, Angle::MINUS_PI_4] {
        let rules = mbqc_rules(alpha).unwrap();
        assert_eq!(rules.len(), 6);
        for rule in &rules {
            let d = instrument_distance(&eval(rule.lhs(), Model::M), &eval(rule.rhs(), Model::M)).unwrap();
            assert!(d < TOL, "{}: {d}", rule.name());
        }
    }
    for rule in mbpc_rules().unwrap() {
        let d = instrument_distance(&eval(rule.lhs(), Model::PTilde), &eval(rule.rhs(), Model::PTilde)).unwrap();
        assert!(d < TOL, "{}: {d}", rule.name());
    }
}

#[test]
fn standard_form_moves_teleport_corrections_to_the_end() {
    let g = adaptive_qc::models::gadgets::teleport();
    let sf = standard_form(&g).unwrap();
    assert!(sf.prep.vertices().len() >= 2);
    assert_eq!(sf.corr.m(), 1);
    assert!(instrument_distance(&eval(&sf.assemble().unwrap(), Model::M), &eval(&g, Model::M)).unwrap() < TOL);
}
