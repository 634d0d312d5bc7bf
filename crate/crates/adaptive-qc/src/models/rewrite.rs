//! Correction-moving rewrite rules and the standard form of measurement patterns.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::dpg::{Dir, Dpg, Endpoint, GraphBuilder, Vertex, Wire};
use crate::error::{Error, Result};
use crate::inst::instrument_distance;
use crate::quantum::Angle;

use super::gadgets::{and_ptilde_into, copy_into, xor_into};
use super::labels as l;
use super::{evaluate, semantics, Model};

/// Tolerance of the semantic check performed when a rule is registered.
pub const RULE_TOL: f64 = 1e-9;

/// A rewrite rule: a connected pattern and its replacement with equal boundaries.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    name: String,
    lhs: Dpg,
    rhs: Dpg,
}

/// A match of a rule's left-hand side: lhs vertex id ↦ host vertex id.
pub type Occurrence = BTreeMap<String, String>;

impl RewriteRule {
    /// Registers a rule after checking boundaries, pattern shape and that both
    /// sides evaluate to the same instrument in `model`.
    pub fn new(name: impl Into<String>, lhs: Dpg, rhs: Dpg, model: Model) -> Result<RewriteRule> {
        let name = name.into();
        if lhs.arity() != rhs.arity() {
            return Err(Error::ArityMismatch(format!("rule {name}: sides have different boundaries")));
        }
        if lhs.vertices().is_empty() {
            return Err(Error::Invalid(format!("rule {name}: empty pattern")));
        }
        for dir in Dir::ALL {
            if lhs.wires(dir).iter().any(|w| matches!((&w.from, &w.to), (Endpoint::Boundary(_), Endpoint::Boundary(_)))) {
                return Err(Error::Invalid(format!("rule {name}: pattern has a passthrough wire")));
            }
        }
        let sem = semantics(model);
        let d = instrument_distance(&evaluate(&lhs, &sem)?, &evaluate(&rhs, &sem)?)?;
        if d > RULE_TOL {
            return Err(Error::Invalid(format!("rule {name}: sides differ by {d:e}")));
        }
        Ok(RewriteRule { name, lhs, rhs })
    }

    /// Rule name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Pattern.
    pub fn lhs(&self) -> &Dpg {
        &self.lhs
    }

    /// Replacement.
    pub fn rhs(&self) -> &Dpg {
        &self.rhs
    }
}

fn finish(b: GraphBuilder) -> Dpg {
    b.build().expect("valid rule side")
}

/// Correction before an entangler: `(X^r ⊗ 1)` then `E` equals `E` then `X^r ⊗ Z^r`,
/// and symmetrically for the second qubit; Z corrections commute with `E`.
fn correction_vs_entangler(corr: &str, qubit: usize) -> (Dpg, Dpg) {
    let corr_label = if corr == l::X { l::x() } else { l::z() };
    let mut b = GraphBuilder::new();
    let q1 = b.h_input();
    let q2 = b.h_input();
    let r = b.v_input();
    let (e, _) = if qubit == 1 {
        let (c, _) = b.add(corr_label.clone(), &[q1], &[r]);
        b.add(l::e(), &[c[0].clone(), q2], &[])
    } else {
        let (c, _) = b.add(corr_label.clone(), &[q2], &[r]);
        b.add(l::e(), &[q1, c[0].clone()], &[])
    };
    b.h_output(e[0].clone());
    b.h_output(e[1].clone());
    let lhs = finish(b);

    let mut b = GraphBuilder::new();
    let q1 = b.h_input();
    let q2 = b.h_input();
    let r = b.v_input();
    let (e, _) = b.add(l::e(), &[q1, q2], &[]);
    let (o1, o2) = if corr == l::X {
        let (r1, r2) = copy_into(&mut b, r);
        let (x_bit, z_bit) = if qubit == 1 { (r1, r2) } else { (r2, r1) };
        let (x_target, z_target) = if qubit == 1 { (0, 1) } else { (1, 0) };
        let (xo, _) = b.add(l::x(), &[e[x_target].clone()], &[x_bit]);
        let (zo, _) = b.add(l::z(), &[e[z_target].clone()], &[z_bit]);
        if qubit == 1 {
            (xo[0].clone(), zo[0].clone())
        } else {
            (zo[0].clone(), xo[0].clone())
        }
    } else if qubit == 1 {
        let (zo, _) = b.add(l::z(), &[e[0].clone()], &[r]);
        (zo[0].clone(), e[1].clone())
    } else {
        let (zo, _) = b.add(l::z(), &[e[1].clone()], &[r]);
        (e[0].clone(), zo[0].clone())
    };
    b.h_output(o1);
    b.h_output(o2);
    (lhs, finish(b))
}

/// Correction before a measurement: pattern `corr(q; r)` then `meas(·; s)`
/// with v-inputs `r, s` and one v-output.
fn correction_then_measure(corr: crate::dpg::Label, meas: crate::dpg::Label) -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let r = b.v_input();
    let s = b.v_input();
    let (c, _) = b.add(corr, &[q], &[r]);
    let (_, t) = b.add(meas, &[c[0].clone()], &[s]);
    b.v_output(t[0].clone());
    finish(b)
}

/// The six correction rules of measurement-based computation for angle `alpha`.
pub fn mbqc_rules(alpha: Angle) -> Result<Vec<RewriteRule>> {
    let mut rules = Vec::new();
    for (corr, qubit) in [(l::X, 1), (l::X, 2), (l::Z, 1), (l::Z, 2)] {
        let (lhs, rhs) = correction_vs_entangler(corr, qubit);
        rules.push(RewriteRule::new(format!("{corr}{qubit}-E"), lhs, rhs, Model::M)?);
    }
    let meas = l::m_alpha(alpha);

    let lhs = correction_then_measure(l::x(), meas.clone());
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let r = b.v_input();
    let s = b.v_input();
    let u = xor_into(&mut b, r, s);
    let (_, t) = b.add(meas.clone(), &[q], &[u]);
    b.v_output(t[0].clone());
    rules.push(RewriteRule::new(format!("X-M({alpha})"), lhs, finish(b), Model::M)?);

    let lhs = correction_then_measure(l::z(), meas.clone());
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let r = b.v_input();
    let s = b.v_input();
    let (_, t) = b.add(meas, &[q], &[s]);
    let out = xor_into(&mut b, r, t[0].clone());
    b.v_output(out);
    rules.push(RewriteRule::new(format!("Z-M({alpha})"), lhs, finish(b), Model::M)?);
    Ok(rules)
}

/// The correction-versus-measurement rules of Pauli computation with corrections.
///
/// * `X(r)` then `M_{X/Y}(s)` equals `M_{X/Y}(s)` with outcome XORed by `r ∧ s`.
/// * `S(r)` then `M_{X/Y}(s)` equals `X(r)` then `M_{X/Y}(r ⊕ s)`.
pub fn mbpc_rules() -> Result<Vec<RewriteRule>> {
    let lhs = correction_then_measure(l::x(), l::m_xy());
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let r = b.v_input();
    let s = b.v_input();
    let (s1, s2) = copy_into(&mut b, s);
    let (_, t) = b.add(l::m_xy(), &[q], &[s1]);
    let both = and_ptilde_into(&mut b, r, s2);
    let out = xor_into(&mut b, t[0].clone(), both);
    b.v_output(out);
    let x_rule = RewriteRule::new("X-MXY", lhs, finish(b), Model::PTilde)?;

    let lhs = correction_then_measure(l::s(), l::m_xy());
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let r = b.v_input();
    let s = b.v_input();
    let (r1, r2) = copy_into(&mut b, r);
    let (xq, _) = b.add(l::x(), &[q], &[r1]);
    let u = xor_into(&mut b, r2, s);
    let (_, t) = b.add(l::m_xy(), &[xq[0].clone()], &[u]);
    b.v_output(t[0].clone());
    let s_rule = RewriteRule::new("S-MXY", lhs, finish(b), Model::PTilde)?;
    Ok(vec![x_rule, s_rule])
}

/// All matches of the rule's pattern in `g`, ordered by the host id of the first pattern vertex.
pub fn find_occurrences(g: &Dpg, rule: &RewriteRule) -> Vec<Occurrence> {
    let lhs = &rule.lhs;
    let first = &lhs.vertices()[0];
    let mut found = Vec::new();
    for v in g.vertices() {
        if v.label != first.label {
            continue;
        }
        let mut occ = Occurrence::new();
        occ.insert(first.id.clone(), v.id.clone());
        if extend(g, lhs, &mut occ) && check_occurrence(g, lhs, &occ).is_ok() {
            found.push(occ);
        }
    }
    found
}

/// Follows internal pattern wires from matched vertices until every pattern vertex is matched.
fn extend(g: &Dpg, lhs: &Dpg, occ: &mut Occurrence) -> bool {
    let g_fwd: Vec<_> = Dir::ALL.iter().map(|d| g.targets_by_source(*d)).collect();
    let g_back: Vec<_> = Dir::ALL.iter().map(|d| g.sources_by_target(*d)).collect();
    loop {
        if occ.len() == lhs.vertices().len() {
            return true;
        }
        let mut progressed = false;
        for (di, dir) in Dir::ALL.iter().enumerate() {
            for w in lhs.wires(*dir) {
                let (Endpoint::Port { vertex: a, port: p }, Endpoint::Port { vertex: b, port: q }) = (&w.from, &w.to)
                else {
                    continue;
                };
                let (unknown_id, host) = match (occ.get(a), occ.get(b)) {
                    (Some(ha), None) => (b, g_fwd[di].get(&Endpoint::port(ha.clone(), *p)).map(|e| (*e).clone())),
                    (None, Some(hb)) => (a, g_back[di].get(&Endpoint::port(hb.clone(), *q)).map(|e| (*e).clone())),
                    _ => continue,
                };
                let Some(Endpoint::Port { vertex: hv, .. }) = host else {
                    return false;
                };
                let want = &lhs.vertex(unknown_id).expect("pattern vertex").label;
                if g.vertex(&hv).map(|x| &x.label) != Some(want) || occ.values().any(|x| x == &hv) {
                    return false;
                }
                occ.insert(unknown_id.clone(), hv);
                progressed = true;
            }
        }
        if !progressed {
            return false;
        }
    }
}

/// Checks that an occurrence is an injective, label-preserving match whose
/// only host wires among matched vertices are the pattern's internal wires.
pub fn check_occurrence(g: &Dpg, lhs: &Dpg, occ: &Occurrence) -> Result<()> {
    let no = |msg: String| Err(Error::NoMatch(msg));
    if occ.len() != lhs.vertices().len() {
        return no("occurrence does not cover the pattern".into());
    }
    let hosts: HashSet<&str> = occ.values().map(String::as_str).collect();
    if hosts.len() != occ.len() {
        return no("occurrence is not injective".into());
    }
    for v in lhs.vertices() {
        let Some(h) = occ.get(&v.id) else {
            return no(format!("pattern vertex {} is unmatched", v.id));
        };
        match g.vertex(h) {
            Some(hv) if hv.label == v.label => {}
            _ => return no(format!("host vertex {h} does not carry label {}", v.label)),
        }
    }
    let map = |e: &Endpoint| match e {
        Endpoint::Port { vertex, port } => Some(Endpoint::port(occ[vertex].clone(), *port)),
        Endpoint::Boundary(_) => None,
    };
    for dir in Dir::ALL {
        let expected: HashSet<(Endpoint, Endpoint)> = lhs
            .wires(dir)
            .iter()
            .filter_map(|w| Some((map(&w.from)?, map(&w.to)?)))
            .collect();
        let mut seen = 0;
        for w in g.wires(dir) {
            let inside = |e: &Endpoint| matches!(e, Endpoint::Port { vertex, .. } if hosts.contains(vertex.as_str()));
            if inside(&w.from) && inside(&w.to) {
                if !expected.contains(&(w.from.clone(), w.to.clone())) {
                    return no(format!("host wire {} → {} is not a pattern wire", w.from, w.to));
                }
                seen += 1;
            }
        }
        if seen != expected.len() {
            return no("pattern wire missing in host".into());
        }
    }
    Ok(())
}

fn fresh_prefix(g: &Dpg) -> String {
    (0..)
        .map(|k| format!("rw{k}/"))
        .find(|p| g.vertices().iter().all(|v| !v.id.starts_with(p.as_str())))
        .expect("unbounded search")
}

/// Replaces an occurrence of the rule's pattern by its replacement.
///
/// Errors with [`Error::NoMatch`] if the occurrence is not a match and with
/// [`Error::Cycle`] if the replacement would close a directed cycle.
pub fn apply_rewrite(g: &Dpg, rule: &RewriteRule, occ: &Occurrence) -> Result<Dpg> {
    check_occurrence(g, &rule.lhs, occ)?;
    let hosts: HashSet<&str> = occ.values().map(String::as_str).collect();
    let prefix = fresh_prefix(g);
    let matched = |e: &Endpoint| matches!(e, Endpoint::Port { vertex, .. } if hosts.contains(vertex.as_str()));

    let mut vertices: Vec<Vertex> = g.vertices().iter().filter(|v| !hosts.contains(v.id.as_str())).cloned().collect();
    for v in rule.rhs.vertices() {
        vertices.push(Vertex::new(format!("{prefix}{}", v.id), v.label.clone()));
    }

    let mut wires = [Vec::new(), Vec::new()];
    for (di, dir) in Dir::ALL.iter().enumerate() {
        let g_fwd = g.targets_by_source(*dir);
        let g_back = g.sources_by_target(*dir);
        let (ins, outs) = match dir {
            Dir::H => (rule.lhs.m(), rule.lhs.n()),
            Dir::V => (rule.lhs.k(), rule.lhs.l()),
        };
        let lhs_fwd = rule.lhs.targets_by_source(*dir);
        let lhs_back = rule.lhs.sources_by_target(*dir);
        let outer_sources: Vec<Endpoint> = (1..=ins)
            .map(|i| {
                let Endpoint::Port { vertex, port } = lhs_fwd[&Endpoint::Boundary(i)] else {
                    unreachable!("no passthrough in patterns")
                };
                g_back[&Endpoint::port(occ[vertex].clone(), *port)].clone()
            })
            .collect();
        let outer_targets: Vec<Endpoint> = (1..=outs)
            .map(|j| {
                let Endpoint::Port { vertex, port } = lhs_back[&Endpoint::Boundary(j)] else {
                    unreachable!("no passthrough in patterns")
                };
                g_fwd[&Endpoint::port(occ[vertex].clone(), *port)].clone()
            })
            .collect();
        for w in g.wires(*dir) {
            if !matched(&w.from) && !matched(&w.to) {
                wires[di].push(w.clone());
            }
        }
        let rename = |e: &Endpoint| match e {
            Endpoint::Port { vertex, port } => Endpoint::port(format!("{prefix}{vertex}"), *port),
            Endpoint::Boundary(i) => Endpoint::Boundary(*i),
        };
        for w in rule.rhs.wires(*dir) {
            let from = match &w.from {
                Endpoint::Boundary(i) => outer_sources[i - 1].clone(),
                e => rename(e),
            };
            let to = match &w.to {
                Endpoint::Boundary(j) => outer_targets[j - 1].clone(),
                e => rename(e),
            };
            wires[di].push(Wire::new(from, to));
        }
    }
    let [h, v] = wires;
    Dpg::build(g.m(), g.n(), g.k(), g.l(), vertices, h, v)
}

/// A graph split into preparation, measurement and correction layers.
///
/// `meas` has the original vertical inputs and outputs followed by
/// `exported` extra vertical outputs, the correction bits, which are the
/// vertical inputs of `corr`. [`StandardForm::assemble`] reconnects them.
#[derive(Clone, Debug)]
pub struct StandardForm {
    /// `N_X` and `E` vertices.
    pub prep: Dpg,
    /// Measurements and Boolean vertices.
    pub meas: Dpg,
    /// X and Z corrections.
    pub corr: Dpg,
    /// Number of correction bits passed from `meas` to `corr`.
    pub exported: usize,
    /// Number of rule applications performed.
    pub steps: usize,
    /// The rewritten graph before splitting.
    pub rewritten: Dpg,
}

impl StandardForm {
    /// The single graph `prep`, then `meas`, then `corr`, with the correction bits wired through.
    pub fn assemble(&self) -> Result<Dpg> {
        let mut b = GraphBuilder::new();
        let hs: Vec<Endpoint> = (0..self.prep.m()).map(|_| b.h_input()).collect();
        let vs: Vec<Endpoint> = (0..self.meas.k()).map(|_| b.v_input()).collect();
        let (p_out, _) = b.embed(&self.prep, &hs, &[]);
        let (m_h, m_v) = b.embed(&self.meas, &p_out, &vs);
        let keep = m_v.len() - self.exported;
        let (c_h, _) = b.embed(&self.corr, &m_h, &m_v[keep..]);
        for e in c_h {
            b.h_output(e);
        }
        for e in &m_v[..keep] {
            b.v_output(e.clone());
        }
        b.build()
    }
}

fn layer_of(label: &str) -> Result<usize> {
    match label {
        l::N_X | l::E => Ok(0),
        l::M | l::ONE | l::DELETE | l::XOR | l::OR | l::COPY => Ok(1),
        l::X | l::Z => Ok(2),
        other => Err(Error::Invalid(format!("label {other} has no standard-form layer"))),
    }
}

/// Moves every correction past entanglers and measurements, then splits the
/// graph into the preparation, measurement and correction layers.
///
/// Rules are applied to the first occurrence found, scanning rules in order and
/// occurrences by host vertex; an occurrence whose replacement would close a
/// cycle is skipped. At most `10·|V|²` applications are made.
pub fn standard_form(g: &Dpg) -> Result<StandardForm> {
    semantics(Model::M).check_graph(g)?;
    let alphas: BTreeSet<Angle> = g.vertices().iter().filter_map(|v| v.label.param(l::ALPHA)).collect();
    let mut rules = Vec::new();
    for (i, alpha) in alphas.iter().enumerate() {
        let rs = mbqc_rules(*alpha)?;
        rules.extend(rs.into_iter().enumerate().filter(|(k, _)| i == 0 || *k >= 4).map(|(_, r)| r));
    }
    if rules.is_empty() {
        rules = mbqc_rules(Angle::ZERO)?.into_iter().take(4).collect();
    }
    let cap = 10 * g.vertices().len().pow(2).max(1);
    let mut cur = g.clone();
    let mut steps = 0;
    'outer: loop {
        for rule in &rules {
            for occ in find_occurrences(&cur, rule) {
                match apply_rewrite(&cur, rule, &occ) {
                    Ok(next) => {
                        cur = next;
                        steps += 1;
                        if steps > cap {
                            return Err(Error::IterationCap(format!("standard form after {cap} rewrites")));
                        }
                        continue 'outer;
                    }
                    Err(Error::Cycle) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        break;
    }
    split_layers(&cur, steps)
}

fn split_layers(g: &Dpg, steps: usize) -> Result<StandardForm> {
    let layer: Vec<usize> = g
        .vertices()
        .iter()
        .map(|v| layer_of(v.label.name()))
        .collect::<Result<_>>()?;
    let layer_at = |e: &Endpoint, boundary: usize| match e {
        Endpoint::Boundary(_) => boundary,
        Endpoint::Port { vertex, .. } => layer[g.vertex_index(vertex).expect("valid graph")],
    };
    let hw = g.h_wires();
    let vw = g.v_wires();
    for w in hw.iter().chain(vw) {
        if layer_at(&w.from, 0) > layer_at(&w.to, 2) {
            return Err(Error::Invalid(format!(
                "wire {} → {} runs backwards across layers; a rule is missing",
                w.from, w.to
            )));
        }
    }
    let h_from = |i: usize| hw.iter().position(|w| w.from == Endpoint::Boundary(i)).expect("valid graph");
    let h_to = |j: usize| hw.iter().position(|w| w.to == Endpoint::Boundary(j)).expect("valid graph");
    let v_from = |i: usize| vw.iter().position(|w| w.from == Endpoint::Boundary(i)).expect("valid graph");
    let v_to = |j: usize| vw.iter().position(|w| w.to == Endpoint::Boundary(j)).expect("valid graph");

    let prep_in: Vec<usize> = (1..=g.m()).map(h_from).collect();
    let prep_out: Vec<usize> = (0..hw.len())
        .filter(|&i| layer_at(&hw[i].from, 0) == 0 && layer_at(&hw[i].to, 2) > 0)
        .collect();
    let meas_out: Vec<usize> = (0..hw.len())
        .filter(|&i| layer_at(&hw[i].from, 0) <= 1 && layer_at(&hw[i].to, 2) == 2)
        .collect();
    let corr_out: Vec<usize> = (1..=g.n()).map(h_to).collect();
    let v_in: Vec<usize> = (1..=g.k()).map(v_from).collect();
    let mut v_out: Vec<usize> = (1..=g.l()).map(v_to).collect();
    let bits: Vec<usize> = (0..vw.len())
        .filter(|&i| matches!(&vw[i].to, Endpoint::Port { .. }) && layer_at(&vw[i].to, 2) == 2)
        .collect();
    let exported = bits.len();
    v_out.extend(&bits);

    let prep = extract(g, &layer, 0, [&prep_in, &prep_out], [&[], &[]])?;
    let meas = extract(g, &layer, 1, [&prep_out, &meas_out], [&v_in, &v_out])?;
    let corr = extract(g, &layer, 2, [&meas_out, &corr_out], [&bits, &[]])?;
    Ok(StandardForm {
        prep,
        meas,
        corr,
        exported,
        steps,
        rewritten: g.clone(),
    })
}

/// The subgraph of the vertices in layer `which`, with the given cut wires
/// (indices into the host wire lists) as ordered boundary inputs and outputs.
fn extract(g: &Dpg, layer: &[usize], which: usize, h: [&[usize]; 2], v: [&[usize]; 2]) -> Result<Dpg> {
    let inside = |e: &Endpoint| match e {
        Endpoint::Port { vertex, .. } => layer[g.vertex_index(vertex).expect("valid graph")] == which,
        Endpoint::Boundary(_) => false,
    };
    let vertices: Vec<Vertex> = g
        .vertices()
        .iter()
        .zip(layer)
        .filter(|(_, &x)| x == which)
        .map(|(v, _)| v.clone())
        .collect();
    let mut out = [Vec::new(), Vec::new()];
    for (di, (wires, [ins, outs])) in [(g.h_wires(), h), (g.v_wires(), v)].into_iter().enumerate() {
        for (i, w) in wires.iter().enumerate() {
            let from = match ins.iter().position(|&x| x == i) {
                Some(p) => Some(Endpoint::Boundary(p + 1)),
                None if inside(&w.from) => Some(w.from.clone()),
                None => None,
            };
            let to = match outs.iter().position(|&x| x == i) {
                Some(p) => Some(Endpoint::Boundary(p + 1)),
                None if inside(&w.to) => Some(w.to.clone()),
                None => None,
            };
            match (from, to) {
                (Some(f), Some(t)) => out[di].push(Wire::new(f, t)),
                (None, None) => {}
                _ => return Err(Error::Invalid(format!("wire {} → {} crosses a layer without a boundary", w.from, w.to))),
            }
        }
    }
    let [hw, vw] = out;
    Dpg::build(h[0].len(), h[1].len(), v[0].len(), v[1].len(), vertices, hw, vw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::gadgets::{j, t_m};

    #[test]
    fn rules_register_for_clifford_t_angles() {
        for alpha in [Angle::ZERO, Angle::PI_4, Angle::MINUS_PI_4] {
            assert_eq!(mbqc_rules(alpha).unwrap().len(), 6);
        }
        assert_eq!(mbpc_rules().unwrap().len(), 2);
    }

    #[test]
    fn wrong_rule_is_rejected() {
        let (lhs, _) = correction_vs_entangler(l::X, 1);
        let (_, rhs) = correction_vs_entangler(l::Z, 1);
        assert!(RewriteRule::new("bad", lhs, rhs, Model::M).is_err());
    }

    #[test]
    fn s_rule_with_negated_setting_is_unsound() {
        let lhs = correction_then_measure(l::s(), l::m_xy());
        let mut b = GraphBuilder::new();
        let q = b.h_input();
        let r = b.v_input();
        let s = b.v_input();
        let (xq, _) = b.add(l::x(), &[q], &[r]);
        let ns = crate::models::gadgets::not_into(&mut b, s);
        let (_, t) = b.add(l::m_xy(), &[xq[0].clone()], &[ns]);
        b.v_output(t[0].clone());
        assert!(RewriteRule::new("S-MXY-negated", lhs, finish(b), Model::PTilde).is_err());
    }

    #[test]
    fn rule_applies_to_its_own_pattern() {
        for rule in mbqc_rules(Angle::PI_4).unwrap() {
            let occs = find_occurrences(rule.lhs(), &rule);
            assert_eq!(occs.len(), 1, "{}", rule.name());
            let out = apply_rewrite(rule.lhs(), &rule, &occs[0]).unwrap();
            assert!(out.is_isomorphic(rule.rhs()), "{}", rule.name());
        }
    }

    #[test]
    fn j_gadget_standard_form() {
        let sf = standard_form(&j(Angle::ZERO)).unwrap();
        assert_eq!(sf.steps, 0);
        assert_eq!(sf.prep.vertices().len(), 2);
        assert_eq!(sf.corr.vertices().len(), 1);
        assert_eq!(sf.exported, 1);
        let sf = standard_form(&t_m()).unwrap();
        assert!(sf.steps > 0);
        assert!(sf.corr.vertices().iter().all(|v| matches!(v.label.name(), l::X | l::Z)));
    }

    #[test]
    fn bad_occurrence_is_rejected() {
        let rule = &mbqc_rules(Angle::ZERO).unwrap()[0];
        let g = j(Angle::ZERO);
        let mut occ = Occurrence::new();
        occ.insert("X1".into(), "nope".into());
        assert!(matches!(apply_rewrite(&g, rule, &occ), Err(Error::NoMatch(_))));
    }
}
