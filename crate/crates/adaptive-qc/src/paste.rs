//! Pasting: replacing every vertex of a graph by a gadget graph with the same
//! boundary arities, splicing wires in port order.

use std::collections::{BTreeMap, HashMap};

use crate::dpg::{Dir, Dpg, Endpoint, Label, Vertex, Wire};
use crate::error::{Error, Result};

/// A map from labels to gadget graphs with matching boundary arities.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GadgetDictionary {
    entries: BTreeMap<Label, Dpg>,
}

impl GadgetDictionary {
    /// An empty dictionary.
    pub fn new() -> GadgetDictionary {
        GadgetDictionary::default()
    }

    /// Adds an entry after checking that the gadget's boundary matches the label.
    pub fn insert(&mut self, label: Label, gadget: Dpg) -> Result<()> {
        if gadget.arity() != label.arity() {
            return Err(Error::ArityMismatch(format!(
                "gadget for {label} has boundary {} but the label has {}",
                gadget.arity(),
                label.arity()
            )));
        }
        self.entries.insert(label, gadget);
        Ok(())
    }

    /// Builder-style [`GadgetDictionary::insert`].
    pub fn with(mut self, label: Label, gadget: Dpg) -> Result<GadgetDictionary> {
        self.insert(label, gadget)?;
        Ok(self)
    }

    /// Maps each given label to its single-vertex graph.
    pub fn identity(labels: impl IntoIterator<Item = Label>) -> GadgetDictionary {
        let entries = labels.into_iter().map(|l| (l.clone(), Dpg::single(l))).collect();
        GadgetDictionary { entries }
    }

    /// Adds identity entries for labels that have no entry yet.
    pub fn with_identity_for(mut self, labels: impl IntoIterator<Item = Label>) -> GadgetDictionary {
        for l in labels {
            self.entries.entry(l.clone()).or_insert_with(|| Dpg::single(l));
        }
        self
    }

    /// The gadget of a label.
    pub fn get(&self, label: &Label) -> Option<&Dpg> {
        self.entries.get(label)
    }

    /// All entries.
    pub fn entries(&self) -> &BTreeMap<Label, Dpg> {
        &self.entries
    }

    /// The dictionary `label ↦ paste(self[label], next)`.
    pub fn then(&self, next: &GadgetDictionary) -> Result<GadgetDictionary> {
        let mut out = GadgetDictionary::new();
        for (l, g) in &self.entries {
            out.insert(l.clone(), paste(g, next)?)?;
        }
        Ok(out)
    }
}

/// Replaces each vertex `x` by a copy of its gadget with ids `x/…`.
///
/// Wires of the host graph incident to port `j` of `x` are spliced to the
/// gadget's `j`-th boundary wire of the same direction and side. Passthrough
/// wires inside gadgets are followed until a real vertex port or a host
/// boundary is reached. The result is fully re-validated.
pub fn paste(g: &Dpg, dict: &GadgetDictionary) -> Result<Dpg> {
    let mut gadgets: HashMap<&str, &Dpg> = HashMap::new();
    for v in g.vertices() {
        let gadget = dict
            .get(&v.label)
            .ok_or_else(|| Error::MissingEntry(v.label.to_string()))?;
        if gadget.arity() != v.label.arity() {
            return Err(Error::ArityMismatch(format!("gadget for {} has the wrong boundary", v.label)));
        }
        gadgets.insert(v.id.as_str(), gadget);
    }

    let mut vertices = Vec::new();
    for v in g.vertices() {
        for y in gadgets[v.id.as_str()].vertices() {
            vertices.push(Vertex::new(format!("{}/{}", v.id, y.id), y.label.clone()));
        }
    }

    let mut wires = [Vec::new(), Vec::new()];
    for (di, dir) in Dir::ALL.iter().enumerate() {
        let host_fwd = g.targets_by_source(*dir);
        let gadget_fwd: HashMap<&str, HashMap<&Endpoint, &Endpoint>> = gadgets
            .iter()
            .map(|(id, gd)| (*id, gd.targets_by_source(*dir)))
            .collect();

        let resolve = |start: &Endpoint| -> Endpoint {
            let mut target = host_fwd[start].clone();
            loop {
                match target {
                    Endpoint::Boundary(j) => return Endpoint::Boundary(j),
                    Endpoint::Port { vertex, port } => {
                        let inner = gadget_fwd[vertex.as_str()][&Endpoint::Boundary(port)];
                        match inner {
                            Endpoint::Port { vertex: y, port: q } => {
                                return Endpoint::port(format!("{vertex}/{y}"), *q)
                            }
                            Endpoint::Boundary(out) => {
                                target = host_fwd[&Endpoint::port(vertex.clone(), *out)].clone();
                            }
                        }
                    }
                }
            }
        };

        let (ins, _) = match dir {
            Dir::H => (g.m(), g.n()),
            Dir::V => (g.k(), g.l()),
        };
        for i in 1..=ins {
            let src = Endpoint::Boundary(i);
            wires[di].push(Wire::new(src.clone(), resolve(&src)));
        }
        for v in g.vertices() {
            let gadget = gadgets[v.id.as_str()];
            for w in gadget.wires(*dir) {
                let Endpoint::Port { vertex: y, port: p } = &w.from else {
                    continue;
                };
                let from = Endpoint::port(format!("{}/{y}", v.id), *p);
                let to = match &w.to {
                    Endpoint::Port { vertex: y2, port: q } => Endpoint::port(format!("{}/{y2}", v.id), *q),
                    Endpoint::Boundary(out) => resolve(&Endpoint::port(v.id.clone(), *out)),
                };
                wires[di].push(Wire::new(from, to));
            }
        }
    }
    let [h, v] = wires;
    Dpg::build(g.m(), g.n(), g.k(), g.l(), vertices, h, v)
}

/// Applies a converter dictionary; identical to [`paste`].
pub fn convert(g: &Dpg, dict: &GadgetDictionary) -> Result<Dpg> {
    paste(g, dict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpg::{compose_h, Arity, GraphBuilder};

    fn h() -> Label {
        Label::new("H", Arity::new(1, 1, 0, 0))
    }

    fn t() -> Label {
        Label::new("T", Arity::new(1, 1, 0, 0))
    }

    #[test]
    fn identity_dictionary_is_unit() {
        let g = compose_h(&Dpg::single(h()), &Dpg::single(t())).unwrap();
        let pasted = paste(&g, &GadgetDictionary::identity(g.labels())).unwrap();
        assert!(pasted.is_isomorphic(&g));
    }

    #[test]
    fn missing_entry_and_arity_errors() {
        let g = Dpg::single(h());
        assert!(matches!(paste(&g, &GadgetDictionary::new()), Err(Error::MissingEntry(_))));
        let mut d = GadgetDictionary::new();
        assert!(d.insert(h(), Dpg::identity_h(2)).is_err());
    }

    #[test]
    fn passthrough_gadgets_splice_through() {
        let g = compose_h(&Dpg::single(h()), &Dpg::single(t())).unwrap();
        let d = GadgetDictionary::new()
            .with(h(), Dpg::identity_h(1))
            .unwrap()
            .with(t(), Dpg::single(t()))
            .unwrap();
        let pasted = paste(&g, &d).unwrap();
        assert!(pasted.is_isomorphic(&Dpg::single(t())));
        let d2 = d.clone().with(t(), Dpg::identity_h(1)).unwrap();
        assert!(paste(&g, &d2).unwrap().is_isomorphic(&Dpg::identity_h(1)));
    }

    #[test]
    fn expansion_replaces_vertex() {
        let mut b = GraphBuilder::new();
        let q = b.h_input();
        let (o, _) = b.add(h(), &[q], &[]);
        let (o, _) = b.add(h(), &o, &[]);
        b.h_output(o[0].clone());
        let hh = b.build().unwrap();
        let d = GadgetDictionary::new().with(t(), hh.clone()).unwrap();
        let pasted = paste(&Dpg::single(t()), &d).unwrap();
        assert!(pasted.is_isomorphic(&hh));
        assert!(pasted.vertices().iter().all(|v| v.id.starts_with("T/")));
    }
}
