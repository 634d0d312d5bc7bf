//! Labeled double port graphs.
//!
//! A graph has `m` horizontal (quantum) boundary inputs, `n` horizontal
//! boundary outputs, `k` vertical (classical) boundary inputs and `ℓ` vertical
//! boundary outputs. Every vertex carries a [`Label`] fixing its ordered port
//! counts. Wires are stored per direction as `(source, target)` pairs: a
//! source is a boundary input or a vertex out-port, a target is a boundary
//! output or a vertex in-port. Indices are 1-based, numbered top-to-bottom for
//! horizontal ports and left-to-right for vertical ports.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::Angle;

/// Port counts `(s^h, t^h, s^v, t^v)` of a label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arity {
    /// Horizontal inputs.
    pub h_in: usize,
    /// Horizontal outputs.
    pub h_out: usize,
    /// Vertical inputs.
    pub v_in: usize,
    /// Vertical outputs.
    pub v_out: usize,
}

impl Arity {
    /// Builds an arity from `(h_in, h_out, v_in, v_out)`.
    pub const fn new(h_in: usize, h_out: usize, v_in: usize, v_out: usize) -> Arity {
        Arity { h_in, h_out, v_in, v_out }
    }

    fn inputs(&self, dir: Dir) -> usize {
        match dir {
            Dir::H => self.h_in,
            Dir::V => self.v_in,
        }
    }

    fn outputs(&self, dir: Dir) -> usize {
        match dir {
            Dir::H => self.h_out,
            Dir::V => self.v_out,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {} → {}; {})", self.v_in, self.h_in, self.h_out, self.v_out)
    }
}

/// A port label: a name, exact angle parameters and port counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    name: String,
    params: BTreeMap<String, Angle>,
    arity: Arity,
}

impl Label {
    /// A label without parameters.
    pub fn new(name: impl Into<String>, arity: Arity) -> Label {
        Label {
            name: name.into(),
            params: BTreeMap::new(),
            arity,
        }
    }

    /// Adds or replaces a parameter.
    pub fn with_param(mut self, key: impl Into<String>, value: Angle) -> Label {
        self.params.insert(key.into(), value);
        self
    }

    /// The label's name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// All parameters.
    pub fn params(&self) -> &BTreeMap<String, Angle> {
        &self.params
    }

    /// A single parameter.
    pub fn param(&self, key: &str) -> Option<Angle> {
        self.params.get(key).copied()
    }

    /// The port counts.
    pub fn arity(&self) -> Arity {
        self.arity
    }

    fn key(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}[{}]{:?}", self.name, params.join(","), self.arity)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.params.is_empty() {
            let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "[{}]", params.join(","))?;
        }
        Ok(())
    }
}

/// Wire direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    /// Horizontal (quantum) wires.
    H,
    /// Vertical (classical) wires.
    V,
}

impl Dir {
    /// Both directions.
    pub const ALL: [Dir; 2] = [Dir::H, Dir::V];
}

/// One end of a wire.
///
/// As a wire source, `Boundary(i)` is boundary input `i` and `Port` is an
/// out-port; as a wire target, `Boundary(j)` is boundary output `j` and `Port`
/// is an in-port.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    /// A 1-based boundary position.
    Boundary(usize),
    /// A 1-based port of a vertex.
    Port {
        /// Vertex identifier.
        vertex: String,
        /// Port index.
        port: usize,
    },
}

impl Endpoint {
    /// A vertex port.
    pub fn port(vertex: impl Into<String>, port: usize) -> Endpoint {
        Endpoint::Port {
            vertex: vertex.into(),
            port,
        }
    }

    fn vertex(&self) -> Option<&str> {
        match self {
            Endpoint::Boundary(_) => None,
            Endpoint::Port { vertex, .. } => Some(vertex),
        }
    }

    fn renamed(&self, f: &impl Fn(&str) -> String) -> Endpoint {
        match self {
            Endpoint::Boundary(i) => Endpoint::Boundary(*i),
            Endpoint::Port { vertex, port } => Endpoint::port(f(vertex), *port),
        }
    }

    fn shifted(&self, offset: usize) -> Endpoint {
        match self {
            Endpoint::Boundary(i) => Endpoint::Boundary(i + offset),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Boundary(i) => write!(f, "boundary {i}"),
            Endpoint::Port { vertex, port } => write!(f, "{vertex}:{port}"),
        }
    }
}

/// A directed wire.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wire {
    /// Source endpoint.
    pub from: Endpoint,
    /// Target endpoint.
    pub to: Endpoint,
}

impl Wire {
    /// Builds a wire.
    pub fn new(from: Endpoint, to: Endpoint) -> Wire {
        Wire { from, to }
    }
}

/// A labeled vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    /// Identifier, unique within its graph.
    pub id: String,
    /// Label fixing the port counts.
    pub label: Label,
}

impl Vertex {
    /// Builds a vertex.
    pub fn new(id: impl Into<String>, label: Label) -> Vertex {
        Vertex { id: id.into(), label }
    }
}

/// A validated labeled double port graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Dpg {
    m: usize,
    n: usize,
    k: usize,
    l: usize,
    vertices: Vec<Vertex>,
    h_wires: Vec<Wire>,
    v_wires: Vec<Wire>,
    index: HashMap<String, usize>,
}

impl Dpg {
    /// Validates raw data and returns the graph.
    ///
    /// Errors on duplicate vertex ids, out-of-range endpoints, endpoints used by
    /// more than one wire, dangling ports and cycles in the total flow graph.
    pub fn build(
        m: usize,
        n: usize,
        k: usize,
        l: usize,
        vertices: Vec<Vertex>,
        h_wires: Vec<Wire>,
        v_wires: Vec<Wire>,
    ) -> Result<Dpg> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex id {}", v.id)));
            }
        }
        let g = Dpg {
            m,
            n,
            k,
            l,
            vertices,
            h_wires,
            v_wires,
            index,
        };
        for dir in Dir::ALL {
            g.check_wires(dir)?;
        }
        g.topological_order()?;
        Ok(g)
    }

    fn check_wires(&self, dir: Dir) -> Result<()> {
        let (ins, outs) = self.boundary(dir);
        let name = match dir {
            Dir::H => "horizontal",
            Dir::V => "vertical",
        };
        let mut sources = BTreeSet::new();
        let mut targets = BTreeSet::new();
        for w in self.wires(dir) {
            match &w.from {
                Endpoint::Boundary(i) if *i == 0 || *i > ins => {
                    return Err(Error::InvalidEndpoint(format!("{name} boundary input {i} of {ins}")))
                }
                Endpoint::Port { vertex, port } => {
                    let count = self.port_count(vertex, dir, false)?;
                    if *port == 0 || *port > count {
                        return Err(Error::InvalidEndpoint(format!("{name} out-port {vertex}:{port} of {count}")));
                    }
                }
                _ => {}
            }
            match &w.to {
                Endpoint::Boundary(j) if *j == 0 || *j > outs => {
                    return Err(Error::InvalidEndpoint(format!("{name} boundary output {j} of {outs}")))
                }
                Endpoint::Port { vertex, port } => {
                    let count = self.port_count(vertex, dir, true)?;
                    if *port == 0 || *port > count {
                        return Err(Error::InvalidEndpoint(format!("{name} in-port {vertex}:{port} of {count}")));
                    }
                }
                _ => {}
            }
            if !sources.insert(w.from.clone()) {
                return Err(Error::DuplicateEndpoint(format!("{name} source {}", w.from)));
            }
            if !targets.insert(w.to.clone()) {
                return Err(Error::DuplicateEndpoint(format!("{name} target {}", w.to)));
            }
        }
        for i in 1..=ins {
            if !sources.contains(&Endpoint::Boundary(i)) {
                return Err(Error::DanglingPort(format!("{name} boundary input {i}")));
            }
        }
        for j in 1..=outs {
            if !targets.contains(&Endpoint::Boundary(j)) {
                return Err(Error::DanglingPort(format!("{name} boundary output {j}")));
            }
        }
        for v in &self.vertices {
            let a = v.label.arity();
            for p in 1..=a.outputs(dir) {
                if !sources.contains(&Endpoint::port(v.id.clone(), p)) {
                    return Err(Error::DanglingPort(format!("{name} out-port {}:{p}", v.id)));
                }
            }
            for p in 1..=a.inputs(dir) {
                if !targets.contains(&Endpoint::port(v.id.clone(), p)) {
                    return Err(Error::DanglingPort(format!("{name} in-port {}:{p}", v.id)));
                }
            }
        }
        Ok(())
    }

    fn port_count(&self, vertex: &str, dir: Dir, input: bool) -> Result<usize> {
        let v = self
            .vertex(vertex)
            .ok_or_else(|| Error::InvalidEndpoint(format!("unknown vertex {vertex}")))?;
        let a = v.label.arity();
        Ok(if input { a.inputs(dir) } else { a.outputs(dir) })
    }

    /// The graph with no vertices and `m` horizontal passthrough wires.
    pub fn identity_h(m: usize) -> Dpg {
        let wires = (1..=m).map(|i| Wire::new(Endpoint::Boundary(i), Endpoint::Boundary(i))).collect();
        Dpg::build(m, m, 0, 0, Vec::new(), wires, Vec::new()).expect("identity is valid")
    }

    /// The graph with no vertices and `k` vertical passthrough wires.
    pub fn identity_v(k: usize) -> Dpg {
        let wires = (1..=k).map(|i| Wire::new(Endpoint::Boundary(i), Endpoint::Boundary(i))).collect();
        Dpg::build(0, 0, k, k, Vec::new(), Vec::new(), wires).expect("identity is valid")
    }

    /// A graph consisting of one vertex wired to the boundary in port order.
    pub fn single(label: Label) -> Dpg {
        let a = label.arity();
        let id = label.name().to_string();
        let h_in = (1..=a.h_in).map(|p| Wire::new(Endpoint::Boundary(p), Endpoint::port(id.clone(), p)));
        let h_out = (1..=a.h_out).map(|p| Wire::new(Endpoint::port(id.clone(), p), Endpoint::Boundary(p)));
        let v_in = (1..=a.v_in).map(|p| Wire::new(Endpoint::Boundary(p), Endpoint::port(id.clone(), p)));
        let v_out = (1..=a.v_out).map(|p| Wire::new(Endpoint::port(id.clone(), p), Endpoint::Boundary(p)));
        Dpg::build(
            a.h_in,
            a.h_out,
            a.v_in,
            a.v_out,
            vec![Vertex::new(id.clone(), label)],
            h_in.chain(h_out).collect(),
            v_in.chain(v_out).collect(),
        )
        .expect("single-vertex graph is valid")
    }

    /// Horizontal boundary inputs.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Horizontal boundary outputs.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Vertical boundary inputs.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Vertical boundary outputs.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Boundary arities `(k; m → n; ℓ)` as an [`Arity`].
    pub fn arity(&self) -> Arity {
        Arity::new(self.m, self.n, self.k, self.l)
    }

    fn boundary(&self, dir: Dir) -> (usize, usize) {
        match dir {
            Dir::H => (self.m, self.n),
            Dir::V => (self.k, self.l),
        }
    }

    /// Vertices in storage order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Looks up a vertex by id.
    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.index.get(id).map(|&i| &self.vertices[i])
    }

    /// Storage index of a vertex id.
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Horizontal wires.
    pub fn h_wires(&self) -> &[Wire] {
        &self.h_wires
    }

    /// Vertical wires.
    pub fn v_wires(&self) -> &[Wire] {
        &self.v_wires
    }

    /// Wires of one direction.
    pub fn wires(&self, dir: Dir) -> &[Wire] {
        match dir {
            Dir::H => &self.h_wires,
            Dir::V => &self.v_wires,
        }
    }

    /// Map from wire target to wire source for one direction.
    pub fn sources_by_target(&self, dir: Dir) -> HashMap<&Endpoint, &Endpoint> {
        self.wires(dir).iter().map(|w| (&w.to, &w.from)).collect()
    }

    /// Map from wire source to wire target for one direction.
    pub fn targets_by_source(&self, dir: Dir) -> HashMap<&Endpoint, &Endpoint> {
        self.wires(dir).iter().map(|w| (&w.from, &w.to)).collect()
    }

    /// Distinct labels used by the graph.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.vertices.iter().map(|v| v.label.clone()).collect()
    }

    /// A topological order (storage indices) of the total flow graph.
    ///
    /// Among ready vertices the one with the smallest storage index comes first.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let succ = self.successors();
        let mut indeg = vec![0usize; self.vertices.len()];
        for s in &succ {
            for &t in s {
                indeg[t] += 1;
            }
        }
        let mut ready: BTreeSet<usize> = (0..self.vertices.len()).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(x) = ready.pop_first() {
            order.push(x);
            for &t in &succ[x] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.insert(t);
                }
            }
        }
        if order.len() != self.vertices.len() {
            return Err(Error::Cycle);
        }
        Ok(order)
    }

    /// Successor lists (with multiplicity) of the total flow graph on vertex indices.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.vertices.len()];
        for w in self.h_wires.iter().chain(&self.v_wires) {
            if let (Some(a), Some(b)) = (w.from.vertex(), w.to.vertex()) {
                succ[self.index[a]].push(self.index[b]);
            }
        }
        succ
    }

    fn renamed(&self, f: impl Fn(&str) -> String) -> Dpg {
        let vertices = self.vertices.iter().map(|v| Vertex::new(f(&v.id), v.label.clone())).collect();
        let ren = |ws: &[Wire]| ws.iter().map(|w| Wire::new(w.from.renamed(&f), w.to.renamed(&f))).collect();
        Dpg::build(self.m, self.n, self.k, self.l, vertices, ren(&self.h_wires), ren(&self.v_wires))
            .expect("renaming preserves validity")
    }

    /// Copy of `other` whose vertex ids avoid those of `self`.
    fn disjoint_from(&self, other: &Dpg) -> Dpg {
        if other.vertices.iter().all(|v| !self.index.contains_key(&v.id)) {
            return other.clone();
        }
        let mut used: BTreeSet<String> = self.index.keys().cloned().collect();
        used.extend(other.index.keys().cloned());
        let mut mapping = HashMap::new();
        for v in &other.vertices {
            if self.index.contains_key(&v.id) {
                let mut i = 1;
                let fresh = loop {
                    let cand = format!("{}#{i}", v.id);
                    if !used.contains(&cand) {
                        break cand;
                    }
                    i += 1;
                };
                used.insert(fresh.clone());
                mapping.insert(v.id.clone(), fresh);
            }
        }
        other.renamed(|id| mapping.get(id).cloned().unwrap_or_else(|| id.to_string()))
    }

    /// Replaces every label through `f`, which must preserve port counts.
    pub fn relabel(&self, f: impl Fn(&Label) -> Label) -> Result<Dpg> {
        let mut g = self.clone();
        for v in &mut g.vertices {
            let new = f(&v.label);
            if new.arity() != v.label.arity() {
                return Err(Error::LabelArity(format!(
                    "relabeling {} to {} changes arity {} to {}",
                    v.label,
                    new,
                    v.label.arity(),
                    new.arity()
                )));
            }
            v.label = new;
        }
        Ok(g)
    }

    /// Canonical representative of the isomorphism class.
    ///
    /// Because ports are ordered and the boundary is fixed, an isomorphism is
    /// determined by the image of one vertex per connected component. Vertices
    /// reachable from the boundary are numbered in breadth-first order from the
    /// boundary positions. Each remaining component is numbered from the start
    /// vertex giving the lexicographically smallest encoding, and components are
    /// sorted by that encoding. Vertex ids become `n0, n1, …`.
    pub fn canonical_form(&self) -> Dpg {
        let links = self.port_links();
        let nv = self.vertices.len();
        let mut rank: Vec<Option<usize>> = vec![None; nv];
        let mut order = Vec::with_capacity(nv);
        let mut queue = VecDeque::new();
        for seed in self.boundary_seeds() {
            if rank[seed].is_none() {
                rank[seed] = Some(order.len());
                order.push(seed);
                queue.push_back(seed);
            }
        }
        bfs(&links, &mut rank, &mut order, &mut queue);

        let mut components: Vec<(String, Vec<usize>)> = Vec::new();
        let mut seen = rank.iter().map(Option::is_some).collect::<Vec<_>>();
        for start in 0..nv {
            if seen[start] {
                continue;
            }
            let comp = component(&links, start, &mut seen);
            let best = comp
                .iter()
                .map(|&s| {
                    let mut local_rank = vec![None; nv];
                    let mut local_order = vec![s];
                    local_rank[s] = Some(0);
                    let mut q = VecDeque::from([s]);
                    bfs(&links, &mut local_rank, &mut local_order, &mut q);
                    (self.encode(&links, &local_order, &local_rank), local_order)
                })
                .min()
                .expect("components are non-empty");
            components.push(best);
        }
        components.sort();
        for (_, comp_order) in components {
            for v in comp_order {
                rank[v] = Some(order.len());
                order.push(v);
            }
        }

        let name = |id: &str| format!("n{}", rank[self.index[id]].expect("every vertex ranked"));
        let vertices = order
            .iter()
            .enumerate()
            .map(|(i, &v)| Vertex::new(format!("n{i}"), self.vertices[v].label.clone()))
            .collect();
        let key = |e: &Endpoint| match e {
            Endpoint::Boundary(i) => (0usize, *i, 0usize),
            Endpoint::Port { vertex, port } => (1, rank[self.index[vertex.as_str()]].unwrap_or(0), *port),
        };
        let canon = |ws: &[Wire]| {
            let mut ws: Vec<Wire> = ws.to_vec();
            ws.sort_by_key(|w| (key(&w.from), key(&w.to)));
            ws.iter().map(|w| Wire::new(w.from.renamed(&name), w.to.renamed(&name))).collect()
        };
        Dpg::build(self.m, self.n, self.k, self.l, vertices, canon(&self.h_wires), canon(&self.v_wires))
            .expect("canonical relabeling preserves validity")
    }

    fn boundary_seeds(&self) -> Vec<usize> {
        let mut seeds = Vec::new();
        for dir in Dir::ALL {
            let (ins, _) = self.boundary(dir);
            let fwd = self.targets_by_source(dir);
            for i in 1..=ins {
                if let Some(v) = fwd[&Endpoint::Boundary(i)].vertex() {
                    seeds.push(self.index[v]);
                }
            }
        }
        for dir in Dir::ALL {
            let (_, outs) = self.boundary(dir);
            let bwd = self.sources_by_target(dir);
            for j in 1..=outs {
                if let Some(v) = bwd[&Endpoint::Boundary(j)].vertex() {
                    seeds.push(self.index[v]);
                }
            }
        }
        seeds
    }

    fn port_links(&self) -> Vec<Vec<Link>> {
        let mut links = Vec::with_capacity(self.vertices.len());
        let fwd: Vec<_> = Dir::ALL.iter().map(|&d| self.targets_by_source(d)).collect();
        let bwd: Vec<_> = Dir::ALL.iter().map(|&d| self.sources_by_target(d)).collect();
        for v in &self.vertices {
            let a = v.label.arity();
            let mut l = Vec::new();
            for (di, dir) in Dir::ALL.iter().enumerate() {
                for p in 1..=a.inputs(*dir) {
                    l.push(self.link(bwd[di][&Endpoint::port(v.id.clone(), p)], *dir, true));
                }
            }
            for (di, dir) in Dir::ALL.iter().enumerate() {
                for p in 1..=a.outputs(*dir) {
                    l.push(self.link(fwd[di][&Endpoint::port(v.id.clone(), p)], *dir, false));
                }
            }
            links.push(l);
        }
        links
    }

    fn link(&self, other: &Endpoint, dir: Dir, other_is_source: bool) -> Link {
        match other {
            Endpoint::Boundary(i) => Link::Boundary(dir, other_is_source, *i),
            Endpoint::Port { vertex, port } => Link::Vertex(self.index[vertex.as_str()], dir, *port),
        }
    }

    fn encode(&self, links: &[Vec<Link>], order: &[usize], rank: &[Option<usize>]) -> String {
        let mut out = String::new();
        for &v in order {
            out.push_str(&self.vertices[v].label.key());
            for l in &links[v] {
                match l {
                    Link::Boundary(d, s, i) => out.push_str(&format!("|B{d:?}{s}{i}")),
                    Link::Vertex(u, d, p) => out.push_str(&format!("|V{}{d:?}{p}", rank[*u].unwrap_or(usize::MAX))),
                }
            }
            out.push(';');
        }
        out
    }

    /// True when a label-, order- and wiring-preserving bijection exists.
    pub fn is_isomorphic(&self, other: &Dpg) -> bool {
        self.vertices.len() == other.vertices.len() && self.canonical_form() == other.canonical_form()
    }

    /// Horizontal composite: `self` on the left, `right` on the right.
    pub fn compose_h(&self, right: &Dpg) -> Result<Dpg> {
        compose_h(self, right)
    }

    /// Vertical composite: `self` on top, `bottom` underneath.
    pub fn compose_v(&self, bottom: &Dpg) -> Result<Dpg> {
        compose_v(self, bottom)
    }

    /// Copy with every vertex id prefixed.
    pub fn with_prefix(&self, prefix: &str) -> Dpg {
        self.renamed(|id| format!("{prefix}{id}"))
    }

    /// Text rendering of the canonical form, stable across runs.
    pub fn canonical_text(&self) -> String {
        let c = self.canonical_form();
        let mut out = format!("{} {} {} {}\n", c.m, c.n, c.k, c.l);
        for v in &c.vertices {
            out.push_str(&format!("{} {}\n", v.id, v.label.key()));
        }
        for (tag, ws) in [("h", &c.h_wires), ("v", &c.v_wires)] {
            for w in ws {
                out.push_str(&format!("{tag} {} -> {}\n", w.from, w.to));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Link {
    Boundary(Dir, bool, usize),
    Vertex(usize, Dir, usize),
}

fn bfs(links: &[Vec<Link>], rank: &mut [Option<usize>], order: &mut Vec<usize>, queue: &mut VecDeque<usize>) {
    while let Some(x) = queue.pop_front() {
        for l in &links[x] {
            if let Link::Vertex(u, _, _) = l {
                if rank[*u].is_none() {
                    rank[*u] = Some(order.len());
                    order.push(*u);
                    queue.push_back(*u);
                }
            }
        }
    }
}

fn component(links: &[Vec<Link>], start: usize, seen: &mut [bool]) -> Vec<usize> {
    let mut comp = vec![start];
    seen[start] = true;
    let mut i = 0;
    while i < comp.len() {
        for l in &links[comp[i]] {
            if let Link::Vertex(u, _, _) = l {
                if !seen[*u] {
                    seen[*u] = true;
                    comp.push(*u);
                }
            }
        }
        i += 1;
    }
    comp
}

/// Horizontal composite with `left` first; shared boundary wires are spliced.
pub fn compose_h(left: &Dpg, right: &Dpg) -> Result<Dpg> {
    if left.n != right.m {
        return Err(Error::ArityMismatch(format!(
            "horizontal composition of {} outputs with {} inputs",
            left.n, right.m
        )));
    }
    let right = left.disjoint_from(right);
    let (h, v) = splice(left, &right, Dir::H);
    let mut vertices = left.vertices.clone();
    vertices.extend(right.vertices.iter().cloned());
    Dpg::build(left.m, right.n, left.k + right.k, left.l + right.l, vertices, h, v)
}

/// Vertical composite with `top` above `bottom`; shared boundary wires are spliced.
pub fn compose_v(top: &Dpg, bottom: &Dpg) -> Result<Dpg> {
    if top.l != bottom.k {
        return Err(Error::ArityMismatch(format!(
            "vertical composition of {} outputs with {} inputs",
            top.l, bottom.k
        )));
    }
    let bottom = top.disjoint_from(bottom);
    let (v, h) = splice(top, &bottom, Dir::V);
    let mut vertices = top.vertices.clone();
    vertices.extend(bottom.vertices.iter().cloned());
    Dpg::build(top.m + bottom.m, top.n + bottom.n, top.k, bottom.l, vertices, h, v)
}

/// Splices `first` and `second` along direction `dir` and juxtaposes the other direction.
fn splice(first: &Dpg, second: &Dpg, dir: Dir) -> (Vec<Wire>, Vec<Wire>) {
    let other = match dir {
        Dir::H => Dir::V,
        Dir::V => Dir::H,
    };
    let second_fwd = second.targets_by_source(dir);
    let mut along = Vec::new();
    for w in first.wires(dir) {
        match &w.to {
            Endpoint::Boundary(j) => {
                along.push(Wire::new(w.from.clone(), second_fwd[&Endpoint::Boundary(*j)].clone()));
            }
            _ => along.push(w.clone()),
        }
    }
    along.extend(
        second
            .wires(dir)
            .iter()
            .filter(|w| !matches!(w.from, Endpoint::Boundary(_)))
            .cloned(),
    );
    let (ins, outs) = first.boundary(other);
    let mut across: Vec<Wire> = first.wires(other).to_vec();
    across.extend(
        second
            .wires(other)
            .iter()
            .map(|w| Wire::new(w.from.shifted(ins), w.to.shifted(outs))),
    );
    (along, across)
}

/// Incremental construction of graphs by wiring labeled boxes to open sources.
///
/// Boundary inputs and outputs are numbered in the order they are requested.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    m: usize,
    n: usize,
    k: usize,
    l: usize,
    vertices: Vec<Vertex>,
    h_wires: Vec<Wire>,
    v_wires: Vec<Wire>,
    counter: usize,
    error: Option<Error>,
}

impl GraphBuilder {
    /// An empty builder.
    pub fn new() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// Opens a new horizontal boundary input.
    pub fn h_input(&mut self) -> Endpoint {
        self.m += 1;
        Endpoint::Boundary(self.m)
    }

    /// Opens a new vertical boundary input.
    pub fn v_input(&mut self) -> Endpoint {
        self.k += 1;
        Endpoint::Boundary(self.k)
    }

    /// Routes an open horizontal source to the next horizontal boundary output.
    pub fn h_output(&mut self, src: Endpoint) {
        self.n += 1;
        self.h_wires.push(Wire::new(src, Endpoint::Boundary(self.n)));
    }

    /// Routes an open vertical source to the next vertical boundary output.
    pub fn v_output(&mut self, src: Endpoint) {
        self.l += 1;
        self.v_wires.push(Wire::new(src, Endpoint::Boundary(self.l)));
    }

    /// Adds a vertex fed by the given sources and returns its out-ports.
    pub fn add(&mut self, label: Label, h: &[Endpoint], v: &[Endpoint]) -> (Vec<Endpoint>, Vec<Endpoint>) {
        self.counter += 1;
        let id = format!("{}{}", label.name(), self.counter);
        self.add_named(id, label, h, v)
    }

    /// Like [`GraphBuilder::add`] with an explicit vertex id.
    pub fn add_named(
        &mut self,
        id: impl Into<String>,
        label: Label,
        h: &[Endpoint],
        v: &[Endpoint],
    ) -> (Vec<Endpoint>, Vec<Endpoint>) {
        let id = id.into();
        let a = label.arity();
        if (h.len(), v.len()) != (a.h_in, a.v_in) && self.error.is_none() {
            self.error = Some(Error::LabelArity(format!(
                "{label} expects {} horizontal and {} vertical inputs, got {} and {}",
                a.h_in,
                a.v_in,
                h.len(),
                v.len()
            )));
        }
        for (p, src) in h.iter().enumerate() {
            self.h_wires.push(Wire::new(src.clone(), Endpoint::port(id.clone(), p + 1)));
        }
        for (p, src) in v.iter().enumerate() {
            self.v_wires.push(Wire::new(src.clone(), Endpoint::port(id.clone(), p + 1)));
        }
        let hs = (1..=a.h_out).map(|p| Endpoint::port(id.clone(), p)).collect();
        let vs = (1..=a.v_out).map(|p| Endpoint::port(id.clone(), p)).collect();
        self.vertices.push(Vertex::new(id, label));
        (hs, vs)
    }

    /// Inlines a copy of `g` fed by the given sources and returns its boundary outputs.
    pub fn embed(&mut self, g: &Dpg, h: &[Endpoint], v: &[Endpoint]) -> (Vec<Endpoint>, Vec<Endpoint>) {
        self.counter += 1;
        let prefix = format!("g{}/", self.counter);
        if (h.len(), v.len()) != (g.m, g.k) && self.error.is_none() {
            self.error = Some(Error::ArityMismatch(format!(
                "embedded graph expects {} horizontal and {} vertical inputs, got {} and {}",
                g.m,
                g.k,
                h.len(),
                v.len()
            )));
            return (Vec::new(), Vec::new());
        }
        for vx in &g.vertices {
            self.vertices.push(Vertex::new(format!("{prefix}{}", vx.id), vx.label.clone()));
        }
        let mut outs = [Vec::new(), Vec::new()];
        for (di, dir) in Dir::ALL.iter().enumerate() {
            let given = match dir {
                Dir::H => h,
                Dir::V => v,
            };
            let (_, count) = g.boundary(*dir);
            let mut out: Vec<Option<Endpoint>> = vec![None; count];
            for w in g.wires(*dir) {
                let from = match &w.from {
                    Endpoint::Boundary(i) => given[i - 1].clone(),
                    Endpoint::Port { vertex, port } => Endpoint::port(format!("{prefix}{vertex}"), *port),
                };
                match &w.to {
                    Endpoint::Boundary(j) => out[j - 1] = Some(from),
                    Endpoint::Port { vertex, port } => {
                        let to = Endpoint::port(format!("{prefix}{vertex}"), *port);
                        match dir {
                            Dir::H => self.h_wires.push(Wire::new(from, to)),
                            Dir::V => self.v_wires.push(Wire::new(from, to)),
                        }
                    }
                }
            }
            outs[di] = out.into_iter().map(|e| e.expect("valid graph covers outputs")).collect();
        }
        let [hs, vs] = outs;
        (hs, vs)
    }

    /// Validates and returns the graph.
    pub fn build(self) -> Result<Dpg> {
        if let Some(e) = self.error {
            return Err(e);
        }
        Dpg::build(self.m, self.n, self.k, self.l, self.vertices, self.h_wires, self.v_wires)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(name: &str, a: Arity) -> Label {
        Label::new(name, a)
    }

    fn h() -> Label {
        lab("H", Arity::new(1, 1, 0, 0))
    }

    fn xor() -> Label {
        lab("xor", Arity::new(0, 0, 2, 1))
    }

    fn delete() -> Label {
        lab("delete", Arity::new(0, 0, 1, 0))
    }

    #[test]
    fn single_hadamard_is_valid() {
        let g = Dpg::single(h());
        assert_eq!((g.m(), g.n(), g.k(), g.l()), (1, 1, 0, 0));
    }

    #[test]
    fn identity_graph_is_valid() {
        let g = Dpg::identity_h(2);
        assert_eq!(g.vertices().len(), 0);
        assert_eq!(g.h_wires().len(), 2);
    }

    #[test]
    fn vertical_loop_is_a_cycle() {
        let a = lab("f", Arity::new(0, 0, 1, 1));
        let vs = vec![Vertex::new("A", a.clone()), Vertex::new("B", a)];
        let ws = vec![
            Wire::new(Endpoint::port("A", 1), Endpoint::port("B", 1)),
            Wire::new(Endpoint::port("B", 1), Endpoint::port("A", 1)),
        ];
        assert_eq!(Dpg::build(0, 0, 0, 0, vs, vec![], ws), Err(Error::Cycle));
    }

    #[test]
    fn build_reports_duplicates_and_dangling() {
        let vs = vec![Vertex::new("x", h())];
        let dup = vec![
            Wire::new(Endpoint::Boundary(1), Endpoint::port("x", 1)),
            Wire::new(Endpoint::Boundary(1), Endpoint::Boundary(1)),
        ];
        assert!(matches!(
            Dpg::build(1, 1, 0, 0, vs.clone(), dup, vec![]),
            Err(Error::DuplicateEndpoint(_))
        ));
        let dangling = vec![Wire::new(Endpoint::Boundary(1), Endpoint::port("x", 1))];
        assert!(matches!(
            Dpg::build(1, 0, 0, 0, vs.clone(), dangling, vec![]),
            Err(Error::DanglingPort(_))
        ));
        let bad = vec![
            Wire::new(Endpoint::Boundary(1), Endpoint::port("x", 2)),
            Wire::new(Endpoint::port("x", 1), Endpoint::Boundary(1)),
        ];
        assert!(matches!(Dpg::build(1, 1, 0, 0, vs, bad, vec![]), Err(Error::InvalidEndpoint(_))));
    }

    #[test]
    fn two_hadamards_chain() {
        let g = compose_h(&Dpg::single(h()), &Dpg::single(h())).unwrap();
        assert_eq!(g.vertices().len(), 2);
        assert_eq!(g.h_wires().len(), 3);
        assert!(g.h_wires().iter().any(|w| w.from.vertex().is_some() && w.to.vertex().is_some()));
    }

    #[test]
    fn identity_is_unit() {
        let g = Dpg::single(h());
        assert!(compose_h(&Dpg::identity_h(1), &g).unwrap().is_isomorphic(&g));
        assert!(compose_h(&g, &Dpg::identity_h(1)).unwrap().is_isomorphic(&g));
        let x = Dpg::single(xor());
        assert!(compose_v(&Dpg::identity_v(2), &x).unwrap().is_isomorphic(&x));
    }

    #[test]
    fn xor_over_delete() {
        let g = compose_v(&Dpg::single(xor()), &Dpg::single(delete())).unwrap();
        assert_eq!((g.k(), g.l()), (2, 0));
    }

    #[test]
    fn different_labels_are_not_isomorphic() {
        let t = lab("T", Arity::new(1, 1, 0, 0));
        assert!(!Dpg::single(h()).is_isomorphic(&Dpg::single(t)));
    }

    #[test]
    fn canonical_form_ignores_ids_and_is_idempotent() {
        let g = compose_h(&Dpg::single(h()), &Dpg::single(lab("T", Arity::new(1, 1, 0, 0)))).unwrap();
        let renamed = g.with_prefix("zz");
        assert_eq!(g.canonical_form(), renamed.canonical_form());
        assert_eq!(g.canonical_form().canonical_form(), g.canonical_form());
        assert!(g.is_isomorphic(&g.canonical_form()));
    }

    #[test]
    fn wiring_distinguishes_graphs() {
        let e = lab("E", Arity::new(2, 2, 0, 0));
        let mut b1 = GraphBuilder::new();
        let (q1, q2) = (b1.h_input(), b1.h_input());
        let (hs, _) = b1.add(e.clone(), &[q1, q2], &[]);
        let (o, _) = b1.add(h(), &[hs[0].clone()], &[]);
        b1.h_output(o[0].clone());
        b1.h_output(hs[1].clone());
        let mut b2 = GraphBuilder::new();
        let (q1, q2) = (b2.h_input(), b2.h_input());
        let (hs, _) = b2.add(e, &[q1, q2], &[]);
        let (o, _) = b2.add(h(), &[hs[1].clone()], &[]);
        b2.h_output(hs[0].clone());
        b2.h_output(o[0].clone());
        assert!(!b1.build().unwrap().is_isomorphic(&b2.build().unwrap()));
    }

    #[test]
    fn floating_components_are_canonicalized() {
        let one = lab("one", Arity::new(0, 0, 0, 1));
        let copy = lab("copy", Arity::new(0, 0, 1, 2));
        let mk = |delete_first: bool| {
            let mut b = GraphBuilder::new();
            for i in 0..2 {
                let (_, o) = b.add(one.clone(), &[], &[]);
                if (i == 0) == delete_first {
                    b.add(delete(), &[], &o);
                } else {
                    let (_, c) = b.add(copy.clone(), &[], &o);
                    let (_, x) = b.add(xor(), &[], &c);
                    b.add(delete(), &[], &x);
                }
            }
            b.build().unwrap()
        };
        let (g1, g2) = (mk(true), mk(false));
        assert_ne!(g1, g2);
        assert_eq!(g1.canonical_form(), g2.canonical_form());
        let mut b = GraphBuilder::new();
        for _ in 0..2 {
            let (_, o) = b.add(one.clone(), &[], &[]);
            b.add(delete(), &[], &o);
        }
        assert!(!b.build().unwrap().is_isomorphic(&g1));
    }

    #[test]
    fn relabel_checks_arity() {
        let g = Dpg::single(h());
        assert_eq!(g.relabel(|l| l.clone()).unwrap(), g);
        assert!(matches!(
            g.relabel(|_| lab("E", Arity::new(2, 2, 0, 0))),
            Err(Error::LabelArity(_))
        ));
    }

    #[test]
    fn builder_embed_matches_compose() {
        let hh = compose_h(&Dpg::single(h()), &Dpg::single(h())).unwrap();
        let mut b = GraphBuilder::new();
        let q = b.h_input();
        let (o, _) = b.embed(&Dpg::single(h()), &[q], &[]);
        let (o, _) = b.embed(&Dpg::single(h()), &o, &[]);
        b.h_output(o[0].clone());
        assert!(b.build().unwrap().is_isomorphic(&hh));
    }
}
