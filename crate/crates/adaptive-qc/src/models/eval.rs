//! Evaluation of a graph to its adaptive instrument.
//!
//! Each classical input is simulated separately. The simulator keeps, per
//! assignment of the live classical wires, a list of unnormalized pure vectors
//! on `reference ⊗ live quantum wires`. The reference holds one half of a
//! maximally entangled state with the horizontal inputs, so the final vectors
//! give the Choi matrix of every table entry. Vectors in a branch are
//! recompressed to a minimal-rank set after every vertex.

use std::collections::HashMap;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::dpg::{Dir, Dpg, Endpoint, Label};
use crate::error::Result;
use crate::inst::AdaptiveInstrument;
use crate::quantum::{ComplexMatrix, CpMap};

use super::LabelSemantics;

const KRAUS_TOL: f64 = 1e-12;
const NEGLIGIBLE: f64 = 1e-24;

type Branches = HashMap<Vec<u8>, Vec<DVector<Complex64>>>;

struct Step {
    h_in: Vec<usize>,
    h_out: Vec<usize>,
    v_in: Vec<usize>,
    v_out: Vec<usize>,
    kraus: Vec<((usize, usize), Vec<ComplexMatrix>)>,
}

/// The adaptive instrument of a graph under the given label semantics.
pub fn evaluate(g: &Dpg, sem: &LabelSemantics) -> Result<AdaptiveInstrument> {
    sem.check_graph(g)?;
    let mut cache: HashMap<Label, Vec<((usize, usize), Vec<ComplexMatrix>)>> = HashMap::new();
    for label in g.labels() {
        let inst = sem.resolve(&label)?;
        let entries = inst.table().iter().map(|(&key, phi)| (key, phi.kraus(KRAUS_TOL))).collect();
        cache.insert(label, entries);
    }

    let h_index = wire_index(g, Dir::H);
    let v_index = wire_index(g, Dir::V);
    let port_wires = |dir: Dir, id: &str, count: usize, incoming: bool| -> Vec<usize> {
        let index = match dir {
            Dir::H => &h_index,
            Dir::V => &v_index,
        };
        (1..=count)
            .map(|p| {
                let ep = Endpoint::port(id, p);
                if incoming {
                    index.by_target[&ep]
                } else {
                    index.by_source[&ep]
                }
            })
            .collect()
    };

    let steps: Vec<Step> = g
        .vertices()
        .iter()
        .map(|v| {
            let a = v.label.arity();
            Step {
                h_in: port_wires(Dir::H, &v.id, a.h_in, true),
                h_out: port_wires(Dir::H, &v.id, a.h_out, false),
                v_in: port_wires(Dir::V, &v.id, a.v_in, true),
                v_out: port_wires(Dir::V, &v.id, a.v_out, false),
                kraus: cache[&v.label].clone(),
            }
        })
        .collect();
    let order = schedule(g)?;

    let (m, n, k, l) = (g.m(), g.n(), g.k(), g.l());
    let h_inputs: Vec<usize> = (1..=m).map(|i| h_index.by_source[&Endpoint::Boundary(i)]).collect();
    let h_outputs: Vec<usize> = (1..=n).map(|j| h_index.by_target[&Endpoint::Boundary(j)]).collect();
    let v_inputs: Vec<usize> = (1..=k).map(|i| v_index.by_source[&Endpoint::Boundary(i)]).collect();
    let v_outputs: Vec<usize> = (1..=l).map(|j| v_index.by_target[&Endpoint::Boundary(j)]).collect();

    let dim_in = 1usize << m;
    let mut start = DVector::<Complex64>::zeros(dim_in * dim_in);
    for i in 0..dim_in {
        start[i * dim_in + i] = Complex64::new(1.0, 0.0);
    }

    let mut entries = Vec::new();
    for a in 0..1usize << k {
        let mut key = vec![0u8; v_index.count];
        for (i, &w) in v_inputs.iter().enumerate() {
            key[w] = ((a >> (k - 1 - i)) & 1) as u8;
        }
        let mut frontier = h_inputs.clone();
        let mut branches: Branches = HashMap::from([(key, vec![start.clone()])]);

        for &x in &order {
            let step = &steps[x];
            let rest: Vec<usize> = frontier.iter().copied().filter(|w| !step.h_in.contains(w)).collect();
            let arranged: Vec<usize> = rest.iter().chain(&step.h_in).copied().collect();
            let perm: Vec<usize> = arranged
                .iter()
                .map(|w| frontier.iter().position(|f| f == w).expect("input wire is live"))
                .collect();
            let tail = 1usize << step.h_in.len();
            let mut next: Branches = HashMap::new();
            for (key, vecs) in branches {
                let ax = step.v_in.iter().fold(0usize, |acc, &w| (acc << 1) | key[w] as usize);
                let mut base = key.clone();
                for &w in &step.v_in {
                    base[w] = 0;
                }
                let vecs: Vec<_> = vecs.iter().map(|v| permute(v, frontier.len(), &perm)).collect();
                for ((ea, b), ops) in &step.kraus {
                    if *ea != ax {
                        continue;
                    }
                    let mut out_key = base.clone();
                    for (j, &w) in step.v_out.iter().enumerate() {
                        out_key[w] = ((b >> (step.v_out.len() - 1 - j)) & 1) as u8;
                    }
                    let bucket = next.entry(out_key).or_default();
                    for v in &vecs {
                        for op in ops {
                            let w = apply_tail(op, v, tail);
                            if w.norm_squared() > NEGLIGIBLE {
                                bucket.push(w);
                            }
                        }
                    }
                }
            }
            next.retain(|_, vecs| !vecs.is_empty());
            for vecs in next.values_mut() {
                compress(vecs);
            }
            branches = next;
            frontier = rest.into_iter().chain(step.h_out.iter().copied()).collect();
        }

        let perm: Vec<usize> = h_outputs
            .iter()
            .map(|w| frontier.iter().position(|f| f == w).expect("output wire is live"))
            .collect();
        let dim_out = 1usize << n;
        for (key, vecs) in branches {
            let b = v_outputs.iter().fold(0usize, |acc, &w| (acc << 1) | key[w] as usize);
            let mut choi = ComplexMatrix::zeros(dim_in * dim_out, dim_in * dim_out);
            for v in &vecs {
                let v = permute(v, frontier.len(), &perm);
                choi += &v * v.adjoint();
            }
            entries.push(((a, b), CpMap::from_choi(m, n, &choi)?));
        }
    }
    AdaptiveInstrument::unchecked(k, l, m, n, entries)
}

struct WireIndex {
    count: usize,
    by_source: HashMap<Endpoint, usize>,
    by_target: HashMap<Endpoint, usize>,
}

fn wire_index(g: &Dpg, dir: Dir) -> WireIndex {
    let wires = g.wires(dir);
    WireIndex {
        count: wires.len(),
        by_source: wires.iter().enumerate().map(|(i, w)| (w.from.clone(), i)).collect(),
        by_target: wires.iter().enumerate().map(|(i, w)| (w.to.clone(), i)).collect(),
    }
}

/// A topological order preferring vertices that shrink the quantum frontier.
fn schedule(g: &Dpg) -> Result<Vec<usize>> {
    g.topological_order()?;
    let succ = g.successors();
    let mut indeg = vec![0usize; succ.len()];
    for s in &succ {
        for &t in s {
            indeg[t] += 1;
        }
    }
    let growth = |i: usize| {
        let a = g.vertices()[i].label.arity();
        a.h_out as i64 - a.h_in as i64
    };
    let mut ready: Vec<usize> = (0..succ.len()).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(succ.len());
    while !ready.is_empty() {
        let pos = (0..ready.len())
            .min_by_key(|&p| (growth(ready[p]), ready[p]))
            .expect("nonempty");
        let x = ready.swap_remove(pos);
        order.push(x);
        for &t in &succ[x] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.push(t);
            }
        }
    }
    Ok(order)
}

/// Reorders the frontier qubits of a `reference ⊗ frontier` vector: new
/// position `j` holds old frontier qubit `perm[j]`.
fn permute(v: &DVector<Complex64>, width: usize, perm: &[usize]) -> DVector<Complex64> {
    if perm.iter().enumerate().all(|(j, &p)| j == p) {
        return v.clone();
    }
    let fdim = 1usize << width;
    let map: Vec<usize> = (0..fdim)
        .map(|x| {
            perm.iter()
                .enumerate()
                .fold(0usize, |acc, (j, &p)| acc | (((x >> (width - 1 - p)) & 1) << (width - 1 - j)))
        })
        .collect();
    let mut out = DVector::zeros(v.len());
    for (i, z) in v.iter().enumerate() {
        out[(i / fdim) * fdim + map[i % fdim]] = *z;
    }
    out
}

/// Applies an operator to the trailing `tail`-dimensional factor.
fn apply_tail(op: &ComplexMatrix, v: &DVector<Complex64>, tail: usize) -> DVector<Complex64> {
    let d_out = op.nrows();
    let blocks = v.len() / tail;
    let mut out = DVector::zeros(blocks * d_out);
    for p in 0..blocks {
        let src = v.rows(p * tail, tail);
        let dst = op * src;
        out.rows_mut(p * d_out, d_out).copy_from(&dst);
    }
    out
}

/// Replaces the vectors by a minimal set with the same `Σ v v†`.
fn compress(vecs: &mut Vec<DVector<Complex64>>) {
    if vecs.len() < 2 {
        return;
    }
    let c = vecs.len();
    let gram = ComplexMatrix::from_fn(c, c, |i, j| vecs[i].dotc(&vecs[j]));
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut out = Vec::new();
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= NEGLIGIBLE {
            continue;
        }
        let w = eig.eigenvectors.column(idx);
        let mut u = DVector::zeros(vecs[0].len());
        for (i, v) in vecs.iter().enumerate() {
            u.axpy(w[i], v, Complex64::new(1.0, 0.0));
        }
        out.push(u);
    }
    *vecs = out;
}
