#![allow(dead_code)]

use adaptive_qc::contextuality::{Adaptivity, AffineMap, BellInstrumentSpec, BooleanFunction};
use adaptive_qc::dpg::{Arity, Dpg, Endpoint, GraphBuilder, Label};
use adaptive_qc::inst::{compose_h, compose_v, instrument_distance, AdaptiveInstrument};
use adaptive_qc::models::labels;
use adaptive_qc::paste::GadgetDictionary;
use adaptive_qc::quantum::{outer, Angle, ComplexMatrix, CpMap, DensityMatrix, C64};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// A random full-rank mixed state `G G† / Tr(G G†)` with Gaussian `G`.
pub fn random_state(rng: &mut ChaCha8Rng, qubits: usize) -> DensityMatrix {
    let d = 1 << qubits;
    let g = ComplexMatrix::from_fn(d, d, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    DensityMatrix::new(rho / tr).unwrap()
}

/// An orthonormal qubit basis from Bloch angles.
pub fn basis(theta: f64, phi: f64) -> [ComplexMatrix; 2] {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = C64::from_polar(1.0, phi);
    [
        ComplexMatrix::from_column_slice(2, 1, &[C64::new(c, 0.0), e * s]),
        ComplexMatrix::from_column_slice(2, 1, &[-e.conj() * s, C64::new(c, 0.0)]),
    ]
}

/// A non-destructive projective measurement in a random basis per setting.
pub fn random_local_instrument(rng: &mut ChaCha8Rng) -> AdaptiveInstrument {
    let mut entries = Vec::new();
    for a in 0..2 {
        let b = basis(rng.gen_range(0.0..std::f64::consts::PI), rng.gen_range(0.0..std::f64::consts::TAU));
        for (s, v) in b.iter().enumerate() {
            entries.push(((a, s), CpMap::from_conjugation(&outer(v)).unwrap()));
        }
    }
    AdaptiveInstrument::new(1, 1, 1, 1, entries).unwrap()
}

/// A Bell instrument with random bases and random lower-triangular affine adaptivity.
pub fn random_spec(rng: &mut ChaCha8Rng, m: usize) -> BellInstrumentSpec {
    let bases = (0..m).map(|_| random_local_instrument(rng)).collect();
    let adaptivity = (0..m)
        .map(|j| Adaptivity {
            earlier: (0..j).filter(|_| rng.gen_bool(0.5)).collect(),
            constant: rng.gen_bool(0.5),
        })
        .collect();
    BellInstrumentSpec::new(bases, adaptivity).unwrap()
}

pub fn random_affine(rng: &mut ChaCha8Rng, k: usize, l: usize) -> AffineMap {
    let rows = (0..l).map(|_| rng.gen_range(0..1usize << k)).collect();
    AffineMap::new(k, l, rows, rng.gen_range(0..1usize << l)).unwrap()
}

pub fn random_function(rng: &mut ChaCha8Rng, k: usize, l: usize) -> BooleanFunction {
    let table = (0..1usize << k).map(|_| rng.gen_range(0..1usize << l)).collect();
    BooleanFunction::new(k, l, table).unwrap()
}

/// The noisy PR box `(1 − λ)·PR + λ·uniform` on two parties.
pub fn noisy_pr(lambda: f64) -> Vec<Vec<f64>> {
    (0..4)
        .map(|i: usize| {
            let want = (i == 3) as usize;
            (0..4usize)
                .map(|s| {
                    let parity = (s >> 1) ^ (s & 1);
                    (1.0 - lambda) * if parity == want { 0.5 } else { 0.0 } + lambda * 0.25
                })
                .collect()
        })
        .collect()
}


/// A complex Gaussian matrix.
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(gaussian(rng), gaussian(rng)))
}

fn inverse_sqrt(s: &ComplexMatrix) -> ComplexMatrix {
    let eig = s.clone().symmetric_eigen();
    let d = ComplexMatrix::from_diagonal(&eig.eigenvalues.map(|x| C64::new(1.0 / x.sqrt(), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// A random instrument `(k; m → n; ℓ)` with one or two Kraus operators per
/// entry (more when needed for an invertible normalization); some outcomes are left out so that tables are sparse.
pub fn random_instrument(rng: &mut ChaCha8Rng, k: usize, l: usize, m: usize, n: usize) -> AdaptiveInstrument {
    let (din, dout) = (1usize << m, 1usize << n);
    let mut entries = Vec::new();
    for a in 0..1usize << k {
        let mut outs: Vec<usize> = (0..1usize << l).filter(|_| rng.gen_bool(0.75)).collect();
        if outs.is_empty() {
            outs.push(rng.gen_range(0..1usize << l));
        }
        let full_rank = din.div_ceil(dout);
        let ops: Vec<(usize, Vec<ComplexMatrix>)> = outs
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                let count = if i == 0 { full_rank.max(rng.gen_range(1..=2)) } else { rng.gen_range(1..=2) };
                (b, (0..count).map(|_| random_matrix(rng, dout, din)).collect())
            })
            .collect();
        let mut s = ComplexMatrix::zeros(din, din);
        for (_, ks) in &ops {
            for g in ks {
                s += g.adjoint() * g;
            }
        }
        let norm = inverse_sqrt(&s);
        for (b, ks) in ops {
            let scaled: Vec<ComplexMatrix> = ks.iter().map(|g| g * &norm).collect();
            entries.push(((a, b), CpMap::from_kraus(&scaled).unwrap()));
        }
    }
    AdaptiveInstrument::new(k, l, m, n, entries).unwrap()
}

fn take_random(rng: &mut ChaCha8Rng, pool: &mut Vec<Endpoint>) -> Endpoint {
    let i = rng.gen_range(0..pool.len());
    pool.swap_remove(i)
}

/// A random graph over generic labels named `{prefix}{h_in}{h_out}{v_in}{v_out}`
/// with exactly the given boundary.
pub fn random_dpg(rng: &mut ChaCha8Rng, arity: Arity, size: usize, prefix: &str) -> Dpg {
    let mut b = GraphBuilder::new();
    let mut hp: Vec<Endpoint> = (0..arity.h_in).map(|_| b.h_input()).collect();
    let mut vp: Vec<Endpoint> = (0..arity.v_in).map(|_| b.v_input()).collect();
    let add = |b: &mut GraphBuilder, hp: &mut Vec<Endpoint>, vp: &mut Vec<Endpoint>, a: Arity, rng: &mut ChaCha8Rng| {
        let hs: Vec<Endpoint> = (0..a.h_in).map(|_| take_random(rng, hp)).collect();
        let vs: Vec<Endpoint> = (0..a.v_in).map(|_| take_random(rng, vp)).collect();
        let name = format!("{prefix}{}{}{}{}", a.h_in, a.h_out, a.v_in, a.v_out);
        let (ho, vo) = b.add(Label::new(name, a), &hs, &vs);
        hp.extend(ho);
        vp.extend(vo);
    };
    for _ in 0..size {
        let a = Arity::new(
            rng.gen_range(0..=hp.len().min(2)),
            rng.gen_range(0..=2),
            rng.gen_range(0..=vp.len().min(2)),
            rng.gen_range(0..=2),
        );
        add(&mut b, &mut hp, &mut vp, a, rng);
    }
    while hp.len() > arity.h_out {
        add(&mut b, &mut hp, &mut vp, Arity::new(1, 0, 0, 0), rng);
    }
    while hp.len() < arity.h_out {
        add(&mut b, &mut hp, &mut vp, Arity::new(0, 1, 0, 0), rng);
    }
    while vp.len() > arity.v_out {
        add(&mut b, &mut hp, &mut vp, Arity::new(0, 0, 1, 0), rng);
    }
    while vp.len() < arity.v_out {
        add(&mut b, &mut hp, &mut vp, Arity::new(0, 0, 0, 1), rng);
    }
    hp.shuffle(rng);
    vp.shuffle(rng);
    for e in hp {
        b.h_output(e);
    }
    for e in vp {
        b.v_output(e);
    }
    b.build().unwrap()
}

/// A random circuit-model graph with `m` input qubits and `k` input bits: some
/// bits prepare qubits with `N_Z`, up to four H, T or E gates act, and each
/// qubit is either measured with `M_Z` or output. At most three qubits are used.
pub fn random_qc_graph(rng: &mut ChaCha8Rng, m: usize, k: usize) -> Dpg {
    let mut b = GraphBuilder::new();
    let mut qubits: Vec<Endpoint> = (0..m).map(|_| b.h_input()).collect();
    let mut bits: Vec<Endpoint> = (0..k).map(|_| b.v_input()).collect();
    let preps = rng.gen_range(0..=k.min(3 - m.min(3)));
    if m == 0 && preps == 0 && k > 0 {
        let r = take_random(rng, &mut bits);
        let (q, _) = b.add(labels::n_z(), &[], &[r]);
        qubits.extend(q);
    }
    for _ in 0..preps {
        if qubits.len() >= 3 {
            break;
        }
        let r = take_random(rng, &mut bits);
        let (q, _) = b.add(labels::n_z(), &[], &[r]);
        qubits.extend(q);
    }
    for _ in 0..rng.gen_range(1..=4) {
        if qubits.is_empty() {
            break;
        }
        let choice = rng.gen_range(0..3);
        if choice == 2 && qubits.len() >= 2 {
            let i = rng.gen_range(0..qubits.len());
            let mut j = rng.gen_range(0..qubits.len() - 1);
            if j >= i {
                j += 1;
            }
            let (out, _) = b.add(labels::e(), &[qubits[i].clone(), qubits[j].clone()], &[]);
            qubits[i] = out[0].clone();
            qubits[j] = out[1].clone();
        } else {
            let i = rng.gen_range(0..qubits.len());
            let label = if choice == 0 { labels::h() } else { labels::t() };
            let (out, _) = b.add(label, &[qubits[i].clone()], &[]);
            qubits[i] = out[0].clone();
        }
    }
    let mut outputs = Vec::new();
    for q in qubits {
        if rng.gen_bool(0.5) {
            let (_, s) = b.add(labels::m_z(), &[q], &[]);
            bits.push(s[0].clone());
        } else {
            outputs.push(q);
        }
    }
    bits.shuffle(rng);
    for q in outputs {
        b.h_output(q);
    }
    for s in bits {
        b.v_output(s);
    }
    b.build().unwrap()
}

fn bit_from_pool(rng: &mut ChaCha8Rng, b: &mut GraphBuilder, pool: &mut Vec<Endpoint>) -> Endpoint {
    if pool.is_empty() {
        let (_, one) = b.add(labels::one(), &[], &[]);
        return one[0].clone();
    }
    let bit = take_random(rng, pool);
    if rng.gen_bool(0.5) {
        let (_, c) = b.add(labels::copy(), &[], &[bit]);
        pool.push(c[1].clone());
        c[0].clone()
    } else {
        bit
    }
}

/// A random MBQC graph: boundary or `|+⟩` qubits (three at most), entanglers,
/// adaptive X/Z corrections and `M(α)` measurements with `α ∈ {0, ±π/4}`.
pub fn random_m_graph(rng: &mut ChaCha8Rng) -> Dpg {
    let mut b = GraphBuilder::new();
    let m = rng.gen_range(0..=2);
    let mut qubits: Vec<Endpoint> = (0..m).map(|_| b.h_input()).collect();
    let mut bits: Vec<Endpoint> = (0..rng.gen_range(0..=2)).map(|_| b.v_input()).collect();
    for _ in 0..rng.gen_range(1..=3 - m) {
        let (q, _) = b.add(labels::n_x(), &[], &[]);
        qubits.extend(q);
    }
    for _ in 0..rng.gen_range(2..=6) {
        if qubits.is_empty() {
            break;
        }
        match rng.gen_range(0..4) {
            0 if qubits.len() >= 2 => {
                let i = rng.gen_range(0..qubits.len() - 1);
                let (out, _) = b.add(labels::e(), &[qubits[i].clone(), qubits[i + 1].clone()], &[]);
                qubits[i] = out[0].clone();
                qubits[i + 1] = out[1].clone();
            }
            1 | 2 => {
                let i = rng.gen_range(0..qubits.len());
                let r = bit_from_pool(rng, &mut b, &mut bits);
                let label = if rng.gen_bool(0.5) { labels::x() } else { labels::z() };
                let (out, _) = b.add(label, &[qubits[i].clone()], &[r]);
                qubits[i] = out[0].clone();
            }
            _ => {
                let i = rng.gen_range(0..qubits.len());
                let q = qubits.remove(i);
                let alpha = [Angle::ZERO, Angle::PI_4, Angle::MINUS_PI_4][rng.gen_range(0..3)];
                let r = bit_from_pool(rng, &mut b, &mut bits);
                let (_, s) = b.add(labels::m_alpha(alpha), &[q], &[r]);
                bits.push(s[0].clone());
            }
        }
    }
    for q in qubits {
        b.h_output(q);
    }
    bits.shuffle(rng);
    for s in bits {
        b.v_output(s);
    }
    b.build().unwrap()
}

/// A random 2×2 grid `[[a, b], [c, d]]` of composable instruments with at most `q`
/// qubits and `w` bits on every side.
pub fn random_grid(r: &mut ChaCha8Rng, q: usize, w: usize) -> [AdaptiveInstrument; 4] {
    let mut s = |max: usize| r.gen_range(0..=max);
    let (k1, l1, m1, n1) = (s(w), s(w), s(q), s(q));
    let (k2, l2, n2) = (s(w), s(w), s(q));
    let (l3, m3, n3) = (s(w), s(q), s(q));
    let (l4, n4) = (s(w), s(q));
    let a = random_instrument(r, k1, l1, m1, n1);
    let b = random_instrument(r, k2, l2, n1, n2);
    let c = random_instrument(r, l1, l3, m3, n3);
    let d = random_instrument(r, l2, l4, n3, n4);
    [a, b, c, d]
}

/// Distance between composing a grid row by row and column by column.
pub fn interchange_defect(g: &[AdaptiveInstrument; 4]) -> f64 {
    let [a, b, c, d] = g;
    let rows = compose_v(&compose_h(a, b).unwrap(), &compose_h(c, d).unwrap()).unwrap();
    let cols = compose_h(&compose_v(a, c).unwrap(), &compose_v(b, d).unwrap()).unwrap();
    instrument_distance(&rows, &cols).unwrap()
}

/// A random arity with at most two wires per side; fixed inputs are kept.
pub fn random_arity(rng: &mut ChaCha8Rng, h_in: Option<usize>, v_in: Option<usize>) -> Arity {
    let h = h_in.unwrap_or_else(|| rng.gen_range(0..=2));
    let v = v_in.unwrap_or_else(|| rng.gen_range(0..=2));
    Arity::new(h, rng.gen_range(0..=2), v, rng.gen_range(0..=2))
}

/// A random generic graph with a random boundary; fixed inputs are kept.
pub fn random_graph(rng: &mut ChaCha8Rng, h_in: Option<usize>, v_in: Option<usize>, size: usize, prefix: &str) -> Dpg {
    let a = random_arity(rng, h_in, v_in);
    random_dpg(rng, a, size, prefix)
}

/// A dictionary sending every label of `g` to a random graph over labels with prefix `prefix`.
pub fn random_dictionary(rng: &mut ChaCha8Rng, g: &Dpg, prefix: &str) -> GadgetDictionary {
    let mut d = GadgetDictionary::new();
    for label in g.labels() {
        let size = rng.gen_range(0..=3);
        d.insert(label.clone(), random_dpg(rng, label.arity(), size, prefix)).unwrap();
    }
    d
}

/// A dictionary for every label produced by `d`, over labels with prefix `prefix`.
pub fn random_second_dictionary(rng: &mut ChaCha8Rng, d: &GadgetDictionary, prefix: &str) -> GadgetDictionary {
    let mut out = GadgetDictionary::new();
    for gadget in d.entries().values() {
        for (l, h) in random_dictionary(rng, gadget, prefix).entries() {
            if out.get(l).is_none() {
                out.insert(l.clone(), h.clone()).unwrap();
            }
        }
    }
    out
}
