//! The gadget library: small graphs implementing gates, states and Boolean
//! functions in the adaptive models.

use crate::dpg::{compose_h, Dpg, Endpoint, GraphBuilder};
use crate::error::{unknown, Error, Result};
use crate::quantum::Angle;

use super::labels as l;
use super::Model;

/// `NOT r = r ⊕ 1` in `B⊕`: one v-input, one v-output.
pub fn not_gate() -> Dpg {
    let mut b = GraphBuilder::new();
    let r = b.v_input();
    let out = not_into(&mut b, r);
    b.v_output(out);
    b.build().expect("valid gadget")
}

/// The constant 0 in `B⊕`: `NOT 1`.
pub fn zero() -> Dpg {
    let mut b = GraphBuilder::new();
    let z = zero_into(&mut b);
    b.v_output(z);
    b.build().expect("valid gadget")
}

/// `AND(a, b) = NOT(OR(NOT a, NOT b))` in `B`.
pub fn and_b() -> Dpg {
    let mut b = GraphBuilder::new();
    let x = b.v_input();
    let y = b.v_input();
    let nx = not_into(&mut b, x);
    let ny = not_into(&mut b, y);
    let (_, o) = b.add(l::or(), &[], &[nx, ny]);
    let out = not_into(&mut b, o[0].clone());
    b.v_output(out);
    b.build().expect("valid gadget")
}

/// Adds `r ⊕ 1` and returns its output.
pub(crate) fn not_into(b: &mut GraphBuilder, r: Endpoint) -> Endpoint {
    let (_, one) = b.add(l::one(), &[], &[]);
    let (_, o) = b.add(l::xor(), &[], &[r, one[0].clone()]);
    o[0].clone()
}

/// Adds the constant 0 and returns its output.
pub(crate) fn zero_into(b: &mut GraphBuilder) -> Endpoint {
    let (_, one) = b.add(l::one(), &[], &[]);
    not_into(b, one[0].clone())
}

/// Adds `a ⊕ b` and returns its output.
pub(crate) fn xor_into(b: &mut GraphBuilder, x: Endpoint, y: Endpoint) -> Endpoint {
    let (_, o) = b.add(l::xor(), &[], &[x, y]);
    o[0].clone()
}

/// Adds a copy and returns both outputs.
pub(crate) fn copy_into(b: &mut GraphBuilder, x: Endpoint) -> (Endpoint, Endpoint) {
    let (_, o) = b.add(l::copy(), &[], &[x]);
    (o[0].clone(), o[1].clone())
}

/// The `J(α) = H·diag(1, e^{iα})` gadget in `M`: prepare `|+⟩`, entangle,
/// measure the input qubit at angle `−α`, X-correct the output.
pub fn j(alpha: Angle) -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let out = j_into(&mut b, alpha, q);
    b.h_output(out);
    b.build().expect("valid gadget")
}

pub(crate) fn j_into(b: &mut GraphBuilder, alpha: Angle, q: Endpoint) -> Endpoint {
    let (a, _) = b.add(l::n_x(), &[], &[]);
    let (e, _) = b.add(l::e(), &[q, a[0].clone()], &[]);
    let (_, one) = b.add(l::one(), &[], &[]);
    let (_, s) = b.add(l::m_alpha(alpha), &[e[0].clone()], &[one[0].clone()]);
    let (o, _) = b.add(l::x(), &[e[1].clone()], &[s[0].clone()]);
    o[0].clone()
}

/// The T gate in `M[π/4]` as `J(π/4)` followed by `J(0)`.
pub fn t_m() -> Dpg {
    compose_h(&j(Angle::PI_4), &j(Angle::ZERO)).expect("matching arities")
}

/// Teleportation in `M`: two `J(0)` steps with the Pauli corrections deferred to the end.
pub fn teleport() -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let (a1, _) = b.add(l::n_x(), &[], &[]);
    let (el, _) = b.add(l::e(), &[q, a1[0].clone()], &[]);
    let (a2, _) = b.add(l::n_x(), &[], &[]);
    let (em, _) = b.add(l::e(), &[el[1].clone(), a2[0].clone()], &[]);
    let (_, one1) = b.add(l::one(), &[], &[]);
    let (_, s1) = b.add(l::m_alpha(Angle::ZERO), &[el[0].clone()], &[one1[0].clone()]);
    let (_, one2) = b.add(l::one(), &[], &[]);
    let (_, s2) = b.add(l::m_alpha(Angle::ZERO), &[em[0].clone()], &[one2[0].clone()]);
    let (z, _) = b.add(l::z(), &[em[1].clone()], &[s1[0].clone()]);
    let (x, _) = b.add(l::x(), &[z[0].clone()], &[s2[0].clone()]);
    b.h_output(x[0].clone());
    b.build().expect("valid gadget")
}

/// The T gate in `Q` by magic-state injection: the ancilla `H·T|+⟩` is
/// entangled with the input, measured in the X basis, and the outcome drives
/// an S correction.
pub fn t_gadget() -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let out = t_gadget_into(&mut b, q);
    b.h_output(out);
    b.build().expect("valid gadget")
}

pub(crate) fn t_gadget_into(b: &mut GraphBuilder, q: Endpoint) -> Endpoint {
    let (magic, _) = b.add(l::n_t(), &[], &[]);
    let h1 = h_correction_into(b, magic[0].clone());
    let (e, _) = b.add(l::e(), &[h1, q], &[]);
    let h2 = h_correction_into(b, e[0].clone());
    let (m, t) = b.add(l::mnd_z(), &[h2], &[]);
    b.add(l::tr(), &[m[0].clone()], &[]);
    let (o, _) = b.add(l::s(), &[e[1].clone()], &[t[0].clone()]);
    o[0].clone()
}

/// Adds an unconditional Hadamard `H_c` fed by the 1-state.
pub(crate) fn h_correction_into(b: &mut GraphBuilder, q: Endpoint) -> Endpoint {
    let (_, one) = b.add(l::one(), &[], &[]);
    let (o, _) = b.add(l::h_c(), &[q], &[one[0].clone()]);
    o[0].clone()
}

/// The Hadamard gate in `P̃`: `|+⟩` from `N_{X/T}(0)`, entangle, X-measure the input, X-correct.
pub fn h_mbpc() -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let out = h_mbpc_into(&mut b, q);
    b.h_output(out);
    b.build().expect("valid gadget")
}

pub(crate) fn h_mbpc_into(b: &mut GraphBuilder, q: Endpoint) -> Endpoint {
    let plus = plus_mbpc_into(b);
    let (e, _) = b.add(l::e(), &[q, plus], &[]);
    let z = zero_into(b);
    let (_, s) = b.add(l::m_xy(), &[e[0].clone()], &[z]);
    let (o, _) = b.add(l::x(), &[e[1].clone()], &[s[0].clone()]);
    o[0].clone()
}

/// Adds `|+⟩ = N_{X/T}(0)`.
pub(crate) fn plus_mbpc_into(b: &mut GraphBuilder) -> Endpoint {
    let z = zero_into(b);
    let (a, _) = b.add(l::n_xt(), &[], &[z]);
    a[0].clone()
}

/// Adds an X/Y measurement with setting 0 (an X measurement).
fn measure_x_mbpc_into(b: &mut GraphBuilder, q: Endpoint) -> Endpoint {
    let z = zero_into(b);
    let (_, s) = b.add(l::m_xy(), &[q], &[z]);
    s[0].clone()
}

/// The `n`-qubit GHZ state in `M`: `|+⟩` on every qubit, then for each
/// `j ≥ 2` an entangler between qubits `j−1` and `j` followed by `J(0) = H` on qubit `j`.
pub fn ghz_m(n: usize) -> Result<Dpg> {
    ghz_with(n, Model::M)
}

/// The `n`-qubit GHZ state in `P̃`, using [`h_mbpc`] for the Hadamards.
pub fn ghz_ptilde(n: usize) -> Result<Dpg> {
    ghz_with(n, Model::PTilde)
}

fn ghz_with(n: usize, model: Model) -> Result<Dpg> {
    if n == 0 {
        return Err(Error::Invalid("GHZ needs at least one qubit".into()));
    }
    let mut b = GraphBuilder::new();
    let qs = ghz_into(&mut b, n, model);
    for q in qs {
        b.h_output(q);
    }
    b.build()
}

pub(crate) fn ghz_into(b: &mut GraphBuilder, n: usize, model: Model) -> Vec<Endpoint> {
    let mut qs: Vec<Endpoint> = (0..n)
        .map(|_| match model {
            Model::PTilde => plus_mbpc_into(b),
            _ => b.add(l::n_x(), &[], &[]).0[0].clone(),
        })
        .collect();
    for jx in 1..n {
        let (e, _) = b.add(l::e(), &[qs[jx - 1].clone(), qs[jx].clone()], &[]);
        qs[jx - 1] = e[0].clone();
        qs[jx] = match model {
            Model::PTilde => h_mbpc_into(b, e[1].clone()),
            _ => j_into(b, Angle::ZERO, e[1].clone()),
        };
    }
    qs
}

/// The OR-gadget in `P̃` as drawn: settings `a`, `b`, `a ⊕ b` for X/Y
/// measurements on a GHZ(3) state, outcome parity followed by a NOT.
///
/// The parity of the three outcomes is `OR(a, b)`, so the drawn gadget
/// computes `NOR(a, b)`.
pub fn or_gadget() -> Dpg {
    or_like(true)
}

/// The OR-gadget without the final NOT; computes `OR(a, b)`.
pub fn or_parity_gadget() -> Dpg {
    or_like(false)
}

fn or_like(negate: bool) -> Dpg {
    let mut b = GraphBuilder::new();
    let x = b.v_input();
    let y = b.v_input();
    let out = or_into(&mut b, x, y, negate);
    b.v_output(out);
    b.build().expect("valid gadget")
}

pub(crate) fn or_into(b: &mut GraphBuilder, x: Endpoint, y: Endpoint, negate: bool) -> Endpoint {
    let g = ghz_into(b, 3, Model::PTilde);
    let (x1, x2) = copy_into(b, x);
    let (y1, y2) = copy_into(b, y);
    let (_, su) = b.add(l::m_xy(), &[g[0].clone()], &[x1]);
    let (_, sl) = b.add(l::m_xy(), &[g[1].clone()], &[y1]);
    let third = xor_into(b, x2, y2);
    let (_, sr) = b.add(l::m_xy(), &[g[2].clone()], &[third]);
    let p = xor_into(b, su[0].clone(), sl[0].clone());
    let p = xor_into(b, p, sr[0].clone());
    if negate {
        not_into(b, p)
    } else {
        p
    }
}

/// `AND(a, b)` in `P̃`: the drawn OR-gadget applied to `NOT a`, `NOT b`.
pub fn and_ptilde() -> Dpg {
    let mut b = GraphBuilder::new();
    let x = b.v_input();
    let y = b.v_input();
    let out = and_ptilde_into(&mut b, x, y);
    b.v_output(out);
    b.build().expect("valid gadget")
}

pub(crate) fn and_ptilde_into(b: &mut GraphBuilder, x: Endpoint, y: Endpoint) -> Endpoint {
    let nx = not_into(b, x);
    let ny = not_into(b, y);
    or_into(b, nx, ny, true)
}

/// The teleported `J(π/4)` gadget in `P̃`.
///
/// Three X/Y measurements on a chain `input – |+⟩ – T|+⟩ – |+⟩`; the third
/// measurement setting is the second outcome. With outcomes `s₁, s₂, s₃`
/// the output before correction is `X^{s₃} Z^{s₂} X^{s₁} J(π/4) ψ`, corrected
/// by `Z^{s₂}` and `X^{s₁ ⊕ s₃}`.
pub fn teleported_j_pi4() -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let out = teleported_j_pi4_into(&mut b, q);
    b.h_output(out);
    b.build().expect("valid gadget")
}

pub(crate) fn teleported_j_pi4_into(b: &mut GraphBuilder, q: Endpoint) -> Endpoint {
    let nu = plus_mbpc_into(b);
    let (e1, _) = b.add(l::e(), &[q, nu], &[]);
    let s1 = measure_x_mbpc_into(b, e1[0].clone());
    let (_, one) = b.add(l::one(), &[], &[]);
    let (nm, _) = b.add(l::n_xt(), &[], &[one[0].clone()]);
    let (e2, _) = b.add(l::e(), &[e1[1].clone(), nm[0].clone()], &[]);
    let s2 = measure_x_mbpc_into(b, e2[0].clone());
    let nd = plus_mbpc_into(b);
    let (e3, _) = b.add(l::e(), &[e2[1].clone(), nd], &[]);
    let (s2a, s2b) = copy_into(b, s2);
    let (_, s3) = b.add(l::m_xy(), &[e3[0].clone()], &[s2a]);
    let zq = z_ptilde_into(b, e3[1].clone(), s2b);
    let xbit = xor_into(b, s1, s3[0].clone());
    let (o, _) = b.add(l::x(), &[zq], &[xbit]);
    o[0].clone()
}

/// The teleported `J(π/4)` gadget with the corrections as drawn: `Z^{s₁}`
/// followed by `X^{(s₁ ∧ s₂) ⊕ s₃ ⊕ 0 ⊕ s₂}`, the AND realized by [`and_ptilde`].
pub fn teleported_j_pi4_as_drawn() -> Dpg {
    let mut b = GraphBuilder::new();
    let q = b.h_input();
    let nu = plus_mbpc_into(&mut b);
    let (e1, _) = b.add(l::e(), &[q, nu], &[]);
    let s1 = measure_x_mbpc_into(&mut b, e1[0].clone());
    let (_, one) = b.add(l::one(), &[], &[]);
    let (nm, _) = b.add(l::n_xt(), &[], &[one[0].clone()]);
    let (e2, _) = b.add(l::e(), &[e1[1].clone(), nm[0].clone()], &[]);
    let s2 = measure_x_mbpc_into(&mut b, e2[0].clone());
    let nd = plus_mbpc_into(&mut b);
    let (e3, _) = b.add(l::e(), &[e2[1].clone(), nd], &[]);
    let (s1a, s1b) = copy_into(&mut b, s1);
    let (s2a, s2rest) = copy_into(&mut b, s2);
    let (s2b, s2c) = copy_into(&mut b, s2rest);
    let (_, s3) = b.add(l::m_xy(), &[e3[0].clone()], &[s2a]);
    let conj = and_ptilde_into(&mut b, s1a, s2b);
    let t = xor_into(&mut b, conj, s3[0].clone());
    let z = zero_into(&mut b);
    let t = xor_into(&mut b, t, z);
    let xbit = xor_into(&mut b, t, s2c);
    let zq = z_ptilde_into(&mut b, e3[1].clone(), s1b);
    let (o, _) = b.add(l::x(), &[zq], &[xbit]);
    b.h_output(o[0].clone());
    b.build().expect("valid gadget")
}

/// Adds `Z^r = S^r S^r` in `P̃`.
pub(crate) fn z_ptilde_into(b: &mut GraphBuilder, q: Endpoint, r: Endpoint) -> Endpoint {
    let (r1, r2) = copy_into(b, r);
    let (o, _) = b.add(l::s(), &[q], &[r1]);
    let (o, _) = b.add(l::s(), &[o[0].clone()], &[r2]);
    o[0].clone()
}

/// Parses an angle given as a multiple of π: `0`, `pi/4`, `-π/4`, `1/4`, `3pi/8`.
pub fn parse_angle(text: &str) -> Result<Angle> {
    let t = text.trim().replace('π', "pi").replace(' ', "");
    let bad = || Error::Invalid(format!("cannot parse angle {text:?}"));
    let (num_part, den) = match t.split_once('/') {
        Some((a, d)) => (a.to_string(), d.parse::<i64>().map_err(|_| bad())?),
        None => (t.clone(), 1),
    };
    let num_part = num_part.trim_end_matches("*pi").trim_end_matches("pi");
    let num = match num_part {
        "" => 1,
        "-" => -1,
        "+" => 1,
        other => other.parse::<i64>().map_err(|_| bad())?,
    };
    Angle::new(num, den)
}

/// Gadget names understood by [`gadget`].
pub const GADGET_NAMES: [&str; 15] = [
    "J(alpha)",
    "T",
    "teleport",
    "T-gadget",
    "H-mbpc",
    "GHZ(n)",
    "GHZ-P(n)",
    "OR",
    "OR-parity",
    "teleported-J(pi/4)",
    "NOT",
    "ZERO",
    "AND",
    "AND-P",
    "XOR",
];

fn argument<'a>(name: &'a str, head: &str) -> Option<&'a str> {
    name.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

/// A gadget by name, together with the smallest model containing its labels.
///
/// Parameterized names take their argument in parentheses: `J(pi/4)`, `GHZ(3)`.
pub fn gadget(name: &str) -> Result<(Model, Dpg)> {
    let key = name.trim();
    if let Some(a) = argument(key, "J") {
        let alpha = parse_angle(a)?;
        let model = if [Angle::ZERO, Angle::PI_4, Angle::MINUS_PI_4].contains(&alpha) {
            Model::MPi4
        } else {
            Model::M
        };
        return Ok((model, j(alpha)));
    }
    if let Some(n) = argument(key, "GHZ") {
        let n = n.parse().map_err(|_| Error::Invalid(format!("bad GHZ size in {name:?}")))?;
        return Ok((Model::MPi4, ghz_m(n)?));
    }
    if let Some(n) = argument(key, "GHZ-P") {
        let n = n.parse().map_err(|_| Error::Invalid(format!("bad GHZ size in {name:?}")))?;
        return Ok((Model::PTilde, ghz_ptilde(n)?));
    }
    let found = match key.to_ascii_lowercase().replace('π', "pi").as_str() {
        "t" => (Model::MPi4, t_m()),
        "teleport" => (Model::MPi4, teleport()),
        "t-gadget" => (Model::Q, t_gadget()),
        "h-mbpc" => (Model::PTilde, h_mbpc()),
        "or" => (Model::PTilde, or_gadget()),
        "or-parity" => (Model::PTilde, or_parity_gadget()),
        "teleported-j(pi/4)" => (Model::PTilde, teleported_j_pi4()),
        "not" => (Model::BXor, not_gate()),
        "zero" => (Model::BXor, zero()),
        "and" => (Model::B, and_b()),
        "and-p" => (Model::PTilde, and_ptilde()),
        "xor" => (Model::BXor, Dpg::single(l::xor())),
        _ => return Err(unknown("gadget", name)),
    };
    Ok(found)
}
