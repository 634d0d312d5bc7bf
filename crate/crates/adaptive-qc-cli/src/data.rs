//! JSON documents other than graphs: instruments, states, scenarios and
//! bound-check inputs.

use std::collections::BTreeMap;

use adaptive_qc::contextuality::{Adaptivity, AffineMap, BellInstrumentSpec, BellScenario, BooleanFunction};
use adaptive_qc::inst::{bitstring, parse_bitstring, AdaptiveInstrument};
use adaptive_qc::lp::rationalize;
use adaptive_qc::contextuality::projective_instrument;
use adaptive_qc::quantum::{ghz_density, Angle, ComplexMatrix, DensityMatrix, ProjectorKind, C64};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::graph_file::AngleJson;
use crate::CliError;

/// A complex number as an `[re, im]` pair.
pub type ComplexJson = [f64; 2];

fn complex(z: &C64) -> ComplexJson {
    [z.re, z.im]
}

/// A complex matrix as row-major nested arrays of `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Vec<ComplexJson>>);

impl MatrixJson {
    pub fn from_matrix(a: &ComplexMatrix) -> MatrixJson {
        MatrixJson((0..a.nrows()).map(|i| (0..a.ncols()).map(|j| complex(&a[(i, j)])).collect()).collect())
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        let r = self.0.len();
        let c = self.0.first().map_or(0, Vec::len);
        if self.0.iter().any(|row| row.len() != c) {
            return Err(CliError::Input("matrix rows have inconsistent lengths".into()));
        }
        Ok(ComplexMatrix::from_fn(r, c, |i, j| C64::new(self.0[i][j][0], self.0[i][j][1])))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub a: String,
    pub b: String,
    pub superoperator: MatrixJson,
}

/// An instrument `(k; m → n; ℓ)` as a list of superoperator records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstrumentJson {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub entries: Vec<EntryJson>,
}

impl InstrumentJson {
    pub fn from_instrument(inst: &AdaptiveInstrument) -> InstrumentJson {
        InstrumentJson {
            k: inst.k(),
            l: inst.l(),
            m: inst.m(),
            n: inst.n(),
            entries: inst
                .table()
                .iter()
                .map(|(&(a, b), phi)| EntryJson {
                    a: bitstring(a, inst.k()),
                    b: bitstring(b, inst.l()),
                    superoperator: MatrixJson::from_matrix(phi.superop()),
                })
                .collect(),
        }
    }
}

/// A state file: a density matrix or a vector of amplitudes, both as `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateJson {
    Density { density: MatrixJson },
    Amplitudes { amplitudes: Vec<ComplexJson> },
}

impl StateJson {
    pub fn to_state(&self) -> Result<DensityMatrix, CliError> {
        match self {
            StateJson::Density { density } => Ok(DensityMatrix::new(density.to_matrix()?)?),
            StateJson::Amplitudes { amplitudes } => {
                let v = ComplexMatrix::from_fn(amplitudes.len(), 1, |i, _| C64::new(amplitudes[i][0], amplitudes[i][1]));
                Ok(DensityMatrix::pure(&v)?)
            }
        }
    }
}

/// Parses `ghz:N`, `zero:N`, `mixed:N`, or reads a state file.
pub fn state_from_arg(arg: &str) -> Result<DensityMatrix, CliError> {
    let size = |s: &str| s.parse::<usize>().map_err(|_| CliError::Input(format!("bad qubit count in {arg:?}")));
    if let Some(n) = arg.strip_prefix("ghz:") {
        return Ok(ghz_density(size(n)?)?);
    }
    if let Some(n) = arg.strip_prefix("zero:") {
        return Ok(DensityMatrix::zero_state(size(n)?));
    }
    if let Some(n) = arg.strip_prefix("mixed:") {
        return Ok(DensityMatrix::maximally_mixed(size(n)?));
    }
    let doc: StateJson = serde_json::from_str(&crate::read_input(arg)?)?;
    doc.to_state()
}

fn state_from_value(v: &Value) -> Result<DensityMatrix, CliError> {
    match v {
        Value::String(s) => state_from_arg(s),
        other => serde_json::from_value::<StateJson>(other.clone())?.to_state(),
    }
}

/// A scenario file: `{"m": 2, "rows": [[...], ...]}` with entries given as
/// numbers or as fraction strings such as `"1/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioJson {
    pub m: usize,
    pub rows: Vec<Vec<Value>>,
}

fn parse_fraction(s: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Input(format!("cannot parse probability {s:?}"));
    let (n, d) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn exact_value(v: &Value) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => parse_fraction(s),
        Value::Number(x) => Ok(rationalize(x.as_f64().ok_or_else(|| CliError::Input("bad number".into()))?)?),
        other => Err(CliError::Input(format!("probability must be a number or a fraction string, got {other}"))),
    }
}

impl ScenarioJson {
    pub fn to_f64(&self) -> Result<BellScenario<f64>, CliError> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| match v {
                        Value::Number(x) => x.as_f64().ok_or_else(|| CliError::Input("bad number".into())),
                        _ => Ok(num_traits::ToPrimitive::to_f64(&exact_value(v)?).unwrap_or(f64::NAN)),
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BellScenario::new(self.m, rows)?)
    }

    pub fn to_exact(&self) -> Result<BellScenario<BigRational>, CliError> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(exact_value).collect())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BellScenario::new(self.m, rows)?)
    }

    pub fn from_scenario(sc: &BellScenario<f64>) -> ScenarioJson {
        ScenarioJson {
            m: sc.m(),
            rows: sc.rows().iter().map(|r| r.iter().map(|p| Value::from(*p)).collect()).collect(),
        }
    }
}

/// A single-qubit measurement basis: `"X"`, `"Y"`, `"Z"` or `{"alpha": angle}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisJson {
    Named(String),
    Alpha { alpha: AngleJson },
}

impl BasisJson {
    fn kind(&self) -> Result<ProjectorKind, CliError> {
        match self {
            BasisJson::Named(n) => match n.as_str() {
                "X" => Ok(ProjectorKind::XTwist(false)),
                "Y" => Ok(ProjectorKind::XTwist(true)),
                "Z" => Ok(ProjectorKind::Z),
                other => Err(CliError::Input(format!("unknown basis {other:?}"))),
            },
            BasisJson::Alpha { alpha } => Ok(ProjectorKind::Alpha(Angle::new(alpha.pi_num, alpha.pi_den)?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartyJson {
    /// Bases measured at setting 0 and 1.
    pub bases: [BasisJson; 2],
    /// Earlier parties (0-based) whose outcomes are XORed into the setting.
    #[serde(default)]
    pub earlier: Vec<usize>,
    #[serde(default)]
    pub constant: bool,
}

/// An affine map given by one input-mask bit string per output bit and a constant bit string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineJson {
    pub rows: Vec<String>,
    #[serde(default)]
    pub constant: Option<String>,
    /// Input bits; required when `rows` is empty.
    #[serde(default)]
    pub k: Option<usize>,
}

impl AffineJson {
    fn to_map(&self) -> Result<AffineMap, CliError> {
        let mut k = self.k;
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let (mask, len) = parse_bitstring(r)?;
            if *k.get_or_insert(len) != len {
                return Err(CliError::Input("affine map rows have different lengths".into()));
            }
            rows.push(mask);
        }
        let k = k.ok_or_else(|| CliError::Input("affine map needs rows or k".into()))?;
        let constant = match &self.constant {
            None => 0,
            Some(c) => {
                let (v, len) = parse_bitstring(c)?;
                if len != rows.len() {
                    return Err(CliError::Input("constant length differs from the number of rows".into()));
                }
                v
            }
        };
        Ok(AffineMap::new(k, rows.len(), rows, constant)?)
    }
}

/// A Boolean function given by name (`OR`, `AND`) or by its table of output bit strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionJson {
    Named(String),
    Table { table: Vec<String> },
}

impl FunctionJson {
    fn to_function(&self) -> Result<BooleanFunction, CliError> {
        match self {
            FunctionJson::Named(n) => match n.to_ascii_uppercase().as_str() {
                "OR" => Ok(BooleanFunction::or()),
                "AND" => Ok(BooleanFunction::and()),
                _ => Err(CliError::Input(format!("unknown function {n:?}"))),
            },
            FunctionJson::Table { table } => {
                let parsed = table.iter().map(|t| parse_bitstring(t)).collect::<Result<Vec<_>, _>>()?;
                let l = parsed.first().map_or(0, |p| p.1);
                if parsed.iter().any(|p| p.1 != l) || !table.len().is_power_of_two() {
                    return Err(CliError::Input("function table must have 2^k entries of equal length".into()));
                }
                let k = table.len().trailing_zeros() as usize;
                Ok(BooleanFunction::new(k, l, parsed.into_iter().map(|p| p.0).collect())?)
            }
        }
    }
}

/// Input of `bound-check`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSpecJson {
    /// A state argument (`ghz:N`, `zero:N`, `mixed:N`, a file path) or an inline state.
    pub state: Value,
    pub parties: Vec<PartyJson>,
    /// Settings map; the identity when absent.
    #[serde(default)]
    pub tau: Option<AffineJson>,
    pub h: AffineJson,
    pub f: FunctionJson,
}

/// Parsed `bound-check` input.
pub struct BoundSpec {
    pub state: DensityMatrix,
    pub spec: BellInstrumentSpec,
    pub tau: AffineMap,
    pub h: AffineMap,
    pub f: BooleanFunction,
}

impl BoundSpecJson {
    pub fn parse(&self) -> Result<BoundSpec, CliError> {
        let mut bases = Vec::new();
        let mut adaptivity = Vec::new();
        for p in &self.parties {
            bases.push(projective_instrument([p.bases[0].kind()?, p.bases[1].kind()?])?);
            adaptivity.push(Adaptivity { earlier: p.earlier.clone(), constant: p.constant });
        }
        let spec = BellInstrumentSpec::new(bases, adaptivity)?;
        let tau = match &self.tau {
            Some(t) => t.to_map()?,
            None => AffineMap::identity(spec.m()),
        };
        Ok(BoundSpec {
            state: state_from_value(&self.state)?,
            spec,
            tau,
            h: self.h.to_map()?,
            f: self.f.to_function()?,
        })
    }
}

/// A distribution over bit strings.
pub fn distribution_json(dist: &[f64], bits: usize) -> BTreeMap<String, f64> {
    dist.iter().enumerate().map(|(b, p)| (bitstring(b, bits), *p)).collect()
}
