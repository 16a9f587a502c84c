//! JSON documents for operators, subspaces, maps, unitary families and
//! reports.
//!
//! Complex entries are `[re, im]` pairs and matrices are lists of rows.
//! Parse errors carry a JSON pointer to the offending value.
//!
//! ```json
//! {"dims": [2], "matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::catalog::{self, RepolarizerParams};
use crate::consistency::UnitaryFamily;
use crate::dynmap::SubsystemMap;
use crate::operator::{Operator, SpaceLayout};
use crate::opspace::OperatorSubspace;
use crate::{CMatrix, Error, Result, ToleranceConfig, C64};

/// Largest total Hilbert-space dimension accepted from a document.
pub const MAX_TOTAL_DIM: usize = 64;
/// Largest magnitude accepted for a matrix entry.
pub const MAX_ENTRY: f64 = 1e150;
/// Largest number of operators in any list.
pub const MAX_LIST: usize = 4096;

fn ptr(base: &str, key: impl std::fmt::Display) -> String {
    format!("{base}/{key}")
}

fn object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::schema(at, "expected an object"))
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::schema(at, "expected an array"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::schema(at, format!("missing field \"{key}\"")))
}

fn number(v: &Value, at: &str) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| Error::schema(at, "expected a number"))?;
    if !x.is_finite() || x.abs() > MAX_ENTRY {
        return Err(Error::schema(at, format!("number out of range (|x| must be <= {MAX_ENTRY:e})")));
    }
    Ok(x)
}

fn string<'a>(v: &'a Value, at: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::schema(at, "expected a string"))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], at: &str) -> Result<()> {
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::schema(&ptr(at, k), "unknown field"));
    }
    Ok(())
}

fn parse_dims(v: &Value, at: &str) -> Result<SpaceLayout> {
    let arr = array(v, at)?;
    if arr.is_empty() {
        return Err(Error::schema(at, "dims must be nonempty"));
    }
    let mut dims = Vec::with_capacity(arr.len());
    let mut total: usize = 1;
    for (i, d) in arr.iter().enumerate() {
        let at = ptr(at, i);
        let d = d.as_u64().ok_or_else(|| Error::schema(&at, "expected a positive integer"))?;
        if d == 0 {
            return Err(Error::schema(&at, "dimension must be at least 1"));
        }
        total = total.saturating_mul(d as usize);
        if total > MAX_TOTAL_DIM {
            return Err(Error::schema(&at, format!("total dimension exceeds {MAX_TOTAL_DIM}")));
        }
        dims.push(d as usize);
    }
    SpaceLayout::new(dims).map_err(|e| Error::schema(at, e.to_string()))
}

fn parse_complex(v: &Value, at: &str) -> Result<C64> {
    let pair = array(v, at)?;
    if pair.len() != 2 {
        return Err(Error::schema(at, "complex entries are [re, im] pairs"));
    }
    Ok(C64::new(number(&pair[0], &ptr(at, 0))?, number(&pair[1], &ptr(at, 1))?))
}

/// A `rows x cols` complex matrix given as a list of rows.
fn parse_matrix(v: &Value, rows: usize, cols: usize, at: &str) -> Result<CMatrix> {
    let r = array(v, at)?;
    if r.len() != rows {
        return Err(Error::schema(at, format!("expected {rows} rows, found {}", r.len())));
    }
    let mut m = CMatrix::zeros(rows, cols);
    for (i, row) in r.iter().enumerate() {
        let at_row = ptr(at, i);
        let entries = array(row, &at_row)?;
        if entries.len() != cols {
            return Err(Error::schema(&at_row, format!("expected {cols} entries, found {}", entries.len())));
        }
        for (j, e) in entries.iter().enumerate() {
            m[(i, j)] = parse_complex(e, &ptr(&at_row, j))?;
        }
    }
    Ok(m)
}

fn emit_complex(z: C64) -> Value {
    json!([z.re, z.im])
}

fn emit_matrix(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| emit_complex(m[(i, j)])).collect()))
            .collect(),
    )
}

fn emit_dims(layout: &SpaceLayout) -> Value {
    json!(layout.dims())
}

fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::schema("", format!("invalid JSON: {e}")))
}

// ---------------------------------------------------------------------------
// Operators

fn parse_operator_body(obj: &Map<String, Value>, layout: &SpaceLayout, at: &str) -> Result<Operator> {
    let n = layout.total();
    let m = parse_matrix(field(obj, "matrix", at)?, n, n, &ptr(at, "matrix"))?;
    Operator::new(layout.clone(), m).map_err(|e| Error::schema(at, e.to_string()))
}

/// `{"dims": [...], "matrix": [[[re, im], ...], ...], "labels"?: [...]}`.
pub fn parse_operator_value(v: &Value, at: &str) -> Result<Operator> {
    let obj = object(v, at)?;
    reject_unknown(obj, &["dims", "matrix", "labels"], at)?;
    let mut layout = parse_dims(field(obj, "dims", at)?, &ptr(at, "dims"))?;
    if let Some(l) = obj.get("labels") {
        let at_l = ptr(at, "labels");
        let labels = array(l, &at_l)?
            .iter()
            .enumerate()
            .map(|(i, s)| string(s, &ptr(&at_l, i)).map(str::to_owned))
            .collect::<Result<Vec<_>>>()?;
        layout = layout.with_labels(labels).map_err(|e| Error::schema(&at_l, e.to_string()))?;
    }
    parse_operator_body(obj, &layout, at)
}

pub fn parse_operator(text: &str) -> Result<Operator> {
    parse_operator_value(&parse_text(text)?, "")
}

pub fn emit_operator(op: &Operator) -> Value {
    let mut obj = Map::new();
    obj.insert("dims".into(), emit_dims(op.layout()));
    if let Some(labels) = op.layout().labels() {
        obj.insert("labels".into(), json!(labels));
    }
    obj.insert("matrix".into(), emit_matrix(op.matrix()));
    Value::Object(obj)
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        emit_operator(self).serialize(s)
    }
}

// ---------------------------------------------------------------------------
// Subspaces

fn parse_matrix_list(v: &Value, layout: &SpaceLayout, at: &str) -> Result<Vec<Operator>> {
    let list = array(v, at)?;
    if list.len() > MAX_LIST {
        return Err(Error::schema(at, format!("more than {MAX_LIST} entries")));
    }
    let n = layout.total();
    list.iter()
        .enumerate()
        .map(|(i, m)| {
            let at = ptr(at, i);
            Operator::new(layout.clone(), parse_matrix(m, n, n, &at)?).map_err(|e| Error::schema(&at, e.to_string()))
        })
        .collect()
}

/// `{"dims": [...], "basis"?: [matrix...], "generators"?: [matrix...]}`. A
/// supplied basis must be orthonormal and is kept verbatim; otherwise the
/// basis is computed from the generators.
pub fn parse_subspace_value(v: &Value, at: &str, tol: ToleranceConfig) -> Result<OperatorSubspace> {
    let obj = object(v, at)?;
    reject_unknown(obj, &["dims", "basis", "generators"], at)?;
    let layout = parse_dims(field(obj, "dims", at)?, &ptr(at, "dims"))?;
    let basis = obj.get("basis").map(|b| parse_matrix_list(b, &layout, &ptr(at, "basis"))).transpose()?;
    let gens = obj
        .get("generators")
        .map(|g| parse_matrix_list(g, &layout, &ptr(at, "generators")))
        .transpose()?;
    match (basis, gens) {
        (Some(basis), gens) => OperatorSubspace::from_orthonormal_basis(layout, basis, gens, tol)
            .map_err(|e| Error::schema(&ptr(at, "basis"), e.to_string())),
        (None, Some(gens)) if !gens.is_empty() => OperatorSubspace::span_from_generators(&gens, tol)
            .map_err(|e| Error::schema(&ptr(at, "generators"), e.to_string())),
        (None, Some(_)) => Err(Error::schema(&ptr(at, "generators"), "generator list is empty")),
        (None, None) => Err(Error::schema(at, "subspace needs \"basis\" or \"generators\"")),
    }
}

pub fn parse_subspace(text: &str, tol: ToleranceConfig) -> Result<OperatorSubspace> {
    parse_subspace_value(&parse_text(text)?, "", tol)
}

pub fn emit_subspace(v: &OperatorSubspace) -> Value {
    json!({
        "dims": emit_dims(v.layout()),
        "basis": v.basis().iter().map(|b| emit_matrix(b.matrix())).collect::<Vec<_>>(),
        "generators": v.generators().iter().map(|g| emit_matrix(g.matrix())).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// Maps

/// Built-in maps from the catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    Identity { d: usize },
    Transpose { d: usize },
    Repolarizer { epsilon: f64 },
    Depolarizer { epsilon: f64 },
    Example1 { t: f64 },
    AmplitudeDamping { gamma: f64 },
}

impl Builtin {
    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Identity { .. } => "identity",
            Builtin::Transpose { .. } => "transpose",
            Builtin::Repolarizer { .. } => "repolarizer",
            Builtin::Depolarizer { .. } => "depolarizer",
            Builtin::Example1 { .. } => "example1",
            Builtin::AmplitudeDamping { .. } => "amplitude_damping",
        }
    }

    pub fn build(&self, tol: ToleranceConfig) -> Result<SubsystemMap> {
        let map = match *self {
            Builtin::Identity { d } => SubsystemMap::identity(d),
            Builtin::Transpose { d } => catalog::transpose_map(d),
            Builtin::Repolarizer { epsilon } => catalog::repolarizer(RepolarizerParams::new(epsilon)?),
            Builtin::Depolarizer { epsilon } => catalog::depolarizer(RepolarizerParams::new(epsilon)?),
            Builtin::Example1 { t } => catalog::example1_map(t),
            Builtin::AmplitudeDamping { gamma } => {
                SubsystemMap::from_kraus(&catalog::amplitude_damping_kraus(gamma)?)?.with_provenance("amplitude damping")
            }
        };
        Ok(map.with_tol(tol))
    }
}

/// A map document, keeping the form it was written in.
#[derive(Debug, Clone)]
pub enum MapSpec {
    Matrix(Box<SubsystemMap>),
    Kraus(Vec<Operator>),
    Builtin(Builtin),
}

impl MapSpec {
    pub fn build(&self, tol: ToleranceConfig) -> Result<SubsystemMap> {
        match self {
            MapSpec::Matrix(m) => Ok((**m).clone().with_tol(tol)),
            MapSpec::Kraus(k) => Ok(SubsystemMap::from_kraus(k)?.with_tol(tol)),
            MapSpec::Builtin(b) => b.build(tol),
        }
    }
}

const MAX_BUILTIN_DIM: u64 = 8;

fn parse_builtin(obj: &Map<String, Value>, at: &str) -> Result<Builtin> {
    let name = string(field(obj, "name", at)?, &ptr(at, "name"))?;
    let real = |key: &str| -> Result<f64> { number(field(obj, key, at)?, &ptr(at, key)) };
    let dim = || -> Result<usize> {
        match obj.get("d") {
            None => Ok(2),
            Some(v) => {
                let at = ptr(at, "d");
                let d = v.as_u64().ok_or_else(|| Error::schema(&at, "expected a positive integer"))?;
                if d == 0 || d > MAX_BUILTIN_DIM {
                    return Err(Error::schema(&at, format!("d must lie in 1..={MAX_BUILTIN_DIM}")));
                }
                Ok(d as usize)
            }
        }
    };
    let (b, allowed): (Builtin, &[&str]) = match name {
        "identity" => (Builtin::Identity { d: dim()? }, &["d"]),
        "transpose" => (Builtin::Transpose { d: dim()? }, &["d"]),
        "repolarizer" => (Builtin::Repolarizer { epsilon: real("epsilon")? }, &["epsilon"]),
        "depolarizer" => (Builtin::Depolarizer { epsilon: real("epsilon")? }, &["epsilon"]),
        "example1" => (Builtin::Example1 { t: real("t")? }, &["t"]),
        "amplitude_damping" => (Builtin::AmplitudeDamping { gamma: real("gamma")? }, &["gamma"]),
        other => return Err(Error::schema(&ptr(at, "name"), format!("unknown builtin map \"{other}\""))),
    };
    let mut keys = vec!["kind", "name"];
    keys.extend_from_slice(allowed);
    reject_unknown(obj, &keys, at)?;
    match b {
        Builtin::Repolarizer { epsilon } | Builtin::Depolarizer { epsilon } => {
            RepolarizerParams::new(epsilon).map_err(|e| Error::schema(&ptr(at, "epsilon"), e.to_string()))?;
        }
        Builtin::AmplitudeDamping { gamma } if !(0.0..=1.0).contains(&gamma) => {
            return Err(Error::schema(&ptr(at, "gamma"), "gamma must lie in [0, 1]"));
        }
        _ => {}
    }
    Ok(b)
}

/// `{"kind": "matrix", "domain": subspace, "coords": rows}`,
/// `{"kind": "kraus", "operators": [operator...]}` or
/// `{"kind": "builtin", "name": ..., params...}`.
pub fn parse_map_value(v: &Value, at: &str, tol: ToleranceConfig) -> Result<MapSpec> {
    let obj = object(v, at)?;
    let kind = string(field(obj, "kind", at)?, &ptr(at, "kind"))?;
    match kind {
        "matrix" => {
            reject_unknown(obj, &["kind", "domain", "coords", "provenance"], at)?;
            let domain = parse_subspace_value(field(obj, "domain", at)?, &ptr(at, "domain"), tol)?;
            if domain.layout().num_factors() != 1 {
                return Err(Error::schema(&ptr(at, "domain/dims"), "map domain must have a single factor"));
            }
            let coords = parse_matrix(field(obj, "coords", at)?, domain.ambient_dim(), domain.dim(), &ptr(at, "coords"))?;
            let provenance = match obj.get("provenance") {
                Some(p) => string(p, &ptr(at, "provenance"))?.to_owned(),
                None => "file".to_owned(),
            };
            let map = SubsystemMap::new(domain, coords, provenance).map_err(|e| Error::schema(at, e.to_string()))?;
            Ok(MapSpec::Matrix(Box::new(map)))
        }
        "kraus" => {
            reject_unknown(obj, &["kind", "operators"], at)?;
            let at_ops = ptr(at, "operators");
            let list = array(field(obj, "operators", at)?, &at_ops)?;
            if list.is_empty() || list.len() > 64 {
                return Err(Error::schema(&at_ops, "Kraus list must hold 1 to 64 operators"));
            }
            let ops = list
                .iter()
                .enumerate()
                .map(|(i, o)| parse_operator_value(o, &ptr(&at_ops, i)))
                .collect::<Result<Vec<_>>>()?;
            let d = ops[0].dim();
            if let Some(i) = ops.iter().position(|o| o.dim() != d || o.layout().num_factors() != 1) {
                return Err(Error::schema(&ptr(&at_ops, i), "Kraus operators must share one single-factor layout"));
            }
            Ok(MapSpec::Kraus(ops))
        }
        "builtin" => Ok(MapSpec::Builtin(parse_builtin(obj, at)?)),
        other => Err(Error::schema(&ptr(at, "kind"), format!("unknown map kind \"{other}\""))),
    }
}

pub fn parse_map(text: &str, tol: ToleranceConfig) -> Result<MapSpec> {
    parse_map_value(&parse_text(text)?, "", tol)
}

pub fn emit_map(map: &SubsystemMap) -> Value {
    json!({
        "kind": "matrix",
        "domain": emit_subspace(map.domain()),
        "coords": emit_matrix(map.coords()),
        "provenance": map.provenance(),
    })
}

pub fn emit_map_spec(spec: &MapSpec) -> Value {
    match spec {
        MapSpec::Matrix(m) => emit_map(m),
        MapSpec::Kraus(ops) => json!({"kind": "kraus", "operators": ops.iter().map(emit_operator).collect::<Vec<_>>()}),
        MapSpec::Builtin(b) => {
            let mut obj = Map::new();
            obj.insert("kind".into(), json!("builtin"));
            obj.insert("name".into(), json!(b.name()));
            match *b {
                Builtin::Identity { d } | Builtin::Transpose { d } => obj.insert("d".into(), json!(d)),
                Builtin::Repolarizer { epsilon } | Builtin::Depolarizer { epsilon } => obj.insert("epsilon".into(), json!(epsilon)),
                Builtin::Example1 { t } => obj.insert("t".into(), json!(t)),
                Builtin::AmplitudeDamping { gamma } => obj.insert("gamma".into(), json!(gamma)),
            };
            Value::Object(obj)
        }
    }
}

// ---------------------------------------------------------------------------
// Unitary families

/// `{"description"?: str, "members": [operator...], "generator"?: operator}`.
pub fn parse_family_value(v: &Value, at: &str, tol: ToleranceConfig) -> Result<UnitaryFamily> {
    let obj = object(v, at)?;
    reject_unknown(obj, &["description", "members", "generator"], at)?;
    let at_m = ptr(at, "members");
    let list = array(field(obj, "members", at)?, &at_m)?;
    if list.is_empty() || list.len() > MAX_LIST {
        return Err(Error::schema(&at_m, format!("family must hold 1 to {MAX_LIST} members")));
    }
    let members = list
        .iter()
        .enumerate()
        .map(|(i, o)| parse_operator_value(o, &ptr(&at_m, i)))
        .collect::<Result<Vec<_>>>()?;
    let description = match obj.get("description") {
        Some(d) => string(d, &ptr(at, "description"))?.to_owned(),
        None => String::new(),
    };
    let mut family = UnitaryFamily::with_tol(members, description, &tol).map_err(|e| Error::schema(&at_m, e.to_string()))?;
    if let Some(g) = obj.get("generator") {
        let at_g = ptr(at, "generator");
        let k = parse_operator_value(g, &at_g)?;
        family = family.with_generator(k).map_err(|e| Error::schema(&at_g, e.to_string()))?;
    }
    Ok(family)
}

pub fn parse_family(text: &str, tol: ToleranceConfig) -> Result<UnitaryFamily> {
    parse_family_value(&parse_text(text)?, "", tol)
}

pub fn emit_family(family: &UnitaryFamily) -> Value {
    let mut obj = Map::new();
    obj.insert("description".into(), json!(family.description()));
    obj.insert("members".into(), Value::Array(family.members().iter().map(emit_operator).collect()));
    if let Some(k) = family.generator() {
        obj.insert("generator".into(), emit_operator(k));
    }
    Value::Object(obj)
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    /// Every verdict passed.
    Pass,
    /// A check failed on valid input.
    CheckFailed,
    /// The computation exhibited the violation it was asked to look for.
    ViolationDemonstrated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    /// `None` when the residual is not a finite number.
    pub residual: Option<f64>,
    pub details: Value,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, residual: f64, details: Value) -> Self {
        Self { name: name.into(), pass, residual: residual.is_finite().then_some(residual), details }
    }

    pub fn flag(name: impl Into<String>, pass: bool, details: Value) -> Self {
        Self { name: name.into(), pass, residual: None, details }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the canonical command line and input files, hex encoded.
    pub inputs_digest: String,
    pub verdicts: Vec<Verdict>,
    pub artifacts: BTreeMap<String, Value>,
    pub seed: u64,
    pub tolerances: ToleranceConfig,
    pub status: ReportStatus,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

pub fn parse_report(text: &str) -> Result<Report> {
    let report: Report = serde_json::from_str(text).map_err(|e| Error::schema("", format!("invalid report: {e}")))?;
    report
        .tolerances
        .validate()
        .map_err(|e| Error::schema("/tolerances", e.to_string()))?;
    Ok(report)
}

pub fn emit_report(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("reports contain only finite numbers")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{pauli_x, pauli_y};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn parses_pauli_x() {
        let x = parse_operator(r#"{"dims":[2],"matrix":[[[0,0],[1,0]],[[1,0],[0,0]]]}"#).unwrap();
        assert_eq!(x, pauli_x());
    }

    #[test]
    fn operator_round_trip() {
        let y = pauli_y();
        let text = emit_operator(&y).to_string();
        assert_eq!(parse_operator(&text).unwrap(), y);
        assert_eq!(emit_operator(&parse_operator(&text).unwrap()).to_string(), text);
    }

    #[test]
    fn schema_errors_have_pointers() {
        let err = parse_operator(r#"{"dims":[2],"matrix":[[[0,0],[1,0]],[[1,0],[0]]]}"#).unwrap_err();
        match err {
            Error::Schema { pointer, .. } => assert_eq!(pointer, "/matrix/1/1"),
            other => panic!("{other:?}"),
        }
        let err = parse_operator(r#"{"dims":[2,0],"matrix":[]}"#).unwrap_err();
        assert!(matches!(err, Error::Schema { ref pointer, .. } if pointer == "/dims/1"));
        let err = parse_operator(r#"{"dims":[2],"matrix":[[[1e200,0],[0,0]],[[0,0],[0,0]]]}"#).unwrap_err();
        assert!(matches!(err, Error::Schema { ref pointer, .. } if pointer == "/matrix/0/0/0"));
        assert!(parse_operator(r#"{"dims":[65],"matrix":[]}"#).is_err());
        assert!(parse_operator("not json").is_err());
    }

    #[test]
    fn builtin_repolarizer() {
        let spec = parse_map(r#"{"kind":"builtin","name":"repolarizer","epsilon":0.1}"#, tol()).unwrap();
        let map = spec.build(tol()).unwrap();
        let expected = catalog::repolarizer(RepolarizerParams::new(0.1).unwrap());
        assert!(map.deviation(&expected).unwrap() < 1e-15);
        assert!(parse_map(r#"{"kind":"builtin","name":"repolarizer","epsilon":0}"#, tol()).is_err());
        assert!(parse_map(r#"{"kind":"builtin","name":"nope"}"#, tol()).is_err());
    }

    #[test]
    fn matrix_map_round_trip() {
        let map = catalog::example1_map(0.4);
        let text = emit_map(&map).to_string();
        let back = parse_map(&text, tol()).unwrap().build(tol()).unwrap();
        assert!(back.deviation(&map).unwrap() < 1e-15);
        assert_eq!(emit_map(&back).to_string(), text);
    }

    #[test]
    fn subspace_round_trip() {
        let v = catalog::gibbs_subspace(tol());
        let text = emit_subspace(&v).to_string();
        let back = parse_subspace(&text, tol()).unwrap();
        assert_eq!(emit_subspace(&back).to_string(), text);
        assert!(back.same_as(&v).unwrap());
    }

    #[test]
    fn family_round_trip() {
        let fam = catalog::controlled_phase_family(3).unwrap();
        let text = emit_family(&fam).to_string();
        let back = parse_family(&text, tol()).unwrap();
        assert_eq!(emit_family(&back).to_string(), text);
        assert!(back.generator().is_some());
    }

    #[test]
    fn report_round_trip() {
        let report = Report {
            command: "catalog example1".into(),
            inputs_digest: "00".repeat(32),
            verdicts: vec![Verdict::new("kraus_completeness", true, 1.1e-16, json!({"t": 0.5}))],
            artifacts: BTreeMap::from([("x".to_owned(), emit_operator(&pauli_x()))]),
            seed: 7,
            tolerances: tol(),
            status: ReportStatus::Pass,
        };
        let text = emit_report(&report);
        let back = parse_report(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(emit_report(&back), text);
    }
}
