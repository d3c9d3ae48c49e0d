//! JSON and CSV interchange formats.
//!
//! Numbers are written with 12 significant digits. JSON inputs are
//! accepted in the same shapes the writers produce, so any emitted document
//! can be fed back as input.
//!
//! Channels: `{"p": [p0, p1, p2, p3]}`, `{"family": name, "param": x}` or
//! `{"bloch": [[..], [..], [..]]}` (unital channel by its Bloch matrix).
//! Observables: `{"s": s, "n": [x, y, z]}`. Directions: `[x, y, z]`.
//! A document wrapping one of these under `"channel"`, `"obs"` or `"n"` is
//! accepted as well.

use serde_json::{json, Map, Value};

use crate::channels::{unital_decompose, BlochMatrix, PauliChannel};
use crate::compatibility::{DualCertificate, EllipsoidSample, RegionGeometry, SimplexNode};
use crate::error::{Error, Result};
use crate::linalg::{CMat, HermitianOp, C64};
use crate::observables::{norm3, UnbiasedBinaryObservable};

pub const SIGNIFICANT_DIGITS: usize = 12;
pub const REGION_HEADER: &str = "# pauli-compat region v1";
pub const FAMILY_HEADER: &str = "# pauli-compat family v1";

/// Probability vectors read from text are renormalised when their sum is
/// this close to one, so rounded output can be read back.
const INPUT_SUM_TOL: f64 = 1e-9;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits; `−0` becomes `0`.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn num(x: f64) -> Value {
    Value::from(round_sig(x))
}

pub fn num_array(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// CSV rendering: rounded, `.` as decimal separator, no exponent.
pub fn csv_number(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.as_object().and_then(|o| o.get(key))
}

fn as_f64(v: &Value, what: &str, err: fn(String) -> Error) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| err(format!("{what} must be a finite number, got {v}")))
}

fn as_vec(v: &Value, len: usize, what: &str, err: fn(String) -> Error) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == len)
        .ok_or_else(|| err(format!("{what} must be an array of {len} numbers, got {v}")))?;
    arr.iter().map(|x| as_f64(x, what, err)).collect()
}

fn as_matrix(v: &Value, rows: usize, what: &str, err: fn(String) -> Error) -> Result<Vec<Vec<f64>>> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == rows)
        .ok_or_else(|| err(format!("{what} must have {rows} rows")))?;
    arr.iter().map(|row| as_vec(row, rows, what, err)).collect()
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::ParameterOutOfRange(format!("malformed JSON: {e}")))
}

/// A channel as read from input: its Pauli normal form, the input rotation
/// `R(V)` when it was given as a general unital channel, and the input
/// document in canonical form for echoing.
#[derive(Clone, Debug)]
pub struct ChannelInput {
    pub pauli: PauliChannel,
    pub input_rotation: Option<BlochMatrix>,
    pub echo: Value,
}

impl ChannelInput {
    /// Direction seen by the Pauli part: `R(V)ᵀ n`.
    pub fn pauli_direction(&self, n: [f64; 3]) -> [f64; 3] {
        match &self.input_rotation {
            None => n,
            Some(r) => [0, 1, 2].map(|j| r[0][j] * n[0] + r[1][j] * n[1] + r[2][j] * n[2]),
        }
    }

    /// Inverse of [`pauli_direction`](Self::pauli_direction): `R(V) q`.
    pub fn observable_direction(&self, q: [f64; 3]) -> [f64; 3] {
        match &self.input_rotation {
            None => q,
            Some(r) => [0, 1, 2].map(|i| r[i][0] * q[0] + r[i][1] * q[1] + r[i][2] * q[2]),
        }
    }
}

pub const FAMILIES: [&str; 7] = [
    "identity",
    "completely_depolarizing",
    "depolarizing",
    "phase_damping",
    "measure_and_prepare",
    "luders_z",
    "quantum_not",
];

/// Named channel family at parameter `param` (ignored for fixed members).
pub fn family_channel(name: &str, param: Option<f64>) -> Result<PauliChannel> {
    let need = || {
        param.ok_or_else(|| Error::InvalidChannel(format!("family \"{name}\" needs a \"param\"")))
    };
    match name {
        "identity" => Ok(PauliChannel::identity()),
        "completely_depolarizing" => Ok(PauliChannel::completely_depolarizing()),
        "quantum_not" => Ok(PauliChannel::quantum_not()),
        "depolarizing" => PauliChannel::depolarizing(need()?),
        "phase_damping" => PauliChannel::phase_damping(need()?),
        "measure_and_prepare" => PauliChannel::measure_and_prepare(need()?),
        "luders_z" => PauliChannel::luders_z(need()?),
        _ => Err(Error::InvalidChannel(format!(
            "unknown family \"{name}\"; expected one of {}",
            FAMILIES.join(", ")
        ))),
    }
}

/// Default parameter range of a one-parameter family.
pub fn family_range(name: &str) -> Result<(f64, f64)> {
    match name {
        "depolarizing" => Ok((0.0, 1.0 / 3.0)),
        "phase_damping" | "measure_and_prepare" | "luders_z" => Ok((0.0, 1.0)),
        _ => Err(Error::InvalidChannel(format!(
            "\"{name}\" is not a one-parameter family"
        ))),
    }
}

pub fn parse_channel(v: &Value) -> Result<ChannelInput> {
    let err = Error::InvalidChannel;
    if let Some(p) = field(v, "p") {
        let p = as_vec(p, 4, "\"p\"", err)?;
        let p = [p[0], p[1], p[2], p[3]];
        let sum: f64 = p.iter().sum();
        let pauli = match PauliChannel::new(p) {
            Err(_) if (sum - 1.0).abs() <= INPUT_SUM_TOL => PauliChannel::new(p.map(|x| x / sum))?,
            other => other?,
        };
        return Ok(ChannelInput {
            pauli,
            input_rotation: None,
            echo: json!({ "p": num_array(&pauli.probabilities()) }),
        });
    }
    if let Some(name) = field(v, "family") {
        let name = name
            .as_str()
            .ok_or_else(|| err(format!("\"family\" must be a string, got {name}")))?;
        let param = match field(v, "param") {
            None | Some(Value::Null) => None,
            Some(x) => Some(as_f64(x, "\"param\"", err)?),
        };
        let pauli = family_channel(name, param)?;
        let mut echo = Map::new();
        echo.insert("family".into(), Value::from(name));
        if let Some(x) = param {
            echo.insert("param".into(), num(x));
        }
        return Ok(ChannelInput {
            pauli,
            input_rotation: None,
            echo: Value::Object(echo),
        });
    }
    if let Some(t) = field(v, "bloch") {
        let rows = as_matrix(t, 3, "\"bloch\"", err)?;
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = rows[i][j];
            }
        }
        let d = unital_decompose(&t)?;
        let echo = json!({ "bloch": t.iter().map(|r| num_array(r)).collect::<Vec<_>>() });
        return Ok(ChannelInput {
            pauli: d.p,
            input_rotation: Some(d.input_rotation()),
            echo,
        });
    }
    if let Some(inner) = field(v, "channel") {
        return parse_channel(inner);
    }
    Err(err(format!(
        "expected an object with \"p\", \"family\" or \"bloch\", got {v}"
    )))
}

fn normalized(v: Vec<f64>, err: fn(String) -> Error) -> Result<[f64; 3]> {
    let n = [v[0], v[1], v[2]];
    let len = norm3(n);
    if len <= 1e-12 {
        return Err(err("direction must be a nonzero vector".into()));
    }
    Ok(n.map(|x| x / len))
}

/// A direction `[x, y, z]` (any nonzero length; normalised), or an object
/// carrying one under `"n"`.
pub fn parse_direction(v: &Value) -> Result<[f64; 3]> {
    let err = Error::InvalidObservable;
    if v.is_array() {
        return normalized(as_vec(v, 3, "direction", err)?, err);
    }
    if let Some(n) = field(v, "n") {
        return parse_direction(n);
    }
    Err(err(format!("expected a direction [x, y, z], got {v}")))
}

pub fn parse_observable(v: &Value) -> Result<UnbiasedBinaryObservable> {
    let err = Error::InvalidObservable;
    if let (Some(s), Some(n)) = (field(v, "s"), field(v, "n")) {
        let s = as_f64(s, "\"s\"", err)?;
        let n = normalized(as_vec(n, 3, "\"n\"", err)?, err)?;
        return UnbiasedBinaryObservable::new(s, n);
    }
    if let Some(inner) = field(v, "obs") {
        return parse_observable(inner);
    }
    Err(err(format!("expected an object with \"s\" and \"n\", got {v}")))
}

pub fn observable_json(obs: &UnbiasedBinaryObservable) -> Value {
    json!({ "s": num(obs.sharpness()), "n": num_array(&obs.direction()) })
}

fn matrix_parts(m: &CMat) -> (Value, Value) {
    let part = |f: fn(&C64) -> f64| {
        Value::Array(
            (0..m.rows())
                .map(|i| Value::Array((0..m.cols()).map(|j| num(f(&m[(i, j)]))).collect()))
                .collect(),
        )
    };
    (part(|z| z.re), part(|z| z.im))
}

fn matrix_from_parts(re: &Value, im: &Value, what: &str) -> Result<CMat> {
    let err = Error::DimensionMismatch;
    let rows = re.as_array().map(|a| a.len()).unwrap_or(0);
    if rows == 0 {
        return Err(err(format!("{what} must be a non-empty square matrix")));
    }
    let re = as_matrix(re, rows, what, err)?;
    let im = as_matrix(im, rows, what, err)?;
    Ok(CMat::from_fn(rows, rows, |i, j| C64::new(re[i][j], im[i][j])))
}

/// Hermitian matrix from `{"<prefix>_re": .., "<prefix>_im": ..}`; the
/// imaginary part defaults to zero.
pub fn parse_hermitian(v: &Value, prefix: &str) -> Result<HermitianOp> {
    let re_key = format!("{prefix}_re");
    let im_key = format!("{prefix}_im");
    let re = field(v, &re_key)
        .ok_or_else(|| Error::DimensionMismatch(format!("missing \"{re_key}\"")))?;
    let zeros;
    let im = match field(v, &im_key) {
        Some(x) => x,
        None => {
            let n = re.as_array().map(|a| a.len()).unwrap_or(0);
            zeros = Value::Array(vec![Value::Array(vec![Value::from(0.0); n]); n]);
            &zeros
        }
    };
    let m = matrix_from_parts(re, im, &re_key)?;
    HermitianOp::with_tolerance(m, 1e-9).map(|h| HermitianOp::symmetrized(h.into_mat()))
}

pub fn hermitian_json(h: &HermitianOp, prefix: &str) -> Map<String, Value> {
    let (re, im) = matrix_parts(h.as_mat());
    let mut out = Map::new();
    out.insert(format!("{prefix}_re"), re);
    out.insert(format!("{prefix}_im"), im);
    out
}

/// `{"s_max", "m", "lambda_re", "lambda_im"}`
pub fn certificate_json(cert: &DualCertificate, s_max: f64) -> Map<String, Value> {
    let mut out = hermitian_json(&cert.lambda, "lambda");
    out.insert("s_max".into(), num(s_max));
    out.insert("m".into(), num_array(&cert.m));
    out
}

pub fn parse_certificate(v: &Value) -> Result<DualCertificate> {
    let m = field(v, "m").ok_or_else(|| Error::DimensionMismatch("missing \"m\"".into()))?;
    let m = as_vec(m, 3, "\"m\"", Error::DimensionMismatch)?;
    Ok(DualCertificate {
        lambda: parse_hermitian(v, "lambda")?,
        m: [m[0], m[1], m[2]],
    })
}

fn axis_name(j: usize) -> &'static str {
    ["x", "y", "z"][j]
}

/// Boundary samples as CSV with columns `x,y,z`. A comment line after the
/// header records the geometry.
pub fn ellipsoid_csv(sample: &EllipsoidSample) -> String {
    let geometry = match sample.geometry {
        RegionGeometry::Ellipsoid => "ellipsoid".to_string(),
        RegionGeometry::Ellipse { normal_axis } => format!("ellipse normal={}", axis_name(normal_axis)),
        RegionGeometry::Segment { axis } => format!("segment axis={}", axis_name(axis)),
        RegionGeometry::Point => "point".to_string(),
    };
    let mut out = format!("{REGION_HEADER}\n# geometry: {geometry}\nx,y,z\n");
    for v in &sample.points {
        out.push_str(&format!("{},{},{}\n", csv_number(v[0]), csv_number(v[1]), csv_number(v[2])));
    }
    out
}

/// Simplex verdicts as CSV with columns `p0,p1,p2,p3,compatible`.
pub fn simplex_csv(nodes: &[SimplexNode]) -> String {
    let mut out = format!("{REGION_HEADER}\np0,p1,p2,p3,compatible\n");
    for node in nodes {
        let p = node.p.map(csv_number);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p[0],
            p[1],
            p[2],
            p[3],
            u8::from(node.compatible)
        ));
    }
    out
}
