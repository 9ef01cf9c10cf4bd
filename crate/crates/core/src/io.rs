//! JSON instance files and reports.
//!
//! Matrices are nested arrays of rows. Floats are written with 17
//! significant digits so every report parses back to identical values.

use std::io;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::config::{SearchConfig, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::frames::{AsfBounds, FramePair, HilbertFrameBounds, ThetaNorms};
use crate::normed::{Matrix, PIndex};
use crate::oracle::{GenMode, Instance};
use crate::theorems::{PerturbationParams, TheoremTag};

/// On-disk form of an [`Instance`]. Missing `G`, `Omega` and `params`
/// default to the unperturbed pair with zero constants; `x_norm` defaults
/// to `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub p: PIndex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_norm: Option<PIndex>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<f64>>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<f64>>,
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Omega", default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<PerturbationParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

const REQUIRED_INSTANCE_KEYS: [&str; 3] = ["p", "F", "T"];

fn rows_to_matrix(rows: &[Vec<f64>], name: &str) -> Result<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::DimensionMismatch(format!("{name} is empty")));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!(
            "{name} row {i} has {} entries, expected {ncols}",
            rows[i].len()
        )));
    }
    Ok(Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<Instance> {
        let f = rows_to_matrix(&self.f, "F")?;
        let t = rows_to_matrix(&self.t, "T")?;
        let mut fp = FramePair::new(f, t, self.p)?;
        if let Some(x) = self.x_norm {
            fp = fp.with_x_norm(x);
        }
        let g = match &self.g {
            Some(rows) => rows_to_matrix(rows, "G")?,
            None => fp.analysis().clone(),
        };
        let omega = match &self.omega {
            Some(rows) => rows_to_matrix(rows, "Omega")?,
            None => fp.synthesis().clone(),
        };
        crate::normed::ensure_finite(&g, "G")?;
        crate::normed::ensure_finite(&omega, "Omega")?;
        Instance::new(
            fp,
            g,
            omega,
            self.params.unwrap_or_default(),
            self.seed.unwrap_or(DEFAULT_SEED),
        )
    }

    /// Full form with every optional field written out.
    pub fn from_instance(inst: &Instance) -> Self {
        Self {
            p: inst.fp.p(),
            x_norm: Some(inst.fp.x_norm()),
            f: matrix_to_rows(inst.fp.analysis()),
            t: matrix_to_rows(inst.fp.synthesis()),
            g: Some(matrix_to_rows(&inst.g)),
            omega: Some(matrix_to_rows(&inst.omega)),
            params: Some(inst.params),
            seed: Some(inst.seed),
        }
    }
}

/// Where a report came from: enough to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: SearchConfig,
}

impl Provenance {
    pub fn new(command: &str, cfg: &SearchConfig) -> Self {
        Self {
            tool: "pframe".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed: cfg.seed,
            config: *cfg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile<T> {
    pub provenance: Provenance,
    pub report: T,
}

/// Output of `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub p: PIndex,
    pub x_norm: PIndex,
    pub dim: usize,
    pub count: usize,
    pub is_asf: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<AsfBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norms: Option<ThetaNorms>,
    /// Squared frame bounds of the synthesis vectors, when they form a frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hilbert_bounds: Option<HilbertFrameBounds>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedFailure {
    pub seed: u64,
    pub reason: String,
}

/// Output of `verify`: aggregate over a seed range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub theorem: TheoremTag,
    pub mode: GenMode,
    pub p: PIndex,
    pub dim: usize,
    pub count: usize,
    pub scale: f64,
    pub seed_start: u64,
    pub seed_end: u64,
    pub trials: usize,
    pub generated: usize,
    pub hypotheses_held: usize,
    pub bracket_ok: usize,
    pub certified_violations: usize,
    pub not_certified: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_lower_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_upper_margin: Option<f64>,
    #[serde(default)]
    pub violating_seeds: Vec<u64>,
    #[serde(default)]
    pub generation_failures: Vec<SeedFailure>,
}

/// Pretty printing with every float as `{:.16e}`; non-finite values become `null`.
struct ExactFloats {
    inner: PrettyFormatter<'static>,
}

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.inner.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for ExactFloats {
    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }

    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
}

/// Serializes `value` as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut buf,
        ExactFloats {
            inner: PrettyFormatter::new(),
        },
    );
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses any JSON document, reporting syntax and type errors with position.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(parse_error)
}

/// Parses an instance file. Absent required keys give [`Error::MissingField`].
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let value: serde_json::Value = from_json(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidInput("instance must be a JSON object".into()))?;
    if let Some(key) = REQUIRED_INSTANCE_KEYS.iter().find(|k| !obj.contains_key(**k)) {
        return Err(Error::MissingField((*key).into()));
    }
    from_json(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDENTITY: &str = r#"{"p": 2, "F": [[1, 0], [0, 1]], "T": [[1, 0], [0, 1]]}"#;

    #[test]
    fn defaults_fill_unperturbed_pair() {
        let inst = parse_instance(IDENTITY).unwrap().to_instance().unwrap();
        assert_eq!(&inst.g, inst.fp.analysis());
        assert_eq!(&inst.omega, inst.fp.synthesis());
        assert_eq!(inst.params, PerturbationParams::default());
        assert_eq!(inst.fp.x_norm(), PIndex::TWO);
    }

    #[test]
    fn x_norm_override_and_infinity() {
        let text = r#"{"p": 3, "x_norm": "inf", "F": [[1]], "T": [[2]]}"#;
        let inst = parse_instance(text).unwrap().to_instance().unwrap();
        assert_eq!(inst.fp.x_norm(), PIndex::INFINITY);
    }

    #[test]
    fn missing_key_is_named() {
        let err = parse_instance(r#"{"p": 2, "F": [[1]]}"#).unwrap_err();
        assert_eq!(err, Error::MissingField("T".into()));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_instance("{\n  \"p\": 2,\n  \"F\": [[1,]]\n}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ragged_and_mismatched_matrices_rejected() {
        let ragged = r#"{"p": 2, "F": [[1, 0], [0]], "T": [[1, 0], [0, 1]]}"#;
        assert!(matches!(
            parse_instance(ragged).unwrap().to_instance(),
            Err(Error::DimensionMismatch(_))
        ));
        let shapes = r#"{"p": 2, "F": [[1, 0]], "T": [[1, 0], [0, 1]]}"#;
        assert!(parse_instance(shapes).unwrap().to_instance().is_err());
        let infinite_p = r#"{"p": "inf", "F": [[1]], "T": [[1]]}"#;
        assert!(matches!(
            parse_instance(infinite_p).unwrap().to_instance(),
            Err(Error::InfiniteFrameIndex(_))
        ));
    }

    #[test]
    fn floats_use_seventeen_digits_and_round_trip() {
        let values = vec![0.1, 1.0 / 3.0, -2.5e-300, 5e-324, f64::MAX, 0.0];
        let text = to_json(&values).unwrap();
        assert!(text.contains("1.0000000000000001e-1"));
        let back: Vec<f64> = from_json(&text).unwrap();
        for (a, b) in values.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn instance_file_round_trip() {
        let inst = parse_instance(IDENTITY).unwrap().to_instance().unwrap();
        let file = InstanceFile::from_instance(&inst);
        let back: InstanceFile = from_json(&to_json(&file).unwrap()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_instance().unwrap(), inst);
    }
}
