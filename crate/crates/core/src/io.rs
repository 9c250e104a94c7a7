//! File formats.
//!
//! Everything is JSON. Integers are written as plain JSON numbers up to
//! 2^53 - 1 in magnitude and as decimal strings beyond that; readers accept
//! both forms everywhere an integer is expected. Filtration values are plain
//! decimal literals and are parsed exactly (serde_json's arbitrary-precision
//! numbers preserve the source text).
//!
//! Formats:
//! * matrix: `{"rows": R, "cols": C, "entries": [[..], ..]}`
//! * complex (`cellchain/1`): `{"format": "cellchain/1", "name": .., "cells":
//!   [{"id", "dim", "value"?, "boundary": {id: coeff}}]}`
//! * cover: `{"ground": [ids], "sets": {name: [ids]}}`
//! * critical records: `[{"value", "index", "count"}, ..]`, or an object
//!   `{"records": [..], "boundary": {id: {id: coeff}}}`
//!
//! Writers emit canonical output: cells in (dim, id) order, sorted object
//! keys, zero coefficients omitted. Parse errors carry the file name, the
//! offending field path, and the expected shape.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{Map, Number, Value};
use thiserror::Error;

use crate::chain::HomologyGroup;
use crate::cw::{CWComplex, Cell};
use crate::level::Level;
use crate::matrix::IntMatrix;
use crate::morse::CriticalRecord;
use crate::nerve::Cover;
use crate::smith::SnfResult;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON: {message}")]
    Json { path: String, message: String },
    #[error("{path}: field {field:?}: expected {expected}, found {found}")]
    Field {
        path: String,
        field: String,
        expected: String,
        found: String,
    },
}

impl IoError {
    fn field(path: &str, field: &str, expected: &str, found: &Value) -> Self {
        let found = match found {
            Value::Null => "null".to_string(),
            Value::Bool(_) => "a boolean".to_string(),
            Value::Number(n) => format!("number {n}"),
            Value::String(s) => format!("string {s:?}"),
            Value::Array(_) => "an array".to_string(),
            Value::Object(_) => "an object".to_string(),
        };
        IoError::Field {
            path: path.to_string(),
            field: field.to_string(),
            expected: expected.to_string(),
            found,
        }
    }

    fn missing(path: &str, field: &str, expected: &str) -> Self {
        IoError::Field {
            path: path.to_string(),
            field: field.to_string(),
            expected: expected.to_string(),
            found: "nothing (field is missing)".to_string(),
        }
    }
}

/// Largest magnitude written as a plain JSON number; anything bigger is
/// encoded as a decimal string.
const MAX_PLAIN_JSON_INT: i64 = (1 << 53) - 1;

/// Reads and parses a JSON file.
pub fn load_value(path: &Path) -> Result<Value, IoError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: display.clone(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| IoError::Json {
        path: display,
        message: e.to_string(),
    })
}

fn get<'v>(
    path: &str,
    obj: &'v Map<String, Value>,
    field_path: &str,
    key: &str,
    expected: &str,
) -> Result<&'v Value, IoError> {
    obj.get(key)
        .ok_or_else(|| IoError::missing(path, &join(field_path, key), expected))
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn as_object<'v>(
    path: &str,
    v: &'v Value,
    field: &str,
) -> Result<&'v Map<String, Value>, IoError> {
    v.as_object()
        .ok_or_else(|| IoError::field(path, field, "an object", v))
}

fn as_array<'v>(path: &str, v: &'v Value, field: &str) -> Result<&'v Vec<Value>, IoError> {
    v.as_array()
        .ok_or_else(|| IoError::field(path, field, "an array", v))
}

fn as_string(path: &str, v: &Value, field: &str) -> Result<String, IoError> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| IoError::field(path, field, "a string", v))
}

/// Integer from a JSON number or decimal string (arbitrary magnitude).
fn as_bigint(path: &str, v: &Value, field: &str) -> Result<BigInt, IoError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => {
            return Err(IoError::field(
                path,
                field,
                "an integer (number or decimal string)",
                other,
            ))
        }
    };
    BigInt::from_str(&text).map_err(|_| IoError::Field {
        path: path.to_string(),
        field: field.to_string(),
        expected: "an integer (number or decimal string)".to_string(),
        found: format!("{text:?}"),
    })
}

fn as_usize(path: &str, v: &Value, field: &str) -> Result<usize, IoError> {
    let n = as_bigint(path, v, field)?;
    if n.is_negative() {
        return Err(IoError::field(path, field, "a nonnegative integer", v));
    }
    usize::try_from(&n)
        .map_err(|_| IoError::field(path, field, "a nonnegative integer within range", v))
}

fn as_i64(path: &str, v: &Value, field: &str) -> Result<i64, IoError> {
    let n = as_bigint(path, v, field)?;
    i64::try_from(&n).map_err(|_| IoError::field(path, field, "an integer within i64 range", v))
}

fn as_level(path: &str, v: &Value, field: &str) -> Result<Level, IoError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => {
            return Err(IoError::field(
                path,
                field,
                "a decimal value (number or string)",
                other,
            ))
        }
    };
    Level::from_str(&text).map_err(|_| IoError::Field {
        path: path.to_string(),
        field: field.to_string(),
        expected: "a plain decimal value".to_string(),
        found: format!("{text:?}"),
    })
}

fn bigint_to_value(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(small) if small.abs() <= MAX_PLAIN_JSON_INT => Value::Number(small.into()),
        _ => Value::String(n.to_string()),
    }
}

fn level_to_value(level: &Level) -> Value {
    match Number::from_str(&level.to_string()) {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(level.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Matrices

pub fn matrix_from_value(path: &str, v: &Value) -> Result<IntMatrix, IoError> {
    let obj = as_object(path, v, "")?;
    let rows = as_usize(path, get(path, obj, "", "rows", "a nonnegative integer")?, "rows")?;
    let cols = as_usize(path, get(path, obj, "", "cols", "a nonnegative integer")?, "cols")?;
    let entries_value = get(path, obj, "", "entries", "an array of row arrays")?;
    let rows_array = as_array(path, entries_value, "entries")?;
    if rows_array.len() != rows {
        return Err(IoError::field(
            path,
            "entries",
            &format!("{rows} row arrays"),
            entries_value,
        ));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row_value) in rows_array.iter().enumerate() {
        let field = format!("entries[{i}]");
        let row = as_array(path, row_value, &field)?;
        if row.len() != cols {
            return Err(IoError::field(
                path,
                &field,
                &format!("{cols} integers"),
                row_value,
            ));
        }
        for (j, entry) in row.iter().enumerate() {
            entries.push(as_bigint(path, entry, &format!("entries[{i}][{j}]"))?);
        }
    }
    IntMatrix::new(rows, cols, entries).map_err(|e| IoError::Field {
        path: path.to_string(),
        field: "entries".to_string(),
        expected: "a rows x cols entry grid".to_string(),
        found: e.to_string(),
    })
}

pub fn read_matrix(path: &Path) -> Result<IntMatrix, IoError> {
    let v = load_value(path)?;
    matrix_from_value(&path.display().to_string(), &v)
}

pub fn matrix_to_value(m: &IntMatrix) -> Value {
    let mut obj = Map::new();
    obj.insert("rows".to_string(), Value::Number(m.rows().into()));
    obj.insert("cols".to_string(), Value::Number(m.cols().into()));
    let entries: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| bigint_to_value(m.get(i, j))).collect()))
        .collect();
    obj.insert("entries".to_string(), Value::Array(entries));
    Value::Object(obj)
}

/// SNF result as `{U, D, V, divisors, rank}` in the matrix encoding.
pub fn snf_to_value(snf: &SnfResult) -> Value {
    let mut obj = Map::new();
    obj.insert("U".to_string(), matrix_to_value(&snf.u));
    obj.insert("D".to_string(), matrix_to_value(&snf.d));
    obj.insert("V".to_string(), matrix_to_value(&snf.v));
    obj.insert(
        "divisors".to_string(),
        Value::Array(snf.divisors.iter().map(bigint_to_value).collect()),
    );
    obj.insert("rank".to_string(), Value::Number(snf.rank.into()));
    Value::Object(obj)
}

// ---------------------------------------------------------------------------
// Complexes (cellchain/1)

pub const COMPLEX_FORMAT: &str = "cellchain/1";

/// True when the value looks like a `cellchain/1` document.
pub fn is_complex_value(v: &Value) -> bool {
    v.get("format").and_then(Value::as_str) == Some(COMPLEX_FORMAT)
}

pub fn cw_complex_from_value(path: &str, v: &Value) -> Result<CWComplex, IoError> {
    let obj = as_object(path, v, "")?;
    let format = as_string(
        path,
        get(path, obj, "", "format", &format!("the string {COMPLEX_FORMAT:?}"))?,
        "format",
    )?;
    if format != COMPLEX_FORMAT {
        return Err(IoError::Field {
            path: path.to_string(),
            field: "format".to_string(),
            expected: format!("the string {COMPLEX_FORMAT:?}"),
            found: format!("{format:?}"),
        });
    }
    let name = as_string(path, get(path, obj, "", "name", "a string")?, "name")?;
    let cells_value = get(path, obj, "", "cells", "an array of cell objects")?;
    let mut cells = Vec::new();
    for (i, cell_value) in as_array(path, cells_value, "cells")?.iter().enumerate() {
        let field = format!("cells[{i}]");
        let cell_obj = as_object(path, cell_value, &field)?;
        let id = as_string(
            path,
            get(path, cell_obj, &field, "id", "a string")?,
            &join(&field, "id"),
        )?;
        let dim = as_usize(
            path,
            get(path, cell_obj, &field, "dim", "a nonnegative integer")?,
            &join(&field, "dim"),
        )?;
        let mut cell = Cell::new(id, dim);
        if let Some(value) = cell_obj.get("value") {
            if !value.is_null() {
                cell.value = Some(as_level(path, value, &join(&field, "value"))?);
            }
        }
        if let Some(boundary) = cell_obj.get("boundary") {
            let boundary_field = join(&field, "boundary");
            let map = as_object(path, boundary, &boundary_field)?;
            for (target, coeff) in map {
                let c = as_i64(path, coeff, &join(&boundary_field, target))?;
                if c != 0 {
                    cell.degrees.insert(target.clone(), c);
                }
            }
        }
        cells.push(cell);
    }
    CWComplex::new(name, cells).map_err(|e| IoError::Field {
        path: path.to_string(),
        field: "cells".to_string(),
        expected: "a well-formed cell list".to_string(),
        found: e.to_string(),
    })
}

pub fn read_cw_complex(path: &Path) -> Result<CWComplex, IoError> {
    let v = load_value(path)?;
    cw_complex_from_value(&path.display().to_string(), &v)
}

pub fn cw_complex_to_value(complex: &CWComplex) -> Value {
    let cells: Vec<Value> = complex
        .cells()
        .iter()
        .map(|cell| {
            let mut obj = Map::new();
            obj.insert("id".to_string(), Value::String(cell.id.clone()));
            obj.insert("dim".to_string(), Value::Number(cell.dim.into()));
            if let Some(value) = &cell.value {
                obj.insert("value".to_string(), level_to_value(value));
            }
            let boundary: Map<String, Value> = cell
                .degrees
                .iter()
                .filter(|(_, &d)| d != 0)
                .map(|(id, &d)| (id.clone(), Value::Number(d.into())))
                .collect();
            obj.insert("boundary".to_string(), Value::Object(boundary));
            Value::Object(obj)
        })
        .collect();
    let mut obj = Map::new();
    obj.insert(
        "format".to_string(),
        Value::String(COMPLEX_FORMAT.to_string()),
    );
    obj.insert("name".to_string(), Value::String(complex.name().to_string()));
    obj.insert("cells".to_string(), Value::Array(cells));
    Value::Object(obj)
}

/// Canonical serialization: byte-identical for equal complexes.
pub fn cw_complex_to_canonical_json(complex: &CWComplex) -> String {
    let mut text = serde_json::to_string_pretty(&cw_complex_to_value(complex))
        .expect("complex serialization cannot fail");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// Covers

pub fn cover_from_value(path: &str, v: &Value) -> Result<Cover, IoError> {
    let obj = as_object(path, v, "")?;
    let ground_value = get(path, obj, "", "ground", "an array of element ids")?;
    let mut ground = Vec::new();
    for (i, e) in as_array(path, ground_value, "ground")?.iter().enumerate() {
        ground.push(as_string(path, e, &format!("ground[{i}]"))?);
    }
    let sets_value = get(path, obj, "", "sets", "an object of name -> element array")?;
    let mut sets = Vec::new();
    for (name, elements_value) in as_object(path, sets_value, "sets")? {
        let field = format!("sets.{name}");
        let mut elements = Vec::new();
        for (i, e) in as_array(path, elements_value, &field)?.iter().enumerate() {
            elements.push(as_string(path, e, &format!("{field}[{i}]"))?);
        }
        sets.push((name.clone(), elements));
    }
    Cover::new(ground, sets).map_err(|e| IoError::Field {
        path: path.to_string(),
        field: "sets".to_string(),
        expected: "subsets of the ground set".to_string(),
        found: e.to_string(),
    })
}

pub fn read_cover(path: &Path) -> Result<Cover, IoError> {
    let v = load_value(path)?;
    cover_from_value(&path.display().to_string(), &v)
}

// ---------------------------------------------------------------------------
// Critical records

pub type BoundaryData = BTreeMap<String, BTreeMap<String, i64>>;

/// Critical-point data plus optional boundary data for the generated cells.
#[derive(Debug)]
pub struct CriticalData {
    pub records: Vec<CriticalRecord>,
    pub boundary: Option<BoundaryData>,
}

pub fn critical_data_from_value(path: &str, v: &Value) -> Result<CriticalData, IoError> {
    let (records_value, boundary_value, records_field) = match v {
        Value::Array(_) => (v, None, "".to_string()),
        Value::Object(obj) => {
            let records = get(path, obj, "", "records", "an array of critical records")?;
            (records, obj.get("boundary"), "records".to_string())
        }
        other => {
            return Err(IoError::field(
                path,
                "",
                "an array of critical records or an object with a records field",
                other,
            ))
        }
    };
    let mut records = Vec::new();
    for (i, record_value) in as_array(path, records_value, &records_field)?
        .iter()
        .enumerate()
    {
        let field = if records_field.is_empty() {
            format!("[{i}]")
        } else {
            format!("{records_field}[{i}]")
        };
        let obj = as_object(path, record_value, &field)?;
        let value = as_level(
            path,
            get(path, obj, &field, "value", "a decimal value")?,
            &join(&field, "value"),
        )?;
        let index = as_usize(
            path,
            get(path, obj, &field, "index", "a nonnegative integer")?,
            &join(&field, "index"),
        )?;
        let count = as_usize(
            path,
            get(path, obj, &field, "count", "a positive integer")?,
            &join(&field, "count"),
        )?;
        records.push(CriticalRecord::new(value, index, count));
    }
    let boundary = match boundary_value {
        None | Some(Value::Null) => None,
        Some(b) => {
            let mut data = BoundaryData::new();
            for (cell, degrees_value) in as_object(path, b, "boundary")? {
                let field = format!("boundary.{cell}");
                let mut degrees = BTreeMap::new();
                for (target, coeff) in as_object(path, degrees_value, &field)? {
                    degrees.insert(target.clone(), as_i64(path, coeff, &join(&field, target))?);
                }
                data.insert(cell.clone(), degrees);
            }
            Some(data)
        }
    };
    Ok(CriticalData { records, boundary })
}

pub fn read_critical_data(path: &Path) -> Result<CriticalData, IoError> {
    let v = load_value(path)?;
    critical_data_from_value(&path.display().to_string(), &v)
}

// ---------------------------------------------------------------------------
// Homology output helpers

/// Structured rendering of a homology group: `{"free_rank": r, "torsion":
/// [..]}` with the torsion in divisibility order.
pub fn homology_group_to_value(group: &HomologyGroup) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "free_rank".to_string(),
        Value::Number(group.free_rank.into()),
    );
    obj.insert(
        "torsion".to_string(),
        Value::Array(group.torsion.iter().map(bigint_to_value).collect()),
    );
    Value::Object(obj)
}

/// Renders coefficient-homology summand orders (0 encodes a free summand).
pub fn summands_to_value(summands: &[BigInt]) -> Value {
    Value::Array(summands.iter().map(bigint_to_value).collect())
}

pub fn to_pretty_string(v: &Value) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("JSON serialization cannot fail");
    text.push('\n');
    text
}
