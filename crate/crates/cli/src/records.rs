//! Input records: unit cells, explicit bases and root forms, read from CSV
//! or from a JSON array of objects with the same field names.

use std::collections::{HashMap, HashSet};
use std::io::Read;

use rootforms::reconstruct_superbase;
use rootforms::{Basis, LatticeSign, RootForm, Superbase, UnitCell};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub const CELL_FIELDS: [&str; 6] = ["a", "b", "c", "alpha", "beta", "gamma"];
pub const BASIS_FIELDS: [&str; 9] = ["b11", "b12", "b13", "b21", "b22", "b23", "b31", "b32", "b33"];
pub const FORM_FIELDS: [&str; 6] = ["r23", "r13", "r12", "r01", "r02", "r03"];

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Cell(UnitCell),
    Basis(Basis),
    /// Six root products with the declared sign, if any.
    Form { form: RootForm, sign: Option<LatticeSign> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeRecord {
    pub id: String,
    pub source: Source,
}

impl LatticeRecord {
    /// A superbase generating the lattice. Root forms are rebuilt; a
    /// non-oriented form with a declared chiral sign is mirrored if needed so
    /// that the rebuilt lattice carries that sign.
    pub fn superbase(&self) -> rootforms::Result<Superbase> {
        match &self.source {
            Source::Cell(cell) => Ok(Superbase::from_basis(&cell.to_basis()?)),
            Source::Basis(b) => Ok(Superbase::from_basis(b)),
            Source::Form { form, sign } => {
                let sb = reconstruct_superbase(form)?;
                let wanted = match sign {
                    Some(s @ (LatticeSign::Positive | LatticeSign::Negative)) if !form.oriented => *s,
                    _ => return Ok(sb),
                };
                let got = rootforms::Invariants::from_superbase(&sb, rootforms::DEFAULT_REL_TOL)?.sign;
                Ok(if got == wanted || got == LatticeSign::Neutral { sb } else { sb.mirrored() })
            }
        }
    }
}

/// Where a record came from, for error messages.
#[derive(Debug, Clone)]
struct Row {
    location: String,
    fields: HashMap<String, String>,
}

impl Row {
    fn get(&self, key: &str) -> Option<&str> {
        self.fields.get(key).map(|s| s.trim()).filter(|s| !s.is_empty())
    }

    fn number(&self, key: &str, id: &str) -> CliResult<f64> {
        let raw = self
            .get(key)
            .ok_or_else(|| CliError::Input(format!("{}, record {id}: missing field {key}", self.location)))?;
        let x: f64 = raw
            .parse()
            .map_err(|_| CliError::Input(format!("{}, record {id}: field {key} = {raw:?} is not a number", self.location)))?;
        if !x.is_finite() {
            return Err(CliError::Input(format!("{}, record {id}: field {key} is not finite", self.location)));
        }
        Ok(x)
    }
}

fn parse_sign(raw: &str) -> Option<LatticeSign> {
    match raw.to_ascii_lowercase().as_str() {
        "positive" | "+" => Some(LatticeSign::Positive),
        "negative" | "-" => Some(LatticeSign::Negative),
        "neutral" | "0" => Some(LatticeSign::Neutral),
        _ => None,
    }
}

fn parse_bool(raw: &str) -> Option<bool> {
    match raw.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Schema {
    Cell,
    Basis,
    Form,
}

fn detect_schema(keys: &HashSet<&str>, location: &str) -> CliResult<Schema> {
    let has = |fields: &[&str]| fields.iter().all(|f| keys.contains(f));
    if !keys.contains("id") {
        return Err(CliError::Input(format!("{location}: missing id column")));
    }
    match (has(&CELL_FIELDS), has(&BASIS_FIELDS), has(&FORM_FIELDS)) {
        (true, false, false) => Ok(Schema::Cell),
        (false, true, false) => Ok(Schema::Basis),
        (false, false, true) => Ok(Schema::Form),
        (false, false, false) => Err(CliError::Input(format!(
            "{location}: expected columns id,a,b,c,alpha,beta,gamma or id,b11..b33 or id,r23,r13,r12,r01,r02,r03"
        ))),
        _ => Err(CliError::Input(format!("{location}: columns match more than one schema"))),
    }
}

fn row_to_record(row: &Row, schema: Schema) -> CliResult<LatticeRecord> {
    let id = row
        .get("id")
        .ok_or_else(|| CliError::Input(format!("{}: empty id", row.location)))?
        .to_string();
    let tag = |e: rootforms::Error| CliError::Input(format!("{}, record {id}: {e}", row.location));
    let source = match schema {
        Schema::Cell => {
            let v = CELL_FIELDS.map(|f| row.number(f, &id));
            let [a, b, c, alpha, beta, gamma] = collect(v)?;
            Source::Cell(UnitCell::new(a, b, c, alpha, beta, gamma).map_err(tag)?)
        }
        Schema::Basis => {
            let m = collect(BASIS_FIELDS.map(|f| row.number(f, &id)))?;
            Source::Basis(Basis::from_rows(m).map_err(tag)?)
        }
        Schema::Form => {
            let r = collect(FORM_FIELDS.map(|f| row.number(f, &id)))?;
            let oriented = match row.get("oriented") {
                None => false,
                Some(raw) => parse_bool(raw).ok_or_else(|| {
                    CliError::Input(format!("{}, record {id}: oriented = {raw:?} is not a boolean", row.location))
                })?,
            };
            let sign = match row.get("sign") {
                None => None,
                Some(raw) => Some(parse_sign(raw).ok_or_else(|| {
                    CliError::Input(format!("{}, record {id}: unknown sign {raw:?}", row.location))
                })?),
            };
            let form = RootForm::from_products(r, oriented).map_err(tag)?;
            Source::Form { form, sign }
        }
    };
    Ok(LatticeRecord { id, source })
}

fn collect<const N: usize>(values: [CliResult<f64>; N]) -> CliResult<[f64; N]> {
    let mut out = [0.0; N];
    for (slot, v) in out.iter_mut().zip(values) {
        *slot = v?;
    }
    Ok(out)
}

fn csv_rows(input: &mut dyn Read) -> CliResult<Vec<Row>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(input);
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_ascii_lowercase()).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Input(format!("line {line}: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let fields = headers.iter().cloned().zip(record.iter().map(str::to_string)).collect();
        rows.push(Row { location: format!("line {line}"), fields });
    }
    if rows.is_empty() {
        let keys: HashSet<&str> = headers.iter().map(String::as_str).collect();
        detect_schema(&keys, "line 1")?;
    }
    Ok(rows)
}

fn json_rows(input: &mut dyn Read) -> CliResult<Vec<Row>> {
    let value: serde_json::Value =
        serde_json::from_reader(input).map_err(|e| CliError::Input(format!("line {}: {e}", e.line())))?;
    let items = value
        .as_array()
        .ok_or_else(|| CliError::Input("JSON input must be an array of objects".into()))?;
    items
        .iter()
        .enumerate()
        .map(|(k, item)| {
            let location = format!("element {k}");
            let obj = item
                .as_object()
                .ok_or_else(|| CliError::Input(format!("{location}: not an object")))?;
            let fields = obj
                .iter()
                .map(|(key, v)| {
                    let text = match v {
                        serde_json::Value::String(s) => s.clone(),
                        serde_json::Value::Null => String::new(),
                        other => other.to_string(),
                    };
                    (key.to_ascii_lowercase(), text)
                })
                .collect();
            Ok(Row { location, fields })
        })
        .collect()
}

/// Reads every record, validating numbers and cells and rejecting duplicate ids.
pub fn parse_records(input: &mut dyn Read, format: Format) -> CliResult<Vec<LatticeRecord>> {
    let rows = match format {
        Format::Csv => csv_rows(input)?,
        Format::Json => json_rows(input)?,
    };
    let mut out = Vec::with_capacity(rows.len());
    let mut seen: HashMap<String, String> = HashMap::new();
    let mut schema = None;
    for row in &rows {
        let keys: HashSet<&str> = row.fields.keys().map(String::as_str).collect();
        let this = detect_schema(&keys, &row.location)?;
        if *schema.get_or_insert(this) != this {
            return Err(CliError::Input(format!("{}: record schema differs from earlier records", row.location)));
        }
        let record = row_to_record(row, this)?;
        if let Some(first) = seen.insert(record.id.clone(), row.location.clone()) {
            return Err(CliError::Input(format!("{}: duplicate id {} (first at {first})", row.location, record.id)));
        }
        out.push(record);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv(text: &str) -> CliResult<Vec<LatticeRecord>> {
        parse_records(&mut text.as_bytes(), Format::Csv)
    }

    #[test]
    fn cell_and_basis_rows() {
        let recs = csv("id,a,b,c,alpha,beta,gamma\nx,1,2,3,90,90,90\n").unwrap();
        assert_eq!(recs.len(), 1);
        assert!(matches!(recs[0].source, Source::Cell(c) if c.c == 3.0));
        let recs = csv("id,b11,b12,b13,b21,b22,b23,b31,b32,b33\ny,1,0,0,0,2,0,0,0,3\n").unwrap();
        assert!(matches!(recs[0].source, Source::Basis(_)));
    }

    #[test]
    fn errors_name_the_record() {
        let err = csv("id,a,b,c,alpha,beta,gamma\nx,1,2,3,90,90,0\n").unwrap_err().to_string();
        assert!(err.contains("record x") && err.contains("line 2"), "{err}");
        let err = csv("id,a,b,c,alpha,beta,gamma\nx,1,2,3,90,90,90\nx,1,2,3,90,90,90\n").unwrap_err().to_string();
        assert!(err.contains("duplicate id x") && err.contains("line 3"), "{err}");
        let err = csv("id,a,b,c,alpha,beta,gamma\nq,1,two,3,90,90,90\n").unwrap_err().to_string();
        assert!(err.contains("record q") && err.contains("field b"), "{err}");
        assert!(csv("name,a\nx,1\n").is_err());
    }

    #[test]
    fn json_mirrors_csv() {
        let text = r#"[{"id": "x", "a": 1, "b": 2, "c": 3, "alpha": 90, "beta": 90, "gamma": 90}]"#;
        let json = parse_records(&mut text.as_bytes(), Format::Json).unwrap();
        assert_eq!(json, csv("id,a,b,c,alpha,beta,gamma\nx,1,2,3,90,90,90\n").unwrap());
        let err = parse_records(&mut r#"[{"id": "z", "a": 1}]"#.as_bytes(), Format::Json).unwrap_err();
        assert!(err.to_string().contains("element 0"));
    }

    #[test]
    fn root_form_rows() {
        let recs = csv("id,r23,r13,r12,r01,r02,r03,sign,oriented\nf,0,0,0,1,2,3,neutral,false\n").unwrap();
        match &recs[0].source {
            Source::Form { form, sign } => {
                assert_eq!(form.r, [0.0, 0.0, 0.0, 1.0, 2.0, 3.0]);
                assert_eq!(*sign, Some(LatticeSign::Neutral));
            }
            other => panic!("{other:?}"),
        }
        assert!(csv("id,r23,r13,r12,r01,r02,r03,sign,oriented\nf,0,0,0,1,2,3,left,false\n").is_err());
    }
}
