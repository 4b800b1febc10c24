//! JSON file formats. Every document carries a `schema` tag; field elements
//! are integers in the canonical base-`p` encoding and polynomials are
//! coefficient lists starting at the constant term.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::gabidulin::CodeParams;
use crate::matrix::SkewMatrix;
use crate::poly::SkewPoly;

pub const MATRIX_SCHEMA: &str = "skewreduce.matrix.v1";
pub const INSTANCE_SCHEMA: &str = "skewreduce.instance.v1";
pub const REPORT_SCHEMA: &str = "skewreduce.decode-report.v1";

/// A field as stored in files. Without `modulus` the least irreducible
/// polynomial is used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    #[serde(default = "one")]
    pub u: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

impl FieldDescriptor {
    pub fn of(ctx: &FieldContext) -> Self {
        FieldDescriptor {
            p: ctx.characteristic(),
            u: ctx.u(),
            m: ctx.m(),
            modulus: Some(ctx.modulus().to_vec()),
        }
    }

    pub fn context(&self) -> Result<FieldContext> {
        FieldContext::new(self.p, self.u, self.m, self.modulus.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub schema: String,
    pub field: FieldDescriptor,
    pub rows: SkewMatrix,
}

impl MatrixFile {
    pub fn new(ctx: &FieldContext, rows: SkewMatrix) -> Self {
        MatrixFile {
            schema: MATRIX_SCHEMA.into(),
            field: FieldDescriptor::of(ctx),
            rows,
        }
    }

    /// Parses and validates against the embedded field.
    pub fn from_json(text: &str) -> Result<(FieldContext, SkewMatrix)> {
        let file: MatrixFile = parse(text, MATRIX_SCHEMA)?;
        let ctx = file.field.context()?;
        for row in file.rows.rows() {
            for entry in row.entries() {
                check_poly(&ctx, entry)?;
            }
        }
        Ok((ctx, file.rows))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: String,
    pub field: FieldDescriptor,
    pub locators: Vec<FieldElement>,
    pub k: Vec<usize>,
    /// `ℓ` rows of length `n`.
    pub received: Vec<Vec<FieldElement>>,
    /// Transmitted messages, if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub messages: Option<Vec<SkewPoly>>,
}

impl InstanceFile {
    pub fn new(
        ctx: &FieldContext,
        params: &CodeParams,
        received: Vec<Vec<FieldElement>>,
        messages: Option<Vec<SkewPoly>>,
    ) -> Self {
        InstanceFile {
            schema: INSTANCE_SCHEMA.into(),
            field: FieldDescriptor::of(ctx),
            locators: params.locators.clone(),
            k: params.k.clone(),
            received,
            messages,
        }
    }

    pub fn from_json(text: &str) -> Result<(FieldContext, CodeParams, InstanceFile)> {
        let file: InstanceFile = parse(text, INSTANCE_SCHEMA)?;
        let ctx = file.field.context()?;
        check_elements(&ctx, &file.locators)?;
        for row in &file.received {
            check_elements(&ctx, row)?;
        }
        for f in file.messages.iter().flatten() {
            check_poly(&ctx, f)?;
        }
        let params = CodeParams::new(&ctx, file.k.clone(), file.locators.clone())?;
        Ok((ctx, params, file))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportStatus {
    Decoded,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeReportFile {
    pub schema: String,
    pub status: ReportStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub messages: Option<Vec<SkewPoly>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub lambda_degree: Option<usize>,
    pub defect: usize,
    pub wall_time_ms: f64,
}

fn parse<T: DeserializeOwned>(text: &str, schema: &str) -> Result<T> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    match value.get("schema").and_then(|s| s.as_str()) {
        Some(s) if s == schema => {}
        Some(s) => {
            return Err(Error::Format(format!(
                "expected schema {schema}, found {s}"
            )))
        }
        None => return Err(Error::Format("missing schema field".into())),
    }
    serde_json::from_value(value).map_err(|e| Error::Format(e.to_string()))
}

fn check_elements(ctx: &FieldContext, elements: &[FieldElement]) -> Result<()> {
    for e in elements {
        ctx.element(u64::from(e.value()))?;
    }
    Ok(())
}

fn check_poly(ctx: &FieldContext, f: &SkewPoly) -> Result<()> {
    check_elements(ctx, &f.to_coeffs())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
