//! Newline-delimited report records.
//!
//! Every record is a self-contained JSON object carrying `schema_version: 1`
//! and a `record` discriminator; rationals serialize as `"p/q"` strings so
//! exactness survives serialization. Serialization is a pure function of the
//! record contents, keeping report files byte-identical across runs and
//! platforms.

use serde::Serialize;

use crate::matrix::QMatrix;
use crate::rat::Rat;
use crate::sample::ParamPoint;
use crate::weights::{Margins, WeightBlock};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct BasisRecord {
    pub schema_version: u32,
    pub record: &'static str,
    pub margins: Margins,
    pub dimension: usize,
    pub tables: Vec<Vec<Vec<i64>>>,
}

impl BasisRecord {
    pub fn new(block: &WeightBlock) -> Self {
        BasisRecord {
            schema_version: SCHEMA_VERSION,
            record: "basis",
            margins: block.margins.clone(),
            dimension: block.dim(),
            tables: block.tables.iter().map(|t| t.to_nested()).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct RMatrixRecord {
    pub schema_version: u32,
    pub record: &'static str,
    pub key: crate::qop::RMatrixKey,
    pub t: Rat,
    pub matrix: QMatrix,
}

#[derive(Serialize)]
pub struct BlockMatrixRecord {
    pub schema_version: u32,
    pub record: &'static str,
    pub side: String,
    pub indices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub k: usize,
    pub n: usize,
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<ParamPoint>,
    pub matrix: QMatrix,
}

impl BlockMatrixRecord {
    pub fn new(
        record: &'static str,
        side: &str,
        indices: Vec<usize>,
        margins: &Margins,
        matrix: QMatrix,
    ) -> Self {
        BlockMatrixRecord {
            schema_version: SCHEMA_VERSION,
            record,
            side: side.to_string(),
            indices,
            family: None,
            k: margins.k,
            n: margins.n,
            lambda: margins.lambda.clone(),
            mu: margins.mu.clone(),
            t: None,
            point: None,
            matrix,
        }
    }
}

/// Serialize one record as a single NDJSON line (no trailing newline).
pub fn ndjson_line<T: Serialize>(record: &T) -> String {
    serde_json::to_string(record).expect("record serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::enumerate_tables;

    #[test]
    fn basis_record_shape() {
        let block = enumerate_tables(&Margins::new(2, 2, vec![1, 1], vec![1, 1]));
        let line = ndjson_line(&BasisRecord::new(&block));
        assert!(line.starts_with("{\"schema_version\":1,\"record\":\"basis\",\"margins\":"));
        assert!(line.contains("\"dimension\":2"));
        assert!(line.contains("[[0,1],[1,0]]"));
    }
}
