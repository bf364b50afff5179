//! JSON/CSV report emission. Field order is fixed by the struct layout and
//! nothing here is time- or host-dependent, so outputs are byte-identical
//! for a given seed regardless of worker count.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub check: String,
    pub family: String,
    pub params: Value,
    pub mode: String,
    pub seed: Option<u64>,
    pub result: Value,
    pub witness: Option<Value>,
    pub pass: bool,
}

impl Report {
    pub fn new(check: impl Into<String>, family: impl Into<String>, params: Value) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            check: check.into(),
            family: family.into(),
            params,
            mode: "exhaustive".into(),
            seed: None,
            result: Value::Null,
            witness: None,
            pass: true,
        }
    }

    pub fn mode(mut self, mode: impl Into<String>) -> Self {
        self.mode = mode.into();
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn result(mut self, result: Value) -> Self {
        self.result = result;
        self
    }

    pub fn witness(mut self, witness: Option<Value>) -> Self {
        self.witness = witness;
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

pub fn reports_to_json(reports: &[Report]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("report serialization");
    s.push('\n');
    s
}

/// CSV rows for plotting; header frozen as `param,trial,value`.
#[derive(Clone, Debug)]
pub struct CsvRow {
    pub param: String,
    pub trial: u32,
    pub value: String,
}

pub fn rows_to_csv(rows: &[CsvRow]) -> String {
    let mut s = String::from("param,trial,value\n");
    for row in rows {
        s.push_str(&format!("{},{},{}\n", row.param, row.trial, row.value));
    }
    s
}

pub fn reports_to_csv_rows(
    it: impl Iterator<Item = (String, u32, String)>,
) -> Vec<CsvRow> {
    it.map(|(param, trial, value)| CsvRow {
        param,
        trial,
        value,
    })
    .collect()
}
