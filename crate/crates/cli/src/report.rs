use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "hypersel-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunParams {
    pub grid: u64,
    pub max_runs: usize,
    pub window: u64,
    pub depth: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub check: String,
    pub status: Status,
    pub detail: String,
    pub witness: Option<Value>,
    pub params: RunParams,
    pub elapsed_ms: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub scenario: String,
    pub params: RunParams,
    pub status: Status,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(scenario: &str, params: RunParams, checks: Vec<CheckRecord>) -> Report {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Error => summary.error += 1,
            }
        }
        let status = if summary.error > 0 {
            Status::Error
        } else if summary.fail > 0 {
            Status::Fail
        } else {
            Status::Pass
        };
        Report { schema: SCHEMA.into(), scenario: scenario.into(), params, status, summary, checks }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Zeroes every `elapsed_ms` field so that two reports can be compared.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                if k == "elapsed_ms" {
                    *x = Value::from(0);
                } else {
                    strip_timing(x);
                }
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
