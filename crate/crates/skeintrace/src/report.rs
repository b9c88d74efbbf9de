//! Deterministic check reports: one record per verified identity, with the
//! rendered sides and the first differing term on failure.

use serde::Serialize;

use crate::qtorus::TorusElem;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_diff: Option<String>,
}

impl CheckRecord {
    pub fn equality(name: &str, lhs: &TorusElem, rhs: &TorusElem) -> CheckRecord {
        let equal = lhs == rhs;
        let first_diff = if equal {
            None
        } else {
            let diff = lhs.sub(rhs).ok();
            diff.and_then(|d| {
                d.terms
                    .iter()
                    .next()
                    .map(|(v, s)| format!("({}) at {:?}", s, v))
            })
            .or(Some("different tori".to_string()))
        };
        CheckRecord {
            name: name.to_string(),
            lhs: format!("{}", lhs),
            rhs: format!("{}", rhs),
            equal,
            first_diff,
        }
    }

    pub fn named_bool(name: &str, lhs: &str, rhs: &str, equal: bool) -> CheckRecord {
        CheckRecord {
            name: name.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            equal,
            first_diff: None,
        }
    }
}

/// A deterministic collection of records with an overall verdict.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }
    pub fn extend(&mut self, rs: Vec<CheckRecord>) {
        self.records.extend(rs);
    }
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.equal)
    }
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
    pub fn summary_lines(&self) -> Vec<String> {
        self.records
            .iter()
            .map(|r| format!("[{}] {}", if r.equal { "pass" } else { "FAIL" }, r.name))
            .collect()
    }
}
