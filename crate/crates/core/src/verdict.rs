use serde::Serialize;

/// One line of a verdict table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub operation: String,
    pub parameters: String,
    pub measured: String,
    pub pass: bool,
}

impl Verdict {
    pub const HEADER: &'static str = "operation,parameters,measured,pass";

    pub fn new(operation: &str, parameters: impl Into<String>, measured: impl Into<String>, pass: bool) -> Self {
        Verdict {
            operation: operation.into(),
            parameters: parameters.into(),
            measured: measured.into(),
            pass,
        }
    }

    /// CSV line; fields containing commas are quoted.
    pub fn to_csv(&self) -> String {
        let q = |s: &str| {
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        format!(
            "{},{},{},{}",
            q(&self.operation),
            q(&self.parameters),
            q(&self.measured),
            if self.pass { "pass" } else { "fail" }
        )
    }
}
