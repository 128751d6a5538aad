use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// The sign and normalisation conventions every result depends on. The
/// report carries their hash so two runs can be compared only when they agree.
pub const CONVENTIONS: &[&str] = &[
    "darboux: x_i has parity opposite to y_i; the symplectic form is sum dx_i dy_i",
    "bracket: {f,g} = f d_x/dr d_y/dl g - f d_y/dr d_x/dl g summed over pairs",
    "laplacian: Delta f = sum (-1)^|x_i| d_x d_y f, Delta(fg) = Delta f g + (-1)^|f| f Delta g - (-1)^|f| {f,g}",
    "delta_mu: Delta_mu f = Delta f + 1/2 {S, f} with mu = e^S times the standard density",
    "densities: oriented, push-forward multiplies by the Berezinian without absolute value",
    "integrals: gaussian values are c times prod sqrt(2 pi / a_k), compared exactly",
    "schouten: [d_i, g] = d_i g, left Leibniz, bracket equals the antibracket on T*[1]",
];

pub fn ledger_hash() -> String {
    let mut h = Sha256::new();
    for line in CONVENTIONS {
        h.update(line.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub id: String,
    pub inputs: Vec<String>,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub size: Option<usize>,
    pub cases: Vec<Case>,
    pub summary: Summary,
    pub ledger_hash: String,
}

impl Report {
    pub fn new(suite: &str, seed: u64, size: Option<usize>, cases: Vec<Case>) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        let summary = Summary { total: cases.len(), passed, failed: cases.len() - passed };
        Report {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            seed,
            size,
            cases,
            summary,
            ledger_hash: ledger_hash(),
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// One line per failing case followed by the totals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in self.cases.iter().filter(|c| !c.pass) {
            out.push_str(&format!("FAIL {}\n  inputs: {}\n  expected: {}\n  actual: {}\n", c.id, c.inputs.join(", "), c.expected, c.actual));
        }
        out.push_str(&format!(
            "{}: {} cases, {} passed, {} failed (seed {})\n",
            self.suite, self.summary.total, self.summary.passed, self.summary.failed, self.seed
        ));
        out
    }
}
