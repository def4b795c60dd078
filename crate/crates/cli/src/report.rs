use std::fmt::Write as _;

use serde::Serialize;

use tensor_chromatic::invariants::{CoefficientReport, Formulation, InvariantResult, TrialConfig, TrialRecord};

/// Everything needed to reproduce a run.
#[derive(Debug, Serialize)]
pub struct RunHeader {
    pub seed: u64,
    pub prime_bits: u32,
    pub trials: usize,
    pub max_trials: usize,
    pub formulation: Formulation,
    pub n_max: usize,
    pub d_max: usize,
}

impl RunHeader {
    pub fn from_config(cfg: &TrialConfig) -> Self {
        RunHeader {
            seed: cfg.seed,
            prime_bits: cfg.prime_bits,
            trials: cfg.trials,
            max_trials: cfg.max_trials,
            formulation: cfg.formulation,
            n_max: cfg.limits.n_max,
            d_max: cfg.limits.d_max,
        }
    }

    fn text(&self, out: &mut String) {
        let formulation = serde_json::to_value(self.formulation).expect("enum serializes");
        let _ = writeln!(
            out,
            "seed {}, prime bits {}, trials {} (at most {}), formulation {}, limits n <= {}, d <= {}",
            self.seed,
            self.prime_bits,
            self.trials,
            self.max_trials,
            formulation.as_str().unwrap_or("?"),
            self.n_max,
            self.d_max
        );
    }
}

#[derive(Debug, Serialize)]
pub struct Report<B> {
    pub command: &'static str,
    pub config: RunHeader,
    #[serde(flatten)]
    pub body: B,
}

pub trait TextBody {
    fn text(&self, out: &mut String);
}

impl<B: Serialize + TextBody> Report<B> {
    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        self.config.text(&mut out);
        self.body.text(&mut out);
        out
    }
}

pub fn tuple(values: &[u64]) -> String {
    let parts: Vec<String> = values.iter().map(u64::to_string).collect();
    format!("({})", parts.join(", "))
}

fn primes(trials: &[TrialRecord]) -> String {
    trials.iter().map(|t| t.prime.value().to_string()).collect::<Vec<_>>().join(" ")
}

fn coefficient_lines(coefficients: &[CoefficientReport], out: &mut String) {
    for c in coefficients {
        let _ = writeln!(out, "    m_{} = {}: {} trials, primes {}", c.index, c.value, c.trials.len(), primes(&c.trials));
    }
}

fn invariant_text(title: &str, r: &InvariantResult, out: &mut String) {
    let _ = writeln!(out, "{title} (d = {})", r.d);
    let _ = writeln!(out, "  m              {}", tuple(&r.m));
    let _ = writeln!(out, "  binomial form  {}", tuple(&r.binomial_form));
    let _ = writeln!(out, "  polynomial     {}", r.render());
    let _ = writeln!(out, "  trials         {}", r.trials_used);
    coefficient_lines(&r.coefficients, out);
}

#[derive(Debug, Serialize)]
pub struct ChromaticBody {
    pub input: String,
    pub n: usize,
    pub a: usize,
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chromatic: Option<InvariantResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative: Option<InvariantResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub differing: Option<Vec<usize>>,
}

impl TextBody for ChromaticBody {
    fn text(&self, out: &mut String) {
        let _ = writeln!(out, "input {}: n = {}, a = {}, d = {}", self.input, self.n, self.a, self.d);
        if let Some(c) = &self.chromatic {
            invariant_text("chromatic polynomial", c, out);
        }
        if let Some(r) = &self.relative {
            invariant_text("relative chromatic polynomial", r, out);
        }
        if let Some(eq) = self.equal {
            let _ = writeln!(out, "equal: {eq}");
        }
        if let Some(diff) = self.differing.as_ref().filter(|d| !d.is_empty()) {
            let idx: Vec<String> = diff.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "differing indices: {}", idx.join(", "));
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CharnumBody {
    pub input: String,
    pub n: usize,
    pub d: usize,
    pub b: Vec<usize>,
    pub value: u64,
    pub trials: Vec<TrialRecord>,
}

impl TextBody for CharnumBody {
    fn text(&self, out: &mut String) {
        let b: Vec<String> = self.b.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "input {}: n = {}, d = {}", self.input, self.n, self.d);
        let _ = writeln!(out, "T({}) = {}", b.join(", "), self.value);
        let _ = writeln!(out, "  {} trials, primes {}", self.trials.len(), primes(&self.trials));
    }
}

#[derive(Debug, Serialize)]
pub struct GraphBody {
    pub input: String,
    pub vertices: usize,
    pub edges: usize,
    pub oracle: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matroid_oracle: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chromatic: Option<InvariantResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative: Option<InvariantResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'static str>,
}

impl TextBody for GraphBody {
    fn text(&self, out: &mut String) {
        let _ = writeln!(out, "input {}: {} vertices, {} edges", self.input, self.vertices, self.edges);
        let _ = writeln!(out, "deletion-contraction oracle  {}", tuple(&self.oracle));
        if let Some(m) = &self.matroid_oracle {
            let _ = writeln!(out, "matroid oracle               {}", tuple(m));
        }
        if let Some(c) = &self.chromatic {
            invariant_text("chromatic polynomial", c, out);
        }
        if let Some(r) = &self.relative {
            invariant_text("relative chromatic polynomial", r, out);
        }
        if let Some(v) = self.verdict {
            let _ = writeln!(out, "verdict: {v}");
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RankCell {
    pub a: usize,
    pub b: u64,
    pub trials: Vec<TrialRecord>,
}

#[derive(Debug, Serialize)]
pub struct RankRow {
    pub r: usize,
    pub cells: Vec<RankCell>,
}

#[derive(Debug, Serialize)]
pub struct RankTableBody {
    pub n: usize,
    pub a_values: Vec<usize>,
    pub rows: Vec<RankRow>,
}

impl TextBody for RankTableBody {
    fn text(&self, out: &mut String) {
        let _ = writeln!(out, "b_(a,n,r): last chromatic coefficient of a generic rank-r tensor, n = {}", self.n);
        let mut head = String::from("   r |");
        for a in &self.a_values {
            let _ = write!(head, " {:>7}", format!("a={a}"));
        }
        let _ = writeln!(out, "{head}");
        for row in &self.rows {
            let mut line = format!("{:>4} |", row.r);
            for a in &self.a_values {
                match row.cells.iter().find(|c| c.a == *a) {
                    Some(c) => {
                        let _ = write!(line, " {:>7}", c.b);
                    }
                    None => line.push_str("        "),
                }
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        let total: usize = self.rows.iter().flat_map(|r| &r.cells).map(|c| c.trials.len()).sum();
        let _ = writeln!(out, "trials: {total}");
        for row in &self.rows {
            for c in &row.cells {
                let _ = writeln!(out, "    r = {}, a = {}: primes {}", row.r, c.a, primes(&c.trials));
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EulerBody {
    pub input: String,
    pub n: usize,
    pub d: usize,
    pub complement: i64,
    pub hypersurface: i64,
    pub relative: InvariantResult,
}

impl TextBody for EulerBody {
    fn text(&self, out: &mut String) {
        let _ = writeln!(out, "input {}: n = {}, d = {}", self.input, self.n, self.d);
        let _ = writeln!(out, "euler characteristic of the complement of det = 0: {}", self.complement);
        let _ = writeln!(out, "euler characteristic of the hypersurface det = 0:  {}", self.hypersurface);
        invariant_text("relative chromatic polynomial", &self.relative, out);
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: crate::error::ErrorKind,
    pub tag: &'static str,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}
