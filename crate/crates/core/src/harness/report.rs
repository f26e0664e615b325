//! Line-oriented key=value reports with a sha256 footer.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// A mathematical refusal: the library declined for a reason it can certify.
    Refusal,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Refusal => "refusal",
            Verdict::Fail => "fail",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Refusal => 1,
            Verdict::Fail => 2,
        }
    }
}

/// Exit code for an error that prevented a report: 3 for usage and parse
/// problems, 2 for internal verification guards, 1 for refusals.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Usage(_) | Error::InvalidParameters(_) | Error::DescriptorMismatch { .. } | Error::Io(_) => 3,
        Error::PostconditionViolation(_) | Error::VerificationFailed(_) => 2,
        _ => 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub anchor: String,
    pub descriptor: String,
    pub seed: u64,
    pub params: Vec<(String, String)>,
    pub records: Vec<(String, String)>,
    pub verdict: Verdict,
}

fn one_line(v: &str) -> String {
    v.replace(['\n', '\r'], " ")
}

impl Report {
    pub fn new(name: &str, anchor: &str, descriptor: &str, seed: u64) -> Report {
        Report {
            name: name.into(),
            anchor: anchor.into(),
            descriptor: descriptor.into(),
            seed,
            params: Vec::new(),
            records: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    pub fn param(&mut self, k: &str, v: impl ToString) {
        self.params.push((k.into(), v.to_string()));
    }

    pub fn record(&mut self, k: &str, v: impl ToString) {
        self.records.push((k.into(), v.to_string()));
    }

    /// Marks the report failed unless `ok`, recording the check either way.
    pub fn check(&mut self, k: &str, ok: bool) {
        self.record(&format!("check.{k}"), if ok { "ok" } else { "failed" });
        if !ok {
            self.verdict = Verdict::Fail;
        }
    }

    /// Every line but the timestamp and the footer.
    fn body(&self) -> Vec<String> {
        let mut lines = vec![
            "format=slstar-report-1".to_string(),
            format!("name={}", one_line(&self.name)),
            format!("anchor={}", one_line(&self.anchor)),
            format!("descriptor={}", one_line(&self.descriptor)),
            format!("seed={}", self.seed),
        ];
        lines.extend(self.params.iter().map(|(k, v)| format!("param.{k}={}", one_line(v))));
        lines.extend(self.records.iter().map(|(k, v)| format!("record.{k}={}", one_line(v))));
        lines.push(format!("verdict={}", self.verdict.as_str()));
        lines
    }

    /// Hex sha256 of the body lines, each newline-terminated.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for l in self.body() {
            h.update(l.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    pub fn render(&self, timestamp: u64) -> String {
        let body = self.body();
        let mut out = String::new();
        for (i, l) in body.iter().enumerate() {
            if i == 5 {
                let _ = writeln!(out, "timestamp={timestamp}");
            }
            let _ = writeln!(out, "{l}");
        }
        let _ = writeln!(out, "sha256={}", self.digest());
        out
    }

    /// Writes `<dir>/<name>.report` and returns its path and text.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, String)> {
        fs::create_dir_all(dir)?;
        let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let text = self.render(ts);
        let path = dir.join(format!("{}.report", self.name));
        fs::write(&path, &text)?;
        Ok((path, text))
    }
}

/// Recomputes the footer of a rendered report, ignoring the timestamp line.
pub fn verify_rendered(text: &str) -> bool {
    let mut h = Sha256::new();
    let mut footer = None;
    for l in text.lines() {
        if let Some(d) = l.strip_prefix("sha256=") {
            footer = Some(d.to_string());
        } else if !l.starts_with("timestamp=") {
            h.update(l.as_bytes());
            h.update(b"\n");
        }
    }
    footer.as_deref() == Some(hex::encode(h.finalize()).as_str())
}
