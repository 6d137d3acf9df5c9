//! Deterministic text output: CSV curves with '#'-prefixed metadata,
//! nested key-value summary records, and atomic file writes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::config::RunConfig;
use crate::error::Result;

/// Numeric formatting used everywhere: 9 significant digits.
pub fn sig9(x: f64) -> String {
    // normalize -0.0 so equal values always print identically
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

/// Write `content` via a temp file in the same directory plus rename, so a
/// failed run never leaves a partial output behind.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = match dir {
        Some(d) => d.join(format!(".{file_name}.tmp")),
        None => Path::new(&format!(".{file_name}.tmp")).to_path_buf(),
    };
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// '#'-prefixed metadata block recording the full parameter set.
pub fn metadata_comment(cfg: &RunConfig, extra: &[(&str, String)]) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "# {k} = {v}");
    };
    kv("stack.lambda_pc", sig9(cfg.stack.lambda_pc));
    kv("stack.n_a", sig9(cfg.stack.n_a));
    kv("stack.n_b", sig9(cfg.stack.n_b));
    kv("stack.n_d", sig9(cfg.stack.n_d));
    kv("stack.n0", sig9(cfg.stack.n0));
    kv("atomic.delta_p", sig9(cfg.atomic.delta_p));
    kv("atomic.omega_c0", sig9(cfg.atomic.omega_c0));
    kv("atomic.sgc_p", sig9(cfg.atomic.sgc_p));
    kv("atomic.s1", sig9(cfg.atomic.s1));
    kv("probe.omega_p", sig9(cfg.probe.omega_p));
    kv("solver.tolerance", sig9(cfg.solver.tolerance));
    kv("solver.relaxation", sig9(cfg.solver.relaxation));
    kv(
        "solver.max_iterations",
        cfg.solver.max_iterations.to_string(),
    );
    for (k, v) in extra {
        kv(k, v.clone());
    }
    s
}

/// Assemble a CSV document: metadata comments, one header row, data rows.
pub fn csv_document(metadata: &str, header: &str, rows: &[Vec<String>]) -> String {
    let mut s = String::with_capacity(metadata.len() + rows.len() * 64);
    s.push_str(metadata);
    s.push_str(header);
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// A nested key-value record (TOML-shaped) written with a fixed field
/// order so repeated runs are byte-identical.
pub struct RecordBuilder {
    text: String,
}

impl RecordBuilder {
    pub fn new() -> Self {
        Self {
            text: String::new(),
        }
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        if !self.text.is_empty() {
            self.text.push('\n');
        }
        let _ = writeln!(self.text, "[{name}]");
        self
    }

    pub fn field(&mut self, key: &str, value: &str) -> &mut Self {
        let _ = writeln!(self.text, "{key} = {value}");
        self
    }

    pub fn number(&mut self, key: &str, value: f64) -> &mut Self {
        self.field(key, &sig9(value))
    }

    pub fn finish(&self) -> String {
        self.text.clone()
    }
}

impl Default for RecordBuilder {
    fn default() -> Self {
        Self::new()
    }
}
