//! Deterministic CSV rendering: `#` metadata comment block, header row,
//! then data rows with 17 significant digits, `.` decimal point, LF line
//! endings.

use std::fmt::Write as _;
use std::io::Write as _;

use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

pub enum Cell {
    Int(usize),
    Num(f64),
}

pub struct Document {
    pub command: &'static str,
    pub seed: Option<u64>,
    pub tolerances: String,
    pub truncation: String,
    pub extra: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => num(*v),
        }
    }
}

/// Hash of the semantic inputs (subcommand plus every value that can
/// change the numbers); the output path and worker count stay out so
/// replays to different files still match.
pub fn config_hash(command: &str, cfg: &ExperimentConfig) -> String {
    let mut canon = format!("command={command}\n");
    if let Some(v) = &cfg.exponent_spec {
        let _ = writeln!(canon, "exponent_spec={v}");
    }
    if let Some(v) = cfg.p {
        let _ = writeln!(canon, "p={v:?}");
    }
    if let Some(v) = cfg.delta {
        let _ = writeln!(canon, "delta={v:?}");
    }
    if let Some(v) = cfg.gamma {
        let _ = writeln!(canon, "gamma={v:?}");
    }
    if let Some(v) = &cfg.n_grid {
        let joined: Vec<String> = v.iter().map(usize::to_string).collect();
        let _ = writeln!(canon, "n_grid={}", joined.join(","));
    }
    if let Some(v) = cfg.seed {
        let _ = writeln!(canon, "seed={v}");
    }
    let digest = Sha256::digest(canon.as_bytes());
    let mut hex = String::with_capacity(2 * digest.len());
    for byte in digest {
        let _ = write!(hex, "{byte:02x}");
    }
    hex.truncate(16);
    hex
}

pub fn render(doc: &Document, hash: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# muntz {}", doc.command);
    let _ = writeln!(s, "# config_hash: {hash}");
    match doc.seed {
        Some(v) => {
            let _ = writeln!(s, "# seed: {v}");
        }
        None => {
            let _ = writeln!(s, "# seed: -");
        }
    }
    let _ = writeln!(s, "# tolerances: {}", doc.tolerances);
    let _ = writeln!(s, "# truncation: {}", doc.truncation);
    for (k, v) in &doc.extra {
        let _ = writeln!(s, "# {k}: {v}");
    }
    let _ = writeln!(s, "{}", doc.columns.join(","));
    for row in &doc.rows {
        let cells: Vec<String> = row.iter().map(Cell::render).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

/// Writes to the path, or to stdout when the path is `-`.
pub fn write_output(path: &str, content: &str) -> std::io::Result<()> {
    if path == "-" {
        std::io::stdout().lock().write_all(content.as_bytes())
    } else {
        std::fs::write(path, content)
    }
}
