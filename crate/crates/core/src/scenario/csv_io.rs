use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::propagator::Sample;

/// Column order of the time-series CSV.
pub const CSV_COLUMNS: [&str; 15] = [
    "t_fs", "n_qd1", "n_qd2", "n_pl", "n_cav1", "n_cav2", "n_total", "C", "C_ph", "C_tot", "F2", "g2_11",
    "g2_22", "g2_12", "trace_err",
];

const CONFIG_BEGIN: &str = "# --- config begin ---";
const CONFIG_END: &str = "# --- config end ---";
const TRUNCATED: &str = "# TRUNCATED";
const SWITCH: &str = "# after-pulse switch";

/// One CSV row; `None` is written as an empty field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub t_fs: f64,
    pub n_qd1: f64,
    pub n_qd2: f64,
    pub n_pl: f64,
    pub n_cav1: f64,
    pub n_cav2: f64,
    pub n_total: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "C_ph")]
    pub c_ph: Option<f64>,
    #[serde(rename = "C_tot")]
    pub c_tot: Option<f64>,
    #[serde(rename = "F2")]
    pub f2: f64,
    pub g2_11: Option<f64>,
    pub g2_22: Option<f64>,
    pub g2_12: Option<f64>,
    pub trace_err: f64,
}

impl From<&Sample> for CsvRow {
    fn from(s: &Sample) -> Self {
        let r = &s.record;
        Self {
            t_fs: s.t_fs,
            n_qd1: r.n_qd[0],
            n_qd2: r.n_qd[1],
            n_pl: r.n_pl,
            n_cav1: r.n_cav[0],
            n_cav2: r.n_cav[1],
            n_total: r.n_total,
            c: r.concurrence,
            c_ph: r.concurrence_ph,
            c_tot: r.concurrence_tot,
            f2: r.fidelity_sq,
            g2_11: r.g2[0],
            g2_22: r.g2[1],
            g2_12: r.g2[2],
            trace_err: s.trace_error,
        }
    }
}

/// Streams a header block, rows and marker lines.
pub struct CsvSink<W: Write> {
    out: W,
}

impl<W: Write> CsvSink<W> {
    pub fn new(mut out: W, config: &ScenarioConfig) -> Result<Self> {
        writeln!(out, "# plexcav {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(out, "# scenario: {}", config.name)?;
        writeln!(out, "{CONFIG_BEGIN}")?;
        for line in config.to_toml().lines() {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "{CONFIG_END}")?;
        writeln!(out, "{}", CSV_COLUMNS.join(","))?;
        Ok(Self { out })
    }

    pub fn row(&mut self, row: &CsvRow) -> Result<()> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        writeln!(
            self.out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.t_fs,
            row.n_qd1,
            row.n_qd2,
            row.n_pl,
            row.n_cav1,
            row.n_cav2,
            row.n_total,
            row.c,
            opt(row.c_ph),
            opt(row.c_tot),
            row.f2,
            opt(row.g2_11),
            opt(row.g2_22),
            opt(row.g2_12),
            row.trace_err
        )?;
        Ok(())
    }

    pub fn switch(&mut self, t_fs: f64, n_pl: usize, n_ph: usize, discarded: f64) -> Result<()> {
        writeln!(self.out, "{SWITCH} t_fs={t_fs} n_pl_levels={n_pl} n_ph_levels={n_ph} discarded={discarded}")?;
        Ok(())
    }

    pub fn truncated(&mut self, reason: &str) -> Result<()> {
        writeln!(self.out, "{TRUNCATED}: {}", reason.replace('\n', " "))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Parsed CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub version: String,
    pub config: ScenarioConfig,
    pub rows: Vec<CsvRow>,
    pub truncated: Option<String>,
}

pub fn read_csv(text: &str) -> Result<CsvTable> {
    let bad = |msg: String| Error::Config { key: "csv".into(), msg };
    let version = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("# plexcav "))
        .ok_or_else(|| bad("missing version line".into()))?
        .to_string();
    let mut toml = String::new();
    let mut inside = false;
    let mut truncated = None;
    for line in text.lines() {
        if line == CONFIG_BEGIN {
            inside = true;
        } else if line == CONFIG_END {
            inside = false;
        } else if inside {
            let body = line.strip_prefix('#').ok_or_else(|| bad("unterminated config block".into()))?;
            toml.push_str(body.strip_prefix(' ').unwrap_or(body));
            toml.push('\n');
        } else if let Some(r) = line.strip_prefix(TRUNCATED) {
            truncated = Some(r.trim_start_matches(':').trim().to_string());
        }
    }
    let config = ScenarioConfig::from_toml(&toml)?;

    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?;
    if header.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(bad(format!("unexpected columns: {}", header.iter().collect::<Vec<_>>().join(","))));
    }
    let rows = reader.deserialize().collect::<std::result::Result<Vec<CsvRow>, _>>().map_err(|e| bad(e.to_string()))?;
    Ok(CsvTable { version, config, rows, truncated })
}
