//! Deterministic CSV and JSON emission.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use oscmirror::params::ConfigFile;
use oscmirror::spectrum::SurfaceRow;
use oscmirror::{PhysicalParams, RateSeries, SpectrumSeries, ValidationReport};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const RATE_HEADER: &str = "t_s,gamma_over_a21";
pub const SPECTRUM_HEADER: &str = "delta_rad_per_s,p_static,p_dynamic,p_total";
pub const SURFACE_HEADER: &str = "t_s,delta_rad_per_s,p_total";

/// Nine significant digits in scientific notation.
pub fn fmt_value(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn rate_csv(series: &RateSeries) -> String {
    let mut s = String::with_capacity(32 * (series.times.len() + 1));
    s.push_str(RATE_HEADER);
    s.push('\n');
    for (t, v) in series.times.iter().zip(&series.values) {
        let _ = writeln!(s, "{},{}", fmt_value(*t), fmt_value(*v));
    }
    s
}

pub fn spectrum_csv(series: &SpectrumSeries) -> String {
    let mut s = String::with_capacity(64 * (series.len() + 1));
    s.push_str(SPECTRUM_HEADER);
    s.push('\n');
    for i in 0..series.len() {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_value(series.detunings[i]),
            fmt_value(series.p_static[i]),
            fmt_value(series.p_dynamic[i]),
            fmt_value(series.p_total[i])
        );
    }
    s
}

pub fn surface_csv(rows: &[SurfaceRow]) -> String {
    let mut s = String::with_capacity(48 * (rows.len() + 1));
    s.push_str(SURFACE_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{},{},{}", fmt_value(r.t), fmt_value(r.delta), fmt_value(r.p_total));
    }
    s
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

/// Everything that determines the numbers in an output file.
#[derive(Serialize)]
pub struct Inputs<'a, S: Serialize> {
    pub command: &'a str,
    pub params: ConfigFile,
    pub settings: &'a S,
}

impl<'a, S: Serialize> Inputs<'a, S> {
    pub fn new(command: &'a str, p: &PhysicalParams, settings: &'a S) -> Self {
        Inputs {
            command,
            params: ConfigFile::from(p),
            settings,
        }
    }

    pub fn sha256(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("inputs serialize");
        hex::encode(Sha256::digest(&bytes))
    }
}

/// Sidecar metadata written next to every output file. Carries no
/// timestamps so that it is as reproducible as the data.
#[derive(Serialize)]
pub struct Metadata<'a, S: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    #[serde(flatten)]
    pub inputs: &'a Inputs<'a, S>,
    pub inputs_sha256: String,
    pub adiabatic: &'a ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<serde_json::Value>,
}

pub fn metadata_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    out.with_file_name(name)
}

pub fn write_metadata<S: Serialize>(
    out: &Path,
    inputs: &Inputs<'_, S>,
    adiabatic: &ValidationReport,
    extra: Option<serde_json::Value>,
) -> CliResult<()> {
    let meta = Metadata {
        tool: "oscmirror",
        version: env!("CARGO_PKG_VERSION"),
        inputs,
        inputs_sha256: inputs.sha256(),
        adiabatic,
        extra,
    };
    emit(Some(&metadata_path(out)), &json(&meta))
}
