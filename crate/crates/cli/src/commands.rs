use std::f64::consts::PI;

use oscmirror::oracle::{run_validation_suite, OracleReport};
use oscmirror::params::{load_config, validate_adiabatic};
use oscmirror::rate::rate_series;
use oscmirror::spectrum::{envelope, find_peaks, spectrum_series, spectrum_surface, DEFAULT_PROMINENCE};
use oscmirror::{grid, PeakClass, PhysicalParams, RateOrder, Severity, SpectrumSeries, ValidationReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    Common, GridKind, OrderArg, PeaksArgs, RateArgs, RateGrid, SpectrumArgs, SpectrumGrid, SurfaceArgs, SweepArgs,
    SweepParam, SweepTarget,
};
use crate::error::{CliError, CliResult};
use crate::output::{self, Inputs};
use crate::resolvability::{resolvability, ResolvabilityReport};

pub fn load_params(common: &Common) -> CliResult<PhysicalParams> {
    Ok(match &common.config {
        Some(path) => load_config(path)?,
        None => PhysicalParams::line_spectrum_preset(),
    })
}

/// Prints warnings and refuses failing parameters unless allowed.
pub fn check_regime(p: &PhysicalParams, allow_invalid: bool) -> CliResult<ValidationReport> {
    let report = validate_adiabatic(p, None);
    for c in &report.checks {
        if c.severity != Severity::Pass {
            eprintln!(
                "warning kind=adiabatic check={} severity={} value={:.6e} threshold={:.6e}",
                c.name,
                if c.severity == Severity::Fail { "fail" } else { "warn" },
                c.value,
                c.threshold
            );
        }
    }
    if report.overall == Severity::Fail && !allow_invalid {
        let names: Vec<_> = report
            .checks
            .iter()
            .filter(|c| c.severity == Severity::Fail)
            .map(|c| format!("{}={:.3e}", c.name, c.value))
            .collect();
        return Err(CliError::NonAdiabatic(names.join(",")));
    }
    Ok(report)
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be a positive finite number, got {v}")))
    }
}

fn period_or(p: &PhysicalParams, static_default: f64) -> f64 {
    if p.omega_p > 0.0 {
        2.0 * PI / p.omega_p
    } else {
        static_default
    }
}

/// Half-width of the default detuning window: four mirror frequencies, but
/// never less than four sinc lobes.
fn default_half_width(p: &PhysicalParams, t: f64) -> f64 {
    (4.0 * p.omega_p).max(8.0 * PI / t)
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct RateSettings {
    pub t_start: f64,
    pub t_end: f64,
    pub n: usize,
    pub order: OrderArg,
}

impl RateSettings {
    pub fn resolve(p: &PhysicalParams, g: &RateGrid) -> CliResult<Self> {
        Ok(RateSettings {
            t_start: g.t_start.unwrap_or(0.0),
            t_end: g.t_end.unwrap_or_else(|| 2.0 * period_or(p, 0.5e-6)),
            n: g.n.unwrap_or(1000),
            order: g.order.unwrap_or_default(),
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct SpectrumSettings {
    pub t: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    pub n: usize,
    pub envelope: bool,
}

impl SpectrumSettings {
    pub fn resolve(p: &PhysicalParams, g: &SpectrumGrid, default_n: usize) -> CliResult<Self> {
        let t = positive("t", g.t.unwrap_or(1e-6))?;
        let w = default_half_width(p, t);
        Ok(SpectrumSettings {
            t,
            delta_min: g.delta_min.unwrap_or(-w),
            delta_max: g.delta_max.unwrap_or(w),
            n: g.n.unwrap_or(default_n),
            envelope: g.envelope,
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct PeaksSettings {
    #[serde(flatten)]
    pub spectrum: SpectrumSettings,
    pub prominence: f64,
    pub linewidth: Option<f64>,
}

impl PeaksSettings {
    pub fn resolve(p: &PhysicalParams, g: &SpectrumGrid, prominence: Option<f64>, linewidth: Option<f64>) -> CliResult<Self> {
        let prominence = prominence.unwrap_or(DEFAULT_PROMINENCE);
        if !(prominence.is_finite() && prominence >= 0.0) {
            return Err(CliError::Usage(format!("--prominence must be >= 0, got {prominence}")));
        }
        let linewidth = linewidth.map(|w| positive("linewidth", w)).transpose()?;
        let mut spectrum = SpectrumSettings::resolve(p, g, 8001)?;
        spectrum.envelope = true;
        Ok(PeaksSettings {
            spectrum,
            prominence,
            linewidth,
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct SurfaceSettings {
    pub delta_min: f64,
    pub delta_max: f64,
    pub n: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub n_t: usize,
}

pub fn compute_rate(p: &PhysicalParams, s: &RateSettings) -> CliResult<String> {
    let order = match s.order {
        OrderArg::Exact => RateOrder::Exact,
        OrderArg::First => RateOrder::FirstOrder,
    };
    let series = rate_series(p, s.t_start, s.t_end, s.n, order)?;
    Ok(output::rate_csv(&series))
}

pub fn compute_spectrum(p: &PhysicalParams, s: &SpectrumSettings) -> CliResult<SpectrumSeries> {
    let series = spectrum_series(p, s.delta_min, s.delta_max, s.n, s.t)?;
    Ok(if s.envelope { envelope(&series)? } else { series })
}

/// One entry of the `peaks` JSON array.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct PeakRow {
    pub offset: f64,
    pub height: f64,
    pub fwhm: f64,
    pub class: PeakClass,
}

pub struct PeaksOutput {
    pub rows: Vec<PeakRow>,
    pub resolvability: ResolvabilityReport,
    pub pairs: serde_json::Value,
}

pub fn compute_peaks(p: &PhysicalParams, s: &PeaksSettings) -> CliResult<PeaksOutput> {
    let env = compute_spectrum(p, &s.spectrum)?;
    let report = find_peaks(&env, s.prominence)?;
    let rows = report
        .peaks
        .iter()
        .map(|pk| PeakRow {
            offset: pk.offset,
            height: pk.height,
            fwhm: pk.fwhm,
            class: pk.class,
        })
        .collect();
    Ok(PeaksOutput {
        rows,
        resolvability: resolvability(p, s.linewidth),
        pairs: serde_json::to_value(&report.pairs).expect("pairs serialize"),
    })
}

fn finish<S: Serialize>(
    common: &Common,
    command: &str,
    p: &PhysicalParams,
    settings: &S,
    regime: &ValidationReport,
    contents: &str,
    extra: Option<serde_json::Value>,
) -> CliResult<()> {
    output::emit(common.out.as_deref(), contents)?;
    if let Some(out) = &common.out {
        output::write_metadata(out, &Inputs::new(command, p, settings), regime, extra)?;
    }
    Ok(())
}

pub fn rate(a: &RateArgs) -> CliResult<()> {
    let p = load_params(&a.common)?;
    let regime = check_regime(&p, a.common.allow_invalid)?;
    let s = RateSettings::resolve(&p, &a.grid)?;
    let csv = compute_rate(&p, &s)?;
    finish(&a.common, "rate", &p, &s, &regime, &csv, None)
}

pub fn spectrum(a: &SpectrumArgs) -> CliResult<()> {
    let p = load_params(&a.common)?;
    let regime = check_regime(&p, a.common.allow_invalid)?;
    let s = SpectrumSettings::resolve(&p, &a.grid, 4001)?;
    let series = compute_spectrum(&p, &s)?;
    let extra = serde_json::json!({ "negative_samples": series.negative_samples });
    finish(&a.common, "spectrum", &p, &s, &regime, &output::spectrum_csv(&series), Some(extra))
}

pub fn surface(a: &SurfaceArgs) -> CliResult<()> {
    let p = load_params(&a.common)?;
    let regime = check_regime(&p, a.common.allow_invalid)?;
    let period = period_or(&p, 1e-6 / 50.0);
    let t_end = positive("t-end", a.t_end.unwrap_or(50.0 * period))?;
    let w = default_half_width(&p, t_end);
    let s = SurfaceSettings {
        delta_min: a.delta_min.unwrap_or(-w),
        delta_max: a.delta_max.unwrap_or(w),
        n: a.n.unwrap_or(401),
        t_start: a.t_start.unwrap_or(0.2 * period),
        t_end,
        n_t: a.n_t.unwrap_or(100),
    };
    let detunings = grid::linspace(s.delta_min, s.delta_max, s.n)?;
    let times = grid::linspace(s.t_start, s.t_end, s.n_t)?;
    let rows = spectrum_surface(&p, &detunings, &times)?;
    finish(&a.common, "surface", &p, &s, &regime, &output::surface_csv(&rows), None)
}

pub fn peaks(a: &PeaksArgs) -> CliResult<()> {
    let p = load_params(&a.common)?;
    let regime = check_regime(&p, a.common.allow_invalid)?;
    let s = PeaksSettings::resolve(&p, &a.grid, a.prominence, a.linewidth)?;
    let out = compute_peaks(&p, &s)?;
    let extra = serde_json::json!({ "resolvability": out.resolvability, "pairs": out.pairs });
    finish(&a.common, "peaks", &p, &s, &regime, &output::json(&out.rows), Some(extra))
}

pub fn validate(common: &Common) -> CliResult<()> {
    let p = load_params(common)?;
    let regime = check_regime(&p, common.allow_invalid)?;
    let reports: Vec<OracleReport> = run_validation_suite(&p);
    finish(common, "validate", &p, &(), &regime, &output::json(&reports), None)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation {
            failed: failed.len(),
            total: reports.len(),
            names: failed.join(","),
        })
    }
}

pub fn sweep_values(kind: GridKind, from: f64, to: f64, points: usize) -> CliResult<Vec<f64>> {
    if points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    match kind {
        GridKind::Linear => Ok(grid::linspace(from, to, points)?),
        GridKind::Geometric => {
            if !(from > 0.0 && to > 0.0) {
                return Err(CliError::Usage("geometric sweep needs positive --from and --to".into()));
            }
            let (la, lb) = (from.ln(), to.ln());
            Ok((0..points)
                .map(|i| {
                    if i == 0 {
                        from
                    } else if i == points - 1 {
                        to
                    } else {
                        (la + (lb - la) * i as f64 / (points - 1) as f64).exp()
                    }
                })
                .collect())
        }
    }
}

fn with_param(p: &PhysicalParams, which: SweepParam, v: f64) -> CliResult<PhysicalParams> {
    let mut q = *p;
    match which {
        SweepParam::Omega0 => q.omega0 = v,
        SweepParam::OmegaP => q.omega_p = v,
        SweepParam::Amplitude => q.amplitude = v,
        SweepParam::Z0 => q.z0 = v,
    }
    Ok(q.validated()?)
}

#[derive(Serialize)]
struct SweepEntry {
    index: usize,
    value: f64,
    file: String,
    inputs_sha256: String,
    adiabatic: Severity,
}

#[derive(Serialize)]
struct SweepIndex<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    target: SweepTarget,
    param: SweepParam,
    grid: GridKind,
    base_params: oscmirror::params::ConfigFile,
    points: Vec<SweepEntry>,
    inputs_sha256: &'a str,
}

pub fn sweep(a: &SweepArgs) -> CliResult<()> {
    let dir = a
        .common
        .out
        .as_deref()
        .ok_or_else(|| CliError::Usage("sweep needs --out DIR".into()))?;
    let base = load_params(&a.common)?;
    let values = sweep_values(a.grid, a.from, a.to, a.points)?;
    let spectrum_grid = SpectrumGrid {
        t: a.t,
        delta_min: a.delta_min,
        delta_max: a.delta_max,
        n: a.n,
        envelope: a.envelope,
    };
    let rate_grid = RateGrid {
        t_start: a.t_start,
        t_end: a.t_end,
        n: a.n,
        order: a.order,
    };

    // parameters and regime checks first, so that diagnostics come out in order
    let mut points = Vec::with_capacity(values.len());
    for &v in &values {
        let p = with_param(&base, a.param, v)?;
        let regime = check_regime(&p, a.common.allow_invalid)?;
        points.push((v, p, regime));
    }

    let ext = match a.what {
        SweepTarget::Peaks => "json",
        _ => "csv",
    };
    let results: Vec<CliResult<(String, String)>> = points
        .par_iter()
        .map(|(_, p, _)| match a.what {
            SweepTarget::Rate => {
                let s = RateSettings::resolve(p, &rate_grid)?;
                Ok((compute_rate(p, &s)?, Inputs::new("rate", p, &s).sha256()))
            }
            SweepTarget::Spectrum => {
                let s = SpectrumSettings::resolve(p, &spectrum_grid, 4001)?;
                let series = compute_spectrum(p, &s)?;
                Ok((output::spectrum_csv(&series), Inputs::new("spectrum", p, &s).sha256()))
            }
            SweepTarget::Peaks => {
                let s = PeaksSettings::resolve(p, &spectrum_grid, a.prominence, a.linewidth)?;
                let out = compute_peaks(p, &s)?;
                Ok((output::json(&out.rows), Inputs::new("peaks", p, &s).sha256()))
            }
        })
        .collect();

    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut entries = Vec::with_capacity(results.len());
    let mut hasher_input = String::new();
    for (i, (r, (v, _, regime))) in results.into_iter().zip(&points).enumerate() {
        let (contents, hash) = r?;
        let file = format!("{}_{i:03}.{ext}", target_name(a.what));
        output::emit(Some(&dir.join(&file)), &contents)?;
        hasher_input.push_str(&hash);
        entries.push(SweepEntry {
            index: i,
            value: *v,
            file,
            inputs_sha256: hash,
            adiabatic: regime.overall,
        });
    }
    let overall = {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(hasher_input.as_bytes()))
    };
    let index = SweepIndex {
        tool: "oscmirror",
        version: env!("CARGO_PKG_VERSION"),
        command: "sweep",
        target: a.what,
        param: a.param,
        grid: a.grid,
        base_params: (&base).into(),
        points: entries,
        inputs_sha256: &overall,
    };
    output::emit(Some(&dir.join("index.json")), &output::json(&index))
}

fn target_name(t: SweepTarget) -> &'static str {
    match t {
        SweepTarget::Rate => "rate",
        SweepTarget::Spectrum => "spectrum",
        SweepTarget::Peaks => "peaks",
    }
}
