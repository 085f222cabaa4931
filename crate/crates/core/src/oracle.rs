//! Brute-force cross-checks of the closed forms.
//!
//! Nothing here calls the closed-form brackets or kernels on the path that
//! produces a quadrature value: angular brackets are re-derived from the
//! scalar mode functions, the transverse polarisation projector and a
//! Gauss–Legendre rule over the solid angle; single-mode probabilities are
//! obtained by adaptive time quadrature along the exact plate trajectory.
//!
//! Conventions: the transverse factors of the mode functions contribute
//! their continuum mean square [`TRANSVERSE_WEIGHT`]; angular averages are
//! normalised by the same sum with every squared scalar mode function
//! replaced by its far-field mean `1/2`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::{expansion_coeffs, mode_scalar, MirrorTrajectory, ModeKind};
use crate::params::PhysicalParams;
use crate::quadrature::{integrate_adaptive, GaussLegendre, Tolerance};
use crate::rate::{self, BracketKind, RateOrder};
use crate::spectrum;

/// Mean square of the transverse mode factors in the continuum limit.
pub const TRANSVERSE_WEIGHT: f64 = 2.0;

/// Default number of Gauss–Legendre nodes in `cos(theta)`.
pub const DEFAULT_NODES: usize = 128;

// Equally spaced azimuths; exact for the cos^2(phi) structure of the projector.
const AZIMUTH_NODES: usize = 8;

/// Propagation direction of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Direction {
    /// Polar angle from the plate normal, `[0, pi]`.
    pub theta: f64,
    /// Azimuth, `[0, 2 pi)`.
    pub phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Self {
        Direction { theta, phi }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

pub type Matrix3 = [[f64; 3]; 3];

/// Transverse projector `delta_lm - k_l k_m`, the polarisation sum of the
/// two photon polarisations.
pub fn polarization_tensor(dir: &Direction) -> Matrix3 {
    let k = dir.unit_vector();
    let mut m = [[0.0; 3]; 3];
    for (l, row) in m.iter_mut().enumerate() {
        for (n, v) in row.iter_mut().enumerate() {
            *v = f64::from(u8::from(l == n)) - k[l] * k[n];
        }
    }
    m
}

/// Dipole components (axis index, weight) averaged by a bracket.
fn components(kind: BracketKind) -> &'static [(ModeKind, f64)] {
    const RANDOM: [(ModeKind, f64); 3] = [
        (ModeKind::ParallelX, 1.0 / 3.0),
        (ModeKind::ParallelY, 1.0 / 3.0),
        (ModeKind::PerpendicularZ, 1.0 / 3.0),
    ];
    const PAR: [(ModeKind, f64); 1] = [(ModeKind::ParallelX, 1.0)];
    const PERP: [(ModeKind, f64); 1] = [(ModeKind::PerpendicularZ, 1.0)];
    match kind {
        BracketKind::RParallel => &PAR,
        BracketKind::RPerpendicular => &PERP,
        _ => &RANDOM,
    }
}

/// Squared-mode integrand of a bracket for one dipole component, in units
/// where `k0 = 1` and `z0 = U / 2`; `mu = cos(theta)`.
fn bracket_integrand(kind: BracketKind, mode: ModeKind, u: f64, mu: f64) -> f64 {
    let z0 = 0.5 * u;
    let kz = mu;
    let e = expansion_coeffs(mode, kz, z0);
    let w = TRANSVERSE_WEIGHT;
    match kind {
        BracketKind::B0Random | BracketKind::RParallel | BracketKind::RPerpendicular => w * e.f0 * e.f0,
        // -z0 d/dz0 of the static bracket: -2 z0 <f0 f1>
        BracketKind::B1RandomFirstOrder => -2.0 * z0 * w * e.f0 * e.f1,
        // <f1^2> / k0^2
        BracketKind::B2Spectrum => w * e.f1 * e.f1,
        // <f2 f0> / k0^2 = -<kz^2 f0^2> / k0^2
        BracketKind::B3Spectrum => w * e.f2 * e.f0,
    }
}

/// Angular bracket by product quadrature over the solid angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularQuadrature {
    pub value: f64,
    /// `|Q(n) - Q(2n)|`.
    pub error_estimate: f64,
    pub nodes: usize,
}

fn angular_sum(kind: BracketKind, u: f64, gl: &GaussLegendre) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&mu, &w_mu) in gl.nodes.iter().zip(&gl.weights) {
        let theta = mu.clamp(-1.0, 1.0).acos();
        for j in 0..AZIMUTH_NODES {
            let phi = 2.0 * PI * j as f64 / AZIMUTH_NODES as f64;
            let proj = polarization_tensor(&Direction::new(theta, phi));
            let w = w_mu / AZIMUTH_NODES as f64;
            for &(mode, weight) in components(kind) {
                let a = mode.axis();
                num += w * weight * proj[a][a] * bracket_integrand(kind, mode, u, mu);
                den += w * weight * proj[a][a] * TRANSVERSE_WEIGHT * 0.5;
            }
        }
    }
    num / den
}

/// Re-derives a bracket from the mode functions with `n_nodes` Gauss–Legendre
/// nodes in `cos(theta)`. Fails when doubling the nodes moves the result by
/// more than `1e-10` relative.
pub fn angular_bracket_quadrature(kind: BracketKind, u: f64, n_nodes: usize) -> Result<AngularQuadrature> {
    if n_nodes < 2 {
        return Err(Error::QuadratureNonConvergence {
            achieved: f64::INFINITY,
            target: 1e-10,
            intervals: n_nodes,
        });
    }
    let coarse = angular_sum(kind, u, &GaussLegendre::new(n_nodes));
    let fine = angular_sum(kind, u, &GaussLegendre::new(2 * n_nodes));
    let error_estimate = (coarse - fine).abs();
    let target = 1e-10 * fine.abs().max(1e-6);
    if error_estimate > target {
        return Err(Error::QuadratureNonConvergence {
            achieved: error_estimate,
            target,
            intervals: n_nodes,
        });
    }
    Ok(AngularQuadrature {
        value: coarse,
        error_estimate,
        nodes: n_nodes,
    })
}

/// Same sum without the doubling check, for convergence studies.
pub fn angular_bracket_fixed(kind: BracketKind, u: f64, n_nodes: usize) -> f64 {
    angular_sum(kind, u, &GaussLegendre::new(n_nodes))
}

/// `int_0^t f(kz z(t')) e^{i delta t'} dt'` along the exact trajectory, as
/// `(re, im)`.
pub fn mode_time_integral(
    kind: ModeKind,
    kz: f64,
    traj: &MirrorTrajectory,
    delta: f64,
    t: f64,
    quad_tol: f64,
) -> Result<(f64, f64)> {
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }
    // on the unit interval |f| <= 1, so quad_tol doubles as the absolute floor
    let f = |s: f64| mode_scalar(kind, kz, traj.distance(s * t));
    let tol = Tolerance {
        rel_tol: quad_tol,
        abs_tol: quad_tol,
        max_intervals: 50_000,
    };
    let re = integrate_adaptive(|s| f(s) * (delta * s * t).cos(), 0.0, 1.0, tol)?;
    let im = integrate_adaptive(|s| f(s) * (delta * s * t).sin(), 0.0, 1.0, tol)?;
    Ok((re.value * t, im.value * t))
}

/// Polarisation- and orientation-weighted single-mode factor
/// `sum_l w_l P_ll(k) TRANSVERSE_WEIGHT g_l`, with `g_l` supplied per
/// dipole component.
fn weighted_over_components(p: &PhysicalParams, dir: &Direction, mut g: impl FnMut(ModeKind) -> Result<f64>) -> Result<f64> {
    let proj = polarization_tensor(dir);
    let comps: &[(ModeKind, f64)] = match p.orientation {
        crate::params::Orientation::X => &[(ModeKind::ParallelX, 1.0)],
        crate::params::Orientation::Y => &[(ModeKind::ParallelY, 1.0)],
        crate::params::Orientation::Z => &[(ModeKind::PerpendicularZ, 1.0)],
        crate::params::Orientation::Random => components(BracketKind::B0Random),
    };
    let mut acc = 0.0;
    for &(mode, w) in comps {
        let a = mode.axis();
        acc += w * proj[a][a] * TRANSVERSE_WEIGHT * g(mode)?;
    }
    Ok(acc)
}

/// Emission probability into the mode `(dir, |k| = k)` along the exact
/// trajectory, summed over polarisations, detuning `c k - omega0`.
pub fn exact_mode_probability(p: &PhysicalParams, dir: &Direction, k: f64, t: f64, quad_tol: f64) -> Result<f64> {
    exact_mode_probability_at(p, dir, k, p.c * k - p.omega0, t, quad_tol)
}

/// As [`exact_mode_probability`] with the detuning given explicitly, which
/// avoids the cancellation in `c k - omega0`.
pub fn exact_mode_probability_at(
    p: &PhysicalParams,
    dir: &Direction,
    k: f64,
    delta: f64,
    t: f64,
    quad_tol: f64,
) -> Result<f64> {
    let kz = k * dir.theta.cos();
    let traj = p.trajectory();
    weighted_over_components(p, dir, |mode| {
        let (re, im) = mode_time_integral(mode, kz, &traj, delta, t, quad_tol)?;
        Ok(re * re + im * im)
    })
}

/// The second-order expansion of the same quantity, built from
/// [`spectrum::mode_probability_expanded`].
pub fn expanded_mode_probability_at(p: &PhysicalParams, dir: &Direction, k: f64, delta: f64, t: f64) -> f64 {
    let kz = k * dir.theta.cos();
    weighted_over_components(p, dir, |mode| Ok(spectrum::mode_probability_expanded(p, mode, kz, delta, t)))
        .expect("closed form cannot fail")
}

/// Randomly oriented spectral density assembled from exact single-mode
/// probabilities over the solid angle, with the angular structure taken at
/// the resonant wavenumber `k0`. Units match [`spectrum::spectrum_total`].
pub fn spectrum_by_quadrature(p: &PhysicalParams, delta: f64, t: f64) -> Result<f64> {
    spectrum_by_quadrature_with(p, delta, t, DEFAULT_NODES, 1e-11)
}

pub fn spectrum_by_quadrature_with(p: &PhysicalParams, delta: f64, t: f64, n_nodes: usize, quad_tol: f64) -> Result<f64> {
    let gl = GaussLegendre::new(n_nodes);
    let k0 = p.k0();
    let traj = p.trajectory();
    let comps = components(BracketKind::B0Random);
    let per_node: Vec<Result<(f64, f64)>> = gl
        .nodes
        .par_iter()
        .zip(gl.weights.par_iter())
        .map(|(&mu, &w_mu)| {
            let kz = k0 * mu;
            let theta = mu.clamp(-1.0, 1.0).acos();
            let mut probs = [0.0; 3];
            for &(mode, _) in comps {
                let (re, im) = mode_time_integral(mode, kz, &traj, delta, t, quad_tol)?;
                probs[mode.axis()] = re * re + im * im;
            }
            let mut num = 0.0;
            let mut den = 0.0;
            for j in 0..AZIMUTH_NODES {
                let phi = 2.0 * PI * j as f64 / AZIMUTH_NODES as f64;
                let proj = polarization_tensor(&Direction::new(theta, phi));
                let w = w_mu / AZIMUTH_NODES as f64;
                for &(mode, weight) in comps {
                    let a = mode.axis();
                    num += w * weight * proj[a][a] * TRANSVERSE_WEIGHT * probs[a];
                    den += w * weight * proj[a][a] * TRANSVERSE_WEIGHT * 0.5;
                }
            }
            Ok((num, den))
        })
        .collect();
    let mut num = 0.0;
    let mut den = 0.0;
    for r in per_node {
        let (a, b) = r?;
        num += a;
        den += b;
    }
    Ok(num / den / (2.0 * PI))
}

/// One oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub name: String,
    pub closed_form: f64,
    pub quadrature: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub nodes: usize,
}

impl OracleReport {
    /// Passes when the relative error is within `tolerance`.
    pub fn compare(name: impl Into<String>, closed_form: f64, quadrature: f64, tolerance: f64, nodes: usize) -> Self {
        let abs_error = (closed_form - quadrature).abs();
        let rel_error = if closed_form != 0.0 {
            abs_error / closed_form.abs()
        } else {
            abs_error
        };
        OracleReport {
            name: name.into(),
            closed_form,
            quadrature,
            abs_error,
            rel_error,
            tolerance,
            pass: rel_error <= tolerance,
            nodes,
        }
    }

    fn failed(name: impl Into<String>, closed_form: f64, tolerance: f64, nodes: usize) -> Self {
        OracleReport {
            name: name.into(),
            closed_form,
            quadrature: f64::NAN,
            abs_error: f64::NAN,
            rel_error: f64::INFINITY,
            tolerance,
            pass: false,
            nodes,
        }
    }
}

/// Phases at which every bracket is re-derived.
pub const SUITE_PHASES: [f64; 7] = [0.1, 0.5, 1.0, PI, 2.0 * PI, 10.0, 50.0];

/// Sample modes `(theta, phi, delta / omega_p)` for the exact-vs-expansion sweep.
pub const SWEEP_MODES: [(f64, f64, f64); 5] = [
    (0.3, 0.2, 0.0),
    (0.9, 1.1, 1.0),
    (1.3, 2.0, -1.0),
    (2.2, 0.7, 0.45),
    (2.8, 4.0, 2.0),
];

/// Residual of the second-order expansion of a single-mode probability
/// against the exact quadrature, for amplitude `a`.
pub fn expansion_residual(p: &PhysicalParams, dir: &Direction, delta: f64, t: f64, a: f64) -> Result<f64> {
    let q = p.with_amplitude(a)?;
    let k = (p.omega0 + delta) / p.c;
    let exact = exact_mode_probability_at(&q, dir, k, delta, t, 1e-13)?;
    let expanded = expanded_mode_probability_at(&q, dir, k, delta, t);
    Ok(exact - expanded)
}

/// Successive ratios `r(a) / r(a/2)` for `a = a_start, a_start/2, ...`.
pub fn halving_ratios(steps: usize, a_start: f64, mut residual: impl FnMut(f64) -> Result<f64>) -> Result<Vec<f64>> {
    let mut a = a_start;
    let mut prev = residual(a)?;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        a *= 0.5;
        let r = residual(a)?;
        out.push(prev / r);
        prev = r;
    }
    Ok(out)
}

/// Runs every oracle check for `p` against the crate's closed forms.
pub fn run_validation_suite(p: &PhysicalParams) -> Vec<OracleReport> {
    run_validation_suite_with(p, &rate::bracket)
}

/// As [`run_validation_suite`] with the closed-form brackets supplied by
/// the caller, so that a wrong transcription can be detected.
pub fn run_validation_suite_with(p: &PhysicalParams, closed: &(dyn Fn(BracketKind, f64) -> f64 + Sync)) -> Vec<OracleReport> {
    let mut reports: Vec<OracleReport> = SUITE_PHASES
        .par_iter()
        .flat_map_iter(|&u| {
            BracketKind::ALL.into_iter().map(move |kind| {
                let name = format!("bracket/{}@U={u:.6}", kind.name());
                match angular_bracket_quadrature(kind, u, DEFAULT_NODES) {
                    Ok(q) => OracleReport::compare(name, closed(kind, u), q.value, 1e-8, q.nodes),
                    Err(_) => OracleReport::failed(name, closed(kind, u), 1e-8, DEFAULT_NODES),
                }
            })
        })
        .collect();

    reports.extend(node_doubling_reports());

    let t = suite_time(p);
    reports.push(static_normalization_report(p, t));
    if p.omega_p > 0.0 {
        reports.push(parseval_report(p, t, closed));
    }
    reports.push(first_order_rate_scaling_report(p));
    reports.extend(expansion_sweep_reports(p, sweep_time(p)));
    reports.extend(spectrum_oracle_reports(p, t));
    reports
}

/// Observation time used by the suite: 25.5 mirror periods, so that the
/// first-order time integral is at its maximum, or 1 us for a static plate.
pub fn suite_time(p: &PhysicalParams) -> f64 {
    if p.omega_p > 0.0 {
        25.5 * 2.0 * PI / p.omega_p
    } else {
        1e-6
    }
}

fn node_doubling_reports() -> Vec<OracleReport> {
    // errors must shrink at least quadratically under node doubling until
    // they reach round-off
    let u = 10.0;
    BracketKind::ALL
        .into_iter()
        .map(|kind| {
            let reference = angular_bracket_fixed(kind, u, 256);
            let mut worst = 0.0f64;
            let mut n = 8;
            let mut prev = (angular_bracket_fixed(kind, u, n) - reference).abs();
            while n < 64 {
                n *= 2;
                let e = (angular_bracket_fixed(kind, u, n) - reference).abs();
                if prev > 1e-13 {
                    worst = worst.max(e / prev * 4.0);
                }
                prev = e;
            }
            OracleReport {
                name: format!("node_doubling/{}@U=10", kind.name()),
                closed_form: 1.0,
                quadrature: worst,
                abs_error: worst,
                rel_error: worst,
                tolerance: 1.0,
                pass: worst <= 1.0,
                nodes: 64,
            }
        })
        .collect()
}

/// `int p_static d delta` over `|delta| <= 400 pi / t` against `B0 t`.
pub fn static_integral(p: &PhysicalParams, t: f64) -> f64 {
    let w = 400.0 * PI / t;
    let gl = GaussLegendre::new(16);
    // one panel per half lobe of the sinc
    gl.integrate_composite(-w, w, 800, |d| spectrum::spectrum_static(p, d, t))
}

fn static_normalization_report(p: &PhysicalParams, t: f64) -> OracleReport {
    let expected = rate::bracket(BracketKind::B0Random, p.u0()) * t;
    OracleReport::compare("normalization/static", expected, static_integral(p, t), 2e-3, 16)
}

/// `int (1/2pi)(a/2z0) h1 B1 d delta` over the whole line.
///
/// Quadrature covers `|delta| <= w`; beyond it `h1` has the non-oscillating
/// tail `sin(wp t) (1/(d (d + wp)) + 1/(d (d - wp)))`, which is added in
/// closed form. Without it the truncation error is `~ 4 sin(wp t) / w`,
/// several percent of the total over many periods.
pub fn first_order_spectral_integral(p: &PhysicalParams, t: f64, closed: &dyn Fn(BracketKind, f64) -> f64) -> f64 {
    let wp = p.omega_p;
    let w = (400.0 * PI / t).max(8.0 * wp);
    let gl = GaussLegendre::new(16);
    let coeff = p.amplitude / (2.0 * p.z0) * closed(BracketKind::B1RandomFirstOrder, p.u0()) / (2.0 * PI);
    // panels fine enough for the +-omega_p shifted sincs as well
    let panels = 800usize.max((2.0 * w / (wp.min(PI / t) * 0.5)).ceil() as usize);
    let inner = gl.integrate_composite(-w, w, panels, |d| spectrum::h_kernel(spectrum::HKernel::H1, d, wp, t));
    let tail = if wp > 0.0 {
        2.0 * (wp * t).sin() * ((wp / w).ln_1p() - (-wp / w).ln_1p()) / wp
    } else {
        0.0
    };
    coeff * (inner + tail)
}

/// Time integral of the first-order rate modulation.
pub fn first_order_time_integral(p: &PhysicalParams, t: f64, closed: &dyn Fn(BracketKind, f64) -> f64) -> f64 {
    p.amplitude / p.z0 * closed(BracketKind::B1RandomFirstOrder, p.u0()) * (1.0 - (p.omega_p * t).cos()) / p.omega_p
}

fn parseval_report(p: &PhysicalParams, t: f64, closed: &(dyn Fn(BracketKind, f64) -> f64 + Sync)) -> OracleReport {
    let spectral = first_order_spectral_integral(p, t, closed);
    let temporal = first_order_time_integral(p, t, closed);
    if p.amplitude == 0.0 {
        return OracleReport::compare("normalization/first_order_parseval", 0.0, spectral, 1e-2, 16);
    }
    OracleReport::compare("normalization/first_order_parseval", temporal, spectral, 1e-2, 16)
}

/// Max over one period of `|Gamma_exact - Gamma_first_order|`.
pub fn first_order_rate_residual(p: &PhysicalParams) -> f64 {
    let p = p.with_orientation(crate::params::Orientation::Random);
    let period = if p.omega_p > 0.0 { 2.0 * PI / p.omega_p } else { 1.0 };
    let exact = rate::rate_series(&p, 0.0, period, 2001, RateOrder::Exact).expect("valid grid");
    let first = rate::rate_series(&p, 0.0, period, 2001, RateOrder::FirstOrder).expect("random orientation");
    exact
        .values
        .iter()
        .zip(&first.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn first_order_rate_scaling_report(p: &PhysicalParams) -> OracleReport {
    let name = "scaling/first_order_rate";
    if p.amplitude == 0.0 || p.omega_p == 0.0 {
        return OracleReport::compare(name, 0.0, first_order_rate_residual(p), 0.0, 0);
    }
    let ratios = halving_ratios(1, p.amplitude, |a| Ok(first_order_rate_residual(&p.with_amplitude(a)?)));
    match ratios {
        Ok(r) => OracleReport::compare(name, 4.0, r[0], 0.2, 0),
        Err(_) => OracleReport::failed(name, 4.0, 0.2, 0),
    }
}

/// Largest amplitude used by the exact-vs-expansion sweep: small enough
/// that the cubic term dominates.
pub fn sweep_start_amplitude(p: &PhysicalParams) -> f64 {
    p.amplitude.min(1e-3 / p.k0())
}

/// Observation time of the exact-vs-expansion sweep, `omega_p t = 3`.
///
/// Over many periods the cubic coefficient only grows like `t / omega_p`
/// while the quartic one grows like `t^2`, so long windows need ever smaller
/// amplitudes to show the cubic law.
pub fn sweep_time(p: &PhysicalParams) -> f64 {
    if p.omega_p > 0.0 {
        3.0 / p.omega_p
    } else {
        1e-6
    }
}

fn expansion_sweep_reports(p: &PhysicalParams, t: f64) -> Vec<OracleReport> {
    SWEEP_MODES
        .par_iter()
        .map(|&(theta, phi, frac)| {
            let dir = Direction::new(theta, phi);
            let delta = frac * p.omega_p;
            let name = format!("scaling/exact_vs_expansion@theta={theta},phi={phi},delta={frac}wp");
            if p.amplitude == 0.0 {
                // static plate: both paths reduce to the same sinc^2 line
                let k = (p.omega0 + delta) / p.c;
                let expanded = expanded_mode_probability_at(p, &dir, k, delta, t);
                return match exact_mode_probability_at(p, &dir, k, delta, t, 1e-13) {
                    Ok(exact) => OracleReport::compare(name, expanded, exact, 1e-9, 0),
                    Err(_) => OracleReport::failed(name, expanded, 1e-9, 0),
                };
            }
            let a0 = sweep_start_amplitude(p);
            match halving_ratios(1, a0, |a| expansion_residual(p, &dir, delta, t, a)) {
                Ok(r) => OracleReport::compare(name, 8.0, r[0], 0.5, 0),
                Err(_) => OracleReport::failed(name, 8.0, 0.5, 0),
            }
        })
        .collect()
}

fn spectrum_oracle_reports(p: &PhysicalParams, t: f64) -> Vec<OracleReport> {
    let mut out = Vec::new();
    // static plate: the oracle must reproduce the zeroth-order line exactly
    let st = p.with_amplitude(0.0).expect("zero amplitude is valid");
    let closed = spectrum::spectrum_total(&st, 0.0, t);
    out.push(match spectrum_by_quadrature(&st, 0.0, t) {
        Ok(q) => OracleReport::compare("spectrum/static_line_centre", closed, q, 1e-6, DEFAULT_NODES),
        Err(_) => OracleReport::failed("spectrum/static_line_centre", closed, 1e-6, DEFAULT_NODES),
    });
    if p.omega_p > 0.0 {
        let d = p.omega_p;
        let pair = spectrum_by_quadrature(p, d, t).and_then(|a| Ok((a, spectrum_by_quadrature(p, -d, t)?)));
        out.push(match pair {
            Ok((a, b)) => OracleReport::compare("spectrum/oracle_parity@+-wp", a, b, 1e-9, DEFAULT_NODES),
            Err(_) => OracleReport::failed("spectrum/oracle_parity@+-wp", f64::NAN, 1e-9, DEFAULT_NODES),
        });
    }
    out
}
