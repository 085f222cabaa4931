//! Finite-time emission spectrum to second order in the plate amplitude.
//!
//! Densities are in units of `A21` per rad/s and are functions of the
//! detuning `delta = omega_k - omega0`. The static part is the familiar
//! finite-time line of an atom near a fixed plate; the dynamic part carries
//! the sidebands at `+-omega_p` and `+-2 omega_p`.

mod peaks;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::grid::linspace;
use crate::modes::{expansion_coeffs, ModeKind};
use crate::params::PhysicalParams;
use crate::rate::{bracket, BracketKind};

pub use peaks::{envelope, find_peaks, Peak, PeakClass, PeakReport, DEFAULT_PROMINENCE};

/// Finite-time resonance factor `sin(x t / 2) / (x / 2)`, equal to `t` at
/// `x = 0` and even in `x`.
pub fn sinc_kernel(x: f64, t: f64) -> f64 {
    let y = 0.5 * x * t;
    if y.abs() < 1e-4 {
        let y2 = y * y;
        t * (1.0 - y2 / 6.0 * (1.0 - y2 / 20.0))
    } else {
        y.sin() / (0.5 * x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HKernel {
    /// First-order cross term, lines at `0` and `+-omega_p`.
    H1,
    /// Square of the first-order sidebands.
    H2,
    /// Second-order correction interfering with the central line; carries
    /// the `+-2 omega_p` structure.
    H3,
}

/// Resonance kernels of the dynamic spectrum, in s^2.
pub fn h_kernel(which: HKernel, delta: f64, omega_p: f64, t: f64) -> f64 {
    let s = |x: f64| sinc_kernel(x, t);
    match which {
        HKernel::H1 => (0.5 * omega_p * t).sin() * s(delta) * (s(delta + omega_p) + s(delta - omega_p)),
        HKernel::H2 => {
            let (sp, sm) = (s(delta + omega_p), s(delta - omega_p));
            sp * sp + sm * sm - 2.0 * (omega_p * t).cos() * sp * sm
        }
        HKernel::H3 => {
            let s0 = s(delta);
            s0 * s0
                - (omega_p * t).cos() * s0 * 0.5 * (s(delta + 2.0 * omega_p) + s(delta - 2.0 * omega_p))
        }
    }
}

/// Static-plate density `(1/2pi) s(delta,t)^2 B0(U0)`.
pub fn spectrum_static(p: &PhysicalParams, delta: f64, t: f64) -> f64 {
    let s = sinc_kernel(delta, t);
    s * s * bracket(BracketKind::B0Random, p.u0()) / (2.0 * PI)
}

/// The three channels of the dynamic density, already weighted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicTerms {
    pub first_order: f64,
    pub sideband_square: f64,
    pub second_order: f64,
}

impl DynamicTerms {
    pub fn total(&self) -> f64 {
        self.first_order + self.sideband_square + self.second_order
    }
}

pub fn spectrum_dynamic_terms(p: &PhysicalParams, delta: f64, t: f64) -> DynamicTerms {
    let u0 = p.u0();
    let ak0 = p.amplitude * p.k0();
    let norm = 1.0 / (2.0 * PI);
    DynamicTerms {
        first_order: norm
            * (p.amplitude / (2.0 * p.z0))
            * h_kernel(HKernel::H1, delta, p.omega_p, t)
            * bracket(BracketKind::B1RandomFirstOrder, u0),
        sideband_square: norm
            * (0.5 * ak0).powi(2)
            * h_kernel(HKernel::H2, delta, p.omega_p, t)
            * bracket(BracketKind::B2Spectrum, u0),
        second_order: norm
            * (ak0 * ak0 / 2.0)
            * h_kernel(HKernel::H3, delta, p.omega_p, t)
            * bracket(BracketKind::B3Spectrum, u0),
    }
}

/// Change of the density caused by the plate motion.
pub fn spectrum_dynamic(p: &PhysicalParams, delta: f64, t: f64) -> f64 {
    spectrum_dynamic_terms(p, delta, t).total()
}

pub fn spectrum_total(p: &PhysicalParams, delta: f64, t: f64) -> f64 {
    spectrum_static(p, delta, t) + spectrum_dynamic(p, delta, t)
}

/// Second-order expansion of the single-mode emission probability
/// `|int_0^t f(z(t')) e^{i delta t'} dt'|^2` for the scalar mode function of
/// `kind` with wavevector component `kz`. Same normalisation as
/// [`crate::oracle::exact_mode_probability`].
pub fn mode_probability_expanded(p: &PhysicalParams, kind: ModeKind, kz: f64, delta: f64, t: f64) -> f64 {
    let e = expansion_coeffs(kind, kz, p.z0);
    let a = p.amplitude;
    let s = sinc_kernel(delta, t);
    e.f0 * e.f0 * s * s - a * e.f0 * e.f1 * h_kernel(HKernel::H1, delta, p.omega_p, t)
        + 0.25 * a * a * e.f1 * e.f1 * h_kernel(HKernel::H2, delta, p.omega_p, t)
        - 0.5 * a * a * kz * kz * e.f0 * e.f0 * h_kernel(HKernel::H3, delta, p.omega_p, t)
}

/// Spectrum sampled on a uniform detuning grid at fixed time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSeries {
    pub detunings: Vec<f64>,
    pub p_static: Vec<f64>,
    pub p_dynamic: Vec<f64>,
    pub p_total: Vec<f64>,
    pub t: f64,
    pub params: PhysicalParams,
    /// Samples where the perturbative total came out negative.
    pub negative_samples: usize,
}

impl SpectrumSeries {
    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }

    /// Grid spacing; zero for fewer than two points.
    pub fn spacing(&self) -> f64 {
        match self.detunings.as_slice() {
            [a, b, ..] => b - a,
            _ => 0.0,
        }
    }

    fn from_columns(detunings: Vec<f64>, p_static: Vec<f64>, p_dynamic: Vec<f64>, t: f64, params: PhysicalParams) -> Self {
        let p_total: Vec<f64> = p_static.iter().zip(&p_dynamic).map(|(s, d)| s + d).collect();
        let negative_samples = p_total.iter().filter(|v| **v < 0.0).count();
        SpectrumSeries {
            detunings,
            p_static,
            p_dynamic,
            p_total,
            t,
            params,
            negative_samples,
        }
    }
}

pub fn spectrum_series(p: &PhysicalParams, delta_min: f64, delta_max: f64, n: usize, t: f64) -> Result<SpectrumSeries> {
    let detunings = linspace(delta_min, delta_max, n)?;
    let (p_static, p_dynamic): (Vec<f64>, Vec<f64>) = detunings
        .par_iter()
        .map(|&d| (spectrum_static(p, d, t), spectrum_dynamic(p, d, t)))
        .unzip();
    Ok(SpectrumSeries::from_columns(detunings, p_static, p_dynamic, t, *p))
}

/// One row of the long-format `(t, delta)` surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub t: f64,
    pub delta: f64,
    pub p_total: f64,
}

/// Total density over a time grid (outer) and detuning grid (inner).
pub fn spectrum_surface(p: &PhysicalParams, detunings: &[f64], times: &[f64]) -> Result<Vec<SurfaceRow>> {
    validate_axis("detuning", detunings)?;
    validate_axis("time", times)?;
    if times.iter().any(|&t| t < 0.0) {
        return Err(crate::Error::InvalidGrid("times must be >= 0".into()));
    }
    Ok(times
        .par_iter()
        .flat_map_iter(|&t| {
            detunings.iter().map(move |&d| SurfaceRow {
                t,
                delta: d,
                p_total: spectrum_total(p, d, t),
            })
        })
        .collect())
}

fn validate_axis(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(crate::Error::InvalidGrid(format!("{name} grid is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(crate::Error::InvalidGrid(format!("{name} grid has non-finite values")));
    }
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(crate::Error::InvalidGrid(format!("{name} grid must be strictly ascending")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;
    use rand::{Rng, SeedableRng};

    fn line_preset() -> PhysicalParams {
        PhysicalParams::line_spectrum_preset()
    }

    #[test]
    fn sinc_kernel_basics() {
        let t = 1e-6;
        assert_eq!(sinc_kernel(0.0, t), t);
        assert!(sinc_kernel(2.0 * PI / t, t).abs() < 1e-20);
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-1e9..1e9);
            assert_eq!(sinc_kernel(x, t), sinc_kernel(-x, t));
        }
        // series branch joins the direct formula
        let x = 2e-4 / t;
        let direct = (0.5 * x * t).sin() / (0.5 * x);
        assert!(((sinc_kernel(x * 0.999, t) - direct) / direct).abs() < 1e-6);
        assert!(((sinc_kernel(x * 0.4, t) - (4e-5f64).sin() / (4e-5 / t)) / t).abs() < 1e-15);
    }

    #[test]
    fn h1_limits() {
        let (wp, t) = (1.5e8, 1e-6);
        let v = h_kernel(HKernel::H1, 0.0, wp, t);
        let expected = 4.0 * t / wp * (0.5 * wp * t).sin().powi(2);
        assert!(((v - expected) / expected).abs() < 1e-12);
        let period = 2.0 * PI / wp;
        for d in [-3e8, -1.5e8, 0.0, 1e7, 4.4e8] {
            assert!(h_kernel(HKernel::H1, d, wp, period).abs() < 1e-12 * period * period);
        }
    }

    #[test]
    fn h2_at_sideband() {
        let (wp, t): (f64, f64) = (1.5e8, 1e-6);
        let (sn, cs) = (wp * t).sin_cos();
        let expected = t * t + sn * sn / (wp * wp) - 2.0 * t * sn * cs / wp;
        let v = h_kernel(HKernel::H2, wp, wp, t);
        assert!(((v - expected) / expected).abs() < 1e-12);
        for f in [1.0 + 1e-8, 1.0 - 1e-8] {
            let near = h_kernel(HKernel::H2, wp * f, wp, t);
            assert!(((near - v) / v).abs() < 1e-6);
        }
    }

    #[test]
    fn h3_matches_single_mode_second_order_algebra() {
        // Re(I0* I2) with I2 = int_0^t sin^2(w t') e^{i d t'} dt', quadrature.
        let (wp, t) = (1.5e8, 1e-6);
        let gl = GaussLegendre::new(64);
        for d in [0.0, 0.37 * wp, wp, 2.0 * wp, -2.3 * wp] {
            let re = gl.integrate_composite(0.0, t, 200, |x| (wp * x).sin().powi(2) * (d * x).cos());
            let im = gl.integrate_composite(0.0, t, 200, |x| (wp * x).sin().powi(2) * (d * x).sin());
            let i0 = (
                gl.integrate_composite(0.0, t, 200, |x| (d * x).cos()),
                gl.integrate_composite(0.0, t, 200, |x| (d * x).sin()),
            );
            let re_cross = i0.0 * re + i0.1 * im;
            let h3 = h_kernel(HKernel::H3, d, wp, t);
            assert!((2.0 * re_cross - h3).abs() < 1e-9 * t * t, "d={d}: {} vs {h3}", 2.0 * re_cross);
        }
    }

    #[test]
    fn kernels_are_continuous_at_resonances() {
        let (wp, t) = (1.5e8, 1e-6);
        for which in [HKernel::H1, HKernel::H2, HKernel::H3] {
            for &d in &[0.0, wp, -wp, 2.0 * wp, -2.0 * wp] {
                let centre = h_kernel(which, d, wp, t);
                let probe = if d == 0.0 { 1e-10 * wp } else { 1e-10 * d.abs() };
                let vals = [centre, h_kernel(which, d + probe, wp, t), h_kernel(which, d - probe, wp, t)];
                let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
                let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-30);
                assert!((hi - lo) / scale <= 1e-6, "{which:?} at {d}: {vals:?}");
            }
        }
    }

    #[test]
    fn static_density_values() {
        let p = line_preset();
        let t = 1e-6;
        let b0 = bracket(BracketKind::B0Random, p.u0());
        assert!((spectrum_static(&p, 0.0, t) - t * t / (2.0 * PI) * b0).abs() < 1e-27);
        assert!(spectrum_static(&p, 2.0 * PI / t, t).abs() < 1e-30);
    }

    #[test]
    fn static_plate_has_no_dynamic_part() {
        let p = line_preset().with_amplitude(0.0).unwrap();
        for d in [-6e8, -1.5e8, 0.0, 3.3e7, 1.5e8] {
            for t in [1e-8, 1e-7, 1e-6] {
                assert_eq!(spectrum_dynamic(&p, d, t), 0.0);
            }
        }
        let s = spectrum_series(&p, -6e8, 6e8, 101, 1e-6).unwrap();
        assert!(s.p_dynamic.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn dynamic_density_is_even() {
        let p = line_preset();
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..1000 {
            let d: f64 = rng.gen_range(0.0..6e8);
            let (a, b) = (spectrum_dynamic(&p, d, 1e-6), spectrum_dynamic(&p, -d, 1e-6));
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-30));
        }
    }

    #[test]
    fn order_scaling_of_channels() {
        let p = line_preset();
        let half = p.with_amplitude(p.amplitude / 2.0).unwrap();
        for d in [0.0, 0.5e8, 1.5e8, 3e8] {
            let full = spectrum_dynamic_terms(&p, d, 1e-6);
            let h = spectrum_dynamic_terms(&half, d, 1e-6);
            assert!((h.first_order - full.first_order / 2.0).abs() <= 1e-14 * full.first_order.abs());
            assert!((h.sideband_square - full.sideband_square / 4.0).abs() <= 1e-14 * full.sideband_square.abs());
            assert!((h.second_order - full.second_order / 4.0).abs() <= 1e-14 * full.second_order.abs());
        }
    }

    #[test]
    fn sideband_square_channel_has_sign_of_b2() {
        let p = line_preset();
        let b2 = bracket(BracketKind::B2Spectrum, p.u0());
        for i in 0..2001 {
            let d = -6e8 + 6e5 * i as f64;
            let v = spectrum_dynamic_terms(&p, d, 1e-6).sideband_square;
            assert!(v * b2 >= 0.0);
            assert!(h_kernel(HKernel::H2, d, p.omega_p, 1e-6) >= 0.0);
        }
    }

    #[test]
    fn series_columns_are_consistent() {
        let p = line_preset();
        let s = spectrum_series(&p, -6e8, 6e8, 2001, 1e-6).unwrap();
        for i in 0..s.len() {
            assert_eq!(s.p_total[i], s.p_static[i] + s.p_dynamic[i]);
            assert!(s.p_static[i] >= 0.0);
            assert!(s.p_total[i].is_finite());
            let j = s.len() - 1 - i;
            assert!((s.p_total[i] - s.p_total[j]).abs() <= 1e-12 * s.p_total[i].abs());
        }
        assert!(spectrum_series(&p, 1.0, -1.0, 10, 1e-6).is_err());
    }

    #[test]
    fn central_height_regression() {
        let p = line_preset();
        let w = 4.0 * p.omega_p;
        let s = spectrum_series(&p, -w, w, 8001, 1e-6).unwrap();
        let mid = s.len() / 2;
        assert_eq!(s.detunings[mid], 0.0);
        let t = 1e-6;
        let u0 = p.u0();
        let ak0 = p.amplitude * p.k0();
        // direct evaluation of the three channels at zero detuning
        let expected = (t * t * bracket(BracketKind::B0Random, u0)
            + 0.1 * h_kernel(HKernel::H1, 0.0, p.omega_p, t) * bracket(BracketKind::B1RandomFirstOrder, u0)
            + (0.5 * ak0).powi(2) * h_kernel(HKernel::H2, 0.0, p.omega_p, t) * bracket(BracketKind::B2Spectrum, u0)
            + 0.5 * ak0 * ak0 * h_kernel(HKernel::H3, 0.0, p.omega_p, t) * bracket(BracketKind::B3Spectrum, u0))
            / (2.0 * PI);
        assert!(((s.p_total[mid] - expected) / expected).abs() < 1e-13);
        // frozen regression value
        assert!(((s.p_total[mid] - CENTRAL_HEIGHT) / CENTRAL_HEIGHT).abs() < 1e-9, "{:e}", s.p_total[mid]);
    }

    // independent high-precision evaluation of the angular and time integrals
    const CENTRAL_HEIGHT: f64 = 1.361_626_715_660_244e-13;

    #[test]
    fn surface_rows_match_series() {
        let p = PhysicalParams::time_surface_preset();
        let d = linspace(-6e9, 6e9, 301).unwrap();
        let times = [1e-9, 4e-9, 2e-8];
        let rows = spectrum_surface(&p, &d, &times).unwrap();
        assert_eq!(rows.len(), 3 * 301);
        for (k, &t) in times.iter().enumerate() {
            let s = spectrum_series(&p, -6e9, 6e9, 301, t).unwrap();
            for i in 0..301 {
                let r = rows[k * 301 + i];
                assert_eq!(r.t, t);
                assert_eq!(r.delta, s.detunings[i]);
                assert_eq!(r.p_total, s.p_total[i]);
            }
        }
        assert!(spectrum_surface(&p, &[], &times).is_err());
        assert!(spectrum_surface(&p, &d, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn static_surface_rows_follow_sinc_squared() {
        let p = PhysicalParams::time_surface_preset().with_amplitude(0.0).unwrap();
        let d = linspace(-6e9, 6e9, 101).unwrap();
        let rows = spectrum_surface(&p, &d, &[1e-9, 1e-8]).unwrap();
        let b0 = bracket(BracketKind::B0Random, p.u0());
        for r in rows {
            let s = sinc_kernel(r.delta, r.t);
            assert!((r.p_total - s * s * b0 / (2.0 * PI)).abs() <= 1e-15 * r.t * r.t);
        }
    }
}
