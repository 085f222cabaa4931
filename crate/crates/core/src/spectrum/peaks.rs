use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::Serialize;

use super::SpectrumSeries;
use crate::error::{Error, Result};

/// Default relative prominence threshold of [`find_peaks`].
pub const DEFAULT_PROMINENCE: f64 = 0.02;

/// Upper envelope of a finite-time spectrum.
///
/// Each sample is replaced by the sample with the largest `p_total` inside a
/// centred window of width `4 pi / t` (two lobes of the finite-time sinc);
/// windows are truncated at the grid ends. All three columns are copied
/// from the winning sample, so `p_total = p_static + p_dynamic` still holds.
pub fn envelope(series: &SpectrumSeries) -> Result<SpectrumSeries> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let n = series.len();
    let span = series.detunings[n - 1] - series.detunings[0];
    let width = 4.0 * PI / series.t;
    if width.is_nan() || width > span {
        return Err(Error::InvalidGrid(format!(
            "envelope window {width:.6e} rad/s is wider than the grid span {span:.6e} rad/s"
        )));
    }
    let h = series.spacing();
    let half = ((0.5 * width / h) * (1.0 + 1e-12)).floor() as usize;

    let v = &series.p_total;
    let mut winner = vec![0usize; n];
    // monotone deque of candidate indices for the sliding maximum
    let mut dq: VecDeque<usize> = VecDeque::new();
    let mut next = 0usize;
    for (i, w) in winner.iter_mut().enumerate() {
        let hi = (i + half).min(n - 1);
        while next <= hi {
            while let Some(&back) = dq.back() {
                if v[back] <= v[next] {
                    dq.pop_back();
                } else {
                    break;
                }
            }
            dq.push_back(next);
            next += 1;
        }
        let lo = i.saturating_sub(half);
        while let Some(&front) = dq.front() {
            if front < lo {
                dq.pop_front();
            } else {
                break;
            }
        }
        *w = *dq.front().expect("window is never empty");
    }
    let pick = |col: &[f64]| winner.iter().map(|&j| col[j]).collect::<Vec<_>>();
    let p_static = pick(&series.p_static);
    let p_dynamic = pick(&series.p_dynamic);
    let p_total = pick(&series.p_total);
    let negative_samples = p_total.iter().filter(|x| **x < 0.0).count();
    Ok(SpectrumSeries {
        detunings: series.detunings.clone(),
        p_static,
        p_dynamic,
        p_total,
        t: series.t,
        params: series.params,
        negative_samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakClass {
    Central,
    PlusWp,
    MinusWp,
    #[serde(rename = "plus_2wp")]
    Plus2wp,
    #[serde(rename = "minus_2wp")]
    Minus2wp,
    Other,
}

impl PeakClass {
    const EXPECTED: [(PeakClass, f64); 5] = [
        (PeakClass::Central, 0.0),
        (PeakClass::PlusWp, 1.0),
        (PeakClass::MinusWp, -1.0),
        (PeakClass::Plus2wp, 2.0),
        (PeakClass::Minus2wp, -2.0),
    ];

    pub fn is_lateral(self) -> bool {
        !matches!(self, PeakClass::Central | PeakClass::Other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    /// Detuning of the peak, rad/s.
    pub offset: f64,
    pub height: f64,
    /// Topographic prominence, same unit as `height`.
    pub prominence: f64,
    /// Prominence relative to the peak height.
    pub prominence_rel: f64,
    /// Full width at half prominence, rad/s.
    pub fwhm: f64,
    pub class: PeakClass,
}

/// Height ratio of a symmetric pair of sidebands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricPair {
    pub plus: PeakClass,
    pub minus: PeakClass,
    pub height_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakReport {
    /// Sorted by offset.
    pub peaks: Vec<Peak>,
    pub pairs: Vec<SymmetricPair>,
    /// Classification tolerance `2 pi / t`, rad/s.
    pub tolerance: f64,
    /// Whether sidebands are separated by more than the tolerance windows.
    pub sidebands_resolved: bool,
}

impl PeakReport {
    pub fn get(&self, class: PeakClass) -> Option<&Peak> {
        self.peaks
            .iter()
            .filter(|p| p.class == class)
            .max_by(|a, b| a.prominence.total_cmp(&b.prominence))
    }

    pub fn has(&self, class: PeakClass) -> bool {
        self.get(class).is_some()
    }

    /// Relative prominence of a class, zero when absent.
    pub fn prominence_of(&self, class: PeakClass) -> f64 {
        self.get(class).map_or(0.0, |p| p.prominence_rel)
    }
}

/// Local maxima of an envelope whose relative prominence reaches
/// `prominence_rel`, classified against `0, +-omega_p, +-2 omega_p`.
///
/// The prominence of a peak is its height above the higher of the two
/// lowest points separating it from taller terrain (or the grid ends). It
/// is compared against the peak's own height. Only peaks with positive
/// height are considered.
pub fn find_peaks(env: &SpectrumSeries, prominence_rel: f64) -> Result<PeakReport> {
    if env.is_empty() {
        return Err(Error::EmptySeries);
    }
    let v = &env.p_total;
    let x = &env.detunings;
    let n = v.len();
    let omega_p = env.params.omega_p;
    let tolerance = 2.0 * PI / env.t;
    let sidebands_resolved = omega_p > 0.0 && tolerance <= 0.5 * omega_p;

    let mut peaks = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && v[j + 1] == v[i] {
            j += 1;
        }
        let interior = i > 0 && j + 1 < n;
        if interior && v[i - 1] < v[i] && v[j + 1] < v[i] && v[i] > 0.0 {
            let height = v[i];
            let left_base = base(v[..i].iter().rev(), height);
            let right_base = base(v[j + 1..].iter(), height);
            let prominence = height - left_base.max(right_base);
            let rel = prominence / height;
            if rel >= prominence_rel {
                let offset = 0.5 * (x[i] + x[j]);
                let level = height - 0.5 * prominence;
                let fwhm = crossing(x, v, j, level, true) - crossing(x, v, i, level, false);
                peaks.push(Peak {
                    offset,
                    height,
                    prominence,
                    prominence_rel: rel,
                    fwhm,
                    class: classify(offset, omega_p, tolerance, sidebands_resolved),
                });
            }
        }
        i = j + 1;
    }

    let mut report = PeakReport {
        peaks,
        pairs: Vec::new(),
        tolerance,
        sidebands_resolved,
    };
    for (plus, minus) in [(PeakClass::PlusWp, PeakClass::MinusWp), (PeakClass::Plus2wp, PeakClass::Minus2wp)] {
        if let (Some(a), Some(b)) = (report.get(plus), report.get(minus)) {
            let height_ratio = a.height / b.height;
            report.pairs.push(SymmetricPair { plus, minus, height_ratio });
        }
    }
    Ok(report)
}

// Lowest value met while walking away from a peak, stopping at the first
// sample strictly above it.
fn base<'a>(walk: impl Iterator<Item = &'a f64>, height: f64) -> f64 {
    let mut lowest = height;
    for &y in walk {
        if y > height {
            break;
        }
        lowest = lowest.min(y);
    }
    lowest
}

// Linearly interpolated position where the profile drops below `level`,
// walking right (`rightwards`) or left from index `from`.
fn crossing(x: &[f64], v: &[f64], from: usize, level: f64, rightwards: bool) -> f64 {
    let n = v.len();
    let mut k = from;
    loop {
        let next = if rightwards {
            if k + 1 >= n {
                return x[n - 1];
            }
            k + 1
        } else {
            if k == 0 {
                return x[0];
            }
            k - 1
        };
        if v[next] < level {
            let frac = (v[k] - level) / (v[k] - v[next]);
            return x[k] + frac * (x[next] - x[k]);
        }
        k = next;
    }
}

fn classify(offset: f64, omega_p: f64, tolerance: f64, resolved: bool) -> PeakClass {
    let mut best = (PeakClass::Other, f64::INFINITY);
    for (class, multiple) in PeakClass::EXPECTED {
        if class.is_lateral() && !resolved {
            continue;
        }
        let dist = (offset - multiple * omega_p).abs();
        if dist <= tolerance && dist < best.1 {
            best = (class, dist);
        }
    }
    best.0
}
