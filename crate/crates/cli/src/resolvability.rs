use oscmirror::PhysicalParams;
use serde::Serialize;

/// Whether the `+-omega_p` sidebands stand clear of the natural line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolvabilityReport {
    pub omega_p: f64,
    pub linewidth: f64,
    pub resolvable: bool,
    /// `omega_p / linewidth`.
    pub margin: f64,
}

/// `linewidth` defaults to the Einstein coefficient of `p`.
pub fn resolvability(p: &PhysicalParams, linewidth: Option<f64>) -> ResolvabilityReport {
    let linewidth = linewidth.unwrap_or(p.a21);
    let margin = p.omega_p / linewidth;
    ResolvabilityReport {
        omega_p: p.omega_p,
        linewidth,
        resolvable: margin > 1.0,
        margin,
    }
}
